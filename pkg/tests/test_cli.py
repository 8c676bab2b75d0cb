import json
import math

import numpy as np
import pytest

from abelfrac.cli import main


def parse_csv(text):
    meta, rows = {}, []
    lines = text.splitlines()
    body = [l for l in lines if not l.startswith("#")]
    for l in lines:
        if l.startswith("#"):
            k, v = l[1:].strip().split("=", 1)
            meta[k] = v
    header = body[0].split(",")
    for l in body[1:]:
        rows.append([float(v) if v not in ("", "None") else math.nan for v in l.split(",")])
    cols = {h: np.array([r[i] for r in rows]) for i, h in enumerate(header)}
    return meta, cols


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fracdiff_example(capsys):
    code, out, _ = run(capsys, "fracdiff", "--alpha", "0.5", "--fn", "x", "--grid-n", "513", "--x-max", "1")
    assert code == 0
    meta, cols = parse_csv(out)
    assert meta["alpha"] == "0.5" and meta["grid_n"] == "513"
    assert cols["f"][-1] == pytest.approx(2 / math.sqrt(math.pi), abs=1e-4)


def test_fracint_unit_order(capsys):
    code, out, _ = run(capsys, "fracint", "--alpha", "1", "--fn", "one")
    assert code == 0
    _, cols = parse_csv(out)
    assert cols["f"] == pytest.approx(cols["x"], abs=1e-15)


def test_caputo_of_constant(capsys):
    code, out, _ = run(capsys, "caputo", "--alpha", "0.5", "--fn", "one")
    assert code == 0
    _, cols = parse_csv(out)
    assert np.all(cols["f"] == 0.0)


def test_abel_forward_example(capsys):
    code, out, _ = run(capsys, "abel", "forward", "--n", "0.5", "--fn", "one")
    assert code == 0
    _, cols = parse_csv(out)
    assert cols["f"] == pytest.approx(2 * np.sqrt(cols["x"]), rel=1e-12, abs=1e-15)


def test_abel_invert_remarkable_example(capsys):
    code, out, _ = run(capsys, "abel", "invert-remarkable", "--n", "0.5", "--psi", "const:1")
    assert code == 0
    _, cols = parse_csv(out)
    assert set(cols) == {"x", "f", "s"}
    inner = cols["x"] > 0
    assert cols["s"][inner] / np.sqrt(cols["x"][inner]) == pytest.approx(2 / math.pi, rel=1e-6)


def test_round_trip_through_files(capsys, tmp_path):
    fwd = tmp_path / "psi.csv"
    assert main(["abel", "forward", "--n", "0.5", "--fn", "one", "--out", str(fwd)]) == 0
    for mode in ("invert-remarkable", "invert-fractional"):
        code, out, _ = run(capsys, "abel", mode, "--n", "0.5", "--input", str(fwd))
        assert code == 0
        _, cols = parse_csv(out)
        # cumulative of f = 1 is s = x
        assert np.max(np.abs(cols["s"] - cols["x"])) <= 1e-2


def test_output_accepted_by_fractional_commands(capsys, tmp_path):
    first = tmp_path / "a.csv"
    assert main(["fracint", "--alpha", "0.5", "--fn", "sinx", "--out", str(first)]) == 0
    code, out, _ = run(capsys, "fracdiff", "--alpha", "0.5", "--input", str(first))
    assert code == 0
    _, cols = parse_csv(out)
    x = cols["x"]
    inner = (x >= 0.05) & (x < x[-1])
    assert np.max(np.abs(cols["f"][inner] - np.sin(x[inner]))) <= 1e-2


def test_time_table_example(capsys):
    code, out, _ = run(capsys, "tautochrone", "time-table", "--curve", "cycloid:r=1", "--g", "1",
                       "--heights", "0.1,0.5,1.0,1.5,1.9")
    assert code == 0
    _, cols = parse_csv(out)
    assert len(cols["T"]) == 5
    assert cols["T"] == pytest.approx(math.pi, rel=1e-6)


def test_reconstruct_example(capsys):
    code, out, _ = run(capsys, "tautochrone", "reconstruct", "--T0", "3.14159265", "--g", "1")
    assert code == 0
    meta, cols = parse_csv(out)
    assert float(meta["radius"]) == pytest.approx(1.0, rel=1e-7)
    inner = cols["y"] > 0.05
    assert cols["s"][inner] == pytest.approx(2 * math.sqrt(2) * np.sqrt(cols["y"][inner]), rel=5e-3)


def test_prop26_example(capsys):
    code, out, _ = run(capsys, "tautochrone", "prop26", "--ystart", "1", "--ymid", "0.5")
    assert code == 0
    _, cols = parse_csv(out)
    assert cols["time_ratio"][0] == pytest.approx(1.0, abs=1e-9)
    assert cols["arc_ratio"][0] == pytest.approx(1.0, abs=1e-12)


def test_brachistochrone_defaults(capsys):
    code, out, _ = run(capsys, "tautochrone", "brachistochrone", "--g", "1")
    assert code == 0
    rows = [l.split(",") for l in out.splitlines() if not l.startswith("#")]
    times = {r[0]: float(r[1]) for r in rows[1:]}
    assert times["cycloid"] == pytest.approx(math.pi, rel=1e-9)
    assert times["chord"] == pytest.approx(math.sqrt(math.pi**2 + 4), rel=1e-9)


def test_simulate_cycloid_example(capsys):
    code, out, _ = run(capsys, "simulate", "--curve", "cycloid:r=1", "--g", "1", "--y0", "1", "--dt", "1e-4")
    assert code == 0
    meta, _ = parse_csv(out)
    assert float(meta["arrival_time"]) == pytest.approx(math.pi, abs=1e-5)
    assert float(meta["energy_drift"]) <= 1e-8


def test_simulate_line_example(capsys):
    code, out, _ = run(capsys, "simulate", "--curve", "line:h=1,L=1.4142", "--g", "1", "--y0", "1")
    assert code == 0
    meta, _ = parse_csv(out)
    assert float(meta["arrival_time"]) == pytest.approx(2.0, abs=1e-3)


def test_simulate_circle_sweep(capsys):
    code, out, _ = run(capsys, "simulate", "--curve", "circle:R=1", "--g", "1")
    assert code == 0
    _, cols = parse_csv(out)
    t = cols["arrival_time"]
    assert len(t) > 3 and np.all(np.diff(t) > 0)


def test_json_format(capsys):
    code, out, _ = run(capsys, "fracint", "--alpha", "0.5", "--fn", "one", "--grid-n", "9", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["alpha"] == 0.5
    x = np.array(doc["columns"]["x"])
    assert doc["columns"]["f"] == pytest.approx(2 * np.sqrt(x / math.pi), rel=1e-12)


def test_json_input_accepted(capsys, tmp_path):
    src = tmp_path / "one.json"
    assert main(["fracint", "--alpha", "1", "--fn", "one", "--grid-n", "17", "--format", "json", "--out", str(src)]) == 0
    code, out, _ = run(capsys, "fracdiff", "--alpha", "0.5", "--input", str(src))
    assert code == 0


def test_deterministic_output(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["abel", "invert-fractional", "--n", "0.25", "--psi", "sqrt:1", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_seventeen_digit_values(capsys):
    _, out, _ = run(capsys, "fracint", "--alpha", "0.5", "--fn", "one", "--grid-n", "5")
    _, cols = parse_csv(out)
    assert cols["f"][-1] == 2 / math.sqrt(math.pi) or abs(cols["f"][-1] - 2 / math.sqrt(math.pi)) < 1e-15


@pytest.mark.parametrize(
    "argv,code_name",
    [
        (["fracint", "--alpha", "-1", "--fn", "one"], "E_DOMAIN"),
        (["fracdiff", "--alpha", "1.5", "--fn", "one"], "E_DOMAIN"),
        (["fracint", "--alpha", "0.5", "--fn", "nope"], "E_ARGS"),
        (["fracint", "--alpha", "0.5", "--fn", "one", "--input", "f.csv"], "E_ARGS"),
        (["fracint", "--alpha", "0.5", "--fn", "one", "--grid-n", "3"], "E_DOMAIN"),
        (["abel", "forward", "--n", "1.2", "--fn", "one"], "E_DOMAIN"),
        (["abel", "invert-remarkable", "--psi", "cubic:1"], "E_ARGS"),
        (["tautochrone", "time-table", "--curve", "cycloid:r=1", "--heights", "3"], "E_DOMAIN"),
        (["tautochrone", "time-table", "--curve", "spiral:r=1"], "E_ARGS"),
        (["simulate", "--curve", "cycloid:r=1", "--y0", "1", "--dt", "0.5"], "E_DOMAIN"),
        (["bogus"], "E_ARGS"),
        (["fracint", "--alpha", "0.5", "--input", "/nonexistent/file.csv"], "E_INPUT"),
    ],
)
def test_validation_errors(capsys, argv, code_name):
    code, out, err = run(capsys, *argv)
    assert code == 2
    lines = err.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith(f"ERROR {code_name}: ")


def test_non_uniform_input_rejected(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x,f\n0,1\n0.1,1\n0.3,1\n0.4,1\n0.5,1\n")
    code, _, err = run(capsys, "fracint", "--alpha", "0.5", "--input", str(p))
    assert code == 2 and err.startswith("ERROR E_INPUT")


def test_missing_header_rejected(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("t,y\n0,1\n0.25,1\n0.5,1\n0.75,1\n1,1\n")
    code, _, err = run(capsys, "fracint", "--alpha", "0.5", "--input", str(p))
    assert code == 2 and err.startswith("ERROR E_INPUT")


def test_numerical_failure_exit_code(capsys):
    # the bead never reaches the vertex within the allotted time
    code, _, err = run(capsys, "simulate", "--curve", "cycloid:r=1", "--g", "1", "--y0", "1", "--max-time", "0.5")
    assert code == 3 and err.startswith("ERROR E_NUMERIC")


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") >= 12


def test_verify_detects_corrupted_weights(capsys):
    code, out, _ = run(capsys, "verify", "--quick", "--inject-fault", "weights")
    assert code == 1
    assert "FAIL" in out
