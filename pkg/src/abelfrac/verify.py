"""End-to-end property checks behind ``abelfrac verify``.

Each ``criterion_*`` function returns a list of :class:`Check` records with
the measured residual and the tolerance it is held to.  Every expected
value comes from a closed form (monomial rules, harmonic motion, elliptic
integrals), never from the code path being checked.
"""

from __future__ import annotations

import contextlib
import math
import time
from dataclasses import dataclass
from unittest import mock

import numpy as np

from . import abel as _abel
from . import fracops as _fracops
from .abel import AbelProblem, LaplaceTail, forward, invert_fractional, invert_remarkable, laplace_numeric
from .dynamics import SimConfig, simulate
from .fracops import (
    MonomialDerivativeRule,
    SampledFunction,
    caputo_derivative,
    fractional_identity_check,
    monomial_closed_form,
    rl_derivative,
    rl_integral,
)
from .quadrature import Grid, SingularWeightTable, build_weights, gamma
from .tautochrone import (
    circle,
    cycloid,
    descent_time,
    free_fall_time,
    huygens_prop26_ratio,
    reconstruct_tautochrone,
)

__all__ = ["Check", "CRITERIA", "run_all", "inject_fault", "format_check"]

SQRT_PI = math.sqrt(math.pi)
TAUTO_HEIGHTS = (0.1, 0.5, 1.0, 1.5, 1.9)


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    value: float
    tol: float
    passed: bool
    sense: str = "<="


def _le(criterion, name, value, tol):
    value = float(value)
    return Check(criterion, name, value, tol, bool(value <= tol), "<=")


def _ge(criterion, name, value, tol):
    value = float(value)
    return Check(criterion, name, value, tol, bool(value >= tol), ">=")


def _within(criterion, name, value, lo, hi):
    value = float(value)
    return Check(criterion, name, value, (lo, hi), bool(lo <= value <= hi), "in")


def format_check(c: Check) -> str:
    status = "PASS" if c.passed else "FAIL"
    if c.sense == "in":
        bound = f"in [{c.tol[0]:g}, {c.tol[1]:g}]"
    else:
        bound = f"{c.sense} {c.tol:.1e}"
    return f"{status} [{c.criterion:2d}] {c.name}: {c.value:.3e} {bound}"


def _grid_n(quick):
    return 257 if quick else 513


def _sample(fn, grid):
    return SampledFunction.from_callable(fn, grid)


def _one(x):
    return np.ones_like(x)


def _ident(x):
    return x


def criterion_1(quick=False):
    """Lacroix values of the half derivative of x and of 1."""
    grid = Grid(1.0, _grid_n(quick))
    dx = rl_derivative(_sample(_ident, grid), 0.5).values[-1]
    d1 = rl_derivative(_sample(_one, grid), 0.5).values[-1]
    out = [
        _le(1, "D^1/2 x at x=1 vs 2/sqrt(pi) (rel)", abs(dx / (2 / SQRT_PI) - 1), 5e-3),
        _le(1, "D^1/2 1 at x=1 vs 1/sqrt(pi) (rel)", abs(d1 / (1 / SQRT_PI) - 1), 5e-3),
    ]
    lac_x = monomial_closed_form(MonomialDerivativeRule("lacroix", 1, 0.5), 1.0)
    lac_1 = monomial_closed_form(MonomialDerivativeRule("lacroix", 0, 0.5), 1.0)
    err = max(abs(lac_x - 2 / SQRT_PI), abs(lac_1 - 1 / SQRT_PI))
    out.append(_le(1, "closed-form Lacroix coefficients (abs)", err, 1e-12))
    return out


def criterion_2(quick=False):
    """Left inverse D^a I^a f = f."""
    out = []
    sizes = (65, 129, 257) if quick else (129, 257, 513)
    for name, fn in (("x", _ident), ("sin x", np.sin)):
        for alpha in (0.3, 0.5, 0.7):
            res = [
                fractional_identity_check(_sample(fn, Grid(1.0, n)), alpha).max
                for n in sizes
            ]
            out.append(_le(2, f"identity f={name} alpha={alpha} n={sizes[-1]}", res[-1], 5e-3))
            ratio = max(res[1] / res[0], res[2] / res[1])
            out.append(_le(2, f"identity f={name} alpha={alpha} residual ratio under refinement", ratio, 1.0 - 1e-12))
    return out


def criterion_3(quick=False):
    """Semigroup I^a I^b = I^(a+b)."""
    grid = Grid(1.0, _grid_n(quick))
    mask = grid.interior()
    out = []
    for a, b in ((0.3, 0.3), (0.25, 0.5)):
        for name, fn in (("x", _ident), ("sin x", np.sin)):
            f = _sample(fn, grid)
            lhs = rl_integral(rl_integral(f, b), a).values
            rhs = rl_integral(f, a + b).values
            out.append(_le(3, f"semigroup ({a},{b}) f={name}", np.max(np.abs(lhs - rhs)[mask]), 5e-3))
    return out


def criterion_4(quick=False):
    """Caputo and Riemann-Liouville derivatives differ by f(0) x^-a / Gamma(1-a)."""
    grid = Grid(1.0, _grid_n(quick))
    mask = grid.interior()
    x = grid.nodes
    f = _sample(lambda t: 1 + t**2, grid)
    with np.errstate(divide="ignore"):
        jump = f.left_value * np.where(x > 0, x, np.inf) ** -0.5 / gamma(0.5)
    diff = caputo_derivative(f, 0.5).values + jump - rl_derivative(f, 0.5).values
    lin = _sample(_ident, grid)
    exact = caputo_derivative(lin, 0.5, method="relation").values - rl_derivative(lin, 0.5).values
    return [
        _le(4, "Caputo + f(0) x^-a/Gamma(1-a) - RL, f=1+x^2", np.max(np.abs(diff[mask])), 5e-3),
        _le(4, "Caputo(relation) - RL, f=x (all nodes)", np.max(np.abs(exact)), 1e-10),
    ]


def _rel(a, b, mask):
    return float(np.max(np.abs(a[mask] / b[mask] - 1.0)))


def criterion_5(quick=False):
    """Abel inversion pair and round trips."""
    # the n = 0.75 round trip needs the full grid for its 1% bound
    grid = Grid(1.0, 513)
    mask = grid.interior()
    x = grid.nodes
    k = 2.0
    psi = SampledFunction(grid, np.full(grid.n, k))
    problem = AbelProblem(0.5, psi)
    exact = k / (math.pi * np.sqrt(np.where(x > 0, x, 1.0)))
    f_rem = invert_remarkable(problem, output="density").values
    f_frac = invert_fractional(problem).values
    out = [
        _le(5, "psi=k: remarkable inverter vs k/(pi sqrt x)", _rel(f_rem, exact, mask), 1e-2),
        _le(5, "psi=k: fractional inverter vs k/(pi sqrt x)", _rel(f_frac, exact, mask), 1e-2),
        _le(5, "psi=k: inverter agreement", _rel(f_rem, f_frac, mask), 2e-2),
    ]
    for n in (0.25, 0.5, 0.75):
        worst_a = 0.0
        for fn in (_one, _ident, lambda t: 1 + t**2):
            f = _sample(fn, grid)
            back = invert_remarkable(AbelProblem(n, forward(f, n)), output="density")
            worst_a = max(worst_a, _rel(back.values, f.values, mask))
        worst_b = 0.0
        for fn in (_one, lambda t: 2 * np.sqrt(t), _ident):
            p = _sample(fn, grid)
            s = invert_fractional(AbelProblem(n, p), output="cumulative")
            worst_b = max(worst_b, _rel(forward(s, n, cumulative=True).values, p.values, mask))
        out.append(_le(5, f"round trip forward->remarkable n={n}", worst_a, 1e-2))
        out.append(_le(5, f"round trip fractional->forward n={n}", worst_b, 1e-2))
    return out


def criterion_6(quick=False):
    """Tautochronism by quadrature and by simulation."""
    c = cycloid(1.0, 1.0)
    quad = [descent_time(c, y) for y in TAUTO_HEIGHTS]
    dt = 1e-3 if quick else 1e-4
    sims = [simulate(SimConfig(c, y, dt)).arrival_time for y in TAUTO_HEIGHTS]
    ring = circle(1.0, 1.0)
    rings = [simulate(SimConfig(ring, y, 1e-3)).arrival_time for y in TAUTO_HEIGHTS]
    return [
        _le(6, "cycloid quadrature |T - pi|/pi", max(abs(t - math.pi) for t in quad) / math.pi, 1e-6),
        _le(6, "cycloid simulation |T - pi|", max(abs(t - math.pi) for t in sims), 1e-5),
        _le(6, "cycloid simulated spread (max-min)/mean", np.ptp(sims) / np.mean(sims), 1e-4),
        _ge(6, "circle simulated spread (max-min)/mean", np.ptp(rings) / np.mean(rings), 1e-2),
    ]


def criterion_7(quick=False):
    ratio = descent_time(cycloid(1.0, 1.0), 2.0) / free_fall_time(2.0, 1.0)
    return [_le(7, "T_cycloid / T_free_fall - pi/2", abs(ratio - math.pi / 2), 1e-6)]


def criterion_8(quick=False):
    c = cycloid(1.0, 1.0)
    worst = 0.0
    for y_start in np.linspace(0.2, 2.0, 10):
        for frac in np.linspace(0.05, 0.95, 10):
            tr, ar = huygens_prop26_ratio(c, y_start, frac * y_start)
            worst = max(worst, abs(tr - ar))
    return [_le(8, "Prop XXVI |time ratio - arc ratio| (10x10)", worst, 1e-4)]


def criterion_9(quick=False):
    rec = reconstruct_tautochrone(math.pi, 1.0, grid_n=_grid_n(quick))
    y = rec.s.x
    mask = rec.s.grid.interior()
    target = 2.0 * math.sqrt(2.0) * np.sqrt(y)
    heights = (0.1, 0.5, 1.0, 1.5, 1.9)
    quad = max(abs(rec.curve.descent_time(h) / math.pi - 1) for h in heights)
    dt = 1e-3
    sims = max(
        abs(simulate(SimConfig(rec.curve, h, dt)).arrival_time / math.pi - 1)
        for h in heights
    )
    return [
        _le(9, "reconstructed s(y) vs 2 sqrt(2) sqrt(y) (rel)", _rel(rec.s.values, target, mask), 5e-3),
        _le(9, "matched radius vs 1 (rel)", abs(rec.radius - 1.0), 5e-3),
        _le(9, "descent time on reconstruction vs T0 (rel)", quad, 5e-3),
        _le(9, "simulated descent on reconstruction vs T0 (rel)", sims, 5e-3),
    ]


def criterion_10(quick=False):
    k = 2.0
    grid = Grid(8.0, 513 if quick else 1025)
    f = invert_fractional(AbelProblem(0.5, SampledFunction(grid, np.full(grid.n, k))))
    cut = float(grid.nodes[grid.interior()][0])
    tail = LaplaceTail(near_power=-0.5, near_cut=cut, far_power=-0.5)
    c1 = k / SQRT_PI
    worst = max(
        abs(laplace_numeric(f, s, tail) / (c1 / math.sqrt(s)) - 1) for s in (1.0, 2.0, 4.0)
    )
    return [_le(10, "Laplace of recovered density vs c1/sqrt(s) (rel)", worst, 1e-2)]


def criterion_11(quick=False):
    c = cycloid(1.0, 1.0)
    drift = simulate(SimConfig(c, 1.0, 1e-4)).energy_drift
    errs = [abs(simulate(SimConfig(c, 1.0, dt)).arrival_time - math.pi) for dt in (0.0099, 0.00495)]
    return [
        _le(11, "energy drift per descent (dt=1e-4)", drift, 1e-8),
        _within(11, "RK4 arrival error ratio on dt halving", errs[0] / errs[1], 12.0, 20.0),
    ]


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run_all(quick: bool = False, budget: float = 60.0) -> list[Check]:
    """Run criteria 1-11 and append the wall-time check."""
    start = time.perf_counter()
    checks = []
    for fn in CRITERIA.values():
        checks.extend(fn(quick))
    elapsed = time.perf_counter() - start
    checks.append(_le(12, "wall time of criteria 1-11 (s)", elapsed, budget))
    return checks


@contextlib.contextmanager
def inject_fault(kind: str = "weights", scale: float = 1.01):
    """Corrupt a numerical building block for the duration of the block."""
    if kind != "weights":
        raise ValueError(f"unknown fault {kind!r}")

    def corrupted(grid, alpha):
        table = build_weights(grid, alpha)
        return SingularWeightTable(grid, alpha, table.weights * scale)

    with mock.patch.object(_fracops, "build_weights", corrupted), mock.patch.object(
        _abel, "build_weights", corrupted
    ):
        yield
