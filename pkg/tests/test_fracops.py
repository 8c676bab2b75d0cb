import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from abelfrac.fracops import (
    FracOrder,
    MonomialDerivativeRule,
    SampledFunction,
    caputo_derivative,
    fractional_identity_check,
    monomial_closed_form,
    rl_derivative,
    rl_integral,
)
from abelfrac.quadrature import Grid

SQRT_PI = math.sqrt(math.pi)


def brute_rl_integral(fn, alpha, x):
    """Adaptive quadrature with the algebraic end weight, independent of the
    product rule."""
    val, _ = integrate.quad(fn, 0.0, x, weight="alg", wvar=(0.0, alpha - 1.0), epsabs=1e-13)
    return val / math.gamma(alpha)


def test_frac_order():
    assert FracOrder(0.5).ceil_alpha == 1
    assert FracOrder(1.0).kind == "integer"
    assert FracOrder(1.7).ceil_alpha == 2
    assert FracOrder(1.7).kind == "general"
    for bad in (0.0, -1.0, math.nan):
        with pytest.raises(ValueError):
            FracOrder(bad)


def test_sampled_function_validation():
    g = Grid(1.0, 5)
    with pytest.raises(ValueError):
        SampledFunction(g, np.ones(4))
    with pytest.raises(ValueError):
        SampledFunction(g, [0, 1, np.nan, 2, 3])
    f = SampledFunction(g, [3, 1, 1, 1, 1])
    assert f.left_value == 3.0
    with pytest.raises(ValueError):
        f.values[0] = 1.0


def test_rl_integral_of_one(grid513, sample):
    out = rl_integral(sample(np.ones_like, grid513), 0.5)
    assert out.values[0] == 0.0
    assert out.values[-1] == pytest.approx(2 / SQRT_PI, rel=1e-13)


def test_rl_integral_order_one_is_ordinary_integral(sample):
    g = Grid(3.0, 31)
    out = rl_integral(sample(np.ones_like, g), 1.0)
    assert out.values == pytest.approx(g.nodes, abs=1e-14)


def test_rl_integral_of_x_matches_brute_force(grid513, sample):
    expected = brute_rl_integral(lambda t: t, 0.5, 1.0)
    assert expected == pytest.approx(4 / (3 * SQRT_PI), rel=1e-10)
    out = rl_integral(sample(lambda x: x, grid513), 0.5)
    assert out.values[-1] == pytest.approx(expected, rel=1e-12)


def test_rl_integral_of_sine_matches_brute_force(sample):
    g = Grid(2.0, 513)
    out = rl_integral(sample(np.sin, g), 0.3)
    for i in (100, 300, 512):
        assert out.values[i] == pytest.approx(brute_rl_integral(np.sin, 0.3, g.nodes[i]), abs=2e-6)


@pytest.mark.parametrize("alpha", [0.0, 1.2, -0.5])
def test_rl_integral_rejects_order(alpha, grid513, sample):
    with pytest.raises(ValueError):
        rl_integral(sample(np.ones_like, grid513), alpha)


def test_rl_derivative_lacroix_values(grid513, sample):
    dx = rl_derivative(sample(lambda x: x, grid513), 0.5)
    d1 = rl_derivative(sample(np.ones_like, grid513), 0.5)
    assert dx.values[-1] == pytest.approx(2 / SQRT_PI, rel=5e-3)
    assert d1.values[-1] == pytest.approx(1 / SQRT_PI, rel=5e-3)


def test_rl_derivative_of_one_at_four(sample):
    g = Grid(4.0, 513)
    d1 = rl_derivative(sample(np.ones_like, g), 0.5)
    assert d1.values[-1] == pytest.approx(1 / math.sqrt(4 * math.pi), rel=5e-3)
    mask = g.interior()
    x = g.nodes[mask]
    assert np.max(np.abs(d1.values[mask] * np.sqrt(math.pi * x) - 1)) <= 5e-3


def test_rl_derivative_needs_room(sample):
    with pytest.raises(ValueError):
        rl_derivative(sample(np.ones_like, Grid(1.0, 4)), 0.5)
    with pytest.raises(ValueError):
        rl_derivative(sample(np.ones_like, Grid(1.0, 9)), 1.0)


def test_caputo_annihilates_constants(grid513, sample):
    for c in (0.0, 1.0, -3.5):
        for alpha in (0.2, 0.5, 0.9):
            out = caputo_derivative(sample(lambda x: np.full_like(x, c), grid513), alpha)
            assert np.all(out.values == 0.0)


def test_caputo_equals_rl_when_f0_vanishes(grid513, sample):
    f = sample(lambda x: x, grid513)
    mask = grid513.interior()
    cap = caputo_derivative(f, 0.5).values
    rl = rl_derivative(f, 0.5).values
    assert np.max(np.abs(cap - rl)[mask]) <= 1e-4
    relation = caputo_derivative(f, 0.5, method="relation").values
    assert np.max(np.abs(relation - rl)) <= 1e-10


def test_caputo_of_x2(grid513, sample):
    out = caputo_derivative(sample(lambda x: x**2, grid513), 0.5)
    assert out.values[-1] == pytest.approx(8 / (3 * SQRT_PI), rel=1e-3)


def test_caputo_unknown_method(grid513, sample):
    with pytest.raises(ValueError):
        caputo_derivative(sample(np.ones_like, grid513), 0.5, method="gl")


def test_monomial_closed_forms():
    assert monomial_closed_form(MonomialDerivativeRule("lacroix", 1, 0.5), 1.0) == pytest.approx(
        2 / SQRT_PI, abs=1e-15
    )
    assert monomial_closed_form(MonomialDerivativeRule("lacroix", 0, 0.5), 1.0) == pytest.approx(
        1 / SQRT_PI, abs=1e-15
    )
    lei = monomial_closed_form(MonomialDerivativeRule("leibniz", 1, 0.5), 1.0)
    assert lei == 1.0
    lac = monomial_closed_form(MonomialDerivativeRule("lacroix", 1, 0.5), 1.0)
    assert lac / lei == pytest.approx(math.gamma(2) / math.gamma(1.5), rel=1e-14)
    # integer order reproduces d/dx x^2 = 2x
    assert monomial_closed_form(MonomialDerivativeRule("lacroix", 2, 1.0), 3.0) == pytest.approx(6.0)


@pytest.mark.parametrize(
    "args", [("leibniz", 2, 0.5), ("lacroix", -1, 0.5), ("other", 1, 0.5), ("lacroix", 1, 1.5)]
)
def test_monomial_rule_domain(args):
    with pytest.raises(ValueError):
        MonomialDerivativeRule(*args)


def test_monomial_x_must_be_positive():
    with pytest.raises(ValueError):
        monomial_closed_form(MonomialDerivativeRule("lacroix", 1, 0.5), 0.0)


def test_identity_check_examples(grid513, sample):
    assert fractional_identity_check(sample(lambda x: x, grid513), 0.5).max <= 5e-3
    zero = fractional_identity_check(sample(np.zeros_like, grid513), 0.5)
    assert zero.max == 0.0 and zero.rms == 0.0
    assert fractional_identity_check(sample(np.sin, grid513), 0.3).rms <= 5e-3


@settings(max_examples=25, deadline=None)
@given(
    a=st.floats(-10, 10),
    b=st.floats(-10, 10),
    alpha=st.floats(0.05, 0.95),
    seed=st.integers(0, 2**31 - 1),
)
def test_linearity(a, b, alpha, seed):
    g = Grid(1.0, 33)
    rng = np.random.default_rng(seed)
    f = SampledFunction(g, rng.normal(size=g.n))
    h = SampledFunction(g, rng.normal(size=g.n))
    combo = SampledFunction(g, a * f.values + b * h.values)
    for op in (rl_integral, rl_derivative, caputo_derivative):
        lhs = op(combo, alpha).values
        rhs = a * op(f, alpha).values + b * op(h, alpha).values
        scale = 1.0 + np.max(np.abs(rhs))
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * scale


@pytest.mark.parametrize("n", [129, 257, 513])
def test_semigroup_converges(n, sample):
    g = Grid(1.0, n)
    f = sample(lambda x: x, g)
    lhs = rl_integral(rl_integral(f, 0.3), 0.3).values
    rhs = rl_integral(f, 0.6).values
    err = np.max(np.abs(lhs - rhs)[g.interior()])
    assert err <= 5e-3
    # exact value of I^0.6 x for reference: x^1.6 / Gamma(2.6)
    assert rhs[-1] == pytest.approx(1 / math.gamma(2.6), rel=1e-5)


def test_step_down(grid513, sample):
    f = sample(np.cos, grid513)
    # d/dx I^(a+1) f = I^a f; I^(a+1) = I^1 I^a by the semigroup law
    inner = rl_integral(f, 0.4)
    raised = rl_integral(inner, 1.0)
    lowered = np.gradient(raised.values, grid513.h, edge_order=2)
    mask = grid513.interior()
    assert np.max(np.abs(lowered - inner.values)[mask]) <= 5e-3


def test_caputo_rl_relation(grid513, sample):
    f = sample(lambda x: 1 + x**2, grid513)
    x = grid513.nodes
    mask = grid513.interior()
    jump = np.zeros_like(x)
    jump[1:] = x[1:] ** -0.5 / math.gamma(0.5)
    diff = caputo_derivative(f, 0.5).values + jump - rl_derivative(f, 0.5).values
    assert np.max(np.abs(diff[mask])) <= 5e-3


@pytest.mark.parametrize("m", [1, 2, 3])
def test_monomial_agreement_order(m, sample):
    alpha = 0.5
    rule = MonomialDerivativeRule("lacroix", m, alpha)
    sizes = np.array([65, 129, 257, 513])
    errs = []
    for n in sizes:
        g = Grid(1.0, n)
        mask = g.interior()
        d = rl_derivative(sample(lambda x: x**m, g), alpha).values
        exact = np.array([monomial_closed_form(rule, v) for v in g.nodes[mask]])
        errs.append(np.max(np.abs(d[mask] - exact)))
    slope = np.polyfit(np.log(1.0 / (sizes - 1)), np.log(errs), 1)[0]
    assert slope >= 1.5
