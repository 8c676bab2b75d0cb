"""Fractional integrals and derivatives on sampled functions, Abel's
integral equation, and the tautochrone built on top of them."""

from .abel import AbelKernel, AbelProblem, forward, invert_fractional, invert_remarkable, laplace_numeric
from .dynamics import SimConfig, SimResult, pendulum_period, simulate
from .fracops import (
    FracOrder,
    MonomialDerivativeRule,
    SampledFunction,
    caputo_derivative,
    fractional_identity_check,
    monomial_closed_form,
    rl_derivative,
    rl_integral,
)
from .quadrature import Grid, build_weights, gamma, gauss_legendre
from .tautochrone import (
    Curve,
    DescentProfile,
    brachistochrone_compare,
    cycloid,
    descent_time,
    free_fall_time,
    huygens_prop26_ratio,
    reconstruct_tautochrone,
)

__version__ = "0.1.0"
