"""Riemann-Liouville and Caputo operators on uniformly sampled functions.

The fractional integral is computed with product-trapezoidal weights; the
Riemann-Liouville derivative of order ``alpha`` in (0, 1) is the ordinary
derivative of the integral of order ``1 - alpha``.  Caputo's derivative is
computed independently from cellwise slopes, so the two can be
cross-checked through ``D_C f = D_RL f - f(0) x**-alpha / Gamma(1 - alpha)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import Grid, build_weights, gamma

__all__ = [
    "FracOrder",
    "SampledFunction",
    "MonomialDerivativeRule",
    "IdentityResidual",
    "rl_integral",
    "rl_derivative",
    "caputo_derivative",
    "monomial_closed_form",
    "fractional_identity_check",
]


@dataclass(frozen=True)
class FracOrder:
    """Positive real order ``alpha`` and its ceiling."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or a <= 0:
            raise ValueError(f"fractional order must be > 0, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def ceil_alpha(self) -> int:
        return math.ceil(self.alpha)

    @property
    def kind(self) -> str:
        if self.alpha == self.ceil_alpha:
            return "integer"
        return "unit" if self.alpha < 1 else "general"


def _order(order) -> FracOrder:
    return order if isinstance(order, FracOrder) else FracOrder(order)


@dataclass(frozen=True)
class SampledFunction:
    """Values of a real function at the nodes of a uniform grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(
                f"need {self.grid.n} values for this grid, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("sampled values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, fn: Callable, grid: Grid) -> "SampledFunction":
        return cls(grid, np.broadcast_to(fn(grid.nodes), (grid.n,)))

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def left_value(self) -> float:
        return float(self.values[0])

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(self.grid, values)

    def __len__(self):
        return self.grid.n


def _check_unit(order: FracOrder, *, allow_one: bool) -> None:
    a = order.alpha
    if not (0.0 < a < 1.0 or (allow_one and a == 1.0)):
        rng = "(0, 1]" if allow_one else "(0, 1)"
        raise ValueError(f"order must lie in {rng}, got {a!r}")


def _cumulative_trapezoid(values, h):
    out = np.zeros_like(values)
    out[1:] = np.cumsum(0.5 * h * (values[1:] + values[:-1]))
    return out


def rl_integral(f: SampledFunction, order) -> SampledFunction:
    """Riemann-Liouville integral ``(1/Gamma(a)) int_0^x (x-t)**(a-1) f(t) dt``.

    Order 1 falls back to the cumulative trapezoid rule.
    """
    order = _order(order)
    _check_unit(order, allow_one=True)
    if order.alpha == 1.0:
        return f.with_values(_cumulative_trapezoid(f.values, f.grid.h))
    table = build_weights(f.grid, order.alpha)
    return f.with_values(table.apply(f.values) / gamma(order.alpha))


def _min_stencil(grid: Grid) -> None:
    if grid.n < 5:
        raise ValueError(f"derivatives need at least 5 grid nodes, got {grid.n}")


def rl_derivative(f: SampledFunction, order) -> SampledFunction:
    """Riemann-Liouville derivative ``d/dx I^(1-alpha) f`` for alpha in (0, 1).

    The outer derivative is the 3-point centred difference (3-point one-sided
    at the two ends).  Nodes in the boundary layer near ``x = 0`` inherit the
    ``x**-alpha`` behaviour of non-vanishing ``f(0)`` and are not accurate;
    see :meth:`Grid.interior`.
    """
    order = _order(order)
    _check_unit(order, allow_one=False)
    _min_stencil(f.grid)
    inner = rl_integral(f, 1.0 - order.alpha)
    return f.with_values(np.gradient(inner.values, f.grid.h, edge_order=2))


def _caputo_l1(f: SampledFunction, alpha: float) -> np.ndarray:
    # f' is taken constant on each cell (slope of the linear interpolant) and
    # integrated exactly against (x_i - t)**-alpha.
    n, h = f.grid.n, f.grid.h
    slopes = np.diff(f.values) / h
    k = np.arange(1, n, dtype=float)
    cell = h ** (1.0 - alpha) * (k ** (1.0 - alpha) - (k - 1.0) ** (1.0 - alpha))
    cell /= 1.0 - alpha
    out = np.zeros(n)
    for i in range(1, n):
        out[i] = cell[i - 1 :: -1] @ slopes[:i]
    return out / gamma(1.0 - alpha)


def caputo_derivative(
    f: SampledFunction, order, method: str = "product"
) -> SampledFunction:
    """Caputo derivative ``(1/Gamma(1-a)) int_0^x f'(t) (x-t)**-a dt``.

    Parameters
    ----------
    method : {"product", "relation"}
        ``"product"`` (default) integrates the cellwise slopes of ``f``
        exactly against the kernel.  ``"relation"`` returns
        ``rl_derivative(f - f(0))``, the identity linking both derivatives;
        it is exposed for cross-checking.
    """
    order = _order(order)
    _check_unit(order, allow_one=False)
    _min_stencil(f.grid)
    if method == "product":
        return f.with_values(_caputo_l1(f, order.alpha))
    if method == "relation":
        return rl_derivative(f.with_values(f.values - f.left_value), order)
    raise ValueError(f"unknown Caputo method {method!r}")


@dataclass(frozen=True)
class MonomialDerivativeRule:
    """Closed-form derivative of order ``order`` of ``x**m``.

    ``variant="lacroix"`` carries the gamma-ratio coefficient;
    ``variant="leibniz"`` is the coefficient-free ``x**(1 - order)`` rule,
    stated only for ``m = 1``.
    """

    variant: str
    m: float
    order: float

    def __post_init__(self):
        if self.variant not in ("lacroix", "leibniz"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if not (0.0 < self.order <= 1.0):
            raise ValueError(f"order must lie in (0, 1], got {self.order!r}")
        if self.m < 0:
            raise ValueError(f"exponent must be >= 0, got {self.m!r}")
        if self.variant == "leibniz" and self.m != 1:
            raise ValueError("the leibniz rule is defined only for m = 1")
        if self.variant == "lacroix" and self.m - self.order + 1 <= 0:
            raise ValueError("lacroix rule needs m - order + 1 > 0")

    @property
    def coefficient(self) -> float:
        if self.variant == "leibniz":
            return 1.0
        return gamma(self.m + 1) / gamma(self.m - self.order + 1)


def monomial_closed_form(rule: MonomialDerivativeRule, x: float) -> float:
    if not x > 0:
        raise ValueError(f"x must be > 0, got {x!r}")
    return rule.coefficient * x ** (rule.m - rule.order)


@dataclass(frozen=True)
class IdentityResidual:
    max: float
    rms: float


def fractional_identity_check(f: SampledFunction, order) -> IdentityResidual:
    """Residual of ``D^alpha I^alpha f - f`` over the interior nodes."""
    order = _order(order)
    back = rl_derivative(rl_integral(f, order), order)
    r = (back.values - f.values)[f.grid.interior()]
    return IdentityResidual(float(np.max(np.abs(r))), float(np.sqrt(np.mean(r**2))))
