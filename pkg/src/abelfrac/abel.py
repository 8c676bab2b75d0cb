"""Abel integral equation of the first kind,

    psi(a) = int_0^a f(x) (a - x)**-n dx,     0 < n < 1,

with a forward evaluator and two independent inverters: the closed-form
"remarkable theorem" for the cumulative ``s(x) = int_0^x f`` and the
fractional-derivative route through :mod:`abelfrac.fracops`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

from .fracops import SampledFunction, rl_integral
from .quadrature import Grid, build_weights, composite_gauss_legendre, gamma

__all__ = [
    "AbelKernel",
    "AbelProblem",
    "LaplaceTail",
    "TailDominanceWarning",
    "forward",
    "invert_remarkable",
    "invert_fractional",
    "laplace_numeric",
]


@dataclass(frozen=True)
class AbelKernel:
    """Kernel ``(a - x)**-n``; ``gamma_factor`` is ``1 / Gamma(1 - n)``."""

    n: float

    def __post_init__(self):
        n = float(self.n)
        if not (0.0 < n < 1.0):
            raise ValueError(f"Abel exponent n must lie in (0, 1), got {self.n!r}")
        object.__setattr__(self, "n", n)

    @property
    def gamma_factor(self) -> float:
        return 1.0 / gamma(1.0 - self.n)


def _kernel(kernel) -> AbelKernel:
    return kernel if isinstance(kernel, AbelKernel) else AbelKernel(kernel)


@dataclass(frozen=True)
class AbelProblem:
    """Right-hand side ``psi`` sampled on a grid, paired with its kernel."""

    kernel: AbelKernel
    psi: SampledFunction

    def __post_init__(self):
        object.__setattr__(self, "kernel", _kernel(self.kernel))

    @property
    def grid(self) -> Grid:
        return self.psi.grid


def forward(f: SampledFunction, kernel, cumulative: bool = False) -> SampledFunction:
    """Evaluate ``psi(a_i)`` at every node.

    By default ``f`` is the density and is integrated as a piecewise-linear
    function.  With ``cumulative=True`` the input is ``s(x)`` and the
    Stieltjes form ``int ds / (a - x)**n`` is used with ``s`` piecewise
    linear; this stays accurate when the density blows up at ``x = 0``.
    """
    kernel = _kernel(kernel)
    grid = f.grid
    if not cumulative:
        table = build_weights(grid, 1.0 - kernel.n)
        return f.with_values(table.apply(f.values))
    # each cell carries the constant slope (s_{j+1} - s_j)/h
    beta = 1.0 - kernel.n
    h = grid.h
    slopes = np.diff(f.values) / h
    k = np.arange(1, grid.n, dtype=float)
    cell = h**beta * (k**beta - (k - 1.0) ** beta) / beta
    out = np.zeros(grid.n)
    for i in range(1, grid.n):
        out[i] = cell[i - 1 :: -1] @ slopes[:i]
    return f.with_values(out)


def _differentiate(s: SampledFunction) -> SampledFunction:
    return s.with_values(np.gradient(s.values, s.grid.h, edge_order=2))


_GRADING = 2.0 ** -np.arange(16, 0, -1)


def _remarkable_cumulative(psi: SampledFunction, n: float, points: int) -> np.ndarray:
    grid = psi.grid
    x = grid.nodes
    xs, ps = x, psi.values
    s = np.zeros(grid.n)
    gl_x, gl_w = np.polynomial.legendre.leggauss(points)
    for i in range(1, grid.n):
        # t = 1 - u**(1/n) turns (1-t)**(n-1) dt into du/n.  Kinks of the
        # interpolated psi sit at t = j/i; panels in u are aligned with them.
        tj = np.arange(i + 1) / i
        ub = np.sort((1.0 - tj) ** n)
        # psi(x t) ~ A + B u**(1/n) near u = 0 is not smooth unless 1/n is
        # an integer; grade the panel that touches it geometrically
        ub = np.concatenate(([0.0], ub[1] * _GRADING, ub[1:]))
        half = 0.5 * np.diff(ub)[:, None]
        mid = 0.5 * (ub[1:] + ub[:-1])[:, None]
        u = (mid + half * gl_x).ravel()
        w = (half * gl_w).ravel()
        t = 1.0 - u ** (1.0 / n)
        integral = w @ np.interp(x[i] * t, xs, ps) / n
        s[i] = math.sin(n * math.pi) / math.pi * x[i] ** n * integral
    return s


def invert_remarkable(
    problem: AbelProblem, output: str = "cumulative", points: int = 8
) -> SampledFunction:
    """Invert with ``s(x) = sin(n pi)/pi x**n int_0^1 psi(xt) (1-t)**(n-1) dt``.

    ``psi(xt)`` is linearly interpolated between nodes.  The endpoint
    singularity at ``t = 1`` is removed by ``t = 1 - u**(1/n)`` and the
    remaining smooth integral is done with Gauss-Legendre panels.

    Parameters
    ----------
    output : {"cumulative", "density"}
        ``"cumulative"`` returns ``s`` (continuous, ``s(0) = 0``);
        ``"density"`` returns its centred-difference derivative ``f = s'``,
        accurate on interior nodes only.
    """
    n = problem.kernel.n
    s = problem.psi.with_values(_remarkable_cumulative(problem.psi, n, points))
    if output == "cumulative":
        return s
    if output == "density":
        return _differentiate(s)
    raise ValueError(f"unknown output {output!r}")


def invert_fractional(problem: AbelProblem, output: str = "density") -> SampledFunction:
    """Invert by cancelling the fractional integral.

    The equation reads ``psi = Gamma(1-n) I^(1-n) f``, so
    ``f = D^(1-n) psi / Gamma(1-n)`` and the cumulative solution is
    ``s = I^n psi / Gamma(1-n)``.  The density is the centred difference of
    ``s``, i.e. exactly the Riemann-Liouville derivative of
    :func:`abelfrac.fracops.rl_derivative`.
    """
    kernel = problem.kernel
    s = rl_integral(problem.psi, kernel.n)
    s = s.with_values(s.values * kernel.gamma_factor)
    if output == "cumulative":
        return s
    if output == "density":
        if s.grid.n < 5:
            raise ValueError(f"derivatives need at least 5 grid nodes, got {s.grid.n}")
        return _differentiate(s)
    raise ValueError(f"unknown output {output!r}")


class TailDominanceWarning(UserWarning):
    """The analytic tail carries more than 1% of the transform."""


@dataclass(frozen=True)
class LaplaceTail:
    """Power-law models ``c * t**p`` used outside the sampled window.

    ``near_power`` describes ``f`` on ``[0, near_cut]`` and ``far_power``
    beyond the last node.  Each coefficient is matched to the samples at the
    cut.  ``None`` declares that side negligible (the contribution is zero).
    """

    near_power: float | None = None
    near_cut: float = 0.0
    far_power: float | None = 0.0

    def __post_init__(self):
        for p in (self.near_power, self.far_power):
            if p is not None and p <= -1.0:
                raise ValueError("power-law end models need p > -1")
        if self.near_cut < 0:
            raise ValueError("near_cut must be >= 0")


def _power_laplace(c, p, s, lo, hi):
    """``int_lo^hi c t**p e^{-st} dt`` via the regularized incomplete gamma."""
    a = p + 1.0
    scale = c * special.gamma(a) / s**a
    upper = 1.0 if math.isinf(hi) else special.gammainc(a, s * hi)
    return scale * (upper - special.gammainc(a, s * lo))


def laplace_numeric(
    f: SampledFunction, s: float, tail: LaplaceTail | None = None, points: int = 4
) -> float:
    """Laplace transform ``int_0^inf e^{-st} f(t) dt`` of a sampled function.

    The sampled window (from ``tail.near_cut`` to the last node) is
    integrated with Gauss-Legendre panels on the piecewise-linear
    interpolant; both ends are added analytically from ``tail``.  Emits
    :class:`TailDominanceWarning` when the tail beyond the last node exceeds
    1% of the panel sum, i.e. when the window is too short for ``s``.
    """
    if not s > 0:
        raise ValueError(f"s must be > 0, got {s!r}")
    tail = tail or LaplaceTail()
    grid = f.grid
    x, v = grid.nodes, f.values
    lo = tail.near_cut
    if not (0.0 <= lo < grid.x_max):
        raise ValueError("near_cut must lie inside the grid")
    breaks = np.concatenate(([lo], x[x > lo]))
    t, w = composite_gauss_legendre(breaks, points)
    panel = float(w @ (np.exp(-s * t) * np.interp(t, x, v)))

    near = far = 0.0
    if tail.near_power is not None and lo > 0:
        c = float(np.interp(lo, x, v)) / lo**tail.near_power
        near = _power_laplace(c, tail.near_power, s, 0.0, lo)
    if tail.far_power is not None:
        c = v[-1] / grid.x_max**tail.far_power
        far = _power_laplace(c, tail.far_power, s, grid.x_max, math.inf)
    if panel != 0.0 and abs(far) > 0.01 * abs(panel):
        warnings.warn(
            f"tail beyond x_max ({far:.3g}) exceeds 1% of panel sum {panel:.3g}",
            TailDominanceWarning,
            stacklevel=2,
        )
    return panel + near + far
