"""Descent curves and descent times under gravity.

Heights ``y`` are measured upward from the lowest point (the vertex) of the
curve, and a bead released from rest at height ``y0`` needs

    T(y0) = int_0^{y0} (ds/dy) / sqrt(2 g (y0 - y)) dy

to reach the vertex.  Every quadrature here first removes the inverse
square-root singularity at the release point by a ``sin**2`` substitution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator
from scipy.optimize import brentq

from .abel import AbelProblem, invert_remarkable
from .fracops import SampledFunction
from .quadrature import Grid, composite_gauss_legendre, gauss_legendre

__all__ = [
    "Curve",
    "ParametricCurve",
    "Cycloid",
    "ArcLengthCurve",
    "DescentProfile",
    "Reconstruction",
    "BrachistochroneTable",
    "cycloid",
    "line",
    "circle",
    "parabola",
    "parametric",
    "parametric_samples",
    "graph",
    "arclength",
    "descent_time",
    "free_fall_time",
    "reconstruct_tautochrone",
    "huygens_prop26_ratio",
    "brachistochrone_compare",
]

DEFAULT_POINTS = 64


def _positive(name, value):
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return value


class Curve:
    """A frictionless wire, parametrized by arc length ``s`` from the vertex.

    Subclasses provide the height profile; consumers only use the methods
    below.
    """

    kind: str = "abstract"
    g: float
    max_height: float
    arc_length: float

    def height_at_arc(self, s: float) -> float:
        raise NotImplementedError

    def slope_at_arc(self, s: float) -> float:
        """``dy/ds`` at arc position ``s``."""
        raise NotImplementedError

    def arc_at_height(self, y: float) -> float:
        raise NotImplementedError

    def descent_time(self, y0: float, points: int = DEFAULT_POINTS) -> float:
        raise NotImplementedError

    def _check_height(self, y0):
        y0 = float(y0)
        if not (0.0 < y0 <= self.max_height * (1 + 1e-12)):
            raise ValueError(
                f"release height {y0!r} outside (0, {self.max_height!r}] "
                f"for {self.kind} curve"
            )
        return min(y0, self.max_height)


class ParametricCurve(Curve):
    """Curve ``(x(theta), y(theta))`` for ``theta`` in ``[0, theta_max]``.

    ``theta = 0`` must be the vertex (``y = 0``) and ``y`` must increase
    with ``theta``.  Arc length is tabulated once on construction so that
    the curve can also be traversed by arc length.
    """

    kind = "parametric"

    def __init__(
        self,
        x: Callable,
        y: Callable,
        dx: Callable,
        dy: Callable,
        theta_max: float,
        g: float = 9.81,
        table_size: int = 2048,
    ):
        self.x, self.y, self.dx, self.dy = x, y, dx, dy
        self.theta_max = _positive("theta_max", theta_max)
        self.g = _positive("g", g)
        if abs(float(y(0.0))) > 1e-12:
            raise ValueError("parametric curve must have its vertex at theta = 0")
        self.max_height = float(y(self.theta_max))
        self._tabulate(table_size)

    def speed(self, theta):
        """``ds/dtheta``."""
        return np.hypot(self.dx(theta), self.dy(theta))

    def drop(self, theta0, theta):
        """``y(theta0) - y(theta)``; subclasses may override for accuracy."""
        return self.y(theta0) - self.y(theta)

    def _tabulate(self, size):
        th = np.linspace(0.0, self.theta_max, size + 1)
        t, w = composite_gauss_legendre(th, 6)
        cells = (w * self.speed(t)).reshape(size, 6).sum(axis=1)
        s = np.concatenate(([0.0], np.cumsum(cells)))
        sigma = self.speed(th)
        if np.any(np.diff(self.y(th)) <= 0):
            raise ValueError("y(theta) must increase strictly along the curve")
        self.arc_length = float(s[-1])
        self._s_of_theta = CubicHermiteSpline(th, s, sigma)
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = np.where(sigma > 0, self.dy(th) / sigma, 0.0)
        self._y_of_s = CubicHermiteSpline(s, self.y(th), slope)
        self._slope_of_s = self._y_of_s.derivative()

    def theta_at_height(self, y0: float) -> float:
        y0 = self._check_height(y0)
        if y0 >= self.max_height:
            return self.theta_max
        return brentq(lambda t: self.y(t) - y0, 0.0, self.theta_max, xtol=1e-15)

    def height_at_arc(self, s):
        return float(self._y_of_s(s))

    def slope_at_arc(self, s):
        return float(self._slope_of_s(s))

    def arc_at_height(self, y):
        if y <= 0:
            return 0.0
        return float(self._s_of_theta(self.theta_at_height(y)))

    def travel_time(self, theta0, theta_from, theta_to, points=DEFAULT_POINTS):
        """Time to slide from ``theta_from`` down to ``theta_to`` after a
        release from rest at ``theta0 >= theta_from``."""
        if not (0.0 <= theta_to < theta_from <= theta0):
            raise ValueError("need 0 <= theta_to < theta_from <= theta0")
        phi, w = gauss_legendre(points, 0.0, 0.5 * math.pi)
        if theta_from == theta0:
            # theta0 - theta = span * sin(phi)**2 cancels the sqrt zero
            span = theta0 - theta_to
            theta = theta0 - span * np.sin(phi) ** 2
            jac = 2.0 * span * np.sin(phi) * np.cos(phi)
        else:
            theta, w = gauss_legendre(points, theta_to, theta_from)
            jac = 1.0
        f = self.speed(theta) * jac / np.sqrt(2.0 * self.g * self.drop(theta0, theta))
        return float(w @ f)

    def descent_time(self, y0, points=DEFAULT_POINTS):
        theta0 = self.theta_at_height(y0)
        return self.travel_time(theta0, theta0, 0.0, points)


class Cycloid(ParametricCurve):
    """Inverted cycloid of generating radius ``r``:
    ``x = r (theta + sin theta)``, ``y = r (1 - cos theta)``, theta in [0, pi].
    """

    kind = "cycloid"

    def __init__(self, r: float, g: float = 9.81):
        self.r = r = _positive("r", r)
        self.g = _positive("g", g)
        self.theta_max = math.pi
        self.max_height = 2.0 * r
        self.arc_length = 4.0 * r
        self.x = lambda t: r * (t + np.sin(t))
        self.y = lambda t: r * (1.0 - np.cos(t))
        self.dx = lambda t: r * (1.0 + np.cos(t))
        self.dy = lambda t: r * np.sin(t)

    def speed(self, theta):
        return 2.0 * self.r * np.cos(0.5 * theta)

    def drop(self, theta0, theta):
        return 2.0 * self.r * np.sin(0.5 * (theta0 + theta)) * np.sin(0.5 * (theta0 - theta))

    def theta_at_height(self, y0):
        y0 = self._check_height(y0)
        return 2.0 * math.asin(min(1.0, math.sqrt(y0 / (2.0 * self.r))))

    # s = 4 r sin(theta/2) and y = s**2 / (8 r)
    def height_at_arc(self, s):
        return s * s / (8.0 * self.r)

    def slope_at_arc(self, s):
        return s / (4.0 * self.r)

    def arc_at_height(self, y):
        return math.sqrt(8.0 * self.r * max(y, 0.0))

    @property
    def period(self) -> float:
        """Descent time to the vertex, ``pi sqrt(r/g)``."""
        return math.pi * math.sqrt(self.r / self.g)


class ArcLengthCurve(Curve):
    """Curve known only through samples of ``s(y)`` with ``s(0) = 0``.

    Both ``s(y)`` and its inverse ``y(s)`` use monotone piecewise-cubic
    interpolation.
    """

    kind = "arclength"

    def __init__(self, y, s, g: float = 9.81):
        y = np.asarray(y, dtype=float)
        s = np.asarray(s, dtype=float)
        if y.shape != s.shape or y.ndim != 1 or y.size < 3:
            raise ValueError("need matching 1-d samples of y and s (at least 3)")
        if y[0] != 0 or s[0] != 0:
            raise ValueError("samples must start at the vertex, y = s = 0")
        if np.any(np.diff(y) <= 0) or np.any(np.diff(s) <= 0):
            raise ValueError("y and s must increase strictly")
        if np.any(np.diff(s) < np.diff(y) * (1 - 1e-9)):
            raise ValueError("arc length cannot grow slower than height")
        self.g = _positive("g", g)
        self.y_samples, self.s_samples = y, s
        self.max_height = float(y[-1])
        self.arc_length = float(s[-1])
        self._s_of_y = PchipInterpolator(y, s)
        self._dsdy = self._s_of_y.derivative()
        self._y_of_s = PchipInterpolator(s, y)
        self._slope = self._y_of_s.derivative()

    def ds_dy(self, y):
        return self._dsdy(y)

    def height_at_arc(self, s):
        return float(self._y_of_s(s))

    def slope_at_arc(self, s):
        return float(self._slope(s))

    def arc_at_height(self, y):
        return float(self._s_of_y(y)) if y > 0 else 0.0

    def descent_time(self, y0, points=8):
        y0 = self._check_height(y0)
        # y = y0 sin(phi)**2; panels end where the interpolant has knots
        knots = self.y_samples[(self.y_samples > 0) & (self.y_samples < y0)]
        breaks = np.concatenate(([0.0], np.arcsin(np.sqrt(knots / y0)), [0.5 * math.pi]))
        phi, w = composite_gauss_legendre(breaks, points)
        f = self.ds_dy(y0 * np.sin(phi) ** 2) * 2.0 * math.sqrt(y0) * np.sin(phi)
        return float(w @ f) / math.sqrt(2.0 * self.g)


def cycloid(r: float, g: float = 9.81) -> Cycloid:
    return Cycloid(r, g)


def parametric(x, y, dx, dy, theta_max, g=9.81) -> ParametricCurve:
    return ParametricCurve(x, y, dx, dy, theta_max, g)


def line(h: float, length: float, g: float = 9.81) -> ParametricCurve:
    """Straight incline of height ``h`` and length ``length``."""
    h, length = _positive("h", h), _positive("L", length)
    if length < h:
        raise ValueError("incline length must be at least its height")
    run = math.sqrt(length * length - h * h)
    c = ParametricCurve(
        lambda t: t * run / length,
        lambda t: t * h / length,
        lambda t: np.full_like(np.asarray(t, dtype=float), run / length),
        lambda t: np.full_like(np.asarray(t, dtype=float), h / length),
        length,
        g,
        table_size=16,
    )
    c.kind = "line"
    return c


def circle(R: float, g: float = 9.81, theta_max: float = math.pi) -> ParametricCurve:
    """Circular arc of radius ``R`` (a simple pendulum's path); theta is the
    angle from the lowest point."""
    R = _positive("R", R)
    c = ParametricCurve(
        lambda t: R * np.sin(t),
        lambda t: R * (1.0 - np.cos(t)),
        lambda t: R * np.cos(t),
        lambda t: R * np.sin(t),
        theta_max,
        g,
    )
    c.drop = lambda t0, t: 2.0 * R * np.sin(0.5 * (t0 + t)) * np.sin(0.5 * (t0 - t))
    c.kind = "circle"
    return c


def parabola(a: float, x_max: float, g: float = 9.81) -> ParametricCurve:
    """``y = a x**2`` for ``x`` in ``[0, x_max]``."""
    a = _positive("a", a)
    c = ParametricCurve(
        lambda t: np.asarray(t, dtype=float),
        lambda t: a * np.asarray(t, dtype=float) ** 2,
        lambda t: np.ones_like(np.asarray(t, dtype=float)),
        lambda t: 2.0 * a * np.asarray(t, dtype=float),
        x_max,
        g,
    )
    c.drop = lambda t0, t: a * (t0 - t) * (t0 + t)
    c.kind = "parabola"
    return c


def parametric_samples(theta, x, y, g: float = 9.81) -> ParametricCurve:
    """Parametric curve from samples, interpolated with monotone cubics."""
    theta = np.asarray(theta, dtype=float)
    px, py = PchipInterpolator(theta, x), PchipInterpolator(theta, y)
    return ParametricCurve(px, py, px.derivative(), py.derivative(), theta[-1], g)


def graph(x, y, g: float = 9.81) -> ParametricCurve:
    """Curve ``y(x)`` from samples with the vertex at ``x = 0``."""
    x = np.asarray(x, dtype=float)
    c = parametric_samples(x, x, y, g)
    c.kind = "graph"
    return c


def arclength(y, s, g: float = 9.81) -> ArcLengthCurve:
    return ArcLengthCurve(y, s, g)


def descent_time(curve: Curve, y0: float, points: int | None = None) -> float:
    """Time to slide from rest at height ``y0`` to the vertex."""
    if points is None:
        return curve.descent_time(y0)
    return curve.descent_time(y0, points)


def free_fall_time(height: float, g: float = 9.81) -> float:
    return math.sqrt(2.0 * _positive("height", height) / _positive("g", g))


@dataclass(frozen=True)
class DescentProfile:
    """Descent time as a function of release height.

    Either ``constant`` (a single time ``T0``) or ``sampled`` (values on a
    height grid).
    """

    form: str
    T0: float | None = None
    samples: SampledFunction | None = None

    def __post_init__(self):
        if self.form == "constant":
            _positive("T0", self.T0 if self.T0 is not None else float("nan"))
        elif self.form == "sampled":
            if self.samples is None or np.any(self.samples.values <= 0):
                raise ValueError("sampled profile needs positive descent times")
        else:
            raise ValueError(f"unknown profile form {self.form!r}")

    @classmethod
    def constant(cls, T0: float) -> "DescentProfile":
        return cls("constant", T0=float(T0))

    @classmethod
    def sampled(cls, times: SampledFunction) -> "DescentProfile":
        return cls("sampled", samples=times)


@dataclass(frozen=True)
class Reconstruction:
    """Curve recovered from a descent profile.

    ``s`` is the arc length sampled over heights; ``radius`` is the
    generating radius of the matching cycloid (constant profiles only).
    """

    s: SampledFunction
    curve: ArcLengthCurve
    radius: float | None

    def profile_xy(self):
        """Best-effort horizontal coordinate ``x(y) = int sqrt(s'**2 - 1) dy``.

        Loses accuracy near the vertex, where ``s'`` is unbounded.
        """
        y = self.s.x
        ds = np.diff(self.s.values)
        dy = np.diff(y)
        dx = np.sqrt(np.clip(ds**2 - dy**2, 0.0, None))
        return np.concatenate(([0.0], np.cumsum(dx))), y


def reconstruct_tautochrone(
    profile: DescentProfile | float,
    g: float = 9.81,
    grid_n: int = 513,
    y_max: float | None = None,
) -> Reconstruction:
    """Recover the wire whose descent times follow ``profile``.

    ``sqrt(2 g) T(y)`` is the right-hand side of an Abel equation with
    exponent 1/2 whose cumulative solution is the arc length ``s(y)``.  For a
    constant ``T0`` the result is ``s = 2 sqrt(2 g) (T0/pi) sqrt(y)``, the
    cycloid of radius ``g (T0/pi)**2``.
    """
    g = _positive("g", g)
    if not isinstance(profile, DescentProfile):
        profile = DescentProfile.constant(profile)
    if profile.form == "constant":
        radius = g * (profile.T0 / math.pi) ** 2
        grid = Grid(y_max or 2.0 * radius, grid_n)
        psi = SampledFunction(grid, np.full(grid.n, math.sqrt(2.0 * g) * profile.T0))
    else:
        radius = None
        grid = profile.samples.grid
        psi = profile.samples.with_values(math.sqrt(2.0 * g) * profile.samples.values)
    s = invert_remarkable(AbelProblem(0.5, psi), output="cumulative")
    curve = ArcLengthCurve(grid.nodes, s.values, g)
    return Reconstruction(s, curve, radius)


def huygens_prop26_ratio(curve: Cycloid, y_start: float, y_mid: float):
    """Compare the two legs of a descent split at height ``y_mid``.

    Returns ``(time_ratio, arc_ratio)``: the time from ``y_start`` down to
    ``y_mid`` over the time from ``y_mid`` to the vertex, and
    ``phi / (pi - phi)`` with ``phi = arccos(2 y_mid / y_start - 1)``, the
    ratio of the two arcs cut on the circle of diameter ``y_start``.
    """
    if not isinstance(curve, Cycloid):
        raise TypeError("the arc-ratio law is stated for the cycloid")
    if not (0.0 < y_mid < y_start <= curve.max_height * (1 + 1e-12)):
        raise ValueError("need 0 < y_mid < y_start <= 2 r")
    theta0 = curve.theta_at_height(y_start)
    theta1 = curve.theta_at_height(y_mid)
    first = curve.travel_time(theta0, theta0, theta1)
    second = curve.travel_time(theta0, theta1, 0.0)
    phi = math.acos(2.0 * y_mid / y_start - 1.0)
    return first / second, phi / (math.pi - phi)


@dataclass(frozen=True)
class BrachistochroneTable:
    chord: float
    circle: float
    cycloid: float
    cycloid_radius: float

    @property
    def fastest(self) -> str:
        times = {"chord": self.chord, "circle": self.circle, "cycloid": self.cycloid}
        return min(times, key=times.get)


def _release_time(speed, drop, tau_end, g, points):
    # release at tau = 0; tau = tau_end sin(phi)**2 removes the sqrt zero
    phi, w = gauss_legendre(points, 0.0, 0.5 * math.pi)
    tau = tau_end * np.sin(phi) ** 2
    jac = 2.0 * tau_end * np.sin(phi) * np.cos(phi)
    return float(w @ (speed(tau) * jac / np.sqrt(2.0 * g * drop(tau))))


def brachistochrone_compare(a, b, g: float = 9.81, points: int = DEFAULT_POINTS):
    """Descent times from rest at ``a`` to ``b`` along three candidates.

    The candidates are the straight chord, the circular arc through both
    points with a vertical tangent at ``a``, and the cycloid with its cusp
    at ``a``.
    """
    g = _positive("g", g)
    (xa, ya), (xb, yb) = a, b
    dx, dh = abs(xb - xa), ya - yb
    if not dh > 0:
        raise ValueError("the start point must lie above the end point")
    if dx == 0.0:
        t = free_fall_time(dh, g)
        return BrachistochroneTable(t, t, t, math.inf)

    length = math.hypot(dx, dh)
    chord = _release_time(
        lambda t: np.full_like(t, length), lambda t: dh * t, 1.0, g, points
    )

    R = (dx * dx + dh * dh) / (2.0 * dx)
    beta_b = math.atan2(dh / R, 1.0 - dx / R)
    arc = _release_time(
        lambda t: np.full_like(t, R), lambda t: R * np.sin(t), beta_b, g, points
    )

    # (theta - sin theta) / (1 - cos theta) rises from 0 to infinity on (0, 2 pi)
    ratio = dx / dh
    lo = min(1e-3, ratio)
    theta_b = brentq(
        lambda t: (t - math.sin(t)) / (1.0 - math.cos(t)) - ratio,
        lo,
        2.0 * math.pi - 1e-4,
        xtol=1e-15,
    )
    r = dh / (1.0 - math.cos(theta_b))
    cyc = _release_time(
        lambda t: 2.0 * r * np.sin(0.5 * t),
        lambda t: 2.0 * r * np.sin(0.5 * t) ** 2,
        theta_b,
        g,
        points,
    )
    return BrachistochroneTable(chord, arc, cyc, r)
