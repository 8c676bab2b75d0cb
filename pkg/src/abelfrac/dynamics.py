"""Bead on a frictionless wire, integrated in time.

The motion is written in the arc-length coordinate ``s`` measured from the
vertex, ``s'' = -g dy/ds``, and advanced with the classical fixed-step
Runge-Kutta scheme.  On a cycloid of radius ``r`` this is exactly the
harmonic oscillator ``s'' = -(g / 4r) s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .tautochrone import Curve, circle, cycloid

__all__ = ["SimConfig", "SimResult", "simulate", "pendulum_period", "natural_time"]


def natural_time(curve: Curve) -> float:
    """Time scale ``sqrt(H / (2 g))`` of a curve of height ``H``; equals
    ``sqrt(r / g)`` on a full cycloid."""
    return math.sqrt(0.5 * curve.max_height / curve.g)


@dataclass(frozen=True)
class SimConfig:
    curve: Curve
    y0: float
    dt: float
    max_time: float | None = None
    g: float | None = None
    arrival_tol: float = 0.0
    record_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt!r}")
        if self.max_time is not None and not self.max_time > 0:
            raise ValueError(f"max_time must be > 0, got {self.max_time!r}")
        if self.g is not None and not self.g > 0:
            raise ValueError(f"g must be > 0, got {self.g!r}")
        if not (0.0 <= self.y0 <= self.curve.max_height):
            raise ValueError(
                f"y0={self.y0!r} outside [0, {self.curve.max_height!r}]"
            )
        if self.dt >= 0.01 * natural_time(self.curve) * math.sqrt(self.curve.g / self.gravity):
            raise ValueError(
                f"dt={self.dt!r} too coarse; keep it below 1% of the natural time scale"
            )
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    @property
    def gravity(self) -> float:
        return self.g if self.g is not None else self.curve.g


@dataclass(frozen=True)
class SimResult:
    """Trajectory samples up to (and including) the first step past the vertex.

    ``arrival_time`` is ``None`` when the bead does not reach the vertex
    within ``max_time``.
    """

    t: np.ndarray
    s: np.ndarray
    v: np.ndarray
    y: np.ndarray
    energy: np.ndarray
    arrival_time: float | None
    energy_drift: float

    @property
    def samples(self):
        return list(zip(self.t, self.s, self.v, self.y, self.energy))


def _crossing(t0, dt, s0, v0, s1, v1):
    """Zero of the cubic Hermite interpolant of s(t) on [t0, t0 + dt]."""

    def p(tau):
        h00 = 2 * tau**3 - 3 * tau**2 + 1
        h10 = tau**3 - 2 * tau**2 + tau
        h01 = -2 * tau**3 + 3 * tau**2
        h11 = tau**3 - tau**2
        return h00 * s0 + h10 * dt * v0 + h01 * s1 + h11 * dt * v1

    if s1 == 0.0:
        return t0 + dt
    return t0 + dt * brentq(p, 0.0, 1.0, xtol=1e-16, rtol=4 * np.finfo(float).eps)


def simulate(config: SimConfig) -> SimResult:
    """Release the bead from rest at ``config.y0`` and integrate until it
    passes the vertex (``s`` changes sign) or ``max_time`` elapses."""
    curve, g, dt = config.curve, config.gravity, config.dt
    max_time = config.max_time or 50.0 * natural_time(curve) * math.sqrt(curve.g / g)

    def height(s):
        return curve.height_at_arc(abs(s))

    def accel(s):
        # wire assumed mirror-symmetric about the vertex
        slope = curve.slope_at_arc(abs(s))
        return -g * slope if s >= 0 else g * slope

    s = curve.arc_at_height(config.y0)
    v = 0.0
    e0 = g * config.y0
    ts, ss, vs = [0.0], [s], [v]
    if s == 0.0:
        return _finish(ts, ss, vs, height, g, e0, 0.0)

    t = 0.0
    step = 0
    arrival = None
    while t < max_time:
        k1s, k1v = v, accel(s)
        k2s, k2v = v + 0.5 * dt * k1v, accel(s + 0.5 * dt * k1s)
        k3s, k3v = v + 0.5 * dt * k2v, accel(s + 0.5 * dt * k2s)
        k4s, k4v = v + dt * k3v, accel(s + dt * k3s)
        s1 = s + dt / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s)
        v1 = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        step += 1
        if s1 <= 0.0 < s:
            arrival = _crossing(t, dt, s, v, s1, v1)
        s, v, t = s1, v1, step * dt
        if arrival is not None or step % config.record_every == 0:
            ts.append(t)
            ss.append(s)
            vs.append(v)
        if arrival is not None:
            break
    return _finish(ts, ss, vs, height, g, e0, arrival)


def _finish(ts, ss, vs, height, g, e0, arrival):
    t, s, v = np.array(ts), np.array(ss), np.array(vs)
    y = np.array([height(x) for x in s])
    energy = 0.5 * v**2 + g * y
    # the step past the vertex may straddle a kink; drift covers the descent
    before = s >= 0.0
    drift = float(np.max(np.abs(energy[before] - e0)) / e0) if e0 > 0 else 0.0
    return SimResult(t, s, v, y, energy, arrival, drift)


def pendulum_period(
    kind: str,
    size: float,
    amplitude: float,
    g: float = 9.81,
    dt: float | None = None,
) -> float:
    """Full oscillation period, four times the simulated quarter swing.

    Parameters
    ----------
    kind : {"cycloidal", "circular"}
    size : float
        Generating radius ``r`` of the cycloid, or the string length.
    amplitude : float
        Release height for the cycloid (``0 < amplitude <= 2r``); release
        angle in radians for the circle (``0 < amplitude < pi``).
    """
    if kind == "cycloidal":
        curve = cycloid(size, g)
        y0 = amplitude
    elif kind == "circular":
        if not (0.0 < amplitude < math.pi):
            raise ValueError("circular amplitude must be an angle in (0, pi)")
        curve = circle(size, g)
        y0 = size * (1.0 - math.cos(amplitude))
    else:
        raise ValueError(f"unknown pendulum kind {kind!r}")
    dt = dt or 1e-3 * natural_time(curve)
    result = simulate(SimConfig(curve, y0, dt))
    if result.arrival_time is None:
        raise RuntimeError("pendulum did not reach the vertex")
    return 4.0 * result.arrival_time
