"""Car-following laws: evaluation, derivatives, and velocity-preferred headways.

A driver law is an acceleration function ``f(h, hdot, v)`` of the headway to
the leader, its rate of change, and the vehicle's own speed.  The concrete
law shipped here combines a relaxation toward a preferred speed ``V(h)`` with
a follow-the-leader coupling ``b * hdot / h**2``.  Arbitrary laws can be
plugged in through :class:`Custom`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._numerics import bisect_root
from .errors import AmbiguousHeadwayError, CollisionError, NoEquilibriumError

_TANH2 = math.tanh(2.0)


def _sech(x):
    # 1/cosh without overflow for large |x|
    a = np.exp(-np.abs(x))
    return 2.0 * a / (1.0 + a * a)


@dataclass(frozen=True)
class VelocityPreference:
    """Monotone preferred-speed curve, zero at the vehicle length.

    The curve is ``v_max * (tanh((h - l_v)/d0 - 2) + tanh 2) / (1 + tanh 2)``,
    clamped to 0 below ``l_v`` where the raw expression would go negative.

    v_max: asymptotic speed for large headway (m/s), a strict supremum
    l_v:   vehicle length (m); the preferred speed vanishes at this headway
    d0:    transition length scale of the ramp (m)
    """

    v_max: float
    l_v: float
    d0: float

    def __post_init__(self):
        if not (self.v_max > 0.0 and self.d0 > 0.0 and self.l_v >= 0.0):
            raise ValueError(
                f"require v_max > 0, d0 > 0, l_v >= 0; got {self.v_max}, {self.d0}, {self.l_v}"
            )

    @property
    def saturation_headway(self) -> float:
        """Upper end of the inversion bracket; the curve is flat beyond it."""
        return self.l_v + 50.0 * self.d0


def _speed(pref: VelocityPreference, h):
    """Array-capable preferred speed with the below-length clamp."""
    x = (np.asarray(h, dtype=float) - pref.l_v) / pref.d0
    v = pref.v_max * (np.tanh(x - 2.0) + _TANH2) / (1.0 + _TANH2)
    return np.maximum(v, 0.0)


def _speed_slope(pref: VelocityPreference, h):
    h = np.asarray(h, dtype=float)
    x = (h - pref.l_v) / pref.d0 - 2.0
    s = pref.v_max * _sech(x) ** 2 / (pref.d0 * (1.0 + _TANH2))
    return np.where(h < pref.l_v, 0.0, s)


def eval_preference(pref: VelocityPreference, h: float) -> float:
    """Preferred speed at headway ``h`` (m/s)."""
    if not math.isfinite(h):
        raise ValueError(f"headway must be finite, got {h!r}")
    return float(_speed(pref, h))


def eval_preference_slope(pref: VelocityPreference, h: float) -> float:
    """Exact derivative of the clamped preferred-speed curve (1/s)."""
    if not math.isfinite(h):
        raise ValueError(f"headway must be finite, got {h!r}")
    return float(_speed_slope(pref, h))


def preference_with_slope(
    slope: float, h_ref: float, l_v: float, d0: float
) -> VelocityPreference:
    """Preference whose ramp slope at ``h_ref`` equals ``slope``.

    Solves for ``v_max`` given the two shape parameters; the slope scales
    linearly with ``v_max`` so the solution is closed-form.
    """
    if slope <= 0.0:
        raise ValueError("slope must be positive")
    if h_ref <= l_v:
        raise ValueError("h_ref must exceed the vehicle length")
    x = (h_ref - l_v) / d0 - 2.0
    v_max = slope * d0 * (1.0 + _TANH2) / float(_sech(x) ** 2)
    return VelocityPreference(v_max=v_max, l_v=l_v, d0=d0)


@dataclass(frozen=True)
class BandoFtl:
    """Relaxation toward the preferred speed plus follow-the-leader coupling.

    Acceleration is ``a * (V(h) - v) + b * hdot / h**2``.

    a: relaxation gain (1/s)
    b: follow-the-leader gain (m^2/s)
    """

    a: float
    b: float
    pref: VelocityPreference

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValueError(f"require a > 0 and b > 0; got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class Custom:
    """User-supplied driver law ``f(h, hdot, v)``.

    partials, when given, must return ``(df/dh, df/dhdot, df/dv)`` at a point;
    otherwise central differences with step ``max(1e-6, 1e-6*|x|)`` are used.
    headway_range bounds the search bracket for zero-acceleration headways.
    v_sup, when known, bounds the achievable equilibrium speeds.
    """

    f: Callable[[float, float, float], float]
    partials: Callable[[float, float, float], tuple[float, float, float]] | None = None
    headway_range: tuple[float, float] = (1e-9, 1e6)
    v_sup: float | None = None


CarFollowingModel = BandoFtl | Custom


def accel(model: CarFollowingModel, h: float, hdot: float, v: float) -> float:
    """Acceleration of the driver law at ``(h, hdot, v)`` (m/s^2)."""
    if not (math.isfinite(h) and math.isfinite(hdot) and math.isfinite(v)):
        raise ValueError(f"arguments must be finite, got ({h!r}, {hdot!r}, {v!r})")
    if h <= 0.0:
        raise CollisionError(f"headway {h} <= 0: the law is undefined at contact")
    if isinstance(model, BandoFtl):
        return model.a * (eval_preference(model.pref, h) - v) + model.b * hdot / (h * h)
    return float(model.f(h, hdot, v))


def _fd_step(x: float) -> float:
    return max(1e-6, 1e-6 * abs(x))


def model_partials(
    model: CarFollowingModel, h: float, hdot: float, v: float
) -> tuple[float, float, float]:
    """``(df/dh, df/dhdot, df/dv)`` at a point, analytic where available."""
    if isinstance(model, BandoFtl):
        fh = model.a * eval_preference_slope(model.pref, h) - 2.0 * model.b * hdot / h**3
        return fh, model.b / (h * h), -model.a
    if model.partials is not None:
        fh, fhd, fv = model.partials(h, hdot, v)
        return float(fh), float(fhd), float(fv)
    eh, ed, ev = _fd_step(h), _fd_step(hdot), _fd_step(v)
    fh = (model.f(h + eh, hdot, v) - model.f(h - eh, hdot, v)) / (2.0 * eh)
    fhd = (model.f(h, hdot + ed, v) - model.f(h, hdot - ed, v)) / (2.0 * ed)
    fv = (model.f(h, hdot, v + ev) - model.f(h, hdot, v - ev)) / (2.0 * ev)
    return float(fh), float(fhd), float(fv)


def preferred_headway(model: CarFollowingModel, v: float) -> float:
    """The unique headway at which the law exerts zero acceleration at speed ``v``.

    For :class:`BandoFtl` this inverts the preferred-speed curve by bisection
    on ``[l_v, l_v + 50*d0]``; the bracket is solved to machine precision.
    Raises :class:`NoEquilibriumError` when ``v`` is outside the achievable
    range and :class:`AmbiguousHeadwayError` when a custom law has several
    zero-acceleration headways.
    """
    if not math.isfinite(v):
        raise ValueError(f"speed must be finite, got {v!r}")
    if v < 0.0:
        raise NoEquilibriumError(f"no equilibrium at negative speed {v}")

    if isinstance(model, BandoFtl):
        pref = model.pref
        if v >= pref.v_max:
            raise NoEquilibriumError(
                f"speed {v} is not below the supremum {pref.v_max}"
            )
        if v == 0.0:
            return pref.l_v
        return bisect_root(
            lambda h: eval_preference(pref, h) - v,
            pref.l_v,
            pref.saturation_headway,
            f_lo=-v,
        )

    if model.v_sup is not None and v >= model.v_sup:
        raise NoEquilibriumError(f"speed {v} is not below the supremum {model.v_sup}")
    return _custom_preferred_headway(model, v)


def _custom_preferred_headway(model: Custom, v: float) -> float:
    lo, hi = model.headway_range
    grid = np.geomspace(lo, hi, 512)
    vals = np.array([model.f(float(h), 0.0, v) for h in grid])
    exact = np.flatnonzero(vals == 0.0)
    signs = np.sign(vals)
    flips = np.flatnonzero(signs[:-1] * signs[1:] < 0)
    if len(exact) + len(flips) > 1:
        raise AmbiguousHeadwayError(
            f"driver law has multiple zero-acceleration headways at speed {v}"
        )
    if len(exact) == 1:
        return float(grid[exact[0]])
    if len(flips) == 0:
        raise NoEquilibriumError(
            f"no zero-acceleration headway in {model.headway_range} at speed {v}"
        )
    i = flips[0]
    return bisect_root(
        lambda h: model.f(h, 0.0, v),
        float(grid[i]),
        float(grid[i + 1]),
        f_lo=float(vals[i]),
        f_hi=float(vals[i + 1]),
    )
