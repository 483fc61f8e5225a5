"""Analytic stability criteria for mixed fleets on a ring road.

The frequency-response magnitude of one vehicle class along the imaginary
axis, written in the squared variable ``y = x^2``, is

    h(y) = (alpha^2 + gamma^2 y) / (alpha^2 + (beta^2 - 2 alpha) y + y^2),

and its logarithm ``H(y)`` adds across vehicles.  A composition is stable for
its exact counts (any ordering) when the count-weighted sum of the ``H_k``
stays negative for all ``y > 0``, and unstable once the counts are replicated
enough times when the sum is positive somewhere.  For one stable and one
unstable class this yields a closed-form critical penetration rate: the
minimal fraction of stable vehicles above which the fleet is stable at any
size.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._numerics import golden_max, largest_remainder
from .linearize import LinearTrio, discriminant
from .spectrum import RingSystem, eigenvalues_on_H

GRID_POINTS = 4096

# |sup margin| below this is reported as sitting on the critical boundary
MARGIN_TOL = 1e-12

# spectral abscissa above this counts as unstable in sweeps
ABSCISSA_TOL = 1e-9


@dataclass(frozen=True)
class TwoPhaseReport:
    """Critical penetration rate of the stable class, with closed-form bounds."""

    delta1: float
    delta2: float
    gamma_sq: float
    n0: float
    tau0: float
    bound_lower: float
    bound_upper: float


class MarginVerdict(enum.Enum):
    STABLE_ALL_N = "stable_all_n"
    UNSTABLE_FOR_LARGE_N = "unstable_for_large_n"
    CRITICAL_BOUNDARY = "critical_boundary"


@dataclass(frozen=True)
class MarginReport:
    """Sign and location of the worst-case count-weighted log gain.

    sup_margin < 0: the composition is exponentially stable for these exact
    counts and every ordering.  sup_margin > 0: replicating the counts enough
    times produces an unstable fleet.
    """

    sup_margin: float
    argmax_y: float
    verdict: MarginVerdict


def log_gain(trio: LinearTrio, y):
    """Log of the squared per-vehicle gain at ``y = x^2`` (dimensionless).

    Zero at ``y = 0`` exactly; negative for all ``y > 0`` iff the trio's
    discriminant is nonnegative.  Accepts scalars or arrays.
    """
    arr = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ValueError("y must be finite and nonnegative")
    a2 = trio.alpha * trio.alpha
    num = (trio.gamma * trio.gamma) * arr / a2
    den = ((trio.beta * trio.beta - 2.0 * trio.alpha) * arr + arr * arr) / a2
    if np.any(den <= -1.0):
        raise ValueError(
            f"trio ({trio.alpha}, {trio.beta}, {trio.gamma}) leaves the admissible set"
        )
    out = np.log1p(num) - np.log1p(den)
    return float(out) if arr.ndim == 0 else out


def gamma_squared(trio2: LinearTrio) -> float:
    """Location of the maximum of :func:`log_gain` for an unstable trio.

    The positive root of the gain's derivative numerator; always lies in
    ``(0, -discriminant)``.  Evaluated in a conjugate form that is exact and
    remains stable as gamma -> 0, where the value tends to -discriminant/2.
    """
    d = discriminant(trio2)
    if d >= 0.0:
        raise ValueError(f"trio must be unstable (discriminant < 0), got {d}")
    a2 = trio2.alpha * trio2.alpha
    g2 = trio2.gamma * trio2.gamma
    return -a2 * d / (a2 + math.sqrt(a2 * a2 - a2 * g2 * d))


def _grid_with_refinement(fn, ys: np.ndarray, vals: np.ndarray, refine: bool):
    """Best grid point plus a golden-section polish around it.

    Refinement never descends below the first grid point: when the maximum
    sits on the y -> 0 boundary the caller handles that limit analytically.
    """
    i = int(np.argmax(vals))
    best_y, best_v = float(ys[i]), float(vals[i])
    if refine:
        lo = float(ys[i - 1]) if i > 0 else float(ys[0])
        hi = float(ys[i + 1]) if i + 1 < len(ys) else float(ys[-1])
        if hi > lo:
            y_ref, v_ref = golden_max(fn, lo, hi)
            if v_ref > best_v:
                best_y, best_v = y_ref, v_ref
    return best_y, best_v


def critical_penetration(
    trio1: LinearTrio, trio2: LinearTrio, *, refine: bool = True
) -> TwoPhaseReport:
    """Critical stable-class penetration rate for a stable/unstable pair.

    Maximizes ``-H2/H1`` over ``(0, Gamma^2]`` on a log-spaced grid with
    golden-section refinement; the ``y -> 0`` endpoint is handled by its
    analytic limit rather than a 0/0 evaluation.  The rate is ``N0/(N0+1)``
    where ``N0`` is the maximum, and the closed-form bounds from
    :func:`tau0_bounds` are attached.
    """
    d1 = discriminant(trio1)
    d2 = discriminant(trio2)
    if d1 <= 0.0:
        raise ValueError(f"first trio must be strictly stable, discriminant {d1}")
    if d2 >= 0.0:
        raise ValueError(f"second trio must be unstable, discriminant {d2}")
    g_sq = gamma_squared(trio2)

    ys = np.geomspace(g_sq * 1e-12, g_sq, GRID_POINTS)
    ratio = -log_gain(trio2, ys) / log_gain(trio1, ys)

    def ratio_at(y: float) -> float:
        return -log_gain(trio2, y) / log_gain(trio1, y)

    limit0 = (-d2 * trio1.alpha**2) / (d1 * trio2.alpha**2)
    _, n0 = _grid_with_refinement(ratio_at, ys, ratio, refine)
    n0 = max(n0, limit0)
    tau0 = n0 / (n0 + 1.0)
    b_l, b_u = tau0_bounds(trio1, trio2)
    return TwoPhaseReport(
        delta1=d1,
        delta2=d2,
        gamma_sq=g_sq,
        n0=n0,
        tau0=tau0,
        bound_lower=b_l,
        bound_upper=b_u,
    )


def tau0_bounds(trio1: LinearTrio, trio2: LinearTrio) -> tuple[float, float]:
    """Closed-form lower and upper bounds on the critical penetration rate.

    The lower bound is the ``y -> 0`` limit of the ratio being maximized.
    The upper bound applies the mean-value estimate to the derivative ratio,
    bounding each factor on ``[0, Gamma^2]`` separately; the denominator of
    the unstable class's gain is bounded below by its parabola minimum
    ``m2 = alpha2^2 - max(0, alpha2 - beta2^2/2)^2 > 0``.
    """
    d1 = discriminant(trio1)
    d2 = discriminant(trio2)
    if d1 <= 0.0 or d2 >= 0.0:
        raise ValueError("bounds need a strictly stable and an unstable trio")
    a1sq = trio1.alpha**2
    a2sq = trio2.alpha**2
    b_l = (-d2 * a1sq) / (d1 * a2sq - d2 * a1sq)

    g_sq = gamma_squared(trio2)
    e1 = a1sq + trio1.gamma**2 * g_sq
    e2 = a1sq + (trio1.beta**2 - 2.0 * trio1.alpha) * g_sq + g_sq * g_sq
    m2 = a2sq - max(0.0, trio2.alpha - trio2.beta**2 / 2.0) ** 2
    n_up = (-d2) * e1 * e2 / (m2 * a1sq * d1)
    b_u = n_up / (n_up + 1.0)
    return b_l, b_u


def _margin_window(trios: Sequence[LinearTrio]) -> float:
    spans = [1.0]
    for t in trios:
        d = discriminant(t)
        if d < 0.0:
            spans.append(-d)
            spans.append(gamma_squared(t))
    return 10.0 * max(spans)


def _sup_weighted_margin(
    trios: Sequence[LinearTrio], weights: Sequence[float]
) -> tuple[float, float]:
    window = _margin_window(trios)
    ys = np.geomspace(window * 1e-9, window, GRID_POINTS)
    total = np.zeros_like(ys)
    for t, w in zip(trios, weights):
        if w != 0.0:
            total += w * log_gain(t, ys)

    def margin_at(y: float) -> float:
        return math.fsum(w * log_gain(t, y) for t, w in zip(trios, weights) if w != 0.0)

    return _grid_with_refinement(margin_at, ys, total, refine=True)


def multi_phase_margin(
    trios: Sequence[LinearTrio], counts: Sequence[float]
) -> MarginReport:
    """Stability margin of a fleet with any number of classes.

    ``counts`` may be integers or real weights; only ratios matter for the
    verdict.  sup < 0 means exponential stability for these exact counts and
    every ordering; sup > 0 means instability once the composition is
    replicated enough times.
    """
    if len(trios) != len(counts) or len(trios) < 1:
        raise ValueError("need matching, nonempty trio and count lists")
    if any(c < 0 for c in counts) or sum(counts) <= 0:
        raise ValueError("counts must be nonnegative with a positive total")
    y_best, sup = _sup_weighted_margin(trios, counts)
    if sup > MARGIN_TOL:
        verdict = MarginVerdict.UNSTABLE_FOR_LARGE_N
    elif sup < -MARGIN_TOL:
        verdict = MarginVerdict.STABLE_ALL_N
    else:
        verdict = MarginVerdict.CRITICAL_BOUNDARY
    return MarginReport(sup_margin=sup, argmax_y=y_best, verdict=verdict)


def two_phase_margin(
    trio1: LinearTrio, trio2: LinearTrio, n1: float, n2: float
) -> MarginReport:
    """Two-class special case of :func:`multi_phase_margin`."""
    return multi_phase_margin([trio1, trio2], [n1, n2])


def multi_phase_tau1(
    trios: Sequence[LinearTrio], rates: Sequence[float]
) -> float:
    """Minimal fraction of class 1 that stabilizes a multi-class fleet.

    The remaining mass is split among classes 2..m in the fixed relative
    shares ``rates``.  Class 1 must be strictly stable; the threshold is then
    found by bisection on the fraction to 1e-6.  Returns 0.0 when the
    remainder is already stable on its own.
    """
    if len(rates) != len(trios) - 1 or len(trios) < 2:
        raise ValueError("rates must cover classes 2..m")
    if any(r < 0 for r in rates) or not math.isclose(sum(rates), 1.0, abs_tol=1e-9):
        raise ValueError("rates must be nonnegative and sum to 1")
    if discriminant(trios[0]) <= 0.0:
        raise ValueError("class 1 must be strictly stable")

    def sup_at(frac: float) -> float:
        weights = [frac] + [(1.0 - frac) * r for r in rates]
        return _sup_weighted_margin(trios, weights)[1]

    if sup_at(0.0) < 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    # sup_at(1.0) < 0 is guaranteed by the strict stability of class 1
    assert sup_at(1.0) < 0.0
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if sup_at(mid) < 0.0:
            hi = mid
        else:
            lo = mid
    return hi


def min_unstable_size(
    trios: Sequence[LinearTrio],
    rates: Sequence[float],
    n_max: int,
) -> int | None:
    """Smallest total vehicle count with a positive spectral abscissa.

    Counts at each candidate total are the rates rounded by largest
    remainder.  The sweep doubles the total until instability appears, then
    scans linearly back for the first unstable size.  Returns ``None`` when
    no total up to ``n_max`` is unstable, which is not a proof of stability.
    """
    if len(trios) != len(rates) or len(trios) < 1:
        raise ValueError("need matching trio and rate lists")
    if any(r < 0 for r in rates) or not math.isclose(sum(rates), 1.0, abs_tol=1e-9):
        raise ValueError("rates must be nonnegative and sum to 1")
    if n_max < 2:
        return None

    def abscissa_at(n: int) -> float:
        counts = largest_remainder(rates, n)
        ring = tuple(
            t for t, c in zip(trios, counts) for _ in range(c)
        )
        return eigenvalues_on_H(RingSystem(ring)).abscissa

    candidates: list[int] = []
    n = 2
    while n < n_max:
        candidates.append(n)
        n *= 2
    candidates.append(n_max)

    prev_miss = 1
    hit = None
    for n in candidates:
        if abscissa_at(n) > ABSCISSA_TOL:
            hit = n
            break
        prev_miss = n
    if hit is None:
        return None
    for n in range(prev_miss + 1, hit):
        if abscissa_at(n) > ABSCISSA_TOL:
            return n
    return hit
