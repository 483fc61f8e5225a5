"""Small scalar-search and scheduling helpers used across modules."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def bisect_root(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    f_lo: float | None = None,
    f_hi: float | None = None,
    xtol: float = 0.0,
    ftol: float = 0.0,
    max_iter: int = 200,
) -> float:
    """Bisection root of ``fn`` on [lo, hi]; the endpoint values must straddle zero.

    With ``xtol=0`` and ``ftol=0`` the bracket is shrunk until the midpoint can
    no longer be distinguished from an endpoint (machine precision).
    """
    flo = fn(lo) if f_lo is None else f_lo
    if flo == 0.0:
        return lo
    fhi = fn(hi) if f_hi is None else f_hi
    if fhi == 0.0:
        return hi
    if (flo < 0.0) == (fhi < 0.0):
        raise ValueError(f"no sign change on bracket [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = fn(mid)
        if fm == 0.0 or (ftol and abs(fm) <= ftol):
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if xtol and hi - lo <= xtol:
            break
    return 0.5 * (lo + hi)


def golden_max(
    fn: Callable[[float], float],
    a: float,
    b: float,
    *,
    rtol: float = 1e-10,
) -> tuple[float, float]:
    """Golden-section maximization of ``fn`` on [a, b]; returns (x, fn(x))."""
    if not b > a:
        raise ValueError("empty bracket")
    h = b - a
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    fc = fn(c)
    fd = fn(d)
    while h > rtol * max(abs(a), abs(b), 1e-300):
        if fc > fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INV_PHI2 * h
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INV_PHI * h
            fd = fn(d)
        if c >= d:  # bracket exhausted at float resolution
            break
    return (c, fc) if fc > fd else (d, fd)


def largest_remainder(rates: Sequence[float], total: int) -> list[int]:
    """Round ``rates * total`` to integers that sum exactly to ``total``."""
    raw = [r * total for r in rates]
    base = [math.floor(x) for x in raw]
    short = total - sum(base)
    # ties broken by lower index for determinism
    order = sorted(range(len(rates)), key=lambda i: (-(raw[i] - base[i]), i))
    for i in order[:short]:
        base[i] += 1
    return base


def thread_count(n_items: int) -> int:
    """Worker count for sweep parallelism; RINGWAVE_THREADS caps it (0 = auto)."""
    raw = os.environ.get("RINGWAVE_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap <= 0:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_items))


def parallel_map(fn: Callable, items: Iterable) -> list:
    """Ordered map over ``items``, threaded when the sweep is large enough."""
    items = list(items)
    workers = thread_count(len(items))
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
