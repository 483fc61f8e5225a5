"""Equilibrium flows on a ring road.

At equilibrium every vehicle moves at a common speed ``v_bar`` and each class
keeps its zero-acceleration headway ``g(v_bar)``; the road length is the sum
of the headways around the ring.  Fixing the speed determines the length and
vice versa, so both directions are provided.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from ._numerics import bisect_root
from .errors import NoEquilibriumError
from .model import BandoFtl, CarFollowingModel, preferred_headway

# |sum of headways - L| accepted when solving for the equilibrium speed (m)
LENGTH_TOL = 1e-8


@dataclass(frozen=True)
class PopulationSpec:
    """One vehicle class: an id, its driver law, and how many are on the road."""

    class_id: int
    model: CarFollowingModel
    count: int

    def __post_init__(self):
        if self.count < 0 or self.count != int(self.count):
            raise ValueError(f"count must be a nonnegative integer, got {self.count}")


@dataclass(frozen=True)
class Composition:
    """Vehicle classes plus the (time-invariant) order they appear on the ring."""

    populations: tuple[PopulationSpec, ...]
    ordering: tuple[int, ...]

    def __post_init__(self):
        ids = [p.class_id for p in self.populations]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate class ids: {ids}")
        declared = {p.class_id: p.count for p in self.populations if p.count > 0}
        total = sum(declared.values())
        if total < 1:
            raise ValueError("composition must contain at least one vehicle")
        if len(self.ordering) != total or Counter(self.ordering) != declared:
            raise ValueError(
                "ordering must contain each class exactly as many times as declared"
            )

    @property
    def n(self) -> int:
        return len(self.ordering)

    def model_of(self, class_id: int) -> CarFollowingModel:
        for p in self.populations:
            if p.class_id == class_id:
                return p.model
        raise KeyError(class_id)


def block_ordering(populations: Sequence[PopulationSpec]) -> tuple[int, ...]:
    """All vehicles of each class in one contiguous block."""
    out: list[int] = []
    for p in populations:
        out.extend([p.class_id] * p.count)
    return tuple(out)


def spread_ordering(populations: Sequence[PopulationSpec]) -> tuple[int, ...]:
    """Classes interleaved as evenly as the counts allow."""
    total = sum(p.count for p in populations)
    placed = {p.class_id: 0 for p in populations}
    out: list[int] = []
    for j in range(1, total + 1):
        # place the class that is furthest behind its ideal share
        best = max(
            (p for p in populations if p.count > 0),
            key=lambda p: (p.count * j / total - placed[p.class_id], p.count, -p.class_id),
        )
        placed[best.class_id] += 1
        out.append(best.class_id)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class EquilibriumFlow:
    """Common speed, per-class headway, and the ring length they imply."""

    v_bar: float
    h_bar: Mapping[int, float]
    length: float


def equilibrium_from_velocity(comp: Composition, v_bar: float) -> EquilibriumFlow:
    """Equilibrium flow at a prescribed common speed.

    Raises :class:`NoEquilibriumError` if any class has no zero-acceleration
    headway at ``v_bar``.
    """
    h_bar = {
        p.class_id: preferred_headway(p.model, v_bar)
        for p in comp.populations
        if p.count > 0
    }
    length = math.fsum(h_bar[a] for a in comp.ordering)
    return EquilibriumFlow(v_bar=v_bar, h_bar=h_bar, length=length)


def equilibrium_from_length(comp: Composition, length: float) -> EquilibriumFlow:
    """Equilibrium flow on a ring of prescribed length.

    The total headway is strictly increasing in the common speed, so the speed
    is found by bisection until the length matches within ``LENGTH_TOL``.
    """
    if not math.isfinite(length):
        raise ValueError(f"length must be finite, got {length!r}")

    def total(v: float) -> float:
        return equilibrium_from_velocity(comp, v).length

    lo_len = total(0.0)
    v_hi = _speed_ceiling(comp, length)
    hi_len = total(v_hi)
    if not (lo_len < length < hi_len):
        raise NoEquilibriumError(
            f"length {length} outside feasible interval ({lo_len}, {hi_len})"
        )
    v_bar = bisect_root(
        lambda v: total(v) - length,
        0.0,
        v_hi,
        f_lo=lo_len - length,
        f_hi=hi_len - length,
        ftol=LENGTH_TOL,
    )
    return equilibrium_from_velocity(comp, v_bar)


def _speed_ceiling(comp: Composition, length: float) -> float:
    """Largest speed the solver may probe without leaving any class's range."""
    ceilings = []
    unknown = False
    for p in comp.populations:
        if p.count == 0:
            continue
        if isinstance(p.model, BandoFtl):
            ceilings.append(p.model.pref.v_max * (1.0 - 1e-12))
        elif p.model.v_sup is not None:
            ceilings.append(p.model.v_sup * (1.0 - 1e-12))
        else:
            unknown = True
    if not unknown:
        return min(ceilings)
    # expand until the target length is bracketed or a class runs out of range
    v = 1.0
    cap = min(ceilings) if ceilings else math.inf
    for _ in range(60):
        v = min(v, cap)
        try:
            if equilibrium_from_velocity(comp, v).length >= length or v == cap:
                return v
        except NoEquilibriumError as err:
            raise NoEquilibriumError(
                f"length {length} unreachable: {err}"
            ) from err
        v *= 2.0
    return v
