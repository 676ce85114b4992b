"""Coding alphabets: partitions, error-control families, partition entropy.

A partition is a finite list of disjoint measurable sets; it is a valid
alphabet for a measure when the cells carry all of its mass.  An
error-control family bounds the admissible cells: a partition is acceptable
when every cell fits inside some member of the family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .measure import (
    MASS_TOL,
    IntervalUnion,
    Measure,
    MeasurableSet,
    PointSet,
    diameter,
    is_empty,
    is_subset,
    mass,
    set_from_json,
    set_to_json,
    set_union_many,
)

_CLAMP = 1e-12


def shannon_fn(x: float) -> float:
    """-x * log2(x), with value 0 at both x = 0 and x = 1.

    Inputs within 1e-12 of [0, 1] are clamped; anything further out is a
    domain error.
    """
    if x < -_CLAMP or x > 1.0 + _CLAMP:
        raise PreconditionError(f"shannon_fn argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return -x * math.log2(x) if x > 0.0 else 0.0


def shannon_vec(x: np.ndarray) -> np.ndarray:
    """Elementwise shannon_fn on a nonnegative array."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0.0, -x * np.log2(np.where(x > 0.0, x, 1.0)), 0.0)
    return out


@dataclass(frozen=True, slots=True)
class Partition:
    """Candidate coding alphabet: a tuple of cells.

    Disjointness and coverage are checked by the operations that need them,
    not at construction, so partial alphabets can be built incrementally.
    """

    cells: tuple[MeasurableSet, ...]

    def __len__(self):
        return len(self.cells)


@dataclass(frozen=True, slots=True)
class ExplicitFamily:
    members: tuple[MeasurableSet, ...]

    def __post_init__(self):
        if not self.members:
            raise PreconditionError("explicit family must be nonempty")


@dataclass(frozen=True, slots=True)
class IntervalsMaxLength:
    """All intervals inside the support with length <= d."""

    d: float

    def __post_init__(self):
        if not self.d > 0:
            raise PreconditionError("interval length bound must be positive")


@dataclass(frozen=True, slots=True)
class BallsRadius:
    """All closed balls of radius delta; on the line, intervals of length 2*delta."""

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise PreconditionError("ball radius must be positive")


ErrorControlFamily = ExplicitFamily | IntervalsMaxLength | BallsRadius


def _coverage_stats(mu: Measure, p: Partition) -> tuple[float, float]:
    """(overlap mass, uncovered mass) of the cells w.r.t. mu."""
    if not p.cells:
        return 0.0, mu.total_mass
    union = set_union_many(list(p.cells))
    union_mass = mass(mu, union)
    cell_sum = sum(mass(mu, c) for c in p.cells)
    return cell_sum - union_mass, mu.total_mass - union_mass


def mu_partition_check(mu: Measure, p: Partition) -> bool:
    """True iff the cells are disjoint and carry all of mu's mass.

    Overlaps and uncovered remainders of measure zero are tolerated: only
    mass matters for coding.
    """
    overlap, uncovered = _coverage_stats(mu, p)
    return overlap <= MASS_TOL and uncovered <= MASS_TOL


def partition_entropy(mu: Measure, p: Partition) -> float:
    """Sum of shannon_fn over cell masses; requires a valid mu-partition."""
    overlap, uncovered = _coverage_stats(mu, p)
    if overlap > MASS_TOL:
        raise PreconditionError(f"partition cells overlap with mass {overlap:.3g}")
    if uncovered > MASS_TOL:
        raise PreconditionError(f"partition leaves mass {uncovered:.3g} uncovered")
    return float(sum(shannon_fn(mass(mu, c)) for c in p.cells))


def is_finer(p: Partition, q: ErrorControlFamily) -> bool:
    """True iff every cell fits inside some member of the family.

    Parametric families are never enumerated; acceptability reduces to a
    diameter test (a set of diameter <= d sits inside its hull, which is an
    admissible interval).
    """
    if isinstance(q, IntervalsMaxLength):
        return all(diameter(c) <= q.d + _CLAMP for c in p.cells)
    if isinstance(q, BallsRadius):
        return all(diameter(c) <= 2.0 * q.delta + _CLAMP for c in p.cells)
    return all(
        is_empty(c) or any(is_subset(c, m) for m in q.members)
        for c in p.cells
    )


def sort_cells(p: Partition) -> Partition:
    """Cells reordered by position (left endpoint / first index)."""

    def key(c: MeasurableSet):
        if isinstance(c, PointSet):
            return (c.points[0],) if c.points else (-math.inf,)
        if isinstance(c, IntervalUnion) and c.intervals:
            iv = c.intervals[0]
            return (iv.lo, 0 if iv.closed_lo else 1)
        return (-math.inf,)

    return Partition(tuple(sorted(p.cells, key=key)))


def partition_to_json(p: Partition) -> list:
    return [set_to_json(c) for c in p.cells]


def partition_from_json(obj: list) -> Partition:
    return Partition(tuple(set_from_json(c) for c in obj))


def family_to_json(q: ErrorControlFamily) -> dict:
    if isinstance(q, ExplicitFamily):
        return {"kind": "explicit", "sets": [set_to_json(m) for m in q.members]}
    if isinstance(q, IntervalsMaxLength):
        return {"kind": "max_length", "d": q.d}
    return {"kind": "balls", "delta": q.delta}


def family_from_json(obj: dict) -> ErrorControlFamily:
    kind = obj.get("kind")
    if kind == "explicit":
        return ExplicitFamily(tuple(set_from_json(s) for s in obj["sets"]))
    if kind == "max_length":
        return IntervalsMaxLength(float(obj["d"]))
    if kind == "balls":
        return BallsRadius(float(obj["delta"]))
    raise PreconditionError(f"unknown family kind {kind!r}")
