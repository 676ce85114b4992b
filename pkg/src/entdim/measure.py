"""Ground spaces, measurable sets and measures.

Two kinds of ground space are supported: a finite space of labelled points
and a closed bounded interval of the real line.  Measures on the line are
a finite list of atoms plus a piecewise-linear density, so every mass
evaluation is closed form (trapezoid rule is exact for linear densities).

All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, SpaceMismatchError

ZERO_TOL = 1e-12
MASS_TOL = 1e-9

_FLAG_STR = {(True, True): "[]", (True, False): "[)", (False, True): "(]", (False, False): "()"}
_STR_FLAG = {v: k for k, v in _FLAG_STR.items()}


# ---------------------------------------------------------------------------
# ground spaces


@dataclass(frozen=True, slots=True)
class FiniteSpace:
    """Ground space of ``size`` points labelled 0 .. size-1."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise PreconditionError(f"finite space needs at least one point, got {self.size}")


@dataclass(frozen=True, slots=True)
class LineSpace:
    """Ground space = the closed interval [lo, hi] on the real line."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise PreconditionError(f"line support must have positive finite length, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo


GroundSpace = FiniteSpace | LineSpace


# ---------------------------------------------------------------------------
# measurable sets
#
# Interval endpoints are ordered through (value, epsilon) keys with epsilon in
# {-1, 0, +1} meaning just-before / at / just-after the value.  A start point
# maps to epsilon 0 (closed) or +1 (open), an end point to 0 or -1.  Plain
# lexicographic comparison of keys then answers every adjacency and overlap
# question exactly.


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float
    closed_lo: bool = True
    closed_hi: bool = True

    def __post_init__(self):
        if _skey(self) > _ekey(self):
            raise PreconditionError(f"empty or reversed interval {self}")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains_point(self, x: float) -> bool:
        return _skey(self) <= (x, 0) <= _ekey(self)

    def __repr__(self):
        flags = _FLAG_STR[(self.closed_lo, self.closed_hi)]
        return f"{flags[0]}{self.lo}, {self.hi}{flags[1]}"


def _skey(iv: Interval) -> tuple[float, int]:
    return (iv.lo, 0 if iv.closed_lo else 1)


def _ekey(iv: Interval) -> tuple[float, int]:
    return (iv.hi, 0 if iv.closed_hi else -1)


def _from_keys(sk: tuple[float, int], ek: tuple[float, int]) -> Interval:
    return Interval(sk[0], ek[0], sk[1] == 0, ek[1] == 0)


@dataclass(frozen=True, slots=True)
class PointSet:
    """Subset of a finite ground space, stored as sorted distinct indices."""

    points: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(sorted(set(self.points)))
        if pts != self.points:
            object.__setattr__(self, "points", pts)


@dataclass(frozen=True, slots=True)
class IntervalUnion:
    """Finite union of disjoint intervals, sorted by left endpoint."""

    intervals: tuple[Interval, ...]

    def __post_init__(self):
        ivs = self.intervals
        for a, b in zip(ivs, ivs[1:]):
            if _skey(b) <= _ekey(a):
                raise PreconditionError(f"intervals overlap or are unsorted: {a} vs {b}")

    def contains_point(self, x: float) -> bool:
        return any(iv.contains_point(x) for iv in self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals


MeasurableSet = PointSet | IntervalUnion

EMPTY_INTERVALS = IntervalUnion(())
EMPTY_POINTS = PointSet(())


def interval(lo: float, hi: float, flags: str = "[]") -> IntervalUnion:
    """Single-interval union; ``flags`` is one of ``[]  [)  (]  ()``."""
    cl, ch = _STR_FLAG[flags]
    return IntervalUnion((Interval(lo, hi, cl, ch),))


def points(*idx: int) -> PointSet:
    return PointSet(tuple(idx))


def _check_same_kind(a: MeasurableSet, b: MeasurableSet):
    if isinstance(a, PointSet) != isinstance(b, PointSet):
        raise SpaceMismatchError(f"cannot combine {type(a).__name__} with {type(b).__name__}")


def set_union(a: MeasurableSet, b: MeasurableSet) -> MeasurableSet:
    _check_same_kind(a, b)
    if isinstance(a, PointSet):
        return PointSet(tuple(set(a.points) | set(b.points)))
    merged = []
    for iv in sorted(a.intervals + b.intervals, key=_skey):
        if merged and _skey(iv) <= (_ekey(merged[-1])[0], _ekey(merged[-1])[1] + 1):
            if _ekey(iv) > _ekey(merged[-1]):
                merged[-1] = _from_keys(_skey(merged[-1]), _ekey(iv))
        else:
            merged.append(iv)
    return IntervalUnion(tuple(merged))


def set_union_many(sets: list[MeasurableSet]) -> MeasurableSet:
    """Union of many sets in one sort-and-merge pass (overlaps allowed)."""
    if not sets:
        raise PreconditionError("union of nothing")
    if isinstance(sets[0], PointSet):
        acc: set[int] = set()
        for s in sets:
            _check_same_kind(sets[0], s)
            acc |= set(s.points)
        return PointSet(tuple(acc))
    merged: list[Interval] = []
    all_ivs = []
    for s in sets:
        _check_same_kind(sets[0], s)
        all_ivs.extend(s.intervals)
    for iv in sorted(all_ivs, key=_skey):
        if merged and _skey(iv) <= (_ekey(merged[-1])[0], _ekey(merged[-1])[1] + 1):
            if _ekey(iv) > _ekey(merged[-1]):
                merged[-1] = _from_keys(_skey(merged[-1]), _ekey(iv))
        else:
            merged.append(iv)
    return IntervalUnion(tuple(merged))


def set_intersection(a: MeasurableSet, b: MeasurableSet) -> MeasurableSet:
    _check_same_kind(a, b)
    if isinstance(a, PointSet):
        return PointSet(tuple(set(a.points) & set(b.points)))
    out = []
    i = j = 0
    ia, ib = a.intervals, b.intervals
    while i < len(ia) and j < len(ib):
        sk = max(_skey(ia[i]), _skey(ib[j]))
        ek = min(_ekey(ia[i]), _ekey(ib[j]))
        if sk <= ek:
            out.append(_from_keys(sk, ek))
        if _ekey(ia[i]) < _ekey(ib[j]):
            i += 1
        else:
            j += 1
    return IntervalUnion(tuple(out))


def _complement_in_range(ivs: tuple[Interval, ...], sk0, ek0) -> list[Interval]:
    # complement of sorted disjoint intervals within the key range [sk0, ek0]
    out = []
    cur = sk0
    for iv in ivs:
        if _ekey(iv) < cur:
            continue
        if _skey(iv) > ek0:
            break
        gap_end = (_skey(iv)[0], _skey(iv)[1] - 1)
        if cur <= gap_end:
            out.append(_from_keys(cur, min(gap_end, ek0)))
        cur = max(cur, (_ekey(iv)[0], _ekey(iv)[1] + 1))
        if cur > ek0:
            break
    if cur <= ek0:
        out.append(_from_keys(cur, ek0))
    return out


def set_difference(a: MeasurableSet, b: MeasurableSet) -> MeasurableSet:
    _check_same_kind(a, b)
    if isinstance(a, PointSet):
        return PointSet(tuple(set(a.points) - set(b.points)))
    if a.is_empty:
        return a
    hull_sk, hull_ek = _skey(a.intervals[0]), _ekey(a.intervals[-1])
    comp = IntervalUnion(tuple(_complement_in_range(b.intervals, hull_sk, hull_ek)))
    return set_intersection(a, comp)


def complement(space: GroundSpace, s: MeasurableSet) -> MeasurableSet:
    """Complement of ``s`` within the ground space."""
    if isinstance(space, FiniteSpace):
        if not isinstance(s, PointSet):
            raise SpaceMismatchError("point set expected on a finite space")
        return PointSet(tuple(i for i in range(space.size) if i not in set(s.points)))
    if not isinstance(s, IntervalUnion):
        raise SpaceMismatchError("interval union expected on a line space")
    return IntervalUnion(tuple(_complement_in_range(s.intervals, (space.lo, 0), (space.hi, 0))))


def diameter(s: MeasurableSet) -> float:
    """sup - inf of the closure; point sets use index span."""
    if isinstance(s, PointSet):
        return float(s.points[-1] - s.points[0]) if s.points else 0.0
    if s.is_empty:
        return 0.0
    return s.intervals[-1].hi - s.intervals[0].lo


def is_subset(a: MeasurableSet, b: MeasurableSet) -> bool:
    if isinstance(a, PointSet):
        return set(a.points) <= set(b.points)
    d = set_difference(a, b)
    return d.is_empty


def is_empty(s: MeasurableSet) -> bool:
    return not s.points if isinstance(s, PointSet) else s.is_empty


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True, slots=True)
class DensityPiece:
    """Linear density on [lo, hi]: value ``left`` at lo, ``right`` at hi."""

    lo: float
    hi: float
    left: float
    right: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise PreconditionError(f"density piece needs positive length, got [{self.lo}, {self.hi}]")
        if self.left < -ZERO_TOL or self.right < -ZERO_TOL:
            raise PreconditionError("negative density")

    @property
    def mass(self) -> float:
        return 0.5 * (self.left + self.right) * (self.hi - self.lo)

    def value_at(self, x: float) -> float:
        t = (x - self.lo) / (self.hi - self.lo)
        return self.left + t * (self.right - self.left)

    def mass_between(self, c: float, d: float) -> float:
        """Integral over [c, d] clipped to the piece."""
        c = max(c, self.lo)
        d = min(d, self.hi)
        if d <= c:
            return 0.0
        return 0.5 * (self.value_at(c) + self.value_at(d)) * (d - c)


@dataclass(frozen=True, slots=True)
class Measure:
    """A nonnegative measure on a ground space.

    Finite spaces carry one weight per point.  Line spaces carry atoms
    (location, mass) plus disjoint piecewise-linear density pieces.
    """

    space: GroundSpace
    weights: tuple[float, ...] = ()
    atoms: tuple[tuple[float, float], ...] = ()
    pieces: tuple[DensityPiece, ...] = ()
    total_mass: float = field(init=False, default=0.0, compare=False)

    def __post_init__(self):
        if isinstance(self.space, FiniteSpace):
            if self.atoms or self.pieces:
                raise SpaceMismatchError("atoms/pieces not allowed on a finite space")
            if len(self.weights) != self.space.size:
                raise PreconditionError(f"expected {self.space.size} weights, got {len(self.weights)}")
            if any(w < -ZERO_TOL for w in self.weights):
                raise PreconditionError("negative weight")
            total = float(sum(self.weights))
        else:
            if self.weights:
                raise SpaceMismatchError("weights not allowed on a line space")
            locs = [x for x, _ in self.atoms]
            if len(set(locs)) != len(locs):
                raise PreconditionError("atom locations must be pairwise distinct")
            for x, m in self.atoms:
                if not (self.space.lo <= x <= self.space.hi):
                    raise PreconditionError(f"atom at {x} outside support")
                if m < -ZERO_TOL:
                    raise PreconditionError("negative atom mass")
            atoms = tuple(sorted(self.atoms))
            if atoms != self.atoms:
                object.__setattr__(self, "atoms", atoms)
            pieces = tuple(sorted(self.pieces, key=lambda p: p.lo))
            for p in pieces:
                if p.lo < self.space.lo - ZERO_TOL or p.hi > self.space.hi + ZERO_TOL:
                    raise PreconditionError(f"density piece [{p.lo}, {p.hi}] outside support")
            for p, q in zip(pieces, pieces[1:]):
                if q.lo < p.hi - ZERO_TOL:
                    raise PreconditionError(f"density pieces overlap near {q.lo}")
            if pieces != self.pieces:
                object.__setattr__(self, "pieces", pieces)
            total = float(sum(m for _, m in self.atoms) + sum(p.mass for p in self.pieces))
        object.__setattr__(self, "total_mass", total)

    @property
    def is_probability(self) -> bool:
        return abs(self.total_mass - 1.0) <= MASS_TOL


def _check_set_on_space(space: GroundSpace, s: MeasurableSet):
    if isinstance(space, FiniteSpace):
        if not isinstance(s, PointSet):
            raise SpaceMismatchError("point set expected on a finite space")
        if s.points and (s.points[0] < 0 or s.points[-1] >= space.size):
            raise SpaceMismatchError(f"point index out of range for space of size {space.size}")
    else:
        if not isinstance(s, IntervalUnion):
            raise SpaceMismatchError("interval union expected on a line space")


def mass(mu: Measure, s: MeasurableSet) -> float:
    """mu(s), exact (atoms honour endpoint flags, densities integrate in closed form)."""
    _check_set_on_space(mu.space, s)
    if isinstance(mu.space, FiniteSpace):
        return float(sum(mu.weights[i] for i in s.points))
    total = 0.0
    for x, m in mu.atoms:
        if s.contains_point(x):
            total += m
    if mu.pieces:
        # pieces are disjoint and sorted, so both los and his are increasing
        for iv in s.intervals:
            i = bisect.bisect_left(mu.pieces, iv.lo, key=lambda p: p.hi)
            while i < len(mu.pieces) and mu.pieces[i].lo < iv.hi:
                total += mu.pieces[i].mass_between(iv.lo, iv.hi)
                i += 1
    return total


def restrict(mu: Measure, a: MeasurableSet) -> Measure:
    """Measure b -> mu(a & b)."""
    _check_set_on_space(mu.space, a)
    if isinstance(mu.space, FiniteSpace):
        keep = set(a.points)
        return Measure(mu.space, tuple(w if i in keep else 0.0 for i, w in enumerate(mu.weights)))
    atoms = tuple((x, m) for x, m in mu.atoms if a.contains_point(x))
    new_pieces = []
    for p in mu.pieces:
        for iv in a.intervals:
            c, d = max(p.lo, iv.lo), min(p.hi, iv.hi)
            if d > c:
                new_pieces.append(DensityPiece(c, d, p.value_at(c), p.value_at(d)))
    return Measure(mu.space, atoms=atoms, pieces=tuple(new_pieces))


def _merge_pieces(pieces: list[DensityPiece]) -> tuple[DensityPiece, ...]:
    # glue adjacent pieces that continue the same linear function
    out: list[DensityPiece] = []
    for p in sorted(pieces, key=lambda q: q.lo):
        if out:
            prev = out[-1]
            if prev.hi == p.lo and abs(prev.right - p.left) <= ZERO_TOL:
                slope_prev = (prev.right - prev.left) / (prev.hi - prev.lo)
                slope_p = (p.right - p.left) / (p.hi - p.lo)
                if abs(slope_prev - slope_p) <= ZERO_TOL:
                    out[-1] = DensityPiece(prev.lo, p.hi, prev.left, p.right)
                    continue
        out.append(p)
    return tuple(out)


def mix(components: list[tuple[float, Measure]]) -> Measure:
    """Weighted sum of measures on a common ground space.

    Weights must be nonnegative; they are not required to sum to 1, so the
    same operation builds probability mixtures and sub-measures.
    """
    if not components:
        raise PreconditionError("mix of nothing")
    space = components[0][1].space
    for a, m in components:
        if m.space != space:
            raise SpaceMismatchError("mixture components live on different ground spaces")
        if a < -ZERO_TOL:
            raise PreconditionError(f"negative mixture weight {a}")
    if isinstance(space, FiniteSpace):
        w = [0.0] * space.size
        for a, m in components:
            if a == 0.0:
                continue
            for i, wi in enumerate(m.weights):
                w[i] += a * wi
        return Measure(space, tuple(w))

    atom_acc: dict[float, float] = {}
    for a, m in components:
        if a == 0.0:
            continue
        for x, am in m.atoms:
            atom_acc[x] = atom_acc.get(x, 0.0) + a * am
    atoms = tuple(sorted((x, m) for x, m in atom_acc.items() if m > 0.0))

    breaks = sorted({b for a, m in components if a != 0.0 for p in m.pieces for b in (p.lo, p.hi)})
    pieces = []
    for lo, hi in zip(breaks, breaks[1:]):
        left = right = 0.0
        for a, m in components:
            if a == 0.0:
                continue
            for p in m.pieces:
                if p.lo <= lo and hi <= p.hi:
                    left += a * p.value_at(lo)
                    right += a * p.value_at(hi)
        if left > 0.0 or right > 0.0:
            pieces.append(DensityPiece(lo, hi, left, right))
    return Measure(space, atoms=atoms, pieces=_merge_pieces(pieces))


def grid_masses(mu: Measure, grid_n: int) -> np.ndarray:
    """Masses of ``grid_n`` equal-width cells tiling the support.

    Cell i is [x_i, x_{i+1}) except the last, which is closed at the right
    end.  Exact for atoms-plus-linear-density measures; vectorised so large
    grids stay cheap.
    """
    if not isinstance(mu.space, LineSpace):
        raise SpaceMismatchError("grid discretisation needs a line measure")
    if grid_n < 1:
        raise PreconditionError("grid_n must be positive")
    lo, hi = mu.space.lo, mu.space.hi
    xs = lo + (hi - lo) * np.arange(grid_n) / grid_n  # left edges; G(x) = mu([lo, x))
    g = np.zeros(grid_n, dtype=float)
    for p in mu.pieces:
        t = np.clip(xs, p.lo, p.hi) - p.lo
        slope = (p.right - p.left) / (p.hi - p.lo)
        g += p.left * t + 0.5 * slope * t * t
    for x, m in mu.atoms:
        g[xs > x] += m
    g = np.append(g, mu.total_mass)
    return np.maximum(np.diff(g), 0.0)


# ---------------------------------------------------------------------------
# convenience constructors


def finite_measure(weights) -> Measure:
    return Measure(FiniteSpace(len(tuple(weights))), tuple(float(w) for w in weights))


def uniform(lo: float = 0.0, hi: float = 1.0, space: LineSpace | None = None) -> Measure:
    """Uniform probability measure on [lo, hi]."""
    space = space or LineSpace(lo, hi)
    d = 1.0 / (hi - lo)
    return Measure(space, pieces=(DensityPiece(lo, hi, d, d),))


def point_mass(x: float, space: LineSpace | None = None, m: float = 1.0) -> Measure:
    space = space or LineSpace(min(0.0, x), max(1.0, x))
    return Measure(space, atoms=((x, m),))


def linear_density(lo: float, hi: float, left: float, right: float, space: LineSpace | None = None) -> Measure:
    space = space or LineSpace(lo, hi)
    return Measure(space, pieces=(DensityPiece(lo, hi, left, right),))


def cantor_prefractal(level: int, space: LineSpace | None = None) -> Measure:
    """Level-k middle-thirds pre-fractal: 2^k equal-mass uniform pieces."""
    if level < 0:
        raise PreconditionError("level must be nonnegative")
    space = space or LineSpace(0.0, 1.0)
    segs = [(0.0, 1.0)]
    for _ in range(level):
        nxt = []
        for a, b in segs:
            third = (b - a) / 3.0
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        segs = nxt
    density = (3.0 / 2.0) ** level
    return Measure(space, pieces=tuple(DensityPiece(a, b, density, density) for a, b in segs))


def cantor_support(level: int) -> IntervalUnion:
    """The 2^k closed intervals of the level-k middle-thirds construction."""
    m = cantor_prefractal(level)
    return IntervalUnion(tuple(Interval(p.lo, p.hi) for p in m.pieces))


# ---------------------------------------------------------------------------
# JSON serialisation


def space_to_json(space: GroundSpace) -> dict:
    if isinstance(space, FiniteSpace):
        return {"kind": "finite", "n": space.size}
    return {"kind": "line", "support": [space.lo, space.hi]}


def space_from_json(obj: dict) -> GroundSpace:
    if obj["kind"] == "finite":
        return FiniteSpace(int(obj["n"]))
    if obj["kind"] == "line":
        lo, hi = obj["support"]
        return LineSpace(float(lo), float(hi))
    raise PreconditionError(f"unknown space kind {obj.get('kind')!r}")


def set_to_json(s: MeasurableSet) -> dict:
    if isinstance(s, PointSet):
        return {"kind": "points", "points": list(s.points)}
    return {
        "kind": "intervals",
        "intervals": [
            {"interval": [iv.lo, iv.hi], "flags": _FLAG_STR[(iv.closed_lo, iv.closed_hi)]}
            for iv in s.intervals
        ],
    }


def set_from_json(obj: dict) -> MeasurableSet:
    if obj["kind"] == "points":
        return PointSet(tuple(int(i) for i in obj["points"]))
    if obj["kind"] == "intervals":
        ivs = []
        for rec in obj["intervals"]:
            lo, hi = rec["interval"]
            cl, ch = _STR_FLAG[rec.get("flags", "[]")]
            ivs.append(Interval(float(lo), float(hi), cl, ch))
        return IntervalUnion(tuple(ivs))
    raise PreconditionError(f"unknown set kind {obj.get('kind')!r}")


def measure_to_json(mu: Measure) -> dict:
    out: dict = {"space": space_to_json(mu.space)}
    if isinstance(mu.space, FiniteSpace):
        out["weights"] = list(mu.weights)
        return out
    out["atoms"] = [{"location": x, "mass": m} for x, m in mu.atoms]
    out["pieces"] = [
        {"interval": [p.lo, p.hi], "flags": "[]", "density_left": p.left, "density_right": p.right}
        for p in mu.pieces
    ]
    return out


def measure_from_json(obj: dict) -> Measure:
    space = space_from_json(obj["space"])
    if isinstance(space, FiniteSpace):
        return Measure(space, tuple(float(w) for w in obj.get("weights", ())))
    atoms = tuple((float(a["location"]), float(a["mass"])) for a in obj.get("atoms", ()))
    pieces = tuple(
        DensityPiece(float(p["interval"][0]), float(p["interval"][1]),
                     float(p["density_left"]), float(p["density_right"]))
        for p in obj.get("pieces", ())
    )
    return Measure(space, atoms=atoms, pieces=pieces)
