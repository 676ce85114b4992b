"""Entropy solvers: the infimum of partition entropy over acceptable alphabets.

Three routes:

* ``entropy_exact_finite`` enumerates every point-to-member assignment on a
  finite space and returns the true optimum (with its argmin alphabet).
* ``entropy_greedy`` runs the mass-greedy selection loop on an explicit
  family; always an upper bound for the exact value.
* ``entropy_line_dp`` discretises a line measure onto a grid and finds the
  optimal partition into contiguous cells of bounded length by dynamic
  programming; an upper bound for the ball-family entropy that converges as
  the grid refines.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .alphabet import ExplicitFamily, Partition, shannon_vec
from .errors import BudgetError, PreconditionError, ResolutionError, SpaceMismatchError
from .measure import (
    MASS_TOL,
    ZERO_TOL,
    FiniteSpace,
    Interval,
    IntervalUnion,
    LineSpace,
    Measure,
    MeasurableSet,
    PointSet,
    grid_masses,
    is_empty,
    mass,
    set_difference,
)

DEFAULT_BUDGET = 10_000_000
_CHUNK = 1 << 16


def greedy_cover_partition(components: list[tuple[float, Measure]],
                           pool: list[MeasurableSet]) -> Partition:
    """Mass-greedy disjointification of a pool of candidate sets.

    Repeatedly selects the pool set with the largest weighted mass, subtracts
    it from every remaining set, and stops once the largest mass is zero.
    The selected sets are pairwise disjoint by construction and each is
    contained in the pool set it descends from.  Ties break by the earliest
    position in the pool.
    """
    sets = [s for s in pool if not is_empty(s)]
    selected: list[MeasurableSet] = []
    while sets:
        masses = [sum(a * mass(m, s) for a, m in components) for s in sets]
        best = max(range(len(sets)), key=lambda i: (masses[i], -i))
        if masses[best] <= ZERO_TOL:
            break
        chosen = sets[best]
        selected.append(chosen)
        sets = [d for d in (set_difference(s, chosen) for s in sets) if not is_empty(d)]
    return Partition(tuple(selected))


def entropy_greedy(mu: Measure, q: ExplicitFamily) -> tuple[float, Partition]:
    """Greedy upper bound for the entropy of ``mu`` w.r.t. an explicit family.

    Returns infinity when the family fails to carry all of the mass (no
    acceptable alphabet exists at all); the partial alphabet of the covered
    part is still returned.
    """
    if not isinstance(q, ExplicitFamily):
        raise PreconditionError("entropy_greedy needs an explicit family")
    p = greedy_cover_partition([(1.0, mu)], list(q.members))
    cell_masses = [mass(mu, c) for c in p.cells]
    value = float(sum(-m * math.log2(m) for m in cell_masses if m > 0.0))
    if mu.total_mass - sum(cell_masses) > MASS_TOL:
        return math.inf, p
    return value, p


def _candidate_groups(mu: Measure, q: ExplicitFamily):
    """Group positive-mass points by the set of family members containing them."""
    member_sets = [frozenset(s.points) for s in q.members]
    groups: dict[tuple[int, ...], list] = {}
    order: list[tuple[int, ...]] = []
    for i, w in enumerate(mu.weights):
        if w <= 0.0:
            continue
        cands = tuple(j for j, ms in enumerate(member_sets) if i in ms)
        if not cands:
            return None
        if cands not in groups:
            groups[cands] = [0.0, []]
            order.append(cands)
        groups[cands][0] += w
        groups[cands][1].append(i)
    return [(cands, groups[cands][0], groups[cands][1]) for cands in order]


def entropy_exact_finite(mu: Measure, q: ExplicitFamily,
                         budget: int = DEFAULT_BUDGET) -> tuple[float, Partition | None]:
    """Exact entropy on a finite space by assignment enumeration.

    Every point is assigned to one containing family member; merging cells
    assigned to the same member only lowers the entropy, so the optimum over
    all acceptable alphabets is attained on assignment-induced ones.  Points
    sharing the same candidate members are moved as a block (the objective is
    concave in how a block splits, so some optimum keeps blocks together),
    which shrinks the enumeration without losing exactness.

    Returns (inf, None) when a positive-mass point lies in no member.
    """
    if not isinstance(mu.space, FiniteSpace):
        raise SpaceMismatchError("entropy_exact_finite needs a finite-space measure")
    if not isinstance(q, ExplicitFamily):
        raise PreconditionError("entropy_exact_finite needs an explicit family")
    groups = _candidate_groups(mu, q)
    if groups is None:
        return math.inf, None
    n_members = len(q.members)
    if not groups:
        return 0.0, Partition(())

    total = 1
    for cands, _, _ in groups:
        total *= len(cands)
        if total > budget:
            raise BudgetError(
                f"assignment count exceeds budget {budget}; use entropy_greedy instead")

    strides = [1] * len(groups)
    for g in range(len(groups) - 2, -1, -1):
        strides[g] = strides[g + 1] * len(groups[g + 1][0])

    cand_arrays = [np.asarray(cands, dtype=np.int64) for cands, _, _ in groups]
    weights = [w for _, w, _ in groups]

    best_val = math.inf
    best_idx = -1
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        rows = np.arange(idx.size)
        m = np.zeros((idx.size, n_members))
        for g, cands in enumerate(cand_arrays):
            choice = (idx // strides[g]) % cands.size
            m[rows, cands[choice]] += weights[g]
        vals = shannon_vec(m).sum(axis=1)
        j = int(np.argmin(vals))
        if vals[j] < best_val - 1e-15:
            best_val = float(vals[j])
            best_idx = start + j

    cells: dict[int, list[int]] = {}
    for g, (cands, _, pts) in enumerate(groups):
        member = cands[(best_idx // strides[g]) % len(cands)]
        cells.setdefault(member, []).extend(pts)
    partition = Partition(tuple(
        PointSet(tuple(sorted(cells[j]))) for j in sorted(cells)))
    return best_val, partition


@numba.njit(cache=True)
def _segment_dp(pos, psum, reach, max_cells):  # pragma: no cover - compiled
    k = pos.shape[0]
    best = np.empty(k)
    prev = np.full(k, -1, np.int64)
    cut = np.full(k, -1, np.int64)
    best[0] = 0.0
    tlo = 0
    for u in range(1, k):
        j = pos[u]
        lo = j - max_cells
        while reach[tlo] < lo:
            tlo += 1
        b = np.inf
        arg = -1
        for t in range(tlo, u):
            m = psum[u] - psum[t]
            c = best[t] + (0.0 if m <= 0.0 else -m * np.log2(m))
            if c < b - 1e-15:
                b = c
                arg = t
        best[u] = b
        prev[u] = arg
        cut[u] = pos[arg] if pos[arg] >= lo else lo
    return best, prev, cut


def entropy_line_dp(mu: Measure, d: float, grid_n: int) -> tuple[float, Partition]:
    """Optimal contiguous-cell alphabet with cell length <= d on a grid.

    The support is split into ``grid_n`` equal cells; a dynamic program finds
    the partition into runs of consecutive cells (at most floor(d / width)
    per run) minimising the entropy.  Runs of zero-mass cells are skipped:
    each candidate boundary inside such a run leaves the reachable prefix
    mass unchanged, so only the run ends need to be visited, and null gaps
    may stay uncovered without affecting validity.
    """
    if not isinstance(mu.space, LineSpace):
        raise SpaceMismatchError("entropy_line_dp needs a line measure")
    if grid_n < 16:
        raise PreconditionError("grid_n must be at least 16")
    if not d > 0:
        raise PreconditionError("cell length bound must be positive")
    lo, hi = mu.space.lo, mu.space.hi
    width = (hi - lo) / grid_n
    max_cells = int(d / width + 1e-9)
    if max_cells < 1:
        raise ResolutionError(
            f"cell bound {d} is below one grid cell ({width}); raise grid_n")

    masses = grid_masses(mu, grid_n)
    nz = np.flatnonzero(masses > 0.0) + 1
    pos = np.unique(np.concatenate(([0], nz, [grid_n])))
    csum = np.concatenate(([0.0], np.cumsum(masses)))
    psum = csum[pos]
    reach = np.empty(pos.size, dtype=np.int64)
    reach[:-1] = pos[1:] - 1
    reach[-1] = grid_n

    best, prev, cut = _segment_dp(pos, psum, reach, max_cells)

    bounds: list[tuple[int, int]] = []
    u = pos.size - 1
    while u > 0:
        if psum[u] - psum[prev[u]] > 0.0:  # the final filler segment can be massless
            bounds.append((int(cut[u]), int(pos[u])))
        u = int(prev[u])
    bounds.reverse()

    def x_at(i: int) -> float:
        return lo + (hi - lo) * i / grid_n

    cells = []
    for a, b in bounds:
        if b == grid_n:
            cells.append(IntervalUnion((Interval(x_at(a), hi, True, True),)))
        else:
            cells.append(IntervalUnion((Interval(x_at(a), x_at(b), True, False),)))
    return float(best[-1]), Partition(tuple(cells))
