"""Randomized coding: fractional assignments and their entropy.

Instead of coding each point by the unique alphabet cell containing it, a
fractional assignment splits the measure across family members (each share
supported inside its member).  The entropy of such an assignment is the
Shannon sum of the share totals.  Its infimum over all assignments equals
the classical partition-entropy infimum: embedding turns any acceptable
alphabet into an assignment with no higher entropy, and sorting the shares
by mass and taking sequential set differences turns any assignment back
into an alphabet with no higher entropy (a majorization argument).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .alphabet import ExplicitFamily, Partition, is_finer, shannon_fn, shannon_vec
from .errors import PreconditionError
from .measure import (
    MASS_TOL,
    FiniteSpace,
    Measure,
    interval,
    is_empty,
    is_subset,
    mass,
    mix,
    points,
    restrict,
    set_difference,
    set_union_many,
)
from .solvers import entropy_exact_finite


@dataclass(frozen=True, slots=True)
class FractionalAssignment:
    """A split of ``target`` into sub-measures, one per family member.

    ``parts`` maps member indices to sub-measures; omitted members carry the
    zero measure.  Valid when every part is supported inside its member and
    the parts sum back to the target.
    """

    family: ExplicitFamily
    parts: tuple[tuple[int, Measure], ...]
    target: Measure
    _validated: bool = field(init=False, default=False, repr=False, compare=False)

    def part_masses(self) -> list[tuple[int, float]]:
        return [(i, m.total_mass) for i, m in self.parts]


def _probe_sets(mu: Measure):
    """Sets whose masses pin down an atoms-plus-linear-density measure."""
    if isinstance(mu.space, FiniteSpace):
        return [points(i) for i in range(mu.space.size)]
    probes = []
    breaks = sorted({b for p in mu.pieces for b in (p.lo, p.hi)})
    for lo, hi in zip(breaks, breaks[1:]):
        mid = 0.5 * (lo + hi)
        probes.append(interval(lo, mid, "()"))
        probes.append(interval(mid, hi, "()"))
    for x, _ in mu.atoms:
        probes.append(interval(x, x, "[]"))
    probes.append(interval(mu.space.lo, mu.space.hi, "[]"))
    return probes


def validate_assignment(m: FractionalAssignment, tol: float = MASS_TOL) -> None:
    """Raise PreconditionError naming the violated membership condition."""
    for idx, part in m.parts:
        if not 0 <= idx < len(m.family.members):
            raise PreconditionError(f"part index {idx} outside the family")
        member = m.family.members[idx]
        outside = part.total_mass - mass(part, member)
        if outside > tol:
            raise PreconditionError(
                f"support condition violated: part {idx} has mass {outside:.3g} outside its member")
    combined = mix([(1.0, part) for _, part in m.parts]) if m.parts else None
    for s in _probe_sets(m.target):
        got = mass(combined, s) if combined is not None else 0.0
        want = mass(m.target, s)
        if abs(got - want) > tol:
            raise PreconditionError(
                f"completeness violated: parts give mass {got:.6g} vs target {want:.6g} on a probe set")
    object.__setattr__(m, "_validated", True)


def _ensure_valid(m: FractionalAssignment):
    if not m._validated:
        validate_assignment(m)


def weighted_entropy(m: FractionalAssignment) -> float:
    """Shannon sum of the part totals of a valid fractional assignment."""
    _ensure_valid(m)
    return float(sum(shannon_fn(part.total_mass) for _, part in m.parts))


def embed_partition(mu: Measure, p: Partition, q: ExplicitFamily) -> FractionalAssignment:
    """Deterministic coding seen as a fractional assignment.

    Each cell goes to the first family member containing it; cells mapped to
    the same member pool their mass.  The result never has higher entropy
    than the partition (merging masses can only lower a Shannon sum).
    """
    if not is_finer(p, q):
        raise PreconditionError("partition is not finer than the family")
    groups: dict[int, list] = {}
    for cell in p.cells:
        if is_empty(cell):
            continue
        idx = next(i for i, member in enumerate(q.members) if is_subset(cell, member))
        groups.setdefault(idx, []).append(cell)
    parts = tuple(
        (idx, restrict(mu, set_union_many(cells)))
        for idx, cells in sorted(groups.items())
    )
    return FractionalAssignment(q, parts, mu)


def derandomize(m: FractionalAssignment) -> Partition:
    """Deterministic alphabet extracted from a fractional assignment.

    Positive-mass members are sorted by share mass (descending, ties by
    family index) and turned into sequential set differences.  The resulting
    partition is finer than the family and its entropy never exceeds the
    assignment's.
    """
    _ensure_valid(m)
    positive = [(i, part) for i, part in m.parts if part.total_mass > 0.0]
    mu = m.target
    if positive:
        union = set_union_many([m.family.members[i] for i, _ in positive])
        uncovered = mu.total_mass - mass(mu, union)
    else:
        uncovered = mu.total_mass
    if uncovered > MASS_TOL:
        raise PreconditionError(
            f"positive-mass members leave mass {uncovered:.3g} of the target uncovered")
    order = sorted(positive, key=lambda im: (-im[1].total_mass, im[0]))
    cells = []
    taken = None
    for i, _ in order:
        member = m.family.members[i]
        if taken is None:
            cell, taken = member, member
        else:
            cell = set_difference(member, taken)
            taken = set_union_many([taken, member])
        if not is_empty(cell):
            cells.append(cell)
    return Partition(tuple(cells))


def random_fractional_assignment(mu: Measure, q: ExplicitFamily,
                                 rng: np.random.Generator) -> FractionalAssignment:
    """Uniform-simplex split of each point's mass across its containing members.

    Finite spaces only: there the assignment space is exactly a product of
    simplices, one per positive-mass point.
    """
    if not isinstance(mu.space, FiniteSpace):
        raise PreconditionError("random assignments are defined on finite spaces")
    n = mu.space.size
    n_members = len(q.members)
    member_sets = [frozenset(s.points) for s in q.members]
    u = rng.random((n, n_members))
    cols = [[0.0] * n for _ in range(n_members)]
    for i, w in enumerate(mu.weights):
        if w <= 0.0:
            continue
        cands = [j for j, ms in enumerate(member_sets) if i in ms]
        if not cands:
            raise PreconditionError(f"point {i} has positive mass but no containing member")
        draws = [-math.log(1.0 - u[i][j]) for j in cands]  # exponentials -> flat Dirichlet
        total = sum(draws)
        if total <= 0.0:
            draws, total = [1.0] * len(cands), float(len(cands))
        for j, e in zip(cands, draws):
            cols[j][i] = w * e / total
    parts = tuple(
        (j, Measure(mu.space, tuple(col)))
        for j, col in enumerate(cols) if sum(col) > 0.0
    )
    return FractionalAssignment(q, parts, mu)


def weighted_entropy_infimum(mu: Measure, q: ExplicitFamily,
                             trials: int = 1000, seed: int = 0,
                             budget: int = 10_000_000) -> float:
    """Infimum of weighted entropy on a finite instance.

    Equals the classical exact entropy.  As a safety net, a randomized
    simplex search followed by a block-move descent double-checks that no
    fractional candidate beats the classical value beyond 1e-6.
    """
    exact, _ = entropy_exact_finite(mu, q, budget=budget)
    if math.isinf(exact):
        return exact

    rng = np.random.default_rng(seed)
    n_members = len(q.members)
    member_sets = [frozenset(s.points) for s in q.members]
    active = [(i, w, [j for j, ms in enumerate(member_sets) if i in ms])
              for i, w in enumerate(mu.weights) if w > 0.0]
    found = 0.0 if not active else math.inf

    if active and trials > 0:
        masses = np.zeros((trials, n_members))
        shares = []
        for _, w, cands in active:
            e = rng.standard_exponential((trials, len(cands)))
            e *= w / e.sum(axis=1, keepdims=True)
            shares.append(e)
            masses[:, cands] += e
        vals = shannon_vec(masses).sum(axis=1)
        k = int(np.argmin(vals))
        found = float(vals[k])

        # block-move descent from the best sample: a point's share of the
        # objective is concave, so some optimum moves each mass whole
        assign = [cands[int(np.argmax(shares[t][k]))]
                  for t, (_, _, cands) in enumerate(active)]
        cols = np.zeros(n_members)
        for (_, w, _), j in zip(active, assign):
            cols[j] += w
        current = float(shannon_vec(cols).sum())
        improved = True
        while improved:
            improved = False
            for t, (_, w, cands) in enumerate(active):
                j0 = assign[t]
                for j in cands:
                    if j == j0:
                        continue
                    cols[j0] -= w
                    cols[j] += w
                    v = float(shannon_vec(cols).sum())
                    if v < current - 1e-12:
                        current = v
                        assign[t] = j0 = j
                        improved = True
                    else:
                        cols[j] -= w
                        cols[j0] += w
        found = min(found, current)

    if found < exact - 1e-6:
        raise RuntimeError(
            f"randomized search found weighted entropy {found} below the classical value {exact}")
    return exact


def hlp_check(x, y, phi) -> bool:
    """Executable witness of the concave rearrangement inequality.

    For a nonincreasing ``x`` whose prefix sums never exceed those of ``y``
    and whose total matches, a continuous concave ``phi`` with phi(0) = 0
    must satisfy sum phi(x) >= sum phi(y).  Violated hypotheses raise, each
    with its own message; a False return would indicate a genuine bug.
    """
    xs = [float(v) for v in x]
    ys = [float(v) for v in y]
    width = max(len(xs), len(ys))
    xs += [0.0] * (width - len(xs))
    ys += [0.0] * (width - len(ys))
    for a, b in zip(xs, xs[1:]):
        if b > a + 1e-12:
            raise PreconditionError("first sequence is not nonincreasing")
    if abs(sum(xs) - sum(ys)) > MASS_TOL:
        raise PreconditionError(f"sequence sums differ: {sum(xs):.9g} vs {sum(ys):.9g}")
    px = py = 0.0
    for k, (a, b) in enumerate(zip(xs, ys)):
        px += a
        py += b
        if px > py + MASS_TOL:
            raise PreconditionError(f"prefix sum violated at position {k + 1}")
    return sum(phi(v) for v in xs) >= sum(phi(v) for v in ys) - MASS_TOL
