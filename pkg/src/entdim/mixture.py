"""Joint coding alphabets for mixtures of sources.

A source that emits from source k with probability a_k is coded with a
single alphabet built greedily from the per-source alphabets: pool all
cells, repeatedly keep the one with the largest mixture mass, and subtract
it from the rest.  The resulting alphabet's entropy is at most
``sum a_k h_k + sum sh(a_k)``, and the mixture entropy itself always sits
between ``sum a_k H_k`` and that same upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .alphabet import ExplicitFamily, Partition, mu_partition_check, shannon_fn
from .errors import PreconditionError, SpaceMismatchError
from .measure import MASS_TOL, Measure, MeasurableSet, mix
from .solvers import entropy_exact_finite, greedy_cover_partition

Source = tuple[float, Measure, Partition]


def _check_weights(weights) -> None:
    if any(a < -1e-12 or a > 1.0 + 1e-12 for a in weights):
        raise PreconditionError(f"mixture weights must lie in [0, 1], got {weights}")
    if abs(sum(weights) - 1.0) > MASS_TOL:
        raise PreconditionError(f"mixture weights must sum to 1, got {sum(weights)}")


def greedy_joint_alphabet(sources: list[Source]) -> Partition:
    """Greedy joint alphabet for any number of weighted sources.

    The pool starts as the union of all source alphabets (duplicate cells
    kept once, in first-seen order).  Each round selects the pool set with
    the largest mixture mass, ties breaking by pool position, and subtracts
    it everywhere; selection stops when the best mass is zero.  Every output
    cell is contained in some input cell, so acceptability w.r.t. any family
    transfers from the inputs to the output.
    """
    if not sources:
        raise PreconditionError("no sources")
    _check_weights([a for a, _, _ in sources])
    space = sources[0][1].space
    for a, mu, p in sources:
        if mu.space != space:
            raise SpaceMismatchError("sources live on different ground spaces")
        if not mu_partition_check(mu, p):
            raise PreconditionError("source alphabet is not a valid partition of its measure")
    pool: list[MeasurableSet] = []
    seen = set()
    for _, _, p in sources:
        for cell in p.cells:
            if cell not in seen:
                seen.add(cell)
                pool.append(cell)
    return greedy_cover_partition([(a, mu) for a, mu, _ in sources], pool)


@dataclass(frozen=True, slots=True)
class MixtureBounds:
    """Sandwich for the mixture entropy given per-source entropies."""

    lower: float
    upper: float
    coarse_upper: float  # replaces the Shannon-sum term by log2(n)


def mixture_entropy_bounds(sources: list[tuple[float, float]]) -> MixtureBounds:
    """Bounds on the mixture entropy from weights and per-source entropies.

    lower = sum a_k H_k, upper = lower + sum sh(a_k); infinite per-source
    entropies propagate.  Zero-weight sources contribute nothing.
    """
    if not sources:
        raise PreconditionError("no sources")
    _check_weights([a for a, _ in sources])
    for _, h in sources:
        if not math.isinf(h) and h < -1e-12:
            raise PreconditionError(f"negative source entropy {h}")
    live = [(a, h) for a, h in sources if a > 0.0]
    if any(math.isinf(h) for _, h in live):
        return MixtureBounds(math.inf, math.inf, math.inf)
    lower = sum(a * h for a, h in live)
    spread = sum(shannon_fn(a) for a, _ in live)
    return MixtureBounds(lower, lower + spread, lower + math.log2(len(sources)))


@dataclass(frozen=True, slots=True)
class SandwichReport:
    weights: tuple[float, ...]
    component_entropies: tuple[float, ...]
    mixture_entropy: float
    lower: float
    upper: float
    holds: bool

    @property
    def lower_gap(self) -> float:
        return self.mixture_entropy - self.lower

    @property
    def upper_gap(self) -> float:
        return self.upper - self.mixture_entropy


def verify_sandwich(sources: list[tuple[float, Measure]], q: ExplicitFamily,
                    budget: int = 10_000_000) -> SandwichReport:
    """Exact check of the mixture-entropy sandwich on a finite instance."""
    weights = tuple(a for a, _ in sources)
    _check_weights(weights)
    entropies = tuple(entropy_exact_finite(mu, q, budget=budget)[0] for _, mu in sources)
    mixture = mix(list(sources))
    mix_h, _ = entropy_exact_finite(mixture, q, budget=budget)
    bounds = mixture_entropy_bounds(list(zip(weights, entropies)))
    if math.isinf(bounds.lower):
        holds = math.isinf(mix_h)
    else:
        holds = bounds.lower - MASS_TOL <= mix_h <= bounds.upper + MASS_TOL
    return SandwichReport(weights, entropies, mix_h, bounds.lower, bounds.upper, holds)
