"""Seeded random instance generators for sweeps and verification suites."""

from __future__ import annotations

import numpy as np

from .alphabet import ExplicitFamily
from .measure import FiniteSpace, Measure, PointSet, finite_measure


def random_finite_instance(rng: np.random.Generator, max_points: int = 8,
                           max_members: int = 5) -> tuple[Measure, ExplicitFamily]:
    """Random probability measure plus a covering explicit family.

    Every point is guaranteed to lie in at least one member, so the exact
    entropy is finite and the fractional-assignment space is nonempty.
    """
    n = int(rng.integers(2, max_points + 1))
    m = int(rng.integers(2, max_members + 1))
    weights = rng.dirichlet(np.ones(n))
    membership = rng.random((m, n)) < 0.5
    for i in range(n):
        if not membership[:, i].any():
            membership[int(rng.integers(0, m)), i] = True
    for j in range(m):
        if not membership[j].any():
            membership[j, int(rng.integers(0, n))] = True
    family = ExplicitFamily(tuple(
        PointSet(tuple(int(i) for i in np.flatnonzero(membership[j])))
        for j in range(m)))
    return finite_measure(weights), family


def random_sources(rng: np.random.Generator, n_sources: int,
                   n_points: int) -> list[tuple[float, Measure]]:
    """Random mixture weights and component measures on one finite space."""
    mix_weights = rng.dirichlet(np.ones(n_sources))
    space = FiniteSpace(n_points)
    out = []
    for a in mix_weights:
        w = rng.dirichlet(np.ones(n_points))
        out.append((float(a), Measure(space, tuple(float(v) for v in w))))
    return out


def random_covering_family(rng: np.random.Generator, n_points: int,
                           max_members: int = 4) -> ExplicitFamily:
    m = int(rng.integers(2, max_members + 1))
    membership = rng.random((m, n_points)) < 0.5
    for i in range(n_points):
        if not membership[:, i].any():
            membership[int(rng.integers(0, m)), i] = True
    for j in range(m):
        if not membership[j].any():
            membership[j, int(rng.integers(0, n_points))] = True
    return ExplicitFamily(tuple(
        PointSet(tuple(int(i) for i in np.flatnonzero(membership[j])))
        for j in range(m)))


def random_majorization_pair(rng: np.random.Generator,
                             max_len: int = 50) -> tuple[list[float], list[float]]:
    """(x, y) with x nonincreasing, equal sums, and y prefix-dominating x.

    x starts as a sorted probability vector; y applies random backward
    transfers (mass moved to earlier positions), which can only raise the
    prefix sums.  Either side may carry a zero-padded tail.
    """
    k = int(rng.integers(2, max_len + 1))
    x = np.sort(rng.random(k))[::-1]
    x = x / x.sum()
    y = x.copy()
    for _ in range(int(rng.integers(1, 3 * k))):
        i = int(rng.integers(0, k - 1))
        j = int(rng.integers(i + 1, k))
        d = float(rng.random()) * y[j]
        y[j] -= d
        y[i] += d
    xs, ys = list(map(float, x)), list(map(float, y))
    if rng.random() < 0.5:
        xs += [0.0] * int(rng.integers(1, max_len - k + 2))
    if rng.random() < 0.5:
        ys += [0.0] * int(rng.integers(1, max_len - k + 2))
    return xs, ys
