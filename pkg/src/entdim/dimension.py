"""Entropy-dimension estimation on the line.

The entropy of a measure w.r.t. balls of radius delta grows like
``dim * (-log2 delta)``; the estimators here sweep a grid of deltas, solve
each level with the contiguous-cell dynamic program, and read the rate off
least-squares slopes.  Sliding-window slopes proxy the limsup/liminf pair
(staircase-like measures genuinely oscillate); the full-range slope is the
scalar point estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import PreconditionError, ResolutionError, SpaceMismatchError
from .measure import (
    IntervalUnion,
    LineSpace,
    Measure,
    interval,
    mass,
    mix,
)
from .solvers import entropy_line_dp

DIM_TOL = 0.05


def _fit_slope(x: np.ndarray, y: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dx = x - x.mean()
    return float(np.dot(dx, y - y.mean()) / np.dot(dx, dx))


def window_slopes(x, y, window: int = 3) -> list[float]:
    """Least-squares slopes over every run of ``window`` consecutive points."""
    if window < 2:
        raise PreconditionError("window must span at least two points")
    if len(x) < window:
        raise PreconditionError(f"need at least {window} points, got {len(x)}")
    return [_fit_slope(x[i:i + window], y[i:i + window]) for i in range(len(x) - window + 1)]


def _trailing_extremes(ws: list[float], tail: int | None) -> tuple[float, float]:
    """(max, min) over the last ``tail`` windows; None means all windows.

    Limits live at the small-delta end of a sweep, so the trailing windows
    are the honest proxies; transition scales earlier in the sweep (an atom
    entering a ball, components merging) would otherwise leak in.
    """
    sel = ws if tail is None else ws[-tail:]
    return max(sel), min(sel)


def _check_deltas(deltas) -> list[float]:
    ds = [float(d) for d in deltas]
    if len(ds) < 2:
        raise PreconditionError("need at least two deltas")
    if any(d <= 0 for d in ds) or any(b >= a for a, b in zip(ds, ds[1:])):
        raise PreconditionError("deltas must be positive and strictly descending")
    return ds


@dataclass(frozen=True, slots=True)
class DimensionEstimate:
    """Entropy-vs-scale sweep with its slope summaries.

    ``upper``/``lower`` are the extreme window slopes (limsup/liminf
    proxies); ``slope`` is the single least-squares fit through the whole
    sweep and serves as the point estimate.
    """

    deltas: tuple[float, ...]
    entropies: tuple[float, ...]
    upper: float
    lower: float
    slope: float
    window_slopes: tuple[float, ...]

    @property
    def is_stable(self) -> bool:
        return self.upper - self.lower < DIM_TOL


def entropy_dimension(mu: Measure, deltas, grid_n: int, window: int = 3,
                      tail: int | None = 2) -> DimensionEstimate:
    """Estimate the entropy dimension of a line measure.

    Each delta is solved with cell-length bound 2 * delta (a ball of radius
    delta has diameter 2 * delta); the grid must leave at least 8 cells per
    smallest ball.  ``upper``/``lower`` come from the last ``tail`` windows.
    """
    if not isinstance(mu.space, LineSpace):
        raise SpaceMismatchError("entropy dimension needs a line measure")
    ds = _check_deltas(deltas)
    width = mu.space.length / grid_n
    if 2.0 * ds[-1] / width < 8.0:
        raise ResolutionError(
            f"grid_n {grid_n} leaves fewer than 8 cells per smallest delta {ds[-1]}")
    entropies = [entropy_line_dp(mu, 2.0 * d, grid_n)[0] for d in ds]
    x = -np.log2(np.array(ds))
    y = np.array(entropies)
    ws = window_slopes(x, y, window)
    upper, lower = _trailing_extremes(ws, tail)
    return DimensionEstimate(
        deltas=tuple(ds),
        entropies=tuple(entropies),
        upper=upper,
        lower=lower,
        slope=_fit_slope(x, y),
        window_slopes=tuple(ws),
    )


@dataclass(frozen=True, slots=True)
class MixtureDimensionReport:
    status: str  # "ok" or "inconclusive"
    weights: tuple[float, ...]
    components: tuple[DimensionEstimate, ...]
    mixture: DimensionEstimate
    upper_bound: float  # sum a_k upper_k
    lower_bound: float  # sum a_k lower_k
    upper_holds: bool
    lower_holds: bool
    expected_slope: float | None  # sum a_k slope_k when all components are stable
    combination_gap: float | None


def mixture_dimension_check(components: list[tuple[float, Measure]], deltas,
                            grid_n: int, window: int = 3, tail: int | None = 2,
                            tol: float = DIM_TOL) -> MixtureDimensionReport:
    """Check the convex-combination laws for the entropy dimension.

    The mixture's upper estimate must not exceed the weighted upper
    estimates (and symmetrically for lower), and when every component is
    stable the mixture's point estimate must match the weighted combination.
    Unstable components downgrade the report to "inconclusive" rather than
    failing.
    """
    weights = tuple(a for a, _ in components)
    if abs(sum(weights) - 1.0) > 1e-9 or any(a < 0 for a in weights):
        raise PreconditionError("weights must be nonnegative and sum to 1")
    estimates = tuple(entropy_dimension(mu, deltas, grid_n, window, tail) for _, mu in components)
    mixed = mix(components)
    mix_est = entropy_dimension(mixed, deltas, grid_n, window, tail)
    upper_bound = sum(a * e.upper for a, e in zip(weights, estimates))
    lower_bound = sum(a * e.lower for a, e in zip(weights, estimates))
    upper_holds = mix_est.upper <= upper_bound + tol
    lower_holds = mix_est.lower >= lower_bound - tol
    if all(e.is_stable for e in estimates):
        status = "ok"
        expected = sum(a * e.slope for a, e in zip(weights, estimates))
        gap = abs(mix_est.slope - expected)
    else:
        status = "inconclusive"
        expected = gap = None
    return MixtureDimensionReport(
        status, weights, estimates, mix_est,
        upper_bound, lower_bound, upper_holds, lower_holds, expected, gap)


@dataclass(frozen=True, slots=True)
class CountableMixtureReport:
    weights: tuple[float, ...]  # renormalised head weights
    tail_mass: float
    epsilon: float
    components: tuple[DimensionEstimate, ...]
    head: DimensionEstimate
    upper_bound: float  # sum a_k upper_k + epsilon
    lower_bound: float
    upper_holds: bool
    lower_holds: bool


def countable_mixture_dimension(weight_fn, measure_fn, n_terms: int, deltas,
                                grid_n: int, epsilon: float,
                                window: int = 3, tail: int | None = 2,
                                tol: float = DIM_TOL) -> CountableMixtureReport:
    """Truncated check of the countable convex-combination law.

    ``weight_fn(k)`` and ``measure_fn(k)`` describe the series for k >= 1.
    The neglected tail mass may cost at most ``epsilon`` of dimension (the
    box dimension of a line support is 1), so the tail must not exceed
    epsilon; heavier tails are a precondition error.  The truncated head is
    renormalised and checked like a finite mixture, with the epsilon slack
    added to the upper bound.
    """
    if n_terms < 1:
        raise PreconditionError("need at least one term")
    raw = [float(weight_fn(k)) for k in range(1, n_terms + 1)]
    if any(a < 0 for a in raw):
        raise PreconditionError("weights must be nonnegative")
    head_mass = sum(raw)
    tail_mass = 1.0 - head_mass
    if tail_mass > epsilon + 1e-12:
        raise PreconditionError(
            f"tail mass {tail_mass:.3g} exceeds epsilon {epsilon}; increase n_terms")
    measures = [measure_fn(k) for k in range(1, n_terms + 1)]
    weights = tuple(a / head_mass for a in raw)
    estimates = tuple(entropy_dimension(mu, deltas, grid_n, window, tail) for mu in measures)
    head = entropy_dimension(mix(list(zip(weights, measures))), deltas, grid_n, window, tail)
    upper_bound = sum(a * e.upper for a, e in zip(weights, estimates)) + epsilon
    lower_bound = sum(a * e.lower for a, e in zip(weights, estimates))
    return CountableMixtureReport(
        weights, max(tail_mass, 0.0), epsilon, estimates, head,
        upper_bound, lower_bound,
        head.upper <= upper_bound + tol,
        head.lower >= lower_bound - tol)


def covering_number(s: IntervalUnion, delta: float) -> int:
    """Smallest number of closed balls of radius delta covering the set.

    One left-to-right sweep is exact on the line: each ball is anchored at
    the first uncovered point.
    """
    if not delta > 0:
        raise PreconditionError("delta must be positive")
    count = 0
    covered = -math.inf
    for iv in s.intervals:
        if iv.hi <= covered + 1e-15:
            continue
        anchor = iv.lo if iv.lo > covered else covered
        while True:
            count += 1
            covered = anchor + 2.0 * delta
            if covered >= iv.hi - 1e-15:
                break
            anchor = covered
    return count


def box_dimension(s: IntervalUnion, deltas) -> float:
    """Upper box dimension estimate: slope of log2 N_delta vs -log2 delta."""
    ds = _check_deltas(deltas)
    counts = [covering_number(s, d) for d in ds]
    if any(c == 0 for c in counts):
        return 0.0
    x = -np.log2(np.array(ds))
    y = np.log2(np.array(counts, dtype=float))
    return _fit_slope(x, y)


class LocalDimension(NamedTuple):
    upper: float
    lower: float


def local_dimension(mu: Measure, x: float, deltas, window: int = 3,
                    tail: int | None = 2) -> LocalDimension:
    """Window-slope proxies for the local dimension at a point.

    Evaluates mu(B(x, delta)) in closed form per delta and fits
    log2-mass-vs-log2-delta slopes over the last ``tail`` windows.  A ball
    of zero mass means the point sits outside the closed support; both
    proxies are then infinite.
    """
    if not isinstance(mu.space, LineSpace):
        raise SpaceMismatchError("local dimension needs a line measure")
    if not (mu.space.lo <= x <= mu.space.hi):
        raise PreconditionError(f"{x} is outside the support")
    ds = _check_deltas(deltas)
    masses = [mass(mu, interval(x - d, x + d, "[]")) for d in ds]
    if any(m <= 0.0 for m in masses):
        return LocalDimension(math.inf, math.inf)
    xs = np.log2(np.array(ds))
    ys = np.log2(np.array(masses))
    upper, lower = _trailing_extremes(window_slopes(xs, ys, window), tail)
    return LocalDimension(upper, lower)


def quadrature_points(mu: Measure, quadrature_n: int) -> list[tuple[float, float]]:
    """Mass-weighted sample (point, weight) pairs covering the measure.

    Atoms keep their exact weights.  Density pieces share the remaining
    budget proportionally to mass, sampled at midpoints of equal
    subdivisions; when the pieces outnumber the budget, consecutive pieces
    pool their mass onto one representative midpoint instead.
    """
    pts = [(x, m) for x, m in mu.atoms if m > 0.0]
    pieces = [p for p in mu.pieces if p.mass > 0.0]
    if not pieces:
        return pts
    budget = max(quadrature_n - len(pts), 1)
    if len(pieces) > budget:
        stride = -(-len(pieces) // budget)
        for i in range(0, len(pieces), stride):
            block = pieces[i:i + stride]
            anchor = block[len(block) // 2]
            pts.append((0.5 * (anchor.lo + anchor.hi), sum(p.mass for p in block)))
        return pts
    density_mass = sum(p.mass for p in pieces)
    for p in pieces:
        k = max(1, round(budget * p.mass / density_mass))
        step = (p.hi - p.lo) / k
        for i in range(k):
            lo = p.lo + i * step
            pts.append((lo + 0.5 * step, p.mass_between(lo, lo + step)))
    return pts


@dataclass(frozen=True, slots=True)
class YoungReport:
    """Local-dimension bounds on the upper entropy dimension.

    ``integral`` is the mass-weighted mean of the pointwise upper local
    dimension; ``esssup`` is its max over the sample.  The chain
    dimension <= integral <= esssup (each with tolerance) is the checked
    property, and ``improvement`` is how much the integral undercuts the
    esssup.  ``lower_integral`` pairs the lower local dimensions with the
    lower entropy-dimension estimate for exploration only: whether that
    direction bounds anything is an open question, so nothing asserts it.
    """

    estimate: DimensionEstimate
    integral: float
    esssup: float
    lower_integral: float
    dim_vs_integral: bool
    integral_vs_esssup: bool
    improvement: float

    @property
    def chain_holds(self) -> bool:
        return self.dim_vs_integral and self.integral_vs_esssup


def young_bound_check(mu: Measure, deltas, grid_n: int, quadrature_n: int = 256,
                      window: int = 3, tail: int | None = 2,
                      tol: float = DIM_TOL, local_deltas=None,
                      local_window: int | None = None) -> YoungReport:
    """Compare the upper entropy dimension against its local-dimension bounds.

    ``local_deltas``/``local_window`` let the pointwise sweep go deeper and
    fit longer baselines than the grid-bound entropy sweep (ball masses are
    closed form, so no grid limits them).
    """
    est = entropy_dimension(mu, deltas, grid_n, window, tail)
    ld = deltas if local_deltas is None else local_deltas
    lw = window if local_window is None else local_window
    ltail = tail if local_window is None else None
    pts = quadrature_points(mu, quadrature_n)
    total = sum(w for _, w in pts)
    locals_ = [local_dimension(mu, x, ld, lw, ltail) for x, _ in pts]
    integral = sum(w * loc.upper for (_, w), loc in zip(pts, locals_)) / total
    lower_integral = sum(w * loc.lower for (_, w), loc in zip(pts, locals_)) / total
    esssup = max(loc.upper for (_, w), loc in zip(pts, locals_) if w > 0.0)
    return YoungReport(
        estimate=est,
        integral=integral,
        esssup=esssup,
        lower_integral=lower_integral,
        dim_vs_integral=est.upper <= integral + tol,
        integral_vs_esssup=integral <= esssup + tol,
        improvement=esssup - integral,
    )
