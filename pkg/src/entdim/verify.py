"""Property verification suites: seeded sweeps with counterexample capture.

Each suite returns a JSON-ready dict with one entry per checked property;
the first failing instance is dumped for reproduction.
"""

from __future__ import annotations

import math

import numpy as np

from .alphabet import partition_entropy, shannon_fn
from .dimension import entropy_dimension, young_bound_check
from .instances import (
    random_covering_family,
    random_finite_instance,
    random_majorization_pair,
    random_sources,
)
from .measure import LineSpace, cantor_prefractal, measure_to_json, mix, point_mass, uniform
from .mixture import verify_sandwich
from .solvers import entropy_exact_finite
from .weighted import (
    derandomize,
    hlp_check,
    random_fractional_assignment,
    weighted_entropy,
)


class _Recorder:
    def __init__(self, suite: str, seed: int):
        self.suite = suite
        self.seed = seed
        self.properties: dict[str, dict] = {}
        self.counterexample = None

    def check(self, prop: str, ok: bool, dump=None):
        rec = self.properties.setdefault(prop, {"checks": 0, "failures": 0, "passed": True})
        rec["checks"] += 1
        if not ok:
            rec["failures"] += 1
            rec["passed"] = False
            if self.counterexample is None:
                self.counterexample = {"property": prop, **(dump() if dump else {})}

    def result(self, **extra) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "properties": self.properties,
            "passed": all(p["passed"] for p in self.properties.values()),
            "counterexample": self.counterexample,
            **extra,
        }


def weighted_suite(instances: int = 500, assignments: int = 1000, seed: int = 0,
                   max_points: int = 8, max_members: int = 5) -> dict:
    """Random-coding equals deterministic coding, instance by instance."""
    rng = np.random.default_rng(seed)
    rec = _Recorder("weighted", seed)
    for _ in range(instances):
        mu, fam = random_finite_instance(rng, max_points, max_members)
        exact, _ = entropy_exact_finite(mu, fam)
        best = math.inf
        for _ in range(assignments):
            m = random_fractional_assignment(mu, fam, rng)
            h_hat = weighted_entropy(m)
            best = min(best, h_hat)
            h = partition_entropy(mu, derandomize(m))

            def dump(m=m, h=h, h_hat=h_hat):
                return {"measure": measure_to_json(mu), "parts": m.part_masses(),
                        "h": h, "h_hat": h_hat}

            rec.check("derandomize_never_worse", h <= h_hat + 1e-9, dump)
        rec.check("no_assignment_beats_exact", best >= exact - 1e-6,
                  lambda: {"measure": measure_to_json(mu), "best": best, "exact": exact})
    return rec.result(instances=instances, assignments=assignments)


def sandwich_suite(instances: int = 200, seed: int = 0) -> dict:
    """Mixture-entropy sandwich on exactly solvable finite instances."""
    rng = np.random.default_rng(seed)
    rec = _Recorder("sandwich", seed)
    for _ in range(instances):
        n_sources = int(rng.integers(2, 4))
        n_points = int(rng.integers(2, 7))
        sources = random_sources(rng, n_sources, n_points)
        fam = random_covering_family(rng, n_points)
        rep = verify_sandwich(sources, fam)
        rec.check("sandwich_holds", rep.holds, lambda: {
            "weights": list(rep.weights),
            "component_entropies": list(rep.component_entropies),
            "mixture_entropy": rep.mixture_entropy,
            "lower": rep.lower, "upper": rep.upper,
        })
    return rec.result(instances=instances)


def hlp_suite(trials: int = 10_000, seed: int = 0, max_len: int = 50) -> dict:
    """Concave rearrangement inequality on random majorization pairs."""
    rng = np.random.default_rng(seed)
    rec = _Recorder("hlp", seed)
    for _ in range(trials):
        x, y = random_majorization_pair(rng, max_len)
        for name, phi in (("shannon", shannon_fn), ("sqrt", math.sqrt)):
            rec.check(f"hlp_{name}", hlp_check(x, y, phi),
                      lambda x=x, y=y: {"x": x, "y": y})
    return rec.result(trials=trials)


def young_suite(grid_n: int = 1 << 14, seed: int = 0) -> dict:
    """Dimension-vs-local-dimension chains on the reference measures."""
    rec = _Recorder("young", seed)
    space = LineSpace(0.0, 1.0)
    dyadic = [2.0 ** -k for k in range(6, 13)]

    rep = young_bound_check(uniform(0, 1), dyadic, grid_n, quadrature_n=64)
    rec.check("uniform_chain", rep.chain_holds, lambda: {"report": _young_dump(rep)})
    rec.check("uniform_values", abs(rep.integral - 1.0) <= 0.05 and abs(rep.esssup - 1.0) <= 0.05,
              lambda: {"report": _young_dump(rep)})

    mixed = mix([(0.5, uniform(0, 1)), (0.5, point_mass(0.5, space=space))])
    rep = young_bound_check(mixed, dyadic, grid_n, quadrature_n=256)
    rec.check("mixture_chain", rep.chain_holds, lambda: {"report": _young_dump(rep)})
    rec.check("mixture_improvement", rep.improvement >= 0.4,
              lambda: {"report": _young_dump(rep)})

    triadic = [3.0 ** -j / 2 for j in range(2, 6)]
    deep = [3.0 ** -j / 2 for j in range(2, 13)]
    rep = young_bound_check(cantor_prefractal(12), triadic, max(grid_n, 1 << 16),
                            quadrature_n=128, local_deltas=deep, local_window=8)
    rec.check("cantor_chain", rep.chain_holds, lambda: {"report": _young_dump(rep)})
    return rec.result(grid_n=grid_n)


def _young_dump(rep) -> dict:
    return {
        "dim_upper": rep.estimate.upper,
        "integral": rep.integral,
        "esssup": rep.esssup,
        "improvement": rep.improvement,
    }


def dimension_suite(grid_n: int = 1 << 14, seed: int = 0) -> dict:
    """Reference dimension estimates (used by the CLI verify front end)."""
    rec = _Recorder("dimension", seed)
    dyadic = [2.0 ** -k for k in range(6, 13)]
    est = entropy_dimension(uniform(0, 1), dyadic, grid_n)
    rec.check("uniform_is_one", abs(est.slope - 1.0) <= 0.05,
              lambda: {"slope": est.slope})
    est = entropy_dimension(point_mass(0.5, space=LineSpace(0, 1)), dyadic, grid_n)
    rec.check("atom_is_zero", est.slope == 0.0 and est.upper == 0.0,
              lambda: {"slope": est.slope})
    return rec.result(grid_n=grid_n)


SUITES = {
    "weighted": weighted_suite,
    "sandwich": sandwich_suite,
    "hlp": hlp_suite,
    "young": young_suite,
    "dimension": dimension_suite,
}
