"""Acceptance criteria, one test per criterion, at their stated tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Timings are wall clock and include everything the criterion
exercises.
"""

import time

import pytest

from entdim import (
    ExplicitFamily,
    Interval,
    LineSpace,
    cantor_prefractal,
    finite_measure,
    mix,
    partition_entropy,
    point_mass,
    points,
    uniform,
)
from entdim.alphabet import sort_cells
from entdim.dimension import (
    countable_mixture_dimension,
    entropy_dimension,
    mixture_dimension_check,
    young_bound_check,
)
from entdim.mixture import greedy_joint_alphabet, mixture_entropy_bounds, verify_sandwich
from entdim.verify import hlp_suite, sandwich_suite, weighted_suite

from oracles import CANTOR_DIMENSION, example_mix_mass, mu1_mass, mu2_mass, sh

GRID = 1 << 16
SPACE01 = LineSpace(0.0, 1.0)


def report(line):
    print(f"\n{line}")


def test_criterion_1_paper_example_reproduction(example):
    t0 = time.perf_counter()
    joint = greedy_joint_alphabet([
        (0.4, example.mu1, example.p1),
        (0.6, example.mu2, example.p2),
    ])
    expected_cells = (
        Interval(0.0, 0.1, True, False),
        Interval(0.1, 0.5, True, False),
        Interval(0.5, 0.6, True, False),
        Interval(0.6, 0.8, True, False),
        Interval(0.8, 1.0, True, True),
        Interval(1.0, 1.1, False, True),
    )
    assert tuple(c.intervals[0] for c in sort_cells(joint).cells) == expected_cells

    h1 = partition_entropy(example.mu1, example.p1)
    h2 = partition_entropy(example.mu2, example.p2)
    bounds = mixture_entropy_bounds([(0.4, h1), (0.6, h2)])
    h_mix = partition_entropy(example.mixture, joint)
    elapsed = time.perf_counter() - t0

    # closed-form integration oracle for every figure
    oracle_h1 = sum(sh(mu1_mass(a, b)) for a, b in
                    [(0.0, 0.4), (0.4, 0.6), (0.6, 0.8), (0.8, 1.0)])
    oracle_h2 = sum(sh(mu2_mass(a, b)) for a, b in
                    [(0.1, 0.5), (0.5, 0.7), (0.7, 0.9), (0.9, 1.1)])
    oracle_lower = 0.4 * oracle_h1 + 0.6 * oracle_h2
    oracle_upper = oracle_lower + sh(0.4) + sh(0.6)
    oracle_mix = sum(sh(example_mix_mass(a, b)) for a, b in
                     [(0.0, 0.1), (0.1, 0.5), (0.5, 0.6), (0.6, 0.8), (0.8, 1.0), (1.0, 1.1)])
    assert bounds.lower == pytest.approx(oracle_lower, abs=1e-12)
    assert bounds.upper == pytest.approx(oracle_upper, abs=1e-12)
    assert h_mix == pytest.approx(oracle_mix, abs=1e-12)

    assert round(bounds.lower, 2) == 1.93
    assert round(bounds.upper, 2) == 2.90
    assert round(h_mix, 2) == 2.36
    assert bounds.lower == pytest.approx(1.9281, abs=1e-3)
    assert bounds.upper == pytest.approx(2.8991, abs=1e-3)
    assert h_mix == pytest.approx(2.3612, abs=1e-3)
    assert elapsed < 1.0
    report(f"ACCEPTANCE 1 PASS paper example: {bounds.lower:.4f} / {bounds.upper:.4f} / "
           f"{h_mix:.4f} in {elapsed:.3f}s")


def test_criterion_2_weighted_equals_classical():
    t0 = time.perf_counter()
    result = weighted_suite(instances=500, assignments=1000, seed=123,
                            max_points=8, max_members=5)
    elapsed = time.perf_counter() - t0
    props = result["properties"]
    assert props["derandomize_never_worse"]["failures"] == 0
    assert props["derandomize_never_worse"]["checks"] == 500_000
    assert props["no_assignment_beats_exact"]["failures"] == 0
    assert result["passed"]
    assert elapsed < 60.0
    report(f"ACCEPTANCE 2 PASS weighted=classical: 500 instances x 1000 assignments "
           f"in {elapsed:.1f}s")


def test_criterion_3_mixture_sandwich():
    t0 = time.perf_counter()
    result = sandwich_suite(instances=200, seed=321)
    assert result["passed"]
    assert result["properties"]["sandwich_holds"]["checks"] == 200

    # sharpness: two sources pinned on separate atoms reach the upper bound
    s1 = finite_measure([1.0, 0.0])
    s2 = finite_measure([0.0, 1.0])
    q = ExplicitFamily((points(0), points(1)))
    rep = verify_sandwich([(0.3, s1), (0.7, s2)], q)
    assert rep.mixture_entropy == pytest.approx(rep.upper, abs=1e-9)
    elapsed = time.perf_counter() - t0
    report(f"ACCEPTANCE 3 PASS mixture sandwich: 200 instances, sharpness tight, "
           f"in {elapsed:.1f}s")


def test_criterion_4_majorization_inequality():
    t0 = time.perf_counter()
    result = hlp_suite(trials=10_000, seed=99, max_len=50)
    elapsed = time.perf_counter() - t0
    assert result["passed"]
    assert result["properties"]["hlp_shannon"]["checks"] == 10_000
    assert result["properties"]["hlp_sqrt"]["checks"] == 10_000
    report(f"ACCEPTANCE 4 PASS majorization: 10000 pairs x 2 concave functions "
           f"in {elapsed:.1f}s")


def test_criterion_5_dimension_estimates():
    dyadic = [2.0 ** -k for k in range(6, 13)]
    lines = []

    t0 = time.perf_counter()
    est = entropy_dimension(uniform(0, 1), dyadic, GRID)
    dt = time.perf_counter() - t0
    assert est.slope == pytest.approx(1.0, abs=0.05)
    assert dt < 30.0
    lines.append(f"uniform {est.slope:.4f} ({dt:.1f}s)")

    t0 = time.perf_counter()
    est = entropy_dimension(point_mass(0.5, space=SPACE01), dyadic, GRID)
    dt = time.perf_counter() - t0
    assert est.slope == 0.0 and est.upper == 0.0
    assert dt < 30.0
    lines.append(f"atom {est.slope:.4f} ({dt:.1f}s)")

    triadic = [3.0 ** -j / 2 for j in range(2, 6)]
    t0 = time.perf_counter()
    est = entropy_dimension(cantor_prefractal(12), triadic, GRID)
    dt = time.perf_counter() - t0
    assert est.slope == pytest.approx(CANTOR_DIMENSION, abs=0.05)
    assert dt < 30.0
    lines.append(f"cantor {est.slope:.4f} ({dt:.1f}s)")

    t0 = time.perf_counter()
    rep = mixture_dimension_check(
        [(0.5, uniform(0, 1)), (0.5, point_mass(0.5, space=SPACE01))], dyadic, GRID)
    dt = time.perf_counter() - t0
    assert rep.status == "ok"
    assert rep.mixture.slope == pytest.approx(0.5, abs=0.05)
    assert rep.combination_gap <= 0.05
    assert rep.upper_holds and rep.lower_holds
    assert dt < 90.0  # three estimates, each under the per-measure cap
    lines.append(f"mixture {rep.mixture.slope:.4f} ({dt:.1f}s)")

    report("ACCEPTANCE 5 PASS dimensions: " + ", ".join(lines))


def test_criterion_6_young_chain():
    t0 = time.perf_counter()
    mu = mix([(0.5, uniform(0, 1)), (0.5, point_mass(0.5, space=SPACE01))])
    rep = young_bound_check(mu, [2.0 ** -k for k in range(6, 13)], GRID, quadrature_n=256)
    elapsed = time.perf_counter() - t0
    assert rep.estimate.upper <= rep.integral + 0.05
    assert rep.integral <= rep.esssup + 0.05
    assert rep.integral == pytest.approx(0.5, abs=0.05)
    assert rep.esssup == pytest.approx(1.0, abs=0.05)
    assert rep.improvement >= 0.4
    report(f"ACCEPTANCE 6 PASS young chain: dim {rep.estimate.upper:.4f} <= "
           f"integral {rep.integral:.4f} <= esssup {rep.esssup:.4f}, "
           f"gap {rep.improvement:.2f} in {elapsed:.1f}s")


def test_criterion_7_atomic_series_dimension_zero():
    t0 = time.perf_counter()
    rep = countable_mixture_dimension(
        lambda k: 2.0 ** -k, lambda k: point_mass(1.0 / k, space=SPACE01),
        20, [2.0 ** -k for k in range(4, 15)], GRID, epsilon=1e-6)
    elapsed = time.perf_counter() - t0
    assert rep.head.slope <= 0.05
    assert rep.head.upper <= 0.05
    assert rep.upper_holds and rep.lower_holds
    report(f"ACCEPTANCE 7 PASS atomic series: estimate {rep.head.slope:.4f} <= 0.05 "
           f"in {elapsed:.1f}s")
