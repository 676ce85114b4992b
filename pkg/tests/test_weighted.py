import math

import numpy as np
import pytest

from entdim import (
    ExplicitFamily,
    Partition,
    PreconditionError,
    finite_measure,
    is_finer,
    mu_partition_check,
    partition_entropy,
    points,
    shannon_fn,
)
from entdim.instances import random_finite_instance, random_majorization_pair
from entdim.measure import FiniteSpace, Measure
from entdim.weighted import (
    FractionalAssignment,
    derandomize,
    embed_partition,
    hlp_check,
    random_fractional_assignment,
    validate_assignment,
    weighted_entropy,
    weighted_entropy_infimum,
)

from oracles import sh


def half_half_assignment():
    """All mass split evenly across two overlapping members."""
    mu = finite_measure([1.0])
    fam = ExplicitFamily((points(0), points(0)))
    part = Measure(FiniteSpace(1), (0.5,))
    return FractionalAssignment(fam, ((0, part), (1, part)), mu)


class TestWeightedEntropy:
    def test_single_part_is_zero(self):
        mu = finite_measure([0.4, 0.6])
        fam = ExplicitFamily((points(0, 1),))
        m = FractionalAssignment(fam, ((0, mu),), mu)
        assert weighted_entropy(m) == 0.0

    def test_even_split_is_one_bit(self):
        assert weighted_entropy(half_half_assignment()) == pytest.approx(1.0)

    def test_support_violation_named(self):
        mu = finite_measure([0.5, 0.5])
        fam = ExplicitFamily((points(0), points(1)))
        bad = FractionalAssignment(fam, ((0, mu),), mu)
        with pytest.raises(PreconditionError, match="support"):
            weighted_entropy(bad)

    def test_completeness_violation_named(self):
        mu = finite_measure([0.5, 0.5])
        fam = ExplicitFamily((points(0), points(1)))
        half = Measure(FiniteSpace(2), (0.5, 0.0))
        bad = FractionalAssignment(fam, ((0, half),), mu)
        with pytest.raises(PreconditionError, match="completeness"):
            weighted_entropy(bad)

    def test_validation_cached(self):
        m = half_half_assignment()
        validate_assignment(m)
        assert m._validated


class TestEmbedPartition:
    def test_disjoint_family_identity(self):
        mu = finite_measure([0.5, 0.3, 0.2])
        fam = ExplicitFamily((points(0), points(1), points(2)))
        p = Partition(fam.members)
        m = embed_partition(mu, p, fam)
        assert weighted_entropy(m) == pytest.approx(partition_entropy(mu, p), abs=1e-12)

    def test_merged_cells_lower_entropy(self):
        mu = finite_measure([0.5, 0.3, 0.2])
        fam = ExplicitFamily((points(0, 1), points(2)))
        p = Partition((points(0), points(1), points(2)))
        m = embed_partition(mu, p, fam)
        assert weighted_entropy(m) == pytest.approx(sh(0.8) + sh(0.2), abs=1e-12)
        assert weighted_entropy(m) < partition_entropy(mu, p)

    def test_not_finer_raises(self):
        mu = finite_measure([0.5, 0.5])
        with pytest.raises(PreconditionError, match="finer"):
            embed_partition(mu, Partition((points(0, 1),)),
                            ExplicitFamily((points(0), points(1))))

    def test_never_above_partition_entropy(self):
        rng = np.random.default_rng(2)
        for _ in range(40):
            mu, fam = random_finite_instance(rng, 6, 4)
            # any acceptable partition: derandomize a random assignment
            p = derandomize(random_fractional_assignment(mu, fam, rng))
            m = embed_partition(mu, p, fam)
            assert weighted_entropy(m) <= partition_entropy(mu, p) + 1e-9


class TestDerandomize:
    def test_recovers_disjoint_family(self):
        mu = finite_measure([0.5, 0.3, 0.2])
        fam = ExplicitFamily((points(0), points(1), points(2)))
        m = embed_partition(mu, Partition(fam.members), fam)
        p = derandomize(m)
        assert set(p.cells) == set(fam.members)
        assert partition_entropy(mu, p) == pytest.approx(weighted_entropy(m), abs=1e-12)

    def test_overlapping_pair(self):
        mu = finite_measure([0.3, 0.4, 0.3])
        fam = ExplicitFamily((points(0, 1), points(1, 2)))
        left = Measure(FiniteSpace(3), (0.3, 0.3, 0.0))
        right = Measure(FiniteSpace(3), (0.0, 0.1, 0.3))
        m = FractionalAssignment(fam, ((0, left), (1, right)), mu)
        p = derandomize(m)
        # heavier member comes whole; the lighter one loses the overlap
        assert p.cells == (points(0, 1), points(2))
        assert partition_entropy(mu, p) <= weighted_entropy(m) + 1e-9

    def test_mass_ties_break_by_family_index(self):
        mu = finite_measure([0.5, 0.5])
        fam = ExplicitFamily((points(0, 1), points(0, 1)))
        part = Measure(FiniteSpace(2), (0.25, 0.25))
        m = FractionalAssignment(fam, ((0, part), (1, part)), mu)
        p = derandomize(m)
        assert p.cells == (points(0, 1),)

    def test_uncovered_raises(self):
        mu = finite_measure([0.5, 0.5])
        fam = ExplicitFamily((points(0), points(1)))
        whole = Measure(FiniteSpace(2), (0.5, 0.5))
        m = FractionalAssignment(fam, ((0, whole),), mu)
        object.__setattr__(m, "_validated", True)  # bypass: invalid by construction
        with pytest.raises(PreconditionError, match="uncovered"):
            derandomize(m)

    def test_sweep_never_worse(self):
        rng = np.random.default_rng(9)
        for _ in range(30):
            mu, fam = random_finite_instance(rng, 6, 4)
            for _ in range(30):
                m = random_fractional_assignment(mu, fam, rng)
                p = derandomize(m)
                assert partition_entropy(mu, p) <= weighted_entropy(m) + 1e-9
                assert mu_partition_check(mu, p)
                assert is_finer(p, fam)


class TestInfimum:
    def test_disjoint_family(self):
        mu = finite_measure([0.5, 0.3, 0.2])
        fam = ExplicitFamily((points(0), points(1), points(2)))
        assert weighted_entropy_infimum(mu, fam, trials=200, seed=0) == pytest.approx(
            sh(0.5) + sh(0.3) + sh(0.2), abs=1e-12)

    def test_full_space(self):
        mu = finite_measure([0.5, 0.5])
        assert weighted_entropy_infimum(mu, ExplicitFamily((points(0, 1),)), trials=50) == 0.0

    def test_uncovered_infinite(self):
        mu = finite_measure([0.5, 0.5])
        assert math.isinf(weighted_entropy_infimum(mu, ExplicitFamily((points(0),)), trials=10))

    def test_matches_exact_on_random_instances(self):
        rng = np.random.default_rng(21)
        from entdim.solvers import entropy_exact_finite

        for seed in range(5):
            mu, fam = random_finite_instance(rng, 5, 4)
            got = weighted_entropy_infimum(mu, fam, trials=10_000, seed=seed)
            want, _ = entropy_exact_finite(mu, fam)
            assert got == pytest.approx(want, abs=1e-12)


class TestRoundTrip:
    def test_theorem_pipeline(self):
        rng = np.random.default_rng(17)
        for _ in range(40):
            mu, fam = random_finite_instance(rng, 6, 4)
            p = derandomize(random_fractional_assignment(mu, fam, rng))
            back = derandomize(embed_partition(mu, p, fam))
            assert partition_entropy(mu, back) <= partition_entropy(mu, p) + 1e-9


class TestHlp:
    def test_maximal_spread(self):
        assert hlp_check([0.5, 0.5], [1.0, 0.0], shannon_fn)

    def test_identity(self):
        assert hlp_check([0.3, 0.2], [0.3, 0.2], shannon_fn)

    def test_padding_invariance(self):
        x, y = [0.5, 0.3, 0.2], [0.6, 0.4, 0.0]
        assert hlp_check(x, y, shannon_fn)
        assert hlp_check(x + [0.0] * 7, y, shannon_fn)
        assert hlp_check(x, y + [0.0] * 4, math.sqrt)

    def test_error_taxonomy(self):
        with pytest.raises(PreconditionError, match="nonincreasing"):
            hlp_check([0.2, 0.8], [1.0, 0.0], shannon_fn)
        with pytest.raises(PreconditionError, match="sums differ"):
            hlp_check([0.5, 0.4], [1.0, 0.0], shannon_fn)
        with pytest.raises(PreconditionError, match="prefix"):
            hlp_check([0.8, 0.2], [0.5, 0.5], shannon_fn)

    def test_random_transfer_pairs(self):
        rng = np.random.default_rng(4)
        for _ in range(500):
            x, y = random_majorization_pair(rng, max_len=20)
            assert hlp_check(x, y, shannon_fn)
            assert hlp_check(x, y, math.sqrt)
