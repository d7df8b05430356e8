"""Generators and noise diagnostics against enumeration oracles."""

import itertools

import numpy as np
import pytest

from ranklearn.datasets import RankingDataset
from ranklearn.oracles import (
    NoiseSpec,
    PartitionSpec,
    SurvivalSpec,
    alpha_inconsistency,
    apply_mallows,
    beta_kt_gap,
    gaussian_noisy_copy,
    make_experiment_target,
    make_sparse_target,
    mallows_noisy_copy,
    mallows_positions,
    sample_complete,
    sample_incomplete,
    sample_partial,
)
from ranklearn.rankings import Ranking, kendall_tau, positions_from_scores


def naive_kendall(a, b):
    k = len(a)
    return sum(
        1 for i in range(k) for j in range(i + 1, k) if (a[i] - a[j]) * (b[i] - b[j]) < 0
    )


def mallows_pmf(k, theta, center):
    """Exhaustive normalised density over the permutation group."""
    weights = {}
    for perm in itertools.permutations(range(1, k + 1)):
        weights[perm] = np.exp(-theta * naive_kendall(perm, center))
    z = sum(weights.values())
    return {p: w / z for p, w in weights.items()}


class TestSparseTarget:
    def test_one_sparse_single_flip(self):
        m = make_sparse_target(d=3, k=1, r=1, seed=5)
        changes = 0
        for bits in itertools.product([0.0, 1.0], repeat=3):
            x = np.asarray(bits)
            base = m.scores(x)[0, 0]
            for c in range(3):
                flipped = x.copy()
                flipped[c] = 1.0 - flipped[c]
                if m.scores(flipped)[0, 0] != base:
                    changes += 1
        # exactly one coordinate matters: 8 points x 1 flip each (generic tables)
        assert changes == 8

    @pytest.mark.parametrize("d,k,r", [(100, 5, 10), (1000, 5, 10)])
    def test_family_shapes(self, d, k, r):
        m = make_sparse_target(d, k, r, seed=0)
        assert m.relevant.shape == (k, r)
        assert m.tables.shape == (k, 2**r)
        assert np.all((m.tables >= 0) & (m.tables <= 1))
        assert all(np.unique(m.relevant[j]).size == r for j in range(k))

    def test_r_out_of_range(self):
        with pytest.raises(ValueError):
            make_sparse_target(d=3, k=2, r=4, seed=0)

    def test_deterministic(self):
        a = make_sparse_target(20, 4, 3, seed=9)
        b = make_sparse_target(20, 4, 3, seed=9)
        assert np.array_equal(a.relevant, b.relevant)
        assert np.array_equal(a.tables, b.tables)

    def test_sparsity_certificate(self):
        # flips outside the union of relevant sets never change the ranking
        m = make_sparse_target(12, 3, 2, seed=3)
        rng = np.random.default_rng(0)
        outside = np.setdiff1d(np.arange(12), m.relevant_union())
        X = (rng.random((50, 12)) < 0.5).astype(float)
        base = positions_from_scores(m.scores(X))
        for c in outside:
            flipped = X.copy()
            flipped[:, c] = 1.0 - flipped[:, c]
            assert np.array_equal(positions_from_scores(m.scores(flipped)), base)

    def test_experiment_target_shared_and_bounded(self):
        m = make_experiment_target(30, 5, 5, seed=1)
        assert all(np.array_equal(m.relevant[0], m.relevant[j]) for j in range(5))
        assert np.all((m.tables >= 0.25) & (m.tables <= 0.75))


class TestSampleComplete:
    def test_constant_target_single_ranking(self):
        m = make_sparse_target(6, 3, 1, seed=2)
        m.tables[:] = np.asarray([0.9, 0.5, 0.1])[:, None]  # constant per label
        data = sample_complete(m, NoiseSpec.none(), 200, seed=0)
        assert np.all(data.label_matrix == np.asarray([1, 2, 3]))

    def test_seed_determinism(self):
        m = make_sparse_target(10, 4, 2, seed=1)
        a = sample_complete(m, NoiseSpec.none(), 100, seed=7)
        b = sample_complete(m, NoiseSpec.none(), 100, seed=7)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.label_matrix, b.label_matrix)

    def test_gaussian_noise_gives_intermediate_alpha(self):
        m = make_sparse_target(30, 5, 5, seed=11)
        clean = sample_complete(m, NoiseSpec.none(), 10000, seed=3)
        noisy = gaussian_noisy_copy(clean, m, 0.1, seed=4)
        alpha = alpha_inconsistency(clean, noisy)
        assert 0.0 < alpha < 1.0

    def test_mallows_kind_rejected(self):
        m = make_sparse_target(5, 3, 1, seed=0)
        with pytest.raises(ValueError):
            sample_complete(m, NoiseSpec.mallows(1.0), 10, seed=0)

    def test_feature_bias(self):
        m = make_sparse_target(4, 2, 1, seed=0)
        data = sample_complete(m, NoiseSpec.none(), 4000, seed=1, feature_bias=[0.9, 0.1, 0.5, 0.5])
        means = data.features.mean(axis=0)
        assert abs(means[0] - 0.9) < 0.03
        assert abs(means[1] - 0.1) < 0.03


class TestMallows:
    def test_theta_zero_uniform(self):
        rng = np.random.default_rng(0)
        draws = mallows_positions(np.tile([1, 2, 3], (60000, 1)), 0.0, rng)
        counts = {}
        for row in draws:
            counts[tuple(row)] = counts.get(tuple(row), 0) + 1
        tv = 0.5 * sum(abs(c / 60000 - 1 / 6) for c in counts.values())
        assert len(counts) == 6
        assert tv < 0.02

    def test_exact_density_small_sample(self):
        theta = float(np.log(2.0))
        pmf = mallows_pmf(3, theta, (1, 2, 3))
        assert pmf[(1, 2, 3)] == pytest.approx(8 / 21)
        rng = np.random.default_rng(1)
        n = 40000
        draws = mallows_positions(np.tile([1, 2, 3], (n, 1)), theta, rng)
        counts = {}
        for row in draws:
            counts[tuple(row)] = counts.get(tuple(row), 0) + 1
        assert counts[(1, 2, 3)] / n == pytest.approx(8 / 21, abs=0.01)
        p_d1 = sum(c for p, c in counts.items() if naive_kendall(p, (1, 2, 3)) == 1) / n
        assert p_d1 == pytest.approx(8 / 21, abs=0.01)

    def test_apply_mallows_matches_batch(self):
        sigma0 = Ranking([2, 3, 1, 4])
        out = apply_mallows(sigma0, 1.5, seed=42)
        batch = mallows_positions(sigma0.positions[None, :], 1.5, np.random.default_rng(42))
        assert np.array_equal(out.positions, batch[0])

    def test_center_recovered_at_large_theta(self):
        sigma0 = Ranking([3, 1, 4, 2])
        for seed in range(20):
            assert apply_mallows(sigma0, 50.0, seed) == sigma0


class TestSampleIncomplete:
    def test_full_survival_matches_complete(self):
        m = make_sparse_target(12, 4, 3, seed=5)
        complete = sample_complete(m, NoiseSpec.none(), 300, seed=9)
        inc = sample_incomplete(m, NoiseSpec.none(), SurvivalSpec.constant(1.0), 300, seed=9)
        assert np.array_equal(inc.features, complete.features)
        assert np.array_equal(inc.label_matrix, complete.label_matrix)

    def test_zero_survival_all_empty(self):
        m = make_sparse_target(8, 3, 2, seed=5)
        inc = sample_incomplete(m, NoiseSpec.none(), SurvivalSpec.constant(0.0), 50, seed=1)
        assert np.all(inc.label_matrix == 0)

    def test_observed_length_mean(self):
        m = make_sparse_target(10, 5, 2, seed=5)
        inc = sample_incomplete(m, NoiseSpec.none(), SurvivalSpec.constant(0.7), 10000, seed=2)
        lengths = (inc.label_matrix > 0).sum(axis=1)
        assert lengths.mean() == pytest.approx(3.5, abs=0.1)

    def test_threshold_survival_rule(self):
        m = make_sparse_target(6, 3, 2, seed=5)
        spec = SurvivalSpec.threshold(0, q_on=1.0, q_off=0.0)
        inc = sample_incomplete(m, NoiseSpec.none(), spec, 2000, seed=3)
        on = inc.features[:, 0] >= 0.5
        assert np.all(inc.label_matrix[on] > 0)
        assert np.all(inc.label_matrix[~on] == 0)

    def test_pairwise_floor(self):
        assert SurvivalSpec.constant([0.7, 0.8, 0.9]).pairwise_floor(3) == pytest.approx(0.56)


class TestSamplePartial:
    def test_singletons_match_complete(self):
        m = make_sparse_target(12, 4, 3, seed=6)
        complete = sample_complete(m, NoiseSpec.none(), 200, seed=4)
        part = sample_partial(m, NoiseSpec.none(), PartitionSpec.singletons(4), 200, seed=4)
        assert np.array_equal(part.features, complete.features)
        assert np.array_equal(part.label_matrix, complete.label_matrix)

    def test_single_block(self):
        m = make_sparse_target(8, 3, 2, seed=6)
        part = sample_partial(m, NoiseSpec.none(), PartitionSpec.single_block(3), 60, seed=5)
        assert np.all(part.label_matrix == 1)

    def test_fixed_block_count(self):
        m = make_sparse_target(8, 5, 2, seed=6)
        part = sample_partial(m, NoiseSpec.none(), PartitionSpec(5, 3), 500, seed=6)
        assert np.all(part.label_matrix.max(axis=1) == 3)

    def test_uniform_block_counts_cover_range(self):
        m = make_sparse_target(8, 4, 2, seed=6)
        part = sample_partial(m, NoiseSpec.none(), PartitionSpec(4), 2000, seed=7)
        assert set(np.unique(part.label_matrix.max(axis=1))) == {1, 2, 3, 4}


class TestNoiseVectors:
    def test_truncated_support_and_mean(self):
        m = make_sparse_target(5, 4, 1, seed=0)
        clean = sample_complete(m, NoiseSpec.none(), 10, seed=0)
        # sample the raw noise through the public chain: large-n empirical checks
        from ranklearn.oracles import _truncated_gaussian

        rng = np.random.default_rng(123)
        draws = _truncated_gaussian(rng, 0.2, (100000, 4))
        assert np.all(np.abs(draws) <= 0.25)
        assert np.all(np.abs(draws.mean(axis=0)) < 0.01)
        del clean

    def test_stddev_must_be_positive(self):
        with pytest.raises(ValueError):
            NoiseSpec.gaussian(0.0)
        with pytest.raises(ValueError):
            NoiseSpec.mallows(-1.0)


class TestDiagnostics:
    def _paired(self, k=3, n=200, seed=0):
        m = make_sparse_target(6, k, 2, seed=seed)
        clean = sample_complete(m, NoiseSpec.none(), n, seed=seed)
        return m, clean

    def test_identical_gives_zero_and_one(self):
        _, clean = self._paired()
        assert alpha_inconsistency(clean, clean) == 0.0
        assert beta_kt_gap(clean, clean) == 1.0

    def test_reversal_gives_one_and_minus_one(self):
        _, clean = self._paired()
        reversed_mat = clean.k + 1 - clean.label_matrix
        noisy = RankingDataset(clean.features, reversed_mat, "complete")
        assert alpha_inconsistency(clean, noisy) == 1.0
        assert beta_kt_gap(clean, noisy) == -1.0

    def test_mallows_expected_values(self):
        # frozen from the exhaustive S_3 density at theta = ln 2:
        #   alpha = 1 - 8/21, E[d] = 19/21, beta = 1 - 2*(19/21)/3 = 25/63
        theta = float(np.log(2.0))
        pmf = mallows_pmf(3, theta, (1, 2, 3))
        exact_alpha = 1.0 - pmf[(1, 2, 3)]
        exact_mean_d = sum(naive_kendall(p, (1, 2, 3)) * w for p, w in pmf.items())
        assert exact_alpha == pytest.approx(13 / 21)
        assert exact_mean_d == pytest.approx(19 / 21)
        exact_beta = 1 - 2 * exact_mean_d / 3
        assert exact_beta == pytest.approx(25 / 63)

        m, clean = self._paired(k=3, n=100000, seed=1)
        noisy = mallows_noisy_copy(clean, theta, seed=77)
        assert alpha_inconsistency(clean, noisy) == pytest.approx(exact_alpha, abs=0.01)
        assert beta_kt_gap(clean, noisy) == pytest.approx(exact_beta, abs=0.01)

    def test_length_mismatch_rejected(self):
        _, clean = self._paired(n=50)
        with pytest.raises(ValueError):
            alpha_inconsistency(clean, clean.subset(np.arange(25)))

    def test_unpaired_features_rejected(self):
        m, clean = self._paired(n=50)
        other = sample_complete(m, NoiseSpec.none(), 50, seed=999)
        with pytest.raises(ValueError):
            beta_kt_gap(clean, other)


class TestBatchConsistency:
    def test_mallows_positions_match_kendall(self):
        # every draw's distance to the center is what the density weights say it is
        rng = np.random.default_rng(5)
        center = np.asarray([[2, 1, 4, 3, 5]])
        draws = mallows_positions(np.tile(center, (200, 1)), 1.0, rng)
        c = Ranking(center[0])
        for row in draws:
            assert 0 <= kendall_tau(c, Ranking(row)) <= 10
