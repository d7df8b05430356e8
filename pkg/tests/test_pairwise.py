"""Pairwise learner: decomposition, exact ERM, Copeland, exhaustive median."""

import itertools

import numpy as np
import pytest

from ranklearn.datasets import RankingDataset
from ranklearn.oracles import NoiseSpec, SurvivalSpec, make_sparse_target, sample_complete, sample_incomplete
from ranklearn.pairwise import (
    ConstantClassifier,
    PairwiseEnsemble,
    PairwiseProbabilityMatrix,
    Stump,
    bayes_copeland_ranking,
    copeland_scores,
    decompose_pairwise,
    empirical_error,
    erm_stump,
    fit_ovo,
    kemeny_median_bruteforce,
    predict_ovo,
)
from ranklearn.rankings import IncompleteRanking, Ranking


def brute_force_stump_error(X, y):
    """Minimum empirical error over constants and all stumps, by enumeration."""
    n, d = X.shape
    best = min(float(np.mean(y != 1)), float(np.mean(y != -1)))
    for f in range(d):
        for thr in np.unique(X[:, f])[:-1]:
            for pol in (-1, 1):
                pred = np.where(X[:, f] <= thr, pol, -pol)
                best = min(best, float(np.mean(pred != y)))
    return best


def random_sst_matrix(rng, k, min_margin=0.05):
    """Win probabilities consistent with a random linear order."""
    order = rng.permutation(k)
    pos = np.empty(k, dtype=int)
    pos[order] = np.arange(k)
    p = np.full((k, k), 0.5)
    for i in range(k):
        for j in range(i + 1, k):
            margin = rng.uniform(min_margin, 0.5 - 1e-9)
            win = 0.5 + margin if pos[i] < pos[j] else 0.5 - margin
            p[i, j], p[j, i] = win, 1.0 - win
    return PairwiseProbabilityMatrix(p), Ranking(pos + 1)


class TestDecompose:
    def test_complete_uses_every_row(self):
        m = make_sparse_target(6, 3, 1, seed=0)
        data = sample_complete(m, NoiseSpec.none(), 40, seed=1)
        pairs = decompose_pairwise(data)
        assert set(pairs) == {(1, 2), (1, 3), (2, 3)}
        assert all(rows.size == 40 for rows, _ in pairs.values())

    def test_all_empty_incomplete(self):
        m = make_sparse_target(6, 3, 1, seed=0)
        data = sample_incomplete(m, NoiseSpec.none(), SurvivalSpec.constant(0.0), 25, seed=1)
        pairs = decompose_pairwise(data)
        assert all(rows.size == 0 for rows, _ in pairs.values())

    def test_single_observation_example(self):
        # one sample observing 3 above 1: only the (1,3) dataset is fed,
        # with the +1 label meaning label 3 is ranked better
        data = RankingDataset.from_labels(
            np.asarray([[0.5, 0.5]]), [IncompleteRanking([3, 1], k=3)]
        )
        pairs = decompose_pairwise(data)
        rows, y = pairs[(1, 3)]
        assert rows.tolist() == [0] and y.tolist() == [1]
        assert pairs[(1, 2)][0].size == 0
        assert pairs[(2, 3)][0].size == 0

    def test_partial_different_blocks_only(self):
        from ranklearn.rankings import PartialRanking

        lab = PartialRanking((frozenset({1, 2}), frozenset({3})), k=3)
        data = RankingDataset.from_labels(np.zeros((1, 2)), [lab])
        pairs = decompose_pairwise(data)
        assert pairs[(1, 2)][0].size == 0
        assert pairs[(1, 3)][1].tolist() == [-1]
        assert pairs[(2, 3)][1].tolist() == [-1]

    def test_pair_counts_binomial(self):
        m = make_sparse_target(6, 4, 1, seed=2)
        q = 0.7
        data = sample_incomplete(m, NoiseSpec.none(), SurvivalSpec.constant(q), 20000, seed=3)
        pairs = decompose_pairwise(data)
        expect = 20000 * q * q
        sd = np.sqrt(20000 * q * q * (1 - q * q))
        for rows, _ in pairs.values():
            assert abs(rows.size - expect) <= 3 * sd


class TestErmStump:
    def test_separable_one_feature(self):
        X = np.asarray([[0.1], [0.2], [0.8], [0.9]])
        y = np.asarray([-1, -1, 1, 1])
        h = erm_stump(X, y)
        assert empirical_error(h, X, y) == 0.0

    def test_all_positive_gives_constant(self):
        X = np.random.default_rng(0).random((10, 3))
        y = np.ones(10, dtype=int)
        h = erm_stump(X, y)
        assert h == ConstantClassifier(1)

    def test_alternating_labels_error_quarter(self):
        X = np.asarray([[0.1], [0.2], [0.3], [0.4]])
        y = np.asarray([1, -1, 1, -1])
        h = erm_stump(X, y)
        assert empirical_error(h, X, y) == pytest.approx(0.25)
        assert brute_force_stump_error(X, y) == pytest.approx(0.25)

    def test_empty_dataset_constant_plus_one(self):
        assert erm_stump(np.empty((0, 2)), np.empty(0, dtype=int)) == ConstantClassifier(1)

    def test_exactness_random_battery(self):
        rng = np.random.default_rng(4)
        for _ in range(60):
            n = int(rng.integers(1, 50))
            d = int(rng.integers(1, 5))
            X = np.round(rng.random((n, d)) * 4) / 4  # duplicates likely
            y = rng.choice([-1, 1], size=n)
            h = erm_stump(X, y)
            assert empirical_error(h, X, y) == pytest.approx(brute_force_stump_error(X, y))


class TestCopeland:
    def _fixed_ensemble(self, k, outcomes):
        """outcomes[(i, j)] = winning label for that pair."""
        cls = {}
        for (i, j), winner in outcomes.items():
            cls[(i, j)] = ConstantClassifier(-1 if winner == i else 1)
        return PairwiseEnsemble(k, cls)

    def test_unanimous_best_label(self):
        ens = self._fixed_ensemble(3, {(1, 2): 1, (1, 3): 1, (2, 3): 2})
        assert copeland_scores(ens, np.zeros(2)).tolist() == [1, 2, 3]

    def test_unanimous_loser(self):
        ens = self._fixed_ensemble(3, {(1, 2): 2, (1, 3): 3, (2, 3): 2})
        assert copeland_scores(ens, np.zeros(2))[0] == 3

    def test_condorcet_cycle(self):
        ens = self._fixed_ensemble(3, {(1, 2): 1, (2, 3): 2, (1, 3): 3})
        assert copeland_scores(ens, np.zeros(2)).tolist() == [2, 2, 2]

    def test_score_sum_invariant(self):
        rng = np.random.default_rng(5)
        for k in (3, 4, 6):
            outcomes = {
                (i, j): int(rng.choice([i, j]))
                for i in range(1, k + 1)
                for j in range(i + 1, k + 1)
            }
            ens = self._fixed_ensemble(k, outcomes)
            assert copeland_scores(ens, np.zeros(2)).sum() == k + k * (k - 1) // 2


class TestPredictOvo:
    def test_distinct_scores_deterministic(self):
        ens = PairwiseEnsemble(
            3,
            {(1, 2): ConstantClassifier(-1), (1, 3): ConstantClassifier(-1), (2, 3): ConstantClassifier(1)},
        )
        # label 1 beats everyone; label 3 beats label 2
        rng = np.random.default_rng(0)
        assert predict_ovo(ens, np.zeros(2), rng) == Ranking([1, 3, 2])

    def test_tie_break_uniform(self):
        cls = {(1, 2): ConstantClassifier(-1), (2, 3): ConstantClassifier(-1), (1, 3): ConstantClassifier(1)}
        ens = PairwiseEnsemble(3, cls)  # Condorcet cycle: scores all equal
        rng = np.random.default_rng(1)
        counts = {}
        n = 60000
        X = np.zeros((n, 2))
        pos = ens.predict_positions(X, rng)
        for row in pos:
            counts[tuple(row)] = counts.get(tuple(row), 0) + 1
        assert len(counts) == 6
        for c in counts.values():
            assert abs(c / n - 1 / 6) < 0.02


class TestFitOvo:
    def _stump_instance(self, n, k=3, seed=0, q=None):
        """Scores linear in one feature: every pairwise boundary is one threshold."""
        rng = np.random.default_rng(seed)
        x = rng.random(n)
        slopes = np.asarray([0.7, -0.6, 0.05])[:k]
        inters = np.asarray([0.15, 0.80, 0.45])[:k]
        scores = inters[None, :] + slopes[None, :] * x[:, None]
        from ranklearn.rankings import positions_from_scores

        dead = None
        if q is not None:
            dead = rng.random((n, k)) >= q
        pos = positions_from_scores(scores, dead=dead)
        X = np.column_stack([x, rng.random(n)])  # one irrelevant feature
        kind = "incomplete" if q is not None else "complete"
        return RankingDataset(X, pos, kind), scores

    def test_realizable_complete_recovery(self):
        data, scores = self._stump_instance(4000, seed=1)
        ens = fit_ovo(data, seed=0)
        test, tscores = self._stump_instance(1000, seed=2)
        from ranklearn.rankings import positions_from_scores

        truth = positions_from_scores(tscores)
        pred = ens.predict_positions(test.features, np.random.default_rng(3))
        agree = float(np.mean(np.all(pred == truth, axis=1)))
        assert agree >= 0.99

    def test_incomplete_recovery(self):
        data, _ = self._stump_instance(8000, seed=3, q=0.7)
        ens = fit_ovo(data, seed=0)
        test, tscores = self._stump_instance(1000, seed=4)
        from ranklearn.rankings import positions_from_scores

        truth = positions_from_scores(tscores)
        pred = ens.predict_positions(test.features, np.random.default_rng(5))
        agree = float(np.mean(np.all(pred == truth, axis=1)))
        assert agree >= 0.95

    def test_empty_data_random_permutation(self):
        m = make_sparse_target(4, 3, 1, seed=0)
        data = sample_incomplete(m, NoiseSpec.none(), SurvivalSpec.constant(0.0), 30, seed=1)
        ens = fit_ovo(data, seed=0)
        assert len(ens.empty_pairs) == 3
        assert all(isinstance(c, ConstantClassifier) and c.value == 1 for c in ens.classifiers.values())
        counts = {}
        pos = ens.predict_positions(np.zeros((30000, 4)), np.random.default_rng(2))
        for row in pos:
            counts[tuple(row)] = counts.get(tuple(row), 0) + 1
        assert len(counts) == 6
        for c in counts.values():
            assert abs(c / 30000 - 1 / 6) < 0.02

    def test_min_pair_frequency(self):
        data, _ = self._stump_instance(5000, seed=6, q=0.7)
        ens = fit_ovo(data, seed=0)
        assert ens.min_pair_frequency(5000) == pytest.approx(0.49, abs=0.03)


class TestProbabilityMatrix:
    def test_validation(self):
        with pytest.raises(ValueError):
            PairwiseProbabilityMatrix(np.asarray([[0.5, 0.7], [0.7, 0.5]]))

    def test_sst_detection(self):
        rng = np.random.default_rng(7)
        matrix, _ = random_sst_matrix(rng, 4)
        assert matrix.is_sst()
        cyc = np.full((3, 3), 0.5)
        cyc[0, 1], cyc[1, 0] = 0.9, 0.1
        cyc[1, 2], cyc[2, 1] = 0.9, 0.1
        cyc[0, 2], cyc[2, 0] = 0.1, 0.9
        assert not PairwiseProbabilityMatrix(cyc).is_sst()


class TestKemeny:
    def test_unanimous_identity(self):
        p = np.full((4, 4), 0.5)
        for i in range(4):
            for j in range(i + 1, 4):
                p[i, j], p[j, i] = 1.0, 0.0
        assert kemeny_median_bruteforce(PairwiseProbabilityMatrix(p)) == Ranking([1, 2, 3, 4])

    def test_reversal(self):
        p = np.full((3, 3), 0.5)
        for i in range(3):
            for j in range(i + 1, 3):
                p[i, j], p[j, i] = 0.0, 1.0
        assert kemeny_median_bruteforce(PairwiseProbabilityMatrix(p)) == Ranking([3, 2, 1])

    def test_worked_sst_example(self):
        p = np.asarray([[0.5, 0.9, 0.8], [0.1, 0.5, 0.7], [0.2, 0.3, 0.5]])
        matrix = PairwiseProbabilityMatrix(p)
        assert kemeny_median_bruteforce(matrix) == Ranking([1, 2, 3])
        assert bayes_copeland_ranking(matrix) == Ranking([1, 2, 3])

    def test_k_too_large(self):
        p = np.full((9, 9), 0.5)
        for i in range(9):
            for j in range(i + 1, 9):
                p[i, j], p[j, i] = 0.9, 0.1
        with pytest.raises(ValueError):
            kemeny_median_bruteforce(PairwiseProbabilityMatrix(p))

    def test_copeland_equals_kemeny_under_sst(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            k = int(rng.integers(3, 6))
            matrix, order = random_sst_matrix(rng, k)
            kem = kemeny_median_bruteforce(matrix)
            cop = bayes_copeland_ranking(matrix)
            assert kem == cop == order


class TestEnsembleSerialization:
    def test_roundtrip(self):
        data = RankingDataset.from_labels(
            np.random.default_rng(0).random((20, 3)),
            [Ranking(np.random.default_rng(i).permutation(3) + 1) for i in range(20)],
        )
        ens = fit_ovo(data, seed=4)
        clone = PairwiseEnsemble.from_text(ens.to_text())
        probe = np.random.default_rng(1).random((15, 3))
        assert np.array_equal(clone.score_matrix(probe), ens.score_matrix(probe))
        assert clone.to_text() == ens.to_text()
