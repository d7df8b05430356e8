"""Dataset container and the CSV file format."""

import numpy as np
import pytest

from ranklearn.datasets import RankingDataset, dumps_dataset, load_dataset, loads_dataset, save_dataset
from ranklearn.oracles import (
    NoiseSpec,
    PartitionSpec,
    SurvivalSpec,
    make_sparse_target,
    sample_complete,
    sample_incomplete,
    sample_partial,
)
from ranklearn.rankings import IncompleteRanking, PartialRanking, Ranking


class TestContainer:
    def test_label_kinds_validate(self):
        X = np.zeros((2, 2))
        RankingDataset(X, np.asarray([[1, 2], [2, 1]]), "complete")
        with pytest.raises(ValueError):
            RankingDataset(X, np.asarray([[1, 1], [2, 1]]), "complete")
        with pytest.raises(ValueError):
            RankingDataset(X, np.asarray([[0, 2], [2, 1]]), "incomplete")  # orders must be 1..len
        RankingDataset(X, np.asarray([[0, 1], [2, 1]]), "incomplete")
        RankingDataset(X, np.asarray([[1, 1], [2, 1]]), "partial")
        with pytest.raises(ValueError):
            RankingDataset(X, np.asarray([[1, 3], [2, 1]]), "partial")  # block ids must be contiguous

    def test_label_objects(self):
        X = np.zeros((1, 2))
        mat = np.asarray([[2, 1, 3], [0, 1, 2], [1, 1, 2]])
        assert RankingDataset(X, mat[:1], "complete").label(0) == Ranking([2, 1, 3])
        inc = RankingDataset(X, mat[1:2], "incomplete").label(0)
        assert inc == IncompleteRanking([2, 3], k=3)
        part = RankingDataset(X, mat[2:3], "partial").label(0)
        assert part == PartialRanking((frozenset({1, 2}), frozenset({3})), k=3)

    def test_binary_columns(self):
        X = np.asarray([[0.0, 0.3], [1.0, 0.6]])
        data = RankingDataset(X, np.asarray([[1, 2], [2, 1]]), "complete")
        assert data.binary_columns().tolist() == [True, False]
        assert not data.is_binary()

    def test_from_labels_roundtrip(self):
        labels = [IncompleteRanking([3, 1], 3), IncompleteRanking([], 3)]
        data = RankingDataset.from_labels(np.zeros((2, 1)), labels)
        assert data.label(0) == labels[0]
        assert data.label(1) == labels[1]


class TestFileFormat:
    @pytest.mark.parametrize("maker", ["complete", "incomplete", "partial"])
    def test_save_load_identity(self, tmp_path, maker):
        m = make_sparse_target(5, 3, 2, seed=1)
        if maker == "complete":
            data = sample_complete(m, NoiseSpec.gaussian(0.05), 40, seed=2)
        elif maker == "incomplete":
            data = sample_incomplete(m, NoiseSpec.none(), SurvivalSpec.constant(0.6), 40, seed=2)
        else:
            data = sample_partial(m, NoiseSpec.none(), PartitionSpec(3), 40, seed=2)
        path = tmp_path / "data.csv"
        save_dataset(data, path)
        clone = load_dataset(path)
        assert clone.label_kind == data.label_kind
        assert np.array_equal(clone.features, data.features)
        assert np.array_equal(clone.label_matrix, data.label_matrix)
        assert clone.metadata == data.metadata

    def test_real_features_roundtrip_exactly(self, tmp_path):
        rng = np.random.default_rng(0)
        data = RankingDataset(rng.random((10, 3)), np.tile([1, 2], (10, 1)), "complete")
        path = tmp_path / "real.csv"
        save_dataset(data, path)
        assert np.array_equal(load_dataset(path).features, data.features)

    def test_handwritten_file(self):
        text = "f1,f2,rank_1,rank_2\n0,1,2,1\n1,1,1,2\n0.5,0,2,1\n"
        data = loads_dataset(text)
        assert data.n == 3 and data.d == 2 and data.k == 2
        assert data.label_kind == "complete"
        assert data.label_matrix.tolist() == [[2, 1], [1, 2], [2, 1]]

    def test_kind_inference(self):
        assert loads_dataset("f1,rank_1,rank_2\n0,1,\n").label_kind == "incomplete"
        assert loads_dataset("f1,rank_1,rank_2\n0,1,1\n").label_kind == "partial"
        assert loads_dataset("f1,rank_1,rank_2\n0,1,2\n").label_kind == "complete"

    def test_duplicate_position_error_names_line(self):
        text = "f1,rank_1,rank_2,rank_3\n0,1,2,3\n1,2,2,1\n"
        with pytest.raises(ValueError, match="line 3"):
            loads_dataset(text, label_kind="complete")

    def test_wrong_cell_count_names_line(self):
        with pytest.raises(ValueError, match="line 2"):
            loads_dataset("f1,rank_1,rank_2\n0,1\n")

    def test_bad_feature_names_line(self):
        with pytest.raises(ValueError, match="line 2"):
            loads_dataset("f1,rank_1,rank_2\nabc,1,2\n")

    def test_malformed_header(self):
        with pytest.raises(ValueError):
            loads_dataset("f1,f2\n0,1\n")
        with pytest.raises(ValueError):
            loads_dataset("rank_1,rank_2\n1,2\n")

    def test_declared_kind_wins(self):
        # complete-looking rows may be declared partial (all-singleton blocks)
        text = "# label-kind=partial\nf1,rank_1,rank_2\n0,1,2\n"
        assert loads_dataset(text).label_kind == "partial"

    def test_mixed_encodings_rejected(self):
        text = "f1,rank_1,rank_2,rank_3\n0,1,,2\n0,1,1,2\n"
        with pytest.raises(ValueError, match="label kind"):
            loads_dataset(text)

    def test_dumps_is_deterministic(self):
        m = make_sparse_target(4, 3, 1, seed=3)
        data = sample_complete(m, NoiseSpec.none(), 20, seed=4)
        assert dumps_dataset(data) == dumps_dataset(data)
