"""Complete-ranking learner: one scalar regressor per label position.

Each training ranking becomes the target vector ``positions / k``, one
coordinate per label, and the k slices are fit independently with a
tree or forest regressor. Because the targets are normalised positions,
smaller predicted values mean better labels, so prediction sorts the k
regressor outputs ascending (ties toward the smaller label index).

This decomposition needs the position of every label, so it accepts
complete rankings only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import RankingDataset
from .forests import ForestModel, fit_forest
from .rankings import Ranking, positions_from_values
from .seeding import derive_seeds
from .trees import ScalarDataset, TreeModel, fit_breiman, fit_level_splits

__all__ = ["LabelwiseRanker", "fit_label_ranker", "predict_ranking"]


@dataclass
class LabelwiseRanker:
    """k fitted scalar models, one per label, plus the fit configuration."""

    models: list
    k: int
    d: int
    learner: str
    seed: int

    def predict_values(self, X) -> np.ndarray:
        """Raw per-label position estimates, shape ``(n, k)``."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.d:
            raise ValueError(f"expected {self.d} features, got {X.shape[1]}")
        return np.column_stack([m.predict(X) for m in self.models])

    def predict_positions(self, X) -> np.ndarray:
        """Predicted rankings as an ``(n, k)`` position matrix."""
        return positions_from_values(self.predict_values(X))

    def to_text(self) -> str:
        head = f"labelranker k={self.k} d={self.d} learner={self.learner} seed={self.seed}\n"
        parts = [head]
        for i, model in enumerate(self.models):
            parts.append(f"label {i + 1}\n")
            parts.append(model.to_text())
        return "".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "LabelwiseRanker":
        lines = text.splitlines()
        head = dict(item.split("=", 1) for item in lines[0].split()[1:])
        k = int(head["k"])
        blocks: list[list[str]] = []
        for ln in lines[1:]:
            if not ln.strip():
                continue
            if ln.startswith("label "):
                blocks.append([])
            else:
                blocks[-1].append(ln)
        if len(blocks) != k:
            raise ValueError(f"expected {k} per-label models, found {len(blocks)}")
        models = []
        for block in blocks:
            body = "\n".join(block)
            if block[0].startswith("forest"):
                models.append(ForestModel.from_text(body))
            else:
                models.append(TreeModel.from_text(body))
        return cls(models, k, int(head["d"]), head["learner"], int(head["seed"]))


def _fit_scalar(kind: str, data: ScalarDataset, seed: int, params: dict):
    if kind == "level-splits":
        return fit_level_splits(
            data,
            max_levels=params.get("max_levels"),
            honest=params.get("honest", False),
            seed=seed,
            leaf_cap=params.get("leaf_cap", 1),
        )
    if kind == "breiman":
        return fit_breiman(
            data,
            max_nodes=params.get("max_nodes"),
            max_depth=params.get("max_depth"),
            honest=params.get("honest", False),
            seed=seed,
            leaf_cap=params.get("leaf_cap", 1),
        )
    if kind == "forest":
        return fit_forest(
            data,
            n_trees=params.get("n_trees", 100),
            subsample=params.get("subsample"),
            criterion=params.get("forest_criterion", "breiman"),
            leaf_cap=params.get("leaf_cap", 3),
            max_depth=params.get("max_depth"),
            seed=seed,
        )
    raise ValueError(f"unknown scalar learner {kind!r}")


def fit_label_ranker(data: RankingDataset, learner: str, seed: int = 0, **params) -> LabelwiseRanker:
    """Fit one scalar model per label on the normalised-position targets.

    ``learner`` is ``level-splits``, ``breiman``, or ``forest``; extra
    keyword arguments pass through to the scalar fitter. Label ``i``
    uses the i-th derived child seed, so fitting one label alone with
    that seed reproduces the slice of the full fit exactly.
    """
    if data.label_kind != "complete":
        raise ValueError(
            "labelwise decomposition needs complete rankings; "
            "use the pairwise learner for incomplete or partial data"
        )
    targets = data.label_matrix / data.k
    seeds = derive_seeds(seed, data.k)
    models = []
    for i in range(data.k):
        slice_data = ScalarDataset(data.features, targets[:, i])
        models.append(_fit_scalar(learner, slice_data, int(seeds[i]), params))
    return LabelwiseRanker(models, data.k, data.d, learner, seed)


def predict_ranking(ranker: LabelwiseRanker, x) -> Ranking:
    """Ranking for one feature vector: ascending sort of the k position
    estimates, exact ties toward the smaller label index."""
    values = ranker.predict_values(np.asarray(x, dtype=np.float64))
    return Ranking(positions_from_values(values)[0])
