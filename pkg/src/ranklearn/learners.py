"""Uniform learner configuration shared by the harness and the CLI.

A :class:`LearnerSpec` names one of the ranking learners and its knobs;
:func:`fit_ranking_model` turns it plus a dataset into a fitted
predictor exposing ``predict_positions(X, rng)``. The ``rng`` only
matters for the pairwise learner, whose ties break at random.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .datasets import RankingDataset
from .labelwise import LabelwiseRanker, fit_label_ranker
from .pairwise import PairwiseEnsemble, fit_ovo

__all__ = ["LearnerSpec", "FittedRanker", "fit_ranking_model", "PRESETS"]

KINDS = ("level-splits", "breiman", "forest", "ovo-stump")


@dataclass(frozen=True)
class LearnerSpec:
    kind: str
    honest: bool = False
    max_levels: int | None = None
    max_nodes: int | None = None
    max_depth: int | None = None
    leaf_cap: int | None = None
    n_trees: int = 100
    subsample: int | None = None
    forest_criterion: str = "breiman"
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown learner kind {self.kind!r}")

    def label(self) -> str:
        return self.name or self.kind

    def describe(self) -> str:
        parts = [self.kind]
        for key in ("honest", "max_levels", "max_nodes", "max_depth", "leaf_cap",
                    "n_trees", "subsample", "forest_criterion"):
            value = getattr(self, key)
            if value in (None, False):
                continue
            if key == "n_trees" and self.kind != "forest":
                continue
            if key == "forest_criterion" and self.kind != "forest":
                continue
            parts.append(f"{key}={value}")
        return " ".join(parts)


PRESETS = {
    "tree-full": LearnerSpec("breiman", name="tree-full"),
    "tree-shallow": LearnerSpec("breiman", max_depth=5, name="tree-shallow"),
    "level-splits-full": LearnerSpec("level-splits", name="level-splits-full"),
    "forest": LearnerSpec("forest", honest=True, leaf_cap=3, name="forest"),
    "ovo-stump": LearnerSpec("ovo-stump", name="ovo-stump"),
}


@dataclass
class FittedRanker:
    """A fitted model with one uniform prediction surface."""

    model: object
    spec: LearnerSpec

    def predict_positions(self, X, rng: np.random.Generator | None = None) -> np.ndarray:
        if isinstance(self.model, PairwiseEnsemble):
            if rng is None:
                rng = np.random.default_rng(self.model.tie_break_seed)
            return self.model.predict_positions(X, rng)
        return self.model.predict_positions(X)

    def to_text(self) -> str:
        return self.model.to_text()


def _tree_params(spec: LearnerSpec) -> dict:
    params: dict = {"honest": spec.honest}
    if spec.leaf_cap is not None:
        params["leaf_cap"] = spec.leaf_cap
    if spec.kind == "level-splits":
        params["max_levels"] = spec.max_levels
    elif spec.kind == "breiman":
        params["max_nodes"] = spec.max_nodes
        params["max_depth"] = spec.max_depth
    else:
        params = {
            "n_trees": spec.n_trees,
            "subsample": spec.subsample,
            "forest_criterion": spec.forest_criterion,
            "max_depth": spec.max_depth,
        }
        if spec.leaf_cap is not None:
            params["leaf_cap"] = spec.leaf_cap
    return params


def fit_ranking_model(data: RankingDataset, spec: LearnerSpec, seed: int = 0) -> FittedRanker:
    if spec.kind == "ovo-stump":
        return FittedRanker(fit_ovo(data, "stump", seed), spec)
    model = fit_label_ranker(data, spec.kind, seed, **_tree_params(spec))
    return FittedRanker(model, spec)


def load_fitted(text: str) -> FittedRanker:
    """Re-hydrate a model file written by ``FittedRanker.to_text``."""
    first = text.lstrip().splitlines()[0]
    if first.startswith("ovo"):
        return FittedRanker(PairwiseEnsemble.from_text(text), PRESETS["ovo-stump"])
    model = LabelwiseRanker.from_text(text)
    spec = replace(PRESETS.get(model.learner, LearnerSpec(model.learner)), name=model.learner)
    return FittedRanker(model, spec)
