"""Fully grown honest forests by subsampling without replacement.

Each tree sees ``s`` of the ``n`` rows, drawn without replacement, and
is fit honestly (partition half chooses splits, estimation half fills
means) with cells grown until they hold at most ``leaf_cap`` partition
rows. The forest predicts the plain average of its trees.

Per-tree randomness comes from a seed table derived once from the
forest seed, so trees can be fit in any order, or in parallel, and the
model is identical either way. Tree ``b`` uses ``tree_seeds[b]`` to
draw first its subsample and then its honest-halving seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .seeding import derive_seeds
from .trees import ScalarDataset, TreeModel, fit_breiman, fit_level_splits

__all__ = ["ForestModel", "fit_forest", "predict_forest", "fit_one_forest_tree"]


@dataclass
class ForestModel:
    trees: list
    subsample: int
    n_trees: int
    criterion: str
    seed: int
    leaf_cap: int = 3
    max_depth: int | None = None
    tree_seeds: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    @property
    def d(self) -> int:
        return self.trees[0].d

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        squeeze = X.ndim == 1
        if squeeze:
            X = X[None, :]
        acc = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees:
            acc += tree.predict(X)
        acc /= len(self.trees)
        return acc[0] if squeeze else acc

    def leaf_part_counts(self) -> np.ndarray:
        return np.concatenate([t.leaf_part_counts() for t in self.trees])

    def to_text(self) -> str:
        head = (
            f"forest n_trees={self.n_trees} subsample={self.subsample} "
            f"criterion={self.criterion} seed={self.seed} leaf_cap={self.leaf_cap} "
            f"max_depth={'' if self.max_depth is None else self.max_depth}\n"
        )
        return head + "".join(t.to_text() for t in self.trees)

    @classmethod
    def from_text(cls, text: str) -> "ForestModel":
        lines = text.splitlines()
        head = dict(item.split("=", 1) for item in lines[0].split()[1:])
        blocks: list[list[str]] = []
        for ln in lines[1:]:
            if not ln.strip():
                continue
            if ln.startswith("tree "):
                blocks.append([ln])
            else:
                blocks[-1].append(ln)
        trees = [TreeModel.from_text("\n".join(b)) for b in blocks]
        seed = int(head["seed"])
        return cls(
            trees=trees,
            subsample=int(head["subsample"]),
            n_trees=int(head["n_trees"]),
            criterion=head["criterion"],
            seed=seed,
            leaf_cap=int(head["leaf_cap"]),
            max_depth=None if head.get("max_depth", "") == "" else int(head["max_depth"]),
            tree_seeds=derive_seeds(seed, int(head["n_trees"])),
        )


def fit_one_forest_tree(
    data: ScalarDataset,
    tree_seed: int,
    subsample: int,
    criterion: str,
    leaf_cap: int,
    max_depth: int | None,
) -> TreeModel:
    """Fit the tree a forest would build from ``tree_seed``; used both by
    :func:`fit_forest` and by reproducibility checks."""
    rng = np.random.default_rng(tree_seed)
    idx = np.sort(rng.choice(data.n, size=subsample, replace=False))
    fit_seed = int(rng.integers(0, 2**63))
    sub = ScalarDataset(data.features[idx], data.targets[idx])
    if criterion == "level-splits":
        return fit_level_splits(sub, max_levels=None, honest=True, seed=fit_seed, leaf_cap=leaf_cap)
    if criterion == "breiman":
        return fit_breiman(
            sub, max_nodes=None, max_depth=max_depth, honest=True, seed=fit_seed, leaf_cap=leaf_cap
        )
    raise ValueError(f"unknown criterion {criterion!r}")


def fit_forest(
    data: ScalarDataset,
    n_trees: int = 100,
    subsample: int | None = None,
    criterion: str = "breiman",
    leaf_cap: int = 3,
    max_depth: int | None = None,
    seed: int = 0,
) -> ForestModel:
    """Fit ``n_trees`` honest trees on subsamples of size ``subsample``
    (default: half the rows, rounded up) and average them."""
    if n_trees < 1:
        raise ValueError("need at least one tree")
    s = (data.n + 1) // 2 if subsample is None else int(subsample)
    if not (1 <= s <= data.n):
        raise ValueError(f"subsample must lie in 1..{data.n}, got {s}")
    tree_seeds = derive_seeds(seed, n_trees)
    trees = [
        fit_one_forest_tree(data, int(tree_seeds[b]), s, criterion, leaf_cap, max_depth)
        for b in range(n_trees)
    ]
    return ForestModel(trees, s, n_trees, criterion, seed, leaf_cap, max_depth, tree_seeds)


def predict_forest(model: ForestModel, x) -> float:
    """Average of the trees' predictions at ``x``."""
    return float(model.predict(np.asarray(x, dtype=np.float64)))
