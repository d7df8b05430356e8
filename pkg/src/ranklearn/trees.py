"""Greedy regression trees on scalar targets in [0, 1].

Two split criteria are provided. The level-splits criterion picks one
coordinate per tree level, the coordinate that maximises the global
heterogeneity score ``V(S) = (1/n) * sum_j mean(cell of x_j)^2`` of the
refined partition; every cell of the level splits on that same
coordinate (or passes through unchanged when a side would be empty).
The standard CART criterion picks, per node, the (feature, threshold)
pair that maximises the local score
``sum_z (N_z / N) * mean(child z)^2``. In both cases maximising the
heterogeneity score is the same as minimising the empirical mean
squared error, because the two sum to the (fixed) mean squared target.

Honest fitting halves the training rows at random: the first half
chooses the splits (and is the half the one-sample-per-side guard
counts), the second half fills the leaf means. A leaf that received no
second-half rows inherits the nearest ancestor's mean.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ScalarDataset",
    "TreeNode",
    "TreeModel",
    "honest_halves",
    "level_split_score",
    "fit_level_splits",
    "breiman_local_score",
    "fit_breiman",
    "predict_tree",
    "prescribed_split_counts",
]


@dataclass
class ScalarDataset:
    """An ``(n, d)`` feature matrix with scalar targets in ``[0, 1]``."""

    features: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.targets = np.asarray(self.targets, dtype=np.float64)
        if self.features.ndim != 2 or self.targets.ndim != 1:
            raise ValueError("features must be (n, d) and targets (n,)")
        if self.features.shape[0] != self.targets.shape[0]:
            raise ValueError("feature and target row counts differ")
        if self.features.shape[0] < 1:
            raise ValueError("dataset is empty")
        if not np.all(np.isfinite(self.features)) or not np.all(np.isfinite(self.targets)):
            raise ValueError("non-finite entries")
        if np.any(self.targets < 0.0) or np.any(self.targets > 1.0):
            raise ValueError("targets must lie in [0, 1]")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def binary_columns(self) -> np.ndarray:
        return np.all((self.features == 0.0) | (self.features == 1.0), axis=0)

    def is_binary(self) -> bool:
        return bool(self.binary_columns().all())


@dataclass(slots=True)
class TreeNode:
    """feature < 0 marks a leaf; internal nodes test ``x[feature] <= threshold``."""

    feature: int
    threshold: float
    mean: float
    n_part: int
    n_est: int
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None


@dataclass
class TreeModel:
    """A fitted partition of feature space with per-leaf means."""

    kind: str  # "level-splits" | "breiman"
    d: int
    honest: bool
    root: TreeNode
    splits: tuple = ()  # level-splits only: the per-level coordinates, in order
    seed: int = 0

    def leaves(self):
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.feature < 0:
                out.append(node)
            else:
                stack.append(node.right)
                stack.append(node.left)
        return out

    def leaf_part_counts(self) -> np.ndarray:
        return np.asarray([leaf.n_part for leaf in self.leaves()], dtype=np.int64)

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        squeeze = X.ndim == 1
        if squeeze:
            X = X[None, :]
        if X.shape[1] != self.d:
            raise ValueError(f"expected {self.d} features, got {X.shape[1]}")
        out = np.empty(X.shape[0], dtype=np.float64)
        stack = [(self.root, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if node.feature < 0:
                out[idx] = node.mean
                continue
            go_left = X[idx, node.feature] <= node.threshold
            left, right = idx[go_left], idx[~go_left]
            if left.size:
                stack.append((node.left, left))
            if right.size:
                stack.append((node.right, right))
        return out[0] if squeeze else out

    # -- text serialisation ------------------------------------------------

    def to_text(self) -> str:
        lines = [
            f"tree kind={self.kind} d={self.d} honest={int(self.honest)} seed={self.seed} "
            f"splits={','.join(str(s) for s in self.splits)}"
        ]
        ids: dict[int, int] = {}
        order: list[TreeNode] = []

        def number(node):
            ids[id(node)] = len(order)
            order.append(node)
            if node.feature >= 0:
                number(node.left)
                number(node.right)

        number(self.root)
        for node in order:
            left = ids[id(node.left)] if node.left is not None else -1
            right = ids[id(node.right)] if node.right is not None else -1
            lines.append(
                f"node {ids[id(node)]} feature={node.feature} threshold={node.threshold!r} "
                f"mean={node.mean!r} n_part={node.n_part} n_est={node.n_est} "
                f"left={left} right={right}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TreeModel":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = dict(item.split("=", 1) for item in lines[0].split()[1:])
        splits = tuple(int(s) for s in head["splits"].split(",") if s != "")
        raw = []
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] != "node":
                raise ValueError(f"malformed tree line {ln!r}")
            fields = dict(item.split("=", 1) for item in parts[2:])
            raw.append(fields)
        nodes = [
            TreeNode(
                feature=int(f["feature"]),
                threshold=float(f["threshold"]),
                mean=float(f["mean"]),
                n_part=int(f["n_part"]),
                n_est=int(f["n_est"]),
            )
            for f in raw
        ]
        for node, f in zip(nodes, raw):
            li, ri = int(f["left"]), int(f["right"])
            node.left = nodes[li] if li >= 0 else None
            node.right = nodes[ri] if ri >= 0 else None
        return cls(
            kind=head["kind"],
            d=int(head["d"]),
            honest=bool(int(head["honest"])),
            root=nodes[0],
            splits=splits,
            seed=int(head.get("seed", 0)),
        )


def honest_halves(n: int, seed: int):
    """Seeded random halving; the first (larger on odd n) half builds the
    partition, the second fills the leaf means."""
    perm = np.random.default_rng(seed).permutation(n)
    cut = (n + 1) // 2
    return np.sort(perm[:cut]), np.sort(perm[cut:])


# ---------------------------------------------------------------------------
# empirical criteria


def level_split_score(data: ScalarDataset, S, i: int) -> float:
    """Heterogeneity after refining by coordinates ``S + [i]``:
    ``(1/n) * sum_j mean(targets agreeing with x_j on S + [i])^2``.

    Defined for 0/1 features only. Non-decreasing in the split set, and
    equal to ``mean(targets^2)`` minus the empirical MSE of the refined
    partition.
    """
    S = list(S)
    if i in S:
        raise ValueError(f"coordinate {i} is already in the split set")
    if not data.is_binary():
        raise ValueError("the level-splits criterion is defined for 0/1 features only")
    cols = S + [i]
    sig = data.features[:, cols].astype(np.int64)
    _, inv = np.unique(sig, axis=0, return_inverse=True)
    sums = np.bincount(inv, weights=data.targets)
    counts = np.bincount(inv)
    return float(np.sum(sums * sums / counts) / data.n)


def breiman_local_score(data: ScalarDataset, cell, i: int, threshold: float) -> float:
    """Local heterogeneity of splitting ``cell`` on ``x[i] <= threshold``:
    ``sum_z (N_z / N) * mean(child z)^2``.

    Raises when a child would be empty; such splits are never accepted.
    """
    cell = np.asarray(cell, dtype=np.int64)
    if cell.size == 0:
        raise ValueError("cell is empty")
    values = data.features[cell, i]
    y = data.targets[cell]
    left = values <= threshold
    n_left = int(left.sum())
    n_right = cell.size - n_left
    if n_left == 0 or n_right == 0:
        raise ValueError("split leaves an empty child")
    m_left = float(y[left].mean())
    m_right = float(y[~left].mean())
    return (n_left * m_left * m_left + n_right * m_right * m_right) / cell.size


# ---------------------------------------------------------------------------
# fitting


class _Cell:
    __slots__ = ("part", "est", "node", "depth")

    def __init__(self, part, est, node, depth):
        self.part = part
        self.est = est
        self.node = node
        self.depth = depth


def _resolve_halves(n: int, honest: bool, seed: int):
    if honest:
        return honest_halves(n, seed)
    idx = np.arange(n)
    return idx, idx


def _child_mean(y: np.ndarray, est_idx: np.ndarray, fallback: float) -> float:
    return float(y[est_idx].mean()) if est_idx.size else fallback


def fit_level_splits(
    data: ScalarDataset,
    max_levels: int | None = None,
    honest: bool = False,
    seed: int = 0,
    leaf_cap: int = 1,
) -> TreeModel:
    """Grow a level-splits tree greedily.

    Per level, the coordinate not yet chosen with the highest
    :func:`level_split_score` on the partition half is appended to the
    split list; each cell then splits on it when both sides keep at
    least one partition row, and passes through unchanged otherwise.
    Cells holding at most ``leaf_cap`` partition rows are frozen. With
    ``max_levels=None`` the loop runs until no coordinate or splittable
    cell remains.
    """
    if not data.is_binary():
        raise ValueError("level splits requires 0/1 features")
    if max_levels is not None and max_levels < 0:
        raise ValueError("max_levels must be non-negative")
    if leaf_cap < 1:
        raise ValueError("leaf_cap must be at least 1")
    part, est = _resolve_halves(data.n, honest, seed)
    X = data.features
    y = data.targets
    global_mean = float(y.mean())
    root = TreeNode(-1, 0.0, _child_mean(y, est, global_mean), part.size, est.size)
    cells = [_Cell(part, est, root, 0)]

    Xp = X[part].astype(np.int64)
    yp = y[part]
    n_part = part.size
    refine_id = np.zeros(n_part, dtype=np.int64)
    splits: list[int] = []
    chosen: set[int] = set()
    limit = data.d if max_levels is None else min(max_levels, data.d)

    while len(splits) < limit:
        if all(c.part.size <= leaf_cap for c in cells):
            break
        best_i, best_v = -1, -math.inf
        base = refine_id * 2
        for i in range(data.d):
            if i in chosen:
                continue
            child = base + Xp[:, i]
            sums = np.bincount(child, weights=yp)
            counts = np.bincount(child)
            nz = counts > 0
            v = float(np.sum(sums[nz] ** 2 / counts[nz]) / n_part)
            if v > best_v:
                best_v, best_i = v, i
        if best_i < 0:
            break
        splits.append(best_i)
        chosen.add(best_i)
        _, refine_id = np.unique(base + Xp[:, best_i], return_inverse=True)

        next_cells = []
        for cell in cells:
            if cell.part.size <= leaf_cap:
                next_cells.append(cell)
                continue
            side = X[cell.part, best_i] > 0.5
            part_left, part_right = cell.part[~side], cell.part[side]
            if part_left.size == 0 or part_right.size == 0:
                next_cells.append(cell)
                continue
            est_side = X[cell.est, best_i] > 0.5
            est_left, est_right = cell.est[~est_side], cell.est[est_side]
            node = cell.node
            node.feature = best_i
            node.threshold = 0.5
            node.left = TreeNode(
                -1, 0.0, _child_mean(y, est_left, node.mean), part_left.size, est_left.size
            )
            node.right = TreeNode(
                -1, 0.0, _child_mean(y, est_right, node.mean), part_right.size, est_right.size
            )
            next_cells.append(_Cell(part_left, est_left, node.left, cell.depth + 1))
            next_cells.append(_Cell(part_right, est_right, node.right, cell.depth + 1))
        cells = next_cells

    return TreeModel("level-splits", data.d, honest, root, tuple(splits), seed)


def _best_local_split(X, y, idx, binary_cols):
    """Best (feature, threshold, score) for a cell, or None.

    Candidate thresholds for a real feature are the midpoints of
    consecutive distinct values inside the cell; a 0/1 feature has the
    single candidate 0.5. Ties resolve to the lowest feature index,
    then the lowest threshold.
    """
    m = idx.size
    ys = y[idx]
    total = float(ys.sum())
    sub = X[idx]

    score_bin = None
    if binary_cols.any():
        Xb = sub[:, binary_cols]
        n1 = Xb.sum(axis=0)
        s1 = Xb.T @ ys
        n0 = m - n1
        s0 = total - s1
        with np.errstate(divide="ignore", invalid="ignore"):
            sc = (s0 * s0 / n0 + s1 * s1 / n1) / m
        sc[(n0 < 1) | (n1 < 1)] = -np.inf
        score_bin = np.full(X.shape[1], -np.inf)
        score_bin[binary_cols] = sc

    best = None
    best_score = -math.inf
    for f in range(X.shape[1]):
        if binary_cols[f]:
            v = score_bin[f]
            if v > best_score:
                best_score, best = v, (f, 0.5)
            continue
        vals = sub[:, f]
        order = np.argsort(vals, kind="stable")
        vs = vals[order]
        prefix = np.cumsum(ys[order])
        cut = np.flatnonzero(vs[:-1] < vs[1:])
        if cut.size == 0:
            continue
        n_left = cut + 1.0
        s_left = prefix[cut]
        sc = (s_left * s_left / n_left + (total - s_left) ** 2 / (m - n_left)) / m
        t = int(np.argmax(sc))
        if sc[t] > best_score:
            best_score = float(sc[t])
            best = (f, float((vs[cut[t]] + vs[cut[t] + 1]) / 2.0))
    if best is None:
        return None
    return best[0], best[1], best_score


def fit_breiman(
    data: ScalarDataset,
    max_nodes: int | None = None,
    max_depth: int | None = None,
    honest: bool = False,
    seed: int = 0,
    leaf_cap: int = 1,
) -> TreeModel:
    """Grow a CART-style tree breadth first.

    Cells are processed in level order. A cell is frozen when it holds
    at most ``leaf_cap`` partition rows, sits at ``max_depth``, or has
    no feature with two distinct values; otherwise it splits on the
    locally best candidate. Splitting stops once the partition reaches
    ``max_nodes`` cells.
    """
    if max_nodes is not None and max_nodes < 1:
        raise ValueError("max_nodes must be at least 1")
    if max_depth is not None and max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    if leaf_cap < 1:
        raise ValueError("leaf_cap must be at least 1")
    part, est = _resolve_halves(data.n, honest, seed)
    X = data.features
    y = data.targets
    binary_cols = data.binary_columns()
    global_mean = float(y.mean())
    root = TreeNode(-1, 0.0, _child_mean(y, est, global_mean), part.size, est.size)
    queue: deque[_Cell] = deque([_Cell(part, est, root, 0)])
    n_cells = 1

    while queue:
        if max_nodes is not None and n_cells >= max_nodes:
            break
        cell = queue.popleft()
        if cell.part.size <= leaf_cap:
            continue
        if max_depth is not None and cell.depth >= max_depth:
            continue
        found = _best_local_split(X, y, cell.part, binary_cols)
        if found is None:
            continue
        f, thr, _ = found
        side = X[cell.part, f] <= thr
        part_left, part_right = cell.part[side], cell.part[~side]
        est_side = X[cell.est, f] <= thr
        est_left, est_right = cell.est[est_side], cell.est[~est_side]
        node = cell.node
        node.feature = f
        node.threshold = thr
        node.left = TreeNode(
            -1, 0.0, _child_mean(y, est_left, node.mean), part_left.size, est_left.size
        )
        node.right = TreeNode(
            -1, 0.0, _child_mean(y, est_right, node.mean), part_right.size, est_right.size
        )
        queue.append(_Cell(part_left, est_left, node.left, cell.depth + 1))
        queue.append(_Cell(part_right, est_right, node.right, cell.depth + 1))
        n_cells += 1

    return TreeModel("breiman", data.d, honest, root, (), seed)


def predict_tree(model: TreeModel, x) -> float:
    """Mean of the unique leaf containing ``x``."""
    return float(model.predict(np.asarray(x, dtype=np.float64)))


def prescribed_split_counts(C: float, r: int, n: int, d: int, delta: float, criterion: str = "level-splits") -> dict:
    """Advisory split budgets for a given sparsity and sample size.

    Uses base-2 logarithms throughout: the returned ``depth`` is
    ``Cr/(Cr+2) * (lg n - lg lg(d/delta))`` for level splits and the
    ``Cr/(Cr+3)`` variant for the local criterion; ``max_nodes`` is the
    matching ``2**depth``. Purely informational, never enforced.
    """
    if d / delta <= 2.0:
        raise ValueError("need d/delta > 2")
    inner = math.log2(n) - math.log2(math.log2(d / delta))
    denom = C * r + (2.0 if criterion == "level-splits" else 3.0)
    depth = max(0.0, (C * r) / denom * inner)
    levels = max(0, round(depth))
    return {"depth": depth, "max_levels": levels, "max_nodes": max(1, 2**levels)}
