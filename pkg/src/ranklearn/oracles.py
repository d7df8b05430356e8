"""Synthetic generators: sparse score targets, noise, erasure, tie blocks.

The generative chain is always the same. Draw a feature vector on the
Boolean hypercube, evaluate a sparse per-label score function, perturb
the scores (or the output ranking), and sort. Every generator is a
deterministic function of its parameters and a seed, and the different
generators share their draw order so that, for example, erasure with
survival probability one reproduces the complete-ranking generator
sample for sample under the same seed.

Noise diagnostics: ``alpha_inconsistency`` is the fraction of rows on
which the noisy ranking differs at all from the noiseless one, and
``beta_kt_gap`` is their mean KT coefficient. Both need the two
datasets to share their feature draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import RankingDataset
from .rankings import (
    Ranking,
    kt_coefficient_positions,
    positions_from_scores,
)

__all__ = [
    "SparseScoreFunction",
    "NoiseSpec",
    "SurvivalSpec",
    "PartitionSpec",
    "make_sparse_target",
    "make_experiment_target",
    "sample_features",
    "sample_complete",
    "apply_mallows",
    "mallows_positions",
    "mallows_noisy_copy",
    "gaussian_noisy_copy",
    "sample_incomplete",
    "sample_partial",
    "alpha_inconsistency",
    "beta_kt_gap",
]


@dataclass(frozen=True)
class SparseScoreFunction:
    """Per-label lookup tables over small relevant coordinate sets.

    Label ``j`` reads only the ``r`` coordinates in ``relevant[j]``;
    its score is ``tables[j][bits]`` where ``bits`` encodes those
    coordinates. Flipping any coordinate outside the relevant set of a
    label can never change that label's score.
    """

    d: int
    k: int
    r: int
    relevant: np.ndarray  # (k, r) int, column indices
    tables: np.ndarray  # (k, 2**r) float in [0, 1]

    def __post_init__(self):
        if self.relevant.shape != (self.k, self.r):
            raise ValueError("relevant sets must be (k, r)")
        if self.tables.shape != (self.k, 2**self.r):
            raise ValueError("tables must be (k, 2**r)")
        if np.any(self.tables < 0.0) or np.any(self.tables > 1.0):
            raise ValueError("table values must lie in [0, 1]")

    def scores(self, X: np.ndarray) -> np.ndarray:
        """Evaluate all labels on an ``(n, d)`` 0/1 matrix; returns ``(n, k)``."""
        X = np.asarray(X)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.d:
            raise ValueError(f"expected {self.d} features, got {X.shape[1]}")
        powers = 1 << np.arange(self.r)
        out = np.empty((X.shape[0], self.k), dtype=np.float64)
        for j in range(self.k):
            bits = X[:, self.relevant[j]].astype(np.int64) @ powers
            out[:, j] = self.tables[j, bits]
        return out

    def relevant_union(self) -> np.ndarray:
        return np.unique(self.relevant)


def make_sparse_target(d: int, k: int, r: int, seed: int) -> SparseScoreFunction:
    """Draw a random sparse target: per-label relevant coordinates chosen
    without replacement, table values i.i.d. uniform on ``[0, 1]``."""
    if not (1 <= r <= d):
        raise ValueError(f"need 1 <= r <= d, got r={r}, d={d}")
    if k < 1:
        raise ValueError("need at least one label")
    rng = np.random.default_rng(seed)
    relevant = np.stack([np.sort(rng.choice(d, size=r, replace=False)) for _ in range(k)])
    tables = rng.uniform(0.0, 1.0, size=(k, 2**r))
    return SparseScoreFunction(d, k, r, relevant, tables)


def make_experiment_target(d: int, k: int, r: int, seed: int) -> SparseScoreFunction:
    """Draw a sparse target with the benign structure greedy trees need.

    All labels read one shared set of ``r`` informative coordinates, so
    the induced position functions are themselves ``r``-sparse, and each
    label's score is additive over those coordinates with signed weights
    of magnitude at least 1/2, rescaled into a per-label random
    sub-interval of ``[1/4, 3/4]``. Every informative coordinate then
    carries a clear marginal signal for every label, which is what makes
    the greedy split criteria recover the partition; with i.i.d. uniform
    lookup tables (see :func:`make_sparse_target`) marginal signals can
    vanish and greedily grown trees provably stall.
    """
    if not (1 <= r <= d):
        raise ValueError(f"need 1 <= r <= d, got r={r}, d={d}")
    if k < 1:
        raise ValueError("need at least one label")
    rng = np.random.default_rng(seed)
    shared = np.sort(rng.choice(d, size=r, replace=False))
    relevant = np.tile(shared, (k, 1))
    patterns = ((np.arange(2**r)[:, None] >> np.arange(r)[None, :]) & 1).astype(np.float64)
    tables = np.empty((k, 2**r))
    for j in range(k):
        w = rng.uniform(0.5, 1.0, size=r) * rng.choice([-1.0, 1.0], size=r)
        lo = 0.25 + 0.10 * rng.random()
        hi = 0.75 - 0.10 * rng.random()
        t = patterns @ w
        span = t.max() - t.min()
        tables[j] = lo + (hi - lo) * (t - t.min()) / span if span > 0 else np.full(2**r, (lo + hi) / 2)
    return SparseScoreFunction(d, k, r, relevant, tables)


@dataclass(frozen=True)
class NoiseSpec:
    """Which perturbation to apply: none, additive truncated Gaussian on
    the scores, or a Mallows draw around the noiseless ranking."""

    kind: str
    stddev: float = 0.0
    theta: float = 0.0

    @classmethod
    def none(cls) -> "NoiseSpec":
        return cls("none")

    @classmethod
    def gaussian(cls, stddev: float) -> "NoiseSpec":
        if stddev <= 0:
            raise ValueError("stddev must be positive")
        return cls("gaussian", stddev=float(stddev))

    @classmethod
    def mallows(cls, theta: float) -> "NoiseSpec":
        if theta < 0:
            raise ValueError("theta must be non-negative")
        return cls("mallows", theta=float(theta))

    def describe(self) -> str:
        if self.kind == "none":
            return "none"
        if self.kind == "gaussian":
            return f"gaussian:{self.stddev:g}"
        return f"mallows:{self.theta:g}"


def _truncated_gaussian(rng: np.random.Generator, stddev: float, shape) -> np.ndarray:
    """Centered normal draws rejected until they land in [-1/4, 1/4].

    Rejection keeps the distribution symmetric, hence exactly zero mean.
    """
    out = rng.normal(0.0, stddev, size=shape)
    bad = np.abs(out) > 0.25
    while bad.any():
        out[bad] = rng.normal(0.0, stddev, size=int(bad.sum()))
        bad = np.abs(out) > 0.25
    return out


def sample_features(rng: np.random.Generator, n: int, d: int, feature_bias=None) -> np.ndarray:
    """0/1 feature rows; uniform by default, else an independent Bernoulli
    per coordinate with the given success probabilities."""
    if feature_bias is None:
        return (rng.random((n, d)) < 0.5).astype(np.float64)
    bias = np.broadcast_to(np.asarray(feature_bias, dtype=np.float64), (d,))
    return (rng.random((n, d)) < bias[None, :]).astype(np.float64)


def _score_noise(rng, noise: NoiseSpec, n: int, k: int) -> np.ndarray:
    if noise.kind == "none":
        return np.zeros((n, k))
    if noise.kind == "gaussian":
        return _truncated_gaussian(rng, noise.stddev, (n, k))
    raise ValueError(f"score-level noise cannot be {noise.kind!r}")


def sample_complete(
    m: SparseScoreFunction, noise: NoiseSpec, n: int, seed: int, feature_bias=None
) -> RankingDataset:
    """Feature rows with the descending-score ranking of ``m`` plus noise.

    Only ``none`` and ``gaussian`` noise act at this level; Mallows noise
    perturbs whole rankings, see :func:`mallows_noisy_copy`.
    """
    rng = np.random.default_rng(seed)
    X = sample_features(rng, n, m.d, feature_bias)
    xi = _score_noise(rng, noise, n, m.k)
    pos = positions_from_scores(m.scores(X) + xi)
    meta = {"oracle": "complete", "d": str(m.d), "k": str(m.k), "noise": noise.describe(), "seed": str(seed)}
    return RankingDataset(X, pos, "complete", meta)


# ---------------------------------------------------------------------------
# Mallows draws by repeated insertion


def _insertion_cdfs(k: int, theta: float) -> list:
    # When placing the j-th best label, slot i of 1..j leaves j-i better
    # labels below it, at weight exp(-theta * (j - i)).
    cdfs = []
    for j in range(1, k + 1):
        w = np.exp(-theta * (j - np.arange(1, j + 1, dtype=np.float64)))
        cdfs.append(np.cumsum(w) / w.sum())
    return cdfs


def mallows_positions(centers: np.ndarray, theta: float, rng: np.random.Generator) -> np.ndarray:
    """Draw one ranking per row of an ``(n, k)`` center-position matrix.

    Repeated insertion: walk the center's labels best first and insert
    each into the partial order with geometrically tilted slot
    probabilities. The draw is exact for the KT-distance Mallows model.
    """
    centers = np.asarray(centers, dtype=np.int64)
    n, k = centers.shape
    if theta < 0:
        raise ValueError("theta must be non-negative")
    cdfs = _insertion_cdfs(k, theta)
    slots = np.empty((n, k), dtype=np.int64)
    for j in range(1, k + 1):
        slots[:, j - 1] = np.searchsorted(cdfs[j - 1], rng.random(n), side="right")
    center_order = np.argsort(centers, axis=1, kind="stable")  # 0-based labels, best first
    out = np.empty((n, k), dtype=np.int64)
    for row in range(n):
        order: list[int] = []
        for j in range(k):
            order.insert(int(slots[row, j]), int(center_order[row, j]))
        for place, label in enumerate(order, start=1):
            out[row, label] = place
    return out


def apply_mallows(sigma0: Ranking, theta: float, seed: int) -> Ranking:
    """One exact Mallows draw centered at ``sigma0`` with spread ``theta``."""
    rng = np.random.default_rng(seed)
    pos = mallows_positions(sigma0.positions[None, :], theta, rng)
    return Ranking(pos[0])


def mallows_noisy_copy(data: RankingDataset, theta: float, seed: int) -> RankingDataset:
    """Same features, labels redrawn from a Mallows model centered at each
    row's ranking. Input must be complete."""
    if data.label_kind != "complete":
        raise ValueError("Mallows noise acts on complete rankings")
    rng = np.random.default_rng(seed)
    pos = mallows_positions(data.label_matrix, theta, rng)
    meta = dict(data.metadata)
    meta["noise"] = f"mallows:{theta:g}"
    return RankingDataset(data.features, pos, "complete", meta)


def gaussian_noisy_copy(
    data: RankingDataset, m: SparseScoreFunction, stddev: float, seed: int
) -> RankingDataset:
    """Same features, labels re-ranked from the scores plus fresh
    truncated-Gaussian noise; the paired counterpart of
    :func:`mallows_noisy_copy` for score-level noise."""
    rng = np.random.default_rng(seed)
    xi = _truncated_gaussian(rng, stddev, (data.n, m.k))
    pos = positions_from_scores(m.scores(data.features) + xi)
    meta = dict(data.metadata)
    meta["noise"] = f"gaussian:{stddev:g}"
    return RankingDataset(data.features, pos, "complete", meta)


# ---------------------------------------------------------------------------
# erasure and tie blocks


@dataclass(frozen=True)
class SurvivalSpec:
    """Per-label survival probabilities for erasure coins.

    Coins are independent across labels, so a pair survives with the
    product of its two probabilities; :meth:`pairwise_floor` reports the
    smallest such product. ``constant`` uses one probability vector
    everywhere; ``threshold`` switches between two vectors on a single
    coordinate's value.
    """

    mode: str
    q: np.ndarray | None = None
    coord: int = 0
    q_on: np.ndarray | None = None
    q_off: np.ndarray | None = None

    @classmethod
    def constant(cls, q) -> "SurvivalSpec":
        q = np.atleast_1d(np.asarray(q, dtype=np.float64))
        if np.any(q < 0) or np.any(q > 1):
            raise ValueError("survival probabilities must lie in [0, 1]")
        return cls("constant", q=q)

    @classmethod
    def threshold(cls, coord: int, q_on, q_off) -> "SurvivalSpec":
        q_on = np.atleast_1d(np.asarray(q_on, dtype=np.float64))
        q_off = np.atleast_1d(np.asarray(q_off, dtype=np.float64))
        for arr in (q_on, q_off):
            if np.any(arr < 0) or np.any(arr > 1):
                raise ValueError("survival probabilities must lie in [0, 1]")
        return cls("threshold", coord=int(coord), q_on=q_on, q_off=q_off)

    def probabilities(self, X: np.ndarray, k: int) -> np.ndarray:
        n = X.shape[0]
        if self.mode == "constant":
            q = np.broadcast_to(self.q, (k,))
            return np.broadcast_to(q, (n, k))
        on = np.broadcast_to(self.q_on, (k,))
        off = np.broadcast_to(self.q_off, (k,))
        flag = X[:, self.coord] >= 0.5
        return np.where(flag[:, None], on[None, :], off[None, :])

    def pairwise_floor(self, k: int) -> float:
        """Smallest probability of observing a pair together."""
        if self.mode == "constant":
            q = np.sort(np.broadcast_to(self.q, (k,)))
        else:
            q = np.sort(
                np.minimum(np.broadcast_to(self.q_on, (k,)), np.broadcast_to(self.q_off, (k,)))
            )
        return float(q[0] * q[1]) if k >= 2 else float(q[0])

    def describe(self) -> str:
        if self.mode == "constant":
            return "q=" + ",".join(f"{v:g}" for v in np.atleast_1d(self.q))
        on = ",".join(f"{v:g}" for v in np.atleast_1d(self.q_on))
        off = ",".join(f"{v:g}" for v in np.atleast_1d(self.q_off))
        return f"coord{self.coord}?[{on}]:[{off}]"


def sample_incomplete(
    m: SparseScoreFunction,
    noise: NoiseSpec,
    survival: SurvivalSpec,
    n: int,
    seed: int,
    feature_bias=None,
) -> RankingDataset:
    """Erasure chain: draw features and score noise exactly as
    :func:`sample_complete`, then flip one survival coin per label and
    rank only the survivors. With all-ones survival the output matches
    :func:`sample_complete` sample for sample under the same seed."""
    rng = np.random.default_rng(seed)
    X = sample_features(rng, n, m.d, feature_bias)
    xi = _score_noise(rng, noise, n, m.k)
    q = survival.probabilities(X, m.k)
    dead = rng.random((n, m.k)) >= q
    pos = positions_from_scores(m.scores(X) + xi, dead=dead)
    meta = {
        "oracle": "incomplete",
        "d": str(m.d),
        "k": str(m.k),
        "noise": noise.describe(),
        "survival": survival.describe(),
        "seed": str(seed),
    }
    return RankingDataset(X, pos, "incomplete", meta)


@dataclass(frozen=True)
class PartitionSpec:
    """Distribution over increasing interval partitions of ``1..k``.

    ``block_counts`` picks how many blocks each draw has: ``None`` for
    uniform on ``1..k``, an integer for a fixed count, or a length-``k``
    probability vector. Given the count, the cut points are uniform
    among all increasing compositions.
    """

    k: int
    block_counts: object = None

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("need at least two labels")
        bc = self.block_counts
        if bc is None or isinstance(bc, int):
            if isinstance(bc, int) and not (1 <= bc <= self.k):
                raise ValueError("fixed block count must lie in 1..k")
            return
        weights = np.asarray(bc, dtype=np.float64)
        if weights.shape != (self.k,) or np.any(weights < 0) or weights.sum() <= 0:
            raise ValueError("block count weights must be k non-negative numbers")
        object.__setattr__(self, "block_counts", weights / weights.sum())

    @classmethod
    def singletons(cls, k: int) -> "PartitionSpec":
        return cls(k, k)

    @classmethod
    def single_block(cls, k: int) -> "PartitionSpec":
        return cls(k, 1)

    def sample_counts(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.block_counts is None:
            return rng.integers(1, self.k + 1, size=n)
        if isinstance(self.block_counts, int):
            return np.full(n, self.block_counts, dtype=np.int64)
        return rng.choice(np.arange(1, self.k + 1), size=n, p=self.block_counts)

    def sample_intervals(self, rng: np.random.Generator):
        b = int(self.sample_counts(rng, 1)[0])
        return self.intervals_for(rng, b)

    def intervals_for(self, rng: np.random.Generator, blocks: int):
        cuts = np.sort(rng.choice(self.k - 1, size=blocks - 1, replace=False)) + 1 if blocks > 1 else np.empty(0, dtype=np.int64)
        bounds = np.concatenate(([0], cuts, [self.k]))
        return [(int(bounds[t] + 1), int(bounds[t + 1])) for t in range(blocks)]

    def describe(self) -> str:
        if self.block_counts is None:
            return "blocks=uniform"
        if isinstance(self.block_counts, int):
            return f"blocks={self.block_counts}"
        return "blocks=" + ",".join(f"{w:g}" for w in self.block_counts)


def sample_partial(
    m: SparseScoreFunction,
    noise: NoiseSpec,
    partitions: PartitionSpec,
    n: int,
    seed: int,
    feature_bias=None,
) -> RankingDataset:
    """Tie-block chain: rank with score noise, then collapse the position
    axis along a drawn increasing interval partition. All-singleton
    partitions reproduce :func:`sample_complete` under a shared seed."""
    if partitions.k != m.k:
        raise ValueError("partition spec and target disagree on k")
    rng = np.random.default_rng(seed)
    X = sample_features(rng, n, m.d, feature_bias)
    xi = _score_noise(rng, noise, n, m.k)
    pos = positions_from_scores(m.scores(X) + xi)
    counts = partitions.sample_counts(rng, n)
    out = np.empty((n, m.k), dtype=np.int64)
    for row in range(n):
        intervals = partitions.intervals_for(rng, int(counts[row]))
        bounds = np.fromiter((hi for _, hi in intervals), dtype=np.int64)
        out[row] = np.searchsorted(bounds, pos[row], side="left") + 1
    meta = {
        "oracle": "partial",
        "d": str(m.d),
        "k": str(m.k),
        "noise": noise.describe(),
        "partition": partitions.describe(),
        "seed": str(seed),
    }
    return RankingDataset(X, out, "partial", meta)


# ---------------------------------------------------------------------------
# noise level diagnostics


def _check_paired(noiseless: RankingDataset, noisy: RankingDataset):
    if noiseless.n != noisy.n:
        raise ValueError("paired datasets must have the same length")
    if noiseless.label_kind != "complete" or noisy.label_kind != "complete":
        raise ValueError("diagnostics compare complete rankings")
    if noiseless.features.shape != noisy.features.shape or not np.array_equal(
        noiseless.features, noisy.features
    ):
        raise ValueError("paired datasets must share their feature draws")


def alpha_inconsistency(noiseless: RankingDataset, noisy: RankingDataset) -> float:
    """Fraction of rows whose noisy ranking differs at all from the
    noiseless one."""
    _check_paired(noiseless, noisy)
    differs = np.any(noiseless.label_matrix != noisy.label_matrix, axis=1)
    return float(np.mean(differs))


def beta_kt_gap(noiseless: RankingDataset, noisy: RankingDataset) -> float:
    """Mean KT coefficient between the paired rankings; 1 means no noise."""
    _check_paired(noiseless, noisy)
    return float(np.mean(kt_coefficient_positions(noiseless.label_matrix, noisy.label_matrix)))
