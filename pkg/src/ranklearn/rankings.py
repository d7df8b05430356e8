"""Rankings over a fixed label set, their distances, and conversions.

Labels are the integers ``1..k``. Three kinds of ranking are supported:

* :class:`Ranking` stores positions. ``positions[i-1]`` is the place of
  label ``i`` and position 1 means best.
* :class:`IncompleteRanking` stores the surviving labels as a best-first
  list. Absolute positions are not recoverable, only the relative order
  of the surviving labels.
* :class:`PartialRanking` stores ordered tie blocks, best block first.

All values are immutable after construction, all functions here are
pure, and everything is safe to share across threads.

Text formats (used by the dataset files and the command line):

* complete: space separated positions, e.g. ``"2 1 3"``
* incomplete: leading ``>`` then the best-first label list, ``">3 1 5"``
* partial: blocks best first, ``"{5,2}>{4}>{1,3}"``
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Ranking",
    "IncompleteRanking",
    "PartialRanking",
    "ScoreVector",
    "kendall_tau",
    "kt_coefficient",
    "spearman",
    "argsort",
    "canonical_repr",
    "from_canonical",
    "partial_rank",
    "pairwise_sign",
    "ranking_to_text",
    "ranking_from_text",
    "kendall_tau_positions",
    "kt_coefficient_positions",
    "positions_from_scores",
    "positions_from_values",
    "restricted_kt_coefficient",
]


def _as_int_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64).copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Ranking:
    """A complete ranking of ``k`` labels, stored as 1-based positions."""

    positions: np.ndarray
    k: int = field(init=False)

    def __post_init__(self):
        pos = _as_int_array(self.positions)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "k", int(pos.shape[0]))
        if self.k < 2:
            raise ValueError("a ranking needs at least two labels")
        if not np.array_equal(np.sort(pos), np.arange(1, self.k + 1)):
            raise ValueError(f"positions {pos.tolist()} are not a permutation of 1..{self.k}")

    @classmethod
    def from_order(cls, order) -> "Ranking":
        """Build from a best-first list of labels."""
        order = np.asarray(order, dtype=np.int64)
        positions = np.empty(order.shape[0], dtype=np.int64)
        positions[order - 1] = np.arange(1, order.shape[0] + 1)
        return cls(positions)

    @classmethod
    def identity(cls, k: int) -> "Ranking":
        return cls(np.arange(1, k + 1))

    def order(self) -> np.ndarray:
        """Labels best first."""
        return np.argsort(self.positions, kind="stable") + 1

    def reversed(self) -> "Ranking":
        return Ranking(self.k + 1 - self.positions)

    def __eq__(self, other):
        return isinstance(other, Ranking) and np.array_equal(self.positions, other.positions)

    def __hash__(self):
        return hash(tuple(self.positions.tolist()))

    def __repr__(self):
        return f"Ranking({self.positions.tolist()})"


@dataclass(frozen=True)
class IncompleteRanking:
    """The surviving labels of a ranking, best first, positions erased."""

    observed: np.ndarray
    k: int

    def __post_init__(self):
        obs = _as_int_array(self.observed)
        object.__setattr__(self, "observed", obs)
        if self.k < 2:
            raise ValueError("a ranking needs at least two labels")
        if obs.size and (obs.min() < 1 or obs.max() > self.k):
            raise ValueError("observed labels must lie in 1..k")
        if np.unique(obs).size != obs.size:
            raise ValueError("observed labels must be distinct")

    @property
    def length(self) -> int:
        return int(self.observed.shape[0])

    def is_full(self) -> bool:
        return self.length == self.k

    def to_ranking(self) -> Ranking:
        """Only valid when every label survived."""
        if not self.is_full():
            raise ValueError("not all labels are observed")
        return Ranking.from_order(self.observed)

    def __eq__(self, other):
        return (
            isinstance(other, IncompleteRanking)
            and self.k == other.k
            and np.array_equal(self.observed, other.observed)
        )

    def __hash__(self):
        return hash((self.k, tuple(self.observed.tolist())))

    def __repr__(self):
        return f"IncompleteRanking({self.observed.tolist()}, k={self.k})"


@dataclass(frozen=True)
class PartialRanking:
    """Ordered tie blocks, best block first, covering all of 1..k."""

    blocks: tuple
    k: int

    def __post_init__(self):
        blocks = tuple(frozenset(int(v) for v in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.k < 2:
            raise ValueError("a ranking needs at least two labels")
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise ValueError("blocks must be non-empty")
            if b & seen:
                raise ValueError("blocks must be disjoint")
            seen |= b
        if seen != set(range(1, self.k + 1)):
            raise ValueError("blocks must cover exactly the labels 1..k")

    def block_index(self) -> np.ndarray:
        """1-based block id per label; smaller is better."""
        idx = np.empty(self.k, dtype=np.int64)
        for t, b in enumerate(self.blocks, start=1):
            for label in b:
                idx[label - 1] = t
        return idx

    def __eq__(self, other):
        return (
            isinstance(other, PartialRanking)
            and self.k == other.k
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.k, self.blocks))

    def __repr__(self):
        inner = ">".join("{" + ",".join(str(v) for v in sorted(b)) + "}" for b in self.blocks)
        return f"PartialRanking({inner}, k={self.k})"


@dataclass(frozen=True)
class ScoreVector:
    """Per-label scores in ``[0, 1]``; ``nan`` marks an erased entry."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).copy()
        if vals.ndim != 1 or vals.shape[0] < 2:
            raise ValueError("a score vector needs at least two entries")
        live = ~np.isnan(vals)
        if np.any(vals[live] < 0.0) or np.any(vals[live] > 1.0):
            raise ValueError("scores must lie in [0, 1]")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def k(self) -> int:
        return int(self.values.shape[0])

    def erased(self) -> np.ndarray:
        return np.isnan(self.values)


# ---------------------------------------------------------------------------
# distances


def _check_same_k(a: Ranking, b: Ranking) -> int:
    if a.k != b.k:
        raise ValueError(f"rankings have different label counts ({a.k} vs {b.k})")
    return a.k


def kendall_tau(a: Ranking, b: Ranking) -> int:
    """Number of label pairs the two rankings order differently.

    Ranges from 0 (equal) to ``k*(k-1)/2`` (full reversal) and is a
    metric on the set of complete rankings.
    """
    _check_same_k(a, b)
    return int(kendall_tau_positions(a.positions[None, :], b.positions[None, :])[0])


def kt_coefficient(a: Ranking, b: Ranking) -> float:
    """Kendall tau distance rescaled to ``[-1, 1]``; 1 means equal."""
    k = _check_same_k(a, b)
    total = k * (k - 1) // 2
    return 1.0 - 2.0 * kendall_tau(a, b) / total


def spearman(a: Ranking, b: Ranking) -> int:
    """Sum of squared position differences."""
    _check_same_k(a, b)
    diff = a.positions - b.positions
    return int(np.dot(diff, diff))


# ---------------------------------------------------------------------------
# conversions


def argsort(scores: ScoreVector) -> IncompleteRanking:
    """Rank the non-erased labels by descending score.

    Exact score ties are broken toward the smaller label index, so the
    result is deterministic. Erased labels are absent from the output;
    when nothing is erased the result covers all ``k`` labels.
    """
    vals = scores.values
    live = np.flatnonzero(~np.isnan(vals))
    order = live[np.argsort(-vals[live], kind="stable")]
    return IncompleteRanking(order + 1, scores.k)


def canonical_repr(sigma: Ranking) -> np.ndarray:
    """Positions normalised by ``k``: distinct multiples of ``1/k`` in ``(0, 1]``."""
    return sigma.positions / sigma.k


def from_canonical(values) -> Ranking:
    """Inverse of :func:`canonical_repr`.

    Accepts any vector of position-like values (smaller means better)
    and sorts ascending, ties toward the smaller label index. For the
    exact output of :func:`canonical_repr` this recovers the ranking.
    """
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable") + 1
    return Ranking.from_order(order)


def partial_rank(sigma: Ranking, partition) -> PartialRanking:
    """Collapse position intervals of ``sigma`` into tie blocks.

    ``partition`` is a list of inclusive 1-based intervals ``(lo, hi)``
    that must be contiguous, increasing, and cover ``1..k``. Block ``t``
    collects the labels whose position falls in interval ``t``.
    """
    k = sigma.k
    intervals = [(int(lo), int(hi)) for lo, hi in partition]
    expect_lo = 1
    for lo, hi in intervals:
        if lo != expect_lo or hi < lo:
            raise ValueError(f"intervals must be contiguous and increasing, got {intervals}")
        expect_lo = hi + 1
    if expect_lo != k + 1:
        raise ValueError(f"intervals must cover 1..{k}, got {intervals}")
    blocks = []
    for lo, hi in intervals:
        members = np.flatnonzero((sigma.positions >= lo) & (sigma.positions <= hi)) + 1
        blocks.append(frozenset(int(v) for v in members))
    return PartialRanking(tuple(blocks), k)


def pairwise_sign(sigma, i: int, j: int):
    """Relative order of labels ``i`` and ``j``: -1 when ``i`` is ranked
    better, +1 when ``j`` is, ``None`` when the pair is not comparable.

    Works on complete, incomplete (``None`` when either label was
    erased) and partial rankings (``None`` when both share a block).
    """
    if i == j:
        raise ValueError("need two distinct labels")
    if isinstance(sigma, Ranking):
        return -1 if sigma.positions[i - 1] < sigma.positions[j - 1] else 1
    if isinstance(sigma, IncompleteRanking):
        obs = sigma.observed
        pi = np.flatnonzero(obs == i)
        pj = np.flatnonzero(obs == j)
        if pi.size == 0 or pj.size == 0:
            return None
        return -1 if pi[0] < pj[0] else 1
    if isinstance(sigma, PartialRanking):
        idx = sigma.block_index()
        bi, bj = idx[i - 1], idx[j - 1]
        if bi == bj:
            return None
        return -1 if bi < bj else 1
    raise TypeError(f"unsupported ranking type {type(sigma)!r}")


# ---------------------------------------------------------------------------
# text formats


def ranking_to_text(sigma) -> str:
    if isinstance(sigma, Ranking):
        return " ".join(str(int(p)) for p in sigma.positions)
    if isinstance(sigma, IncompleteRanking):
        return ">" + " ".join(str(int(v)) for v in sigma.observed)
    if isinstance(sigma, PartialRanking):
        return ">".join("{" + ",".join(str(v) for v in sorted(b)) + "}" for b in sigma.blocks)
    raise TypeError(f"unsupported ranking type {type(sigma)!r}")


def ranking_from_text(text: str, k: int):
    text = text.strip()
    if not text:
        raise ValueError("empty ranking text")
    if text.startswith("{"):
        parts = text.split(">")
        blocks = []
        for part in parts:
            part = part.strip()
            if not (part.startswith("{") and part.endswith("}")):
                raise ValueError(f"malformed block {part!r}")
            blocks.append(frozenset(int(v) for v in part[1:-1].split(",") if v.strip()))
        return PartialRanking(tuple(blocks), k)
    if text.startswith(">"):
        body = text[1:].strip()
        labels = [int(v) for v in body.split()] if body else []
        return IncompleteRanking(np.asarray(labels, dtype=np.int64), k)
    positions = [int(v) for v in text.split()]
    if len(positions) != k:
        raise ValueError(f"expected {k} positions, got {len(positions)}")
    return Ranking(positions)


# ---------------------------------------------------------------------------
# batch helpers on position matrices (rows are rankings)


def kendall_tau_positions(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise Kendall tau distance between two ``(n, k)`` position arrays."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    da = a[:, :, None] - a[:, None, :]
    db = b[:, :, None] - b[:, None, :]
    iu = np.triu_indices(a.shape[1], k=1)
    return np.count_nonzero((da * db)[:, iu[0], iu[1]] < 0, axis=1)


def kt_coefficient_positions(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    k = np.asarray(a).shape[1]
    total = k * (k - 1) // 2
    return 1.0 - 2.0 * kendall_tau_positions(a, b) / total


def positions_from_scores(scores: np.ndarray, dead: np.ndarray | None = None) -> np.ndarray:
    """Row-wise descending-score ranking of an ``(n, k)`` score matrix.

    Ties break toward the smaller label index, matching :func:`argsort`.
    With a boolean ``dead`` mask, erased labels get position 0 and the
    survivors get their order 1..len(survivors) within the row.
    """
    scores = np.asarray(scores, dtype=np.float64)
    n, k = scores.shape
    keys = -scores
    if dead is not None:
        keys = np.where(dead, np.inf, keys)
    order = np.argsort(keys, axis=1, kind="stable")
    pos = np.empty((n, k), dtype=np.int64)
    rows = np.arange(n)[:, None]
    pos[rows, order] = np.arange(1, k + 1)[None, :]
    if dead is not None:
        pos[dead] = 0
    return pos


def positions_from_values(values: np.ndarray) -> np.ndarray:
    """Row-wise ascending ranking for position-valued estimates."""
    values = np.asarray(values, dtype=np.float64)
    n, k = values.shape
    order = np.argsort(values, axis=1, kind="stable")
    pos = np.empty((n, k), dtype=np.int64)
    rows = np.arange(n)[:, None]
    pos[rows, order] = np.arange(1, k + 1)[None, :]
    return pos


def restricted_kt_coefficient(truth, predicted: Ranking):
    """KT coefficient of ``predicted`` against the comparable pairs of ``truth``.

    ``truth`` may be complete, incomplete, or partial; only pairs the
    truth actually orders contribute. Returns ``None`` when the truth
    orders no pair at all. For complete truth this equals
    :func:`kt_coefficient`.
    """
    if isinstance(truth, Ranking):
        ref = truth.positions
    elif isinstance(truth, IncompleteRanking):
        ref = np.zeros(truth.k, dtype=np.int64)
        ref[truth.observed - 1] = np.arange(1, truth.length + 1)
    elif isinstance(truth, PartialRanking):
        ref = truth.block_index()
    else:
        raise TypeError(f"unsupported ranking type {type(truth)!r}")
    if predicted.k != len(ref):
        raise ValueError("label counts differ")
    dr = ref[:, None] - ref[None, :]
    dp = predicted.positions[:, None] - predicted.positions[None, :]
    iu = np.triu_indices(len(ref), k=1)
    comparable = (ref[:, None] > 0) & (ref[None, :] > 0) & (dr != 0)
    comparable = comparable[iu]
    m = int(np.count_nonzero(comparable))
    if m == 0:
        return None
    prod = (dr * dp)[iu][comparable]
    concordant = int(np.count_nonzero(prod > 0))
    discordant = int(np.count_nonzero(prod < 0))
    return (concordant - discordant) / m
