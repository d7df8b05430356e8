"""Pairwise learner for noisy, incomplete, or partial rankings.

The ranking problem is reduced to one binary problem per label pair
``i < j``: a sample contributes the example ``(x, sign(order))`` to pair
``(i, j)`` whenever the pair is comparable in its label, with the
convention ``y = +1`` exactly when ``j`` is ranked better than ``i``.
Each pair gets an exact empirical risk minimiser over a small
hypothesis class (decision stumps plus the two constants), and the
k classifiers aggregate by the Copeland rule: a label's score is one
plus the number of opponents predicted to beat it, and the prediction
sorts scores ascending with uniformly random tie-breaking.

For ground-truth checks, a matrix of pairwise win probabilities can be
turned into a ranking either through the same Copeland scores or by
exhaustive minimisation of the expected pair disagreement over all k!
rankings; under strict stochastic transitivity the two coincide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .datasets import RankingDataset
from .rankings import Ranking

__all__ = [
    "Stump",
    "ConstantClassifier",
    "PairwiseEnsemble",
    "PairwiseProbabilityMatrix",
    "decompose_pairwise",
    "erm_stump",
    "empirical_error",
    "copeland_scores",
    "predict_ovo",
    "fit_ovo",
    "kemeny_median_bruteforce",
    "bayes_copeland_ranking",
]


@dataclass(frozen=True)
class Stump:
    """Predicts ``polarity`` when ``x[feature] <= threshold``, else the opposite."""

    feature: int
    threshold: float
    polarity: int

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        return np.where(X[:, self.feature] <= self.threshold, self.polarity, -self.polarity)

    def describe(self) -> str:
        return f"stump feature={self.feature} threshold={self.threshold!r} polarity={self.polarity}"


@dataclass(frozen=True)
class ConstantClassifier:
    value: int

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        n = 1 if X.ndim == 1 else X.shape[0]
        return np.full(n, self.value, dtype=np.int64)

    def describe(self) -> str:
        return f"constant value={self.value}"


def _hypothesis_from_text(text: str):
    parts = text.split()
    fields = dict(item.split("=", 1) for item in parts[1:])
    if parts[0] == "stump":
        return Stump(int(fields["feature"]), float(fields["threshold"]), int(fields["polarity"]))
    if parts[0] == "constant":
        return ConstantClassifier(int(fields["value"]))
    raise ValueError(f"unknown hypothesis {parts[0]!r}")


def empirical_error(hypothesis, X, y) -> float:
    y = np.asarray(y)
    if y.size == 0:
        return 0.0
    return float(np.mean(hypothesis.predict(X) != y))


def decompose_pairwise(data: RankingDataset) -> dict:
    """Binary datasets per label pair.

    Returns ``{(i, j): (row_indices, labels)}`` for ``1 <= i < j <= k``
    with ``labels[t] = +1`` when ``j`` is ranked better than ``i`` in
    row ``row_indices[t]``. A row contributes only when the pair is
    comparable: both labels observed (incomplete), different blocks
    (partial), always (complete).
    """
    mat = data.label_matrix
    out = {}
    for i in range(1, data.k + 1):
        for j in range(i + 1, data.k + 1):
            a = mat[:, i - 1]
            b = mat[:, j - 1]
            comparable = (a > 0) & (b > 0) & (a != b)
            rows = np.flatnonzero(comparable)
            out[(i, j)] = (rows, np.sign(a[rows] - b[rows]).astype(np.int64))
    return out


def erm_stump(X, y):
    """Exact empirical risk minimiser over constants and stumps.

    Candidates: the constants +1 and -1, then every feature with every
    midpoint of consecutive distinct values and both polarities,
    scanned in (feature, threshold, polarity) order with strict
    improvement, so earlier candidates win ties and the all-ties empty
    dataset yields the constant +1.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = y.shape[0]
    if n == 0:
        return ConstantClassifier(1)
    pos_total = int(np.count_nonzero(y == 1))
    neg_total = n - pos_total
    best = ConstantClassifier(1)
    best_err = neg_total  # mistakes of the constant +1
    if pos_total < best_err:
        best, best_err = ConstantClassifier(-1), pos_total
    for f in range(X.shape[1]):
        vals = X[:, f]
        order = np.argsort(vals, kind="stable")
        vs = vals[order]
        ys = y[order]
        pos_prefix = np.cumsum(ys == 1)
        neg_prefix = np.cumsum(ys == -1)
        cut = np.flatnonzero(vs[:-1] < vs[1:])
        if cut.size == 0:
            continue
        # polarity -1 predicts -1 on the left of the threshold
        err_neg = pos_prefix[cut] + (neg_total - neg_prefix[cut])
        err_pos = neg_prefix[cut] + (pos_total - pos_prefix[cut])
        for t in range(cut.size):
            thr = (vs[cut[t]] + vs[cut[t] + 1]) / 2.0
            if err_neg[t] < best_err:
                best_err = int(err_neg[t])
                best = Stump(f, float(thr), -1)
            if err_pos[t] < best_err:
                best_err = int(err_pos[t])
                best = Stump(f, float(thr), 1)
    return best


@dataclass
class PairwiseEnsemble:
    """One binary classifier per label pair plus Copeland aggregation."""

    k: int
    classifiers: dict
    tie_break_seed: int = 0
    empty_pairs: list = field(default_factory=list)
    pair_counts: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = {(i, j) for i in range(1, self.k + 1) for j in range(i + 1, self.k + 1)}
        if set(self.classifiers) != expected:
            raise ValueError("need exactly one classifier per unordered label pair")

    def min_pair_frequency(self, n: int | None = None):
        """Smallest fraction of training rows on which a pair was comparable."""
        if not self.pair_counts:
            return None
        counts = np.asarray(list(self.pair_counts.values()), dtype=np.float64)
        return float(counts.min() / n) if n else float(counts.min())

    def score_matrix(self, X) -> np.ndarray:
        """Copeland scores for every row of ``X``, shape ``(n, k)``.

        Score of label ``i`` is 1 plus the number of opponents predicted
        to beat it; each pair that saw training data contributes exactly
        one loss, so row sums equal ``k`` plus the number of decided
        pairs. Pairs that saw no training example abstain, which is what
        makes an ensemble fit on empty data predict a uniformly random
        permutation (all scores tie).
        """
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        undecided = set(self.empty_pairs)
        scores = np.ones((X.shape[0], self.k), dtype=np.int64)
        for (i, j), clf in self.classifiers.items():
            if (i, j) in undecided:
                continue
            votes = clf.predict(X)
            scores[:, i - 1] += votes == 1  # j ranked better than i
            scores[:, j - 1] += votes == -1
        return scores

    def predict_positions(self, X, rng: np.random.Generator) -> np.ndarray:
        scores = self.score_matrix(X)
        n, k = scores.shape
        # scores are integers, so adding noise in [0, 1) only reorders ties,
        # and it does so uniformly at random
        keys = scores + rng.random(scores.shape)
        order = np.argsort(keys, axis=1, kind="stable")
        pos = np.empty((n, k), dtype=np.int64)
        rows = np.arange(n)[:, None]
        pos[rows, order] = np.arange(1, k + 1)[None, :]
        return pos

    def to_text(self) -> str:
        empty = ";".join(f"{i}-{j}" for (i, j) in sorted(self.empty_pairs))
        lines = [f"ovo k={self.k} seed={self.tie_break_seed} empty={empty}"]
        for (i, j) in sorted(self.classifiers):
            lines.append(f"pair {i} {j} {self.classifiers[(i, j)].describe()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PairwiseEnsemble":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = dict(item.split("=", 1) for item in lines[0].split()[1:])
        classifiers = {}
        for ln in lines[1:]:
            parts = ln.split(maxsplit=3)
            if parts[0] != "pair":
                raise ValueError(f"malformed ensemble line {ln!r}")
            classifiers[(int(parts[1]), int(parts[2]))] = _hypothesis_from_text(parts[3])
        empty = []
        for item in head.get("empty", "").split(";"):
            if item:
                i, j = item.split("-")
                empty.append((int(i), int(j)))
        return cls(int(head["k"]), classifiers, int(head.get("seed", 0)), empty)


def fit_ovo(data: RankingDataset, hypothesis: str = "stump", seed: int = 0) -> PairwiseEnsemble:
    """Decompose into pairs and fit the exact ERM for each.

    A pair whose binary dataset is empty gets the constant +1 and is
    reported in ``empty_pairs``.
    """
    if hypothesis != "stump":
        raise ValueError(f"unsupported hypothesis class {hypothesis!r}")
    pairs = decompose_pairwise(data)
    classifiers = {}
    empty = []
    counts = {}
    for key, (rows, y) in pairs.items():
        counts[key] = int(rows.size)
        if rows.size == 0:
            empty.append(key)
            classifiers[key] = ConstantClassifier(1)
        else:
            classifiers[key] = erm_stump(data.features[rows], y)
    return PairwiseEnsemble(data.k, classifiers, seed, empty, counts)


def copeland_scores(ensemble: PairwiseEnsemble, x) -> np.ndarray:
    """Copeland scores at a single point; in ``1..k``, smaller is better."""
    return ensemble.score_matrix(np.asarray(x, dtype=np.float64))[0]


def predict_ovo(ensemble: PairwiseEnsemble, x, rng: np.random.Generator) -> Ranking:
    """Ascending-score ranking; labels with equal scores are permuted
    uniformly at random by ``rng``."""
    return Ranking(ensemble.predict_positions(np.asarray(x, dtype=np.float64), rng)[0])


@dataclass(frozen=True)
class PairwiseProbabilityMatrix:
    """Ground-truth win probabilities: ``p[i-1, j-1] = Pr[i beats j]``."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 2:
            raise ValueError("need a square matrix of size >= 2")
        off = ~np.eye(p.shape[0], dtype=bool)
        if not np.allclose(p[off] + p.T[off], 1.0):
            raise ValueError("probabilities must satisfy p_ij + p_ji = 1")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @property
    def k(self) -> int:
        return self.p.shape[0]

    def prob(self, i: int, j: int) -> float:
        return float(self.p[i - 1, j - 1])

    def is_sst(self) -> bool:
        """No probability equals 1/2 and pairwise wins are transitive."""
        k = self.k
        off = ~np.eye(k, dtype=bool)
        if np.any(self.p[off] == 0.5):
            return False
        wins = self.p > 0.5
        for i, u, j in itertools.permutations(range(k), 3):
            if wins[i, u] and wins[u, j] and not wins[i, j]:
                return False
        return True


def bayes_copeland_ranking(matrix: PairwiseProbabilityMatrix) -> Ranking:
    """Copeland ranking of a probability matrix: position of label i is
    1 plus the number of opponents beating it with probability > 1/2."""
    k = matrix.k
    losses = (matrix.p < 0.5) & ~np.eye(k, dtype=bool)
    scores = 1 + losses.sum(axis=1)
    order = np.argsort(scores, kind="stable") + 1
    return Ranking.from_order(order)


def kemeny_median_bruteforce(matrix: PairwiseProbabilityMatrix) -> Ranking:
    """Exhaustive minimiser of the expected pair disagreement.

    Enumerates all k! rankings and scores each by
    ``sum over pairs i < j of (1 - p_ij)`` when the ranking puts i above
    j, and ``p_ij`` otherwise. Only feasible for k <= 8.
    """
    k = matrix.k
    if k > 8:
        raise ValueError("exhaustive search only supports k <= 8")
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    best_cost = np.inf
    best = None
    for perm in itertools.permutations(range(1, k + 1)):
        pos = np.asarray(perm)
        cost = 0.0
        for i, j in pairs:
            if pos[i] < pos[j]:
                cost += 1.0 - matrix.p[i, j]
            else:
                cost += matrix.p[i, j]
        if cost < best_cost:
            best_cost = cost
            best = pos
    return Ranking(best)
