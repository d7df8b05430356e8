"""Quick built-in sanity checks behind the ``selftest`` subcommand.

A fast subset of the full test suite: exhaustive metric checks on small
permutation groups, a Mallows frequency check against the enumerated
density, exact-ERM spot checks, and Copeland versus exhaustive median
agreement on random transitive probability matrices.
"""

from __future__ import annotations

import itertools

import numpy as np

from .oracles import mallows_positions
from .pairwise import (
    PairwiseProbabilityMatrix,
    bayes_copeland_ranking,
    empirical_error,
    erm_stump,
    kemeny_median_bruteforce,
)
from .rankings import Ranking, kendall_tau, kt_coefficient, spearman

__all__ = ["run_selftest"]


def _naive_kendall(a, b):
    k = len(a)
    return sum(
        1
        for i in range(k)
        for j in range(i + 1, k)
        if (a[i] - a[j]) * (b[i] - b[j]) < 0
    )


def _check_metrics() -> bool:
    perms = [Ranking(p) for p in itertools.permutations(range(1, 5))]
    for a in perms:
        for b in perms:
            naive = _naive_kendall(a.positions, b.positions)
            if kendall_tau(a, b) != naive:
                return False
            if abs(kt_coefficient(a, b) - (1 - 2 * naive / 6)) > 1e-12:
                return False
            if spearman(a, b) != int(np.sum((a.positions - b.positions) ** 2)):
                return False
    return True


def _check_mallows(seed: int) -> bool:
    theta = float(np.log(2.0))
    center = Ranking([1, 2, 3])
    n = 20000
    draws = mallows_positions(np.tile(center.positions, (n, 1)), theta, np.random.default_rng(seed))
    weights = {
        p: np.exp(-theta * _naive_kendall(p, (1, 2, 3)))
        for p in itertools.permutations((1, 2, 3))
    }
    z = sum(weights.values())
    counts: dict = {}
    for row in draws:
        key = tuple(int(v) for v in row)
        counts[key] = counts.get(key, 0) + 1
    tv = 0.5 * sum(abs(counts.get(p, 0) / n - w / z) for p, w in weights.items())
    return tv < 0.03


def _check_erm(seed: int) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(20):
        n = int(rng.integers(2, 30))
        d = int(rng.integers(1, 4))
        X = rng.random((n, d))
        y = rng.choice([-1, 1], size=n)
        best = erm_stump(X, y)
        err = empirical_error(best, X, y)
        brute = min(
            float(np.mean(np.where(X[:, f] <= t, s, -s) != y))
            for f in range(d)
            for t in np.unique(X[:, f])[:-1]
            for s in (-1, 1)
        )
        brute = min(brute, float(np.mean(y != 1)), float(np.mean(y != -1)))
        if err > brute + 1e-12:
            return False
    return True


def _check_copeland_kemeny(seed: int) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(50):
        k = int(rng.integers(3, 6))
        order = rng.permutation(k)
        p = np.full((k, k), 0.5)
        pos = np.empty(k, dtype=int)
        pos[order] = np.arange(k)
        for i in range(k):
            for j in range(i + 1, k):
                margin = rng.uniform(0.05, 0.45)
                win = 0.5 + margin if pos[i] < pos[j] else 0.5 - margin
                p[i, j], p[j, i] = win, 1 - win
        matrix = PairwiseProbabilityMatrix(p)
        if bayes_copeland_ranking(matrix) != kemeny_median_bruteforce(matrix):
            return False
    return True


def run_selftest(seed: int = 0):
    """Run all checks; returns (lines, all_ok)."""
    checks = [
        ("metric-oracles", _check_metrics),
        ("mallows-density", lambda: _check_mallows(seed + 1)),
        ("erm-exactness", lambda: _check_erm(seed + 2)),
        ("copeland-kemeny", lambda: _check_copeland_kemeny(seed + 3)),
    ]
    lines = []
    ok = True
    for name, fn in checks:
        passed = fn()
        ok = ok and passed
        lines.append(name if passed else f"{name} FAILED")
    return lines, ok
