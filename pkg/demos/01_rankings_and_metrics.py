"""Rankings of three kinds and the distances between them.

Walks through positions versus best-first orders, the erased-score
argsort, tie blocks from position intervals, and the text formats.
"""

import numpy as np

from ranklearn import (
    Ranking,
    ScoreVector,
    argsort,
    canonical_repr,
    from_canonical,
    kendall_tau,
    kt_coefficient,
    partial_rank,
    spearman,
)
from ranklearn.rankings import ranking_to_text

print("A complete ranking stores 1-based positions: positions[i-1] is where")
print("label i sits, and position 1 means best.\n")

a = Ranking([1, 2, 3])
b = Ranking([2, 1, 3])
c = Ranking([3, 2, 1])
print(f"a = {a}, b = {b}, c = a reversed = {c}")
print(f"kendall_tau(a, b) = {kendall_tau(a, b)} (one discordant pair)")
print(f"kendall_tau(a, c) = {kendall_tau(a, c)} (all three pairs flip)")
print(f"kt_coefficient(a, b) = {kt_coefficient(a, b):.4f} (1 - 2*1/3)")
print(f"spearman(a, c) = {spearman(a, c)} ((1-3)^2 + 0 + (3-1)^2)\n")

print("Scores sort descending; erased entries (nan) simply drop out:")
sv = ScoreVector([0.4, np.nan, 0.7, np.nan, 0.1])
inc = argsort(sv)
print(f"argsort({sv.values.tolist()}) = {inc}  ->  text {ranking_to_text(inc)!r}\n")

print("The canonical representation is positions divided by k; sorting those")
print("values ascending recovers the ranking exactly:")
sigma = Ranking([2, 1, 3])
vals = canonical_repr(sigma)
print(f"canonical_repr({sigma}) = {np.round(vals, 4).tolist()}")
print(f"from_canonical(...) = {from_canonical(vals)}\n")

print("Collapsing position intervals produces ordered tie blocks:")
full = argsort(ScoreVector([0.2, 0.4, 0.1, 0.3, 0.5])).to_ranking()
blocks = partial_rank(full, [(1, 2), (3, 3), (4, 5)])
print(f"scores (0.2, 0.4, 0.1, 0.3, 0.5) rank as {full.order().tolist()} best-first")
print(f"intervals [1..2][3..3][4..5] give {ranking_to_text(blocks)!r}")
