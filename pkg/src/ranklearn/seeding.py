"""Deterministic derivation of child seeds from a master seed.

Every component that needs several independent random streams (one per
tree, one per label, one per cross-validation repetition) derives them
through :func:`derive_seeds`. Child b is the b-th 63-bit integer drawn
from ``numpy.random.default_rng(seed)``, so the full seed table is fixed
up front and work items can run in any order, or in parallel, and still
reproduce the sequential result bit for bit.
"""

from __future__ import annotations

import numpy as np

__all__ = ["derive_seeds"]


def derive_seeds(seed: int, count: int) -> np.ndarray:
    """Return ``count`` child seeds derived from ``seed``.

    The table depends only on ``(seed, count_prefix)``: extending the
    count keeps all earlier entries unchanged.
    """
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2**63, size=count, dtype=np.int64)
