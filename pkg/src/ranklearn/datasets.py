"""Feature matrices paired with ranking labels, and their file format.

A dataset holds an ``(n, d)`` feature matrix and one ranking per row,
all of the same kind. Labels are stored compactly in an ``(n, k)``
integer matrix whose meaning depends on the kind:

* ``complete``: row is a permutation of ``1..k`` (positions).
* ``incomplete``: erased labels are 0; surviving labels carry their
  1-based order among the survivors.
* ``partial``: every label carries its 1-based tie-block id.

File format: UTF-8 CSV with header ``f1,...,fd,rank_1,...,rank_k``.
``rank_i`` holds the position of label ``i``; an empty cell means the
label was erased (incomplete kind); repeated values within a row encode
tie blocks (partial kind). Lines starting with ``#`` before the header
carry ``key=value`` metadata, including the declared label kind.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .rankings import IncompleteRanking, PartialRanking, Ranking

__all__ = ["RankingDataset", "load_dataset", "save_dataset", "loads_dataset", "dumps_dataset"]

LABEL_KINDS = ("complete", "incomplete", "partial")


def _validate_label_matrix(mat: np.ndarray, kind: str, lineno=None):
    n, k = mat.shape
    where = "" if lineno is None else f" at line {lineno}"
    if kind == "complete":
        expect = np.arange(1, k + 1)
        bad = np.flatnonzero(~np.all(np.sort(mat, axis=1) == expect[None, :], axis=1))
        if bad.size:
            raise ValueError(
                f"complete ranking is not a permutation of 1..{k}{where or f' at row {bad[0]}'}"
            )
    elif kind == "incomplete":
        for r in range(n):
            row = mat[r]
            obs = row[row > 0]
            if not np.array_equal(np.sort(obs), np.arange(1, obs.size + 1)):
                raise ValueError(
                    f"incomplete ranking must use orders 1..len(observed){where or f' at row {r}'}"
                )
    elif kind == "partial":
        for r in range(n):
            row = mat[r]
            if row.min() < 1:
                raise ValueError(f"partial ranking blocks start at 1{where or f' at row {r}'}")
            nb = int(row.max())
            if not np.array_equal(np.unique(row), np.arange(1, nb + 1)):
                raise ValueError(f"partial ranking block ids must cover 1..B{where or f' at row {r}'}")
    else:
        raise ValueError(f"unknown label kind {kind!r}")


@dataclass
class RankingDataset:
    """Features plus homogeneous ranking labels, with provenance metadata."""

    features: np.ndarray
    label_matrix: np.ndarray
    label_kind: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.label_matrix = np.asarray(self.label_matrix, dtype=np.int64)
        if self.features.ndim != 2 or self.label_matrix.ndim != 2:
            raise ValueError("features and labels must be 2-d arrays")
        if self.features.shape[0] != self.label_matrix.shape[0]:
            raise ValueError("feature and label row counts differ")
        if self.label_matrix.shape[1] < 2:
            raise ValueError("need at least two labels")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features contain non-finite values")
        _validate_label_matrix(self.label_matrix, self.label_kind)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def k(self) -> int:
        return self.label_matrix.shape[1]

    def binary_columns(self) -> np.ndarray:
        """Boolean mask of columns whose values are all 0 or 1."""
        return np.all((self.features == 0.0) | (self.features == 1.0), axis=0)

    def is_binary(self) -> bool:
        return bool(self.binary_columns().all())

    def label(self, row: int):
        """The row's label as a ranking object."""
        vals = self.label_matrix[row]
        if self.label_kind == "complete":
            return Ranking(vals)
        if self.label_kind == "incomplete":
            obs_mask = vals > 0
            order = np.argsort(np.where(obs_mask, vals, np.iinfo(np.int64).max), kind="stable")
            order = order[: int(obs_mask.sum())]
            return IncompleteRanking(order + 1, self.k)
        blocks = tuple(
            frozenset(int(v) for v in np.flatnonzero(vals == b) + 1)
            for b in range(1, int(vals.max()) + 1)
        )
        return PartialRanking(blocks, self.k)

    def labels(self):
        return [self.label(r) for r in range(self.n)]

    def subset(self, idx) -> "RankingDataset":
        idx = np.asarray(idx)
        return RankingDataset(
            self.features[idx], self.label_matrix[idx], self.label_kind, dict(self.metadata)
        )

    @classmethod
    def from_labels(cls, features, labels, metadata=None) -> "RankingDataset":
        """Build from a list of ranking objects of one kind."""
        if not labels:
            raise ValueError("need at least one labelled row")
        first = labels[0]
        k = first.k
        mat = np.zeros((len(labels), k), dtype=np.int64)
        if isinstance(first, Ranking):
            kind = "complete"
            for r, lab in enumerate(labels):
                mat[r] = lab.positions
        elif isinstance(first, IncompleteRanking):
            kind = "incomplete"
            for r, lab in enumerate(labels):
                mat[r, lab.observed - 1] = np.arange(1, lab.length + 1)
        elif isinstance(first, PartialRanking):
            kind = "partial"
            for r, lab in enumerate(labels):
                mat[r] = lab.block_index()
        else:
            raise TypeError(f"unsupported label type {type(first)!r}")
        return cls(np.asarray(features, dtype=np.float64), mat, kind, metadata or {})


def _format_feature(value: float, binary: bool) -> str:
    if binary:
        return str(int(value))
    return repr(float(value))


def dumps_dataset(data: RankingDataset) -> str:
    """Serialise a dataset to CSV text; exact round trip with :func:`loads_dataset`."""
    out = io.StringIO()
    out.write(f"# label-kind={data.label_kind}\n")
    for key in sorted(data.metadata):
        out.write(f"# {key}={data.metadata[key]}\n")
    header = [f"f{j+1}" for j in range(data.d)] + [f"rank_{i+1}" for i in range(data.k)]
    out.write(",".join(header) + "\n")
    binary = data.binary_columns()
    for r in range(data.n):
        cells = [_format_feature(data.features[r, j], binary[j]) for j in range(data.d)]
        for i in range(data.k):
            v = data.label_matrix[r, i]
            cells.append("" if v == 0 else str(int(v)))
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def save_dataset(data: RankingDataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_dataset(data))


def _parse_header(cols):
    d = 0
    while d < len(cols) and cols[d] == f"f{d+1}":
        d += 1
    k = len(cols) - d
    for i in range(k):
        if cols[d + i] != f"rank_{i+1}":
            raise ValueError(f"malformed header column {cols[d + i]!r}")
    if d == 0 or k < 2:
        raise ValueError("header must name f1..fd and rank_1..rank_k with k >= 2")
    return d, k


def loads_dataset(text: str, label_kind: str | None = None) -> RankingDataset:
    """Parse CSV text produced by :func:`dumps_dataset` or written by hand.

    The label kind is taken from an explicit argument, else from a
    ``# label-kind=...`` comment, else inferred: empty cells mean
    incomplete, repeated values mean partial, otherwise complete.
    Malformed rows raise ``ValueError`` naming the 1-based line number.
    """
    metadata: dict = {}
    declared = None
    lines = text.splitlines()
    li = 0
    while li < len(lines) and (not lines[li].strip() or lines[li].lstrip().startswith("#")):
        stripped = lines[li].lstrip()
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                if key.strip() == "label-kind":
                    declared = value.strip()
                else:
                    metadata[key.strip()] = value.strip()
        li += 1
    if li >= len(lines):
        raise ValueError("no header line found")
    header_line = li + 1
    d, k = _parse_header([c.strip() for c in lines[li].split(",")])
    li += 1

    feats, ranks, row_lines = [], [], []
    for lineno in range(li, len(lines)):
        raw = lines[lineno]
        if not raw.strip():
            continue
        cells = [c.strip() for c in raw.split(",")]
        if len(cells) != d + k:
            raise ValueError(f"line {lineno + 1}: expected {d + k} cells, got {len(cells)}")
        try:
            feats.append([float(c) for c in cells[:d]])
        except ValueError as exc:
            raise ValueError(f"line {lineno + 1}: bad feature value ({exc})") from None
        row = []
        for c in cells[d:]:
            if c == "":
                row.append(0)
            else:
                try:
                    row.append(int(c))
                except ValueError:
                    raise ValueError(f"line {lineno + 1}: bad rank value {c!r}") from None
        ranks.append(row)
        row_lines.append(lineno + 1)
    if not feats:
        raise ValueError("dataset has no rows")

    mat = np.asarray(ranks, dtype=np.int64)
    kind = label_kind or declared
    if kind is None:
        has_empty = bool(np.any(mat == 0))
        dup = any(np.unique(mat[r][mat[r] > 0]).size != np.count_nonzero(mat[r] > 0) for r in range(mat.shape[0]))
        if has_empty and dup:
            raise ValueError("rows mix erased entries and tie blocks; declare a label kind")
        kind = "incomplete" if has_empty else ("partial" if dup else "complete")
    if kind not in LABEL_KINDS:
        raise ValueError(f"unknown label kind {kind!r}")
    for r in range(mat.shape[0]):
        try:
            _validate_label_matrix(mat[r : r + 1], kind, lineno=row_lines[r])
        except ValueError:
            raise
    del header_line
    return RankingDataset(np.asarray(feats, dtype=np.float64), mat, kind, metadata)


def load_dataset(path, label_kind: str | None = None) -> RankingDataset:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_dataset(fh.read(), label_kind=label_kind)
