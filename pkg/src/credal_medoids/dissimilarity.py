"""Dissimilarity matrices: validation, construction, graph indices and file I/O."""

from __future__ import annotations

import io
import os
import weakref
from dataclasses import dataclass, field
from typing import IO, Sequence, Union

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import (
    AsymmetricInputError,
    DiagonalError,
    DimensionMismatchError,
    FormatError,
    InvalidArgumentError,
    NegativeDissimilarityError,
    RangeError,
    ValidationError,
)

SYMMETRY_TOL = 1e-9
GRAPH_INDICES = ("jaccard", "zhou", "pan", "signal")
DEFAULT_SIGNAL_STEPS = 3


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DissimilarityMatrix:
    values: np.ndarray = field(repr=False)
    labels: tuple[str, ...] | None = None

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True)
class AdjacencyMatrix:
    entries: np.ndarray = field(repr=False)
    labels: tuple[str, ...] | None = None

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def edge_count(self) -> int:
        return int(np.triu(self.entries, 1).sum())

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.entries[i])


@dataclass(frozen=True)
class SimilarityMatrix:
    values: np.ndarray = field(repr=False)
    labels: tuple[str, ...] | None = None

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _square(matrix, what: str) -> np.ndarray:
    arr = np.array(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"{what} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} contains non-finite values")
    return arr


def validate_dissimilarity(matrix, labels: Sequence[str] | None = None) -> DissimilarityMatrix:
    """Check a raw square matrix and return it as a read-only DissimilarityMatrix.

    The input is copied, never modified.  Symmetry is checked to 1e-9 and
    the stored copy is exactly symmetric.
    """
    if isinstance(matrix, DissimilarityMatrix):
        return matrix
    arr = _square(matrix, "dissimilarity matrix")
    if np.any(arr < 0):
        i, j = np.argwhere(arr < 0)[0]
        raise NegativeDissimilarityError(f"negative dissimilarity at ({i}, {j})")
    diag = np.abs(np.diag(arr))
    if np.any(diag > SYMMETRY_TOL):
        i = int(np.argmax(diag))
        raise DiagonalError(f"nonzero diagonal entry at ({i}, {i})")
    gap = np.abs(arr - arr.T)
    if np.any(gap > SYMMETRY_TOL):
        i, j = np.unravel_index(np.argmax(gap), gap.shape)
        raise AsymmetricInputError(f"matrix asymmetric at ({i}, {j}): {arr[i, j]} vs {arr[j, i]}")
    arr = 0.5 * (arr + arr.T)
    np.fill_diagonal(arr, 0.0)
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != arr.shape[0]:
            raise DimensionMismatchError("label count does not match matrix size")
    arr = _frozen(arr)
    _VALIDATED[id(arr)] = arr
    return DissimilarityMatrix(arr, labels)


# Read-only arrays produced by validation; passing one back skips the checks.
_VALIDATED: "weakref.WeakValueDictionary[int, np.ndarray]" = weakref.WeakValueDictionary()


def as_array(d) -> np.ndarray:
    """Validated ndarray view of anything accepted as a dissimilarity matrix."""
    if isinstance(d, np.ndarray) and _VALIDATED.get(id(d)) is d:
        return d
    return validate_dissimilarity(d).values


def validate_adjacency(matrix, labels: Sequence[str] | None = None) -> AdjacencyMatrix:
    if isinstance(matrix, AdjacencyMatrix):
        return matrix
    arr = _square(matrix, "adjacency matrix")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValidationError("adjacency entries must be 0 or 1")
    if np.any(np.diag(arr) != 0):
        raise DiagonalError("adjacency matrix has self-loops")
    if np.any(arr != arr.T):
        raise AsymmetricInputError("adjacency matrix must be symmetric")
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != arr.shape[0]:
            raise DimensionMismatchError("label count does not match matrix size")
    return AdjacencyMatrix(_frozen(arr.astype(np.int8)), labels)


def euclidean_dissimilarity(points, squared: bool = False) -> DissimilarityMatrix:
    """Pairwise Euclidean distances between the rows of ``points``.

    ``squared=True`` returns squared distances instead.
    """
    if isinstance(points, np.ndarray):
        arr = points.astype(float)
        if arr.ndim == 1:
            arr = arr[:, None]
    else:
        rows = [np.atleast_1d(np.asarray(p, dtype=float)) for p in points]
        if not rows:
            raise DimensionMismatchError("need at least one point")
        dims = {r.shape for r in rows}
        if len(dims) != 1:
            raise DimensionMismatchError(f"ragged point coordinates: shapes {sorted(dims)}")
        arr = np.vstack(rows)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise DimensionMismatchError("points must be an n x p array with n >= 1")
    if arr.shape[0] == 1:
        return validate_dissimilarity(np.zeros((1, 1)))
    metric = "sqeuclidean" if squared else "euclidean"
    return validate_dissimilarity(squareform(pdist(arr, metric=metric)))


def _rescale_if_needed(s: np.ndarray) -> np.ndarray:
    off = s[~np.eye(s.shape[0], dtype=bool)]
    top = off.max() if off.size else 0.0
    if top > 1.0:
        s = s / top
    return s


def graph_similarity(adj, index: str = "signal", steps: int = DEFAULT_SIGNAL_STEPS) -> SimilarityMatrix:
    """Node similarity from an undirected graph.

    ``index`` is one of ``jaccard``, ``zhou``, ``pan`` or ``signal``.
    Neighbourhoods exclude the node itself.  Zhou and Pan values are
    divided by their largest off-diagonal entry when that exceeds 1.  The
    signal index propagates a unit signal ``steps`` times through
    ``I + A`` and compares the normalised influence vectors:
    ``s = 1 - ||u_x - u_y|| / sqrt(2)``.  The diagonal is always 1.
    """
    adj = validate_adjacency(adj)
    a = adj.entries.astype(float)
    n = adj.n
    deg = a.sum(axis=1)
    if index == "jaccard":
        inter = a @ a
        union = deg[:, None] + deg[None, :] - inter
        with np.errstate(invalid="ignore", divide="ignore"):
            s = np.where(union > 0, inter / np.where(union > 0, union, 1.0), 0.0)
    elif index in ("zhou", "pan"):
        inv = np.divide(1.0, deg, out=np.zeros(n), where=deg > 0)
        s = (a * inv[None, :]) @ a
        if index == "pan":
            s = s * a
        s = _rescale_if_needed(s)
    elif index == "signal":
        if int(steps) != steps or steps < 1:
            raise InvalidArgumentError(f"signal steps must be a positive integer, got {steps}")
        prop = np.eye(n) + a
        u = np.eye(n)
        for _ in range(int(steps)):
            u = prop @ u
            u /= np.linalg.norm(u, axis=0, keepdims=True)
        # Columns are unit influence vectors, so ||u_x - u_y||^2 = 2 - 2 u_x.u_y.
        gram = u.T @ u
        s = 1.0 - np.sqrt(np.clip(1.0 - gram, 0.0, None))
    else:
        raise InvalidArgumentError(f"unknown graph index {index!r}; choose from {GRAPH_INDICES}")
    s = 0.5 * (s + s.T)
    s = np.clip(s, 0.0, 1.0)
    np.fill_diagonal(s, 1.0)
    return SimilarityMatrix(_frozen(s), adj.labels)


def similarity_to_dissimilarity(sim) -> DissimilarityMatrix:
    """``d = 1 - s`` with a zero diagonal."""
    labels = None
    if isinstance(sim, SimilarityMatrix):
        labels, sim = sim.labels, sim.values
    s = _square(sim, "similarity matrix")
    if np.any(s < -1e-12) or np.any(s > 1 + 1e-12):
        raise RangeError("similarity values must lie in [0, 1]")
    d = 1.0 - np.clip(s, 0.0, 1.0)
    np.fill_diagonal(d, 0.0)
    return validate_dissimilarity(d, labels)


Source = Union[str, os.PathLike, bytes, IO]


def _read_text(source: Source) -> str:
    if isinstance(source, (bytes, bytearray)):
        return source.decode("utf-8")
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    data = source.read()
    return data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data


def _parse_csv(text: str) -> DissimilarityMatrix:
    rows, lines = [], []
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if seen_data:
                raise FormatError("header line after data", lineno)
            continue
        seen_data = True
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError:
            raise FormatError(f"cannot parse numbers in {line!r}", lineno) from None
        lines.append(lineno)
    if not rows:
        raise FormatError("no data rows")
    n = len(rows)
    for row, lineno in zip(rows, lines):
        if len(row) != n:
            raise FormatError(f"expected {n} columns for a square matrix, got {len(row)}", lineno)
    return validate_dissimilarity(np.array(rows))


def _parse_edges(text: str) -> AdjacencyMatrix:
    node_count = None
    index: dict[str, int] = {}
    edges = []
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if first and tokens[0].lower() == "nodes":
            first = False
            if len(tokens) != 2:
                raise FormatError("node header must read 'nodes <N>'", lineno)
            try:
                node_count = int(tokens[1])
            except ValueError:
                raise FormatError(f"bad node count {tokens[1]!r}", lineno) from None
            if node_count < 1:
                raise FormatError("node count must be positive", lineno)
            continue
        first = False
        if len(tokens) != 2:
            raise FormatError(f"expected two node tokens, got {len(tokens)}", lineno)
        if tokens[0] == tokens[1]:
            raise FormatError(f"self-loop on node {tokens[0]}", lineno)
        if node_count is not None:
            try:
                ids = [int(t) - 1 for t in tokens]
            except ValueError:
                raise FormatError("node ids must be integers when a node count is given", lineno) from None
            if any(not 0 <= k < node_count for k in ids):
                raise FormatError(f"node id outside 1..{node_count}", lineno)
        else:
            ids = [index.setdefault(t, len(index)) for t in tokens]
        edges.append(ids)
    if node_count is not None:
        n = node_count
        labels = tuple(str(k + 1) for k in range(n))
    else:
        n = len(index)
        labels = tuple(index)
    if n == 0:
        raise FormatError("edge list has no nodes")
    a = np.zeros((n, n), dtype=np.int8)
    for i, j in edges:
        a[i, j] = a[j, i] = 1
    return validate_adjacency(a, labels)


def load_matrix(source: Source, format: str = "csv"):
    """Read a dissimilarity CSV or an edge list.

    ``source`` may be a path, bytes, or an open text/binary stream.
    """
    text = _read_text(source)
    if format == "csv":
        return _parse_csv(text)
    if format in ("edge-list", "edges"):
        return _parse_edges(text)
    raise InvalidArgumentError(f"unknown matrix format {format!r}")


def write_csv(d, target: Union[str, os.PathLike, IO], header: str | None = None) -> None:
    values = d.values if isinstance(d, DissimilarityMatrix) else np.asarray(d, dtype=float)
    buf = io.StringIO()
    if header:
        buf.write(f"# {header}\n")
    for row in values:
        buf.write(",".join(repr(float(x)) for x in row) + "\n")
    _write_text(buf.getvalue(), target)


def write_edge_list(adj: AdjacencyMatrix, target: Union[str, os.PathLike, IO]) -> None:
    """Edge list with a ``nodes <N>`` header and 1-based integer ids."""
    lines = [f"nodes {adj.n}"]
    for i, j in zip(*np.nonzero(np.triu(adj.entries, 1))):
        lines.append(f"{i + 1} {j + 1}")
    _write_text("\n".join(lines) + "\n", target)


def _write_text(text: str, target) -> None:
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        target.write(text)
