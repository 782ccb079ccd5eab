"""Pair-counting quality scores for crisp and credal partitions, and the N* validity index."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .credal import CredalPartition, HardLabel
from .errors import InvalidArgumentError

CSV_FIELDS = ("p", "r", "ri", "ep", "er", "eri", "nstar")
B_STAR_RULES = ("specific", "disjoint")


@dataclass(frozen=True)
class PairCounts:
    """Unordered pair counts: ``a`` same/same, ``b`` different/different,
    ``c_`` same in the prediction only, ``d_`` same in the truth only."""

    a: int
    b: int
    c_: int
    d_: int

    @property
    def total(self) -> int:
        return self.a + self.b + self.c_ + self.d_


@dataclass(frozen=True)
class MetricReport:
    precision: float
    recall: float
    rand_index: float
    ep: float
    er: float
    eri: float
    nstar: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_row(self) -> str:
        vals = (self.precision, self.recall, self.rand_index, self.ep, self.er, self.eri, self.nstar)
        return ",".join("" if v is None else repr(float(v)) for v in vals)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        buf.write(self.csv_row() + "\n")
        return buf.getvalue()


def _ratio(num: int, den: int) -> float:
    return 1.0 if den == 0 else num / den


def _same_matrix(labels) -> np.ndarray:
    arr = np.asarray(labels)
    return arr[:, None] == arr[None, :]


def _upper(mat: np.ndarray) -> np.ndarray:
    return mat[np.triu_indices(mat.shape[0], 1)]


def _check_lengths(pred, truth) -> None:
    if len(pred) != len(truth):
        raise InvalidArgumentError(f"prediction has {len(pred)} labels but truth has {len(truth)}")


def pair_counts(pred: Sequence, truth: Sequence) -> PairCounts:
    _check_lengths(pred, truth)
    ps = _upper(_same_matrix(pred))
    ts = _upper(_same_matrix(truth))
    return PairCounts(int(np.sum(ps & ts)), int(np.sum(~ps & ~ts)), int(np.sum(ps & ~ts)), int(np.sum(~ps & ts)))


def classical_metrics(pred: Sequence, truth: Sequence) -> tuple[float, float, float]:
    """Pairwise precision, recall and Rand index of a crisp prediction."""
    counts = pair_counts(pred, truth)
    precision = _ratio(counts.a, counts.a + counts.c_)
    recall = _ratio(counts.a, counts.a + counts.d_)
    rand = _ratio(counts.a + counts.b, counts.total)
    return precision, recall, rand


def _label_keys(pred: Sequence[HardLabel]):
    specific = np.array([lab.is_specific for lab in pred], dtype=bool)
    masks = np.array([lab.focal.mask for lab in pred], dtype=np.int64)
    return specific, masks


def evidential_metrics(pred: Sequence[HardLabel], truth: Sequence, b_star: str = "specific") -> tuple[float, float, float]:
    """Evidential precision, recall and Rand index.

    Only pairs of objects that both carry a specific label can count as
    decisions.  ``b_star='specific'`` scores a pair as correctly separated
    when both objects are specific, their labels differ and their truths
    differ; ``'disjoint'`` also accepts imprecise labels whose focal sets
    do not intersect.
    """
    _check_lengths(pred, truth)
    if b_star not in B_STAR_RULES:
        raise InvalidArgumentError(f"b_star must be one of {B_STAR_RULES}")
    n = len(truth)
    if n < 2:
        return 1.0, 1.0, 1.0
    specific, masks = _label_keys(pred)
    both = _upper(specific[:, None] & specific[None, :])
    ps = _upper(masks[:, None] == masks[None, :])
    ts = _upper(_same_matrix(truth))
    n_e = int(np.sum(both & ps))
    n_er = int(np.sum(both & ps & ts))
    n_r = int(np.sum(ts))
    if b_star == "specific":
        apart = both & ~ps
    else:
        nonempty = masks != 0
        apart = _upper(((masks[:, None] & masks[None, :]) == 0) & nonempty[:, None] & nonempty[None, :])
    b = int(np.sum(apart & ~ts))
    return _ratio(n_er, n_e), _ratio(n_er, n_r), (n_er + b) / (n * (n - 1) / 2)


def validity_index(partition: CredalPartition) -> float:
    """Normalised nonspecificity ``N*(c)`` of a credal partition; lower is crisper."""
    c = partition.c
    if c < 2:
        raise InvalidArgumentError("the validity index needs at least two clusters")
    card = partition.family.cardinalities.astype(float)
    logs = np.zeros_like(card)
    logs[1:] = np.log2(card[1:])
    logs[0] = np.log2(c)
    return float(np.sum(partition.masses @ logs) / (partition.n * np.log2(c)))


def metric_report(
    partition: CredalPartition | None,
    truth: Sequence,
    crisp_labels: Sequence | None = None,
    evidential_labels: Sequence[HardLabel] | None = None,
    b_star: str = "specific",
) -> MetricReport:
    """All six scores plus ``N*`` when a credal partition is given.

    Classical scores use ``crisp_labels`` (default: max pignistic
    probability); evidential scores use ``evidential_labels`` (default:
    max mass).
    """
    from .credal import harden

    if crisp_labels is None:
        if partition is None:
            raise InvalidArgumentError("need a partition or crisp labels")
        crisp_labels = [lab.cluster for lab in harden(partition, "max-betp")]
    if evidential_labels is None:
        if partition is None:
            evidential_labels = [HardLabel.specific(int(k)) for k in crisp_labels]
        else:
            evidential_labels = harden(partition, "max-mass")
    p, r, ri = classical_metrics(crisp_labels, truth)
    ep, er, eri = evidential_metrics(evidential_labels, truth, b_star)
    nstar = validity_index(partition) if partition is not None else None
    return MetricReport(p, r, ri, ep, er, eri, nstar)
