"""Focal sets, basic belief assignments, credal partitions and decision rules.

A focal set is stored as a bit mask over cluster indices ``0..c-1``; the
empty mask is the outlier class.  Families are kept in a fixed canonical
order (cardinality, then lexicographic member tuple, full frame last) so
mass matrices line up across runs and files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError, InvalidFrameError, TotalConflictError

MASS_TOL = 1e-9


def _sig(x: float, digits: int = 10) -> float:
    return float(f"{x:.{digits}g}")


@dataclass(frozen=True, order=True)
class FocalSet:
    """Subset of the frame, encoded as a bit mask."""

    mask: int

    def __post_init__(self):
        if self.mask < 0:
            raise InvalidArgumentError("focal set mask must be nonnegative")

    @classmethod
    def of(cls, members: Iterable[int]) -> "FocalSet":
        mask = 0
        for k in members:
            if k < 0:
                raise InvalidArgumentError(f"negative cluster index {k}")
            mask |= 1 << int(k)
        return cls(mask)

    @property
    def members(self) -> tuple[int, ...]:
        out, k, m = [], 0, self.mask
        while m:
            if m & 1:
                out.append(k)
            m >>= 1
            k += 1
        return tuple(out)

    @property
    def cardinality(self) -> int:
        return bin(self.mask).count("1")

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    def issubset(self, other: "FocalSet") -> bool:
        return self.mask & ~other.mask == 0

    def intersects(self, other: "FocalSet") -> bool:
        return self.mask & other.mask != 0

    def __contains__(self, k: int) -> bool:
        return bool(self.mask >> k & 1)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return self.cardinality

    def __str__(self) -> str:
        if self.is_empty:
            return "{}"
        return "{" + ",".join(map(str, self.members)) + "}"


def _canonical_key(s: FocalSet):
    return (s.cardinality, s.members)


@dataclass(frozen=True)
class FocalSetFamily:
    """Ordered list of focal sets over a frame of ``c`` clusters."""

    c: int
    sets: tuple[FocalSet, ...]
    max_cardinality: int
    include_full_frame: bool = True

    def __post_init__(self):
        if self.c < 2:
            raise InvalidFrameError(f"frame needs at least 2 clusters, got c={self.c}")
        sets = self.sets
        if not sets or not sets[0].is_empty:
            raise InvalidArgumentError("family must start with the empty set")
        if len(set(sets)) != len(sets):
            raise InvalidArgumentError("duplicate focal sets in family")
        full = (1 << self.c) - 1
        for s in sets:
            if s.mask & ~full:
                raise InvalidArgumentError(f"focal set {s} outside frame of size {self.c}")
            if s.mask != full and s.cardinality > self.max_cardinality:
                raise InvalidArgumentError(f"focal set {s} exceeds max cardinality")
        for k in range(self.c):
            if FocalSet(1 << k) not in sets:
                raise InvalidArgumentError(f"singleton {{{k}}} missing from family")

    @property
    def f(self) -> int:
        return len(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, j: int) -> FocalSet:
        return self.sets[j]

    @property
    def full_frame(self) -> FocalSet:
        return FocalSet((1 << self.c) - 1)

    @cached_property
    def _positions(self) -> dict[FocalSet, int]:
        return {s: j for j, s in enumerate(self.sets)}

    def index(self, s: FocalSet | Iterable[int]) -> int:
        if not isinstance(s, FocalSet):
            s = FocalSet.of(s)
        try:
            return self._positions[s]
        except KeyError:
            raise InvalidArgumentError(f"{s} is not in the family") from None

    @cached_property
    def cardinalities(self) -> np.ndarray:
        out = np.array([s.cardinality for s in self.sets], dtype=float)
        out.setflags(write=False)
        return out

    @cached_property
    def membership(self) -> np.ndarray:
        """Boolean ``f x c`` matrix, ``membership[j, k]`` iff cluster k is in set j."""
        out = np.array([[k in s for k in range(self.c)] for s in self.sets], dtype=bool)
        out.setflags(write=False)
        return out

    @cached_property
    def singleton_indices(self) -> np.ndarray:
        out = np.array([self.index(FocalSet(1 << k)) for k in range(self.c)])
        out.setflags(write=False)
        return out

    @cached_property
    def imprecise_indices(self) -> np.ndarray:
        out = np.array([j for j, s in enumerate(self.sets) if s.cardinality >= 2], dtype=int)
        out.setflags(write=False)
        return out

    def to_lists(self) -> list[list[int]]:
        return [list(s.members) for s in self.sets]

    @classmethod
    def from_lists(cls, c: int, sets: Sequence[Sequence[int]]) -> "FocalSetFamily":
        fs = tuple(FocalSet.of(m) for m in sets)
        full = (1 << c) - 1
        non_full = [s.cardinality for s in fs if s.mask != full]
        return cls(
            c=c,
            sets=fs,
            max_cardinality=max(non_full) if non_full else c,
            include_full_frame=any(s.mask == full for s in fs),
        )


def enumerate_focal_sets(
    c: int, max_cardinality: int | None = None, include_full_frame: bool = True
) -> FocalSetFamily:
    """Build the canonical family of ∅ plus all subsets up to ``max_cardinality``.

    ``max_cardinality=None`` means the whole power set.  The full frame is
    appended when ``include_full_frame`` is set and it is not already
    covered by the cardinality limit.
    """
    if c < 2:
        raise InvalidFrameError(f"frame needs at least 2 clusters, got c={c}")
    if max_cardinality is None:
        max_cardinality = c
    if max_cardinality < 1:
        raise InvalidArgumentError("max_cardinality must be at least 1")
    if max_cardinality > c:
        raise InvalidArgumentError(f"max_cardinality={max_cardinality} exceeds c={c}")
    sets = [FocalSet(0)]
    for size in range(1, max_cardinality + 1):
        sets.extend(FocalSet.of(comb) for comb in combinations(range(c), size))
    if include_full_frame and max_cardinality < c:
        sets.append(FocalSet((1 << c) - 1))
    sets.sort(key=_canonical_key)
    return FocalSetFamily(c, tuple(sets), max_cardinality, include_full_frame)


def _check_mass_vector(masses: np.ndarray, what: str = "bba"):
    if masses.ndim == 1:
        masses = masses[None, :]
    if not np.all(np.isfinite(masses)):
        raise InvalidArgumentError(f"{what} contains non-finite masses")
    if np.any(masses < -MASS_TOL):
        raise InvalidArgumentError(f"{what} contains negative masses")
    bad = np.abs(masses.sum(axis=1) - 1.0) > MASS_TOL
    if np.any(bad):
        row = int(np.flatnonzero(bad)[0])
        raise InvalidArgumentError(
            f"{what} row {row} sums to {masses[row].sum():.12g}, expected 1"
        )


@dataclass(frozen=True)
class Bba:
    """A basic belief assignment aligned with a family's order."""

    family: FocalSetFamily
    masses: np.ndarray

    def __post_init__(self):
        m = np.array(self.masses, dtype=float)
        if m.shape != (self.family.f,):
            raise InvalidArgumentError(
                f"expected {self.family.f} masses, got shape {m.shape}"
            )
        _check_mass_vector(m)
        m = np.clip(m, 0.0, None)
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @classmethod
    def from_dict(cls, family: FocalSetFamily, masses: dict) -> "Bba":
        """Build from ``{members-tuple-or-FocalSet: mass}``; unlisted sets get 0."""
        vec = np.zeros(family.f)
        for key, value in masses.items():
            vec[family.index(key)] += value
        return cls(family, vec)

    def __getitem__(self, s) -> float:
        return float(self.masses[self.family.index(s)])

    @property
    def empty_mass(self) -> float:
        return float(self.masses[0])


def bel(bba: Bba, s: FocalSet | Iterable[int]) -> float:
    """Credibility: total mass of nonempty subsets of ``s``."""
    if not isinstance(s, FocalSet):
        s = FocalSet.of(s)
    return float(
        sum(m for B, m in zip(bba.family.sets, bba.masses) if not B.is_empty and B.issubset(s))
    )


def pl(bba: Bba, s: FocalSet | Iterable[int]) -> float:
    """Plausibility: total mass of focal sets meeting ``s``."""
    if not isinstance(s, FocalSet):
        s = FocalSet.of(s)
    return float(sum(m for B, m in zip(bba.family.sets, bba.masses) if B.intersects(s)))


def _betp_matrix(family: FocalSetFamily, masses: np.ndarray) -> np.ndarray:
    conflict = masses[:, 0]
    if np.any(conflict >= 1.0 - 1e-15):
        row = int(np.flatnonzero(conflict >= 1.0 - 1e-15)[0])
        raise TotalConflictError(f"row {row} has m(empty)=1; BetP undefined")
    card = family.cardinalities[1:]
    spread = (masses[:, 1:] / card) @ family.membership[1:].astype(float)
    return spread / (1.0 - conflict)[:, None]


def betp(bba: Bba) -> np.ndarray:
    """Pignistic probability over the ``c`` singletons."""
    return _betp_matrix(bba.family, bba.masses[None, :])[0]


@dataclass(frozen=True)
class HardLabel:
    """A hardened decision: a singleton, an imprecise set, or the outlier class."""

    focal: FocalSet

    @property
    def kind(self) -> str:
        card = self.focal.cardinality
        if card == 0:
            return "outlier"
        return "specific" if card == 1 else "imprecise"

    @property
    def is_specific(self) -> bool:
        return self.focal.cardinality == 1

    @property
    def cluster(self) -> int | None:
        return self.focal.members[0] if self.is_specific else None

    @classmethod
    def specific(cls, k: int) -> "HardLabel":
        return cls(FocalSet(1 << k))

    @classmethod
    def parse(cls, text: str) -> "HardLabel":
        """Inverse of ``str``: ``"2"``, ``"{0,1}"`` or ``"{}"``."""
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            inner = text[1:-1].strip()
            members = [int(t) for t in inner.split(",") if t.strip()] if inner else []
            return cls(FocalSet.of(members))
        return cls.specific(int(text))

    def __str__(self) -> str:
        return str(self.cluster) if self.is_specific else str(self.focal)


@dataclass(frozen=True)
class CredalPartition:
    """``n x f`` matrix of bbas, one row per object."""

    family: FocalSetFamily
    masses: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.masses, dtype=float)
        if m.ndim != 2 or m.shape[1] != self.family.f:
            raise InvalidArgumentError(
                f"mass matrix must be n x {self.family.f}, got shape {m.shape}"
            )
        _check_mass_vector(m, "credal partition")
        m = np.clip(m, 0.0, None)
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @property
    def n(self) -> int:
        return self.masses.shape[0]

    @property
    def c(self) -> int:
        return self.family.c

    def row(self, i: int) -> Bba:
        return Bba(self.family, self.masses[i])

    def betp(self) -> np.ndarray:
        """``n x c`` pignistic probabilities."""
        return _betp_matrix(self.family, self.masses)

    def plausibility(self) -> np.ndarray:
        """``n x f`` matrix of Pl over every family member (column 0 is 0)."""
        masks = np.array([s.mask for s in self.family.sets])
        meets = (masks[:, None] & masks[None, :]) != 0
        return self.masses @ meets.astype(float)

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "focal_sets": self.family.to_lists(),
            "masses": [[_sig(x) for x in row] for row in self.masses],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CredalPartition":
        family = FocalSetFamily.from_lists(int(data["c"]), data["focal_sets"])
        m = np.asarray(data["masses"], dtype=float)
        if m.ndim == 2 and m.shape[0]:
            sums = m.sum(axis=1, keepdims=True)
            if np.all(np.abs(sums - 1.0) < 1e-6):
                m = m / sums
        return cls(family, m)


HARDEN_RULES = ("max-mass", "max-betp", "appriou", "betp-override")


def _argmax_rows(scores: np.ndarray) -> np.ndarray:
    # np.argmax returns the first maximum, i.e. the lowest canonical index.
    return np.argmax(scores, axis=1)


def harden(
    partition: CredalPartition,
    rule: str = "max-betp",
    r: float = 0.5,
    lambdas: Sequence[float] | None = None,
) -> list[HardLabel]:
    """Turn each bba into a single decision.

    ``max-mass`` picks the focal set with the largest mass (possibly ∅ or
    an imprecise set).  ``max-betp`` picks the singleton with the largest
    pignistic probability.  ``appriou`` maximises ``m(X) Pl(X)`` over
    nonempty family members with ``m(X) = K λ_X |X|^-r``.
    ``betp-override`` uses ``max-betp`` unless the max-mass set is
    imprecise, in which case the imprecise set is kept.

    Ties go to the earliest set in canonical order, which is also the one
    of smallest cardinality.
    """
    family = partition.family
    masses = partition.masses
    if rule == "max-mass":
        idx = _argmax_rows(masses)
        return [HardLabel(family.sets[j]) for j in idx]
    if rule == "max-betp":
        idx = _argmax_rows(partition.betp())
        return [HardLabel.specific(int(k)) for k in idx]
    if rule == "betp-override":
        by_mass = harden(partition, "max-mass")
        by_betp = harden(partition, "max-betp")
        return [m if m.kind == "imprecise" else b for m, b in zip(by_mass, by_betp)]
    if rule == "appriou":
        if not 0.0 <= r <= 1.0:
            raise InvalidArgumentError(f"Appriou r must lie in [0, 1], got {r}")
        if lambdas is None:
            lam = np.ones(family.f - 1)
        else:
            lam = np.asarray(lambdas, dtype=float)
            if lam.shape != (family.f - 1,):
                raise InvalidArgumentError("lambdas must give one weight per nonempty focal set")
            if np.any(lam <= 0):
                raise InvalidArgumentError("lambdas must be positive")
        conflict = masses[:, 0]
        if np.any(conflict >= 1.0 - 1e-15):
            raise TotalConflictError("Appriou rule undefined for a row with m(empty)=1")
        k_norm = 1.0 / (1.0 - conflict)
        weight = k_norm[:, None] * lam[None, :] * family.cardinalities[1:] ** (-r)
        scores = weight * partition.plausibility()[:, 1:]
        idx = _argmax_rows(scores) + 1
        return [HardLabel(family.sets[j]) for j in idx]
    raise InvalidArgumentError(f"unknown hardening rule {rule!r}; choose from {HARDEN_RULES}")
