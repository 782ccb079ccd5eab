"""Crisp and fuzzy medoid clusterers used as reference methods: PAM, FCMdd, FMMdd."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .credal import _sig
from .dissimilarity import as_array
from .ecmdd import InitSpec, _normalise_inverse_power, init_medoids
from .errors import InvalidArgumentError

log = logging.getLogger(__name__)

ROW_TOL = 1e-9
WEIGHT_TOL = 1e-6


@dataclass(frozen=True)
class FuzzyPartition:
    memberships: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = np.asarray(self.memberships, dtype=float)
        if u.ndim != 2:
            raise InvalidArgumentError("memberships must be an n x c matrix")
        if np.any(u < -ROW_TOL) or np.any(np.abs(u.sum(axis=1) - 1.0) > ROW_TOL):
            raise InvalidArgumentError("membership rows must be nonnegative and sum to 1")
        u = np.clip(u, 0.0, None)
        u.setflags(write=False)
        object.__setattr__(self, "memberships", u)

    @property
    def n(self) -> int:
        return self.memberships.shape[0]

    @property
    def c(self) -> int:
        return self.memberships.shape[1]

    def labels(self) -> np.ndarray:
        """Cluster of maximum membership, ties to the lowest index."""
        return np.argmax(self.memberships, axis=1)


@dataclass(frozen=True)
class CrispPartition:
    labels: np.ndarray = field(repr=False)
    medoids: tuple[int, ...]

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        medoids = tuple(int(m) for m in self.medoids)
        if len(set(medoids)) != len(medoids):
            raise InvalidArgumentError("medoids must be distinct")
        if labels.size and (labels.min() < 0 or labels.max() >= len(medoids)):
            raise InvalidArgumentError("labels must lie in 0..c-1")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "medoids", medoids)

    @property
    def c(self) -> int:
        return len(self.medoids)


@dataclass
class BaselineResult:
    """Outcome of a reference clusterer, serialisable like an evidential result."""

    algorithm: str
    labels: np.ndarray = field(repr=False)
    medoids: tuple[int, ...]
    memberships: FuzzyPartition | None = None
    weights: np.ndarray | None = field(default=None, repr=False)
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = True
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "algorithm": self.algorithm,
            "params": self.params,
            "medoids": list(self.medoids),
            "labels": [int(x) for x in self.labels],
            "objective_trace": [_sig(x, 12) for x in self.objective_trace],
            "iterations": self.iterations,
            "converged": self.converged,
        }
        if self.memberships is not None:
            out["memberships"] = [[_sig(x) for x in row] for row in self.memberships.memberships]
        if self.weights is not None:
            out["weights"] = [[_sig(x) for x in row] for row in self.weights]
        return out


# -- PAM ---------------------------------------------------------------------


def _pam_cost(tau: np.ndarray, medoids: Sequence[int]) -> float:
    return float(tau[:, list(medoids)].min(axis=1).sum())


def _nearest(tau: np.ndarray, medoids: Sequence[int]) -> np.ndarray:
    return np.argmin(tau[:, list(medoids)], axis=1)


def pam_build(d, c: int) -> list[int]:
    """Greedy start: the min-rowsum object, then the largest cost reductions."""
    tau = as_array(d)
    n = tau.shape[0]
    if not 1 <= c <= n:
        raise InvalidArgumentError(f"cannot choose {c} medoids from {n} objects")
    medoids = [int(np.argmin(tau.sum(axis=1)))]
    nearest = tau[:, medoids[0]].copy()
    while len(medoids) < c:
        gain = np.maximum(nearest[:, None] - tau, 0.0).sum(axis=0)
        gain[medoids] = -np.inf
        pick = int(np.argmax(gain))
        medoids.append(pick)
        nearest = np.minimum(nearest, tau[:, pick])
    return medoids


def fit_pam(d, c: int, seed: int | None = 0, init: InitSpec | None = None, max_passes: int = 1000) -> BaselineResult:
    """Partitioning around medoids.

    Starts from ``pam_build`` (or ``init``) and applies the best single
    medoid/non-medoid swap per pass until none lowers the total distance
    to the nearest medoid.  ``seed`` only matters for a random ``init``.
    """
    tau = as_array(d)
    n = tau.shape[0]
    if not 1 <= c <= n:
        raise InvalidArgumentError(f"cannot choose {c} medoids from {n} objects")
    medoids = pam_build(tau, c) if init is None else init_medoids(tau, c, init, seed)
    cost = _pam_cost(tau, medoids)
    trace = [cost]
    passes = 0
    converged = False
    while passes < max_passes:
        passes += 1
        best = (cost, None, None)
        for slot in range(c):
            rest = [m for s, m in enumerate(medoids) if s != slot]
            base = tau[:, rest].min(axis=1) if rest else np.full(n, np.inf)
            # Column l: total cost after replacing medoids[slot] by object l.
            costs = np.minimum(base[:, None], tau).sum(axis=0)
            costs[medoids] = np.inf
            l = int(np.argmin(costs))
            if costs[l] < best[0] - 1e-12 * max(1.0, best[0]):
                best = (float(costs[l]), slot, l)
        if best[1] is None:
            converged = True
            break
        medoids[best[1]] = best[2]
        cost = best[0]
        trace.append(cost)
    labels = _nearest(tau, medoids)
    return BaselineResult("pam", labels, tuple(medoids), objective_trace=trace, iterations=passes,
                          converged=converged, params={"c": c, "seed": seed})


# -- FCMdd -------------------------------------------------------------------


def fcmdd_memberships(dist_to_medoids: np.ndarray, beta: float = 2.0) -> np.ndarray:
    """``u_ij ∝ tau_ij^(-1/(beta-1))``; rows with zero distances split over them."""
    t = np.asarray(dist_to_medoids, dtype=float)
    expo = 1.0 / (beta - 1.0)
    u = np.zeros_like(t)
    zero = t == 0
    hit = zero.any(axis=1)
    u[hit] = zero[hit] / zero[hit].sum(axis=1, keepdims=True)
    rest = ~hit
    if np.any(rest):
        logw = -expo * np.log(t[rest])
        logw -= logw.max(axis=1, keepdims=True)
        w = np.exp(logw)
        u[rest] = w / w.sum(axis=1, keepdims=True)
    return u


def _distinct_argmin(scores: np.ndarray) -> list[int]:
    chosen: list[int] = []
    for row in scores:
        order = np.argsort(row, kind="stable")
        chosen.append(next(int(i) for i in order if int(i) not in chosen))
    return chosen


def fit_fcmdd(
    d,
    c: int,
    beta: float = 2.0,
    init: InitSpec = "farthest-random",
    seed: int | None = 0,
    max_iterations: int = 200,
) -> BaselineResult:
    """Fuzzy c-medoids.

    Alternates fuzzy memberships to the current medoids with the medoid
    update ``argmin_x sum_i u_ij^beta tau(i, x)``, keeping medoids
    distinct, until the medoids stop changing.
    """
    if beta <= 1:
        raise InvalidArgumentError("beta must exceed 1")
    tau = as_array(d)
    medoids = init_medoids(tau, c, init, seed)
    trace = []
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        u = fcmdd_memberships(tau[:, medoids], beta)
        trace.append(float(np.sum(u**beta * tau[:, medoids])))
        new = _distinct_argmin((u**beta).T @ tau)
        if new == medoids:
            converged = True
            break
        medoids = new
    if not converged:
        log.warning("FCMdd stopped after %d iterations without converging", it)
    part = FuzzyPartition(u)
    return BaselineResult("fcmdd", part.labels(), tuple(medoids), memberships=part, objective_trace=trace,
                          iterations=it, converged=converged,
                          params={"c": c, "beta": beta, "init": init if isinstance(init, str) else list(init), "seed": seed})


# -- FMMdd -------------------------------------------------------------------


def fmmdd_objective(d, memberships: np.ndarray, weights: np.ndarray, beta: float = 2.0, psi: float = 2.0) -> float:
    """``sum_k sum_i sum_j u_ik^beta v_kj^psi r_ij``."""
    tau = as_array(d)
    cd = tau @ (np.asarray(weights) ** psi).T
    return float(np.sum(np.asarray(memberships) ** beta * cd))


def fmmdd_update_memberships(d, weights: np.ndarray, beta: float = 2.0, psi: float = 2.0) -> np.ndarray:
    tau = as_array(d)
    return fcmdd_memberships(tau @ (np.asarray(weights) ** psi).T, beta)


def fmmdd_update_weights(d, memberships: np.ndarray, beta: float = 2.0, psi: float = 2.0) -> np.ndarray:
    tau = as_array(d)
    s = (np.asarray(memberships) ** beta).T @ tau
    return _normalise_inverse_power(s, 1.0 / (psi - 1.0))


def fit_fmmdd(
    d,
    c: int,
    beta: float = 2.0,
    psi: float = 2.0,
    init: InitSpec = "farthest-random",
    seed: int | None = 0,
    max_iterations: int = 200,
    tol: float = WEIGHT_TOL,
) -> BaselineResult:
    """Fuzzy multi-medoids: every object is a weighted prototype of every class.

    Weights start one-hot on the initial medoids; memberships and weights
    are then updated in turn until the weights move less than ``tol``.
    """
    if beta <= 1 or psi <= 1:
        raise InvalidArgumentError("beta and psi must exceed 1")
    tau = as_array(d)
    n = tau.shape[0]
    medoids = init_medoids(tau, c, init, seed)
    v = np.zeros((c, n))
    v[np.arange(c), medoids] = 1.0
    trace = []
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        u = fmmdd_update_memberships(tau, v, beta, psi)
        trace.append(fmmdd_objective(tau, u, v, beta, psi))
        v_new = fmmdd_update_weights(tau, u, beta, psi)
        trace.append(fmmdd_objective(tau, u, v_new, beta, psi))
        change = np.max(np.abs(v_new - v))
        v = v_new
        if change < tol:
            converged = True
            break
    u = fmmdd_update_memberships(tau, v, beta, psi)
    if not converged:
        log.warning("FMMdd stopped after %d iterations without converging", it)
    part = FuzzyPartition(u)
    return BaselineResult("fmmdd", part.labels(), tuple(int(np.argmax(row)) for row in v), memberships=part,
                          weights=v, objective_trace=trace, iterations=it, converged=converged,
                          params={"c": c, "beta": beta, "psi": psi, "init": init if isinstance(init, str) else list(init), "seed": seed})
