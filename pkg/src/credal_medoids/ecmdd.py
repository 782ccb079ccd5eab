"""Evidential c-medoids: single-medoid and weighted multi-medoid variants.

Both algorithms share the mass update, the objective and the medoid
initialisation.  Class dissimilarities are held as an ``n x (f-1)`` array
over the nonempty focal sets of the family, in family order.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence, Union

import numpy as np

from .credal import CredalPartition, FocalSet, FocalSetFamily, enumerate_focal_sets, harden, _sig
from .dissimilarity import as_array
from .errors import InvalidArgumentError

log = logging.getLogger(__name__)

VARIANTS = ("single", "weighted", "weighted-normalized", "weighted-top-q")
INIT_MODES = ("farthest-random", "farthest-min-rowsum")
EMPTY_SET_EXPONENTS = ("literal", "derived")
MEDOID_UPDATES = ("profile", "scan")
VARIANCE_FLOOR = 1e-12
WEIGHT_TOL = 1e-6

InitSpec = Union[str, Sequence[int]]


@dataclass(frozen=True)
class EcmddConfig:
    c: int
    alpha: float = 1.0
    beta: float = 2.0
    delta: float = 100.0
    eta: float = 1.0
    gamma: float = 1.0
    xi: float = 1.0
    psi: float = 2.0
    max_cardinality: int = 2
    include_full_frame: bool = True
    max_iterations: int = 200
    seed: int | None = 0
    init: InitSpec = "farthest-random"
    variant: str = "single"
    q: int | None = None
    empty_set_exponent: str = "literal"
    tol: float = WEIGHT_TOL
    medoid_update: str = "profile"

    def __post_init__(self):
        if self.c < 2:
            raise InvalidArgumentError(f"c must be at least 2, got {self.c}")
        if self.beta <= 1:
            raise InvalidArgumentError(f"beta must exceed 1, got {self.beta}")
        if self.psi <= 1:
            raise InvalidArgumentError(f"psi must exceed 1, got {self.psi}")
        if self.delta <= 0:
            raise InvalidArgumentError(f"delta must be positive, got {self.delta}")
        if self.alpha < 0:
            raise InvalidArgumentError(f"alpha must be nonnegative, got {self.alpha}")
        if self.eta <= 0 or self.xi < 0 or self.gamma < 0:
            raise InvalidArgumentError("eta must be positive; xi and gamma nonnegative")
        if self.max_iterations < 1:
            raise InvalidArgumentError("max_iterations must be positive")
        if self.variant not in VARIANTS:
            raise InvalidArgumentError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.variant == "weighted-top-q" and (self.q is None or self.q < 1):
            raise InvalidArgumentError("weighted-top-q needs q >= 1")
        if self.empty_set_exponent not in EMPTY_SET_EXPONENTS:
            raise InvalidArgumentError(f"empty_set_exponent must be one of {EMPTY_SET_EXPONENTS}")
        if self.medoid_update not in MEDOID_UPDATES:
            raise InvalidArgumentError(f"medoid_update must be one of {MEDOID_UPDATES}")
        if isinstance(self.init, str):
            if self.init not in INIT_MODES:
                raise InvalidArgumentError(f"unknown init mode {self.init!r}")
        else:
            object.__setattr__(self, "init", tuple(int(k) for k in self.init))
            if len(self.init) != self.c:
                raise InvalidArgumentError(f"explicit init needs {self.c} medoids")

    def family(self) -> FocalSetFamily:
        return enumerate_focal_sets(
            self.c, min(self.max_cardinality, self.c), self.include_full_frame
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        if not isinstance(self.init, str):
            out["init"] = list(self.init)
        return out


@dataclass(frozen=True)
class SinglePrototypes:
    """Singleton medoids plus one medoid per imprecise focal set."""

    singleton_medoids: tuple[int, ...]
    meta_medoids: dict[FocalSet, int]

    def to_dict(self) -> dict:
        return {
            "kind": "single",
            "singleton_medoids": list(self.singleton_medoids),
            "meta_medoids": [
                {"focal_set": list(s.members), "medoid": m} for s, m in self.meta_medoids.items()
            ],
        }


@dataclass(frozen=True)
class WeightedPrototypes:
    """Prototype weights, one row per nonempty focal set in family order."""

    weights: np.ndarray = field(repr=False)

    def medoids(self, family: FocalSetFamily) -> tuple[int, ...]:
        """Highest-weight object for each singleton class."""
        rows = family.singleton_indices - 1
        return tuple(int(np.argmax(self.weights[r])) for r in rows)

    def to_dict(self) -> dict:
        return {"kind": "weighted", "weights": [[_sig(x) for x in row] for row in self.weights]}


@dataclass
class ClusterResult:
    partition: CredalPartition
    prototypes: Union[SinglePrototypes, WeightedPrototypes]
    objective_trace: list[float]
    iterations: int
    converged: bool
    config: EcmddConfig | None = None
    # (J before, J after) for every mass update whose previous masses exist.
    assignment_steps: list[tuple[float, float]] = field(default_factory=list)

    @property
    def family(self) -> FocalSetFamily:
        return self.partition.family

    def labels(self, rule: str = "max-betp", **kwargs):
        return harden(self.partition, rule, **kwargs)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict() if self.config else None,
            **self.partition.to_dict(),
            "prototypes": self.prototypes.to_dict(),
            "labels": {
                rule: [str(lab) for lab in self.labels(rule)]
                for rule in ("max-mass", "max-betp")
            },
            "objective_trace": [_sig(x, 12) for x in self.objective_trace],
            "iterations": self.iterations,
            "converged": self.converged,
        }


# -- initialisation ----------------------------------------------------------


def init_medoids(d, c: int, mode: InitSpec = "farthest-random", seed: int | None = 0) -> list[int]:
    """Pick ``c`` well-spread initial medoids.

    The first medoid is drawn at random (``farthest-random``) or is the
    object of smallest row sum (``farthest-min-rowsum``); each further
    medoid maximises its distance to the nearest medoid already chosen.
    An explicit index sequence is returned unchanged after checks.
    """
    tau = as_array(d)
    n = tau.shape[0]
    if c < 1 or c > n:
        raise InvalidArgumentError(f"cannot choose {c} medoids from {n} objects")
    if not isinstance(mode, str):
        chosen = [int(k) for k in mode]
        if len(chosen) != c or len(set(chosen)) != c or any(not 0 <= k < n for k in chosen):
            raise InvalidArgumentError(f"explicit init must list {c} distinct indices in 0..{n - 1}")
        return chosen
    if mode == "farthest-random":
        first = int(np.random.default_rng(seed).integers(n))
    elif mode == "farthest-min-rowsum":
        first = int(np.argmin(tau.sum(axis=1)))
    else:
        raise InvalidArgumentError(f"unknown init mode {mode!r}")
    chosen = [first]
    nearest = tau[:, first].copy()
    while len(chosen) < c:
        cand = nearest.copy()
        cand[chosen] = -np.inf
        nxt = int(np.argmax(cand))
        chosen.append(nxt)
        nearest = np.minimum(nearest, tau[:, nxt])
    return chosen


# -- single-medoid machinery -------------------------------------------------


def _pairwise_spread(t: np.ndarray) -> np.ndarray:
    """Mean absolute gap between columns of ``t``, one value per row."""
    k = t.shape[1]
    gaps = [np.abs(t[:, x] - t[:, y]) for x, y in combinations(range(k), 2)]
    return np.sum(gaps, axis=0) / comb(k, 2)


def meta_medoid(d, singleton_medoids: Sequence[int], focal: FocalSet | Sequence[int], eta: float = 1.0) -> int:
    """Medoid of an imprecise class.

    The chosen object has similar, and small, dissimilarities to every
    singleton medoid involved:
    ``argmin_i rho_i + eta * mean_k tau(i, v_k)`` where ``rho_i`` is the
    mean absolute pairwise gap between those dissimilarities.
    """
    tau = as_array(d)
    if not isinstance(focal, FocalSet):
        focal = FocalSet.of(focal)
    if focal.cardinality < 2:
        raise InvalidArgumentError("meta medoids are only defined for sets of 2 or more clusters")
    t = tau[:, [singleton_medoids[k] for k in focal.members]]
    score = _pairwise_spread(t) + eta * t.mean(axis=1)
    return int(np.argmin(score))


def _meta_medoids(tau, medoids, family, eta) -> dict[FocalSet, int]:
    return {family.sets[j]: meta_medoid(tau, medoids, family.sets[j], eta) for j in family.imprecise_indices}


def class_dissimilarities_single(d, prototypes: SinglePrototypes, family: FocalSetFamily, gamma: float = 1.0) -> np.ndarray:
    """``n x (f-1)`` dissimilarities between objects and nonempty focal sets."""
    tau = as_array(d)
    n = tau.shape[0]
    out = np.empty((n, family.f - 1))
    meds = prototypes.singleton_medoids
    for j, s in enumerate(family.sets[1:], start=1):
        if s.cardinality == 1:
            out[:, j - 1] = tau[:, meds[s.members[0]]]
        else:
            spec = tau[:, [meds[k] for k in s.members]].mean(axis=1)
            out[:, j - 1] = (tau[:, prototypes.meta_medoids[s]] + gamma * spec) / (1.0 + gamma)
    return out


def _empty_cost(delta: float, mode: str) -> float:
    if mode == "literal":
        return delta
    if mode == "derived":
        return delta**2
    raise InvalidArgumentError(f"empty_set_exponent must be one of {EMPTY_SET_EXPONENTS}")


def update_masses(
    cd: np.ndarray,
    family: FocalSetFamily,
    alpha: float = 1.0,
    beta: float = 2.0,
    delta: float = 100.0,
    empty_set_exponent: str = "literal",
) -> CredalPartition:
    """Optimal credal partition for fixed class dissimilarities.

    ``m_ij ∝ |A_j|^(-alpha/(beta-1)) d_ij^(-1/(beta-1))`` with the empty
    set weighted by ``delta^(-1/(beta-1))`` (``literal``) or
    ``(delta^2)^(-1/(beta-1))`` (``derived``).  A row with a zero
    dissimilarity puts all of its mass on the first such set.
    """
    cd = np.asarray(cd, dtype=float)
    if cd.ndim != 2 or cd.shape[1] != family.f - 1:
        raise InvalidArgumentError(f"class dissimilarities must be n x {family.f - 1}")
    if np.any(cd < 0) or not np.all(np.isfinite(cd)):
        raise InvalidArgumentError("class dissimilarities must be finite and nonnegative")
    expo = 1.0 / (beta - 1.0)
    n = cd.shape[0]
    masses = np.zeros((n, family.f))
    zero = cd == 0
    hit = zero.any(axis=1)
    if np.any(hit):
        first = np.argmax(zero[hit], axis=1)
        masses[np.flatnonzero(hit), first + 1] = 1.0
    rest = ~hit
    if np.any(rest):
        # Log domain keeps tiny dissimilarities and beta near 1 finite.
        logw = -alpha * expo * np.log(family.cardinalities[1:])[None, :] - expo * np.log(cd[rest])
        log_empty = -expo * np.log(_empty_cost(delta, empty_set_exponent))
        full = np.concatenate([np.full((logw.shape[0], 1), log_empty), logw], axis=1)
        full -= full.max(axis=1, keepdims=True)
        w = np.exp(full)
        masses[rest] = w / w.sum(axis=1, keepdims=True)
    return CredalPartition(family, masses)


def objective_value(
    cd: np.ndarray,
    partition: CredalPartition,
    alpha: float = 1.0,
    beta: float = 2.0,
    delta: float = 100.0,
    empty_set_exponent: str = "derived",
) -> float:
    """``sum |A|^alpha m^beta d + cost * sum m_empty^beta``.

    ``cost`` is ``delta**2`` by default; ``empty_set_exponent='literal'``
    uses ``delta``, the cost for which the literal mass update is exact.
    """
    m = partition.masses
    card = partition.family.cardinalities[1:]
    spec = np.sum(card[None, :] ** alpha * m[:, 1:] ** beta * np.asarray(cd))
    return float(spec + _empty_cost(delta, empty_set_exponent) * np.sum(m[:, 0] ** beta))


def update_medoids_single(d, partition: CredalPartition, beta: float = 2.0) -> list[int]:
    """New singleton medoids: ``argmin_l sum_i m_i({k})^beta tau(i, l)``.

    Classes are served in index order; a class whose best candidate is
    already taken falls back to its next best, keeping medoids distinct.
    Ties resolve to the lowest object index.
    """
    tau = as_array(d)
    family = partition.family
    w = partition.masses[:, family.singleton_indices] ** beta
    scores = w.T @ tau
    chosen: list[int] = []
    for k in range(family.c):
        order = np.argsort(scores[k], kind="stable")
        pick = next(int(i) for i in order if int(i) not in chosen)
        chosen.append(pick)
    return chosen


def _make_config(config: EcmddConfig | None, params: dict) -> EcmddConfig:
    if config is None:
        if "c" not in params:
            raise InvalidArgumentError("either a config or c must be given")
        return EcmddConfig(**params)
    if params:
        return EcmddConfig(**{**asdict(config), **params})
    return config


def _single_prototypes(tau, medoids, family, eta) -> SinglePrototypes:
    return SinglePrototypes(tuple(medoids), _meta_medoids(tau, medoids, family, eta))


def _profile_costs(cost: np.ndarray, beta: float) -> np.ndarray:
    """Objective of the optimal masses, summed over objects.

    ``cost`` has the per-set costs ``|A|^alpha d`` (empty set included)
    along its last axis and objects along axis 0.  For fixed costs the
    minimum over a mass row is ``(sum_j cost_j^(-1/(beta-1)))^(1-beta)``,
    which is 0 as soon as one cost vanishes.
    """
    expo = 1.0 / (beta - 1.0)
    zero = np.any(cost <= 0, axis=-1)
    # Dividing by the smallest cost keeps every power in (0, 1].
    low = np.min(cost, axis=-1, keepdims=True)
    low = np.where(low > 0, low, 1.0)
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        inv = np.sum((cost / low) ** -expo, axis=-1)
        per_object = low[..., 0] * inv ** (1.0 - beta)
    return np.where(zero, 0.0, per_object).sum(axis=0)


def profile_objective(d, singleton_medoids: Sequence[int], family: FocalSetFamily, cfg: EcmddConfig) -> float:
    """Objective value after the optimal mass update for the given medoids."""
    tau = as_array(d)
    protos = _single_prototypes(tau, singleton_medoids, family, cfg.eta)
    cd = class_dissimilarities_single(tau, protos, family, cfg.gamma)
    n = tau.shape[0]
    cost = np.empty((n, family.f))
    cost[:, 0] = _empty_cost(cfg.delta, cfg.empty_set_exponent)
    cost[:, 1:] = family.cardinalities[1:] ** cfg.alpha * cd
    return float(_profile_costs(cost, cfg.beta))


def _candidate_profiles(tau, medoids, k, family, cfg, candidates, base_cd) -> np.ndarray:
    """Profile objective for each candidate replacing the medoid of class ``k``."""
    n = tau.shape[0]
    L = len(candidates)
    cost = np.empty((n, L, family.f))
    cost[:, :, 0] = _empty_cost(cfg.delta, cfg.empty_set_exponent)
    for j, s in enumerate(family.sets[1:], start=1):
        scale = s.cardinality**cfg.alpha
        if k not in s.members:
            cost[:, :, j] = scale * base_cd[:, j - 1, None]
            continue
        if s.cardinality == 1:
            cost[:, :, j] = tau[:, candidates]
            continue
        # Meta medoid and dissimilarity of ``s`` for every candidate at once.
        others = [medoids[h] for h in s.members if h != k]
        t = np.concatenate(
            [tau[:, candidates][:, :, None], np.broadcast_to(tau[:, others][:, None, :], (n, L, len(others)))],
            axis=2,
        )
        m = t.shape[2]
        gaps = sum(np.abs(t[:, :, x] - t[:, :, y]) for x, y in combinations(range(m), 2)) / comb(m, 2)
        meta = np.argmin(gaps + cfg.eta * t.mean(axis=2), axis=0)
        dis = (tau[:, meta] + cfg.gamma * t.mean(axis=2)) / (1.0 + cfg.gamma)
        cost[:, :, j] = scale * dis
    return _profile_costs(cost, cfg.beta)


def update_medoids_profile(
    d,
    singleton_medoids: Sequence[int],
    family: FocalSetFamily,
    cfg: EcmddConfig,
) -> list[int]:
    """Coordinate descent on the profile objective.

    Each class in turn moves its medoid to the free object that gives the
    lowest objective once the masses are re-optimised.  A move is taken
    only on a strict improvement, so the current medoid wins ties and the
    objective never increases.
    """
    tau = as_array(d)
    n = tau.shape[0]
    medoids = list(singleton_medoids)
    for k in range(family.c):
        taken = {medoids[h] for h in range(family.c) if h != k}
        candidates = np.array([i for i in range(n) if i not in taken])
        best_here = profile_objective(tau, medoids, family, cfg)
        base_cd = class_dissimilarities_single(tau, _single_prototypes(tau, medoids, family, cfg.eta), family, cfg.gamma)
        chunks = np.array_split(candidates, max(1, len(candidates) // 128))
        values = np.concatenate(
            [_candidate_profiles(tau, medoids, k, family, cfg, chunk, base_cd) for chunk in chunks]
        )
        pick = int(np.argmin(values))
        if values[pick] < best_here - 1e-12 * max(1.0, abs(best_here)):
            medoids[k] = int(candidates[pick])
    return medoids


def fit_secmdd(d, config: EcmddConfig | None = None, **params) -> ClusterResult:
    """Evidential c-medoids with one medoid per class.

    Alternates the mass update with singleton and meta medoid updates
    until the singleton medoids stop changing.  With
    ``medoid_update='scan'`` each medoid minimises the mass-weighted
    dissimilarity of its singleton class; the default ``'profile'``
    moves medoids by descent on the objective with re-optimised masses,
    which a medoid holding its own full mass cannot block.
    """
    cfg = _make_config(config, params)
    if cfg.variant != "single":
        raise InvalidArgumentError(f"fit_secmdd needs variant='single', got {cfg.variant!r}")
    tau = as_array(d)
    family = cfg.family()
    medoids = init_medoids(tau, cfg.c, cfg.init, cfg.seed)
    protos = _single_prototypes(tau, medoids, family, cfg.eta)

    trace, steps = [], []
    prev = None
    converged = False
    it = 0
    for it in range(1, cfg.max_iterations + 1):
        cd = class_dissimilarities_single(tau, protos, family, cfg.gamma)
        part = update_masses(cd, family, cfg.alpha, cfg.beta, cfg.delta, cfg.empty_set_exponent)
        j_after = objective_value(cd, part, cfg.alpha, cfg.beta, cfg.delta, cfg.empty_set_exponent)
        if prev is not None:
            steps.append((objective_value(cd, prev, cfg.alpha, cfg.beta, cfg.delta, cfg.empty_set_exponent), j_after))
        trace.append(j_after)
        prev = part
        if cfg.medoid_update == "profile":
            new_medoids = update_medoids_profile(tau, protos.singleton_medoids, family, cfg)
        else:
            new_medoids = update_medoids_single(tau, part, cfg.beta)
        if new_medoids == list(protos.singleton_medoids):
            converged = True
            break
        protos = _single_prototypes(tau, new_medoids, family, cfg.eta)
    if not converged:
        log.warning("sECMdd stopped after %d iterations without converging", it)
    return ClusterResult(prev, protos, trace, it, converged, cfg, steps)


# -- weighted multi-medoid machinery -----------------------------------------


def _normalise_inverse_power(s: np.ndarray, power: float) -> np.ndarray:
    """Rows ``∝ s^(-power)``; rows with zero entries split weight over the zeros."""
    out = np.zeros_like(s, dtype=float)
    for k, row in enumerate(s):
        zeros = row <= 0
        if zeros.any():
            out[k, zeros] = 1.0 / zeros.sum()
            continue
        logw = -power * np.log(row)
        logw -= logw.max()
        w = np.exp(logw)
        out[k] = w / w.sum()
    return out


def update_weights_specific(d, partition: CredalPartition, beta: float = 2.0, psi: float = 2.0) -> np.ndarray:
    """``c x n`` prototype weights for the singleton classes.

    ``v_ki ∝ (sum_l m_l({k})^beta tau_li)^(-1/(psi-1))``, rows summing to 1.
    """
    if beta <= 1 or psi <= 1:
        raise InvalidArgumentError("beta and psi must exceed 1")
    tau = as_array(d)
    w = partition.masses[:, partition.family.singleton_indices] ** beta
    return _normalise_inverse_power(w.T @ tau, 1.0 / (psi - 1.0))


def derive_weights_imprecise(specific_weights: np.ndarray, focal: FocalSet | Sequence[int], xi: float = 1.0) -> np.ndarray:
    """Weights of an imprecise class from the weights of its singletons.

    ``v_i ∝ min_k(v_ki)^xi / Var_k(v_ki)`` over the classes in ``focal``,
    using the population variance floored at 1e-12.  When every
    numerator vanishes the min factor is dropped.
    """
    if not isinstance(focal, FocalSet):
        focal = FocalSet.of(focal)
    if focal.cardinality < 2:
        raise InvalidArgumentError("imprecise weights need a set of 2 or more clusters")
    rows = np.asarray(specific_weights, dtype=float)[list(focal.members)]
    var = np.maximum(rows.var(axis=0), VARIANCE_FLOOR)
    num = rows.min(axis=0) ** xi / var
    if num.sum() <= 0:
        num = 1.0 / var
    return num / num.sum()


def class_dissimilarities_weighted(d, weights: np.ndarray, psi: float = 2.0) -> np.ndarray:
    """``d_ij = sum_l v_jl^psi tau(i, l)`` for every weight row ``j``."""
    tau = as_array(d)
    return tau @ (np.asarray(weights, dtype=float) ** psi).T


def _top_q(rows: np.ndarray, q: int) -> np.ndarray:
    out = np.zeros_like(rows)
    for k, row in enumerate(rows):
        keep = np.argsort(-row, kind="stable")[:q]
        out[k, keep] = row[keep]
        total = out[k].sum()
        if total > 0:
            out[k] /= total
        else:
            out[k, keep] = 1.0 / len(keep)
    return out


def _normalised_to_members(spec: np.ndarray, partition: CredalPartition) -> np.ndarray:
    family = partition.family
    best = np.argmax(partition.masses, axis=1)
    out = spec.copy()
    for k, j in enumerate(family.singleton_indices):
        members = best == j
        row = np.where(members, spec[k], 0.0)
        if row.sum() > 0:
            out[k] = row / row.sum()
    return out


def _assemble_weights(spec_raw, partition, cfg: EcmddConfig):
    family = partition.family
    if cfg.variant == "weighted-normalized":
        spec = _normalised_to_members(spec_raw, partition)
    elif cfg.variant == "weighted-top-q":
        spec = _top_q(spec_raw, cfg.q)
    else:
        spec = spec_raw
    rows = np.empty((family.f - 1, spec.shape[1]))
    for k, j in enumerate(family.singleton_indices):
        rows[j - 1] = spec[k]
    for j in family.imprecise_indices:
        # Imprecise rows come from the untruncated singleton weights: after
        # truncation objects rarely keep weight in two classes at once.
        rows[j - 1] = derive_weights_imprecise(spec_raw, family.sets[j], cfg.xi)
    if cfg.variant == "weighted-top-q":
        rows[family.imprecise_indices - 1] = _top_q(rows[family.imprecise_indices - 1], cfg.q)
    return spec, rows


def fit_wecmdd(d, config: EcmddConfig | None = None, **params) -> ClusterResult:
    """Evidential c-medoids with weighted multiple medoids per class.

    The first assignment uses single-medoid class dissimilarities built
    from the initial medoids; afterwards masses, singleton weights and
    imprecise weights are updated in turn until the singleton weights
    move by less than ``tol`` in sup norm.
    """
    if config is None and "variant" not in params:
        params = {**params, "variant": "weighted"}
    cfg = _make_config(config, params)
    if cfg.variant == "single":
        raise InvalidArgumentError("fit_wecmdd needs a weighted variant")
    tau = as_array(d)
    n = tau.shape[0]
    if cfg.variant == "weighted-top-q" and cfg.q >= n:
        raise InvalidArgumentError(f"q={cfg.q} must be smaller than n={n}")
    family = cfg.family()
    medoids = init_medoids(tau, cfg.c, cfg.init, cfg.seed)
    cd = class_dissimilarities_single(tau, _single_prototypes(tau, medoids, family, cfg.eta), family, cfg.gamma)

    trace, steps = [], []
    prev_part = None
    prev_spec = None
    rows = None
    converged = False
    it = 0
    mass_args = (cfg.alpha, cfg.beta, cfg.delta, cfg.empty_set_exponent)
    for it in range(1, cfg.max_iterations + 1):
        part = update_masses(cd, family, *mass_args)
        j_after = objective_value(cd, part, *mass_args)
        if prev_part is not None:
            steps.append((objective_value(cd, prev_part, *mass_args), j_after))
        trace.append(j_after)
        prev_part = part
        spec_raw = update_weights_specific(tau, part, cfg.beta, cfg.psi)
        spec, rows = _assemble_weights(spec_raw, part, cfg)
        cd = class_dissimilarities_weighted(tau, rows, cfg.psi)
        if prev_spec is not None and np.max(np.abs(spec - prev_spec)) < cfg.tol:
            converged = True
            break
        prev_spec = spec
    # Final assignment against the last weights so masses and prototypes agree.
    part = update_masses(cd, family, *mass_args)
    j_after = objective_value(cd, part, *mass_args)
    steps.append((objective_value(cd, prev_part, *mass_args), j_after))
    trace.append(j_after)
    if not converged:
        log.warning("wECMdd stopped after %d iterations without converging", it)
    return ClusterResult(part, WeightedPrototypes(rows), trace, it, converged, cfg, steps)


def fit(d, config: EcmddConfig | None = None, **params) -> ClusterResult:
    """Dispatch on ``config.variant``."""
    cfg = _make_config(config, params)
    return fit_secmdd(d, cfg) if cfg.variant == "single" else fit_wecmdd(d, cfg)
