"""Evidential c-medoids clustering of dissimilarity data.

Credal partitions assign each object a mass function over sets of
clusters, so an object between two groups can be labelled with both and
an outlier with none.  Single-medoid and weighted multi-medoid variants
are provided, along with PAM, fuzzy c-medoids and fuzzy multi-medoids
for comparison.
"""

from .baselines import BaselineResult, CrispPartition, FuzzyPartition, fit_fcmdd, fit_fmmdd, fit_pam
from .credal import (
    Bba,
    CredalPartition,
    FocalSet,
    FocalSetFamily,
    HardLabel,
    bel,
    betp,
    enumerate_focal_sets,
    harden,
    pl,
)
from .datagen import Fixture, LabeledPointSet, builtin_fixture, generate_circles, generate_gaussian_ring
from .dissimilarity import (
    AdjacencyMatrix,
    DissimilarityMatrix,
    SimilarityMatrix,
    euclidean_dissimilarity,
    graph_similarity,
    load_matrix,
    similarity_to_dissimilarity,
    validate_adjacency,
    validate_dissimilarity,
    write_csv,
    write_edge_list,
)
from .ecmdd import ClusterResult, EcmddConfig, fit, fit_secmdd, fit_wecmdd
from .errors import (
    CredalMedoidsError,
    FixtureNotFoundError,
    InvalidArgumentError,
    TotalConflictError,
    ValidationError,
)
from .evaluation import MetricReport, classical_metrics, evidential_metrics, metric_report, validity_index

__all__ = [
    "AdjacencyMatrix",
    "BaselineResult",
    "Bba",
    "bel",
    "betp",
    "builtin_fixture",
    "classical_metrics",
    "ClusterResult",
    "CredalMedoidsError",
    "CredalPartition",
    "CrispPartition",
    "DissimilarityMatrix",
    "EcmddConfig",
    "enumerate_focal_sets",
    "euclidean_dissimilarity",
    "evidential_metrics",
    "fit",
    "fit_fcmdd",
    "fit_fmmdd",
    "fit_pam",
    "fit_secmdd",
    "fit_wecmdd",
    "Fixture",
    "FixtureNotFoundError",
    "FocalSet",
    "FocalSetFamily",
    "FuzzyPartition",
    "generate_circles",
    "generate_gaussian_ring",
    "graph_similarity",
    "harden",
    "HardLabel",
    "InvalidArgumentError",
    "LabeledPointSet",
    "load_matrix",
    "metric_report",
    "MetricReport",
    "pl",
    "similarity_to_dissimilarity",
    "SimilarityMatrix",
    "TotalConflictError",
    "validate_adjacency",
    "validate_dissimilarity",
    "ValidationError",
    "validity_index",
    "write_csv",
    "write_edge_list",
]

__version__ = "0.1.0"
