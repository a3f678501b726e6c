"""Integral simplices: census by diameter, the {1, lambda}-simplex/partition bijection, and embeddings."""

__version__ = "0.1.0"

from .bijection import (
    BadAlphabet,
    LemmaReport,
    NotClustered,
    Partition,
    enumerate_partitions,
    lemma_check,
    matrix_to_partition,
    partition_count,
    partition_to_matrix,
    sigma,
    threshold_scan,
)
from .census import (
    BudgetExceeded,
    CensusResult,
    CensusTask,
    Mode,
    canonical_form,
    census_table,
    enumerate_simplices,
    is_canonical,
)
from .embedding import Embedding, build_coordinates, build_gram, block_parameters, reduce_dimension
from .exact import BorderedMatrix, SquaredDistanceMatrix, border, det, principal_submatrix
from .geometry import gram_oracle, menger_realizable, minimal_embedding_dimension

__all__ = [
    "BadAlphabet", "BorderedMatrix", "BudgetExceeded", "CensusResult", "CensusTask", "Embedding",
    "LemmaReport", "Mode", "NotClustered", "Partition", "SquaredDistanceMatrix", "block_parameters",
    "border", "build_coordinates", "build_gram", "canonical_form", "census_table", "det",
    "enumerate_partitions", "enumerate_simplices", "gram_oracle", "is_canonical", "lemma_check",
    "matrix_to_partition", "menger_realizable", "minimal_embedding_dimension", "partition_count",
    "partition_to_matrix", "principal_submatrix", "reduce_dimension", "sigma", "threshold_scan",
]
