"""Factorized distributional representations of subject-verb-object constructions."""

from .composer import ALL_METHODS, Composer, Method, Triplet, Weighting, baseline_w2v_sum, \
    compose_concat, compose_coord_mult, svo_similarity
from .embeddings import EmbeddingTable, load_embeddings, load_embeddings_file, nn_sim, nv_sim
from .errors import ArtifactError, ConlluParseError, DataError, EmptyModelError, OOVError, \
    UndefinedCorrelationError, UnknownVerbError
from .evaluation import Aggregation, EvalItem, EvalReport, evaluate, load_dataset, spearman_rho
from .ingest import DepPair, ExtractionConfig, Role, TokenRecord, Vocabulary, build_vocabulary, \
    extract_pairs, parse_conllu
from .stats import PairCountTable, PpmiModel, accumulate_counts, format_counts, parse_counts

__all__ = [
    "ALL_METHODS",
    "Composer",
    "Method",
    "Triplet",
    "Weighting",
    "baseline_w2v_sum",
    "compose_concat",
    "compose_coord_mult",
    "svo_similarity",
    "EmbeddingTable",
    "load_embeddings",
    "load_embeddings_file",
    "nn_sim",
    "nv_sim",
    "ArtifactError",
    "ConlluParseError",
    "DataError",
    "EmptyModelError",
    "OOVError",
    "UndefinedCorrelationError",
    "UnknownVerbError",
    "Aggregation",
    "EvalItem",
    "EvalReport",
    "evaluate",
    "load_dataset",
    "spearman_rho",
    "DepPair",
    "ExtractionConfig",
    "Role",
    "TokenRecord",
    "Vocabulary",
    "build_vocabulary",
    "extract_pairs",
    "parse_conllu",
    "PairCountTable",
    "PpmiModel",
    "accumulate_counts",
    "format_counts",
    "parse_counts",
]

__version__ = "0.1.0"
