"""In-process pipeline: corpus -> pairs/vocabulary -> counts -> composer -> reports.

The CLI is a thin layer over these functions, so running them directly gives
the same numbers as going through the on-disk artifacts.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Mapping, Sequence

from .composer import ALL_METHODS, Composer, Method
from .embeddings import EmbeddingTable
from .errors import DataError
from .evaluation import Aggregation, EvalItem, EvalReport, aggregate, score_pairs
from .ingest import ExtractionConfig, Vocabulary, build_vocabulary, extract_corpus, \
    restrict_to_vocabulary
from .stats import PairCountTable, PpmiModel


def extract(paths: Sequence[str], cfg: ExtractionConfig = ExtractionConfig(),
            min_verb_count: int = 50, min_noun_count: int = 50,
            workers: int = 1, sentences_per_shard: int = 5000) -> tuple[Counter, Vocabulary]:
    """Pairs restricted to the thresholded vocabulary, and that vocabulary."""
    raw = extract_corpus(paths, cfg, workers=workers, sentences_per_shard=sentences_per_shard)
    vocab = build_vocabulary(raw, min_verb_count, min_noun_count)
    return restrict_to_vocabulary(raw, vocab), vocab


def build_composer(table: PairCountTable, vocab: Vocabulary, embeddings: EmbeddingTable,
                   log_base: float = math.e,
                   lemma_map: Mapping[str, str] | None = None) -> Composer:
    return Composer(vocab, PpmiModel(table, log_base=log_base), embeddings, lemma_map)


def run_eval(items: Sequence[EvalItem], composer: Composer,
             methods: Iterable[Method] = ALL_METHODS,
             aggregations: Iterable[Aggregation] = tuple(Aggregation),
             strict: bool = True, workers: int = 1) -> list[EvalReport]:
    aggregations = [Aggregation(a) for a in aggregations]
    reports = []
    for method in methods:
        method = Method(method)
        try:
            scored = score_pairs(items, lambda a, b: composer.similarity(a, b, method),
                                 strict=strict, workers=workers)
            for agg in aggregations:
                reports.append(aggregate(items, scored, agg, method.value))
        except DataError as e:
            raise DataError(f"method {method.value}: {e}") from e
    return reports
