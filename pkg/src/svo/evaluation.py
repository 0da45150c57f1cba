"""Ranked-similarity datasets, Spearman's rho, and the two annotator aggregations."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .composer import Triplet
from .errors import ArtifactError, DataError, OOVError, UndefinedCorrelationError

logger = logging.getLogger(__name__)

CANONICAL_COLUMNS = ("annotator", "subj1", "verb1", "obj1", "subj2", "verb2", "obj2", "score")
GS11_COLUMNS = ("participant", "verb", "subject", "object", "landmark", "input")


class Aggregation(str, Enum):
    AVERAGED = "averaged"
    NON_AVERAGED = "non-averaged"


@dataclass(frozen=True)
class EvalItem:
    annotator_id: str
    left: Triplet
    right: Triplet
    human_score: float

    @property
    def pair(self) -> tuple[Triplet, Triplet]:
        return (self.left, self.right)


@dataclass(frozen=True)
class EvalReport:
    method: str
    aggregation: Aggregation
    rho: float
    n_items: int
    n_skipped_oov: int

    def line(self) -> str:
        return (f"{self.method}\t{self.aggregation.value}\t{self.rho:.6f}"
                f"\t{self.n_items}\t{self.n_skipped_oov}")


def load_dataset(stream: Iterable[str], scale: tuple[float, float] = (1.0, 7.0),
                 source: str | None = None) -> list[EvalItem]:
    """Read the canonical 8-column schema, or a GS11-native file.

    The format is picked from the header. GS11 rows (participant, verb,
    subject, object, landmark, input[, hilo]) become
    ``(subject, verb, object)`` vs ``(subject, landmark, object)``; the hilo
    column, if present, is ignored.
    """
    lines = iter(stream)
    header_line = next(lines, None)
    if header_line is None:
        raise ArtifactError("empty dataset file (no header)", 1, source)
    header = [h.lower() for h in header_line.split()]
    if tuple(header[:8]) == CANONICAL_COLUMNS:
        ncols, gs11 = 8, False
    elif tuple(header[:6]) == GS11_COLUMNS:
        ncols, gs11 = 6, True
    else:
        raise ArtifactError(f"unrecognized dataset header {header_line.strip()!r}", 1, source)
    lo, hi = scale
    items = []
    for lineno, raw in enumerate(lines, start=2):
        cols = raw.split()
        if not cols:
            continue
        if len(cols) < ncols:
            raise ArtifactError(f"expected {ncols} columns, found {len(cols)}", lineno, source)
        try:
            score = float(cols[ncols - 1])
        except ValueError:
            raise ArtifactError(f"unparseable score {cols[ncols - 1]!r}", lineno, source) from None
        if not lo <= score <= hi:
            raise ArtifactError(f"score {score} outside [{lo}, {hi}]", lineno, source)
        try:
            if gs11:
                who, verb, subj, obj, landmark = cols[:5]
                left, right = Triplet.of(subj, verb, obj), Triplet.of(subj, landmark, obj)
            else:
                who = cols[0]
                left, right = Triplet.of(*cols[1:4]), Triplet.of(*cols[4:7])
        except ValueError as e:
            raise ArtifactError(str(e), lineno, source) from None
        items.append(EvalItem(who, left, right, score))
    return items


def load_dataset_file(path: str, scale: tuple[float, float] = (1.0, 7.0)) -> list[EvalItem]:
    with open(path, encoding="utf-8") as fh:
        return load_dataset(fh, scale=scale, source=path)


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of average (fractional) ranks."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if len(x) < 2:
        raise UndefinedCorrelationError("need at least two observations")
    rx = rankdata(x, method="average")
    ry = rankdata(y, method="average")
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sxx, syy = float(np.dot(dx, dx)), float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant list")
    r = float(np.dot(dx, dy)) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r))) + 0.0


Scorer = Callable[[Triplet, Triplet], float]


@dataclass
class ScoredPairs:
    """Model scores for each distinct ordered pair, plus the pairs that hit OOV."""

    scores: dict
    oov: dict  # pair -> OOVError


def score_pairs(items: Sequence[EvalItem], scorer: Scorer, strict: bool = True,
                workers: int = 1) -> ScoredPairs:
    distinct = list(dict.fromkeys(it.pair for it in items))

    def run(pair):
        try:
            return scorer(*pair), None
        except OOVError as e:
            if strict:
                raise DataError(f"{pair[0]} vs {pair[1]}: {e}") from e
            return None, e

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, distinct))
    else:
        results = [run(p) for p in distinct]
    scores, oov = {}, {}
    for pair, (s, err) in zip(distinct, results):
        if err is None:
            scores[pair] = s
        else:
            oov[pair] = err
    for pair, err in oov.items():
        logger.warning("skipping %s vs %s: %s", pair[0], pair[1], err)
    return ScoredPairs(scores, oov)


def aggregate(items: Sequence[EvalItem], scored: ScoredPairs, aggregation: Aggregation,
              method: str = "") -> EvalReport:
    aggregation = Aggregation(aggregation)
    if aggregation is Aggregation.NON_AVERAGED:
        kept = [it for it in items if it.pair in scored.scores]
        human = [it.human_score for it in kept]
        model = [scored.scores[it.pair] for it in kept]
        skipped = len(items) - len(kept)
    else:
        groups: dict = {}
        for it in items:
            groups.setdefault(it.pair, []).append(it.human_score)
        kept_pairs = [p for p in groups if p in scored.scores]
        human = [sum(groups[p]) / len(groups[p]) for p in kept_pairs]
        model = [scored.scores[p] for p in kept_pairs]
        skipped = len(groups) - len(kept_pairs)
    if not human:
        raise DataError(f"{method or 'evaluation'}: no usable rows")
    rho = spearman_rho(human, model)
    return EvalReport(method, aggregation, rho, len(human), skipped)


def evaluate(items: Sequence[EvalItem], scorer: Scorer, aggregation: Aggregation,
             method: str = "", strict: bool = True, workers: int = 1) -> EvalReport:
    """Score every distinct pair once and correlate with the human judgments.

    Averaged: one row per ordered (left, right) pair with the mean human
    score. Non-averaged: one row per annotator judgment. In lenient mode
    OOV pairs are dropped and counted (in the same unit as ``n_items``).
    """
    scored = score_pairs(items, scorer, strict=strict, workers=workers)
    return aggregate(items, scored, aggregation, method)


def format_table(reports: Sequence[EvalReport]) -> str:
    width = max([len(r.method) for r in reports] + [6])
    lines = [f"{'method':<{width}}  {'aggregation':<12}  {'rho':>9}  {'n':>6}  {'skipped':>7}"]
    for r in reports:
        lines.append(f"{r.method:<{width}}  {r.aggregation.value:<12}  {r.rho:>9.6f}"
                     f"  {r.n_items:>6}  {r.n_skipped_oov:>7}")
    return "\n".join(lines) + "\n"
