"""Factorized (s,v)/(v,o) vectors, their combinations, and the word2vec baselines."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, NamedTuple

import numpy as np

from .embeddings import EmbeddingTable
from .errors import OOVError, UnknownVerbError
from .ingest import Role, Vocabulary
from .stats import PpmiModel

logger = logging.getLogger(__name__)


class Weighting(str, Enum):
    PPMI = "ppmi"
    NVSIM = "nvsim"


class Method(str, Enum):
    CONCAT = "concat"
    COORD_MULT = "coord-mult"
    MULT_SCORE = "mult-score"
    W2V_SUM = "w2v-sum"
    W2V_ALL_CONCAT = "w2v-all-concat"
    W2V_ALL_COORD_MULT = "w2v-all-coord-mult"
    W2V_ALL_MULT_SCORE = "w2v-all-mult-score"

    @property
    def weighting(self) -> Weighting | None:
        if self is Method.W2V_SUM:
            return None
        return Weighting.NVSIM if self.value.startswith("w2v-all") else Weighting.PPMI

    @property
    def combiner(self) -> str | None:
        if self is Method.W2V_SUM:
            return None
        return self.value.removeprefix("w2v-all-")


ALL_METHODS = tuple(Method)


class Triplet(NamedTuple):
    subject: str
    verb: str
    object: str

    @classmethod
    def of(cls, subject: str, verb: str, object: str) -> Triplet:
        t = cls(subject.strip().lower(), verb.strip().lower(), object.strip().lower())
        if not all(t):
            raise ValueError(f"empty word in triplet {t}")
        return t

    def __str__(self) -> str:
        return f"({self.subject}, {self.verb}, {self.object})"


@dataclass(frozen=True, eq=False)
class SparseVector:
    """Sparse vector over a vocabulary's noun space.

    ``indices`` is strictly increasing; ``values`` is aligned with it.
    """

    space: Vocabulary
    indices: np.ndarray
    values: np.ndarray

    @property
    def size(self) -> int:
        return len(self.space)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.size)
        out[self.indices] = self.values
        return out

    def items(self) -> list[tuple[str, float]]:
        nouns = self.space.nouns
        return [(nouns[i], float(v)) for i, v in zip(self.indices, self.values)]

    def norm_sq(self) -> float:
        return float(np.dot(self.values, self.values))

    def dot(self, other: SparseVector) -> float:
        _check_space(self, other)
        _, ia, ib = np.intersect1d(self.indices, other.indices,
                                   assume_unique=True, return_indices=True)
        return float(np.dot(self.values[ia], other.values[ib]))


@dataclass(frozen=True, eq=False)
class PairVector(SparseVector):
    role: Role = Role.SUBJECT
    weighting: Weighting = Weighting.PPMI


@dataclass(frozen=True, eq=False)
class ConcatVector:
    """[u_sv ; u_vo] kept as its two halves; length is twice the noun space."""

    left: SparseVector
    right: SparseVector

    def to_dense(self) -> np.ndarray:
        return np.concatenate([self.left.to_dense(), self.right.to_dense()])

    def norm_sq(self) -> float:
        return self.left.norm_sq() + self.right.norm_sq()

    def dot(self, other: ConcatVector) -> float:
        return self.left.dot(other.left) + self.right.dot(other.right)


class PairTuple(NamedTuple):
    sv: PairVector
    vo: PairVector


def _check_space(a: SparseVector, b: SparseVector) -> None:
    if a.space is not b.space and a.space.nouns != b.space.nouns:
        raise ValueError("vectors live in different noun spaces")


def compose_concat(u_sv: SparseVector, u_vo: SparseVector) -> ConcatVector:
    _check_space(u_sv, u_vo)
    return ConcatVector(u_sv, u_vo)


def compose_coord_mult(u_sv: SparseVector, u_vo: SparseVector) -> SparseVector:
    _check_space(u_sv, u_vo)
    common, ia, ib = np.intersect1d(u_sv.indices, u_vo.indices,
                                    assume_unique=True, return_indices=True)
    return SparseVector(u_sv.space, common, u_sv.values[ia] * u_vo.values[ib])


def vector_cosine(a, b) -> float | None:
    """Cosine of two composed vectors, or None when either is all-zero."""
    na, nb = a.norm_sq(), b.norm_sq()
    if na == 0.0 or nb == 0.0:
        return None
    c = a.dot(b) / (np.sqrt(na) * np.sqrt(nb))
    return float(min(1.0, max(-1.0, c)))


def _dense_cosine(a: np.ndarray, b: np.ndarray) -> float | None:
    na, nb = float(np.dot(a, a)), float(np.dot(b, b))
    if na == 0.0 or nb == 0.0:
        return None
    c = float(np.dot(a, b)) / (np.sqrt(na) * np.sqrt(nb))
    return min(1.0, max(-1.0, c))


def baseline_w2v_sum(t: Triplet, table: EmbeddingTable) -> np.ndarray:
    return table.vector(t.subject) + table.vector(t.verb) + table.vector(t.object)


class Composer:
    """Scores (s,v,o) triplets with any :class:`Method`.

    Holds the noun space, the PPMI model and the embedding table, and caches
    pair vectors since evaluation reuses the same few verbs heavily.
    """

    def __init__(self, vocabulary: Vocabulary, ppmi: PpmiModel,
                 embeddings: EmbeddingTable,
                 lemma_map: Mapping[str, str] | None = None):
        self.vocabulary = vocabulary
        self.ppmi = ppmi
        self.embeddings = embeddings
        self.lemma_map = dict(lemma_map or {})
        d = embeddings.dimension
        rows = np.zeros((len(vocabulary), d))
        missing = 0
        for k, noun in enumerate(vocabulary.nouns):
            if noun in embeddings:
                rows[k] = embeddings.vector(noun)
            else:
                missing += 1
        if missing:
            logger.warning("%d vocabulary nouns have no embedding; their coordinates are 0",
                           missing)
        self._noun_rows = rows
        self._noun_norms = np.linalg.norm(rows, axis=1)
        self._all_indices = np.arange(len(vocabulary))
        self._cache: dict = {}

    # -- word resolution --------------------------------------------------------

    def _resolve(self, word: str, known) -> str | None:
        if word in known:
            return word
        lowered = word.lower()
        if lowered in known:
            return lowered
        lemma = self.lemma_map.get(word, self.lemma_map.get(lowered))
        if lemma is not None and lemma in known:
            return lemma
        return None

    def resolve_embedded(self, word: str) -> str:
        w = self._resolve(word, self.embeddings.index)
        if w is None:
            raise OOVError(word)
        return w

    def resolve_verb(self, verb: str) -> str:
        w = self._resolve(verb, self.vocabulary.verbs)
        if w is None:
            raise UnknownVerbError(verb)
        return w

    # -- pair vectors -----------------------------------------------------------

    def pair_vector(self, role: Role, noun: str, verb: str,
                    weighting: Weighting = Weighting.PPMI) -> PairVector:
        """entry[k] = assoc(n_k, verb) * cos(n_k, noun), zero-assoc coordinates dropped.

        assoc is the role's PPMI, or the noun-verb embedding cosine for NVSIM.
        """
        role, weighting = Role(role), Weighting(weighting)
        noun = self.resolve_embedded(noun)
        if weighting is Weighting.PPMI:
            verb = self.resolve_verb(verb)
        else:
            verb = self.resolve_embedded(verb)
        key = (role, noun, verb, weighting)
        hit = self._cache.get(key)
        if hit is not None:
            return hit

        if weighting is Weighting.PPMI:
            col = self.ppmi.column(verb, role)
            idx = np.array(sorted(self.vocabulary.index_of(n) for n in col
                                  if self.vocabulary.has_noun(n)), dtype=np.int64)
            nouns = self.vocabulary.nouns
            assoc = np.array([col[nouns[k]] for k in idx], dtype=np.float64)
        else:
            idx = self._all_indices
            assoc = self.embeddings.similarities_to(self._noun_rows, verb, self._noun_norms)
            keep = assoc != 0.0
            idx, assoc = idx[keep], assoc[keep]
        sims = self.embeddings.similarities_to(self._noun_rows[idx], noun, self._noun_norms[idx])
        vec = PairVector(self.vocabulary, idx, assoc * sims, role=role, weighting=weighting)
        self._cache[key] = vec
        return vec

    def pair_vectors(self, t: Triplet, weighting: Weighting = Weighting.PPMI) -> PairTuple:
        return PairTuple(
            self.pair_vector(Role.SUBJECT, t.subject, t.verb, weighting),
            self.pair_vector(Role.OBJECT, t.object, t.verb, weighting),
        )

    def represent(self, t: Triplet, method: Method):
        method = Method(method)
        if method is Method.W2V_SUM:
            return baseline_w2v_sum(Triplet(*(self.resolve_embedded(w) for w in t)),
                                    self.embeddings)
        pair = self.pair_vectors(t, method.weighting)
        if method.combiner == "concat":
            return compose_concat(pair.sv, pair.vo)
        if method.combiner == "coord-mult":
            return compose_coord_mult(pair.sv, pair.vo)
        return pair

    def similarity(self, t1: Triplet, t2: Triplet, method: Method) -> float:
        method = Method(method)
        r1, r2 = self.represent(t1, method), self.represent(t2, method)
        if method is Method.W2V_SUM:
            score = _dense_cosine(r1, r2)
        elif method.combiner == "mult-score":
            a, b = vector_cosine(r1.sv, r2.sv), vector_cosine(r1.vo, r2.vo)
            score = None if a is None or b is None else a * b
        else:
            score = vector_cosine(r1, r2)
        if score is None:
            logger.warning("all-zero representation for %s vs %s under %s; similarity 0",
                           t1, t2, method.value)
            return 0.0
        return score


def svo_similarity(composer: Composer, t1: Triplet, t2: Triplet, method: Method) -> float:
    return composer.similarity(t1, t2, method)
