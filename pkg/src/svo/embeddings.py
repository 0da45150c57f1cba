"""Pretrained word vectors in the word2vec text format, and cosine similarities over them."""

from __future__ import annotations

import gzip
import bz2
import logging
import lzma
from typing import Iterable

import numpy as np

from .errors import ArtifactError, OOVError

logger = logging.getLogger(__name__)

STRICT = "strict"
LENIENT = "lenient"


def cosine(a: np.ndarray, b: np.ndarray, norm_a: float | None = None,
           norm_b: float | None = None) -> float:
    """Cosine similarity; 0 when either vector has zero norm."""
    na = float(np.linalg.norm(a)) if norm_a is None else norm_a
    nb = float(np.linalg.norm(b)) if norm_b is None else norm_b
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, max(-1.0, float(np.dot(a, b)) / (na * nb)))


class EmbeddingTable:
    """Immutable word -> vector map with norms cached at construction."""

    def __init__(self, words: list[str], matrix: np.ndarray, oov: str = STRICT):
        if oov not in (STRICT, LENIENT):
            raise ValueError(f"unknown OOV policy {oov!r}")
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(words):
            raise ValueError("matrix must have one row per word")
        self.words = list(words)
        self.matrix = matrix
        self.matrix.setflags(write=False)
        self.dimension = matrix.shape[1]
        self.index = {w: i for i, w in enumerate(self.words)}
        self.norms = np.linalg.norm(matrix, axis=1)
        self.norms.setflags(write=False)
        self.oov = oov
        self._zero_warned: set = set()

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def __len__(self) -> int:
        return len(self.words)

    def vector(self, word: str) -> np.ndarray:
        try:
            return self.matrix[self.index[word]]
        except KeyError:
            raise OOVError(word) from None

    def norm(self, word: str) -> float:
        return float(self.norms[self.index[word]])

    def _warn_zero(self, word: str) -> None:
        if word not in self._zero_warned:
            self._zero_warned.add(word)
            logger.warning("zero-norm embedding for %r; its similarities are 0", word)

    def similarity(self, x: str, y: str) -> float:
        ix, iy = self.index.get(x), self.index.get(y)
        if ix is None or iy is None:
            missing = x if ix is None else y
            if self.oov == STRICT:
                raise OOVError(missing)
            logger.warning("no embedding for %r; similarity taken as 0", missing)
            return 0.0
        nx, ny = float(self.norms[ix]), float(self.norms[iy])
        for w, n in ((x, nx), (y, ny)):
            if n == 0.0:
                self._warn_zero(w)
        return cosine(self.matrix[ix], self.matrix[iy], nx, ny)

    def similarities_to(self, rows: np.ndarray, word: str,
                        row_norms: np.ndarray | None = None) -> np.ndarray:
        """Cosine of ``word`` against each row of ``rows``; zero-norm rows give 0."""
        v = self.vector(word)
        nv = self.norm(word)
        if nv == 0.0:
            self._warn_zero(word)
            return np.zeros(rows.shape[0])
        if row_norms is None:
            row_norms = np.linalg.norm(rows, axis=1)
        dots = rows @ v
        out = np.zeros(rows.shape[0])
        ok = row_norms > 0
        out[ok] = dots[ok] / (row_norms[ok] * nv)
        return np.clip(out, -1.0, 1.0)


def nn_sim(table: EmbeddingTable, x: str, y: str) -> float:
    """Similarity between two nouns."""
    return table.similarity(x, y)


def nv_sim(table: EmbeddingTable, x: str, y: str) -> float:
    """Similarity between a noun and a verb; same cosine as :func:`nn_sim`."""
    return table.similarity(x, y)


def load_embeddings(stream: Iterable[str], oov: str = STRICT,
                    source: str | None = None) -> EmbeddingTable:
    """Parse ``word v1 ... vd`` lines, with an optional ``<count> <dim>`` header."""
    rows: dict = {}
    dim = None
    for lineno, raw in enumerate(stream, start=1):
        parts = raw.rstrip("\n").split()
        if not parts:
            continue
        if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
            dim = int(parts[1])
            continue
        word, comps = parts[0], parts[1:]
        if dim is None:
            dim = len(comps)
        if len(comps) != dim or dim == 0:
            raise ArtifactError(
                f"expected {dim} components, found {len(comps)}", lineno, source)
        try:
            vec = [float(c) for c in comps]
        except ValueError:
            raise ArtifactError("non-numeric vector component", lineno, source) from None
        if word in rows:
            logger.warning("duplicate embedding for %r at line %d; keeping the last", word, lineno)
        rows[word] = vec
    if not rows:
        raise ArtifactError("no vectors found; dimension cannot be inferred", None, source)
    words = list(rows)
    matrix = np.array([rows[w] for w in words], dtype=np.float64).reshape(len(words), dim)
    return EmbeddingTable(words, matrix, oov=oov)


_OPENERS = {".gz": gzip.open, ".bz2": bz2.open, ".xz": lzma.open}


def load_embeddings_file(path: str, oov: str = STRICT) -> EmbeddingTable:
    for suffix, opener in _OPENERS.items():
        if path.endswith(suffix):
            with opener(path, "rt", encoding="utf-8") as fh:
                return load_embeddings(fh, oov=oov, source=path)
    with open(path, encoding="utf-8") as fh:
        return load_embeddings(fh, oov=oov, source=path)
