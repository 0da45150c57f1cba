"""CoNLL-U reading, dependency pair extraction and vocabulary construction."""

from __future__ import annotations

import glob
import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, TextIO

from .errors import ConlluParseError, DataError

logger = logging.getLogger(__name__)


class Role(str, Enum):
    SUBJECT = "subj"
    OBJECT = "obj"


@dataclass(frozen=True)
class TokenRecord:
    index: int
    surface_form: str
    lemma: str
    upos: str
    head: int
    deprel: str

    @property
    def normalized_lemma(self) -> str:
        if self.lemma != "_":
            return self.lemma.lower()
        return self.surface_form.lower()


@dataclass(frozen=True, order=True)
class DepPair:
    noun: str
    verb: str
    role: Role


@dataclass(frozen=True)
class ExtractionConfig:
    subject_labels: frozenset = frozenset({"nsubj", "nsubjpass"})
    object_labels: frozenset = frozenset({"dobj", "iobj", "nmod", "xcomp"})
    noun_pos: frozenset = frozenset({"NOUN", "PROPN", "PRON"})
    verb_pos: frozenset = frozenset({"VERB"})

    def __post_init__(self):
        for name in ("subject_labels", "object_labels", "noun_pos", "verb_pos"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        overlap = self.subject_labels & self.object_labels
        if overlap:
            raise ValueError(f"labels in both subject and object sets: {sorted(overlap)}")


@dataclass(frozen=True)
class Vocabulary:
    """Noun index space shared by every pair vector, plus the admitted verbs.

    ``nouns`` is sorted so coordinate k always means the same noun.
    """

    nouns: tuple
    verbs: frozenset
    min_verb_count: int | None = field(default=None, compare=False)
    min_noun_count: int | None = field(default=None, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nouns = tuple(self.nouns)
        if list(nouns) != sorted(set(nouns)):
            raise ValueError("vocabulary nouns must be sorted and unique")
        object.__setattr__(self, "nouns", nouns)
        object.__setattr__(self, "verbs", frozenset(self.verbs))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(nouns)})

    def __len__(self) -> int:
        return len(self.nouns)

    def index_of(self, noun: str) -> int:
        return self._index[noun]

    def has_noun(self, noun: str) -> bool:
        return noun in self._index

    def admits(self, pair: DepPair) -> bool:
        return pair.noun in self._index and pair.verb in self.verbs


def _parse_token_line(line: str, lineno: int, source: str | None) -> TokenRecord | None:
    cols = line.split("\t")
    if len(cols) != 10:
        raise ConlluParseError(f"expected 10 columns, found {len(cols)}", lineno, source)
    tok_id = cols[0]
    if "-" in tok_id or "." in tok_id:
        return None
    try:
        index = int(tok_id)
    except ValueError:
        raise ConlluParseError(f"non-integer token id {tok_id!r}", lineno, source) from None
    try:
        head = int(cols[6])
    except ValueError:
        raise ConlluParseError(f"non-integer HEAD {cols[6]!r}", lineno, source) from None
    upos, deprel = cols[3], cols[7]
    if index < 1 or head < 0 or head == index:
        raise ConlluParseError(f"invalid id/head pair {index}/{head}", lineno, source)
    if not upos or not deprel:
        raise ConlluParseError("empty UPOS or DEPREL", lineno, source)
    return TokenRecord(index, cols[1], cols[2], upos, head, deprel)


def parse_conllu(
    stream: Iterable[str], start_line: int = 1, source: str | None = None
) -> Iterator[list[TokenRecord]]:
    """Yield sentences from CoNLL-U text, one list of tokens per sentence.

    Multiword ranges and empty nodes are dropped. ``start_line`` offsets the
    line numbers reported in errors when parsing a slice of a larger file.
    """
    sentence: list[TokenRecord] = []
    for lineno, raw in enumerate(stream, start=start_line):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if sentence:
                yield sentence
                sentence = []
            continue
        if line.startswith("#"):
            continue
        tok = _parse_token_line(line, lineno, source)
        if tok is not None:
            sentence.append(tok)
    if sentence:
        yield sentence


def extract_pairs(sentence: list[TokenRecord], cfg: ExtractionConfig) -> list[DepPair]:
    by_index = {t.index: t for t in sentence}
    pairs = []
    for tok in sentence:
        if tok.upos not in cfg.noun_pos:
            continue
        head = by_index.get(tok.head)
        if head is None or head.upos not in cfg.verb_pos:
            continue
        if tok.deprel in cfg.subject_labels:
            role = Role.SUBJECT
        elif tok.deprel in cfg.object_labels:
            role = Role.OBJECT
        else:
            continue
        noun, verb = tok.normalized_lemma, head.normalized_lemma
        if noun and verb:
            pairs.append(DepPair(noun, verb, role))
    return pairs


def count_pairs(
    sentences: Iterable[list[TokenRecord]], cfg: ExtractionConfig
) -> Counter:
    counts: Counter = Counter()
    for sent in sentences:
        counts.update(extract_pairs(sent, cfg))
    return counts


def build_vocabulary(
    pairs: Iterable[DepPair] | Counter, min_verb_count: int, min_noun_count: int
) -> Vocabulary:
    """Apply the frequency thresholds.

    A noun needs ``min_noun_count`` occurrences as a subject and, separately,
    as an object (summed over all verbs). A verb needs ``min_verb_count``
    pairs in either role. ``pairs`` may be a raw stream or a pair Counter.
    """
    counts = pairs if isinstance(pairs, Counter) else Counter(pairs)
    subj: Counter = Counter()
    obj: Counter = Counter()
    verbs: Counter = Counter()
    for pair, c in counts.items():
        (subj if pair.role is Role.SUBJECT else obj)[pair.noun] += c
        verbs[pair.verb] += c
    nouns = sorted(
        n for n in subj.keys() | obj.keys()
        if subj[n] >= min_noun_count and obj[n] >= min_noun_count
    )
    kept_verbs = frozenset(v for v, c in verbs.items() if c >= min_verb_count)
    if not nouns or not kept_verbs:
        logger.warning(
            "vocabulary is empty or degenerate: %d nouns, %d verbs", len(nouns), len(kept_verbs)
        )
    return Vocabulary(tuple(nouns), kept_verbs, min_verb_count, min_noun_count)


def restrict_to_vocabulary(counts: Counter, vocab: Vocabulary) -> Counter:
    return Counter({p: c for p, c in counts.items() if vocab.admits(p)})


# -- corpus-level, shard-parallel extraction ---------------------------------

def expand_corpus_paths(specs: Iterable[str]) -> list[str]:
    """Resolve files, directories (``*.conllu`` inside) and glob patterns."""
    out = []
    for spec in specs:
        if os.path.isdir(spec):
            found = sorted(
                glob.glob(os.path.join(spec, "**", "*.conllu"), recursive=True)
                + glob.glob(os.path.join(spec, "**", "*.conllu.gz"), recursive=True)
            )
            out.extend(found)
        elif os.path.exists(spec):
            out.append(spec)
        else:
            matched = sorted(glob.glob(spec, recursive=True))
            if not matched:
                raise DataError(f"corpus path not found: {spec}")
            out.extend(matched)
    return out


def _open_text(path: str) -> TextIO:
    if path.endswith(".gz"):
        import gzip

        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def _iter_shards(path: str, sentences_per_shard: int) -> Iterator[tuple]:
    # Shards end on a blank line so no sentence is split.
    with _open_text(path) as fh:
        buf: list[str] = []
        start = 1
        n_sent = 0
        for lineno, line in enumerate(fh, start=1):
            buf.append(line)
            if not line.strip():
                n_sent += 1
                if n_sent >= sentences_per_shard:
                    yield (path, start, buf)
                    buf, start, n_sent = [], lineno + 1, 0
        if buf:
            yield (path, start, buf)


def _count_shard(args: tuple) -> Counter:
    path, start, lines, cfg = args
    return count_pairs(parse_conllu(lines, start_line=start, source=path), cfg)


def extract_corpus(
    paths: Iterable[str],
    cfg: ExtractionConfig = ExtractionConfig(),
    workers: int = 1,
    sentences_per_shard: int = 5000,
) -> Counter:
    """Count dependency pairs over every file; shards merge by addition."""
    total: Counter = Counter()
    jobs = (
        (path, start, lines, cfg)
        for p in paths
        for path, start, lines in _iter_shards(p, sentences_per_shard)
    )
    if workers <= 1:
        for job in jobs:
            total.update(_count_shard(job))
        return total
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_count_shard, jobs):
            total.update(part)
    return total


# -- artifacts ----------------------------------------------------------------

def format_pairs(counts: Counter) -> str:
    rows = sorted((p.role.value, p.noun, p.verb, c) for p, c in counts.items() if c > 0)
    return "".join(f"{r}\t{n}\t{v}\t{c}\n" for r, n, v, c in rows)


def parse_pairs(stream: Iterable[str], source: str | None = None) -> Counter:
    counts: Counter = Counter()
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise DataError(f"{source or '<pairs>'}:{lineno}: expected 4 columns")
        role, noun, verb, c = cols
        try:
            count = int(c)
            pair = DepPair(noun, verb, Role(role))
        except ValueError:
            raise DataError(f"{source or '<pairs>'}:{lineno}: malformed pair line") from None
        if count < 0:
            raise DataError(f"{source or '<pairs>'}:{lineno}: negative count")
        counts[pair] += count
    return counts


def format_vocabulary(vocab: Vocabulary) -> str:
    lines = [f"#nouns {len(vocab.nouns)} #verbs {len(vocab.verbs)}"]
    lines += [f"N\t{n}" for n in vocab.nouns]
    lines += [f"V\t{v}" for v in sorted(vocab.verbs)]
    return "\n".join(lines) + "\n"


def parse_vocabulary(stream: Iterable[str], source: str | None = None) -> Vocabulary:
    where = source or "<vocabulary>"
    it = iter(stream)
    header = next(it, "").split()
    if len(header) != 4 or header[0] != "#nouns" or header[2] != "#verbs":
        raise DataError(f"{where}:1: bad vocabulary header")
    nouns, verbs = [], []
    for lineno, raw in enumerate(it, start=2):
        line = raw.rstrip("\n")
        if not line:
            continue
        kind, _, lemma = line.partition("\t")
        if kind == "N" and lemma:
            nouns.append(lemma)
        elif kind == "V" and lemma:
            verbs.append(lemma)
        else:
            raise DataError(f"{where}:{lineno}: expected 'N<TAB>lemma' or 'V<TAB>lemma'")
    try:
        declared = (int(header[1]), int(header[3]))
    except ValueError:
        raise DataError(f"{where}:1: bad vocabulary header") from None
    if (len(nouns), len(verbs)) != declared:
        raise DataError(f"{where}: header counts do not match entries")
    try:
        return Vocabulary(tuple(nouns), frozenset(verbs))
    except ValueError as e:
        raise DataError(f"{where}: {e}") from None
