"""Role-specific (noun, verb) counts and the PPMI association scores built on them."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable

from .errors import ArtifactError, EmptyModelError
from .ingest import DepPair, Role

ROLES = (Role.SUBJECT, Role.OBJECT)


@dataclass(frozen=True)
class PairCountTable:
    """Exact joint counts per role with their row/column marginals.

    Build with :meth:`from_pairs` or :meth:`from_cells`; the marginals and
    totals are always derived from ``counts`` so they cannot drift apart.
    Tables add cell-wise, which is how shard results are merged.
    """

    counts: dict  # Role -> {(noun, verb): int}
    noun_marginals: dict  # Role -> {noun: int}
    verb_marginals: dict  # Role -> {verb: int}
    total: dict  # Role -> int

    @classmethod
    def from_cells(cls, cells: dict) -> PairCountTable:
        counts, nm, vm, total = {}, {}, {}, {}
        for role in ROLES:
            joint = {k: int(c) for k, c in cells.get(role, {}).items() if c}
            nouns: Counter = Counter()
            verbs: Counter = Counter()
            for (n, v), c in joint.items():
                if c < 0:
                    raise ValueError(f"negative count for {(n, v)}")
                nouns[n] += c
                verbs[v] += c
            counts[role] = joint
            nm[role] = dict(nouns)
            vm[role] = dict(verbs)
            total[role] = sum(joint.values())
        return cls(counts, nm, vm, total)

    @classmethod
    def from_pairs(cls, pairs: Iterable[DepPair] | Counter) -> PairCountTable:
        weighted = pairs.items() if isinstance(pairs, Counter) else ((p, 1) for p in pairs)
        cells: dict = {r: Counter() for r in ROLES}
        for pair, c in weighted:
            cells[pair.role][(pair.noun, pair.verb)] += c
        return cls.from_cells(cells)

    def __add__(self, other: PairCountTable) -> PairCountTable:
        cells = {}
        for role in ROLES:
            merged = Counter(self.counts[role])
            merged.update(other.counts[role])
            cells[role] = merged
        return PairCountTable.from_cells(cells)

    def count(self, noun: str, verb: str, role: Role) -> int:
        return self.counts[role].get((noun, verb), 0)


def accumulate_counts(pairs: Iterable[DepPair] | Counter) -> PairCountTable:
    return PairCountTable.from_pairs(pairs)


class PpmiModel:
    """PPMI lookups over a :class:`PairCountTable`.

    All three probabilities share the role's pair table as sample space, so
    ``P(x, y) / (P(x) P(y))`` reduces to ``c(x, y) * T / (c(x) * c(y))``,
    evaluated on exact integers before the single rounding to float.
    """

    def __init__(self, table: PairCountTable, log_base: float = math.e):
        if not log_base > 1:
            raise ValueError("log base must be > 1")
        self.table = table
        self.log_base = log_base
        self._log_scale = 1.0 if log_base == math.e else math.log(log_base)
        self._by_verb: dict = {}
        for role in ROLES:
            index = defaultdict(list)
            for (n, v), c in table.counts[role].items():
                index[v].append((n, c))
            self._by_verb[role] = {v: sorted(cells) for v, cells in index.items()}
        self._columns: dict = {}

    def _score(self, joint: int, noun_total: int, verb_total: int, total: int) -> float:
        ratio = (joint * total) / (noun_total * verb_total)
        if ratio <= 1.0:
            return 0.0
        return math.log(ratio) / self._log_scale

    def ppmi(self, noun: str, verb: str, role: Role) -> float:
        total = self.table.total[role]
        if total == 0:
            raise EmptyModelError(f"no {role.value} pairs counted")
        joint = self.table.count(noun, verb, role)
        if joint == 0:
            return 0.0
        return self._score(
            joint,
            self.table.noun_marginals[role][noun],
            self.table.verb_marginals[role][verb],
            total,
        )

    def column(self, verb: str, role: Role) -> dict:
        """Nouns with strictly positive PPMI against ``verb`` in ``role``."""
        key = (role, verb)
        col = self._columns.get(key)
        if col is None:
            total = self.table.total[role]
            if total == 0:
                raise EmptyModelError(f"no {role.value} pairs counted")
            nm = self.table.noun_marginals[role]
            vc = self.table.verb_marginals[role].get(verb, 0)
            col = {}
            for noun, c in self._by_verb[role].get(verb, ()):
                score = self._score(c, nm[noun], vc, total)
                if score > 0.0:
                    col[noun] = score
            self._columns[key] = col
        return col


# -- artifact -------------------------------------------------------------------

def format_counts(table: PairCountTable) -> str:
    out = []
    for role in ROLES:
        out.append(f"#role {role.value} total {table.total[role]}\n")
        for (n, v), c in sorted(table.counts[role].items()):
            out.append(f"{n}\t{v}\t{c}\n")
    return "".join(out)


def parse_counts(stream: Iterable[str], source: str | None = None) -> PairCountTable:
    cells: dict = {}
    declared: dict = {}
    role = None
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line:
            continue
        if line.startswith("#"):
            parts = line.split()
            if len(parts) != 4 or parts[0] != "#role" or parts[2] != "total":
                raise ArtifactError("bad role header", lineno, source)
            try:
                role = Role(parts[1])
                declared[role] = (int(parts[3]), lineno)
            except ValueError:
                raise ArtifactError("bad role header", lineno, source) from None
            if role in cells:
                raise ArtifactError(f"duplicate block for role {role.value}", lineno, source)
            cells[role] = {}
            continue
        if role is None:
            raise ArtifactError("count line before any role header", lineno, source)
        cols = line.split("\t")
        if len(cols) != 3:
            raise ArtifactError("expected noun<TAB>verb<TAB>count", lineno, source)
        n, v, c = cols
        try:
            count = int(c)
        except ValueError:
            raise ArtifactError(f"non-integer count {c!r}", lineno, source) from None
        if count <= 0:
            raise ArtifactError("counts must be positive", lineno, source)
        if (n, v) in cells[role]:
            raise ArtifactError(f"duplicate cell {(n, v)}", lineno, source)
        cells[role][(n, v)] = count
    table = PairCountTable.from_cells(cells)
    for r, (t, lineno) in declared.items():
        if table.total[r] != t:
            raise ArtifactError(
                f"declared total {t} for role {r.value} but cells sum to {table.total[r]}",
                lineno,
                source,
            )
    return table
