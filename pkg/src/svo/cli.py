"""Command-line entry point: ``svo extract | stats | eval | dump-vector | similarity``.

Settings come from built-in defaults, then an optional ``key = value`` file
given with ``--config``, then command-line flags (highest precedence).
Exit status: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from typing import Sequence

from . import pipeline
from .composer import ALL_METHODS, Method, Triplet, Weighting, compose_concat, \
    compose_coord_mult
from .embeddings import LENIENT, STRICT, load_embeddings_file
from .errors import DataError
from .evaluation import Aggregation, format_table, load_dataset_file
from .ingest import ExtractionConfig, expand_corpus_paths, format_pairs, \
    format_vocabulary, parse_pairs, parse_vocabulary
from .stats import accumulate_counts, format_counts, parse_counts

logger = logging.getLogger("svo")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

DEFAULTS = {
    "threads": "1",
    "shard_size": "5000",
    "min_verb_count": "50",
    "min_noun_count": "50",
    "subject_labels": "nsubj,nsubjpass",
    "object_labels": "dobj,iobj,nmod,xcomp",
    "noun_pos": "NOUN,PROPN,PRON",
    "verb_pos": "VERB",
    "log_base": "e",
    "oov": STRICT,
    "methods": ",".join(m.value for m in ALL_METHODS),
    "aggregations": "averaged,non-averaged",
    "scale": "1,7",
    "weighting": "ppmi",
}

# keys holding input paths that must exist before any work starts
INPUT_KEYS = ("pairs", "vocab", "counts", "embeddings", "dataset", "lemma_map")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _split(value: str) -> list[str]:
    return [v for v in value.replace(",", " ").split() if v]


def read_config_file(path: str) -> dict:
    settings = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            settings[key.strip().replace("-", "_")] = value.strip()
    return settings


def _log_base(value: str) -> float:
    if value == "e":
        return math.e
    try:
        base = float(value)
    except ValueError:
        raise UsageError(f"bad log base {value!r}") from None
    if not base > 1:
        raise UsageError("log base must be > 1")
    return base


def _int(cfg: dict, key: str) -> int:
    try:
        return int(cfg[key])
    except (KeyError, ValueError):
        raise UsageError(f"--{key.replace('_', '-')} must be an integer") from None


def _require(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if not cfg.get(k)]
    if missing:
        raise UsageError("missing required option(s): "
                         + ", ".join("--" + k.replace("_", "-") for k in missing))


def _check_inputs(cfg: dict) -> None:
    for key in INPUT_KEYS:
        path = cfg.get(key)
        if path and not os.path.exists(path):
            raise UsageError(f"--{key.replace('_', '-')}: no such file: {path}")


def _write(path: str | None, text: str) -> None:
    if not path or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _parse_triplet(value: str) -> Triplet:
    parts = _split(value)
    if len(parts) != 3:
        raise UsageError(f"triplet must be subject,verb,object: {value!r}")
    return Triplet.of(*parts)


def _load_composer(cfg: dict):
    _require(cfg, "counts", "vocab", "embeddings")
    with open(cfg["vocab"], encoding="utf-8") as fh:
        vocab = parse_vocabulary(fh, source=cfg["vocab"])
    with open(cfg["counts"], encoding="utf-8") as fh:
        table = parse_counts(fh, source=cfg["counts"])
    embeddings = load_embeddings_file(cfg["embeddings"], oov=cfg["oov"])
    lemma_map = None
    if cfg.get("lemma_map"):
        lemma_map = {}
        with open(cfg["lemma_map"], encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                cols = raw.rstrip("\n").split("\t")
                if cols == [""]:
                    continue
                if len(cols) != 2:
                    raise DataError(f"{cfg['lemma_map']}:{lineno}: expected form<TAB>lemma")
                lemma_map[cols[0]] = cols[1]
    return pipeline.build_composer(table, vocab, embeddings,
                                   log_base=_log_base(cfg["log_base"]), lemma_map=lemma_map)


# -- subcommands -----------------------------------------------------------------

def cmd_extract(cfg: dict) -> None:
    _require(cfg, "corpus", "pairs_out", "vocab_out")
    try:
        paths = expand_corpus_paths(_split(cfg["corpus"]))
    except DataError as e:
        raise UsageError(str(e)) from None
    ecfg = ExtractionConfig(
        subject_labels=_split(cfg["subject_labels"]),
        object_labels=_split(cfg["object_labels"]),
        noun_pos=_split(cfg["noun_pos"]),
        verb_pos=_split(cfg["verb_pos"]),
    )
    pairs, vocab = pipeline.extract(
        paths, ecfg, _int(cfg, "min_verb_count"), _int(cfg, "min_noun_count"),
        workers=_int(cfg, "threads"), sentences_per_shard=_int(cfg, "shard_size"))
    if not pairs:
        logger.warning("no pairs extracted from %d file(s)", len(paths))
    _write(cfg["pairs_out"], format_pairs(pairs))
    _write(cfg["vocab_out"], format_vocabulary(vocab))


def cmd_stats(cfg: dict) -> None:
    _require(cfg, "pairs", "vocab", "counts_out")
    with open(cfg["vocab"], encoding="utf-8") as fh:
        vocab = parse_vocabulary(fh, source=cfg["vocab"])
    with open(cfg["pairs"], encoding="utf-8") as fh:
        pairs = parse_pairs(fh, source=cfg["pairs"])
    for pair in sorted(pairs):
        if not vocab.has_noun(pair.noun):
            raise DataError(f"pair file references non-vocabulary noun {pair.noun!r}")
        if pair.verb not in vocab.verbs:
            raise DataError(f"pair file references non-vocabulary verb {pair.verb!r}")
    _write(cfg["counts_out"], format_counts(accumulate_counts(pairs)))


def cmd_eval(cfg: dict) -> None:
    _require(cfg, "dataset")
    methods = [Method(m) for m in _split(cfg["methods"])]
    aggregations = [Aggregation(a) for a in _split(cfg["aggregations"])]
    if not methods or not aggregations:
        raise UsageError("at least one method and one aggregation are required")
    scale = tuple(float(x) for x in _split(cfg["scale"]))
    if len(scale) != 2:
        raise UsageError("--scale must be lo,hi")
    items = load_dataset_file(cfg["dataset"], scale=scale)
    composer = _load_composer(cfg)
    reports = pipeline.run_eval(items, composer, methods, aggregations,
                                strict=cfg["oov"] == STRICT, workers=_int(cfg, "threads"))
    _write(cfg.get("output"), "".join(r.line() + "\n" for r in reports))
    if cfg.get("table"):
        sys.stderr.write(format_table(reports))


def cmd_dump_vector(cfg: dict) -> None:
    _require(cfg, "triplet", "kind")
    t = _parse_triplet(cfg["triplet"])
    composer = _load_composer(cfg)
    pair = composer.pair_vectors(t, Weighting(cfg["weighting"]))
    kind = cfg["kind"]
    if kind == "sv":
        text = _format_sparse(pair.sv)
    elif kind == "vo":
        text = _format_sparse(pair.vo)
    elif kind == "coord-mult":
        text = _format_sparse(compose_coord_mult(pair.sv, pair.vo))
    elif kind == "concat":
        vec = compose_concat(pair.sv, pair.vo)
        text = ("#subj\n" + _format_sparse(vec.left)
                + "#obj\n" + _format_sparse(vec.right))
    else:
        raise UsageError(f"unknown vector kind {kind!r}")
    _write(cfg.get("output"), text)


def _format_sparse(vec) -> str:
    return "".join(f"{noun}\t{value!r}\n" for noun, value in vec.items())


def cmd_similarity(cfg: dict) -> None:
    _require(cfg, "triplet1", "triplet2")
    t1, t2 = _parse_triplet(cfg["triplet1"]), _parse_triplet(cfg["triplet2"])
    methods = [Method(m) for m in _split(cfg["methods"])]
    if not methods:
        raise UsageError("at least one method is required")
    composer = _load_composer(cfg)
    lines = [f"{m.value}\t{composer.similarity(t1, t2, m):.6f}\n" for m in methods]
    _write(cfg.get("output"), "".join(lines))


COMMANDS = {
    "extract": cmd_extract,
    "stats": cmd_stats,
    "eval": cmd_eval,
    "dump-vector": cmd_dump_vector,
    "similarity": cmd_similarity,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--threads", help="worker count (default 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    model = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    model.add_argument("--counts", help="counts artifact from `stats`")
    model.add_argument("--vocab", help="vocabulary file from `extract`")
    model.add_argument("--embeddings", help="word2vec text-format vectors (.gz ok)")
    model.add_argument("--log-base", help="PPMI log base: e (default), 2, ...")
    model.add_argument("--oov", choices=(STRICT, LENIENT))
    model.add_argument("--lemma-map", help="form<TAB>lemma fallback table")
    model.add_argument("-o", "--output", help="output file (default stdout)")

    parser = _Parser(prog="svo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", parents=[common], argument_default=argparse.SUPPRESS,
                       help="CoNLL-U corpus -> pair file + vocabulary file")
    p.add_argument("--corpus", nargs="+", help="CoNLL-U files, directories or globs")
    p.add_argument("--pairs-out")
    p.add_argument("--vocab-out")
    p.add_argument("--min-verb-count")
    p.add_argument("--min-noun-count")
    p.add_argument("--subject-labels")
    p.add_argument("--object-labels")
    p.add_argument("--noun-pos")
    p.add_argument("--verb-pos")
    p.add_argument("--shard-size", help="sentences per parallel work unit")

    p = sub.add_parser("stats", parents=[common], argument_default=argparse.SUPPRESS,
                       help="pair file + vocabulary -> counts artifact")
    p.add_argument("--pairs")
    p.add_argument("--vocab")
    p.add_argument("--counts-out")

    p = sub.add_parser("eval", parents=[common, model], argument_default=argparse.SUPPRESS,
                       help="score a dataset with every requested method")
    p.add_argument("--dataset")
    p.add_argument("--methods", help="comma list; default all seven")
    p.add_argument("--aggregations", help="comma list of averaged, non-averaged")
    p.add_argument("--scale", help="human score bounds lo,hi (default 1,7)")
    p.add_argument("--table", action="store_true", help="aligned table on stderr")

    p = sub.add_parser("dump-vector", parents=[common, model],
                       argument_default=argparse.SUPPRESS,
                       help="write a pair or composed vector as noun<TAB>value")
    p.add_argument("--triplet", help="subject,verb,object")
    p.add_argument("--kind", choices=("sv", "vo", "concat", "coord-mult"))
    p.add_argument("--weighting", choices=[w.value for w in Weighting])

    p = sub.add_parser("similarity", parents=[common, model],
                       argument_default=argparse.SUPPRESS, help="score two triplets")
    p.add_argument("triplet1", help="subject,verb,object")
    p.add_argument("triplet2", help="subject,verb,object")
    p.add_argument("--methods")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
    if "corpus" in flags:
        flags["corpus"] = " ".join(flags["corpus"])
    for k in ("table",):
        if k in flags:
            flags[k] = "1" if flags[k] else ""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        if not os.path.exists(args.config):
            raise UsageError(f"--config: no such file: {args.config}")
        cfg.update(read_config_file(args.config))
    cfg.update({k: str(v) for k, v in flags.items()})
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(args)
        _check_inputs(cfg)
        if cfg["oov"] not in (STRICT, LENIENT):
            raise UsageError(f"unknown OOV policy {cfg['oov']!r}")
        COMMANDS[args.command](cfg)
    except UsageError as e:
        print(f"svo {args.command}: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError, UnicodeDecodeError) as e:
        print(f"svo {args.command}: error: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        # enum conversions of user-supplied names (methods, aggregations, ...)
        print(f"svo {args.command}: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
