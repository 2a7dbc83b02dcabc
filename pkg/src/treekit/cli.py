"""Command-line entry point.

Conventions: results go to standard output (or --out); progress and error
messages go to standard error. Exit status 0 on success, 1 on usage or
runtime errors, 2 when the validate subcommand found errors. The
TREEKIT_CORPUS_DIR environment variable supplies a default directory in
which the experiment subcommand looks for <name>.conllu corpora.
"""

import argparse
import os
import sys

from . import experiments, fixtures, parser as dep_parser, prep, stats, tagger
from .conllu import load_conllu, parse_conllu, save_conllu, serialize_conllu
from .errors import TreekitError
from .validation import (ERROR, PROFILE_NAMES, builtin_profile,
                         validate_treebank)

PROG = "treekit"
VERSION = "0.1.0"
VERSION_TEXT = (f"{PROG} {VERSION} (formats: {tagger.MODEL_FORMAT} "
                f"{tagger.MODEL_VERSION}, {dep_parser.MODEL_FORMAT} "
                f"{dep_parser.MODEL_VERSION}, results-tsv v1)")
CORPUS_DIR_VAR = "TREEKIT_CORPUS_DIR"


class _UsageError(Exception):
    def __init__(self, message, parser):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message, self)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_validate(args) -> int:
    treebank = load_conllu(args.input)
    profile = builtin_profile(args.profile, strict=args.strict)
    diagnostics = validate_treebank(treebank, profile, lint=args.lint)
    text = "".join(d.to_line() + "\n" for d in diagnostics)
    _emit(text, args.out)
    if any(d.severity == ERROR for d in diagnostics):
        return 2
    return 0


def _cmd_stats(args) -> int:
    banks = [load_conllu(path) for path in args.inputs]
    if len(banks) > 1:
        if args.key == "length":
            raise TreekitError("length statistics take a single input")
        parts = {os.path.splitext(os.path.basename(p))[0]: tb
                 for p, tb in zip(args.inputs, banks)}
        _emit(stats.split_distribution(parts, args.key).to_tsv(), args.out)
        return 0
    treebank = banks[0]
    if args.key == "length":
        _emit(stats.length_tsv(stats.length_stats(
            treebank, include_punct=not args.exclude_punct)), args.out)
        return 0
    rows = (stats.upos_distribution(treebank) if args.key == "upos"
            else stats.deprel_distribution(treebank))
    render = (stats.distribution_tsv if args.format == "tsv"
              else stats.distribution_table)
    _emit(render(rows), args.out)
    return 0


def _cmd_split(args) -> int:
    treebank = load_conllu(args.input)
    spec = prep.SplitSpec.parse(args.ratios, seed=args.seed)
    parts = prep.split(treebank, spec)
    for name, part in zip(("train", "dev", "test"), parts):
        path = f"{args.out_prefix}.{name}.conllu"
        save_conllu(part, path)
        print(f"wrote {path} ({len(part)} sentences)", file=sys.stderr)
    return 0


def _cmd_delex(args) -> int:
    treebank = load_conllu(args.input)
    _emit(serialize_conllu(prep.delexicalize(treebank)), args.out)
    return 0


def _cmd_pos(args) -> int:
    if args.action == "train":
        treebank = load_conllu(args.input)
        warm = tagger.load_tagger(args.warm_start) if args.warm_start else None
        model = tagger.train_tagger(treebank, epochs=args.epochs,
                                    seed=args.seed, warm_start=warm,
                                    mode=args.mode)
        tagger.save_tagger(model, args.model)
        print(f"wrote {args.model}", file=sys.stderr)
        return 0
    model = tagger.load_tagger(args.model)
    treebank = load_conllu(args.input)
    if args.action == "tag":
        from dataclasses import replace
        from .conllu import Sentence, Treebank
        tagged = []
        for sentence in treebank.sentences:
            predicted = tagger.tag(model, sentence)
            tokens = tuple(replace(t, upos=predicted[k])
                           for k, t in enumerate(sentence.tokens))
            tagged.append(Sentence(tokens, sentence.comments, sentence.extras))
        _emit(serialize_conllu(Treebank(tuple(tagged), treebank.source_name)),
              args.out)
        return 0
    report = tagger.evaluate_pos(model, treebank,
                                 exclude_punct=args.exclude_punct)
    _emit(report.to_tsv() if args.format == "tsv" else report.render_table(),
          args.out)
    return 0


def _cmd_dep(args) -> int:
    if args.action in ("train", "parse") and not args.model:
        raise TreekitError(f"dep {args.action} needs --model")
    if args.action == "train":
        treebank = load_conllu(args.input)
        model = dep_parser.train_parser(treebank, epochs=args.epochs,
                                        seed=args.seed, mode=args.mode)
        dep_parser.save_parser(model, args.model)
        print(f"wrote {args.model}", file=sys.stderr)
        return 0
    treebank = load_conllu(args.input)
    if args.action == "parse":
        model = dep_parser.load_parser(args.model)
        _emit(serialize_conllu(dep_parser.parse_treebank(model, treebank)),
              args.out)
        return 0
    if args.pred and args.model:
        raise TreekitError("give either --model or --pred, not both")
    if args.pred:
        predicted = load_conllu(args.pred)
    elif args.model:
        model = dep_parser.load_parser(args.model)
        predicted = dep_parser.parse_treebank(model, treebank)
    else:
        raise TreekitError("dep eval needs --model or --pred")
    report = dep_parser.evaluate_dep(predicted, treebank,
                                     exclude_punct=args.exclude_punct)
    _emit(report.to_tsv() if args.format == "tsv" else report.render_table(),
          args.out)
    return 0


def _read_config(path) -> dict[str, str]:
    """`key = value` lines; blank lines and #-comments are ignored."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise TreekitError(
                    f"{path}:{line_no}: expected 'key = value', got {raw!r}")
            values[key.strip()] = value.strip()
    return values


def _resolve_corpora(pairs, config: dict[str, str]) -> dict[str, str]:
    paths: dict[str, str] = {}
    for key, value in config.items():
        if key.startswith("corpus."):
            paths[key[len("corpus."):]] = value
    for pair in pairs or ():
        name, sep, path = pair.partition("=")
        if not sep:
            raise TreekitError(f"--corpus expects name=path, got {pair!r}")
        paths[name] = path
    corpus_dir = os.environ.get(CORPUS_DIR_VAR)
    if corpus_dir:
        for name in ("cbr", "shp", "ktb"):
            candidate = os.path.join(corpus_dir, f"{name}.conllu")
            if name not in paths and os.path.exists(candidate):
                paths[name] = candidate
    return paths


def _cmd_experiment(args) -> int:
    config = _read_config(args.config) if args.config else {}
    paths = _resolve_corpora(args.corpus, config)
    corpora = {name: load_conllu(path) for name, path in paths.items()}
    if not corpora:
        raise TreekitError("no corpora supplied (use --corpus name=path, a "
                           f"config file, or {CORPUS_DIR_VAR})")
    seeds_text = args.seeds or config.get("seeds")
    seeds = (tuple(int(s) for s in seeds_text.split(",")) if seeds_text
             else None)
    epochs_text = config.get("epochs")
    epochs = args.epochs if args.epochs is not None else (
        int(epochs_text) if epochs_text else None)
    out = args.out or config.get("out")
    fmt = args.format or config.get("format", "tsv")
    results = experiments.run_matrix(args.task, corpora, seeds=seeds,
                                     epochs=epochs)
    _emit(experiments.render_results(results, fmt), out)
    return 0


def _cmd_fixtures(args) -> int:
    for path in fixtures.export_fixtures(args.dir):
        print(f"wrote {path}", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    root = _Parser(prog=PROG, description="Treebank engineering workbench")
    root.add_argument("--version", action="version", version=VERSION_TEXT)
    sub = root.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("validate", parser_class=_Parser,
                       help="check trees and schema conformance")
    p.add_argument("input")
    p.add_argument("--profile", choices=PROFILE_NAMES, default="generic")
    p.add_argument("--strict", action="store_true",
                   help="treat unknown labels as errors")
    p.add_argument("--lint", action="store_true",
                   help="run the Kakataibo direction lints regardless of profile")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", parser_class=_Parser,
                       help="label distributions and length statistics")
    p.add_argument("inputs", nargs="+", metavar="input")
    p.add_argument("--key", choices=("upos", "deprel", "length"),
                   default="upos")
    p.add_argument("--format", choices=("tsv", "table"), default="tsv")
    p.add_argument("--exclude-punct", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("split", parser_class=_Parser,
                       help="deterministic train/dev/test split")
    p.add_argument("input")
    p.add_argument("--ratios", default="80/10/10")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("delex", parser_class=_Parser,
                       help="replace forms and lemmas with placeholders")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_delex)

    p = sub.add_parser("pos", parser_class=_Parser, help="POS tagger")
    p.add_argument("action", choices=("train", "tag", "eval"))
    p.add_argument("input")
    p.add_argument("--model", required=True)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--mode", choices=("lex", "delex"), default="lex")
    p.add_argument("--warm-start", help="model file to fine-tune from")
    p.add_argument("--exclude-punct", action="store_true")
    p.add_argument("--format", choices=("table", "tsv"), default="table")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_pos)

    p = sub.add_parser("dep", parser_class=_Parser, help="dependency parser")
    p.add_argument("action", choices=("train", "parse", "eval"))
    p.add_argument("input")
    p.add_argument("--model")
    p.add_argument("--pred", help="pre-parsed file to score instead of a model")
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--mode", choices=("lex", "delex"), default="lex")
    p.add_argument("--exclude-punct", action="store_true")
    p.add_argument("--format", choices=("table", "tsv"), default="table")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_dep)

    p = sub.add_parser("experiment", parser_class=_Parser,
                       help="run a builtin experiment matrix")
    p.add_argument("task", choices=("pos", "dep"))
    p.add_argument("--corpus", action="append", metavar="name=path")
    p.add_argument("--config", help="file of key = value options")
    p.add_argument("--seeds", help="comma-separated seed list")
    p.add_argument("--epochs", type=int)
    p.add_argument("--format", choices=("tsv", "table"))
    p.add_argument("--out")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("fixtures", parser_class=_Parser,
                       help="export the bundled fixture corpora")
    p.add_argument("--dir", default="fixtures")
    p.set_defaults(func=_cmd_fixtures)

    return root


def dispatch(argv) -> int:
    """Route an argument vector to a subcommand; returns the exit status."""
    root = build_parser()
    try:
        args = root.parse_args(argv)
    except _UsageError as exc:
        exc.parser.print_usage(sys.stderr)
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        root.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except TreekitError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
