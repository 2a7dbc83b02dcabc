"""Experiment matrices over seeded splits: monolingual, zero-shot,
fine-tuned, and delexicalized-transfer settings for the tagger and parser,
with mean and spread reporting over seeds.

Scores are percentages. The builtin matrices hold three tagging settings
and seven parsing settings; corpus names follow the ISO-style shorthands
cbr (Kakataibo), shp (Shipibo-Konibo) and ktb (Kazakh, never bundled:
supplied by path when available, otherwise those settings are skipped).
"""

import statistics
from dataclasses import dataclass, field, replace

from .conllu import Treebank
from .errors import MissingCorpus
from .parser import evaluate_dep, parse_treebank, train_parser
from .prep import SplitSpec, delexicalize, harmonize_labels, split
from .tagger import evaluate_pos, train_tagger

DEFAULT_SEEDS = (1, 2, 3, 4, 5)
DEFAULT_RATIOS = "80/10/10"
OPTIONAL_CORPORA = ("ktb",)

POS_METRICS = ("accuracy", "f1")
DEP_METRICS = ("uas", "las")


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    task: str  # "pos" | "dep"
    train_source: str
    eval_targets: tuple[str, ...]
    finetune_source: str | None = None
    source_mode: str = "lex"
    target_mode: str = "lex"
    split_ratios: tuple[tuple[str, str], ...] = ()
    harmonize: bool = False
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    epochs: int = 10
    finetune_epochs: int | None = None  # defaults to `epochs`

    def __post_init__(self):
        if self.task not in ("pos", "dep"):
            raise ValueError(f"task must be 'pos' or 'dep', got {self.task!r}")
        if self.finetune_source and self.task != "pos":
            raise ValueError("fine-tuning is only defined for the tagger")
        if self.task == "pos" and (self.source_mode, self.target_mode) != ("lex", "lex"):
            raise ValueError("delexicalized modes are only defined for parsing")

    @property
    def metrics(self) -> tuple[str, ...]:
        return POS_METRICS if self.task == "pos" else DEP_METRICS

    def ratios_for(self, name: str) -> str:
        for corpus, ratios in self.split_ratios:
            if corpus == name:
                return ratios
        return DEFAULT_RATIOS

    def referenced_corpora(self) -> tuple[str, ...]:
        names = [self.train_source]
        if self.finetune_source and self.finetune_source not in names:
            names.append(self.finetune_source)
        for target in self.eval_targets:
            if target not in names:
                names.append(target)
        return tuple(names)


@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    per_seed: dict[tuple[str, str], tuple[float, ...]]
    mean: dict[tuple[str, str], float]
    sd: dict[tuple[str, str], float]
    skipped: bool = False
    skip_reason: str = ""


def builtin_matrix(task: str) -> list[ExperimentSpec]:
    """The shipped experiment settings: 3 for tagging, 7 for parsing."""
    cbr_60 = (("cbr", "60/20/20"), ("shp", "80/10/10"), ("ktb", "80/10/10"))
    cbr_80 = (("cbr", "80/10/10"), ("shp", "80/10/10"), ("ktb", "80/10/10"))
    if task == "pos":
        return [
            ExperimentSpec("pos-1", "pos", "cbr", ("cbr", "shp"),
                           split_ratios=cbr_60),
            ExperimentSpec("pos-2", "pos", "shp", ("cbr", "shp"),
                           split_ratios=cbr_60),
            ExperimentSpec("pos-3", "pos", "shp", ("cbr", "shp"),
                           finetune_source="cbr", split_ratios=cbr_60),
        ]
    if task == "dep":
        return [
            ExperimentSpec("dep-1", "dep", "ktb", ("cbr", "shp"),
                           source_mode="delex", target_mode="lex",
                           split_ratios=cbr_60, harmonize=True),
            ExperimentSpec("dep-2", "dep", "shp", ("cbr",),
                           source_mode="delex", target_mode="lex",
                           split_ratios=cbr_60, harmonize=True),
            ExperimentSpec("dep-3", "dep", "ktb", ("cbr", "shp"),
                           source_mode="delex", target_mode="delex",
                           split_ratios=cbr_60, harmonize=True),
            ExperimentSpec("dep-4", "dep", "shp", ("cbr",),
                           source_mode="delex", target_mode="delex",
                           split_ratios=cbr_60, harmonize=True),
            ExperimentSpec("dep-5", "dep", "shp", ("cbr", "shp"),
                           split_ratios=cbr_60, harmonize=True),
            ExperimentSpec("dep-6", "dep", "cbr", ("cbr",),
                           split_ratios=cbr_60),
            ExperimentSpec("dep-7", "dep", "cbr", ("cbr",),
                           split_ratios=cbr_80),
        ]
    raise ValueError(f"task must be 'pos' or 'dep', got {task!r}")


def _skipped(spec: ExperimentSpec, missing) -> ExperimentResult:
    reason = "missing corpus " + ", ".join(sorted(missing))
    return ExperimentResult(spec, {}, {}, {}, skipped=True, skip_reason=reason)


def run_experiment(spec: ExperimentSpec, corpora: dict[str, Treebank],
                   model_cache: dict | None = None,
                   optional=OPTIONAL_CORPORA) -> ExperimentResult:
    """Execute one setting: per seed, split every referenced corpus, apply
    the delexicalization/harmonization the setting calls for, train (and
    fine-tune when specified), then evaluate on each target's test part.

    Settings that reference an absent optional corpus are reported as
    skipped; an absent required corpus raises MissingCorpus. `model_cache`
    (a plain dict) lets settings that train the same source model share it.
    """
    referenced = spec.referenced_corpora()
    missing = [name for name in referenced if name not in corpora]
    if missing:
        if all(name in optional for name in missing):
            return _skipped(spec, missing)
        raise MissingCorpus(
            f"{spec.id} needs corpora {missing}, not supplied")

    scores: dict[tuple[str, str], list[float]] = {
        (target, metric): []
        for target in spec.eval_targets for metric in spec.metrics}

    for seed in spec.seeds:
        parts = {}
        for name in referenced:
            corpus = corpora[name]
            if spec.task == "dep" and spec.harmonize:
                corpus = harmonize_labels(corpus, "strip_subtypes")
            parts[name] = split(corpus, SplitSpec.parse(spec.ratios_for(name), seed))

        train_part = parts[spec.train_source][0]
        cache_key = (spec.task, spec.train_source,
                     spec.ratios_for(spec.train_source), seed, spec.epochs,
                     spec.source_mode, spec.harmonize if spec.task == "dep" else False)
        model = model_cache.get(cache_key) if model_cache is not None else None
        if model is None:
            if spec.task == "pos":
                model = train_tagger(train_part, epochs=spec.epochs, seed=seed)
            else:
                model = train_parser(train_part, epochs=spec.epochs, seed=seed,
                                     mode=spec.source_mode)
            if model_cache is not None:
                model_cache[cache_key] = model

        if spec.finetune_source:
            finetune_epochs = (spec.epochs if spec.finetune_epochs is None
                               else spec.finetune_epochs)
            finetune_train = parts[spec.finetune_source][0]
            model = train_tagger(finetune_train, epochs=finetune_epochs,
                                 seed=seed, warm_start=model)

        for target in spec.eval_targets:
            test_part = parts[target][2]
            if spec.task == "pos":
                report = evaluate_pos(model, test_part)
                scores[(target, "accuracy")].append(100.0 * report.accuracy)
                scores[(target, "f1")].append(100.0 * report.macro[2])
            else:
                gold = (delexicalize(test_part) if spec.target_mode == "delex"
                        else test_part)
                predicted = parse_treebank(model, gold)
                report = evaluate_dep(predicted, gold)
                scores[(target, "uas")].append(100.0 * report.uas)
                scores[(target, "las")].append(100.0 * report.las)

    per_seed = {key: tuple(values) for key, values in scores.items()}
    mean = {key: statistics.fmean(values) for key, values in per_seed.items()}
    sd = {key: statistics.pstdev(values) for key, values in per_seed.items()}
    return ExperimentResult(spec, per_seed, mean, sd)


def run_matrix(task: str, corpora: dict[str, Treebank],
               seeds: tuple[int, ...] | None = None,
               epochs: int | None = None) -> list[ExperimentResult]:
    """Run every builtin setting for a task, sharing trained source models
    between settings that are defined to use the same one."""
    cache: dict = {}
    results = []
    for spec in builtin_matrix(task):
        if seeds is not None:
            spec = replace(spec, seeds=tuple(seeds))
        if epochs is not None:
            spec = replace(spec, epochs=epochs)
        results.append(run_experiment(spec, corpora, model_cache=cache))
    return results


def _metric_header(task: str, target: str, metric: str) -> str:
    if task == "pos":
        return f"{target} {metric}"
    return f"{metric.upper()} {target}"


def render_results(results: list[ExperimentResult], format: str = "tsv") -> str:
    """TSV (one row per experiment/target/metric) or an aligned table with
    one row per experiment and mean±sd cells; targets never evaluated in a
    setting render as blank cells."""
    if not results:
        raise ValueError("no results to render")
    if format == "tsv":
        lines = ["experiment\ttarget\tmetric\tmean\tsd\tseeds"]
        for result in results:
            if result.skipped:
                lines.append(f"# {result.spec.id} skipped: {result.skip_reason}")
                continue
            seeds = ",".join(str(s) for s in result.spec.seeds)
            for target in result.spec.eval_targets:
                for metric in result.spec.metrics:
                    key = (target, metric)
                    lines.append(
                        f"{result.spec.id}\t{target}\t{metric}"
                        f"\t{result.mean[key]:.4f}\t{result.sd[key]:.4f}\t{seeds}")
        return "\n".join(lines) + "\n"
    if format != "table":
        raise ValueError(f"format must be 'tsv' or 'table', got {format!r}")

    task = results[0].spec.task
    columns: list[tuple[str, str]] = []
    for result in results:
        for target in result.spec.eval_targets:
            for metric in result.spec.metrics:
                if (target, metric) not in columns:
                    columns.append((target, metric))

    headers = (["experiment", "train", "fine-tune"]
               + [_metric_header(task, t, m) for t, m in columns])
    rows = []
    for result in results:
        row = [result.spec.id, result.spec.train_source,
               result.spec.finetune_source or ""]
        if result.spec.task == "dep":
            row[1] = f"{result.spec.train_source} ({result.spec.source_mode}"
            row[1] += f"->{result.spec.target_mode})"
        for key in columns:
            if result.skipped:
                row.append("skipped" if key == columns[0] else "")
            elif key in result.mean:
                row.append(f"{result.mean[key]:.1f}±{result.sd[key]:.1f}")
            else:
                row.append("")
        rows.append(row)

    widths = [max(len(headers[k]), max((len(r[k]) for r in rows), default=0))
              for k in range(len(headers))]
    lines = ["  ".join(h.ljust(widths[k]) for k, h in enumerate(headers))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.ljust(widths[k]) for k, c in enumerate(row)))
    return "\n".join(line.rstrip() for line in lines) + "\n"
