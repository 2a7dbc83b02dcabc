"""Corpus statistics: label distributions, split tables, utterance lengths.

Machine output reports frequencies to 4 decimals; table rendering rounds to
2, the precision used in the treebank release notes.
"""

import math
from dataclasses import dataclass

from .conllu import Treebank, sentence_length
from .errors import EmptyCorpus


@dataclass(frozen=True)
class DistributionRow:
    label: str
    count: int
    freq: float


@dataclass(frozen=True)
class LengthStats:
    mean: float
    sd: float
    max: int
    histogram: dict[int, int]

    @property
    def sentence_count(self) -> int:
        return sum(self.histogram.values())


@dataclass(frozen=True)
class SplitTable:
    """Per-label counts across named corpus parts, plus a totals row."""

    key: str
    part_names: tuple[str, ...]
    rows: tuple[tuple[str, tuple[int, ...]], ...]
    totals: tuple[int, ...]

    def to_tsv(self) -> str:
        lines = ["\t".join((self.key,) + self.part_names)]
        for label, counts in self.rows:
            lines.append("\t".join((label,) + tuple(str(c) for c in counts)))
        lines.append("\t".join(("total",) + tuple(str(c) for c in self.totals)))
        return "\n".join(lines) + "\n"


def _distribution(treebank: Treebank, key) -> list[DistributionRow]:
    if not treebank.sentences:
        raise EmptyCorpus(f"no sentences in {treebank.source_name or 'treebank'}")
    counts: dict[str, int] = {}
    for sentence in treebank.sentences:
        for token in sentence.tokens:
            label = key(token)
            counts[label] = counts.get(label, 0) + 1
    total = sum(counts.values())
    return [DistributionRow(label, count, count / total)
            for label, count in sorted(counts.items())]


def upos_distribution(treebank: Treebank) -> list[DistributionRow]:
    """One row per POS tag present, sorted by label; counts sum to the token
    total and frequencies to 1."""
    return _distribution(treebank, lambda t: t.upos)


def deprel_distribution(treebank: Treebank) -> list[DistributionRow]:
    """As upos_distribution, keyed by the full relation label."""
    return _distribution(treebank, lambda t: t.deprel)


def length_stats(treebank: Treebank, include_punct: bool = True) -> LengthStats:
    """Mean, sample standard deviation (n-1), maximum and histogram of
    sentence lengths."""
    if not treebank.sentences:
        raise EmptyCorpus(f"no sentences in {treebank.source_name or 'treebank'}")
    lengths = [sentence_length(s, include_punct) for s in treebank.sentences]
    n = len(lengths)
    mean = sum(lengths) / n
    sd = 0.0
    if n > 1:
        sd = math.sqrt(sum((x - mean) ** 2 for x in lengths) / (n - 1))
    histogram: dict[int, int] = {}
    for length in lengths:
        histogram[length] = histogram.get(length, 0) + 1
    return LengthStats(mean, sd, max(lengths), histogram)


def split_distribution(parts: dict[str, Treebank], key: str = "upos") -> SplitTable:
    """Label-by-part count table over named corpus parts (training/dev/test
    style), with a totals row. `key` selects upos or deprel counting."""
    if not parts:
        raise ValueError("at least one named part is required")
    if key not in ("upos", "deprel"):
        raise ValueError(f"key must be 'upos' or 'deprel', got {key!r}")
    pick = (lambda t: t.upos) if key == "upos" else (lambda t: t.deprel)

    names = tuple(parts)
    per_part: list[dict[str, int]] = []
    for name in names:
        counts: dict[str, int] = {}
        for sentence in parts[name].sentences:
            for token in sentence.tokens:
                label = pick(token)
                counts[label] = counts.get(label, 0) + 1
        per_part.append(counts)

    labels = sorted(set().union(*per_part)) if per_part else []
    rows = tuple((label, tuple(c.get(label, 0) for c in per_part))
                 for label in labels)
    totals = tuple(sum(c.values()) for c in per_part)
    return SplitTable(key, names, rows, totals)


def distribution_tsv(rows: list[DistributionRow]) -> str:
    lines = ["label\tn\tfreq"]
    for row in rows:
        lines.append(f"{row.label}\t{row.count}\t{row.freq:.4f}")
    return "\n".join(lines) + "\n"


def distribution_table(rows: list[DistributionRow]) -> str:
    width = max(len("label"), max((len(r.label) for r in rows), default=0))
    lines = [f"{'label':<{width}}  {'n':>6}  freq"]
    for row in rows:
        lines.append(f"{row.label:<{width}}  {row.count:>6}  {row.freq:.2f}")
    total = sum(r.count for r in rows)
    lines.append(f"{'total':<{width}}  {total:>6}  1.00")
    return "\n".join(lines) + "\n"


def length_tsv(stats: LengthStats) -> str:
    lines = [
        f"# sentences\t{stats.sentence_count}",
        f"# mean\t{stats.mean:.4f}",
        f"# sd\t{stats.sd:.4f}",
        f"# max\t{stats.max}",
        "length\tcount",
    ]
    for length in sorted(stats.histogram):
        lines.append(f"{length}\t{stats.histogram[length]}")
    return "\n".join(lines) + "\n"
