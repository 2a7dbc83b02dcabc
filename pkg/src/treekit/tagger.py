"""Trainable POS tagger: an averaged structured perceptron decoded with
exact Viterbi search.

Feature templates cover the current form, its character affixes, the
neighbouring forms, and the two previous tags. Because a feature looks two
tags back, the search state is the pair of preceding tags; Viterbi over
those pair states is exact for this feature set (verified against
exhaustive enumeration in the test suite).
"""

import json
import unicodedata
from dataclasses import dataclass

from .conllu import Sentence, Treebank
from .errors import (EmptyTestSet, EmptyTrainingSet, UnsupportedAnnotation,
                     UntrainedModel)
from .perceptron import AveragedTable
from .rng import SplitMix64, shuffled

TEMPLATES = (
    "bias", "form", "lower", "pre1", "pre2", "pre3", "pre4",
    "suf1", "suf2", "suf3", "suf4", "has_digit", "has_punct",
    "prev_form", "next_form", "prev_tag", "prev2_tags",
)

BOS = "<s>"
EOS = "</s>"
MODEL_FORMAT = "pos-tagger-model"
MODEL_VERSION = "v1"


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def static_features(sentence: Sentence, i: int, mode: str = "lex") -> list[str]:
    """Features of position i (1-based) that do not look at tags. In delex
    mode every form is read as the '_' placeholder, so these collapse to
    uninformative constants."""
    tokens = sentence.tokens
    form = tokens[i - 1].form if mode == "lex" else "_"
    prev_form = BOS if i == 1 else (tokens[i - 2].form if mode == "lex" else "_")
    next_form = EOS if i == len(tokens) else (tokens[i].form if mode == "lex" else "_")
    feats = [
        "bias",
        f"form={form}",
        f"lower={form.lower()}",
    ]
    for k in range(1, min(4, len(form)) + 1):
        feats.append(f"pre{k}={form[:k]}")
        feats.append(f"suf{k}={form[-k:]}")
    if any(ch.isdigit() for ch in form):
        feats.append("has_digit")
    if any(_is_punct_char(ch) for ch in form):
        feats.append("has_punct")
    feats.append(f"prev_form={prev_form}")
    feats.append(f"next_form={next_form}")
    return feats


def extract_features(sentence: Sentence, i: int,
                     prev_tags: tuple[str, str] = (BOS, BOS),
                     mode: str = "lex") -> list[str]:
    """Full feature list for tagging position i given the last two tags
    (two-back, one-back); '<s>' stands in before the sentence start."""
    two_back, one_back = prev_tags
    feats = static_features(sentence, i, mode)
    feats.append(f"prev_tag={one_back}")
    feats.append(f"prev2_tags={two_back}|{one_back}")
    return feats


@dataclass
class TaggerModel:
    tagset: tuple[str, ...]
    weights: dict[str, tuple[float, ...]]
    averaged_weights: dict[str, tuple[float, ...]] | None
    templates: tuple[str, ...]
    meta: dict

    @property
    def trained(self) -> bool:
        return self.averaged_weights is not None


def sequence_score(sentence: Sentence, tags: list[str],
                   weights: dict[str, tuple[float, ...]],
                   tagset: tuple[str, ...], mode: str = "lex") -> float:
    """Score of a complete tag sequence under a weight table; the quantity
    Viterbi maximizes."""
    index = {tag: k for k, tag in enumerate(tagset)}
    total = 0.0
    for i in range(1, len(sentence.tokens) + 1):
        two_back = tags[i - 3] if i >= 3 else BOS
        one_back = tags[i - 2] if i >= 2 else BOS
        t = index[tags[i - 1]]
        for feature in extract_features(sentence, i, (two_back, one_back), mode):
            vector = weights.get(feature)
            if vector is not None:
                total += vector[t]
    return total


def _viterbi(sentence: Sentence, weights, tagset: tuple[str, ...],
             mode: str = "lex") -> list[str]:
    """Exact best tag sequence; ties go to the lower tag index (scanning
    order plus strict improvement)."""
    n = len(sentence.tokens)
    T = len(tagset)
    names = (BOS,) + tagset  # shifted context index: 0 is the boundary
    zeros = (0.0,) * T
    neg_inf = float("-inf")

    static = [None] * (n + 1)
    for i in range(1, n + 1):
        row = [0.0] * T
        for feature in static_features(sentence, i, mode):
            vector = weights.get(feature)
            if vector is not None:
                for t in range(T):
                    row[t] += vector[t]
        static[i] = row

    uni = [weights.get(f"prev_tag={name}", zeros) for name in names]
    bi = [[weights.get(f"prev2_tags={p2}|{p1}", zeros) for p1 in names]
          for p2 in names]

    # dp[x][y]: best score with previous tag x, current tag y (shifted by 1;
    # index 0 = boundary, so y >= 1 for real tags).
    dp = [[neg_inf] * (T + 1) for _ in range(T + 1)]
    back: list[list[list[int]]] = []
    s1, u0, b00 = static[1], uni[0], bi[0][0]
    for t in range(T):
        dp[0][t + 1] = s1[t] + u0[t] + b00[t]

    for i in range(2, n + 1):
        si = static[i]
        ndp = [[neg_inf] * (T + 1) for _ in range(T + 1)]
        nback = [[0] * (T + 1) for _ in range(T + 1)]
        for y in range(1, T + 1):
            uy = uni[y]
            by = bi  # bi[x][y]
            best_for_x = [(dp[x][y], x) for x in range(T + 1)]
            for t in range(T):
                best = neg_inf
                best_x = 0
                for prev_score, x in best_for_x:
                    if prev_score == neg_inf:
                        continue
                    cand = prev_score + by[x][y][t]
                    if cand > best:
                        best = cand
                        best_x = x
                if best == neg_inf:
                    continue
                ndp[y][t + 1] = best + si[t] + uy[t]
                nback[y][t + 1] = best_x
        dp = ndp
        back.append(nback)

    best = neg_inf
    best_xy = (0, 1)
    for x in range(T + 1):
        for y in range(1, T + 1):
            if dp[x][y] > best:
                best = dp[x][y]
                best_xy = (x, y)

    x, y = best_xy
    rev = [y]
    for nback in reversed(back):
        x, y = nback[x][y], x
        rev.append(y)
    return [tagset[s - 1] for s in reversed(rev)]


def _require_basic(sentence: Sentence) -> None:
    if sentence.extras:
        raise UnsupportedAnnotation(
            "sentence carries multiword-token or empty-node lines")


def train_tagger(train: Treebank, epochs: int = 10, seed: int = 1,
                 warm_start: TaggerModel | None = None, mode: str = "lex",
                 record_updates: bool = False) -> TaggerModel:
    """Averaged perceptron training.

    Each epoch visits the sentences in a freshly shuffled seeded order,
    decodes with the current weights, and on a mismatch adds +1 to the gold
    sequence's features and -1 to the predicted sequence's. The returned
    model carries both the final raw weights and their running average.
    With `warm_start`, training begins from that model's averaged weights
    and its tagset is extended with any tags unseen there.
    """
    if not train.sentences:
        raise EmptyTrainingSet("no training sentences")
    for sentence in train.sentences:
        _require_basic(sentence)

    tagset: list[str] = list(warm_start.tagset) if warm_start else []
    if warm_start and warm_start.templates != TEMPLATES:
        raise ValueError("warm-start model uses different feature templates")
    seen = set(tagset)
    for sentence in train.sentences:
        for token in sentence.tokens:
            if token.upos not in seen:
                seen.add(token.upos)
                tagset.append(token.upos)
    tags = tuple(tagset)
    index = {tag: k for k, tag in enumerate(tags)}

    table = AveragedTable(len(tags), record_updates=record_updates)
    if warm_start:
        if warm_start.averaged_weights is None:
            raise UntrainedModel("warm-start model has no averaged weights")
        table.set_initial(warm_start.averaged_weights)

    rng = SplitMix64(seed)
    for _ in range(epochs):
        for sentence in shuffled(train.sentences, rng):
            gold = [t.upos for t in sentence.tokens]
            pred = _viterbi(sentence, table.raw, tags, mode)
            if pred != gold:
                for i in range(1, len(gold) + 1):
                    g2 = gold[i - 3] if i >= 3 else BOS
                    g1 = gold[i - 2] if i >= 2 else BOS
                    p2 = pred[i - 3] if i >= 3 else BOS
                    p1 = pred[i - 2] if i >= 2 else BOS
                    for feature in extract_features(sentence, i, (g2, g1), mode):
                        table.update(feature, index[gold[i - 1]], +1.0)
                    for feature in extract_features(sentence, i, (p2, p1), mode):
                        table.update(feature, index[pred[i - 1]], -1.0)
            table.tick()

    sources = list(warm_start.meta.get("sources", [])) if warm_start else []
    sources.append(train.source_name or "unnamed")
    model = TaggerModel(
        tagset=tags,
        weights={f: tuple(v) for f, v in table.raw.items() if any(v)},
        averaged_weights=table.averaged(),
        templates=TEMPLATES,
        meta={"sources": sources, "epochs": epochs, "seed": seed, "mode": mode},
    )
    if record_updates:
        model.meta["update_log"] = table.update_log
        model.meta["update_steps"] = table.steps
        model.meta["initial_weights"] = (
            dict(warm_start.averaged_weights) if warm_start else {})
    return model


def tag(model: TaggerModel, sentence: Sentence) -> list[str]:
    """Viterbi-optimal tags under the averaged weights."""
    if model.averaged_weights is None:
        raise UntrainedModel("model has no averaged weights")
    _require_basic(sentence)
    mode = model.meta.get("mode", "lex")
    return _viterbi(sentence, model.averaged_weights, model.tagset, mode)


@dataclass(frozen=True)
class TagRow:
    label: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class PosEvalReport:
    accuracy: float
    per_tag: tuple[TagRow, ...]
    micro: tuple[float, float, float, int]
    macro: tuple[float, float, float, int]

    def to_tsv(self) -> str:
        lines = ["tag\tprecision\trecall\tf1\tn"]
        for row in self.per_tag:
            lines.append(f"{row.label}\t{row.precision:.4f}\t{row.recall:.4f}"
                         f"\t{row.f1:.4f}\t{row.support}")
        for name, row in (("micro avg", self.micro), ("macro avg", self.macro)):
            lines.append(f"{name}\t{row[0]:.4f}\t{row[1]:.4f}\t{row[2]:.4f}"
                         f"\t{row[3]}")
        return "\n".join(lines) + "\n"

    def render_table(self) -> str:
        width = max([len("macro avg")] + [len(r.label) for r in self.per_tag])
        header = f"{'POS':<{width}}  precision  recall  f1-score  {'n':>5}"
        lines = [header, "-" * len(header)]
        for row in self.per_tag:
            lines.append(f"{row.label:<{width}}  {row.precision:>9.4f}  "
                         f"{row.recall:>6.4f}  {row.f1:>8.4f}  {row.support:>5}")
        lines.append("-" * len(header))
        for name, row in (("micro avg", self.micro), ("macro avg", self.macro)):
            lines.append(f"{name:<{width}}  {row[0]:>9.4f}  {row[1]:>6.4f}  "
                         f"{row[2]:>8.4f}  {row[3]:>5}")
        return "\n".join(lines) + "\n"


def _prf(correct: int, predicted: int, gold: int) -> tuple[float, float, float]:
    precision = correct / predicted if predicted else 0.0
    recall = correct / gold if gold else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1


def evaluate_pos(model: TaggerModel, test: Treebank,
                 exclude_punct: bool = False) -> PosEvalReport:
    """Token accuracy plus per-tag precision/recall/F1 (0/0 counts as 0),
    micro average over tokens and macro average over gold-supported tags."""
    if not test.sentences:
        raise EmptyTestSet("no test sentences")
    pairs: list[tuple[str, str]] = []
    for sentence in test.sentences:
        predicted = tag(model, sentence)
        for token, ptag in zip(sentence.tokens, predicted):
            if exclude_punct and token.upos == "PUNCT":
                continue
            pairs.append((token.upos, ptag))
    return score_tag_pairs(pairs)


def score_tag_pairs(pairs: list[tuple[str, str]]) -> PosEvalReport:
    """Build a report from (gold, predicted) tag pairs."""
    if not pairs:
        raise EmptyTestSet("no scorable tokens")
    gold_counts: dict[str, int] = {}
    pred_counts: dict[str, int] = {}
    correct_counts: dict[str, int] = {}
    correct = 0
    for gold, pred in pairs:
        gold_counts[gold] = gold_counts.get(gold, 0) + 1
        pred_counts[pred] = pred_counts.get(pred, 0) + 1
        if gold == pred:
            correct += 1
            correct_counts[gold] = correct_counts.get(gold, 0) + 1

    labels = sorted(set(gold_counts) | set(pred_counts))
    rows = []
    for label in labels:
        p, r, f1 = _prf(correct_counts.get(label, 0),
                        pred_counts.get(label, 0), gold_counts.get(label, 0))
        rows.append(TagRow(label, p, r, f1, gold_counts.get(label, 0)))
    rows.sort(key=lambda row: (-row.support, row.label))

    total = len(pairs)
    accuracy = correct / total
    micro = (accuracy, accuracy, accuracy, total)
    supported = [row for row in rows if row.support > 0]
    macro = (
        sum(r.precision for r in supported) / len(supported),
        sum(r.recall for r in supported) / len(supported),
        sum(r.f1 for r in supported) / len(supported),
        total,
    )
    return PosEvalReport(accuracy, tuple(rows), micro, macro)


def save_tagger(model: TaggerModel, path) -> None:
    """Flat text format: header lines, then one feature/tag/weight line per
    nonzero averaged weight."""
    if model.averaged_weights is None:
        raise UntrainedModel("refusing to save an untrained model")
    meta = {k: v for k, v in model.meta.items()
            if k in ("sources", "epochs", "seed", "mode")}
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{MODEL_FORMAT}\t{MODEL_VERSION}\n")
        handle.write("templates\t" + ",".join(model.templates) + "\n")
        handle.write("tagset\t" + ",".join(model.tagset) + "\n")
        handle.write("meta\t" + json.dumps(meta, sort_keys=True) + "\n")
        for feature in sorted(model.averaged_weights):
            vector = model.averaged_weights[feature]
            for t, weight in enumerate(vector):
                if weight != 0.0:
                    handle.write(f"{feature}\t{model.tagset[t]}\t{weight!r}\n")


def load_tagger(path) -> TaggerModel:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n").split("\t")
        if header[:1] != [MODEL_FORMAT] or len(header) != 2:
            raise ValueError(f"not a {MODEL_FORMAT} file: {path}")
        if header[1] != MODEL_VERSION:
            raise ValueError(f"unsupported model version {header[1]}")
        templates = tuple(handle.readline().rstrip("\n").split("\t")[1].split(","))
        tagset = tuple(handle.readline().rstrip("\n").split("\t")[1].split(","))
        meta = json.loads(handle.readline().rstrip("\n").split("\t", 1)[1])
        index = {tag: k for k, tag in enumerate(tagset)}
        weights: dict[str, list[float]] = {}
        for line in handle:
            feature, tag_label, weight = line.rstrip("\n").split("\t")
            vector = weights.setdefault(feature, [0.0] * len(tagset))
            vector[index[tag_label]] = float(weight)
    frozen = {f: tuple(v) for f, v in weights.items()}
    return TaggerModel(tagset=tagset, weights=dict(frozen),
                       averaged_weights=frozen, templates=templates, meta=meta)
