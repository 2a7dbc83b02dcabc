"""Graph-based dependency parser: arc-factored scoring, maximum spanning
arborescence decoding (Chu-Liu/Edmonds), and a perceptron relation labeler.

Decoding is non-projective and enforces exactly one attachment to the
artificial root by charging every root arc a penalty larger than any
possible score difference between trees, so trees with fewer root arcs
always win and the best single-root tree is returned.
"""

import json
from dataclasses import dataclass, replace

from .conllu import Sentence, Token, Treebank
from .errors import (AlignmentMismatch, EmptyTrainingSet, NonTreeInput,
                     UnsupportedAnnotation, UntrainedModel)
from .perceptron import AveragedTable
from .prep import delexicalize
from .rng import SplitMix64, shuffled
from .validation import validate_tree

ROOT_SYMBOL = "<root>"
BOS = "<s>"
EOS = "</s>"
MODEL_FORMAT = "dep-parser-model"
MODEL_VERSION = "v1"

ARC_TEMPLATES = ("hf", "df", "hu", "du", "hu|du", "dist", "between",
                 "hu-1", "hu+1", "du-1", "du+1")
LABEL_TEMPLATES = ("hu", "du", "hf", "df", "dir", "dist")


def distance_bin(delta: int) -> str:
    """Signed, binned linear distance: exact up to 4, then 5-9 and 10+."""
    sign = "+" if delta > 0 else "-"
    m = abs(delta)
    if m <= 4:
        bucket = m
    elif m <= 9:
        bucket = 5
    else:
        bucket = 10
    return f"{sign}{bucket}"


def _upos_at(tokens, position: int) -> str:
    if position < 0:
        return BOS
    if position == 0:
        return ROOT_SYMBOL
    if position > len(tokens):
        return EOS
    return tokens[position - 1].upos


def arc_features(sentence: Sentence, head: int, dep: int) -> list[str]:
    """Features of a candidate arc head -> dep (positions 0..n and 1..n).

    Forms and POS of both endpoints, the POS pair, signed binned distance,
    the bag of POS between the endpoints, and the POS adjacent to each
    endpoint. Forms are read from the sentence as given, so a model trained
    on delexicalized data simply finds no weights for real-form features.
    """
    tokens = sentence.tokens
    hf = ROOT_SYMBOL if head == 0 else tokens[head - 1].form
    hu = ROOT_SYMBOL if head == 0 else tokens[head - 1].upos
    dtok = tokens[dep - 1]
    feats = [
        f"hf={hf}",
        f"df={dtok.form}",
        f"hu={hu}",
        f"du={dtok.upos}",
        f"hu|du={hu}|{dtok.upos}",
        f"dist={distance_bin(dep - head)}",
    ]
    lo, hi = (head, dep) if head < dep else (dep, head)
    for k in range(lo + 1, hi):
        feats.append(f"between={tokens[k - 1].upos}")
    feats.append(f"hu-1={_upos_at(tokens, head - 1)}")
    feats.append(f"hu+1={_upos_at(tokens, head + 1)}")
    feats.append(f"du-1={_upos_at(tokens, dep - 1)}")
    feats.append(f"du+1={_upos_at(tokens, dep + 1)}")
    return feats


def label_features(sentence: Sentence, head: int, dep: int) -> list[str]:
    tokens = sentence.tokens
    hf = ROOT_SYMBOL if head == 0 else tokens[head - 1].form
    hu = ROOT_SYMBOL if head == 0 else tokens[head - 1].upos
    dtok = tokens[dep - 1]
    return [
        f"hu={hu}",
        f"du={dtok.upos}",
        f"hf={hf}",
        f"df={dtok.form}",
        f"dir={'R' if dep > head else 'L'}",
        f"dist={distance_bin(dep - head)}",
    ]


@dataclass(frozen=True)
class ArcScores:
    """Score matrix over candidate arcs: rows are heads 0..n, columns are
    dependents 1..n; the h == d diagonal is undefined."""

    n: int
    rows: tuple[tuple[float, ...], ...]

    def get(self, head: int, dep: int) -> float:
        if head == dep:
            raise ValueError("self-arcs are undefined")
        return self.rows[head][dep - 1]

    @classmethod
    def build(cls, n: int, score) -> "ArcScores":
        rows = tuple(
            tuple(score(h, d) if h != d else 0.0 for d in range(1, n + 1))
            for h in range(n + 1))
        return cls(n, rows)


@dataclass
class ParserModel:
    label_inventory: tuple[str, ...]
    arc_weights: dict[str, float]
    label_weights: dict[str, tuple[float, ...]]
    mode: str
    meta: dict

    @property
    def trained(self) -> bool:
        return self.arc_weights is not None


def _require_basic(sentence: Sentence) -> None:
    if sentence.extras:
        raise UnsupportedAnnotation(
            "sentence carries multiword-token or empty-node lines")


def score_arcs(model: ParserModel, sentence: Sentence) -> ArcScores:
    """Averaged-weight score for every candidate arc of the sentence."""
    if model.arc_weights is None:
        raise UntrainedModel("model has no averaged weights")
    _require_basic(sentence)
    weights = model.arc_weights

    def score(h, d):
        return sum(weights.get(f, 0.0) for f in arc_features(sentence, h, d))

    return ArcScores.build(len(sentence.tokens), score)


def _find_cycle(best_in: dict[int, int], root: int):
    color = dict.fromkeys(best_in, 0)
    for start in sorted(best_in):
        if color[start]:
            continue
        path = []
        node = start
        while node != root and color.get(node, 2) == 0:
            color[node] = 1
            path.append(node)
            node = best_in[node]
        if node != root and color.get(node) == 1:
            return path[path.index(node):]
        for visited in path:
            color[visited] = 2
    return None


def _max_arborescence(nodes: list[int], scores: dict, root: int) -> dict[int, int]:
    """Chu-Liu/Edmonds with deterministic ties: candidates are scanned in
    ascending node order and only strict improvements replace the incumbent,
    so smaller head indices win. Returns dep -> head."""
    best_in: dict[int, int] = {}
    for dep in nodes:
        if dep == root:
            continue
        best_head = None
        best_score = None
        for head in nodes:
            if head == dep:
                continue
            s = scores.get((head, dep))
            if s is None:
                continue
            if best_score is None or s > best_score:
                best_score = s
                best_head = head
        if best_head is None:
            raise ValueError(f"node {dep} has no incoming arcs")
        best_in[dep] = best_head

    cycle = _find_cycle(best_in, root)
    if cycle is None:
        return best_in

    cycle = sorted(cycle)
    cycle_set = set(cycle)
    contracted = max(nodes) + 1
    cycle_arc_score = {d: scores[(best_in[d], d)] for d in cycle}

    new_nodes = [n for n in nodes if n not in cycle_set] + [contracted]
    new_scores: dict[tuple[int, int], float] = {}
    enter_via: dict[int, int] = {}
    leave_via: dict[int, int] = {}

    for h in new_nodes[:-1]:
        best = None
        for d in cycle:
            s = scores.get((h, d))
            if s is None:
                continue
            gain = s - cycle_arc_score[d]
            if best is None or gain > best:
                best = gain
                enter_via[h] = d
        if best is not None:
            new_scores[(h, contracted)] = best

    for d in new_nodes[:-1]:
        if d == root:
            continue
        best = None
        for h in cycle:
            s = scores.get((h, d))
            if s is None:
                continue
            if best is None or s > best:
                best = s
                leave_via[d] = h
        if best is not None:
            new_scores[(contracted, d)] = best

    for h in new_nodes[:-1]:
        for d in new_nodes[:-1]:
            if d == root or h == d:
                continue
            s = scores.get((h, d))
            if s is not None:
                new_scores[(h, d)] = s

    inner = _max_arborescence(new_nodes, new_scores, root)

    heads: dict[int, int] = {}
    entry_head = inner.pop(contracted)
    entry_dep = enter_via[entry_head]
    heads[entry_dep] = entry_head
    for d in cycle:
        if d != entry_dep:
            heads[d] = best_in[d]
    for d, h in inner.items():
        heads[d] = leave_via[d] if h == contracted else h
    return heads


def decode_mst(scores: ArcScores) -> tuple[int, ...]:
    """Best single-root arborescence under the score matrix; position d's
    head is element d-1 of the result."""
    n = scores.n
    if n == 0:
        return ()
    if n == 1:
        return (0,)
    total_abs = sum(abs(scores.get(h, d))
                    for h in range(n + 1) for d in range(1, n + 1) if h != d)
    penalty = 2.0 * total_abs + 1.0
    table = {}
    for d in range(1, n + 1):
        for h in range(n + 1):
            if h == d:
                continue
            s = scores.get(h, d)
            table[(h, d)] = s - penalty if h == 0 else s
    heads = _max_arborescence(list(range(n + 1)), table, 0)
    return tuple(heads[d] for d in range(1, n + 1))


def train_parser(train: Treebank, epochs: int = 10, seed: int = 1,
                 mode: str = "lex", record_updates: bool = False) -> ParserModel:
    """Structured perceptron over arcs plus a multiclass perceptron labeler,
    both averaged, trained in one pass. In delex mode the trainer works on a
    delexicalized copy of the corpus, so all learned form features are for
    the '_' placeholder."""
    if not train.sentences:
        raise EmptyTrainingSet("no training sentences")
    if mode not in ("lex", "delex"):
        raise ValueError(f"mode must be 'lex' or 'delex', got {mode!r}")
    for index, sentence in enumerate(train.sentences):
        _require_basic(sentence)
        problems = validate_tree(sentence, index)
        if problems:
            raise NonTreeInput(
                f"training sentence {index} is not a valid tree: "
                f"{problems[0].message}")
    data = delexicalize(train) if mode == "delex" else train

    labels: list[str] = []
    seen = set()
    for sentence in data.sentences:
        for token in sentence.tokens:
            if token.deprel not in seen:
                seen.add(token.deprel)
                labels.append(token.deprel)
    label_list = tuple(labels)
    label_index = {label: k for k, label in enumerate(label_list)}

    arc_table = AveragedTable(1, record_updates=record_updates)
    label_table = AveragedTable(len(label_list), record_updates=record_updates)
    arc_raw = arc_table.raw

    rng = SplitMix64(seed)
    for _ in range(epochs):
        for sentence in shuffled(data.sentences, rng):
            n = len(sentence.tokens)
            feature_cache = {}

            def feats(h, d):
                key = (h, d)
                if key not in feature_cache:
                    feature_cache[key] = arc_features(sentence, h, d)
                return feature_cache[key]

            def raw_score(h, d):
                total = 0.0
                for f in feats(h, d):
                    vector = arc_raw.get(f)
                    if vector is not None:
                        total += vector[0]
                return total

            gold_heads = tuple(t.head for t in sentence.tokens)
            pred_heads = decode_mst(ArcScores.build(n, raw_score))
            for d in range(1, n + 1):
                g, p = gold_heads[d - 1], pred_heads[d - 1]
                if g != p:
                    for f in feats(g, d):
                        arc_table.update(f, 0, +1.0)
                    for f in feats(p, d):
                        arc_table.update(f, 0, -1.0)

            for token in sentence.tokens:
                lf = label_features(sentence, token.head, token.id)
                predicted = _argmax(label_table.score(lf))
                gold = label_index[token.deprel]
                if predicted != gold:
                    for f in lf:
                        label_table.update(f, gold, +1.0)
                        label_table.update(f, predicted, -1.0)

            arc_table.tick()
            label_table.tick()

    model = ParserModel(
        label_inventory=label_list,
        arc_weights={f: v[0] for f, v in arc_table.averaged().items()},
        label_weights=label_table.averaged(),
        mode=mode,
        meta={"sources": [train.source_name or "unnamed"], "epochs": epochs,
              "seed": seed},
    )
    if record_updates:
        model.meta["arc_update_log"] = arc_table.update_log
        model.meta["arc_update_steps"] = arc_table.steps
    return model


def _argmax(values) -> int:
    best = 0
    for k in range(1, len(values)):
        if values[k] > values[best]:
            best = k
    return best


def parse(model: ParserModel, sentence: Sentence) -> tuple[tuple[int, ...], tuple[str, ...]]:
    """Decode heads with the MST decoder, then pick each arc's relation label
    with the averaged labeler (ties to the lower label index)."""
    heads = decode_mst(score_arcs(model, sentence))
    labels = []
    width = len(model.label_inventory)
    for d, head in enumerate(heads, start=1):
        totals = [0.0] * width
        for f in label_features(sentence, head, d):
            vector = model.label_weights.get(f)
            if vector is not None:
                for k in range(width):
                    totals[k] += vector[k]
        labels.append(model.label_inventory[_argmax(totals)])
    return heads, tuple(labels)


def parse_treebank(model: ParserModel, treebank: Treebank) -> Treebank:
    """Re-head and re-label every sentence; all other columns are kept."""
    sentences = []
    for sentence in treebank.sentences:
        heads, labels = parse(model, sentence)
        tokens = tuple(
            replace(token, head=heads[k], deprel=labels[k])
            for k, token in enumerate(sentence.tokens))
        sentences.append(Sentence(tokens, sentence.comments, sentence.extras))
    return Treebank(tuple(sentences), treebank.source_name)


@dataclass(frozen=True)
class DepEvalReport:
    uas: float
    las: float
    token_count: int
    per_label: dict[str, tuple[int, int, int]]  # gold n, head ok, head+label ok

    def to_tsv(self) -> str:
        return (f"uas\t{self.uas:.4f}\nlas\t{self.las:.4f}\n"
                f"tokens\t{self.token_count}\n")

    def render_table(self) -> str:
        lines = [
            f"tokens scored : {self.token_count}",
            f"UAS           : {self.uas:.4f}",
            f"LAS           : {self.las:.4f}",
            "",
            "label                 gold  head-ok  head+label-ok",
        ]
        for label in sorted(self.per_label):
            gold, head_ok, both_ok = self.per_label[label]
            lines.append(f"{label:<20}  {gold:>4}  {head_ok:>7}  {both_ok:>13}")
        return "\n".join(lines) + "\n"


def evaluate_dep(pred: Treebank, gold: Treebank,
                 exclude_punct: bool = False) -> DepEvalReport:
    """UAS (head match) and LAS (head plus full relation label match) over
    aligned treebanks; optionally drop gold-PUNCT tokens from the
    denominator."""
    if len(pred.sentences) != len(gold.sentences):
        raise AlignmentMismatch(
            f"{len(pred.sentences)} predicted vs {len(gold.sentences)} gold "
            "sentences")
    total = 0
    head_ok = 0
    both_ok = 0
    per_label: dict[str, list[int]] = {}
    for k, (ps, gs) in enumerate(zip(pred.sentences, gold.sentences)):
        if len(ps.tokens) != len(gs.tokens):
            raise AlignmentMismatch(f"sentence {k}: token counts differ")
        for pt, gt in zip(ps.tokens, gs.tokens):
            if exclude_punct and gt.upos == "PUNCT":
                continue
            total += 1
            row = per_label.setdefault(gt.deprel, [0, 0, 0])
            row[0] += 1
            if pt.head == gt.head:
                head_ok += 1
                row[1] += 1
                if pt.deprel == gt.deprel:
                    both_ok += 1
                    row[2] += 1
    uas = head_ok / total if total else 0.0
    las = both_ok / total if total else 0.0
    return DepEvalReport(uas, las, total,
                         {k: tuple(v) for k, v in per_label.items()})


def save_parser(model: ParserModel, path) -> None:
    if model.arc_weights is None:
        raise UntrainedModel("refusing to save an untrained model")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{MODEL_FORMAT}\t{MODEL_VERSION}\n")
        handle.write("arc-templates\t" + ",".join(ARC_TEMPLATES) + "\n")
        handle.write("label-templates\t" + ",".join(LABEL_TEMPLATES) + "\n")
        handle.write("labels\t" + ",".join(model.label_inventory) + "\n")
        handle.write("mode\t" + model.mode + "\n")
        meta = {k: v for k, v in model.meta.items()
                if k in ("sources", "epochs", "seed")}
        handle.write("meta\t" + json.dumps(meta, sort_keys=True) + "\n")
        for feature in sorted(model.arc_weights):
            weight = model.arc_weights[feature]
            if weight != 0.0:
                handle.write(f"arc\t{feature}\t{weight!r}\n")
        for feature in sorted(model.label_weights):
            vector = model.label_weights[feature]
            for k, weight in enumerate(vector):
                if weight != 0.0:
                    handle.write(
                        f"label\t{feature}\t{model.label_inventory[k]}\t{weight!r}\n")


def load_parser(path) -> ParserModel:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n").split("\t")
        if header[:1] != [MODEL_FORMAT] or len(header) != 2:
            raise ValueError(f"not a {MODEL_FORMAT} file: {path}")
        if header[1] != MODEL_VERSION:
            raise ValueError(f"unsupported model version {header[1]}")
        handle.readline()  # arc templates, informational
        handle.readline()  # label templates, informational
        labels = tuple(handle.readline().rstrip("\n").split("\t")[1].split(","))
        mode = handle.readline().rstrip("\n").split("\t")[1]
        meta = json.loads(handle.readline().rstrip("\n").split("\t", 1)[1])
        index = {label: k for k, label in enumerate(labels)}
        arc_weights: dict[str, float] = {}
        label_weights: dict[str, list[float]] = {}
        for line in handle:
            parts = line.rstrip("\n").split("\t")
            if parts[0] == "arc":
                arc_weights[parts[1]] = float(parts[2])
            elif parts[0] == "label":
                vector = label_weights.setdefault(parts[1], [0.0] * len(labels))
                vector[index[parts[2]]] = float(parts[3])
            else:
                raise ValueError(f"unrecognized weight line: {line!r}")
    return ParserModel(
        label_inventory=labels, arc_weights=arc_weights,
        label_weights={f: tuple(v) for f, v in label_weights.items()},
        mode=mode, meta=meta)
