"""CoNLL-U parsing, in-memory treebank representation, and serialization.

The representation is deliberately conservative: column values are stored
verbatim (no Unicode normalization, no placeholder stripping), comments are
opaque lines, and multiword-token / empty-node lines are kept as raw text so
that serialize(parse(x)) is byte-identical for files already in canonical
form (tab separators, '_' placeholders, one blank line after each sentence).
"""

import io
import re
from dataclasses import dataclass, field

from .errors import BadHead, BadId, ConlluParseError, MalformedLine

UNIVERSAL_UPOS = frozenset((
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
))

_RANGE_ID = re.compile(r"^\d+-\d+$")
_EMPTY_NODE_ID = re.compile(r"^\d+\.\d+$")
_PLAIN_ID = re.compile(r"^\d+$")


def is_universal_upos(tag: str) -> bool:
    """True for the 17 tags of the universal POS inventory."""
    return tag in UNIVERSAL_UPOS


def upos_kind(tag: str) -> str:
    """Classify a POS label: 'universal' for the 17 standard tags,
    'extension' for any other nonempty label (corpus-specific tags such as
    PINT or SUFN)."""
    if not tag:
        raise ValueError("empty POS label")
    return "universal" if tag in UNIVERSAL_UPOS else "extension"


def split_deprel(label: str) -> tuple[str, str | None]:
    """Split a relation label into (base, subtype).

    'aux:sgen' -> ('aux', 'sgen'); 'root' -> ('root', None). Only the first
    colon separates; the base must be nonempty.
    """
    base, sep, subtype = label.partition(":")
    if not base:
        raise ValueError(f"relation label {label!r} has an empty base")
    return base, (subtype if sep else None)


def join_deprel(base: str, subtype: str | None = None) -> str:
    if not base:
        raise ValueError("relation base must be nonempty")
    return base if subtype is None else f"{base}:{subtype}"


def deprel_base(label: str) -> str:
    return split_deprel(label)[0]


def parse_feats(text: str) -> tuple[tuple[str, str | None], ...]:
    """Parse a FEATS column into an ordered tuple of (key, value) pairs.

    '_' means no features. A chunk without '=' is kept as (chunk, None) so
    the original bytes can be reproduced.
    """
    if text == "_" or text == "":
        return ()
    pairs = []
    for chunk in text.split("|"):
        key, sep, value = chunk.partition("=")
        pairs.append((key, value if sep else None))
    return tuple(pairs)


def feats_to_text(feats: tuple[tuple[str, str | None], ...]) -> str:
    if not feats:
        return "_"
    return "|".join(k if v is None else f"{k}={v}" for k, v in feats)


def _col(value: str) -> str:
    return value if value != "" else "_"


@dataclass(frozen=True)
class Token:
    """One syntactic word: a 10-column CoNLL-U row.

    `head` 0 means attachment to the artificial root. `deps` and `misc` are
    stored verbatim and never interpreted.
    """

    id: int
    form: str
    lemma: str = "_"
    upos: str = "_"
    xpos: str = "_"
    feats: tuple[tuple[str, str | None], ...] = ()
    head: int = 0
    deprel: str = "_"
    deps: str = "_"
    misc: str = "_"

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"token id must be >= 1, got {self.id}")
        if self.head < 0:
            raise ValueError(f"token head must be >= 0, got {self.head}")

    @property
    def deprel_base(self) -> str:
        return self.deprel.partition(":")[0]

    @property
    def deprel_subtype(self) -> str | None:
        base, sep, subtype = self.deprel.partition(":")
        return subtype if sep else None

    def to_line(self) -> str:
        return "\t".join((
            str(self.id), _col(self.form), _col(self.lemma), _col(self.upos),
            _col(self.xpos), feats_to_text(self.feats), str(self.head),
            _col(self.deprel), _col(self.deps), _col(self.misc),
        ))


@dataclass(frozen=True)
class Sentence:
    """An ordered, nonempty token sequence plus its verbatim comment lines.

    `extras` holds multiword-token ("3-4") and empty-node ("3.1") lines as
    (tokens_seen_before, raw_line) pairs; they are reproduced in place on
    serialization but take no part in validation, statistics or training.
    """

    tokens: tuple[Token, ...]
    comments: tuple[str, ...] = ()
    extras: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("a sentence must contain at least one token")
        for pos, token in enumerate(self.tokens, start=1):
            if token.id != pos:
                raise ValueError(
                    f"token ids must be the sequence 1..n, found id {token.id} "
                    f"at position {pos}")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def sent_id(self) -> str | None:
        """Convenience lookup of the '# sent_id = ...' comment, if present."""
        for line in self.comments:
            body = line.lstrip("#").strip()
            if body.startswith("sent_id"):
                _, sep, value = body.partition("=")
                if sep:
                    return value.strip()
        return None

    def to_text(self) -> str:
        out = []
        for line in self.comments:
            out.append(line)
            out.append("\n")
        by_position: dict[int, list[str]] = {}
        for seen, raw in self.extras:
            by_position.setdefault(seen, []).append(raw)
        for k in range(len(self.tokens) + 1):
            for raw in by_position.get(k, ()):
                out.append(raw)
                out.append("\n")
            if k < len(self.tokens):
                out.append(self.tokens[k].to_line())
                out.append("\n")
        return "".join(out)


@dataclass(frozen=True)
class Treebank:
    """An ordered collection of sentences from one source."""

    sentences: tuple[Sentence, ...]
    source_name: str = ""

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    @property
    def root_count(self) -> int:
        """Number of head-0 tokens across the corpus. Reported alongside the
        sentence count; the two are equal only when every sentence carries
        exactly one root attachment."""
        return sum(1 for s in self.sentences for t in s.tokens if t.head == 0)


def parse_conllu(source, source_name: str = "") -> Treebank:
    """Parse CoNLL-U text (a string or a text stream) into a Treebank.

    Sentences are separated by blank lines; token lines have exactly 10
    tab-separated columns; '#' lines are comments and must precede the token
    lines of their sentence. Multiword-token and empty-node lines are
    preserved verbatim. Raises MalformedLine / BadId / BadHead with the
    offending 1-based line number.
    """
    if isinstance(source, str):
        source = io.StringIO(source)

    sentences: list[Sentence] = []
    comments: list[str] = []
    tokens: list[Token] = []
    extras: list[tuple[int, str]] = []

    def flush(line_no: int):
        nonlocal comments, tokens, extras
        if not tokens and not comments and not extras:
            return
        if not tokens:
            raise ConlluParseError("sentence block has no token lines", line_no)
        sentences.append(Sentence(tuple(tokens), tuple(comments), tuple(extras)))
        comments, tokens, extras = [], [], []

    line_no = 0
    for raw in source:
        line_no += 1
        line = raw.rstrip("\n")
        if line == "":
            flush(line_no)
            continue
        if line.startswith("#"):
            if tokens or extras:
                raise MalformedLine("comment line inside a token block", line_no)
            comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise MalformedLine(
                f"expected 10 tab-separated columns, got {len(cols)}", line_no)
        token_id = cols[0]
        if _RANGE_ID.match(token_id) or _EMPTY_NODE_ID.match(token_id):
            extras.append((len(tokens), line))
            continue
        if not _PLAIN_ID.match(token_id):
            raise BadId(f"token id {token_id!r} is not numeric", line_no)
        expected = len(tokens) + 1
        if int(token_id) != expected:
            raise BadId(
                f"token id {token_id} out of sequence (expected {expected})",
                line_no)
        head_text = cols[6]
        if not _PLAIN_ID.match(head_text):
            raise BadHead(
                f"head {head_text!r} is not a non-negative integer", line_no)
        tokens.append(Token(
            id=int(token_id), form=cols[1], lemma=cols[2], upos=cols[3],
            xpos=cols[4], feats=parse_feats(cols[5]), head=int(head_text),
            deprel=cols[7], deps=cols[8], misc=cols[9],
        ))
    flush(line_no + 1)
    return Treebank(tuple(sentences), source_name)


def load_conllu(path) -> Treebank:
    with open(path, encoding="utf-8") as handle:
        return parse_conllu(handle, source_name=str(path))


def serialize_conllu(treebank: Treebank) -> str:
    """Render a treebank back to CoNLL-U text, one blank line after each
    sentence. parse(serialize(tb)) == tb, and for canonical-form inputs the
    bytes match the original file exactly."""
    return "".join(sentence.to_text() + "\n" for sentence in treebank.sentences)


def save_conllu(treebank: Treebank, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(serialize_conllu(treebank))


def sentence_length(sentence: Sentence, include_punct: bool = True) -> int:
    """Token count of a sentence; with include_punct off, PUNCT tokens are
    left out (evaluation-style counting)."""
    if include_punct:
        return len(sentence.tokens)
    return sum(1 for t in sentence.tokens if t.upos != "PUNCT")
