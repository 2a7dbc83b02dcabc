"""Data-side preprocessing: seeded corpus splitting, delexicalization, and
relation-label harmonization across treebanks."""

from dataclasses import dataclass, replace
from fractions import Fraction

from .conllu import Sentence, Token, Treebank
from .errors import TooFewSentences
from .rng import SplitMix64, shuffled


@dataclass(frozen=True)
class SplitSpec:
    """Train/dev/test ratios (exact rationals summing to 1) and a shuffle
    seed."""

    ratios: tuple[Fraction, Fraction, Fraction]
    seed: int = 0

    def __post_init__(self):
        if len(self.ratios) != 3:
            raise ValueError("exactly three ratios are required")
        if any(r < 0 for r in self.ratios):
            raise ValueError("ratios must be non-negative")
        if sum(self.ratios) != 1:
            raise ValueError(f"ratios must sum to 1, got {sum(self.ratios)}")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "SplitSpec":
        """Build a spec from a shares string such as '60/20/20' or '8/1/1';
        shares are normalized by their sum."""
        try:
            shares = [int(part) for part in text.split("/")]
        except ValueError:
            raise ValueError(f"cannot parse ratios {text!r}") from None
        if len(shares) != 3:
            raise ValueError(f"expected three '/'-separated shares, got {text!r}")
        total = sum(shares)
        if total <= 0:
            raise ValueError("shares must sum to a positive value")
        return cls(tuple(Fraction(s, total) for s in shares), seed)


def split(treebank: Treebank, spec: SplitSpec) -> tuple[Treebank, Treebank, Treebank]:
    """Shuffle sentences with a Fisher-Yates permutation driven by the
    splitmix64 stream seeded from the spec, then cut by count: dev and test
    take floor(n * ratio) sentences each and every remainder sentence goes
    to train. The same seed always produces the same three treebanks.
    """
    n = len(treebank.sentences)
    if n < 3:
        raise TooFewSentences(f"cannot split {n} sentence(s) three ways")
    order = shuffled(treebank.sentences, SplitMix64(spec.seed))
    n_dev = int(n * spec.ratios[1])
    n_test = int(n * spec.ratios[2])
    n_train = n - n_dev - n_test
    name = treebank.source_name
    return (
        Treebank(tuple(order[:n_train]), f"{name}.train" if name else "train"),
        Treebank(tuple(order[n_train:n_train + n_dev]), f"{name}.dev" if name else "dev"),
        Treebank(tuple(order[n_train + n_dev:]), f"{name}.test" if name else "test"),
    )


def _delex_token(token: Token) -> Token:
    return replace(token, form="_", lemma="_")


def delexicalize(treebank: Treebank) -> Treebank:
    """Replace every form and lemma with the '_' placeholder, leaving POS,
    features and the tree untouched. Idempotent."""
    sentences = tuple(
        Sentence(tuple(_delex_token(t) for t in s.tokens), s.comments, s.extras)
        for s in treebank.sentences)
    return Treebank(sentences, treebank.source_name)


def harmonize_labels(treebank: Treebank, mode: str = "strip_subtypes") -> Treebank:
    """Map relation labels to a shared inventory. 'strip_subtypes' reduces
    every label to its base (aux:sgen -> aux, nsubj:bound -> nsubj), making
    differently subtyped treebanks comparable; 'identity' is a no-op."""
    if mode == "identity":
        return treebank
    if mode != "strip_subtypes":
        raise ValueError(f"unknown harmonization mode {mode!r}")
    sentences = tuple(
        Sentence(
            tuple(replace(t, deprel=t.deprel_base) for t in s.tokens),
            s.comments, s.extras)
        for s in treebank.sentences)
    return Treebank(sentences, treebank.source_name)
