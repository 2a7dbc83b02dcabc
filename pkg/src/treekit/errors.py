"""Exception types shared across the toolkit."""


class TreekitError(Exception):
    """Base class for all toolkit errors."""


class ConlluParseError(TreekitError):
    """A CoNLL-U input could not be parsed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class MalformedLine(ConlluParseError):
    """A token line does not have exactly 10 tab-separated columns."""


class BadId(ConlluParseError):
    """A token id is non-numeric or out of sequence."""


class BadHead(ConlluParseError):
    """A head field is not a non-negative integer."""


class UnsupportedAnnotation(TreekitError):
    """A sentence carries multiword-token or empty-node lines, which the
    trainers and decoders do not model."""


class EmptyCorpus(TreekitError):
    """A statistic was requested over a treebank with no sentences."""


class TooFewSentences(TreekitError):
    """A treebank is too small to split."""


class EmptyTrainingSet(TreekitError):
    """Training was requested on an empty treebank."""


class EmptyTestSet(TreekitError):
    """Evaluation was requested on an empty treebank."""


class UntrainedModel(TreekitError):
    """A model without averaged weights was asked to predict."""


class NonTreeInput(TreekitError):
    """A training sentence is not a single-rooted tree."""


class AlignmentMismatch(TreekitError):
    """Predicted and gold treebanks do not line up sentence by sentence."""


class MissingCorpus(TreekitError):
    """An experiment referenced a corpus that was not supplied."""
