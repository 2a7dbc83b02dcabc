"""Tree well-formedness checks, schema-profile conformance, and the
Kakataibo-specific direction lints.

Problems are reported as Diagnostic values, never raised: a sentence with a
broken tree yields error diagnostics, a sentence using labels outside the
active profile yields warnings (or errors under a strict profile).
"""

from dataclasses import dataclass, replace

from .conllu import Sentence, Treebank

ERROR = "error"
WARNING = "warning"

# The closed set of diagnostic codes.
HEAD_OUT_OF_RANGE = "head-out-of-range"
NO_ROOT = "no-root"
MULTIPLE_ROOTS = "multiple-roots"
ROOT_LABEL = "root-label"
STRAY_ROOT_LABEL = "stray-root-label"
CYCLE = "cycle"
UNKNOWN_UPOS = "unknown-upos"
UNKNOWN_DEPREL = "unknown-deprel"
ENCLITIC_DIRECTION = "enclitic-direction"
AUXVERB_DIRECTION = "auxverb-direction"
BOUND_SUBJECT_POS = "bound-subject-pos"

DIAGNOSTIC_CODES = frozenset((
    HEAD_OUT_OF_RANGE, NO_ROOT, MULTIPLE_ROOTS, ROOT_LABEL, STRAY_ROOT_LABEL,
    CYCLE, UNKNOWN_UPOS, UNKNOWN_DEPREL, ENCLITIC_DIRECTION,
    AUXVERB_DIRECTION, BOUND_SUBJECT_POS,
))


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    sentence_index: int = 0
    token_id: int | None = None

    def to_line(self) -> str:
        token = "" if self.token_id is None else str(self.token_id)
        return "\t".join((self.severity, self.code, str(self.sentence_index),
                          token, self.message))


@dataclass(frozen=True)
class SchemaProfile:
    """Allowed POS and relation labels for one treebank.

    `allowed_deprels` holds full labels (subtype included). With
    `subtyped_variants_ok`, a label is also accepted when its base alone is
    listed; the generic profile uses this since universal guidelines leave
    subtypes open-ended.
    """

    name: str
    allowed_upos: frozenset[str]
    allowed_deprels: frozenset[str]
    strict: bool = False
    subtyped_variants_ok: bool = False

    def allows_deprel(self, label: str) -> bool:
        if label in self.allowed_deprels:
            return True
        if self.subtyped_variants_ok:
            return label.partition(":")[0] in self.allowed_deprels
        return False


# 15 POS tags and 32 relation labels (27 universal bases) attested in the
# Kakataibo treebank.
KAKATAIBO_UPOS = frozenset((
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "VERB",
))

KAKATAIBO_DEPRELS = frozenset((
    "advcl", "advmod", "amod", "appos", "aux", "aux:dub", "aux:ev",
    "aux:int", "aux:sgen", "case", "cc", "ccomp", "compound", "conj", "cop",
    "csubj", "det", "discourse", "dislocated", "flat", "iobj", "list",
    "nmod", "nsubj:bound", "nsubj:free", "nummod", "obj", "obl", "parataxis",
    "punct", "root", "vocative",
))

# Labels attested in the Shipibo-Konibo treebank, corpus-specific values
# (PINT, SUFN, Lfcl, ...) included verbatim.
SHIPIBO_UPOS = frozenset((
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PINT", "PRON", "PROPN", "PUNCT", "SCONJ", "SUFN", "SUFV",
    "SYM", "VERB", "VERB_AUX", "X",
))

SHIPIBO_DEPRELS = frozenset((
    "acl", "advcl", "advmod", "amod", "appos", "aux", "aux:val", "case",
    "cc", "ccomp", "compound", "conj", "cop", "det", "discourse", "flat",
    "iobj", "Lfcl", "marker", "nmod", "nsubj", "nummod", "obj", "obl",
    "punct", "root", "vocative", "x", "xcomp",
))

# The 37 universal relations; the generic profile accepts any subtype of
# these.
UNIVERSAL_DEPRELS = frozenset((
    "acl", "advcl", "advmod", "amod", "appos", "aux", "case", "cc", "ccomp",
    "clf", "compound", "conj", "cop", "csubj", "dep", "det", "discourse",
    "dislocated", "expl", "fixed", "flat", "goeswith", "iobj", "list",
    "mark", "nmod", "nsubj", "nummod", "obj", "obl", "orphan", "parataxis",
    "punct", "reparandum", "root", "vocative", "xcomp",
))

_UNIVERSAL_UPOS = frozenset((
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
))

_BUILTIN = {
    "kakataibo": SchemaProfile("kakataibo", KAKATAIBO_UPOS, KAKATAIBO_DEPRELS),
    "shipibo": SchemaProfile("shipibo", SHIPIBO_UPOS, SHIPIBO_DEPRELS),
    "generic": SchemaProfile("generic", _UNIVERSAL_UPOS, UNIVERSAL_DEPRELS,
                             subtyped_variants_ok=True),
}

PROFILE_NAMES = tuple(sorted(_BUILTIN))


def builtin_profile(name: str, strict: bool = False) -> SchemaProfile:
    try:
        profile = _BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; "
                         f"choose from {', '.join(PROFILE_NAMES)}") from None
    return replace(profile, strict=strict)


def validate_tree(sentence: Sentence, sentence_index: int = 0) -> list[Diagnostic]:
    """Check that the head function forms a single tree hanging off the
    artificial node 0, with the root attachment labelled 'root' and nothing
    else labelled 'root'. An empty result means the sentence is tree-valid.
    """
    n = len(sentence.tokens)
    diags: list[Diagnostic] = []

    def err(code, message, token_id=None):
        diags.append(Diagnostic(ERROR, code, message, sentence_index, token_id))

    in_range = {}
    for token in sentence.tokens:
        if token.head > n:
            err(HEAD_OUT_OF_RANGE,
                f"head {token.head} outside [0, {n}]", token.id)
        else:
            in_range[token.id] = token.head

    roots = [t.id for t in sentence.tokens if t.head == 0]
    if not roots:
        err(NO_ROOT, "no token is attached to the artificial root")
    elif len(roots) > 1:
        err(MULTIPLE_ROOTS,
            "tokens " + ", ".join(map(str, roots)) +
            " are all attached to the artificial root")
    for token in sentence.tokens:
        if token.head == 0 and token.deprel_base != "root":
            err(ROOT_LABEL,
                f"root attachment labelled {token.deprel!r}", token.id)
        elif token.head != 0 and token.deprel_base == "root":
            err(STRAY_ROOT_LABEL,
                f"non-root attachment labelled {token.deprel!r}", token.id)

    # Walk head pointers; every in-range chain must reach node 0.
    state = dict.fromkeys(in_range, 0)  # 0 unseen, 1 on path, 2 done
    for start in sorted(in_range):
        if state[start]:
            continue
        path = []
        node = start
        while node in in_range and state.get(node, 2) == 0:
            state[node] = 1
            path.append(node)
            node = in_range[node]
        if state.get(node) == 1:  # closed a cycle within the current path
            cycle = path[path.index(node):]
            err(CYCLE,
                "cycle through tokens " + ", ".join(map(str, sorted(cycle))),
                min(cycle))
        for visited in path:
            state[visited] = 2
    return diags


def validate_schema(sentence: Sentence, profile: SchemaProfile,
                    sentence_index: int = 0) -> list[Diagnostic]:
    """Flag POS tags and relation labels outside the profile's inventory."""
    severity = ERROR if profile.strict else WARNING
    diags = []
    for token in sentence.tokens:
        if token.upos not in profile.allowed_upos:
            diags.append(Diagnostic(
                severity, UNKNOWN_UPOS,
                f"upos {token.upos!r} is not in profile {profile.name!r}",
                sentence_index, token.id))
        if not profile.allows_deprel(token.deprel):
            diags.append(Diagnostic(
                severity, UNKNOWN_DEPREL,
                f"deprel {token.deprel!r} is not in profile {profile.name!r}",
                sentence_index, token.id))
    return diags


def lint_kakataibo(sentence: Sentence, sentence_index: int = 0) -> list[Diagnostic]:
    """Direction and POS regularities of the Kakataibo annotation scheme.

    Second-position enclitics (subtyped aux) sit left of their head, plain
    auxiliary verbs right of it, and bound subjects are enclitics (PART).
    These are regularities of the language, so violations are warnings.
    """
    diags = []
    for token in sentence.tokens:
        base = token.deprel_base
        subtype = token.deprel_subtype
        if base == "aux" and subtype and token.id > token.head:
            diags.append(Diagnostic(
                WARNING, ENCLITIC_DIRECTION,
                f"second-position enclitic {token.form!r} follows its head",
                sentence_index, token.id))
        elif token.deprel == "aux" and token.id < token.head:
            diags.append(Diagnostic(
                WARNING, AUXVERB_DIRECTION,
                f"auxiliary verb {token.form!r} precedes its head",
                sentence_index, token.id))
        if token.deprel == "nsubj:bound" and token.upos != "PART":
            diags.append(Diagnostic(
                WARNING, BOUND_SUBJECT_POS,
                f"bound subject {token.form!r} tagged {token.upos}, not PART",
                sentence_index, token.id))
    return diags


def validate_treebank(treebank: Treebank, profile: SchemaProfile | None = None,
                      lint: bool = False) -> list[Diagnostic]:
    """Run tree validation (always), schema validation (with a profile), and
    the Kakataibo lints (on request or when the profile is 'kakataibo')
    over every sentence."""
    run_lints = lint or (profile is not None and profile.name == "kakataibo")
    diags = []
    for index, sentence in enumerate(treebank.sentences):
        diags.extend(validate_tree(sentence, index))
        if profile is not None:
            diags.extend(validate_schema(sentence, profile, index))
        if run_lints:
            diags.extend(lint_kakataibo(sentence, index))
    return diags


def has_errors(diagnostics) -> bool:
    return any(d.severity == ERROR for d in diagnostics)
