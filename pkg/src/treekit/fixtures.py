"""Bundled fixture corpora.

Four corpora ship with the package:

* ``samples``        two Kakataibo sentences from the language's descriptive
                     literature with synthetic (non-gold) trees that carry
                     the relation labels of interest (aux, aux:sgen, aux:ev,
                     nsubj:free, nsubj:bound); they exercise validation and
                     label inventories, never parser accuracy.
* ``synthetic-cbr``  130 generated Kakataibo-like sentences: verb-final,
                     second-position enclitic clusters, case particles.
* ``synthetic-shp``  320 generated Shipibo-like sentences: shorter, with
                     an evidential particle and copular clauses, sharing
                     some suffix conventions with the cbr grammar.
* ``units``          a handful of tiny sentences used by unit tests.

Generation is deterministic (fixed seeds, splitmix64); several tests freeze
exact counts from these corpora, so any change to the generators or
vocabularies is a breaking change to the test suite.
"""

import os

from .conllu import Sentence, Token, Treebank, parse_conllu
from .rng import SplitMix64

SAMPLES_TEXT = """\
# sent_id = cbr-sample-aux
# text = Bëxuñurá 'ikëbi kaisa xanun ain bënë 'akësa okin masoama 'ikën
# note = synthetic annotation for tooling tests, not gold
1\tBëxuñurá\t_\tADV\t_\t_\t7\tadvmod\t_\t_
2\t'ikëbi\t_\tPART\t_\t_\t9\taux:ev\t_\t_
3\tkaisa\t_\tPART\t_\t_\t9\taux:sgen\t_\t_
4\txanun\t_\tNOUN\t_\t_\t9\tnsubj:free\t_\t_
5\tain\t_\tDET\t_\t_\t6\tdet\t_\t_
6\tbënë\t_\tNOUN\t_\t_\t7\tnsubj:free\t_\t_
7\t'akësa\t_\tVERB\t_\t_\t9\tadvcl\t_\t_
8\tokin\t_\tADV\t_\t_\t9\tadvmod\t_\t_
9\tmasoama\t_\tVERB\t_\t_\t0\troot\t_\t_
10\t'ikën\t_\tAUX\t_\t_\t9\taux\t_\t_

# sent_id = cbr-sample-nsubj
# text = 'Ën kana ënë an taë tëbiskati buan
# note = synthetic annotation for tooling tests, not gold
1\t'Ën\t_\tPRON\t_\t_\t7\tnsubj:free\t_\t_
2\tkana\t_\tPART\t_\t_\t7\tnsubj:bound\t_\t_
3\tënë\t_\tDET\t_\t_\t4\tdet\t_\t_
4\tan\t_\tNOUN\t_\t_\t7\tobj\t_\t_
5\ttaë\t_\tNOUN\t_\t_\t4\tflat\t_\t_
6\ttëbiskati\t_\tNOUN\t_\t_\t4\tflat\t_\t_
7\tbuan\t_\tVERB\t_\t_\t0\troot\t_\t_
"""

UNITS_TEXT = """\
# sent_id = unit-1
# text = kana kwan
1\tkana\t_\tPART\t_\t_\t2\taux:sgen\t_\t_
2\tkwan\t_\tVERB\t_\t_\t0\troot\t_\t_

# sent_id = unit-2
# text = nunti mapu bitsia
1\tnunti\t_\tNOUN\t_\t_\t3\tnsubj:free\t_\t_
2\tmapu\t_\tNOUN\t_\t_\t3\tobj\t_\t_
3\tbitsia\t_\tVERB\t_\t_\t0\troot\t_\t_

# sent_id = unit-3
# text = 'ën ka nunti buanti .
1\t'ën\t_\tPRON\t_\t_\t4\tnsubj:free\t_\t_
2\tka\t_\tPART\t_\t_\t4\taux:sgen\t_\t_
3\tnunti\t_\tNOUN\t_\t_\t4\tobj\t_\t_
4\tbuanti\t_\tVERB\t_\t_\t0\troot\t_\t_
5\t.\t_\tPUNCT\t_\t_\t4\tpunct\t_\t_

# sent_id = unit-4
# text = xanu kara bërama kwankë .
1\txanu\t_\tNOUN\t_\t_\t4\tnsubj:free\t_\t_
2\tkara\t_\tPART\t_\t_\t4\taux:sgen\t_\t_
3\tbërama\t_\tADV\t_\t_\t4\tadvmod\t_\t_
4\tkwankë\t_\tVERB\t_\t_\t0\troot\t_\t_
5\t.\t_\tPUNCT\t_\t_\t4\tpunct\t_\t_

# sent_id = unit-5
# text = uni ka ënë mapu nën xonia 'ikën .
1\tuni\t_\tNOUN\t_\t_\t6\tnsubj:free\t_\t_
2\tka\t_\tPART\t_\t_\t6\taux:sgen\t_\t_
3\tënë\t_\tDET\t_\t_\t4\tdet\t_\t_
4\tmapu\t_\tNOUN\t_\t_\t6\tobl\t_\t_
5\tnën\t_\tPART\t_\t_\t4\tcase\t_\t_
6\txonia\t_\tVERB\t_\t_\t0\troot\t_\t_
7\t'ikën\t_\tAUX\t_\t_\t6\taux\t_\t_
8\t.\t_\tPUNCT\t_\t_\t6\tpunct\t_\t_

# sent_id = unit-6
# text = papa na runu bë tëkëxti .
1\tpapa\t_\tNOUN\t_\t_\t5\tnsubj:free\t_\t_
2\tna\t_\tPART\t_\t_\t5\tnsubj:bound\t_\t_
3\trunu\t_\tNOUN\t_\t_\t5\tobl\t_\t_
4\tbë\t_\tPART\t_\t_\t3\tcase\t_\t_
5\ttëkëxti\t_\tVERB\t_\t_\t0\troot\t_\t_
6\t.\t_\tPUNCT\t_\t_\t5\tpunct\t_\t_
"""


class _Builder:
    """Accumulates (form, upos, head-position, deprel) rows; heads may be
    patched after dependents are placed."""

    def __init__(self):
        self.rows: list[list] = []

    def add(self, form: str, upos: str, head: int | None, deprel: str) -> int:
        self.rows.append([form, upos, head, deprel])
        return len(self.rows)

    def set_head(self, position: int, head: int) -> None:
        self.rows[position - 1][2] = head

    def sentence(self, sent_id: str) -> Sentence:
        if any(head is None for _, _, head, _ in self.rows):
            raise AssertionError("builder left a head unset")
        tokens = tuple(
            Token(id=k, form=form, upos=upos, head=head, deprel=deprel)
            for k, (form, upos, head, deprel) in enumerate(self.rows, start=1))
        text = " ".join(t.form for t in tokens)
        comments = (f"# sent_id = {sent_id}", f"# text = {text}")
        return Sentence(tokens, comments)


# Kakataibo-flavored synthetic vocabulary. The noun/verb stems share suffix
# conventions with the Shipibo-flavored grammar only where noted, which is
# what gives cross-lingual character features something to transfer.
_CBR = {
    "noun": ("nunti", "xanu", "uni", "bëru", "mapu", "runu", "bana", "kentí",
             "bachi", "ñunshin", "kamabi", "tita"),
    "propn": ("Sipirya", "Nukama"),
    "pron": ("'ën", "min", "an", "nukën"),
    "det": ("ënë", "a", "ain"),
    "adj": ("upí", "chaxkë", "bëxun"),
    "num": ("achushi", "rabë"),
    "adv": ("bërama", "uisara", "ëma"),
    "verb_stem": ("kwan", "buan", "masoa", "tëbis", "xon", "bits", "tëkëx"),
    "verb_suffix": ("ti", "kë", "ia", "akë"),
    "aux": ("'ikën", "'itsin"),
    "sgen": ("ka", "kara", "kana"),
    "bound": ("na", "mana", "xuna"),
    "ev": ("isa", "kisa"),
    "int": ("ra",),
    "dub": ("bika",),
    "case": ("nën", "ki", "nu", "bë"),
}

# Shipibo-flavored vocabulary: different stems, shorter clauses, an
# evidential particle and a copula. Shares the "-ti" verb suffix, the
# pronoun "min", and sentence-final "." with the grammar above.
_SHP = {
    "noun": ("bake", "ainbo", "joni", "atsa", "yapa", "bimi", "wiso", "kaya",
             "paro", "maxko"),
    "propn": ("Roni", "Sani"),
    "pron": ("ea", "min", "jan"),
    "det": ("nato", "ja"),
    "adj": ("metsa", "ani", "koshi"),
    "num": ("westiora", "rabé"),
    "adv": ("ikaxbi", "ramara"),
    "verb_stem": ("pike", "oin", "bena", "yoi", "jati", "winó"),
    "verb_suffix": ("ti", "ke", "ai"),
    "cop": ("riki", "iki"),
    "val": ("ronki", "rara"),
    "case": ("nko", "betan", "kan"),
    "cconj": ("itan",),
}


def _cbr_np(b: _Builder, rng: SplitMix64, v: dict) -> int:
    """Noun phrase; returns the head position."""
    det = rng.randbelow(10) < 3
    adj = rng.randbelow(10) < 2
    num = rng.randbelow(10) < 1
    genitive = rng.randbelow(10) < 2
    pending = []
    if det:
        pending.append((b.add(rng.choice(v["det"]), "DET", None, "det")))
    if num:
        pending.append((b.add(rng.choice(v["num"]), "NUM", None, "nummod")))
    if adj:
        pending.append((b.add(rng.choice(v["adj"]), "ADJ", None, "amod")))
    if genitive:
        owner = b.add(rng.choice(v["noun"]), "NOUN", None, "nmod")
        b.add(rng.choice(v["case"]), "PART", owner, "case")
        pending.append(owner)
    if rng.randbelow(10) < 1:
        head = b.add(rng.choice(v["propn"]), "PROPN", None, "_")
    else:
        head = b.add(rng.choice(v["noun"]), "NOUN", None, "_")
    for position in pending:
        b.set_head(position, head)
    return head


def _cbr_clause(b: _Builder, rng: SplitMix64, v: dict, second_position: bool):
    """One verb-final clause; returns the verb position. The enclitic
    cluster lands after the first constituent when requested."""
    deps = []  # (position, deprel) to re-head onto the verb

    free_subject = rng.randbelow(10) < 7
    if free_subject:
        if rng.randbelow(10) < 4:
            deps.append((b.add(rng.choice(v["pron"]), "PRON", None, "_"),
                         "nsubj:free"))
        else:
            deps.append((_cbr_np(b, rng, v), "nsubj:free"))
    else:
        deps.append((b.add(rng.choice(v["adv"]), "ADV", None, "_"), "advmod"))

    if second_position:
        deps.append((b.add(rng.choice(v["sgen"]), "PART", None, "_"), "aux:sgen"))
        deps.append((b.add(rng.choice(v["bound"]), "PART", None, "_"),
                     "nsubj:bound"))
        roll = rng.randbelow(20)
        if roll < 4:
            deps.append((b.add(rng.choice(v["ev"]), "PART", None, "_"), "aux:ev"))
        elif roll == 4:
            deps.append((b.add(rng.choice(v["int"]), "PART", None, "_"),
                         "aux:int"))
        elif roll == 5:
            deps.append((b.add(rng.choice(v["dub"]), "PART", None, "_"),
                         "aux:dub"))

    if rng.randbelow(10) < 6:
        deps.append((_cbr_np(b, rng, v), "obj"))
    if rng.randbelow(10) < 4:
        oblique = _cbr_np(b, rng, v)
        b.add(rng.choice(v["case"]), "PART", oblique, "case")
        deps.append((oblique, "obl"))
    if rng.randbelow(10) < 2:
        deps.append((b.add(rng.choice(v["adv"]), "ADV", None, "_"), "advmod"))

    form = rng.choice(v["verb_stem"]) + rng.choice(v["verb_suffix"])
    verb = b.add(form, "VERB", None, "_")
    for position, deprel in deps:
        b.set_head(position, verb)
        b.rows[position - 1][3] = deprel
    if rng.randbelow(10) < 2:
        b.add(rng.choice(v["aux"]), "AUX", verb, "aux")
    return verb


def _generate_cbr() -> list[Sentence]:
    rng = SplitMix64(0xCB12)
    sentences = []
    for k in range(129):
        b = _Builder()
        main = _cbr_clause(b, rng, _CBR, second_position=True)
        if rng.randbelow(10) < 2:
            extra = _cbr_clause(b, rng, _CBR, second_position=False)
            b.set_head(extra, main)
            b.rows[extra - 1][3] = "advcl"
        b.set_head(main, 0)
        b.rows[main - 1][3] = "root"
        punct = "?" if rng.randbelow(20) == 0 else "."
        b.add(punct, "PUNCT", main, "punct")
        sentences.append(b.sentence(f"cbr-syn-{k + 1}"))

    # One deliberately long utterance: a main clause plus chained clauses.
    b = _Builder()
    rng_long = SplitMix64(0xCB13)
    main = _cbr_clause(b, rng_long, _CBR, second_position=True)
    while len(b.rows) < 25:
        extra = _cbr_clause(b, rng_long, _CBR, second_position=False)
        b.set_head(extra, main)
        b.rows[extra - 1][3] = "parataxis"
    b.set_head(main, 0)
    b.rows[main - 1][3] = "root"
    b.add(".", "PUNCT", main, "punct")
    sentences.append(b.sentence("cbr-syn-long"))
    return sentences


def _shp_np(b: _Builder, rng: SplitMix64, v: dict) -> int:
    pending = []
    if rng.randbelow(10) < 3:
        pending.append(b.add(rng.choice(v["det"]), "DET", None, "det"))
    if rng.randbelow(10) < 2:
        pending.append(b.add(rng.choice(v["adj"]), "ADJ", None, "amod"))
    if rng.randbelow(10) < 1:
        pending.append(b.add(rng.choice(v["num"]), "NUM", None, "nummod"))
    if rng.randbelow(10) < 1:
        head = b.add(rng.choice(v["propn"]), "PROPN", None, "_")
    else:
        head = b.add(rng.choice(v["noun"]), "NOUN", None, "_")
    for position in pending:
        b.set_head(position, head)
    return head


def _generate_shp() -> list[Sentence]:
    rng = SplitMix64(0x51B0)
    sentences = []
    for k in range(319):
        b = _Builder()
        copular = rng.randbelow(10) < 3
        if copular:
            subject = _shp_np(b, rng, _SHP)
            cop = b.add(rng.choice(_SHP["cop"]), "AUX", None, "cop")
            if rng.randbelow(10) < 3:
                pred = b.add(rng.choice(_SHP["adj"]), "ADJ", None, "_")
            else:
                pred = _shp_np(b, rng, _SHP)
            b.set_head(subject, pred)
            b.rows[subject - 1][3] = "nsubj"
            b.set_head(cop, pred)
            b.set_head(pred, 0)
            b.rows[pred - 1][3] = "root"
            b.add(".", "PUNCT", pred, "punct")
        else:
            deps = []
            if rng.randbelow(10) < 4:
                deps.append((b.add(rng.choice(_SHP["pron"]), "PRON", None, "_"),
                             "nsubj"))
            else:
                deps.append((_shp_np(b, rng, _SHP), "nsubj"))
            if rng.randbelow(10) < 5:
                deps.append((b.add(rng.choice(_SHP["val"]), "PART", None, "_"),
                             "aux:val"))
            if rng.randbelow(10) < 5:
                obj = _shp_np(b, rng, _SHP)
                deps.append((obj, "obj"))
                if rng.randbelow(10) < 2:
                    conj = _shp_np(b, rng, _SHP)
                    b.add(rng.choice(_SHP["cconj"]), "CCONJ", conj, "cc")
                    b.set_head(conj, obj)
                    b.rows[conj - 1][3] = "conj"
            if rng.randbelow(10) < 3:
                oblique = _shp_np(b, rng, _SHP)
                b.add(rng.choice(_SHP["case"]), "PART", oblique, "case")
                deps.append((oblique, "obl"))
            if rng.randbelow(10) < 2:
                deps.append((b.add(rng.choice(_SHP["adv"]), "ADV", None, "_"),
                             "advmod"))
            form = rng.choice(_SHP["verb_stem"]) + rng.choice(_SHP["verb_suffix"])
            verb = b.add(form, "VERB", None, "root")
            for position, deprel in deps:
                b.set_head(position, verb)
                b.rows[position - 1][3] = deprel
            b.set_head(verb, 0)
            b.add(".", "PUNCT", verb, "punct")
        sentences.append(b.sentence(f"shp-syn-{k + 1}"))

    # One long utterance for this grammar as well.
    b = _Builder()
    rng_long = SplitMix64(0x51B1)
    deps = [(_shp_np(b, rng_long, _SHP), "nsubj")]
    while len(b.rows) < 21:
        extra = _shp_np(b, rng_long, _SHP)
        b.add(rng_long.choice(_SHP["cconj"]), "CCONJ", extra, "cc")
        deps.append((extra, "conj"))
    verb = b.add(rng_long.choice(_SHP["verb_stem"]) + "ai", "VERB", None, "root")
    first_conj = None
    for position, deprel in deps:
        if deprel == "conj":
            if first_conj is None:
                first_conj = position
                b.set_head(position, verb)
                b.rows[position - 1][3] = "obj"
            else:
                b.set_head(position, first_conj)
                b.rows[position - 1][3] = deprel
        else:
            b.set_head(position, verb)
            b.rows[position - 1][3] = deprel
    b.set_head(verb, 0)
    b.add(".", "PUNCT", verb, "punct")
    sentences.append(b.sentence("shp-syn-long"))
    return sentences


_CACHE: dict[str, Treebank] = {}

FIXTURE_NAMES = ("samples", "synthetic-cbr", "synthetic-shp", "units")


def fixture_treebank(name: str) -> Treebank:
    if name not in _CACHE:
        if name == "samples":
            tb = parse_conllu(SAMPLES_TEXT, source_name="samples")
        elif name == "units":
            tb = parse_conllu(UNITS_TEXT, source_name="units")
        elif name == "synthetic-cbr":
            tb = Treebank(tuple(_generate_cbr()), "synthetic-cbr")
        elif name == "synthetic-shp":
            tb = Treebank(tuple(_generate_shp()), "synthetic-shp")
        else:
            raise ValueError(f"unknown fixture {name!r}; "
                             f"choose from {', '.join(FIXTURE_NAMES)}")
        _CACHE[name] = tb
    return _CACHE[name]


def fixture_text(name: str) -> str:
    from .conllu import serialize_conllu
    return serialize_conllu(fixture_treebank(name))


def export_fixtures(directory) -> list[str]:
    """Write every bundled fixture corpus as a .conllu file; returns the
    paths written."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name in FIXTURE_NAMES:
        path = os.path.join(directory, f"{name}.conllu")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(fixture_text(name))
        paths.append(path)
    return paths
