"""Shared fixtures data and generators for the test suite."""

from __future__ import annotations

import random
from functools import lru_cache
from pathlib import Path

from fxsat.facade import facadify_file, materialize
from fxsat.facade.materialize import FxQuad
from fxsat.facade.model import FxInstance, InstanceBuilder, NumberKey, StringKey
from fxsat.parser import parse_bgp_text
from fxsat.terms import (
    FX_ROOT,
    RDF_NS,
    RDF_TYPE,
    XSD_NS,
    XYZ_NS,
    Bgp,
    FxPredicate,
    TriplePattern,
    iri,
    literal,
    var,
)

DATA = Path(__file__).parent / "data"
CORPUS = DATA / "corpus"

PEOPLE_CSV = """email,name,surname
laura@example.com,Laura,Grey
craig@example.com,Craig,Johnson
mary@example.com,Mary,Jenkins
jamie@example.com,Jamie,Smith
"""

SURNAME_QUERY = """PREFIX xyz: <http://sparql.xyz/facade-x/data/>

SELECT ?surname WHERE {
  SERVICE <x-sparql-anything:location=people.csv> {
    _:person xyz:surname ?surname .
    _:person xyz:name "Laura" .
  }
}
"""

TYPED_MEMBER_QUERY = """PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>

SELECT ?s WHERE {
  SERVICE <x-sparql-anything:location=people.csv> {
    ?s rdf:_1 ?o . ?x rdf:type ?s .
  }
}
"""

# the materialised people CSV, written by hand in Turtle
PEOPLE_TURTLE = """PREFIX fx:     <http://sparql.xyz/facade-x/ns/>
PREFIX rdf:    <http://www.w3.org/1999/02/22-rdf-syntax-ns#>

[ rdf:type  fx:root;
  rdf:_1    [ rdf:_1  "email"; rdf:_2  "name"; rdf:_3  "surname" ];
  rdf:_2    [ rdf:_1  "laura@example.com"; rdf:_2  "Laura";
              rdf:_3  "Grey" ];
  rdf:_3    [ rdf:_1  "craig@example.com"; rdf:_2  "Craig";
              rdf:_3  "Johnson" ];
  rdf:_4    [ rdf:_1  "mary@example.com"; rdf:_2  "Mary";
              rdf:_3  "Jenkins" ];
  rdf:_5    [ rdf:_1  "jamie@example.com"; rdf:_2  "Jamie";
              rdf:_3  "Smith" ]
] .
"""

# one BGP per inviolable formula; each is the smallest graph breaking it
PROXY_BGPS = {
    "type-container": "<http://example.org/i1> xyz:s <http://example.org/i2> . "
    "<http://example.org/i3> rdf:type <http://example.org/i1> .",
    "slot-value-or-container": '<http://example.org/i1> rdf:_1 "a" . '
    "<http://example.org/i1> rdf:_1 <http://example.org/i2> .",
    "slot-one-container": "<http://example.org/i1> rdf:_1 <http://example.org/i2> . "
    "<http://example.org/i1> rdf:_1 <http://example.org/i3> .",
    "slot-one-value": '<http://example.org/i1> rdf:_1 "1" . <http://example.org/i1> rdf:_1 "2" .',
    "self-containment": "<http://example.org/i1> rdf:_1 <http://example.org/i1> .",
    "containment-cycle": "<http://example.org/i1> rdf:_1 <http://example.org/i2> . "
    "<http://example.org/i2> rdf:_1 <http://example.org/i3> . "
    "<http://example.org/i3> rdf:_1 <http://example.org/i1> .",
    "single-incoming-slot": "<http://example.org/i1> rdf:_1 <http://example.org/i2> . "
    "<http://example.org/i1> rdf:_2 <http://example.org/i2> .",
    "root-not-held": "<http://example.org/i1> rdf:type fx:root . "
    "<http://example.org/i2> rdf:_1 <http://example.org/i1> .",
    "single-root": "<http://example.org/i1> rdf:type fx:root . "
    "<http://example.org/i2> rdf:type fx:root .",
}

P = FxPredicate
TRIPLE_PATTERNS = {
    "C.SN.V": (P.CONTAINER, P.SLOT_NUMBER, P.VALUE),
    "C.SN.T": (P.CONTAINER, P.SLOT_NUMBER, P.TYPE),
    "C.SN.R": (P.CONTAINER, P.SLOT_NUMBER, P.FX_ROOT),
    "C.SN.C": (P.CONTAINER, P.SLOT_NUMBER, P.CONTAINER),
    "C.SS.V": (P.CONTAINER, P.SLOT_STRING, P.VALUE),
    "C.SS.T": (P.CONTAINER, P.SLOT_STRING, P.TYPE),
    "C.SS.R": (P.CONTAINER, P.SLOT_STRING, P.FX_ROOT),
    "C.SS.C": (P.CONTAINER, P.SLOT_STRING, P.CONTAINER),
    "C.TP.V": (P.CONTAINER, P.TYPE_PROPERTY, P.VALUE),
    "C.TP.T": (P.CONTAINER, P.TYPE_PROPERTY, P.TYPE),
    "C.TP.R": (P.CONTAINER, P.TYPE_PROPERTY, P.FX_ROOT),
    "C.TP.C": (P.CONTAINER, P.TYPE_PROPERTY, P.CONTAINER),
}
SATISFIABLE_TRIPLE_PATTERNS = {"C.SN.V", "C.SN.C", "C.SS.V", "C.SS.C", "C.TP.T", "C.TP.R"}

# join kinds as (position in the first triple, position in the second)
JOINS = {"SS": (0, 0), "PP": (1, 1), "SO": (0, 2), "OO": (2, 2), "SP": (0, 1), "PO": (1, 2)}

# the 21 unordered two-pattern rows and the joins listed as satisfiable
JOIN_TABLE = {
    ("C.SN.V", "C.SN.V"): {"SS", "PP", "OO"},
    ("C.SN.V", "C.SS.V"): {"SS", "OO"},
    ("C.SN.V", "C.SS.C"): {"SS", "SO"},
    ("C.SN.V", "C.TP.T"): {"SS"},
    ("C.SN.V", "C.TP.R"): {"SS"},
    ("C.SN.C", "C.SN.V"): {"SS", "PP"},
    ("C.SN.C", "C.SN.C"): {"SS", "PP", "SO", "OO"},
    ("C.SN.C", "C.SS.V"): {"SS"},
    ("C.SN.C", "C.SS.C"): {"SS", "SO", "OO"},
    ("C.SN.C", "C.TP.T"): {"SS"},
    ("C.SN.C", "C.TP.R"): {"SS"},
    ("C.SS.V", "C.SS.V"): {"SS", "PP", "OO"},
    ("C.SS.V", "C.TP.T"): {"SS"},
    ("C.SS.V", "C.TP.R"): {"SS"},
    ("C.SS.C", "C.SS.V"): {"SS", "PP"},
    ("C.SS.C", "C.SS.C"): {"SS", "PP", "SO", "OO"},
    ("C.SS.C", "C.TP.T"): {"SS"},
    ("C.SS.C", "C.TP.R"): {"SS"},
    ("C.TP.T", "C.TP.T"): {"SS", "PP", "OO"},
    ("C.TP.R", "C.TP.T"): {"SS", "PP"},
    ("C.TP.R", "C.TP.R"): {"SS", "PP", "OO"},
}


def join_bgp(join: str) -> tuple[Bgp, tuple, tuple]:
    """Two all-variable triples sharing one node at the join positions."""
    i, k = JOINS[join]
    t1 = [var("s1"), var("p1"), var("o1")]
    t2 = [var("s2"), var("p2"), var("o2")]
    t2[k] = t1[i]
    return Bgp((TriplePattern(*t1), TriplePattern(*t2))), tuple(t1), tuple(t2)


def bgp(text: str) -> Bgp:
    return parse_bgp_text(text)


def universal_instance() -> FxInstance:
    """A small instance realising every satisfiable pair of triple patterns.

    Values are shared across slot kinds, containers carry both kinds of
    slot, and two containers share a type.
    """
    b = InstanceBuilder("http://example.org/universal")
    b.container("r", root=True)
    b.child("r", NumberKey(1), "a")
    b.child("r", StringKey("k"), "b")
    b.child("a", NumberKey(2), "c")
    b.child("b", StringKey("k"), "d")
    b.child("b", NumberKey(3), "e")
    # the keys that hold containers also hold values elsewhere
    b.value("c", NumberKey(1), "v")
    b.value("c", StringKey("k"), "v")
    for cid in ("r", "a", "b", "c", "d", "e"):
        b.value(cid, NumberKey(5), "v")
        b.value(cid, StringKey("m"), "v")
    for cid in ("r", "a", "c"):
        b.typed(cid, "T")
    b.typed("r", "U")
    return b.build()


def random_bgp(rng: random.Random, max_triples: int = 6) -> Bgp:
    """A random BGP whose constants overlap the corpus vocabulary."""
    vs = [var(f"v{i}") for i in range(rng.randint(1, 5))]
    ps = [var(f"p{i}") for i in range(rng.randint(1, 3))]
    entities = [iri(XYZ_NS + "e1"), iri(XYZ_NS + "e2")]
    props = [
        iri(RDF_TYPE), iri(RDF_NS + "_1"), iri(RDF_NS + "_2"),
        iri(XYZ_NS + "name"), iri(XYZ_NS + "a"),
    ]
    objects = [
        literal("Laura"), literal("1", XSD_NS + "integer"), literal("x"),
        iri(FX_ROOT), iri(XYZ_NS + "PLAYER"), iri(XYZ_NS + "TEAM"),
    ]
    triples = []
    for _ in range(rng.randint(1, max_triples)):
        s = rng.choice(vs) if rng.random() < 0.85 else rng.choice(entities)
        p = rng.choice(ps) if rng.random() < 0.6 else rng.choice(props)
        roll = rng.random()
        if roll < 0.6:
            o = rng.choice(vs)
        elif roll < 0.95:
            o = rng.choice(objects)
        else:
            o = rng.choice(entities)
        triples.append(TriplePattern(s, p, o))
    return Bgp(triples)


def corpus_files() -> list[Path]:
    return sorted(p for p in CORPUS.iterdir() if p.suffix in (".csv", ".json", ".xml"))


@lru_cache(maxsize=None)
def corpus_instances() -> dict[str, FxInstance]:
    return {p.name: facadify_file(p) for p in corpus_files()}


@lru_cache(maxsize=None)
def corpus_quads() -> dict[str, frozenset[FxQuad]]:
    return {name: materialize(inst) for name, inst in corpus_instances().items()}
