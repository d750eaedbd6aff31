"""BGP syntax objects, the Façade-X predicate hierarchy and node helpers."""

from __future__ import annotations

import enum
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDF_TYPE = RDF_NS + "type"
FX_NS = "http://sparql.xyz/facade-x/ns/"
FX_ROOT = FX_NS + "root"
XYZ_NS = "http://sparql.xyz/facade-x/data/"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

_MEMBERSHIP = re.compile(r"_([1-9][0-9]*)")


class NodeKind(enum.Enum):
    VARIABLE = "variable"
    IRI = "iri"
    BLANK = "blank"
    LITERAL = "literal"


@dataclass(frozen=True, slots=True)
class PatternNode:
    """A node of a basic graph pattern.

    Blank nodes keep their own kind so they can be reported with their
    original label, but ``is_var`` treats them exactly like variables.
    """

    kind: NodeKind
    label: str
    datatype: str | None = None

    def __post_init__(self) -> None:
        if not self.label and self.kind is not NodeKind.LITERAL:
            raise ValueError("node label must be non-empty")
        if self.datatype is not None and self.kind is not NodeKind.LITERAL:
            raise ValueError("only literals carry a datatype")

    @property
    def is_var(self) -> bool:
        return self.kind in (NodeKind.VARIABLE, NodeKind.BLANK)

    @property
    def is_iri(self) -> bool:
        return self.kind is NodeKind.IRI

    @property
    def is_literal(self) -> bool:
        return self.kind is NodeKind.LITERAL

    def __str__(self) -> str:
        if self.kind is NodeKind.VARIABLE:
            return "?" + self.label
        if self.kind is NodeKind.BLANK:
            return "_:" + self.label
        if self.kind is NodeKind.IRI:
            return "<" + self.label + ">"
        text = '"' + _escape_literal(self.label) + '"'
        if self.datatype is not None:
            text += "^^<" + self.datatype + ">"
        return text


def _escape_literal(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def var(name: str) -> PatternNode:
    return PatternNode(NodeKind.VARIABLE, name)


def iri(value: str) -> PatternNode:
    return PatternNode(NodeKind.IRI, value)


def bnode(name: str) -> PatternNode:
    return PatternNode(NodeKind.BLANK, name)


def literal(value: str, datatype: str | None = None) -> PatternNode:
    return PatternNode(NodeKind.LITERAL, value, datatype)


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternNode
    predicate: PatternNode
    object: PatternNode

    def __post_init__(self) -> None:
        if self.predicate.is_literal:
            raise ValueError(f"literal in predicate position: {self.predicate}")
        if self.subject.is_literal:
            raise ValueError(f"literal in subject position: {self.subject}")

    def __iter__(self) -> Iterator[PatternNode]:
        yield self.subject
        yield self.predicate
        yield self.object

    def __str__(self) -> str:
        return f"{self.subject} {self.predicate} {self.object} ."


@dataclass(frozen=True)
class Bgp:
    """An ordered sequence of triple patterns."""

    triples: tuple[TriplePattern, ...] = ()
    source: str | None = field(default=None, compare=False)

    def __init__(
        self, triples: Iterable[TriplePattern] = (), source: str | None = None
    ) -> None:
        object.__setattr__(self, "triples", tuple(triples))
        object.__setattr__(self, "source", source)

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[TriplePattern]:
        return iter(self.triples)

    def nodes(self) -> list[PatternNode]:
        """Distinct nodes in order of first occurrence (s, p, o per triple)."""
        seen: dict[PatternNode, None] = {}
        for triple in self.triples:
            for node in triple:
                seen.setdefault(node, None)
        return list(seen)

    def __str__(self) -> str:
        return "\n".join(str(t) for t in self.triples)


class FxPredicate(enum.Enum):
    SUBJECT = "Subject"
    PROPERTY = "Property"
    OBJECT = "Object"
    TYPE_PROPERTY = "TypeProperty"
    TYPE = "Type"
    CONTAINER = "Container"
    SLOT = "Slot"
    VALUE = "Value"
    FX_ROOT = "FXRoot"
    SLOT_NUMBER = "SlotNumber"
    SLOT_STRING = "SlotString"

    def __str__(self) -> str:
        return self.value

    @property
    def short(self) -> str:
        return _SHORT[self]


P = FxPredicate

_SHORT = {
    P.SUBJECT: "S",
    P.PROPERTY: "P",
    P.OBJECT: "O",
    P.TYPE_PROPERTY: "TP",
    P.TYPE: "T",
    P.CONTAINER: "C",
    P.SLOT: "SL",
    P.VALUE: "V",
    P.FX_ROOT: "R",
    P.SLOT_NUMBER: "SN",
    P.SLOT_STRING: "SS",
}

# Direct parents of every predicate; the table order is also the order in
# which the top-down search tries specialisations.
SPECIALISES: dict[FxPredicate, tuple[FxPredicate, ...]] = {
    P.SUBJECT: (),
    P.PROPERTY: (),
    P.OBJECT: (),
    P.TYPE_PROPERTY: (P.PROPERTY,),
    P.TYPE: (P.OBJECT,),
    P.CONTAINER: (P.SUBJECT, P.OBJECT),
    P.SLOT: (P.PROPERTY,),
    P.VALUE: (P.OBJECT,),
    P.FX_ROOT: (P.OBJECT,),
    P.SLOT_NUMBER: (P.SLOT,),
    P.SLOT_STRING: (P.SLOT,),
}

DISJOINT: dict[FxPredicate, frozenset[FxPredicate]] = {
    P.SUBJECT: frozenset({P.PROPERTY}),
    P.PROPERTY: frozenset({P.SUBJECT, P.OBJECT}),
    P.OBJECT: frozenset({P.PROPERTY}),
    P.TYPE_PROPERTY: frozenset({P.SUBJECT, P.OBJECT, P.SLOT, P.TYPE, P.CONTAINER}),
    P.TYPE: frozenset({P.SLOT, P.CONTAINER, P.VALUE, P.FX_ROOT}),
    P.CONTAINER: frozenset({P.PROPERTY, P.SLOT, P.VALUE, P.TYPE, P.FX_ROOT}),
    P.SLOT: frozenset({P.SUBJECT, P.OBJECT, P.TYPE_PROPERTY}),
    P.VALUE: frozenset(
        {P.PROPERTY, P.SUBJECT, P.TYPE, P.CONTAINER, P.FX_ROOT, P.SLOT}
    ),
    P.FX_ROOT: frozenset({P.SUBJECT, P.PROPERTY, P.CONTAINER, P.VALUE, P.TYPE}),
    P.SLOT_NUMBER: frozenset({P.SLOT_STRING, P.SUBJECT, P.OBJECT}),
    P.SLOT_STRING: frozenset({P.SLOT_NUMBER, P.SUBJECT, P.OBJECT}),
}

GROUND: frozenset[FxPredicate] = frozenset(
    {
        P.TYPE_PROPERTY,
        P.TYPE,
        P.CONTAINER,
        P.VALUE,
        P.FX_ROOT,
        P.SLOT_NUMBER,
        P.SLOT_STRING,
    }
)
TOP: tuple[FxPredicate, ...] = (P.SUBJECT, P.PROPERTY, P.OBJECT)

# Candidate order used by the bottom-up enumeration.
CANONICAL_ORDER: tuple[FxPredicate, ...] = (
    P.CONTAINER,
    P.TYPE_PROPERTY,
    P.SLOT_STRING,
    P.SLOT_NUMBER,
    P.TYPE,
    P.VALUE,
    P.FX_ROOT,
)


def is_ground(pred: FxPredicate) -> bool:
    return pred in GROUND


def specialises(pred: FxPredicate) -> tuple[FxPredicate, ...]:
    return SPECIALISES[pred]


def disjoint(pred: FxPredicate) -> frozenset[FxPredicate]:
    return DISJOINT[pred]


def _closure(pred: FxPredicate) -> frozenset[FxPredicate]:
    out = {pred}
    stack = [pred]
    while stack:
        for parent in SPECIALISES[stack.pop()]:
            if parent not in out:
                out.add(parent)
                stack.append(parent)
    return frozenset(out)


ANCESTORS: dict[FxPredicate, frozenset[FxPredicate]] = {p: _closure(p) for p in P}

SUBTERMS: dict[FxPredicate, tuple[FxPredicate, ...]] = {
    p: tuple(c for c in SPECIALISES if p in SPECIALISES[c]) for p in P
}


def ancestors(pred: FxPredicate) -> frozenset[FxPredicate]:
    """The predicate itself plus everything it transitively specialises."""
    return ANCESTORS[pred]


def is_a(pred: FxPredicate, other: FxPredicate) -> bool:
    return other in ANCESTORS[pred]


def tops(pred: FxPredicate) -> frozenset[FxPredicate]:
    return frozenset(a for a in ANCESTORS[pred] if a in TOP)


def top(pred: FxPredicate) -> FxPredicate:
    """The single top predicate above ``pred``.

    Container sits under both Subject and Object; Object is returned for it,
    since that is the only one of the two a Container shares with other
    object roles.
    """
    found = tops(pred)
    if len(found) == 1:
        return next(iter(found))
    return P.OBJECT


def _disjoint_pair(a: FxPredicate, b: FxPredicate) -> bool:
    anc_a = ANCESTORS[a]
    anc_b = ANCESTORS[b]
    return any(DISJOINT[x] & anc_b for x in anc_a) or any(
        DISJOINT[y] & anc_a for y in anc_b
    )


_CONFLICT = {
    (a, b): (a in GROUND and b in GROUND and a is not b) or _disjoint_pair(a, b)
    for a in P
    for b in P
}


def conflicts(a: FxPredicate, b: FxPredicate) -> bool:
    """True when no node can carry both predicates.

    Disjointness is inherited downwards, and two distinct ground predicates
    never coexist.
    """
    return _CONFLICT[(a, b)]


class WellKnownKind(enum.Enum):
    RDF_TYPE = "RdfType"
    FX_ROOT = "FxRoot"
    MEMBERSHIP = "ContainerMembershipProperty"
    FX_CONFIG = "FxConfigNamespace"
    OTHER = "Other"


@dataclass(frozen=True, slots=True)
class WellKnown:
    kind: WellKnownKind
    index: int | None = None


def classify_well_known(node: PatternNode) -> WellKnown:
    if not node.is_iri:
        raise ValueError(f"not an IRI: {node}")
    label = node.label
    if label == RDF_TYPE:
        return WellKnown(WellKnownKind.RDF_TYPE)
    if label == FX_ROOT:
        return WellKnown(WellKnownKind.FX_ROOT)
    if label.startswith(RDF_NS):
        m = _MEMBERSHIP.fullmatch(label[len(RDF_NS):])
        if m:
            return WellKnown(WellKnownKind.MEMBERSHIP, int(m.group(1)))
    if label.startswith(FX_NS):
        return WellKnown(WellKnownKind.FX_CONFIG)
    return WellKnown(WellKnownKind.OTHER)


def is_rdf_type(node: PatternNode) -> bool:
    return node.is_iri and node.label == RDF_TYPE


def is_fx_root(node: PatternNode) -> bool:
    return node.is_iri and node.label == FX_ROOT


def is_membership(node: PatternNode) -> bool:
    return node.is_iri and classify_well_known(node).kind is WellKnownKind.MEMBERSHIP


def match_nodes(left: PatternNode, right: PatternNode) -> bool:
    if left.is_var or right.is_var:
        return True
    return left == right


class Annotation(Mapping[PatternNode, FxPredicate]):
    """An immutable map from BGP nodes to Façade-X predicates."""

    __slots__ = ("_entries", "_hash")

    def __init__(
        self,
        entries: Mapping[PatternNode, FxPredicate]
        | Iterable[tuple[PatternNode, FxPredicate]] = (),
    ) -> None:
        self._entries: dict[PatternNode, FxPredicate] = dict(entries)
        self._hash: int | None = None

    def __getitem__(self, node: PatternNode) -> FxPredicate:
        return self._entries[node]

    def __iter__(self) -> Iterator[PatternNode]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Annotation):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self._entries == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {p}" for n, p in self._entries.items())
        return f"Annotation({{{body}}})"

    @property
    def is_ground(self) -> bool:
        return all(p in GROUND for p in self._entries.values())

    def with_entry(self, node: PatternNode, pred: FxPredicate) -> Annotation:
        entries = dict(self._entries)
        entries[node] = pred
        return Annotation(entries)

    def as_dict(self) -> dict[PatternNode, FxPredicate]:
        return dict(self._entries)
