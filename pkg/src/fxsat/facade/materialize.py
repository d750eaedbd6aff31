"""Mapping Façade-X instances to RDF quads, and back."""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass
from urllib.parse import quote, unquote

from ..terms import (
    FX_ROOT,
    RDF_NS,
    RDF_TYPE,
    XYZ_NS,
    NodeKind,
    PatternNode,
    WellKnownKind,
    bnode,
    classify_well_known,
    iri,
    literal,
)
from .model import Child, FxInstance, InstanceBuilder, NumberKey, Slot, SlotKey, StringKey


class EntityMode(enum.Enum):
    BLANK_NODES = "bnode"
    IRIS = "iri"


@dataclass(frozen=True)
class FxQuad:
    graph: str
    subject: PatternNode
    predicate: PatternNode
    object: PatternNode

    def __post_init__(self) -> None:
        if self.subject.kind not in (NodeKind.IRI, NodeKind.BLANK):
            raise ValueError("quad subjects are IRIs or blank nodes")
        if not self.predicate.is_iri:
            raise ValueError("quad predicates are IRIs")
        if self.object.kind is NodeKind.VARIABLE:
            raise ValueError("quads hold RDF terms, not variables")

    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.graph, str(self.subject), str(self.predicate), str(self.object))

    def nquad(self) -> str:
        return f"{self.subject} {self.predicate} {self.object} <{self.graph}> .\n"

    def ntriple(self) -> str:
        return f"{self.subject} {self.predicate} {self.object} .\n"


RDF_TYPE_NODE = iri(RDF_TYPE)
FX_ROOT_NODE = iri(FX_ROOT)


def xyz_iri(name: str) -> str:
    return XYZ_NS + quote(name, safe="")


def xyz_name(value: str) -> str | None:
    """Inverse of :func:`xyz_iri`; None for IRIs it cannot have produced."""
    if not value.startswith(XYZ_NS):
        return None
    name = unquote(value[len(XYZ_NS):])
    return name if name and xyz_iri(name) == value else None


def key_iri(key: SlotKey) -> str:
    if isinstance(key, NumberKey):
        return f"{RDF_NS}_{key.n}"
    return xyz_iri(key.name)


def blank_label(cid: str) -> str:
    """An N-Quads-safe blank node label, injective over container ids."""
    return "".join(ch if ch.isascii() and ch.isalnum() else f"_{ord(ch):x}_" for ch in cid)


def entity(instance: FxInstance, cid: str, mode: EntityMode) -> PatternNode:
    pinned = instance.iris.get(cid)
    if pinned is not None:
        return iri(pinned)
    if mode is EntityMode.IRIS:
        return iri(f"{instance.source_iri}#{quote(cid, safe='/%')}")
    return bnode(blank_label(cid))


def materialize(
    instance: FxInstance, mode: EntityMode = EntityMode.BLANK_NODES
) -> frozenset[FxQuad]:
    """One quad per mapping-rule instance, in the source's named graph."""
    g = instance.source_iri
    out: set[FxQuad] = set()
    for r in instance.roots:
        out.add(FxQuad(g, entity(instance, r, mode), RDF_TYPE_NODE, FX_ROOT_NODE))
    for s in instance.slots:
        subject = entity(instance, s.owner, mode)
        prop = iri(key_iri(s.key))
        if isinstance(s.holds, Child):
            obj = entity(instance, s.holds.container, mode)
        else:
            obj = literal(s.holds.lexical, s.holds.datatype)
        out.add(FxQuad(g, subject, prop, obj))
    for cid, name in instance.types:
        out.add(FxQuad(g, entity(instance, cid, mode), RDF_TYPE_NODE, iri(xyz_iri(name))))
    return frozenset(out)


def to_nquads(quads: Iterable[FxQuad]) -> str:
    """Canonical N-Quads: lines sorted by graph, subject, predicate, object."""
    rows = sorted(quads, key=FxQuad.sort_key)
    return "".join(q.nquad() for q in rows)


def to_ntriples(quads: Iterable[FxQuad]) -> str:
    """The default-graph view: graph names dropped, duplicates merged."""
    return "".join(sorted({q.ntriple() for q in quads}))


class QuadShape(enum.Enum):
    ROOT = "root typing"
    STRING_CONTAINER = "string slot to container"
    NUMBER_CONTAINER = "number slot to container"
    NUMBER_VALUE = "number slot to value"
    STRING_VALUE = "string slot to value"
    TYPE = "container typing"


class UnmappableQuadError(ValueError):
    """A quad that no mapping rule can have produced."""


def quad_shape(q: FxQuad) -> QuadShape:
    """The single mapping rule a quad instantiates."""
    p = q.predicate
    entity_obj = q.object.kind in (NodeKind.IRI, NodeKind.BLANK)
    if p.label == RDF_TYPE:
        if q.object == FX_ROOT_NODE:
            return QuadShape.ROOT
        if q.object.is_iri and xyz_name(q.object.label) is not None:
            return QuadShape.TYPE
    elif classify_well_known(p).kind is WellKnownKind.MEMBERSHIP:
        return QuadShape.NUMBER_CONTAINER if entity_obj else QuadShape.NUMBER_VALUE
    elif xyz_name(p.label) is not None:
        return QuadShape.STRING_CONTAINER if entity_obj else QuadShape.STRING_VALUE
    raise UnmappableQuadError(f"no mapping rule produces {q.nquad().strip()}")


def unmaterialize(quads: Iterable[FxQuad]) -> FxInstance:
    """Rebuilds the instance of one graph; container ids are the entity terms."""
    quads = list(quads)
    graphs = {q.graph for q in quads}
    if len(graphs) != 1:
        raise ValueError(f"expected quads of one graph, got {len(graphs)}")
    b = InstanceBuilder(graphs.pop())
    containers: dict[str, None] = {}
    for q in sorted(quads, key=FxQuad.sort_key):
        shape = quad_shape(q)
        cid = str(q.subject)
        containers.setdefault(cid, None)
        if shape is QuadShape.ROOT:
            b.roots.append(cid)
        elif shape is QuadShape.TYPE:
            b.typed(cid, xyz_name(q.object.label) or "")
        else:
            if shape in (QuadShape.NUMBER_CONTAINER, QuadShape.NUMBER_VALUE):
                key: SlotKey = NumberKey(classify_well_known(q.predicate).index or 0)
            else:
                key = StringKey(xyz_name(q.predicate.label) or "")
            if shape in (QuadShape.STRING_CONTAINER, QuadShape.NUMBER_CONTAINER):
                containers.setdefault(str(q.object), None)
                b.slots.append(Slot(cid, key, Child(str(q.object))))
            else:
                b.value(cid, key, q.object.label, q.object.datatype)
    b.containers.extend(containers)
    return b.build()


def instance_signature(instance: FxInstance) -> frozenset[tuple]:
    """Identity-free description of a valid instance, for isomorphism tests.

    Containers are renamed by their key path from the root, which is unique
    in a valid instance.
    """
    kids = instance.children()
    name: dict[str, tuple] = {}
    frontier = [(instance.root, ())]
    while frontier:
        cid, path = frontier.pop()
        name[cid] = path
        for slot, child in kids.get(cid, ()):
            frontier.append((child, path + (_key_token(slot.key),)))
    facts: set[tuple] = {("root", name[instance.root])}
    for s in instance.slots:
        if isinstance(s.holds, Child):
            held: tuple = ("child", name[s.holds.container])
        else:
            held = ("value", s.holds.lexical, s.holds.datatype)
        facts.add(("slot", name[s.owner], _key_token(s.key), held))
    for cid, t in instance.types:
        facts.add(("type", name[cid], t))
    return frozenset(facts)


def _key_token(key: SlotKey) -> tuple:
    return ("n", key.n) if isinstance(key, NumberKey) else ("s", key.name)

