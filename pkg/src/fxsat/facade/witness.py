"""Witness construction: a concrete Façade-X instance for a ground annotation.

Nodes are grouped into classes that the model forces to denote the same
thing.  Two merges are applied until nothing changes:

* one container, one slot key: the held objects coincide;
* a container is held by a single slot: its holders and their keys coincide.

Every class is then realised (containers, keys, values, types), parentless
containers are hung under the root, and the result is checked against the
model axioms.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import count

from ..terms import Bgp, FxPredicate, PatternNode, WellKnownKind, classify_well_known
from .materialize import xyz_name
from .model import (
    Child,
    FxInstance,
    InstanceBuilder,
    NumberKey,
    Slot,
    SlotKey,
    StringKey,
    validate_model,
)

P = FxPredicate
WITNESS_SOURCE = "http://example.org/fxsat/witness"
_SLOTS = (P.SLOT_STRING, P.SLOT_NUMBER)
_CONTAINERS = (P.CONTAINER, P.FX_ROOT)


class WitnessConstructionError(ValueError):
    """The annotation cannot be realised by any Façade-X instance built here."""


class _Classes:
    def __init__(self, nodes: Iterable[PatternNode]) -> None:
        self.parent = {n: n for n in nodes}

    def find(self, n: PatternNode) -> PatternNode:
        root = n
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[n] != root:
            self.parent[n], n = root, self.parent[n]
        return root

    def union(self, a: PatternNode, b: PatternNode) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True

    def members(self) -> dict[PatternNode, list[PatternNode]]:
        out: dict[PatternNode, list[PatternNode]] = {}
        for n in self.parent:
            out.setdefault(self.find(n), []).append(n)
        return out


def _role(pred: FxPredicate) -> str:
    # FXRoot objects and rdf:type properties only ever denote one term each
    return {P.FX_ROOT: "fxroot", P.TYPE_PROPERTY: "rdftype"}.get(pred, pred.value)


@dataclass(frozen=True)
class Witness:
    instance: FxInstance
    annotation: Mapping[PatternNode, FxPredicate]


def build_witness(
    bgp: Bgp, solution: Mapping[PatternNode, FxPredicate], source_iri: str = WITNESS_SOURCE
) -> FxInstance:
    """A valid instance on which ``bgp`` matches once materialised with IRIs.

    Constant containers keep their IRI through :attr:`FxInstance.iris`.
    """
    missing = [n for n in bgp.nodes() if n not in solution]
    if missing:
        raise WitnessConstructionError(f"annotation misses {missing[0]}")
    cls = _Classes(bgp.nodes())
    slot_triples = [t for t in bgp if solution[t.predicate] in _SLOTS]
    type_triples = [t for t in bgp if solution[t.predicate] is P.TYPE_PROPERTY]

    fx_nodes = [n for n in bgp.nodes() if solution[n] is P.FX_ROOT]
    for n in fx_nodes[1:]:
        cls.union(fx_nodes[0], n)
    root_subjects = [t.subject for t in type_triples if solution[t.object] is P.FX_ROOT]
    for n in root_subjects[1:]:
        cls.union(root_subjects[0], n)
    tp_nodes = [n for n in bgp.nodes() if solution[n] is P.TYPE_PROPERTY]
    for n in tp_nodes[1:]:
        cls.union(tp_nodes[0], n)

    changed = True
    while changed:
        changed = False
        for i, a in enumerate(slot_triples):
            for b in slot_triples[i + 1 :]:
                f = cls.find
                if f(a.subject) == f(b.subject) and f(a.predicate) == f(b.predicate):
                    changed |= cls.union(a.object, b.object)
                if f(a.object) == f(b.object) and solution[a.object] in _CONTAINERS:
                    changed |= cls.union(a.subject, b.subject)
                    changed |= cls.union(a.predicate, b.predicate)

    groups = cls.members()
    constant: dict[PatternNode, PatternNode | None] = {}
    for rep, members in groups.items():
        roles = {_role(solution[m]) for m in members}
        if len(roles) > 1:
            raise WitnessConstructionError(
                f"{', '.join(map(str, members))} must coincide but carry roles {sorted(roles)}"
            )
        consts = {m for m in members if not m.is_var}
        if len(consts) > 1:
            raise WitnessConstructionError(
                f"distinct constants must coincide: {', '.join(sorted(map(str, consts)))}"
            )
        constant[rep] = next(iter(consts), None)

    f = cls.find
    root_class = f(root_subjects[0]) if root_subjects else None
    container_classes = [rep for rep in groups if solution[rep] is P.CONTAINER]
    # class-level slot edges, deduplicated
    edges: dict[tuple[PatternNode, PatternNode], PatternNode] = {}
    for t in slot_triples:
        edges.setdefault((f(t.subject), f(t.predicate)), f(t.object))
    held_by: dict[PatternNode, tuple[PatternNode, PatternNode]] = {}
    for (s, p), o in edges.items():
        if solution[o] is P.CONTAINER:
            if o == root_class:
                raise WitnessConstructionError(f"the root {o} is held by a slot")
            held_by[o] = (s, p)
    _check_acyclic(held_by)

    keys = _assign_keys([rep for rep in groups if solution[rep] in _SLOTS], solution, constant)
    b = InstanceBuilder(source_iri)
    cid = {rep: f"w{i}" for i, rep in enumerate(container_classes)}
    if root_class is None:
        root_id = "root"
        while root_id in cid.values():
            root_id += "_"
    else:
        root_id = cid[root_class]
    b.container(root_id, root=True)
    for rep in container_classes:
        if rep != root_class:
            b.container(cid[rep])
        c = constant[rep]
        if c is not None:
            b.iris[cid[rep]] = c.label

    fresh_values = count(1)
    value_of: dict[PatternNode, tuple[str, str | None]] = {}
    for (s, p), o in edges.items():
        if solution[o] is P.CONTAINER:
            b.slots.append(Slot(cid[s], keys[p], Child(cid[o])))
        else:
            if o not in value_of:
                c = constant[o]
                fresh = (f"v{next(fresh_values)}", None)
                value_of[o] = (c.label, c.datatype) if c is not None else fresh
            b.value(cid[s], keys[p], *value_of[o])

    used_numbers = {k.n for k in keys.values() if isinstance(k, NumberKey)}
    spare = (n for n in count(1) if n not in used_numbers)
    for rep in container_classes:
        if rep != root_class and rep not in held_by:
            b.slots.append(Slot(root_id, NumberKey(next(spare)), Child(cid[rep])))

    fresh_types = count(1)
    type_names: dict[PatternNode, str] = {}
    for t in type_triples:
        o = f(t.object)
        if solution[o] is not P.TYPE:
            continue
        if o not in type_names:
            c = constant[o]
            if c is None:
                type_names[o] = f"T{next(fresh_types)}"
            else:
                name = xyz_name(c.label) if c.is_iri else None
                if name is None:
                    raise WitnessConstructionError(f"type {c} is not an xyz: IRI")
                type_names[o] = name
        b.typed(cid[f(t.subject)], type_names[o])

    instance = b.build()
    problems = validate_model(instance)
    if problems:
        raise WitnessConstructionError(f"witness violates {', '.join(problems)}")
    return instance


def _check_acyclic(held_by: Mapping[PatternNode, tuple[PatternNode, PatternNode]]) -> None:
    for start in held_by:
        seen = {start}
        node = start
        while node in held_by:
            node = held_by[node][0]
            if node in seen:
                raise WitnessConstructionError(f"containment cycle through {node}")
            seen.add(node)


def _assign_keys(
    reps: Sequence[PatternNode],
    solution: Mapping[PatternNode, FxPredicate],
    constant: Mapping[PatternNode, PatternNode | None],
) -> dict[PatternNode, SlotKey]:
    keys: dict[PatternNode, SlotKey] = {}
    taken_numbers: set[int] = set()
    taken_names: set[str] = set()
    for rep in reps:
        c = constant[rep]
        if c is None:
            continue
        if solution[rep] is P.SLOT_NUMBER:
            wk = classify_well_known(c)
            if wk.kind is not WellKnownKind.MEMBERSHIP or wk.index is None:
                raise WitnessConstructionError(f"{c} is not a container membership property")
            keys[rep] = NumberKey(wk.index)
            taken_numbers.add(wk.index)
        else:
            name = xyz_name(c.label)
            if name is None:
                raise WitnessConstructionError(f"string slot {c} is not an xyz: IRI")
            keys[rep] = StringKey(name)
            taken_names.add(name)
    numbers = (n for n in count(1) if n not in taken_numbers)
    names = (f"k{n}" for n in count(1) if f"k{n}" not in taken_names)
    for rep in reps:
        if rep not in keys:
            if solution[rep] is P.SLOT_NUMBER:
                n = next(numbers)
                taken_numbers.add(n)
                keys[rep] = NumberKey(n)
            else:
                keys[rep] = StringKey(next(names))
    return keys


def find_witness(
    bgp: Bgp,
    solutions: Iterable[Mapping[PatternNode, FxPredicate]],
    source_iri: str = WITNESS_SOURCE,
) -> Witness:
    """The first solution that can be realised, with its instance."""
    last: WitnessConstructionError | None = None
    for sol in solutions:
        try:
            return Witness(build_witness(bgp, sol, source_iri), sol)
        except WitnessConstructionError as exc:
            last = exc
    raise WitnessConstructionError(
        f"no solution can be realised{': ' + str(last) if last else ''}"
    )

