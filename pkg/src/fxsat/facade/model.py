"""In-memory Façade-X instances and the axiom validator."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType


@dataclass(frozen=True, order=True)
class NumberKey:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("number slots start at 1")

    def __str__(self) -> str:
        return str(self.n)


@dataclass(frozen=True, order=True)
class StringKey:
    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("string slot names are non-empty")

    def __str__(self) -> str:
        return self.name


SlotKey = NumberKey | StringKey


@dataclass(frozen=True)
class Value:
    lexical: str
    datatype: str | None = None


@dataclass(frozen=True)
class Child:
    container: str


Holding = Value | Child


@dataclass(frozen=True)
class Slot:
    owner: str
    key: SlotKey
    holds: Holding


@dataclass(frozen=True)
class FxInstance:
    """A Façade-X model instance for a single data source.

    ``roots`` is a set so that hand-built invalid instances can be
    represented; valid instances have exactly one root, see :attr:`root`.
    ``iris`` optionally pins the IRI of individual containers when the
    instance is materialised with IRI entities.
    """

    source_iri: str
    containers: frozenset[str]
    roots: frozenset[str]
    slots: tuple[Slot, ...] = ()
    types: frozenset[tuple[str, str]] = frozenset()
    iris: Mapping[str, str] = field(default_factory=lambda: MappingProxyType({}))

    @property
    def root(self) -> str:
        if len(self.roots) != 1:
            raise ValueError(f"instance has {len(self.roots)} roots")
        return next(iter(self.roots))

    def slots_of(self, container: str) -> list[Slot]:
        return [s for s in self.slots if s.owner == container]

    def children(self) -> dict[str, list[tuple[Slot, str]]]:
        out: dict[str, list[tuple[Slot, str]]] = {}
        for s in self.slots:
            if isinstance(s.holds, Child):
                out.setdefault(s.owner, []).append((s, s.holds.container))
        return out

    def parent_slots(self) -> dict[str, list[Slot]]:
        out: dict[str, list[Slot]] = {}
        for s in self.slots:
            if isinstance(s.holds, Child):
                out.setdefault(s.holds.container, []).append(s)
        return out


class InstanceBuilder:
    """Mutable helper used by the façadifiers and the witness builder."""

    def __init__(self, source_iri: str) -> None:
        self.source_iri = source_iri
        self.containers: list[str] = []
        self.roots: list[str] = []
        self.slots: list[Slot] = []
        self.types: list[tuple[str, str]] = []
        self.iris: dict[str, str] = {}

    def container(self, cid: str, root: bool = False) -> str:
        self.containers.append(cid)
        if root:
            self.roots.append(cid)
        return cid

    def value(self, owner: str, key: SlotKey, lexical: str, datatype: str | None = None) -> None:
        self.slots.append(Slot(owner, key, Value(lexical, datatype)))

    def child(self, owner: str, key: SlotKey, cid: str) -> str:
        self.container(cid)
        self.slots.append(Slot(owner, key, Child(cid)))
        return cid

    def typed(self, cid: str, name: str) -> None:
        self.types.append((cid, name))

    def build(self) -> FxInstance:
        return FxInstance(
            self.source_iri,
            frozenset(self.containers),
            frozenset(self.roots),
            tuple(self.slots),
            frozenset(self.types),
            MappingProxyType(dict(self.iris)),
        )


# violation labels used by validate_model
SINGLE_ROOT = "single-root"
ROOT_NOT_HELD = "root-not-held"
UNKNOWN_CONTAINER = "unknown-container"
SLOT_KEY_UNIQUE = "slot-key-unique"
SINGLE_INCOMING = "single-incoming-slot"
SELF_HOLDING = "self-holding"
ACYCLIC = "acyclic"
REACHABLE = "reachable-from-root"
NON_ROOT_HELD = "non-root-held"


def _find_cycle(edges: Mapping[str, Iterable[str]], nodes: Iterable[str]) -> bool:
    done: set[str] = set()
    for start in nodes:
        if start in done:
            continue
        on_path: set[str] = set()
        stack: list[tuple[str, Iterable[str]]] = [(start, iter(edges.get(start, ())))]
        on_path.add(start)
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)  # type: ignore[call-overload]
            if nxt is None:
                stack.pop()
                on_path.discard(node)
                done.add(node)
            elif nxt in on_path:
                return True
            elif nxt not in done:
                on_path.add(nxt)
                stack.append((nxt, iter(edges.get(nxt, ()))))
    return False


def validate_model(instance: FxInstance) -> list[str]:
    """Labels of the model axioms the instance violates; empty when valid."""
    violations: list[str] = []

    def flag(label: str) -> None:
        if label not in violations:
            violations.append(label)

    if len(instance.roots) != 1:
        flag(SINGLE_ROOT)
    known = instance.containers
    for r in instance.roots:
        if r not in known:
            flag(UNKNOWN_CONTAINER)
    for cid, _ in instance.types:
        if cid not in known:
            flag(UNKNOWN_CONTAINER)

    seen_keys: set[tuple[str, SlotKey]] = set()
    for s in instance.slots:
        if s.owner not in known:
            flag(UNKNOWN_CONTAINER)
        if isinstance(s.holds, Child) and s.holds.container not in known:
            flag(UNKNOWN_CONTAINER)
        if (s.owner, s.key) in seen_keys:
            # one key, two holdings: the slot would hold two things
            flag(SLOT_KEY_UNIQUE)
        seen_keys.add((s.owner, s.key))
        if isinstance(s.holds, Child) and s.holds.container == s.owner:
            flag(SELF_HOLDING)

    parents = instance.parent_slots()
    for cid, held_by in parents.items():
        if len(held_by) > 1:
            flag(SINGLE_INCOMING)
        if cid in instance.roots:
            flag(ROOT_NOT_HELD)
    for cid in known:
        if cid not in instance.roots and cid not in parents:
            flag(NON_ROOT_HELD)

    edges = {owner: [c for _, c in kids] for owner, kids in instance.children().items()}
    if _find_cycle(edges, sorted(known)):
        flag(ACYCLIC)

    reached: set[str] = set()
    frontier = [r for r in instance.roots if r in known]
    while frontier:
        node = frontier.pop()
        if node in reached:
            continue
        reached.add(node)
        frontier.extend(edges.get(node, ()))
    if reached != set(known):
        flag(REACHABLE)
    return violations
