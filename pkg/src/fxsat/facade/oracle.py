"""Brute-force BGP evaluation over materialised quads.

The matcher is deliberately plain: a backtracking nested-loop join that
binds one triple at a time, taking next the triple with the most positions
already fixed.  Connected components of the BGP are solved separately and
combined as a product, so independent triples do not multiply the search.
"""

from __future__ import annotations

import itertools
from collections.abc import Collection, Iterable, Iterator, Mapping

from ..terms import Bgp, NodeKind, PatternNode, TriplePattern
from .materialize import FxQuad

Binding = dict[PatternNode, PatternNode]
_Term = tuple[PatternNode, PatternNode, PatternNode]


class _Index:
    def __init__(self, triples: Iterable[_Term]) -> None:
        self.all = list(dict.fromkeys(triples))
        self.by: tuple[dict[PatternNode, list[_Term]], ...] = ({}, {}, {})
        for t in self.all:
            for pos in range(3):
                self.by[pos].setdefault(t[pos], []).append(t)

    def candidates(self, fixed: list[PatternNode | None]) -> list[_Term]:
        best = self.all
        for pos, value in enumerate(fixed):
            if value is not None:
                hits = self.by[pos].get(value, [])
                if len(hits) < len(best):
                    best = hits
        return best


def _components(triples: list[TriplePattern]) -> list[list[TriplePattern]]:
    """Groups triples that share a variable, keeping source order inside."""
    parent = list(range(len(triples)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[PatternNode, int] = {}
    for i, t in enumerate(triples):
        for node in t:
            if node.is_var:
                if node in owner:
                    parent[find(i)] = find(owner[node])
                else:
                    owner[node] = i
    groups: dict[int, list[TriplePattern]] = {}
    for i, t in enumerate(triples):
        groups.setdefault(find(i), []).append(t)
    return list(groups.values())


def _solve(triples: list[TriplePattern], index: _Index) -> Iterator[Binding]:
    def fixed(t: TriplePattern, binding: Binding) -> list[PatternNode | None]:
        return [binding.get(n) if n.is_var else n for n in t]

    def walk(remaining: list[TriplePattern], binding: Binding) -> Iterator[Binding]:
        if not remaining:
            yield dict(binding)
            return
        # most constrained triple first; ties keep source order
        t = max(remaining, key=lambda x: sum(v is not None for v in fixed(x, binding)))
        rest = [x for x in remaining if x is not t]
        want = fixed(t, binding)
        for term in index.candidates(want):
            added: list[PatternNode] = []
            ok = True
            for node, value, got in zip(t, want, term):
                if value is not None:
                    if value != got:
                        ok = False
                        break
                elif node in binding:
                    # the same variable twice in one triple
                    if binding[node] != got:
                        ok = False
                        break
                else:
                    binding[node] = got
                    added.append(node)
            if ok:
                yield from walk(rest, binding)
            for node in added:
                del binding[node]

    yield from walk(list(triples), {})


def iter_matches(
    bgp: Bgp, quads: Collection[FxQuad], graph: str | None = None
) -> Iterator[Binding]:
    """Distinct solutions of ``bgp`` over the union of graphs, or over one graph."""
    index = _Index(
        (q.subject, q.predicate, q.object) for q in quads if graph is None or q.graph == graph
    )
    if not bgp.triples:
        yield {}
        return
    parts: list[list[Binding]] = []
    for comp in _components(list(bgp.triples)):
        sols = _unique(_solve(comp, index))
        if not sols:
            return
        parts.append(sols)
    seen: set[frozenset] = set()
    for combo in itertools.product(*parts):
        merged: Binding = {}
        for b in combo:
            merged.update(b)
        key = frozenset(merged.items())
        if key not in seen:
            seen.add(key)
            yield merged


def _unique(bindings: Iterable[Binding]) -> list[Binding]:
    out: dict[frozenset, Binding] = {}
    for b in bindings:
        out.setdefault(frozenset(b.items()), b)
    return list(out.values())


def bgp_match(
    bgp: Bgp, quads: Collection[FxQuad], graph: str | None = None, limit: int | None = None
) -> list[Binding]:
    return list(itertools.islice(iter_matches(bgp, quads, graph), limit))


def has_match(bgp: Bgp, quads: Collection[FxQuad], graph: str | None = None) -> bool:
    return next(iter_matches(bgp, quads, graph), None) is not None


def project(
    bindings: Iterable[Mapping[PatternNode, PatternNode]], names: Iterable[str]
) -> list[dict[str, PatternNode]]:
    """Bindings restricted to the named variables; blank nodes never project."""
    wanted = set(names)
    return [
        {n.label: v for n, v in b.items() if n.kind is NodeKind.VARIABLE and n.label in wanted}
        for b in bindings
    ]
