"""Structural gates: unsupported joins, cycles and unique paths to the root."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

from .terms import Bgp, FxPredicate, PatternNode, TriplePattern, match_nodes

TriplePath = list[TriplePattern]


def has_unsupported_join(bgp: Bgp) -> bool:
    """True when a node is used both as a property and as a subject or object.

    The sets grow triple by triple, so collisions inside one triple and
    across triples are both caught.
    """
    subjects: set[PatternNode] = set()
    properties: set[PatternNode] = set()
    objects: set[PatternNode] = set()
    for s, p, o in bgp:
        subjects.add(s)
        properties.add(p)
        objects.add(o)
        if s in properties or o in properties or p in subjects or p in objects:
            return True
    return False


def _successors(bgp: Bgp) -> dict[PatternNode, list[PatternNode]]:
    out: dict[PatternNode, list[PatternNode]] = {}
    for s, _, o in bgp:
        out.setdefault(s, []).append(o)
    return out


def has_cycle(bgp: Bgp) -> bool:
    """Depth-first walk along subject-to-object edges from every subject.

    A node reached again on the current walk means a directed cycle; a
    triple whose subject equals its object counts.
    """
    succ = _successors(bgp)
    done: set[PatternNode] = set()
    for start in succ:
        if start in done:
            continue
        on_path = {start}
        stack = [(start, iter(succ.get(start, ())))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                on_path.discard(node)
                done.add(node)
            elif nxt in on_path:
                return True
            elif nxt not in done:
                on_path.add(nxt)
                stack.append((nxt, iter(succ.get(nxt, ()))))
    return False


def walk_backwards(seed: Sequence[TriplePattern], bgp: Bgp) -> TriplePath:
    """Extends ``seed`` with the chain of triples pointing at its last subject.

    When several triples could be prepended, the first in BGP order wins.
    The BGP is assumed acyclic.
    """
    if not seed:
        raise ValueError("walk_backwards needs a non-empty seed")
    path = list(seed)
    # bound the walk so a cyclic input cannot loop forever
    for _ in range(len(bgp) + 1):
        last_subject = path[-1].subject
        prev = next((t for t in bgp if t.object == last_subject), None)
        if prev is None:
            return path
        path.append(prev)
    raise ValueError("walk_backwards did not terminate; is the BGP cyclic?")


def nodes_path(path: Sequence[TriplePattern]) -> list[PatternNode]:
    """The alternating node/property sequence read backwards along ``path``."""
    if not path:
        raise ValueError("nodes_path needs a non-empty path")
    first = path[0]
    out = [first.object, first.predicate, first.subject]
    for t in path[1:]:
        out.extend((t.predicate, t.subject))
    return out


def _is_root_subject(node: PatternNode, bgp: Bgp, annotation: Mapping[PatternNode, FxPredicate]) -> bool:
    return any(
        t.subject == node and annotation.get(t.object) is FxPredicate.FX_ROOT for t in bgp
    )


def satisfies_unique_path_to_root(
    bgp: Bgp, annotation: Mapping[PatternNode, FxPredicate], node: PatternNode
) -> bool:
    incoming = [t for t in bgp if t.object == node]
    for i, left in enumerate(incoming):
        for right in incoming[i + 1 :]:
            if left.subject == right.subject and left.predicate == right.predicate:
                continue
            lpath = nodes_path(walk_backwards([left], bgp))
            rpath = nodes_path(walk_backwards([right], bgp))
            if len(lpath) == len(rpath):
                if not all(match_nodes(a, b) for a, b in zip(lpath, rpath)):
                    return False
            else:
                shortest = lpath if len(lpath) < len(rpath) else rpath
                if _is_root_subject(shortest[-1], bgp, annotation):
                    return False
    return True
