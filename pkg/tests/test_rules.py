from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from fxsat.annotate import initial_annotation
from fxsat.rules import (
    OK,
    RULES,
    CheckOutcome,
    GroundChecker,
    MissingEntryError,
    apply_rules_to_node,
    check,
    refine,
)
from fxsat.structure import has_cycle, has_unsupported_join
from fxsat.terms import GROUND, FxPredicate, iri, var

from helpers import bgp, random_bgp

P = FxPredicate
GROUND_LIST = sorted(GROUND, key=lambda g: g.value)


def test_nineteen_rules_with_distinct_ids():
    assert [r.id for r in RULES] == [f"R{i}" for i in range(1, 20)]


def test_outcome_invariant():
    assert bool(OK) and OK.rule is None
    with pytest.raises(ValueError):
        CheckOutcome(False)
    with pytest.raises(ValueError):
        CheckOutcome(True, "R1")


def test_missing_entries_are_an_error():
    b = bgp("?s ?p ?o .")
    with pytest.raises(MissingEntryError):
        check({var("s"): P.CONTAINER}, b)


def test_refinement_from_the_top_terms():
    b = bgp('?s rdf:type ?t . ?s xyz:name "x" . ?s rdf:_1 ?c . ?c ?p ?v .')
    outcome, m = refine(initial_annotation(b), b)
    assert outcome
    assert m[var("s")] is P.CONTAINER
    assert m[var("c")] is P.CONTAINER
    assert m[iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#_1")] is P.SLOT_NUMBER
    assert m[iri("http://sparql.xyz/facade-x/data/name")] is P.SLOT_STRING
    # ?p holds a Container, so it is at least a Slot
    assert m[var("p")] in (P.SLOT, P.PROPERTY)


@pytest.mark.parametrize(
    ("text", "focus", "annotation", "rule"),
    [
        # an IRI other than fx:root cannot be the root marker
        ("?s ?p <http://e/r> .", "<http://e/r>", P.FX_ROOT, "R13"),
        # fx:root is never a type
        ("?s ?p fx:root .", "<http://sparql.xyz/facade-x/ns/root>", P.TYPE, "R2"),
        # an IRI cannot be a value
        ("?s ?p <http://e/v> .", "<http://e/v>", P.VALUE, "R15"),
        # one subject, one slot, two different constants
        ('?s rdf:_1 "a" . ?s rdf:_1 "b" .', "?s", P.CONTAINER, "R17"),
        # the root cannot be held
        ("?r rdf:type ?x . ?c ?p ?r .", "?x", P.FX_ROOT, "R18"),
    ],
)
def test_rule_violations(text, focus, annotation, rule):
    b = bgp(text)
    m = {n: g for n, g in initial_annotation(b).items()}
    node = next(n for n in b.nodes() if str(n) == focus)
    m[node] = annotation
    outcome, _ = refine(m, b)
    assert not outcome
    assert outcome.rule == rule


def test_position_guard_rejects_hand_written_maps():
    b = bgp("?s ?p ?o .")
    outcome = check({var("s"): P.VALUE, var("p"): P.SLOT_NUMBER, var("o"): P.VALUE}, b)
    assert not outcome and outcome.rule == "POS"


def test_apply_rules_to_single_node():
    b = bgp('?s ?p "x" .')
    m = dict(initial_annotation(b))
    assert apply_rules_to_node(b, var("p"), m)
    with pytest.raises(MissingEntryError):
        apply_rules_to_node(b, var("zz"), m)


def _analysable(b) -> bool:
    return not has_cycle(b) and not has_unsupported_join(b)


@settings(max_examples=400, suppress_health_check=[HealthCheck.too_slow])
@given(st.randoms(use_true_random=False), st.data())
def test_compiled_checker_agrees_with_rule_by_rule_check(rng, data):
    b = random_bgp(rng, max_triples=5)
    if not _analysable(b):
        return
    nodes = b.nodes()
    roles = data.draw(st.lists(st.sampled_from(GROUND_LIST), min_size=len(nodes), max_size=len(nodes)))
    m = dict(zip(nodes, roles))
    compiled = GroundChecker(b)
    assert compiled(m) == bool(check(m, b))
    assert compiled.check_row(roles) == bool(check(m, b))


@settings(max_examples=150, suppress_health_check=[HealthCheck.too_slow])
@given(st.randoms(use_true_random=False), st.data())
def test_check_is_independent_of_triple_order(rng, data):
    b = random_bgp(rng, max_triples=5)
    if not _analysable(b):
        return
    shuffled = type(b)(data.draw(st.permutations(b.triples)))
    nodes = b.nodes()
    roles = data.draw(st.lists(st.sampled_from(GROUND_LIST), min_size=len(nodes), max_size=len(nodes)))
    m = dict(zip(nodes, roles))
    assert bool(check(m, b)) == bool(check(m, shuffled))
