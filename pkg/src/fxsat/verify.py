"""End-to-end agreement between the analyzer, the witness builder and the oracle."""

from __future__ import annotations

import enum
from collections.abc import Collection, Sequence
from dataclasses import dataclass

from .annotate import DEFAULT_TIMEOUT, Algorithm, Mode, Verdict, is_satisfiable
from .closure import merge_closure
from .facade.materialize import EntityMode, FxQuad, materialize
from .facade.oracle import has_match
from .facade.witness import Witness, WitnessConstructionError, find_witness
from .terms import Bgp


class Agreement(enum.Enum):
    AGREE = "agree"
    DISAGREE = "disagree"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class VerifyResult:
    verdict: Verdict
    agreement: Agreement
    detail: str
    witness: Witness | None = None

    @property
    def ok(self) -> bool:
        return self.agreement is Agreement.AGREE


def witness_for(bgp: Bgp, timeout: float | None = DEFAULT_TIMEOUT) -> Witness | None:
    """A realised witness for a satisfiable BGP, or None if none is found."""
    first = is_satisfiable(bgp, Algorithm.BOTTOM_UP, Mode.FIRST, timeout)
    if first.verdict is not Verdict.SATISFIABLE:
        return None
    try:
        return find_witness(bgp, first.solutions)
    except WitnessConstructionError:
        pass
    full = is_satisfiable(bgp, Algorithm.BOTTOM_UP, Mode.ALL, timeout)
    candidates = [s for s in full.solutions if merge_closure(bgp, s)]
    try:
        return find_witness(bgp, candidates)
    except WitnessConstructionError:
        return None


def verify_bgp(
    bgp: Bgp,
    datasets: Sequence[Collection[FxQuad]] = (),
    timeout: float | None = DEFAULT_TIMEOUT,
) -> VerifyResult:
    """Checks the verdict against a witness (if satisfiable) or the data (if not).

    A satisfiable verdict needs a witness instance on which the oracle finds a
    match.  An unsatisfiable verdict must give no oracle match on any dataset.
    """
    report = is_satisfiable(bgp, Algorithm.BOTTOM_UP, Mode.FIRST, timeout)
    if report.verdict is Verdict.TIMEOUT:
        return VerifyResult(report.verdict, Agreement.TIMEOUT, "analyzer timed out")
    if report.verdict is Verdict.UNSATISFIABLE:
        for i, quads in enumerate(datasets):
            if has_match(bgp, quads):
                return VerifyResult(
                    report.verdict, Agreement.DISAGREE,
                    f"unsatisfiable, yet dataset {i} has a match",
                )
        return VerifyResult(
            report.verdict, Agreement.AGREE,
            f"unsatisfiable ({report.reason}); no match in {len(datasets)} dataset(s)",
        )
    wit = witness_for(bgp, timeout)
    if wit is None:
        return VerifyResult(report.verdict, Agreement.DISAGREE, "satisfiable, but no witness")
    if not has_match(bgp, materialize(wit.instance, EntityMode.IRIS)):
        return VerifyResult(
            report.verdict, Agreement.DISAGREE, "satisfiable, but the witness has no match", wit
        )
    return VerifyResult(report.verdict, Agreement.AGREE, "satisfiable; witness matches", wit)
