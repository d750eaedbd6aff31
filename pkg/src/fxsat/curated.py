"""The curated benchmark suite: 27 labelled BGPs pinned as ``.bgp`` fixtures.

Labels read ``<S|N>_<size><family>``: S is satisfiable and N is not, the size
is the number of triples, and the family is T (independent all-variable
triples), J (joins) or P_C / P_R (object joins onto a container or onto
fx:root).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .parser import parse_bgp_text
from .terms import Bgp

_LABEL = re.compile(r"^(?P<sat>[SN])_(?P<size>[1-9][0-9]*)(?P<family>T|J|P_C|P_R)$")


@dataclass(frozen=True)
class CuratedCase:
    label: str
    bgp: Bgp
    expected_satisfiable: bool
    # complete-mode bottom-up counts, set only where a count is pinned
    expected_found: int | None = None
    expected_hypotheses: int | None = None

    def __post_init__(self) -> None:
        decoded = decode_label(self.label)
        if decoded.satisfiable != self.expected_satisfiable:
            raise ValueError(f"{self.label}: label and expected verdict disagree")

    @property
    def family(self) -> str:
        return decode_label(self.label).family

    @property
    def kind(self) -> str:
        """The one-letter type column of the report (T, J or P)."""
        return self.family[0]

    @property
    def size(self) -> int:
        return len(self.bgp)


@dataclass(frozen=True)
class DecodedLabel:
    satisfiable: bool
    size: int
    family: str


def decode_label(label: str) -> DecodedLabel:
    m = _LABEL.match(label)
    if m is None:
        raise ValueError(f"not a curated label: {label!r}")
    return DecodedLabel(m["sat"] == "S", int(m["size"]), m["family"])


# label -> (found, hypotheses) in complete bottom-up mode
_COUNTS: dict[str, tuple[int, int]] = {
    "S_1T": (6, 12),
    "S_2T": (36, 144),
    "S_3T": (216, 1728),
    "S_4T": (1296, 20736),
    "S_5T": (7776, 248832),
    "S_2J": (36, 144),
    "S_3J": (60, 432),
    "S_4J": (300, 5184),
    "S_2P_R": (1, 36),
    "S_3P_C": (4, 18),
    "S_4P_C": (8, 54),
    "S_5P_C": (16, 162),
    # unsatisfiable cases test every hypothesis the gates let through
    "N_1T": (0, 2),
    "N_2T": (0, 24),
    "N_3T": (0, 288),
    "N_4T": (0, 3456),
    "N_5T": (0, 41472),
    "N_3P_C": (0, 18),
    "N_4P_C": (0, 54),
    "N_5P_C": (0, 162),
    "N_3P_R": (0, 36),
}

LABELS: tuple[str, ...] = (
    "N_1T", "N_2J", "N_2P_R", "N_2T", "N_3J", "N_3P_C", "N_3P_R", "N_3T", "N_4J",
    "N_4P_C", "N_4T", "N_5J", "N_5P_C", "N_5T", "S_1T", "S_2J", "S_2P_R", "S_2T",
    "S_3J", "S_3P_C", "S_3T", "S_4J", "S_4P_C", "S_4T", "S_5J", "S_5P_C", "S_5T",
)


def fixture_text(label: str) -> str:
    return resources.files("fxsat.data.curated").joinpath(f"{label}.bgp").read_text("utf-8")


def load_case(label: str) -> CuratedCase:
    decoded = decode_label(label)
    bgp = parse_bgp_text(fixture_text(label), source=f"{label}.bgp")
    if len(bgp) != decoded.size:
        raise ValueError(f"{label}: fixture has {len(bgp)} triples")
    found, hyps = _COUNTS.get(label, (None, None))
    return CuratedCase(label, bgp, decoded.satisfiable, found, hyps)


def curated_suite() -> list[CuratedCase]:
    return [load_case(label) for label in LABELS]
