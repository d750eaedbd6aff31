"""Static satisfiability analysis of SPARQL BGPs over Façade-X graphs."""

from __future__ import annotations

from .annotate import Algorithm, Mode, SatReport, Verdict, is_satisfiable
from .parser import extract_bgps_from_query, parse_bgp_text, serialize_bgp
from .rules import check
from .terms import Annotation, Bgp, FxPredicate, PatternNode, TriplePattern

__all__ = [
    "Algorithm",
    "Annotation",
    "Bgp",
    "FxPredicate",
    "Mode",
    "PatternNode",
    "SatReport",
    "TriplePattern",
    "Verdict",
    "check",
    "extract_bgps_from_query",
    "is_satisfiable",
    "parse_bgp_text",
    "serialize_bgp",
]
__version__ = "0.1.0"
