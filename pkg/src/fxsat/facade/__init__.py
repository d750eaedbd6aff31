"""Façade-X model, façadifiers, materialiser, BGP oracle and witness builder."""

from __future__ import annotations

from .facadify import facadify_csv, facadify_file, facadify_json, facadify_xml
from .materialize import EntityMode, FxQuad, materialize, to_nquads, unmaterialize
from .model import FxInstance, validate_model
from .oracle import bgp_match, has_match
from .witness import WitnessConstructionError, build_witness, find_witness

__all__ = [
    "EntityMode",
    "FxInstance",
    "FxQuad",
    "WitnessConstructionError",
    "bgp_match",
    "build_witness",
    "facadify_csv",
    "facadify_file",
    "facadify_json",
    "facadify_xml",
    "find_witness",
    "has_match",
    "materialize",
    "to_nquads",
    "unmaterialize",
    "validate_model",
]
