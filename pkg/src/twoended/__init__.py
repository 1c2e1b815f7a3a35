"""Harmonic functions, currents and symmetry checks on 2-ended layered graphs."""

from .electric import EdgeField, NumericMode, VertexField, unit_current
from .graph import Graph, LayeredSpec, builtin_spec, expand, load_spec
from .harmonic import limit_harmonic, periodic_harmonic

__all__ = [
    "EdgeField",
    "Graph",
    "LayeredSpec",
    "NumericMode",
    "VertexField",
    "builtin_spec",
    "expand",
    "limit_harmonic",
    "load_spec",
    "periodic_harmonic",
    "unit_current",
]
