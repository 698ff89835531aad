"""Exact abelian-group bookkeeping for homotopy-group derivations."""

from .abelian import (
    CanonicalGroup,
    GLOBAL,
    IntMatrix,
    Locality,
    direct_sum,
    enumerate_abelian_groups,
    is_isomorphic,
    localize,
    normalize,
    order,
    p_component,
    smith_normal_form,
)
from .notation import format_group, parse_group

__all__ = [
    "CanonicalGroup",
    "GLOBAL",
    "IntMatrix",
    "Locality",
    "direct_sum",
    "enumerate_abelian_groups",
    "format_group",
    "is_isomorphic",
    "localize",
    "normalize",
    "order",
    "p_component",
    "parse_group",
    "smith_normal_form",
]
