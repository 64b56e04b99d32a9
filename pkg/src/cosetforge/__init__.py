"""cosetforge: permutation groups, coset graphs and arc-transitivity checks
for tetravalent 2-arc-transitive graphs."""

from __future__ import annotations

__version__ = "0.1.0"

from .atlas import load_atlas, load_example_fixture, verify_index_table
from .chain import PermGroup, StabilizerChain, build_chain
from .cosets import build_coset_graph, canonical_rep, coset_action, double_coset
from .feasible import FeasibilityQuery, scan_feasible, verify_feasible
from .graph import SimpleGraph, from_sparse6, to_sparse6
from .perm import Permutation, format_cycles, parse_cycles
from .subgroups import SubgroupHandle, census, iso_type
from .symmetry import are_isomorphic, automorphism_group, is_s_arc_transitive

__all__ = [
    "__version__",
    "Permutation",
    "parse_cycles",
    "format_cycles",
    "StabilizerChain",
    "PermGroup",
    "build_chain",
    "SubgroupHandle",
    "census",
    "iso_type",
    "coset_action",
    "canonical_rep",
    "double_coset",
    "build_coset_graph",
    "FeasibilityQuery",
    "scan_feasible",
    "verify_feasible",
    "SimpleGraph",
    "to_sparse6",
    "from_sparse6",
    "automorphism_group",
    "are_isomorphic",
    "is_s_arc_transitive",
    "load_atlas",
    "load_example_fixture",
    "verify_index_table",
]
