"""Twisted generalized Weyl algebras attached to multiquivers.

Exact polynomial and Weyl-algebra arithmetic, the representation by
differential operators, and the Cartan-matrix analyses built on it.
"""
from .cartan import (
    GCM,
    DynkinDiagram,
    dynkin_diagram,
    gcm,
    gcm_oracle,
    lie_preset,
    lie_relation_check,
    serre_check,
    tc_morphism_check,
)
from .errors import CrossCheckError, CyclePresent, DegreeBoundError, MultiquiverError, ParseError
from .graph import (
    Edge,
    End,
    IncidenceMatrix,
    Multiquiver,
    equilibrium_analysis,
    incidence_matrix,
    is_acyclic,
    kernel_basis,
    multiquiver_from_matrix,
    parse_multiquiver,
)
from .poly import Poly, parse_poly
from .rep import (
    faithfulness_report,
    local_surjectivity_report,
    order_for_parity,
    ordered_product_formula,
    phi,
    reduce_tgw_word,
)
from .ring import TGWDatum, build_t, consistency_check, difference_power, euler_reduce, shift_apply
from .scalar import GaussianRational, I
from .weyl import WeylElement, format_weyl, normal_order_word, parse_weyl, pmn, weyl_mul, weyl_star

__version__ = "0.1.0"

__all__ = [
    "build_t",
    "consistency_check",
    "CrossCheckError",
    "CyclePresent",
    "DegreeBoundError",
    "difference_power",
    "dynkin_diagram",
    "DynkinDiagram",
    "Edge",
    "End",
    "equilibrium_analysis",
    "euler_reduce",
    "faithfulness_report",
    "format_weyl",
    "GaussianRational",
    "GCM",
    "gcm",
    "gcm_oracle",
    "I",
    "incidence_matrix",
    "IncidenceMatrix",
    "is_acyclic",
    "kernel_basis",
    "lie_preset",
    "lie_relation_check",
    "local_surjectivity_report",
    "Multiquiver",
    "multiquiver_from_matrix",
    "MultiquiverError",
    "normal_order_word",
    "order_for_parity",
    "ordered_product_formula",
    "parse_multiquiver",
    "parse_poly",
    "parse_weyl",
    "ParseError",
    "phi",
    "pmn",
    "Poly",
    "reduce_tgw_word",
    "serre_check",
    "shift_apply",
    "tc_morphism_check",
    "TGWDatum",
    "weyl_mul",
    "weyl_star",
    "WeylElement",
]
