"""Permutation equivalence of linear codes via projector graphs over F_q."""

from .census import (
    CensusReport,
    count_gi_reducible,
    count_K,
    count_L,
    count_L_eps,
    gaussian_binomial,
    grassmannian_census,
    orth_group_order,
    reference_code,
    weil_count,
)
from .code import (
    LinearCode,
    Permutation,
    ReducibilityTag,
    ReducibilityVerdict,
    StructureParams,
    apply_permutation,
    classify,
    code_make,
    dual,
    gram,
    hull_basis,
    hull_dim,
    is_m_lcd,
)
from .field import FieldElement, FieldSpec, field_make, field_of_order
from .graph import PlainGraph, WeightedDigraph, export_unweighted, refine, wdg_iso
from .matrix import MatrixFq
from .pep import PepReason, PepTag, PepVerdict, find_shared_b, necessity_witness, pep_brute_force, pep_solve
from .projector import NotMLCD, Projector, projector

__version__ = "0.1.0"
