"""Exact verification toolkit for Kahler-Weyl curvature on para/pseudo-Hermitian spaces."""

from .curvature import (
    gray_projector,
    gray_symmetrizer,
    higa_split,
    higa_xi,
    kahler_spaces,
    model_space,
    model_space_dim,
    ricci,
    ricci_antisym,
)
from .germs import (
    KahlerWeylObstruction,
    MetricGerm,
    curvature_at_origin,
    hermitian_germ,
    kahler_weyl,
    lee_form,
    lemma41_metric,
    levi_civita,
    nabla_g_omega,
    snapshot,
    weyl_connection,
)
from .jets import Jet
from .polyparse import parse_polynomial
from .realization import kahler_span, realize, weyl_span
from .report import Check, VerificationReport
from .space import (
    PseudoHermitianSpace,
    StructureGroupElement,
    StructureKind,
    all_configurations,
    build_space,
    build_space_pairs,
    random_structure_group_element,
    tensor_inner_product,
)
from .subspace import Subspace
from .suites import SUITES, dimension_table
from .tensor import Tensor
from .twoforms import decompose_two_tensor, gray_hervella_split, sigma, tau1

__version__ = "0.1.0"

__all__ = [
    "Check",
    "Jet",
    "KahlerWeylObstruction",
    "MetricGerm",
    "PseudoHermitianSpace",
    "SUITES",
    "StructureGroupElement",
    "StructureKind",
    "Subspace",
    "Tensor",
    "VerificationReport",
    "all_configurations",
    "build_space",
    "build_space_pairs",
    "curvature_at_origin",
    "decompose_two_tensor",
    "dimension_table",
    "gray_hervella_split",
    "gray_projector",
    "gray_symmetrizer",
    "hermitian_germ",
    "higa_split",
    "higa_xi",
    "kahler_spaces",
    "kahler_span",
    "kahler_weyl",
    "lee_form",
    "lemma41_metric",
    "levi_civita",
    "model_space",
    "model_space_dim",
    "nabla_g_omega",
    "parse_polynomial",
    "random_structure_group_element",
    "realize",
    "ricci",
    "ricci_antisym",
    "sigma",
    "snapshot",
    "tau1",
    "tensor_inner_product",
    "weyl_connection",
    "weyl_span",
]
