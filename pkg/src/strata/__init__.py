"""Intersection cohomology of simplicial stratified pseudomanifolds and
Gysin-sequence checks for modelled circle actions."""
from __future__ import annotations

from .errors import FormatError, StrataError
from .gysin import (
    ActionModel,
    LESReport,
    StrataClassification,
    VerifyReport,
    classify,
    euler_product_test,
    gysin_term_dims,
    les_feasible,
    lower_residue_dims,
    stalk_table,
    verify,
)
from .ih import AllowableComplex, allowable_complex, ih_betti, regular_part_betti, relative_betti, step_ih_betti
from .simplicial import (
    BettiTable,
    SimplicialComplex,
    barycentric_subdivision,
    cone,
    homology_betti,
    join,
    link_of_simplex,
    product,
    suspension,
)
from .stratification import (
    Perversity,
    StratifiedSpace,
    Stratum,
    cone_stratified,
    manifold_space,
    named_perversity,
    product_stratified,
    suspension_stratified,
    validate_pseudomanifold,
)

__all__ = [
    "ActionModel",
    "AllowableComplex",
    "BettiTable",
    "FormatError",
    "LESReport",
    "Perversity",
    "SimplicialComplex",
    "StrataClassification",
    "StrataError",
    "StratifiedSpace",
    "Stratum",
    "VerifyReport",
    "allowable_complex",
    "barycentric_subdivision",
    "classify",
    "cone",
    "cone_stratified",
    "euler_product_test",
    "gysin_term_dims",
    "homology_betti",
    "ih_betti",
    "join",
    "les_feasible",
    "link_of_simplex",
    "lower_residue_dims",
    "manifold_space",
    "named_perversity",
    "product",
    "product_stratified",
    "regular_part_betti",
    "relative_betti",
    "stalk_table",
    "step_ih_betti",
    "suspension",
    "suspension_stratified",
    "validate_pseudomanifold",
    "verify",
]
