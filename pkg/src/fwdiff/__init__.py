"""Frobenius-Witt differentials of finitely presented rings.

The module FW(A) of a ring A is generated by symbols w(a) subject to
    w(a + b) = w(a) + w(b) - P(a, b) w(p)        (P the p-th Witt carry)
    w(a b)   = b^p w(a) + a^p w(b)
and is a module over A/pA.  For A finitely presented over F_q or Z/p^2
it has a finite presentation with one generator per variable (plus w(p)
in the mixed case) and one relation column per defining relation; fibers
of that presentation decide regularity through the rank criterion
fiber dimension = local dimension + residue-field imperfection.
"""

from .errors import (
    FlatnessRequiredError,
    FWDiffError,
    OffSchemeError,
    PresentationError,
    RingFileError,
    SizeRefusalError,
    UnsupportedClassError,
    ZeroDivisorError,
)
from .fwcore import (
    AxiomReport,
    FWPresentation,
    PresentationMorphism,
    RingPresentation,
    base_change_map,
    check_axioms,
    present_fw,
    relative_cokernel,
    twisted_relative_kahler,
    w_poly,
    w_poly_charp,
)
from .localalg import (
    PointSpec,
    PrimeSpec,
    RegularityVerdict,
    check_prdx,
    check_split_sequence,
    cotangent_dim,
    fiber_dim_point,
    fiber_dim_prime,
    local_dim,
    rational_points,
    regularity,
    residue_p_rank,
)
from .modarith import (
    GaloisField,
    GaloisRing,
    PrimeField,
    PrimeSquareRing,
    Residue,
    ZZ,
    w_base,
    witt_P,
)
from .mpoly import (
    GroebnerBasis,
    PolyRing,
    SparsePoly,
    frobenius_twist,
    groebner,
    krull_dim,
    normal_form,
    witt_P_pair,
    witt_Q,
    witt_R,
)
from .oracle import FiniteRing, UniversalModule, brute_fw, cross_check
from .ringfile import parse_ring, render_ring

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "FWDiffError",
    "FWPresentation",
    "FiniteRing",
    "FlatnessRequiredError",
    "GaloisField",
    "GaloisRing",
    "GroebnerBasis",
    "OffSchemeError",
    "PointSpec",
    "PolyRing",
    "PresentationError",
    "PresentationMorphism",
    "PrimeField",
    "PrimeSpec",
    "PrimeSquareRing",
    "RegularityVerdict",
    "Residue",
    "RingFileError",
    "RingPresentation",
    "SizeRefusalError",
    "SparsePoly",
    "UniversalModule",
    "UnsupportedClassError",
    "ZZ",
    "ZeroDivisorError",
    "base_change_map",
    "brute_fw",
    "check_axioms",
    "check_prdx",
    "check_split_sequence",
    "cotangent_dim",
    "cross_check",
    "fiber_dim_point",
    "fiber_dim_prime",
    "frobenius_twist",
    "groebner",
    "krull_dim",
    "local_dim",
    "normal_form",
    "parse_ring",
    "present_fw",
    "rational_points",
    "regularity",
    "relative_cokernel",
    "render_ring",
    "residue_p_rank",
    "twisted_relative_kahler",
    "w_base",
    "w_poly",
    "w_poly_charp",
    "witt_P",
    "witt_P_pair",
    "witt_Q",
    "witt_R",
]
