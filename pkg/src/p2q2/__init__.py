"""Groups of order p^2 q^2: catalog, automorphism groups, and verification."""

from .catalog import (
    GroupSpec,
    TypeParams,
    admissible,
    build,
    derive_params,
    enumerate_admissible,
    format_spec,
    make_spec,
    parse_spec,
)
from .group_core import CAYLEY_CAP, PcGroup, PcPresentation, collect, presentation
from .autom import (
    AutGroup,
    AutMatrix,
    AutReport,
    brute_aut,
    check_qr_decomposition,
    construct_qr,
    expansion_sums_match,
    predicted,
    preserves_normal_factor,
    verify,
    verify_aut_matrix,
    verify_many,
)

__all__ = [
    "GroupSpec",
    "TypeParams",
    "admissible",
    "build",
    "derive_params",
    "enumerate_admissible",
    "format_spec",
    "make_spec",
    "parse_spec",
    "CAYLEY_CAP",
    "PcGroup",
    "PcPresentation",
    "collect",
    "presentation",
    "AutGroup",
    "AutMatrix",
    "AutReport",
    "brute_aut",
    "check_qr_decomposition",
    "construct_qr",
    "expansion_sums_match",
    "predicted",
    "preserves_normal_factor",
    "verify",
    "verify_aut_matrix",
    "verify_many",
]

__version__ = "0.1.0"
