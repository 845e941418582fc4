"""Tensor ideals, Balmer spectra and finite dualities for finitely presented
tensor extriangulated categories, with matrix factorizations and Yoneda
splicing on the side."""

from .errors import ConsistencyError, EngineError, PreconditionError, ResourceError, SchemaError
from .ideals import (
    balmer_spectrum,
    enumerate_radical_ideals,
    is_prime,
    radical_closure,
    spectrum_of_stabilization,
    thick_tensor_closure,
    thomason_bijection_check,
)
from .lattices import FiniteBoundedLattice, FinitePoset, birkhoff_round_trip, check_coherent_frame, meet_primes
from .mf import MatrixFactorization, absorption_check, mf_iso_check, mf_tensor_hat, mf_validate
from .poly import Poly, PolyMatrix, parse_poly
from .presentation import (
    CategoryPresentation,
    ExtriangleGen,
    ObjectClass,
    derived_extriangles,
    stabilize,
    tensor_obj,
    validate,
)
from .spaces import FiniteTopSpace, hochster_dual, omega, pt_space, verify_spc_identity
from .splice import ArrowSymbol, ArrowWord, ExtensionChain, hom_action, koszul_pullback, splice

__version__ = "0.1.0"
