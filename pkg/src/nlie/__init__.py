"""Exact computations with alternating n-ary brackets: identity checking,
structure analysis, certified simplicity, and symbolic polynomial brackets.
"""

from .algebra import (
    NLieAlgebra,
    NLiePoissonAlgebra,
    SkewBracketTensor,
    SymProductTensor,
    Verdict,
    Witness,
    check_assoc_comm_unital,
    check_generalized_jacobi,
    check_leibniz,
    check_poisson_identity,
)
from .algfile import AlgebraFileError, LoadedAlgebra, dumps, load_path, loads, to_document
from .constructions import (
    DerivationSet,
    TruncatedCarrier,
    check_commuting,
    check_derivation,
    jacobian_from_derivations,
    truncated_polynomial_algebra,
    vector_product_algebra,
    w_from_derivations,
)
from .fields import PrimeField, QQ, RationalField
from .guards import GuardExceeded
from .linalg import EchelonAccumulator, Matrix, SubspaceBasis, kernel, span
from .poly import (
    IDENTITIES,
    Poly,
    PolyParseError,
    jac_bracket,
    monomials_up_to,
    parse_poly,
    truncated_center,
    truncated_derived_span,
    verify_identity_truncated,
    w_bracket,
)
from .structure import (
    IdealKind,
    PipelineReport,
    ProbeReport,
    PROBE_IDS,
    QuotientMap,
    SimplicityVerdict,
    ad_basis_operators,
    ad_operator,
    brute_force_ideals,
    center,
    derived_series,
    derived_subspace,
    ideal_closure,
    is_associative_ideal,
    is_nlie_ideal,
    is_poisson_ideal,
    is_simple,
    mult_operators,
    nilradical,
    probe_lemma,
    quotient_algebra,
    radical_of_ideal,
    subalgebra_on,
    theorem1_pipeline,
    verify_simplicity_certificate,
)

__version__ = "0.1.0"
