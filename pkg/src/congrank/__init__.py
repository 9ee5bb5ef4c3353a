"""congrank: exact finite computations behind a rank-based splitting obstruction.

Four layers: scalar arithmetic over Z/p^e and Q(zeta_p), matrix groups with
congruence filtrations and full enumeration, symplectic subspace machinery
with Lagrangian enumeration, and the twisted monomial algebra whose
commutator pairing recovers the standard symplectic form.  On top sits the
threshold/verdict calculator and an orchestrated self-test grid.
"""

__version__ = "0.1.0"

from .errors import (
    BadLevel,
    CongrankError,
    DimensionMismatch,
    GroupTooLarge,
    InfeasibleError,
    ModulusMismatch,
    NonScalarCommutator,
    NotAUnit,
    NotInvertible,
    OrderExceedsBound,
    PresentationMismatch,
    SearchBudgetExceeded,
    SpaceTooLarge,
    Unsupported,
    ZeroElement,
)
from .matgroup import (
    GroupTable,
    SquareMatrix,
    enumerate_group,
    group_from_elements,
    group_from_generators,
    group_order_oracle,
    unitriangular_group,
)
from .modring import (
    CyclotomicScalar,
    ModulusContext,
    as_zeta_power,
    is_prime,
    modulus,
    normalize,
    p_valuation,
    unit_inverse,
    zeta_power,
)
from .prank import (
    InvolutionCensus,
    KernelLemmaReport,
    RankWitness,
    SubadditivityReport,
    congruence_kernel_elements,
    expected_sl2_rank,
    involution_census_sl2,
    lie_kernel_basis,
    order_p_elements,
    p_rank,
    rank_upper_bound,
    subadditivity_check,
    sylow_restricted_rank,
    verify_kernel_lemma,
)
from .selftest import run_selftest
from .symbolalg import (
    AlgebraElement,
    AlgebraPresentation,
    cocycle,
    commutator_pairing,
    leading_term,
    multiply,
    pairing_matches_standard_form,
    split_permutation,
    valuation,
    value_group_index,
)
from .symplectic import (
    SymplecticSpace,
    SymplecticSubspace,
    enumerate_lagrangians,
    is_maximal_isotropic,
    is_totally_isotropic,
    lagrangian_count_oracle,
    lagrangian_order_check,
    rref,
)
from .verdict import (
    ChainStep,
    VerdictParams,
    VerdictReport,
    galois_rank_bound,
    sl_rank_bound,
    threshold,
    verdict,
)
