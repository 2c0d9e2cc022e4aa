"""Ramification criteria for tame local Galois representations mod p^n.

Exact arithmetic over Z/p^n, the resultant invariant F(A, b) = Res(f_A(x), f_A(bx)),
exact locus counts in GL_m(Z/p^n) and a Chebotarev-style density simulator.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    BadParam,
    Degenerate,
    DimMismatch,
    EmptySlice,
    NonInvertible,
    NonUnit,
    PrecisionTooLow,
    RamificationError,
    RingMismatch,
    TooLarge,
)
from .padic import Residue, RingSpec, add, inv, mul, unit_order, valuation  # noqa: F401
from .matrix import (  # noqa: F401
    CharPoly,
    Poly,
    ResidueMatrix,
    char_poly,
    det,
    is_unipotent,
    mat_inv,
    mat_mul,
    reduced_invariant,
    resultant,
    resultant_invariant,
    substitute_bx,
    trace,
)
from .tame import (  # noqa: F401
    SemistabilityThreshold,
    TamePair,
    charpoly_qtwist_check,
    construct_gl2_ramified_pair,
    general_ramified_criterion,
    gl2_ramified_criterion,
    is_detectably_ramified,
    semistability_threshold,
    verify_relation,
)
from .locus import (  # noqa: F401
    Congruence,
    DetCoupled,
    FullGL,
    LocusRecord,
    LocusReport,
    ProductGL1,
    SubgroupSpec,
    count_locus,
    decay_fit,
    enumerate_group,
    exact_conditional_ratio,
    group_size,
    group_size_formula,
    locus_series,
)
from .density import DensityTrace, SimConfig, prime_stream, sample_frobenius, simulate_density  # noqa: F401
