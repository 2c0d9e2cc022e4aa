"""Tame local representations mod p^n and the ramified-lift criteria.

A tame pair (sigma, tau, q) models the images of Frobenius and a tame
inertia generator, tied by sigma tau sigma^-1 = tau^q. Everything here is
conjugation-invariant except the constructor, which emits the normalized
diagonal/upper-unipotent forms.
"""

from dataclasses import dataclass

from .errors import BadParam, DimMismatch, PrecisionTooLow, RingMismatch
from .matrix import (
    CharPoly,
    ResidueMatrix,
    char_poly,
    det,
    mat_inv,
    mat_mul,
    resultant_invariant,
    rows_from_json,
    trace,
)
from .padic import Residue, RingSpec
from .primes import is_prime


@dataclass(frozen=True)
class TamePair:
    sigma: ResidueMatrix
    tau: ResidueMatrix
    q: int
    ring: RingSpec

    def __post_init__(self):
        if self.sigma.ring != self.ring or self.tau.ring != self.ring:
            raise RingMismatch("sigma and tau must live over the pair's ring")
        if self.sigma.m != self.tau.m:
            raise DimMismatch("sigma and tau must have the same size")
        if not is_prime(self.q) or self.q == self.ring.p:
            raise BadParam(f"q must be a prime different from p = {self.ring.p}, got {self.q}")
        for name, A in (("sigma", self.sigma), ("tau", self.tau)):
            if not det(A).is_unit():
                raise BadParam(f"{name} is not invertible")

    @property
    def m(self) -> int:
        return self.sigma.m

    def to_json(self) -> dict:
        return {
            "p": self.ring.p,
            "n": self.ring.n,
            "q": self.q,
            "sigma": [list(r) for r in self.sigma.rows],
            "tau": [list(r) for r in self.tau.rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TamePair":
        try:
            ring = RingSpec(int(obj["p"]), int(obj["n"]))
            sigma = ResidueMatrix.from_rows(rows_from_json(obj["sigma"]), ring)
            tau = ResidueMatrix.from_rows(rows_from_json(obj["tau"]), ring)
            q = int(obj["q"])
        except KeyError as exc:
            raise BadParam(f"tame pair JSON missing field {exc}") from None
        return cls(sigma, tau, q, ring)


@dataclass(frozen=True)
class SemistabilityThreshold:
    m: int
    p: int
    value: int


def verify_relation(pair: TamePair) -> bool:
    """Check sigma tau sigma^-1 == tau^q mod p^n."""
    lhs = mat_mul(mat_mul(pair.sigma, pair.tau), mat_inv(pair.sigma))
    return lhs == pair.tau ** pair.q


def charpoly_qtwist_check(pair: TamePair) -> bool:
    """char_poly(tau) == char_poly(tau^q); necessary for the tame relation."""
    return char_poly(pair.tau) == char_poly(pair.tau ** pair.q)


def semistability_threshold(m: int, p: int) -> SemistabilityThreshold:
    """Smallest precision N at which a non-unipotent tame inertia image stays visible.

    A root of unity zeta != 1 over Q_p has unit zeta - 1 unless its order is a
    power of p; zeta of order p^k has valuation 1/phi(p^k) <= 1/(p - 1), and
    needs an extension of degree phi(p^k). So (zeta - 1)^m has valuation at
    most m/(p - 1) when p - 1 <= m, and below 1 otherwise.
    """
    if m < 1:
        raise BadParam(f"dimension must be >= 1, got {m}")
    if not is_prime(p):
        raise BadParam(f"{p} is not prime")
    value = 1 if p - 1 > m else m // (p - 1) + 1
    return SemistabilityThreshold(m, p, value)


def is_detectably_ramified(tau: ResidueMatrix) -> bool:
    """True iff char_poly(tau) differs from (x - 1)^m modulo p^N, N the threshold.

    When true, every tame representation reducing to ``tau`` is ramified.
    """
    ring = tau.ring
    N = semistability_threshold(tau.m, ring.p).value
    if ring.n < N:
        raise PrecisionTooLow(f"precision {ring.n} below semistability threshold {N}")
    low = ring.lower(N)
    return char_poly(tau.reduce_to(N)) != CharPoly.unipotent(tau.m, low)


def construct_gl2_ramified_pair(q: int, beta_sign: int, t, ring: RingSpec) -> TamePair:
    """sigma = diag(q beta, beta), tau = [[1, t], [0, 1]] with beta = +-1.

    The eigenvalue ratio of sigma is q, which is what makes the tame
    relation hold with a nontrivial unipotent tau.
    """
    if beta_sign not in (1, -1):
        raise BadParam(f"beta_sign must be +1 or -1, got {beta_sign}")
    t = int(t) % ring.modulus
    if t == 0:
        raise BadParam("t must be nonzero mod p^n")
    if q == ring.p:
        raise BadParam("q must differ from p")
    sigma = ResidueMatrix.diag([q * beta_sign, beta_sign], ring)
    tau = ResidueMatrix(((1, t), (0, 1)), ring)
    return TamePair(sigma, tau, q, ring)


def gl2_ramified_criterion(A: ResidueMatrix, q: int) -> bool:
    """det(A) == q and trace(A)^2 == (1 + q)^2 mod p^n."""
    if A.m != 2:
        raise DimMismatch("the trace/determinant criterion is for 2x2 matrices")
    return det(A) == q and trace(A) ** 2 == (1 + q) ** 2


def general_ramified_criterion(A: ResidueMatrix, b) -> bool:
    """True iff Res(f_A(x), f_A(bx)) vanishes mod p^n.

    Necessary for A to be the Frobenius of a ramified semistable lift whose
    cyclotomic coordinate is b. Vacuously true when b == 1 mod p^n.
    """
    if not isinstance(b, Residue):
        b = Residue(int(b), A.ring)
    return resultant_invariant(A, b).value == 0


def pair_report(pair: TamePair) -> dict:
    """All local checks on a tame pair, as plain JSON-ready values."""
    out = {
        "relation": verify_relation(pair),
        "charpoly_qtwist": charpoly_qtwist_check(pair),
        "tau_trivial": pair.tau == ResidueMatrix.identity(pair.m, pair.ring),
    }
    try:
        out["detectably_ramified"] = is_detectably_ramified(pair.tau)
    except PrecisionTooLow as exc:
        out["detectably_ramified"] = None
        out["detectably_ramified_note"] = str(exc)
    out["semistability_threshold"] = semistability_threshold(pair.m, pair.ring.p).value
    return out
