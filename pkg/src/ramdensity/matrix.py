"""Matrices and polynomials over Z/p^n, with division-free determinants.

Z/p^n has zero divisors, so nothing here divides by ring elements except
through an explicit unit inverse: characteristic polynomials use Berkowitz,
determinants use cofactor expansion (m <= 4) or Berkowitz, and resultants
are Sylvester determinants built at nominal degrees.
"""

from dataclasses import dataclass
from typing import Sequence

from .errors import BadParam, DimMismatch, NonInvertible, RingMismatch
from .padic import Residue, RingSpec

# ---------------------------------------------------------------------------
# integer-level kernels (lists of ints, reduced mod ``M``)


def berkowitz(rows, M: int) -> list:
    """Coefficients of det(xI - A), leading first: ``[1, c1, ..., cm]``."""
    m = len(rows)
    coeffs = [1]
    for k in range(m):
        # A_{k+1} = [[A_k, S], [R, a]]
        a = rows[k][k]
        R = rows[k][:k]
        v = [rows[i][k] for i in range(k)]
        col = [1, -a % M]
        for _ in range(k):
            col.append(-sum(r * x for r, x in zip(R, v)) % M)
            v = [sum(rows[i][j] * v[j] for j in range(k)) % M for i in range(k)]
        new = []
        for i in range(k + 2):
            s = 0
            for j in range(max(0, i - len(col) + 1), min(i, k) + 1):
                s += col[i - j] * coeffs[j]
            new.append(s % M)
        coeffs = new
    return coeffs


def _laplace(rows, M: int) -> int:
    m = len(rows)
    if m == 1:
        return rows[0][0] % M
    if m == 2:
        return (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]) % M
    total = 0
    for j, x in enumerate(rows[0]):
        if x:
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            term = x * _laplace(minor, M)
            total += -term if j & 1 else term
    return total % M


def det_int(rows, M: int) -> int:
    m = len(rows)
    if m == 0:
        return 1 % M
    if m <= 4:
        return _laplace(rows, M)
    c = berkowitz(rows, M)[-1]
    return (-c if m & 1 else c) % M


def mul_int(A, B, M: int):
    cols = list(zip(*B))
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) % M for c in cols) for r in A)


def identity_int(m: int, M: int):
    return tuple(tuple(1 % M if i == j else 0 for j in range(m)) for i in range(m))


def pow_int(A, e: int, M: int):
    result = identity_int(len(A), M)
    base = A
    while e:
        if e & 1:
            result = mul_int(result, base, M)
        e >>= 1
        if e:
            base = mul_int(base, base, M)
    return result


def sylvester_det(f: Sequence[int], g: Sequence[int], M: int) -> int:
    """Resultant of ascending coefficient lists at their nominal degrees."""
    df, dg = len(f) - 1, len(g) - 1
    size = df + dg
    if size == 0:
        return 1 % M
    fd, gd = list(reversed(f)), list(reversed(g))
    rows = []
    for i in range(dg):
        rows.append([0] * i + fd + [0] * (size - df - 1 - i))
    for i in range(df):
        rows.append([0] * i + gd + [0] * (size - dg - 1 - i))
    return det_int(rows, M)


def charpoly_int(rows, M: int) -> list:
    """Ascending characteristic polynomial coefficients ``[c0, ..., 1]``."""
    return berkowitz(rows, M)[::-1]


def invariant_int(cp: Sequence[int], b: int, M: int) -> int:
    """F(A, b) = Res(f(x), f(bx)) from the ascending char poly of A."""
    g = [c * pow(b, k, M) % M for k, c in enumerate(cp)]
    return sylvester_det(cp, g, M)


def reduced_invariant_int(cp: Sequence[int], b: int, M: int) -> int:
    """F*(A, b) with F = (b - 1)^m * det(A) * F*.

    F(A, b) = prod_i f(b a_i) over eigenvalues a_i; each factor
    f(b a_i) = (b - 1) a_i k(a_i) where k(x) = sum_k c_k (1 + b + ... + b^(k-1)) x^(k-1),
    so F* = Res(f, k) is a polynomial in the entries and b.
    """
    m = len(cp) - 1
    k = []
    geo, bp = 0, 1
    for j in range(1, m + 1):
        geo = (geo + bp) % M
        bp = bp * b % M
        k.append(cp[j] * geo % M)
    return sylvester_det(cp, k, M)


# ---------------------------------------------------------------------------
# typed wrappers


@dataclass(frozen=True)
class ResidueMatrix:
    """Square m x m matrix over Z/p^n, stored as rows of reduced ints."""

    rows: tuple
    ring: RingSpec

    def __post_init__(self):
        M = self.ring.modulus
        rows = tuple(tuple(int(x) % M for x in r) for r in self.rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise DimMismatch("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows, ring: RingSpec) -> "ResidueMatrix":
        return cls(tuple(tuple(int(x) for x in r) for r in rows), ring)

    @classmethod
    def identity(cls, m: int, ring: RingSpec) -> "ResidueMatrix":
        return cls(identity_int(m, ring.modulus), ring)

    @classmethod
    def diag(cls, values, ring: RingSpec) -> "ResidueMatrix":
        values = [int(v) for v in values]
        m = len(values)
        return cls(tuple(tuple(values[i] if i == j else 0 for j in range(m)) for i in range(m)), ring)

    @property
    def m(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> Residue:
        i, j = ij
        return Residue(self.rows[i][j], self.ring)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __pow__(self, e: int):
        if e < 0:
            return ResidueMatrix(pow_int(mat_inv(self).rows, -e, self.ring.modulus), self.ring)
        return ResidueMatrix(pow_int(self.rows, e, self.ring.modulus), self.ring)

    def flat(self) -> list:
        return [x for r in self.rows for x in r]

    def reduce_to(self, n: int) -> "ResidueMatrix":
        return ResidueMatrix(self.rows, self.ring.lower(n))


@dataclass(frozen=True)
class Poly:
    """Polynomial over Z/p^n with a fixed nominal degree.

    ``coeffs[k]`` is the coefficient of x^k. The leading coefficient may be
    zero or a zero divisor; the nominal degree is ``len(coeffs) - 1``.
    """

    coeffs: tuple
    ring: RingSpec

    def __post_init__(self):
        if not self.coeffs:
            raise BadParam("polynomial needs at least one coefficient")
        M = self.ring.modulus
        object.__setattr__(self, "coeffs", tuple(int(c) % M for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def coefficients(self) -> tuple:
        return tuple(Residue(c, self.ring) for c in self.coeffs)

    def __call__(self, x) -> Residue:
        x = int(x)
        M = self.ring.modulus
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % M
        return Residue(acc, self.ring)


class CharPoly(Poly):
    """Monic characteristic polynomial of a ResidueMatrix."""

    def __post_init__(self):
        super().__post_init__()
        if self.coeffs[-1] != 1 % self.ring.modulus:
            raise BadParam("characteristic polynomial must be monic")

    @classmethod
    def unipotent(cls, m: int, ring: RingSpec) -> "CharPoly":
        """(x - 1)^m."""
        coeffs = [1]
        for _ in range(m):
            coeffs = [(a - b) for a, b in zip([0] + coeffs, coeffs + [0])]
        return cls(tuple(coeffs), ring)


def _same_ring(*objs):
    ring = objs[0].ring
    for o in objs[1:]:
        if o.ring != ring:
            raise RingMismatch(f"{ring} vs {o.ring}")
    return ring


def mat_mul(A: ResidueMatrix, B: ResidueMatrix) -> ResidueMatrix:
    ring = _same_ring(A, B)
    if A.m != B.m:
        raise DimMismatch(f"{A.m}x{A.m} vs {B.m}x{B.m}")
    return ResidueMatrix(mul_int(A.rows, B.rows, ring.modulus), ring)


def trace(A: ResidueMatrix) -> Residue:
    return Residue(sum(A.rows[i][i] for i in range(A.m)), A.ring)


def det(A: ResidueMatrix) -> Residue:
    return Residue(det_int(A.rows, A.ring.modulus), A.ring)


def char_poly(A: ResidueMatrix) -> CharPoly:
    return CharPoly(tuple(charpoly_int(A.rows, A.ring.modulus)), A.ring)


def mat_inv(A: ResidueMatrix) -> ResidueMatrix:
    """Inverse via the Cayley-Hamilton adjugate times the inverse determinant."""
    ring = A.ring
    M = ring.modulus
    m = A.m
    desc = berkowitz(A.rows, M)
    d = (-desc[-1] if m & 1 else desc[-1]) % M
    if d % ring.p == 0:
        raise NonInvertible(f"det = {d} is not a unit mod {ring.p}^{ring.n}")
    # adj(A) = (-1)^(m-1) (A^(m-1) + c1 A^(m-2) + ... + c_{m-1} I)
    acc = identity_int(m, M)
    for c in desc[1:m]:
        acc = mul_int(acc, A.rows, M)
        acc = tuple(tuple((x + (c if i == j else 0)) % M for j, x in enumerate(r)) for i, r in enumerate(acc))
    scale = pow(d, -1, M)
    if not m & 1:
        scale = -scale
    return ResidueMatrix(tuple(tuple(x * scale for x in r) for r in acc), ring)


def is_unipotent(A: ResidueMatrix) -> bool:
    """True iff (A - I)^m vanishes mod p^n."""
    M = A.ring.modulus
    N = tuple(tuple((x - (1 if i == j else 0)) % M for j, x in enumerate(r)) for i, r in enumerate(A.rows))
    P = pow_int(N, A.m, M)
    return all(x == 0 for r in P for x in r)


def substitute_bx(f: Poly, b: Residue) -> Poly:
    ring = _same_ring(f, b)
    M = ring.modulus
    return Poly(tuple(c * pow(b.value, k, M) for k, c in enumerate(f.coeffs)), ring)


def resultant(f: Poly, g: Poly) -> Residue:
    ring = _same_ring(f, g)
    return Residue(sylvester_det(f.coeffs, g.coeffs, ring.modulus), ring)


def resultant_invariant(A: ResidueMatrix, b: Residue) -> Residue:
    """F(A, b) = Res(f_A(x), f_A(bx))."""
    f = char_poly(A)
    return resultant(f, substitute_bx(f, b))


def reduced_invariant(A: ResidueMatrix, b: Residue) -> Residue:
    """Invariant F* with F(A, b) = (b - 1)^m det(A) F*(A, b).

    F* keeps only the factors b a_i - a_j with i != j, so it does not vanish
    identically at b = 1; on slices where b - 1 and det(A) are units it has
    the same zero set as F.
    """
    ring = _same_ring(A, b)
    M = ring.modulus
    return Residue(reduced_invariant_int(charpoly_int(A.rows, M), b.value, M), ring)


# ---------------------------------------------------------------------------
# JSON


def matrix_to_json(A: ResidueMatrix) -> dict:
    return {"p": A.ring.p, "n": A.ring.n, "m": A.m, "entries": A.flat()}


def rows_from_json(entries, m: int = None):
    """Accept a row-major flat list or a nested list of rows."""
    if entries and isinstance(entries[0], (list, tuple)):
        rows = [list(r) for r in entries]
    else:
        if m is None:
            from math import isqrt

            m = isqrt(len(entries))
        if m * m != len(entries):
            raise DimMismatch(f"{len(entries)} entries do not form a {m}x{m} matrix")
        rows = [list(entries[i * m : (i + 1) * m]) for i in range(m)]
    if m is not None and len(rows) != m:
        raise DimMismatch(f"expected {m} rows, got {len(rows)}")
    for r in rows:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise BadParam(f"matrix entry {x!r} is not an integer")
    return [[int(x) for x in r] for r in rows]


def matrix_from_json(obj: dict) -> ResidueMatrix:
    try:
        ring = RingSpec(int(obj["p"]), int(obj["n"]))
        m = obj.get("m")
        rows = rows_from_json(obj["entries"], None if m is None else int(m))
    except KeyError as exc:
        raise BadParam(f"matrix JSON missing field {exc}") from None
    return ResidueMatrix.from_rows(rows, ring)
