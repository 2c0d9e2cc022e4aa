import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import exact_invariant, exact_resultant
from ramdensity import (
    CharPoly,
    DimMismatch,
    NonInvertible,
    Poly,
    Residue,
    ResidueMatrix,
    RingMismatch,
    RingSpec,
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
from ramdensity.matrix import matrix_from_json, matrix_to_json

Z9 = RingSpec(3, 2)
Z25 = RingSpec(5, 2)


def Mx(rows, ring=Z9):
    return ResidueMatrix.from_rows(rows, ring)


def random_matrix(rng, m, ring, invertible=False):
    while True:
        A = ResidueMatrix.from_rows([[rng.randrange(ring.modulus) for _ in range(m)] for _ in range(m)], ring)
        if not invertible or det(A).is_unit():
            return A


def test_mat_mul_examples():
    A = Mx([[1, 1], [0, 1]])
    assert mat_mul(ResidueMatrix.identity(2, Z9), A) == A
    assert mat_mul(A, A) == Mx([[1, 2], [0, 1]])
    E = Mx([[0, 1], [0, 0]])
    assert mat_mul(E, E) == Mx([[0, 0], [0, 0]])


def test_mat_mul_errors():
    with pytest.raises(RingMismatch):
        mat_mul(Mx([[1]]), Mx([[1]], Z25))
    with pytest.raises(DimMismatch):
        mat_mul(Mx([[1]]), Mx([[1, 0], [0, 1]]))


def test_mat_inv_examples():
    I = ResidueMatrix.identity(2, Z9)
    assert mat_inv(I) == I
    assert mat_inv(Mx([[1, 1], [0, 1]])) == Mx([[1, 8], [0, 1]])
    with pytest.raises(NonInvertible):
        mat_inv(Mx([[3, 0], [0, 1]]))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
def test_mat_inv_random(m):
    rng = random.Random(m)
    ring = RingSpec(5, 3)
    I = ResidueMatrix.identity(m, ring)
    for _ in range(20):
        A = random_matrix(rng, m, ring, invertible=True)
        B = mat_inv(A)
        assert mat_mul(A, B) == I and mat_mul(B, A) == I


def test_trace_det_examples():
    I2 = ResidueMatrix.identity(2, Z9)
    assert trace(I2).value == 2 and det(I2).value == 1
    assert det(Mx([[1, 2], [3, 4]], Z25)).value == 23


def test_char_poly_examples():
    ring = RingSpec(3, 2)
    assert char_poly(ResidueMatrix.identity(2, ring)).coeffs == (1, ring.modulus - 2, 1)
    assert char_poly(Mx([[1, 2], [3, 4]], Z25)).coeffs == (23, 20, 1)


def test_char_poly_against_sympy_higher_dims():
    import sympy

    rng = random.Random(11)
    ring = RingSpec(7, 3)
    for m in range(1, 7):
        for _ in range(5):
            A = random_matrix(rng, m, ring)
            expect = sympy.Matrix(A.rows).charpoly().all_coeffs()[::-1]
            assert char_poly(A).coeffs == tuple(int(c) % ring.modulus for c in expect)
            assert det(A).value == int(sympy.Matrix(A.rows).det()) % ring.modulus


def test_char_poly_conjugation_invariance_random():
    rng = random.Random(2024)
    for trial in range(100):
        ring = rng.choice([RingSpec(2, 3), RingSpec(3, 2), RingSpec(5, 2), RingSpec(3, 4)])
        m = rng.randint(1, 4)
        A = random_matrix(rng, m, ring)
        P = random_matrix(rng, m, ring, invertible=True)
        C = mat_mul(mat_mul(P, A), mat_inv(P))
        assert char_poly(C) == char_poly(A)
        assert trace(C) == trace(A)
        assert det(C) == det(A)
        assert is_unipotent(C) == is_unipotent(A)
        b = Residue(rng.randrange(ring.modulus), ring)
        assert resultant_invariant(C, b) == resultant_invariant(A, b)


def test_gl2_z9_charpoly_closed_form_exhaustive():
    count = 0
    for a, b, c, d in itertools.product(range(9), repeat=4):
        A = Mx([[a, b], [c, d]])
        if not det(A).is_unit():
            continue
        count += 1
        t, dt = trace(A).value, det(A).value
        assert char_poly(A).coeffs == (dt, (-t) % 9, 1)
    assert count == 3888


def test_det_multiplicative_random():
    rng = random.Random(5)
    for _ in range(200):
        ring = rng.choice([RingSpec(2, 4), RingSpec(3, 3), RingSpec(7, 2)])
        m = rng.randint(1, 6)
        A, B = random_matrix(rng, m, ring), random_matrix(rng, m, ring)
        assert det(mat_mul(A, B)) == det(A) * det(B)


def test_is_unipotent_examples():
    assert is_unipotent(Mx([[1, 1], [0, 1]]))
    assert is_unipotent(ResidueMatrix.identity(3, Z9))
    assert not is_unipotent(ResidueMatrix.diag([1, 2], Z9))
    # A - I = diag(3, 0) is nonzero but squares to 0 mod 9
    assert is_unipotent(Mx([[4, 0], [0, 1]]))
    assert is_unipotent(Mx([[1, 3], [3, 1]]))


def test_substitute_bx_examples():
    f = Poly((-1, 0, 1), Z9)
    assert substitute_bx(f, Residue(1, Z9)) == f
    g = substitute_bx(f, Residue(2, Z9))
    assert g.coeffs == (8, 0, 4)
    for b in range(9):
        cp = char_poly(Mx([[1, 2], [5, 7]]))
        assert substitute_bx(cp, Residue(b, Z9)).coeffs[-1] == pow(b, 2, 9)


def test_resultant_examples():
    f = Poly((2, 5, 1), Z9)
    assert resultant(f, f).value == 0
    assert resultant(Poly((-1, 1), Z9), Poly((1, 1), Z9)).value == 2


def test_resultant_matches_exact_integer_sylvester():
    rng = random.Random(99)
    for _ in range(100):
        ring = rng.choice([RingSpec(2, 5), RingSpec(3, 3), RingSpec(5, 2), RingSpec(101, 2)])
        df, dg = rng.randint(1, 5), rng.randint(1, 5)
        f = [rng.randint(-50, 50) for _ in range(df)] + [rng.choice([-3, -1, 1, 2, 7])]
        g = [rng.randint(-50, 50) for _ in range(dg)] + [rng.choice([-5, -2, 1, 3])]
        got = resultant(Poly(tuple(f), ring), Poly(tuple(g), ring)).value
        assert got == exact_resultant(f, g) % ring.modulus


def test_resultant_nominal_degree_with_zero_leading_coefficient():
    # Sylvester at nominal degree 2 for g = 0 x^2 + x - 2 gives lc(f)^2 * g(roots of f)
    ring = RingSpec(5, 3)
    f = Poly((2, -3, 1), ring)  # (x - 1)(x - 2)
    g = Poly((-2, 1, 0), ring)  # x - 2 at nominal degree 2
    assert resultant(f, g).value == 0
    g2 = Poly((-3, 1, 0), ring)  # x - 3
    assert resultant(f, g2).value == ((1 - 3) * (2 - 3)) % ring.modulus


def test_resultant_invariant_examples():
    ring = RingSpec(5, 3)
    A = Mx([[1, 2], [3, 4]], ring)
    assert resultant_invariant(A, Residue(1, ring)).value == 0
    # Res((x-1)^2, (2x-1)^2) = prod over root pairs (2*1 - 1) = 1
    assert resultant_invariant(ResidueMatrix.identity(2, ring), Residue(2, ring)).value == 1
    for q in (2, 3, 7, 11, 13):
        for beta in (1, -1):
            for p, n in ((3, 2), (5, 3), (2, 4), (7, 1)):
                if q == p:
                    continue
                r = RingSpec(p, n)
                D = ResidueMatrix.diag([q * beta, beta], r)
                assert resultant_invariant(D, Residue(q, r)).value == 0
                # direct evaluation of the common root: f(q * beta) = 0 exactly
                assert char_poly(D)(q * beta).value == 0


def test_resultant_invariant_integer_lift():
    rng = random.Random(7)
    for _ in range(60):
        m = rng.randint(1, 3)
        rows = [[rng.randint(-9, 9) for _ in range(m)] for _ in range(m)]
        b = rng.choice([-3, -2, -1, 1, 2, 3, 4, 5, 6])
        ring = rng.choice([RingSpec(3, 3), RingSpec(2, 6), RingSpec(5, 2)])
        got = resultant_invariant(ResidueMatrix.from_rows(rows, ring), Residue(b, ring)).value
        assert got == exact_invariant(rows, b) % ring.modulus


def test_reduced_invariant_factorisation():
    """F(A, b) = (b - 1)^m det(A) F*(A, b) identically."""
    rng = random.Random(3)
    for _ in range(300):
        ring = rng.choice([RingSpec(3, 3), RingSpec(2, 5), RingSpec(7, 2)])
        m = rng.randint(1, 4)
        A = random_matrix(rng, m, ring)
        b = Residue(rng.randrange(ring.modulus), ring)
        lhs = resultant_invariant(A, b)
        rhs = (b - 1) ** m * det(A) * reduced_invariant(A, b)
        assert lhs == rhs


def test_reduced_invariant_gl2_closed_form():
    for a, b, c, d in itertools.product(range(9), repeat=4):
        A = Mx([[a, b], [c, d]])
        t, dt = trace(A).value, det(A).value
        for bb in (1, 2, 4, 8):
            expect = ((1 + bb) ** 2 * dt - bb * t * t) % 9
            assert reduced_invariant(A, Residue(bb, Z9)).value == expect


def test_unipotent_charpoly_helper():
    ring = RingSpec(7, 2)
    assert CharPoly.unipotent(3, ring).coeffs == tuple(c % 49 for c in (-1, 3, -3, 1))


def test_matrix_json_round_trip():
    A = Mx([[1, 2], [3, 4]], Z25)
    js = matrix_to_json(A)
    assert js == {"p": 5, "n": 2, "m": 2, "entries": [1, 2, 3, 4]}
    assert matrix_from_json(js) == A
    assert matrix_from_json({"p": 5, "n": 2, "entries": [[1, 2], [3, 4]]}) == A
    with pytest.raises(DimMismatch):
        matrix_from_json({"p": 5, "n": 2, "m": 2, "entries": [1, 2, 3]})


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_conjugation_invariance_property(data):
    ring = data.draw(st.sampled_from([RingSpec(2, 3), RingSpec(3, 2), RingSpec(5, 1), RingSpec(3, 3)]))
    m = data.draw(st.integers(1, 3))
    entry = st.integers(0, ring.modulus - 1)
    rows = data.draw(st.lists(st.lists(entry, min_size=m, max_size=m), min_size=m, max_size=m))
    prow = data.draw(st.lists(st.lists(entry, min_size=m, max_size=m), min_size=m, max_size=m))
    A = ResidueMatrix.from_rows(rows, ring)
    P = ResidueMatrix.from_rows(prow, ring)
    if not det(P).is_unit():
        return
    C = mat_mul(mat_mul(P, A), mat_inv(P))
    b = Residue(data.draw(entry), ring)
    assert char_poly(C) == char_poly(A)
    assert reduced_invariant(C, b) == reduced_invariant(A, b)
    assert resultant_invariant(C, b) == resultant_invariant(A, b)
