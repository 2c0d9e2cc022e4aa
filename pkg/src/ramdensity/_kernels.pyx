# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GL_2 kernels. Semantics must match ``_kernels_py`` exactly."""

from libc.stdlib cimport calloc, free

ctypedef unsigned long long u64
ctypedef long long i64

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL
cdef i64 MAX_TRIES = 100000000

MAX_MODULUS = 1 << 31


cdef inline u64 fmix(u64 z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 draw(u64 key, u64 *counter) nogil:
    counter[0] += 1
    return fmix(key + counter[0] * GOLDEN)


cdef inline i64 uniform_below(u64 key, u64 *counter, u64 bound) nogil:
    cdef u64 r = (<u64>0 - bound) % bound
    cdef u64 lim = <u64>0 - r
    cdef u64 x
    while True:
        x = draw(key, counter)
        if r == 0 or x < lim:
            return <i64>(x % bound)


def tr_det_histogram(i64 M, i64 p, i64 stride, i64 lo=0, i64 hi=-1):
    """Counts of invertible 2x2 matrices by (trace, det), as a flat list of length M*M.

    Entries range over the congruence class of the identity mod ``stride``;
    ``lo``/``hi`` restrict the leading entry's index for partitioned runs.
    """
    if M >= MAX_MODULUS:
        raise OverflowError("modulus too large for the compiled kernel")
    cdef i64 L = M // stride
    cdef i64 off = 1 % stride
    if hi < 0 or hi > L:
        hi = L
    cdef i64 *prod = <i64 *>calloc(M, sizeof(i64))
    cdef i64 *hist = <i64 *>calloc(M * M, sizeof(i64))
    cdef i64 *nz = <i64 *>calloc(M, sizeof(i64))
    if prod == NULL or hist == NULL or nz == NULL:
        free(prod); free(hist); free(nz)
        raise MemoryError()
    cdef i64 i, j, a, d, b, c, t, ad, k, det, nnz = 0
    try:
        with nogil:
            for i in range(L):
                b = stride * i
                for j in range(L):
                    c = stride * j
                    prod[(b * c) % M] += 1
            for k in range(M):
                if prod[k]:
                    nz[nnz] = k
                    nnz += 1
            for i in range(lo, hi):
                a = off + stride * i
                for j in range(L):
                    d = off + stride * j
                    t = (a + d) % M
                    ad = (a * d) % M
                    for k in range(nnz):
                        det = ad - nz[k]
                        if det < 0:
                            det += M
                        if det % p:
                            hist[t * M + det] += prod[nz[k]]
        return [hist[k] for k in range(M * M)]
    finally:
        free(prod)
        free(hist)
        free(nz)


def sample_gl2(u64 key, i64 M, i64 p, i64 stride, i64 det_target):
    """Rejection-sample an invertible 2x2 matrix, optionally with det == det_target.

    Returns ``(a, b, c, d, tries)``. ``det_target < 0`` accepts any unit det.
    """
    if M >= MAX_MODULUS:
        raise OverflowError("modulus too large for the compiled kernel")
    cdef i64 L = M // stride
    cdef i64 off = 1 % stride
    cdef u64 counter = 0
    cdef i64 a = 0, b = 0, c = 0, d = 0, det, tries = 0
    cdef bint found = False
    with nogil:
        while tries < MAX_TRIES:
            tries += 1
            a = off + stride * uniform_below(key, &counter, L)
            b = stride * uniform_below(key, &counter, L)
            c = stride * uniform_below(key, &counter, L)
            d = off + stride * uniform_below(key, &counter, L)
            det = (a * d - b * c) % M
            if det < 0:
                det += M
            if det % p == 0:
                continue
            if det_target >= 0 and det != det_target:
                continue
            found = True
            break
    if not found:
        raise RuntimeError("rejection sampler exhausted its try budget")
    return a, b, c, d, tries

