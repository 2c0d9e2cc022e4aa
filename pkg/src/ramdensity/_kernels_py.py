"""Pure-Python twin of the compiled ``_kernels`` module (same outputs, bit for bit)."""

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MAX_TRIES = 100_000_000
MAX_MODULUS = None


def fmix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class _Stream:
    __slots__ = ("key", "counter")

    def __init__(self, key: int):
        self.key = key & MASK
        self.counter = 0

    def below(self, bound: int) -> int:
        r = (1 << 64) % bound
        lim = (1 << 64) - r
        while True:
            self.counter += 1
            x = fmix((self.key + self.counter * GOLDEN) & MASK)
            if x < lim:
                return x % bound


def tr_det_histogram(M, p, stride, lo=0, hi=-1):
    """Counts of invertible 2x2 matrices by (trace, det), as a flat list of length M*M."""
    L = M // stride
    off = 1 % stride
    if hi < 0 or hi > L:
        hi = L
    prod = [0] * M
    offdiag = [stride * i for i in range(L)]
    for b in offdiag:
        for c in offdiag:
            prod[b * c % M] += 1
    products = [(k, n) for k, n in enumerate(prod) if n]
    hist = [0] * (M * M)
    diag = [off + stride * j for j in range(L)]
    for i in range(lo, hi):
        a = off + stride * i
        for d in diag:
            row = ((a + d) % M) * M
            ad = a * d
            for k, n in products:
                det = (ad - k) % M
                if det % p:
                    hist[row + det] += n
    return hist


def sample_gl2(key, M, p, stride, det_target):
    """Rejection-sample an invertible 2x2 matrix; returns ``(a, b, c, d, tries)``."""
    L = M // stride
    off = 1 % stride
    s = _Stream(key)
    for tries in range(1, MAX_TRIES + 1):
        a = off + stride * s.below(L)
        b = stride * s.below(L)
        c = stride * s.below(L)
        d = off + stride * s.below(L)
        det = (a * d - b * c) % M
        if det % p == 0:
            continue
        if det_target >= 0 and det != det_target:
            continue
        return a, b, c, d, tries
    raise RuntimeError("rejection sampler exhausted its try budget")
