"""Deterministic primality testing and a segmented prime sieve."""

from itertools import islice
import math

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Miller-Rabin with the first twelve prime bases is deterministic below this bound.
MR_DETERMINISTIC_LIMIT = 3317044064679887385961981


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Uses trial division by the first twelve primes followed by Miller-Rabin
    with those same bases, which is exact for ``n < 3.3e24``. Larger inputs
    raise ``ValueError`` rather than return a probabilistic answer.
    """
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    if n >= MR_DETERMINISTIC_LIMIT:
        raise ValueError(f"{n} is beyond the deterministic primality range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit: int) -> list:
    """Sieve of Eratosthenes on ``[2, limit]``."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return [i for i, f in enumerate(flags) if f]


def iter_primes(start: int = 2, segment: int = 1 << 16):
    """Yield primes ``>= start`` in ascending order, one sieve segment at a time."""
    lo = max(start, 2)
    base = []
    while True:
        hi = lo + segment
        root = math.isqrt(hi) + 1
        if not base or base[-1] < root:
            base = primes_up_to(max(root, 2 * (base[-1] if base else 2)))
        flags = bytearray([1]) * segment
        for bp in base:
            if bp * bp >= hi:
                break
            first = max(bp * bp, (lo + bp - 1) // bp * bp)
            flags[first - lo :: bp] = bytes(len(range(first - lo, segment, bp)))
        for off, f in enumerate(flags):
            if f:
                yield lo + off
        lo = hi


def prime_stream(start: int, count: int, skip=()) -> list:
    """The first ``count`` primes ``>= start`` in ascending order, omitting ``skip``."""
    if count <= 0:
        return []
    skip = set(skip)
    return list(islice((q for q in iter_primes(start) if q not in skip), count))
