"""Exact arithmetic in the truncated coefficient ring Z/p^n."""

from dataclasses import dataclass, field
from functools import cached_property

from .errors import BadParam, NonUnit, RingMismatch
from .primes import is_prime


@dataclass(frozen=True)
class RingSpec:
    """The residue ring Z/p^n, i.e. Z_p truncated at precision n."""

    p: int
    n: int
    modulus: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not isinstance(self.n, int):
            raise BadParam("p and n must be integers")
        if self.n < 1:
            raise BadParam(f"precision must be >= 1, got {self.n}")
        try:
            prime = is_prime(self.p)
        except ValueError as exc:
            raise BadParam(str(exc)) from None
        if not prime:
            raise BadParam(f"{self.p} is not prime")
        object.__setattr__(self, "modulus", self.p**self.n)

    def __call__(self, value: int) -> "Residue":
        return Residue(value, self)

    def reduce(self, value: int) -> int:
        return value % self.modulus

    @cached_property
    def unit_group_order(self) -> int:
        return self.p ** (self.n - 1) * (self.p - 1)

    def lower(self, n: int) -> "RingSpec":
        """The quotient ring Z/p^n for ``n <= self.n``."""
        if not 1 <= n <= self.n:
            raise BadParam(f"cannot reduce precision {self.n} to {n}")
        return RingSpec(self.p, n)

    def is_unit(self, value: int) -> bool:
        return value % self.p != 0

    def inverse(self, value: int) -> int:
        if value % self.p == 0:
            raise NonUnit(f"{value % self.modulus} is not a unit mod {self.p}^{self.n}")
        return pow(value, -1, self.modulus)

    def valuation(self, value: int) -> int:
        value %= self.modulus
        if value == 0:
            return self.n
        v = 0
        while value % self.p == 0:
            value //= self.p
            v += 1
        return v


@dataclass(frozen=True)
class Residue:
    """An element of Z/p^n stored by its least nonnegative representative."""

    value: int
    ring: RingSpec

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.ring.modulus)

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value + o, self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value - o, self.ring)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o - self.value, self.ring)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * o, self.ring)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.ring)

    def __pow__(self, e: int):
        if e < 0:
            return Residue(pow(inv(self).value, -e, self.ring.modulus), self.ring)
        return Residue(pow(self.value, e, self.ring.modulus), self.ring)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.ring.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ring))

    def __int__(self):
        return self.value

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.value)

    def reduce_to(self, n: int) -> "Residue":
        """Image under the reduction map Z/p^self.n -> Z/p^n."""
        return Residue(self.value, self.ring.lower(n))


def add(a: Residue, b: Residue) -> Residue:
    return a + b


def mul(a: Residue, b: Residue) -> Residue:
    return a * b


def inv(a: Residue) -> Residue:
    return Residue(a.ring.inverse(a.value), a.ring)


def valuation(a: Residue) -> int:
    """p-adic valuation of ``a``, with the truncated zero assigned valuation n."""
    return a.ring.valuation(a.value)


def _prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def unit_order(a: Residue) -> int:
    """Multiplicative order of a unit in (Z/p^n)^*."""
    ring = a.ring
    if not a.is_unit():
        raise NonUnit(f"{a.value} is not a unit mod {ring.p}^{ring.n}")
    order = ring.unit_group_order
    primes = set(_prime_factors(ring.p - 1))
    if ring.n > 1:
        primes.add(ring.p)
    for ell in primes:
        while order % ell == 0 and pow(a.value, order // ell, ring.modulus) == 1:
            order //= ell
    return order
