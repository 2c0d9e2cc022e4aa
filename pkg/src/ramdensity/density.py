"""Chebotarev-style Monte Carlo over a stream of rational primes.

Frobenius at q is modeled as a uniform draw from the slice of the group whose
cyclotomic coordinate is q mod p^n. Each (seed, q, n) gets its own hashed
random substream, so traces are reproducible and independent of how primes
are split across workers.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import kernels
from ._kernels_py import _Stream
from .errors import BadParam, EmptySlice, TooLarge
from .locus import (
    DEFAULT_BUDGET,
    DETCOUPLED,
    PRODUCT,
    GroupElement,
    SubgroupSpec,
    conditional_table,
    exact_conditional_ratio,
    group_size,
)
from .matrix import ResidueMatrix, charpoly_int, det_int, invariant_int
from .padic import Residue, RingSpec
from .primes import prime_stream
from .serialize import csv_text

__all__ = [
    "SimConfig",
    "DensityTrace",
    "prime_stream",
    "sample_frobenius",
    "simulate_density",
    "exact_conditional_ratio",
]

Z95 = 1.96


@dataclass(frozen=True)
class SimConfig:
    spec: SubgroupSpec
    p: int
    n_levels: tuple
    prime_count: int
    seed: int = 0
    skip: frozenset = frozenset()
    start: int = 2
    workers: int = 1
    reference_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "n_levels", tuple(int(n) for n in self.n_levels))
        object.__setattr__(self, "skip", frozenset(self.skip) | {self.p})
        if self.prime_count < 0:
            raise BadParam("prime_count must be >= 0")
        for n in self.n_levels:
            self.spec.check_ring(RingSpec(self.p, n))

    def to_json(self) -> dict:
        return {
            "spec": self.spec.name,
            "p": self.p,
            "levels": list(self.n_levels),
            "primes": self.prime_count,
            "seed": self.seed,
            "skip": sorted(self.skip),
            "start": self.start,
            "workers": self.workers,
        }


@dataclass
class DensityTrace:
    """Flags for one precision level, in prime order."""

    n: int
    primes: list = field(default_factory=list)
    flagged: list = field(default_factory=list)
    degenerate: list = field(default_factory=list)
    reference_terms: Optional[list] = None

    @property
    def count(self) -> int:
        return len(self.primes)

    @property
    def flagged_count(self) -> int:
        return sum(self.flagged)

    @property
    def degenerate_count(self) -> int:
        return sum(self.degenerate)

    @property
    def running_density(self) -> list:
        out, hits = [], 0
        for k, f in enumerate(self.flagged, 1):
            hits += f
            out.append(Fraction(hits, k))
        return out

    @property
    def final_estimate(self) -> Optional[float]:
        """Flagged fraction; None when no primes were streamed."""
        if not self.primes:
            return None
        return self.flagged_count / self.count

    @property
    def ci95(self) -> Optional[float]:
        est = self.final_estimate
        if est is None:
            return None
        return Z95 * math.sqrt(est * (1 - est) / self.count)

    @property
    def exact_reference(self) -> Optional[Fraction]:
        """Prime-weighted mixture of exact slice ratios over the streamed primes."""
        if self.reference_terms is None or not self.primes:
            return None
        return sum(self.reference_terms, Fraction(0)) / self.count

    def to_json(self) -> dict:
        ref = self.exact_reference
        return {
            "n": self.n,
            "primes_streamed": self.count,
            "flagged": self.flagged_count,
            "degenerate": self.degenerate_count,
            "final_estimate": self.final_estimate,
            "estimate_defined": self.final_estimate is not None,
            "ci95": self.ci95,
            "exact_reference": None if ref is None else float(ref),
            "exact_reference_fraction": ref,
        }

    def csv_rows(self):
        hits = degs = 0
        ref = Fraction(0)
        for k in range(1, self.count + 1):
            hits += self.flagged[k - 1]
            degs += self.degenerate[k - 1]
            est = hits / k
            ci = Z95 * math.sqrt(est * (1 - est) / k)
            if self.reference_terms is not None:
                ref += self.reference_terms[k - 1]
                ref_out = float(ref / k)
            else:
                ref_out = None
            yield [self.n, k, hits, degs, est, ci, ref_out]


TRACE_CSV_COLUMNS = ("n", "primes_streamed", "flagged", "degenerate", "running_density", "ci95", "exact_reference")


def traces_csv(traces, header=None) -> str:
    rows = [r for tr in traces for r in tr.csv_rows()]
    return csv_text(TRACE_CSV_COLUMNS, rows, header)


def substream_key(seed: int, q: int, n: int) -> int:
    return kernels.derive_key(seed, q, n)


def _slice_target(spec, ring, q):
    """Determinant target for the rejection sampler, or -1 for any unit det."""
    M, p = ring.modulus, ring.p
    b = q % M
    if b % p == 0:
        raise BadParam(f"q = {q} is not a unit mod {p}")
    stride = spec.stride(ring)
    if spec.root in (DETCOUPLED, PRODUCT) and b % stride != 1 % stride:
        raise EmptySlice(f"no element of {spec.name} has b = {b} mod {M}")
    return b if spec.root == DETCOUPLED else -1


def sample_frobenius(spec: SubgroupSpec, ring: RingSpec, q: int, key: int, backend=None) -> GroupElement:
    """Uniform draw from {x in spec : b(x) = q mod p^n} via exact rejection sampling."""
    if q == ring.p:
        raise BadParam("q must differ from p")
    target = _slice_target(spec, ring, q)
    M, p = ring.modulus, ring.p
    stride = spec.stride(ring)
    if spec.m == 2:
        a, b, c, d, _ = kernels.sample_gl2(key, M, p, stride, target, backend=backend)
        rows = ((a, b), (c, d))
    else:
        rows = _sample_generic(key, spec.m, M, p, stride, target)
    return GroupElement(ResidueMatrix(rows, ring), Residue(q, ring))


def _sample_generic(key, m, M, p, stride, target):
    s = _Stream(key)
    L = M // stride
    off = 1 % stride
    while True:
        rows = tuple(
            tuple((off if i == j else 0) + stride * s.below(L) for j in range(m)) for i in range(m)
        )
        d = det_int(rows, M)
        if d % p and (target < 0 or d == target):
            return rows


def _flag(spec, ring, q, key, backend):
    M = ring.modulus
    el = sample_frobenius(spec, ring, q, key, backend)
    b = q % M
    if spec.m == 2:
        (a, x), (y, d) = el.A.rows
        t, dt = (a + d) % M, (a * d - x * y) % M
        # b - 1 and det are units here, so F vanishes iff F* does
        return ((1 + b) * (1 + b) * dt - b * t * t) % M == 0
    return invariant_int(charpoly_int(el.A.rows, M), b, M) == 0


def _run_chunk(spec, p, n, primes, seed, backend=None):
    ring = RingSpec(p, n)
    flags, degs = [], []
    for q in primes:
        if q % p == 1:
            flags.append(False)
            degs.append(True)
        else:
            flags.append(_flag(spec, ring, q, substream_key(seed, q, n), backend))
            degs.append(False)
    return flags, degs


def _reference_terms(spec, ring, primes, budget):
    try:
        table = conditional_table(spec, ring, budget)
    except TooLarge:
        return None
    M, p = ring.modulus, ring.p
    terms = []
    for q in primes:
        r = q % M
        terms.append(Fraction(0) if r % p == 1 or r not in table else table[r].ratio)
    return terms


def simulate_density(config: SimConfig, backend=None) -> list:
    """One DensityTrace per precision level, in ``config.n_levels`` order."""
    primes = prime_stream(config.start, config.prime_count, config.skip)
    traces = []
    for n in config.n_levels:
        tr = DensityTrace(n, list(primes))
        if config.workers > 1 and len(primes) > 1:
            step = -(-len(primes) // config.workers)
            chunks = [primes[i : i + step] for i in range(0, len(primes), step)]
            with ProcessPoolExecutor(max_workers=config.workers) as ex:
                futs = [ex.submit(_run_chunk, config.spec, config.p, n, c, config.seed, backend) for c in chunks]
                for f in futs:
                    fl, dg = f.result()
                    tr.flagged.extend(fl)
                    tr.degenerate.extend(dg)
        else:
            tr.flagged, tr.degenerate = _run_chunk(config.spec, config.p, n, primes, config.seed, backend)
        ring = RingSpec(config.p, n)
        if primes and group_size(config.spec, ring) <= config.reference_budget:
            tr.reference_terms = _reference_terms(config.spec, ring, primes, config.reference_budget)
        traces.append(tr)
    return traces

