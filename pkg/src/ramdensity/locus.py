"""Exact counts of the ramification locus inside matrix groups mod p^n.

The locus is {x : F(x) = 0 mod p^n} with F(A, b) = Res(f_A(x), f_A(bx)).
Elements whose cyclotomic coordinate b is 1 mod p are tallied separately:
there F carries the trivial factor (b - 1)^m, so they are classified by the
reduced invariant F* instead and kept out of the ratios.
"""

import itertools
from collections import Counter
import math
import re
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import kernels
from .errors import BadParam, Degenerate, EmptySlice, TooLarge
from .matrix import ResidueMatrix, charpoly_int, det_int, invariant_int, reduced_invariant_int
from .padic import Residue, RingSpec
from .serialize import csv_text

DEFAULT_BUDGET = 10**8

FULL, DETCOUPLED, PRODUCT, CONGRUENCE = "FullGL", "DetCoupled", "ProductGL1", "Congruence"


@dataclass(frozen=True)
class SubgroupSpec:
    """Finite model of the image of rho' mod p^n.

    ``FullGL(m)``: all of GL_m. ``DetCoupled(m)``: A with b = det(A).
    ``ProductGL1(m)``: pairs (A, b), b an independent unit.
    ``Congruence(base, k)``: elements of ``base`` congruent to the identity mod p^k.
    """

    kind: str
    m: int
    base: Optional["SubgroupSpec"] = None
    level: int = 0

    def __post_init__(self):
        if self.kind not in (FULL, DETCOUPLED, PRODUCT, CONGRUENCE):
            raise BadParam(f"unknown subgroup kind {self.kind!r}")
        if self.m < 1:
            raise BadParam("dimension must be >= 1")
        if self.kind == CONGRUENCE and (self.base is None or self.level < 1):
            raise BadParam("congruence subgroup needs a base spec and level k >= 1")

    @property
    def root(self) -> str:
        """Kind of the innermost non-congruence spec."""
        return self.base.root if self.kind == CONGRUENCE else self.kind

    @property
    def congruence_level(self) -> int:
        if self.kind == CONGRUENCE:
            return max(self.level, self.base.congruence_level)
        return 0

    @property
    def dimension(self) -> int:
        return self.m * self.m + (1 if self.root == PRODUCT else 0)

    @property
    def name(self) -> str:
        if self.kind == CONGRUENCE:
            return f"{self.base.name}@{self.level}"
        return {FULL: "fullgl", DETCOUPLED: "detcoupled", PRODUCT: "productgl1"}[self.kind] + str(self.m)

    def check_ring(self, ring: RingSpec):
        if self.congruence_level >= ring.n:
            raise BadParam(f"congruence level {self.congruence_level} must be below precision {ring.n}")

    def stride(self, ring: RingSpec) -> int:
        return ring.p**self.congruence_level


def FullGL(m: int) -> SubgroupSpec:
    return SubgroupSpec(FULL, m)


def DetCoupled(m: int) -> SubgroupSpec:
    return SubgroupSpec(DETCOUPLED, m)


def ProductGL1(m: int) -> SubgroupSpec:
    return SubgroupSpec(PRODUCT, m)


def Congruence(base: SubgroupSpec, k: int) -> SubgroupSpec:
    return SubgroupSpec(CONGRUENCE, base.m, base, k)


_SPEC_RE = re.compile(r"^(fullgl|full|detcoupled|det|productgl1|product)[_:-]?(\d+)((?:@\d+)*)$")
_KINDS = {"fullgl": FULL, "full": FULL, "detcoupled": DETCOUPLED, "det": DETCOUPLED, "productgl1": PRODUCT, "product": PRODUCT}


def parse_spec(text: str) -> SubgroupSpec:
    """Parse names like ``detcoupled2``, ``fullgl3`` or ``productgl1-2@1``."""
    mt = _SPEC_RE.match(text.strip().lower())
    if not mt:
        raise BadParam(f"cannot parse subgroup spec {text!r}")
    spec = SubgroupSpec(_KINDS[mt.group(1)], int(mt.group(2)))
    for lvl in filter(None, mt.group(3).split("@")):
        spec = Congruence(spec, int(lvl))
    return spec


# ---------------------------------------------------------------------------
# sizes and enumeration


def group_size_formula(m: int, p: int, n: int) -> int:
    """|GL_m(Z/p^n)| = p^(m^2 (n-1)) prod_{i<m} (p^m - p^i)."""
    if m < 1 or n < 1:
        raise BadParam("m and n must be >= 1")
    size = p ** (m * m * (n - 1))
    for i in range(m):
        size *= p**m - p**i
    return size


def group_size(spec: SubgroupSpec, ring: RingSpec) -> int:
    spec.check_ring(ring)
    p, n, m = ring.p, ring.n, spec.m
    k = spec.congruence_level
    if k:
        size = p ** (m * m * (n - k))
        if spec.root == PRODUCT:
            size *= p ** (n - k)
        return size
    size = group_size_formula(m, p, n)
    if spec.root == PRODUCT:
        size *= p ** (n - 1) * (p - 1)
    return size


@dataclass(frozen=True)
class GroupElement:
    """A group element with its cyclotomic coordinate (None for FullGL)."""

    A: ResidueMatrix
    b: Optional[Residue]


def _entry_ranges(m, M, stride):
    off = 1 % stride
    diag = range(off, M, stride)
    offd = range(0, M, stride)
    return [diag if i == j else offd for i in range(m) for j in range(m)]


def _b_values(spec, ring):
    M, p = ring.modulus, ring.p
    stride = spec.stride(ring)
    return [b for b in range(1 % stride, M, stride) if b % p]


def enumerate_group(spec: SubgroupSpec, ring: RingSpec, budget: int = DEFAULT_BUDGET):
    """Yield every element of the group exactly once, in row-major odometer order."""
    size = group_size(spec, ring)
    if size > budget:
        raise TooLarge(size, budget)
    return _enumerate(spec, ring)


def _enumerate(spec, ring, lead=None):
    m, M, p = spec.m, ring.modulus, ring.p
    ranges = _entry_ranges(m, M, spec.stride(ring))
    if lead is not None:
        ranges[0] = ranges[0][lead[0] : lead[1]]
    root = spec.root
    bs = _b_values(spec, ring) if root == PRODUCT else None
    for flat in itertools.product(*ranges):
        rows = tuple(flat[i * m : (i + 1) * m] for i in range(m))
        d = det_int(rows, M)
        if d % p == 0:
            continue
        A = ResidueMatrix(rows, ring)
        if root == DETCOUPLED:
            yield GroupElement(A, Residue(d, ring))
        elif root == PRODUCT:
            for b in bs:
                yield GroupElement(A, Residue(b, ring))
        else:
            yield GroupElement(A, None)


# ---------------------------------------------------------------------------
# counting


@dataclass(frozen=True)
class LocusRecord:
    p: int
    m: int
    n: int
    group_size: int
    locus_size: int
    excluded_b1_size: int
    b1_slice_size: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.locus_size, self.group_size)

    @property
    def nondegenerate_size(self) -> int:
        return self.group_size - self.b1_slice_size

    def to_json(self) -> dict:
        r = self.ratio
        return {
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "group_size": self.group_size,
            "locus_size": self.locus_size,
            "excluded_b1_size": self.excluded_b1_size,
            "b1_slice_size": self.b1_slice_size,
            "ratio_num": r.numerator,
            "ratio_den": r.denominator,
            "ratio_float": float(r),
        }


def _fstar2(t, d, b, M):
    # reduced invariant for m = 2 in terms of trace and determinant
    return ((1 + b) * (1 + b) * d - b * t * t) % M


def _fixed_b(spec, ring, b_assignment):
    if spec.root != FULL:
        return None
    if b_assignment is None:
        raise BadParam("FullGL needs a fixed b residue")
    b = int(b_assignment) % ring.modulus
    if b % ring.p == 0:
        raise BadParam("b must be a unit")
    return b


def _split(total, parts):
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def tr_det_histogram(spec: SubgroupSpec, ring: RingSpec, workers: int = 1, backend=None) -> list:
    """Flat (trace, det) histogram of the 2x2 matrix part of ``spec``."""
    if spec.m != 2:
        raise BadParam("histogram path is for m = 2")
    M, p = ring.modulus, ring.p
    stride = spec.stride(ring)
    L = M // stride
    if workers <= 1 or L < 2:
        return kernels.tr_det_histogram(M, p, stride, backend=backend)
    parts = _split(L, workers)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futs = [ex.submit(kernels.tr_det_histogram, M, p, stride, lo, hi, backend) for lo, hi in parts]
        hists = [f.result() for f in futs]
    return [sum(col) for col in zip(*hists)]


def _classify_gl2(spec, ring, hist, b_fixed):
    M, p = ring.modulus, ring.p
    root = spec.root
    locus = excluded = b1 = 0
    cells = [(idx // M, idx % M, c) for idx, c in enumerate(hist) if c]
    if root == PRODUCT:
        bvals = _b_values(spec, ring)
    for t, d, c in cells:
        if root == DETCOUPLED:
            bs = (d,)
        elif root == PRODUCT:
            bs = bvals
        else:
            bs = (b_fixed,)
        for b in bs:
            hit = _fstar2(t, d, b, M) == 0
            if b % p == 1:
                b1 += c
                excluded += c if hit else 0
            elif hit:
                locus += c
    return locus, excluded, b1


def _tally_generic(spec, ring, b_fixed, lead=None):
    """Counter of (char poly, b) classes; picklable entry point for workers."""
    M = ring.modulus
    tally = Counter()
    for el in _enumerate(spec, ring, lead):
        b = el.b.value if el.b is not None else b_fixed
        tally[(tuple(charpoly_int(el.A.rows, M)), b)] += 1
    return tally


def _classify_generic(ring, tally):
    M, p = ring.modulus, ring.p
    locus = excluded = b1 = 0
    for (cp, b), c in tally.items():
        if b % p == 1:
            b1 += c
            if reduced_invariant_int(cp, b, M) == 0:
                excluded += c
        elif invariant_int(cp, b, M) == 0:
            locus += c
    return locus, excluded, b1


def count_locus(
    spec: SubgroupSpec,
    ring: RingSpec,
    b_assignment=None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    backend=None,
) -> LocusRecord:
    """Exact locus count at one precision level.

    ``b_assignment`` is the fixed cyclotomic residue used for FullGL and
    ignored otherwise.
    """
    size = group_size(spec, ring)
    if size > budget:
        raise TooLarge(size, budget)
    b_fixed = _fixed_b(spec, ring, b_assignment)
    if spec.m == 2:
        hist = tr_det_histogram(spec, ring, workers=workers, backend=backend)
        locus, excluded, b1 = _classify_gl2(spec, ring, hist, b_fixed)
    else:
        if workers > 1:
            L = len(_entry_ranges(spec.m, ring.modulus, spec.stride(ring))[0])
            with ProcessPoolExecutor(max_workers=workers) as ex:
                futs = [ex.submit(_tally_generic, spec, ring, b_fixed, part) for part in _split(L, workers)]
                tally = sum((f.result() for f in futs), start=Counter())
        else:
            tally = _tally_generic(spec, ring, b_fixed)
        locus, excluded, b1 = _classify_generic(ring, tally)
    return LocusRecord(ring.p, spec.m, ring.n, size, locus, excluded, b1)


# ---------------------------------------------------------------------------
# per-residue slices


@dataclass(frozen=True)
class ConditionalRatio:
    residue: int
    slice_size: int
    hits: int
    degenerate: bool

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.hits, self.slice_size)


def conditional_table(spec: SubgroupSpec, ring: RingSpec, budget: int = DEFAULT_BUDGET, workers: int = 1, backend=None) -> dict:
    """Exact locus fraction of every slice {b = r}, keyed by unit residue r.

    Hits are counted with F itself, so a slice with r = 1 mod p^n has ratio 1;
    slices with r = 1 mod p are marked degenerate.
    """
    size = group_size(spec, ring)
    if size > budget:
        raise TooLarge(size, budget)
    M, p = ring.modulus, ring.p
    root = spec.root
    units = [r for r in range(M) if r % p]
    slices = dict.fromkeys(units, 0)
    hits = dict.fromkeys(units, 0)
    if spec.m == 2:
        hist = tr_det_histogram(spec, ring, workers=workers, backend=backend)
        cells = [(idx // M, idx % M, c) for idx, c in enumerate(hist) if c]
        if root == DETCOUPLED:
            pairs = ((d, t, d, c) for t, d, c in cells)
        else:
            allowed = sorted(_allowed_b(spec, ring) & set(units))
            pairs = ((r, t, d, c) for r in allowed for t, d, c in cells)
        for r, t, d, c in pairs:
            slices[r] += c
            # F = (b - 1)^2 det F* in dimension 2
            if (r - 1) * (r - 1) * d * _fstar2(t, d, r, M) % M == 0:
                hits[r] += c
    else:
        allowed = _allowed_b(spec, ring)
        for el in _enumerate(spec, ring):
            cp = tuple(charpoly_int(el.A.rows, M))
            rs = (el.b.value,) if root == DETCOUPLED else [r for r in units if r in allowed]
            for r in rs:
                slices[r] += 1
                if invariant_int(cp, r, M) == 0:
                    hits[r] += 1
    return {
        r: ConditionalRatio(r, slices[r], hits[r], r % p == 1)
        for r in units
        if slices[r]
    }


def _allowed_b(spec, ring):
    stride = spec.stride(ring)
    return set(range(1 % stride, ring.modulus, stride)) if spec.root == PRODUCT else set(range(ring.modulus))


def exact_conditional_ratio(spec: SubgroupSpec, ring: RingSpec, q_residue: int, budget: int = DEFAULT_BUDGET) -> ConditionalRatio:
    r = int(q_residue) % ring.modulus
    if r % ring.p == 0:
        raise BadParam("q residue must be a unit")
    table = conditional_table(spec, ring, budget)
    if r not in table:
        raise EmptySlice(f"no element of {spec.name} has b = {r} mod {ring.modulus}")
    return table[r]


# ---------------------------------------------------------------------------
# series and decay


@dataclass
class LocusReport:
    p: int
    m: int
    spec: str
    dimension: int
    series: list = field(default_factory=list)
    fitted_delta: Optional[float] = None
    fit_note: Optional[str] = None
    truncated_at: Optional[int] = None

    CSV_COLUMNS = ("p", "m", "n", "group_size", "locus_size", "excluded_b1_size", "ratio_num", "ratio_den", "ratio_float")

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "spec": self.spec,
            "dimension": self.dimension,
            "series": [r.to_json() for r in self.series],
            "fitted_delta": self.fitted_delta,
            "fit_note": self.fit_note,
            "truncated_at": self.truncated_at,
        }

    def to_csv(self, header=None) -> str:
        rows = []
        for r in self.series:
            js = r.to_json()
            rows.append([js[c] for c in self.CSV_COLUMNS])
        return csv_text(self.CSV_COLUMNS, rows, header)


def decay_fit(series, p: int = None) -> float:
    """Least-squares decay exponent: minus the slope of log_p(ratio_n) against n.

    ``series`` holds LocusRecords or ``(n, ratio)`` pairs; zero ratios are skipped.
    """
    points = []
    for item in series:
        if isinstance(item, LocusRecord):
            n, ratio = item.n, item.ratio
            p = p or item.p
        else:
            n, ratio = item
        if ratio > 0:
            points.append((n, ratio))
    if len(points) < 2 or len({n for n, _ in points}) < 2:
        raise Degenerate("need at least two levels with a nonzero ratio")
    if p is None:
        raise BadParam("prime p required to fit (n, ratio) pairs")
    xs = [float(n) for n, _ in points]
    ys = [_log_fraction(r) / math.log(p) for _, r in points]
    slope, _ = statistics.linear_regression(xs, ys)
    return -slope


def _log_fraction(r: Fraction) -> float:
    # exact ratios can be far below float range
    return math.log(r.numerator) - math.log(r.denominator)


def locus_series(
    spec: SubgroupSpec,
    p: int,
    n_range,
    budget: int = DEFAULT_BUDGET,
    b_assignment=None,
    workers: int = 1,
    backend=None,
) -> LocusReport:
    report = LocusReport(p, spec.m, spec.name, spec.dimension)
    for n in n_range:
        ring = RingSpec(p, n)
        try:
            report.series.append(count_locus(spec, ring, b_assignment, budget, workers, backend))
        except TooLarge:
            report.truncated_at = n
            break
    try:
        report.fitted_delta = decay_fit(report.series, p)
    except Degenerate as exc:
        report.fit_note = str(exc)
    return report
