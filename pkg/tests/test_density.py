from collections import Counter
from fractions import Fraction

import pytest
from scipy.stats import chisquare

from oracles import first_primes, gl2_elements, trial_division_is_prime
from ramdensity import (
    BadParam,
    Congruence,
    DetCoupled,
    EmptySlice,
    ProductGL1,
    RingSpec,
    SimConfig,
    det,
    exact_conditional_ratio,
    prime_stream,
    sample_frobenius,
    simulate_density,
)
from ramdensity.density import substream_key, traces_csv
from ramdensity.kernels import derive_key

Z3 = RingSpec(3, 1)


def test_prime_stream_examples():
    assert prime_stream(2, 4, {3}) == [2, 5, 7, 11]
    assert prime_stream(2, 0) == []
    assert prime_stream(100, 3) == [101, 103, 107]


def test_prime_stream_first_ten_thousand():
    assert prime_stream(2, 10_000) == first_primes(10_000)


def test_prime_stream_across_segments():
    got = prime_stream(65_000, 200, {65_003})
    want = [q for q in range(65_000, 68_000) if trial_division_is_prime(q) and q != 65_003][:200]
    assert len(want) == 200 and got == want


def test_sample_uniform_on_det2_slice():
    slice_ = sorted(((a, b), (c, d)) for a, b, c, d in gl2_elements(3, 3) if (a * d - b * c) % 3 == 2)
    assert len(slice_) == 24
    counts = Counter()
    for i in range(100_000):
        el = sample_frobenius(DetCoupled(2), Z3, 2, derive_key(5, i))
        assert det(el.A).value == 2
        counts[el.A.rows] += 1
    assert sorted(counts) == slice_
    assert chisquare([counts[r] for r in slice_]).pvalue > 0.01


def test_sample_respects_coupling_and_seed():
    keys = [derive_key(1, i) for i in range(200)]
    a = [sample_frobenius(DetCoupled(2), Z3, 7, k).A for k in keys]
    b = [sample_frobenius(DetCoupled(2), Z3, 7, k).A for k in keys]
    assert a == b
    assert all(det(A).value == 1 for A in a)
    ring = RingSpec(5, 2)
    for k in keys[:50]:
        assert det(sample_frobenius(DetCoupled(2), ring, 13, k).A).value == 13


def test_sample_generic_dimension():
    ring = RingSpec(3, 2)
    for i in range(30):
        el = sample_frobenius(DetCoupled(3), ring, 5, derive_key(2, i))
        assert det(el.A).value == 5
        el = sample_frobenius(ProductGL1(3), ring, 5, derive_key(2, i))
        assert det(el.A).is_unit() and el.b.value == 5


def test_sample_errors():
    with pytest.raises(EmptySlice):
        sample_frobenius(Congruence(DetCoupled(2), 1), RingSpec(3, 2), 2, 0)
    with pytest.raises(BadParam):
        sample_frobenius(DetCoupled(2), Z3, 3, 0)


def test_substreams_distinct():
    keys = {substream_key(0, q, n) for q in first_primes(500) for n in (1, 2, 3)}
    assert len(keys) == 1500


def test_zero_primes():
    (tr,) = simulate_density(SimConfig(DetCoupled(2), 3, [1], 0))
    assert tr.count == 0
    assert tr.final_estimate is None and tr.ci95 is None
    assert tr.to_json()["estimate_defined"] is False


def test_trace_invariants_and_reproducibility():
    cfg = SimConfig(DetCoupled(2), 3, [1, 2], 2000, seed=42)
    a, b = simulate_density(cfg), simulate_density(cfg)
    assert [t.to_json() for t in a] == [t.to_json() for t in b]
    assert traces_csv(a) == traces_csv(b)
    for tr in a:
        assert 3 not in tr.primes
        run = tr.running_density
        assert all(0 <= r <= 1 for r in run)
        hits = 0
        for k, f in enumerate(tr.flagged, 1):
            hits += f
            assert run[k - 1] == Fraction(hits, k)
        for q, f, d in zip(tr.primes, tr.flagged, tr.degenerate):
            assert d == (q % 3 == 1)
            assert not (f and d)
    assert [t.flagged for t in simulate_density(SimConfig(DetCoupled(2), 3, [1], 2000, seed=43))] != [a[0].flagged]


def test_workers_equivalence():
    base = SimConfig(DetCoupled(2), 3, [1, 2], 1500, seed=9)
    multi = SimConfig(DetCoupled(2), 3, [1, 2], 1500, seed=9, workers=3)
    assert [t.to_json() for t in simulate_density(base)] == [t.to_json() for t in simulate_density(multi)]


def test_backends_give_identical_traces():
    from ramdensity.kernels import available_backends

    cfg = SimConfig(DetCoupled(2), 3, [1, 3], 1000, seed=4)
    outs = {b: [t.flagged for t in simulate_density(cfg, backend=b)] for b in available_backends()}
    assert len({repr(v) for v in outs.values()}) == 1


def test_prime_residues_equidistributed():
    primes = prime_stream(2, 10_000, {3})
    for M in (3, 9, 27, 81):
        counts = Counter(q % M for q in primes if q > 3)
        units = [r for r in range(M) if r % 3]
        assert chisquare([counts[r] for r in units]).pvalue > 0.001


def test_estimate_close_to_exact_reference():
    (tr,) = simulate_density(SimConfig(DetCoupled(2), 3, [1], 10_000, seed=1))
    assert abs(tr.final_estimate - float(tr.exact_reference)) <= 3 * tr.ci95


def test_exact_mixture_non_increasing():
    traces = simulate_density(SimConfig(DetCoupled(2), 3, [1, 2, 3, 4], 300, seed=0))
    refs = [t.exact_reference for t in traces]
    assert all(a >= b for a, b in zip(refs, refs[1:]))


def test_exact_conditional_ratio_examples():
    r = exact_conditional_ratio(DetCoupled(2), Z3, 2)
    assert (r.slice_size, r.hits, r.ratio, r.degenerate) == (24, 12, Fraction(1, 2), False)
    r = exact_conditional_ratio(DetCoupled(2), Z3, 1)
    assert r.degenerate and r.ratio == 1
    assert exact_conditional_ratio(DetCoupled(2), Z3, 7).ratio == 1
    with pytest.raises(EmptySlice):
        exact_conditional_ratio(Congruence(DetCoupled(2), 1), RingSpec(3, 2), 2)


def test_exact_conditional_ratio_matches_naive_slice():
    ring = RingSpec(3, 2)
    for q in (2, 5, 8):
        size = hits = 0
        for a, b, c, d in gl2_elements(9, 3):
            dt = (a * d - b * c) % 9
            if dt != q:
                continue
            size += 1
            hits += ((a + d) ** 2 - (1 + dt) ** 2) % 9 == 0
        r = exact_conditional_ratio(DetCoupled(2), ring, q)
        assert (r.slice_size, r.hits) == (size, hits)
