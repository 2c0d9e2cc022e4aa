"""Compare the compiled and pure-Python kernel backends.

Times the (trace, det) histogram and the rejection sampler for each
available backend, checks the outputs agree, and prints a small table.

    python benchmarks/bench_kernels.py --p 3 --n 3 --samples 20000
"""

import argparse
import time

from ramdensity import kernels


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_histogram(M, p, backend, repeat):
    return best_of(lambda: kernels.tr_det_histogram(M, p, backend=backend), repeat)


def bench_sampler(M, p, samples, backend, repeat):
    def draw():
        return [kernels.sample_gl2(k, M, p, 1, 2 % M, backend=backend) for k in range(samples)]

    return best_of(draw, repeat)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--p", type=int, default=3)
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--samples", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    M = args.p**args.n
    backends = kernels.available_backends()
    print(f"modulus {args.p}^{args.n} = {M}, backends: {', '.join(backends)}")
    results = {}
    for b in backends:
        th, hist = bench_histogram(M, args.p, b, args.repeat)
        ts, draws = bench_sampler(M, args.p, args.samples, b, args.repeat)
        results[b] = (th, ts, hist, draws)
        print(f"{b:>8}  histogram {th * 1e3:10.2f} ms   sampler x{args.samples} {ts * 1e3:10.2f} ms")

    outs = list(results.values())
    same = all(o[2] == outs[0][2] and o[3] == outs[0][3] for o in outs)
    print(f"outputs identical across backends: {same}")
    if "cython" in results and "python" in results:
        py, cy = results["python"], results["cython"]
        print(f"speedup: histogram {py[0] / cy[0]:.1f}x, sampler {py[1] / cy[1]:.1f}x")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
