"""ramdensity command-line interface.

Usage:
    ramdensity threshold --m 2 --p 3
    ramdensity construct --q 2 --sign +1 --t 1 --p 3 --n 3 -o pair.json
    ramdensity check-pair --file pair.json
    ramdensity criterion --file matrix.json --q 2
    ramdensity count-locus --spec detcoupled2 --p 3 --n 1
    ramdensity decay --spec detcoupled2 --p 3 --n-from 1 --n-to 4 --format csv
    ramdensity simulate --spec detcoupled2 --p 3 --levels 1,2,3,4 --primes 10000 --seed 7

Exit status: 0 on success, 2 on invalid input, 3 when an enumeration
exceeds its budget (the default budget is read from RAMDENSITY_BUDGET).
"""

import argparse
import json
import os
import sys

from . import __version__
from .errors import RamificationError, TooLarge
from .kernels import BACKEND
from .locus import DEFAULT_BUDGET, FULL, count_locus, locus_series, parse_spec
from .matrix import matrix_from_json
from .padic import Residue, RingSpec
from .serialize import csv_text, dumps
from .density import SimConfig, simulate_density, traces_csv
from .tame import (
    TamePair,
    construct_gl2_ramified_pair,
    general_ramified_criterion,
    gl2_ramified_criterion,
    pair_report,
    semistability_threshold,
)

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


def _default_budget() -> int:
    raw = os.environ.get("RAMDENSITY_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _load_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _config(args) -> dict:
    skip = {"func", "output", "file_obj"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg["version"] = __version__
    return cfg


def _sign(text: str) -> int:
    if text in ("+1", "1", "+"):
        return 1
    if text in ("-1", "-"):
        return -1
    raise argparse.ArgumentTypeError(f"sign must be +1 or -1, got {text!r}")


def _levels(text: str) -> list:
    try:
        out = []
        for part in text.split(","):
            if "-" in part:
                lo, hi = part.split("-")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
        return out
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}") from None


def cmd_threshold(args):
    th = semistability_threshold(args.m, args.p)
    return {"config": _config(args), "m": th.m, "p": th.p, "N": th.value}, EXIT_OK


def cmd_construct(args):
    ring = RingSpec(args.p, args.n)
    pair = construct_gl2_ramified_pair(args.q, args.sign, args.t, ring)
    out = {"config": _config(args)}
    out.update(pair.to_json())
    return out, EXIT_OK


def cmd_check_pair(args):
    pair = TamePair.from_json(_load_json(args.file))
    out = {"config": _config(args)}
    out.update(pair.to_json())
    out.update(pair_report(pair))
    return out, EXIT_OK


def cmd_criterion(args):
    A = matrix_from_json(_load_json(args.file))
    b = Residue(args.q, A.ring)
    out = {"config": _config(args), "matrix": {"p": A.ring.p, "n": A.ring.n, "m": A.m, "entries": A.flat()}}
    out["gl2_criterion"] = gl2_ramified_criterion(A, args.q) if A.m == 2 else None
    out["general_criterion"] = general_ramified_criterion(A, b)
    out["degenerate_b"] = args.q % A.ring.p == 1
    return out, EXIT_OK


def cmd_count_locus(args):
    spec = parse_spec(args.spec)
    rec = count_locus(spec, RingSpec(args.p, args.n), args.b, args.budget, args.workers)
    if args.format == "csv":
        js = rec.to_json()
        cols = ("p", "m", "n", "group_size", "locus_size", "excluded_b1_size", "ratio_num", "ratio_den", "ratio_float")
        return csv_text(cols, [[js[c] for c in cols]], _config(args)), EXIT_OK
    out = {"config": _config(args), "spec": spec.name, "dimension": spec.dimension}
    out.update(rec.to_json())
    return out, EXIT_OK


def cmd_decay(args):
    spec = parse_spec(args.spec)
    if spec.root == FULL and args.b is None:
        raise RamificationError("FullGL specs need --b")
    rep = locus_series(spec, args.p, range(args.n_from, args.n_to + 1), args.budget, args.b, args.workers)
    code = EXIT_BUDGET if rep.truncated_at is not None else EXIT_OK
    if args.format == "csv":
        return rep.to_csv(_config(args)), code
    out = {"config": _config(args)}
    out.update(rep.to_json())
    return out, code


def cmd_simulate(args):
    spec = parse_spec(args.spec)
    cfg = SimConfig(spec, args.p, args.levels, args.primes, args.seed, set(args.skip or ()), args.start, args.workers, args.budget)
    traces = simulate_density(cfg)
    if args.format == "csv":
        return traces_csv(traces, _config(args)), EXIT_OK
    return {"config": _config(args), "levels": [t.to_json() for t in traces]}, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ramdensity", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-o", "--output", default="-", help="output path (default: stdout)")
        sp.set_defaults(func=func)
        return sp

    sp = add("threshold", cmd_threshold, "semistability threshold N(m, Q_p)")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)

    sp = add("construct", cmd_construct, "build a ramified GL2 tame pair")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--sign", type=_sign, default=1)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("check-pair", cmd_check_pair, "verify a tame pair JSON file")
    sp.add_argument("--file", required=True)

    sp = add("criterion", cmd_criterion, "ramified-lift criteria for a matrix JSON file")
    sp.add_argument("--file", required=True)
    sp.add_argument("--q", type=int, required=True)

    for name, func, help_ in (
        ("count-locus", cmd_count_locus, "exact locus count at one level"),
        ("decay", cmd_decay, "locus series over levels and decay fit"),
        ("simulate", cmd_simulate, "Chebotarev Monte Carlo density traces"),
    ):
        sp = add(name, func, help_)
        sp.add_argument("--spec", required=True, help="e.g. detcoupled2, fullgl2, productgl1-2, detcoupled2@1")
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--budget", type=int, default=_default_budget())
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "count-locus":
            sp.add_argument("--n", type=int, required=True)
            sp.add_argument("--b", type=int, default=None, help="fixed cyclotomic residue (FullGL only)")
        elif name == "decay":
            sp.add_argument("--n-from", type=int, default=1)
            sp.add_argument("--n-to", type=int, required=True)
            sp.add_argument("--b", type=int, default=None, help="fixed cyclotomic residue (FullGL only)")
        else:
            sp.add_argument("--levels", type=_levels, default=[1, 2, 3, 4])
            sp.add_argument("--primes", type=int, default=10000)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--start", type=int, default=2)
            sp.add_argument("--skip", type=int, nargs="*", default=None)
    return parser


def _emit(payload, path):
    text = payload if isinstance(payload, str) else dumps(payload)
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.func(args)
    except TooLarge as exc:
        print(f"ramdensity: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (RamificationError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"ramdensity: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(payload, args.output)
    return code


def main(argv=None):
    sys.exit(run(argv))
