"""Command-line entry point.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 precision
exhaustion.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .autoseq import cantor_sequence, named_series, thue_morse_sequence
from .contfrac import expand
from .escape import (density_scan, escape_at, escape_many, escape_predict, family_trace,
                     transport_escape_check)
from .ffield import check_prime, parse_polynomial
from .laurent import LaurentSeries, PrecisionError, series_from_sequence
from .morph2d import (apply_coding, cantor_morphism2d, iterate2d, thue_morse_coding,
                      thue_morse_morphism2d, verify_profile_equality, verify_thue_morse,
                      zero_coding)
from .numwall import profile, profile_fast, wall_oracle
from .parallel import set_default_workers

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class _Run:
    """Collects declared outputs so they can be digested into a manifest."""

    def __init__(self):
        self.outputs: list[dict] = []
        self.inputs: list[dict] = []

    def emit(self, text: str, path: str | None = None) -> None:
        data = text.encode()
        if path is None or path == "-":
            sys.stdout.write(text)
            path = "<stdout>"
        else:
            with open(path, "wb") as fh:
                fh.write(data)
        self.outputs.append({"path": path, "sha256": hashlib.sha256(data).hexdigest()})

    def note_input(self, path: str) -> None:
        with open(path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        self.inputs.append({"path": path, "sha256": digest})


def _series(args, run: _Run) -> LaurentSeries:
    """Resolve ``--seq`` (named generator or digit list) with ``--p`` as fallback."""
    spec = getattr(args, "seq", None)
    p = getattr(args, "p", None)
    if spec is None:
        if p is None:
            raise ValueError("give --seq or --p")
        return named_series(f"cantor:p={p}")
    if spec == "thue-morse" or ":" in spec:
        if spec.startswith("file:"):
            run.note_input(spec[len("file:"):])
        return named_series(spec)
    if p is None:
        raise ValueError("a digit list needs --p")
    digits = [int(x) for x in spec.replace(" ", "").split(",") if x]
    return series_from_sequence(digits, check_prime(p))


def _k_values(args) -> list[int]:
    if args.k_range:
        lo, _, hi = args.k_range.partition(":")
        return list(range(int(lo), int(hi) + 1))
    if args.k is None:
        raise ValueError("give --k or --k-range")
    return [args.k]


def _fmt(x: Fraction) -> str:
    return f"{x} = {float(x):.6f}"


def cmd_seq(args, run: _Run) -> int:
    if args.name == "cantor":
        if args.p is None:
            raise ValueError("cantor needs --p")
        digits = cantor_sequence(check_prime(args.p), args.length)
    else:
        digits = thue_morse_sequence(args.length)
    run.emit(",".join(map(str, digits)) + "\n", args.out)
    return EXIT_OK


def cmd_cf(args, run: _Run) -> int:
    theta = _series(args, run).shift(args.shift)
    cf = expand(theta, args.max_quotients, args.precision)
    lines = ["i,deg,coeffs", f"0,{cf.a0.degree},{cf.a0}"]
    lines += [f"{i},{q.degree},{q}" for i, q in enumerate(cf.quotients, start=1)]
    run.emit("\n".join(lines) + "\n", args.out)
    if cf.pending_degree is not None:
        print(f"# next quotient has degree {cf.pending_degree}", file=sys.stderr)
    if args.max_quotients is not None and cf.certified_count < args.max_quotients and not cf.exact:
        print(f"only {cf.certified_count} quotients certified", file=sys.stderr)
        return EXIT_PRECISION
    return EXIT_OK


def cmd_wall(args, run: _Run) -> int:
    wall = wall_oracle(_series(args, run), args.rows, args.cols)
    run.emit(wall.to_csv(), args.out)
    if args.pbm:
        run.emit(profile(wall).to_pbm(), args.pbm)
    return EXIT_OK


def cmd_profile(args, run: _Run) -> int:
    theta = _series(args, run)
    if args.method == "fast":
        prof = profile_fast(theta, args.rows, args.cols)
    else:
        prof = profile(wall_oracle(theta, args.rows, args.cols))
    run.emit(prof.to_pbm(), args.out)
    return EXIT_OK


def _coded_iterate(args) -> np.ndarray:
    if args.system == "cantor":
        grid = iterate2d(cantor_morphism2d(check_prime(args.p)), "A", args.k)
        return apply_coding(zero_coding(), grid)
    grid = iterate2d(thue_morse_morphism2d(), "d_a", args.k, prolongable=False)
    return apply_coding(thue_morse_coding(), grid)


def cmd_morph(args, run: _Run) -> int:
    if args.system == "cantor" and args.p is None:
        raise ValueError("the cantor system needs --p")
    nonzero = _coded_iterate(args)
    h, w = nonzero.shape
    lines = ["P1", f"{w} {h}"]
    lines += [" ".join("0" if v else "1" for v in row) for row in nonzero]
    run.emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args, run: _Run) -> int:
    if args.system == "cantor":
        if args.p is None:
            raise ValueError("the cantor system needs --p")
        report = verify_profile_equality(check_prime(args.p), args.k)
    else:
        report = verify_thue_morse(args.k)
    if report.ok:
        run.emit(f"ok: {report.cells} cells agree\n")
        return EXIT_OK
    where = "" if report.first_mismatch is None else " first mismatch at (%d,%d)" % report.first_mismatch
    run.emit(f"mismatch:{where}; {report.detail}\n")
    return EXIT_MISMATCH


def cmd_escape(args, run: _Run) -> int:
    theta = _series(args, run)
    reports = escape_many(theta, _k_values(args), args.n, args.horizon, args.mode)
    lines = ["k,n,e,preperiod,period"] + [r.csv_row() for r in reports]
    run.emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_density(args, run: _Run) -> int:
    frac = density_scan(_series(args, run), args.K, args.n, args.eps, args.horizon)
    run.emit(f"{frac:.12g}\n")
    return EXIT_OK


def cmd_predict(args, run: _Run) -> int:
    p = check_prime(args.p)
    value = escape_predict(p, args.j)
    text = f"{_fmt(value)}\n"
    if args.check:
        measured = escape_at(named_series(f"cantor:p={p}"), args.j, args.n, args.horizon).e
        text += f"measured {_fmt(measured)}\n"
    run.emit(text)
    return EXIT_OK


def cmd_family(args, run: _Run) -> int:
    trace = family_trace(check_prime(args.p), args.family, args.k_max, args.n, args.leading,
                         args.k_min)
    lines = ["k,e"] + [f"{k},{float(e):.12g}" for k, e in trace]
    run.emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_transport(args, run: _Run) -> int:
    theta = _series(args, run)
    P = parse_polynomial(args.poly, theta.p)
    rows = transport_escape_check(theta, P, _k_values(args), args.n, args.count)
    lines = ["k,scaled,e,image_e"]
    lines += [f"{r.k},{int(r.scaled)},{float(r.e):.12g},{float(r.image_e):.12g}" for r in rows]
    run.emit("\n".join(lines) + "\n", args.out)
    ok = all(r.scaled and r.e == r.image_e for r in rows)
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, help="cap on parallel workers")
    common.add_argument("--manifest", help="write a JSON run manifest to this path")

    parser = argparse.ArgumentParser(prog="numberwall", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=fn)
        return sp

    def series_flags(sp):
        sp.add_argument("--p", type=int, help="prime field size (defaults --seq to the p-Cantor series)")
        sp.add_argument("--seq", help="cantor:p=<p>, thue-morse, file:<path>, or a digit list")

    sp = add("seq", cmd_seq, "print a sequence prefix")
    sp.add_argument("--name", choices=["cantor", "thue-morse"], required=True)
    sp.add_argument("--p", type=int)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--out")

    sp = add("cf", cmd_cf, "continued fraction quotients as CSV")
    series_flags(sp)
    sp.add_argument("--shift", type=int, default=0, help="multiply by t^shift first")
    sp.add_argument("--max-quotients", type=int)
    sp.add_argument("--precision", type=int, help="fractional coefficients to use")
    sp.add_argument("--out")

    sp = add("wall", cmd_wall, "wall values as CSV")
    series_flags(sp)
    sp.add_argument("--rows", type=int, default=32)
    sp.add_argument("--cols", type=int, default=64)
    sp.add_argument("--out")
    sp.add_argument("--pbm", help="also write the zero profile as PBM")

    sp = add("profile", cmd_profile, "zero profile as PBM")
    series_flags(sp)
    sp.add_argument("--rows", type=int, default=32)
    sp.add_argument("--cols", type=int, default=64)
    sp.add_argument("--method", choices=["fast", "oracle"], default="fast")
    sp.add_argument("--out")

    for name, fn, text in (("morph", cmd_morph, "coded morphism iterate as PBM"),
                           ("verify", cmd_verify, "compare a coded iterate with the wall profile")):
        sp = add(name, fn, text)
        sp.add_argument("--system", choices=["cantor", "thue-morse"], required=True)
        sp.add_argument("--p", type=int)
        sp.add_argument("--k", type=int, required=True)
        if name == "morph":
            sp.add_argument("--out")

    sp = add("escape", cmd_escape, "escape of mass per diagonal as CSV")
    series_flags(sp)
    sp.add_argument("--k", type=int)
    sp.add_argument("--k-range", help="inclusive range lo:hi")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--mode", choices=["periodic", "window"], default="periodic")
    sp.add_argument("--horizon", type=int, default=600)
    sp.add_argument("--out")

    sp = add("density", cmd_density, "share of diagonals with escape above 1-eps")
    series_flags(sp)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--horizon", type=int, default=600)

    sp = add("predict", cmd_predict, "predicted escape on a p-Cantor diagonal")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--check", action="store_true", help="also measure it")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--horizon", type=int, default=600)

    sp = add("family", cmd_family, "escape along a diagonal family of the p-Cantor wall")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--family", choices=["two_pk", "odd_jk_pk"], required=True)
    sp.add_argument("--k-max", type=int, required=True)
    sp.add_argument("--k-min", type=int, default=1)
    sp.add_argument("--leading", type=int, default=1)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--out")

    sp = add("transport", cmd_transport, "degree scaling under t -> P(t)")
    series_flags(sp)
    sp.add_argument("--poly", required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--k-range", help="inclusive range lo:hi")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--count", type=int, default=16)
    sp.add_argument("--out")
    return parser


def _write_manifest(path: str, args, run: _Run, duration_ms: float) -> None:
    flags = {k: v for k, v in vars(args).items() if k not in ("func", "command", "manifest")}
    manifest = {
        "command": args.command,
        "flags": flags,
        "versions": {"numberwall": __version__, "python": platform.python_version(),
                     "numpy": np.__version__},
        "inputs": run.inputs,
        "duration_ms": round(duration_ms, 3),
        "outputs": run.outputs,
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    run = _Run()
    start = time.perf_counter()
    try:
        set_default_workers(args.threads)
        code = args.func(args, run)
    except PrecisionError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValueError, MemoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        set_default_workers(None)
    if args.manifest:
        _write_manifest(args.manifest, args, run, (time.perf_counter() - start) * 1000)
    return code


if __name__ == "__main__":
    sys.exit(main())
