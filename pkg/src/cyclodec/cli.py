"""Command-line front end.

Exit codes: 0 ok, 1 check failed, 2 usage or domain error, 3 infeasible design.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from pydantic import ValidationError

from . import SCHEMA_VERSION, __version__
from .catalog import variants, write_catalog_csv
from .cyclotomic import MAX_INDEX, cyclotomic_unchecked, cyclotomic_rational, compact, mobius, totient
from .design import design_stage
from .designfile import DesignFile
from .eligibility import eligible_set
from .polynomial import format_poly
from .simulate import Stimulus, default_architectures, equivalence_check
from .spectrum import DesignSpec, composite_response, verify_spec, write_response_csv
from .synthesis import architecture_json

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_poly(args) -> int:
    q = args.q
    if not 1 <= q <= MAX_INDEX:
        raise UsageError(f"cyclotomic index {q} outside [1, {MAX_INDEX}]")
    print(format_poly(cyclotomic_unchecked(q)))
    if q == 1:
        print("warning: C_1 has a zero at DC and cannot be normalized to unity gain", file=sys.stderr)
        return EXIT_OK
    mob = cyclotomic_rational(q)
    print(f"mobius:  {mob}")
    cmp_ = compact(mob)
    if cmp_ != mob:
        print(f"compact: {cmp_}")
    for v in variants(q):
        print(f"{v.label:8s} {v.kind:12s} adders={v.adders:3d} delays={v.delays:3d}")
    return EXIT_OK


def cmd_design(args) -> int:
    spec = DesignSpec(args.D, args.nu, args.Rp, args.As)
    result = design_stage(spec, gamma=args.gamma, cap=args.cap)
    doc = DesignFile.from_result(result)
    _emit(doc.to_json(), args.output)
    sol = result.solution
    if sol.status != "optimal":
        print(f"infeasible: no orders within caps meet Rp={spec.R_p} dB, As={spec.A_s} dB "
              f"({len(result.S)} eligible CPs)", file=sys.stderr)
        return EXIT_INFEASIBLE
    orders = " ".join(f"C_{q}^{m}" if m > 1 else f"C_{q}" for q, m in sol.orders.items())
    print(f"optimal cost {sol.cost:g}: {orders}  [{sol.node_count} B&B nodes, "
          f"{len(result.S)} eligible]", file=sys.stderr)
    return EXIT_OK


def _load(path: str) -> DesignFile:
    return DesignFile.load(path)


def cmd_verify(args) -> int:
    d = _load(args.design)
    rep = verify_spec(d.order_map, d.spec(), args.grid)
    print(json.dumps(rep.as_dict(), indent=2))
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_response(args) -> int:
    d = _load(args.design)
    pts = composite_response(d.order_map, args.grid)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_response_csv(pts, fh)
    else:
        write_response_csv(pts, sys.stdout)
    return EXIT_OK


def cmd_synth(args) -> int:
    d = _load(args.design)
    doc = architecture_json(d.order_map, d.D, args.R_in, args.arch)
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    if args.arch == "cascade" and doc.get("cascade") is None:
        print("cascade form not applicable to this design", file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args) -> int:
    d = _load(args.design)
    stim = Stimulus(args.stimulus, length=args.length, seed=args.seed, width=args.width, path=args.file)
    archs = default_architectures(d.order_map, d.D, stim.width)
    if args.arch != "all":
        keep = {"direct", args.arch}
        if args.arch not in {a.name for a in archs}:
            raise UsageError(f"architecture {args.arch!r} not applicable to this design")
        archs = [a for a in archs if a.name in keep]
    report = equivalence_check(d.order_map, d.D, [stim], archs)
    if args.dump:
        out = Path(args.dump)
        out.mkdir(parents=True, exist_ok=True)
        for name, stream in report.runs[0].streams.items():
            (out / f"{name}.txt").write_text("".join(f"{v}\n" for v in stream))
    print(json.dumps(report.as_dict(), indent=2))
    if args.check and not report.passed:
        return EXIT_CHECK
    return EXIT_OK


def cmd_eligible(args) -> int:
    S = eligible_set(DesignSpec(args.D, args.nu))
    print(json.dumps(S))
    print(f"{len(S)} eligible CPs for D={args.D}, nu={args.nu}", file=sys.stderr)
    return EXIT_OK


def cmd_tables(args) -> int:
    if args.totient:
        for n in range(1, args.max + 1):
            print(f"{n},{totient(n)}")
    elif args.mobius:
        groups = {v: [n for n in range(1, args.max + 1) if mobius(n) == v] for v in (1, -1, 0)}
        for v, ns in groups.items():
            print(f"mu={v:+d}: {' '.join(map(str, ns))}")
    else:
        write_catalog_csv(sys.stdout, args.gamma)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_catalog_csv(fh, args.gamma)
    else:
        write_catalog_csv(sys.stdout, args.gamma)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclodec", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} (schema {SCHEMA_VERSION})")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("poly", help="print C_q, its rational forms and costs")
    s.add_argument("q", type=int)
    s.set_defaults(func=cmd_poly)

    s = sub.add_parser("design", help="optimize CP orders for one decimation stage")
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--nu", type=int, default=1)
    s.add_argument("--Rp", type=float, default=1.0, help="passband ripple bound, dB")
    s.add_argument("--As", type=float, default=50.0, help="folding-band attenuation target, dB")
    s.add_argument("--gamma", type=float, default=0.0, help="delay weight in the cost, 0..1")
    s.add_argument("--cap", type=int, default=16, help="order cap for CPs with zero passband deviation")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_design)

    s = sub.add_parser("verify", help="check a design against its spec on a dense grid")
    s.add_argument("design")
    s.add_argument("--grid", type=int, default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("response", help="composite magnitude response as CSV")
    s.add_argument("design")
    s.add_argument("--grid", type=int, default=2048)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_response)

    s = sub.add_parser("synth", help="architecture JSON")
    s.add_argument("design")
    s.add_argument("--arch", choices=["all", "direct", "polyphase", "recursive", "cascade"], default="all")
    s.add_argument("--R-in", dest="R_in", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("simulate", help="run architectures bit-exactly and compare")
    s.add_argument("design")
    s.add_argument("--arch", choices=["all", "polyphase", "recursive", "cascade"], default="all")
    s.add_argument("--stimulus", choices=["impulse", "step", "prng", "file"], default="prng")
    s.add_argument("--length", type=int, default=10_000)
    s.add_argument("--seed", type=lambda v: int(v, 0), default=0xC0FFEE)
    s.add_argument("--width", type=int, default=None, help="input sample width in bits")
    s.add_argument("--file", default=None)
    s.add_argument("--dump", default=None, help="directory for per-architecture streams")
    s.add_argument("--check", action="store_true", help="exit 1 unless all streams agree")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("eligible", help="eligible CP indices for a stage")
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--nu", type=int, default=1)
    s.set_defaults(func=cmd_eligible)

    s = sub.add_parser("tables", help="totient, Mobius or catalog tables")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--totient", action="store_true")
    g.add_argument("--mobius", action="store_true")
    g.add_argument("--catalog", action="store_true")
    s.add_argument("--max", type=int, default=None)
    s.add_argument("--gamma", type=float, default=0.0)
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("catalog", help="per-CP adder/delay catalog as CSV")
    s.add_argument("--gamma", type=float, default=0.0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "max", None) is None and args.command == "tables":
        args.max = 69 if args.totient else MAX_INDEX
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return args.func(args)
    except (UsageError, ValueError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
