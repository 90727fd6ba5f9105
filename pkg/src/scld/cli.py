"""Command-line front end: ``scld <subcommand> ...``.

Exit status is 0 on success, 1 when tracing fails or a computation is
infeasible, and 2 for bad flags or unreadable input files.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import attack, bounds, constructions, dynamic, trace, verify
from .code import code_to_json, evidence_to_json, load_code, load_evidence
from .errors import CodeFormatError, SCLDError

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_bytes(text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.family} needs {', '.join(missing)}")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


# -- subcommands ---------------------------------------------------------------

def cmd_construct(args) -> int:
    fam = args.family
    if fam == "plane":
        _need(args, "q")
        code = constructions.packing_to_scld(constructions.projective_plane(args.q))
    elif fam == "truncated-plane":
        _need(args, "q")
        code = constructions.packing_to_scld(constructions.truncate_plane(args.q))
    elif fam == "poly-fpc":
        _need(args, "q", "l", "t")
        code = constructions.fpc_poly_eval(args.q, args.l, args.t, extended=args.extended)
    elif fam == "c4-fpc":
        _need(args, "m", "l")
        code = constructions.fpc_construction4(args.m, args.l)
    elif fam == "concat":
        _need(args, "inner", "outer")
        code = constructions.concatenate(load_code(args.inner), load_code(args.outer))
    elif fam == "x3":
        _need(args, "l")
        code = constructions.x3_code(args.l)
    else:
        _need(args, "n", "t")
        code, _ = constructions.random_expurgated(
            args.n,
            args.q or 2,
            args.t,
            target=args.target,
            L=args.L,
            M=args.M or 64,
            p=args.p,
            weight_filter=args.weight_filter,
            seed=args.seed,
        )
    _emit(code_to_json(code), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    code = load_code(args.code)
    rep = verify.verify(code, args.t, args.property, args.L)
    _emit(_json(rep.to_dict()), args.out)
    return EXIT_OK


def cmd_trace(args) -> int:
    d = load_evidence(args.evidence)
    if args.algorithm == "x3":
        if args.l is None:
            raise UsageError("--algorithm x3 needs --l")
        res = trace.fast_trace_x3(args.l, d)
    else:
        if args.code is None:
            raise UsageError("--code is required")
        code = load_code(args.code)
        if args.algorithm == "scld":
            res = trace.trace_scld(code, args.t, args.L, d, diagnostic=args.diagnostic)
        elif args.algorithm == "sc":
            res = trace.trace_sc(code, args.t, d, diagnostic=args.diagnostic)
        else:
            res = trace.trace_fpc(code, args.t, d)
    _emit(_json(res.to_dict()), args.out)
    return EXIT_OK if res.identified else EXIT_DOMAIN


def cmd_attack(args) -> int:
    code = load_code(args.code)
    J = _ints(args.coalition)
    if args.signal:
        if args.weights:
            w = [float(x) for x in args.weights.split(",")]
            spec = attack.AttackSpec(tuple(J), tuple(w))
        else:
            spec = attack.AttackSpec.uniform(J)
        model = attack.SignalModel.random(code.n, seed=args.seed)
        d = attack.signal_pipeline(model, code, spec, args.epsilon)
    else:
        d = attack.symbolic_attack(code, J)
    _emit(evidence_to_json(d), args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.table is not None:
        _emit(bounds.table_csv(args.table), args.out)
        return EXIT_OK
    if args.family is None:
        raise UsageError("bounds needs --table or --family")
    t = args.t
    if t is None:
        raise UsageError("--t is required")
    fam = args.family
    if fam == "sc":
        rep = bounds.rate_sc_lower(t)
    elif fam == "hld-alpha":
        rep = bounds.rate_hld_alpha_lower(t, args.alpha)
    elif fam == "scld-alpha":
        rep = bounds.rate_scld_alpha_lower(t, args.alpha)
    elif fam == "scld-const-L":
        if args.L is None:
            raise UsageError("--L is required")
        rep = bounds.rate_scld_constL_lower(t, args.L)
    elif fam == "qary":
        if args.L is None:
            raise UsageError("--L is required")
        rep = bounds.RateBoundReport("qary", {"t": t, "L": args.L}, bounds.rate_qary_scld(t, args.L))
    else:
        rep = bounds.tdtt_optimize(t, args.mode)
    _emit(_json(rep.to_dict()), args.out)
    return EXIT_OK


def cmd_dynamic(args) -> int:
    workers = args.threads or os.cpu_count() or 1
    summary = dynamic.simulate(args.users, args.t, args.trials, seed=args.seed, workers=workers)
    lines = [_json(tr.to_dict(timings=args.timings)) for tr in summary.transcripts]
    lines.append(_json({"summary": summary.to_dict(timings=args.timings)}))
    _emit("".join(lines), args.out)
    return EXIT_OK if summary.recovered == summary.trials else EXIT_DOMAIN


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("--out", help="output file (default stdout)")

    ap = argparse.ArgumentParser(prog="scld", description="Secure codes with list decoding: build, verify, trace.")
    ap.add_argument("--seed", type=int, default=0, help="global random seed")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a code and write it as JSON")
    p.add_argument(
        "--family", required=True, choices=["plane", "truncated-plane", "poly-fpc", "c4-fpc", "concat", "x3", "random"]
    )
    p.add_argument("--q", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--M", type=int, help="initial sample size for --family random")
    p.add_argument("--L", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--target", default="SC", choices=["SC", "SCLD", "HLD"])
    p.add_argument("--weight-filter", action="store_true")
    p.add_argument("--extended", action="store_true", help="poly-fpc: allow l = q + 1")
    p.add_argument("--inner")
    p.add_argument("--outer")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="check a code property by brute force")
    p.add_argument("--code", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--property", required=True, choices=["fpc", "sc", "hld", "scld"])
    p.add_argument("--L", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace", parents=[common], help="recover a coalition from evidence")
    p.add_argument("--code")
    p.add_argument("--evidence", required=True)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--L", type=int)
    p.add_argument("--l", type=int, help="field degree for --algorithm x3")
    p.add_argument("--algorithm", default="scld", choices=["scld", "sc", "fpc", "x3"])
    p.add_argument("--diagnostic", action="store_true")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("attack", parents=[common], help="forge evidence from a coalition")
    p.add_argument("--code", required=True)
    p.add_argument("--coalition", required=True, help='e.g. "0,3,5"')
    p.add_argument("--weights", help='e.g. "0.2,0.3,0.5"')
    p.add_argument("--signal", action="store_true", help="run the real-valued signal model")
    p.add_argument("--epsilon", type=float, default=attack.DEFAULT_EPS)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("bounds", parents=[common], help="rate lower bounds and tables")
    p.add_argument("--table", type=int, choices=[2, 3, 4, 5])
    p.add_argument("--family", choices=["sc", "hld-alpha", "scld-alpha", "scld-const-L", "qary", "tdtt"])
    p.add_argument("--t", type=int)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--L", type=int)
    p.add_argument("--mode", default="max-rate", choices=list(bounds.MODES))
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("dynamic-sim", parents=[common], help="two-stage tracing simulation")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--threads", type=int, help="worker processes (default: all cores)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")
    p.set_defaults(func=cmd_dynamic)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError, IsADirectoryError, CodeFormatError) as exc:
        print(f"scld {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SCLDError as exc:
        print(f"scld {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
