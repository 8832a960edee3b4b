"""Command-line front end: constants, verify, suite, covers, oracle, tightness.

Exit codes: 0 success, 1 validation error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .constants import bl_duality_check, constants_report
from .covers import CoverError, IndexCover, all_equal_weight_covers, enumerate_equal_weight_covers, named_cover
from .functional import DEFAULT_MC_SAMPLES, FAMILIES, bobkov_nazarov_check
from .harness import (STATEMENT_NAMES, SuiteConfig, default_config, evaluate, oracle_check, run_suite,
                      tightness_search)
from .inequalities import VERIFY_TOL, eval_classics, translate_to_interior
from .linalg import Basis, random_basis
from .polytope import body_from_spec, named_body

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _load_json(arg: str):
    if os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    if arg.lstrip().startswith("{"):
        return json.loads(arg)
    return None


def parse_body(arg: str):
    """Named body (cube3, ccube2, cross4, simplex3), a JSON body spec, or a path to one."""
    data = _load_json(arg)
    return body_from_spec(data) if data is not None else named_body(arg)


def parse_basis(arg: str, n: int | None, seed: int) -> Basis:
    """'canonical', 'random' (uses --seed), a JSON basis, or a path to one."""
    if arg in ("canonical", "random"):
        if n is None:
            raise ValueError(f"basis {arg!r} needs the dimension (from --n, the body or the cover)")
        return Basis.canonical(n) if arg == "canonical" else random_basis(np.random.default_rng(seed), n)
    data = _load_json(arg)
    if data is None:
        raise ValueError(f"cannot read basis {arg!r}")
    return Basis.from_json(data)


def parse_cover(arg: str, n: int | None) -> IndexCover:
    """Named cover (lw, partition, bt-k2-m3[-i]), a JSON cover, or a path to one."""
    data = _load_json(arg)
    if data is not None:
        return IndexCover.from_json(data)
    if n is None:
        raise ValueError(f"cover {arg!r} needs the dimension")
    return named_cover(arg, n)


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True, default=float))
    else:
        print(text)


def cmd_constants(args) -> int:
    cover = parse_cover(args.cover, args.n)
    B = parse_basis(args.basis, cover.n, args.seed)
    rep = constants_report(B, cover)
    chk = bl_duality_check(B, cover)
    rep["duality_residual"] = chk.residual
    text = "\n".join(f"{k}: {v}" for k, v in sorted(rep.items()))
    _emit(args, rep, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.statement == "bobkov_nazarov":
        reps = [bobkov_nazarov_check(args.n or 3)]
    elif args.statement == "classics":
        reps = eval_classics(parse_body(args.body))
    else:
        K = parse_body(args.body)
        if args.center:
            K = translate_to_interior(K)
        n = K.dim
        cover = parse_cover(args.cover, n) if args.statement != "fradelizi" else None
        B = parse_basis(args.basis, n, args.seed)
        reps = [evaluate(args.statement, args.variant, K, B, cover, args.family, seed=args.seed,
                         mc_samples=args.mc_samples)]
    failed = [r for r in reps if not r.holds(args.tol)]
    payload = [r.to_json() for r in reps]
    text = "\n".join(f"{r.statement}/{r.variant}: ratio {r.ratio:.12g} ({'ok' if r.holds(args.tol) else 'FAIL'})"
                     for r in reps)
    _emit(args, payload if len(payload) > 1 else payload[0], text)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_suite(args) -> int:
    if args.config:
        data = _load_json(args.config)
        if data is None:
            raise ValueError(f"cannot read config {args.config!r}")
        data.setdefault("seed", args.seed)
        cfg = SuiteConfig.from_json(data)
    else:
        cfg = default_config()
        cfg.seed = args.seed
    if args.threads:
        cfg.threads = args.threads
    if args.tol_given:
        cfg.tol = args.tol
    if args.mc_samples_given:
        cfg.mc_samples = args.mc_samples
    result = run_suite(cfg)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(result.jsonl() + "\n")
    s = result.summary
    lines = [f"evaluations: {s['evaluations']}  failures: {s['failures']}  digest: {s['digest']}"]
    for key, e in sorted(s["min_ratio"].items()):
        lines.append(f"  {key:32s} n={e['count']:5d}  min ratio {e['min_ratio']:.9g}")
    _emit(args, s, "\n".join(lines))
    return EXIT_FAILED if result.failures else EXIT_OK


def cmd_covers(args) -> int:
    if args.k is not None and args.m is not None:
        covers = enumerate_equal_weight_covers(args.n, args.k, args.m)
    else:
        covers = all_equal_weight_covers(args.n, args.max_m)
    payload = [c.to_json() for c in covers]
    text = "\n".join(f"{c.subsets} weight {c.weights[0]} p={c.p}" for c in covers)
    _emit(args, payload, text + f"\n{len(covers)} covers")
    return EXIT_OK


def cmd_oracle(args) -> int:
    K = parse_body(args.body)
    res = oracle_check(K, args.seed, args.mc_samples)
    text = (f"exact {res['exact']:.12g}  mc {res['estimate']:.12g} +- {res['std_error']:.3g}  "
            f"z = {res['z']:+.2f}")
    _emit(args, res, text)
    return EXIT_OK if res["within_3sigma"] else EXIT_FAILED


def cmd_tightness(args) -> int:
    cover = parse_cover(args.cover, args.n) if args.cover else None
    res = tightness_search(args.statement, args.variant, args.n, args.budget, args.seed, cover,
                           restarts=args.restarts, tol=args.tol)
    text = f"{res.statement}/{res.variant}: best ratio {res.best_ratio:.12g}"
    if res.suspect:
        text += "  (below 1 - tol: numerically suspect, replay at finer settings)"
    _emit(args, res.to_json(), text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=0, help="worker processes (suite)")
    common.add_argument("--tol", type=float, default=None, help=f"ratio tolerance (default {VERIFY_TOL})")
    common.add_argument("--mc-samples", type=int, default=None,
                        help=f"Monte Carlo samples (default {DEFAULT_MC_SAMPLES})")

    p = _Parser(prog="affine-lw", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constants", parents=[common], help="BL1, BL2 and prefactors for a basis and cover")
    c.add_argument("--basis", default="canonical")
    c.add_argument("--cover", required=True)
    c.add_argument("--n", type=int)
    c.set_defaults(func=cmd_constants)

    v = sub.add_parser("verify", parents=[common], help="evaluate one statement on one instance")
    v.add_argument("--statement", required=True,
                   choices=STATEMENT_NAMES + ("bobkov_nazarov", "classics"))
    v.add_argument("--variant", type=int, default=1)
    v.add_argument("--body", default="cube3")
    v.add_argument("--basis", default="canonical")
    v.add_argument("--cover", default="lw")
    v.add_argument("--family", choices=FAMILIES, default="exp_norm")
    v.add_argument("--n", type=int, help="dimension for bobkov_nazarov")
    v.add_argument("--center", action="store_true", help="translate the body so its centroid is 0")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", parents=[common], help="batch verification over random instances")
    s.add_argument("--config", help="suite config JSON (file or inline)")
    s.add_argument("--output", help="write JSON-lines records here")
    s.set_defaults(func=cmd_suite)

    cv = sub.add_parser("covers", parents=[common], help="enumerate equal-weight covers")
    cv.add_argument("--n", type=int, required=True)
    cv.add_argument("--k", type=int)
    cv.add_argument("--m", type=int)
    cv.add_argument("--max-m", type=int, default=3)
    cv.set_defaults(func=cmd_covers)

    o = sub.add_parser("oracle", parents=[common], help="exact volume against Monte Carlo")
    o.add_argument("--body", required=True)
    o.set_defaults(func=cmd_oracle)

    t = sub.add_parser("tightness", parents=[common], help="local search for small ratios")
    t.add_argument("--statement", required=True)
    t.add_argument("--variant", type=int, default=1)
    t.add_argument("--n", type=int, default=3)
    t.add_argument("--budget", type=int, default=200)
    t.add_argument("--restarts", type=int, default=20)
    t.add_argument("--cover")
    t.set_defaults(func=cmd_tightness)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.tol_given = args.tol is not None
        args.mc_samples_given = args.mc_samples is not None
        args.tol = VERIFY_TOL if args.tol is None else args.tol
        args.mc_samples = DEFAULT_MC_SAMPLES if args.mc_samples is None else args.mc_samples
        if args.tol <= 0 or args.mc_samples <= 0 or args.threads < 0:
            raise ValueError("--tol and --mc-samples must be positive, --threads non-negative")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, KeyError, CoverError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
