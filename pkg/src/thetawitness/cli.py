"""Command-line entry point: ``thetawitness <command> ...``.

Exit status: 0 success, 1 usage or input error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import errors
from .graph import generate_mermin, generate_qite, independence_number, load_graph
from .heuristic import HeuristicConfig, heuristic_theta_d
from .theta import lovasz_theta
from .witness import (behaviour_from_realization, format_report, load_vectors, qite_or,
                      verify_or, witness_report)
from .heuristic import Realization

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_weights(path: str) -> list:
    with open(path) as fh:
        text = fh.read().strip()
    if text.startswith("["):
        return json.loads(text)
    return text.split()


def _heuristic_flags(p):
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stop-tol", type=float, default=1e-6)


def _cfg(args, d: int) -> HeuristicConfig:
    return HeuristicConfig(d=d, iters=args.iters, restarts=args.restarts, seed=args.seed,
                           stop_tol=args.stop_tol)


def cmd_alpha(args):
    g = load_graph(args.graph)
    value, stable = independence_number(g)
    print(f"alpha: {value}")
    print("stable set: " + " ".join(str(v) for v in sorted(stable.members)))


def cmd_theta(args):
    g = load_graph(args.graph)
    if args.weights:
        g = g.with_weights(_read_weights(args.weights))
    print(f"{lovasz_theta(g).value:.6g}")


def cmd_theta_rank(args):
    g = load_graph(args.graph)
    res = heuristic_theta_d(g, _cfg(args, args.dim))
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(res.trace_jsonl() + "\n")
    status = "converged" if res.converged else "not converged"
    if res.converged:
        print(f"theta^{args.dim} >= {res.bound:.6g}  (lower bound, heuristic)")
    else:
        print(f"no rank-{args.dim} solution found; best iterate objective {res.bound:.6g}")
    print(f"status: {status}; achieved rank {res.achieved_rank}; "
          f"restarts converged {res.restarts_converged}/{args.restarts}")
    if args.realization and res.realization is not None:
        with open(args.realization, "w") as fh:
            json.dump(res.realization.to_dict(), fh)


def cmd_qite(args):
    g = generate_qite(args.k)
    if args.emit_or:
        print(json.dumps({"graph": g.to_dict(), "or": qite_or(args.k).to_dict()}))
    else:
        print(g.to_json())


def cmd_mermin(args):
    print(generate_mermin().to_json())


def cmd_report(args):
    g = load_graph(args.graph)
    try:
        dims = [int(s) for s in args.dims.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"--dims must be a comma-separated list of integers: {exc}")
    rep = witness_report(g, dims, _cfg(args, dims[0] if dims else 1))
    print(format_report(rep) if args.pretty else json.dumps(rep, indent=2))


def cmd_verify_or(args):
    g = load_graph(args.graph)
    with open(args.or_file) as fh:
        or_, state = load_vectors(fh.read())
    rep = verify_or(g, or_, args.tol)
    out = rep.to_dict()
    if state is not None and rep.passed:
        p = behaviour_from_realization(Realization(or_.d, state, or_.vectors), g)
        out["sum_p"] = float(p.sum())
    print(json.dumps(out, indent=2))
    return EXIT_OK if rep.passed else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thetawitness",
                     description="Classical and quantum bounds for exclusivity graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("alpha", help="exact independence number")
    p.add_argument("graph")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("theta", help="Lovász theta number")
    p.add_argument("graph")
    p.add_argument("--weights", help="JSON list or whitespace-separated vertex weights")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("theta-rank", help="heuristic lower bound on rank-restricted theta")
    p.add_argument("graph")
    p.add_argument("--dim", type=int, required=True)
    _heuristic_flags(p)
    p.add_argument("--trace", help="write the per-iteration log as JSON lines")
    p.add_argument("--realization", help="write the extracted realization as JSON")
    p.set_defaults(func=cmd_theta_rank)

    p = sub.add_parser("qite", help="emit the k-Qite graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--or", dest="emit_or", action="store_true",
                   help="also emit the closed-form orthonormal representation")
    p.set_defaults(func=cmd_qite)

    p = sub.add_parser("mermin", help="emit the 16-vertex Mermin exclusivity graph")
    p.set_defaults(func=cmd_mermin)

    p = sub.add_parser("report", help="full dimension-witness report")
    p.add_argument("graph")
    p.add_argument("--dims", required=True)
    _heuristic_flags(p)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify-or", help="check an orthonormal representation")
    p.add_argument("graph")
    p.add_argument("or_file")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify_or)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        rc = args.func(args)
    except (UsageError, errors.MalformedGraph, errors.InvalidParameter, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (errors.NumericError, errors.ThetaFailed, errors.HeuristicFailed) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK if rc is None else rc


if __name__ == "__main__":
    sys.exit(main())
