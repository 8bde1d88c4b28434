"""Command-line front end.

Exit codes: 0 success, 1 bad input (parse errors, invalid arguments),
2 failed internal verification.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .apps import incremental_insert, incremental_new, plus_one_augmentation_value
from .cactus import to_dot, to_json
from .errors import InputError, InternalError, TooFewTerminals
from .graph import as_graph, is_hypergraph
from .hypercactus import compute_steiner_hypercactus
from .io import parse_trace, read_instance
from .isolating import maximal_isolating_mincuts, minimal_isolating_mincuts
from .maxflow import max_flow
from .oracle import brute_bipartition_table, check_equivalence
from .steiner import CactusConfig, compute_steiner_cactus


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("MINCACTUS_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"MINCACTUS_SEED={raw!r} is not an integer") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $MINCACTUS_SEED or 0)")
    common.add_argument("--reps", type=float, default=48.0, help="sampling constant c in R = ceil(c ln n)")
    common.add_argument("--verify-splits", action="store_true", help="re-check every split and the final cactus")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--threads", type=int, default=1)

    p = _Parser(prog="mincactus", description="Steiner mincuts, isolating cuts and cactus representations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("mincut", parents=[common], help="Steiner mincut value and one side").add_argument("file")
    iso = sub.add_parser("isocuts", parents=[common], help="minimal or maximal isolating mincuts")
    iso.add_argument("--mode", choices=("min", "max"), default="max")
    iso.add_argument("file")
    sub.add_parser("cactus", parents=[common], help="Steiner cactus of a graph").add_argument("file")
    sub.add_parser("hypercactus", parents=[common], help="Steiner hypercactus").add_argument("file")
    sub.add_parser("verify", parents=[common], help="compare the cactus with brute force").add_argument("file")
    sub.add_parser("augment-value", parents=[common], help="+1 augmentation value").add_argument("file")
    inc = sub.add_parser("incremental", parents=[common], help="replay hyperedge insertions")
    inc.add_argument("file")
    inc.add_argument("trace")
    return p


def _config(args) -> CactusConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.threads < 1:
        raise InputError("--threads must be ≥ 1")
    if args.reps <= 0:
        raise InputError("--reps must be positive")
    return CactusConfig(seed=seed, reps=args.reps, verify_splits=args.verify_splits, threads=args.threads)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _emit_cactus(c, fmt: str) -> str:
    return to_dot(c) if fmt == "dot" else to_json(c) + "\n"


def _terminals_of(inst, g) -> list[int]:
    T = inst.terminals if inst.terminals is not None else list(range(g.n))
    if len(T) < 2:
        raise TooFewTerminals("at least two terminals required")
    return sorted(T)


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Execute one command; returns (exit code, stdout payload)."""
    args = _parser().parse_args(argv)
    config = _config(args)
    inst = read_instance(args.file)
    g = inst.graph()
    T = _terminals_of(inst, g)
    cmd = args.command
    if cmd == "mincut":
        g.require_connected()
        best = min((max_flow(g, [T[0]], [t]) for t in T[1:]), key=lambda fr: fr.value)
        return 0, _dump({"lambda": best.value, "side": sorted(best.min_side)}) + "\n"
    if cmd == "isocuts":
        fn = minimal_isolating_mincuts if args.mode == "min" else maximal_isolating_mincuts
        cuts = fn(g, T)
        payload = {
            "mode": args.mode,
            "cuts": [{"terminal": t, "value": cuts[t].value, "side": sorted(cuts[t].side)} for t in cuts.terminals],
        }
        return 0, _dump(payload) + "\n"
    if cmd == "cactus":
        return 0, _emit_cactus(compute_steiner_cactus(as_graph(g), T, config), args.format)
    if cmd == "hypercactus":
        return 0, _emit_cactus(compute_steiner_hypercactus(g, T, config), args.format)
    if cmd == "verify":
        build = compute_steiner_hypercactus if is_hypergraph(g) else compute_steiner_cactus
        report = check_equivalence(build(g, T, config), brute_bipartition_table(g, T))
        lines = [report.summary()]
        lines += [f"missing {sorted(A)}" for A in report.missing]
        lines += [f"spurious {sorted(A)}" for A in report.spurious]
        return (0 if report.ok else 2), "\n".join(lines) + "\n"
    if cmd == "augment-value":
        g.require_connected()
        return 0, f"{plus_one_augmentation_value(g, T, config)}\n"
    if cmd == "incremental":
        with open(args.trace) as fh:
            trace = parse_trace(fh.read())
        state = incremental_new(g.n, g, config)
        out = [str(incremental_insert(state, members)) for members in trace]
        return 0, "".join(x + "\n" for x in out)
    raise InputError(f"unknown command {cmd!r}")  # pragma: no cover


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, payload = run(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalError as exc:
        print(f"internal verification failed: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(payload)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
