"""Run every CLI command over the fixture corpus and print the combined output.

    python scripts/cli_corpus.py [--dir tests/fixtures] [--seed 3]

Each block is headed by the argument list and exit code, so two runs can be
compared byte for byte.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys
from pathlib import Path

from mincactus.cli import main

GRAPH_COMMANDS = ["mincut", "isocuts --mode min", "isocuts --mode max", "cactus", "cactus --format dot", "hypercactus", "verify", "augment-value"]


def corpus_commands(root: Path, seed: int) -> list[list[str]]:
    out = []
    for path in sorted(root.glob("*graph")):
        for cmd in GRAPH_COMMANDS:
            out.append(cmd.split() + [str(path), "--seed", str(seed)])
    for trace in sorted(root.glob("*.trace")):
        out.append(["incremental", str(root / "empty4.graph"), str(trace), "--seed", str(seed)])
    return out


def run_corpus(root: Path, seed: int) -> str:
    chunks = []
    for argv in corpus_commands(root, seed):
        buf, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(err):
            try:
                code = main(argv)
            except SystemExit as exc:
                code = exc.code
        chunks.append(f"$ {' '.join(argv)}\n[exit {code}]\n{buf.getvalue()}{err.getvalue()}")
    return "".join(chunks)


def main_cli() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dir", type=Path, default=Path("tests/fixtures"))
    p.add_argument("--seed", type=int, default=3)
    args = p.parse_args()
    sys.stdout.write(run_corpus(args.dir, args.seed))
    return 0


if __name__ == "__main__":
    sys.exit(main_cli())
