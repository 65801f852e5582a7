"""Run every CLI experiment with figure-sized defaults.

    python3 scripts/reproduce_figures.py [results_dir] [--seed S]

Each run writes its data files and a ``<command>.meta.json`` sidecar into
``results_dir/<label>/``.
"""
import argparse
import sys
from pathlib import Path

from qchaos import cli

RUNS = [
    ("spectrum-grover", ["spectrum", "--n", "7", "--xi", "64"]),
    ("spectrum-qft", ["spectrum", "--algorithm", "qft", "--n", "7"]),
    ("evec-grover", ["evec-stats", "--n", "7", "--xi", "64"]),
    ("evec-grover-canonical", ["evec-stats", "--n", "7", "--xi", "64", "--no-randomize"]),
    ("evec-qft", ["evec-stats", "--algorithm", "qft", "--n", "7"]),
    ("sym-split", ["sym-split", "--n-min", "4", "--n", "10"]),
    ("overlap-grover", ["overlap", "--n", "5", "--epsilon", "0.1", "--iterations", "500"]),
    ("overlap-qft", ["overlap", "--algorithm", "qft", "--n", "5", "--epsilon", "0.1",
                     "--iterations", "100"]),
    ("angles-independent", ["angles", "--kind", "independent", "--epsilon", "0.01"]),
    ("angles-digital", ["angles", "--kind", "digital", "--epsilon", "0.1"]),
    ("angles-qft", ["angles", "--algorithm", "qft", "--epsilon", "0.1"]),
    ("error-sweep", ["error-sweep", "--n", "5"]),
    ("roots", ["roots", "--n", "5"]),
    ("qft-check", ["qft-check", "--n", "8"]),
]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("results", nargs="?", default="results")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    root = Path(args.results)
    failed = []
    for label, argv_ in RUNS:
        out = root / label
        out.mkdir(parents=True, exist_ok=True)
        code = cli.main([*argv_, "--seed", str(args.seed), "--out", str(out)])
        print(f"{label}: exit {code} -> {out}")
        if code:
            failed.append(label)
    if failed:
        print("failed:", ", ".join(failed), file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
