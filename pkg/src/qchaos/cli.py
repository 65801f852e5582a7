"""Command line experiment runner.

Every subcommand writes one or more CSV (or JSON) tables into ``--out`` and a
``<command>.meta.json`` sidecar recording the full configuration.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import chaometrics as cm
from . import experiments as ex
from .algorithms import (GroverSpec, QftSpec, build_approximate_qft, build_qft_circuit,
                         build_qft_closed, grover_iterations)
from .dynamics import fourier_magnitude, loglog_slope, matrix_error_sweep, peak_mass_ratio
from .errors import QChaosError
from .linalg import eig_unitary
from .perturbations import GENERATOR_FAMILY, KINDS, MAX_DIGITAL_P, PerturbationSpec

log = logging.getLogger("qchaos")

COMMANDS = ("spectrum", "evec-stats", "sym-split", "overlap", "angles",
            "error-sweep", "roots", "qft-check")


@dataclass
class ExperimentConfig:
    command: str
    algorithm: str = "grover"
    n: int = 5
    xi: int | None = 2
    kind: str = "independent"
    epsilon: float | None = None
    iterations: int = 500
    ensemble: int = 50
    bins: int = 50
    seed: int = 0
    out: str = "."
    format: str = "csv"
    n_min: int = 4
    samples: int = 20
    epsilons: tuple[float, ...] = (1e-4, 1e-3, 1e-2, 1e-1)
    randomize: bool = True


def _fmt(value):
    # repr of a float is the shortest string that round-trips
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _plain(value):
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value


class Writer:
    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.dir = Path(cfg.out)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []

    def table(self, name: str, header: list[str], rows) -> None:
        stem = f"{self.cfg.command}_{name}"
        if self.cfg.format == "json":
            path = self.dir / f"{stem}.json"
            records = [dict(zip(header, map(_plain, r))) for r in rows]
            path.write_text(json.dumps(records, indent=1) + "\n")
        else:
            path = self.dir / f"{stem}.csv"
            with path.open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                for r in rows:
                    w.writerow([_fmt(v) for v in r])
        self.files.append(path.name)

    def metadata(self, results: dict) -> None:
        meta = {
            "tool": "qchaos",
            "version": __version__,
            "generator": GENERATOR_FAMILY,
            "seed": self.cfg.seed,
            "config": {k: _plain(v) for k, v in asdict(self.cfg).items()},
            "outputs": self.files,
            "results": {k: _plain(v) for k, v in results.items()},
        }
        path = self.dir / f"{self.cfg.command}.meta.json"
        path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


# --- subcommands -------------------------------------------------------------

def cmd_spectrum(cfg: ExperimentConfig, out: Writer) -> dict:
    U = ex.base_operator(cfg.algorithm, cfg.n, cfg.xi)
    es = eig_unitary(U, seed=cfg.seed)
    spacings = cm.eigenphase_spacings(es)
    out.table("phases", ["index", "phase"], enumerate(es.phases))
    out.table("spacings", ["index", "spacing"], enumerate(spacings))
    lam = es.eigenvalues
    exceptional = int(np.sum((np.abs(lam - 1) > 1e-6) & (np.abs(lam + 1) > 1e-6)))
    return {"exceptional_eigenvalues": exceptional,
            "ks_wigner_dyson": cm.ks_distance(spacings, cm.wigner_dyson_cdf),
            "ks_poisson": cm.ks_distance(spacings, cm.poisson_cdf)}


def cmd_evec_stats(cfg: ExperimentConfig, out: Writer) -> dict:
    U = ex.base_operator(cfg.algorithm, cfg.n, cfg.xi)
    es = eig_unitary(U, seed=cfg.seed, randomize=cfg.randomize)
    y = np.sort(cm.eigenvector_component_sample(es))
    ecdf = np.arange(1, y.size + 1) / y.size
    out.table("cdf", ["y", "empirical_cdf", "pt_cdf"], zip(y, ecdf, cm.porter_thomas_cdf(y)))
    return {"ks_porter_thomas": cm.ks_distance(y, cm.porter_thomas_cdf)}


def cmd_sym_split(cfg: ExperimentConfig, out: Writer) -> dict:
    rows = ex.sym_split_table(range(cfg.n_min, cfg.n + 1), cfg.xi)
    out.table("means", ["n", "N", "mean_sym", "mean_antisym"], rows)
    N = [r[1] for r in rows]
    return {"slope_sym": loglog_slope(N, [r[2] for r in rows]),
            "slope_antisym": loglog_slope(N, [r[3] for r in rows])}


def cmd_overlap(cfg: ExperimentConfig, out: Writer) -> dict:
    series = ex.overlap_trial(cfg.algorithm, cfg.n, cfg.xi, cfg.epsilon, cfg.iterations, cfg.seed)
    freq, mag = fourier_magnitude(series)
    out.table("fidelity", ["k", "fidelity"], zip(series.iterations, series.fidelities))
    out.table("fourier", ["freq", "magnitude"], zip(freq, mag))
    return {"max_fidelity_k_ge_2": float(series.fidelities[1:].max()),
            "min_fidelity": float(series.fidelities.min()),
            "top3_power_ratio": peak_mass_ratio(mag)}


def cmd_angles(cfg: ExperimentConfig, out: Writer) -> dict:
    if cfg.kind == "digital":
        ens = ex.digital_angle_trial(cfg.n, cfg.xi, cfg.epsilon, cfg.seed, cfg.bins)
    else:
        ens = ex.independent_angle_trial(cfg.algorithm, cfg.n, cfg.xi, cfg.epsilon,
                                         cfg.ensemble, cfg.seed, cfg.bins)
    count = int(round((1 + np.sqrt(1 + 8 * ens.raw_angles.size)) / 2))
    base = ex.baseline_trial(cfg.algorithm, cfg.n, count, cfg.seed + 1, cfg.bins)
    edges = ens.histogram.bin_edges
    base_hist = cm.histogram(base.unfolded, cfg.bins, (edges[0], edges[-1]))
    # rescale so the baseline integrates to its in-range fraction
    base_density = base_hist.densities * np.mean(
        (base.unfolded >= edges[0]) & (base.unfolded <= edges[-1]))
    out.table("histogram", ["bin_center", "density", "baseline_density"],
              zip(ens.histogram.centers, ens.histogram.densities, base_density))
    return {"mean_raw_angle": ens.mean_angle, "unfolded_std": float(ens.unfolded.std()),
            "baseline_unfolded_std": float(base.unfolded.std()),
            "peaks": cm.count_peaks(ens.histogram), "vectors": count}


def cmd_error_sweep(cfg: ExperimentConfig, out: Writer) -> dict:
    table = matrix_error_sweep(GroverSpec(cfg.n, cfg.xi), cfg.epsilons, cfg.samples, cfg.seed)
    out.table("errors", ["epsilon", "error"], table)
    return {"loglog_slope": loglog_slope(*zip(*table))}


def cmd_roots(cfg: ExperimentConfig, out: Writer) -> dict:
    es = eig_unitary(ex.base_operator(cfg.algorithm, cfg.n, cfg.xi), seed=cfg.seed)
    rows = [(m, cm.root_of_unity_defect(es, m)) for m in range(1, 9)]
    out.table("defects", ["m", "defect"], rows)
    return {"best_m": min(rows, key=lambda r: r[1])[0]}


def cmd_qft_check(cfg: ExperimentConfig, out: Writer) -> dict:
    closed = build_qft_closed(cfg.n)
    circuit_residual = float(np.abs(build_qft_circuit(cfg.n) - closed).max())
    U4 = np.linalg.matrix_power(closed, 4)
    u4_residual = float(np.abs(U4 - np.eye(2**cfg.n)).max())
    out.table("residuals", ["quantity", "value"],
              [("circuit_vs_closed", circuit_residual), ("u4_minus_identity", u4_residual)])
    rows = []
    for m in range(0, cfg.n):
        diff = build_approximate_qft(QftSpec(cfg.n, m)) - closed
        rows.append((m, float(np.linalg.norm(diff, 2))))
    out.table("cutoff", ["cutoff", "operator_norm_error"], rows)
    return {"circuit_vs_closed": circuit_residual, "u4_minus_identity": u4_residual}


HANDLERS = {
    "spectrum": cmd_spectrum, "evec-stats": cmd_evec_stats, "sym-split": cmd_sym_split,
    "overlap": cmd_overlap, "angles": cmd_angles, "error-sweep": cmd_error_sweep,
    "roots": cmd_roots, "qft-check": cmd_qft_check,
}


# --- argument handling -------------------------------------------------------

def _epsilon_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algorithm", choices=("grover", "qft"), default="grover")
    common.add_argument("--n", type=int, default=None, help="qubits (upper end for sym-split)")
    common.add_argument("--xi", type=int, default=None, help="marked index (grover)")
    common.add_argument("--epsilon", type=float, default=None)
    common.add_argument("--kind", choices=KINDS, default=None)
    common.add_argument("--iterations", type=int, default=500)
    common.add_argument("--ensemble", type=int, default=50)
    common.add_argument("--bins", type=int, default=50)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=".")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="qchaos", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qchaos {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "sym-split":
            p.add_argument("--n-min", type=int, default=4)
        if name == "error-sweep":
            p.add_argument("--samples", type=int, default=20)
            p.add_argument("--epsilons", type=_epsilon_list, default=(1e-4, 1e-3, 1e-2, 1e-1))
        if name == "evec-stats":
            p.add_argument("--no-randomize", action="store_true",
                           help="keep the canonical basis inside degenerate clusters")
    return parser


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    """Fill figure defaults and validate; raises ValueError on bad combinations."""
    cmd = args.command
    algorithm = args.algorithm
    if cmd == "qft-check":
        algorithm = "qft"
    if cmd == "error-sweep" and algorithm != "grover":
        raise ValueError("error-sweep is defined for --algorithm grover only")
    n = args.n if args.n is not None else {"sym-split": 10}.get(cmd, 5)
    if n < 1 or n > 12:
        raise ValueError(f"--n must lie in [1, 12], got {n}")
    if algorithm == "grover" and n < 2:
        raise ValueError("grover needs --n >= 2")

    if algorithm == "grover":
        xi = 2 % 2**n if args.xi is None else args.xi
        if not 0 <= xi < 2**n:
            raise ValueError(f"--xi must lie in [0, {2**n}), got {args.xi}")
    else:
        if args.xi is not None:
            raise ValueError("--xi applies to --algorithm grover only")
        xi = None

    kind = args.kind or ("qft-phase" if algorithm == "qft" else "independent")
    if algorithm == "qft" and kind != "qft-phase":
        raise ValueError("the QFT supports --kind qft-phase only")
    if algorithm == "grover" and kind == "qft-phase":
        raise ValueError("--kind qft-phase applies to the QFT only")
    if kind == "digital" and cmd != "angles":
        raise ValueError("--kind digital is only used by the angles subcommand")
    if kind == "digital" and grover_iterations(n) > MAX_DIGITAL_P:
        raise ValueError(f"digital family of 2**{grover_iterations(n)} operators is too large")

    epsilon = args.epsilon
    if epsilon is None:
        epsilon = 0.01 if (cmd == "angles" and kind != "digital") else 0.1
    PerturbationSpec(kind, epsilon, args.seed)  # range check

    for flag in ("iterations", "ensemble", "bins"):
        if getattr(args, flag) < (8 if flag == "iterations" else 2):
            raise ValueError(f"--{flag} is too small: {getattr(args, flag)}")

    cfg = ExperimentConfig(command=cmd, algorithm=algorithm, n=n, xi=xi, kind=kind,
                           epsilon=epsilon, iterations=args.iterations, ensemble=args.ensemble,
                           bins=args.bins, seed=args.seed, out=args.out, format=args.format)
    if cmd == "sym-split":
        if not 2 <= args.n_min < n:
            raise ValueError("need 2 <= --n-min < --n for a fit")
        cfg.n_min = args.n_min
    if cmd == "error-sweep":
        if len(args.epsilons) < 2 or any(e <= 0 for e in args.epsilons):
            raise ValueError("--epsilons needs at least two positive values")
        cfg.samples = args.samples
        cfg.epsilons = tuple(args.epsilons)
        if cfg.samples < 1:
            raise ValueError("--samples must be positive")
    if cmd == "evec-stats":
        cfg.randomize = not args.no_randomize
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = make_config(args)
    except ValueError as exc:
        parser.error(str(exc))
    out = Writer(cfg)
    try:
        results = HANDLERS[cfg.command](cfg, out)
    except QChaosError as exc:
        print(f"qchaos: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    out.metadata(results)
    for key, value in results.items():
        log.info("%s = %s", key, value)
    return 0


if __name__ == "__main__":
    sys.exit(main())
