"""Time-domain diagnostics: fidelity decay, angle ensembles, error sweeps."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algorithms import GroverSpec, build_grover
from .chaometrics import Histogram, histogram
from .errors import DimensionMismatch, TooFewMatrices, ZeroVector
from .linalg import random_state
from .perturbations import PerturbationSpec, perturbed_grover


def worker_count() -> int:
    """Thread cap from QCHAOS_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("QCHAOS_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Ordered map; runs in threads when QCHAOS_THREADS > 1."""
    workers = worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def member_rngs(seed, count: int) -> list[np.random.Generator]:
    """One independent generator per ensemble member, derived from ``seed``."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


# --- fidelity ---------------------------------------------------------------

@dataclass(frozen=True)
class OverlapSeries:
    iterations: np.ndarray
    fidelities: np.ndarray

    def even(self) -> np.ndarray:
        return self.fidelities[self.iterations % 2 == 0]

    def odd(self) -> np.ndarray:
        return self.fidelities[self.iterations % 2 == 1]


def overlap_series(U: np.ndarray, U_prime: np.ndarray, psi0: np.ndarray, k_max: int) -> OverlapSeries:
    """|<U^k psi0, U'^k psi0>|^2 for k = 1..k_max by repeated application."""
    if U.shape != U_prime.shape or U.shape[1] != psi0.shape[0]:
        raise DimensionMismatch(
            f"operators {U.shape}, {U_prime.shape} and state {psi0.shape} do not match")
    a = np.asarray(psi0, dtype=complex)
    b = a.copy()
    fid = np.empty(k_max)
    for k in range(k_max):
        a = U @ a
        b = U_prime @ b
        fid[k] = abs(np.vdot(a, b)) ** 2
    return OverlapSeries(np.arange(1, k_max + 1), fid)


def fourier_magnitude(series: OverlapSeries | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(frequencies in cycles/iteration, |DFT|) of the mean-removed series."""
    f = series.fidelities if isinstance(series, OverlapSeries) else np.asarray(series, dtype=float)
    if f.size < 8:
        raise ValueError("need at least 8 samples for a spectrum")
    mag = np.abs(np.fft.rfft(f - f.mean()))
    return np.fft.rfftfreq(f.size), mag


def peak_mass_ratio(magnitudes: np.ndarray, top: int = 3) -> float:
    """Share of spectral power (|F|^2, zero frequency excluded) held by the
    ``top`` strongest components."""
    power = np.asarray(magnitudes[1:], dtype=float) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    return float(np.sort(power)[-top:].sum() / total)


# --- angles -----------------------------------------------------------------

def angle(psi_i: np.ndarray, psi_k: np.ndarray) -> float:
    """Hilbert-space angle in [0, pi/2] between two rays."""
    ni = np.vdot(psi_i, psi_i).real
    nk = np.vdot(psi_k, psi_k).real
    if ni == 0 or nk == 0:
        raise ZeroVector("angle with the zero vector is undefined")
    c = abs(np.vdot(psi_i, psi_k)) / np.sqrt(ni * nk)
    return float(np.arccos(min(max(c, 0.0), 1.0)))


def pairwise_angles(states: np.ndarray) -> np.ndarray:
    """Angles for all pairs i < k of the rows of ``states``."""
    S = np.asarray(states)
    norms = np.linalg.norm(S, axis=1)
    if np.any(norms == 0):
        raise ZeroVector("angle with the zero vector is undefined")
    S = S / norms[:, None]
    gram = np.abs(S.conj() @ S.T)
    iu = np.triu_indices(len(S), 1)
    return np.arccos(np.clip(gram[iu], 0.0, 1.0))


@dataclass(frozen=True)
class AngleEnsemble:
    raw_angles: np.ndarray
    mean_angle: float
    unfolded: np.ndarray
    histogram: Histogram

    @classmethod
    def from_angles(cls, raw, bins: int = 50) -> "AngleEnsemble":
        raw = np.asarray(raw, dtype=float)
        mean = float(raw.mean())
        unfolded = raw / mean
        return cls(raw, mean, unfolded, histogram(unfolded, bins))


def angle_ensemble(matrices: Sequence[np.ndarray], psi0: np.ndarray, bins: int = 50) -> AngleEnsemble:
    """Propagate psi0 once by each matrix and collect unfolded pairwise angles."""
    if len(matrices) < 2:
        raise TooFewMatrices("need at least two matrices")
    dims = {M.shape for M in matrices}
    if len(dims) != 1 or next(iter(dims))[1] != psi0.shape[0]:
        raise DimensionMismatch("matrices and state must share one dimension")
    states = np.array([M @ psi0 for M in matrices])
    return AngleEnsemble.from_angles(pairwise_angles(states), bins)


def random_vector_baseline(N: int, count: int, field: str = "complex", seed=0,
                           bins: int = 50) -> AngleEnsemble:
    if count < 2:
        raise TooFewMatrices("need at least two vectors")
    rng = np.random.default_rng(seed)
    states = np.array([random_state(N, field, rng) for _ in range(count)])
    return AngleEnsemble.from_angles(pairwise_angles(states), bins)


# --- matrix error -------------------------------------------------------------

def normalized_matrix_error(U_prime: np.ndarray, U: np.ndarray) -> float:
    """mean |U'_ij - U_ij| in units of mean |U_ij|."""
    return float(np.abs(U_prime - U).mean() / np.abs(U).mean())


def matrix_error_sweep(spec: GroverSpec, epsilons: Sequence[float], samples_per_eps: int = 20,
                       seed=0) -> list[tuple[float, float]]:
    """Average normalized error of independently perturbed Grover operators."""
    if any(e <= 0 for e in epsilons):
        raise ValueError("all epsilons must be positive")
    U = build_grover(spec)
    seeds = np.random.SeedSequence(seed).spawn(len(epsilons))
    table = []
    for eps, ss in zip(epsilons, seeds):
        rngs = [np.random.default_rng(s) for s in ss.spawn(samples_per_eps)]
        pert = PerturbationSpec("independent", eps)
        errors = parallel_map(
            lambda r: normalized_matrix_error(perturbed_grover(spec, pert, r), U), rngs)
        table.append((float(eps), float(np.mean(errors))))
    return table


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
