"""Seeded single-realization runs behind each figure-style diagnostic.

Each trial builds one generator from its seed and draws, in order, the
initial state and then the perturbation(s).
"""
from __future__ import annotations

import numpy as np

from . import chaometrics as cm
from .algorithms import GroverSpec, build_grover, build_qft_closed
from .dynamics import (AngleEnsemble, OverlapSeries, angle_ensemble, member_rngs,
                       overlap_series, parallel_map, random_vector_baseline)
from .linalg import eig_unitary, random_state, sym_antisym_split
from .perturbations import PerturbationSpec, digital_grover_family, perturbed_grover, perturbed_qft

# Grover operators are real, the QFT is complex
STATE_FIELD = {"grover": "real", "qft": "complex"}


def base_operator(algorithm: str, n: int, xi: int | None = None) -> np.ndarray:
    if algorithm == "grover":
        return build_grover(GroverSpec(n, xi))
    if algorithm == "qft":
        return build_qft_closed(n)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def perturbed_operator(algorithm: str, n: int, xi: int | None, epsilon: float,
                       rng: np.random.Generator) -> np.ndarray:
    if algorithm == "grover":
        return perturbed_grover(GroverSpec(n, xi), PerturbationSpec("independent", epsilon), rng)
    return perturbed_qft(n, epsilon, rng)


def overlap_trial(algorithm: str, n: int, xi: int | None, epsilon: float, k_max: int,
                  seed) -> OverlapSeries:
    rng = np.random.default_rng(seed)
    U = base_operator(algorithm, n, xi)
    psi0 = random_state(2**n, STATE_FIELD[algorithm], rng)
    U_prime = perturbed_operator(algorithm, n, xi, epsilon, rng)
    return overlap_series(U, U_prime, psi0, k_max)


def independent_angle_trial(algorithm: str, n: int, xi: int | None, epsilon: float,
                            ensemble: int, seed, bins: int = 50) -> AngleEnsemble:
    rng = np.random.default_rng(seed)
    psi0 = random_state(2**n, STATE_FIELD[algorithm], rng)
    rngs = member_rngs(rng.integers(2**63), ensemble)
    matrices = parallel_map(lambda r: perturbed_operator(algorithm, n, xi, epsilon, r), rngs)
    return angle_ensemble(matrices, psi0, bins)


def digital_angle_trial(n: int, xi: int, epsilon: float, seed, bins: int = 50) -> AngleEnsemble:
    rng = np.random.default_rng(seed)
    psi0 = random_state(2**n, "real", rng)
    family = digital_grover_family(GroverSpec(n, xi), epsilon, rng)
    return angle_ensemble(family, psi0, bins)


def baseline_trial(algorithm: str, n: int, count: int, seed, bins: int = 50) -> AngleEnsemble:
    return random_vector_baseline(2**n, count, STATE_FIELD[algorithm], seed, bins)


def sym_split_table(n_values, xi: int = 2) -> list[tuple[int, int, float, float]]:
    rows = []
    for n in n_values:
        U = build_grover(GroverSpec(n, xi % 2**n))
        rows.append((n, 2**n, *sym_antisym_split(U)))
    return rows


def exceptional_eigenvalue_count(U: np.ndarray, tol: float = 1e-6) -> int:
    """Eigenvalues farther than ``tol`` from both +1 and -1."""
    lam = eig_unitary(U, randomize=False).eigenvalues
    return int(np.sum((np.abs(lam - 1) > tol) & (np.abs(lam + 1) > tol)))


def porter_thomas_ks(U: np.ndarray, seed=0, randomize: bool = True) -> float:
    es = eig_unitary(U, seed=seed, randomize=randomize)
    return cm.ks_distance(cm.eigenvector_component_sample(es), cm.porter_thomas_cdf)


def majority(flags, needed: int = 6) -> bool:
    return sum(bool(f) for f in flags) >= needed
