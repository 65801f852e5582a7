"""Exact unitaries of Grover search and the quantum Fourier transform."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import IndexOutOfRange
from .linalg import tensor_product

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)


def grover_iterations(n: int) -> int:
    """Optimal iteration count floor(pi / (4 theta)) with sin^2 theta = 1/N."""
    if n < 2:
        raise ValueError("Grover search needs at least 2 qubits")
    theta = math.asin(1 / math.sqrt(2**n))
    return math.floor(math.pi / (4 * theta))


@dataclass(frozen=True)
class GroverSpec:
    n: int
    xi: int
    p: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 0 <= self.xi < 2**self.n:
            raise IndexOutOfRange(f"marked index {self.xi} outside [0, {2**self.n})")
        if self.p is None:
            object.__setattr__(self, "p", grover_iterations(self.n))
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")

    @property
    def N(self) -> int:
        return 2**self.n

    @property
    def theta(self) -> float:
        return math.asin(1 / math.sqrt(self.N))


@dataclass(frozen=True)
class QftSpec:
    n: int
    cutoff: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        # cutoff 0 (no phase gates at all) is accepted as a degenerate case
        if self.cutoff is not None and not 0 <= self.cutoff <= max(self.n - 1, 0):
            raise ValueError(f"cutoff must lie in [0, {self.n - 1}], got {self.cutoff}")


def hadamard_all(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    return tensor_product(*([HADAMARD] * n))


def oracle(n: int, xi: int) -> np.ndarray:
    N = 2**n
    if not 0 <= xi < N:
        raise IndexOutOfRange(f"marked index {xi} outside [0, {N})")
    d = np.ones(N)
    d[xi] = -1.0
    return np.diag(d)


def diffusion(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    N = 2**n
    return np.full((N, N), 2.0 / N) - np.eye(N)


def grover_step(n: int, xi: int) -> np.ndarray:
    """The repeated factor D O."""
    return diffusion(n) @ oracle(n, xi)


def build_grover(spec: GroverSpec) -> np.ndarray:
    """U_G = (D O)^p H as an explicit real matrix."""
    DO = grover_step(spec.n, spec.xi)
    U = hadamard_all(spec.n)
    for _ in range(spec.p):
        U = DO @ U
    return U


def success_probability(spec: GroverSpec) -> float:
    """Closed-form sin^2((2p+1) theta) for finding the marked element."""
    return math.sin((2 * spec.p + 1) * spec.theta) ** 2


# --- quantum Fourier transform -------------------------------------------

def bit_reversal(n: int) -> np.ndarray:
    """Permutation matrix F mapping index b_0...b_{n-1} to b_{n-1}...b_0."""
    N = 2**n
    idx = np.arange(N)
    rev = np.zeros(N, dtype=int)
    for q in range(n):
        rev |= ((idx >> q) & 1) << (n - 1 - q)
    F = np.zeros((N, N))
    F[rev, idx] = 1.0
    return F


def qft_gate_sequence(n: int, cutoff: int | None = None) -> Iterator[tuple]:
    """Gates of the circuit in written (left-to-right) order, excluding F.

    Yields ``("H", j)`` and ``("S", j, k)`` with j < k. Gates with
    ``k - j > cutoff`` are skipped.
    """
    for j in range(n):
        yield ("H", j)
        for k in range(j + 1, n):
            if cutoff is None or k - j <= cutoff:
                yield ("S", j, k)


def _register_qubit(label: int, n: int) -> int:
    # circuit label j carries bit weight 2**j; register qubit 0 is the MSB
    return n - 1 - label


def _left_apply_single(gate: np.ndarray, M: np.ndarray, qubit: int, n: int) -> np.ndarray:
    shaped = M.reshape(2**qubit, 2, 2 ** (n - qubit - 1), M.shape[1])
    return np.einsum("ab,ibjc->iajc", gate, shaped).reshape(M.shape)


def controlled_phase_diagonal(n: int, j: int, k: int, phase: float) -> np.ndarray:
    """Diagonal of S_{j,k}: exp(i phase) where both labelled qubits are 1."""
    idx = np.arange(2**n)
    both = ((idx >> j) & 1) & ((idx >> k) & 1)
    return np.where(both == 1, np.exp(1j * phase), 1.0 + 0j)


def qft_phase(j: int, k: int) -> float:
    return math.pi / 2 ** (k - j)


def build_qft_circuit(
    n: int,
    cutoff: int | None = None,
    phase_factors: dict[tuple[int, int], float] | None = None,
) -> np.ndarray:
    """Product F H_0 S_01 ... S_0,n-1 H_1 ... H_{n-1} of embedded gates.

    ``phase_factors[(j, k)]`` multiplies the phase of S_{j,k}
    (used for perturbed circuits); missing entries mean 1.
    """
    N = 2**n
    U = np.eye(N, dtype=complex)
    gates = list(qft_gate_sequence(n, cutoff))
    # rightmost factor acts first
    for gate in reversed(gates):
        if gate[0] == "H":
            U = _left_apply_single(HADAMARD, U, _register_qubit(gate[1], n), n)
        else:
            _, j, k = gate
            phase = qft_phase(j, k)
            if phase_factors is not None:
                phase *= phase_factors.get((j, k), 1.0)
            U = controlled_phase_diagonal(n, j, k, phase)[:, None] * U
    return bit_reversal(n) @ U


def build_qft_closed(n: int) -> np.ndarray:
    """U_lk = exp(2 pi i l k / N) / sqrt(N)."""
    N = 2**n
    lk = np.outer(np.arange(N), np.arange(N)) % N
    return np.exp(2j * np.pi * lk / N) / math.sqrt(N)


def build_approximate_qft(spec: QftSpec) -> np.ndarray:
    """Circuit QFT with conditional phases between distant qubits dropped."""
    return build_qft_circuit(spec.n, cutoff=spec.cutoff)
