"""Dense complex linear algebra used by every other module.

Matrices and states are plain numpy arrays. Qubit 0 is the leftmost factor of
a tensor product, i.e. the most significant bit of a basis index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.linalg
from scipy.stats import ortho_group, unitary_group

from .errors import DimensionMismatch, NonUnitaryInput

UNITARY_TOL = 1e-10


def tensor_product(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product ``A ⊗ B ⊗ ...`` with the first factor most significant."""
    if not factors:
        raise ValueError("need at least one factor")
    return reduce(np.kron, factors)


def embed_single(gate: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Lift a 2x2 gate acting on ``qubit`` to the full 2**n space."""
    if not 0 <= qubit < n:
        raise DimensionMismatch(f"qubit {qubit} outside register of {n}")
    left = np.eye(2**qubit)
    right = np.eye(2 ** (n - qubit - 1))
    return np.kron(np.kron(left, gate), right)


def _check_square(U: np.ndarray) -> int:
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise DimensionMismatch(f"not a square matrix: shape {U.shape}")
    return U.shape[0]


def unitarity_defect(U: np.ndarray) -> float:
    """max_ij |(U^dagger U - I)_ij|"""
    U = np.asarray(U)
    _check_square(U)
    return float(np.abs(U.conj().T @ U - np.eye(U.shape[0])).max())


def apply(U: np.ndarray, psi: np.ndarray) -> np.ndarray:
    U = np.asarray(U)
    psi = np.asarray(psi)
    if U.shape[1] != psi.shape[0]:
        raise DimensionMismatch(f"matrix {U.shape} cannot act on state of dim {psi.shape[0]}")
    return U @ psi


def inner(psi: np.ndarray, phi: np.ndarray) -> complex:
    """<psi|phi>, conjugate-linear in the first slot."""
    psi = np.asarray(psi)
    phi = np.asarray(phi)
    if psi.shape != phi.shape:
        raise DimensionMismatch(f"states of shape {psi.shape} and {phi.shape}")
    return complex(np.vdot(psi, phi))


def normalize(psi: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / norm


def random_state(N: int, field: str = "complex", seed=None) -> np.ndarray:
    """Normalized state with i.i.d. standard normal components.

    ``seed`` may be an int, a SeedSequence or an existing Generator. A complex
    state consumes 2N normal draws (real parts first), a real one N.
    """
    rng = np.random.default_rng(seed)
    if field == "real":
        v = rng.standard_normal(N)
    elif field == "complex":
        v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    else:
        raise ValueError(f"field must be 'real' or 'complex', got {field!r}")
    return normalize(v)


def sym_antisym_split(U: np.ndarray) -> tuple[float, float]:
    """Mean absolute entry of the symmetric and antisymmetric parts of ``U``."""
    U = np.asarray(U)
    _check_square(U)
    sym = 0.5 * (U + U.T)
    anti = 0.5 * (U - U.T)
    return float(np.abs(sym).mean()), float(np.abs(anti).mean())


def default_degeneracy_tolerance(N: int) -> float:
    return 1e-8 * 2 * np.pi / N


@dataclass(frozen=True)
class EigenSystem:
    """Eigenphases (ascending in (-pi, pi]) and eigenvectors of a unitary.

    Eigenvalues are ``exp(-1j * phases)``; column k of ``vectors`` belongs to
    ``phases[k]``. ``clusters`` holds (start, stop) index ranges of groups of
    phases closer than ``degeneracy_tolerance``.
    """

    phases: np.ndarray
    vectors: np.ndarray
    clusters: list[tuple[int, int]] = field(default_factory=list)
    degeneracy_tolerance: float = 0.0

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.exp(-1j * self.phases)

    @property
    def dim(self) -> int:
        return len(self.phases)

    def reconstruct(self) -> np.ndarray:
        V = self.vectors
        return (V * self.eigenvalues) @ V.conj().T


def _cluster_ranges(phases: np.ndarray, tol: float) -> list[tuple[int, int]]:
    ranges = []
    start = 0
    for k in range(1, len(phases) + 1):
        if k == len(phases) or phases[k] - phases[k - 1] >= tol:
            ranges.append((start, k))
            start = k
    return ranges


def _canonical_basis(Z: np.ndarray, make_real: bool) -> np.ndarray:
    """Orthonormal basis of span(Z) that depends only on the subspace.

    Column-pivoted QR of the projector picks the basis closest to the
    computational basis, so it carries no solver-dependent orientation.
    """
    m = Z.shape[1]
    if m == 1:
        v = Z[:, 0]
        k = int(np.argmax(np.abs(v)))
        v = v * (abs(v[k]) / v[k])
        if make_real:
            v = v.real
        return (v / np.linalg.norm(v))[:, None]
    P = Z @ Z.conj().T
    if make_real:
        P = P.real
    Q, _, _ = scipy.linalg.qr(P, pivoting=True)
    return Q[:, :m]


def eig_unitary(
    U: np.ndarray,
    degeneracy_tolerance: float | None = None,
    seed=0,
    randomize: bool = True,
) -> EigenSystem:
    """Eigendecomposition of a unitary with reproducible degenerate bases.

    A complex Schur form gives orthonormal eigenvectors for any normal input.
    Inside each cluster of (near-)degenerate phases the basis is replaced by a
    canonical one and then, if ``randomize``, rotated by a Haar-random
    orthogonal (real input) or unitary (complex input) matrix drawn from
    ``np.random.default_rng(seed)``, one draw per cluster of size > 1 in
    ascending phase order. For real input, clusters at eigenvalue +1 or -1
    get real eigenvectors, and so does every cluster of a symmetric input.
    """
    U = np.asarray(U)
    N = _check_square(U)
    defect = unitarity_defect(U)
    if defect > UNITARY_TOL:
        raise NonUnitaryInput(f"unitarity defect {defect:.3e} exceeds {UNITARY_TOL:g}")
    tol = default_degeneracy_tolerance(N) if degeneracy_tolerance is None else degeneracy_tolerance
    real_input = not np.iscomplexobj(U) or not np.any(U.imag)
    # eigenspaces of a symmetric unitary are closed under conjugation
    symmetric = bool(np.abs(U - U.T).max() <= UNITARY_TOL)

    T, Z = scipy.linalg.schur(np.asarray(U, dtype=complex), output="complex")
    phases = -np.angle(np.diag(T))
    near_minus_pi = phases <= -np.pi + tol
    phases[near_minus_pi] = np.minimum(phases[near_minus_pi] + 2 * np.pi, np.pi)
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    Z = Z[:, order]

    clusters = _cluster_ranges(phases, tol)
    rng = np.random.default_rng(seed)
    vectors = np.empty((N, N), dtype=complex)
    for start, stop in clusters:
        mean_phase = phases[start:stop].mean()
        real_eigenvalue = min(abs(mean_phase), np.pi - abs(mean_phase)) < tol
        make_real = symmetric or (real_input and real_eigenvalue)
        basis = _canonical_basis(Z[:, start:stop], make_real)
        m = stop - start
        if randomize and m > 1:
            group = ortho_group if make_real else unitary_group
            basis = basis @ group.rvs(m, random_state=rng)
        vectors[:, start:stop] = basis
    return EigenSystem(phases, vectors, clusters, tol)
