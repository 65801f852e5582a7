"""Coherent perturbations of Grover search and the QFT.

Randomness comes from ``numpy.random.Generator`` (PCG64). Draw order is fixed:
a rotation layer consumes n uniforms (qubit 0 first), Grover layers are drawn
for iteration slots 1..p in order, and QFT phase noise consumes one uniform
per conditional-phase gate in circuit order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .algorithms import GroverSpec, build_qft_circuit, grover_step, hadamard_all, qft_gate_sequence
from .errors import FamilyTooLarge, KindMismatch
from .linalg import tensor_product

GENERATOR_FAMILY = "numpy.random.Generator(PCG64)"
KINDS = ("independent", "digital", "qft-phase")
MAX_DIGITAL_P = 12


@dataclass(frozen=True)
class PerturbationSpec:
    kind: str
    epsilon: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def single_qubit_rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, s], [-s, c]])


def rotation_layer(angles) -> np.ndarray:
    """O(2, a_0) ⊗ ... ⊗ O(2, a_{n-1})."""
    return tensor_product(*(single_qubit_rotation(a) for a in angles))


def draw_angles(n: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-epsilon / 2, epsilon / 2, size=n)


def random_rotation_layer(n: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    return rotation_layer(draw_angles(n, epsilon, rng))


def _grover_with_layers(spec: GroverSpec, layers) -> np.ndarray:
    # (DO)V_1 (DO)V_2 ... (DO)V_p H : V_p is applied first
    DO = grover_step(spec.n, spec.xi)
    U = hadamard_all(spec.n)
    for V in reversed(layers):
        U = DO @ (V @ U)
    return U


def perturbed_grover(spec: GroverSpec, pert: PerturbationSpec, rng=None) -> np.ndarray:
    """Grover operator with an independent random rotation layer per DO factor.

    ``rng`` overrides the generator derived from ``pert.seed``.
    """
    if pert.kind != "independent":
        raise KindMismatch(f"perturbed_grover needs kind 'independent', got {pert.kind!r}")
    rng = pert.rng() if rng is None else rng
    layers = [random_rotation_layer(spec.n, pert.epsilon, rng) for _ in range(spec.p)]
    return _grover_with_layers(spec, layers)


def digital_grover_family(spec: GroverSpec, epsilon: float, seed=0) -> list[np.ndarray]:
    """All 2**p operators built from one fixed V+ and its inverse V-.

    Branches are enumerated in binary order: branch b uses V- in slot i
    (counted from the left, starting at 0) when bit p-1-i of b is set, so
    branch 0 is all-V+ and branch 2**p - 1 is all-V-.
    """
    if spec.p > MAX_DIGITAL_P:
        raise FamilyTooLarge(f"2**{spec.p} operators exceed the limit 2**{MAX_DIGITAL_P}")
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    rng = np.random.default_rng(seed)
    v_plus = random_rotation_layer(spec.n, epsilon, rng)
    v_minus = v_plus.T
    return [
        _grover_with_layers(spec, [v_minus if s else v_plus for s in signs])
        for signs in itertools.product((0, 1), repeat=spec.p)
    ]


def qft_phase_factors(n: int, epsilon: float, rng: np.random.Generator) -> dict[tuple[int, int], float]:
    """Multiplicative factors 1 + delta, delta uniform in [-eps/2, eps/2]."""
    pairs = [g[1:] for g in qft_gate_sequence(n) if g[0] == "S"]
    deltas = rng.uniform(-epsilon / 2, epsilon / 2, size=len(pairs))
    return {pair: 1.0 + d for pair, d in zip(pairs, deltas)}


def perturbed_qft(n: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    if n < 2:
        raise ValueError("the QFT has no conditional phase gates below 2 qubits")
    return build_qft_circuit(n, phase_factors=qft_phase_factors(n, epsilon, rng))

