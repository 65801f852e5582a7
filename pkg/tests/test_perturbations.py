import numpy as np
import pytest
from hypothesis import given, strategies as st

from qchaos.algorithms import GroverSpec, build_grover, build_qft_closed, grover_step, hadamard_all
from qchaos.errors import FamilyTooLarge, KindMismatch
from qchaos.linalg import unitarity_defect
from qchaos.perturbations import (PerturbationSpec, _grover_with_layers, digital_grover_family,
                                  perturbed_grover, perturbed_qft,
                                  qft_phase_factors, random_rotation_layer, rotation_layer,
                                  single_qubit_rotation)

SPEC = GroverSpec(5, 2)


class TestRotations:
    def test_zero(self):
        np.testing.assert_array_equal(single_qubit_rotation(0.0), np.eye(2))

    def test_quarter_turn(self):
        np.testing.assert_allclose(single_qubit_rotation(np.pi / 2), [[0, 1], [-1, 0]], atol=1e-16)

    @given(st.floats(-10, 10))
    def test_inverse(self, phi):
        R = single_qubit_rotation(phi) @ single_qubit_rotation(-phi)
        np.testing.assert_allclose(R, np.eye(2), atol=1e-15)

    def test_layer_tends_to_identity(self):
        V = random_rotation_layer(4, 1e-14, np.random.default_rng(0))
        assert np.abs(V - np.eye(16)).max() < 1e-13

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_layer_orthogonal(self, n):
        V = random_rotation_layer(n, 0.5, np.random.default_rng(n))
        assert np.abs(V @ V.T - np.eye(2**n)).max() <= 1e-12

    def test_layer_first_order_bound(self):
        eps, n = 1e-3, 5
        for seed in range(10):
            V = random_rotation_layer(n, eps, np.random.default_rng(seed))
            assert np.abs(V - np.eye(2**n)).max() <= n * eps / 2 + eps**2

    def test_layer_draw_order(self):
        rng = np.random.default_rng(3)
        angles = np.random.default_rng(3).uniform(-0.05, 0.05, size=3)
        np.testing.assert_array_equal(random_rotation_layer(3, 0.1, rng), rotation_layer(angles))


class TestPerturbedGrover:
    def test_vanishing_epsilon(self):
        U = perturbed_grover(SPEC, PerturbationSpec("independent", 1e-15))
        assert np.abs(U - build_grover(SPEC)).max() < 1e-12

    def test_deterministic(self):
        pert = PerturbationSpec("independent", 0.1, seed=9)
        assert np.array_equal(perturbed_grover(SPEC, pert), perturbed_grover(SPEC, pert))
        other = PerturbationSpec("independent", 0.1, seed=10)
        assert not np.array_equal(perturbed_grover(SPEC, pert), perturbed_grover(SPEC, other))

    def test_orthogonal(self):
        for seed in range(5):
            U = perturbed_grover(SPEC, PerturbationSpec("independent", 0.3, seed))
            assert unitarity_defect(U) <= 1e-10
            assert not np.iscomplexobj(U)

    def test_kind_mismatch(self):
        with pytest.raises(KindMismatch):
            perturbed_grover(SPEC, PerturbationSpec("digital", 0.1))

    def test_layers_in_written_order(self):
        rng = np.random.default_rng(4)
        layers = [random_rotation_layer(5, 0.1, rng) for _ in range(SPEC.p)]
        pert = PerturbationSpec("independent", 0.1, seed=4)
        expected = np.eye(32)
        DO = grover_step(5, 2)
        for V in layers:
            expected = expected @ DO @ V
        expected = expected @ hadamard_all(5)
        np.testing.assert_allclose(perturbed_grover(SPEC, pert), expected, atol=1e-13)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            PerturbationSpec("independent", 0.0)
        with pytest.raises(ValueError):
            PerturbationSpec("independent", 1.5)
        with pytest.raises(ValueError):
            PerturbationSpec("analog", 0.1)

    def test_distance_monotone_in_epsilon(self):
        U = build_grover(SPEC)
        means = []
        for eps in (1e-4, 1e-3, 1e-2, 1e-1):
            d = [np.abs(perturbed_grover(SPEC, PerturbationSpec("independent", eps, s)) - U).mean()
                 for s in range(20)]
            means.append(np.mean(d))
        assert all(a <= b for a, b in zip(means, means[1:]))


class TestDigitalFamily:
    def test_p1_has_two_members(self):
        spec = GroverSpec(3, 1, p=1)
        fam = digital_grover_family(spec, 0.2, seed=5)
        assert len(fam) == 2
        v_plus = random_rotation_layer(3, 0.2, np.random.default_rng(5))
        np.testing.assert_allclose(fam[0], _grover_with_layers(spec, [v_plus]), atol=1e-14)
        np.testing.assert_allclose(fam[1], _grover_with_layers(spec, [v_plus.T]), atol=1e-14)

    def test_size_and_orthogonality(self):
        fam = digital_grover_family(SPEC, 0.1, seed=1)
        assert len(fam) == 2**SPEC.p
        assert max(unitarity_defect(U) for U in fam) <= 1e-10

    def test_binary_order(self):
        spec = GroverSpec(3, 1, p=2)
        fam = digital_grover_family(spec, 0.3, seed=2)
        vp = random_rotation_layer(3, 0.3, np.random.default_rng(2))
        vm = vp.T
        # branch 1 = 0b01: V- in the rightmost slot only
        np.testing.assert_allclose(fam[1], _grover_with_layers(spec, [vp, vm]), atol=1e-14)
        np.testing.assert_allclose(fam[2], _grover_with_layers(spec, [vm, vp]), atol=1e-14)

    def test_all_plus_branch(self):
        fam = digital_grover_family(SPEC, 0.1, seed=8)
        vp = random_rotation_layer(5, 0.1, np.random.default_rng(8))
        np.testing.assert_allclose(fam[0], _grover_with_layers(SPEC, [vp] * SPEC.p), atol=1e-13)

    def test_too_large(self):
        with pytest.raises(FamilyTooLarge):
            digital_grover_family(GroverSpec(3, 0, p=13), 0.1)


class TestPerturbedQft:
    def test_vanishing_epsilon(self):
        U = perturbed_qft(5, 1e-15, np.random.default_rng(0))
        assert np.abs(U - build_qft_closed(5)).max() < 1e-12

    @pytest.mark.parametrize("seed", range(4))
    def test_unitary(self, seed):
        assert unitarity_defect(perturbed_qft(5, 0.5, np.random.default_rng(seed))) <= 1e-12

    def test_phase_factor_range(self):
        f = qft_phase_factors(6, 0.1, np.random.default_rng(1))
        assert len(f) == 15
        assert all(0.95 <= v <= 1.05 for v in f.values())

    def test_needs_two_qubits(self):
        with pytest.raises(ValueError):
            perturbed_qft(1, 0.1, np.random.default_rng(0))
