import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from qchaos import dynamics as dy
from qchaos import experiments as ex
from qchaos.algorithms import GroverSpec, build_grover
from qchaos.errors import DimensionMismatch, TooFewMatrices, ZeroVector
from qchaos.linalg import random_state


class TestOverlap:
    def test_identical_operators(self):
        U = build_grover(GroverSpec(4, 1))
        s = dy.overlap_series(U, U, random_state(16, "real", 0), 50)
        np.testing.assert_allclose(s.fidelities, 1.0, atol=1e-12)
        assert list(s.iterations[:3]) == [1, 2, 3]

    def test_matches_matrix_powers(self):
        U = unitary_group.rvs(8, random_state=1)
        V = unitary_group.rvs(8, random_state=2)
        psi = random_state(8, seed=3)
        s = dy.overlap_series(U, V, psi, 6)
        for k in range(1, 7):
            a = np.linalg.matrix_power(U, k) @ psi
            b = np.linalg.matrix_power(V, k) @ psi
            assert s.fidelities[k - 1] == pytest.approx(abs(np.vdot(a, b)) ** 2, abs=1e-12)

    @given(st.integers(0, 2**31), st.floats(0, 2 * np.pi))
    @settings(max_examples=25, deadline=None)
    def test_bounded_and_phase_invariant(self, seed, phase):
        U = unitary_group.rvs(6, random_state=seed)
        V = unitary_group.rvs(6, random_state=seed + 1)
        psi = random_state(6, seed=seed)
        a = dy.overlap_series(U, V, psi, 20).fidelities
        b = dy.overlap_series(U, V, np.exp(1j * phase) * psi, 20).fidelities
        assert np.all((a >= 0) & (a <= 1 + 1e-12))
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            dy.overlap_series(np.eye(4), np.eye(4), np.ones(3), 5)

    def test_even_odd_split(self):
        s = dy.OverlapSeries(np.arange(1, 7), np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6]))
        np.testing.assert_array_equal(s.even(), [0.2, 0.4, 0.6])
        np.testing.assert_array_equal(s.odd(), [0.1, 0.3, 0.5])


class TestFourier:
    def test_constant(self):
        _, mag = dy.fourier_magnitude(np.full(64, 0.7))
        assert np.abs(mag).max() < 1e-12

    def test_cosine(self):
        k = np.arange(128)
        freq, mag = dy.fourier_magnitude(np.cos(2 * np.pi * 0.125 * k))
        assert freq[np.argmax(mag)] == pytest.approx(0.125)
        assert dy.peak_mass_ratio(mag, top=1) == pytest.approx(1.0)

    def test_short_series(self):
        with pytest.raises(ValueError):
            dy.fourier_magnitude(np.ones(7))

    def test_grover_series_is_peaked(self):
        s = ex.overlap_trial("grover", 5, 2, 0.1, 500, seed=0)
        _, mag = dy.fourier_magnitude(s)
        assert dy.peak_mass_ratio(mag) > 0.5


class TestAngles:
    def test_identical(self):
        v = random_state(5, seed=0)
        assert dy.angle(v, 3j * v) == pytest.approx(0, abs=1e-7)

    def test_orthogonal(self):
        assert dy.angle(np.array([1, 0]), np.array([0, 2])) == pytest.approx(np.pi / 2)

    @pytest.mark.parametrize("beta", [0.0, 0.3, 1.0, np.pi / 2])
    def test_planar(self, beta):
        a = np.array([1.0, 0.0])
        b = np.array([np.cos(beta), np.sin(beta)])
        assert abs(dy.angle(a, b) - beta) <= 1e-12

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            dy.angle(np.zeros(2), np.ones(2))

    def test_pairwise_matches_scalar(self):
        S = np.array([random_state(6, seed=s) for s in range(4)])
        pw = dy.pairwise_angles(S)
        expected = [dy.angle(S[i], S[k]) for i in range(4) for k in range(i + 1, 4)]
        np.testing.assert_allclose(pw, expected, atol=1e-12)

    def test_two_matrices(self):
        U = unitary_group.rvs(8, random_state=0)
        ens = dy.angle_ensemble([np.eye(8), U], random_state(8, seed=1))
        assert ens.raw_angles.size == 1
        assert ens.unfolded[0] == 1.0

    def test_too_few(self):
        with pytest.raises(TooFewMatrices):
            dy.angle_ensemble([np.eye(2)], np.ones(2))

    def test_unfolded_mean(self):
        ens = dy.random_vector_baseline(64, 20, "complex", seed=3)
        assert abs(ens.unfolded.mean() - 1) <= 1e-9
        assert abs(ens.histogram.integral() - 1) <= 1e-9

    def test_baseline_concentration(self):
        ens = dy.random_vector_baseline(1024, 30, "complex", seed=1)
        assert ens.mean_angle > 1.4

    def test_baseline_two_vectors(self):
        assert dy.random_vector_baseline(16, 2, seed=0).unfolded.tolist() == [1.0]

    def test_digital_has_peaks(self):
        from qchaos.chaometrics import count_peaks
        ens = ex.digital_angle_trial(5, 2, 0.1, seed=0)
        assert ens.raw_angles.size == 16 * 15 // 2
        assert count_peaks(ens.histogram) >= 3


class TestErrorSweep:
    def test_small_epsilon(self):
        (eps, err), = dy.matrix_error_sweep(GroverSpec(4, 1), [1e-9], 3, seed=0)
        assert err < 1e-7

    def test_doubling(self):
        table = dy.matrix_error_sweep(GroverSpec(5, 2), [1e-4, 2e-4], 20, seed=0)
        ratio = table[1][1] / table[0][1]
        assert 1.7 < ratio < 2.3

    def test_reproducible(self):
        a = dy.matrix_error_sweep(GroverSpec(4, 1), [0.01, 0.1], 4, seed=5)
        assert a == dy.matrix_error_sweep(GroverSpec(4, 1), [0.01, 0.1], 4, seed=5)

    def test_threads_do_not_change_result(self, monkeypatch):
        serial = dy.matrix_error_sweep(GroverSpec(4, 1), [0.01, 0.1], 6, seed=2)
        monkeypatch.setenv("QCHAOS_THREADS", "4")
        assert dy.worker_count() == 4
        assert dy.matrix_error_sweep(GroverSpec(4, 1), [0.01, 0.1], 6, seed=2) == serial

    def test_slope(self):
        assert dy.loglog_slope([1, 10, 100], [2, 20, 200]) == pytest.approx(1.0)
