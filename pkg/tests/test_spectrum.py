import math

import numpy as np
import pytest

from memwave import (
    generate_initial_data,
    interval_basis,
    sobolev_norm_sq,
    tail_majorant,
)
from memwave.errors import SmoothnessViolation
from memwave.spectrum import InitialData, ModeBasis


class TestIntervalBasis:
    def test_three_modes(self):
        b = interval_basis(3)
        assert b.alphas == (1.0, 2.0, 3.0)
        assert all(p == pytest.approx(0.7978845608, rel=1e-9) for p in b.psi_sup)
        assert b.dimension == 1
        assert b.kind == "interval"

    def test_single_mode(self):
        b = interval_basis(1)
        assert b.alphas == (1.0,)

    def test_eigenvalue_relation(self):
        # second mode: alpha^2 must be the Laplacian eigenvalue 4
        b = interval_basis(4)
        assert b.alphas[1] ** 2 == 4.0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            interval_basis(0)


class TestModeBasisValidation:
    def test_decreasing_alphas_rejected(self):
        with pytest.raises(ValueError, match="increasing"):
            ModeBasis(alphas=(2.0, 1.0), psi_sup=(1.0, 1.0), dimension=1, kind="user")

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            ModeBasis(alphas=(1.0, 2.0), psi_sup=(1.0,), dimension=1, kind="user")


class TestSobolevNorm:
    def test_single_mode(self):
        b = interval_basis(3)
        assert sobolev_norm_sq(b, [1.0, 0.0, 0.0], 1.0) == 1.0

    def test_basel_partial_sum(self):
        # coeffs n^-2 at beta=1 give sum n^-2; partial sum to 100 terms
        b = interval_basis(100)
        coeffs = [n**-2.0 for n in range(1, 101)]
        expected = sum(1.0 / (n * n) for n in range(1, 101))
        got = sobolev_norm_sq(b, coeffs, 1.0)
        assert got == pytest.approx(expected, rel=1e-14)
        assert got == pytest.approx(1.6349839, rel=1e-7)

    def test_beta_zero_is_plain_l2(self):
        b = interval_basis(4)
        coeffs = [0.5, -1.5, 2.0, 0.25]
        assert sobolev_norm_sq(b, coeffs, 0.0) == pytest.approx(
            sum(v * v for v in coeffs), rel=1e-15
        )

    def test_too_many_coeffs_rejected(self):
        with pytest.raises(ValueError):
            sobolev_norm_sq(interval_basis(2), [1.0, 1.0, 1.0], 0.0)


class TestGenerateInitialData:
    def test_deterministic(self):
        b = interval_basis(16)
        a = generate_initial_data(b, 1.0, 1.0, 42)
        c = generate_initial_data(b, 1.0, 1.0, 42)
        assert a.phi0 == c.phi0 and a.phi1 == c.phi1

    def test_seed_changes_data(self):
        b = interval_basis(16)
        a = generate_initial_data(b, 1.0, 1.0, 42)
        c = generate_initial_data(b, 1.0, 1.0, 43)
        assert a.phi0 != c.phi0

    def test_smoothness_guard(self):
        with pytest.raises(SmoothnessViolation):
            generate_initial_data(interval_basis(4), 0.4, 1.0, 1)

    def test_amplitude_guard(self):
        with pytest.raises(ValueError):
            generate_initial_data(interval_basis(4), 1.0, 0.0, 1)

    def test_norm_majorant(self):
        # phi0_n = amp sigma_n n^(-(beta+1)-1) gives weighted norm <= amp^2 pi^2/6
        b = interval_basis(64)
        amp = 3.0
        data = generate_initial_data(b, 1.0, amp, 5)
        assert sobolev_norm_sq(b, data.phi0, 2.0) <= amp * amp * math.pi**2 / 6.0
        assert sobolev_norm_sq(b, data.phi1, 1.0) <= amp * amp * math.pi**2 / 6.0

    def test_decay_profile(self):
        b = interval_basis(32)
        data = generate_initial_data(b, 1.0, 1.0, 9)
        assert all(abs(v) <= n ** -3.0 for n, v in enumerate(data.phi0, start=1))
        assert all(abs(v) <= n ** -2.0 for n, v in enumerate(data.phi1, start=1))


class TestTailMajorant:
    def test_closed_form(self):
        assert tail_majorant(100, 1.0) == pytest.approx(100.0**-1.0 / 1.0, rel=1e-15)
        assert tail_majorant(8, 1.5) == pytest.approx(8.0**-2.0 / 2.0, rel=1e-15)

    def test_dominates_actual_tail(self):
        beta = 1.0
        n_max = 50
        actual = sum(n ** (-2.0 * beta) for n in range(n_max + 1, 200000))
        assert actual <= tail_majorant(n_max, beta)

    def test_requires_convergence(self):
        with pytest.raises(ValueError):
            tail_majorant(10, 0.5)


class TestInitialData:
    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            InitialData(phi0=(1.0,), phi1=(1.0, 2.0))

    def test_psi_sup_majorant(self):
        # pointwise field bound: sup |sum a_n psi_n| <= sum |a_n| psi_sup_n
        b = interval_basis(5)
        coeffs = np.array([0.3, -0.2, 0.15, 0.05, -0.4])
        xs = np.linspace(0.0, math.pi, 2001)
        psi = math.sqrt(2.0 / math.pi) * np.sin(np.outer(xs, np.arange(1, 6)))
        field = psi @ coeffs
        majorant = float(np.sum(np.abs(coeffs) * np.asarray(b.psi_sup)))
        assert np.max(np.abs(field)) <= majorant + 1e-12
