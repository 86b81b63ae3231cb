import math

import numpy as np
import pytest

from slepian.discrete import (DiscreteParams, commutation_defect,
                              commuting_tridiagonal, concentration, dpswf,
                              dpswf_matrix, extend_dpss, prolate_matrix,
                              spectrum, symmetry_defect)
from slepian.numkit import IllConditionedError


class TestParams:
    @pytest.mark.parametrize("N,W", [(0, 0.2), (-1, 0.2), (2.5, 0.2),
                                     (3, 0.0), (3, 0.5), (3, 0.7), (3, -0.1)])
    def test_invalid(self, N, W):
        with pytest.raises(ValueError):
            DiscreteParams(N, W)

    def test_bandwidth(self):
        assert DiscreteParams(60, 0.3).bandwidth == pytest.approx(
            math.pi * 18, rel=1e-15)


class TestProlateMatrix:
    def test_order_one_is_diagonal_value(self):
        A = prolate_matrix(DiscreteParams(1, 0.37))
        assert A.shape == (1, 1) and abs(A[0, 0] - 0.74) <= 1e-16

    def test_two_by_two_quarter_band(self):
        A = prolate_matrix(DiscreteParams(2, 0.25))
        expected = np.array([[0.5, 1 / math.pi], [1 / math.pi, 0.5]])
        assert A == pytest.approx(expected, abs=1e-16)

    def test_zero_entry_at_offset_two(self):
        A = prolate_matrix(DiscreteParams(3, 0.25))
        assert abs(A[0, 2]) <= 1e-16   # sin(pi)/(2 pi)

    def test_exact_symmetry(self):
        A = prolate_matrix(DiscreteParams(41, 0.123))
        assert (A == A.T).all()


class TestCommutingTridiagonal:
    def test_order_one(self):
        T = commuting_tridiagonal(DiscreteParams(1, 0.3))
        assert T.diagonal == pytest.approx([0.0], abs=0)

    def test_two_by_two_quarter_band(self):
        T = commuting_tridiagonal(DiscreteParams(2, 0.25))
        assert np.max(np.abs(T.diagonal)) <= 1e-16   # cos(pi/2) ~ 6e-17
        assert T.offdiag == pytest.approx([0.5], abs=0)

    def test_three_by_three(self):
        T = commuting_tridiagonal(DiscreteParams(3, 0.1))
        c = math.cos(0.2 * math.pi)
        assert T.diagonal == pytest.approx([c, 0.0, c], abs=1e-15)
        assert T.offdiag == pytest.approx([1.0, 1.0], abs=0)


class TestSpectrum:
    def test_scalar_case(self):
        disc = spectrum(DiscreteParams(1, 0.2))
        assert disc.values == pytest.approx([0.4], abs=1e-16)
        assert disc.dpss.tolist() == [[1.0]]

    @pytest.mark.parametrize("method", ["toeplitz", "tridiag"])
    def test_two_by_two_closed_form(self, method):
        disc = spectrum(DiscreteParams(2, 0.25), method=method)
        expected = [0.5 + 1 / math.pi, 0.5 - 1 / math.pi]
        assert disc.values == pytest.approx(expected, abs=1e-14)
        root = 1 / math.sqrt(2)
        assert np.abs(disc.dpss) == pytest.approx(
            np.full((2, 2), root), abs=1e-14)

    def test_trace_identity(self, get_spectrum):
        disc = get_spectrum(60, 0.3)
        assert abs(disc.values.sum() - 36.0) <= 1e-9
        assert abs(disc.values.sum() - 36.0) / 36.0 <= 1e-11

    @pytest.mark.parametrize("N,W", [(30, 0.1), (60, 0.3), (60, 0.4), (25, 0.25)])
    @pytest.mark.parametrize("method", ["toeplitz", "tridiag"])
    def test_invariants(self, get_spectrum, N, W, method):
        disc = get_spectrum(N, W, method)
        assert np.max(np.abs(np.linalg.norm(disc.dpss, axis=0) - 1)) <= 1e-13
        flipped = np.abs(disc.dpss[::-1, :])
        assert np.max(np.abs(np.abs(disc.dpss) - flipped)) <= 1e-10
        trusted = disc.values[disc.values >= 1e-13]
        assert (trusted > 0).all() and trusted[0] <= 1.0 + 1e-13
        lead = np.argmax(np.abs(disc.dpss), axis=0)
        assert (disc.dpss[lead, np.arange(N)] > 0).all()

    @pytest.mark.parametrize("N,W", [(30, 0.1), (60, 0.3), (120, 0.2)])
    def test_cross_route_values(self, get_spectrum, N, W):
        a = get_spectrum(N, W, "toeplitz")
        b = get_spectrum(N, W, "tridiag")
        mask = a.values >= 1e-12
        assert np.max(np.abs(a.values[mask] - b.values[mask])) <= 1e-10

    @pytest.mark.parametrize("N,W", [(30, 0.1), (60, 0.3)])
    def test_cross_route_vectors(self, get_spectrum, N, W):
        a = get_spectrum(N, W, "toeplitz")
        b = get_spectrum(N, W, "tridiag")
        gaps = np.empty(N)
        lam = a.values
        for k in range(N):
            left = lam[k - 1] - lam[k] if k else np.inf
            right = lam[k] - lam[k + 1] if k + 1 < N else np.inf
            gaps[k] = min(left, right)
        for k in np.flatnonzero(gaps >= 1e-6):
            overlap = abs(np.dot(a.dpss[:, k], b.dpss[:, k]))
            assert overlap >= 1 - 1e-8

    def test_bad_method(self):
        with pytest.raises(ValueError):
            spectrum(DiscreteParams(4, 0.1), method="fft")


def _random_cases(seed=90125, count=8):
    rng = np.random.default_rng(seed)
    return [(int(rng.integers(2, 150)), float(rng.uniform(0.01, 0.49)))
            for _ in range(count)]


class TestRandomisedSweep:
    """Spectrum invariants over randomly drawn (N, W), seeded."""

    CASES = _random_cases()

    @pytest.mark.parametrize("N,W", CASES)
    def test_invariants_hold(self, N, W):
        disc = spectrum(DiscreteParams(N, W))
        assert abs(disc.values.sum() - 2 * N * W) / (2 * N * W) <= 1e-11
        assert np.max(np.abs(np.abs(disc.dpss)
                             - np.abs(disc.dpss[::-1, :]))) <= 1e-10
        trusted = disc.values[disc.values >= 1e-13]
        assert (trusted > 0).all() and trusted[0] <= 1 + 1e-13
        other = spectrum(DiscreteParams(N, W), method="toeplitz")
        mask = disc.values >= 1e-12
        assert np.max(np.abs(disc.values[mask]
                             - other.values[mask])) <= 1e-10

    def test_moderate_scale(self):
        disc = spectrum(DiscreteParams(512, 0.25))
        assert abs(disc.values.sum() - 256.0) / 256.0 <= 1e-11
        assert symmetry_defect(512, 0.25) <= 1e-10

    @pytest.mark.parametrize("W", [1e-6, 0.499999])
    def test_extreme_bandwidths(self, W):
        disc = spectrum(DiscreteParams(8, W))
        assert abs(disc.values.sum() - 16 * W) / (16 * W) <= 1e-11
        assert np.max(np.abs(np.abs(disc.dpss)
                             - np.abs(disc.dpss[::-1, :]))) <= 1e-10


class TestDpswf:
    def test_single_mode_is_constant_one(self):
        disc = spectrum(DiscreteParams(1, 0.3))
        for x in (-0.4, 0.0, 0.27, 1.3):
            assert dpswf(disc, 0, x) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("N,W", [(60, 0.3), (7, 0.2), (8, 0.2)])
    def test_periodicity(self, get_spectrum, N, W):
        disc = get_spectrum(N, W)
        rng = np.random.default_rng(42)
        xs = rng.uniform(-0.5, 0.5, size=100)
        sign = (-1.0) ** (N - 1)
        for k in (0, 1, N // 2, N - 1):
            u0 = dpswf_matrix(disc, xs, np.array([k]))[:, 0]
            u1 = dpswf_matrix(disc, xs + 1.0, np.array([k]))[:, 0]
            assert np.max(np.abs(u1 - sign * u0)) <= 1e-12

    def test_two_by_two_at_zero(self):
        disc = spectrum(DiscreteParams(2, 0.25))
        assert abs(dpswf(disc, 0, 0.0)) ** 2 == pytest.approx(2.0, abs=1e-13)

    def test_index_range(self, spec60_03):
        with pytest.raises(ValueError):
            dpswf(spec60_03, 60, 0.0)

    def test_unit_norm_over_period(self, spec60_03):
        # orthonormality on [-1/2, 1/2] via quadrature
        from slepian.numkit import gauss_legendre
        rule = gauss_legendre(256).scaled(0.5)
        U = dpswf_matrix(spec60_03, rule.nodes, np.arange(6))
        gram = (U.conj().T * rule.weights[None, :]) @ U
        assert np.max(np.abs(gram - np.eye(6))) <= 1e-12


class TestConcentration:
    def test_scalar_case(self):
        disc = spectrum(DiscreteParams(1, 0.2))
        assert concentration(disc, 0, 0) == pytest.approx(0.4, abs=1e-16)

    def test_diagonal_and_off_diagonal(self, spec60_03):
        N = spec60_03.N
        for j in (0, 5, 20):
            assert abs(concentration(spec60_03, j, j)
                       - spec60_03.values[j]) <= 1e-10
        for j, k in ((0, 1), (3, 10), (7, 40), (0, 59)):
            assert abs(concentration(spec60_03, j, k)) <= 1e-10

    def test_full_double_orthogonality(self, spec60_03):
        from slepian.discrete import prolate_matrix
        rho = prolate_matrix(spec60_03.params)
        gram = spec60_03.dpss.T @ rho @ spec60_03.dpss
        off = gram - np.diag(np.diag(gram))
        assert np.max(np.abs(off)) <= 1e-10
        assert np.max(np.abs(np.diag(gram) - spec60_03.values)) <= 1e-12

    def test_coefficient_orthonormality(self, spec60_03):
        gram = spec60_03.dpss.T @ spec60_03.dpss
        assert np.max(np.abs(gram - np.eye(60))) <= 1e-12


class TestSymmetry:
    def test_scalar(self):
        assert symmetry_defect(1, 0.2) <= 1e-16

    def test_self_dual_quarter(self, get_spectrum):
        disc = get_spectrum(60, 0.25)
        assert np.max(np.abs(disc.values + disc.values[::-1] - 1.0)) <= 1e-10

    @pytest.mark.parametrize("N,W", [(60, 0.1), (60, 0.3), (30, 0.2), (17, 0.05)])
    @pytest.mark.parametrize("method", ["toeplitz", "tridiag"])
    def test_defect(self, N, W, method):
        assert symmetry_defect(N, W, method=method) <= 1e-10


class TestCommutation:
    def test_scalar_commutes(self):
        assert commutation_defect(DiscreteParams(1, 0.3)) == 0.0

    def test_two_by_two(self):
        assert commutation_defect(DiscreteParams(2, 0.25)) <= 1e-14

    @pytest.mark.parametrize("N,W", [(60, 0.3), (30, 0.1), (120, 0.4)])
    def test_grid(self, N, W):
        assert commutation_defect(DiscreteParams(N, W)) <= 1e-12


class TestExtend:
    def test_scalar_case(self):
        disc = spectrum(DiscreteParams(1, 0.25))
        assert extend_dpss(disc, 0, 1) == pytest.approx(2 / math.pi, rel=1e-14)

    def test_reproduces_inside(self, get_spectrum):
        disc = get_spectrum(20, 0.15, "toeplitz")
        for k in (0, 1, 2):
            for n in range(20):
                assert abs(extend_dpss(disc, k, n)
                           - disc.dpss[n, k]) <= 1e-9

    def test_far_tail_decays(self, get_spectrum):
        disc = get_spectrum(20, 0.15, "toeplitz")
        for k in (0, 1, 2):
            assert abs(extend_dpss(disc, k, 200)) <= abs(extend_dpss(disc, k, 20))
            assert abs(extend_dpss(disc, k, -181)) <= abs(extend_dpss(disc, k, -1))

    def test_floor_error(self, get_spectrum):
        disc = get_spectrum(30, 0.1)
        assert disc.values[29] < 1e-8
        with pytest.raises(IllConditionedError):
            extend_dpss(disc, 29, 35)
