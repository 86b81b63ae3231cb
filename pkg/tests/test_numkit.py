import math

import numpy as np
import pytest

from slepian.numkit import (SymTridiag, eig_sym, eig_symtridiag,
                            gauss_legendre, snapped_floor, spectral_norm_sym)


class TestGaussLegendre:
    def test_order_one(self):
        rule = gauss_legendre(1)
        assert rule.nodes == pytest.approx([0.0], abs=1e-15)
        assert rule.weights == pytest.approx([2.0], abs=1e-15)

    def test_order_two_closed_form(self):
        rule = gauss_legendre(2)
        root = 1.0 / math.sqrt(3.0)
        assert rule.nodes == pytest.approx([-root, root], abs=1e-15)
        assert rule.weights == pytest.approx([1.0, 1.0], abs=1e-15)

    def test_quartic_with_order_three(self):
        rule = gauss_legendre(3)
        value = np.sum(rule.weights * rule.nodes ** 4)
        assert value == pytest.approx(0.4, abs=1e-14)

    @pytest.mark.parametrize("order", [1, 2, 3, 5, 8, 13, 21, 34, 64])
    def test_monomial_exactness(self, order):
        rule = gauss_legendre(order)
        for k in range(2 * order):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            value = np.sum(rule.weights * rule.nodes ** k)
            assert abs(value - exact) <= 1e-13

    @pytest.mark.parametrize("order", [1, 2, 7, 50, 201])
    def test_rule_invariants(self, order):
        rule = gauss_legendre(order)
        assert (np.diff(rule.nodes) > 0).all()
        assert np.max(np.abs(rule.nodes + rule.nodes[::-1])) <= 1e-14
        assert abs(rule.weights.sum() - 2.0) <= 1e-13
        assert (rule.weights > 0).all()
        assert rule.nodes[0] > -1.0 and rule.nodes[-1] < 1.0

    @pytest.mark.parametrize("order", [0, -3, 2.5])
    def test_invalid_order(self, order):
        with pytest.raises(ValueError):
            gauss_legendre(order)

    def test_scaled_interval(self):
        rule = gauss_legendre(5).scaled(0.25)
        assert abs(rule.weights.sum() - 0.5) <= 1e-14
        value = np.sum(rule.weights * rule.nodes ** 2)
        assert value == pytest.approx(2 * 0.25 ** 3 / 3, abs=1e-15)


class TestEigSym:
    def test_identity(self):
        system = eig_sym(np.eye(3))
        assert system.values == pytest.approx([1.0, 1.0, 1.0], abs=1e-15)

    def test_two_by_two_closed_form(self):
        A = np.array([[0.5, 1 / math.pi], [1 / math.pi, 0.5]])
        system = eig_sym(A)
        assert system.values == pytest.approx(
            [0.5 + 1 / math.pi, 0.5 - 1 / math.pi], abs=1e-14)

    def test_second_difference_closed_form(self):
        n = 4
        A = 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
        system = eig_sym(A)
        expected = [2 - 2 * math.cos(k * math.pi / 5) for k in (4, 3, 2, 1)]
        assert system.values == pytest.approx(expected, abs=1e-13)

    def test_output_contract_random(self):
        rng = np.random.default_rng(7)
        B = rng.normal(size=(40, 40))
        A = B + B.T
        system = eig_sym(A)
        assert (np.diff(system.values) <= 0).all()
        gram = system.vectors.T @ system.vectors
        assert np.max(np.abs(gram - np.eye(40))) <= 1e-12
        resid = np.max(np.linalg.norm(A @ system.vectors
                                      - system.vectors * system.values, axis=0))
        assert resid <= 1e-11 * np.max(np.abs(system.values))
        assert system.residual_bound == resid

    def test_deterministic(self):
        rng = np.random.default_rng(11)
        B = rng.normal(size=(25, 25))
        A = B + B.T
        s1, s2 = eig_sym(A), eig_sym(A)
        assert (s1.values == s2.values).all()
        assert (s1.vectors == s2.vectors).all()

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            eig_sym(np.array([[1.0, 2.0], [2.0 + 1e-15, 1.0]]))


class TestEigSymTridiag:
    def test_scalar(self):
        system = eig_symtridiag(SymTridiag(np.array([5.0]), np.array([])))
        assert system.values == pytest.approx([5.0], abs=0)
        assert system.vectors.tolist() == [[1.0]]

    def test_two_by_two(self):
        system = eig_symtridiag(SymTridiag(np.zeros(2), np.array([1.0])))
        assert system.values == pytest.approx([1.0, -1.0], abs=1e-14)

    def test_three_by_three(self):
        T = SymTridiag(np.full(3, 2.0), np.full(2, -1.0))
        system = eig_symtridiag(T)
        expected = [2 + math.sqrt(2), 2.0, 2 - math.sqrt(2)]
        assert system.values == pytest.approx(expected, abs=1e-14)

    def test_agrees_with_dense(self):
        rng = np.random.default_rng(3)
        T = SymTridiag(rng.normal(size=80), rng.normal(size=79))
        tri = eig_symtridiag(T)
        dense = eig_sym(T.dense())
        scale = max(1.0, np.max(np.abs(dense.values)))
        assert np.max(np.abs(tri.values - dense.values)) <= 1e-12 * scale

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            SymTridiag(np.zeros(3), np.zeros(3))


class TestSpectralNorm:
    def test_zero(self):
        assert spectral_norm_sym(np.zeros((4, 4))) == 0.0

    def test_identity(self):
        assert spectral_norm_sym(np.eye(5)) == pytest.approx(1.0, abs=1e-15)

    def test_two_by_two(self):
        A = np.array([[0.5, 1 / math.pi], [1 / math.pi, 0.5]])
        assert spectral_norm_sym(A) == pytest.approx(0.5 + 1 / math.pi, rel=1e-10)


def test_snapped_floor():
    assert snapped_floor(35.99999999999999) == 36
    assert snapped_floor(36.00000000000001) == 36
    assert snapped_floor(35.4) == 35
    assert snapped_floor(-0.2) == -1
    assert snapped_floor(12.0) == 12
