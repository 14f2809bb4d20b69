import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmtoeplitz import oracle
from mmtoeplitz.quadrature import QuadratureSpec
from mmtoeplitz.special import pochhammer
from mmtoeplitz.symbols import parse


@pytest.fixture
def rng():
    return np.random.default_rng(7)


class TestMonomialNorm:
    @pytest.mark.parametrize("p,lam,expected", [((0,), 0, 1.0), ((1,), 0, 0.5), ((1, 1), 0, 1 / 12)])
    def test_values(self, p, lam, expected):
        assert oracle.monomial_norm(p, lam) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("p", [(2,), (1, 3), (0, 2), (1, 1, 1)])
    @pytest.mark.parametrize("lam", [-0.5, 0.0, 1.5])
    def test_against_ball_quadrature(self, p, lam):
        val, _ = oracle.monomial_norm_quadrature(p, lam, QuadratureSpec(angular_nodes=1))
        assert val == pytest.approx(oracle.monomial_norm(p, lam), rel=1e-8)


class TestToeplitzMatrix:
    def test_identity(self):
        mat = oracle.toeplitz_matrix_ball(lambda z: np.ones(z.shape[:-1]), 0.5, 2, 3)
        assert np.max(np.abs(mat.matrix - np.eye(len(mat.basis)))) < 1e-8

    def test_real_part_structure(self):
        mat = oracle.toeplitz_matrix_ball(lambda z: z[..., 0].real, 0.0, 2, 3)
        basis = [tuple(p) for p in mat.basis]
        assert np.max(np.abs(mat.diagonal)) < 1e-12
        for i, p in enumerate(basis):
            for j, q in enumerate(basis):
                step = np.subtract(p, q)
                adjacent = abs(step[0]) == 1 and step[1] == 0
                if adjacent:
                    assert abs(mat.matrix[i, j]) > 0.1
                else:
                    assert abs(mat.matrix[i, j]) < 1e-12
        assert mat.max_offdiag > 10 * max(mat.err, 1e-15)

    def test_real_part_entry(self):
        # <Re(z) e_0, e_1> = <z/2, z/||z||> = ||z|| / 2 with ||z||^2 = 1/2 at n = 1, lambda = 0
        mat = oracle.toeplitz_matrix_ball(lambda z: z[..., 0].real, 0.0, 1, 2)
        assert abs(mat.matrix[1, 0]) == pytest.approx(math.sqrt(0.5) / 2, rel=1e-12)

    def test_hermitian(self):
        mat = oracle.toeplitz_matrix_ball(lambda z: np.exp(-np.abs(z[..., 0] - 0.3) ** 2), 0.0, 2, 3)
        assert mat.hermitian_defect < 1e-10

    def test_serialization(self):
        mat = oracle.toeplitz_matrix_ball(lambda z: np.ones(z.shape[:-1]), 0.0, 1, 2)
        data = json.loads(mat.to_json())
        assert data["basis"] == [[0], [1], [2]]
        lines = mat.to_csv().splitlines()
        assert lines[0] == "p,q,re,im" and len(lines) == 10


class TestDiagonalization:
    def test_one_dim_closed_form(self):
        rep = oracle.diagonalization_report("1/(1+h1)", 0.0, 1, 6)
        assert rep["max_offdiag"] < 1e-6
        assert np.allclose(rep["diagonal"], [1 / (p + 2) for p in range(7)], rtol=0, atol=1e-6)
        # strictly decreasing in p for a symbol decreasing in |h|
        assert np.all(np.diff(rep["diagonal"]) < 0)

    def test_constant(self):
        off, dev = oracle.verify_diagonalization(parse("1"), 0.0, 2, 3)
        assert off < 1e-10 and dev < 1e-10

    @pytest.mark.parametrize("lam", [0.0, 0.5])
    def test_two_dim(self, lam):
        off, dev = oracle.verify_diagonalization("h1/(1+h1+h2)", lam, 2, 4)
        assert off < 1e-5 and dev < 1e-5

    def test_box_indicator(self):
        off, dev = oracle.verify_diagonalization("ind(h1 < 1) * ind(h2 < 2)", 0.5, 2, 3)
        assert off < 1e-5 and dev < 1e-5

    def test_planes(self):
        planes = oracle.h_planes(parse("ind(h2 < 2)"), 2)
        (coef, rhs), = planes
        assert coef.tolist() == [2.0, 3.0] and rhs == 2.0


class TestPDE:
    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(0, 6), min_size=1, max_size=3), st.data())
    def test_qe_analytic(self, p, data):
        h = np.array(data.draw(st.lists(st.floats(0.05, 5), min_size=len(p), max_size=len(p))))
        assert oracle.pde_residual_qe(p, h) < 1e-12

    def test_qe_fd(self, rng):
        for _ in range(50):
            p = rng.integers(0, 5, 2)
            assert oracle.pde_residual_qe(p, rng.uniform(0.1, 3, 2), 1e-5) < 1e-8

    def test_qe_zero_order(self):
        assert oracle.phi_qe((0, 0), np.array([0.3, 2.0])) == 1.0
        assert oracle.pde_residual_qe((0, 0), np.array([0.3, 2.0])) == 0.0

    @pytest.mark.parametrize("lam", [0.0, 0.7])
    def test_qh(self, rng, lam):
        for _ in range(50):
            n = int(rng.integers(1, 4))
            pp = rng.integers(0, 5, n - 1)
            xi = rng.normal() * 2
            h = np.r_[rng.uniform(0.1, 3, n - 1), rng.normal() * 2]
            assert oracle.pde_residual_qh(pp, xi, h, lam=lam) < 1e-12
            assert oracle.pde_residual_qh(pp, xi, h, 1e-5, lam=lam) < 1e-7

    def test_qh_rational_case(self):
        # p' = 0, xi = 0, n = 1: phi = w^(-(lam+2)/2) with w = i + h
        h = np.array([0.7])
        assert oracle.phi_qh((), 0.0, h) == pytest.approx((1j + 0.7) ** -1.0, rel=1e-14)

    def test_broken_solution_is_detected(self):
        # the exponent p/2 is essential; p/3 violates the system
        h = np.array([0.5, 1.2])
        p = np.array([2, 1])
        phi = lambda x: np.prod(x ** (p / 3)) * (1 + x.sum()) ** (-p.sum() / 3)  # noqa: E731
        grad = np.array([(phi(h + e) - phi(h - e)) / 2e-6 for e in 1e-6 * np.eye(2)])
        lhs = p / (2 * h) * phi(h)
        rhs = grad + h @ grad
        assert np.max(np.abs(lhs - rhs)) > 1e-2


class TestFWeight:
    def test_origin(self):
        F, mod2 = oracle.f_weight((1,), 0.8, [0.5], 0.0, 0.0)
        assert mod2 == pytest.approx(math.exp(-math.pi * 0.8) / 1.5**2, rel=1e-14)
        assert abs(F) ** 2 == pytest.approx(mod2, rel=1e-12)

    def test_xi_zero(self):
        F, mod2 = oracle.f_weight((2,), 0.0, [0.5], 1.3, 0.5)
        q = (2 + 2 + 0.5 + 1) / 2
        assert mod2 == pytest.approx(1.5 ** (-2.5) * (1 + 1.69) ** (-q), rel=1e-14)

    def test_branch_consistency(self, rng):
        for _ in range(1000):
            n = int(rng.integers(1, 4))
            F, mod2 = oracle.f_weight(rng.integers(0, 5, n - 1), rng.normal() * 3, rng.uniform(0.05, 3, n - 1),
                                      rng.normal() * 5, rng.uniform(-0.9, 2))
            assert abs(abs(F) ** 2 - mod2) < 1e-12 * mod2

    def test_arccot_branch(self):
        assert oracle.arccot(np.array([-1e8, 0.0, 1e8])) == pytest.approx([math.pi, math.pi / 2, 0.0], abs=1e-7)


class TestBargmann:
    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("lam", [-0.5, 0.0, 1.0])
    def test_qe_constant_is_p_independent(self, n, lam):
        rep = oracle.bargmann_report(lam, n, 6)
        assert rep["spread"] < 1e-8
        assert rep["measured"] == pytest.approx(rep["predicted"], rel=1e-9)
        assert rep["predicted"] == pytest.approx(1 / pochhammer(lam + 1, n), rel=1e-14)

    @pytest.mark.parametrize("n,xi", [(2, 0.0), (2, 1.3), (3, -0.6)])
    def test_qh_constant_is_p_independent(self, n, xi):
        rep = oracle.bargmann_report(0.5, n, 4, case="qh", xi=xi)
        assert rep["spread"] < 1e-8
        assert rep["measured"] == pytest.approx(rep["predicted"], rel=1e-9)

    def test_isometric_when_lambda_zero_one_dim(self):
        assert abs(oracle.bargmann_normalization_check((0,), 0.0, 1)) < 1e-12

    def test_continuous_in_lambda(self):
        lams = np.linspace(-0.5, 1.0, 16)
        devs = np.array([oracle.bargmann_normalization_check((1, 0), lam, 2) for lam in lams])
        smooth = np.array([1 / pochhammer(lam + 1, 2) - 1 for lam in lams])
        assert np.max(np.abs(devs - smooth)) < 1e-10
