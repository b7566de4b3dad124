import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import TEST_QS, exact_qparams
from qdeform import oscillator as osc
from qdeform.qcore import QParam, q_bracket

F = Fraction
HALF = QParam(F(1, 2))


class TestLadder:
    def test_vacuum_annihilated(self):
        v = osc.apply_A(osc.FockVector.basis(0, 5), HALF)
        assert v.norm_squared() == 0

    @pytest.mark.parametrize("n", range(6))
    def test_number_like_operator(self, n):
        v = osc.FockVector.basis(n, 8)
        out = osc.apply_Adag(osc.apply_A(v, HALF), HALF)
        assert out.distance(v * float(q_bracket(HALF, n))) < 1e-14

    def test_truncation_flag(self):
        top = osc.FockVector.basis(4, 4)
        assert osc.apply_Adag(top, HALF).truncated
        assert not osc.apply_Adag(osc.FockVector.basis(3, 4), HALF).truncated

    def test_basis_bounds(self):
        with pytest.raises(ValueError):
            osc.FockVector.basis(5, 4)

    @given(exact_qparams(), st.integers(0, 40))
    def test_deformed_commutator_scalar(self, qp, n):
        assert osc.raising_square(qp, n) - qp.q * osc.lowering_square(qp, n) == 1


class TestAlgebra:
    @pytest.mark.parametrize("q", [F(1, 2), F(3), F(1), F(2, 3)], ids=str)
    def test_all_relations(self, q):
        rep = osc.verify_algebra(QParam(q), 20)
        assert rep.ok
        assert all(r.exact for r in rep.relations)
        assert len(rep.relations) == 3

    @pytest.mark.parametrize("q", [0.5, 3.0])
    def test_float_kernel(self, q):
        assert osc.verify_algebra(QParam.floating(q), 20).ok

    def test_check_range(self):
        with pytest.raises(ValueError):
            osc.verify_algebra(HALF, 10, n_trunc=5)


class TestJacobi:
    def test_first_offdiagonal(self):
        mq = osc.build_jacobi(HALF, "Q", 6)
        assert mq.offdiag_sq[0] == F(2, 3)
        assert mq.element(1, 0) == pytest.approx(math.sqrt(2 / 3))
        assert mq.element(0, 1) == pytest.approx(math.sqrt(2 / 3))
        assert mq.element(3, 0) == 0

    @given(exact_qparams(), st.integers(0, 30))
    def test_offdiag_formula(self, qp, n):
        assert osc.jacobi_offdiag_square(qp, n) == q_bracket(qp, n + 1) / q_bracket(qp, 2)

    def test_p_matrix_hermitian(self):
        mp = osc.build_jacobi(HALF, "P", 10).matrix()
        assert np.allclose(mp, mp.conj().T)
        assert mp[1, 0] == pytest.approx(1j * math.sqrt(2 / 3))

    @pytest.mark.parametrize("q", TEST_QS, ids=str)
    def test_unitary_equivalence(self, q):
        assert osc.unitary_equivalence_error(QParam(q), 30) < 1e-12

    @pytest.mark.parametrize("q", TEST_QS, ids=str)
    def test_eigenvalues_match_dense_solver(self, q):
        mq = osc.build_jacobi(QParam(q), "Q", 25)
        dense = np.linalg.eigvalsh(mq.matrix())
        ev = mq.eigenvalues()
        assert np.allclose(ev, dense, rtol=1e-10, atol=1e-10 * np.max(np.abs(dense)))

    def test_classical_is_hermite_zeros(self):
        # at q = 1 the spectrum of the truncated M_Q is the set of zeros of H_N
        n = 8
        ev = osc.build_jacobi(QParam(1), "Q", n).eigenvalues()
        zeros, _ = np.polynomial.hermite.hermgauss(n)
        assert np.allclose(np.sort(ev), np.sort(zeros))

    def test_square_diagonal(self):
        mq = osc.build_jacobi(HALF, "Q", 6)
        dense = np.diag(mq.matrix() @ mq.matrix())
        assert np.allclose(dense[:-1], [float(v) for v in mq.square_diagonal()][:-1])

    def test_unknown_operator(self):
        with pytest.raises(KeyError):
            osc.build_jacobi(HALF, "X", 4)


class TestBoundedness:
    def test_subcritical_bound_exact(self):
        rep = osc.boundedness_diagnostics(HALF, 500)
        assert rep.bound_sq == F(4, 3)
        assert rep.bound_holds
        # b_n^2 is within 2^-500 of 4/3, so the float square root may round onto the bound
        assert rep.max_bn <= math.sqrt(4 / 3)

    def test_subcritical_norms_increase_to_limit(self):
        rep = osc.boundedness_diagnostics(HALF, 100)
        norms = [rep.norms[n] for n in sorted(rep.norms)]
        limit = 2 / math.sqrt(1 - 0.25)
        assert norms == sorted(norms)
        assert norms[-1] < limit
        assert rep.norm_limit == pytest.approx(limit, rel=1e-4)

    def test_norm_gap_shrinks_like_inverse_square(self):
        # ||M_Q|| = 2/sqrt(1-q^2) exactly; truncation to N states misses it by about c/N^2
        limit = 2 / math.sqrt(1 - 0.25)
        gaps = [limit - osc.operator_norm(HALF, n) for n in (100, 200, 400, 800)]
        ratios = [a / b for a, b in zip(gaps, gaps[1:])]
        assert all(3.9 < r < 4.2 for r in ratios)
        assert gaps[1] * 200**2 == pytest.approx(11.65, rel=0.01)

    def test_supercritical(self):
        rep = osc.boundedness_diagnostics(QParam(F(2)), 500)
        assert abs(rep.ratio - 2**-0.5) < 1e-8
        assert rep.cauchy_increment < 1e-12
        assert rep.log_concave
        assert rep.sum_reciprocal_bn == pytest.approx(math.fsum(1 / math.sqrt((2 ** (n + 1) - 1) / 3) for n in range(501)))

    def test_json(self):
        d = osc.boundedness_diagnostics(QParam(F(2)), 100).to_json()
        assert d["regime"] == "super-critical"
        assert set(d) >= {"q", "regime", "bound", "max_bn", "ratio_limit", "sum_reciprocal_bn"}

    def test_small_n_max(self):
        with pytest.raises(ValueError):
            osc.boundedness_diagnostics(HALF, 5)


class TestSpectrum:
    def test_examples(self):
        assert osc.energy(HALF, 0) == F(2, 3)
        assert osc.energy(QParam(F(2)), 3) == F(22, 3)
        one = QParam(1)
        assert [osc.energy(one, n) for n in range(4)] == [F(1, 2), F(3, 2), F(5, 2), F(7, 2)]

    @given(exact_qparams(), st.integers(0, 20))
    def test_spectrum_from_ladder(self, qp, n):
        assert osc.spectrum_Hq(qp, n)[n] == osc.energy(qp, n)

    @given(exact_qparams())
    def test_vacuum_energy(self, qp):
        assert osc.energy(qp, 0) == 1 / (1 + qp.q)

    @pytest.mark.parametrize("q", TEST_QS, ids=str)
    def test_float_hamiltonian(self, q):
        assert osc.hamiltonian_eigen_error(QParam(q), 20) < 1e-13


class TestUncertainty:
    def test_examples(self):
        assert osc.uncertainty(HALF, 0).product_exact == F(2, 3)
        assert osc.uncertainty(QParam(1), 0).product_exact == F(1, 2)
        assert osc.uncertainty(HALF, 2).product_exact == F(13, 6)

    @given(exact_qparams(), st.integers(0, 20))
    def test_variance_is_energy(self, qp, n):
        u = osc.uncertainty(qp, n)
        assert u.mean_q == 0 and u.mean_p == 0
        assert u.var_q == u.var_p == osc.energy(qp, n)
        assert u.product_squared == osc.energy(qp, n) ** 2

    def test_float_product(self):
        assert osc.uncertainty(HALF, 0).product == pytest.approx(2 / 3)

    def test_truncation_too_small(self):
        with pytest.raises(ValueError):
            osc.uncertainty(HALF, 3, n_trunc=4)
