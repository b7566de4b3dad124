from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import TEST_QS, exact_qparams
from qdeform import qhermite as qh
from qdeform.qcore import QParam, q_binomial, q_bracket, q_factorial
from qdeform.qpoly import QPolynomial, jackson_power

F = Fraction
HALF = QParam(F(1, 2))


def brackets(qp):
    return tuple(q_bracket(qp, k) for k in (2, 3, 4))


class TestReferenceFamilies:
    def test_classical(self):
        assert qh.classical_hermite(0) == QPolynomial.constant(1, qh.CLASSICAL)
        assert qh.classical_hermite(2) == QPolynomial([-2, 0, 4], qh.CLASSICAL)
        assert qh.classical_hermite(3) == QPolynomial([0, -12, 0, 8], qh.CLASSICAL)

    def test_classical_second_order(self):
        assert all(qh.verify_classical_second_order(n) for n in range(12))

    def test_rogers_szego_examples(self):
        assert qh.rogers_szego(1, HALF) == QPolynomial([1, 1], HALF)
        assert qh.rogers_szego(2, HALF) == QPolynomial([1, F(3, 2), 1], HALF)

    @pytest.mark.parametrize("n", range(7))
    def test_rogers_szego_classical_is_binomial(self, n):
        one = QParam(1)
        assert qh.rogers_szego(n, one) == QPolynomial([1, 1], one) ** n

    @given(exact_qparams(), st.integers(0, 10))
    def test_rogers_szego_sum_vs_recurrence(self, qp, n):
        assert qh.rogers_szego(n, qp) == qh.rogers_szego_recurrence(n, qp)

    @given(exact_qparams(), st.integers(0, 10))
    def test_rogers_szego_ladder(self, qp, n):
        assert qh.rogers_szego_raising(n, qp)
        assert qh.rogers_szego_lowering(n, qp)

    @pytest.mark.parametrize("q", TEST_QS, ids=str)
    def test_rogers_szego_normalized_ladder(self, q):
        assert all(qh.rogers_szego_ladder_float(n, QParam(q)) for n in range(10))


class TestExplicitForms:
    def test_h2_h4_in_brackets(self, qp):
        b2, b3, b4 = brackets(qp)
        assert qh.new_q_hermite_recurrence(2, qp) == QPolynomial([-b2, 0, b2**2], qp)
        assert qh.new_q_hermite_recurrence(4, qp) == QPolynomial([qp.q**2 * b3 * b2**2, 0, -(b2**2) * b3 * b4, 0, b2**4], qp)

    def test_h1_h3_series(self, qp):
        b2, b3, _ = brackets(qp)
        assert qh.new_q_hermite_series(1, qp) == QPolynomial([0, b2], qp)
        assert qh.new_q_hermite_series(3, qp) == QPolynomial([0, -(b2**2) * b3, 0, b2**3], qp)

    def test_half_values(self):
        assert qh.new_q_hermite_recurrence(2, HALF) == QPolynomial([F(-3, 2), 0, F(9, 4)], HALF)

    def test_classical_q(self):
        one = QParam(1)
        assert qh.new_q_hermite_recurrence(3, one) == QPolynomial([0, -12, 0, 8], one)

    def test_operator_form_small(self, qp):
        b2 = q_bracket(qp, 2)
        assert qh.new_q_hermite_operator_form(1, qp) == QPolynomial([0, b2], qp)
        assert qh.new_q_hermite_operator_form(2, qp) == QPolynomial([-b2, 0, b2**2], qp)

    def test_explicit_table_range(self):
        with pytest.raises(ValueError):
            qh.explicit_table(5, HALF)

    def test_generating_function_low_orders(self, qp):
        s = qh.generating_function_series(qp, 4)
        assert s[0] == QPolynomial.constant(1, qp)
        assert s[2].scale(q_factorial(qp, 2)) == qh.new_q_hermite_series(2, qp)


class TestConstructionsAgree:
    @given(exact_qparams(), st.integers(0, 12))
    def test_four_ways(self, qp, n):
        ref = qh.new_q_hermite_recurrence(n, qp)
        assert qh.new_q_hermite_series(n, qp) == ref
        assert qh.new_q_hermite_operator_form(n, qp) == ref
        assert qh.new_q_hermite_exponential_form(n, qp) == ref
        assert qh.new_q_hermite_from_generating_function(qp, n)[n] == ref

    def test_generating_function_order_16(self):
        gen = qh.new_q_hermite_from_generating_function(HALF, 16)
        assert len(gen) == 17
        assert all(gen[n] == qh.new_q_hermite_recurrence(n, HALF) for n in range(17))

    def test_five_at_three_halves(self):
        qp = QParam(F(3, 2))
        assert qh.new_q_hermite_exponential_form(5, qp) == qh.new_q_hermite_recurrence(5, qp)

    def test_float_kernel_tracks_exact(self):
        ref = qh.new_q_hermite_recurrence(10, QParam(F(2, 3)))
        approx = qh.new_q_hermite_recurrence(10, QParam.floating(2 / 3))
        assert approx.max_abs_diff(QPolynomial([float(c) for c in ref.coeffs], approx.qp)) < 1e-12 * max(abs(float(c)) for c in ref.coeffs)


class TestIdentities:
    @given(exact_qparams(), st.integers(1, 14))
    def test_lowering(self, qp, n):
        assert qh.verify_lowering(n, qp)

    def test_lowering_examples(self):
        assert qh.verify_lowering(1, HALF)
        assert qh.verify_lowering(7, HALF)
        assert qh.verify_lowering(7, QParam(F(5, 3)))

    @given(exact_qparams(), st.integers(0, 14))
    def test_second_order(self, qp, n):
        assert qh.verify_second_order(n, qp)

    def test_second_order_example(self):
        assert qh.second_order_residual(5, QParam(F(2, 5))).is_zero()
        assert qh.second_order_residual(0, HALF).is_zero()

    def test_second_order_not_vacuous(self):
        qp = HALF
        wrong = QPolynomial.monomial(3, qp)
        b2, w = q_bracket(qp, 2), qp.q ** (2 - 3)
        residual = jackson_power(wrong, 2) - jackson_power(wrong, 1).shift_up().scale(b2 * w) + wrong.scale(b2 * q_bracket(qp, 3) * w)
        assert not residual.is_zero()

    @pytest.mark.parametrize("q", [0.5, 2.0, 0.9])
    def test_second_order_float(self, q):
        assert all(qh.verify_second_order(n, QParam.floating(q)) for n in range(16))

    @given(exact_qparams(), st.integers(0, 14))
    def test_parity_degree_leading(self, qp, n):
        assert qh.verify_parity(n, qp)
        assert qh.verify_degree_and_leading(n, qp)

    def test_classical_limit_converges(self):
        # first-order convergence in 1 - q
        errs = qh.classical_limit_errors(6)
        assert errs[0] / errs[1] == pytest.approx(10, rel=0.05)
        assert errs[1] / errs[2] == pytest.approx(10, rel=0.05)


class TestChainRule:
    @given(exact_qparams(), st.integers(0, 10), st.integers(0, 6))
    def test_expansion_base_q_squared(self, qp, n, m):
        assert qh.verify_chain_rule(n, m, qp)

    def test_base_q_fails(self):
        # a base-q derivative on the u side does not reproduce (D_x)^n x^(2m)
        assert not qh.verify_chain_rule(2, 2, HALF, u_base=HALF)

    @given(exact_qparams(), st.integers(0, 20))
    def test_recurrence_equals_closed_forms(self, qp, n):
        a = qh.chain_rule_coeffs(n, qp)
        for k in range(n // 2 + 1):
            assert a[k] == qh.chain_rule_closed_form(n, k, qp) == qh.chain_rule_double_factorial_form(n, k, qp)

    @given(exact_qparams(), st.integers(0, 10))
    def test_double_factorial(self, qp, k):
        prod = F(1)
        for j in range(1, k + 1):
            prod *= q_bracket(qp, 2 * j)
        assert qh.even_q_double_factorial(qp, k) == prod

    def test_classical_coefficients(self):
        # at q = 1: a_k^n = n! / ((n-2k)! k!)
        one = QParam(1)
        assert qh.chain_rule_coeffs(4, one).table == (1, 12, 12)


class TestNormalizedStates:
    @pytest.mark.parametrize("q", TEST_QS, ids=str)
    def test_ladder_float(self, q):
        qp = QParam(q)
        assert all(qh.verify_psi_lowering(n, qp) and qh.verify_psi_raising(n, qp) for n in range(1, 12))

    @given(exact_qparams(), st.integers(1, 12))
    def test_recurrence_exact(self, qp, n):
        assert qh.verify_psi_recurrence_exact(n, qp)

    def test_norm_squared(self):
        assert qh.psi_norm_squared(2, HALF) == F(9, 4) * F(3, 2)


class TestRodrigues:
    @pytest.mark.parametrize("q", TEST_QS, ids=str)
    def test_low_orders_agree(self, q):
        assert qh.rodrigues_residual(0, QParam(q)) < 1e-12
        assert qh.rodrigues_residual(1, QParam(q)) < 1e-12

    def test_classical_agrees(self):
        assert all(qh.rodrigues_residual(n, QParam(1)) < 1e-9 for n in range(6))

    def test_n2_half_mismatch(self):
        # the Rodrigues-type form gives 9/8 x^2 where H_2 has 9/4 x^2
        r = qh.rodrigues_form(2, HALF)
        assert r.coeff(0) == pytest.approx(-1.5)
        assert r.coeff(2) == pytest.approx(9 / 8)


def test_build_family():
    fam = qh.build_family(qh.FamilyKind.NEW_Q_HERMITE, HALF, 4)
    assert len(fam) == 5 and fam[2] == qh.new_q_hermite_recurrence(2, HALF)
    assert qh.build_family("rogers-szego", HALF, 2)[1] == QPolynomial([1, 1], HALF)


def test_binomial_coefficients_in_rogers_szego():
    qp = QParam(F(2, 3))
    assert qh.rogers_szego(6, qp).coeffs == tuple(q_binomial(qp, 6, k) for k in range(7))
