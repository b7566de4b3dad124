from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exact_qparams
from qdeform.qcore import KernelMismatchError, QParam, q_binomial, q_bracket, q_factorial
from qdeform.qpoly import (
    QPolynomial,
    TruncatedSeries,
    difference_quotient,
    formal_derivative,
    jackson_derivative,
    jackson_power,
    mixed_q_subtraction_power,
    mixed_subtraction_series,
    monomial_series,
    poly_add,
    poly_eval,
    poly_mul,
    poly_scale,
    polys_equal,
    polys_to_csv,
    polys_to_rows,
    q_addition_poly,
    q_addition_power,
    q_addition_power_expanded,
    q_subtraction_power,
    series_q_exp_compose,
)

F = Fraction
HALF = QParam(F(1, 2))
TWO = QParam(F(2))


def polys(qp_strategy=exact_qparams(), max_degree=8):
    coeff = st.fractions(-5, 5, max_denominator=9)
    return qp_strategy.flatmap(lambda qp: st.lists(coeff, max_size=max_degree + 1).map(lambda cs: QPolynomial(cs, qp)))


def poly_pairs(max_degree=6):
    coeff = st.fractions(-5, 5, max_denominator=9)
    lists = st.lists(coeff, max_size=max_degree + 1)
    return exact_qparams().flatmap(lambda qp: st.tuples(lists, lists).map(lambda ab: (QPolynomial(ab[0], qp), QPolynomial(ab[1], qp))))


class TestRing:
    def test_examples(self):
        x = QPolynomial.x(HALF)
        assert (x + 1) * (x - 1) == QPolynomial([-1, 0, 1], HALF)
        assert poly_eval(x**2, F(3)) == 9
        h1 = QPolynomial([0, q_bracket(HALF, 2)], HALF)
        assert poly_scale(h1, q_bracket(HALF, 2)) == QPolynomial([0, F(9, 4)], HALF)

    def test_trailing_zeros_stripped(self):
        p = QPolynomial([1, 2, 0, 0], HALF)
        assert p.degree == 1 and p.coeffs == (F(1), F(2))
        assert QPolynomial.zero(HALF).degree == float("-inf")

    def test_kernel_mismatch(self):
        with pytest.raises(KernelMismatchError):
            QPolynomial.x(HALF) + QPolynomial.x(TWO)

    @given(poly_pairs())
    def test_commutative(self, ab):
        a, b = ab
        assert poly_add(a, b) == poly_add(b, a)
        assert poly_mul(a, b) == poly_mul(b, a)

    @given(poly_pairs(), st.fractions(-3, 3, max_denominator=5))
    def test_evaluation_is_homomorphism(self, ab, x0):
        a, b = ab
        assert (a * b)(x0) == a(x0) * b(x0)
        assert (a + b)(x0) == a(x0) + b(x0)

    @given(polys())
    def test_json_round_trip(self, p):
        assert QPolynomial.from_json(p.to_json()) == p

    def test_immutable(self):
        p = QPolynomial.x(HALF)
        with pytest.raises(AttributeError):
            p.coeffs = (1,)

    def test_float_equality_is_relative(self):
        fq = QParam.floating(0.5)
        a = QPolynomial([1e6, 1.0], fq)
        b = QPolynomial([1e6 * (1 + 1e-14), 1.0], fq)
        assert polys_equal(a, b)
        assert not polys_equal(a, QPolynomial([1e6, 1.1], fq))


class TestJackson:
    def test_examples(self):
        assert jackson_derivative(QPolynomial.constant(1, HALF)).is_zero()
        assert jackson_derivative(QPolynomial.monomial(3, HALF)) == QPolynomial([0, 0, F(7, 4)], HALF)
        assert jackson_derivative(QPolynomial([0, 2, 1], TWO)) == QPolynomial([2, 3], TWO)

    @given(polys(exact_qparams().filter(lambda qp: qp.q != 1)))
    def test_matches_difference_quotient(self, p):
        assert jackson_derivative(p) == difference_quotient(p)

    @given(polys(st.just(QParam(1))))
    def test_classical_limit(self, p):
        assert jackson_derivative(p) == formal_derivative(p)

    @given(poly_pairs())
    def test_q_leibniz_rule(self, ab):
        # D(fg)(x) = D f(x) g(x) + f(qx) D g(x)
        f, g = ab
        q = f.qp.q
        assert jackson_derivative(f * g) == jackson_derivative(f) * g + f.dilate(q) * jackson_derivative(g)

    @given(polys(), st.integers(0, 4))
    def test_power_composes(self, p, n):
        assert jackson_power(p, n + 1) == jackson_derivative(jackson_power(p, n))

    def test_difference_quotient_needs_q_not_one(self):
        with pytest.raises(ValueError):
            difference_quotient(QPolynomial.x(QParam(1)))


class TestQAddition:
    def test_examples(self):
        assert q_addition_power(HALF, F(1), F(1), 0) == 1
        assert q_addition_power(HALF, F(1), F(1), 2) == 3
        assert q_subtraction_power(HALF, F(5, 3), F(5, 3), 4) == 0

    @given(exact_qparams(), st.fractions(-3, 3, max_denominator=7), st.fractions(-3, 3, max_denominator=7), st.integers(0, 10))
    def test_product_equals_binomial(self, qp, a, b, n):
        assert q_addition_power(qp, a, b, n) == q_addition_power_expanded(qp, a, b, n)

    @given(exact_qparams(), st.fractions(-3, 3, max_denominator=7), st.fractions(-3, 3, max_denominator=7), st.integers(1, 10))
    def test_derivative_lowers_power(self, qp, a, b, n):
        lhs = jackson_derivative(q_addition_poly(a, b, n, qp))
        assert lhs == q_addition_poly(a, b, n - 1, qp).scale(a * q_bracket(qp, n))

    def test_mixed_low_orders(self):
        a, b = F(3), F(5, 7)
        assert mixed_q_subtraction_power(HALF, a, b, 0) == 1
        assert mixed_q_subtraction_power(HALF, a, b, 1) == a - b

    @given(exact_qparams(), st.fractions(-3, 3, max_denominator=7), st.fractions(-3, 3, max_denominator=7), st.integers(0, 10))
    def test_mixed_direct_sum_oracle(self, qp, a, b, n):
        q = qp.q
        total = sum(
            (
                (-1) ** k * q ** (k * (k - 1)) * q_factorial(qp, n) / (q_factorial(qp, n - k) * q_factorial(qp.power(2), k)) * a ** (n - k) * b**k
                for k in range(n + 1)
            ),
            F(0),
        )
        assert mixed_q_subtraction_power(qp, a, b, n) == total

    @given(st.fractions(-3, 3, max_denominator=7), st.fractions(-3, 3, max_denominator=7), st.integers(0, 10))
    def test_mixed_classical_is_plain_binomial(self, a, b, n):
        assert mixed_q_subtraction_power(QParam(1), a, b, n) == (a - b) ** n


class TestSeries:
    def test_compose_zero_is_one(self):
        zero = TruncatedSeries.one(4, HALF) * 0
        assert series_q_exp_compose(HALF, "e_q", zero) == TruncatedSeries.one(4, HALF)

    def test_E_q2_example(self):
        s = series_q_exp_compose(HALF, "E_q2", monomial_series(HALF, 4, 2, QPolynomial.constant(-1, HALF)))
        assert [s[n] for n in range(5)] == [
            QPolynomial.constant(1, HALF),
            QPolynomial.zero(HALF),
            QPolynomial.constant(-1, HALF),
            QPolynomial.zero(HALF),
            QPolynomial.constant(F(1, 5), HALF),
        ]

    def test_nonzero_constant_refused(self):
        with pytest.raises(ValueError):
            series_q_exp_compose(HALF, "e_q", TruncatedSeries.one(3, HALF))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            series_q_exp_compose(HALF, "cosh", TruncatedSeries.one(3, HALF) * 0)

    @given(exact_qparams())
    def test_second_order_product(self, qp):
        b2 = q_bracket(qp, 2)
        lin = monomial_series(qp, 2, 1, QPolynomial([0, b2], qp))
        quad = monomial_series(qp, 2, 2, QPolynomial.constant(-1, qp))
        s = series_q_exp_compose(qp, "e_q", lin) * series_q_exp_compose(qp, "E_q2", quad)
        assert s[2] == QPolynomial([-1, 0, b2], qp)

    @given(exact_qparams())
    def test_mixed_series_matches_generating_function(self, qp):
        order = 8
        b2 = q_bracket(qp, 2)
        lin = monomial_series(qp, order, 1, QPolynomial([0, b2], qp))
        quad = monomial_series(qp, order, 2, QPolynomial.constant(1, qp))
        gen = series_q_exp_compose(qp, "e_q", lin) * series_q_exp_compose(qp, "E_q2", quad * -1)
        assert mixed_subtraction_series(qp, lin, quad) == gen


class TestCsv:
    def test_long_format(self):
        p = [QPolynomial.constant(1, HALF), QPolynomial([0, F(3, 2)], HALF)]
        assert polys_to_csv(p) == "n,k,coeff\n0,0,1\n1,0,0\n1,1,3/2\n"

    def test_wide_format(self):
        assert polys_to_rows([QPolynomial([F(-3, 2), 0, F(9, 4)], HALF)]) == "-3/2,0,9/4\n"

    def test_float_17_digits(self):
        fq = QParam.floating(0.5)
        assert polys_to_csv([QPolynomial([0.1], fq)]).splitlines()[1] == "0,0,0.10000000000000001"


def test_binomial_appears_in_expansion():
    # (x (+) 1)^n coefficients are the Gaussian binomials times q^(k(k-1)/2)
    qp = QParam(F(2, 3))
    p = q_addition_poly(F(1), F(1), 5, qp)
    assert p.coeffs == tuple(q_binomial(qp, 5, k) * qp.q ** ((5 - k) * (4 - k) // 2) for k in range(6))
