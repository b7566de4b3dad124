"""Hermite-type polynomial families and the identities that tie them together.

The new q-Hermite polynomials ``H_n^q`` are built four independent ways
(three-term recurrence, closed series, generating function, product of
first-order q-difference operators) so that the constructions can be
compared coefficient by coefficient.  Classical Hermite and Rogers-Szego
polynomials are provided as reference families.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from qdeform.config import DEFAULT_TOLERANCES, Tolerances
from qdeform.qcore import Kernel, QParam, q_binomial, q_bracket, q_factorial, q_power
from qdeform.qpoly import (
    QPolynomial,
    TruncatedSeries,
    formal_derivative,
    jackson_derivative,
    jackson_power,
    monomial_series,
    polys_equal,
    series_q_exp_compose,
)

CLASSICAL = QParam.exact(1)


class FamilyKind(enum.Enum):
    CLASSICAL = "classical"
    ROGERS_SZEGO = "rogers-szego"
    NEW_Q_HERMITE = "new-q-hermite"
    NORMALIZED_PSI = "normalized-psi"


@dataclass(frozen=True)
class HermiteFamily:
    kind: FamilyKind
    qp: QParam
    polys: tuple

    def __getitem__(self, n: int) -> QPolynomial:
        return self.polys[n]

    def __len__(self) -> int:
        return len(self.polys)


# -- reference families -----------------------------------------------------


@lru_cache(maxsize=None)
def classical_hermite(n: int, qp: QParam = CLASSICAL) -> QPolynomial:
    """Physicists' Hermite polynomial from ``H_{n+1} = 2x H_n - 2n H_{n-1}``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return QPolynomial.constant(1, qp)
    if n == 1:
        return QPolynomial([0, 2], qp)
    return classical_hermite(n - 1, qp).shift_up().scale(2) - classical_hermite(n - 2, qp).scale(2 * (n - 1))


def rogers_szego(n: int, qp: QParam) -> QPolynomial:
    """``H_n(z; q) = sum_k [n k]_q z^k``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return QPolynomial([q_binomial(qp, n, k) for k in range(n + 1)], qp)


@lru_cache(maxsize=None)
def rogers_szego_recurrence(n: int, qp: QParam) -> QPolynomial:
    """Same family from ``H_{n+1} = (1+z) H_n - z (1-q^n) H_{n-1}``."""
    if n == 0:
        return QPolynomial.constant(1, qp)
    if n == 1:
        return QPolynomial([1, 1], qp)
    prev, prev2 = rogers_szego_recurrence(n - 1, qp), rogers_szego_recurrence(n - 2, qp)
    one_plus_z = QPolynomial([1, 1], qp)
    return one_plus_z * prev - prev2.shift_up().scale(1 - qp.q ** (n - 1))


# -- four constructions of H_n^q -------------------------------------------


@lru_cache(maxsize=None)
def new_q_hermite_recurrence(n: int, qp: QParam) -> QPolynomial:
    """``H_{n+1} = [2]_q x H_n - [2]_q [n]_q q^(n-1) H_{n-1}`` from ``H_0 = 1``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    b2 = q_bracket(qp, 2)
    if n == 0:
        return QPolynomial.constant(1, qp)
    if n == 1:
        return QPolynomial([0, b2], qp)
    m = n - 1
    return new_q_hermite_recurrence(m, qp).shift_up().scale(b2) - new_q_hermite_recurrence(m - 1, qp).scale(
        b2 * q_bracket(qp, m) * q_power(qp, m - 1)
    )


def series_coefficient(n: int, k: int, qp: QParam):
    """``(-1)^k q^(k(k-1)) [n]_q! / ([n-2k]_q! [k]_{q^2}!)``, the weight of ``([2]_q x)^(n-2k)``."""
    sign = -1 if k % 2 else 1
    return sign * qp.q ** (k * (k - 1)) * q_factorial(qp, n) / (q_factorial(qp, n - 2 * k) * q_factorial(qp.power(2), k))


def new_q_hermite_series(n: int, qp: QParam) -> QPolynomial:
    """Closed sum over ``k <= n/2`` of ``series_coefficient * ([2]_q x)^(n-2k)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    b2 = q_bracket(qp, 2)
    coeffs = [qp.zero] * (n + 1)
    for k in range(n // 2 + 1):
        coeffs[n - 2 * k] = series_coefficient(n, k, qp) * b2 ** (n - 2 * k)
    return QPolynomial(coeffs, qp)


def generating_function_series(qp: QParam, order: int = DEFAULT_TOLERANCES.n_t) -> TruncatedSeries:
    """``e_q([2]_q t x) E_{q^2}(-t^2)`` expanded to ``t^order``."""
    if order < 0:
        raise ValueError("order must be >= 0")
    b2x = QPolynomial([0, q_bracket(qp, 2)], qp)
    lin = monomial_series(qp, order, 1, b2x) if order >= 1 else TruncatedSeries.one(order, qp) * 0
    quad = monomial_series(qp, order, 2, QPolynomial.constant(-1, qp)) if order >= 2 else TruncatedSeries.one(order, qp) * 0
    return series_q_exp_compose(qp, "e_q", lin) * series_q_exp_compose(qp, "E_q2", quad)


def new_q_hermite_from_generating_function(qp: QParam, order: int = DEFAULT_TOLERANCES.n_t) -> list:
    """``[n]_q!`` times the ``t^n`` coefficient, for ``n = 0..order``."""
    series = generating_function_series(qp, order)
    return [series[n].scale(q_factorial(qp, n)) for n in range(order + 1)]


def new_q_hermite_operator_form(n: int, qp: QParam) -> QPolynomial:
    """Apply ``([2]_q x - q^j D_x^q)`` for ``j = -1, 0, ..., n-2`` (rightmost first) to 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    b2 = q_bracket(qp, 2)
    p = QPolynomial.constant(1, qp)
    for j in range(-1, n - 1):
        p = p.shift_up().scale(b2) - jackson_derivative(p).scale(q_power(qp, j))
    return p


def new_q_hermite_exponential_form(n: int, qp: QParam) -> QPolynomial:
    """``E_{q^2}(-(D_x^q)^2 / [2]_q^2)`` applied to ``([2]_q x)^n``.

    The exponential series stops by itself: ``(D_x^q)^(n+1)`` kills degree n.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    b2 = q_bracket(qp, 2)
    qp2 = qp.power(2)
    p = QPolynomial.monomial(n, qp, b2**n)
    result = QPolynomial.zero(qp)
    for s in range(n // 2 + 1):
        weight = (-1) ** s * qp.q ** (s * (s - 1)) / (q_factorial(qp2, s) * b2 ** (2 * s))
        result = result + p.scale(weight)
        p = jackson_power(p, 2)
    return result


CONSTRUCTIONS = ("recurrence", "series", "generating-function", "operator")


def four_way_constructions(qp: QParam, n_max: int) -> dict:
    """All four constructions for ``n = 0..n_max``, keyed by construction name."""
    return {
        "recurrence": [new_q_hermite_recurrence(n, qp) for n in range(n_max + 1)],
        "series": [new_q_hermite_series(n, qp) for n in range(n_max + 1)],
        "generating-function": new_q_hermite_from_generating_function(qp, n_max),
        "operator": [new_q_hermite_operator_form(n, qp) for n in range(n_max + 1)],
    }


def explicit_table(n: int, qp: QParam) -> QPolynomial:
    """The explicit H_1..H_4 written in q-brackets, for comparison with the constructions."""
    b2, b3, b4 = (q_bracket(qp, k) for k in (2, 3, 4))
    table = {
        0: [1],
        1: [0, b2],
        2: [-b2, 0, b2**2],
        3: [0, -(b2**2) * b3, 0, b2**3],
        4: [qp.q**2 * b3 * b2**2, 0, -(b2**2) * b3 * b4, 0, b2**4],
    }
    if n not in table:
        raise ValueError("explicit table covers n = 0..4")
    return QPolynomial(table[n], qp)


@lru_cache(maxsize=None)
def build_family(kind: FamilyKind, qp: QParam, n_max: int) -> HermiteFamily:
    kind = FamilyKind(kind)
    if kind is FamilyKind.CLASSICAL:
        polys = [classical_hermite(n, qp) for n in range(n_max + 1)]
    elif kind is FamilyKind.ROGERS_SZEGO:
        polys = [rogers_szego(n, qp) for n in range(n_max + 1)]
    elif kind is FamilyKind.NEW_Q_HERMITE:
        polys = [new_q_hermite_recurrence(n, qp) for n in range(n_max + 1)]
    else:
        polys = [normalized_psi(n, qp) for n in range(n_max + 1)]
    return HermiteFamily(kind, qp, tuple(polys))


# -- identities on H_n^q ----------------------------------------------------


def verify_lowering(n: int, qp: QParam) -> bool:
    """``D_x^q H_n^q = [2]_q [n]_q H_{n-1}^q`` as an exact polynomial identity."""
    if n < 1:
        raise ValueError("lowering relation needs n >= 1")
    lhs = jackson_derivative(new_q_hermite_recurrence(n, qp))
    rhs = new_q_hermite_recurrence(n - 1, qp).scale(q_bracket(qp, 2) * q_bracket(qp, n))
    return polys_equal(lhs, rhs)


def _second_order_terms(n: int, qp: QParam) -> tuple:
    h = new_q_hermite_recurrence(n, qp)
    b2 = q_bracket(qp, 2)
    w = q_power(qp, 2 - n)
    dh = jackson_derivative(h)
    return jackson_derivative(dh), -dh.shift_up().scale(b2 * w), h.scale(b2 * q_bracket(qp, n) * w)


def second_order_residual(n: int, qp: QParam) -> QPolynomial:
    d2, d1, d0 = _second_order_terms(n, qp)
    return d2 + d1 + d0


def verify_second_order(n: int, qp: QParam, rel: float = 1e-10) -> bool:
    """The second-order q-difference equation annihilates ``H_n^q`` (exactly in the rational kernel)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    terms = _second_order_terms(n, qp)
    residual = terms[0] + terms[1] + terms[2]
    if qp.kernel is Kernel.EXACT:
        return residual.is_zero()
    scale = max([abs(float(c)) for t in terms for c in t.coeffs] + [1.0])
    return all(abs(float(c)) <= rel * scale for c in residual.coeffs)


def verify_classical_second_order(n: int) -> bool:
    """``(d^2/dz^2 - 2z d/dz + 2n) H_n = 0`` on the classical family."""
    h = classical_hermite(n)
    dh = formal_derivative(h)
    return (formal_derivative(dh) - dh.shift_up().scale(2) + h.scale(2 * n)).is_zero()


def verify_parity(n: int, qp: QParam) -> bool:
    h = new_q_hermite_recurrence(n, qp)
    return polys_equal(h.reflect(), h if n % 2 == 0 else -h)


def verify_degree_and_leading(n: int, qp: QParam) -> bool:
    h = new_q_hermite_recurrence(n, qp)
    lead = q_bracket(qp, 2) ** n
    if qp.kernel is Kernel.EXACT:
        return h.degree == n and h.leading == lead
    return h.degree == n and abs(h.leading - lead) <= 1e-12 * abs(lead)


# -- chain rule for f(x^2) ---------------------------------------------------


@dataclass(frozen=True)
class ChainRuleCoeffs:
    n: int
    table: tuple

    def __getitem__(self, k: int):
        return self.table[k]


def _chain_entry(prev: tuple, n: int, k: int, qp: QParam):
    # a_k^{n+1} = q^(n-2k) a_k^n + [2]_q [n-2k+2]_q a_{k-1}^n, with a_k^n = 0 outside 0..n/2
    def a(j):
        return prev[j] if 0 <= j < len(prev) else qp.zero

    value = qp.zero
    if 0 <= k <= n // 2:
        value += q_power(qp, n - 2 * k) * a(k)
    if k >= 1 and n - 2 * k + 2 >= 0:
        value += q_bracket(qp, 2) * q_bracket(qp, n - 2 * k + 2) * a(k - 1)
    return value


@lru_cache(maxsize=None)
def chain_rule_coeffs(n: int, qp: QParam) -> ChainRuleCoeffs:
    """``a_k^n`` for ``0 <= k <= n/2`` built by the recurrence in n from ``a_0^0 = 1``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ChainRuleCoeffs(0, (qp.one,))
    prev = chain_rule_coeffs(n - 1, qp).table
    return ChainRuleCoeffs(n, tuple(_chain_entry(prev, n - 1, k, qp) for k in range(n // 2 + 1)))


def _leading_power(n: int, k: int, qp: QParam):
    m = n - 2 * k
    return q_power(qp, (m - 1) * m // 2)


def chain_rule_closed_form(n: int, k: int, qp: QParam):
    """``q^((n-2k-1)(n-2k)/2) [n]_q! / ([n-2k]_q! [k]_{q^2}!)``."""
    return _leading_power(n, k, qp) * q_factorial(qp, n) / (q_factorial(qp, n - 2 * k) * q_factorial(qp.power(2), k))


def even_q_double_factorial(qp: QParam, k: int):
    """``[2k]_q!! = [2]_q^k [k]_{q^2}!``."""
    return q_bracket(qp, 2) ** k * q_factorial(qp.power(2), k)


def chain_rule_double_factorial_form(n: int, k: int, qp: QParam):
    """``q^(...) [n]_q! [2]_q^k / ([n-2k]_q! [2k]_q!!)``."""
    return (
        _leading_power(n, k, qp)
        * q_factorial(qp, n)
        * q_bracket(qp, 2) ** k
        / (q_factorial(qp, n - 2 * k) * even_q_double_factorial(qp, k))
    )


def chain_rule_expansion(n: int, m: int, qp: QParam, u_base: QParam | None = None) -> QPolynomial:
    """``sum_k a_k^n ([2]_q x)^(n-2k) (d/du)^(n-k) u^m`` with ``u = x^2``.

    ``u_base`` is the base of the u-side Jackson derivative; it defaults to
    ``q^2``, the only choice for which the expansion reproduces
    ``(D_x^q)^n x^(2m)``.
    """
    u_base = qp.power(2) if u_base is None else u_base
    b2 = q_bracket(qp, 2)
    a = chain_rule_coeffs(n, qp)
    result = QPolynomial.zero(qp)
    for k in range(n // 2 + 1):
        j = n - k
        if j > m:
            continue
        du = q_factorial(u_base, m) / q_factorial(u_base, m - j)
        deg = n - 2 * k + 2 * (m - j)
        result = result + QPolynomial.monomial(deg, qp, a[k] * b2 ** (n - 2 * k) * du)
    return result


def verify_chain_rule(n: int, m: int, qp: QParam, u_base: QParam | None = None) -> bool:
    """Brute force ``(D_x^q)^n x^(2m)`` against :func:`chain_rule_expansion`."""
    brute = jackson_power(QPolynomial.monomial(2 * m, qp), n)
    return polys_equal(brute, chain_rule_expansion(n, m, qp, u_base))


# -- normalized states psi_n^q ------------------------------------------------


def psi_norm_squared(n: int, qp: QParam):
    """``[2]_q^n [n]_q!``, the square of the normalization of ``psi_n^q``."""
    return q_bracket(qp, 2) ** n * q_factorial(qp, n)


def normalized_psi(n: int, qp: QParam) -> QPolynomial:
    """``H_n^q / sqrt([2]_q^n [n]_q!)`` in the float kernel."""
    fq = qp.as_float()
    h = new_q_hermite_recurrence(n, qp)
    return QPolynomial([float(c) for c in h.coeffs], fq).scale(1.0 / math.sqrt(float(psi_norm_squared(n, qp))))


def verify_psi_lowering(n: int, qp: QParam, tol: float = DEFAULT_TOLERANCES.psi) -> bool:
    """``D_x^q psi_n = sqrt([2]_q [n]_q) psi_{n-1}`` within ``tol``."""
    fq = qp.as_float()
    lhs = jackson_derivative(normalized_psi(n, qp))
    rhs = normalized_psi(n - 1, qp).scale(math.sqrt(q_bracket(fq, 2) * q_bracket(fq, n)))
    return lhs.max_abs_diff(rhs) <= tol * max(1.0, max((abs(c) for c in rhs.coeffs), default=0.0))


def verify_psi_raising(n: int, qp: QParam, tol: float = DEFAULT_TOLERANCES.psi) -> bool:
    """``(sqrt([2]_q) x - q^(n-1) D_x^q / sqrt([2]_q)) psi_n = sqrt([n+1]_q) psi_{n+1}`` within ``tol``."""
    fq = qp.as_float()
    s2 = math.sqrt(q_bracket(fq, 2))
    psi = normalized_psi(n, qp)
    lhs = psi.shift_up().scale(s2) - jackson_derivative(psi).scale(fq.q ** (n - 1) / s2)
    rhs = normalized_psi(n + 1, qp).scale(math.sqrt(q_bracket(fq, n + 1)))
    return lhs.max_abs_diff(rhs) <= tol * max(1.0, max((abs(c) for c in rhs.coeffs), default=0.0))


def verify_psi_recurrence_exact(n: int, qp: QParam) -> bool:
    """Rational form of the normalized three-term recurrence.

    Multiplying through by the normalization of ``psi_n`` turns it into the
    unnormalized recurrence, provided the squared normalization ratios are
    ``[2]_q [n+1]_q`` and ``[2]_q [n]_q``; all three facts are checked exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    b2 = q_bracket(qp, 2)
    up = psi_norm_squared(n + 1, qp) / psi_norm_squared(n, qp) == b2 * q_bracket(qp, n + 1)
    down = psi_norm_squared(n, qp) / psi_norm_squared(n - 1, qp) == b2 * q_bracket(qp, n)
    h_next = new_q_hermite_series(n + 1, qp)
    rebuilt = new_q_hermite_series(n, qp).shift_up().scale(b2) - new_q_hermite_series(n - 1, qp).scale(
        q_power(qp, n - 1) * b2 * q_bracket(qp, n)
    )
    return up and down and h_next == rebuilt


# -- Rodrigues-type form ----------------------------------------------------


def rodrigues_form(n: int, qp: QParam, n_pad: int = DEFAULT_TOLERANCES.n_pad) -> QPolynomial:
    """``(-1)^n e_{q^-2}(x^2) (D_x^q)^n e_{q^2}(-x^2)`` truncated at ``x^(n + 2 n_pad)``, in floats."""
    fq = qp.as_float()
    top = n + 2 * n_pad
    q2, qm2 = fq.power(2), fq.inverse().power(2)
    # enough terms of e_{q^2}(-x^2) that degree <= top survives n derivatives
    g = [0.0] * (top + n + 2)
    for m in range((top + n) // 2 + 1):
        g[2 * m] = (-1) ** m / q_factorial(q2, m)
    gp = jackson_power(QPolynomial(g, fq), n)
    e = [0.0] * (top + 1)
    for m in range(top // 2 + 1):
        e[2 * m] = 1.0 / q_factorial(qm2, m)
    prod = QPolynomial(e, fq) * gp
    return QPolynomial([(-1) ** n * prod.coeff(k) for k in range(top + 1)], fq)


def rodrigues_residual(n: int, qp: QParam, n_pad: int = DEFAULT_TOLERANCES.n_pad) -> float:
    """Largest coefficient gap between the Rodrigues-type expansion and ``H_n^q``."""
    h = new_q_hermite_recurrence(n, qp)
    hf = QPolynomial([float(c) for c in h.coeffs], qp.as_float())
    return rodrigues_form(n, qp, n_pad).max_abs_diff(hf)


# -- Rogers-Szego ladder -----------------------------------------------------


def rogers_szego_raising(n: int, qp: QParam) -> bool:
    """``(1 + z - (1-q) z D_z^q) H_n(z;q) = H_{n+1}(z;q)`` exactly (the unnormalized ladder)."""
    h = rogers_szego(n, qp)
    lhs = QPolynomial([1, 1], qp) * h - jackson_derivative(h).shift_up().scale(1 - qp.q)
    return polys_equal(lhs, rogers_szego(n + 1, qp))


def rogers_szego_lowering(n: int, qp: QParam) -> bool:
    """``D_z^q H_n(z;q) = [n]_q H_{n-1}(z;q)`` exactly."""
    if n == 0:
        return jackson_derivative(rogers_szego(0, qp)).is_zero()
    return polys_equal(jackson_derivative(rogers_szego(n, qp)), rogers_szego(n - 1, qp).scale(q_bracket(qp, n)))


def rogers_szego_psi(n: int, qp: QParam) -> QPolynomial:
    fq = qp.as_float()
    h = rogers_szego(n, qp)
    return QPolynomial([float(c) for c in h.coeffs], fq).scale(1.0 / math.sqrt(float(q_factorial(qp, n))))


def rogers_szego_ladder_float(n: int, qp: QParam, tol: float = DEFAULT_TOLERANCES.psi) -> bool:
    """``A^dag psi_n = sqrt([n+1]_q) psi_{n+1}`` and ``A psi_n = sqrt([n]_q) psi_{n-1}`` in floats."""
    fq = qp.as_float()
    psi = rogers_szego_psi(n, qp)
    up = QPolynomial([1.0, 1.0], fq) * psi - jackson_derivative(psi).shift_up().scale(1 - fq.q)
    target_up = rogers_szego_psi(n + 1, qp).scale(math.sqrt(q_bracket(fq, n + 1)))
    ok = up.max_abs_diff(target_up) <= tol * max([1.0, *map(abs, target_up.coeffs)])
    down = jackson_derivative(psi)
    target = QPolynomial.zero(fq) if n == 0 else rogers_szego_psi(n - 1, qp).scale(math.sqrt(q_bracket(fq, n)))
    return ok and down.max_abs_diff(target) <= tol * max([1.0, *map(abs, target.coeffs)])


# -- classical limit ----------------------------------------------------------


def classical_limit_errors(n: int, ks=(2, 3, 4)) -> list:
    """Max coefficient distance of ``H_n^q`` at ``q = 1 - 10^-k`` from classical ``H_n``."""
    ref = classical_hermite(n)
    out = []
    for k in ks:
        qp = QParam(1.0 - 10.0 ** (-k), Kernel.FLOAT)
        out.append(new_q_hermite_recurrence(n, qp).max_abs_diff(ref))
    return out
