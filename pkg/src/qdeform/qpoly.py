"""Dense polynomials in x, truncated series in t, and the Jackson derivative."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from qdeform.qcore import (
    Kernel,
    KernelMismatchError,
    QParam,
    Scalar,
    q_binomial,
    q_bracket,
    q_factorial,
    q_power,
    scalar_from_json,
    scalar_to_json,
)


def _strip(coeffs: Iterable[Scalar]) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class QPolynomial:
    """Immutable dense polynomial ``sum coeffs[k] x^k`` tied to a :class:`QParam`.

    The zero polynomial has no coefficients and degree ``-inf``.
    """

    __slots__ = ("coeffs", "qp")

    def __init__(self, coeffs: Iterable, qp: QParam):
        object.__setattr__(self, "qp", qp)
        object.__setattr__(self, "coeffs", _strip(qp.scalar(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("QPolynomial is immutable")

    @classmethod
    def _raw(cls, coeffs: Iterable[Scalar], qp: QParam) -> "QPolynomial":
        p = object.__new__(cls)
        object.__setattr__(p, "qp", qp)
        object.__setattr__(p, "coeffs", _strip(coeffs))
        return p

    @classmethod
    def zero(cls, qp: QParam) -> "QPolynomial":
        return cls._raw((), qp)

    @classmethod
    def constant(cls, c, qp: QParam) -> "QPolynomial":
        return cls._raw((qp.scalar(c),), qp)

    @classmethod
    def monomial(cls, n: int, qp: QParam, c=1) -> "QPolynomial":
        return cls._raw([qp.zero] * n + [qp.scalar(c)], qp)

    @classmethod
    def x(cls, qp: QParam) -> "QPolynomial":
        return cls.monomial(1, qp)

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    @property
    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else self.qp.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Scalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.qp.zero

    def _coerce(self, other) -> "QPolynomial":
        if isinstance(other, QPolynomial):
            if other.qp != self.qp:
                raise KernelMismatchError(f"cannot combine polynomials over {self.qp} and {other.qp}")
            return other
        return QPolynomial.constant(other, self.qp)

    def __add__(self, other) -> "QPolynomial":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return QPolynomial._raw([x + y for x, y in zip(a, b)] + list(a[len(b):]), self.qp)

    __radd__ = __add__

    def __neg__(self) -> "QPolynomial":
        return QPolynomial._raw([-c for c in self.coeffs], self.qp)

    def __sub__(self, other) -> "QPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "QPolynomial":
        if not isinstance(other, QPolynomial):
            return self.scale(other)
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return QPolynomial.zero(self.qp)
        out = [self.qp.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPolynomial._raw(out, self.qp)

    def __rmul__(self, other) -> "QPolynomial":
        return self.scale(other)

    def __pow__(self, n: int) -> "QPolynomial":
        result = QPolynomial.constant(1, self.qp)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c) -> "QPolynomial":
        c = self.qp.scalar(c)
        return QPolynomial._raw([c * a for a in self.coeffs], self.qp)

    def shift_up(self, k: int = 1) -> "QPolynomial":
        """Multiply by ``x^k``."""
        if self.is_zero():
            return self
        return QPolynomial._raw([self.qp.zero] * k + list(self.coeffs), self.qp)

    def dilate(self, c) -> "QPolynomial":
        """The polynomial ``x -> p(c x)``."""
        c = self.qp.scalar(c)
        out, ck = [], self.qp.one
        for a in self.coeffs:
            out.append(a * ck)
            ck *= c
        return QPolynomial._raw(out, self.qp)

    def divide_by_x(self) -> "QPolynomial":
        """Exact division by ``x``; the constant term must vanish."""
        if self.coeffs and self.coeffs[0] != 0:
            raise ArithmeticError("polynomial is not divisible by x")
        return QPolynomial._raw(self.coeffs[1:], self.qp)

    def reflect(self) -> "QPolynomial":
        """The polynomial ``x -> p(-x)``."""
        return QPolynomial._raw([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)], self.qp)

    def __call__(self, x0):
        """Evaluate by Horner's scheme."""
        acc = self.qp.zero
        for c in reversed(self.coeffs):
            acc = acc * x0 + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, QPolynomial):
            return self.qp == other.qp and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.qp, self.coeffs))

    def __repr__(self) -> str:
        return f"QPolynomial({[str(c) for c in self.coeffs]}, {self.qp})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            terms.append(f"{c}" if not mono else f"({c})*{mono}")
        return " + ".join(terms)

    def max_abs_diff(self, other: "QPolynomial") -> float:
        n = max(len(self.coeffs), len(other.coeffs))
        if n == 0:
            return 0.0
        return max(abs(float(self.coeff(k)) - float(other.coeff(k))) for k in range(n))

    def to_json(self) -> dict:
        return {
            "q": scalar_to_json(self.qp.q),
            "kernel": self.qp.kernel.value,
            "coeffs": [scalar_to_json(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "QPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        kernel = Kernel(data.get("kernel", "exact"))
        qp = QParam(scalar_from_json(data["q"], kernel), kernel)
        return cls([scalar_from_json(c, kernel) for c in data["coeffs"]], qp)


def polys_equal(a: QPolynomial, b: QPolynomial, rel: float = 1e-10) -> bool:
    """Exact equality in the rational kernel, coefficient-wise relative closeness in floats."""
    if a.qp.kernel is Kernel.EXACT and b.qp.kernel is Kernel.EXACT:
        return a == b
    scale = max([abs(float(c)) for c in a.coeffs + b.coeffs] + [1.0])
    return a.max_abs_diff(b) <= rel * scale


def poly_add(p: QPolynomial, r: QPolynomial) -> QPolynomial:
    return p + r


def poly_mul(p: QPolynomial, r: QPolynomial) -> QPolynomial:
    return p * r


def poly_scale(p: QPolynomial, c) -> QPolynomial:
    return p.scale(c)


def poly_eval(p: QPolynomial, x0):
    return p(x0)


def jackson_derivative(p: QPolynomial) -> QPolynomial:
    """``D_x^q`` by the monomial rule ``x^n -> [n]_q x^(n-1)``."""
    qp = p.qp
    return QPolynomial._raw([q_bracket(qp, k) * c for k, c in enumerate(p.coeffs) if k > 0], qp)


def jackson_power(p: QPolynomial, n: int) -> QPolynomial:
    for _ in range(n):
        p = jackson_derivative(p)
    return p


def difference_quotient(p: QPolynomial) -> QPolynomial:
    """``(p(x) - p(qx)) / ((1 - q) x)`` built by dilation and exact division.

    Independent of :func:`jackson_derivative`; only used to cross-check it.
    Not defined at q = 1.
    """
    qp = p.qp
    if qp.is_classical:
        raise ValueError("the difference quotient is singular at q = 1")
    return (p - p.dilate(qp.q)).divide_by_x().scale(qp.one / (1 - qp.q))


def formal_derivative(p: QPolynomial) -> QPolynomial:
    qp = p.qp
    return QPolynomial._raw([qp.scalar(k) * c for k, c in enumerate(p.coeffs) if k > 0], qp)


def polys_to_csv(polys: Sequence[QPolynomial], start: int = 0) -> str:
    """Long-format table ``n, k, coeff`` (exact values as ``p/q`` strings)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "k", "coeff"])
    for n, p in enumerate(polys, start):
        for k in range(len(p.coeffs)):
            writer.writerow([n, k, _csv_scalar(p.coeff(k))])
    return buf.getvalue()


def polys_to_rows(polys: Sequence[QPolynomial]) -> str:
    """One coefficient row per polynomial (wide format)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for p in polys:
        writer.writerow([_csv_scalar(c) for c in p.coeffs] or ["0"])
    return buf.getvalue()


def _csv_scalar(c) -> str:
    v = scalar_to_json(c)
    return v if isinstance(v, str) else f"{v:.17g}"


# -- q-addition ------------------------------------------------------------


def q_addition_power(qp: QParam, a, b, n: int) -> Scalar:
    """``(a (+)_q b)^n = (a + b)(a + q b)...(a + q^(n-1) b)``."""
    result, qj = qp.one, qp.one
    for _ in range(n):
        result *= a + qj * b
        qj *= qp.q
    return result


def q_addition_power_expanded(qp: QParam, a, b, n: int) -> Scalar:
    """Binomial form ``sum_k [n k]_q q^C(k,2) a^(n-k) b^k`` of the same quantity."""
    return sum(
        (q_binomial(qp, n, k) * qp.q ** (k * (k - 1) // 2) * a ** (n - k) * b**k for k in range(n + 1)),
        qp.zero,
    )


def q_subtraction_power(qp: QParam, a, b, n: int) -> Scalar:
    return q_addition_power(qp, a, -b, n)


def _mixed_coefficient(qp: QParam, n: int, k: int) -> Scalar:
    # [n]_q! / ([n-k]_q! [k]_{q^2}!) (-1)^k q^(k(k-1))
    sign = -1 if k % 2 else 1
    return sign * qp.q ** (k * (k - 1)) * q_factorial(qp, n) / (q_factorial(qp, n - k) * q_factorial(qp.power(2), k))


def mixed_q_subtraction_power(qp: QParam, a, b, n: int) -> Scalar:
    """``(a (-)_{q,q^2} b)^n``, the mixed-base binomial sum."""
    if n == 0:
        return qp.one
    return sum((_mixed_coefficient(qp, n, k) * a ** (n - k) * b**k for k in range(n + 1)), qp.zero)


def q_addition_poly(a, b, n: int, qp: QParam) -> QPolynomial:
    """``(a x (+)_q b)^n`` expanded as a polynomial in x (product form)."""
    factor_const = qp.one
    result = QPolynomial.constant(1, qp)
    for _ in range(n):
        result = result * QPolynomial([b * factor_const, a], qp)
        factor_const *= qp.q
    return result


# -- truncated series in t --------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """``sum_{n <= order} coeffs[n] t^n`` whose coefficients are polynomials in x."""

    coeffs: tuple
    order: int

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.order + 1:
            raise ValueError(f"series of order {self.order} needs {self.order + 1} coefficients")

    @property
    def qp(self) -> QParam:
        return self.coeffs[0].qp

    @classmethod
    def from_terms(cls, terms: dict, order: int, qp: QParam) -> "TruncatedSeries":
        """Build from ``{power: polynomial or scalar}``; powers above ``order`` are dropped."""
        coeffs = [QPolynomial.zero(qp)] * (order + 1)
        for n, c in terms.items():
            if n <= order:
                coeffs[n] = c if isinstance(c, QPolynomial) else QPolynomial.constant(c, qp)
        return cls(tuple(coeffs), order)

    @classmethod
    def one(cls, order: int, qp: QParam) -> "TruncatedSeries":
        return cls.from_terms({0: 1}, order, qp)

    def _check(self, other: "TruncatedSeries") -> None:
        if other.order != self.order or other.qp != self.qp:
            raise KernelMismatchError("series differ in order, q or kernel")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(tuple(c.scale(other) for c in self.coeffs), self.order)
        self._check(other)
        zero = QPolynomial.zero(self.qp)
        out = [zero] * (self.order + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(self.order + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncatedSeries(tuple(out), self.order)

    def __getitem__(self, n: int) -> QPolynomial:
        return self.coeffs[n]

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)


def _exp_coefficients(qp: QParam, kind: str, order: int) -> list:
    if kind == "e_q":
        return [qp.one / q_factorial(qp, n) for n in range(order + 1)]
    if kind in ("E_q2", "E_{q^2}"):
        qp2 = qp.power(2)
        # base q^2 turns q^(n(n-1)/2) into q^(n(n-1))
        return [qp.q ** (n * (n - 1)) / q_factorial(qp2, n) for n in range(order + 1)]
    raise ValueError(f"unknown q-exponential kind {kind!r}; use 'e_q' or 'E_q2'")


def series_q_exp_compose(qp: QParam, kind: str, argument: TruncatedSeries) -> TruncatedSeries:
    """Formal composition ``e_q(S)`` or ``E_{q^2}(S)`` for a series ``S`` with ``S(0) = 0``."""
    if not argument.coeffs[0].is_zero():
        raise ValueError("composition needs an argument series with zero constant term")
    order = argument.order
    weights = _exp_coefficients(qp, kind, order)
    result = TruncatedSeries.one(order, qp)
    power = TruncatedSeries.one(order, qp)
    for n in range(1, order + 1):
        power = power * argument
        result = result + power * weights[n]
    return result


def mixed_subtraction_series(qp: QParam, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """``e_q(a (-)_{q,q^2} b) = sum_n (a (-)_{q,q^2} b)^n / [n]_q!`` via the binomial form."""
    order = a.order
    a_pows = [TruncatedSeries.one(order, qp)]
    b_pows = [TruncatedSeries.one(order, qp)]
    for _ in range(order):
        a_pows.append(a_pows[-1] * a)
        b_pows.append(b_pows[-1] * b)
    result = TruncatedSeries.one(order, qp)
    for n in range(1, order + 1):
        for k in range(n + 1):
            term = (a_pows[n - k] * b_pows[k]) * (_mixed_coefficient(qp, n, k) / q_factorial(qp, n))
            result = result + term
    return result


def monomial_series(qp: QParam, order: int, power: int, poly: QPolynomial) -> TruncatedSeries:
    """The series ``poly * t^power``."""
    return TruncatedSeries.from_terms({power: poly}, order, qp)


__all__ = [
    "QPolynomial",
    "TruncatedSeries",
    "difference_quotient",
    "formal_derivative",
    "jackson_derivative",
    "jackson_power",
    "mixed_q_subtraction_power",
    "mixed_subtraction_series",
    "monomial_series",
    "poly_add",
    "poly_eval",
    "poly_mul",
    "poly_scale",
    "polys_equal",
    "polys_to_csv",
    "polys_to_rows",
    "q_addition_poly",
    "q_addition_power",
    "q_addition_power_expanded",
    "q_power",
    "q_subtraction_power",
    "series_q_exp_compose",
]
