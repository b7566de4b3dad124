"""Scalar q-arithmetic over an exact-rational or a float64 kernel.

Every function takes a :class:`QParam`, which fixes both the deformation
parameter and the number type.  With ``Kernel.EXACT`` the q-numbers,
factorials, binomials and finite Pochhammer symbols are
:class:`fractions.Fraction` values; with ``Kernel.FLOAT`` they are floats.
Infinite products and q-exponential series are always summed in floating
point (complex arguments are accepted).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

from qdeform.config import DEFAULT_TOLERANCES, Tolerances

Scalar = Union[Fraction, float]

#: marker for the infinite q-Pochhammer symbol
INF = math.inf


class Kernel(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class Regime(enum.Enum):
    SUB_CRITICAL = "sub-critical"
    CLASSICAL_LIMIT = "classical-limit"
    SUPER_CRITICAL = "super-critical"


class KernelMismatchError(ValueError):
    """Operands built under different q or different scalar kernels."""


class ConvergenceError(ArithmeticError):
    """A series or lattice sum did not settle within its hard cap."""

    def __init__(self, message: str, direction: str | None = None, terms: int | None = None):
        super().__init__(message)
        self.direction = direction
        self.terms = terms


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer string; decimals are refused."""
    text = text.strip()
    if any(c in text for c in ".eE"):
        raise ValueError(f"{text!r} is not an exact rational; write it as p/q")
    return Fraction(text)


@dataclass(frozen=True)
class QParam:
    """Deformation parameter together with the scalar kernel it is used in."""

    q: Scalar
    kernel: Kernel = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        q, kernel = self.q, self.kernel
        if kernel is None:
            kernel = Kernel.FLOAT if isinstance(q, float) else Kernel.EXACT
        kernel = Kernel(kernel)
        if kernel is Kernel.EXACT:
            if isinstance(q, str):
                q = parse_rational(q)
            elif isinstance(q, Rational):
                q = Fraction(q)
            else:
                raise ValueError(f"exact kernel requires a rational q, got {q!r}")
        else:
            q = float(Fraction(q)) if isinstance(q, str) else float(q)
        if not q > 0:
            raise ValueError(f"q must be positive, got {q}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "kernel", kernel)

    @classmethod
    def exact(cls, q) -> "QParam":
        return cls(q, Kernel.EXACT)

    @classmethod
    def floating(cls, q) -> "QParam":
        return cls(q, Kernel.FLOAT)

    @property
    def regime(self) -> Regime:
        if self.q < 1:
            return Regime.SUB_CRITICAL
        if self.q > 1:
            return Regime.SUPER_CRITICAL
        return Regime.CLASSICAL_LIMIT

    @property
    def is_classical(self) -> bool:
        return self.q == 1

    @property
    def radius(self) -> Scalar:
        """Convergence radius of ``e_q``: ``1/(1-q)`` below one, infinite otherwise."""
        if self.q < 1:
            return self.one / (1 - self.q)
        return math.inf

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.kernel is Kernel.EXACT else 1.0

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.kernel is Kernel.EXACT else 0.0

    def scalar(self, value) -> Scalar:
        """Coerce ``value`` into this kernel's number type."""
        if self.kernel is Kernel.EXACT:
            if isinstance(value, str):
                return parse_rational(value)
            if isinstance(value, Rational):
                return Fraction(value)
            raise KernelMismatchError(f"{value!r} is not exact; exact kernel needs rationals")
        return float(value)

    def power(self, k: int) -> "QParam":
        """The same kernel with base ``q**k`` (e.g. the ``q^2`` of ``E_{q^2}``)."""
        return QParam(self.q**k, self.kernel)

    def inverse(self) -> "QParam":
        return QParam(self.one / self.q, self.kernel)

    def as_float(self) -> "QParam":
        return QParam(float(self.q), Kernel.FLOAT)

    def __str__(self) -> str:
        return f"q={self.q} ({self.kernel.value})"


def q_power(qp: QParam, e: int) -> Scalar:
    """``q**e`` for any integer exponent, in the kernel of ``qp``."""
    return qp.q**e if e >= 0 else qp.one / qp.q ** (-e)


@lru_cache(maxsize=None)
def q_bracket(qp: QParam, n: int) -> Scalar:
    """The q-number ``[n]_q = 1 + q + ... + q^(n-1)``."""
    if n < 0:
        raise ValueError("q_bracket needs n >= 0")
    if qp.is_classical:
        return qp.scalar(n)
    if qp.kernel is Kernel.EXACT:
        return (1 - qp.q**n) / (1 - qp.q)
    # expm1 keeps relative accuracy when q is close to 1
    return -math.expm1(n * math.log(qp.q)) / (1.0 - qp.q)


@lru_cache(maxsize=None)
def q_factorial(qp: QParam, n: int) -> Scalar:
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    if n == 0:
        return qp.one
    return q_factorial(qp, n - 1) * q_bracket(qp, n)


def q_binomial(qp: QParam, n: int, k: int) -> Scalar:
    """Gaussian binomial coefficient ``[n k]_q``."""
    if not 0 <= k <= n:
        raise ValueError(f"q_binomial needs 0 <= k <= n, got n={n}, k={k}")
    return q_factorial(qp, n) / (q_factorial(qp, k) * q_factorial(qp, n - k))


def q_pochhammer(qp: QParam, a, k, tol: Tolerances = DEFAULT_TOLERANCES):
    """``(a; q)_k``; pass ``k=INF`` for the infinite product (needs q < 1).

    The finite product stays in the kernel of ``qp`` when ``a`` is a
    kernel scalar.  The infinite product is evaluated in floating point and
    stops once ``|a q^j| < tol.poch``.
    """
    if k == INF:
        if not qp.q < 1:
            raise ValueError("(a; q)_inf only converges for q < 1")
        q = float(qp.q)
        a = complex(a) if isinstance(a, complex) else float(a)
        result = 1.0
        term = a
        while abs(term) >= tol.poch:
            result *= 1 - term
            term *= q
        return result
    if k < 0 or int(k) != k:
        raise ValueError(f"q_pochhammer needs a nonnegative integer k or INF, got {k!r}")
    result = qp.one
    qj = qp.one
    for _ in range(int(k)):
        result *= 1 - a * qj
        qj *= qp.q
    return result


def _check_disk(x, radius, name: str) -> None:
    if abs(x) >= radius:
        raise ValueError(f"{name}: |x| = {abs(x):.6g} is outside the convergence disk |x| < {float(radius):.6g}")


def _sum_series(ratio, x, tol: Tolerances, name: str):
    # ratio(n) is t_n / t_{n-1} divided by x
    total = 1.0 + 0j if isinstance(x, complex) else 1.0
    term = total
    for n in range(1, tol.series_cap + 1):
        nxt = term * x * ratio(n)
        shrinking = abs(nxt) <= abs(term)
        total += nxt
        term = nxt
        if shrinking and abs(term) < tol.series * abs(total):
            return total
        if term == 0:
            return total
    raise ConvergenceError(f"{name} did not converge within {tol.series_cap} terms", terms=tol.series_cap)


def _float_arg(x):
    if isinstance(x, complex):
        return x
    return float(x)


def q_exp_small(qp: QParam, x, tol: Tolerances = DEFAULT_TOLERANCES):
    """``e_q(x) = sum x^n / [n]_q!`` (float or complex result)."""
    fq = qp.as_float()
    x = _float_arg(x)
    if fq.q < 1:
        _check_disk(x, fq.radius, "e_q")
    if fq.is_classical:
        return cmath.exp(x) if isinstance(x, complex) else math.exp(x)
    return _sum_series(lambda n: 1.0 / q_bracket(fq, n), x, tol, "e_q")


def q_exp_big(qp: QParam, x, tol: Tolerances = DEFAULT_TOLERANCES):
    """``E_q(x) = sum q^(n(n-1)/2) x^n / [n]_q!``."""
    fq = qp.as_float()
    x = _float_arg(x)
    if fq.q > 1:
        _check_disk(x, fq.q / (fq.q - 1), "E_q")
    q = fq.q
    return _sum_series(lambda n: q ** (n - 1) / q_bracket(fq, n), x, tol, "E_q")


def q_exp_inv(qp: QParam, x, tol: Tolerances = DEFAULT_TOLERANCES):
    """``e_{1/q}(x)``, the small exponential in the inverted base."""
    return q_exp_small(qp.inverse(), x, tol)


def scalar_to_json(value):
    """Fractions become ``"p/q"`` strings (integers as ``"p"``), complex numbers ``[re, im]``."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return float(value)


def scalar_from_json(value, kernel: Kernel):
    if kernel is Kernel.EXACT:
        return Fraction(value)
    return float(value)
