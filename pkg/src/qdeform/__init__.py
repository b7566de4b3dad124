"""q-deformed Hermite polynomials, oscillator algebra and coherent states."""

from qdeform.config import Tolerances, DEFAULT_TOLERANCES
from qdeform.qcore import (
    INF,
    ConvergenceError,
    Kernel,
    KernelMismatchError,
    QParam,
    Regime,
    q_binomial,
    q_bracket,
    q_exp_big,
    q_exp_inv,
    q_exp_small,
    q_factorial,
    q_pochhammer,
)
from qdeform.qpoly import QPolynomial, TruncatedSeries, jackson_derivative

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOLERANCES",
    "INF",
    "ConvergenceError",
    "Kernel",
    "KernelMismatchError",
    "QParam",
    "QPolynomial",
    "Regime",
    "Tolerances",
    "TruncatedSeries",
    "jackson_derivative",
    "q_binomial",
    "q_bracket",
    "q_exp_big",
    "q_exp_inv",
    "q_exp_small",
    "q_factorial",
    "q_pochhammer",
]
