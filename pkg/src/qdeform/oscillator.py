"""q-oscillator algebra on a truncated orthonormal Fock basis.

Ladder actions follow ``A|n> = sqrt([n]_q)|n-1>`` and
``A^dag|n> = sqrt([n+1]_q)|n+1>``.  Exact statements are made on squared
matrix elements (q-numbers), float statements on amplitudes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from qdeform.qcore import Kernel, QParam, Regime, q_bracket


@dataclass(frozen=True)
class FockVector:
    """Amplitudes on ``|0>..|n_trunc>``; ``truncated`` marks amplitude pushed past the top."""

    amplitudes: tuple
    truncated: bool = False

    @property
    def n_trunc(self) -> int:
        return len(self.amplitudes) - 1

    @classmethod
    def basis(cls, n: int, n_trunc: int) -> "FockVector":
        if not 0 <= n <= n_trunc:
            raise ValueError(f"|{n}> is outside the basis |0>..|{n_trunc}>")
        amps = [0.0] * (n_trunc + 1)
        amps[n] = 1.0
        return cls(tuple(amps))

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes))

    def __add__(self, other: "FockVector") -> "FockVector":
        return FockVector(tuple(a + b for a, b in zip(self.amplitudes, other.amplitudes)), self.truncated or other.truncated)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other * -1

    def __mul__(self, c) -> "FockVector":
        return FockVector(tuple(c * a for a in self.amplitudes), self.truncated)

    __rmul__ = __mul__

    def distance(self, other: "FockVector") -> float:
        return max(abs(a - b) for a, b in zip(self.amplitudes, other.amplitudes))


def apply_A(v: FockVector, qp: QParam) -> FockVector:
    fq = qp.as_float()
    amps = list(v.amplitudes)
    out = [math.sqrt(q_bracket(fq, n + 1)) * amps[n + 1] for n in range(len(amps) - 1)] + [0.0]
    return FockVector(tuple(out), v.truncated)


def apply_Adag(v: FockVector, qp: QParam) -> FockVector:
    fq = qp.as_float()
    amps = list(v.amplitudes)
    out = [0.0] + [math.sqrt(q_bracket(fq, n + 1)) * amps[n] for n in range(len(amps) - 1)]
    return FockVector(tuple(out), v.truncated or amps[-1] != 0)


def apply_N(v: FockVector) -> FockVector:
    return FockVector(tuple(n * a for n, a in enumerate(v.amplitudes)), v.truncated)


def hamiltonian_apply(v: FockVector, qp: QParam) -> FockVector:
    """``H^q = (A A^dag + A^dag A) / [2]_q``."""
    aad = apply_A(apply_Adag(v, qp), qp)
    ada = apply_Adag(apply_A(v, qp), qp)
    return (aad + ada) * (1.0 / q_bracket(qp.as_float(), 2))


# exact squared ladder elements: |<n-1|A|n>|^2 and |<n+1|A^dag|n>|^2
def lowering_square(qp: QParam, n: int):
    return q_bracket(qp, n)


def raising_square(qp: QParam, n: int):
    return q_bracket(qp, n + 1)


@dataclass
class RelationStatus:
    relation: str
    exact: bool
    max_float_error: float
    ok: bool


@dataclass
class AlgebraReport:
    qp: QParam
    n_check: int
    relations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.relations)


def verify_algebra(qp: QParam, n_check: int, n_trunc: int | None = None, tol: float = 1e-12) -> AlgebraReport:
    """``AA^dag - qA^dag A = 1``, ``[N, A] = -A``, ``[N, A^dag] = A^dag`` on ``|0>..|n_check>``.

    The exact part is the scalar identity ``[n+1]_q - q[n]_q = 1`` (the
    diagonal of ``AA^dag - qA^dag A`` in squared elements) and the index
    shifts of the commutators; the float part applies the operators to basis
    vectors, skipping the top state where ``A^dag`` leaves the basis.
    """
    n_trunc = n_check + 1 if n_trunc is None else n_trunc
    if n_check > n_trunc - 1:
        raise ValueError("n_check must be <= n_trunc - 1")
    q = qp.q
    if qp.kernel is Kernel.EXACT:
        exact_q = all(raising_square(qp, n) - q * lowering_square(qp, n) == 1 for n in range(n_check + 1))
    else:
        exact_q = all(abs(raising_square(qp, n) - q * lowering_square(qp, n) - 1) <= tol * raising_square(qp, n) for n in range(n_check + 1))
    # [N, A]|n> = ((n-1) - n) A|n>, [N, A^dag]|n> = ((n+1) - n) A^dag|n>: index arithmetic only
    exact_na = all((n - 1) - n == -1 for n in range(n_check + 1))
    exact_nad = all((n + 1) - n == 1 for n in range(n_check + 1))

    # float errors are relative to the size of the intermediate products, which grow like [n+1]_q
    errs = {"qdef": 0.0, "NA": 0.0, "NAdag": 0.0}
    fq = qp.as_float()
    for n in range(n_check + 1):
        v = FockVector.basis(n, n_trunc)
        scale = max(1.0, float(q_bracket(fq, n + 1)) * (n + 1))
        qdef = apply_A(apply_Adag(v, qp), qp) - apply_Adag(apply_A(v, qp), qp) * fq.q
        errs["qdef"] = max(errs["qdef"], qdef.distance(v) / scale)
        na = apply_N(apply_A(v, qp)) - apply_A(apply_N(v), qp)
        errs["NA"] = max(errs["NA"], na.distance(apply_A(v, qp) * -1) / scale)
        nad = apply_N(apply_Adag(v, qp)) - apply_Adag(apply_N(v), qp)
        errs["NAdag"] = max(errs["NAdag"], nad.distance(apply_Adag(v, qp)) / scale)
    report = AlgebraReport(qp, n_check)
    for name, exact, key in (
        ("AA^dag - qA^dag A = 1", exact_q, "qdef"),
        ("[N, A] = -A", exact_na, "NA"),
        ("[N, A^dag] = A^dag", exact_nad, "NAdag"),
    ):
        report.relations.append(RelationStatus(name, exact, errs[key], exact and errs[key] <= tol))
    return report


# -- Jacobi matrices --------------------------------------------------------


class Phase(enum.Enum):
    REAL = "real"  # M_Q
    IMAGINARY = "imaginary"  # M_P


def jacobi_offdiag_square(qp: QParam, n: int):
    """``b_n^2 = [n+1]_q / [2]_q`` (exact in the rational kernel)."""
    return q_bracket(qp, n + 1) / q_bracket(qp, 2)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Zero-diagonal Jacobi matrix of size ``n_trunc`` with ``<n+1|M|n> = phase * b_n``."""

    qp: QParam
    offdiag_sq: tuple
    phase: Phase = Phase.REAL

    @property
    def size(self) -> int:
        return len(self.offdiag_sq) + 1

    @property
    def offdiag(self) -> np.ndarray:
        return np.sqrt(np.array([float(b) for b in self.offdiag_sq]))

    def matrix(self) -> np.ndarray:
        b = self.offdiag
        if self.phase is Phase.REAL:
            return np.diag(b, -1) + np.diag(b, 1)
        return 1j * np.diag(b, -1) - 1j * np.diag(b, 1)

    def element(self, m: int, n: int) -> complex:
        b = self.offdiag
        if m == n + 1 and n < len(b):
            return b[n] if self.phase is Phase.REAL else 1j * b[n]
        if m == n - 1 and m >= 0:
            return b[m] if self.phase is Phase.REAL else -1j * b[m]
        return 0.0

    def diagonal(self) -> tuple:
        return (self.qp.zero,) * self.size

    def square_diagonal(self) -> tuple:
        """Exact diagonal of ``M^2``: ``b_(n-1)^2 + b_n^2`` (the phases cancel for ``M_P``)."""
        sq = list(self.offdiag_sq)
        zero = self.qp.zero
        return tuple((sq[n - 1] if n >= 1 else zero) + (sq[n] if n < len(sq) else zero) for n in range(self.size))

    def eigenvalues(self) -> np.ndarray:
        """Spectrum via the symmetric tridiagonal solver; ``M_P`` is unitarily equivalent to ``M_Q``."""
        return eigh_tridiagonal(np.zeros(self.size), self.offdiag, eigvals_only=True)


def build_jacobi(qp: QParam, which: str, n_trunc: int) -> TridiagonalOperator:
    """Truncated matrix of ``Q`` (``which="Q"``) or ``P`` (``which="P"``) on ``|0>..|n_trunc-1>``."""
    if n_trunc < 2:
        raise ValueError("n_trunc must be >= 2")
    phase = {"Q": Phase.REAL, "P": Phase.IMAGINARY}[which.upper()]
    return TridiagonalOperator(qp, tuple(jacobi_offdiag_square(qp, n) for n in range(n_trunc - 1)), phase)


def unitary_equivalence_error(qp: QParam, n_trunc: int = 40) -> float:
    """``max |M_P - U M_Q U^*|`` with ``U = diag(i^n)``."""
    mq = build_jacobi(qp, "Q", n_trunc).matrix()
    mp = build_jacobi(qp, "P", n_trunc).matrix()
    u = np.diag(1j ** np.arange(n_trunc))
    return float(np.max(np.abs(mp - u @ mq @ u.conj().T)))


# -- boundedness ------------------------------------------------------------


@dataclass
class BoundednessReport:
    q: object
    regime: Regime
    n_max: int
    bound_sq: object = None
    bound_holds: bool | None = None
    max_bn: float = 0.0
    norms: dict = field(default_factory=dict)
    norm_stabilization: float | None = None
    norm_limit: float | None = None
    ratio_at: int | None = None
    ratio: float | None = None
    ratio_limit: float | None = None
    sum_reciprocal_bn: float | None = None
    cauchy_increment: float | None = None
    log_concave: bool | None = None

    def to_json(self) -> dict:
        from qdeform.qcore import scalar_to_json

        return {
            "q": scalar_to_json(self.q),
            "regime": self.regime.value,
            "bound": None if self.bound_sq is None else math.sqrt(float(self.bound_sq)),
            "bound_holds": self.bound_holds,
            "max_bn": self.max_bn,
            "norms": {str(k): v for k, v in self.norms.items()},
            "norm_stabilization": self.norm_stabilization,
            "norm_limit": self.norm_limit,
            "ratio_at": self.ratio_at,
            "ratio": self.ratio,
            "ratio_limit": self.ratio_limit,
            "sum_reciprocal_bn": self.sum_reciprocal_bn,
            "cauchy_increment": self.cauchy_increment,
            "log_concave": self.log_concave,
        }


def operator_norm(qp: QParam, n_trunc: int) -> float:
    return float(np.max(np.abs(build_jacobi(qp, "Q", n_trunc).eigenvalues())))


def boundedness_diagnostics(qp: QParam, n_max: int, truncations=(50, 100, 200), ratio_at: int = 60) -> BoundednessReport:
    """Numerical content of the bounded (q < 1) / unbounded (q > 1) dichotomy for ``b_n``."""
    if n_max < 10:
        raise ValueError("n_max must be >= 10")
    sq = [jacobi_offdiag_square(qp, n) for n in range(n_max + 2)]
    rep = BoundednessReport(qp.q, qp.regime, n_max)
    rep.max_bn = math.sqrt(float(max(sq[: n_max + 1])))
    # comparisons are exact in the rational kernel; in floats the log-concavity ratio tends to 1,
    # so the rounding in [n]_q needs a relative slack
    slack = 1 if qp.kernel is Kernel.EXACT else 1 + 1e-12
    if qp.q < 1:
        rep.bound_sq = 1 / (1 - qp.q**2)
        rep.bound_holds = all(b < rep.bound_sq * slack for b in sq[: n_max + 1])
        for n in truncations:
            rep.norms[n] = operator_norm(qp, n)
        last, prev = truncations[-1], truncations[-2]
        rep.norm_stabilization = abs(rep.norms[last] - rep.norms[prev])
        # spectral edge approaches its limit like 1/N^2; Richardson-extrapolate for reference
        rep.norm_limit = (last**2 * rep.norms[last] - prev**2 * rep.norms[prev]) / (last**2 - prev**2)
    elif qp.q > 1:
        fsq = [float(b) for b in sq]
        k = min(ratio_at, n_max - 1)
        rep.ratio_at = k
        rep.ratio = math.sqrt(fsq[k] / fsq[k + 1])
        rep.ratio_limit = float(qp.q) ** -0.5
        recip = [1.0 / math.sqrt(b) for b in fsq[: n_max + 1]]
        rep.sum_reciprocal_bn = math.fsum(recip)
        rep.cauchy_increment = recip[n_max]
        if qp.kernel is Kernel.EXACT:
            rep.log_concave = all(sq[n - 1] * sq[n + 1] <= sq[n] ** 2 for n in range(1, n_max + 1))
        else:
            # ratios instead of products: b_n^4 overflows a double for large q and n
            rep.log_concave = all((fsq[n - 1] / fsq[n]) * (fsq[n + 1] / fsq[n]) <= slack for n in range(1, n_max + 1))
    return rep


# -- spectrum and uncertainty -------------------------------------------------


def energy(qp: QParam, n: int):
    """``E_n^q = ([n]_q + [n+1]_q) / [2]_q``."""
    return (q_bracket(qp, n) + q_bracket(qp, n + 1)) / q_bracket(qp, 2)


def spectrum_Hq(qp: QParam, n_max: int) -> list:
    """Eigenvalues ``E_n^q`` read off the exact diagonal of ``(AA^dag + A^dag A)/[2]_q``."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    b2 = q_bracket(qp, 2)
    return [(raising_square(qp, n) + lowering_square(qp, n)) / b2 for n in range(n_max + 1)]


def hamiltonian_eigen_error(qp: QParam, n_max: int) -> float:
    """``max_n |H^q|n> - E_n^q|n>| / E_n^q`` with the float ladder operators."""
    fq = qp.as_float()
    worst = 0.0
    for n in range(n_max + 1):
        v = FockVector.basis(n, n_max + 1)
        e = float(energy(fq, n))
        worst = max(worst, hamiltonian_apply(v, qp).distance(v * e) / e)
    return worst


@dataclass(frozen=True)
class Uncertainty:
    mean_q: object
    mean_p: object
    var_q: object
    var_p: object

    @property
    def product_squared(self):
        return self.var_q * self.var_p

    @property
    def product(self) -> float:
        return math.sqrt(float(self.var_q)) * math.sqrt(float(self.var_p))

    @property
    def product_exact(self):
        """``dQ dP`` without a square root, available when the two variances agree."""
        if self.var_q != self.var_p:
            raise ValueError("variances differ; use product_squared")
        return self.var_q


def uncertainty(qp: QParam, n: int, n_trunc: int | None = None) -> Uncertainty:
    """Means and variances of ``Q`` and ``P`` in ``|n>`` from the Jacobi matrices (exact on squares)."""
    n_trunc = n + 2 if n_trunc is None else n_trunc
    if n < 0:
        raise ValueError("n must be >= 0")
    if n + 1 >= n_trunc:
        raise ValueError(f"n_trunc={n_trunc} is too small: <n|Q^2|n> needs |{n + 1}> in the basis")
    mq = build_jacobi(qp, "Q", n_trunc)
    mp = build_jacobi(qp, "P", n_trunc)
    mean_q, mean_p = mq.diagonal()[n], mp.diagonal()[n]
    var_q = mq.square_diagonal()[n] - mean_q**2
    var_p = mp.square_diagonal()[n] - mean_p**2
    return Uncertainty(mean_q, mean_p, var_q, var_p)
