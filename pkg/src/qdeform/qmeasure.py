"""Jackson integrals, the q-Gamma function, coherent states and moment checks.

``N_q(x) = e_q(x)`` is the coherent-state normalization.  For real arguments it
is evaluated through its product form (``1/((1-q)x; q)_inf`` for q < 1 and
``(-(1-1/q)x; 1/q)_inf`` for q > 1), which is what keeps lattice points close
to ``R = 1/(1-q)`` usable; the series is used for complex arguments and as
an independent oracle.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from qdeform.config import DEFAULT_TOLERANCES, Tolerances
from qdeform.qcore import INF, ConvergenceError, QParam, Regime, q_bracket, q_exp_small, q_factorial, q_pochhammer

_EPS = np.finfo(float).eps


# -- the normalization function ----------------------------------------------


def n_q(qp: QParam, x, tol: Tolerances = DEFAULT_TOLERANCES):
    """``N_q(x) = sum x^n / [n]_q!``."""
    fq = qp.as_float()
    if isinstance(x, complex):
        return q_exp_small(fq, x, tol)
    x = float(x)
    if fq.is_classical:
        return math.exp(x)
    if fq.q < 1:
        if abs(x) >= fq.radius:
            raise ValueError(f"N_q({x}) diverges: |x| must stay below R = {fq.radius}")
        return 1.0 / q_pochhammer(fq, (1 - fq.q) * x, INF, tol)
    p = fq.inverse()
    return q_pochhammer(p, -(1 - p.q) * x, INF, tol)


def n_q_inv(qp: QParam, x, tol: Tolerances = DEFAULT_TOLERANCES):
    """``1/N_q(x)``; for q < 1 this is the entire function ``((1-q)x; q)_inf``."""
    fq = qp.as_float()
    if isinstance(x, complex):
        return 1.0 / q_exp_small(fq, x, tol)
    x = float(x)
    if fq.is_classical:
        return math.exp(-x)
    if fq.q < 1:
        return q_pochhammer(fq, (1 - fq.q) * x, INF, tol)
    value = n_q(fq, x, tol)
    if value == 0:
        raise ZeroDivisionError(f"N_q has a zero at x = {x}, so 1/N_q has a pole there")
    return 1.0 / value


def n_q_series(qp: QParam, x, tol: Tolerances = DEFAULT_TOLERANCES):
    """Direct summation of ``N_q``; the oracle for the product forms."""
    return q_exp_small(qp.as_float(), x, tol)


# -- lattice sums -----------------------------------------------------------


@dataclass
class LatticeSum:
    value: float
    terms: int
    tail: float  # magnitude of the last accepted increment


def _directional_sum(term, start: int, step: int, total_hint: float, tol: float, cap: int, direction: str):
    """Sum ``term(j)`` for ``j = start, start+step, ...`` until increments settle."""
    s, quiet, growing, prev, tail = 0.0, 0, 0, None, 0.0
    for count in range(1, cap + 1):
        inc = term(start + step * (count - 1))
        s += inc
        tail = abs(inc)
        if tail <= tol * max(abs(s + total_hint), 1e-300) or inc == 0:
            quiet += 1
            if quiet >= 3:
                return s, count, tail
        else:
            quiet = 0
        if prev is not None and tail > prev and tail > tol * abs(s + total_hint):
            growing += 1
            if growing >= 10:
                raise ConvergenceError(f"lattice sum diverges toward {direction}", direction=direction, terms=count)
        else:
            growing = 0
        prev = tail
    raise ConvergenceError(f"lattice sum toward {direction} did not settle in {cap} terms", direction=direction, terms=cap)


def jackson_sum(f, a: float, qp: QParam, tail_tol: float = DEFAULT_TOLERANCES.lattice, cap: int = DEFAULT_TOLERANCES.lattice_cap) -> LatticeSum:
    if not 0 < qp.q < 1:
        raise ValueError("the finite Jackson integral needs 0 < q < 1")
    q, a = float(qp.q), float(a)
    s, terms, tail = _directional_sum(lambda k: q**k * f(a * q**k), 0, 1, 0.0, tail_tol, cap, "x->0")
    return LatticeSum((1 - q) * a * s, terms, (1 - q) * abs(a) * tail)


def jackson_integral_finite(f, a, qp: QParam, tail_tol: float = DEFAULT_TOLERANCES.lattice) -> float:
    """``int_0^a f d_q x = (1-q) a sum_k q^k f(a q^k)``."""
    return jackson_sum(f, a, qp, tail_tol).value


def improper_lattice_sum(f, qp: QParam, tail_tol: float = DEFAULT_TOLERANCES.lattice, anchor: float | None = None, cap: int | None = None) -> LatticeSum:
    """Bilateral Jackson sum ``sum_j |1-q| x_j f(x_j)`` over ``x_j = anchor * q^j``, ``j`` in Z.

    The anchor defaults to 1 for q < 1 and to ``1/|1-q|`` for q > 1.  Every
    lattice point is counted once.
    """
    fq = qp.as_float()
    q = fq.q
    if q == 1:
        raise ValueError("no Jackson lattice at q = 1")
    if anchor is None:
        anchor = 1.0 if q < 1 else 1.0 / abs(1 - q)
    if cap is None:
        cap = DEFAULT_TOLERANCES.lattice_cap if q < 1 else DEFAULT_TOLERANCES.k_cut
    w = abs(1 - q)

    def term(j):
        x = anchor * q**j
        return w * x * f(x)

    small_dir, big_dir = (1, -1) if q < 1 else (-1, 1)
    s0, n0, t0 = _directional_sum(term, 0, small_dir, 0.0, tail_tol, cap, "x->0")
    s1, n1, t1 = _directional_sum(term, big_dir, big_dir, s0, tail_tol, cap, "x->inf")
    return LatticeSum(s0 + s1, n0 + n1, max(t0, t1))


def improper_q_integral(f, qp: QParam, tail_tol: float = DEFAULT_TOLERANCES.lattice, anchor: float | None = None) -> float:
    """``int_0^inf f d_q x`` on the bilateral geometric lattice."""
    return improper_lattice_sum(f, qp, tail_tol, anchor).value


# -- q-Gamma ------------------------------------------------------------------


def q_gamma(qp: QParam, s: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``(q;q)_inf / (q^s;q)_inf (1-q)^(1-s)`` for 0 < q < 1."""
    fq = qp.as_float()
    if not 0 < fq.q < 1:
        raise ValueError("the q-Gamma product formula needs 0 < q < 1")
    if s <= 0:
        raise ValueError("q_gamma needs s > 0")
    q = fq.q
    return q_pochhammer(fq, q, INF, tol) / q_pochhammer(fq, q**s, INF, tol) * (1 - q) ** (1 - s)


def q_gamma_integral(qp: QParam, n: int, tail_tol: float = DEFAULT_TOLERANCES.lattice) -> LatticeSum:
    """``int_0^R x^(n-1) N_q^-1(qx) d_q x`` with ``R = 1/(1-q)``, which should be ``Gamma_q(n)``."""
    fq = qp.as_float()
    return jackson_sum(lambda x: x ** (n - 1) * n_q_inv(fq, fq.q * x), fq.radius, fq, tail_tol)


# -- coherent states ----------------------------------------------------------


@dataclass(frozen=True)
class CoherentState:
    z: complex
    qp: QParam
    n_trunc: int
    norm_factor: float  # N_q(|z|^2)^(-1/2)
    amplitudes: tuple

    def norm_squared(self) -> float:
        return math.fsum(abs(c) ** 2 for c in self.amplitudes)

    def amplitude(self, n: int) -> complex:
        return self.amplitudes[n] if n < len(self.amplitudes) else 0.0

    def eigen_residual(self) -> float:
        """``max_n |sqrt([n+1]_q) c_(n+1) - z c_n|`` over stored amplitudes."""
        fq = self.qp.as_float()
        c = self.amplitudes
        return max((abs(math.sqrt(q_bracket(fq, n + 1)) * c[n + 1] - self.z * c[n]) for n in range(len(c) - 1)), default=0.0)

    def to_json(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "q": float(self.qp.q),
            "n_trunc": self.n_trunc,
            "norm_factor": self.norm_factor,
            "amplitudes": [[c.real, c.imag] for c in self.amplitudes],
        }


def coherent_domain_radius(qp: QParam) -> float:
    """Largest ``|z|`` for which ``N_q(|z|^2)`` converges: ``sqrt(R)`` for q < 1."""
    fq = qp.as_float()
    return math.sqrt(fq.radius) if fq.q < 1 else math.inf


def coherent_state(z, qp: QParam, n_trunc: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> CoherentState:
    """Barut-Girardello state ``N_q(|z|^2)^(-1/2) sum z^n / sqrt([n]_q!) |n>``.

    With ``n_trunc=None`` the basis grows until the next amplitude is below
    ``tol.series`` relative to the first, capped at ``tol.series_cap``.
    """
    z = complex(z)
    fq = qp.as_float()
    if fq.q < 1 and abs(z) >= coherent_domain_radius(fq):
        raise ValueError(f"|z| = {abs(z):.6g} lies outside the domain |z|^2 < R = {fq.radius:.6g}")
    x = abs(z) ** 2
    norm_factor = n_q(fq, x, tol) ** -0.5
    amps = [complex(norm_factor)]
    n = 0
    while True:
        if n_trunc is not None and n >= n_trunc:
            break
        nxt = amps[-1] * z / math.sqrt(q_bracket(fq, n + 1))
        if n_trunc is None:
            settled = abs(nxt) < tol.series * abs(amps[0]) and abs(nxt) <= abs(amps[-1])
            if settled or nxt == 0:
                break
            if n + 1 >= tol.series_cap:
                raise ConvergenceError("coherent-state amplitudes did not decay", terms=n + 1)
        amps.append(nxt)
        n += 1
    return CoherentState(z, fq, len(amps) - 1, norm_factor, tuple(amps))


@dataclass(frozen=True)
class Overlap:
    closed_form: complex
    direct: complex

    @property
    def value(self) -> complex:
        return self.closed_form

    @property
    def discrepancy(self) -> float:
        return abs(self.closed_form - self.direct)


def overlap(bra: CoherentState, ket: CoherentState, tol: Tolerances = DEFAULT_TOLERANCES) -> Overlap:
    """``<z'|z>`` by the closed form ``N(|z|^2)^-1/2 N(|z'|^2)^-1/2 N(z conj(z'))`` and by contraction."""
    if bra.qp != ket.qp:
        raise ValueError("coherent states were built with different q")
    closed = bra.norm_factor * ket.norm_factor * complex(n_q(ket.qp, ket.z * bra.z.conjugate(), tol))
    n = max(len(bra.amplitudes), len(ket.amplitudes))
    direct = sum((bra.amplitude(k).conjugate() * ket.amplitude(k) for k in range(n)), 0j)
    return Overlap(closed, direct)


def distance_squared(a: CoherentState, b: CoherentState) -> float:
    """``|| |z> - |z'> ||^2`` from amplitude differences."""
    n = max(len(a.amplitudes), len(b.amplitudes))
    return math.fsum(abs(a.amplitude(k) - b.amplitude(k)) ** 2 for k in range(n))


def continuity_sequence(z, qp: QParam, exponents=range(2, 7), direction: complex = 1.0) -> list:
    """``(|z - z'|, direct ||diff||^2, 2(1 - Re<z|z'>))`` for ``z' = z + direction * 10^-m``."""
    base = coherent_state(z, qp)
    rows = []
    for m in exponents:
        dz = complex(direction) * 10.0**-m
        other = coherent_state(complex(z) + dz, qp)
        ov = overlap(base, other)
        rows.append((abs(dz), distance_squared(base, other), 2.0 * (1.0 - ov.closed_form.real)))
    return rows


# -- measures and moment problems --------------------------------------------


def subcritical_density(qp: QParam, x: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Weight ``N_q(x)/N_q(qx)`` of the q < 1 measure, as the Pochhammer ratio.

    Singular at ``x = R``; points within ``10 eps`` of ``R`` are refused.
    """
    fq = qp.as_float()
    q = fq.q
    if abs(x - fq.radius) <= 10 * _EPS * fq.radius:
        raise ValueError("density is singular at x = R")
    return q_pochhammer(fq, q * (1 - q) * x, INF, tol) / q_pochhammer(fq, (1 - q) * x, INF, tol)


def display_density(qp: QParam, x: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``((1-q)x; q)_inf / (q(1-q)x; q)_inf``, the reciprocal of the working weight, kept for comparison."""
    fq = qp.as_float()
    q = fq.q
    return q_pochhammer(fq, (1 - q) * x, INF, tol) / q_pochhammer(fq, q * (1 - q) * x, INF, tol)


def density_positive_on_lattice(qp: QParam, n_points: int = 200) -> bool:
    """Sample the density on ``x_j = R q^j``, skipping the singular endpoint with a warning."""
    fq = qp.as_float()
    warnings.warn("lattice point x = R skipped: the q < 1 density is singular there", stacklevel=2)
    return all(subcritical_density(fq, fq.radius * fq.q**j) > 0 for j in range(1, n_points))


@dataclass
class MomentRow:
    n: int
    target: float
    computed: float
    rel_error: float
    terms_used: int
    status: str
    detail: dict = field(default_factory=dict)


@dataclass
class MomentReport:
    qp: QParam
    rows: list
    tolerance: float

    @property
    def ok(self) -> bool:
        return all(r.status == "pass" for r in self.rows)

    @property
    def inconclusive(self) -> bool:
        return any(r.status == "inconclusive" for r in self.rows)

    @property
    def worst(self) -> float:
        return max((r.rel_error for r in self.rows), default=0.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "target", "computed", "rel_error", "terms_used"])
        for r in self.rows:
            w.writerow([r.n, f"{r.target:.17g}", f"{r.computed:.17g}", f"{r.rel_error:.3e}", r.terms_used])
        return buf.getvalue()


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def resolve_identity_subcritical(qp: QParam, n_max: int, tail_tol: float = DEFAULT_TOLERANCES.lattice, rel_tol: float = 1e-8) -> MomentReport:
    """Radial moments ``int_0^R x^n w(x) N_q^-1(x) d_q x`` against ``[n]_q!``.

    ``w(x) N_q^-1(x)`` collapses to ``N_q^-1(qx)``, finite at ``x = R`` where the
    two factors are separately singular and zero.  The reciprocal Pochhammer
    ratio is evaluated alongside as ``detail["display_rel_error"]``.
    """
    fq = qp.as_float()
    if not 0 < fq.q < 1:
        raise ValueError("sub-critical moments need 0 < q < 1")
    R, q = fq.radius, fq.q
    rows = []
    for n in range(n_max + 1):
        target = float(q_factorial(fq, n))
        res = jackson_sum(lambda x: x**n * n_q_inv(fq, q * x), R, fq, tail_tol)
        shown = jackson_sum(lambda x: x**n * display_density(fq, x) * n_q_inv(fq, x), R, fq, tail_tol)
        err = _rel(res.value, target)
        rows.append(
            MomentRow(n, target, res.value, err, res.terms, "pass" if err <= rel_tol else "fail", {"display_rel_error": _rel(shown.value, target)})
        )
    return MomentReport(fq, rows, rel_tol)


def two_family_lattice_sum(qp: QParam, n: int, k_cut: int = DEFAULT_TOLERANCES.k_cut) -> float:
    """The q > 1 moment sum with both atom families ``q^k/|1-q|`` and ``q^(1-k)/|1-q|`` taken literally.

    The families share the atoms at ``k = 0, 1``, so this differs from the
    bilateral lattice by those two terms.
    """
    fq = qp.as_float()
    q = fq.q
    c = 1.0 / abs(1 - q)
    total = 0.0
    for k in range(k_cut + 1):
        x1, x2 = q**k * c, q ** (1 - k) * c
        inc = q**k * x1**n * n_q_inv(fq, q * x1) + q ** (1 - k) * x2**n * n_q_inv(fq, q * x2)
        total += inc
        if k > 1 and abs(inc) <= DEFAULT_TOLERANCES.lattice * abs(total):
            break
    return total


def resolve_identity_supercritical(qp: QParam, n_max: int, k_cut: int = DEFAULT_TOLERANCES.k_cut, tail_tol: float = DEFAULT_TOLERANCES.lattice, rel_tol: float = 1e-7) -> MomentReport:
    """Stieltjes moments of the lattice measure: ``sum_j q^j x_j^n N_q^-1(q x_j)``, ``x_j = q^j/|1-q|``."""
    fq = qp.as_float()
    if not fq.q > 1:
        raise ValueError("super-critical moments need q > 1")
    q = fq.q
    rows = []
    for n in range(n_max + 1):
        target = float(q_factorial(fq, n))
        try:
            res = improper_lattice_sum(lambda x: x**n * n_q_inv(fq, q * x), fq, tail_tol, cap=k_cut)
        except ConvergenceError as exc:
            rows.append(MomentRow(n, target, float("nan"), float("inf"), exc.terms or k_cut, "inconclusive", {"direction": exc.direction}))
            continue
        err = _rel(res.value, target)
        detail = {"two_family_sum": two_family_lattice_sum(fq, n, k_cut)}
        detail["two_family_rel_error"] = _rel(detail["two_family_sum"], target)
        detail["tail"] = res.tail
        rows.append(MomentRow(n, target, res.value, err, res.terms, "pass" if err <= rel_tol else "fail", detail))
    return MomentReport(fq, rows, rel_tol)


def angular_offdiagonal(n: int, m: int, x: float, n_theta: int = 64) -> float:
    """``|int_0^2pi z^n conj(z)^m dtheta/2pi|`` at ``|z|^2 = x`` by the trapezoidal rule."""
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    z = math.sqrt(x) * np.exp(1j * theta)
    return float(abs(np.mean(z**n * np.conj(z) ** m)))


@dataclass
class LeibnizReport:
    qp: QParam
    points: list
    inverse_residuals: list
    derivative_residuals: list
    tolerance: float

    @property
    def ok(self) -> bool:
        return max(self.inverse_residuals + self.derivative_residuals, default=0.0) <= self.tolerance


def leibniz_residuals(qp: QParam, xs, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple:
    """Residuals of ``[d/dx]_q N^-1(x) = -N^-1(qx)`` and ``[d/dx]_q N(x) = N(x)`` at ``xs``.

    Each rule is checked undivided, ``f(x) - f(qx) = (1-q) x g(x)``, relative
    to ``|f(x)| + |f(qx)|``: dividing by ``(1-q) x`` would amplify rounding
    by ``1/x`` near the origin.  Both use the series for ``N_q`` so that they
    test it rather than the product form.
    """
    fq = qp.as_float()
    q = fq.q
    inv, der = [], []
    for x in xs:
        nx, nqx = n_q_series(fq, x, tol), n_q_series(fq, q * x, tol)
        step = (1 - q) * x
        inv.append(abs((1 / nx - 1 / nqx) + step / nqx) / (abs(1 / nx) + abs(1 / nqx)))
        der.append(abs((nx - nqx) - step * nx) / (abs(nx) + abs(nqx)))
    return inv, der


def leibniz_derivative_check(qp: QParam, n_max: int, tolerance: float = 1e-10) -> LeibnizReport:
    """The two q-derivative rules on the lattice ``x = R q^j``, ``j = 1..n_max``."""
    fq = qp.as_float()
    if not 0 < fq.q < 1:
        raise ValueError("the Leibniz check runs for 0 < q < 1")
    xs = [fq.radius * fq.q**j for j in range(1, n_max + 1)]
    inv, der = leibniz_residuals(fq, xs)
    return LeibnizReport(fq, xs, inv, der, tolerance)


__all__ = [
    "CoherentState",
    "LatticeSum",
    "MomentReport",
    "Overlap",
    "Regime",
    "angular_offdiagonal",
    "coherent_domain_radius",
    "coherent_state",
    "continuity_sequence",
    "density_positive_on_lattice",
    "display_density",
    "distance_squared",
    "improper_lattice_sum",
    "improper_q_integral",
    "jackson_integral_finite",
    "jackson_sum",
    "leibniz_derivative_check",
    "leibniz_residuals",
    "n_q",
    "n_q_inv",
    "n_q_series",
    "overlap",
    "q_gamma",
    "q_gamma_integral",
    "resolve_identity_subcritical",
    "resolve_identity_supercritical",
    "subcritical_density",
    "two_family_lattice_sum",
]
