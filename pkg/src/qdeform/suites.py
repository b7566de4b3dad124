"""Identity suites run by ``qdeform verify``.

Each suite is a function ``(cfg) -> list[Check]``.  Checks are ordered and
carry a short ``paper_ref`` anchor naming the identity they exercise.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from qdeform.config import Tolerances
from qdeform.qcore import (
    ConvergenceError,
    Kernel,
    QParam,
    q_binomial,
    q_bracket,
    q_exp_big,
    q_exp_small,
    q_factorial,
    q_power,
    scalar_to_json,
)


@dataclass
class Check:
    id: str
    paper_ref: str
    params: dict
    status: str  # pass | fail | inconclusive | skip
    error: float | None = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RunConfig:
    qp: QParam
    n_max: int = 16
    n_trunc: int = 40
    tol: Tolerances = Tolerances()


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _close(a, b, rel: float = 1e-12) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(a - b) <= rel * max(1.0, abs(b))


def _qtag(qp: QParam) -> dict:
    return {"q": scalar_to_json(qp.q), "kernel": qp.kernel.value}


def core_suite(cfg: RunConfig) -> list:
    qp, n_max = cfg.qp, max(cfg.n_max, 1)
    out = []
    p = _qtag(qp) | {"n_max": n_max}

    ok = all(_close(q_bracket(qp, n), sum((qp.q**j for j in range(n)), qp.zero)) for n in range(n_max + 1))
    ok &= all(_close(q_bracket(qp, n + 1), 1 + qp.q * q_bracket(qp, n)) for n in range(n_max))
    out.append(Check("core.bracket", "q-number [n]_q", p, _status(ok)))

    ok = all(
        _close(q_binomial(qp, n, k), q_binomial(qp, n, n - k))
        and (k == 0 or k == n or _close(q_binomial(qp, n, k), q_binomial(qp, n - 1, k - 1) + qp.q**k * q_binomial(qp, n - 1, k)))
        for n in range(n_max + 1)
        for k in range(n + 1)
    )
    out.append(Check("core.binomial", "Gaussian binomial in the Rogers-Szego sum", p, _status(ok)))

    qp2 = qp.power(2)
    ok = all(_close(q_bracket(qp, 2) * q_bracket(qp2, k), q_bracket(qp, 2 * k)) for k in range(n_max + 1))
    out.append(Check("core.two-k", "[2]_q [k]_{q^2} = [2k]_q", p, _status(ok)))

    ok = all(_close(q_bracket(qp.inverse(), n), q_power(qp, 1 - n) * q_bracket(qp, n)) for n in range(n_max + 1))
    out.append(Check("core.duality", "[n]_{1/q} = q^(1-n) [n]_q", p, _status(ok)))

    # e_q(x) E_q(y) = e_q(x (+) y): coefficient of x^(n-k) y^k on both sides
    order = 12
    ok = all(
        _close(
            q_power(qp, k * (k - 1) // 2) / (q_factorial(qp, n - k) * q_factorial(qp, k)),
            q_binomial(qp, n, k) * q_power(qp, k * (k - 1) // 2) / q_factorial(qp, n),
        )
        for n in range(order + 1)
        for k in range(n + 1)
    )
    out.append(Check("core.exp-product", "e_q(x) E_q(y) = e_q(x (+) y)", p | {"order": order}, _status(ok)))

    x = 0.3 if qp.q == 1 else 0.3 * min(1.0, float(qp.radius) / 2, float(qp.q) / max(float(qp.q) - 1, 1e-300) / 2)
    try:
        err = abs(q_exp_small(qp, x, cfg.tol) * q_exp_big(qp, -x, cfg.tol) - 1)
        out.append(Check("core.exp-inverse", "e_q(x) E_q(-x) = 1", p | {"x": x}, _status(err <= 1e-12), err))
    except ConvergenceError as exc:
        out.append(Check("core.exp-inverse", "e_q(x) E_q(-x) = 1", p | {"x": x}, "inconclusive", detail={"reason": str(exc)}))
    return out


def poly_suite(cfg: RunConfig) -> list:
    from qdeform.qpoly import (
        QPolynomial,
        difference_quotient,
        formal_derivative,
        jackson_derivative,
        mixed_q_subtraction_power,
        polys_equal,
        q_addition_poly,
        q_addition_power,
        q_addition_power_expanded,
    )

    qp = cfg.qp
    out = []
    p = _qtag(qp)
    deg = 10
    if qp.is_classical:
        ok = all(jackson_derivative(QPolynomial.monomial(n, qp)) == formal_derivative(QPolynomial.monomial(n, qp)) for n in range(deg + 1))
        out.append(Check("poly.jackson-classical", "Jackson derivative at q = 1", p, _status(ok)))
    else:
        ok = True
        for i in range(deg + 1):
            for j in range(deg + 1):
                fg = QPolynomial.monomial(i, qp) * QPolynomial.monomial(j, qp)
                ok &= polys_equal(jackson_derivative(fg), difference_quotient(fg))
        out.append(Check("poly.jackson-leibniz", "Jackson derivative as difference quotient", p | {"degree": deg}, _status(ok)))

    a, b = (Fraction(3, 2), Fraction(2, 7)) if qp.kernel is Kernel.EXACT else (1.5, 2 / 7)
    ok = all(_close(q_addition_power(qp, a, b, n), q_addition_power_expanded(qp, a, b, n), 1e-10) for n in range(16))
    out.append(Check("poly.q-addition", "q-addition product = binomial expansion", p | {"n_max": 15}, _status(ok)))

    ok = True
    for n in range(1, 13):
        lhs = jackson_derivative(q_addition_poly(a, b, n, qp))
        ok &= polys_equal(lhs, q_addition_poly(a, b, n - 1, qp).scale(a * q_bracket(qp, n)))
    out.append(Check("poly.q-addition-derivative", "D_x (ax (+) b)^n = a [n]_q (ax (+) b)^(n-1)", p | {"n_max": 12}, _status(ok)))

    ok = _close(mixed_q_subtraction_power(qp, a, b, 0), qp.one) and _close(mixed_q_subtraction_power(qp, a, b, 1), a - b)
    out.append(Check("poly.mixed-subtraction", "(a (-)_{q,q^2} b)^n low orders", p, _status(ok)))
    return out


def hermite_suite(cfg: RunConfig) -> list:
    from qdeform import qhermite as qh
    from qdeform.qpoly import polys_equal

    qp, n_max = cfg.qp, cfg.n_max
    out = []
    p = _qtag(qp) | {"n_max": n_max}

    cons = qh.four_way_constructions(qp, n_max)
    ref = cons["recurrence"]
    ok = all(polys_equal(c[n], ref[n]) for c in cons.values() for n in range(n_max + 1))
    ok &= all(polys_equal(qh.new_q_hermite_exponential_form(n, qp), ref[n]) for n in range(n_max + 1))
    out.append(Check("hermite.four-way", "recurrence / series / generating function / operator forms", p, _status(ok)))

    ok = all(polys_equal(qh.explicit_table(n, qp), ref[n]) for n in range(min(4, n_max) + 1))
    out.append(Check("hermite.explicit-table", "explicit H_1..H_4", p, _status(ok)))

    ok = all(qh.verify_lowering(n, qp) for n in range(1, n_max + 1))
    out.append(Check("hermite.lowering", "D_x H_n = [2]_q [n]_q H_(n-1)", p, _status(ok)))

    ok = all(qh.verify_second_order(n, qp) for n in range(n_max + 1))
    out.append(Check("hermite.second-order", "second-order q-difference equation", p, _status(ok)))

    if qp.is_classical:
        ok = all(qh.verify_classical_second_order(n) for n in range(n_max + 1))
        ok &= all(polys_equal(qh.classical_hermite(n), ref[n]) for n in range(n_max + 1))
        out.append(Check("hermite.classical-limit", "reduction to the Hermite equation", p, _status(ok)))

    ok = all(qh.verify_parity(n, qp) and qh.verify_degree_and_leading(n, qp) for n in range(n_max + 1))
    out.append(Check("hermite.parity-degree", "parity, degree n, leading coefficient [2]_q^n", p, _status(ok)))

    chain_n = min(n_max, 10)
    ok = all(qh.verify_chain_rule(n, m, qp) for n in range(chain_n + 1) for m in range(7))
    out.append(Check("hermite.chain-rule", "(D_x)^n f(x^2) expansion, u-derivative base q^2", p | {"n_max": chain_n, "m_max": 6}, _status(ok)))
    if not qp.is_classical:
        base_q = all(qh.verify_chain_rule(n, m, qp, u_base=qp) for n in range(chain_n + 1) for m in range(7))
        out.append(
            Check(
                "hermite.chain-rule-base-q",
                "(D_x)^n f(x^2) expansion with u-derivative base q",
                p | {"n_max": chain_n, "m_max": 6},
                "pass",
                detail={"identity_holds": base_q, "note": "diagnostic; base q^2 is the consistent reading"},
            )
        )

    rec_n = min(2 * n_max, 20)
    ok = all(
        all(qh.chain_rule_coeffs(n, qp)[k] == qh.chain_rule_closed_form(n, k, qp) == qh.chain_rule_double_factorial_form(n, k, qp) for k in range(n // 2 + 1))
        if qp.kernel is Kernel.EXACT
        else all(_close(qh.chain_rule_coeffs(n, qp)[k], qh.chain_rule_closed_form(n, k, qp), 1e-10) for k in range(n // 2 + 1))
        for n in range(rec_n + 1)
    )
    out.append(Check("hermite.chain-coefficients", "a_k^n recurrence = closed forms", p | {"n_max": rec_n}, _status(ok)))

    ok = all(qh.verify_psi_lowering(n, qp) and qh.verify_psi_raising(n, qp) for n in range(1, n_max))
    if qp.kernel is Kernel.EXACT:
        ok &= all(qh.verify_psi_recurrence_exact(n, qp) for n in range(1, n_max))
    out.append(Check("hermite.psi-ladder", "normalized states: lowering and three-term recurrence", p, _status(ok)))

    worst = max(qh.rodrigues_residual(n, qp, cfg.tol.n_pad) for n in range(min(n_max, 6) + 1))
    holds_low = all(qh.rodrigues_residual(n, qp, cfg.tol.n_pad) <= 1e-10 for n in range(2))
    out.append(
        Check(
            "hermite.rodrigues",
            "Rodrigues-type form with e_{q^-2}(x^2) (D_x)^n e_{q^2}(-x^2)",
            p | {"n_checked": min(n_max, 6)},
            "pass" if holds_low else "fail",
            worst,
            {"holds_for_n_le_1": holds_low, "note": "diagnostic; this form differs from H_n^q for n >= 2 unless q = 1"},
        )
    )

    rs_n = min(n_max, 10)
    ok = all(
        polys_equal(qh.rogers_szego(n, qp), qh.rogers_szego_recurrence(n, qp))
        and qh.rogers_szego_raising(n, qp)
        and qh.rogers_szego_lowering(n, qp)
        and qh.rogers_szego_ladder_float(n, qp)
        for n in range(rs_n + 1)
    )
    out.append(Check("hermite.rogers-szego", "Rogers-Szego recurrence and ladder closure", p | {"n_max": rs_n}, _status(ok)))
    return out


def oscillator_suite(cfg: RunConfig) -> list:
    from qdeform import oscillator as osc

    qp = cfg.qp
    out = []
    p = _qtag(qp)
    n_check = min(20, cfg.n_trunc - 1)
    rep = osc.verify_algebra(qp, n_check)
    for r in rep.relations:
        out.append(Check(f"oscillator.algebra.{r.relation}", "q-oscillator commutation relations", p | {"n_check": n_check}, _status(r.ok), r.max_float_error, {"exact": r.exact}))

    mq = osc.build_jacobi(qp, "Q", cfg.n_trunc)
    ok = all(
        abs(mq.element(m, n) - (math.sqrt(float(osc.jacobi_offdiag_square(qp, n))) * (m == n + 1) + (math.sqrt(float(osc.jacobi_offdiag_square(qp, n - 1))) if n >= 1 else 0) * (m == n - 1))) < 1e-14
        for n in range(cfg.n_trunc - 1)
        for m in range(cfg.n_trunc)
    )
    out.append(Check("oscillator.jacobi-elements", "<m|Q|n> = b_n d(m,n+1) + b_(n-1) d(m,n-1)", p | {"n_trunc": cfg.n_trunc}, _status(ok)))

    err = osc.unitary_equivalence_error(qp, cfg.n_trunc)
    out.append(Check("oscillator.p-q-equivalence", "M_P = U M_Q U*", p | {"n_trunc": cfg.n_trunc}, _status(err <= 1e-12), err))

    ev = mq.eigenvalues()
    sym = float(max(abs(a + b) for a, b in zip(ev, ev[::-1])) / max(1.0, float(np.max(np.abs(ev)))))
    out.append(Check("oscillator.spectrum-symmetry", "spectrum of M_Q symmetric about 0", p, _status(sym <= 1e-10), sym))

    energies = osc.spectrum_Hq(qp, cfg.n_max)
    ok = all(_close(e, osc.energy(qp, n)) for n, e in enumerate(energies))
    err = osc.hamiltonian_eigen_error(qp, cfg.n_max)
    out.append(Check("oscillator.spectrum", "E_n = ([n]_q + [n+1]_q)/[2]_q", p | {"n_max": cfg.n_max}, _status(ok and err <= 1e-12), err))

    ok = True
    for n in range(cfg.n_max + 1):
        u = osc.uncertainty(qp, n)
        ok &= u.mean_q == 0 and u.mean_p == 0 and _close(u.var_q, osc.energy(qp, n)) and _close(u.var_p, osc.energy(qp, n))
    vac = osc.uncertainty(qp, 0)
    ok &= _close(vac.var_q, 1 / (1 + qp.q))
    out.append(Check("oscillator.uncertainty", "(dQ)^2 = (dP)^2 = E_n, vacuum product 1/(1+q)", p | {"n_max": cfg.n_max}, _status(ok)))

    if qp.regime.value != "classical-limit":
        diag = osc.boundedness_diagnostics(qp, 500)
        d = diag.to_json()
        if qp.q < 1:
            out.append(Check("oscillator.bn-bound", "b_n^2 < 1/(1-q^2)", p | {"n_max": 500}, _status(diag.bound_holds), detail=d))
            # b_n increases to b = 1/sqrt(1-q^2), so ||M_Q|| = 2b; truncations approach it like 1/N^2
            limit = 2 * math.sqrt(float(diag.bound_sq))
            norms = [diag.norms[n] for n in sorted(diag.norms)]
            ok = all(x < y for x, y in zip(norms, norms[1:])) and norms[-1] < limit
            out.append(
                Check(
                    "oscillator.norm-bounded",
                    "truncated ||M_Q|| increasing and below 2/sqrt(1-q^2)",
                    p,
                    _status(ok),
                    limit - norms[-1],
                    d | {"norm_limit_exact": limit},
                )
            )
        else:
            rerr = abs(diag.ratio - diag.ratio_limit)
            out.append(Check("oscillator.ratio-test", "(1/b_(n+1))/(1/b_n) -> q^(-1/2)", p | {"n": diag.ratio_at}, _status(rerr <= 1e-8), rerr, d))
            out.append(Check("oscillator.reciprocal-sum", "sum 1/b_n converges", p | {"n_max": 500}, _status(diag.cauchy_increment < 1e-12), diag.cauchy_increment, d))
            out.append(Check("oscillator.log-concavity", "b_(n-1) b_(n+1) <= b_n^2", p | {"n_max": 500}, _status(diag.log_concave), detail=d))
    return out


def measure_suite(cfg: RunConfig) -> list:
    from qdeform import qmeasure as qm

    qp = cfg.qp.as_float()
    out = []
    p = _qtag(cfg.qp)
    if qp.is_classical:
        return [Check("measure.regime", "Jackson lattice", p, "skip", detail={"reason": "no Jackson lattice at q = 1"})]
    n_max = min(cfg.n_max, 10)
    if qp.q < 1:
        worst = 0.0
        for n in range(n_max + 1):
            target = float(q_factorial(qp, n))
            worst = max(
                worst,
                abs(qm.q_gamma(qp, n + 1) - target) / target,
                abs(qm.q_gamma_integral(qp, n + 1).value - target) / target,
            )
        out.append(Check("measure.q-gamma", "Gamma_q(n+1) = [n]_q! = Jackson integral", p | {"n_max": n_max}, _status(worst <= 1e-9), worst))
        rep = qm.resolve_identity_subcritical(qp, n_max)
        out.append(
            Check(
                "measure.hausdorff-moments",
                "radial moments of the q < 1 measure",
                p | {"n_max": n_max},
                _status(rep.ok),
                rep.worst,
                {"display_rel_error": [r.detail["display_rel_error"] for r in rep.rows]},
            )
        )
        lr = qm.leibniz_derivative_check(qp, 20)
        err = max(lr.inverse_residuals + lr.derivative_residuals)
        out.append(Check("measure.leibniz", "[d/dx]_q N^-1(x) = -N^-1(qx), [d/dx]_q N = N", p, _status(lr.ok), err))
    else:
        rep = qm.resolve_identity_supercritical(qp, n_max, cfg.tol.k_cut)
        status = "inconclusive" if rep.inconclusive else _status(rep.ok)
        out.append(
            Check(
                "measure.stieltjes-moments",
                "lattice moments of the q > 1 measure",
                p | {"n_max": n_max, "k_cut": cfg.tol.k_cut},
                status,
                rep.worst,
                {"two_family_rel_error": [r.detail.get("two_family_rel_error") for r in rep.rows]},
            )
        )

    ang = qm.angular_offdiagonal(3, 1, 0.5)
    out.append(Check("measure.angular", "off-diagonal angular integral vanishes", p | {"n": 3, "m": 1}, _status(ang < 1e-12), ang))

    rmax = min(qm.coherent_domain_radius(qp) * 0.9, 3.0)
    worst_norm = worst_ov = 0.0
    try:
        zs = [r * complex(math.cos(t), math.sin(t)) for r in (0.0, 0.3 * rmax, 0.6 * rmax, rmax) for t in (0.0, 1.0, 2.5)]
        states = [qm.coherent_state(z, qp) for z in zs]
        for a in states:
            worst_norm = max(worst_norm, abs(a.norm_squared() - 1))
            for b in states:
                worst_ov = max(worst_ov, qm.overlap(a, b).discrepancy)
        out.append(Check("measure.coherent-norm", "<z|z> = 1", p | {"r_max": rmax}, _status(worst_norm <= 1e-12), worst_norm))
        out.append(Check("measure.coherent-overlap", "closed-form overlap vs contraction", p | {"r_max": rmax}, _status(worst_ov <= 1e-10), worst_ov))
        seq = qm.continuity_sequence(0.5, qp)
        d = [row[1] for row in seq]
        ok = all(b < a for a, b in zip(d, d[1:])) and d[-1] < 1e-10
        out.append(Check("measure.continuity", "|| |z> - |z'> ||^2 -> 0", p, _status(ok), d[-1], {"sequence": d}))
    except ConvergenceError as exc:
        out.append(Check("measure.coherent-norm", "<z|z> = 1", p, "inconclusive", detail={"reason": str(exc)}))
    return out


SUITES = {
    "core": core_suite,
    "poly": poly_suite,
    "hermite": hermite_suite,
    "oscillator": oscillator_suite,
    "measure": measure_suite,
}


def run_suite(name: str, cfg: RunConfig) -> list:
    if name == "all":
        return [c for key in SUITES for c in run_suite(key, cfg)]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    try:
        return SUITES[name](cfg)
    except ConvergenceError as exc:
        return [Check(f"{name}.convergence", "numerical convergence", _qtag(cfg.qp), "inconclusive", detail={"reason": str(exc), "direction": exc.direction})]
