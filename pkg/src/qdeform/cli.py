"""``qdeform`` command line: ``verify <suite>`` and ``table <what>``.

Exit codes: 0 all checks pass, 1 an identity failed, 2 configuration error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import fields
from fractions import Fraction

from qdeform.config import DEFAULT_TOLERANCES, Tolerances
from qdeform.qcore import ConvergenceError, Kernel, QParam, parse_rational, scalar_to_json

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NONCONVERGENCE = 0, 1, 2, 3

SUITE_NAMES = ("core", "poly", "hermite", "oscillator", "measure", "all")
TABLE_NAMES = ("hermite-coeffs", "spectrum", "bn", "moments", "coherent-amplitudes", "jacobi-eigenvalues")


class ConfigError(ValueError):
    pass


def parse_q(text: str, kernel: str, allow_decimal: bool) -> QParam:
    """Build the deformation parameter.

    ``p/q`` and integers are exact.  A decimal is refused unless
    ``allow_decimal`` is set, in which case it is converted to the rational it
    denotes (``0.5`` becomes ``1/2``).  The float kernel accepts anything
    ``float()`` does.
    """
    try:
        if kernel == Kernel.FLOAT.value:
            value = float(Fraction(text)) if "/" in text else float(text)
            return QParam(value, Kernel.FLOAT)
        try:
            value = parse_rational(text)
        except ValueError:
            if not allow_decimal:
                raise
            value = Fraction(text.strip())
        return QParam(value, Kernel.EXACT)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid --q {text!r} for kernel {kernel}: {exc}") from None


def build_tolerances(args: argparse.Namespace) -> Tolerances:
    overrides = {f.name: getattr(args, f"tol_{f.name}") for f in fields(Tolerances) if getattr(args, f"tol_{f.name}") is not None}
    try:
        return DEFAULT_TOLERANCES.with_overrides(**overrides)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid tolerance: {exc}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", default="1/2", help="deformation parameter, e.g. 1/2 or 3/2 (default 1/2)")
    p.add_argument("--kernel", choices=[k.value for k in Kernel], default=Kernel.EXACT.value)
    p.add_argument("--decimal-to-rational", action="store_true", help="accept a decimal --q in the exact kernel")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--N-trunc", dest="n_trunc", type=int, default=40, help="Fock-space truncation")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    for f in fields(Tolerances):
        p.add_argument(f"--tol.{f.name}", dest=f"tol_{f.name}", default=None, metavar="VALUE", help=f"override tolerance {f.name} (default {f.default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdeform", description="Verify and tabulate the q-Hermite / q-oscillator toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run an identity suite and write a JSON report")
    v.add_argument("suite", choices=SUITE_NAMES)
    _add_common(v)
    t = sub.add_parser("table", help="emit a table for plotting")
    t.add_argument("what", choices=TABLE_NAMES)
    t.add_argument("--long", action="store_true", help="hermite-coeffs: long n,k,coeff layout")
    t.add_argument("--z", default="0.5", help="coherent-amplitudes: complex label, e.g. 0.5+0.2j")
    _add_common(t)
    return parser


# -- verify ---------------------------------------------------------------------


def exit_code(checks) -> int:
    statuses = {c.status for c in checks}
    if "fail" in statuses:
        return EXIT_FAIL
    if "inconclusive" in statuses:
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def report_json(suite: str, checks) -> dict:
    return {"suite": suite, "checks": [c.to_json() for c in checks]}


def report_csv(checks) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "paper_ref", "status", "error"])
    for c in checks:
        w.writerow([c.id, c.paper_ref, c.status, "" if c.error is None else f"{c.error:.3e}"])
    return buf.getvalue()


def cmd_verify(args, qp: QParam, tol: Tolerances) -> tuple:
    from qdeform.suites import RunConfig, run_suite

    cfg = RunConfig(qp, n_max=16 if args.n_max is None else args.n_max, n_trunc=args.n_trunc, tol=tol)
    checks = run_suite(args.suite, cfg)
    if args.format == "csv":
        text = report_csv(checks)
    else:
        text = json.dumps(report_json(args.suite, checks), indent=2, default=_json_default) + "\n"
    return text, exit_code(checks)


def _json_default(obj):
    if isinstance(obj, (Fraction, complex)):
        return scalar_to_json(obj)
    if hasattr(obj, "value"):
        return obj.value
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- tables -----------------------------------------------------------------------


def _scalar(v) -> str:
    s = scalar_to_json(v)
    return s if isinstance(s, str) else f"{float(s):.17g}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def table_hermite(args, qp: QParam, n_max: int) -> str:
    from qdeform.qhermite import new_q_hermite_recurrence
    from qdeform.qpoly import polys_to_csv

    polys = [new_q_hermite_recurrence(n, qp) for n in range(n_max + 1)]
    if args.format == "json":
        return json.dumps([dict(p.to_json(), n=n) for n, p in enumerate(polys)], indent=2) + "\n"
    if args.long:
        return polys_to_csv(polys)
    rows = [[n] + [_scalar(p.coeff(k)) for k in range(n_max + 1)] for n, p in enumerate(polys)]
    return _csv(["n"] + [f"c{k}" for k in range(n_max + 1)], rows)


def table_spectrum(args, qp: QParam, n_max: int) -> str:
    from qdeform.oscillator import spectrum_Hq

    energies = spectrum_Hq(qp, n_max)
    if args.format == "json":
        return json.dumps({"q": scalar_to_json(qp.q), "kernel": qp.kernel.value, "E": [scalar_to_json(e) for e in energies]}, indent=2) + "\n"
    return _csv(["n", "E_n"], [[n, _scalar(e)] for n, e in enumerate(energies)])


def table_bn(args, qp: QParam, n_max: int) -> str:
    from qdeform.oscillator import boundedness_diagnostics, jacobi_offdiag_square

    if args.format == "json":
        rep = boundedness_diagnostics(qp, max(n_max, 10), truncations=(50, 100, 200))
        return json.dumps(rep.to_json(), indent=2) + "\n"
    rows = []
    for n in range(n_max + 1):
        sq = jacobi_offdiag_square(qp, n)
        rows.append([n, _scalar(sq), f"{math.sqrt(float(sq)):.17g}"])
    return _csv(["n", "b_n_squared", "b_n"], rows)


def table_moments(args, qp: QParam, n_max: int, tol: Tolerances) -> str:
    from qdeform import qmeasure as qm

    fq = qp.as_float()
    if fq.q == 1:
        raise ConfigError("moment tables need q != 1")
    if fq.q < 1:
        rep = qm.resolve_identity_subcritical(fq, n_max, tol.lattice)
    else:
        rep = qm.resolve_identity_supercritical(fq, n_max, tol.k_cut, tol.lattice)
    if args.format == "json":
        rows = [{"n": r.n, "target": r.target, "computed": r.computed, "rel_error": r.rel_error, "terms_used": r.terms_used, "status": r.status, "detail": r.detail} for r in rep.rows]
        return json.dumps({"q": float(fq.q), "rows": rows}, indent=2, default=_json_default) + "\n"
    return rep.to_csv()


def table_coherent(args, qp: QParam, n_max: int | None, tol: Tolerances) -> str:
    from qdeform.qmeasure import coherent_state

    try:
        z = complex(args.z.replace(" ", ""))
    except ValueError:
        raise ConfigError(f"invalid --z {args.z!r}") from None
    try:
        state = coherent_state(z, qp, n_max, tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.format == "csv":
        return _csv(["n", "re", "im"], [[n, f"{c.real:.17g}", f"{c.imag:.17g}"] for n, c in enumerate(state.amplitudes)])
    return json.dumps(state.to_json(), indent=2) + "\n"


def table_jacobi(args, qp: QParam, n_trunc: int) -> str:
    from qdeform.oscillator import build_jacobi

    ev = build_jacobi(qp, "Q", n_trunc).eigenvalues()
    if args.format == "json":
        return json.dumps({"q": scalar_to_json(qp.q), "N_trunc": n_trunc, "eigenvalues": [float(e) for e in ev]}, indent=2) + "\n"
    return _csv(["N_trunc", "index", "eigenvalue"], [[n_trunc, i, f"{e:.17g}"] for i, e in enumerate(ev)])


def cmd_table(args, qp: QParam, tol: Tolerances) -> str:
    n_max = 10 if args.n_max is None else args.n_max
    if args.what == "hermite-coeffs":
        return table_hermite(args, qp, n_max)
    if args.what == "spectrum":
        return table_spectrum(args, qp, n_max)
    if args.what == "bn":
        return table_bn(args, qp, n_max)
    if args.what == "moments":
        return table_moments(args, qp, n_max, tol)
    if args.what == "coherent-amplitudes":
        return table_coherent(args, qp, args.n_max, tol)
    return table_jacobi(args, qp, args.n_trunc)


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc.strerror}") from None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.n_max is not None and args.n_max < 0:
            raise ConfigError("--n-max must be >= 0")
        if args.n_trunc < 2:
            raise ConfigError("--N-trunc must be >= 2")
        qp = parse_q(args.q, args.kernel, args.decimal_to_rational)
        tol = build_tolerances(args)
        if args.command == "verify":
            text, code = cmd_verify(args, qp, tol)
        else:
            text, code = cmd_table(args, qp, tol), EXIT_OK
        _write(text, args.out)
        return code
    except ConfigError as exc:
        print(f"qdeform: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"qdeform: did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
