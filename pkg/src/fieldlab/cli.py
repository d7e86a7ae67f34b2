"""Command-line experiment runner.

Every subcommand takes a seed and emits a machine-readable report (JSON by
default, CSV for tabular outputs) embedding the fully resolved
configuration, so identical invocations are byte-identical.  Exit codes:
0 success, 1 usage/budget errors, 2 a failed mathematical check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from . import __version__
from ._accel import kernel_name
from .anisotropy import dvr_anisotropy_check, local_params_anisotropy
from .curves import curve_json, frobenius_trace, new_curve
from .errors import CheckFailed, FieldLabError
from .forms import c1_scan, diagonal, springer_experiment
from .galois import FieldDesc, make_extension, make_prime_field, parse_element
from .logic import (
    emit_algdep_template,
    emit_anisotropy_membership,
    emit_char0_sentence,
    emit_pfister_membership,
    emit_represents_zero,
    emit_slope_ratio_set,
    emit_slope_set,
    eval_formula,
    free_vars,
)
from .mersenne import at_most_two_check, mersenne_scan, min_psi, psi_sum_bound_report
from .modgen import generation_fraction
from .selftest import run_selftest
from .sexpr import parse_formula, print_formula
from .zsum import zsum_scan

SCHEMA_VERSION = 1


def parse_field(spec: str) -> FieldDesc:
    """Field spec 'p' or 'p^k1^k2...' building a tower bottom-up."""
    parts = spec.split("^")
    field = make_prime_field(int(parts[0]))
    for deg in parts[1:]:
        field = make_extension(field, int(deg))
    return field


def parse_curve(field: FieldDesc, spec: str):
    parts = _split_curve_spec(spec)
    if len(parts) != 5:
        raise ValueError("curve spec needs 5 coefficients a1,a2,a3,a4,a6")
    coeffs = [parse_element(field, p) for p in parts]
    return new_curve(field, *coeffs)


def _split_curve_spec(spec: str) -> list[str]:
    # split on commas that are not inside (elt ...) parentheses
    parts = []
    depth = 0
    cur = []
    for ch in spec:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _write_report(report: dict, out: str | None, fmt: str, csv_rows=None, csv_header=None):
    if fmt == "json":
        payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        if csv_rows is None:
            raise ValueError("this subcommand has no CSV form")
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        payload = buf.getvalue()
    else:
        raise ValueError(f"unknown format {fmt}")
    if out is None:
        sys.stdout.write(payload)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fieldlab-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _envelope(args, command: str, config: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "fieldlab_version": __version__,
        "kernel": kernel_name(),
        "command": command,
        "config": config,
        "seed": getattr(args, "seed", 0),
        "complete": True,
    }


# ---------------------------------------------------------------------------
# subcommands


def _cmd_mersenne(args) -> int:
    field = parse_field(args.field)
    curve = parse_curve(field, args.curve)
    fd = frobenius_trace(curve)
    rows = mersenne_scan(fd, args.lmax, rho_budget=args.rho_budget)
    report = _envelope(
        args,
        "mersenne",
        {"field": args.field, "curve": args.curve, "lmax": args.lmax, "rho_budget": args.rho_budget},
    )
    report["curve"] = curve_json(curve, fd)
    report["rows"] = [row.to_json() for row in rows]
    best = min_psi(rows)
    report["min_psi"] = None if best is None else {
        "num": best[0].numerator, "den": best[0].denominator, "ell": best[1]
    }
    complete_rows = [r for r in rows if r.complete]
    exit_code = 0
    if len(complete_rows) == len(rows):
        amt = at_most_two_check(rows)
        bound = psi_sum_bound_report(rows, args.lmax)
        report["at_most_two"] = {"passed": amt.passed, "offenders": list(amt.offenders)}
        report["psi_bound"] = {
            "sum_psi": {"num": bound.sum_psi.numerator, "den": bound.sum_psi.denominator},
            "twice_psi_product": {
                "num": bound.twice_psi_product.numerator,
                "den": bound.twice_psi_product.denominator,
            },
            "holds": bound.holds,
        }
        if not amt.passed:
            exit_code = 2
    else:
        report["complete"] = False
        report["at_most_two"] = None
        report["psi_bound"] = None
        exit_code = 1
    csv_rows = [
        [r.ell, r.e, r.psi.numerator if r.psi else "", r.psi.denominator if r.psi else "", r.complete]
        for r in rows
    ]
    _write_report(report, args.out, args.format, csv_rows, ["ell", "e_ell", "psi_num", "psi_den", "complete"])
    return exit_code


def _cmd_genprob(args) -> int:
    field = parse_field(args.field)
    curve = parse_curve(field, args.curve)
    rep = generation_fraction(curve, args.ell)
    report = _envelope(args, "genprob", {"field": args.field, "curve": args.curve, "ell": args.ell})
    report["report"] = rep.to_json()
    _write_report(report, args.out, args.format)
    return 0 if rep.passed else 2


def _cmd_zsum(args) -> int:
    field = parse_field(args.field)
    reports, summary = zsum_scan(field, args.index_bound, max_curves=args.max_curves)
    report = _envelope(
        args,
        "zsum",
        {"field": args.field, "index_bound": args.index_bound, "max_curves": args.max_curves},
    )
    report["reports"] = [r.to_json() for r in reports]
    report["summary"] = {str(k): v for k, v in sorted(summary.items())}
    csv_rows = [
        [r.q, r.curve, r.multiplier, r.index, r.subgroup_size, r.sum_size, r.covered]
        for r in reports
    ]
    _write_report(
        report, args.out, args.format, csv_rows,
        ["q", "curve", "multiplier", "index", "subgroup_size", "sum_size", "covered"],
    )
    return 0


def _cmd_springer(args) -> int:
    base = parse_field(args.base)
    rep = springer_experiment(args.d, base, args.ext_degree, threads=args.threads)
    report = _envelope(
        args, "springer", {"d": args.d, "base": args.base, "ext_degree": args.ext_degree}
    )
    report["result"] = {
        "forms_checked": rep.forms_checked,
        "isotropic_over_extension": rep.isotropic_over_extension,
        "counterexamples": [[repr(c) for c in ce] for ce in rep.counterexamples],
        "passed": rep.passed,
    }
    _write_report(report, args.out, args.format)
    return 0 if rep.passed else 2


def _cmd_cw(args) -> int:
    field = parse_field(args.field)
    rep = c1_scan(field, args.d, threads=args.threads)
    report = _envelope(args, "cw", {"field": args.field, "d": rep.degree})
    report["result"] = {
        "forms_checked": rep.forms_checked,
        "failures": [[repr(c) for c in f] for f in rep.failures],
        "passed": rep.passed,
    }
    _write_report(report, args.out, args.format)
    return 0 if rep.passed else 2


def _cmd_dvr(args) -> int:
    field = parse_field(args.field)
    coeffs = [parse_element(field, c) for c in _split_curve_spec(args.coeffs)]
    form = diagonal(args.d, coeffs, field)
    if args.m == 1:
        cert = dvr_anisotropy_check(form, trials=args.trials, precision=args.precision, seed=args.seed)
    else:
        cert = local_params_anisotropy(
            form, args.m, trials=args.trials, precision=args.precision, seed=args.seed
        )
    report = _envelope(
        args,
        "dvr",
        {
            "field": args.field,
            "coeffs": args.coeffs,
            "d": args.d,
            "m": args.m,
            "trials": args.trials,
            "precision": args.precision,
        },
    )
    report["certificate"] = cert.to_json()
    _write_report(report, args.out, args.format)
    return 0


def _cmd_eval_formula(args) -> int:
    field = parse_field(args.field)
    with open(args.formula) as fh:
        formula = parse_formula(fh.read())
    bindings = {}
    for spec in args.bind or []:
        name, _, path = spec.partition("=")
        if not path:
            raise ValueError(f"--bind needs NAME=FILE, got {spec!r}")
        with open(path) as fh:
            body = parse_formula(fh.read())
        params = tuple(sorted(free_vars(body)))
        bindings[name] = (params, body)
    assignment = {}
    for spec in args.assign or []:
        name, _, lit = spec.partition("=")
        if not lit:
            raise ValueError(f"--assign needs VAR=LITERAL, got {spec!r}")
        assignment[name] = parse_element(field, lit)
    value = eval_formula(
        formula, field, assignment=assignment, bindings=bindings, budget=args.budget
    )
    if args.out or args.format == "json":
        report = _envelope(
            args,
            "eval-formula",
            {
                "field": args.field,
                "formula": args.formula,
                "bind": args.bind or [],
                "assign": args.assign or [],
                "budget": args.budget,
            },
        )
        report["value"] = value
        _write_report(report, args.out, "json")
    else:
        print("true" if value else "false")
    return 0


_EMITTERS = {
    "represents-zero": lambda args: emit_represents_zero(args.d, args.n),
    "slope-set": lambda args: emit_slope_set(),
    "slope-ratio-set": lambda args: emit_slope_ratio_set(),
    "pfister-membership": lambda args: emit_pfister_membership(
        parse_formula(open(args.s_formula).read()) if args.s_formula else emit_slope_ratio_set(),
        s_var=args.s_var,
    ),
    "char0-sentence": lambda args: emit_char0_sentence(),
    "anisotropy-membership": lambda args: emit_anisotropy_membership(args.d),
    "algdep": lambda args: emit_algdep_template(args.n, args.d),
}


def _cmd_emit(args) -> int:
    formula = _EMITTERS[args.which](args)
    text = print_formula(formula) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def _cmd_selftest(args) -> int:
    result = run_selftest(seed=args.seed)
    report = _envelope(args, "selftest", {"seed": args.seed})
    report["result"] = result
    _write_report(report, args.out, args.format)
    return 0 if result["passed"] else 2


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(p, with_curve=False, with_field=True):
    if with_field:
        p.add_argument("--field", required=with_field, help="field spec, e.g. 5 or 3^2 or 2^2^2")
    if with_curve:
        p.add_argument("--curve", required=True, help="a1,a2,a3,a4,a6 element literals")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--threads", type=int, default=1, help="worker threads (default 1, deterministic)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fieldlab",
        description="Desk-scale experiments with finite fields, curves, forms, and formulas",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mersenne", help="near-primality scan of extension point-count ratios")
    _add_common(p, with_curve=True)
    p.add_argument("--lmax", type=int, default=60)
    p.add_argument("--rho-budget", type=int, default=2_000_000)
    p.set_defaults(fn=_cmd_mersenne)

    p = sub.add_parser("genprob", help="exhaustive Frobenius-module generation fraction")
    _add_common(p, with_curve=True)
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(fn=_cmd_genprob)

    p = sub.add_parser("zsum", help="coverage of the field by sums of z = y/x over subgroups")
    _add_common(p)
    p.add_argument("--index-bound", type=int, default=3)
    p.add_argument("--max-curves", type=int, default=64)
    p.set_defaults(fn=_cmd_zsum)

    p = sub.add_parser("springer", help="descent of isotropy along extensions")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--base", required=True, help="base field spec")
    p.add_argument("--ext-degree", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=_cmd_springer)

    p = sub.add_parser("cw", help="isotropy of >d-variable diagonal forms (C_1 property)")
    _add_common(p)
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(fn=_cmd_cw)

    p = sub.add_parser("dvr", help="anisotropy certificates over Laurent series")
    _add_common(p)
    p.add_argument("--coeffs", required=True, help="residue form coefficients, comma separated")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", type=int, default=1, help="number of Laurent variables")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--precision", type=int, default=8)
    p.set_defaults(fn=_cmd_dvr)

    p = sub.add_parser("eval-formula", help="evaluate a formula over a finite field")
    _add_common(p)
    p.add_argument("--formula", required=True, help="path to an s-expression file")
    p.add_argument("--bind", action="append", help="NAME=FILE placeholder binding")
    p.add_argument("--assign", action="append", help="VAR=LITERAL free-variable value")
    p.add_argument("--budget", type=int, default=10**7)
    p.set_defaults(fn=_cmd_eval_formula)

    p = sub.add_parser("emit", help="write a constructed formula as an s-expression")
    p.add_argument("--which", choices=sorted(_EMITTERS), required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--s-formula", default=None, help="path to the set formula (pfister-membership)")
    p.add_argument("--s-var", default="s")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_emit)

    p = sub.add_parser("selftest", help="run the deterministic invariant battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(fn=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CheckFailed as exc:
        print(f"fieldlab: mathematical check failed: {exc}", file=sys.stderr)
        return 2
    except (FieldLabError, ValueError, OSError) as exc:
        print(f"fieldlab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
