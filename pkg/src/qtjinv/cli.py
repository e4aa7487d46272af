"""Command-line front end.

    qtjinv jqt --p 3 --a 0,0,1 --b 1 --prec 30

Polynomials are given as comma-separated coefficient lists, constant term
first, each coefficient in the field's digit syntax. Exit status is 0 on
success, 1 on usage errors and 2 when a consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .algrec import DEFAULT_MARGIN, minpoly_search, verify_relation
from .approxlattice import lam_bruteforce, lam_structural, split_eps
from .errors import ConsistencyError, QtjError
from .exactfield import Field, Laurent, Poly, to_text
from .ideals import RingA1, class_numbers, ideal_ai, l_polynomial, normalized_basis
from .jinv import (
    INFINITY,
    bruteforce_degbound,
    default_nmax,
    j_eps,
    j_eps_bruteforce,
    j_ideal,
    jqt,
    norm_jqt,
    norm_of,
    norm_translated,
    sample_offfamily_ideal,
)
from .quadunit import QuadUnit
from .zeta import zeta_eps, zeta_ideal

PORTRAIT_COEFFS = 8


class UsageError(Exception):
    def __init__(self, flag: str, msg: str):
        super().__init__(f"{flag}: {msg}")
        self.flag = flag


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"usage error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, default=3, help="characteristic")
    p.add_argument("--m", type=int, default=1, help="extension degree of F_q over F_p")
    p.add_argument("--modulus", default=None, help="monic modulus over F_p, constant term first")
    p.add_argument("--a", default="0,1", help="monic polynomial a, constant term first")
    p.add_argument("--b", default="1", help="nonzero constant b")
    p.add_argument("--prec", type=int, default=30)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--degbound", type=int, default=8)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="qtjinv", description="Quantum modular invariants of quadratic units over F_q(T).")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    sp = sub.add_parser("unit", help="quadratic unit data")
    _common(sp)
    sp.add_argument("--n", type=int, default=4, help="print Q_0 .. Q_n")

    sp = sub.add_parser("lattice", help="structural vs brute-force Lambda_eps")
    _common(sp)
    sp.add_argument("--eps", type=int, required=True, help="eps = q^-EPS")

    sp = sub.add_parser("zeta", help="zeta(q^n - 1) of an eps-lattice or of a_i")
    _common(sp)
    sp.add_argument("--n", type=int, default=1, choices=(1, 2))
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--eps", type=int)
    group.add_argument("--i", type=int, help="ideal a_i")

    sp = sub.add_parser("jeps", help="j_eps of the unit, or of an element x of k")
    _common(sp)
    sp.add_argument("--eps", type=int, required=True)
    sp.add_argument("--x", default=None, help="element of k as NUM or NUM/DEN coefficient lists")

    sp = sub.add_parser("jqt", help="j^qt(f) by the limit and ideal routes")
    _common(sp)

    sp = sub.add_parser("norm", help="N(j^qt(f)) and a translated family norm")
    _common(sp)

    sp = sub.add_parser("classnum", help="h_K, h_A1, h_OK from point counts")
    _common(sp)

    sp = sub.add_parser("minpoly", help="relation over k for f, j(a_i) or the norm")
    _common(sp)
    sp.add_argument("--subject", default="f", help="f, j<i> (e.g. j0) or norm")
    sp.add_argument("--D", type=int, default=2, help="maximal relation degree")

    sp = sub.add_parser("portrait", help="CSV of j_eps against e = N d + l")
    _common(sp)
    sp.add_argument("--emin", type=int, default=None)
    sp.add_argument("--emax", type=int, default=None)
    return top


# -- config -----------------------------------------------------------------------


def _coeff_list(F: Field, text: str, flag: str) -> list:
    try:
        return [F.parse(t) for t in text.split(",")] if text.strip() else []
    except (QtjError, ValueError) as exc:
        raise UsageError(flag, str(exc)) from None


def _field(args) -> Field:
    modulus = None
    if args.modulus is not None:
        try:
            modulus = [int(t) for t in args.modulus.split(",")]
        except ValueError:
            raise UsageError("--modulus", "expected integers") from None
    try:
        return Field(args.p, args.m, modulus)
    except QtjError as exc:
        raise UsageError("--p/--m/--modulus", str(exc)) from None


def _unit(args, F: Field, prec: int) -> QuadUnit:
    a = Poly(F, _coeff_list(F, args.a, "--a"))
    b = _coeff_list(F, args.b, "--b")
    if len(b) != 1:
        raise UsageError("--b", "expected one field element")
    try:
        return QuadUnit(F, a, b[0], prec)
    except QtjError as exc:
        raise UsageError("--a/--b", str(exc)) from None


def config_of(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "out"}


def _validate(args):
    if args.prec < 2:
        raise UsageError("--prec", "must be >= 2")
    if args.nmax is not None and args.nmax < 0:
        raise UsageError("--nmax", "must be >= 0")
    if args.degbound < 0:
        raise UsageError("--degbound", "must be >= 0")
    if getattr(args, "eps", None) is not None and args.eps < 0:
        raise UsageError("--eps", "must be >= 0")


def _laurent_json(x):
    return INFINITY if x is None else to_text(x)


# -- subcommands --------------------------------------------------------------------


def cmd_unit(args, F):
    u = _unit(args, F, args.prec)
    out = {
        "unit": u.descriptor(),
        "d": u.d,
        "D": [F.to_str(c) for c in u.D.coeffs],
        "f": to_text(u.f),
        "fstar": to_text(u.fstar),
        "sqrtD": to_text(u.sqrtD),
        "Q": [u.Q(n).to_str() for n in range(args.n + 1)],
    }
    errs = []
    for n in range(args.n + 1):
        for l in range(u.d):
            try:
                errs.append({"n": n, "l": l, "err_exp": u.error_exp(n, l)})
            except QtjError as exc:
                if isinstance(exc, ConsistencyError):
                    raise
                break
    out["error_law"] = errs
    return out, None


def cmd_lattice(args, F):
    u = _unit(args, F, args.prec + args.degbound + 2 * args.eps + 4)
    N, l = split_eps(u, args.eps)
    s = lam_structural(u, N, l, args.degbound)
    x = u.f
    bf = lam_bruteforce(x, args.eps, args.degbound)
    same = s.same_span(bf)
    if not same:
        raise ConsistencyError(f"structural and brute-force bases differ at eps exponent {args.eps}")
    rows = [("basis", "degree", "element")] + s.csv_rows() + bf.csv_rows()
    out = {
        "N": N,
        "l": l,
        "structural": [r[2] for r in s.csv_rows()],
        "bruteforce": [p.to_str() for p in bf.canonical()],
        "equal": same,
    }
    return out, rows


def cmd_zeta(args, F):
    q = F.q
    u = _unit(args, F, args.prec + q * q + 16)
    if args.eps is not None:
        N, l = split_eps(u, args.eps)
        if args.eps < u.d:
            raise UsageError("--eps", f"must be >= d = {u.d} so that N >= 1")
        z = zeta_eps(u, N, l, args.n, args.prec)
    else:
        if not 0 <= args.i < u.d:
            raise UsageError("--i", f"must lie in [0, {u.d})")
        nb = normalized_basis(ideal_ai(RingA1(u), args.i))
        z = zeta_ideal(nb, args.n, args.prec)
    return {"zeta": z.to_json()}, None


def _parse_k(F: Field, text: str, prec: int) -> Laurent:
    num, _, den = text.partition("/")
    p_num = Poly(F, _coeff_list(F, num, "--x"))
    if not den:
        return Laurent.from_poly(p_num)
    p_den = Poly(F, _coeff_list(F, den, "--x"))
    if not p_den.coeffs:
        raise UsageError("--x", "zero denominator")
    return Laurent.from_rational(p_num, p_den, prec)


def cmd_jeps(args, F):
    if args.x is not None:
        top = bruteforce_degbound(F.q, args.eps, args.prec, args.degbound)
        x = _parse_k(F, args.x, args.eps + top + 8)
        jv = j_eps_bruteforce(x, args.eps, args.degbound, args.prec)
        return {"x": args.x, "j": jv.to_json()}, None
    u = _unit(args, F, args.prec)
    N, l = split_eps(u, args.eps)
    if N < 1:
        raise UsageError("--eps", f"must be >= d = {u.d} so that N >= 1")
    jv = j_eps(u, N, l, args.prec)
    return {"N": N, "l": l, "j": jv.to_json()}, None


def cmd_jqt(args, F):
    u = _unit(args, F, args.prec)
    res = jqt(u, args.prec, args.nmax)
    out = res.to_json()
    finite = [v.value for v in res.values if v.value is not None]
    out["norm"] = to_text(norm_of(res.values)) if len(finite) == len(res.values) else None
    return out, None


def cmd_norm(args, F):
    u = _unit(args, F, args.prec)
    n0 = norm_jqt(u, args.prec)
    out = {"norm": to_text(n0)}
    ring = RingA1(u)
    pick = sample_offfamily_ideal(ring, args.seed)
    if pick is None:
        out["translated"] = None
    else:
        b, pt = pick
        nb = norm_translated(ring, b, args.prec)
        diff = nb - n0
        out["translated"] = {
            "b_point": list(pt),
            "norm": to_text(nb),
            "leading_difference_exp": diff.lead if diff.coeffs else None,
        }
        if not diff.coeffs:
            raise ConsistencyError("translated norm agrees with N(j^qt(f)) to precision")
    return out, None


def cmd_classnum(args, F):
    u = _unit(args, F, 8)
    hK, hA, hO = class_numbers(u)
    return {"L": l_polynomial(u), "h_K": hK, "h_A1": hA, "h_OK": hO, "d": u.d}, None


def _subject(args, u: QuadUnit):
    s = args.subject
    if s == "f":
        return lambda P: u.with_prec(P).f
    if s == "norm":
        return lambda P: norm_jqt(u, P)
    if s.startswith("j") and s[1:].isdigit():
        i = int(s[1:])
        if not 0 <= i < u.d:
            raise UsageError("--subject", f"ideal index must lie in [0, {u.d})")
        return lambda P: j_ideal(RingA1(u), i, P).value
    raise UsageError("--subject", f"unknown subject {s!r}")


def cmd_minpoly(args, F):
    u = _unit(args, F, args.prec)
    fn = _subject(args, u)
    # the subject must carry enough coefficients for the linear system
    prec = max(args.prec, (args.D + 1) * (args.degbound + 1) + DEFAULT_MARGIN)
    x = fn(prec)
    rel = minpoly_search(x, args.D, args.degbound)
    if rel is None:
        return {"subject": args.subject, "relation": None}, None
    rel.recompute = fn
    ok = verify_relation(rel, 2 * prec)
    out = {"subject": args.subject, "relation": rel.to_json(), "verified": ok}
    if not ok:
        raise ConsistencyError("relation does not re-verify at doubled precision")
    return out, None


def portrait_rows(u: QuadUnit, prec: int, emin: int, emax: int) -> list:
    rows = [["e", "N", "l", "lead_exp"] + [f"c{k}" for k in range(PORTRAIT_COEFFS)]]
    F = u.field
    for e in range(emin, emax + 1):
        N, l = divmod(e, u.d)
        jv = j_eps(u, N, l, prec)
        if jv.value is None:
            rows.append([e, N, l, INFINITY] + [""] * PORTRAIT_COEFFS)
            continue
        cs = [F.to_str(c) for c in jv.value.window(jv.value.lead, PORTRAIT_COEFFS)]
        rows.append([e, N, l, jv.value.lead] + cs)
    return rows


def cmd_portrait(args, F):
    u = _unit(args, F, args.prec)
    emin = 2 * u.d if args.emin is None else args.emin
    emax = 8 * u.d if args.emax is None else args.emax
    if emin < u.d or emax < emin:
        raise UsageError("--emin/--emax", f"need d <= emin <= emax (d = {u.d})")
    rows = portrait_rows(u, args.prec, emin, emax)
    return {"rows": rows}, rows


COMMANDS = {
    "unit": cmd_unit,
    "lattice": cmd_lattice,
    "zeta": cmd_zeta,
    "jeps": cmd_jeps,
    "jqt": cmd_jqt,
    "norm": cmd_norm,
    "classnum": cmd_classnum,
    "minpoly": cmd_minpoly,
    "portrait": cmd_portrait,
}


def _render(args, result: dict, rows) -> str:
    cfg = config_of(args)
    if args.format == "csv":
        if rows is None:
            raise UsageError("--format", f"csv output is not available for {args.cmd}")
        buf = io.StringIO()
        buf.write(f"# qtjinv {__version__} {json.dumps(cfg, sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerows(rows)
        return buf.getvalue()
    doc = {"version": __version__, "config": cfg, "result": result}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        F = _field(args)
        result, rows = COMMANDS[args.cmd](args, F)
        text = _render(args, result, rows)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 2
    except QtjError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()
