"""Polynomial relations over F_q(T) for truncated Laurent values.

A relation sum_i c_i(T) X^i with deg c_i <= B is found as a nullspace vector
of the F_q-linear map taking the (D+1)(B+1) coefficients of the c_i to the
known window of sum_i c_i(T) x^i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .errors import DomainError, PrecisionError
from .exactfield import Laurent, Poly, nullspace, to_text

DEFAULT_MARGIN = 8


@dataclass
class AlgRelation:
    coeffs: list
    deg_bound: int
    subject: Laurent
    residual_exp: int | None
    found_prec: int
    verified_prec: int | None = None
    recompute: Callable | None = dc_field(default=None, compare=False, repr=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_json(self) -> dict:
        F = self.subject.field
        return {
            "degree": self.degree,
            "deg_bound": self.deg_bound,
            "coeffs": [[F.to_str(c) for c in p.coeffs] for p in self.coeffs],
            "residual_exp": self.residual_exp,
            "found_prec": self.found_prec,
            "verified_prec": self.verified_prec,
            "subject": to_text(self.subject),
        }


def evaluate(coeffs: list, x: Laurent) -> Laurent:
    """sum_i c_i(T) x^i by Horner's rule."""
    acc = None
    for c in reversed(coeffs):
        cl = Laurent.from_poly(c)
        acc = cl if acc is None else acc * x + cl
    return acc


def _powers(x: Laurent, D: int) -> list:
    out = [Laurent.const(x.field, 1)]
    for _ in range(D):
        out.append(out[-1] * x)
    return out


def _window(pw: list, B: int, rows: int | None):
    """Exponent range (low, top] on which every T^k x^i is known."""
    top = B + max(max(p.lead for p in pw if p.coeffs), 0)
    floors = [p.floor + B for p in pw if p.floor is not None]
    if floors:
        low = max(floors)
    else:
        low = top - rows
    return low, top


def _relation_prec(x: Laurent) -> int:
    return x.prec if x.floor is not None else math.inf


def _try(pw: list, D: int, B: int, margin: int):
    F = pw[0].field
    ncols = (D + 1) * (B + 1)
    low, top = _window(pw[: D + 1], B, 2 * ncols + margin)
    if top - low < ncols + margin:
        return None
    rows = []
    for e in range(top, low, -1):
        rows.append([pw[i].coefficient(e - k) for i in range(D + 1) for k in range(B + 1)])
    for v in nullspace(rows, ncols, F):
        cs = [Poly(F, v[i * (B + 1):(i + 1) * (B + 1)]) for i in range(D + 1)]
        if cs[D].deg == -math.inf:
            continue
        lc_inv = F.inv(cs[D].lc)
        return [c.scale(lc_inv) for c in cs]
    return None


def minpoly_search(x: Laurent, D: int, B: int, margin: int = DEFAULT_MARGIN) -> AlgRelation | None:
    """Relation of minimal degree (then minimal coefficient degree) up to (D, B).

    The leading coefficient c_D is made monic. Returns None when no relation
    exists in the box.
    """
    if D < 1 or B < 0:
        raise DomainError("need D >= 1 and B >= 0")
    if not x.coeffs:
        raise DomainError("subject vanishes to precision")
    need = (D + 1) * (B + 1) + margin
    if _relation_prec(x) < need:
        raise PrecisionError(f"subject has {x.prec} coefficients, the system needs {need}")
    pw = _powers(x, D)
    for d in range(1, D + 1):
        for b in range(B + 1):
            cs = _try(pw, d, b, margin)
            if cs is None:
                continue
            r = evaluate(cs, x)
            if r.coeffs:
                continue
            res = None if r.is_zero else r.floor
            return AlgRelation(cs, b, x, res, x.prec if x.floor is not None else 0)
    return None


def verify_relation(rel: AlgRelation, prec2: int, recompute: Callable | None = None) -> bool:
    """Recompute the subject at ``prec2`` and check the relation on the larger window."""
    fn = recompute or rel.recompute
    if fn is None:
        y = rel.subject
    else:
        try:
            y = fn(prec2)
        except Exception:
            return False
    if rel.subject.floor is not None and y.floor is not None and y.prec < prec2:
        return False
    r = evaluate(rel.coeffs, y)
    if r.coeffs:
        return False
    res = None if r.is_zero else r.floor
    if rel.residual_exp is not None and res is not None:
        gain = y.prec - rel.subject.prec
        if res > rel.residual_exp - gain:
            return False
    rel.verified_prec = prec2
    return True
