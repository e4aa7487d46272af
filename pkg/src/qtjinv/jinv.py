"""The j-formulas for eps-lattices and ideals, and the quantum invariant j^qt(f).

With z1 = zeta(q-1), z2 = zeta(q^2-1) over monic elements:

    U = ((T^q - T) z1)^{q+1},  V = (T^q - T)(T^{q^2} - T) z2,  Delta = U - V
    J = (T^{q^2} - T)/(T^q - T)^{q+1} * z2/z1^{q+1}
    j = 1/(1/(T^q - T) - J) = (T^q - T) U / Delta

Delta cancels the top q^2 - 1 (or q^2 - q) coefficients of U, so zeta sums
start with a guard of q^2 + q + 2 extra coefficients; when Delta cancels
further the precision is raised until j has the requested coefficients.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .approxlattice import lam_bruteforce
from .errors import ConsistencyError, DomainError, PrecisionError
from .exactfield import Field, Laurent, Poly, to_text
from .ideals import (
    IdealHNF,
    RingA1,
    degree_one_points,
    ideal_ai,
    ideal_is_principal,
    ideal_mul,
    normalized_basis,
    point_ideal,
)
from .quadunit import QuadUnit
from .zeta import ZetaValue, needed_degree, zeta_eps, zeta_ideal, zeta_values

INFINITY = "infinity"


@dataclass
class JValue:
    value: Laurent | None
    route: dict
    prec: int
    delta: Laurent | None = None
    z1: ZetaValue | None = None
    z2: ZetaValue | None = None
    extra: dict = dc_field(default_factory=dict)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def to_json(self) -> dict:
        out = {"route": self.route, "prec": self.prec, "infinity": self.is_infinite}
        out["laurent"] = INFINITY if self.value is None else to_text(self.value)
        if self.delta is not None and self.delta.coeffs:
            out["delta_lead_exp"] = self.delta.lead
        return out


def guard(q: int) -> int:
    return q * q + q + 2


def _carlitz_polys(field: Field):
    q = field.q
    T = Poly.T(field)
    return T**q - T, T ** (q * q) - T


def delta_uv(z1: Laurent, z2: Laurent):
    """(U, V, Delta) for the two zeta values."""
    tq, tq2 = _carlitz_polys(z1.field)
    q = z1.field.q
    U = (Laurent.from_poly(tq) * z1) ** (q + 1)
    V = Laurent.from_poly(tq * tq2) * z2
    return U, V, U - V


def j_from_zeta(z1: ZetaValue, z2: ZetaValue, route: dict | None = None) -> JValue:
    """j = (T^q - T) U / Delta; a Delta that vanishes to precision gives INFINITY."""
    F = z1.value.field
    q = F.q
    if z1.exponent != q - 1 or z2.exponent != q * q - 1:
        raise DomainError("need zeta(q-1) and zeta(q^2-1)")
    if not z1.value.coeffs:
        raise PrecisionError("zeta(q-1) vanishes to precision")
    U, V, D = delta_uv(z1.value, z2.value)
    route = dict(route or {})
    if not D.coeffs:
        return JValue(None, route, 0, D, z1, z2, {"delta_floor": D.floor})
    tq, _ = _carlitz_polys(F)
    j = Laurent.from_poly(tq) * U / D
    return JValue(j, route, j.prec, D, z1, z2)


MAX_EXTRA = 160


def _adaptive(compute, prec: int, q: int, max_extra: int = MAX_EXTRA) -> JValue:
    """Raise the zeta precision until j has ``prec`` known coefficients.

    Delta may cancel far more than the default guard, so the deficit observed
    in one pass is added to the next. A Delta that still vanishes at the cap
    is reported as INFINITY with its floor recorded.
    """
    zp = prec + guard(q)
    cap = prec + guard(q) + max_extra
    while True:
        jv = compute(zp)
        if jv.value is not None and jv.value.prec >= prec:
            jv.value = jv.value.truncate(prec)
            jv.prec = prec
            jv.extra["zeta_prec"] = zp
            return jv
        if zp >= cap:
            if jv.value is None:
                jv.extra["zeta_prec"] = zp
                return jv
            raise PrecisionError(f"only {jv.value.prec} coefficients of j are determined at zeta precision {zp}")
        deficit = prec - jv.value.prec if jv.value is not None else prec
        zp = min(cap, zp + max(deficit + 2, 8))


def _unit_at(u: QuadUnit, need: int) -> QuadUnit:
    return u if u.prec >= need else u.with_prec(need)


def _ring_at(ring: RingA1, need: int) -> RingA1:
    return ring if ring.u.prec >= need else RingA1(ring.u.with_prec(need))


def _rehome(ideal, ring: RingA1):
    return IdealHNF(ring, ideal.rows, ideal.denominator)


def j_eps(u: QuadUnit, N: int, l: int, prec: int, rule: str = "maxterm") -> JValue:
    """Approximant j_eps(f) at eps = q^{-(Nd+l)} from the renormalized lattice."""
    if not 0 <= l < u.d:
        raise DomainError(f"l must lie in [0, {u.d})")

    def compute(zp):
        v = _unit_at(u, zp + 2 * u.d + 4)
        z1 = zeta_eps(v, N, l, 1, zp, rule)
        z2 = zeta_eps(v, N, l, 2, zp, rule)
        return j_from_zeta(z1, z2, {"kind": "eps", "N": N, "l": l})

    return _adaptive(compute, prec, u.field.q)


def j_basis(nb, zp: int, rule: str = "maxterm", route: dict | None = None) -> JValue:
    z1 = zeta_ideal(nb, 1, zp, rule)
    z2 = zeta_ideal(nb, 2, zp, rule)
    return j_from_zeta(z1, z2, route)


def j_of_ideal(ideal, prec: int, rule: str = "maxterm", route: dict | None = None) -> JValue:
    """j of the class of ``ideal``, via its normalized basis."""
    ring0 = ideal.ring
    route = route or {"kind": "ideal"}

    def compute(zp):
        ring = _ring_at(ring0, zp + 8)
        nb = normalized_basis(_rehome(ideal, ring))
        return j_basis(nb, zp, rule, route)

    return _adaptive(compute, prec, ring0.field.q)


def j_ideal(ring: RingA1, i: int, prec: int, rule: str = "maxterm") -> JValue:
    """j(a_i) from the normalized basis of a_i = (f, fT, ..., fT^i)."""
    return j_of_ideal(ideal_ai(ring, i), prec, rule, {"kind": "ideal", "i": i})


def j_polyspan(polys: list, prec: int, route: dict | None = None, max_extra: int = MAX_EXTRA) -> JValue:
    """j of an integral span given by polynomials of distinct degrees."""
    if not polys:
        raise DomainError("empty span")
    F = polys[0].field
    vals = [Laurent.from_poly(p) for p in polys]
    degs = [p.deg for p in polys]

    def compute(zp):
        z1 = zeta_values(vals, degs, 1, zp, source={"kind": "polys"})
        z2 = zeta_values(vals, degs, 2, zp, source={"kind": "polys"})
        return j_from_zeta(z1, z2, route or {"kind": "polys"})

    return _adaptive(compute, prec, F.q, max_extra)


def j_carlitz(field: Field, prec: int) -> JValue:
    """j of A = F_q[T] itself; the rank-1 lattice has Delta = 0."""
    top = prec + guard(field.q) + 40
    polys = [Poly.T(field, k) for k in range(top + 2)]
    return j_polyspan(polys, prec, {"kind": "carlitz"}, max_extra=32)


BRUTE_EXTRA = 32


def bruteforce_degbound(q: int, eps_exp: int, prec: int, degbound: int = 0) -> int:
    """Degree bound that lets the zeta truncation finish at every adaptive step.

    Lambda_eps always holds a nonzero polynomial of degree <= eps_exp, so the
    span starts at or below that degree.
    """
    cap = prec + guard(q) + BRUTE_EXTRA
    return max(degbound, eps_exp + needed_degree(q, 1, 0, cap, "maxterm") + 2)


def j_eps_bruteforce(x: Laurent, eps_exp: int, degbound: int, prec: int) -> JValue:
    """j_eps(x) from the brute-force lattice; works for any x (rational or not).

    ``degbound`` is raised to :func:`bruteforce_degbound` when smaller.
    """
    top = bruteforce_degbound(x.field.q, eps_exp, prec, degbound)
    basis = lam_bruteforce(x, eps_exp, top)
    route = {"kind": "eps-bruteforce", "eps_exp": eps_exp, "degbound": top}
    return j_polyspan(list(basis.canonical()), prec, route, max_extra=BRUTE_EXTRA)


# -- j^qt -----------------------------------------------------------------------------


@dataclass
class JQTResult:
    values: list
    limit_values: list
    agreement: list
    min_agreement: int
    N_max: int

    def to_json(self) -> dict:
        out = []
        for k, (jv, lv) in enumerate(zip(self.values, self.limit_values)):
            out.append({
                "i": jv.route.get("i"),
                "l": lv.route.get("l"),
                "route": "ideal",
                "laurent": INFINITY if jv.value is None else to_text(jv.value),
                "limit_laurent": INFINITY if lv.value is None else to_text(lv.value),
                "agreement": self.agreement[k],
                "infinity": jv.value is None,
            })
        worst = None
        for jv, n_agree in zip(self.values, self.agreement):
            if jv.value is not None:
                e = jv.value.lead - n_agree
                worst = e if worst is None else max(worst, e)
        report = {"min_coefficients": self.min_agreement, "max_disagreement_exp": worst}
        return {"values": out, "N_max": self.N_max, "agreement": report}


def default_nmax(u: QuadUnit, prec: int) -> int:
    """Least N with q^{-(2Nd+1)} below q^{-prec}."""
    N = 1
    while 2 * N * u.d + 1 <= prec:
        N += 1
    return N


def jqt(u: QuadUnit, prec: int, N_max: int | None = None, min_agree: int | None = None) -> JQTResult:
    """Both routes for every l; the ideal route is returned as canonical."""
    if N_max is None:
        N_max = default_nmax(u, prec)
    need = min(prec, 20) if min_agree is None else min_agree
    ring = RingA1(_unit_at(u, prec + guard(u.field.q) + 8 + 2 * u.d))
    values, limits, agree = [], [], []
    for l in range(u.d):
        iv = j_ideal(ring, u.d - 1 - l, prec)
        lv = j_eps(ring.u, N_max, l, prec)
        if iv.value is None or lv.value is None:
            ok = iv.value is None and lv.value is None
            n_agree = prec if ok else 0
        else:
            n_agree = iv.value.agreement(lv.value) if iv.value.lead == lv.value.lead else 0
        if n_agree < need:
            raise ConsistencyError(f"routes disagree at l={l}: {n_agree} coefficients agree, need {need}")
        values.append(iv)
        limits.append(lv)
        agree.append(n_agree)
    return JQTResult(values, limits, agree, min(agree), N_max)


def norm_of(values: list) -> Laurent:
    out = None
    for jv in values:
        if jv.value is None:
            raise DomainError("norm needs finite values")
        out = jv.value if out is None else out * jv.value
    return out


def norm_jqt(u: QuadUnit, prec: int) -> Laurent:
    """Product of j(a_i) over i = 0..d-1 (ideal route)."""
    ring = RingA1(u)
    return norm_of([j_ideal(ring, i, prec) for i in range(u.d)])


def norm_translated(ring: RingA1, b, prec: int) -> Laurent:
    """prod_i j(b a_i) for an ideal b."""
    ring_b = b.ring
    vals = [j_of_ideal(ideal_mul(b, ideal_ai(ring_b, i)), prec, route={"kind": "ideal", "b_i": i})
            for i in range(ring_b.d)]
    return norm_of(vals)


def family_index(b) -> int | None:
    """i with [b] = [a_i], or None; uses [a_i]^{-1} = [a_{d-i}] (a_d = a_0)."""
    ring = b.ring
    d = ring.d
    for i in range(d):
        inv = ideal_ai(ring, (d - i) % d)
        (tag, _), _ = ideal_is_principal(ideal_mul(b, inv), 0)
        if tag == "yes":
            return i
    return None


def sample_offfamily_ideal(ring: RingA1, seed: int = 0):
    """A degree-one prime whose class lies outside {[a_i]}, or None."""
    pts = degree_one_points(ring)
    random.Random(seed).shuffle(pts)
    for t, x0 in pts:
        b = point_ideal(ring, t, x0)
        if family_index(b) is None:
            return b, (t, x0)
    return None


def delta_of_basis(nb, prec: int, max_extra: int = MAX_EXTRA) -> Laurent:
    """Delta^c = U - V for the normalized basis (zeta = 1 + ...).

    The zeta precision is raised until Delta has a known nonzero coefficient
    or ``max_extra`` is exhausted; the result may vanish to precision.
    """
    zp = prec + guard(nb.ring.field.q)
    top = zp + max_extra
    while True:
        z1 = zeta_ideal(nb, 1, zp)
        z2 = zeta_ideal(nb, 2, zp)
        delta = delta_uv(z1.value, z2.value)[2]
        if delta.coeffs or zp >= top:
            return delta
        zp = min(top, zp + max(8, prec))


def jtilde(nb, prec: int) -> Laurent:
    """zeta(q^2-1) / zeta(q-1)^{q+1} for the normalized basis; |J~(a) - J~((1))| = |alpha_1|^{q(1-q)}."""
    q = nb.ring.field.q
    z1 = zeta_ideal(nb, 1, prec).value
    z2 = zeta_ideal(nb, 2, prec).value
    return z2 / z1 ** (q + 1)


def distinct_to_precision(x: Laurent, y: Laurent) -> int | None:
    """Exponent of the leading coefficient of x - y, or None if they agree to precision."""
    diff = x - y
    return diff.lead if diff.coeffs else None


def check_distinct(values: list) -> list:
    """Pairwise leading difference exponents; ConsistencyError if two values coincide."""
    out = []
    for a in range(len(values)):
        for b in range(a + 1, len(values)):
            e = distinct_to_precision(values[a].value, values[b].value)
            if e is None:
                raise ConsistencyError(f"values {a} and {b} agree to precision")
            out.append(((a, b), e))
    return out
