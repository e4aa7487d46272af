"""Zeta sums over monic elements of an F_q-span in k_inf.

For generators v_0, v_1, ... (distinct degrees) the monic elements with top
generator v_j are v_j + w, w in W_j = span(v_0, ..., v_{j-1}). The layer sum
over W_j is evaluated in closed form through the additive polynomial
e_j(z) = prod_{w in W_j} (z - w) = sum_i a_i z^{q^i}:

    sum_w (z - w)^{-(q-1)}   = (a_0 / e_j(z))^{q-1}
    sum_w (z - w)^{-(q^2-1)} = sum_t C(q^2-2-(q-1)t, t) a_0^{q^2-1-qt} a_1^t / e_j(z)^{q^2-1-(q-1)t}

The exponent index n selects s = q^n - 1 (n = 1 or 2).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

from .approxlattice import lam_renormalize, lam_structural
from .errors import ConsistencyError, DomainError, PrecisionError, ResourceError
from .exactfield import Laurent, to_text
from .ideals import NormalizedBasis
from .quadunit import QuadUnit

MAX_LAYERS = 600


@dataclass
class ZetaValue:
    value: Laurent
    exponent: int
    tail_exp: int
    source: dict = dc_field(default_factory=dict)
    layers: int = 0

    def to_json(self) -> dict:
        return {
            "laurent": to_text(self.value),
            "exponent": self.exponent,
            "tail_exp": self.tail_exp,
            "source": self.source,
        }


@dataclass
class OmegaTerm:
    i: int
    value: Laurent
    exponent: int


def exponent_of(q: int, n: int) -> int:
    if n not in (1, 2):
        raise DomainError("only s = q - 1 (n=1) and s = q^2 - 1 (n=2) are supported")
    return q**n - 1


def layer_bound_exp(q: int, n: int, deg: int, rule: str) -> int:
    """Exponent bounding the layer whose top generator has the given degree."""
    s = q**n - 1
    if rule == "maxterm":
        return -s * deg
    if rule == "omega":
        return -(q**n) * (q - 1) * deg
    raise DomainError(f"unknown truncation rule {rule!r}")


def needed_degree(q: int, n: int, lead: int, prec: int, rule: str) -> int:
    """Largest generator degree that can reach the window ``lead - prec``."""
    m = 0
    while layer_bound_exp(q, n, m + 1, rule) > lead - prec:
        m += 1
    return m


# -- closed-form layer kernel ----------------------------------------------------


def _binom_p(n: int, k: int, p: int) -> int:
    # Lucas' theorem
    r = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        r = r * math.comb(a, b) % p
        n //= p
        k //= p
    return r


def _pow_or_one(x: Laurent, e: int) -> Laurent:
    return Laurent.const(x.field, 1) if e == 0 else x**e


def layer_sums(values: list, n: int, work: int):
    """Yield (j, layer sum) for each generator; ``work`` caps relative precision."""
    if not values:
        return
    F = values[0].field
    q = F.q
    s = exponent_of(q, n)
    coeffs = [_binom_p(q * q - 2 - (q - 1) * t, t, F.p) for t in range(q)] if n == 2 else None
    Es = []
    a0 = Laurent.const(F, 1)
    a1 = Laurent.zero(F)
    for j, v in enumerate(values):
        x = v.truncate(work)
        for E in Es:
            # apply z -> z^q - E^{q-1} z for each earlier generator
            x = x.frobenius(F.m, work) - (E ** (q - 1)) * x
            x = x.truncate(work)
        if not x.coeffs:
            raise PrecisionError(f"layer {j}: generator is not independent at working precision")
        E = x
        if n == 1:
            total = (a0 * E.inv()) ** s
        else:
            total = None
            Einv = E.inv()
            for t in range(q):
                c = coeffs[t]
                if c == 0 or (t and a1.is_zero):
                    continue
                term = _pow_or_one(a0, s - q * t) * _pow_or_one(a1, t) * Einv ** (s - (q - 1) * t)
                term = term.scale(F.from_int(c))
                total = term if total is None else total + term
        yield j, total
        Eq1 = E ** (q - 1)
        a0, a1 = (-(Eq1 * a0)).truncate(work), (a0.frobenius(F.m, work) - Eq1 * a1)
        if a1.coeffs:
            a1 = a1.truncate(work)
        Es.append(E)


def zeta_values(values: list, degrees: list, n: int, prec: int, rule: str = "maxterm", work: int | None = None,
                source: dict | None = None) -> ZetaValue:
    """sum over monic elements of span(values) of x^{-s}, to ``prec`` coefficients.

    ``values`` must have strictly increasing degrees ``degrees``; the list has
    to reach the truncation degree implied by ``rule``.
    """
    if not values:
        raise DomainError("empty basis")
    F = values[0].field
    q = F.q
    s = exponent_of(q, n)
    lead = -s * degrees[0]
    floor = lead - prec
    if work is None:
        work = min(min(v.prec for v in values), prec + 4)
    total = None
    used = 0
    tail = None
    for j, layer in layer_sums(values, n, work):
        total = layer if total is None else total + layer
        used = j + 1
        nxt = degrees[j + 1] if j + 1 < len(degrees) else degrees[j] + 1
        tail = layer_bound_exp(q, n, nxt, rule)
        if tail <= floor:
            break
        if used >= MAX_LAYERS:
            raise ResourceError(f"truncation needs more than {MAX_LAYERS} layers")
    else:
        if tail is None or tail > floor:
            raise DomainError("basis too short for the requested precision")
    if total.floor is not None and total.floor > floor:
        raise PrecisionError(f"inputs only determine the sum down to T^{total.floor}, need T^{floor}")
    value = total.with_floor(floor)
    return ZetaValue(value, s, tail, dict(source or {}), used)


# -- enumeration oracle -------------------------------------------------------------


def monic_enum(values: list, count: int | None = None):
    """Monic elements v_j + sum_{i<j} c_i v_i for j < count (generator order)."""
    if not values:
        return
    F = values[0].field
    count = len(values) if count is None else count
    for j in range(count):
        for cs in itertools.product(F.elements(), repeat=j):
            x = values[j]
            for c, v in zip(cs, values):
                if c:
                    x = x + v.scale(c)
            yield x


def zeta_direct(values: list, n: int, count: int) -> Laurent:
    """Term-by-term sum over monic_enum (oracle for small cases)."""
    F = values[0].field
    s = exponent_of(F.q, n)
    total = None
    for x in monic_enum(values, count):
        t = x.inv() ** s
        total = t if total is None else total + t
    return total


def omega_term(values: list, i: int, n: int, check: bool = True) -> OmegaTerm:
    """Layer i of the zeta sum; for i = 1 the closed form is checked against the direct sum."""
    if i < 1 or i >= len(values):
        raise DomainError("layer index out of range")
    F = values[0].field
    q = F.q
    s = exponent_of(q, n)
    direct = None
    for cs in itertools.product(F.elements(), repeat=i):
        x = values[i]
        for c, v in zip(cs, values):
            if c:
                x = x + v.scale(c)
        t = x.inv() ** s
        direct = t if direct is None else direct + t
    if i == 1 and check:
        v0 = values[0]
        if not (v0.is_exact and v0.coeffs == (1,) and v0.lead == 0):
            raise DomainError("the closed form needs alpha_0 = 1")
        closed = omega1_closed(values[1], n)
        if not closed.agrees_with(direct):
            raise ConsistencyError("closed form of Omega_1 disagrees with the direct sum")
    return OmegaTerm(i, direct, s)


def omega1_closed(alpha: Laurent, n: int) -> Laurent:
    """(alpha^{q^n} - alpha) / prod_c (c + alpha^{q^n})."""
    F = alpha.field
    aq = alpha.frobenius(F.m * n)
    den = None
    for c in F.elements():
        t = aq + c if c else aq
        den = t if den is None else den * t
    return (aq - alpha) / den


# -- the two sources ------------------------------------------------------------------


def eps_values(u: QuadUnit, N: int, l: int, top: int) -> tuple:
    """Renormalized eps-lattice generators divided by the first one (degrees 0, 1, ...)."""
    d = u.d
    basis = lam_renormalize(lam_structural(u, N, l, top + (N + 1) * d), u, N)
    v0 = basis.elements[0]
    inv0 = v0.inv()
    vals, degs = [], []
    for v in basis.elements:
        w = v * inv0
        vals.append(w.scale(u.field.inv(w.lc)))
        degs.append(w.lead)
    keep = [k for k, s in enumerate(degs) if s <= top]
    return [vals[k] for k in keep], [degs[k] for k in keep]


def zeta_eps(u: QuadUnit, N: int, l: int, n: int, prec: int, rule: str = "maxterm") -> ZetaValue:
    """zeta over the renormalized lattice sqrtD f^{-N} Lambda_eps, eps = q^{-(Nd+l)}.

    The lattice is further scaled so its first generator is 1; every consumer
    is a ratio of homogeneous degree 0, so the scaling cancels.
    """
    if not 0 <= l < u.d:
        raise DomainError(f"l must lie in [0, {u.d})")
    top = needed_degree(u.field.q, n, 0, prec, rule) + 1
    vals, degs = eps_values(u, N, l, top)
    return zeta_values(vals, degs, n, prec, rule, source={"kind": "eps", "N": N, "l": l})


def zeta_ideal(basis: NormalizedBasis, n: int, prec: int, rule: str = "maxterm") -> ZetaValue:
    top = needed_degree(basis.ring.field.q, n, 0, prec, rule) + 1
    vals = basis.elements(top)
    degs = basis.element_degrees(top)
    src = {"kind": "ideal", "degrees": basis.degrees}
    return zeta_values(vals, degs, n, prec, rule, source=src)
