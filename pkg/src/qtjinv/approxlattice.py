"""The approximation spaces Lambda_eps(f) = {lam in A : ||lam f|| < eps}.

eps is always q**(-e). For a quadratic unit, e = N d + l with 0 <= l < d.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import DomainError, PrecisionError
from .exactfield import Laurent, Poly, echelon_polys, nullspace, to_text
from .quadunit import QuadUnit


@dataclass(frozen=True)
class LatticeBasis:
    """Generators of a truncated F_q-span, one per degree, increasing degree.

    ``elements`` are Poly for integral spans and Laurent for renormalized ones.
    """

    kind: str
    elements: tuple
    degree_cut: int
    params: dict = dc_field(default_factory=dict, compare=False)

    def degrees(self) -> list:
        return [_deg(x) for x in self.elements]

    def canonical(self) -> list:
        """Fully reduced monic basis (integral spans only)."""
        return echelon_polys(self.elements)

    def same_span(self, other: "LatticeBasis") -> bool:
        return self.canonical() == other.canonical()

    def truncated(self, cut: int) -> "LatticeBasis":
        els = tuple(x for x in self.elements if _deg(x) <= cut)
        return LatticeBasis(self.kind, els, cut, dict(self.params))

    def csv_rows(self) -> list:
        rows = []
        for x in self.elements:
            text = x.to_str() if isinstance(x, Poly) else to_text(x)
            rows.append((self.kind, _deg(x), text))
        return rows


def _deg(x):
    return x.deg if isinstance(x, Poly) else x.lead


def split_eps(u: QuadUnit, e: int) -> tuple:
    """(N, l) with e = N d + l."""
    if e < 0:
        raise DomainError("eps exponent must be >= 0")
    return divmod(e, u.d)


def lam_structural(u: QuadUnit, N: int, l: int, degree_cut: int) -> LatticeBasis:
    """Basis T^{d-1-l} Q_N, ..., Q_N, then T^j Q_{N+i} (i >= 1, j < d)."""
    d = u.d
    if not 0 <= l < d:
        raise DomainError(f"l must lie in [0, {d})")
    if N < 0:
        raise DomainError("N must be >= 0")
    if degree_cut < N * d:
        raise DomainError("degree_cut must be at least N d")
    els = [u.Q(N).shift(j) for j in range(d - l)]
    i = N + 1
    while i * d <= degree_cut:
        els.extend(u.Q(i).shift(j) for j in range(d))
        i += 1
    els = [x for x in els if x.deg <= degree_cut]
    els.sort(key=lambda x: x.deg)
    return LatticeBasis("structural", tuple(els), degree_cut, {"N": N, "l": l})


def lam_bruteforce(x: Laurent, eps_exp: int, degbound: int) -> LatticeBasis:
    """Solve for lam with deg lam <= degbound and ||lam x|| < q**(-eps_exp).

    The coefficients of lam x at exponents -1, ..., -eps_exp must vanish;
    this is a linear system over F_q in the coefficients of lam.
    """
    F = x.field
    if eps_exp < 0 or degbound < 0:
        raise DomainError("eps_exp and degbound must be >= 0")
    if x.floor is not None and x.floor >= -eps_exp - degbound:
        raise PrecisionError(
            f"need coefficients of x down to T^{-eps_exp - degbound}, known only above T^{x.floor}"
        )
    rows = []
    for t in range(-eps_exp, 0):
        rows.append([x.coefficient(t - k) for k in range(degbound + 1)])
    if rows:
        vecs = nullspace(rows, degbound + 1, F)
    else:
        vecs = [[int(i == k) for i in range(degbound + 1)] for k in range(degbound + 1)]
    els = echelon_polys(Poly(F, v) for v in vecs)
    return LatticeBasis("bruteforce", tuple(els), degbound, {"eps_exp": eps_exp})


def lam_renormalize(basis: LatticeBasis, u: QuadUnit, N: int) -> LatticeBasis:
    """Map each generator lam to sqrtD f^{-N} lam (leading coefficient 1)."""
    if basis.kind != "structural":
        raise DomainError("renormalization needs a structural basis")
    scale = u.sqrtD * u.f.inv() ** N if N else u.sqrtD
    els = []
    for lam in basis.elements:
        y = Laurent.from_poly(lam) * scale
        if not y.coeffs:
            raise PrecisionError("renormalized generator vanishes to precision")
        els.append(y.scale(u.field.inv(y.lc)))
    shift = u.d - N * u.d
    return LatticeBasis(
        "renormalized", tuple(els), basis.degree_cut + shift, {**basis.params, "N": N, "shift": shift}
    )


# -- distances --------------------------------------------------------------------


def _residual(x: Laurent, span: list) -> Laurent:
    by_deg = {s.lead: s for s in span if s.coeffs}
    if any(x == s for s in by_deg.values()):
        return Laurent.zero(x.field)
    F = x.field
    while x.coeffs and x.lead in by_deg:
        s = by_deg[x.lead]
        x = x - s.scale(F.div(x.lc, s.lc))
    return x


def dist_to_span(x: Laurent, span: list):
    """Certified upper bound (exponent) for the distance from x to the span.

    ``span`` must hold Laurent values with pairwise distinct leading degrees.
    The bound is exact whenever the reduction stops at a known nonzero
    coefficient; None means distance 0.
    """
    r = _residual(x, span)
    if r.is_zero:
        return None
    return r.lead if r.coeffs else r.floor


def _as_laurent(x):
    return Laurent.from_poly(x) if isinstance(x, Poly) else x


def hausdorff_dist(Sa: LatticeBasis, Sb: LatticeBasis, degree_cut: int):
    """Symmetrized max generator distance between two truncated spans."""
    if Sa.degree_cut != Sb.degree_cut or Sa.degree_cut != degree_cut:
        raise DomainError("both bases must be truncated at the same degree_cut")
    A = [_as_laurent(x) for x in Sa.elements]
    B = [_as_laurent(x) for x in Sb.elements]
    worst = None
    for xs, other in ((A, B), (B, A)):
        for x in xs:
            dd = dist_to_span(x, other)
            if dd is not None and (worst is None or dd > worst):
                worst = dd
    return worst


def approx_action_check(u: QuadUnit, alpha: Laurent, N: int, l: int, degree_cut: int | None = None):
    """Check alpha * Lhat is within |alpha| delta of Lhat, delta = q^{-2dN-l}.

    Returns ``(holds, witness)`` where ``witness`` is the largest observed
    distance exponent (None when every image lies in the span).
    """
    d = u.d
    if not alpha.coeffs:
        raise DomainError("alpha must be nonzero")
    a_deg = alpha.lead
    delta = -2 * d * N - l
    if a_deg + delta >= 0:
        raise DomainError("need delta < |alpha|^{-1}")
    cut = (N + 2) * d if degree_cut is None else degree_cut
    shift = d - N * d
    # generators of Lhat up to degree cut, and the target span up to cut + deg alpha
    src = lam_renormalize(lam_structural(u, N, l, cut - shift), u, N)
    tgt = lam_renormalize(lam_structural(u, N, l, cut - shift + a_deg), u, N)
    bound = a_deg + delta
    worst = None
    for lam in src.elements:
        r = _residual(alpha * lam, list(tgt.elements))
        if r.is_zero:
            continue
        if not r.coeffs and r.floor >= bound:
            raise PrecisionError("working precision cannot resolve the inclusion bound")
        dd = r.lead if r.coeffs else r.floor
        if worst is None or dd > worst:
            worst = dd
    return (worst is None or worst < bound), worst
