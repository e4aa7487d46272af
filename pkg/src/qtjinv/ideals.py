"""The rings O_K = A[f] and A_inf1 = F_q[f, fT, ..., fT^{d-1}], their ideals,
and class numbers from point counts.

A_inf1 is a free F_q[f]-module on e_0 = 1, e_j = f T^j (1 <= j < d). An
element is stored as a d-tuple of polynomials in f (``Poly`` objects whose
variable is read as f). Since deg e_0 = 0 and deg e_j = d + j, the terms of
sum c_j(f) e_j have pairwise distinct degrees mod d, so degree and leading
coefficient are read off without cancellation.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .approxlattice import LatticeBasis
from .errors import ConsistencyError, DomainError
from .exactfield import NEG_INF, Field, Laurent, Poly
from .quadunit import QuadUnit


# ---------------------------------------------------------------------------
# O_K elements p0 + p1 f
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OKElem:
    p0: Poly
    p1: Poly

    def __add__(self, other):
        return OKElem(self.p0 + other.p0, self.p1 + other.p1)

    def __sub__(self, other):
        return OKElem(self.p0 - other.p0, self.p1 - other.p1)

    def scale(self, c: int) -> "OKElem":
        return OKElem(self.p0.scale(c), self.p1.scale(c))

    def shift(self, k: int) -> "OKElem":
        return OKElem(self.p0.shift(k), self.p1.shift(k))

    def is_zero(self) -> bool:
        return not self.p0 and not self.p1


class RingA1:
    """A_inf1 for a quadratic unit, with exact O_K arithmetic alongside."""

    def __init__(self, u: QuadUnit):
        self.u = u
        self.field = u.field
        self.d = u.d
        F = self.field
        self.zero_poly = Poly(F)
        self.one_poly = Poly(F, [1])
        self._fpow_ok = [OKElem(self.one_poly, self.zero_poly)]
        self._fpow_l = [Laurent.const(F, 1)]
        self._lock = threading.Lock()
        # e_i e_j for i, j >= 1 is f^2 T^{i+j}
        self.table = {}
        for i in range(1, self.d):
            for j in range(i, self.d):
                self.table[(i, j)] = self.from_ok(self.f_pow_ok(2).shift(i + j))

    def __eq__(self, other):
        u, v = self.u, getattr(other, "u", None)
        return isinstance(other, RingA1) and u.field == v.field and u.a == v.a and u.b == v.b

    def __hash__(self):
        return hash((self.u.a, self.u.b))

    def descriptor(self) -> dict:
        return self.u.descriptor()

    # -- O_K arithmetic ----------------------------------------------------------

    def ok_mul(self, x: OKElem, y: OKElem) -> OKElem:
        a, b = self.u.a, self.u.b
        t = x.p1 * y.p1
        return OKElem(x.p0 * y.p0 + t.scale(b), x.p0 * y.p1 + x.p1 * y.p0 + a * t)

    def ok_conj(self, x: OKElem) -> OKElem:
        return OKElem(x.p0 + self.u.a * x.p1, -x.p1)

    def ok_norm(self, x: OKElem) -> Poly:
        a, b = self.u.a, self.u.b
        return x.p0 * x.p0 + a * x.p0 * x.p1 - (x.p1 * x.p1).scale(b)

    def ok_deg_lc(self, x: OKElem):
        """Exact degree at inf1 and leading coefficient of p0 + p1 f."""
        if x.is_zero():
            return NEG_INF, 0
        d0, d1 = x.p0.deg, x.p1.deg + self.d
        if d0 > d1:
            return d0, x.p0.lc
        if d1 > d0:
            return d1, x.p1.lc
        # leading terms may cancel; the conjugate p0 + p1 f* has the degree of p0
        n = self.ok_norm(x)
        F = self.field
        return n.deg - x.p0.deg, F.div(n.lc, x.p0.lc)

    def ok_value(self, x: OKElem) -> Laurent:
        return Laurent.from_poly(x.p0) + Laurent.from_poly(x.p1) * self.u.f

    def f_pow_ok(self, k: int) -> OKElem:
        with self._lock:
            while len(self._fpow_ok) <= k:
                y = self._fpow_ok[-1]
                # f (P + R f) = b R + (P + a R) f
                self._fpow_ok.append(OKElem(y.p1.scale(self.u.b), y.p0 + self.u.a * y.p1))
            return self._fpow_ok[k]

    def f_pow(self, k: int) -> Laurent:
        with self._lock:
            while len(self._fpow_l) <= k:
                self._fpow_l.append(self._fpow_l[-1] * self.u.f)
            return self._fpow_l[k]

    # -- module coordinates --------------------------------------------------------

    def zero(self) -> tuple:
        return (self.zero_poly,) * self.d

    def one(self) -> tuple:
        return (self.one_poly,) + (self.zero_poly,) * (self.d - 1)

    def e(self, j: int) -> tuple:
        out = [self.zero_poly] * self.d
        out[j] = self.one_poly
        return tuple(out)

    def f_elem(self) -> tuple:
        return self.mod_shift(self.one(), 1)

    def fT(self, j: int) -> tuple:
        """The element f T^j (0 <= j < d)."""
        return self.f_elem() if j == 0 else self.e(j)

    def basis_elem(self, s: int) -> tuple:
        """The F_q-basis element of degree s (s = 0 or s >= d): 1 or f^k T^j."""
        d = self.d
        if s == 0:
            return self.one()
        if s < d:
            raise DomainError(f"A_inf1 has no element of degree {s}")
        k, j = divmod(s, d)
        return self.mod_shift(self.one(), k) if j == 0 else self.mod_shift(self.e(j), k - 1)

    def basis_degrees(self, top: int) -> list:
        return [0] + list(range(self.d, top + 1))

    def mod_deg(self, x: tuple):
        best = NEG_INF
        for j, c in enumerate(x):
            if c:
                s = self.d * c.deg + (0 if j == 0 else self.d + j)
                if s > best:
                    best = s
        return best

    def mod_lc(self, x: tuple) -> int:
        best, lc = NEG_INF, 0
        for j, c in enumerate(x):
            if c:
                s = self.d * c.deg + (0 if j == 0 else self.d + j)
                if s > best:
                    best, lc = s, c.lc
        return lc

    @staticmethod
    def mod_add(x: tuple, y: tuple) -> tuple:
        return tuple(a + b for a, b in zip(x, y))

    @staticmethod
    def mod_sub(x: tuple, y: tuple) -> tuple:
        return tuple(a - b for a, b in zip(x, y))

    @staticmethod
    def mod_scale(x: tuple, c: int) -> tuple:
        return tuple(a.scale(c) for a in x)

    @staticmethod
    def mod_polymul(x: tuple, c: Poly) -> tuple:
        return tuple(a * c for a in x)

    @staticmethod
    def mod_shift(x: tuple, k: int) -> tuple:
        return tuple(a.shift(k) for a in x)

    @staticmethod
    def mod_is_zero(x: tuple) -> bool:
        return not any(x)

    def mod_monic(self, x: tuple) -> tuple:
        return self.mod_scale(x, self.field.inv(self.mod_lc(x)))

    def mod_mul(self, x: tuple, y: tuple) -> tuple:
        d = self.d
        acc = [self.zero_poly] * d
        for i in range(d):
            if not x[i]:
                continue
            for j in range(d):
                if not y[j]:
                    continue
                c = x[i] * y[j]
                if i == 0 or j == 0:
                    acc[i + j] = acc[i + j] + c
                else:
                    t = self.table[(min(i, j), max(i, j))]
                    for k in range(d):
                        if t[k]:
                            acc[k] = acc[k] + c * t[k]
        return tuple(acc)

    def to_ok(self, x: tuple) -> OKElem:
        out = OKElem(self.zero_poly, self.zero_poly)
        for j, c in enumerate(x):
            for k, ck in enumerate(c.coeffs):
                if ck:
                    out = out + self.f_pow_ok(k + (j > 0)).shift(j).scale(ck)
        return out

    def from_ok(self, x: OKElem) -> tuple:
        """Greedy expansion in the basis {1, f^k T^j}; DomainError if x is not in A_inf1."""
        d = self.d
        acc = [[] for _ in range(d)]
        F = self.field
        while not x.is_zero():
            s, lc = self.ok_deg_lc(x)
            if s != 0 and s < d:
                raise DomainError("element does not lie in A_inf1")
            k, j = divmod(s, d)
            if s == 0:
                j, pk = 0, 0
                x = x - OKElem(self.one_poly.scale(lc), self.zero_poly)
            else:
                pk = k if j == 0 else k - 1
                x = x - self.f_pow_ok(k).shift(j).scale(lc)
            c = acc[j]
            if len(c) <= pk:
                c.extend([0] * (pk + 1 - len(c)))
            c[pk] = F.add(c[pk], lc)
        return tuple(Poly(F, c) for c in acc)

    def mod_value(self, x: tuple) -> Laurent:
        """Laurent expansion of a module element (relative precision of f)."""
        F = self.field
        out = Laurent.zero(F)
        for j, c in enumerate(x):
            for k, ck in enumerate(c.coeffs):
                if ck:
                    out = out + self.f_pow(k + (j > 0)).shift(j).scale(ck)
        return out

    def mod_eval(self, x: tuple, t: int, x0: int, F: Field | None = None, embed=None) -> int:
        """Value at the point (T, f) = (t, x0)."""
        F = F or self.field
        acc = 0
        tj = 1
        for j, c in enumerate(x):
            if j:
                tj = F.mul(tj, t)
            v = c(x0, F, embed)
            if j:
                v = F.mul(v, F.mul(x0, tj))
            acc = F.add(acc, v)
        return acc

    def mod_str(self, x: tuple) -> str:
        parts = []
        for j, c in enumerate(x):
            if c:
                s = c.to_str("f")
                parts.append(f"({s})" if j == 0 else f"({s})*fT^{j}")
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Ideals in Hermite form over F_q[f]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealHNF:
    """Upper-triangular F_q[f]-basis with monic pivots and reduced entries above them."""

    ring: RingA1
    rows: tuple
    denominator: Poly

    def __eq__(self, other):
        return (
            isinstance(other, IdealHNF)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.denominator == other.denominator
        )

    def __hash__(self):
        return hash(self.rows)

    @property
    def pivots(self) -> list:
        return [self.rows[i][i] for i in range(len(self.rows))]

    def index(self) -> int:
        """dim_{F_q} A_inf1 / I (integral ideals)."""
        return sum(p.deg for p in self.pivots)

    def is_unit(self) -> bool:
        return self.index() == 0 and self.denominator == self.ring.one_poly

    def contains(self, x: tuple) -> bool:
        x = list(x)
        for c, row in enumerate(self.rows):
            if x[c]:
                quo, rem = divmod(x[c], row[c])
                if rem:
                    return False
                x = [a - quo * b for a, b in zip(x, row)]
        return not any(x)

    def generators(self) -> list:
        return list(self.rows)

    def to_json(self) -> dict:
        F = self.ring.field
        return {
            "ring": self.ring.descriptor(),
            "rows": [[[F.to_str(c) for c in e.coeffs] for e in row] for row in self.rows],
            "denominator": [F.to_str(c) for c in self.denominator.coeffs],
        }


def _hnf(rows: list, d: int, field: Field) -> tuple:
    rows = [list(r) for r in rows if any(r)]
    out = []
    for c in range(d):
        while True:
            nz = [i for i, r in enumerate(rows) if r[c]]
            if len(nz) <= 1:
                break
            ip = min(nz, key=lambda i: rows[i][c].deg)
            piv = rows[ip]
            new = []
            for i, r in enumerate(rows):
                if i != ip and r[c]:
                    quo = r[c] // piv[c]
                    r = [x - quo * y for x, y in zip(r, piv)]
                new.append(r)
            rows = [r for r in new if any(r)]
        nz = [i for i, r in enumerate(rows) if r[c]]
        if not nz:
            raise DomainError("generators do not span a rank-d module (zero or degenerate ideal)")
        piv = rows.pop(nz[0])
        inv = field.inv(piv[c].lc)
        out.append([x.scale(inv) for x in piv])
    if any(any(r) for r in rows):  # pragma: no cover
        raise ConsistencyError("Hermite reduction left nonzero rows")
    for c in range(d):
        for i in range(c):
            if out[i][c]:
                quo = out[i][c] // out[c][c]
                if quo:
                    out[i] = [x - quo * y for x, y in zip(out[i], out[c])]
    return tuple(tuple(r) for r in out)


def ideal_from_gens(ring: RingA1, gens: list) -> IdealHNF:
    """Canonical form of the ideal generated by ``gens`` (module tuples or OKElem)."""
    if not gens:
        raise DomainError("need at least one generator")
    elems = [ring.from_ok(g) if isinstance(g, OKElem) else tuple(g) for g in gens]
    if all(ring.mod_is_zero(g) for g in elems):
        raise DomainError("the zero ideal has no canonical form")
    rows = [ring.mod_mul(g, ring.e(j)) for g in elems for j in range(ring.d)]
    return IdealHNF(ring, _hnf(rows, ring.d, ring.field), ring.one_poly)


def ideal_from_module(ring: RingA1, rows: list) -> IdealHNF:
    """Canonical form of an F_q[f]-module already known to be an ideal."""
    return IdealHNF(ring, _hnf(rows, ring.d, ring.field), ring.one_poly)


def ideal_mul(x: IdealHNF, y: IdealHNF) -> IdealHNF:
    if x.ring != y.ring:
        raise DomainError("ideals of different rings")
    ring = x.ring
    prods = [ring.mod_mul(r, s) for r in x.rows for s in y.rows]
    return ideal_from_gens(ring, prods)


def ideal_pow(x: IdealHNF, n: int) -> IdealHNF:
    out = unit_ideal(x.ring)
    for _ in range(n):
        out = ideal_mul(out, x)
    return out


def unit_ideal(ring: RingA1) -> IdealHNF:
    return ideal_from_gens(ring, [ring.one()])


def ideal_ai(ring: RingA1, i: int) -> IdealHNF:
    """a_i = (f, fT, ..., fT^i)."""
    if not 0 <= i <= ring.d - 1:
        raise DomainError(f"index {i} outside [0, {ring.d - 1}]")
    return ideal_from_gens(ring, [ring.fT(j) for j in range(i + 1)])


def point_ideal(ring: RingA1, t: int, x0: int) -> IdealHNF:
    """Maximal ideal of the degree-1 point (T, f) = (t, x0)."""
    F = ring.field
    a, b = ring.u.a, ring.u.b
    if F.sub(F.mul(x0, x0), F.add(F.mul(a(t), x0), b)) != 0:
        raise DomainError("(t, x0) is not on the curve")
    lin = Poly(F, [F.neg(x0), 1])
    rows = [ring.mod_polymul(ring.e(j), lin) for j in range(ring.d)]
    for j in range(1, ring.d):
        v = ring.mod_eval(ring.e(j), t, x0)
        rows.append(ring.mod_sub(ring.e(j), ring.mod_scale(ring.one(), v)))
    return ideal_from_module(ring, rows)


def degree_one_points(ring: RingA1) -> list:
    F = ring.field
    a, b = ring.u.a, ring.u.b
    pts = []
    for t in F.elements():
        at = a(t)
        for x0 in F.elements():
            if F.sub(F.mul(x0, x0), F.add(F.mul(at, x0), b)) == 0:
                pts.append((t, x0))
    return pts


# ---------------------------------------------------------------------------
# F_q-bases ordered by degree
# ---------------------------------------------------------------------------


def _reduce_by(ring: RingA1, x: tuple, basis: dict) -> tuple:
    while not ring.mod_is_zero(x):
        s = ring.mod_deg(x)
        b = basis.get(s)
        if b is None:
            break
        x = ring.mod_sub(x, ring.mod_scale(b, ring.mod_lc(x)))
    return x


def _dim_A(ring: RingA1, top: int) -> int:
    if top < 0:
        return 0
    return 1 + max(0, top - ring.d + 1)


def fq_basis(ideal: IdealHNF, top: int) -> list:
    """Monic elements of the ideal, one per attained degree <= top."""
    ring = ideal.ring
    d = ring.d
    pivot_deg = max(p.deg for p in ideal.pivots)
    big = max(top, d * (pivot_deg + 2) + d)
    want = _dim_A(ring, big) - ideal.index()
    K = big // d + 2
    for _ in range(6):
        basis: dict = {}
        for row in ideal.rows:
            for k in range(K + 1):
                x = _reduce_by(ring, ring.mod_shift(row, k), basis)
                if not ring.mod_is_zero(x):
                    basis[ring.mod_deg(x)] = ring.mod_monic(x)
        have = sum(1 for s in basis if s <= big)
        if have == want:
            return [basis[s] for s in sorted(basis) if s <= top]
        K *= 2
    raise ConsistencyError("could not complete the F_q-basis of the ideal")


def ideal_lattice(ideal: IdealHNF, top: int) -> LatticeBasis:
    """Laurent values of :func:`fq_basis` as a truncated span."""
    ring = ideal.ring
    els = tuple(ring.mod_value(x) for x in fq_basis(ideal, top))
    return LatticeBasis("ideal", els, top, {"pivots": [p.deg for p in ideal.pivots]})


def ideal_is_principal(x: IdealHNF, search_deg: int):
    """Search monic candidates of degree <= min degree + search_deg.

    A generator of a principal ideal has the minimal degree among its nonzero
    elements, and that space of candidates is one-dimensional, so the search
    is complete once it covers the minimal degree.
    """
    if search_deg < 0:
        raise DomainError("search_deg must be >= 0")
    ring = x.ring
    lowest = fq_basis(x, ring.d * (max(p.deg for p in x.pivots) + 1))
    g = lowest[0]
    if ideal_from_gens(ring, [g]) == x:
        return ("yes", g), search_deg
    return ("no_up_to_bound", None), search_deg


# ---------------------------------------------------------------------------
# Normalized bases g^{-1} a = <1, alpha_1, ..., alpha_n, f, fT, ...>
# ---------------------------------------------------------------------------


@dataclass
class NormalizedBasis:
    ideal: IdealHNF
    g: tuple
    gens: list
    alphas: list
    degrees: list
    principal: bool

    @property
    def ring(self) -> RingA1:
        return self.ideal.ring

    @property
    def n(self) -> int:
        return len(self.alphas) - 1

    def tail(self, top: int) -> list:
        """(degree, value) of f^k T^j for d <= degree <= top."""
        ring = self.ring
        out = []
        for s in range(ring.d, top + 1):
            k, j = divmod(s, ring.d)
            out.append((s, ring.f_pow(k).shift(j)))
        return out

    def elements(self, top: int) -> list:
        """Laurent basis values in increasing degree up to ``top``."""
        head = [a for a, s in zip(self.alphas, self.degrees) if s <= top]
        return head + [v for _, v in self.tail(top)]

    def element_degrees(self, top: int) -> list:
        return [s for s in self.degrees if s <= top] + list(range(self.ring.d, top + 1))


def basis_reduce(ring: RingA1, h: tuple, g: tuple, found: dict, ge: list) -> tuple:
    """Replace h by h + a g (a in A_inf1) until deg g < deg h < deg g + d, or h = 0.

    ``found`` holds already reduced window elements by degree; they are
    subtracted too so the survivors have new degrees.
    """
    dg = ring.mod_deg(g)
    d = ring.d
    while not ring.mod_is_zero(h):
        s = ring.mod_deg(h)
        rel = s - dg
        if rel < 0:
            raise ConsistencyError("found an element of smaller degree than g")
        c = ring.mod_lc(h)
        if rel == 0 or rel >= d:
            k, j = divmod(rel, d)
            if rel == 0:
                step = ge[0]
            elif j == 0:
                step = ring.mod_shift(ge[0], k)  # the c f^k g step
            else:
                step = ring.mod_shift(ge[j], k - 1)
            h = ring.mod_sub(h, ring.mod_scale(step, c))
        elif s in found:
            h = ring.mod_sub(h, ring.mod_scale(found[s], c))
        else:
            break
    return h


def normalized_basis(x: IdealHNF, degree_cut: int | None = None) -> NormalizedBasis:
    """Basis of g^{-1} x with 1 < |alpha_1| < ... < |alpha_n| < |f|.

    Principal ideals (g) give the unit basis {1, f, fT, ...}.
    """
    ring = x.ring
    d = ring.d
    ge_top = d * (max(p.deg for p in x.pivots) + 1) + d
    ref = fq_basis(x, ge_top)
    g = ref[0]
    dg = ring.mod_deg(g)
    ge = [ring.mod_mul(g, ring.e(j)) for j in range(d)]
    found: dict = {}
    queue = list(x.rows)
    while queue:
        h = basis_reduce(ring, queue.pop(0), g, found, ge)
        if ring.mod_is_zero(h):
            continue
        h = ring.mod_monic(h)
        found[ring.mod_deg(h)] = h
        queue.append(ring.mod_shift(h, 1))
        queue.extend(ring.mod_mul(h, ring.e(j)) for j in range(1, d))
    window = sorted(s for s in found)
    ref_window = [ring.mod_deg(e) for e in ref if dg < ring.mod_deg(e) < dg + d]
    if window != ref_window:
        raise ConsistencyError(f"reduction loop found degrees {window}, basis has {ref_window}")
    gval = ring.mod_value(g)
    alphas = [Laurent.const(ring.field, 1)]
    degrees = [0]
    gens = [g]
    for s in window:
        a = ring.mod_value(found[s])
        alphas.append(a / gval)
        degrees.append(s - dg)
        gens.append(found[s])
    for a, s in zip(alphas, degrees):
        if a.lead != s:
            raise ConsistencyError("alpha degree mismatch")
    return NormalizedBasis(x, g, gens, alphas, degrees, principal=not window)


# ---------------------------------------------------------------------------
# Class numbers by point counting
# ---------------------------------------------------------------------------


def _squarefree_part(D: Poly) -> Poly:
    out = Poly(D.field, [1])
    for fac, e in D.factor().items():
        if e % 2:
            out = out * fac
    return out


def count_points(u: QuadUnit, r: int) -> int:
    """#points over F_{q^r} on the smooth model of X^2 - aX - b = 0 (both places at infinity included)."""
    F = u.field
    E, emb = F.extension(r)
    total = 2
    if F.p != 2:
        D0 = _squarefree_part(u.D)
        for t in E.elements():
            total += 1 + E.chi(D0(t, E, emb))
        return total
    bE = emb[u.b]
    for t in E.elements():
        at = u.a(t, E, emb)
        if at == 0:
            total += 1
        else:
            c = E.div(bE, E.mul(at, at))
            total += 2 if E.trace(c) == 0 else 0
    return total


def genus(u: QuadUnit) -> int:
    if u.field.p != 2:
        return _squarefree_part(u.D).deg // 2 - 1
    if any(e > 1 for e in u.a.factor().values()):
        raise DomainError("characteristic 2 point counting needs a squarefree")
    return u.d - 1


def l_polynomial(u: QuadUnit) -> list:
    """Coefficients c_0..c_{2g} of L(X), from N_1..N_g and the functional equation."""
    q = u.field.q
    g = genus(u)
    S = [None] + [count_points(u, r) - 1 - q**r for r in range(1, g + 1)]
    c = [Fraction(1)]
    for k in range(1, g + 1):
        c.append(sum(S[i] * c[k - i] for i in range(1, k + 1)) / k)
    if any(x.denominator != 1 for x in c):
        raise ConsistencyError("non-integral L-polynomial coefficient")
    c = [int(x) for x in c]
    for k in range(g + 1, 2 * g + 1):
        c.append(q ** (k - g) * c[2 * g - k])
    for k, ck in enumerate(c):
        if abs(ck) > comb(2 * g, k) * q ** (k / 2) + 1e-9:
            raise ConsistencyError(f"L-polynomial coefficient {k} violates the Weil bound")
    return c


def class_numbers(u: QuadUnit) -> tuple:
    """(h_K, h_A1, h_OK) with h_K = L(1), h_A1 = h_K and h_OK = h_K / d.

    The relation needs F_q[T, f] to be the maximal order, so D must be
    squarefree (a squarefree in characteristic 2).
    """
    if u.field.p != 2 and _squarefree_part(u.D) != u.D.monic():
        raise DomainError("D is not squarefree; F_q[T, f] is not the maximal order")
    hK = sum(l_polynomial(u))
    if hK % u.d:
        raise ConsistencyError(f"d = {u.d} does not divide h_K = {hK}")
    return hK, hK, hK // u.d
