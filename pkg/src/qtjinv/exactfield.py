"""Exact arithmetic for F_q, A = F_q[T] and truncated Laurent series in 1/T.

Field elements are plain ints in ``range(q)``: the element with power-basis
coordinates ``(c_0, ..., c_{m-1})`` over F_p has index ``sum(c_i * p**i)``.

Absolute values on k_inf are reported by their base-q exponent: ``|x| = q**e``
is returned as ``e``; the exact zero is reported as ``None``.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Sequence

from . import kernels
from .errors import DomainError, PrecisionError

NEG_INF = float("-inf")

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for k in range(2, math.isqrt(n) + 1):
        if n % k == 0:
            return False
    return True


def _polymulmod(a, b, mod, p):
    # a, b: coordinate lists of length m, mod: monic, low -> high, length m+1
    m = len(mod) - 1
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for i in range(m + 1):
                prod[k - m + i] = (prod[k - m + i] - c * mod[i]) % p
    return prod[:m]


class Field:
    """The finite field F_q, q = p**m, as F_p[x]/(modulus).

    When ``modulus`` is omitted for ``m > 1`` the least primitive monic
    polynomial (ordered by coefficient index) is used, so two runs always pick
    the same representation.
    """

    MAX_ORDER = 4096

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise DomainError(f"characteristic {p} is not prime")
        if m < 1:
            raise DomainError("extension degree must be >= 1")
        q = p**m
        if q > self.MAX_ORDER:
            raise DomainError(f"field order {q} exceeds table limit {self.MAX_ORDER}")
        self.p, self.m, self.q = p, m, q
        if m == 1:
            if modulus is not None and tuple(modulus) not in ((0, 1),):
                raise DomainError("prime fields take the placeholder modulus (0, 1)")
            self.modulus = (0, 1)
        elif modulus is None:
            self.modulus = self._default_modulus()
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise DomainError("modulus must be monic of degree m")
            self.modulus = modulus
            self._build_tables()
            if not self._is_field():
                raise DomainError(f"modulus {modulus} is reducible over F_{p}")
        if not hasattr(self, "addt"):
            self._build_tables()
        self._build_aux()

    # -- construction -------------------------------------------------------

    def _default_modulus(self):
        p, m = self.p, self.m
        for i in range(p**m):
            tail = [(i // p**k) % p for k in range(m)]
            if tail[0] == 0:
                continue
            self.modulus = tuple(tail) + (1,)
            self._build_tables()
            if self._is_field() and self._order(p) == self.q - 1:
                return self.modulus
        raise DomainError("no primitive modulus found")  # pragma: no cover

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        coords = [tuple((i // p**k) % p for k in range(m)) for i in range(q)]
        index = {c: i for i, c in enumerate(coords)}
        self._coords = coords
        self.addt = [0] * (q * q)
        self.mult = [0] * (q * q)
        for i in range(q):
            for j in range(q):
                s = tuple((x + y) % p for x, y in zip(coords[i], coords[j]))
                self.addt[i * q + j] = index[s]
                if m == 1:
                    self.mult[i * q + j] = (i * j) % p
                else:
                    self.mult[i * q + j] = index[tuple(_polymulmod(coords[i], coords[j], self.modulus, p))]

    def _is_field(self):
        q = self.q
        for i in range(1, q):
            if not any(self.mult[i * q + j] == 1 for j in range(1, q)):
                return False
        return True

    def _order(self, x):
        k, y = 1, x
        while y != 1:
            y = self.mult[y * self.q + x]
            k += 1
            if k > self.q:
                return 0
        return k

    def _build_aux(self):
        q = self.q
        self.negt = [0] * q
        self.invt = [0] * q
        for i in range(q):
            for j in range(q):
                if self.addt[i * q + j] == 0:
                    self.negt[i] = j
                if i and self.mult[i * q + j] == 1:
                    self.invt[i] = j
        self.generator = next(g for g in range(1, q) if self._order(g) == q - 1) if q > 2 else 1
        self.dlog = {}
        y = 1
        for k in range(q - 1):
            self.dlog[y] = k
            y = self.mult[y * q + self.generator]
        self.frobt = [self.pow(x, self.p) for x in range(q)]
        self._sqrt = {}
        for y in range(q):
            self._sqrt.setdefault(self.mul(y, y), []).append(y)
        self.kspec = (self.p, self.q, self.addt, self.mult, self.invt)

    # -- identity -------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"Field({self.p})"
        return f"Field({self.p}, {self.m}, modulus={self.modulus})"

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    # -- arithmetic -----------------------------------------------------------

    @property
    def char(self) -> int:
        return self.p

    def elements(self) -> range:
        return range(self.q)

    def check(self, x: int) -> int:
        if not isinstance(x, int) or not 0 <= x < self.q:
            raise DomainError(f"{x!r} is not an element of F_{self.q}")
        return x

    def add(self, a: int, b: int) -> int:
        return self.addt[a * self.q + b]

    def sub(self, a: int, b: int) -> int:
        return self.addt[a * self.q + self.negt[b]]

    def neg(self, a: int) -> int:
        return self.negt[a]

    def mul(self, a: int, b: int) -> int:
        return self.mult[a * self.q + b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("inverse of zero in F_q")
        return self.invt[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mult[r * self.q + a]
            a = self.mult[a * self.q + a]
            n >>= 1
        return r

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F_p -> F_q."""
        return n % self.p

    def frob(self, a: int, k: int = 1) -> int:
        """``a ** (p**k)``."""
        for _ in range(k % self.m if self.m > 1 else 0):
            a = self.frobt[a]
        return a

    def trace(self, a: int) -> int:
        """Absolute trace F_q -> F_p (returned as an element of F_p)."""
        s, y = 0, a
        for _ in range(self.m):
            s = self.add(s, y)
            y = self.frobt[y]
        return s

    def is_square(self, a: int) -> bool:
        return a in self._sqrt

    def chi(self, a: int) -> int:
        """Quadratic character: 0 at 0, 1 on nonzero squares, -1 otherwise."""
        if a == 0:
            return 0
        return 1 if a in self._sqrt else -1

    def sqrt(self, a: int) -> int:
        """Canonical square root: even discrete log first, then the smaller log."""
        roots = self._sqrt.get(a)
        if roots is None:
            raise DomainError(f"{a} is not a square in F_{self.q}")
        if a == 0:
            return 0
        return min(roots, key=lambda r: (self.dlog[r] % 2, self.dlog[r]))

    # -- coordinates and text -------------------------------------------------

    def coords(self, a: int) -> tuple:
        return self._coords[a]

    def from_coords(self, coords: Iterable[int]) -> int:
        coords = list(coords)
        if len(coords) != self.m:
            raise DomainError("wrong number of coordinates")
        return sum((c % self.p) * self.p**k for k, c in enumerate(coords))

    def to_str(self, a: int) -> str:
        """Comma-free base-p digit string, most significant coordinate first."""
        return "".join(_DIGITS[c] for c in reversed(self._coords[a]))

    def parse(self, s: str) -> int:
        s = s.strip()
        if len(s) != self.m:
            # allow an integer literal in prime fields (e.g. "-1")
            if self.m == 1:
                return int(s) % self.p
            raise DomainError(f"expected {self.m} base-{self.p} digits, got {s!r}")
        digits = [_DIGITS.index(ch) for ch in reversed(s.lower())]
        if any(d >= self.p for d in digits):
            raise DomainError(f"digit out of range in {s!r}")
        return self.from_coords(digits)

    # -- extensions -----------------------------------------------------------

    def extension(self, r: int):
        """Return ``(F_{q^r}, embed)`` where ``embed[x]`` maps F_q into the extension."""
        if r == 1:
            return self, list(range(self.q))
        big = Field(self.p, self.m * r)
        if self.m == 1:
            return big, list(range(self.q))
        # a root of our modulus in the big field gives the embedding
        for z in range(big.q):
            acc = 0
            for c in reversed(self.modulus):
                acc = big.add(big.mul(acc, z), c)
            if acc == 0:
                break
        else:  # pragma: no cover
            raise DomainError("no embedding found")
        embed = []
        for x in range(self.q):
            acc = 0
            for c in reversed(self._coords[x]):
                acc = big.add(big.mul(acc, z), c)
            embed.append(acc)
        return big, embed


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Element of F_q[T]; coefficients low degree first, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def T(cls, field: Field, k: int = 1) -> "Poly":
        return cls(field, [0] * k + [1])

    @classmethod
    def const(cls, field: Field, c: int) -> "Poly":
        return cls(field, [c])

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lc == 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly(self.field, [other])
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self.to_str()})"

    def to_str(self, var: str = "T") -> str:
        if not self.coeffs:
            return "0"
        F = self.field
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            cs = F.to_str(c)
            if k == 0:
                terms.append(cs)
            else:
                mon = var if k == 1 else f"{var}^{k}"
                terms.append(mon if c == 1 else f"{cs}*{mon}")
        return " + ".join(terms)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field:
                raise DomainError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return Poly(self.field, [self.field.check(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, kernels.axpy(self.coeffs, other.coeffs, 1, n, F.p, F.q, F.addt, F.mult))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [self.field.negt[c] for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "Poly":
        F = self.field
        if c == 0:
            return Poly(F)
        return Poly(F, [F.mul(c, x) for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(self.field.check(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly(self.field)
        F = self.field
        n = len(self.coeffs) + len(other.coeffs) - 1
        return Poly(F, kernels.mul_trunc(self.coeffs, other.coeffs, n, *F.kspec))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise DomainError("negative power of a polynomial")
        r, b = Poly(self.field, [1]), self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def shift(self, k: int) -> "Poly":
        """Multiply by T**k (k >= 0)."""
        if not self.coeffs:
            return self
        return Poly(self.field, [0] * k + list(self.coeffs))

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.coeffs:
            raise DomainError("division by the zero polynomial")
        F = self.field
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        inv_lc = F.inv(other.lc)
        quo = [0] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c:
                c = F.mul(c, inv_lc)
                quo[k - db] = c
                for i, b in enumerate(other.coeffs):
                    rem[k - db + i] = F.sub(rem[k - db + i], F.mul(c, b))
        return Poly(F, quo), Poly(F, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise DomainError("zero polynomial has no monic associate")
        return self.scale(self.field.inv(self.lc))

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, self._coerce(other)
        while b.coeffs:
            a, b = b, a % b
        return a.monic() if a.coeffs else a

    def derivative(self) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(F.from_int(k), c) for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int, field: Field | None = None, embed: Sequence[int] | None = None) -> int:
        """Evaluate at ``x``; with ``field``/``embed`` evaluate in an extension."""
        F = field or self.field
        acc = 0
        for c in reversed(self.coeffs):
            if embed is not None:
                c = embed[c]
            acc = F.add(F.mul(acc, x), c)
        return acc

    def factor(self) -> dict:
        """Factorization into monic irreducibles by trial division (small degrees)."""
        if not self.coeffs:
            raise DomainError("cannot factor zero")
        F = self.field
        rest = self.monic()
        out: dict = {}
        k = 1
        while rest.deg >= 2 * k:
            for tail in range(F.q**k):
                cand = Poly(F, [(tail // F.q**i) % F.q for i in range(k)] + [1])
                while True:
                    quo, r = divmod(rest, cand)
                    if r.coeffs:
                        break
                    out[cand] = out.get(cand, 0) + 1
                    rest = quo
            k += 1
        if rest.deg >= 1:
            out[rest] = out.get(rest, 0) + 1
        return out


# ---------------------------------------------------------------------------
# Laurent series in 1/T
# ---------------------------------------------------------------------------


class Laurent:
    """Truncated element of k_inf = F_q((1/T)).

    A nonzero value is ``T**lead * (c_0 + c_1/T + ...)`` with ``c_0 != 0``.
    ``floor`` is None for exact values (all coefficients after ``coeffs``
    vanish); otherwise exponents ``<= floor`` are unknown and
    ``len(coeffs) == lead - floor``. A value with no known nonzero
    coefficient is either the exact zero (``floor is None``) or "zero to
    precision" (``|x| <= q**floor``).
    """

    __slots__ = ("field", "lead", "coeffs", "floor")

    def __init__(self, field: Field, lead: int, coeffs: tuple, floor):
        self.field = field
        self.lead = lead
        self.coeffs = coeffs
        self.floor = floor

    # -- constructors -----------------------------------------------------------

    @classmethod
    def make(cls, field: Field, lead: int, coeffs: Sequence[int], floor=None) -> "Laurent":
        c = list(coeffs)
        k = 0
        while k < len(c) and c[k] == 0:
            k += 1
        if floor is None:
            c = c[k:]
            while c and c[-1] == 0:
                c.pop()
            if not c:
                return cls(field, 0, (), None)
            return cls(field, lead - k, tuple(c), None)
        lead -= k
        c = c[k:]
        n = lead - floor
        if n <= 0 or not c:
            return cls.zero_to(field, floor)
        if len(c) < n:
            c.extend([0] * (n - len(c)))
        return cls(field, lead, tuple(c[:n]), floor)

    @classmethod
    def zero(cls, field: Field) -> "Laurent":
        return cls(field, 0, (), None)

    @classmethod
    def zero_to(cls, field: Field, floor: int) -> "Laurent":
        return cls(field, floor, (), floor)

    @classmethod
    def const(cls, field: Field, c: int) -> "Laurent":
        return cls.make(field, 0, [field.check(c)])

    @classmethod
    def T(cls, field: Field, e: int = 1) -> "Laurent":
        return cls(field, e, (1,), None)

    @classmethod
    def from_poly(cls, poly: Poly, prec: int | None = None) -> "Laurent":
        F = poly.field
        if not poly.coeffs:
            return cls.zero(F)
        x = cls.make(F, poly.deg, list(reversed(poly.coeffs)))
        return x if prec is None else x.truncate(prec)

    @classmethod
    def from_rational(cls, num: Poly, den: Poly, prec: int) -> "Laurent":
        return cls.from_poly(num) * cls.from_poly(den).inv(prec)

    # -- predicates and accessors -------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.floor is None

    @property
    def is_zero(self) -> bool:
        """Exact zero."""
        return not self.coeffs and self.floor is None

    @property
    def is_zero_to_precision(self) -> bool:
        return not self.coeffs and self.floor is not None

    @property
    def is_nonzero(self) -> bool:
        return bool(self.coeffs)

    @property
    def prec(self):
        """Number of known coefficients (inf for exact values)."""
        if self.floor is None:
            return math.inf
        if not self.coeffs:
            return 0
        return self.lead - self.floor

    @property
    def deg(self):
        """Exponent of |x| (= -v_inf); NEG_INF for the exact zero."""
        if self.coeffs:
            return self.lead
        if self.floor is None:
            return NEG_INF
        raise PrecisionError(f"value vanishes to precision O(T^{self.floor})")

    def abs_exp(self):
        """``e`` with ``|x| = q**e``, or None for the exact zero."""
        d = self.deg
        return None if d == NEG_INF else d

    @property
    def lc(self) -> int:
        if not self.coeffs:
            raise PrecisionError("leading coefficient of a zero value")
        return self.coeffs[0]

    def coefficient(self, e: int) -> int:
        """Coefficient of T**e."""
        if self.floor is not None and e <= self.floor:
            raise PrecisionError(f"coefficient of T^{e} is below the known window")
        k = self.lead - e
        if not self.coeffs or k < 0 or k >= len(self.coeffs):
            return 0
        return self.coeffs[k]

    def window(self, top: int, n: int) -> list:
        """Coefficients of T**top, T**(top-1), ... (n entries, zero-padded)."""
        out = [0] * n
        if not self.coeffs:
            return out
        off = top - self.lead
        for k, c in enumerate(self.coeffs):
            i = off + k
            if 0 <= i < n:
                out[i] = c
        return out

    def __repr__(self):
        return f"Laurent({to_text(self)})"

    def __eq__(self, other):
        return (
            isinstance(other, Laurent)
            and self.field == other.field
            and self.lead == other.lead
            and self.coeffs == other.coeffs
            and self.floor == other.floor
        )

    def __hash__(self):
        return hash((self.lead, self.coeffs, self.floor))

    # -- precision management ---------------------------------------------------

    def truncate(self, prec: int) -> "Laurent":
        """Keep at most ``prec`` known coefficients (result is inexact)."""
        if prec < 1:
            raise DomainError("precision must be >= 1")
        if not self.coeffs:
            return self if self.floor is not None else self
        n = min(prec, self.prec)
        return Laurent.make(self.field, self.lead, self.coeffs[:n], self.lead - n)

    def with_floor(self, floor: int) -> "Laurent":
        """Forget every coefficient at exponent ``<= floor``."""
        if self.floor is not None and self.floor >= floor:
            return self
        if not self.coeffs:
            return Laurent.zero_to(self.field, floor) if self.floor is not None or floor is not None else self
        return Laurent.make(self.field, self.lead, self.coeffs[: max(self.lead - floor, 0)], floor)

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            if other.field != self.field:
                raise DomainError("series over different fields")
            return other
        if isinstance(other, Poly):
            return Laurent.from_poly(other)
        if isinstance(other, int):
            return Laurent.const(self.field, other)
        return NotImplemented

    def __neg__(self):
        F = self.field
        return Laurent(F, self.lead, tuple(F.negt[c] for c in self.coeffs), self.floor)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._axpy(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._axpy(other, self.field.negt[1])

    def __rsub__(self, other):
        return (-self) + other

    def _axpy(self, other: "Laurent", c: int) -> "Laurent":
        F = self.field
        if other.is_zero:
            return self
        if self.is_zero:
            return other.scale(c)
        fl = _max_floor(self.floor, other.floor)
        parts = [x for x in (self, other) if x.coeffs]
        if not parts:
            return Laurent.zero_to(F, fl)
        top = max(x.lead for x in parts)
        bottom = min(x.lead - len(x.coeffs) + 1 for x in parts) if fl is None else fl + 1
        n = top - bottom + 1
        if n <= 0:
            return Laurent.zero_to(F, fl)
        out = kernels.axpy(self.window(top, n), other.window(top, n), c, n, F.p, F.q, F.addt, F.mult)
        return Laurent.make(F, top, out, fl)

    def scale(self, c: int) -> "Laurent":
        F = self.field
        if c == 0:
            return Laurent.zero(F)
        if c == 1:
            return self
        return Laurent(F, self.lead, tuple(F.mul(c, x) for x in self.coeffs), self.floor)

    def shift(self, k: int) -> "Laurent":
        """Multiply by T**k."""
        if not self.coeffs:
            return self if self.floor is None else Laurent.zero_to(self.field, self.floor + k)
        return Laurent(self.field, self.lead + k, self.coeffs, None if self.floor is None else self.floor + k)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(self.field.check(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if self.is_zero or other.is_zero:
            return Laurent.zero(F)
        if not self.coeffs or not other.coeffs:
            # at least one factor is zero to precision
            b1 = self.floor if not self.coeffs else self.lead
            b2 = other.floor if not other.coeffs else other.lead
            return Laurent.zero_to(F, b1 + b2)
        lead = self.lead + other.lead
        if self.floor is None and other.floor is None:
            n = len(self.coeffs) + len(other.coeffs) - 1
            return Laurent(F, lead, tuple(kernels.mul_trunc(self.coeffs, other.coeffs, n, *F.kspec)), None)
        n = min(self.prec, other.prec)
        c = kernels.mul_trunc(self.coeffs[:n], other.coeffs[:n], n, *F.kspec)
        return Laurent(F, lead, tuple(c), lead - n)

    __rmul__ = __mul__

    def inv(self, prec: int | None = None) -> "Laurent":
        """Multiplicative inverse; exact inputs need an explicit ``prec``."""
        F = self.field
        if self.is_zero:
            raise DomainError("inverse of zero")
        if not self.coeffs:
            raise PrecisionError(f"inverse of a value that vanishes to O(T^{self.floor})")
        if self.floor is None:
            if len(self.coeffs) == 1:
                return Laurent(F, -self.lead, (F.inv(self.coeffs[0]),), None)
            if prec is None:
                raise PrecisionError("inverse of an exact non-monomial needs a precision")
            n = prec
        else:
            n = self.prec if prec is None else min(prec, self.prec)
        c = kernels.inv_trunc(self.coeffs[:n], n, *F.kspec)
        return Laurent(F, -self.lead, tuple(c), -self.lead - n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.floor is None and len(other.coeffs) > 1:
            if self.floor is None:
                raise PrecisionError("exact / exact needs an explicit precision; use div()")
            return self * other.inv(self.prec if self.coeffs else 1)
        return self * other.inv()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def div(self, other, prec: int) -> "Laurent":
        other = self._coerce(other)
        return self.truncate(prec) * other.inv(prec)

    def frobenius(self, k: int = 1, cap: int | None = None) -> "Laurent":
        """``x ** (p**k)``, keeping at most ``cap`` known coefficients."""
        F = self.field
        pk = F.p**k
        if not self.coeffs:
            return self if self.floor is None else Laurent.zero_to(F, self.floor * pk)
        lead = self.lead * pk
        if self.floor is None:
            full = (len(self.coeffs) - 1) * pk + 1
            n = full if cap is None else min(full, cap)
            floor = None if n == full else lead - n
        else:
            n = self.prec * pk
            if cap is not None:
                n = min(n, cap)
            floor = lead - n
        out = [0] * n
        for i, c in enumerate(self.coeffs):
            j = i * pk
            if j >= n:
                break
            out[j] = F.frob(c, k)
        return Laurent(F, lead, tuple(out), floor)

    def __pow__(self, n: int) -> "Laurent":
        F = self.field
        if n == 0:
            return Laurent.const(F, 1)
        if n < 0:
            return self.inv() ** (-n)
        if not self.coeffs:
            if self.floor is None:
                return self
            return Laurent.zero_to(F, self.floor * n) if self.floor > 0 else Laurent.zero_to(F, self.floor)
        cap = None if self.floor is None else self.prec
        result = None
        k = 0
        while n:
            n, digit = divmod(n, F.p)
            if digit:
                base = self.frobenius(k, cap) if k else self
                term = _pow_small(base, digit)
                result = term if result is None else result * term
            k += 1
        return result

    def sqrt(self) -> "Laurent":
        """Square root (odd characteristic) with the canonical leading root."""
        F = self.field
        if F.p == 2:
            raise DomainError("square roots in characteristic 2 are not supported")
        if self.is_zero:
            return self
        if not self.coeffs:
            raise PrecisionError("square root of a value that vanishes to precision")
        if self.lead % 2:
            raise DomainError("square root needs an even leading exponent")
        c0 = self.coeffs[0]
        if not F.is_square(c0):
            raise DomainError("leading coefficient is not a square")
        r0 = F.sqrt(c0)
        if self.floor is None:
            if len(self.coeffs) == 1:
                return Laurent(F, self.lead // 2, (r0,), None)
            raise PrecisionError("square root of an exact non-monomial needs truncate() first")
        n = self.prec
        u = [F.mul(F.inv(c0), c) for c in self.coeffs]
        # y^2 = u with y_0 = 1: 2 y_k = u_k - sum_{i=1}^{k-1} y_i y_{k-i}
        inv2 = F.inv(F.from_int(2))
        y = [1] + [0] * (n - 1)
        for k in range(1, n):
            s = u[k]
            for i in range(1, k):
                s = F.sub(s, F.mul(y[i], y[k - i]))
            y[k] = F.mul(s, inv2)
        y = [F.mul(r0, c) for c in y]
        return Laurent(F, self.lead // 2, tuple(y), self.lead // 2 - n)

    def agrees_with(self, other: "Laurent") -> bool:
        """True when the difference vanishes on the common known window."""
        d = self - other
        return not d.coeffs

    def agreement(self, other: "Laurent") -> int:
        """Number of leading coefficients on which the two values agree."""
        if not self.coeffs:
            return 0
        d = self - other
        if not d.coeffs:
            return min(self.prec, other.prec) if other.coeffs else 0
        return max(self.lead - d.lead, 0)


def _pow_small(x: Laurent, n: int) -> Laurent:
    r = None
    b = x
    while n:
        if n & 1:
            r = b if r is None else r * b
        n >>= 1
        if n:
            b = b * b
    return r


def _max_floor(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def nearest_poly(x: Laurent):
    """Return ``(a, dist)``: the polynomial part of ``x`` and ``|x - a|``.

    ``dist`` is the base-q exponent of the distance (always < 0), or None when
    ``x`` is an exact polynomial.
    """
    F = x.field
    if x.is_zero:
        return Poly(F), None
    if x.floor is not None and x.floor >= 0:
        raise PrecisionError("coefficients of nonnegative exponents are not all known")
    if not x.coeffs:
        raise PrecisionError("fractional part vanishes to precision")
    top = max(x.lead, 0)
    coeffs = [x.coefficient(e) for e in range(0, top + 1)] if x.lead >= 0 else []
    a = Poly(F, coeffs)
    frac = x - Laurent.from_poly(a)
    if frac.is_zero:
        return a, None
    if not frac.coeffs:
        raise PrecisionError(f"fractional part vanishes to O(T^{frac.floor}); distance undetermined")
    return a, frac.lead


# ---------------------------------------------------------------------------
# Linear algebra over F_q
# ---------------------------------------------------------------------------


def rref(rows: list, ncols: int, field: Field):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    F = field
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, v) for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def nullspace(rows: list, ncols: int, field: Field) -> list:
    """Basis of ``{v : rows * v = 0}``, one vector per free column."""
    F = field
    R, pivots = rref(rows, ncols, F) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[fc])
        basis.append(v)
    return basis


def echelon_polys(polys: Iterable[Poly]) -> list:
    """Canonical basis of the F_q-span: monic, distinct degrees, fully reduced.

    Each basis polynomial has zero coefficient at every other basis element's
    degree, so two spans are equal exactly when these lists are equal.
    """
    basis: dict = {}
    for p in polys:
        p = _reduce_poly(p, basis)
        if p.coeffs:
            p = p.monic()
            # new pivot: clear its degree from existing elements
            dp = p.deg
            for dg, b in list(basis.items()):
                c = b.coeffs[dp] if dp < len(b.coeffs) else 0
                if c:
                    basis[dg] = b - p.scale(c)
            basis[dp] = p
    changed = True
    while changed:
        changed = False
        for dg in sorted(basis):
            b = basis[dg]
            for d2 in basis:
                if d2 < dg and d2 < len(b.coeffs) and b.coeffs[d2]:
                    b = b - basis[d2].scale(b.coeffs[d2])
                    changed = True
            basis[dg] = b
    return [basis[k] for k in sorted(basis)]


def _reduce_poly(p: Poly, basis: dict) -> Poly:
    while p.coeffs and p.deg in basis:
        p = p - basis[p.deg].scale(p.lc)
    return p


# ---------------------------------------------------------------------------
# Text serialization
# ---------------------------------------------------------------------------

_TEXT_RE = re.compile(r"^T\^(-?\d+):\[([^\]]*)\]:prec=(\d+|exact)$")
_ZERO_TO_RE = re.compile(r"^O\(T\^(-?\d+)\)$")


def to_text(x: Laurent) -> str:
    """Canonical text form ``T^e:[c0,c1,...]:prec=P``.

    Exact values carry ``prec=exact``; the exact zero is ``0`` and a value
    that vanishes to precision is ``O(T^f)``.
    """
    if x.is_zero:
        return "0"
    if not x.coeffs:
        return f"O(T^{x.floor})"
    body = ",".join(x.field.to_str(c) for c in x.coeffs)
    prec = "exact" if x.floor is None else str(x.prec)
    return f"T^{x.lead}:[{body}]:prec={prec}"


def from_text(field: Field, s: str) -> Laurent:
    s = s.strip()
    if s == "0":
        return Laurent.zero(field)
    m = _ZERO_TO_RE.match(s)
    if m:
        return Laurent.zero_to(field, int(m.group(1)))
    m = _TEXT_RE.match(s)
    if not m:
        raise DomainError(f"malformed Laurent text {s!r}")
    lead = int(m.group(1))
    coeffs = [field.parse(t) for t in m.group(2).split(",")] if m.group(2) else []
    if m.group(3) == "exact":
        return Laurent.make(field, lead, coeffs)
    P = int(m.group(3))
    if len(coeffs) != P:
        raise DomainError("coefficient count does not match prec")
    return Laurent.make(field, lead, coeffs, lead - P)
