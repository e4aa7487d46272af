"""Quadratic units f with f^2 = a f + b, their Binet polynomials Q_n and the basis B."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .errors import ConsistencyError, DomainError, PrecisionError
from .exactfield import Field, Laurent, Poly, nearest_poly


@dataclass(frozen=True)
class BasisElement:
    n: int
    l: int
    poly: Poly
    err_exp: int


class QuadUnit:
    """The large root f of X^2 - a X - b, a monic of degree d, b in F_q^*.

    ``f`` and ``fstar`` are Laurent expansions with ``prec`` known
    coefficients; ``sqrtD`` satisfies f = (a + sqrtD)/2 in odd characteristic
    and equals ``a`` in characteristic 2.
    """

    def __init__(self, field: Field, a: Poly, b: int, prec: int):
        if not isinstance(a, Poly) or a.field != field:
            raise DomainError("a must be a polynomial over the given field")
        if a.deg == -math.inf or a.deg < 1:
            raise DomainError("a must have degree >= 1")
        if not a.is_monic():
            raise DomainError("a must be monic")
        field.check(b)
        if b == 0:
            raise DomainError("b must be a nonzero constant")
        if prec < 2:
            raise DomainError("prec must be >= 2")
        self.field, self.a, self.b, self.prec = field, a, b, prec
        self.d = a.deg
        self.D = a * a + Poly.const(field, field.mul(field.from_int(4), b))
        self.f = self._newton(prec)
        self.fstar = self.f.inv().scale(field.neg(b))
        if field.p == 2:
            self.sqrtD = Laurent.from_poly(a)
        else:
            self.sqrtD = self.f.scale(field.from_int(2)) - Laurent.from_poly(a)
        self._Q = [Poly.const(field, 1), a]
        self._lock = threading.Lock()

    def _newton(self, prec: int) -> Laurent:
        F = self.field
        A = Laurent.from_poly(self.a)
        work = prec + 2
        x = A.truncate(work)
        two = F.from_int(2)
        # Newton for X^2 - aX - b; in char 2 the derivative 2X - a is -a
        for _ in range(math.ceil(math.log2(work)) + 2):
            x = (x * x + self.b) / (x.scale(two) - A)
            x = x.truncate(work)
        res = x * x - A * x - self.b
        if res.coeffs:
            raise ConsistencyError("Newton iteration did not converge")
        # |x - f| = |res| / |2f - a| = |res| q^{-d}
        x = x.with_floor(res.floor - self.d)
        return x.truncate(prec)

    def __repr__(self):
        return f"QuadUnit(q={self.field.q}, a={self.a.to_str()}, b={self.field.to_str(self.b)}, prec={self.prec})"

    def with_prec(self, prec: int) -> "QuadUnit":
        return QuadUnit(self.field, self.a, self.b, prec)

    def descriptor(self) -> dict:
        F = self.field
        return {
            **F.descriptor(),
            "a": [F.to_str(c) for c in self.a.coeffs],
            "b": F.to_str(self.b),
            "prec": self.prec,
        }

    # -- Binet sequence ----------------------------------------------------------

    def Q(self, n: int) -> Poly:
        """Q_0 = 1, Q_1 = a, Q_{n+1} = a Q_n + b Q_{n-1}."""
        if n < 0:
            raise DomainError("n must be >= 0")
        with self._lock:
            while len(self._Q) <= n:
                self._Q.append(self.a * self._Q[-1] + self._Q[-2].scale(self.b))
            return self._Q[n]

    def binet(self, n: int) -> Laurent:
        """(f^{n+1} - f*^{n+1}) / sqrtD, an independent evaluation of Q_n."""
        return (self.f ** (n + 1) - self.fstar ** (n + 1)) / self.sqrtD

    def basis_element(self, n: int, l: int) -> BasisElement:
        if not 0 <= l < self.d:
            raise DomainError(f"l must lie in [0, {self.d})")
        return BasisElement(n, l, self.Q(n).shift(l), l - (n + 1) * self.d)

    def error_exp(self, n: int, l: int) -> int:
        """Certified exponent of ||T^l Q_n f||, checked against nearest_poly."""
        el = self.basis_element(n, l)
        x = Laurent.from_poly(el.poly) * self.f
        if x.floor >= el.err_exp:
            raise PrecisionError(f"prec {self.prec} cannot certify the error at n={n}")
        near, dist = nearest_poly(x)
        if near != self.Q(n + 1).shift(l) or dist != el.err_exp:
            raise ConsistencyError(f"error law fails at n={n}, l={l}: got {dist}")
        return dist


def qu_make(field: Field, a: Poly, b: int, prec: int) -> QuadUnit:
    return QuadUnit(field, a, b, prec)


def qu_Qn(u: QuadUnit, n: int) -> Poly:
    return u.Q(n)


def qu_error(u: QuadUnit, n: int, l: int) -> int:
    return u.error_exp(n, l)
