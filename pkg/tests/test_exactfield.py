import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import elems, field, field_and_laurents, field_and_polys, fields, laurent_in, unit
from qtjinv.errors import DomainError, PrecisionError
from qtjinv.exactfield import (
    Field,
    Laurent,
    Poly,
    echelon_polys,
    from_text,
    nearest_poly,
    nullspace,
    to_text,
)


# -- F_q ------------------------------------------------------------------------


def test_f3_inverse():
    assert field(3).inv(2) == 2


def test_f4_reduction():
    F = field(2, 2)
    assert F.modulus == (1, 1, 1)
    x = F.from_coords([0, 1])
    assert F.coords(F.mul(x, x)) == (1, 1)


def test_default_modulus_f9():
    assert field(3, 2).modulus == (2, 1, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(DomainError):
        Field(3, 2, modulus=(0, 0, 1))


@pytest.mark.parametrize("bad", [(4, 1), (3, 0), (2, 13)])
def test_bad_fields(bad):
    with pytest.raises(DomainError):
        Field(*bad)


def test_inverse_of_zero():
    with pytest.raises(DomainError):
        field(5).inv(0)


@given(fields(), st.data())
def test_field_axioms(F, data):
    a, b, c = (data.draw(elems(F)) for _ in range(3))
    assert F.add(a, F.neg(a)) == 0
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q - 1) == 1


@given(fields(), st.data())
def test_frobenius_additive(F, data):
    a, b = data.draw(elems(F)), data.draw(elems(F))
    assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    assert F.frob(a, F.m) == a


@given(fields(), st.data())
def test_sqrt_branch(F, data):
    assume(F.p != 2)
    a = data.draw(elems(F, nonzero=True))
    y = F.mul(a, a)
    r = F.sqrt(y)
    assert F.mul(r, r) == y
    roots = {a, F.neg(a)}
    assert r == min(roots, key=lambda z: (F.dlog[z] % 2, F.dlog[z]))


def test_text_roundtrip_field():
    F = field(3, 2)
    for x in F.elements():
        assert F.parse(F.to_str(x)) == x


# -- A = F_q[T] -----------------------------------------------------------------


def test_poly_examples(F3):
    T = Poly.T(F3)
    assert (T + 1) * (T + 2) == T**2 + 2
    q, r = divmod(T**2 + 1, T)
    assert q == T and r == Poly.const(F3, 1)


def test_poly_divmod_by_zero(F3):
    with pytest.raises(DomainError):
        divmod(Poly.T(F3), Poly(F3))


def test_zero_degree(F3):
    assert Poly(F3).deg == -math.inf
    assert Poly(F3, [0, 0]).coeffs == ()


@given(field_and_polys(3))
def test_ring_axioms(data):
    F, (a, b, c) = data
    assert a + (-a) == Poly(F)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if b.coeffs:
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.deg < b.deg


# -- Laurent --------------------------------------------------------------------


def test_cancellation_renormalizes(F3):
    x = Laurent.T(F3, 1) + Laurent.T(F3, -1)
    y = x - Laurent.T(F3, 1)
    assert y.lead == -1 and y.is_exact


def test_sqrt_example(F3):
    x = Laurent.make(F3, 2, [1, 0, 1, 0], -2)
    r = x.sqrt()
    assert r.lead == 1
    assert list(r.coeffs) == [1, 0, 2, 0]
    assert (r * r).agrees_with(x)


def test_sqrt_char2_unsupported():
    F = field(2)
    with pytest.raises(DomainError):
        Laurent.make(F, 2, [1, 0, 1], -1).sqrt()


def test_exact_vs_precision_zero(F3):
    x = Laurent.make(F3, 0, [1, 2], -2)
    z = x - x
    assert z.is_zero_to_precision and not z.is_zero
    assert (Laurent.T(F3) - Laurent.T(F3)).is_zero


@given(field_and_laurents(1))
def test_inverse(data):
    F, (x,) = data
    one = x * x.inv()
    assert one.lead == 0 and one.agrees_with(Laurent.const(F, 1))
    assert one.prec == x.prec


@given(field_and_laurents(2))
def test_ultrametric_and_multiplicative(data):
    F, (x, y) = data
    s = x + y
    if s.coeffs:
        assert s.lead <= max(x.lead, y.lead)
    if x.lead != y.lead:
        assert s.lead == max(x.lead, y.lead)
    assert (x * y).lead == x.lead + y.lead


@given(fields(), st.data())
def test_precision_soundness(F, data):
    # the same chain at two precisions agrees on every claimed coefficient
    lead = data.draw(st.integers(-3, 3))
    cs = [data.draw(elems(F, nonzero=True))] + [data.draw(elems(F)) for _ in range(29)]
    ds = [data.draw(elems(F, nonzero=True))] + [data.draw(elems(F)) for _ in range(29)]
    hi_x = Laurent.make(F, lead, cs, lead - 30)
    hi_y = Laurent.make(F, 1, ds, 1 - 30)
    lo_x, lo_y = hi_x.truncate(12), hi_y.truncate(12)

    def chain(x, y):
        return (x * y + x**3) / (y - x.shift(5)) + x.frobenius()

    lo, hi = chain(lo_x, lo_y), chain(hi_x, hi_y)
    assert lo.agrees_with(hi)
    assert hi.prec >= lo.prec


@given(field_and_laurents(1))
def test_text_roundtrip(data):
    F, (x,) = data
    assert from_text(F, to_text(x)) == x


def test_text_special_values(F3):
    assert to_text(Laurent.zero(F3)) == "0"
    assert to_text(Laurent.zero_to(F3, -4)) == "O(T^-4)"
    assert to_text(Laurent.from_poly(Poly.T(F3, 2) + 1)) == "T^2:[1,0,1]:prec=exact"


def test_insufficient_overlap(F3):
    x = Laurent.make(F3, 0, [1], -1)
    with pytest.raises(PrecisionError):
        (x - x).inv()


# -- nearest polynomial -----------------------------------------------------------


def test_nearest_poly_split(F3):
    T = Poly.T(F3)
    x = Laurent.from_poly(T**2 + 2) + Laurent.T(F3, -3)
    a, dist = nearest_poly(x)
    assert a == T**2 + 2 and dist == -3


def test_nearest_poly_of_poly(F3):
    T = Poly.T(F3)
    assert nearest_poly(Laurent.from_poly(T**3 + T)) == (T**3 + T, None)


def test_nearest_poly_of_f():
    u = unit(3, (0, 1))
    a, dist = nearest_poly(u.f)
    assert a == Poly.T(u.field) and dist == -1


def test_nearest_poly_needs_precision(F3):
    with pytest.raises(PrecisionError):
        nearest_poly(Laurent.make(F3, 3, [1, 1], 1))


@given(fields(), st.data())
def test_nearest_poly_uniqueness(F, data):
    x = data.draw(laurent_in(F, min_prec=10, max_prec=14))
    assume(x.floor < -1)
    frac = [c for e, c in zip(range(x.lead, x.floor, -1), x.coeffs) if e < 0]
    if not any(frac):
        with pytest.raises(PrecisionError):
            nearest_poly(x)
        return
    a, dist = nearest_poly(x)
    other = a + Poly(F, [data.draw(elems(F, nonzero=True))])
    assert dist is None or dist < 0
    assert (x - Laurent.from_poly(other)).lead >= 0


# -- linear algebra ----------------------------------------------------------------


@given(fields(), st.data())
def test_nullspace(F, data):
    ncols = data.draw(st.integers(1, 6))
    rows = [[data.draw(elems(F)) for _ in range(ncols)] for _ in range(data.draw(st.integers(1, 5)))]
    for v in nullspace(rows, ncols, F):
        for r in rows:
            acc = 0
            for x, y in zip(r, v):
                acc = F.add(acc, F.mul(x, y))
            assert acc == 0


@given(field_and_polys(4))
def test_echelon_one_per_degree(data):
    F, polys = data
    basis = echelon_polys(polys)
    degs = [b.deg for b in basis]
    assert degs == sorted(set(degs))
    assert all(b.is_monic() for b in basis)
