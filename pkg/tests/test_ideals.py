import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import field, ring, unit
from qtjinv.errors import DomainError
from qtjinv.exactfield import Poly
from qtjinv.ideals import (
    class_numbers,
    count_points,
    degree_one_points,
    fq_basis,
    ideal_ai,
    ideal_from_gens,
    ideal_from_module,
    ideal_is_principal,
    ideal_mul,
    ideal_pow,
    l_polynomial,
    normalized_basis,
    point_ideal,
    unit_ideal,
)
from qtjinv.jinv import family_index
from qtjinv.quadunit import QuadUnit

RINGS = [(3, (0, 0, 1)), (3, (2, 1, 0, 1)), (2, (1, 1, 1)), (5, (2, 0, 1)), (3, (0, 1))]


@st.composite
def ring_elements(draw, R, count=2):
    F = R.field
    out = []
    for _ in range(count):
        x = tuple(Poly(F, draw(st.lists(st.integers(0, F.q - 1), max_size=3))) for _ in range(R.d))
        out.append(x)
    return out


def test_unit_from_one():
    R = ring(3, (0, 0, 1))
    I = ideal_from_gens(R, [R.one()])
    assert I.is_unit() and I == unit_ideal(R)


def test_f_gives_a0():
    R = ring(3, (0, 0, 1))
    assert ideal_from_gens(R, [R.f_elem()]) == ideal_ai(R, 0)


def test_zero_ideal_rejected():
    R = ring(3, (0, 0, 1))
    with pytest.raises(DomainError):
        ideal_from_gens(R, [R.zero()])


def test_index_out_of_range():
    with pytest.raises(DomainError):
        ideal_ai(ring(3, (0, 0, 1)), 2)


@pytest.mark.parametrize("p,a", RINGS)
def test_idempotent_canonical_form(p, a):
    R = ring(p, a)
    for i in range(R.d):
        I = ideal_ai(R, i)
        assert ideal_from_module(R, list(I.rows)) == I


@pytest.mark.parametrize("p,a", RINGS)
def test_multiplication_table_associative(p, a):
    R = ring(p, a)
    gens = [R.e(j) for j in range(R.d)] + [R.f_elem()]
    for x in gens:
        for y in gens:
            for z in gens:
                assert R.mod_mul(R.mod_mul(x, y), z) == R.mod_mul(x, R.mod_mul(y, z))


@pytest.mark.parametrize("p,a", RINGS)
def test_mul_values_match_laurent(p, a):
    R = ring(p, a)
    x, y = R.mod_add(R.e(R.d - 1), R.one()), R.mod_shift(R.f_elem(), 1)
    assert R.mod_value(R.mod_mul(x, y)).agrees_with(R.mod_value(x) * R.mod_value(y))


@given(st.sampled_from(RINGS[:3]), st.data())
def test_generator_scrambling(case, data):
    R = ring(*case)
    I = ideal_ai(R, R.d - 1)
    gens = list(I.rows)
    extra = data.draw(ring_elements(R, 2))
    mixed = [R.mod_add(g, R.mod_mul(gens[0], e)) for g, e in zip(gens[1:], extra)]
    assert ideal_from_gens(R, [gens[0]] + mixed + gens[1:]) == I


@pytest.mark.parametrize("p,a", RINGS)
def test_cyclic_family(p, a):
    R = ring(p, a)
    d = R.d
    top = ideal_ai(R, d - 1)
    for i in range(1, d + 1):
        expect = ideal_ai(R, (d - i) % d) if i < d else ideal_ai(R, 0)
        assert ideal_pow(top, i) == expect
    assert [family_index(ideal_ai(R, i)) for i in range(d)] == list(range(d))


@pytest.mark.parametrize("p,a", RINGS)
def test_mul_laws(p, a):
    R = ring(p, a)
    one = unit_ideal(R)
    I, J = ideal_ai(R, R.d - 1), ideal_ai(R, 0)
    assert ideal_mul(I, one) == I
    assert ideal_mul(I, J) == ideal_mul(J, I)
    K = ideal_mul(I, I)
    assert ideal_mul(ideal_mul(I, J), K) == ideal_mul(I, ideal_mul(J, K))


@pytest.mark.parametrize("p,a", RINGS)
def test_top_ideal_maximal(p, a):
    R = ring(p, a)
    assert ideal_ai(R, R.d - 1).index() == 1


def test_principality_examples():
    R = ring(3, (0, 0, 1))
    (tag, gen), _ = ideal_is_principal(ideal_ai(R, 0), 0)
    assert tag == "yes" and ideal_from_gens(R, [gen]) == ideal_ai(R, 0)
    (tag, gen), _ = ideal_is_principal(unit_ideal(R), 0)
    assert tag == "yes" and gen == R.one()
    (tag, gen), bound = ideal_is_principal(ideal_ai(R, 1), 6)
    assert tag == "no_up_to_bound" and gen is None and bound == 6


def test_normalized_unit():
    R = ring(3, (0, 0, 1))
    nb = normalized_basis(unit_ideal(R))
    assert nb.degrees == [0] and nb.principal
    assert nb.element_degrees(5) == [0, 2, 3, 4, 5]


@pytest.mark.parametrize("p,a", RINGS)
def test_normalized_inequalities(p, a):
    R = ring(p, a)
    d = R.d
    for i in range(d):
        nb = normalized_basis(ideal_ai(R, i))
        degs = nb.degrees
        assert degs[0] == 0 and nb.alphas[0].lead == 0
        assert all(0 < s < d for s in degs[1:])
        assert degs == sorted(set(degs))
        assert [x.lead for x in nb.alphas] == degs
        full = nb.element_degrees(3 * d)
        assert len(set(full)) == len(full)


def test_normalized_a1_q3():
    R = ring(3, (0, 0, 1))
    nb = normalized_basis(ideal_ai(R, 1))
    assert nb.degrees == [0, 1]


def test_degree_one_points_q3():
    R = ring(3, (0, 0, 1))
    assert degree_one_points(R) == [(0, 1), (0, 2)]
    for pt in degree_one_points(R):
        assert point_ideal(R, *pt).index() == 1


# -- class numbers ------------------------------------------------------------------


def _affine_count(u, r):
    # direct solution count of x^2 - a(t) x - b over F_{q^r}, plus the two places at infinity
    E, emb = u.field.extension(r)
    b = emb[u.b]
    n = 2
    for t in E.elements():
        at = u.a(t, E, emb)
        for x in E.elements():
            if E.sub(E.mul(x, x), E.add(E.mul(at, x), b)) == 0:
                n += 1
    return n


@pytest.mark.parametrize("p,a,b", [(3, (0, 0, 1), 1), (3, (2, 1, 0, 1), 1), (5, (2, 0, 1), 1), (2, (1, 1, 1), 1)])
def test_point_count_oracle(p, a, b):
    u = unit(p, a, b)
    for r in range(1, u.d):
        assert count_points(u, r) == _affine_count(u, r)


def test_class_number_examples():
    assert class_numbers(unit(3, (0, 1))) == (1, 1, 1)
    assert class_numbers(unit(3, (0, 0, 1))) == (4, 4, 2)
    assert l_polynomial(unit(3, (0, 0, 1))) == [1, 0, 3]


@st.composite
def small_units(draw):
    p = draw(st.sampled_from([3, 5]))
    d = draw(st.integers(1, 3))
    F = field(p)
    a = [draw(st.integers(0, p - 1)) for _ in range(d)] + [1]
    return QuadUnit(F, Poly(F, a), draw(st.integers(1, p - 1)), 12)


@given(small_units())
def test_d_divides_hK(u):
    if any(e > 1 for e in u.D.factor().values()):
        with pytest.raises(DomainError):
            class_numbers(u)
        return
    hK, hA, hO = class_numbers(u)
    assert hK == hA == hO * u.d


def test_genus_one_h_is_point_count():
    u = unit(3, (0, 0, 1))
    assert class_numbers(u)[0] == count_points(u, 1)


def test_fq_basis_degrees():
    R = ring(3, (0, 0, 1))
    basis = fq_basis(ideal_ai(R, 1), 8)
    assert [R.mod_deg(x) for x in basis] == [2, 3, 4, 5, 6, 7, 8]
