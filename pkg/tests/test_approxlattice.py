import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ring, unit
from qtjinv.approxlattice import (
    approx_action_check,
    dist_to_span,
    hausdorff_dist,
    lam_bruteforce,
    lam_renormalize,
    lam_structural,
    split_eps,
)
from qtjinv.errors import DomainError, PrecisionError
from qtjinv.exactfield import Laurent, Poly, echelon_polys, nearest_poly
from qtjinv.ideals import ideal_ai, ideal_lattice

CASES = [(3, (0, 1)), (3, (0, 0, 1)), (2, (1, 1, 1)), (5, (2, 1))]


def test_structural_d1_example():
    u = unit(3, (0, 1))
    basis = lam_structural(u, 1, 0, 4)
    assert list(basis.elements) == [u.Q(1), u.Q(2), u.Q(3), u.Q(4)]


def test_structural_first_block_d2():
    u = unit(3, (0, 0, 1))
    basis = lam_structural(u, 1, 1, 6)
    assert basis.elements[0] == u.Q(1)
    assert basis.degrees()[:2] == [2, 4]


@pytest.mark.parametrize("p,a", CASES)
def test_structural_elements_are_approximations(p, a):
    u = unit(p, a)
    for e in range(1, 7):
        N, l = split_eps(u, e)
        for lam in lam_structural(u, N, l, 10).elements:
            _, dist = nearest_poly(Laurent.from_poly(lam) * u.f)
            assert dist < -e


@pytest.mark.parametrize("p,a", CASES)
def test_oracle_equivalence(p, a):
    u = unit(p, a)
    for e in range(0, 7):
        N, l = split_eps(u, e)
        s = lam_structural(u, N, l, 8)
        b = lam_bruteforce(u.f, e, 8)
        assert s.same_span(b)


def test_bruteforce_rational_is_everything(F3):
    basis = lam_bruteforce(Laurent.T(F3), 4, 6)
    assert basis.degrees() == list(range(7))


def test_bruteforce_empty():
    u = unit(3, (0, 0, 1))
    assert lam_bruteforce(u.f, 12, 3).elements == ()


def test_bruteforce_needs_precision():
    u = unit(3, (0, 1), prec=6)
    with pytest.raises(PrecisionError):
        lam_bruteforce(u.f, 10, 10)


@pytest.mark.parametrize("p,a", CASES)
def test_monotone_in_eps(p, a):
    u = unit(p, a)
    for e in range(6):
        big = lam_bruteforce(u.f, e, 9).canonical()
        small = lam_bruteforce(u.f, e + 1, 9).canonical()
        assert echelon_polys(big + small) == big


@given(st.sampled_from(CASES), st.integers(0, 6), st.data())
def test_span_closed(case, e, data):
    u = unit(*case)
    F = u.field
    basis = lam_bruteforce(u.f, e, 8)
    if not basis.elements:
        return
    cs = [data.draw(st.integers(0, F.q - 1)) for _ in basis.elements]
    combo = Poly(F)
    for c, x in zip(cs, basis.elements):
        combo = combo + x.scale(c)
    if not combo.coeffs:
        return
    _, dist = nearest_poly(Laurent.from_poly(combo) * u.f)
    assert dist is None or dist < -e


@pytest.mark.parametrize("p,a", CASES)
def test_renormalized_near_ideal_generators(p, a):
    u = unit(p, a, prec=80)
    d = u.d
    for N in (1, 2, 3):
        for l in range(d):
            lh = lam_renormalize(lam_structural(u, N, l, N * d + 2 * d), u, N)
            shift = d - N * d
            assert lh.degrees() == [x + shift for x in lam_structural(u, N, l, N * d + 2 * d).degrees()]
            for x in lh.elements:
                i, j = divmod(x.lead, d)
                target = u.f ** i * Laurent.T(u.field, j)
                assert (x - target).lead <= -(2 * N * d + l + 1)


@pytest.mark.parametrize("p,a", CASES)
def test_hausdorff_to_ideals(p, a):
    u = unit(p, a, prec=100)
    R = ring(p, a, prec=100)
    d = u.d
    top = 3 * d + 3
    prev = None
    for N in range(1, 6):
        for l in range(d):
            lh = lam_renormalize(lam_structural(u, N, l, top - d + N * d), u, N).truncated(top)
            ia = ideal_lattice(ideal_ai(R, d - 1 - l), top)
            dist = hausdorff_dist(lh, ia, top)
            assert dist <= -(2 * N * d + l + 1)
            assert hausdorff_dist(ia, lh, top) == dist
        if prev is not None:
            assert dist < prev
        prev = dist


def test_hausdorff_self_and_cut_mismatch():
    u = unit(3, (0, 0, 1))
    lh = lam_renormalize(lam_structural(u, 2, 0, 10), u, 2)
    assert hausdorff_dist(lh, lh, lh.degree_cut) is None
    with pytest.raises(DomainError):
        hausdorff_dist(lh, lh.truncated(4), lh.degree_cut)


def test_dist_to_span_member():
    u = unit(3, (0, 1))
    lh = lam_renormalize(lam_structural(u, 2, 0, 6), u, 2)
    x = lh.elements[1] + lh.elements[0].scale(2)
    assert dist_to_span(x, list(lh.elements)) is None or dist_to_span(x, list(lh.elements)) < -20


def test_action_f_example():
    u = unit(3, (0, 0, 1), prec=80)
    holds, worst = approx_action_check(u, u.f, 2, 0)
    assert holds and worst <= u.d - (2 * 2 * u.d + 1)


def test_action_identity():
    u = unit(3, (0, 0, 1), prec=80)
    assert approx_action_check(u, Laurent.const(u.field, 1), 2, 0) == (True, None)


def test_action_precondition():
    u = unit(3, (0, 0, 1), prec=80)
    alpha = u.f * Laurent.T(u.field, u.d - 1)
    with pytest.raises(DomainError):
        approx_action_check(u, alpha**4, 1, 0)


@pytest.mark.parametrize("p,a", CASES)
def test_action_family(p, a):
    u = unit(p, a, prec=100)
    T = Laurent.T(u.field)
    for alpha in (u.f, u.f * T, u.f * u.f, u.f + u.f * T):
        for N in range(1, 5):
            for l in range(u.d):
                if alpha.lead - 2 * u.d * N - l >= 0:
                    continue
                holds, _ = approx_action_check(u, alpha, N, l)
                assert holds
