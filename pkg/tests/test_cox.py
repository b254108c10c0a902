import random

import pytest

from toricres import Poly, parse_polynomial as P
from toricres.cox import (
    ArityMismatch,
    CoxRing,
    NotOfDegreeKBeta,
    SupportOutsidePolytope,
    affine_jacobian,
    bracket_expansion,
    split_torus,
    toric_affine_jacobian,
)
from toricres.lattice import convex_hull, from_inequalities, scaled_lattice_points

TV = ["t1", "t2"]
P2 = from_inequalities([(1, 0), (0, 1), (-1, -1)], [0, 0, 1])
SCROLL = from_inequalities([(0, -1), (-1, -2), (0, 1), (1, 0)], [1, 3, 0, 0])
PENTAGON = from_inequalities([(-1, 0), (-1, -1), (0, -1), (2, 1), (1, 2)], [3, 4, 3, -3, -3])
SEGMENT = from_inequalities([(1,), (-1,)], [0, 1])


# -- grading -----------------------------------------------------------------------


def test_offsets_have_degree_beta():
    for poly in (P2, SCROLL, PENTAGON):
        ring = CoxRing(poly)
        assert ring.degree_of(poly.offsets) == ring.beta


def test_coordinate_monomials_have_degree_zero():
    for poly in (P2, SCROLL, PENTAGON):
        ring = CoxRing(poly)
        zero = ring.degree_of((0,) * ring.s)
        for j in range(ring.n):
            col = tuple(e[j] for e in ring.eta)
            assert ring.degree_of(col) == zero


def test_euler_degree_of_projective_plane():
    ring = CoxRing(P2)
    assert ring.beta0 == ring.degree_of((1, 1, 1)) == ring.degree_of((0, 0, 3))
    assert ring.degree_of((1, 0, 0)) == ring.degree_of((0, 0, 1))
    assert ring.degree_of((1, 0, 0)) != ring.degree_of((0, 0, 2))


# -- homogenization ----------------------------------------------------------------------


def test_pentagon_homogenizations():
    ring = CoxRing(PENTAGON)
    f1 = P("a0*t1 + a1*t1*t2 + a2*t2^2")
    f2 = P("b0*t2 + b1*t1*t2 + b2*t1^2")
    F1 = ring.homogenize(f1, TV, offsets=(1, 2, 2, -2, -1))
    F2 = ring.homogenize(f2, TV, offsets=(2, 2, 1, -1, -2))
    assert F1 == P("a0*x2*x3^2 + a1*x3*x4*x5^2 + a2*x1*x5^3")
    assert F2 == P("b0*x1^2*x2 + b1*x1*x4^2*x5 + b2*x3*x4^3")


def test_constant_homogenizes_to_offsets():
    for poly in (P2, SCROLL, PENTAGON):
        ring = CoxRing(poly)
        if not poly.contains((0, 0)):
            continue
        assert ring.homogenize(P("1"), TV) == ring.monomial(poly.offsets)


def test_quadric_over_doubled_simplex():
    ring = CoxRing(from_inequalities([(1, 0), (0, 1), (-1, -1)], [0, 0, 2]))
    f = P("a0*t1^2 + a1*t1*t2 + a2*t2^2 + a3*t1 + a4*t2 + a5")
    # z^2 f(x/z, y/z) with x, y, z = x1, x2, x3
    expected = P("a0*x1^2 + a1*x1*x2 + a2*x2^2 + a3*x1*x3 + a4*x2*x3 + a5*x3^2")
    assert ring.homogenize(f, TV) == expected


def test_support_outside():
    ring = CoxRing(P2)
    with pytest.raises(SupportOutsidePolytope):
        ring.homogenize(P("t1^2"), TV)


# -- monomial/point bijection ----------------------------------------------------------


def test_monomial_point_round_trip():
    for poly in (P2, SCROLL, PENTAGON):
        ring = CoxRing(poly)
        for k in (1, 2, 3):
            for m in scaled_lattice_points(poly, k):
                assert ring.monomial_point(ring.exponent(m, k), k) == m
            for m in scaled_lattice_points(poly, k, strict=True):
                assert ring.monomial_point(ring.exponent(m, k, interior=True), k, interior=True) == m


def test_offsets_map_to_origin():
    ring = CoxRing(SCROLL)
    assert ring.monomial_point(tuple(2 * b for b in SCROLL.offsets), 2) == (0, 0)


def test_wrong_degree():
    ring = CoxRing(P2)
    with pytest.raises(NotOfDegreeKBeta):
        ring.monomial_point((1, 0, 0), 2)


def test_dehomogenize_inverts_homogenize():
    ring = CoxRing(SCROLL)
    f = P("a1 + a2*t1 + a3*t1^2 + a4*t1^3 + a5*t2 + a6*t1*t2")
    assert ring.dehomogenize(ring.homogenize(f, TV), TV, 1) == f


# -- graded monomials ----------------------------------------------------------------


def test_scroll_critical_monomials():
    ring = CoxRing(SCROLL)
    got = {ring.monomial(a) for a in ring.graded_monomials(3, interior=True)}
    expected = {
        P(s)
        for s in (
            "x1*x2^5", "x1*x2^4*x4", "x1*x2^3*x4^2", "x1*x2^2*x4^3", "x1*x2*x4^4",
            "x1*x4^5", "x2^3*x3", "x2^2*x3*x4", "x2*x3*x4^2", "x3*x4^3",
        )
    }
    assert got == expected


def test_projective_cubics():
    ring = CoxRing(P2)
    mons = ring.graded_monomials(3)
    assert len(mons) == 10
    assert all(sum(a) == 3 for a in mons)


def test_no_interior_points():
    assert CoxRing(P2).graded_monomials(1, interior=True) == []


# -- Euler form and Jacobians -----------------------------------------------------------------


def test_euler_form_projective_plane():
    # x dy^dz - y dx^dz + z dx^dy with x, y, z = x1, x2, x3
    table = {I: (d, comp) for I, d, comp in CoxRing(P2).euler_form()}
    assert table == {(0, 1): (1, (0, 0, 1)), (0, 2): (-1, (0, 1, 0)), (1, 2): (1, (1, 0, 0))}


def test_euler_form_segment():
    assert CoxRing(SEGMENT).euler_form() == [((0,), 1, (0, 1)), ((1,), -1, (1, 0))]


def test_euler_form_size_bound():
    ring = CoxRing(PENTAGON)
    assert len(ring.euler_form()) <= 10


def test_toric_jacobian_of_linear_pair():
    ring = CoxRing(SEGMENT)
    F = [P("a0*x2 + a1*x1"), P("b0*x2 + b1*x1")]
    assert ring.toric_jacobian(F, [1, 1]) == P("a0*b1 - a1*b0")


def test_toric_jacobian_is_homogenized_affine_jacobian():
    rng = random.Random(3)
    for poly in (P2.scaled(2), SCROLL):
        ring = CoxRing(poly)
        pts = scaled_lattice_points(poly, 1)
        for _ in range(3):
            f = [sum((rng.randint(-5, 5) * Poly.monomial(m, 1, TV) for m in pts), Poly.zero(TV)) for _ in range(3)]
            F = [ring.homogenize(fi, TV) for fi in f]
            J = ring.toric_jacobian(F, [1, 1, 1])
            j = affine_jacobian(f, TV)
            prod = ring.monomial((1,) * ring.s)
            assert prod * J == ring.homogenize(j, TV, 3)


def test_toric_jacobian_vanishes_at_common_zero():
    ring = CoxRing(SCROLL)
    rng = random.Random(17)
    pts = scaled_lattice_points(SCROLL, 1)
    root = (2, -3)
    for _ in range(5):
        f = []
        for _ in range(3):
            c = {m: rng.randint(-9, 9) for m in pts}
            g = sum((v * Poly.monomial(m, 1, TV) for m, v in c.items()), Poly.zero(TV))
            g = g - Poly.const(g.eval_number(dict(zip(TV, root))), TV)
            f.append(g)
        F = [ring.homogenize(fi, TV) for fi in f]
        J = ring.toric_jacobian(F, [1, 1, 1])
        # back to the torus through x1*...*xs*J = homogenized j
        val = ring.dehomogenize(J * ring.monomial((1,) * ring.s), TV, 3)
        assert val.eval_number(dict(zip(TV, root))) == 0


def test_toric_jacobian_arity():
    with pytest.raises(ArityMismatch):
        CoxRing(P2).toric_jacobian([P("x1")], [1])


def test_affine_jacobian_linear_pair():
    assert affine_jacobian([P("a0 + a1*t"), P("b0 + b1*t")], ["t"]) == P("a0*b1*t - a1*b0*t")


def test_affine_equals_bracket_expansion():
    rng = random.Random(21)
    for n in (1, 2):
        tv = TV[:n]
        for _ in range(15):
            k = rng.randint(n + 1, 5)
            supp = list({tuple(rng.randint(0, 3) for _ in range(n)) for _ in range(k)})
            f = [sum((rng.randint(-4, 4) * Poly.monomial(m, 1, tv) for m in supp), Poly.zero(tv)) for _ in range(n + 1)]
            j = affine_jacobian(f, tv)
            assert j == bracket_expansion(f, tv)
            if len(supp) < n + 1:
                continue
            hull = convex_hull(supp)
            if hull.full_dimensional:
                for m in split_torus(j, tv):
                    assert hull.contains(m, k=n + 1, strict=True)


def test_bracket_single_subset():
    f = [P("a0 + a1*t"), P("b0 + b1*t")]
    assert bracket_expansion(f, ["t"]) == P("(a0*b1 - a1*b0)*t")


def test_bracket_proportional():
    f = [P("a0 + a1*t + a2*t^2"), P("3*a0 + 3*a1*t + 3*a2*t^2")]
    assert bracket_expansion(f, ["t"]).is_zero()


def test_toric_affine_jacobian():
    f1 = P("a0*t1^2 + a1*t1*t2 + a2*t2^2 + a3*t1 + a4*t2 + a5")
    f2 = P("b0*t1^2 + b1*t1*t2 + b2*t2^2 + b3*t1 + b4*t2 + b5")
    expected = P("t1*t2") * (f1.diff("t1") * f2.diff("t2") - f1.diff("t2") * f2.diff("t1"))
    assert toric_affine_jacobian([f1, f2], TV) == expected
    assert toric_affine_jacobian([P("a0 + a1*t")], ["t"]) == P("a1*t")
    mono = [P("t1^2*t2"), P("t1^-1*t2^3")]
    assert toric_affine_jacobian(mono, TV) == P("7*t1*t2^4")
