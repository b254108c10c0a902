"""The twelve acceptance criteria, one test (or test group) per criterion.

Run ``pytest tests/test_acceptance.py`` (or this file directly); the
terminal summary prints one PASS/FAIL line per criterion.
"""
import itertools
import math
import random
import sys
import time
from fractions import Fraction

import pytest

from helpers import (
    F1,
    F2,
    P32,
    PENT_DEN,
    PENT_F1,
    PENT_F2,
    PENT_NUM,
    QUADRANGLE,
    R_INF,
    R_X,
    R_Y,
    SIMPLEX,
    TV,
    VERONESE,
    up_to_sign,
)
from toricres import Poly, exact_divide, parse_polynomial as P
from toricres.cox import CoxRing, affine_jacobian, bracket_expansion, split_torus, toric_affine_jacobian
from toricres.lattice import (
    convex_hull,
    from_inequalities,
    minkowski_sum,
    mixed_volume,
    normalized_volume,
    scaled_lattice_points,
    summand_offsets,
)
from toricres.linalg import rank
from toricres.ratfunc import RationalFunction
from toricres.residue import (
    global_residue_mixed,
    global_residue_unmixed,
    toric_residue,
    univariate_residue_oracle,
)
from toricres.resultant import (
    build_phi,
    facet_resultants,
    monomial_specialized_resultant,
    phi_layout,
    resultant_via_det,
    total_det_degree,
    univariate_sylvester,
)

criterion = pytest.mark.criterion


def rand_q(rng, lo=-30, hi=30):
    return Fraction(rng.randint(lo, hi), rng.randint(1, 9))


def nonzero_q(rng):
    while True:
        q = rand_q(rng)
        if q:
            return q


# -- 1 ---------------------------------------------------------------------------------


@criterion(1, "facet resultants of two generic conics")
def test_criterion_01_facet_resultants():
    t0 = time.perf_counter()
    fs = facet_resultants([F1, F2], TV)
    elapsed = time.perf_counter() - t0
    got = fs.polynomials()
    assert len(got) == 3
    for target in (R_INF, R_X, R_Y):
        assert len(target) == 7
        assert sum(up_to_sign(g, target) for g in got) == 1
    assert elapsed < 10


# -- 2 ---------------------------------------------------------------------------------


@criterion(2, "global residue of t1^3 t2^2 for two generic conics")
def test_criterion_02_p32():
    t0 = time.perf_counter()
    rv = global_residue_unmixed([F1, F2], TV, (3, 2), VERONESE)
    elapsed = time.perf_counter() - t0
    assert len(P32) == 20
    assert rv.value in (RationalFunction(P32, R_INF ** 2), RationalFunction(-P32, R_INF ** 2))
    exps = {fr.normal: e for fr, e in zip(rv.facets, rv.denominator_exponents)}
    inf = next(fr for fr in rv.facets if up_to_sign(fr.polynomial, R_INF))
    assert exps == {inf.normal: 2, **{n: 0 for n in exps if n != inf.normal}}
    assert elapsed < 300


# -- 3 ---------------------------------------------------------------------------------


def _grid_bound(i, j):
    # R_x is named after the coordinate line x = 0 (normal (1,0)); the printed
    # polynomial for that facet is the one involving a2, a4, a5, b2, b4, b5.
    fs = {fr.normal: fr.polynomial for fr in facet_resultants([F1, F2], TV)}
    r_inf, r_x, r_y = fs[(-1, -1)], fs[(1, 0)], fs[(0, 1)]
    assert up_to_sign(r_x, R_Y) and up_to_sign(r_y, R_X) and up_to_sign(r_inf, R_INF)
    return r_inf ** max(0, i + j - 3) * r_x ** max(0, 1 - i) * r_y ** max(0, 1 - j)


@criterion(3, "denominators of Res(t1^i t2^j), 0 <= i, j <= 4")
@pytest.mark.parametrize("i,j", list(itertools.product(range(5), repeat=2)))
def test_criterion_03_grid(i, j):
    rv = global_residue_unmixed([F1, F2], TV, (i, j), VERONESE)
    den = rv.value.den
    exact_divide(_grid_bound(i, j), den)


# -- 4 ---------------------------------------------------------------------------------

SCROLL_MONS = ["x1*x2^3", "x1*x2^2*x4", "x1*x2*x4^2", "x1*x4^3", "x2*x3", "x3*x4"]
SCROLL_ROWS = ["x1*x2^5", "x1*x2^4*x4", "x1*x2^3*x4^2", "x1*x2^2*x4^3", "x1*x2*x4^4",
               "x1*x4^5", "x2^3*x3", "x2^2*x3*x4", "x2*x3*x4^2", "x3*x4^3"]
SCROLL_MULT = ["x2^2", "x2*x4", "x4^2"]


def _bracket(i, j, k):
    M = [[P(f"{l}{x}") for x in (i, j, k)] for l in "abc"]
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def _printed_scroll_matrix():
    """{(row monomial, column label): entry} of the printed 10 x 10 matrix."""
    B = _bracket
    jcol = [B(1, 2, 5), B(1, 2, 6) + 2 * B(1, 3, 5), B(2, 3, 5) + 2 * B(1, 3, 6) + 3 * B(1, 4, 5),
            B(2, 3, 6) + 2 * B(2, 4, 5) + 3 * B(1, 4, 6), B(3, 4, 5) + 2 * B(2, 4, 6), B(3, 4, 6),
            -B(1, 5, 6), -B(2, 5, 6), -B(3, 5, 6), -B(4, 5, 6)]
    # the coefficient pattern of each F block, row by row: index into 1..6 or 0
    pattern = [(1, 0, 0), (2, 1, 0), (3, 2, 1), (4, 3, 2), (0, 4, 3), (0, 0, 4),
               (5, 0, 0), (6, 5, 0), (0, 6, 5), (0, 0, 6)]
    out = {}
    for r, row in enumerate(SCROLL_ROWS):
        for blk, letter in enumerate("abc"):
            for c, mult in enumerate(SCROLL_MULT):
                idx = pattern[r][c]
                out[(P(row), (blk, P(mult)))] = P(f"{letter}{idx}") if idx else Poly.zero()
        out[(P(row), "J")] = jcol[r]
    return out


def _scroll_forms():
    return [sum((P(f"{l}{i + 1}") * P(m) for i, m in enumerate(SCROLL_MONS)), Poly.zero()) for l in "abc"]


@criterion(4, "scroll S(1,3): Phi matrix and its determinant")
def test_criterion_04_scroll():
    t0 = time.perf_counter()
    ring = CoxRing(QUADRANGLE)
    F = _scroll_forms()
    phi = build_phi(ring, (1, 1, 1), F)
    M = phi.matrix
    assert M.shape == (10, 10)
    got = {}
    for r, a in enumerate(M.row_labels):
        for c, lab in enumerate(M.col_labels):
            key = "J" if lab[0] == "J" else (lab[1], ring.monomial(lab[2]))
            got[(ring.monomial(a), key)] = M[r, c]
    expected = _printed_scroll_matrix()
    assert set(got) == set(expected)
    for key, val in expected.items():
        assert got[key] == val, key

    out = resultant_via_det(phi)
    R = out.polynomial
    assert out.certified and out.ell == 1
    assert R.total_degree() == 12
    for letter in "abc":
        assert R.degree_in([f"{letter}{i}" for i in range(1, 7)]) == 4
    assert normalized_volume(QUADRANGLE) == 4

    rng = random.Random(2025)
    names = [f"{l}{i}" for l in "abc" for i in range(1, 7)]
    mons = [P(m) for m in SCROLL_MONS]
    for _ in range(20):
        # a common zero at a point of the torus: fix x, solve for the first coefficient
        x = {f"x{i}": nonzero_q(rng) for i in range(1, 5)}
        vals = {}
        for l in "abc":
            for i in range(2, 7):
                vals[f"{l}{i}"] = rand_q(rng)
            rest = sum(vals[f"{l}{i}"] * mons[i - 1].eval_number(x) for i in range(2, 7))
            vals[f"{l}1"] = -rest / mons[0].eval_number(x)
        assert all(Fi.eval_number({**vals, **x}) == 0 for Fi in F)
        assert R.eval_number(vals) == 0
    for _ in range(20):
        vals = {g: rand_q(rng) for g in names}
        assert R.eval_number(vals) != 0
    assert time.perf_counter() - t0 < 120


# -- 5 ---------------------------------------------------------------------------------

PENT_NORMALS = [(-1, 0), (-1, -1), (0, -1), (2, 1), (1, 2)]
PENT_OFFSETS = [3, 4, 3, -3, -3]


@criterion(5, "mixed example on the pentagon")
def test_criterion_05_pentagon():
    t0 = time.perf_counter()
    d1 = convex_hull(list(split_torus(PENT_F1, TV)))
    d2 = convex_hull(list(split_torus(PENT_F2, TV)))
    D, _ = minkowski_sum([d1, d2])
    assert set(D.facets) == set(zip(PENT_NORMALS, PENT_OFFSETS))
    D = D.reordered(PENT_NORMALS)
    assert list(D.offsets) == PENT_OFFSETS
    a1, a2 = summand_offsets(D, [d1, d2])
    ring = CoxRing(D)
    assert ring.homogenize(PENT_F1, TV, offsets=a1) == P("a0*x2*x3^2 + a1*x3*x4*x5^2 + a2*x1*x5^3")
    assert ring.homogenize(PENT_F2, TV, offsets=a2) == P("b0*x1^2*x2 + b1*x1*x4^2*x5 + b2*x3*x4^3")

    fs = facet_resultants([PENT_F1, PENT_F2], TV, polytope=D)
    expected = [P("b2"), P("a1*b1 - a2*b2"), P("a2"), P("b0"), P("a0")]
    assert all(up_to_sign(g, e) for g, e in zip(fs.polynomials(), expected))

    rv = global_residue_mixed([PENT_F1, PENT_F2], TV, (3, 3), seed=0, polytope=D)
    assert rv.value == RationalFunction(PENT_NUM, PENT_DEN)
    assert rv.denominator_exponents == (1, 3, 1, 0, 0)
    assert rv.certificates["draws"] == 2 and len(set(rv.certificates["seeds"])) == 2
    assert time.perf_counter() - t0 < 120


# -- 6 ---------------------------------------------------------------------------------


@criterion(6, "normalization Res(J(F)) = prod(k) n! vol(P)")
@pytest.mark.parametrize("poly", [SIMPLEX, VERONESE, QUADRANGLE], ids=["simplex", "2simplex", "quadrangle"])
@pytest.mark.parametrize("k", [(1, 1, 1), (2, 1, 1)])
def test_criterion_06_normalization(poly, k):
    ring = CoxRing(poly)
    rng = random.Random(hash((poly.offsets, k)) & 0xFFFF)
    expected = math.prod(k) * 2 * poly_volume(poly)
    done = 0
    while done < 20:
        F = [sum((ring.monomial(a, rng.randint(-9, 9)) for a in ring.graded_monomials(ki)), Poly.zero(ring.names))
             for ki in k]
        J = ring.toric_jacobian(F, k)
        assert toric_residue(ring, k, F, J) == expected
        done += 1


def poly_volume(poly):
    # Euclidean area by the shoelace formula, independent of the library's volume code
    pts = list(poly.vertices)
    cx = sum(Fraction(p[0]) for p in pts) / len(pts)
    cy = sum(Fraction(p[1]) for p in pts) / len(pts)
    pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    s = sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]))
    return Fraction(abs(s), 2)


# -- 7 ---------------------------------------------------------------------------------


@criterion(7, "affine Jacobian: bracket expansion, support, homogenization")
def test_criterion_07_jacobian():
    rng = random.Random(12)
    polys = {
        1: [from_inequalities([(1,), (-1,)], [0, d]) for d in (1, 2, 3)],
        2: [SIMPLEX, VERONESE, QUADRANGLE, convex_hull([(0, 0), (2, 1), (1, 3), (-1, 1)])],
    }
    count = 0
    while count < 50:
        n = 1 if count < 15 else 2
        tv = TV[:n]
        poly = rng.choice(polys[n])
        pts = scaled_lattice_points(poly, 1)
        f = [sum((rng.randint(-6, 6) * Poly.monomial(m, 1, tv) for m in pts), Poly.zero(tv)) for _ in range(n + 1)]
        j = affine_jacobian(f, tv)
        assert j == bracket_expansion(f, tv)
        for m in split_torus(j, tv):
            assert poly.contains(m, k=n + 1, strict=True)
        ring = CoxRing(poly)
        F = [ring.homogenize(fi, tv) for fi in f]
        J = ring.toric_jacobian(F, [1] * (n + 1))
        assert ring.monomial((1,) * ring.s) * J == ring.homogenize(j, tv, n + 1)
        count += 1


# -- 8 ---------------------------------------------------------------------------------


def _product_of_coordinates(f1, f2, keep, elim):
    """Product over the common roots of the ``keep`` coordinate, via Res_elim."""
    r = univariate_sylvester(f1, f2, elim)
    coeffs = r.univariate(keep)
    deg = max(coeffs)
    assert deg == 4 and min(coeffs) >= 0
    return coeffs.get(0, Poly.zero()).constant_value() / coeffs[deg].constant_value()


def _leading_form_resultant(f1, f2):
    """Res of the quadratic parts, as binary forms dehomogenized at t2 = 1."""
    lead = []
    for f in (f1, f2):
        q = Poly.zero(("s",))
        for m, c in split_torus(f, TV).items():
            if sum(m) == 2:
                q = q + Poly.monomial((m[0],), c.constant_value(), ("s",))
        lead.append(q)
    return univariate_sylvester(lead[0], lead[1], "s").constant_value()


@criterion(8, "monomial specialization of the resultant")
@pytest.mark.parametrize("k0", [1, 2])
def test_criterion_08_monomial_specialization(k0):
    rng = random.Random(40 + k0)
    fs = facet_resultants([F1, F2], TV)
    pts = scaled_lattice_points(VERONESE, k0)
    ms = rng.sample(pts, 10) if len(pts) > 10 else pts
    assert len(ms) >= 6
    names = [f"a{i}" for i in range(6)] + [f"b{i}" for i in range(6)]
    for m in ms:
        fac = monomial_specialized_resultant(m, fs, k0, VERONESE)
        sym = fac.expand()
        for _ in range(10):
            vals = {g: nonzero_q(rng) for g in names}
            f1, f2 = F1.evaluate(vals), F2.evaluate(vals)
            px = _product_of_coordinates(f1, f2, "t1", "t2")
            py = _product_of_coordinates(f1, f2, "t2", "t1")
            oracle = _leading_form_resultant(f1, f2) ** (2 * k0) * px ** m[0] * py ** m[1]
            value = sym.eval_number(vals)
            assert value == oracle or value == -oracle


# -- 9 ---------------------------------------------------------------------------------


def _surjection_sides(n, r):
    u = [[P(f"u{i}_{j}") for j in range(r + 1)] for i in range(n + 1)]
    lhs = Poly.zero()
    for size in range(n + 2):
        for I in itertools.combinations(range(n + 1), size):
            term = Poly.const((-1) ** size)
            for j in range(r + 1):
                term = term * sum((u[i][j] for i in I), Poly.zero())
            lhs = lhs + term
    rhs = Poly.zero()
    for phi in itertools.product(range(n + 1), repeat=r + 1):
        if len(set(phi)) == n + 1:
            term = Poly.const(1)
            for j, i in enumerate(phi):
                term = term * u[i][j]
            rhs = rhs + term
    return lhs, (-1) ** (n + 1) * rhs


def _gamma(k, i):
    n = len(k) - 1
    tot = 0
    for j in range(n + 2):
        for J in itertools.combinations(range(n + 1), j):
            tot += (-1) ** (n + 1 - j) * j * sum(k[x] for x in J) ** i
    return tot


@criterion(9, "combinatorial identities and Koszul bookkeeping")
def test_criterion_09_combinatorics():
    for n in range(3):
        for r in range(4):
            lhs, rhs = _surjection_sides(n, r)
            assert lhs == rhs, (n, r)
    for n in range(1, 4):
        for k in itertools.product(range(1, 4), repeat=n + 1):
            expected = math.factorial(n) * sum(math.prod(k[v] for v in range(n + 1) if v != j) for j in range(n + 1))
            assert _gamma(k, n) == expected
            for i in range(n):
                assert _gamma(k, i) == 0
    polys = [VERONESE, QUADRANGLE, convex_hull([(0, 0), (2, 1), (1, 3), (-1, 1)])]
    for poly in polys:
        n = poly.ambient
        for k in ((1, 1, 1), (2, 1, 1), (1, 2, 3)):
            lay = phi_layout(poly, k)
            W = lay.koszul_ranks()
            assert lay.n_rows == W[n + 1]
            assert lay.n_cols == W[n] + 1
            count = lambda j: len(scaled_lattice_points(poly, j, strict=True)) if j else 0
            deg = sum((-1) ** (n + 1 - j) * j * sum(count(sum(J)) for J in itertools.combinations(k, j))
                      for j in range(n + 2))
            assert deg == total_det_degree(poly, k)
            vol = poly_volume(poly)
            assert deg == sum(math.prod(k[v] for v in range(n + 1) if v != i) for i in range(n + 1)) * math.factorial(n) * vol


# -- 10 --------------------------------------------------------------------------------


@criterion(10, "univariate oracle and the count of roots")
def test_criterion_10_oracles():
    cases = 0
    for d in (1, 2, 3):
        f = sum((Poly.monomial((i,), 1, ("t",)) * P(f"u{i}") for i in range(d + 1)), Poly.zero())
        seg = from_inequalities([(1,), (-1,)], [0, d])
        for m in range(-3, 2 * d + 4):
            rv = global_residue_unmixed([f], ["t"], (m,), seg)
            assert rv.value == univariate_residue_oracle(f, m, "t")
            cases += 1
    assert cases >= 30

    deltas = [convex_hull(list(split_torus(g, TV))) for g in (F1, F2)]
    assert mixed_volume(deltas) == 4
    jt = toric_affine_jacobian([F1, F2], TV)
    total = RationalFunction(0)
    for m, c in split_torus(jt, TV).items():
        total = total + RationalFunction(c) * global_residue_unmixed([F1, F2], TV, m, VERONESE).value
    assert total == RationalFunction(4)


# -- 11 --------------------------------------------------------------------------------


def _line_quadric_resultant_is_zero(q1, q2, line):
    """Do the conics q1, q2 and a line in P^2 share a point? (affine chart t1, t2)."""
    l0, l1, l2 = (line.eval_number({"t1": 0, "t2": 0}),
                  line.diff("t1").constant_value(), line.diff("t2").constant_value())
    # parametrize the line by t1 (l2 != 0), clearing denominators
    sub = {"t2": Poly.monomial((1,), Fraction(-l1, l2), ("t1",)) + Poly.const(Fraction(-l0, l2), ("t1",))}
    g = [q.evaluate(sub) for q in (q1, q2)]
    assert all(x.degree("t1") == 2 for x in g)
    return univariate_sylvester(g[0], g[1], "t1").constant_value() == 0


@criterion(11, "rank of Phi versus vanishing of the resultant")
def test_criterion_11_rank():
    ring = CoxRing(SIMPLEX)
    k = (2, 2, 1)
    rng = random.Random(11)
    mons2 = [m for m in scaled_lattice_points(SIMPLEX, 2)]
    mons1 = [m for m in scaled_lattice_points(SIMPLEX, 1)]

    def affine(pts):
        return sum((rng.randint(-9, 9) * Poly.monomial(m, 1, TV) for m in pts), Poly.zero(TV))

    checked = {"random": 0, "root": 0}
    while checked["random"] < 20 or checked["root"] < 5:
        kind = "random" if checked["random"] < 20 else "root"
        f = [affine(mons2), affine(mons2), affine(mons1)]
        if kind == "root":
            root = {"t1": nonzero_q(rng), "t2": nonzero_q(rng)}
            f = [fi - Poly.const(fi.eval_number(root), TV) for fi in f]
        if f[2].diff("t2").is_zero():
            continue
        try:
            vanishes = _line_quadric_resultant_is_zero(f[0], f[1], f[2])
        except AssertionError:
            continue
        F = [ring.homogenize(fi, TV, ki) for fi, ki in zip(f, k)]
        phi = build_phi(ring, k, F)
        M = phi.matrix.numeric()
        full = rank(M) == len(M)
        assert full == (not vanishes)
        assert vanishes == (kind == "root")
        if kind == "root":
            # row monomials at the root span the left kernel of every F column
            pts = [ring.monomial_point(a, sum(k), interior=True) for a in phi.matrix.row_labels]
            v = [root["t1"] ** p[0] * root["t2"] ** p[1] for p in pts]
            for c in range(len(M[0]) - 1):
                assert sum(v[r] * M[r][c] for r in range(len(M))) == 0
        checked[kind] += 1


# -- 12 --------------------------------------------------------------------------------


@criterion(12, "facet resultants that are coefficients give monomial denominators")
def test_criterion_12_monomial_denominators():
    f1 = P("a0 + a1*t1 + a2*t2")
    f2 = P("b0 + b1*t1^-1 + b2*t2^-1")
    d1 = convex_hull(list(split_torus(f1, TV)))
    d2 = convex_hull(list(split_torus(f2, TV)))
    D, _ = minkowski_sum([d1, d2])
    # every facet of the sum meets some summand in a vertex
    for eta in D.normals:
        dims = []
        for d in (d1, d2):
            lo = min(v[0] * eta[0] + v[1] * eta[1] for v in d.vertices)
            dims.append(sum(1 for v in d.vertices if v[0] * eta[0] + v[1] * eta[1] == lo) - 1)
        assert min(dims) == 0
    nontrivial = 0
    for m in itertools.product(range(-2, 3), repeat=2):
        rv = global_residue_mixed([f1, f2], TV, m, seed=1)
        if rv.is_numeric:
            continue
        assert len(rv.value.den) == 1, m
        nontrivial += 1
    assert nontrivial > 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
