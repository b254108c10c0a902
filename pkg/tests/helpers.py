"""Shared systems and independent oracles for the test suite."""
from fractions import Fraction

from toricres import Poly, parse_polynomial as P
from toricres.lattice import from_inequalities

TV = ["t1", "t2"]

SIMPLEX = from_inequalities([(1, 0), (0, 1), (-1, -1)], [0, 0, 1])
VERONESE = from_inequalities([(1, 0), (0, 1), (-1, -1)], [0, 0, 2])
QUADRANGLE = from_inequalities([(0, -1), (-1, -2), (0, 1), (1, 0)], [1, 3, 0, 0])

F1 = P("a0*t1^2 + a1*t1*t2 + a2*t2^2 + a3*t1 + a4*t2 + a5")
F2 = P("b0*t1^2 + b1*t1*t2 + b2*t2^2 + b3*t1 + b4*t2 + b5")
R_INF = P("a0^2*b2^2 - a0*a1*b1*b2 - 2*a0*a2*b0*b2 + a0*a2*b1^2 + a1^2*b0*b2 - a1*a2*b0*b1 + a2^2*b0^2")
R_X = P("a0^2*b5^2 - a0*a3*b3*b5 - 2*a0*a5*b0*b5 + a0*a5*b3^2 + a3^2*b0*b5 - a3*a5*b0*b3 + a5^2*b0^2")
R_Y = P("a2^2*b5^2 - a2*a4*b4*b5 - 2*a2*a5*b2*b5 + a2*a5*b4^2 + a4^2*b2*b5 - a4*a5*b2*b4 + a5^2*b2^2")
P32 = P(
    "a0^2*a1*b2^2*b4 - 2*a0^2*a2*b1*b2*b4 + a0^2*a2*b2^2*b3 - a0^2*a3*b2^3 + a0^2*a4*b1*b2^2"
    " - a0*a1^2*b2^2*b3 + 2*a0*a1*a2*b1*b2*b3 - 2*a0*a1*a4*b0*b2^2 + 2*a0*a2^2*b0*b1*b4"
    " - 2*a0*a2^2*b0*b2*b3 - a0*a2^2*b1^2*b3 + 2*a0*a2*a3*b0*b2^2 + a1^2*a3*b0*b2^2"
    " - a1*a2^2*b0^2*b4 - 2*a1*a2*a3*b0*b1*b2 + 2*a1*a2*a4*b0^2*b2 + a2^3*b0^2*b3"
    " - a2^2*a3*b0^2*b2 + a2^2*a3*b0*b1^2 - a2^2*a4*b0^2*b1"
)

PENT_F1 = P("a0*t1 + a1*t1*t2 + a2*t2^2")
PENT_F2 = P("b0*t2 + b1*t1*t2 + b2*t1^2")
PENT_NUM = P("a0*a1*a2*b0*b1*b2 + a0*a2^2*b0*b2^2 - a1^3*b0^2*b2 - a0^2*a2*b1^3")
PENT_DEN = P("a2*b2") * P("a1*b1 - a2*b2") ** 3


def up_to_sign(p, q):
    return p == q or p == -q


def same_up_to_unit(p, q):
    """p = c q for a nonzero rational c."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    return p * q.leading_coefficient() == q * p.leading_coefficient()


def line(rng, lo=-6, hi=6):
    """A random affine form a*t1 + b*t2 + c with nonzero a, b, c."""
    a, b, c = (rng.choice([x for x in range(lo, hi + 1) if x]) for _ in range(3))
    return (a, b, c)


def line_poly(l):
    a, b, c = l
    return Poly.monomial((1, 0), a, TV) + Poly.monomial((0, 1), b, TV) + Poly.const(c, TV)


def meet(l1, l2):
    (a1, b1, c1), (a2, b2, c2) = l1, l2
    d = a1 * b2 - a2 * b1
    if d == 0:
        return None
    return (Fraction(-c1 * b2 + c2 * b1, d), Fraction(-a1 * c2 + a2 * c1, d))


def line_product_system(rng):
    """f1 = L1 L2, f2 = L3 L4 with four distinct torus roots L_i = L_j = 0 (i <= 2 < j).

    Returns (f1, f2, roots) or None for a degenerate draw.
    """
    L = [line(rng) for _ in range(4)]
    roots = []
    for i in (0, 1):
        for j in (2, 3):
            r = meet(L[i], L[j])
            if r is None or 0 in r:
                return None
            roots.append(r)
    if len(set(roots)) < 4:
        return None
    f1 = line_poly(L[0]) * line_poly(L[1])
    f2 = line_poly(L[2]) * line_poly(L[3])
    return f1, f2, roots


def root_sum(f, tvars, roots, m):
    """Sum over the given simple roots of t^m / J^T, J^T = t1...tn det(df_i/dt_j)."""
    n = len(tvars)
    tot = Fraction(0)
    for r in roots:
        pt = dict(zip(tvars, r))
        M = [[f[i].diff(tvars[j]).eval_number(pt) for j in range(n)] for i in range(n)]
        if n == 1:
            d = M[0][0]
        else:
            d = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        jt = d
        mono = Fraction(1)
        for x, e in zip(r, m):
            jt *= x
            mono *= Fraction(x) ** e
        tot += mono / jt
    return tot
