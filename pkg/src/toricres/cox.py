"""Homogeneous coordinate ring of the toric variety of a lattice polytope."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .lattice import LatticePolytope, dot, scaled_lattice_points, smith_normal_form, _solve_square
from .linalg import PolyMatrix, bareiss_det, memo_minor_det
from .poly import Poly, exact_divide


class SupportOutsidePolytope(ValueError):
    pass


class NotOfDegreeKBeta(ValueError):
    pass


class NoIndependentSubset(ValueError):
    pass


class NonExactDivision(ArithmeticError):
    pass


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DegreeClass:
    """Element of Z^s modulo the image of m -> (<m, eta_i>)_i."""

    representative: tuple
    canonical: tuple

    def __eq__(self, other):
        return isinstance(other, DegreeClass) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)


class CoxRing:
    """One variable x_i per facet of ``P``; x_i has degree [D_i]."""

    def __init__(self, P: LatticePolytope, prefix: str = "x"):
        if not P.full_dimensional:
            raise ValueError("the polytope must be full-dimensional")
        self.P = P
        self.n = P.ambient
        self.s = P.n_facets
        self.eta = P.normals
        self.b = P.offsets
        self.names = tuple(f"{prefix}{i + 1}" for i in range(self.s))
        sd = smith_normal_form(self.eta)
        self._left = sd.left
        self._inv = sd.invariants
        self.beta = self.degree_of(self.b)
        self.beta0 = self.degree_of((1,) * self.s)

    # -- grading --------------------------------------------------------------

    def degree_of(self, a: Sequence[int]) -> DegreeClass:
        w = [dot(row, a) for row in self._left]
        r = len(self._inv)
        canon = tuple(w[i] % self._inv[i] for i in range(r)) + tuple(w[r:])
        return DegreeClass(tuple(a), canon)

    def degree_combination(self, k: int, minus_beta0: bool = False) -> DegreeClass:
        a = [k * bi - (1 if minus_beta0 else 0) for bi in self.b]
        return self.degree_of(a)

    def exponent(self, m: Sequence[int], k: int, interior: bool = False) -> Tuple[int, ...]:
        """Cox exponent of the point m of kP (or of (kP)° when ``interior``)."""
        sh = 1 if interior else 0
        return tuple(dot(m, e) + k * bi - sh for e, bi in zip(self.eta, self.b))

    def monomial_point(self, a: Sequence[int], k: int, interior: bool = False) -> Tuple[int, ...]:
        """The unique m with <m, eta_i> + k b_i (- 1) = a_i."""
        sh = 1 if interior else 0
        target = [ai - k * bi + sh for ai, bi in zip(a, self.b)]
        for I in itertools.combinations(range(self.s), self.n):
            A = [list(self.eta[i]) for i in I]
            if bareiss_det(A) != 0:
                sol = _solve_square(A, [target[i] for i in I])
                break
        if any(x.denominator != 1 for x in sol):
            raise NotOfDegreeKBeta(f"exponent {tuple(a)} is not of degree {k}*beta")
        m = tuple(int(x) for x in sol)
        if any(dot(m, e) != t for e, t in zip(self.eta, target)):
            raise NotOfDegreeKBeta(f"exponent {tuple(a)} is not of degree {k}*beta")
        return m

    def graded_monomials(self, k: int, interior: bool = False) -> List[Tuple[int, ...]]:
        """Exponents of degree k*beta (or k*beta - beta0), ordered by lattice point."""
        pts = scaled_lattice_points(self.P, k, strict=interior)
        return [self.exponent(m, k, interior) for m in pts]

    # -- polynomials ------------------------------------------------------------

    def monomial(self, a: Sequence[int], coeff=1) -> Poly:
        return Poly.monomial(tuple(a), coeff, self.names)

    def homogenize(self, f: Poly, tvars: Sequence[str], k: int = 1, offsets: Sequence[int] | None = None) -> Poly:
        """kP-homogenization: t^m -> prod x_i^(<m,eta_i> + k b_i).

        With ``offsets`` the exponent is <m,eta_i> + offsets_i instead, which
        homogenizes with respect to a polytope sharing the facet normals of P.
        """
        out = Poly.zero(self.names)
        for m, c in split_torus(f, tvars).items():
            if offsets is None:
                a = self.exponent(m, k)
            else:
                a = tuple(dot(m, e) + o for e, o in zip(self.eta, offsets))
            if any(x < 0 for x in a):
                raise SupportOutsidePolytope(f"exponent {m} lies outside the polytope")
            out = out + c * self.monomial(a)
        return out

    def dehomogenize(self, F: Poly, tvars: Sequence[str], k: int, interior: bool = False) -> Poly:
        """Inverse of homogenize on polynomials of degree k*beta (or k*beta - beta0)."""
        out = Poly.zero(tuple(tvars))
        for a, c in F.coefficients_in(self.names).items():
            m = self.monomial_point(a, k, interior)
            out = out + c.compact() * Poly.monomial(m, 1, tvars)
        return out

    def is_homogeneous(self, F: Poly, deg: DegreeClass) -> bool:
        return all(self.degree_of(a) == deg for a in F.coefficients_in(self.names))

    # -- Euler form and Jacobians -------------------------------------------------

    def euler_form(self) -> List[Tuple[Tuple[int, ...], int, Tuple[int, ...]]]:
        """(I, det(eta_I), exponent of x-hat_I) for each n-subset with det != 0."""
        out = []
        for I in itertools.combinations(range(self.s), self.n):
            d = bareiss_det([list(self.eta[i]) for i in I])
            if d:
                comp = tuple(0 if j in I else 1 for j in range(self.s))
                out.append((I, int(d), comp))
        return out

    def toric_jacobian(self, F: Sequence[Poly], k: Sequence[int], check: bool = True) -> Poly:
        """Toric Jacobian of n+1 homogeneous polynomials of degrees k_i * beta."""
        if len(F) != self.n + 1 or len(k) != self.n + 1:
            raise ArityMismatch(f"need {self.n + 1} polynomials and degrees")
        table = self.euler_form()
        if not table:
            raise NoIndependentSubset("no n linearly independent facet normals")
        results = []
        for I, d, comp in table[: 2 if check else 1]:
            rows = [[ki * Fi for ki, Fi in zip(k, F)]]
            for i in I:
                rows.append([Fi.diff(self.names[i]) if self.names[i] in Fi.gens else Poly.zero() for Fi in F])
            D = memo_minor_det(PolyMatrix.build(rows))
            denom = self.monomial(comp, d)
            try:
                results.append(exact_divide(D, denom))
            except ArithmeticError as exc:
                raise NonExactDivision(f"bordered determinant not divisible for I = {I}") from exc
        if len(results) == 2 and results[0] != results[1]:
            raise NonExactDivision("toric Jacobian depends on the chosen subset; degrees are wrong")
        return results[0]


def split_torus(f: Poly, tvars: Sequence[str]) -> Dict[Tuple[int, ...], Poly]:
    """{exponent in the torus variables: coefficient}, coefficients compacted."""
    return {m: c.with_gens(tuple(g for g in c.gens if g not in tvars)).compact() for m, c in f.coefficients_in(tvars).items()}


def affine_jacobian(f: Sequence[Poly], tvars: Sequence[str]) -> Poly:
    n = len(tvars)
    if len(f) != n + 1:
        raise ArityMismatch(f"need {n + 1} polynomials in {n} variables")
    rows = [list(f)] + [[fi.euler_diff(t) if t in fi.gens else Poly.zero() for fi in f] for t in tvars]
    return memo_minor_det(PolyMatrix.build(rows))


def bracket_expansion(f: Sequence[Poly], tvars: Sequence[str]) -> Poly:
    """Cauchy-Binet expansion of the affine Jacobian over the common support."""
    n = len(tvars)
    if len(f) != n + 1:
        raise ArityMismatch(f"need {n + 1} polynomials in {n} variables")
    parts = [split_torus(fi, tvars) for fi in f]
    support = sorted(set().union(*parts))
    zero = Poly.zero()
    out = Poly.zero(tuple(tvars))
    for S in itertools.combinations(support, n + 1):
        mdet = bareiss_det([[1, *m] for m in S])
        if not mdet:
            continue
        br = memo_minor_det(PolyMatrix.build([[p.get(m, zero) for m in S] for p in parts]))
        if br:
            total = tuple(sum(col) for col in zip(*S))
            out = out + br * Poly.monomial(total, mdet, tvars)
    return out


def toric_affine_jacobian(f: Sequence[Poly], tvars: Sequence[str]) -> Poly:
    n = len(tvars)
    if len(f) != n:
        raise ArityMismatch(f"need {n} polynomials in {n} variables")
    rows = [[fj.euler_diff(t) if t in fj.gens else Poly.zero() for t in tvars] for fj in f]
    return memo_minor_det(PolyMatrix.build(rows))
