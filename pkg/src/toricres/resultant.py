"""The Koszul-augmented map Phi, sparse resultants and facet resultants."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .cox import CoxRing, split_torus
from .lattice import (
    InfiniteIndex,
    LatticePolytope,
    convex_hull,
    dot,
    face_support,
    lattice_index,
    minkowski_sum,
    mixed_volume,
    normalized_volume,
    project_to_facet,
    scaled_lattice_points,
    vsub,
)
from .linalg import NonSquare, PolyMatrix, fraction_free_det, rref
from .poly import Poly, multipoly_gcd


class EmptyCriticalDegree(ValueError):
    pass


class AllMinorsZero(ArithmeticError):
    pass


class NonIntegerDegree(ArithmeticError):
    pass


class ZeroPolynomial(ValueError):
    pass


class UnsupportedFaceConfiguration(ValueError):
    pass


class NegativeExponent(ValueError):
    pass


@dataclass(frozen=True)
class Factored:
    """unit * prod(base ** exponent)."""

    factors: tuple  # of (Poly, int)
    unit: object = 1

    def expand(self) -> Poly:
        out = Poly.const(self.unit)
        for base, e in self.factors:
            if e:
                out = out * base**e
        return out

    def exponents(self) -> Tuple[int, ...]:
        return tuple(e for _, e in self.factors)

    def nontrivial(self) -> "Factored":
        return Factored(tuple((b, e) for b, e in self.factors if e and not b.is_constant()),
                        self.unit * math.prod(b.constant_value() ** e for b, e in self.factors if e and b.is_constant()))


# -- layout and matrix ---------------------------------------------------------------


@dataclass(frozen=True)
class PhiLayout:
    P: LatticePolytope
    k: tuple
    kappa: int
    rows: tuple  # interior points of kappa P
    blocks: tuple  # per i, interior points of (kappa - k_i) P

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return sum(len(b) for b in self.blocks) + 1

    def koszul_ranks(self) -> List[int]:
        """W_j = sum over |J| = j of |(k_J P)° ∩ Z^n|."""
        out = []
        for j in range(len(self.k) + 1):
            tot = 0
            for J in itertools.combinations(range(len(self.k)), j):
                kJ = sum(self.k[i] for i in J)
                tot += len(scaled_lattice_points(self.P, kJ, strict=True)) if kJ else 0
            out.append(tot)
        return out


def phi_layout(P: LatticePolytope, k: Sequence[int]) -> PhiLayout:
    k = tuple(k)
    if any(x < 1 for x in k):
        raise ValueError("all degrees k_i must be positive")
    if not P.full_dimensional:
        raise ValueError("the polytope must be full-dimensional")
    kappa = sum(k)
    rows = tuple(scaled_lattice_points(P, kappa, strict=True))
    if not rows:
        raise EmptyCriticalDegree(f"({kappa}P)° contains no lattice points")
    blocks = tuple(tuple(scaled_lattice_points(P, kappa - ki, strict=True)) for ki in k)
    return PhiLayout(P, k, kappa, rows, blocks)


@dataclass(frozen=True)
class PhiMatrix:
    layout: PhiLayout
    ring: CoxRing
    matrix: PolyMatrix
    F: tuple
    J: Poly
    mode: str

    @property
    def jacobian_column(self) -> int:
        return self.matrix.ncols - 1


def generic_forms(ring: CoxRing, k: Sequence[int], letters: Sequence[str] = "abcdefgh") -> List[Poly]:
    """F_i = sum of u_{i,j} x^(a(m_j)) over the lattice points m_j of k_i P."""
    out = []
    for ki, letter in zip(k, letters):
        F = Poly.zero(ring.names)
        for idx, m in enumerate(scaled_lattice_points(ring.P, ki)):
            F = F + Poly.var(f"{letter}{idx}") * ring.monomial(ring.exponent(m, ki))
        out.append(F)
    return out


def build_phi(ring: CoxRing, k: Sequence[int], F: Sequence[Poly], J: Poly | None = None) -> PhiMatrix:
    """Matrix of (Lambda_0..Lambda_n, theta) -> sum Lambda_i F_i + theta J(F).

    ``F`` are Cox polynomials of degrees k_i*beta; their coefficients are
    numbers (numeric mode) or polynomials in indeterminates (symbolic mode).
    """
    layout = phi_layout(ring.P, k)
    if len(F) != len(layout.k):
        raise ValueError("one polynomial per degree is required")
    if J is None:
        J = ring.toric_jacobian(F, layout.k)
    names = ring.names
    Fc = [F_i.coefficients_in(names) for F_i in F]
    Fc = [{a: c.compact() for a, c in d.items()} for d in Fc]
    Jc = {a: c.compact() for a, c in J.coefficients_in(names).items()}
    row_exps = [ring.exponent(m, layout.kappa, interior=True) for m in layout.rows]
    zero = Poly.zero()
    cols = []
    col_labels = []
    for i, blk in enumerate(layout.blocks):
        for p in blk:
            ap = ring.exponent(p, layout.kappa - layout.k[i], interior=True)
            col = []
            for ar in row_exps:
                d = tuple(x - y for x, y in zip(ar, ap))
                col.append(Fc[i].get(d, zero) if min(d) >= 0 else zero)
            cols.append(col)
            col_labels.append(("F", i, ap))
    cols.append([Jc.get(ar, zero) for ar in row_exps])
    col_labels.append(("J",))
    rows = [[c[r] for c in cols] for r in range(len(row_exps))]
    M = PolyMatrix.build(rows, row_labels=row_exps, col_labels=col_labels)
    mode = "numeric" if M.is_numeric() else "symbolic"
    return PhiMatrix(layout, ring, M, tuple(F), J, mode)


# -- resultants ------------------------------------------------------------------------


@dataclass(frozen=True)
class ResultantOutput:
    polynomial: Poly
    ell: int
    certified: bool = True
    predicted_degree: int | None = None
    minors_used: int = 1
    scalar: object = 1  # the raw determinant or gcd equals scalar * polynomial
    note: str = "defined up to sign"


def _primitive_output(d: Poly, ell: int, target: int, used: int = 1) -> ResultantOutput:
    if d.is_zero():
        return ResultantOutput(d, ell, False, target, used, 0)
    p = d.primitive()
    scalar = d.leading_coefficient() / p.leading_coefficient() if not p.is_zero() else 0
    return ResultantOutput(p, ell, p.total_degree() == target, target, used, scalar)


def ambient_index(P: LatticePolytope, k0: int) -> int:
    """Index in Z^n of the affine lattice spanned by k0 P ∩ Z^n."""
    return lattice_index(scaled_lattice_points(P, k0))


def resultant_degree(P: LatticePolytope, k: Sequence[int], i: int, ell: int | None = None) -> int:
    """Degree of the resultant in the coefficients of F_i."""
    if ell is None:
        ell = ambient_index(P, max(k))
    num = math.prod(kj for j, kj in enumerate(k) if j != i) * normalized_volume(P)
    if num % ell:
        raise NonIntegerDegree(f"degree {num}/{ell} is not an integer")
    return num // ell


def total_det_degree(P: LatticePolytope, k: Sequence[int]) -> int:
    """Total coefficient degree of R^ell."""
    return sum(math.prod(kj for j, kj in enumerate(k) if j != i) for i in range(len(k))) * normalized_volume(P)


def resultant_via_det(phi: PhiMatrix) -> ResultantOutput:
    M = phi.matrix
    if M.nrows != M.ncols:
        raise NonSquare(f"Phi is {M.nrows}x{M.ncols}; use resultant_via_minor_gcd")
    ell = ambient_index(phi.layout.P, max(phi.layout.k))
    return _primitive_output(fraction_free_det(M), ell, total_det_degree(phi.layout.P, phi.layout.k))


def _pivot_columns(num, order) -> List[int]:
    sub = [[r[j] for j in order] for r in num]
    _, piv = rref(sub)
    return [order[j] for j in piv]


def resultant_via_minor_gcd(phi: PhiMatrix, max_minors: int = 40, seed: int = 0) -> ResultantOutput:
    """gcd of maximal minors that use the Jacobian column, with a degree certificate."""
    M = phi.matrix
    if M.nrows > M.ncols:
        raise ValueError("Phi has more rows than columns")
    ell = ambient_index(phi.layout.P, max(phi.layout.k))
    target = total_det_degree(phi.layout.P, phi.layout.k)
    if M.nrows == M.ncols:
        return _primitive_output(fraction_free_det(M), ell, target)
    rng = random.Random(seed)
    names = M.variables()
    jc = phi.jacobian_column
    others = [j for j in range(M.ncols) if j != jc]
    g = None
    seen = set()
    used = 0
    for attempt in range(max_minors * 4):
        if used >= max_minors:
            break
        pt = {v: rng.randint(-10**4, 10**4) for v in names}
        num = M.evaluate(pt)
        rng.shuffle(others)
        cols = _pivot_columns(num, [jc] + others)
        if len(cols) < M.nrows or jc not in cols:
            continue
        key = tuple(sorted(cols))
        if key in seen:
            continue
        seen.add(key)
        minor = fraction_free_det(M.submatrix(range(M.nrows), sorted(cols)))
        used += 1
        if minor.is_zero():
            continue
        g = minor if g is None else multipoly_gcd(g, minor)
        if g.total_degree() <= target:
            break
    if g is None:
        raise AllMinorsZero("no nonzero maximal minor involving the Jacobian column was found")
    return _primitive_output(g, ell, target, used)


def univariate_sylvester(f: Poly, g: Poly, var: str) -> Poly:
    """Sylvester resultant in ``var`` after shifting both to minimal exponent 0."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant of a zero polynomial")
    fu = f.univariate(var)
    gu = g.univariate(var)
    f0, g0 = min(fu), min(gu)
    fu = {e - f0: c for e, c in fu.items()}
    gu = {e - g0: c for e, c in gu.items()}
    d, e = max(fu), max(gu)
    if d == 0 and e == 0:
        return Poly.const(1)
    if d == 0:
        return fu[0] ** e
    if e == 0:
        return gu[0] ** d
    N = d + e
    zero = Poly.zero()
    rows = []
    for i in range(e):
        rows.append([fu.get(d - (j - i), zero) if 0 <= j - i <= d else zero for j in range(N)])
    for i in range(d):
        rows.append([gu.get(e - (j - i), zero) if 0 <= j - i <= e else zero for j in range(N)])
    M = PolyMatrix.build(rows)
    return fraction_free_det(M)


# -- facet resultants ---------------------------------------------------------------------


@dataclass(frozen=True)
class FacetResultant:
    normal: tuple
    polynomial: Poly  # already raised to ell
    base: Poly
    ell: int
    faces: tuple


@dataclass(frozen=True)
class FacetResultantSet:
    polytope: LatticePolytope
    offsets: tuple  # per polynomial j, the offsets a^j
    entries: tuple

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i) -> FacetResultant:
        return self.entries[i]

    def polynomials(self) -> List[Poly]:
        return [e.polynomial for e in self.entries]


def _leading_form(coeffs: Dict[tuple, Poly], face) -> Dict[tuple, Poly]:
    return {m: coeffs[m] for m in face}


def facet_resultants(
    f: Sequence[Poly], tvars: Sequence[str], polytope: LatticePolytope | None = None
) -> FacetResultantSet:
    """Facet resultants of n Laurent polynomials, one per facet of their Minkowski sum.

    The facets follow ``polytope``'s order when given (it must be the
    Minkowski sum of the Newton polytopes), else the lexicographic order.
    """
    n = len(tvars)
    if len(f) != n:
        raise ValueError(f"need {n} polynomials in {n} variables")
    coeffs = [split_torus(fi, tvars) for fi in f]
    deltas = [convex_hull(list(c)) for c in coeffs]
    S, _ = minkowski_sum(deltas)
    if polytope is not None:
        if sorted(polytope.facets) != sorted(S.facets):
            raise ValueError("given polytope is not the Minkowski sum of the Newton polytopes")
        S = polytope
    if not S.full_dimensional:
        raise ValueError("the Minkowski sum of the Newton polytopes is not full-dimensional")
    offsets = tuple(tuple(-min(dot(m, e) for m in c) for e in S.normals) for c in coeffs)
    entries = []
    for eta in S.normals:
        faces = [face_support(list(c), eta) for c in coeffs]
        forms = [_leading_form(c, F) for c, F in zip(coeffs, faces)]
        raised, base, ell = _facet_base(forms, faces, eta, n)
        entries.append(FacetResultant(eta, raised, base, ell, tuple(tuple(F) for F in faces)))
    return FacetResultantSet(S, offsets, tuple(entries))


def _facet_base(forms, faces, eta, n):
    """(R^ell, R, ell) for one facet."""
    one = Poly.const(1)
    if n == 1:
        ((m, c),) = forms[0].items()
        return c, c, 1
    singles = [j for j, F in enumerate(faces) if len(F) == 1]
    proj = [project_to_facet(F, eta) for F in faces]
    if singles:
        # a monomial leading form: the facet resultant is its coefficient or 1
        if len(singles) > 1:
            return one, one, 1
        (j,) = singles
        others = [i for i in range(n) if i != j]
        mv = 1 if n == 2 else mixed_volume([convex_hull(proj[i]) for i in others])
        if mv == 0:
            return one, one, 1
        try:
            ell = lattice_index([list(faces[i]) for i in others], eta)
        except InfiniteIndex:
            return one, one, 1
        ((m, c),) = forms[j].items()
        return c**ell, c, ell
    ell = lattice_index([list(F) for F in faces], eta)
    if n == 2:
        # compress the line lattice so the spacing is 1
        polys = []
        for form, F, pr in zip(forms, faces, proj):
            p = Poly.zero(("s_",))
            for m, q in zip(F, pr):
                p = p + form[m] * Poly.monomial({"s_": q[0]}, 1, ("s_",))
            polys.append(_compress(p, "s_", ell))
        base = univariate_sylvester(polys[0], polys[1], "s_")
        base = base.with_gens(tuple(g for g in base.gens if g != "s_")).compact()
        return base**ell, base, ell
    if n == 3:
        raised = _facet_power_n3(forms, faces, proj, eta, ell)
        return raised, None, ell
    raise UnsupportedFaceConfiguration("facet resultants are implemented for n <= 3")


def _compress(p: Poly, var: str, g: int) -> Poly:
    u = p.univariate(var)
    lo = min(u)
    out = Poly.zero((var,))
    for e, c in u.items():
        out = out + c.compact() * Poly.monomial({var: (e - lo) // g}, 1, (var,))
    return out


def _edge_lengths(h: LatticePolytope) -> Tuple[int, ...]:
    out = []
    for i in range(h.n_facets):
        vs = h.facet_vertices(i)
        out.append(math.gcd(*vsub(vs[-1], vs[0])))
    return tuple(out)


def _facet_power_n3(forms, faces, proj, eta, ell) -> Poly:
    """R^ell for a planar facet system whose faces are multiples of one polygon.

    Writing face_j = c_j Q + v_j, the facet system lives on the toric surface
    of Q with degrees c_j, and Phi over Q yields R^ell_Q.
    """
    hulls = [convex_hull(pr) for pr in proj]
    if any(not h.full_dimensional for h in hulls) or len({h.normals for h in hulls}) != 1:
        raise UnsupportedFaceConfiguration(f"facet {eta}: faces are not multiples of a common polygon")
    lens = [_edge_lengths(h) for h in hulls]
    cs = [math.gcd(*L) for L in lens]
    if len({tuple(x // c for x in L) for L, c in zip(lens, cs)}) != 1:
        raise UnsupportedFaceConfiguration(f"facet {eta}: faces are not multiples of a common polygon")
    v0 = hulls[0].vertices[0]
    Q = convex_hull([tuple((x - y) // cs[0] for x, y in zip(v, v0)) for v in hulls[0].vertices])
    ringQ = CoxRing(Q)
    Fs = []
    for form, F, pr, h in zip(forms, faces, proj, hulls):
        lo = [min(dot(v, e) for v in h.vertices) for e in Q.normals]
        Fi = Poly.zero(ringQ.names)
        for m, q in zip(F, pr):
            a = tuple(dot(q, e) - l for e, l in zip(Q.normals, lo))
            Fi = Fi + form[m] * ringQ.monomial(a)
        Fs.append(Fi)
    out = resultant_via_minor_gcd(build_phi(ringQ, cs, Fs))
    if out.ell != ell:
        raise UnsupportedFaceConfiguration(f"facet {eta}: lattice index mismatch ({out.ell} vs {ell})")
    if not out.certified:
        raise UnsupportedFaceConfiguration(f"facet {eta}: minor gcd did not reach the predicted degree")
    return out.polynomial


def monomial_specialized_resultant(
    m: Sequence[int], facets: FacetResultantSet, k0: int, P: LatticePolytope | None = None
) -> Factored:
    """prod_i (R^{eta_i})^(<m,eta_i> + k0 b_i) over the facets of P.

    ``P`` defaults to the polytope of ``facets``; for an unmixed system pass
    the common Newton polytope (facets are matched by normal).
    """
    P = P or facets.polytope
    off = dict(zip(P.normals, P.offsets))
    if set(off) != {fr.normal for fr in facets.entries}:
        raise ValueError("the polytope and the facet resultants have different normals")
    exps = [dot(m, fr.normal) + k0 * off[fr.normal] for fr in facets.entries]
    if any(x < 0 for x in exps):
        raise NegativeExponent(f"{tuple(m)} lies outside {k0}P")
    return Factored(tuple((fr.polynomial, x) for fr, x in zip(facets.entries, exps)))
