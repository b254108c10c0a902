"""Toric residues by solving Phi, and global residues in the torus."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .cox import CoxRing, split_torus
from .lattice import (
    LatticePolytope,
    convex_hull,
    dot,
    hyperplane_lattice_basis,
    minkowski_sum,
    mixed_volume,
    normalized_volume,
    scaled_lattice_points,
    summand_offsets,
    unimodular_inverse,
    vadd,
    _solve_square,
)
from .linalg import PolyMatrix, fraction_free_det, rref
from .modp import CompiledPoly, coeff_mod, crt, primes_below, last_unknown_mod, reconstruct_all, transposed_vandermonde_solve
from .poly import NotDivisible, Poly, polynomial_divide, qnorm
from .ratfunc import RationalFunction
from .resultant import Factored, FacetResultantSet, PhiMatrix, build_phi, facet_resultants


class ResultantVanishes(ArithmeticError):
    pass


class DegreeMismatch(ValueError):
    pass


class FacetResultantVanishes(ArithmeticError):
    def __init__(self, message: str, facet=None):
        super().__init__(message)
        self.facet = facet


class DenominatorNotCertified(ArithmeticError):
    pass


class GenericityFailure(ArithmeticError):
    pass


class MismatchBetweenDraws(ArithmeticError):
    pass


class DegenerateLeadingForm(ValueError):
    pass


class NotUnmixed(ValueError):
    pass


# Cramer on the reduced square system is used up to this size; larger
# symbolic systems go through evaluation and interpolation.
CRAMER_LIMIT = 12


@dataclass(frozen=True)
class ResidueValue:
    """An exact residue with its denominator written over facet resultants.

    ``denominator_exponents[i]`` is the power of the i-th facet base
    resultant in the reduced denominator; ``unit`` is the remaining scalar.
    """

    value: object  # RationalFunction or rational number
    denominator_exponents: tuple = ()
    unit: object = 1
    facets: FacetResultantSet | None = None
    certificates: dict = field(default_factory=dict)

    @property
    def is_numeric(self) -> bool:
        return not isinstance(self.value, RationalFunction)

    @property
    def numerator(self) -> Poly:
        return self.value.num if isinstance(self.value, RationalFunction) else Poly.const(self.value)

    @property
    def denominator(self) -> Poly:
        return self.value.den if isinstance(self.value, RationalFunction) else Poly.const(1)


@dataclass(frozen=True)
class CompletionVector:
    c: tuple
    k0: int
    point: tuple  # p with <p,eta> + k0 b = a + c


# -- toric residue -------------------------------------------------------------------


def _rhs_vector(phi: PhiMatrix, H: Poly) -> List[Poly]:
    names = phi.ring.names
    coeffs = {a: c.compact() for a, c in H.coefficients_in(names).items()}
    rows = phi.matrix.row_labels
    pos = {a: i for i, a in enumerate(rows)}
    vec = [Poly.zero()] * len(rows)
    for a, c in coeffs.items():
        if a not in pos:
            raise DegreeMismatch(f"monomial {a} of H is not of critical degree")
        vec[pos[a]] = c
    return vec


def _solve_theta_numeric(M, h):
    """theta from M (J column last) and rhs h, or raise ResultantVanishes."""
    ncols = len(M[0])
    aug = [list(r) + [x] for r, x in zip(M, h)]
    R, piv = rref(aug, ncols=ncols)
    for i in range(len(piv), len(R)):
        if R[i][ncols] != 0:
            raise ResultantVanishes("Phi is not surjective at this specialization")
    if not piv or piv[-1] != ncols - 1:
        raise ResultantVanishes("the Jacobian column is dependent; theta is not unique")
    if len(piv) < len(R):
        raise ResultantVanishes("Phi is not surjective at this specialization")
    return qnorm(R[len(piv) - 1][ncols])


def _eliminate_single_entry_columns(rows, h, jcol):
    """Drop (row, column) pairs where a non-Jacobian column has one nonzero entry.

    The multiplier of such a column can always absorb its row, so the
    remaining system determines theta.
    """
    rows = [list(r) for r in rows]
    h = list(h)
    cols = list(range(len(rows[0])))
    live_rows = list(range(len(rows)))
    changed = True
    while changed:
        changed = False
        for j in list(cols):
            if j == jcol:
                continue
            nz = [i for i in live_rows if rows[i][j]]
            if len(nz) == 0:
                cols.remove(j)
                changed = True
            elif len(nz) == 1:
                live_rows.remove(nz[0])
                cols.remove(j)
                changed = True
    cols.remove(jcol)
    cols.append(jcol)
    return [[rows[i][j] for j in cols] for i in live_rows], [h[i] for i in live_rows]


def toric_residue(
    ring: CoxRing,
    k: Sequence[int],
    F: Sequence[Poly],
    H: Poly,
    seed: int = 0,
    phi: PhiMatrix | None = None,
) -> object:
    """Res_F(H) = theta * prod(k) * n! * vol(P) where Phi(Lambda, theta) = H.

    Returns a rational number when all data is numeric, else a reduced
    RationalFunction.
    """
    phi = phi or build_phi(ring, k, F)
    h = _rhs_vector(phi, H)
    scale = math.prod(phi.layout.k) * normalized_volume(ring.P)
    M = phi.matrix
    if M.is_numeric() and all(x.is_constant() for x in h):
        num = M.numeric()
        hv = [x.constant_value() if x else 0 for x in h]
        return qnorm(_solve_theta_numeric(num, hv) * scale)
    num, den = _symbolic_theta(phi, h, seed, limit=None)
    return RationalFunction(num * scale, den)


def _symbolic_theta(phi: PhiMatrix, h, seed, limit: int | None = CRAMER_LIMIT) -> Tuple[Poly, Poly]:
    """Unreduced (numerator, denominator) of theta by Cramer's rule.

    Uses a square column subset of the reduced system that contains the
    Jacobian column.
    """
    rows, h = _eliminate_single_entry_columns(phi.matrix.entries, h, phi.jacobian_column)
    if not rows:
        raise ResultantVanishes("system reduced to nothing; theta is undetermined")
    Mr = PolyMatrix.build(rows)
    names = tuple(sorted(set(Mr.variables()) | {g for x in h for g in x.used_gens()}))
    rng = random.Random(seed)
    ncols = Mr.ncols
    for _ in range(3):
        pt = {v: rng.randint(-10**6, 10**6) for v in names}
        num = Mr.evaluate(pt)
        _, piv = rref(num)
        if len(piv) == Mr.nrows and piv[-1] == ncols - 1:
            break
    else:
        raise ResultantVanishes("no square subsystem containing the Jacobian column is nonsingular")
    sub = Mr.submatrix(range(Mr.nrows), piv)
    if limit is not None and sub.nrows > limit:
        raise _TooLarge(sub.nrows)
    den = fraction_free_det(sub)
    if den.is_zero():
        raise ResultantVanishes("the Cramer denominator vanishes identically")
    numr = fraction_free_det(sub.replace_column(sub.ncols - 1, h))
    return numr, den


class _TooLarge(Exception):
    def __init__(self, size):
        super().__init__(f"reduced system of size {size}")
        self.size = size


# -- completion vectors and mu --------------------------------------------------------


def mu_split(m: Sequence[int], normals, offsets) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """mu^+_i = max(0, <m,eta_i> + off_i - 1), mu^-_i = -min(0, same)."""
    vals = [dot(m, e) + o - 1 for e, o in zip(normals, offsets)]
    return tuple(max(0, v) for v in vals), tuple(-min(0, v) for v in vals)


def completion_vector(
    ring: CoxRing, a: Sequence[int], avoid: int | None = None, max_k: int = 12
) -> CompletionVector:
    """c >= 0 with x^(a+c) of degree k0*beta (c_avoid = 0 when requested).

    A search over k0 = 1..max_k finds the smallest k0; otherwise the
    vertex-sum construction is used.
    """
    a = tuple(a)
    for k0 in range(1, max_k + 1):
        for p in scaled_lattice_points(ring.P, k0):
            e = ring.exponent(p, k0)
            c = tuple(x - y for x, y in zip(e, a))
            if min(c) >= 0 and (avoid is None or c[avoid] == 0):
                return CompletionVector(c, k0, p)
    return _constructive_completion(ring, a, 0 if avoid is None else avoid)


def all_completions(ring: CoxRing, a: Sequence[int], k0: int) -> List[CompletionVector]:
    out = []
    for p in scaled_lattice_points(ring.P, k0):
        e = ring.exponent(p, k0)
        c = tuple(x - y for x, y in zip(e, a))
        if min(c) >= 0:
            out.append(CompletionVector(c, k0, p))
    return out


def _constructive_completion(ring: CoxRing, a, i: int) -> CompletionVector:
    """p = m0 + N u with u the vertex sum of facet i and <m0, eta_i> = a_i."""
    P = ring.P
    verts = P.facet_vertices(i)
    tau = len(verts)
    u = tuple(sum(col) for col in zip(*verts))
    _, W = hyperplane_lattice_basis(P.normals[i])
    Winv = unimodular_inverse(W)
    m0 = tuple(Winv[r][0] * a[i] for r in range(P.ambient))
    N = 1
    while True:
        k0 = N * tau
        p = vadd(m0, tuple(N * x for x in u))
        c = tuple(x - y for x, y in zip(ring.exponent(p, k0), a))
        if min(c) >= 0:
            return CompletionVector(c, k0, p)
        N += 1


# -- facet data and certification --------------------------------------------------------


def _facet_bases(fs: FacetResultantSet) -> List[Poly]:
    return [e.base if e.base is not None else e.polynomial for e in fs.entries]


def denominator_bound(m: Sequence[int], facets: FacetResultantSet, offsets: Sequence[int]) -> Factored:
    """prod_i (R^{eta_i})^(mu_i^-(m))."""
    P = facets.polytope
    _, mu_minus = mu_split(m, P.normals, offsets)
    return Factored(tuple((fr.polynomial, e) for fr, e in zip(facets.entries, mu_minus)))


def _check_numeric_facets(facets: FacetResultantSet):
    for fr in facets.entries:
        if fr.polynomial.is_constant() and fr.polynomial.constant_value() == 0:
            raise FacetResultantVanishes(f"facet resultant for normal {fr.normal} vanishes", fr.normal)


def certify(value, facets: FacetResultantSet, bound: Factored) -> ResidueValue:
    """Write the reduced denominator as unit * prod(base_i ^ e_i)."""
    if not isinstance(value, RationalFunction):
        return ResidueValue(value, tuple(0 for _ in facets.entries), 1, facets)
    den = value.den
    bases = _facet_bases(facets)
    exps = []
    for b, (_, cap) in zip(bases, bound.factors):
        e = 0
        if not b.is_constant():
            while True:
                try:
                    q = polynomial_divide(den, b)
                except NotDivisible:
                    break
                den = q
                e += 1
        exps.append(e)
    if not den.is_constant():
        raise DenominatorNotCertified(f"denominator factor {den} divides no facet resultant")
    ells = [fr.ell if fr.base is not None else 1 for fr in facets.entries]
    for e, ell, (_, cap) in zip(exps, ells, bound.factors):
        if e > cap * ell:
            raise DenominatorNotCertified("denominator exceeds the facet resultant bound")
    return ResidueValue(value, tuple(exps), den.constant_value(), facets)


# -- evaluation / interpolation for large symbolic systems ----------------------------------


def _coefficient_groups(f: Sequence[Poly], tvars) -> List[Dict[str, tuple]] | None:
    """Per polynomial, {parameter: exponent} when every coefficient is c * parameter."""
    groups = []
    seen = set()
    for fi in f:
        g = {}
        for m, c in split_torus(fi, tvars).items():
            if len(c) != 1:
                return None
            (e, _), = c.terms.items()
            if sum(e) != 1:
                return None
            name = c.gens[e.index(1)]
            if name in seen or name in g:
                return None
            g[name] = m
        seen |= set(g)
        groups.append(g)
    return groups


def _candidate_monomials(groups, degs, weight) -> List[Dict[str, int]]:
    """Monomials of degree degs[j] in group j whose total weight is ``weight``."""
    per = []
    for g, d in zip(groups, degs):
        if d < 0:
            return []
        names = sorted(g)
        opts = []
        for combo in itertools.combinations_with_replacement(names, d):
            w = tuple(sum(g[nm][i] for nm in combo) for i in range(len(weight)))
            opts.append((combo, w))
        per.append(opts)
    # meet in the middle on weights
    out = []
    by_w = [{}]
    for opts in per:
        nxt = {}
        for w0, lst in by_w[-1].items() if by_w[-1] else [((0,) * len(weight), [()])]:
            for combo, w in opts:
                key = tuple(x + y for x, y in zip(w0, w))
                nxt.setdefault(key, []).extend(prev + combo for prev in lst)
        by_w.append(nxt)
    for combo in by_w[-1].get(tuple(weight), []):
        d = {}
        for nm in combo:
            d[nm] = d.get(nm, 0) + 1
        out.append(d)
    return out


def interpolate_residue(
    evaluate_mod, evaluate, groups, bound: Poly, m, facets: FacetResultantSet, seed: int = 0, extra: int = 3
) -> RationalFunction:
    """Recover Res = N / B from evaluations, with N = Res * B a polynomial.

    Res is homogeneous of degree -1 in each coefficient group and has torus
    weight -m when coefficients u_{jm} get weight m; this fixes the
    candidate monomials of N.  Their coefficients come from evaluations
    modulo large primes at geometric progressions (a transposed Vandermonde
    system), rational reconstruction, and an exact check at random
    rational points through ``evaluate``.
    """
    gens = [nm for g in groups for nm in sorted(g)]
    wt = {nm: g[nm] for g in groups for nm in g}
    bterms = bound.with_gens(tuple(gens)).terms if not bound.is_constant() else {(0,) * len(gens): bound.constant_value()}
    e0 = next(iter(bterms))
    degs = []
    for g in groups:
        degs.append(sum(e0[gens.index(nm)] for nm in g) - 1)
    wB = tuple(sum(e0[i] * wt[nm][j] for i, nm in enumerate(gens)) for j in range(len(m)))
    target = tuple(x - y for x, y in zip(wB, m))
    cands = _candidate_monomials(groups, degs, target)
    if not cands:
        return RationalFunction(Poly.zero())
    rng = random.Random(seed)
    bmod = None if bound.is_constant() else bound.with_gens(tuple(gens))
    checks = []
    attempts = 0
    while len(checks) < extra:
        attempts += 1
        if attempts > 20 * extra:
            raise GenericityFailure("too many degenerate evaluation points")
        pt = {nm: rng.randint(1, 97) * rng.choice((1, -1)) for nm in gens}
        bval = bound.eval_number(pt) if bmod is not None else bound.constant_value()
        if bval == 0:
            continue
        try:
            checks.append((pt, Fraction(evaluate(pt)) * bval))
        except (ResultantVanishes, FacetResultantVanishes):
            continue
    acc, modulus, previous = None, 1, None
    for p in itertools.islice(primes_below(), 8):
        images = _modular_images(evaluate_mod, cands, gens, bmod, bound, p, rng)
        if acc is None:
            acc = images
        else:
            acc = [crt(a, modulus, b, p)[0] for a, b in zip(acc, images)]
        modulus *= p
        sol = reconstruct_all(dict(enumerate(acc)), modulus)
        if sol is None:
            continue
        terms = {}
        for i, c in sol.items():
            terms[tuple(cands[i].get(nm, 0) for nm in gens)] = c
        N = Poly(terms, gens)
        if all(N.eval_number(pt) == v for pt, v in checks):
            return _cancel_over_facets(N.compact(), bound, facets)
        if previous is not None and previous == sol:
            break
        previous = sol
    raise GenericityFailure("interpolated numerator fails verification")


def _modular_images(evaluate_mod, cands, gens, bmod, bound, p: int, rng) -> List[int]:
    """N's candidate coefficients modulo p."""
    K = len(cands)
    for _ in range(5):
        omega = {nm: rng.randrange(2, p - 1) for nm in gens}
        sigma = {nm: rng.randrange(2, p - 1) for nm in gens}
        nodes = [math.prod(pow(omega[nm], e, p) for nm, e in c.items()) % p for c in cands]
        if len(set(nodes)) < K:
            continue
        bcomp = CompiledPoly(bmod, p) if bmod is not None else None
        bconst = coeff_mod(bound.constant_value(), p) if bmod is None else None
        rhs = []
        pt = dict(sigma)
        try:
            for _k in range(K):
                bval = bcomp(pt, p) if bcomp is not None else bconst
                if bval == 0:
                    raise ResultantVanishes("bound vanishes modulo p")
                rhs.append(evaluate_mod(pt, p) * bval % p)
                pt = {nm: v * omega[nm] % p for nm, v in pt.items()}
        except (ResultantVanishes, FacetResultantVanishes, ZeroDivisionError, ValueError):
            continue
        y = transposed_vandermonde_solve(nodes, rhs, p)
        return [
            yc * pow(math.prod(pow(sigma[nm], e, p) for nm, e in c.items()) % p, -1, p) % p
            for yc, c in zip(y, cands)
        ]
    raise GenericityFailure("no usable evaluation progression modulo p")


class _ModularTheta:
    """theta * scale at integer points modulo p, from the reduced Phi."""

    def __init__(self, phi: PhiMatrix, h: Sequence[Poly], scale):
        self.rows, self.h = _eliminate_single_entry_columns(phi.matrix.entries, h, phi.jacobian_column)
        self.scale = scale
        self._cache = {}

    def _compiled(self, p):
        if p not in self._cache:
            comp = lambda x: CompiledPoly(x, p) if x else None
            self._cache[p] = ([[comp(x) for x in r] for r in self.rows], [comp(x) for x in self.h])
        return self._cache[p]

    def __call__(self, pt, p: int) -> int:
        rows, h = self._compiled(p)
        M = [[c(pt, p) if c is not None else 0 for c in r] + [hc(pt, p) if hc is not None else 0]
             for r, hc in zip(rows, h)]
        ncols = len(rows[0])
        theta = last_unknown_mod(M, ncols, p)
        if theta is None:
            raise ResultantVanishes("Phi is degenerate modulo p")
        return theta * coeff_mod(self.scale, p) % p


def _cancel_over_facets(N: Poly, bound: Poly, facets: FacetResultantSet) -> RationalFunction:
    den = bound
    for b in _facet_bases(facets):
        if b.is_constant():
            continue
        while True:
            try:
                den2 = polynomial_divide(den, b)
            except NotDivisible:
                break
            try:
                N2 = polynomial_divide(N, b)
            except NotDivisible:
                break
            N, den = N2, den2
    return RationalFunction.from_parts(N, den)


# -- global residues ----------------------------------------------------------------------


def _symbolic_gens(f: Sequence[Poly], tvars) -> List[str]:
    return sorted({g for fi in f for g in fi.used_gens() if g not in tvars})


@dataclass(frozen=True)
class ResidueSetup:
    ring: CoxRing
    k: tuple
    F: tuple
    H: Poly
    completion: CompletionVector
    mu_plus: tuple
    mu_minus: tuple


def unmixed_setup(f, tvars, m, P: LatticePolytope, completion: CompletionVector | None = None) -> ResidueSetup:
    n = len(tvars)
    ring = CoxRing(P)
    offs = tuple(n * b for b in P.offsets)
    mu_p, mu_m = mu_split(m, P.normals, offs)
    comp = completion or completion_vector(ring, mu_m)
    F0 = ring.monomial(tuple(x + y for x, y in zip(mu_m, comp.c)))
    H = ring.monomial(tuple(x + y for x, y in zip(mu_p, comp.c)))
    F = [F0] + [ring.homogenize(fi, tvars, 1) for fi in f]
    return ResidueSetup(ring, (comp.k0,) + (1,) * n, tuple(F), H, comp, mu_p, mu_m)


def common_polytope(f, tvars) -> LatticePolytope:
    hulls = [convex_hull(list(split_torus(fi, tvars))) for fi in f]
    if any(h.vertices != hulls[0].vertices for h in hulls):
        raise NotUnmixed("the polynomials do not share one Newton polytope")
    return hulls[0]


def global_residue_unmixed(
    f: Sequence[Poly],
    tvars: Sequence[str],
    m: Sequence[int],
    P: LatticePolytope | None = None,
    completion: CompletionVector | None = None,
    seed: int = 0,
) -> ResidueValue:
    """Sum over the torus roots of t^m / J^T, through a toric residue over P."""
    n = len(tvars)
    P = P or common_polytope(f, tvars)
    if len(f) != n:
        raise ValueError(f"need {n} polynomials")
    facets = facet_resultants(f, tvars, polytope=_facet_order(f, tvars, P, n))
    offs = tuple(n * b for b in P.offsets)
    bound = denominator_bound(m, facets, offs)
    setup = unmixed_setup(f, tvars, m, P, completion)
    symbolic = bool(_symbolic_gens(f, tvars))
    if not symbolic:
        _check_numeric_facets(facets)
        val = toric_residue(setup.ring, setup.k, setup.F, setup.H, seed)
        return ResidueValue(val, tuple(0 for _ in facets.entries), 1, facets, _certs(setup))
    val = _symbolic_residue(setup, f, tvars, m, facets, bound, seed)
    rv = certify(val, facets, bound)
    return ResidueValue(rv.value, rv.denominator_exponents, rv.unit, facets, _certs(setup))


def _facet_order(f, tvars, P: LatticePolytope, n: int) -> LatticePolytope:
    """The Minkowski sum nP with the facet order of P."""
    return LatticePolytope(P.ambient, tuple(tuple(n * x for x in v) for v in P.vertices), P.normals,
                           tuple(n * b for b in P.offsets), P.dim)


def _certs(setup: ResidueSetup) -> dict:
    return {
        "k0": setup.completion.k0,
        "completion": list(setup.completion.c),
        "mu_plus": list(setup.mu_plus),
        "mu_minus": list(setup.mu_minus),
    }


def _symbolic_residue(setup: ResidueSetup, f, tvars, m, facets, bound: Factored, seed, evaluate=None):
    phi = build_phi(setup.ring, setup.k, setup.F)
    h = _rhs_vector(phi, setup.H)
    scale = math.prod(phi.layout.k) * normalized_volume(setup.ring.P)
    B = bound.expand()
    if evaluate is None:
        try:
            num, den = _symbolic_theta(phi, h, seed)
        except _TooLarge:
            pass
        else:
            # the reduced denominator divides B, so num * B / den is a polynomial
            try:
                N = polynomial_divide(num * B * scale, den)
            except NotDivisible as exc:
                raise DenominatorNotCertified("residue denominator does not divide the facet bound") from exc
            return _cancel_over_facets(N, B, facets)
    groups = _coefficient_groups(f, tvars)
    if groups is None:
        raise NotImplementedError("large symbolic systems need one indeterminate per coefficient")

    def default_eval(pt):
        num = phi.matrix.evaluate(pt)
        hv = [x.eval_number(pt) if x else 0 for x in h]
        return _solve_theta_numeric(num, hv) * scale

    modular = _ModularTheta(phi, h, scale)
    return interpolate_residue(modular, evaluate or default_eval, groups, B, m, facets, seed)


def global_residue_mixed(
    f: Sequence[Poly],
    tvars: Sequence[str],
    m: Sequence[int],
    seed: int = 0,
    draws: int = 2,
    max_retries: int = 4,
    polytope: LatticePolytope | None = None,
) -> ResidueValue:
    """Global residue of t^m for arbitrary Newton polytopes, via random multipliers."""
    coeffs = [split_torus(fi, tvars) for fi in f]
    deltas = [convex_hull(list(c)) for c in coeffs]
    if mixed_volume(deltas) == 0:
        return ResidueValue(0, (), 1, None, {"mixed_volume": 0})
    D, _ = minkowski_sum(deltas)
    if polytope is not None:
        if sorted(polytope.facets) != sorted(D.facets):
            raise ValueError("given polytope is not the Minkowski sum of the Newton polytopes")
        D = polytope
    a_j = summand_offsets(D, deltas)
    facets = facet_resultants(f, tvars, polytope=D)
    bound = denominator_bound(m, facets, D.offsets)
    symbolic = bool(_symbolic_gens(f, tvars))
    if not symbolic:
        _check_numeric_facets(facets)
    rng = random.Random(seed)
    results = []
    seeds = []
    retries = 0
    while len(results) < draws:
        s = rng.randrange(2**32)
        try:
            setup, qpolys = mixed_setup(f, tvars, m, D, a_j, s)
            if symbolic:
                val = _symbolic_residue(setup, f, tvars, m, facets, bound, s,
                                        evaluate=_mixed_evaluator(setup, tvars))
            else:
                val = toric_residue(setup.ring, setup.k, setup.F, setup.H, s)
        except ResultantVanishes:
            retries += 1
            if retries > max_retries:
                raise GenericityFailure("random multipliers kept hitting a degenerate locus")
            continue
        results.append(val)
        seeds.append(s)
    if any(r != results[0] for r in results[1:]):
        raise MismatchBetweenDraws("independent multiplier draws disagree")
    certs = _certs(setup)
    certs.update({"seeds": seeds, "draws": len(results)})
    if symbolic:
        rv = certify(results[0], facets, bound)
        return ResidueValue(rv.value, rv.denominator_exponents, rv.unit, facets, certs)
    return ResidueValue(results[0], tuple(0 for _ in facets.entries), 1, facets, certs)


def _mixed_evaluator(setup: ResidueSetup, tvars):
    """Numeric residue of the already-multiplied system at a parameter point."""

    def ev(pt):
        F = [Fi.evaluate(pt) for Fi in setup.F]
        H = setup.H.evaluate(pt)
        return toric_residue(setup.ring, setup.k, F, H)

    return ev


def inequality_points(normals, offsets) -> List[tuple]:
    """Lattice points of {p : <p, eta_i> + off_i >= 0} (assumed bounded)."""
    n = len(normals[0])
    verts = []
    for I in itertools.combinations(range(len(normals)), n):
        A = [list(normals[i]) for i in I]
        if fraction_free_det(PolyMatrix.build(A)).is_zero():
            continue
        sol = _solve_square(A, [-offsets[i] for i in I])
        if all(sum(x * e for x, e in zip(sol, normals[j])) + offsets[j] >= 0 for j in range(len(normals))):
            verts.append(sol)
    if not verts:
        return []
    lo = [math.floor(min(v[i] for v in verts)) for i in range(n)]
    hi = [math.ceil(max(v[i] for v in verts)) for i in range(n)]
    out = []
    for p in itertools.product(*[range(lo[i], hi[i] + 1) for i in range(n)]):
        if all(dot(p, e) + o >= 0 for e, o in zip(normals, offsets)):
            out.append(p)
    return out


def mixed_setup(f, tvars, m, D: LatticePolytope, a_j, seed: int):
    """Cox data for the mixed reduction with multipliers drawn from ``seed``."""
    n = len(tvars)
    ring = CoxRing(D)
    rng = random.Random(seed)
    qpolys = []
    G = []
    for fi, aj in zip(f, a_j):
        qoff = tuple(a - b for a, b in zip(D.offsets, aj))
        pts = inequality_points(D.normals, qoff)
        Q = Poly.zero(ring.names)
        for p in pts:
            c = rng.randint(1, 2**16)
            Q = Q + ring.monomial(tuple(dot(p, e) + o for e, o in zip(D.normals, qoff)), c)
        qpolys.append(Q)
        G.append(ring.homogenize(fi, tvars, offsets=aj) * Q)
    mu_p, mu_m = mu_split(m, D.normals, D.offsets)
    comp = completion_vector(ring, mu_m)
    F0 = ring.monomial(tuple(x + y for x, y in zip(mu_m, comp.c)))
    H = ring.monomial(tuple(x + y for x, y in zip(mu_p, comp.c)))
    for Q in qpolys:
        H = H * Q
    setup = ResidueSetup(ring, (comp.k0,) + (1,) * n, tuple([F0] + G), H, comp, mu_p, mu_m)
    return setup, qpolys


# -- univariate oracle ------------------------------------------------------------------------


def univariate_residue_oracle(f: Poly, m: int, var: str) -> RationalFunction:
    """Sum over the roots of f of t^m / (t f'(t)), as a trace in Q(u)[t]/(f)."""
    u = {e: c.with_gens(tuple(g for g in c.gens if g != var)).compact() for e, c in f.univariate(var).items()}
    lo, hi = min(u), max(u)
    d = hi - lo
    if d == 0:
        raise DegenerateLeadingForm("f has a single term and no roots in the torus")
    g = [RationalFunction(u.get(lo + i, Poly.zero())) for i in range(d + 1)]
    if g[0].is_zero() or g[d].is_zero():
        raise DegenerateLeadingForm("extreme coefficients must be nonzero")
    lead = g[d]
    # companion matrix of the monic shifted polynomial, acting on 1, t, ..., t^(d-1)
    C = [[RationalFunction(0) for _ in range(d)] for _ in range(d)]
    for i in range(1, d):
        C[i][i - 1] = RationalFunction(1)
    for i in range(d):
        C[i][d - 1] = -g[i] / lead

    def mat_mul(A, B):
        return [[sum((A[i][k] * B[k][j] for k in range(d)), RationalFunction(0)) for j in range(d)] for i in range(d)]

    def mat_pow(A, e):
        R = [[RationalFunction(int(i == j)) for j in range(d)] for i in range(d)]
        for _ in range(e):
            R = mat_mul(R, A)
        return R

    def mat_inv(A):
        Aug = [list(A[i]) + [RationalFunction(int(i == j)) for j in range(d)] for i in range(d)]
        for c in range(d):
            p = next(i for i in range(c, d) if not Aug[i][c].is_zero())
            Aug[c], Aug[p] = Aug[p], Aug[c]
            piv = Aug[c][c]
            Aug[c] = [x / piv for x in Aug[c]]
            for i in range(d):
                if i != c and not Aug[i][c].is_zero():
                    fct = Aug[i][c]
                    Aug[i] = [x - fct * y for x, y in zip(Aug[i], Aug[c])]
        return [r[d:] for r in Aug]

    Tm = mat_pow(C, m) if m >= 0 else mat_pow(mat_inv(C), -m)
    # t f'(t) of the original Laurent polynomial, as a matrix polynomial in C
    Cinv = mat_inv(C) if lo < 0 else None
    J = [[RationalFunction(0) for _ in range(d)] for _ in range(d)]
    for e, c in u.items():
        if e == 0:
            continue
        Pw = mat_pow(C, e) if e >= 0 else mat_pow(Cinv, -e)
        coef = RationalFunction(c) * e
        J = [[J[i][j] + coef * Pw[i][j] for j in range(d)] for i in range(d)]
    X = mat_mul(Tm, mat_inv(J))
    tr = RationalFunction(0)
    for i in range(d):
        tr = tr + X[i][i]
    return tr
