"""Lattice polytopes, integer normal forms and lattice indices."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .linalg import bareiss_det, rank

Point = Tuple[int, ...]


class EmptyInput(ValueError):
    pass


class Unsupported(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class InfiniteIndex(ArithmeticError):
    pass


def dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def vadd(a, b) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def vscale(k, a) -> Point:
    return tuple(k * x for x in a)


def primitive(v) -> Point:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in v)


# -- Smith normal form --------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``left * matrix * right == diagonal`` with unimodular ``left``/``right``."""

    matrix: tuple
    left: tuple
    right: tuple
    diagonal: tuple  # the full m x n diagonal matrix
    invariants: tuple  # nonzero diagonal entries, each dividing the next

    @property
    def rank(self) -> int:
        return len(self.invariants)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithDecomposition:
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row dst += f * row src
        A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for r in A:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide every remaining entry
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    inv = tuple(A[i][i] for i in range(min(m, n)) if A[i][i])
    return SmithDecomposition(
        tuple(map(tuple, M)), tuple(map(tuple, U)), tuple(map(tuple, V)), tuple(map(tuple, A)), inv
    )


def unimodular_inverse(U) -> List[List[int]]:
    """Inverse of an integer matrix with determinant +-1."""
    n = len(U)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(U)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    out = [[x for x in r[n:]] for r in A]
    if any(x.denominator != 1 for r in out for x in r):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in r] for r in out]


# -- lattice indices ------------------------------------------------------------


def _difference_generators(supports: Sequence[Sequence[Point]]) -> List[Point]:
    gens = []
    for S in supports:
        S = list(S)
        base = S[0]
        gens.extend(vsub(p, base) for p in S[1:])
    return gens


def hyperplane_lattice_basis(eta: Sequence[int]) -> Tuple[List[Point], List[List[int]]]:
    """Basis of {v in Z^n : <v, eta> = 0} and a unimodular W with W v = (<v,eta>, coords).

    ``eta`` must be primitive.  Row 0 of ``W`` is ``eta``; the remaining rows
    give coordinates of hyperplane vectors in the returned basis.
    """
    eta = tuple(eta)
    sd = smith_normal_form([eta])
    if sd.invariants != (1,):
        raise ValueError("normal vector must be primitive")
    V = [list(r) for r in sd.right]
    n = len(eta)
    basis = [tuple(V[i][j] for i in range(n)) for j in range(1, n)]
    W = unimodular_inverse(V)
    return basis, W


def project_to_facet(points: Iterable[Point], eta: Sequence[int]) -> List[Point]:
    """Coordinates in Z^(n-1) of points relative to the hyperplane lattice of ``eta``.

    Points on one translate of the hyperplane map injectively; all translates
    use the same coordinate system, so differences are preserved.
    """
    _, W = hyperplane_lattice_basis(eta)
    out = []
    for p in points:
        w = [dot(r, p) for r in W]
        out.append(tuple(w[1:]))
    return out


def lattice_index(supports, eta: Sequence[int] | None = None) -> int:
    """Index of the lattice generated by affine differences of the supports.

    A single support set or a list of them may be given.  Without ``eta`` the
    ambient lattice is Z^n; with ``eta`` it is the hyperplane lattice
    {v : <v,eta> = 0} and all differences must lie in it.
    """
    supports = list(supports)
    if supports and isinstance(supports[0][0], int):
        supports = [supports]
    supports = [[tuple(p) for p in S] for S in supports]
    n = len(supports[0][0])
    gens = _difference_generators(supports)
    if eta is not None:
        eta = primitive(eta)
        _, W = hyperplane_lattice_basis(eta)
        coords = []
        for g in gens:
            w = [dot(r, g) for r in W]
            if w[0] != 0:
                raise ValueError("supports do not lie on translates of the hyperplane")
            coords.append(tuple(w[1:]))
        gens = coords
        n -= 1
    if n == 0:
        return 1
    if not gens:
        raise InfiniteIndex("no difference vectors; the lattice is rank 0")
    sd = smith_normal_form(gens)
    if sd.rank < n:
        raise InfiniteIndex(f"difference lattice has rank {sd.rank} < {n}")
    return math.prod(sd.invariants)


# -- polytopes ------------------------------------------------------------------


@dataclass(frozen=True)
class LatticePolytope:
    """Polytope {m : <m, eta_i> + b_i >= 0} with its vertex list.

    ``dim`` is the dimension of the polytope itself; lower-dimensional
    polytopes keep their vertices but carry no facets.
    """

    ambient: int
    vertices: tuple
    normals: tuple
    offsets: tuple
    dim: int

    @property
    def facets(self):
        return tuple(zip(self.normals, self.offsets))

    @property
    def n_facets(self) -> int:
        return len(self.normals)

    @property
    def full_dimensional(self) -> bool:
        return self.dim == self.ambient

    def contains(self, m, k: int = 1, strict: bool = False) -> bool:
        lim = 1 if strict else 0
        if not self.full_dimensional:
            if strict:
                return False
            return tuple(m) in {vscale(k, v) for v in self.vertices} or _in_lowdim_hull(self, m, k)
        return all(dot(m, e) + k * b >= lim for e, b in zip(self.normals, self.offsets))

    def scaled(self, k: int) -> "LatticePolytope":
        return LatticePolytope(
            self.ambient,
            tuple(vscale(k, v) for v in self.vertices),
            self.normals,
            tuple(k * b for b in self.offsets),
            self.dim,
        )

    def translated(self, v) -> "LatticePolytope":
        v = tuple(v)
        return LatticePolytope(
            self.ambient,
            tuple(sorted(vadd(p, v) for p in self.vertices)),
            self.normals,
            tuple(b - dot(v, e) for e, b in zip(self.normals, self.offsets)),
            self.dim,
        )

    def facet_index(self, eta) -> int:
        return self.normals.index(tuple(eta))

    def reordered(self, normals: Sequence[Sequence[int]]) -> "LatticePolytope":
        """Same polytope with facets listed in the given normal order."""
        normals = [tuple(e) for e in normals]
        if sorted(normals) != sorted(self.normals):
            raise ValueError("normal list does not match the facets of the polytope")
        idx = [self.normals.index(e) for e in normals]
        return LatticePolytope(
            self.ambient, self.vertices, tuple(normals), tuple(self.offsets[i] for i in idx), self.dim
        )

    def lattice_points(self, k: int = 1, strict: bool = False) -> List[Point]:
        return scaled_lattice_points(self, k, strict)

    def facet_vertices(self, i: int) -> List[Point]:
        e, b = self.normals[i], self.offsets[i]
        return [v for v in self.vertices if dot(v, e) + b == 0]


def _in_lowdim_hull(P: LatticePolytope, m, k: int) -> bool:
    pts = [vscale(k, v) for v in P.vertices]
    return point_in_hull(tuple(m), pts)


def point_in_hull(m, pts) -> bool:
    """Exact membership via the hull of pts plus m having the same vertex set."""
    if m in pts:
        return True
    H = convex_hull(list(pts) + [m])
    return m not in H.vertices and H.dim == convex_hull(pts).dim


def from_inequalities(normals, offsets) -> LatticePolytope:
    """Build a polytope from an (irredundant) inequality list, keeping its order.

    Each pair (eta, b) means <m, eta> + b >= 0.  Normals are made primitive.
    """
    normals = [tuple(e) for e in normals]
    offsets = list(offsets)
    n = len(normals[0])
    prim = []
    for e, b in zip(normals, offsets):
        g = math.gcd(*e) if n > 1 else abs(e[0])
        if b % g:
            raise ValueError("offset not divisible by normal content; polytope is not integral here")
        prim.append((tuple(x // g for x in e), b // g))
    verts = set()
    for I in itertools.combinations(range(len(prim)), n):
        A = [list(prim[i][0]) for i in I]
        if rank(A) < n:
            continue
        rhs = [-prim[i][1] for i in I]
        sol = _solve_square(A, rhs)
        if all(dot(sol, e) + b >= 0 for e, b in prim):
            if any(x.denominator != 1 for x in sol):
                raise ValueError("polytope has a non-integral vertex")
            verts.add(tuple(int(x) for x in sol))
    if not verts:
        raise EmptyInput("inequalities define an empty or unbounded region")
    P = LatticePolytope(n, tuple(sorted(verts)), tuple(p[0] for p in prim), tuple(p[1] for p in prim), n)
    H = convex_hull(P.vertices)
    if sorted(H.facets) != sorted(P.facets):
        raise ValueError("inequality list is redundant or does not describe a full-dimensional polytope")
    return P


def _solve_square(A, rhs):
    n = len(A)
    M = [[Fraction(x) for x in r] + [Fraction(c)] for r, c in zip(A, rhs)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[p] = M[p], M[c]
        M[c] = [x / M[c][c] for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


def _affine_dim(pts) -> int:
    base = pts[0]
    diffs = [vsub(p, base) for p in pts[1:]]
    return rank(diffs) if diffs else 0


def _hull2(pts) -> List[Point]:
    """Counter-clockwise hull vertices (monotone chain), collinear points dropped."""
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def convex_hull(points) -> LatticePolytope:
    """Vertices and primitive inner facet normals, facets sorted by normal."""
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise EmptyInput("convex hull of an empty point set")
    n = len(pts[0])
    if n >= 4:
        raise Unsupported("convex hulls are implemented for ambient dimension at most 3")
    d = _affine_dim(pts)
    if n == 1:
        lo, hi = pts[0], pts[-1]
        if d == 0:
            return LatticePolytope(1, (lo,), (), (), 0)
        return LatticePolytope(1, (lo, hi), ((-1,), (1,)), (hi[0], -lo[0]), 1)
    if d < n:
        # lower-dimensional: keep extreme points only
        verts = _lowdim_vertices(pts, d)
        return LatticePolytope(n, tuple(sorted(verts)), (), (), d)
    if n == 2:
        hull = _hull2(pts)
        facets = []
        for p, q in zip(hull, hull[1:] + hull[:1]):
            e = primitive((-(q[1] - p[1]), q[0] - p[0]))
            facets.append((e, -dot(p, e)))
        facets.sort()
        return LatticePolytope(2, tuple(sorted(hull)), tuple(f[0] for f in facets), tuple(f[1] for f in facets), 2)
    # n == 3: every plane through three affinely independent points that
    # supports the whole set is a facet plane
    cand = _lowdim_vertices(pts, 3)
    facets = set()
    for a, b, c in itertools.combinations(cand, 3):
        nv = _cross3(vsub(b, a), vsub(c, a))
        if nv == (0, 0, 0):
            continue
        nv = primitive(nv)
        vals = [dot(nv, vsub(p, a)) for p in cand]
        if all(v >= 0 for v in vals):
            facets.add((nv, -dot(nv, a)))
        elif all(v <= 0 for v in vals):
            nn = vscale(-1, nv)
            facets.add((nn, -dot(nn, a)))
    facets = sorted(facets)
    verts = []
    for p in cand:
        tight = [e for e, b in facets if dot(p, e) + b == 0]
        if len(tight) >= 3 and rank(tight) == 3:
            verts.append(p)
    return LatticePolytope(3, tuple(sorted(verts)), tuple(f[0] for f in facets), tuple(f[1] for f in facets), 3)


def _lowdim_vertices(pts, d) -> List[Point]:
    """Extreme points of a (possibly lower-dimensional) point set."""
    pts = sorted(set(pts))
    if d == 0:
        return [pts[0]]
    n = len(pts[0])
    base = pts[0]
    if d == 1:
        direction = next(vsub(p, base) for p in pts if p != base)
        key = [dot(vsub(p, base), direction) for p in pts]
        return [pts[key.index(min(key))], pts[key.index(max(key))]]
    if d == 2 and n == 3:
        # project to a coordinate plane where the affine span maps injectively
        diffs = [vsub(p, base) for p in pts]
        nv = None
        for p, q in itertools.combinations(diffs, 2):
            c = _cross3(p, q)
            if c != (0, 0, 0):
                nv = c
                break
        drop = next(i for i in range(3) if nv[i] != 0)
        proj = {tuple(x for i, x in enumerate(p) if i != drop): p for p in pts}
        return [proj[q] for q in _hull2(list(proj))]
    # full-dimensional in R^3: a point is extreme iff it is not in the hull of the others
    return _extreme_points_3d(pts)


def _extreme_points_3d(pts) -> List[Point]:
    # a point is a vertex iff some linear functional is uniquely minimised there;
    # we filter with supporting planes through triples, which is exact for full-dim sets
    if len(pts) <= 4:
        return list(pts)
    verts = set()
    for a, b, c in itertools.combinations(pts, 3):
        nv = _cross3(vsub(b, a), vsub(c, a))
        if nv == (0, 0, 0):
            continue
        vals = [dot(nv, vsub(p, a)) for p in pts]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            on = [p for p, v in zip(pts, vals) if v == 0]
            verts.update(_lowdim_vertices(on, _affine_dim(on)))
    return sorted(verts)


def scaled_lattice_points(P: LatticePolytope, k: int = 1, strict: bool = False) -> List[Point]:
    """Integer points of kP (or of its interior), in lexicographic order."""
    if k < 0:
        raise ValueError("scaling factor must be non-negative")
    if not P.full_dimensional:
        if strict:
            return []
        verts = [vscale(k, v) for v in P.vertices]
        box = _box(verts)
        return [m for m in box if point_in_hull(m, verts)]
    lim = 1 if strict else 0
    verts = [vscale(k, v) for v in P.vertices]
    out = []
    for m in _box(verts):
        if all(dot(m, e) + k * b >= lim for e, b in zip(P.normals, P.offsets)):
            out.append(m)
    return out


def _box(verts):
    n = len(verts[0])
    lo = [min(v[i] for v in verts) for i in range(n)]
    hi = [max(v[i] for v in verts) for i in range(n)]
    return itertools.product(*[range(lo[i], hi[i] + 1) for i in range(n)])


def summand_offsets(P: LatticePolytope, deltas: Sequence[LatticePolytope]) -> List[Tuple[int, ...]]:
    """a_i^j = -min over Delta_j of <m, eta_i>, for each summand j."""
    return [tuple(-min(dot(v, e) for v in D.vertices) for e in P.normals) for D in deltas]


def minkowski_sum(polys: Sequence[LatticePolytope]):
    """Return (sum polytope, per-summand offsets a^j)."""
    polys = list(polys)
    if not polys:
        raise EmptyInput("Minkowski sum of nothing")
    n = polys[0].ambient
    if any(p.ambient != n for p in polys):
        raise DimensionMismatch("summands live in different dimensions")
    sums = [tuple([0] * n)]
    for Q in polys:
        sums = {vadd(s, v) for s in sums for v in Q.vertices}
        sums = convex_hull(sums).vertices
    P = convex_hull(sums)
    return P, summand_offsets(P, polys)


def volume(P: LatticePolytope) -> Fraction:
    """Euclidean volume; zero for lower-dimensional input."""
    if not P.full_dimensional:
        return Fraction(0)
    n = P.ambient
    if n == 1:
        return Fraction(P.vertices[-1][0] - P.vertices[0][0])
    if n == 2:
        poly = _hull2(P.vertices)
        s = 0
        for p, q in zip(poly, poly[1:] + poly[:1]):
            s += p[0] * q[1] - p[1] * q[0]
        return Fraction(abs(s), 2)
    # n == 3: cone from a fixed vertex over fan-triangulated facets
    v0 = P.vertices[0]
    total = 0
    for i in range(P.n_facets):
        fv = P.facet_vertices(i)
        if v0 in fv:
            continue
        ring = _lowdim_vertices(fv, 2)
        for b, c in zip(ring[1:-1], ring[2:]):
            total += abs(bareiss_det([vsub(ring[0], v0), vsub(b, v0), vsub(c, v0)]))
    return Fraction(total, 6)


def normalized_volume(P: LatticePolytope) -> int:
    """n! * vol(P)."""
    v = volume(P) * math.factorial(P.ambient)
    assert v.denominator == 1
    return int(v)


def mixed_volume(deltas: Sequence[LatticePolytope]) -> int:
    """Mixed volume normalised so that MV(P,...,P) = n! vol(P)."""
    deltas = list(deltas)
    n = len(deltas)
    if any(D.ambient != n for D in deltas):
        raise DimensionMismatch("mixed volume needs n polytopes in R^n")
    total = Fraction(0)
    for r in range(1, n + 1):
        for J in itertools.combinations(range(n), r):
            S, _ = minkowski_sum([deltas[j] for j in J])
            total += (-1) ** (n - r) * volume(S)
    assert total.denominator == 1
    return int(total)


def face_support(support: Iterable[Point], eta: Sequence[int]) -> List[Point]:
    support = [tuple(p) for p in support]
    if not any(eta):
        raise ValueError("direction must be nonzero")
    vals = [dot(p, eta) for p in support]
    lo = min(vals)
    return sorted(p for p, v in zip(support, vals) if v == lo)


@dataclass(frozen=True)
class FaceData:
    normal: tuple
    supports: tuple  # per polynomial, the face support in Z^n
    projected: tuple  # per polynomial, face support in Z^(n-1)
    ell: int


def facet_data(supports: Sequence[Sequence[Point]], eta: Sequence[int]) -> FaceData:
    faces = tuple(tuple(face_support(S, eta)) for S in supports)
    proj = tuple(tuple(project_to_facet(F, eta)) for F in faces)
    ell = lattice_index([list(F) for F in faces], eta) if len(eta) > 1 else 1
    return FaceData(tuple(eta), faces, proj, ell)
