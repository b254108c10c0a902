"""Exact linear algebra over Q and over polynomial rings.

Numeric matrices are lists of lists of ints/Fractions.  A :class:`PolyMatrix`
holds :class:`Poly` entries plus optional row/column labels.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence

from .poly import Poly, exact_divide, qnorm
from .ratfunc import RationalFunction


class NonSquare(ValueError):
    pass


class SingularMatrix(ArithmeticError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PolyMatrix:
    entries: tuple  # tuple of row tuples of Poly
    row_labels: tuple = ()
    col_labels: tuple = ()

    def __post_init__(self):
        rows = self.entries
        if rows and len({len(r) for r in rows}) != 1:
            raise DimensionMismatch("ragged matrix")
        for labels, n in ((self.row_labels, self.nrows), (self.col_labels, self.ncols)):
            if labels and (len(labels) != n or len(set(labels)) != n):
                raise ValueError("labels must be unique and one per row/column")

    @classmethod
    def build(cls, rows, row_labels=(), col_labels=()) -> "PolyMatrix":
        ent = tuple(tuple(x if isinstance(x, Poly) else Poly.const(x) for x in r) for r in rows)
        return cls(ent, tuple(row_labels), tuple(col_labels))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> List[Poly]:
        return [r[j] for r in self.entries]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        ent = tuple(tuple(self.entries[i][j] for j in cols) for i in rows)
        rl = tuple(self.row_labels[i] for i in rows) if self.row_labels else ()
        cl = tuple(self.col_labels[j] for j in cols) if self.col_labels else ()
        return PolyMatrix(ent, rl, cl)

    def replace_column(self, j: int, col: Sequence[Poly]) -> "PolyMatrix":
        ent = tuple(tuple(col[i] if jj == j else x for jj, x in enumerate(r)) for i, r in enumerate(self.entries))
        return PolyMatrix(ent, self.row_labels, self.col_labels)

    def variables(self) -> tuple:
        seen = []
        for r in self.entries:
            for x in r:
                for g in x.used_gens():
                    if g not in seen:
                        seen.append(g)
        return tuple(seen)

    def is_numeric(self) -> bool:
        return all(x.is_constant() for r in self.entries for x in r)

    def evaluate(self, values) -> List[List]:
        """Numeric matrix obtained by substituting ``values``."""
        return [[x.eval_number(values) if x.terms else 0 for x in r] for r in self.entries]

    def numeric(self) -> List[List]:
        return [[x.constant_value() if x.terms else 0 for x in r] for r in self.entries]


# -- numeric routines -----------------------------------------------------------


def _to_integer_rows(M):
    """Scale each row to integers; return (rows, product of scale factors)."""
    rows = []
    scale = 1
    for r in M:
        den = 1
        for x in r:
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
        rows.append([int(x * den) for x in r])
        scale *= den
    return rows, scale


def bareiss_det(M) -> Fraction | int:
    """Determinant of a square numeric matrix by fraction-free elimination."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise NonSquare("determinant of a non-square matrix")
    if n == 0:
        return 1
    A, scale = _to_integer_rows(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    return qnorm(Fraction(sign * A[n - 1][n - 1], scale))


def rref(M, ncols: int | None = None):
    """Reduced row echelon form over Q. Returns (R, pivot_columns).

    Only the first ``ncols`` columns are used for pivoting.
    """
    A = [[Fraction(x) for x in r] for r in M]
    m = len(A)
    n = len(A[0]) if A else 0
    limit = n if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(limit):
        p = None
        for i in range(r, m):
            if A[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        if piv != 1:
            A[r] = [x / piv for x in A[r]]
        rowr = A[r]
        nz = [j for j in range(c, n) if rowr[j] != 0]
        for i in range(m):
            if i != r:
                f = A[i][c]
                if f != 0:
                    ri = A[i]
                    for j in nz:
                        ri[j] -= f * rowr[j]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(M) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def solve_numeric(M, rhs):
    """One exact solution of M y = rhs (free variables zero), or None if inconsistent."""
    m = len(M)
    n = len(M[0]) if m else 0
    aug = [list(M[i]) + [rhs[i]] for i in range(m)]
    R, piv = rref(aug, ncols=n)
    for i in range(len(piv), m):
        if R[i][n] != 0:
            return None
    y = [Fraction(0)] * n
    for i, c in enumerate(piv):
        y[c] = R[i][n]
    return y


# -- symbolic determinants ------------------------------------------------------


def cofactor_det(M: PolyMatrix | List[List]) -> Poly | Fraction:
    """Plain Laplace expansion along the first row; the test oracle."""
    rows = M.entries if isinstance(M, PolyMatrix) else M
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NonSquare("determinant of a non-square matrix")
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        a = rows[0][j]
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def memo_minor_det(M: PolyMatrix) -> Poly:
    """Determinant by expansion over column subsets, memoised layer by layer.

    Rows are processed sparsest first; layer r holds the r x r minors on the
    first r processed rows for every column subset that is reachable through
    nonzero entries.
    """
    n = M.nrows
    if M.ncols != n:
        raise NonSquare("determinant of a non-square matrix")
    if n == 0:
        return Poly.const(1)
    order = sorted(range(n), key=lambda i: sum(1 for x in M.entries[i] if x))
    sign = _perm_sign(order)
    layer: Dict[int, Poly] = {0: Poly.const(1)}
    for r, i in enumerate(order):
        row = M.entries[i]
        nz = [(j, x) for j, x in enumerate(row) if x]
        nxt: Dict[int, Poly] = {}
        for mask, val in layer.items():
            for j, x in nz:
                bit = 1 << j
                if mask & bit:
                    continue
                # the new column sits at position (# chosen columns below j) in sorted order
                pos = bin(mask & (bit - 1)).count("1")
                term = x * val
                if (r - pos) % 2:
                    term = -term
                key = mask | bit
                prev = nxt.get(key)
                nxt[key] = term if prev is None else prev + term
        layer = {k: v for k, v in nxt.items() if v}
        if not layer:
            return Poly.const(0)
    (val,) = layer.values()
    return val if sign > 0 else -val


def _perm_sign(perm: Sequence[int]) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def bareiss_poly_det(M: PolyMatrix) -> Poly:
    """Fraction-free elimination with exact polynomial division."""
    n = M.nrows
    if M.ncols != n:
        raise NonSquare("determinant of a non-square matrix")
    if n == 0:
        return Poly.const(1)
    A = [list(r) for r in M.entries]
    sign = 1
    prev = Poly.const(1)
    for k in range(n - 1):
        cands = [i for i in range(k, n) if A[i][k]]
        if not cands:
            return Poly.const(0)
        p = min(cands, key=lambda i: len(A[i][k]))
        if p != k:
            A[k], A[p] = A[p], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            for j in range(k + 1, n):
                v = akk * A[i][j]
                if aik:
                    v = v - aik * A[k][j]
                A[i][j] = exact_divide(v, prev) if not prev.is_constant() else v / prev.constant_value()
            A[i][k] = Poly.const(0)
        prev = akk
    d = A[n - 1][n - 1]
    return d if sign > 0 else -d


MEMO_LIMIT = 16


def fraction_free_det(M: PolyMatrix) -> Poly:
    """Exact determinant of a square polynomial matrix.

    Numeric matrices use integer Bareiss; symbolic ones use memoised minor
    expansion up to ``MEMO_LIMIT`` columns and polynomial Bareiss beyond.
    """
    if not isinstance(M, PolyMatrix):
        M = PolyMatrix.build(M)
    if M.nrows != M.ncols:
        raise NonSquare(f"matrix is {M.nrows}x{M.ncols}")
    if M.is_numeric():
        return Poly.const(bareiss_det(M.numeric()))
    if M.nrows <= MEMO_LIMIT:
        return memo_minor_det(M)
    return bareiss_poly_det(M)


def is_nonsingular(M: PolyMatrix, rng: random.Random | None = None, tries: int = 2) -> bool:
    """Random-evaluation test; ``True`` is certain, ``False`` is retried once."""
    rng = rng or random.Random(0)
    names = M.variables()
    for _ in range(tries):
        pt = {n: rng.randint(-10**6, 10**6) for n in names}
        if bareiss_det(M.evaluate(pt)) != 0:
            return True
    return False


def cramer_solve(M: PolyMatrix, rhs: Sequence[Poly], symbolic_check: bool = False) -> List[RationalFunction]:
    """Solve M x = rhs over the fraction field by Cramer's rule."""
    if not isinstance(M, PolyMatrix):
        M = PolyMatrix.build(M)
    if M.nrows != M.ncols:
        raise NonSquare(f"matrix is {M.nrows}x{M.ncols}")
    if len(rhs) != M.nrows:
        raise DimensionMismatch("right-hand side length differs from matrix size")
    rhs = [x if isinstance(x, Poly) else Poly.const(x) for x in rhs]
    if not is_nonsingular(PolyMatrix(M.entries), tries=2):
        if not symbolic_check or fraction_free_det(M).is_zero():
            raise SingularMatrix("matrix is singular")
    d = fraction_free_det(M)
    if d.is_zero():
        raise SingularMatrix("matrix is singular")
    return [RationalFunction(fraction_free_det(M.replace_column(j, rhs)), d) for j in range(M.ncols)]
