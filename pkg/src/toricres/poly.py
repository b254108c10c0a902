"""Sparse multivariate (Laurent) polynomials with exact rational coefficients.

A :class:`Poly` carries an ordered tuple of generator names and a dict mapping
dense exponent tuples to coefficients.  Coefficients are ``int`` or
``fractions.Fraction``; zero coefficients are never stored.  Exponents may be
negative, so the same class serves torus (Laurent) variables, Cox variables and
coefficient indeterminates.  Polynomials over different generator tuples are
aligned on the fly over the union of generators in natural name order.

The term order is graded lexicographic with respect to the generator order
(first generator largest).
"""
from __future__ import annotations

import heapq
import math
import re
from fractions import Fraction
from functools import lru_cache, reduce
from numbers import Rational
from operator import add, sub
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Coeff = Union[int, Fraction]
Exps = Tuple[int, ...]


class NotDivisible(ArithmeticError):
    """Raised by :func:`exact_divide` when the divisor does not divide."""


def qnorm(c) -> Coeff:
    """Return ``c`` as an int when it is integral, else as a Fraction."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return qnorm(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return qnorm(Fraction(c))
    raise TypeError(f"not an exact rational: {c!r}")


def grlex_key(e: Exps):
    return (sum(e), e)


def gen_key(name: str):
    """Natural order on generator names: a2 < a10 < b0."""
    parts = re.split(r"(\d+)", name)
    return tuple(int(x) if x.isdigit() else x for x in parts)


@lru_cache(maxsize=4096)
def merged_gens(a: Tuple[str, ...], b: Tuple[str, ...]) -> Tuple[str, ...]:
    return tuple(sorted(set(a) | set(b), key=gen_key))


class Poly:
    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, terms: Mapping[Exps, Coeff] | None = None, gens: Sequence[str] = ()):
        gens = tuple(gens)
        clean: Dict[Exps, Coeff] = {}
        n = len(gens)
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match generators {gens}")
            if c:
                clean[e] = clean.get(e, 0) + qnorm(c)
                if not clean[e]:
                    del clean[e]
        self.gens = gens
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exps, Coeff], gens: Tuple[str, ...]) -> "Poly":
        p = object.__new__(cls)
        p.gens = gens
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c, gens: Sequence[str] = ()) -> "Poly":
        gens = tuple(gens)
        c = qnorm(c)
        return cls._raw({(0,) * len(gens): c} if c else {}, gens)

    @classmethod
    def var(cls, name: str, gens: Sequence[str] | None = None) -> "Poly":
        gens = (name,) if gens is None else tuple(gens)
        e = tuple(1 if g == name else 0 for g in gens)
        if name not in gens:
            raise ValueError(f"{name} not among {gens}")
        return cls._raw({e: 1}, gens)

    @classmethod
    def monomial(cls, exps: Mapping[str, int] | Sequence[int], coeff=1, gens: Sequence[str] | None = None) -> "Poly":
        if isinstance(exps, Mapping):
            if gens is None:
                gens = tuple(exps)
            gens = tuple(gens)
            e = tuple(exps.get(g, 0) for g in gens)
        else:
            gens = tuple(gens or ())
            e = tuple(exps)
        return cls({e: coeff}, gens)

    @classmethod
    def zero(cls, gens: Sequence[str] = ()) -> "Poly":
        return cls._raw({}, tuple(gens))

    # -- alignment ----------------------------------------------------------

    def with_gens(self, gens: Sequence[str]) -> "Poly":
        """Re-express over ``gens`` (which must contain every used generator)."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        idx = {g: i for i, g in enumerate(gens)}
        pos = []
        for i, g in enumerate(self.gens):
            if g in idx:
                pos.append(idx[g])
            else:
                pos.append(None)
        n = len(gens)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    j = pos[i]
                    if j is None:
                        raise ValueError(f"generator {self.gens[i]} is used but missing from {gens}")
                    ne[j] = k
            out[tuple(ne)] = c
        return Poly._raw(out, gens)

    def used_gens(self) -> Tuple[str, ...]:
        used = [False] * len(self.gens)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(g for g, u in zip(self.gens, used) if u)

    def compact(self) -> "Poly":
        """Drop generators that do not occur."""
        return self.with_gens(self.used_gens())

    def _align(self, other: "Poly"):
        if self.gens == other.gens:
            return self.gens, self.terms, other.terms
        gens = merged_gens(self.gens, other.gens)
        return gens, self.with_gens(gens).terms, other.with_gens(gens).terms

    @staticmethod
    def _coerce(other, gens) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return Poly.const(other, gens)
        return None

    # -- predicates / accessors ---------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and not any(next(iter(t))))

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self, gens: Sequence[str] | None = None):
        """Terms in decreasing graded-lex order, as (exponent tuple, coeff)."""
        p = self if gens is None else self.with_gens(gens)
        return sorted(p.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def leading_coefficient(self) -> Coeff:
        return self.leading_term()[1]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, name: str) -> int:
        if name not in self.gens:
            return 0 if self.terms else -1
        i = self.gens.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def min_degree(self, name: str) -> int:
        if name not in self.gens:
            return 0
        i = self.gens.index(name)
        return min(e[i] for e in self.terms) if self.terms else 0

    def degree_in(self, names: Iterable[str]) -> int:
        """Maximal total degree in the generators ``names``."""
        idx = [self.gens.index(n) for n in names if n in self.gens]
        if not self.terms:
            return -1
        return max(sum(e[i] for i in idx) for e in self.terms)

    def is_homogeneous_in(self, names: Iterable[str]) -> bool:
        idx = [self.gens.index(n) for n in names if n in self.gens]
        return len({sum(e[i] for i in idx) for e in self.terms}) <= 1

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "Poly":
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.gens)

    def __pos__(self) -> "Poly":
        return self

    def __add__(self, other) -> "Poly":
        o = self._coerce(other, self.gens)
        if o is None:
            return NotImplemented
        gens, a, b = self._align(o)
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(out, gens)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        o = self._coerce(other, self.gens)
        if o is None:
            return NotImplemented
        gens, a, b = self._align(o)
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) - c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(out, gens)

    def __rsub__(self, other) -> "Poly":
        o = self._coerce(other, self.gens)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
                c = qnorm(other)
                if not c:
                    return Poly._raw({}, self.gens)
                return Poly._raw({e: v * c for e, v in self.terms.items()}, self.gens)
            return NotImplemented
        gens, a, b = self._align(other)
        if not a or not b:
            return Poly._raw({}, gens)
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exps, Coeff] = {}
        get = out.get
        if len(b) == 1:
            (eb, cb), = b.items()
            if not any(eb):
                return Poly._raw({e: c * cb for e, c in a.items()}, gens)
            return Poly._raw({tuple(map(add, e, eb)): c * cb for e, c in a.items()}, gens)
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Poly._raw({e: c for e, c in out.items() if c}, gens)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return exact_divide(self, other)
        c = qnorm(other)
        if not c:
            raise ZeroDivisionError("division of polynomial by zero")
        return Poly._raw({e: qnorm(Fraction(v) / c) for e, v in self.terms.items()}, self.gens)

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if self.is_monomial():
                (e, c), = self.terms.items()
                return Poly._raw({tuple(k * x for x in e): qnorm(Fraction(1) / Fraction(c) ** (-k))}, self.gens)
            raise ValueError("negative power of a non-monomial")
        result = Poly.const(1, self.gens)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale_monomial(self, exps: Sequence[int], coeff=1) -> "Poly":
        """Multiply by ``coeff * gens**exps`` (exps aligned with ``self.gens``)."""
        exps = tuple(exps)
        c = qnorm(coeff)
        return Poly._raw({tuple(map(add, e, exps)): v * c for e, v in self.terms.items()}, self.gens)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        o = self._coerce(other, self.gens)
        if o is None:
            return NotImplemented
        if self.gens == o.gens:
            return self.terms == o.terms
        try:
            gens, a, b = self._align(o)
        except ValueError:
            return False
        return a == b

    def _canon(self):
        used = self.used_gens()
        idx = [self.gens.index(g) for g in used]
        return frozenset(
            (tuple((used[j], e[i]) for j, i in enumerate(idx) if e[i]), c) for e, c in self.terms.items()
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._canon())
        return self._hash

    def __repr__(self) -> str:
        from .textio import format_polynomial

        return f"Poly({format_polynomial(self)!r})"

    def __str__(self) -> str:
        from .textio import format_polynomial

        return format_polynomial(self)

    # -- calculus / substitution --------------------------------------------

    def diff(self, name: str) -> "Poly":
        if name not in self.gens:
            return Poly._raw({}, self.gens)
        i = self.gens.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Poly._raw(out, self.gens)

    def euler_diff(self, name: str) -> "Poly":
        """``name * d/d(name)``; keeps the support, scales by the exponent."""
        if name not in self.gens:
            return Poly._raw({}, self.gens)
        i = self.gens.index(name)
        return Poly._raw({e: c * e[i] for e, c in self.terms.items() if e[i]}, self.gens)

    def evaluate(self, values: Mapping[str, object]) -> "Poly":
        """Substitute rationals or polynomials for some generators."""
        if not values:
            return self
        num = {}
        polys = {}
        for g, v in values.items():
            if g not in self.gens:
                continue
            if isinstance(v, Poly):
                if v.is_constant():
                    num[g] = v.constant_value()
                else:
                    polys[g] = v
            else:
                num[g] = qnorm(v)
        if not num and not polys:
            return self
        keep = tuple(g for g in self.gens if g not in num and g not in polys)
        kidx = [self.gens.index(g) for g in keep]
        nidx = [(self.gens.index(g), v) for g, v in num.items()]
        pidx = [(self.gens.index(g), v) for g, v in polys.items()]
        out: Dict[Exps, Coeff] = {}
        poly_terms = []
        for e, c in self.terms.items():
            v = c
            for i, x in nidx:
                k = e[i]
                if k:
                    if k > 0:
                        v = v * x**k
                    else:
                        v = qnorm(Fraction(v) / Fraction(x) ** (-k))
            if not v:
                continue
            ke = tuple(e[i] for i in kidx)
            if pidx:
                poly_terms.append((ke, v, [(p, e[i]) for i, p in pidx]))
            else:
                out[ke] = out.get(ke, 0) + v
        result = Poly._raw({e: c for e, c in out.items() if c}, keep)
        if pidx:
            cache = {}
            for ke, v, subs in poly_terms:
                t = Poly._raw({ke: v}, keep)
                for p, k in subs:
                    if k:
                        key = (id(p), k)
                        if key not in cache:
                            cache[key] = p**k
                        t = t * cache[key]
                result = result + t
        return result

    def __call__(self, **values) -> "Poly":
        return self.evaluate(values)

    def eval_number(self, values: Mapping[str, object]) -> Coeff:
        """Evaluate completely; every used generator must be assigned."""
        p = self.evaluate(values)
        if not p.is_constant():
            raise ValueError(f"unassigned generators: {p.used_gens()}")
        return p.constant_value()

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        gens = tuple(mapping.get(g, g) for g in self.gens)
        if len(set(gens)) != len(gens):
            raise ValueError("renaming merges generators")
        return Poly._raw(dict(self.terms), gens)

    # -- structure ----------------------------------------------------------

    def coefficients_in(self, names: Sequence[str]) -> Dict[Exps, "Poly"]:
        """Split into ``{exponents in names: coefficient polynomial}``.

        Coefficient polynomials keep the full generator tuple, with zero
        exponents in ``names``.
        """
        idx = [self.gens.index(n) if n in self.gens else None for n in names]
        out: Dict[Exps, Dict[Exps, Coeff]] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] if i is not None else 0 for i in idx)
            ce = list(e)
            for i in idx:
                if i is not None:
                    ce[i] = 0
            out.setdefault(key, {})[tuple(ce)] = c
        return {k: Poly._raw(v, self.gens) for k, v in out.items()}

    def univariate(self, name: str) -> Dict[int, "Poly"]:
        if name not in self.gens:
            return {0: self} if self.terms else {}
        i = self.gens.index(name)
        out: Dict[int, Dict[Exps, Coeff]] = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Poly._raw(v, self.gens) for k, v in out.items()}

    def min_exponents(self) -> Exps:
        if not self.terms:
            return (0,) * len(self.gens)
        return tuple(min(col) for col in zip(*self.terms))

    def support(self, names: Sequence[str] | None = None):
        """Exponent vectors (restricted to ``names`` if given)."""
        if names is None:
            return sorted(self.terms, key=grlex_key, reverse=True)
        return sorted(self.coefficients_in(names), reverse=True)

    def content(self) -> Fraction:
        """Rational content: gcd of numerators over lcm of denominators (positive)."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            c = Fraction(c)
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        """Integer polynomial with content 1 and positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return self / c

    def monic(self) -> "Poly":
        return self / self.leading_coefficient()


def normalize(p: Poly) -> Poly:
    """Canonical form: unused generators dropped, terms in graded-lex order."""
    q = p.compact()
    return Poly._raw(dict(q.sorted_terms()), q.gens)


def _lift_nonnegative(a: Poly, b: Poly):
    """Shift both to ordinary polynomials; return shifts applied."""
    sa = tuple(min(0, x) for x in a.min_exponents())
    sb = tuple(min(0, x) for x in b.min_exponents())
    if any(sa):
        a = a.scale_monomial(tuple(-x for x in sa))
    if any(sb):
        b = b.scale_monomial(tuple(-x for x in sb))
    return a, b, sa, sb


def exact_divide(a: Poly, b: Poly) -> Poly:
    """Return ``q`` with ``a == q * b``; raise :class:`NotDivisible` otherwise.

    Works for Laurent polynomials by shifting both operands into the
    polynomial ring first.
    """
    b = b if isinstance(b, Poly) else Poly.const(b)
    a = a if isinstance(a, Poly) else Poly.const(a)
    if not b.terms:
        raise ZeroDivisionError("exact_divide by zero polynomial")
    gens, at, bt = a._align(b)
    a, b = Poly._raw(at, gens), Poly._raw(bt, gens)
    if not at:
        return a
    if len(bt) == 1:
        (eb, cb), = bt.items()
        return Poly._raw({tuple(map(sub, e, eb)): qnorm(Fraction(c) / cb) for e, c in at.items()}, gens)
    if b.is_constant():
        return a / b.constant_value()
    a, b, sa, sb = _lift_nonnegative(a, b)
    shift = tuple(x - y for x, y in zip(sa, sb))
    lb, lc = b.leading_term()
    lc = Fraction(lc)
    rem = dict(a.terms)
    heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
    heapq.heapify(heap)
    quot: Dict[Exps, Coeff] = {}
    bitems = [(e, c) for e, c in b.terms.items() if e != lb]
    while rem:
        while True:
            _, ne = heapq.heappop(heap)
            e = tuple(-x for x in ne)
            if e in rem:
                break
        c = rem[e]
        qe = tuple(map(sub, e, lb))
        if min(qe) < 0:
            raise NotDivisible("leading monomial not divisible")
        qc = qnorm(Fraction(c) / lc)
        quot[qe] = qc
        del rem[e]
        for eb, cb in bitems:
            t = tuple(map(add, qe, eb))
            v = rem.get(t, 0) - qc * cb
            if v:
                if t not in rem:
                    heapq.heappush(heap, (-sum(t), tuple(-x for x in t)))
                rem[t] = v
            else:
                rem.pop(t, None)
        # stop early if remainder has fallen below the divisor's degree
    q = Poly._raw(quot, gens)
    if any(shift):
        q = q.scale_monomial(shift)
    return q


def polynomial_divide(a: Poly, b: Poly) -> Poly:
    """Like :func:`exact_divide` but the quotient must have no negative exponents."""
    q = exact_divide(a, b)
    if q.terms and min(q.min_exponents(), default=0) < 0:
        raise NotDivisible("quotient is only a Laurent polynomial")
    return q


def divides(b: Poly, a: Poly) -> bool:
    try:
        polynomial_divide(a, b)
    except NotDivisible:
        return False
    return True


def _int_content(p: Poly) -> Fraction:
    return p.content()


def _frac_gcd(x: Fraction, y: Fraction) -> Fraction:
    x, y = Fraction(x), Fraction(y)
    num = math.gcd(x.numerator, y.numerator)
    den = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
    return Fraction(num, den)


def _prem(A: Dict[int, Poly], B: Dict[int, Poly], gens) -> Dict[int, Poly]:
    """Pseudo-remainder of univariate representations (degree -> coeff)."""
    db = max(B)
    lb = B[db]
    R = dict(A)
    while R and max(R) >= db:
        dr = max(R)
        lr = R[dr]
        shift = dr - db
        newR = {}
        for d, c in R.items():
            if d == dr:
                continue
            newR[d] = c * lb
        for d, c in B.items():
            if d == db:
                continue
            k = d + shift
            v = newR.get(k, Poly.zero(gens)) - lr * c
            newR[k] = v
        R = {d: c for d, c in newR.items() if c}
    return R


def _uni_content(U: Dict[int, Poly]) -> Poly:
    return reduce(multipoly_gcd, U.values())


def _pick_variable(a: Poly, b: Poly) -> str | None:
    ua, ub = set(a.used_gens()), set(b.used_gens())
    common = ua & ub
    if not common:
        return None
    counts = {}
    for p in (a, b):
        for e in p.terms:
            for g, k in zip(p.gens, e):
                if k and g in common:
                    counts[g] = counts.get(g, 0) + 1
    # fewest-degree variable keeps pseudo-remainders small
    return min(common, key=lambda g: (max(a.degree(g), b.degree(g)), -counts.get(g, 0), g))


_PRIME = (1 << 61) - 1


def _mod_images(p: Poly, i: int, point) -> Dict[int, int]:
    """p mod a prime with every generator but the i-th substituted."""
    out: Dict[int, int] = {}
    for e, c in p.terms.items():
        v = c.numerator * pow(c.denominator, -1, _PRIME) if isinstance(c, Fraction) else c
        for j, k in enumerate(e):
            if j != i and k:
                v = v * pow(point[j], k, _PRIME)
        out[e[i]] = (out.get(e[i], 0) + v) % _PRIME
    return {d: c for d, c in out.items() if c}


def _uni_gcd_degree_mod(A: Dict[int, int], B: Dict[int, int]) -> int:
    P = _PRIME
    a = [0] * (max(A) + 1)
    b = [0] * (max(B) + 1)
    for d, c in A.items():
        a[d] = c
    for d, c in B.items():
        b[d] = c
    lo_a = min(A)
    lo_b = min(B)
    a, b = a[lo_a:], b[lo_b:]
    while b:
        inv = pow(b[-1], -1, P)
        while len(a) >= len(b):
            q = a[-1] * inv % P
            shift = len(a) - len(b)
            for j in range(len(b)):
                a[shift + j] = (a[shift + j] - q * b[j]) % P
            while a and a[-1] == 0:
                a.pop()
            if not a:
                break
        a, b = b, a
    return len(a) - 1 + min(lo_a, lo_b)


def _image_gcd_degrees(a: Poly, b: Poly, seed: int = 1) -> Dict[str, int] | None:
    """Upper bounds (exact with high probability) for deg_v gcd(a, b).

    Evaluates all other generators at random residues modulo a 61-bit prime
    and runs the univariate Euclidean algorithm.  ``None`` when an image
    loses its leading coefficient (caller falls back to the exact method).
    """
    import random

    rng = random.Random(seed)
    n = len(a.gens)
    out = {}
    for i, g in enumerate(a.gens):
        da, db = a.degree(g), b.degree(g)
        if da == 0 or db == 0:
            out[g] = 0
            continue
        point = [rng.randrange(2, _PRIME - 1) for _ in range(n)]
        A = _mod_images(a, i, point)
        B = _mod_images(b, i, point)
        if not A or not B or max(A) != da or max(B) != db:
            return None
        out[g] = _uni_gcd_degree_mod(A, B)
    return out


def multipoly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor over the integers.

    Integer content is included (``gcd(6x, 4x^2) = 2x``); the result has a
    positive leading coefficient.  Monomial factors of Laurent inputs are
    handled by extracting the monomial content first.
    """
    a = a if isinstance(a, Poly) else Poly.const(a)
    b = b if isinstance(b, Poly) else Poly.const(b)
    gens, at, bt = a._align(b)
    a, b = Poly._raw(at, gens), Poly._raw(bt, gens)
    if not at and not bt:
        raise ValueError("gcd(0, 0) is undefined")
    if not bt:
        return _positive(a)
    if not at:
        return _positive(b)
    # monomial content
    ma, mb = a.min_exponents(), b.min_exponents()
    mono = tuple(min(x, y) for x, y in zip(ma, mb))
    if any(ma):
        a = a.scale_monomial(tuple(-x for x in ma))
    if any(mb):
        b = b.scale_monomial(tuple(-x for x in mb))
    g = _gcd_nomono(a, b)
    if any(mono):
        g = g.scale_monomial(mono)
    return g


def _positive(p: Poly) -> Poly:
    return -p if p.leading_coefficient() < 0 else p


def _gcd_nomono(a: Poly, b: Poly) -> Poly:
    gens = a.gens
    if a.is_constant() or b.is_constant():
        cont = _frac_gcd(a.content(), b.content())
        return Poly.const(cont, gens)
    if a == b:
        return _positive(a)
    degs = _image_gcd_degrees(a, b)
    if degs is not None:
        cont = Poly.const(_frac_gcd(a.content(), b.content()), gens)
        if not any(degs.values()):
            return cont
        # when the images say gcd has the full degree of one input, try it
        for p, q in ((a, b), (b, a)):
            if all(degs[g] == p.degree(g) for g in gens) and divides(p.primitive(), q):
                return _positive(p.primitive() * cont)
    v = _pick_variable(a, b)
    if v is None:
        # no shared variable: only the contents can be common
        ca = _content_wrt(a, set(a.used_gens()))
        cb = _content_wrt(b, set(b.used_gens()))
        return Poly.const(_frac_gcd(ca, cb), gens)
    A = a.univariate(v)
    B = b.univariate(v)
    ca = _uni_content(A)
    cb = _uni_content(B)
    cont = multipoly_gcd(ca, cb)
    A = {d: exact_divide(c, ca) for d, c in A.items()}
    B = {d: exact_divide(c, cb) for d, c in B.items()}
    if max(A) < max(B):
        A, B = B, A
    while True:
        R = _prem(A, B, gens)
        if not R:
            break
        if max(R) == 0:
            B = {0: Poly.const(1, gens)}
            break
        cr = _uni_content(R)
        A, B = B, {d: exact_divide(c, cr) for d, c in R.items()}
    i = gens.index(v)
    g = Poly.zero(gens)
    for d, c in B.items():
        e = [0] * len(gens)
        e[i] = d
        g = g + c.scale_monomial(tuple(e))
    g = g.primitive()
    return _positive(g * cont)


def _content_wrt(p: Poly, _names) -> Fraction:
    return p.content()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    g = multipoly_gcd(a, b)
    return _positive(exact_divide(a * b, g))


def random_point(names: Iterable[str], rng, lo: int = -50, hi: int = 50, nonzero: bool = True) -> Dict[str, Fraction]:
    out = {}
    for n in names:
        while True:
            v = rng.randint(lo, hi)
            if v or not nonzero:
                break
        out[n] = v
    return out
