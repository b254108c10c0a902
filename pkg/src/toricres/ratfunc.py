"""Rational functions over Q as reduced numerator/denominator pairs."""
from __future__ import annotations

from fractions import Fraction

from .poly import Poly, exact_divide, multipoly_gcd, qnorm


class RationalFunction:
    __slots__ = ("num", "den", "reduced")

    def __init__(self, num, den=1, reduce: bool = True):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = den if isinstance(den, Poly) else Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den
        self.reduced = False
        if reduce:
            self._reduce()
        else:
            self._normalize_den()

    def _normalize_den(self):
        # denominator: integer content 1 and positive leading coefficient
        d = self.den
        c = d.content()
        if d.leading_coefficient() < 0:
            c = -c
        if c != 1:
            self.num = self.num / c
            self.den = d / c

    def _reduce(self):
        if self.num.is_zero():
            self.num = Poly.zero(self.num.gens)
            self.den = Poly.const(1, self.den.gens)
        elif not self.den.is_constant():
            g = multipoly_gcd(self.num, self.den)
            if not g.is_constant():
                self.num = exact_divide(self.num, g)
                self.den = exact_divide(self.den, g)
        self._normalize_den()
        self.reduced = True

    @classmethod
    def from_parts(cls, num: Poly, den: Poly) -> "RationalFunction":
        """Trust that num/den is already reduced; only normalise the denominator."""
        r = cls(num, den, reduce=False)
        r.reduced = True
        return r

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        if not self.den.is_constant():
            raise ValueError("not a polynomial")
        return self.num / self.den.constant_value()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            if isinstance(other, Poly) or isinstance(other, (int, Fraction)):
                other = RationalFunction(other)
            else:
                return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        r = self if self.reduced else RationalFunction(self.num, self.den)
        return hash((r.num, r.den))

    def __add__(self, other) -> "RationalFunction":
        o = _rf(other)
        if self.den.is_constant() and o.den.is_constant():
            return RationalFunction.from_parts(self.num * o.den + o.num * self.den, self.den * o.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_rf(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _rf(other) - self

    def __neg__(self) -> "RationalFunction":
        return RationalFunction.from_parts(-self.num, self.den)

    def _is_scalar(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __mul__(self, other) -> "RationalFunction":
        o = _rf(other)
        if o._is_scalar() and self.reduced:
            return RationalFunction.from_parts(self.num * o.num, self.den * o.den)
        if self._is_scalar() and o.reduced:
            return RationalFunction.from_parts(self.num * o.num, self.den * o.den)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        o = _rf(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return _rf(other) / self

    def __pow__(self, k: int) -> "RationalFunction":
        if k >= 0:
            return RationalFunction.from_parts(self.num**k, self.den**k)
        return RationalFunction(self.den ** (-k), self.num ** (-k))

    def evaluate(self, values) -> "RationalFunction":
        return RationalFunction(self.num.evaluate(values), self.den.evaluate(values))

    def eval_number(self, values):
        d = self.den.eval_number(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return qnorm(Fraction(self.num.eval_number(values)) / Fraction(d))

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def __str__(self) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def _rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction.from_parts(x if isinstance(x, Poly) else Poly.const(x), Poly.const(1))
