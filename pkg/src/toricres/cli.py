"""Input language, command dispatch and text/JSON reports.

An input file is a sequence of ``;``-terminated statements::

    vars t1, t2;
    params a0..a5, b0..b5, c = 3/2;
    f1 = a0*t1^2 + a1*t1*t2 + a2*t2^2 + a3*t1 + a4*t2 + a5;
    polytope = (0,0), (2,0), (0,2);
    query global-residue t1^3*t2^2 of (f1, f2);

``python3 -m toricres FILE`` runs the query and prints a report.
"""
from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cox import CoxRing, NonExactDivision, affine_jacobian, bracket_expansion, split_torus, toric_affine_jacobian
from .lattice import (
    EmptyInput,
    InfiniteIndex,
    LatticePolytope,
    Unsupported,
    convex_hull,
    dot,
    from_inequalities,
    minkowski_sum,
    mixed_volume,
    normalized_volume,
    scaled_lattice_points,
    volume,
)
from .linalg import SingularMatrix, bareiss_det
from .poly import Poly, qnorm
from .ratfunc import RationalFunction
from .residue import (
    DegreeMismatch,
    DenominatorNotCertified,
    FacetResultantVanishes,
    GenericityFailure,
    MismatchBetweenDraws,
    ResidueValue,
    ResultantVanishes,
    global_residue_mixed,
    global_residue_unmixed,
    toric_residue,
    univariate_residue_oracle,
)
from .resultant import (
    AllMinorsZero,
    EmptyCriticalDegree,
    FacetResultantSet,
    NegativeExponent,
    NonIntegerDegree,
    UnsupportedFaceConfiguration,
    ZeroPolynomial,
    build_phi,
    facet_resultants,
    resultant_degree,
    resultant_via_det,
    resultant_via_minor_gcd,
)
from .textio import (
    DuplicateDefinition,
    ExprParser,
    InputError,
    PolySyntaxError,
    Token,
    UndeclaredSymbol,
    format_monomial,
    format_polynomial,
    tokenize,
)

SCHEMA = "toricres-report/1"

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_DEGENERATE = 2
EXIT_UNSUPPORTED = 3

COMMANDS = (
    "resultant",
    "facet-resultants",
    "toric-residue",
    "global-residue",
    "polytope-info",
    "jacobian",
    "phi-matrix",
)
ALIASES = {"residue": "global-residue"}


# -- input model ---------------------------------------------------------------------


@dataclass
class Definition:
    name: str
    poly: Poly
    support_order: tuple  # torus exponents in order of first appearance
    line: int


@dataclass
class Query:
    command: str
    head: Optional[Poly]  # H for toric-residue, t^m for global-residue
    head_is_jacobian: bool
    operands: List[Definition]
    options: Dict[str, object]
    text: str
    line: int


@dataclass
class SystemSpec:
    tvars: Tuple[str, ...]
    params: Tuple[str, ...]
    values: Dict[str, object]
    symbols: Tuple[str, ...]  # declaration order, used for printing
    definitions: Dict[str, Definition]
    polytopes: Dict[Optional[str], LatticePolytope]
    query: Optional[Query]

    @property
    def free_params(self) -> Tuple[str, ...]:
        return tuple(p for p in self.params if p not in self.values)


class _StatementParser(ExprParser):
    def __init__(self, toks: List[Token], source: str):
        super().__init__(toks, self._resolve)
        self.source = source
        self.tvars: List[str] = []
        self.params: List[str] = []
        self.values: Dict[str, object] = {}
        self.symbols: List[str] = []
        self.defs: Dict[str, Definition] = {}
        self.polytopes: Dict[Optional[str], LatticePolytope] = {}
        self.query: Optional[Query] = None

    # -- symbols --

    def _declared(self, name: str) -> bool:
        return name in self.tvars or name in self.params or name in self.defs

    def _declare(self, name: str, tok: Token, kind: str):
        if self._declared(name):
            raise DuplicateDefinition(f"{name!r} is already defined", tok.line, tok.col)
        if kind == "var":
            self.tvars.append(name)
        else:
            self.params.append(name)
        self.symbols.append(name)

    def _resolve(self, name: str, tok: Token) -> Poly:
        if name in self.values:
            return Poly.const(self.values[name])
        if name in self.tvars or name in self.params:
            return Poly.var(name)
        if name in self.defs:
            return self.defs[name].poly
        raise UndeclaredSymbol(f"undeclared symbol {name!r}", tok.line, tok.col)

    def ident(self) -> Token:
        t = self.tok
        if t.kind != "ident":
            self.error("expected a name")
        return self.next()

    def integer(self) -> int:
        return self.signed_int()

    def rational(self):
        sign = -1 if self.accept("-") else 1
        t = self.tok
        if t.kind != "number":
            self.error("expected a number")
        self.next()
        v = Fraction(int(t.text))
        if self.accept("/"):
            d = self.tok
            if d.kind != "number" or int(d.text) == 0:
                self.error("expected a nonzero denominator")
            self.next()
            v /= int(d.text)
        return qnorm(sign * v)

    def int_tuple(self) -> Tuple[int, ...]:
        self.expect("(")
        vals = [self.integer()]
        while self.accept(","):
            vals.append(self.integer())
        self.expect(")")
        return tuple(vals)

    def end_statement(self):
        if not self.accept(";"):
            self.error("expected ';'")

    # -- statements --

    def parse(self):
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind != "ident":
                self.error("expected a statement")
            if t.text == "vars" and not self._is_assignment():
                self.next()
                self._names("var")
            elif t.text == "params" and not self._is_assignment():
                self.next()
                self._params()
            elif t.text == "polytope":
                self.next()
                self._polytope()
            elif t.text == "query" and not self._is_assignment():
                self.next()
                self._query(t)
            else:
                self._definition()
        return SystemSpec(
            tuple(self.tvars),
            tuple(self.params),
            dict(self.values),
            tuple(self.symbols),
            dict(self.defs),
            dict(self.polytopes),
            self.query,
        )

    def _is_assignment(self) -> bool:
        nt = self.toks[self.i + 1]
        return nt.kind == "op" and nt.text == "="

    def _names(self, kind: str):
        while True:
            t = self.ident()
            self._declare(t.text, t, kind)
            if not self.accept(","):
                break
        self.end_statement()

    def _params(self):
        while True:
            t = self.ident()
            if self.tok.kind == "range":
                self.next()
                u = self.ident()
                for name in _expand_range(t, u):
                    self._declare(name, t, "param")
            else:
                self._declare(t.text, t, "param")
                if self.accept("="):
                    self.values[t.text] = self.rational()
            if not self.accept(","):
                break
        self.end_statement()

    def _polytope(self):
        name = None
        if self.tok.kind == "ident":
            t = self.next()
            if t.text not in self.defs:
                raise UndeclaredSymbol(f"polytope for undefined polynomial {t.text!r}", t.line, t.col)
            name = t.text
        start = self.expect("=")
        if name in self.polytopes:
            raise DuplicateDefinition("polytope declared twice", start.line, start.col)
        if self.tok.kind == "ident" and self.tok.text == "facets":
            self.next()
            self._facets(name, start)
            return
        bracket = self.accept("[")
        pts = [self.int_tuple()]
        while self.accept(","):
            pts.append(self.int_tuple())
        if bracket:
            self.expect("]")
        self.end_statement()
        n = len(self.tvars)
        if any(len(p) != n for p in pts):
            raise PolySyntaxError(f"polytope points must have {n} coordinates", start.line, start.col)
        try:
            P = convex_hull(pts)
        except (EmptyInput, Unsupported) as exc:
            raise PolySyntaxError(str(exc), start.line, start.col) from exc
        self._store_polytope(name, P, start)

    def _facets(self, name, start: Token):
        normals, offsets = [], []
        while True:
            normals.append(self.int_tuple())
            offsets.append(self.integer())
            if not self.accept(","):
                break
        self.end_statement()
        n = len(self.tvars)
        if any(len(e) != n for e in normals):
            raise PolySyntaxError(f"facet normals must have {n} coordinates", start.line, start.col)
        try:
            P = from_inequalities(normals, offsets)
        except (EmptyInput, Unsupported, ValueError) as exc:
            raise PolySyntaxError(str(exc), start.line, start.col) from exc
        self._store_polytope(name, P, start)

    def _store_polytope(self, name, P: LatticePolytope, start: Token):
        self.polytopes[name] = P
        if name is not None:
            for m in split_torus(self.defs[name].poly, self.tvars):
                if not P.contains(m):
                    raise PolySyntaxError(f"support point {m} of {name} lies outside its declared polytope",
                                          start.line, start.col)

    def _expression(self) -> Tuple[Poly, tuple]:
        start = self.tok
        summands: List[Poly] = []
        p = self.expr(summands)
        order = []
        for s in summands:
            for m in sorted(split_torus(s, self.tvars)):
                if m not in order:
                    order.append(m)
        # keep only points that survive cancellation
        live = set(split_torus(p, self.tvars))
        order = tuple(m for m in order if m in live)
        for g in p.used_gens():
            if g not in self.tvars and min(e[p.gens.index(g)] for e in p.terms) < 0:
                raise PolySyntaxError(f"negative exponent on parameter {g!r}", start.line, start.col)
        return p, order

    def _definition(self):
        t = self.ident()
        self.expect("=")
        if self._declared(t.text):
            raise DuplicateDefinition(f"{t.text!r} is already defined", t.line, t.col)
        p, order = self._expression()
        self.end_statement()
        self.defs[t.text] = Definition(t.text, p, order, t.line)
        self.symbols.append(t.text)

    def _command(self) -> str:
        t = self.ident()
        parts = [t.text]
        while self.tok.kind == "op" and self.tok.text == "-" and self.toks[self.i + 1].kind == "ident":
            self.next()
            parts.append(self.next().text)
        name = "-".join(parts)
        name = ALIASES.get(name, name)
        if name not in COMMANDS:
            raise PolySyntaxError(f"unknown command {name!r}", t.line, t.col)
        return name

    def _query(self, qtok: Token):
        if self.query is not None:
            raise DuplicateDefinition("only one query per input", qtok.line, qtok.col)
        cmd = self._command()
        head = None
        head_j = False
        options: Dict[str, object] = {}
        operands: List[Definition] = []
        while not (self.tok.kind == "op" and self.tok.text == ";") and self.tok.kind != "eof":
            t = self.tok
            if t.kind == "ident" and t.text == "of":
                self.next()
                operands = self._operands()
            elif t.kind == "ident" and self._is_assignment():
                key = self.next().text
                self.expect("=")
                if self.tok.kind == "op" and self.tok.text == "(":
                    options[key] = self.int_tuple()
                elif self.tok.kind == "ident":
                    options[key] = self.next().text
                else:
                    options[key] = self.integer()
            elif t.kind == "ident" and t.text == "t" and self.toks[self.i + 1].text == "^":
                self.next()
                self.next()
                options["m"] = self.int_tuple()
            elif t.kind == "ident" and t.text == "J" and "J" not in self.tvars + self.params and head is None:
                self.next()
                head_j = True
                head = Poly.const(0)
            elif head is None:
                head, _ = self._expression()
            else:
                self.error("unexpected token in query")
        self.end_statement()
        line = self.source.splitlines()[qtok.line - 1].strip() if self.source else ""
        self.query = Query(cmd, head, head_j, operands, options, line, qtok.line)

    def _operands(self) -> List[Definition]:
        self.expect("(")
        out = []
        while True:
            t = self.tok
            if t.kind == "ident" and t.text in self.defs and self.toks[self.i + 1].text in (",", ")"):
                self.next()
                out.append(self.defs[t.text])
            else:
                p, order = self._expression()
                out.append(Definition(f"_{len(out)}", p, order, t.line))
            if not self.accept(","):
                break
        self.expect(")")
        return out


def _expand_range(a: Token, b: Token) -> List[str]:
    def split(s):
        i = len(s)
        while i and s[i - 1].isdigit():
            i -= 1
        return s[:i], s[i:]

    pa, na = split(a.text)
    pb, nb = split(b.text)
    if not na or not nb or pa != pb or int(nb) < int(na):
        raise PolySyntaxError(f"bad range {a.text}..{b.text}", a.line, a.col)
    return [f"{pa}{i}" for i in range(int(na), int(nb) + 1)]


def parse_input(text: str) -> SystemSpec:
    """Parse an input file; raises PolySyntaxError, UndeclaredSymbol or DuplicateDefinition."""
    return _StatementParser(tokenize(text), text).parse()


# -- JSON helpers ---------------------------------------------------------------------


def _num_text(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class _Printer:
    """Canonical printing with one fixed generator order."""

    def __init__(self, order: Sequence[str]):
        self.order = tuple(order)

    def gens_for(self, p: Poly) -> Tuple[str, ...]:
        used = p.used_gens()
        extra = sorted(g for g in used if g not in self.order)
        return tuple(g for g in self.order if g in used) + tuple(extra)

    def text(self, p: Poly) -> str:
        if not p.terms:
            return "0"
        return format_polynomial(p.with_gens(self.gens_for(p)))

    def poly(self, p: Poly) -> dict:
        gens = self.gens_for(p)
        q = p.with_gens(gens)
        terms = []
        for e, c in q.sorted_terms():
            terms.append({"coefficient": _num_text(c), "monomial": {g: k for g, k in zip(gens, e) if k}})
        return {"text": format_polynomial(q) if q.terms else "0", "terms": terms}

    def value(self, v) -> dict:
        if isinstance(v, RationalFunction):
            if v.den.is_constant():
                v = RationalFunction.from_parts(v.num / v.den.constant_value(), Poly.const(1))
            num, den = v.num, v.den
            kind = "number" if num.is_constant() and den.is_constant() else "rational-function"
        else:
            num, den = Poly.const(Fraction(v).numerator), Poly.const(Fraction(v).denominator)
            kind = "number"
        if den.is_constant() and den.constant_value() == 1:
            text = self.text(num)
        elif kind == "number":
            text = _num_text(Fraction(num.constant_value()) / den.constant_value())
        else:
            text = f"({self.text(num)}) / ({self.text(den)})"
        return {"kind": kind, "text": text, "numerator": self.poly(num), "denominator": self.poly(den)}


def polytope_json(P: LatticePolytope) -> dict:
    return {
        "dimension": P.dim,
        "vertices": [list(v) for v in P.vertices],
        "facets": [{"normal": list(e), "offset": b} for e, b in zip(P.normals, P.offsets)],
        "volume": _num_text(volume(P)),
        "normalized_volume": normalized_volume(P) if P.full_dimensional else 0,
        "lattice_points": len(scaled_lattice_points(P, 1)),
        "interior_points": len(scaled_lattice_points(P, 1, strict=True)) if P.full_dimensional else 0,
    }


def _facets_json(fs: FacetResultantSet, pr: _Printer) -> List[dict]:
    out = []
    for i, fr in enumerate(fs.entries):
        out.append({
            "index": i + 1,
            "normal": list(fr.normal),
            "offset": fs.polytope.offsets[i],
            "resultant": pr.poly(fr.polynomial),
            "base": pr.poly(fr.base) if fr.base is not None else None,
            "ell": fr.ell,
            "faces": [[list(m) for m in F] for F in fr.faces],
        })
    return out


# -- command implementations ----------------------------------------------------------


class CommandError(Exception):
    pass


@dataclass
class Report:
    command: dict
    results: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    status: str = "ok"
    exit_code: int = EXIT_OK
    error: Optional[dict] = None
    variables: dict = field(default_factory=dict)
    timing: Optional[float] = None

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA,
            "status": self.status,
            "exit_code": self.exit_code,
            "command": self.command,
            "variables": self.variables,
            "results": self.results,
            "certificates": self.certificates,
        }
        if self.error is not None:
            out["error"] = self.error
        if self.timing is not None:
            out["timing"] = {"seconds": round(self.timing, 6)}
        return out


@dataclass
class Options:
    seed: int = 0
    mode: str = "symbolic"
    max_minors: int = 40
    verify: bool = False
    timing: bool = False


class _Context:
    def __init__(self, spec: SystemSpec, opts: Options):
        self.spec = spec
        self.opts = opts
        self.tvars = spec.tvars
        self.n = len(spec.tvars)
        self.specialization: Dict[str, object] = {}
        if opts.mode == "numeric" and spec.free_params:
            rng = random.Random(opts.seed)
            for p in spec.free_params:
                self.specialization[p] = rng.randint(1, 97) * rng.choice((1, -1))
        self.pr = _Printer(tuple(spec.symbols))
        self.checks: List[dict] = []

    def poly(self, d: Definition) -> Poly:
        p = d.poly
        if self.specialization:
            p = p.evaluate({k: v for k, v in self.specialization.items() if k in p.gens})
        return p

    def polys(self, count: Sequence[int] | int | None = None) -> List[Poly]:
        q = self.spec.query
        ops = q.operands
        if not ops:
            raise CommandError(f"{q.command} needs polynomials: add 'of (f1, ...)'")
        if count is not None:
            counts = (count,) if isinstance(count, int) else tuple(count)
            if len(ops) not in counts:
                want = " or ".join(str(c) for c in counts)
                raise CommandError(f"{q.command} needs {want} polynomials, got {len(ops)}")
        return [self.poly(d) for d in ops]

    def check(self, name: str, passed: bool, detail: str = ""):
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})

    def random_point(self, names, rng) -> Dict[str, int]:
        return {nm: rng.randint(1, 97) * rng.choice((1, -1)) for nm in names}


def _supports(polys, tvars) -> List[tuple]:
    pts = set()
    for p in polys:
        pts |= set(split_torus(p, tvars))
    return sorted(pts)


def _ambient_polytope(ctx: _Context, polys, k) -> LatticePolytope:
    P = ctx.spec.polytopes.get(None)
    if P is not None:
        return P
    if any(x != 1 for x in k):
        raise CommandError("degrees k other than 1 need an explicit 'polytope = ...;' statement")
    return convex_hull(_supports(polys, ctx.tvars))


def _k_option(ctx: _Context, count: int) -> Tuple[int, ...]:
    k = ctx.spec.query.options.get("k", (1,) * count)
    if not isinstance(k, tuple) or len(k) != count or any(x < 1 for x in k):
        raise CommandError(f"k must be a tuple of {count} positive integers")
    return k


def _homogenized_system(ctx: _Context, polys, k):
    P = _ambient_polytope(ctx, polys, k)
    ring = CoxRing(P)
    F = [ring.homogenize(p, ctx.tvars, ki) for p, ki in zip(polys, k)]
    return P, ring, F


def cmd_polytope_info(ctx: _Context) -> Tuple[dict, dict]:
    q = ctx.spec.query
    res: dict = {"polytopes": []}
    if q.operands:
        deltas = []
        for d in q.operands:
            P = ctx.spec.polytopes.get(d.name) or convex_hull(list(split_torus(ctx.poly(d), ctx.tvars)))
            deltas.append(P)
            res["polytopes"].append({"name": d.name, **polytope_json(P)})
        S, offs = minkowski_sum(deltas)
        res["minkowski_sum"] = {**polytope_json(S), "summand_offsets": [list(o) for o in offs]}
        res["mixed_volume"] = mixed_volume(deltas) if len(deltas) == ctx.n else None
    else:
        P = ctx.spec.polytopes.get(None)
        if P is None:
            raise CommandError("polytope-info needs 'of (...)' or a 'polytope = ...;' statement")
        res["polytopes"].append({"name": None, **polytope_json(P)})
        res["minkowski_sum"] = None
        res["mixed_volume"] = None
    if ctx.opts.verify:
        for entry, P in zip(res["polytopes"], deltas if q.operands else [ctx.spec.polytopes[None]]):
            if P.full_dimensional:
                mv = mixed_volume([P] * ctx.n)
                ctx.check(f"MV(P,...,P) = n! vol(P) for {entry['name']}", mv == normalized_volume(P))
    return res, {}


def cmd_resultant(ctx: _Context) -> Tuple[dict, dict]:
    polys = ctx.polys(ctx.n + 1)
    k = _k_option(ctx, ctx.n + 1)
    P, ring, F = _homogenized_system(ctx, polys, k)
    phi = build_phi(ring, k, F)
    M = phi.matrix
    method = ctx.spec.query.options.get("method", "det" if M.nrows == M.ncols else "minor-gcd")
    if method == "det":
        out = resultant_via_det(phi)
    elif method in ("minor-gcd", "minors"):
        out = resultant_via_minor_gcd(phi, max_minors=ctx.opts.max_minors, seed=ctx.opts.seed)
        method = "minor-gcd"
    else:
        raise CommandError(f"unknown method {method!r}")
    groups = []
    for i, Fi in enumerate(F):
        names = sorted({g for c in Fi.coefficients_in(ring.names).values() for g in c.used_gens()})
        deg = out.polynomial.degree_in(names) if names and not out.polynomial.is_zero() else 0
        groups.append({"polynomial": i, "degree": deg, "predicted": resultant_degree(P, k, i, out.ell) * out.ell})
    res = {
        "polynomial": ctx.pr.poly(out.polynomial),
        "vanishes": out.polynomial.is_zero(),
        "ell": out.ell,
        "method": method,
        "matrix_shape": [M.nrows, M.ncols],
        "k": list(k),
        "polytope": polytope_json(P),
        "degrees": groups,
    }
    cert = {
        "certified": out.certified,
        "total_degree": out.polynomial.total_degree() if out.polynomial.terms else None,
        "predicted_total_degree": out.predicted_degree,
        "minors_used": out.minors_used,
        "scalar": _num_text(out.scalar),
        "note": out.note,
    }
    if ctx.opts.verify and not out.polynomial.is_constant():
        for g in groups:
            ctx.check(f"degree in coefficients of polynomial {g['polynomial']}", g["degree"] == g["predicted"],
                      f"{g['degree']} vs {g['predicted']}")
    return res, cert


def cmd_facet_resultants(ctx: _Context) -> Tuple[dict, dict]:
    polys = ctx.polys(ctx.n)
    fs = facet_resultants(polys, ctx.tvars)
    res = {"polytope": polytope_json(fs.polytope), "facets": _facets_json(fs, ctx.pr),
           "summand_offsets": [list(o) for o in fs.offsets]}
    if ctx.opts.verify:
        rng = random.Random(ctx.opts.seed)
        for fr in fs.entries:
            if fr.base is not None:
                ctx.check(f"R^eta = base^ell for {list(fr.normal)}", fr.polynomial == fr.base ** fr.ell)
            if fr.faces and all(len(F) == 1 for F in fr.faces[:1]) and ctx.n == 2:
                pass
        names = sorted({g for p in polys for g in p.used_gens() if g not in ctx.tvars})
        if names:
            pt = ctx.random_point(names, rng)
            spec = facet_resultants([p.evaluate(pt) for p in polys], ctx.tvars, polytope=fs.polytope)
            ok = all(
                (a.polynomial.eval_number(pt) if a.polynomial.terms else 0)
                == (b.polynomial.constant_value() if b.polynomial.terms else 0)
                for a, b in zip(fs.entries, spec.entries)
            )
            ctx.check("specialization commutes with facet resultants", ok)
    return res, {}


def _residue_value_json(ctx: _Context, rv: ResidueValue) -> Tuple[dict, dict]:
    res = {"value": ctx.pr.value(rv.value)}
    fs = rv.facets
    if fs is not None:
        res["polytope"] = polytope_json(fs.polytope)
        res["facets"] = _facets_json(fs, ctx.pr)
        factors = []
        for i, (fr, e) in enumerate(zip(fs.entries, rv.denominator_exponents)):
            if e:
                base = fr.base if fr.base is not None else fr.polynomial
                factors.append({"facet": i + 1, "normal": list(fr.normal), "factor": ctx.pr.poly(base), "exponent": e})
        res["denominator"] = {"unit": _num_text(rv.unit), "factors": factors}
    else:
        res["polytope"] = None
        res["facets"] = []
        res["denominator"] = {"unit": "1", "factors": []}
    return res, dict(rv.certificates)


def _monomial_exponent(ctx: _Context) -> Tuple[int, ...]:
    q = ctx.spec.query
    if "m" in q.options:
        m = q.options["m"]
        if not isinstance(m, tuple) or len(m) != ctx.n:
            raise CommandError(f"m must have {ctx.n} coordinates")
        return m
    h = q.head
    if h is None or not h.is_monomial() or h.used_gens() and not set(h.used_gens()) <= set(ctx.tvars):
        raise CommandError("global-residue needs a torus monomial t^(m1,...,mn), a product of torus variables, or m=(...)")
    (m, c), = split_torus(h, ctx.tvars).items()
    if not c.is_constant() or c.constant_value() != 1:
        raise CommandError("the residue argument must be a monic monomial")
    return m


def cmd_global_residue(ctx: _Context) -> Tuple[dict, dict]:
    polys = ctx.polys(ctx.n)
    m = _monomial_exponent(ctx)
    hulls = [convex_hull(list(split_torus(p, ctx.tvars))) for p in polys]
    unmixed = all(h.vertices == hulls[0].vertices for h in hulls)
    if unmixed:
        rv = global_residue_unmixed(polys, ctx.tvars, m, seed=ctx.opts.seed)
    else:
        rv = global_residue_mixed(polys, ctx.tvars, m, seed=ctx.opts.seed)
    res, cert = _residue_value_json(ctx, rv)
    res["m"] = list(m)
    res["path"] = "unmixed" if unmixed else "mixed"
    if rv.facets is not None:
        offs = tuple(ctx.n * b for b in hulls[0].offsets) if unmixed else rv.facets.polytope.offsets
        cert["bound"] = [
            {"facet": i + 1, "exponent": max(0, 1 - dot(m, e) - o)}
            for i, (e, o) in enumerate(zip(rv.facets.polytope.normals, offs))
        ]
    if ctx.opts.verify:
        _verify_global(ctx, polys, m, rv, unmixed)
    return res, cert


def _verify_global(ctx: _Context, polys, m, rv: ResidueValue, unmixed: bool):
    rng = random.Random(ctx.opts.seed + 1)
    names = sorted({g for p in polys for g in p.used_gens() if g not in ctx.tvars})
    if ctx.n == 1:
        oracle = univariate_residue_oracle(polys[0], m[0], ctx.tvars[0])
        ctx.check("univariate trace oracle", oracle == (rv.value if isinstance(rv.value, RationalFunction)
                                                         else RationalFunction(Poly.const(rv.value))))
    if names and isinstance(rv.value, RationalFunction):
        for _ in range(5):
            pt = ctx.random_point(names, rng)
            if rv.value.den.eval_number(pt) == 0:
                continue
            sp = [p.evaluate(pt) for p in polys]
            try:
                if unmixed:
                    num = global_residue_unmixed(sp, ctx.tvars, m, seed=ctx.opts.seed + 7).value
                else:
                    num = global_residue_mixed(sp, ctx.tvars, m, seed=ctx.opts.seed + 7).value
            except (ResultantVanishes, FacetResultantVanishes, GenericityFailure):
                continue
            ctx.check("symbolic value matches an independent numeric run", num == rv.value.eval_number(pt),
                      f"at {pt}")
            break
    elif not names:
        alt = (global_residue_unmixed(polys, ctx.tvars, m, seed=ctx.opts.seed + 7) if unmixed
               else global_residue_mixed(polys, ctx.tvars, m, seed=ctx.opts.seed + 7))
        ctx.check("independent run with another seed agrees", alt.value == rv.value)


def cmd_toric_residue(ctx: _Context) -> Tuple[dict, dict]:
    q = ctx.spec.query
    polys = ctx.polys(ctx.n + 1)
    k = _k_option(ctx, ctx.n + 1)
    P, ring, F = _homogenized_system(ctx, polys, k)
    kappa = sum(k)
    scale = math.prod(k) * normalized_volume(P)
    if q.head is None:
        raise CommandError("toric-residue needs H (an affine polynomial or J) before 'of'")
    if q.head_is_jacobian:
        H = ring.toric_jacobian(F, k)
    else:
        h = q.head
        if ctx.specialization:
            h = h.evaluate({a: b for a, b in ctx.specialization.items() if a in h.gens})
        H = Poly.zero(ring.names)
        for mm, c in split_torus(h, ctx.tvars).items():
            if not P.contains(mm, kappa, strict=True):
                raise DegreeMismatch(f"H has the monomial t^{mm} outside the interior of {kappa}P")
            H = H + c * ring.monomial(ring.exponent(mm, kappa, interior=True))
    val = toric_residue(ring, k, F, H, seed=ctx.opts.seed)
    res = {
        "value": ctx.pr.value(val),
        "k": list(k),
        "kappa": kappa,
        "polytope": polytope_json(P),
        "H": ctx.pr.poly(H),
        "normalization": scale,
    }
    if ctx.opts.verify:
        J = ring.toric_jacobian(F, k)
        vj = toric_residue(ring, k, F, J, seed=ctx.opts.seed + 1)
        ctx.check("Res(J(F)) = prod(k) n! vol(P)", vj == scale, f"{vj} vs {scale}")
        alt = toric_residue(ring, k, F, H, seed=ctx.opts.seed + 1)
        ctx.check("second column-subset draw agrees", alt == val)
    return res, {"cox_variables": list(ring.names)}


def cmd_jacobian(ctx: _Context) -> Tuple[dict, dict]:
    polys = ctx.polys((ctx.n, ctx.n + 1))
    res: dict = {}
    if len(polys) == ctx.n:
        res["kind"] = "toric-affine"
        res["polynomial"] = ctx.pr.poly(toric_affine_jacobian(polys, ctx.tvars))
        return res, {}
    j = affine_jacobian(polys, ctx.tvars)
    res["kind"] = "affine"
    res["polynomial"] = ctx.pr.poly(j)
    k = (1,) * (ctx.n + 1)
    P, ring, F = _homogenized_system(ctx, polys, k)
    J = ring.toric_jacobian(F, k)
    res["toric"] = ctx.pr.poly(J)
    res["cox_variables"] = list(ring.names)
    res["polytope"] = polytope_json(P)
    if ctx.opts.verify:
        ctx.check("affine Jacobian equals bracket expansion", j == bracket_expansion(polys, ctx.tvars))
        lhs = J * ring.monomial((1,) * ring.s)
        rhs = ring.homogenize(j, ctx.tvars, ctx.n + 1) if j.terms else Poly.zero(ring.names)
        ctx.check("x1...xs J(F) is the (n+1)P-homogenization of j", lhs == rhs)
    return res, {}


def _bracket_text(S, idx) -> str:
    labels = [idx[m] for m in S]
    if all(x < 10 for x in labels):
        return "[" + "".join(str(x) for x in labels) + "]"
    return "[" + ",".join(str(x) for x in labels) + "]"


def _bracket_presentation(ctx: _Context, phi, polys) -> Optional[dict]:
    """J-column entries as signed sums of brackets of coefficient columns."""
    import itertools

    if any(x != 1 for x in phi.layout.k):
        return None
    order = list(ctx.spec.query.operands[0].support_order)
    for m in _supports(polys, ctx.tvars):
        if m not in order:
            order.append(m)
    idx = {m: i + 1 for i, m in enumerate(order)}
    by_point: Dict[tuple, List[str]] = {}
    for S in itertools.combinations(order, ctx.n + 1):
        Ss = sorted(S, key=lambda m: idx[m])
        mdet = bareiss_det([[1, *m] for m in Ss])
        if not mdet:
            continue
        total = tuple(sum(c) for c in zip(*Ss))
        by_point.setdefault(total, []).append((mdet, _bracket_text(Ss, idx)))
    rows = []
    for p in phi.layout.rows:
        parts = by_point.get(p, [])
        text = ""
        for i, (c, br) in enumerate(parts):
            a = abs(c)
            body = br if a == 1 else f"{a}*{br}"
            if i == 0:
                text = ("-" if c < 0 else "") + body
            else:
                text += (" - " if c < 0 else " + ") + body
        rows.append(text or "0")
    return {"points": [list(m) for m in order], "brackets": rows}


def cmd_phi_matrix(ctx: _Context) -> Tuple[dict, dict]:
    polys = ctx.polys(ctx.n + 1)
    k = _k_option(ctx, ctx.n + 1)
    P, ring, F = _homogenized_system(ctx, polys, k)
    phi = build_phi(ring, k, F)
    M = phi.matrix
    names = ring.names
    row_labels = [format_monomial(a, names) or "1" for a in M.row_labels]
    col_labels = []
    for lab in M.col_labels:
        if lab[0] == "J":
            col_labels.append({"block": "J", "multiplier": "1"})
        else:
            col_labels.append({"block": f"F{lab[1]}", "multiplier": format_monomial(lab[2], names) or "1"})
    entries = [[ctx.pr.text(x) for x in r] for r in M.entries]
    res = {
        "shape": [M.nrows, M.ncols],
        "k": list(k),
        "kappa": phi.layout.kappa,
        "cox_variables": list(names),
        "polytope": polytope_json(P),
        "row_labels": row_labels,
        "column_labels": col_labels,
        "entries": entries,
        "jacobian_column": [ctx.pr.poly(x) for x in M.column(phi.jacobian_column)],
        "presentation": _bracket_presentation(ctx, phi, polys),
    }
    if ctx.opts.verify:
        j = affine_jacobian(polys, ctx.tvars) if all(x == 1 for x in k) else None
        if j is not None:
            coeffs = split_torus(j, ctx.tvars)
            zero = Poly.zero()
            ok = all(
                coeffs.get(p, zero) == x.compact()
                for p, x in zip(phi.layout.rows, M.column(phi.jacobian_column))
            )
            ctx.check("Jacobian column matches the affine Jacobian", ok)
    return res, {}


HANDLERS = {
    "resultant": cmd_resultant,
    "facet-resultants": cmd_facet_resultants,
    "toric-residue": cmd_toric_residue,
    "global-residue": cmd_global_residue,
    "polytope-info": cmd_polytope_info,
    "jacobian": cmd_jacobian,
    "phi-matrix": cmd_phi_matrix,
}

DEGENERATE = (
    ResultantVanishes,
    FacetResultantVanishes,
    EmptyCriticalDegree,
    AllMinorsZero,
    SingularMatrix,
    GenericityFailure,
    ZeroPolynomial,
    InfiniteIndex,
    NegativeExponent,
)
UNSUPPORTED = (UnsupportedFaceConfiguration, Unsupported, NotImplementedError)
INTERNAL = (DenominatorNotCertified, MismatchBetweenDraws, NonExactDivision, NonIntegerDegree)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, DEGENERATE):
        return EXIT_DEGENERATE
    if isinstance(exc, UNSUPPORTED):
        return EXIT_UNSUPPORTED
    return EXIT_INTERNAL


def _error_json(exc: BaseException) -> dict:
    out = {"type": type(exc).__name__, "message": getattr(exc, "message", None) or str(exc)}
    if isinstance(exc, InputError) and exc.line is not None:
        out["line"], out["column"] = exc.line, exc.col
    if isinstance(exc, FacetResultantVanishes) and exc.facet is not None:
        out["facet"] = list(exc.facet)
    return out


def run(spec: SystemSpec, opts: Options | None = None) -> Report:
    """Execute the query of ``spec``; errors become a report with a nonzero exit code."""
    opts = opts or Options()
    q = spec.query
    if q is None:
        rep = Report(command={"name": None, "text": ""}, status="error", exit_code=EXIT_INTERNAL)
        rep.error = {"type": "NoQuery", "message": "the input contains no query statement"}
        return rep
    ctx = _Context(spec, opts)
    args = {key: list(v) if isinstance(v, tuple) else v for key, v in sorted(q.options.items())}
    if q.head_is_jacobian:
        args["H"] = "J"
    elif q.head is not None:
        args["argument"] = ctx.pr.text(q.head)
    args["operands"] = [d.name if not d.name.startswith("_") else ctx.pr.text(d.poly) for d in q.operands]
    rep = Report(command={"name": q.command, "text": q.text, "arguments": args})
    rep.variables = {
        "torus": list(spec.tvars),
        "parameters": list(spec.params),
        "values": {k: _num_text(v) for k, v in spec.values.items()},
        "specialization": {k: _num_text(v) for k, v in ctx.specialization.items()},
    }
    t0 = time.perf_counter()
    try:
        results, certs = HANDLERS[q.command](ctx)
    except CommandError as exc:
        rep.status, rep.exit_code, rep.error = "error", EXIT_INTERNAL, {"type": "UsageError", "message": str(exc)}
        return rep
    except (ArithmeticError, ValueError, NotImplementedError, InputError) as exc:
        rep.status, rep.exit_code, rep.error = "error", exit_code_for(exc), _error_json(exc)
        return rep
    rep.results = results
    certs = dict(certs)
    certs["seed"] = opts.seed
    certs["mode"] = opts.mode
    if opts.verify:
        certs["verify"] = ctx.checks
        if not all(c["passed"] for c in ctx.checks):
            rep.status, rep.exit_code = "error", EXIT_INTERNAL
            rep.error = {"type": "VerificationFailed", "message": "a cross-check failed"}
    rep.certificates = certs
    if opts.timing:
        rep.timing = time.perf_counter() - t0
    return rep


# -- text output ---------------------------------------------------------------------------


def _text_value(v: dict) -> str:
    return v["text"]


def render_text(rep: Report) -> str:
    lines = []
    cmd = rep.command
    lines.append(f"command: {cmd.get('name')}")
    if rep.status != "ok":
        err = rep.error or {}
        where = f" (line {err['line']}, column {err['column']})" if "line" in err else ""
        lines.append(f"error: {err.get('type')}: {err.get('message')}{where}")
        return "\n".join(lines) + "\n"
    r = rep.results
    name = cmd.get("name")
    if name == "resultant":
        lines.append(f"resultant: {r['polynomial']['text']}")
        lines.append(f"lattice index: {r['ell']}; matrix {r['matrix_shape'][0]}x{r['matrix_shape'][1]} via {r['method']}")
        lines.append("degrees: " + ", ".join(f"F{g['polynomial']}: {g['degree']} (expected {g['predicted']})" for g in r["degrees"]))
    elif name == "facet-resultants":
        for f in r["facets"]:
            lines.append(f"facet {f['index']} normal {tuple(f['normal'])}: {f['resultant']['text']}"
                         + (f"  [ell = {f['ell']}]" if f["ell"] != 1 else ""))
    elif name in ("global-residue", "toric-residue"):
        lines.append(f"value: {r['value']['text']}")
        den = r.get("denominator")
        if den and den["factors"]:
            parts = [f"({f['factor']['text']})^{f['exponent']}" for f in den["factors"]]
            lines.append(f"denominator: {den['unit']} * " + " * ".join(parts))
        if name == "toric-residue":
            lines.append(f"normalization Res(J) = {r['normalization']}")
    elif name == "polytope-info":
        for p in r["polytopes"]:
            lines.append(f"polytope {p['name'] or ''}: vertices {[tuple(v) for v in p['vertices']]}")
            lines.append(f"  volume {p['volume']}, normalized {p['normalized_volume']}, "
                         f"{p['lattice_points']} lattice points, {p['interior_points']} interior")
            for f in p["facets"]:
                lines.append(f"  <m,{tuple(f['normal'])}> + {f['offset']} >= 0")
        if r.get("minkowski_sum"):
            s = r["minkowski_sum"]
            lines.append(f"Minkowski sum: vertices {[tuple(v) for v in s['vertices']]}")
        if r.get("mixed_volume") is not None:
            lines.append(f"mixed volume: {r['mixed_volume']}")
    elif name == "jacobian":
        lines.append(f"{r['kind']} Jacobian: {r['polynomial']['text']}")
        if "toric" in r:
            lines.append(f"toric Jacobian J(F): {r['toric']['text']}")
    elif name == "phi-matrix":
        lines.append(f"Phi: {r['shape'][0]}x{r['shape'][1]}")
        heads = [f"{c['block']}*{c['multiplier']}" if c["block"] != "J" else "J" for c in r["column_labels"]]
        lines.append("columns: " + " | ".join(heads))
        br = (r.get("presentation") or {}).get("brackets")
        for i, (lab, row) in enumerate(zip(r["row_labels"], r["entries"])):
            last = br[i] if br else row[-1]
            lines.append(f"{lab}: " + ", ".join(row[:-1]) + f" | {last}")
    if "verify" in rep.certificates:
        for c in rep.certificates["verify"]:
            lines.append(f"check {'ok' if c['passed'] else 'FAILED'}: {c['name']}")
    if rep.timing is not None:
        lines.append(f"time: {rep.timing:.3f} s")
    return "\n".join(lines) + "\n"


# -- entry point ---------------------------------------------------------------------------


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricres", description="Sparse resultants and residues of Laurent systems.")
    ap.add_argument("input", help="input file, or - for standard input")
    ap.add_argument("--json", action="store_true", help="emit the report as JSON")
    ap.add_argument("--seed", type=int, default=0, help="seed for all random draws")
    ap.add_argument("--mode", choices=("numeric", "symbolic"), default="symbolic",
                    help="numeric assigns random values to parameters without a value")
    ap.add_argument("--max-minors", type=int, default=40, help="bound on minors for the minor-gcd method")
    ap.add_argument("--verify", action="store_true", help="run cross-oracle checks")
    ap.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    except OSError as exc:
        print(f"toricres: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return EXIT_INTERNAL
    opts = Options(args.seed, args.mode, args.max_minors, args.verify, args.timing)
    try:
        spec = parse_input(text)
    except InputError as exc:
        rep = Report(command={"name": None, "text": ""}, status="error", exit_code=EXIT_INTERNAL, error=_error_json(exc))
    else:
        rep = run(spec, opts)
    if rep.error is not None:
        err = rep.error
        where = f" at line {err['line']}, column {err['column']}" if "line" in err else ""
        print(f"toricres: {err['type']}: {err['message']}{where}", file=sys.stderr)
    if args.json:
        sys.stdout.write(json.dumps(rep.to_json(), indent=2, sort_keys=False) + "\n")
    elif rep.status == "ok" or rep.command.get("name"):
        sys.stdout.write(render_text(rep))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
