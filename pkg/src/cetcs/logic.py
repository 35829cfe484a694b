"""Typed first-order formulas over the finite model: parse, compile, verify.

A formula in a context of typed variables is compiled to a relation on the
context carriers by structural recursion, using only the universal
constructions of the model:

* ``true`` / ``false``   full / empty subobject,
* atom ``r(t1,...,tk)``  pullback of r along the tuple-of-terms map,
* ``t = u``              equalizer of the two term maps,
* ``/\\``                pullback of the two subobjects (intersection),
* ``\\/``                image of their sum (union),
* ``=>``                 dependent product over a pullback,
* ``exists``             image of the projected legs,
* ``forall``             dependent product along the context projection.

``~p`` is shorthand for ``p => false`` and is desugared by the parser.
Connective precedence is ``~`` over ``/\\`` over ``\\/`` over ``=>``;
``=>`` associates right, the other binaries left, and a quantifier body
extends as far right as possible.

``oracle`` evaluates the same formula by Tarski-style recursion over rows,
touching none of the constructions above, and ``verify`` sweeps every
context tuple comparing the two routes.
"""

from __future__ import annotations

import itertools
import re
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import FormulaError, ShapeError
from .finset import (
    FinMor,
    FinObj,
    ProductDiagram,
    compose,
    coproduct,
    equalizer,
    identity,
    image_factorization,
    pi_diagram,
    product_n,
    pullback,
    unique_from_initial,
)
from .relcalc import Relation
from .report import FAIL, PASS, Report

# ---------------------------------------------------------------------------
# syntax trees


@dataclass(frozen=True)
class Var:
    name: str
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class App:
    fn: str
    arg: "Term"
    pos: int | None = field(default=None, compare=False, repr=False)


Term = Var | App


@dataclass(frozen=True)
class Top:
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Bot:
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[Term, ...]
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Forall:
    var: str
    sort: str
    body: "Formula"
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Exists:
    var: str
    sort: str
    body: "Formula"
    pos: int | None = field(default=None, compare=False, repr=False)


Formula = Top | Bot | Atom | Eq | And | Or | Implies | Forall | Exists


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    return f"{t.fn}({render_term(t.arg)})"


def render(phi: Formula) -> str:
    """Fully parenthesized rendering, for messages and witnesses."""
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bot):
        return "false"
    if isinstance(phi, Atom):
        return f"{phi.name}({', '.join(render_term(a) for a in phi.args)})"
    if isinstance(phi, Eq):
        return f"{render_term(phi.lhs)} = {render_term(phi.rhs)}"
    if isinstance(phi, And):
        return f"({render(phi.lhs)} /\\ {render(phi.rhs)})"
    if isinstance(phi, Or):
        return f"({render(phi.lhs)} \\/ {render(phi.rhs)})"
    if isinstance(phi, Implies):
        return f"({render(phi.lhs)} => {render(phi.rhs)})"
    if isinstance(phi, Forall):
        return f"(forall {phi.var}:{phi.sort}. {render(phi.body)})"
    return f"(exists {phi.var}:{phi.sort}. {render(phi.body)})"


# ---------------------------------------------------------------------------
# contexts and environments


@dataclass(frozen=True)
class Context:
    """Ordered typed variables; names must be distinct."""

    vars: tuple[tuple[str, FinObj], ...]

    def __post_init__(self):
        names = [n for n, _ in self.vars]
        if len(set(names)) != len(names):
            raise ShapeError(f"duplicate context variable in {names}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.vars)

    @property
    def objects(self) -> tuple[FinObj, ...]:
        return tuple(o for _, o in self.vars)

    def sort_of(self, name: str) -> FinObj | None:
        for n, o in self.vars:
            if n == name:
                return o
        return None

    def position(self, name: str) -> int:
        for i, (n, _) in enumerate(self.vars):
            if n == name:
                return i
        raise ShapeError(f"unbound variable {name!r}")

    def extend(self, name: str, obj: FinObj) -> "Context":
        return Context(self.vars + ((name, obj),))

    def rows(self):
        """All assignments, as label tuples in carrier order."""
        return itertools.product(*(o.labels for o in self.objects))

    def __len__(self) -> int:
        return len(self.vars)


@dataclass(frozen=True)
class Env:
    """Named carriers, relations and mapping tables a formula may mention."""

    objects: Mapping[str, FinObj] = field(default_factory=dict)
    relations: Mapping[str, Relation] = field(default_factory=dict)
    morphisms: Mapping[str, FinMor] = field(default_factory=dict)


def parse_context(text: str, objects: Mapping[str, FinObj]) -> Context:
    """Parse ``"x:X, y:Y"`` against named carriers; empty text is allowed."""
    text = text.strip()
    if not text:
        return Context(())
    out = []
    for part in text.split(","):
        piece = part.strip()
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_']*)\s*:\s*([A-Za-z_][A-Za-z0-9_']*)", piece)
        if not m:
            raise FormulaError(f"bad context entry {piece!r}, expected name:Object")
        name, sort = m.group(1), m.group(2)
        if sort not in objects:
            raise FormulaError(f"unknown object {sort!r} in context")
        if any(name == seen for seen, _ in out):
            raise FormulaError(f"context repeats the variable {name!r}")
        out.append((name, objects[sort]))
    return Context(tuple(out))


# ---------------------------------------------------------------------------
# parser


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<and>/\\)
      | (?P<or>\\/)
      | (?P<implies>=>)
      | (?P<eq>=)
      | (?P<not>~)
      | (?P<lpar>\()
      | (?P<rpar>\))
      | (?P<comma>,)
      | (?P<dot>\.)
      | (?P<colon>:)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"true", "false", "forall", "exists"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "ident" and value in _KEYWORDS:
                kind = value
            out.append(_Token(kind, value, pos))
        pos = m.end()
    out.append(_Token("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise FormulaError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return tok

    def formula(self) -> Formula:
        return self.implies()

    def implies(self) -> Formula:
        lhs = self.disjunction()
        if self.peek().kind == "implies":
            tok = self.next()
            rhs = self.implies()
            return Implies(lhs, rhs, pos=tok.pos)
        return lhs

    def disjunction(self) -> Formula:
        lhs = self.conjunction()
        while self.peek().kind == "or":
            tok = self.next()
            rhs = self.conjunction()
            lhs = Or(lhs, rhs, pos=tok.pos)
        return lhs

    def conjunction(self) -> Formula:
        lhs = self.unary()
        while self.peek().kind == "and":
            tok = self.next()
            rhs = self.unary()
            lhs = And(lhs, rhs, pos=tok.pos)
        return lhs

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "not":
            self.next()
            sub = self.unary()
            return Implies(sub, Bot(pos=tok.pos), pos=tok.pos)
        if tok.kind in ("forall", "exists"):
            self.next()
            var = self.expect("ident")
            self.expect("colon")
            sort = self.expect("ident")
            self.expect("dot")
            body = self.formula()
            cls = Forall if tok.kind == "forall" else Exists
            return cls(var.text, sort.text, body, pos=tok.pos)
        return self.atomish()

    def atomish(self) -> Formula:
        tok = self.next()
        if tok.kind == "true":
            return Top(pos=tok.pos)
        if tok.kind == "false":
            return Bot(pos=tok.pos)
        if tok.kind == "lpar":
            inner = self.formula()
            self.expect("rpar")
            return inner
        if tok.kind != "ident":
            raise FormulaError(f"expected a formula, found {tok.text or 'end of input'!r}", tok.pos)
        name = tok.text
        if self.peek().kind == "lpar":
            self.next()
            args = [self.term()]
            while self.peek().kind == "comma":
                self.next()
                args.append(self.term())
            self.expect("rpar")
            if self.peek().kind == "eq":
                eq_tok = self.next()
                if len(args) != 1:
                    raise FormulaError(
                        "left side of '=' must be a term (one argument)", eq_tok.pos
                    )
                rhs = self.term()
                return Eq(App(name, args[0], pos=tok.pos), rhs, pos=eq_tok.pos)
            return Atom(name, tuple(args), pos=tok.pos)
        if self.peek().kind == "eq":
            eq_tok = self.next()
            rhs = self.term()
            return Eq(Var(name, pos=tok.pos), rhs, pos=eq_tok.pos)
        raise FormulaError(f"expected '(' or '=' after {name!r}", tok.pos)

    def term(self) -> Term:
        tok = self.expect("ident")
        if tok.kind != "ident" or tok.text in _KEYWORDS:
            raise FormulaError(f"expected a term, found {tok.text!r}", tok.pos)
        if self.peek().kind == "lpar":
            self.next()
            arg = self.term()
            self.expect("rpar")
            return App(tok.text, arg, pos=tok.pos)
        return Var(tok.text, pos=tok.pos)


def parse(text: str) -> Formula:
    """Parse a formula; raises FormulaError with an offset on bad input."""
    parser = _Parser(text)
    phi = parser.formula()
    tail = parser.peek()
    if tail.kind != "eof":
        raise FormulaError(f"unexpected trailing input {tail.text!r}", tail.pos)
    return phi


# ---------------------------------------------------------------------------
# typing


def term_sort(ctx: Context, t: Term, env: Env) -> FinObj:
    if isinstance(t, Var):
        sort = ctx.sort_of(t.name)
        if sort is None:
            raise FormulaError(f"unbound variable {t.name!r}", t.pos)
        return sort
    mor = env.morphisms.get(t.fn)
    if mor is None:
        raise FormulaError(f"unknown morphism {t.fn!r}", t.pos)
    arg_sort = term_sort(ctx, t.arg, env)
    if arg_sort != mor.dom:
        raise FormulaError(
            f"morphism {t.fn!r} expects {mor.dom}, argument has sort {arg_sort}", t.pos
        )
    return mor.cod


def check_formula(ctx: Context, phi: Formula, env: Env) -> None:
    """Name-resolve and type-check; raises FormulaError on the first problem."""
    if isinstance(phi, (Top, Bot)):
        return
    if isinstance(phi, Atom):
        rel = env.relations.get(phi.name)
        if rel is None:
            raise FormulaError(f"unknown relation {phi.name!r}", phi.pos)
        if len(phi.args) != rel.arity:
            raise FormulaError(
                f"relation {phi.name!r} has arity {rel.arity}, got {len(phi.args)} arguments",
                phi.pos,
            )
        for arg, cod in zip(phi.args, rel.cods):
            sort = term_sort(ctx, arg, env)
            if sort != cod:
                raise FormulaError(
                    f"argument of {phi.name!r} has sort {sort}, expected {cod}", phi.pos
                )
        return
    if isinstance(phi, Eq):
        lhs = term_sort(ctx, phi.lhs, env)
        rhs = term_sort(ctx, phi.rhs, env)
        if lhs != rhs:
            raise FormulaError(f"cannot equate {lhs} with {rhs}", phi.pos)
        return
    if isinstance(phi, (And, Or, Implies)):
        check_formula(ctx, phi.lhs, env)
        check_formula(ctx, phi.rhs, env)
        return
    if isinstance(phi, (Forall, Exists)):
        if ctx.sort_of(phi.var) is not None:
            raise FormulaError(f"variable {phi.var!r} shadows the context", phi.pos)
        sort = env.objects.get(phi.sort)
        if sort is None:
            raise FormulaError(f"unknown object {phi.sort!r}", phi.pos)
        check_formula(ctx.extend(phi.var, sort), phi.body, env)
        return
    raise FormulaError(f"unsupported formula node {phi!r}")


# ---------------------------------------------------------------------------
# compilation


@dataclass(frozen=True)
class CompilationResult:
    relation: Relation
    trace: tuple[str, ...]


@lru_cache(maxsize=None)
def _product_cached(objs: tuple[FinObj, ...]) -> ProductDiagram:
    return product_n(objs)


def context_product(ctx: Context) -> ProductDiagram:
    return _product_cached(ctx.objects)


def _term_mor(ctx: Context, t: Term, env: Env, cprod: ProductDiagram) -> FinMor:
    if isinstance(t, Var):
        return cprod.projections[ctx.position(t.name)]
    return compose(env.morphisms[t.fn], _term_mor(ctx, t.arg, env, cprod))


def _drop_last_projection(outer: ProductDiagram, inner: ProductDiagram) -> FinMor:
    """The projection from the extended context product onto the original one."""
    return inner.pair(outer.projections[:-1], dom=outer.apex)


def _compile_mono(
    ctx: Context, phi: Formula, env: Env, cprod: ProductDiagram, trace: list[str]
) -> FinMor:
    """Compile to a monic map into the context product."""
    if isinstance(phi, Top):
        trace.append("true:identity")
        return identity(cprod.apex)
    if isinstance(phi, Bot):
        trace.append("false:initial")
        return unique_from_initial(cprod.apex)
    if isinstance(phi, Atom):
        rel = env.relations[phi.name]
        tprod = _product_cached(rel.cods)
        rel_mono = tprod.pair(rel.legs, dom=rel.dom)
        terms = tprod.pair(
            tuple(_term_mor(ctx, a, env, cprod) for a in phi.args), dom=cprod.apex
        )
        square = pullback(rel_mono, terms)
        trace.append(f"atom:{phi.name}:pullback")
        return square.p2
    if isinstance(phi, Eq):
        lhs = _term_mor(ctx, phi.lhs, env, cprod)
        rhs = _term_mor(ctx, phi.rhs, env, cprod)
        trace.append("eq:equalizer")
        return equalizer(lhs, rhs)
    if isinstance(phi, And):
        a = _compile_mono(ctx, phi.lhs, env, cprod, trace)
        b = _compile_mono(ctx, phi.rhs, env, cprod, trace)
        square = pullback(a, b)
        trace.append("and:pullback")
        return compose(a, square.p1)
    if isinstance(phi, Or):
        a = _compile_mono(ctx, phi.lhs, env, cprod, trace)
        b = _compile_mono(ctx, phi.rhs, env, cprod, trace)
        sd = coproduct(a.dom, b.dom)
        _, img = image_factorization(sd.copair(a, b))
        trace.append("or:sum+image")
        return img
    if isinstance(phi, Implies):
        a = _compile_mono(ctx, phi.lhs, env, cprod, trace)
        b = _compile_mono(ctx, phi.rhs, env, cprod, trace)
        square = pullback(a, b)
        d = pi_diagram(square.p1, a)
        trace.append("implies:pullback+pi")
        return d.phi
    if isinstance(phi, (Forall, Exists)):
        inner_ctx = ctx.extend(phi.var, env.objects[phi.sort])
        inner_prod = context_product(inner_ctx)
        body = _compile_mono(inner_ctx, phi.body, env, inner_prod, trace)
        proj = _drop_last_projection(inner_prod, cprod)
        if isinstance(phi, Forall):
            d = pi_diagram(body, proj)
            trace.append("forall:product+pi")
            return d.phi
        _, img = image_factorization(compose(proj, body))
        trace.append("exists:image")
        return img
    raise FormulaError(f"unsupported formula node {phi!r}")


def compile_formula(ctx: Context, phi: Formula, env: Env) -> CompilationResult:
    """Compile a checked formula to a relation on the context carriers.

    The trace lists, in postorder, which construction realized each node.
    """
    check_formula(ctx, phi, env)
    cprod = context_product(ctx)
    trace: list[str] = []
    mono = _compile_mono(ctx, phi, env, cprod, trace)
    legs = tuple(compose(p, mono) for p in cprod.projections)
    rel = Relation(dom=mono.dom, legs=legs)
    return CompilationResult(rel, tuple(trace))


# ---------------------------------------------------------------------------
# the independent truth-table route


def _eval_term(t: Term, env: Env, assignment: Mapping[str, str]) -> str:
    if isinstance(t, Var):
        return assignment[t.name]
    return env.morphisms[t.fn](_eval_term(t.arg, env, assignment))


def _eval(phi: Formula, env: Env, assignment: dict[str, str]) -> bool:
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Atom):
        row = tuple(_eval_term(a, env, assignment) for a in phi.args)
        return env.relations[phi.name].member(row)
    if isinstance(phi, Eq):
        return _eval_term(phi.lhs, env, assignment) == _eval_term(phi.rhs, env, assignment)
    if isinstance(phi, And):
        return _eval(phi.lhs, env, assignment) and _eval(phi.rhs, env, assignment)
    if isinstance(phi, Or):
        return _eval(phi.lhs, env, assignment) or _eval(phi.rhs, env, assignment)
    if isinstance(phi, Implies):
        return (not _eval(phi.lhs, env, assignment)) or _eval(phi.rhs, env, assignment)
    if isinstance(phi, Forall):
        sort = env.objects[phi.sort]
        for lbl in sort.labels:
            assignment[phi.var] = lbl
            ok = _eval(phi.body, env, assignment)
            del assignment[phi.var]
            if not ok:
                return False
        return True
    if isinstance(phi, Exists):
        sort = env.objects[phi.sort]
        for lbl in sort.labels:
            assignment[phi.var] = lbl
            ok = _eval(phi.body, env, assignment)
            del assignment[phi.var]
            if ok:
                return True
        return False
    raise FormulaError(f"unsupported formula node {phi!r}")


def oracle(ctx: Context, phi: Formula, env: Env, row: Sequence[str]) -> bool:
    """Evaluate by direct recursion on one context row; no constructions."""
    check_formula(ctx, phi, env)
    row = tuple(row)
    if len(row) != len(ctx):
        raise ShapeError(f"expected {len(ctx)} components, got {len(row)}")
    for lbl, (_, obj) in zip(row, ctx.vars):
        if lbl not in obj:
            raise ShapeError(f"{lbl!r} is not a label of {obj}")
    return _eval(phi, env, dict(zip(ctx.names, row)))


def verify(ctx: Context, phi: Formula, env: Env, item: str | None = None) -> Report:
    """Compare compiled membership against the oracle on every context row."""
    t0 = time.perf_counter()
    result = compile_formula(ctx, phi, env)
    checked = 0
    witness = None
    for row in ctx.rows():
        checked += 1
        compiled = result.relation.member(row)
        direct = oracle(ctx, phi, env, row)
        if compiled != direct:
            witness = {
                "row": list(row),
                "compiled": compiled,
                "oracle": direct,
                "formula": render(phi),
                "trace": list(result.trace),
            }
            break
    return Report(
        item=item or f"verify {render(phi)}",
        verdict=FAIL if witness else PASS,
        witness=witness,
        instances_checked=checked,
        elapsed=time.perf_counter() - t0,
    )
