"""Formula parsing, checking, compilation, and the truth-table oracle.

Memberships asserted below were computed by hand on the standard model
(X = {x0,x1,x2}, Y = {y0,y1}, r = {x0,x1}, s = {x1,x2},
m = {(x0,y0),(x0,y1),(x2,y0)}, f = x0,x1 -> y0, x2 -> y1).
"""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cetcs.errors import FormulaError
from cetcs.logic import (
    And,
    App,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    Implies,
    Or,
    Top,
    Var,
    check_formula,
    compile_formula,
    oracle,
    parse,
    parse_context,
    render,
    verify,
)

R_X = Atom("r", (Var("x"),))
S_X = Atom("s", (Var("x"),))


@pytest.fixture
def env(std_model):
    return std_model.env()


@pytest.fixture
def ctx(env):
    return parse_context("x:X", env.objects)


# ---------------------------------------------------------------------------
# parsing


def test_conjunction_binds_tighter_than_disjunction():
    assert parse(r"r(x) /\ s(x) \/ r(x)") == Or(And(R_X, S_X), R_X)
    assert parse(r"r(x) \/ s(x) /\ r(x)") == Or(R_X, And(S_X, R_X))


def test_implication_is_right_associative_and_loosest():
    phi = parse(r"r(x) => s(x) => r(x)")
    assert phi == Implies(R_X, Implies(S_X, R_X))
    assert parse(r"r(x) /\ s(x) => r(x)") == Implies(And(R_X, S_X), R_X)


def test_negation_is_sugar_for_implies_false():
    assert parse(r"~r(x)") == Implies(R_X, Bot())
    assert parse(r"~r(x) /\ s(x)") == And(Implies(R_X, Bot()), S_X)


def test_quantifier_scope_extends_right():
    phi = parse(r"forall y:Y. m(x,y) /\ r(x)")
    assert phi == Forall("y", "Y", And(Atom("m", (Var("x"), Var("y"))), R_X))


def test_equality_and_terms():
    assert parse("f(x) = y") == Eq(App("f", Var("x")), Var("y"))
    assert parse("g(f(x)) = x") == Eq(App("g", App("f", Var("x"))), Var("x"))
    assert parse("x = x") == Eq(Var("x"), Var("x"))


def test_parentheses_override_precedence():
    assert parse(r"r(x) /\ (s(x) \/ r(x))") == And(R_X, Or(S_X, R_X))


def test_constants():
    assert parse("true") == Top()
    assert parse("false") == Bot()


def test_render_parse_round_trip_on_samples():
    samples = [
        r"(r(x) => s(x)) => s(x)",
        r"forall y:Y. exists z:X. (m(z,y) /\ r(x))",
        r"~(r(x) \/ s(x))",
        "m(x, f(x))",
        "true => false",
    ]
    for text in samples:
        phi = parse(text)
        assert parse(render(phi)) == phi


def test_parse_error_positions():
    with pytest.raises(FormulaError) as err:
        parse("r(x")
    assert "offset" in str(err.value)
    with pytest.raises(FormulaError):
        parse("r(x))")
    with pytest.raises(FormulaError):
        parse("x =")
    with pytest.raises(FormulaError):
        parse("")
    with pytest.raises(FormulaError):
        parse("forall y Y. r(x)")


def test_bare_identifier_needs_application_or_equality():
    with pytest.raises(FormulaError) as err:
        parse("r(x) /\\ x")
    assert "expected" in str(err.value)


def test_parse_context_error_cases(env):
    with pytest.raises(FormulaError):
        parse_context("x:Z", env.objects)
    with pytest.raises(FormulaError):
        parse_context("x:X, x:Y", env.objects)
    ctx = parse_context("x:X, y:Y", env.objects)
    assert ctx.names == ("x", "y")


# ---------------------------------------------------------------------------
# checking


def test_check_rejects_unbound_variable(ctx, env):
    with pytest.raises(FormulaError) as err:
        check_formula(ctx, parse("m(x, y)"), env)
    assert "y" in str(err.value)


def test_check_rejects_unknown_relation(ctx, env):
    with pytest.raises(FormulaError):
        check_formula(ctx, parse("q(x)"), env)


def test_check_rejects_wrong_arity(ctx, env):
    with pytest.raises(FormulaError):
        check_formula(ctx, parse("r(x, x)"), env)


def test_check_rejects_sort_mismatch(ctx, env):
    with pytest.raises(FormulaError):
        check_formula(ctx, parse("forall y:Y. m(y, x)"), env)
    with pytest.raises(FormulaError):
        check_formula(ctx, parse("f(x) = x"), env)


def test_check_rejects_shadowing(ctx, env):
    with pytest.raises(FormulaError):
        check_formula(ctx, parse("forall x:X. r(x)"), env)
    with pytest.raises(FormulaError):
        check_formula(ctx, parse("forall y:Y. exists y:Y. m(x,y)"), env)


def test_check_accepts_the_standard_suite(ctx, env):
    for text in (r"r(x) /\ s(x)", "m(x, f(x))", "forall y:Y. m(x,y)"):
        check_formula(ctx, parse(text), env)


# ---------------------------------------------------------------------------
# compilation: frozen memberships


CASES = [
    (r"r(x) /\ s(x)", {("x1",)}),
    (r"r(x) \/ s(x)", {("x0",), ("x1",), ("x2",)}),
    (r"r(x) => s(x)", {("x1",), ("x2",)}),
    (r"~r(x)", {("x2",)}),
    ("x = x", {("x0",), ("x1",), ("x2",)}),
    ("m(x, f(x))", {("x0",)}),
    ("forall y:Y. m(x,y)", {("x0",)}),
    ("exists y:Y. m(x,y)", {("x0",), ("x2",)}),
    ("true", {("x0",), ("x1",), ("x2",)}),
    ("false", set()),
]


@pytest.mark.parametrize("text,expected", CASES)
def test_compiled_membership_frozen(ctx, env, text, expected):
    result = compile_formula(ctx, parse(text), env)
    assert set(result.relation.tuples) == expected


def test_compilation_trace_records_the_construction(ctx, env):
    result = compile_formula(ctx, parse(r"r(x) => s(x)"), env)
    assert result.trace == (
        "atom:r:pullback", "atom:s:pullback", "implies:pullback+pi",
    )
    result = compile_formula(ctx, parse("exists y:Y. m(x,y)"), env)
    assert result.trace == ("atom:m:pullback", "exists:image")


def test_two_variable_context(env):
    ctx2 = parse_context("x:X, y:Y", env.objects)
    result = compile_formula(ctx2, parse("m(x,y)"), env)
    assert set(result.relation.tuples) == {
        ("x0", "y0"), ("x0", "y1"), ("x2", "y0"),
    }
    result = compile_formula(ctx2, parse(r"m(x,y) /\ r(x)"), env)
    assert set(result.relation.tuples) == {("x0", "y0"), ("x0", "y1")}


def test_empty_context_compiles_to_truth_value(env):
    ctx0 = parse_context("", env.objects)
    holds = compile_formula(ctx0, parse("exists z:X. r(z)"), env)
    assert len(holds.relation.dom) == 1
    fails = compile_formula(ctx0, parse("forall z:X. r(z)"), env)
    assert len(fails.relation.dom) == 0


def test_oracle_matches_hand_memberships(ctx, env):
    phi = parse(r"r(x) => s(x)")
    assert not oracle(ctx, phi, env, ("x0",))
    assert oracle(ctx, phi, env, ("x1",))
    assert oracle(ctx, phi, env, ("x2",))


@pytest.mark.parametrize("text,_", CASES)
def test_verify_agrees_on_every_row(ctx, env, text, _):
    rep = verify(ctx, parse(text), env)
    assert rep.passed and rep.instances_checked == 3


# ---------------------------------------------------------------------------
# permutation stability


def test_compilation_transports_along_relabeling(std_model):
    env = std_model.env()
    ctx = parse_context("x:X", env.objects)
    sigma = {"x0": "p2", "x1": "p0", "x2": "p1", "y0": "q1", "y1": "q0"}

    from cetcs.finset import FinMor, carrier
    from cetcs.logic import Env
    from cetcs.relcalc import relation_from_tuples

    x2 = carrier(*sorted(sigma[x] for x in env.objects["X"].labels))
    y2 = carrier(*sorted(sigma[y] for y in env.objects["Y"].labels))
    env2 = Env(
        objects={"X": x2, "Y": y2},
        relations={
            name: relation_from_tuples(
                [tuple(sigma[v] for v in row) for row in rel.tuples],
                tuple(x2 if c is env.objects["X"] else y2 for c in rel.cods),
            )
            for name, rel in env.relations.items()
        },
        morphisms={
            "f": FinMor.from_mapping(
                x2, y2,
                {sigma[a]: sigma[b] for a, b in env.morphisms["f"].mapping.items()},
            ),
        },
    )
    ctx2 = parse_context("x:X", env2.objects)
    for text, _ in CASES:
        rows = set(compile_formula(ctx, parse(text), env).relation.tuples)
        rows2 = set(compile_formula(ctx2, parse(text), env2).relation.tuples)
        assert rows2 == {tuple(sigma[v] for v in row) for row in rows}


# ---------------------------------------------------------------------------
# random formulas agree with the oracle


def random_formula(data, depth, y_bound):
    choices = ["top", "bot", "r", "eq"]
    if y_bound:
        choices.append("m")
    if depth > 0:
        choices += ["and", "or", "implies", "not"]
        if not y_bound:
            choices += ["forall", "exists"]
    kind = data.draw(st.sampled_from(choices))
    if kind == "top":
        return Top()
    if kind == "bot":
        return Bot()
    if kind == "r":
        return Atom("r", (Var("x"),))
    if kind == "m":
        return Atom("m", (Var("x"), Var("y")))
    if kind == "eq":
        return Eq(App("f", Var("x")), App("f", Var("x")))
    if kind == "not":
        return Implies(random_formula(data, depth - 1, y_bound), Bot())
    if kind in ("and", "or", "implies"):
        lhs = random_formula(data, depth - 1, y_bound)
        rhs = random_formula(data, depth - 1, y_bound)
        return {"and": And, "or": Or, "implies": Implies}[kind](lhs, rhs)
    body = random_formula(data, depth - 1, True)
    return (Forall if kind == "forall" else Exists)("y", "Y", body)


@settings(deadline=None, derandomize=True, max_examples=60)
@given(st.data())
def test_random_formulas_verify(data):
    from conftest import STANDARD_MODEL
    from cetcs.modelfile import parse_model

    env = parse_model(STANDARD_MODEL).env()
    ctx = parse_context("x:X", env.objects)
    phi = random_formula(data, 3, False)
    rep = verify(ctx, phi, env)
    assert rep.passed, rep.witness


@settings(deadline=None, derandomize=True, max_examples=40)
@given(st.data())
def test_random_formulas_render_round_trip(data):
    phi = random_formula(data, 3, False)
    assert parse(render(phi)) == phi
