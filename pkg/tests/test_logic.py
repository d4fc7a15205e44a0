from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from matroid_mso import families as fam
from matroid_mso import oracle, stdlib
from matroid_mso.logic import (
    EXISTS, NOT, And, BudgetExceeded, Card, Evaluator, Exists, Forall, FormulaError, Implies, Indep,
    InterpretationError, MatroidAtom, Not, ParseError, Sub, free_vars, inline_calls, naive_satisfies, parse,
    parse_definitions, program_to_dsl, rename, satisfies, satisfying_assignments, substitute, to_dsl,
)
from matroid_mso.setsystem import SetSystem, uniform

P = stdlib.prelude()


def small_systems():
    out = []
    for n in range(4):
        out += oracle.enumerate_matroids(n, up_to_iso=True)
    out += [SetSystem(2, [0, 0b11]), SetSystem(3, [0, 1, 2, 4, 3])]
    return out


# parsing

def test_parse_forall_desugars():
    f = parse("(all X (imp (call Sing X) (indep X)))", P)
    assert f.kind == NOT and f.a.kind == EXISTS and f.a.a == "X"
    assert f == Forall("X", Implies(stdlib.call("Sing", "X"), Indep("X")))


def test_parse_card():
    assert parse("(card X 1 2)") == Card("X", 1, 2)
    with pytest.raises(ParseError):
        parse("(card X 2 2)")
    with pytest.raises(FormulaError):
        Card("X", 2, 2)


@pytest.mark.parametrize("text", [
    "(indep X Y)", "(foo X)", "(call Nope X)", "(call Sing X Y)", "(and (indep X))",
    "(indep X", "(ex X (indep X)) (indep Y)", "(indep 3x)",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text, P)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse("(and (indep X)\n  (bogus Y))")
    assert "2" in str(exc.value)


def test_definitions_and_comments():
    table = parse_definitions("; comment\n(def Both (A B) (and (indep A) (indep B))) ; trailing\n")
    assert table["Both"].params == ("A", "B")
    with pytest.raises(ParseError):
        parse_definitions("(indep X)")


def test_definition_rejects_unbound():
    with pytest.raises(ParseError):
        parse_definitions("(def Bad (A) (sub A B))")


def test_dsl_round_trip():
    texts = ["(all X (imp (call Sing X) (indep X)))", "(ex B (and (call Basis B) (sub X B)))",
             "(or (indep X) (card X 0 2) (matroid))", "(iff (eq X Y) (neq X Z))", "(nsub X Y)"]
    for t in texts:
        f = parse(t, P)
        assert parse(to_dsl(f), P) == f
        assert parse(program_to_dsl(f), {}) is not None


def test_program_to_dsl_is_self_contained():
    f = parse("(call Circuit X)", P)
    text = program_to_dsl(f)
    g = parse(text, {})
    m = uniform(2, 3)
    for x in range(8):
        assert satisfies(m, {"X": x}, f) == satisfies(m, {"X": x}, g)


# variables

def test_free_vars_examples():
    assert free_vars(Sub("X", "Y")) == {"X", "Y"}
    assert free_vars(Exists("X", Indep("X"))) == frozenset()
    assert free_vars(And(Indep("X"), Exists("Y", Sub("X", "Y")))) == {"X"}


def test_exists_requires_free_variable():
    with pytest.raises(FormulaError):
        Exists("Y", Indep("X"))


def test_and_freshens_bound_variables():
    f = And(Indep("Y"), Exists("Y", Sub("X", "Y")))
    assert f.free == {"X", "Y"}
    inner = f.b
    assert inner.kind == EXISTS and inner.a != "Y"


def test_rename_examples():
    assert rename(Indep("X"), "X", "Z") == Indep("Z")
    assert rename(Sub("X", "Y"), "Y", "W") == Sub("X", "W")
    f = Exists("Z", Sub("X", "Z"))
    g = rename(f, "X", "Z")
    assert g.free == {"Z"}
    m = uniform(1, 2)
    for x in range(4):
        assert satisfies(m, {"X": x}, f) == satisfies(m, {"Z": x}, g)
    with pytest.raises(FormulaError):
        rename(Indep("X"), "Y", "Z")


def test_substitution_exhaustive():
    pool = [stdlib.call(n, "X") for n in ("Basis", "Circuit", "Flat", "Separator")]
    pool.append(And(Indep("X"), Exists("Y", And(Sub("X", "Y"), Not(Indep("Y"))))))
    for m in small_systems():
        for f in pool:
            g = rename(f, "X", "Y")
            ev = Evaluator(m)
            for x in range(1 << m.n):
                assert ev.satisfies(f, {"X": x}) == ev.satisfies(g, {"Y": x})


def test_substitute_handles_swaps():
    f = Sub("X", "Y")
    assert substitute(f, {"X": "Y", "Y": "X"}) == Sub("Y", "X")


# satisfaction

def test_satisfies_examples():
    u23 = uniform(2, 3)
    assert satisfies(u23, {"X": 0b011}, Indep("X"))
    assert satisfies(u23, {"X": 0b101}, Card("X", 0, 2))
    assert not satisfies(u23, {"X": 0b111}, Card("X", 0, 2))
    assert satisfies(uniform(1, 4), {}, Exists("X", Indep("X")))
    assert satisfies(u23, {}, MatroidAtom())
    assert not satisfies(SetSystem(2, [0, 3]), {}, MatroidAtom())


def test_card_congruence():
    m = uniform(4, 4)
    for x in range(16):
        k = bin(x).count("1")
        for p, q in ((0, 1), (1, 2), (0, 3), (2, 3)):
            assert satisfies(m, {"X": x}, Card("X", p, q)) == (k % q == p)


def test_interpretation_errors():
    m = uniform(1, 2)
    with pytest.raises(InterpretationError):
        satisfies(m, {}, Indep("X"))
    with pytest.raises(InterpretationError):
        satisfies(m, {"X": 0, "Y": 0}, Indep("X"))
    with pytest.raises(InterpretationError):
        satisfies(m, {"X": 0b100}, Indep("X"))


def test_satisfying_assignments_examples():
    assert satisfying_assignments(uniform(2, 3), stdlib.call("Circuit", "X"), ["X"]) == {(0b111,)}
    assert satisfying_assignments(uniform(1, 2), stdlib.call("Basis", "X"), ["X"]) == {(1,), (2,)}
    assert satisfying_assignments(fam.pn(2), stdlib.call("CircHyp", "X"), ["X"]) == {(0b0011,), (0b1100,)}
    with pytest.raises(InterpretationError):
        satisfying_assignments(uniform(1, 2), Indep("X"), ["Y"])


def test_budget_exceeded():
    f = parse("(all X (all Y (or (indep X) (indep Y) (card Y 0 2) (card Y 1 2))))")
    with pytest.raises(BudgetExceeded):
        Evaluator(uniform(3, 6), budget=50, memo=False).satisfies(f)


def test_budget_env(monkeypatch):
    from matroid_mso.logic import default_budget
    monkeypatch.setenv("MSO_BUDGET", "1234")
    assert default_budget() == 1234


def test_forall_matches_direct_quantification():
    pool = [stdlib.call(n, "X") for n in ("Basis", "Circuit", "Flat", "Spanning", "Parallel")]
    for m in small_systems():
        ev = Evaluator(m)
        for f in pool:
            direct = all(ev.satisfies(f, {"X": x}) for x in range(1 << m.n))
            assert ev.satisfies(Forall("X", f)) == direct


def test_call_equals_inlined():
    names = [n for n, d in P.items() if len(d.params) <= 2 and n not in ("MatroidAxioms",)]
    for m in small_systems()[:12]:
        ev = Evaluator(m)
        for name in names:
            d = P[name]
            args = ["A", "B"][:len(d.params)]
            f = stdlib.call(name, *args)
            g = inline_calls(f)
            for vals in product(range(1 << m.n), repeat=len(args)):
                th = dict(zip(args, vals))
                assert ev.satisfies(f, th) == naive_satisfies(m, th, g), name


# random formulas: memo and guards against the naive reference

VARS = ("X", "Y")


def formulas(depth=3):
    atoms = st.one_of(
        st.sampled_from(VARS).map(Indep),
        st.tuples(st.sampled_from(VARS), st.sampled_from(VARS)).map(lambda t: Sub(*t)),
        st.tuples(st.sampled_from(VARS), st.integers(0, 2)).map(lambda t: Card(t[0], t[1] % 2, 2)),
        st.sampled_from(["Sing", "Empty", "Basis", "Circuit", "Flat"]).flatmap(
            lambda n: st.sampled_from(VARS).map(lambda v: stdlib.call(n, v))),
        st.permutations(["X", "Y", "Y"]).map(lambda a: stdlib.call("Union", *a)),
    )

    def extend(inner):
        return st.one_of(
            inner.map(Not),
            st.tuples(inner, inner).map(lambda t: And(*t)),
            st.tuples(st.sampled_from(VARS), inner).filter(lambda t: t[0] in t[1].free)
            .map(lambda t: Exists(*t)),
        )
    return st.recursive(atoms, extend, max_leaves=8)


SYSTEMS = small_systems()


@settings(max_examples=200, deadline=None)
@given(formulas(), st.integers(0, len(SYSTEMS) - 1), st.data())
def test_memo_agrees_with_naive(f, i, data):
    m = SYSTEMS[i]
    theta = {v: data.draw(st.integers(0, m.full)) for v in sorted(f.free)}
    want = naive_satisfies(m, theta, f)
    for opts in ({}, {"memo": False}, {"singleton_guard": False}, {"intrinsics": False},
                 {"subset_guard": False, "cached_guard": False, "exact_guard": False}):
        assert satisfies(m, theta, f, **opts) == want, opts


@settings(max_examples=100, deadline=None)
@given(formulas(), st.integers(0, len(SYSTEMS) - 1))
def test_evaluator_is_deterministic(f, i):
    m = SYSTEMS[i]
    names = sorted(f.free)
    ev = Evaluator(m)
    a = satisfying_assignments(m, f, names, ev)
    b = satisfying_assignments(m, f, names, ev)
    assert a == b == satisfying_assignments(m, f, names, Evaluator(m, memo=False))
