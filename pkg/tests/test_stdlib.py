import pytest
from hypothesis import given, settings, strategies as st

from helpers import PREDICATES, predicate_oracle
from matroid_mso import families as fam
from matroid_mso import oracle, stdlib
from matroid_mso.logic import Eq, Evaluator, FormulaError, Indep, Not, naive_satisfies, satisfies, satisfying_assignments
from matroid_mso.setsystem import SetSystem, direct_sum, is_matroid, mask, uniform

C = stdlib.call


def sat1(m, f):
    return {x for (x,) in satisfying_assignments(m, f, ["X"])}


def test_prelude_contents():
    names = set(stdlib.prelude())
    for n in stdlib.MATROID_PREDICATES + stdlib.EXTENSION_PREDICATES + stdlib.INTRINSICS:
        assert n in names
    assert set(stdlib.basic_set_formulas()) == set(stdlib.INTRINSICS)
    assert set(stdlib.matroid_predicates()) == set(stdlib.MATROID_PREDICATES)
    assert set(stdlib.extension_predicates()) == set(stdlib.EXTENSION_PREDICATES)
    with pytest.raises(KeyError):
        stdlib.get("NoSuch")


def test_basic_set_examples():
    m = uniform(1, 3)
    assert satisfies(m, {"X": 0}, C("Empty", "X"))
    assert not satisfies(m, {"X": 1}, C("Empty", "X"))
    assert satisfies(m, {"X": 1, "Y": 2, "Z": 3}, C("Union", "X", "Y", "Z"))
    assert not satisfies(m, {"X": 1, "Y": 2, "Z": 1}, C("Union", "X", "Y", "Z"))
    assert satisfies(m, {"X": 3, "Y": 4}, C("Bipartition", "X", "Y"))


def test_intrinsics_match_definitions():
    for m in [uniform(1, 3), uniform(2, 2), SetSystem(3, [0, 3])]:
        for name in stdlib.INTRINSICS:
            d = stdlib.get(name)
            args = list("XYZ")[:len(d.params)]
            f = C(name, *args)
            fast = satisfying_assignments(m, f, args, Evaluator(m))
            slow = satisfying_assignments(m, f, args, Evaluator(m, intrinsics=False))
            assert fast == slow, name


def test_max_min():
    assert sat1(uniform(1, 2), stdlib.max_formula(Indep("X"), "X")) == {1, 2}
    assert sat1(uniform(2, 3), stdlib.min_formula(Not(Indep("X")), "X")) == {7}
    assert sat1(uniform(1, 3), stdlib.max_formula(Eq("X", "X"), "X")) == {7}
    with pytest.raises(FormulaError):
        stdlib.max_formula(Indep("Y"), "X")


def test_predicate_examples():
    assert sat1(uniform(1, 2), C("Cocircuit", "X")) == {3}
    assert sat1(uniform(2, 3), C("Flat", "X")) == {0, 1, 2, 4, 7}
    assert sat1(fam.pn(2), C("Separator", "X")) == {3, 12, 15}
    assert sat1(uniform(2, 4), C("Free", "X")) == {1, 2, 4, 8}
    assert sat1(direct_sum(uniform(1, 2), uniform(1, 1)), C("Coloop", "X")) == {4}
    assert sat1(fam.pn(3), C("CircHyp", "X")) == {mask([0, 1, 2]), mask([3, 4, 5])}


def test_parallel_literal():
    for m in [uniform(1, 3), uniform(2, 3), fam.pn(2), SetSystem(2, [0])]:
        got = sat1(m, C("Parallel", "X"))
        assert 0 in got
        assert all(1 << e in got for e in range(m.n) if (1 << e) in m.indep)


@pytest.mark.parametrize("name", PREDICATES)
def test_predicates_match_oracle_small(name):
    for n in range(4):
        for m in oracle.enumerate_matroids(n):
            assert sat1(m, C(name, "X")) == predicate_oracle(name, m), (name, m.n, sorted(m.indep))


def test_finite_encoding():
    names = stdlib.element_vars(2)
    enc = stdlib.finite_encoding(2, family=[0, 1], subset=3)
    th = {"X1": 1, "X2": 2}
    m2 = uniform(1, 2)
    assert satisfies(m2, th, enc["GroundSet"])
    for x in range(4):
        assert satisfies(m2, {**th, "X": x}, enc["Equal"]) == (x == 3)
        mem = enc["Member"]
        env = {v: val for v, val in {**th, "X": x}.items() if v in mem.free}
        assert satisfies(m2, env, mem) == (x in (0, 1))
    m3 = uniform(1, 3)
    g = stdlib.ground_set(names)
    assert not any(satisfies(m3, {"X1": a, "X2": b}, g) for a in range(8) for b in range(8))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, (1 << n) - 1)))))
def test_predicates_evaluate_on_non_matroids(data):
    n, fam_ = data
    s = SetSystem(n, fam_)
    ev = Evaluator(s)
    for name in PREDICATES:
        for x in range(1 << n):
            assert ev.satisfies(C(name, "X"), {"X": x}) in (True, False)


def test_matroid_axioms_sentence_matches_is_matroid():
    f = stdlib.call("MatroidAxioms")
    for n in range(4):
        for bits in range(1 << (1 << n)):
            s = SetSystem(n, [x for x in range(1 << n) if bits >> x & 1])
            assert naive_satisfies(s, {}, f) == is_matroid(s) == Evaluator(s).satisfies(f)
