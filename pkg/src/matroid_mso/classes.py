"""Sentence builders for definable classes.

Every builder returns a :class:`ClassSentence` whose formula has no free
variables and no counting atoms.  Cardinality conditions are spelled out with
pairwise-distinct singleton variables (see :func:`at_least`, :func:`exactly`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

from . import btt, stdlib
from . import families as fam
from .logic.evaluator import Evaluator, run_deep
from .logic.formula import (
    And, Call, Definition, Eq, Exists, Forall, Formula, FormulaError, Iff, Implies, Indep,
    MatroidAtom, Neq, Not, NSub, Or, Sub, conj, disj, exists_many, has_card,
)
from .setsystem import SetSystem, iso_dedup, members
from .transduction import library, simplification

c = stdlib.call


@dataclass(frozen=True)
class ClassSentence:
    sentence: Formula
    label: str

    def __post_init__(self):
        if self.sentence.free:
            raise FormulaError(f"{self.label}: class sentence has free variables {sorted(self.sentence.free)}")

    def holds(self, m: SetSystem, evaluator: Evaluator | None = None, **options) -> bool:
        ev = evaluator or Evaluator(m, **options)
        return run_deep(ev.satisfies, self.sentence)

    @property
    def is_ms0(self) -> bool:
        return not has_card(self.sentence)


def _f(x: ClassSentence | Formula) -> Formula:
    return x.sentence if isinstance(x, ClassSentence) else x


TRUE = Exists("X", Sub("X", "X"))
FALSE = Not(TRUE)


# ---------------------------------------------------------------------------
# counting with singletons

def distinct(names: Sequence[str]) -> Formula:
    parts = [c("Sing", v) for v in names]
    parts += [Neq(a, b) for a, b in combinations(names, 2)]
    return conj(*parts) if parts else TRUE


def _svars(k: int, tag: str) -> list[str]:
    return [f"{tag}{i + 1}" for i in range(k)]


def at_least(x: str, k: int, tag: str = "s_") -> Formula:
    """x has at least k elements."""
    if k <= 0:
        return TRUE
    vs = _svars(k, tag)
    return exists_many(vs, conj(distinct(vs), *[Sub(v, x) for v in vs]))


def at_most(x: str, k: int, tag: str = "s_") -> Formula:
    return Not(at_least(x, k + 1, tag))


def exactly(x: str, k: int, tag: str = "s_") -> Formula:
    """x is exhausted by k pairwise-distinct singletons."""
    if k == 0:
        return c("Empty", x)
    vs = _svars(k, tag)
    y = tag + "y"
    cover = Forall(y, Implies(And(c("Sing", y), Sub(y, x)), disj(*[Eq(y, v) for v in vs])))
    return exists_many(vs, conj(distinct(vs), *[Sub(v, x) for v in vs], cover))


def rank_at_least(k: int) -> Formula:
    return Exists("B", And(c("Basis", "B"), at_least("B", k)))


def rank_at_most(k: int) -> Formula:
    return Forall("B", Implies(c("Basis", "B"), at_most("B", k)))


def _is_circuit_union(*parts: str, tag: str = "U") -> Formula:
    """The union of the given sets is a circuit."""
    if len(parts) == 1:
        return c("Circuit", parts[0])
    acc = parts[0]
    chain = []
    names = []
    for i, p in enumerate(parts[1:]):
        u = f"{tag}{i + 1}"
        chain.append(c("Union", acc, p, u))
        names.append(u)
        acc = u
    return exists_many(names, conj(*chain, c("Circuit", acc)))


def _is_union(target: str, *parts: str, tag: str = "V") -> Formula:
    """target is the union of the given sets."""
    if len(parts) == 1:
        return Eq(target, parts[0])
    if len(parts) == 2:
        return c("Union", parts[0], parts[1], target)
    acc = parts[0]
    chain, names = [], []
    for i, p in enumerate(parts[1:-1]):
        u = f"{tag}{i + 1}"
        chain.append(c("Union", acc, p, u))
        names.append(u)
        acc = u
    chain.append(c("Union", acc, parts[-1], target))
    return exists_many(names, conj(*chain))


def _one_in_def() -> Definition:
    # A ∩ B has exactly one element
    body = Exists("s", conj(c("Sing", "s"), Sub("s", "A"), Sub("s", "B"),
                            Forall("t", Implies(conj(c("Sing", "t"), Sub("t", "A"), Sub("t", "B")),
                                                Eq("t", "s")))))
    return Definition("OneIn", ("A", "B"), body, origin="classes")


def _two_def() -> Definition:
    return Definition("Two", ("X",), exactly("X", 2, "t_"), origin="classes")


ONE_IN = _one_in_def()
TWO = _two_def()


def one_in(a: str, b: str) -> Formula:
    return Call(ONE_IN, (a, b))


def two(x: str) -> Formula:
    return Call(TWO, (x,))


# ---------------------------------------------------------------------------
# single matroids and boolean combinations

def single_matroid_sentence(m: SetSystem, prefix_checks: bool = True) -> ClassSentence:
    """Satisfied exactly by the set-systems isomorphic to m.

    With ``prefix_checks`` the sentence also binds W_k = X_1 ∪ … ∪ X_k and
    asserts, for each k, that the independent subsets of W_k through X_k are
    the images of those of m.  Those conjuncts follow from the final clause,
    so the class is unchanged; they let a bad partial labeling fail early.
    A leading "no n+1 distinct elements" conjunct rejects larger structures
    before any labeling is tried.
    """
    n = m.n
    xs = stdlib.element_vars(n)
    fam_ = sorted(m.indep, key=lambda u: (len(members(u)), members(u)))
    core = [stdlib.ground_set(xs),
            Forall("X", Iff(Indep("X"), stdlib.member_of(fam_, xs, "X", "Y")))]
    if not prefix_checks or n == 0:
        return ClassSentence(exists_many(xs, conj(*core)), "single-matroid")
    ws = [f"W{i + 1}" for i in range(n)]
    extra = _svars(n + 1, "e_")
    small = Not(exists_many(extra, distinct(extra)))
    parts = list(core)
    order = []
    for k in range(n):
        order += [xs[k], ws[k]]
        parts.append(Eq(ws[0], xs[0]) if k == 0 else c("Union", ws[k - 1], xs[k], ws[k]))
        local = [u for u in fam_ if u >> k & 1 and u >> (k + 1) == 0]
        guard = And(Sub("X", ws[k]), Sub(xs[k], "X"))
        parts.append(Forall("X", Implies(guard, Iff(Indep("X"), stdlib.member_of(local, xs, "X", "Y")))))
    return ClassSentence(And(small, exists_many(order, conj(*parts))), "single-matroid")


def complement(phi: ClassSentence | Formula) -> ClassSentence:
    return ClassSentence(Not(_f(phi)), "complement")


def union(*phis: ClassSentence | Formula) -> ClassSentence:
    return ClassSentence(disj(*[_f(p) for p in phis]) if phis else FALSE, "union")


def intersection(*phis: ClassSentence | Formula) -> ClassSentence:
    return ClassSentence(conj(*[_f(p) for p in phis]) if phis else TRUE, "intersection")


def finite_class_sentence(systems: Iterable[SetSystem], prefix_checks: bool = True) -> ClassSentence:
    parts = [single_matroid_sentence(s, prefix_checks).sentence for s in systems]
    return ClassSentence(disj(*parts) if parts else FALSE, "finite-class")


# ---------------------------------------------------------------------------
# minors, duals, sums

def has_minor_sentence(psi: ClassSentence | Formula) -> ClassSentence:
    return ClassSentence(btt.lift_exists(_f(psi), library("minors"), compact=True), "has-minor")


def excluded_minors_sentence(psi: ClassSentence | Formula) -> ClassSentence:
    """¬ψ and every proper minor satisfies ψ."""
    f = _f(psi)
    return ClassSentence(And(Not(f), btt.lift_forall(f, library("proper_minors"), compact=True)), "excluded-minors")


def class_from_excluded_minors(psi_em: ClassSentence | Formula) -> ClassSentence:
    """A matroid all of whose minors satisfy ¬ψ_EM."""
    # the lift alone is vacuously true on non-matroids, where Domain fails
    body = btt.lift_forall(Not(_f(psi_em)), library("minors"), compact=True)
    return ClassSentence(And(MatroidAtom(), body), "from-excluded-minors")


def dual_class(psi: ClassSentence | Formula) -> ClassSentence:
    # the dual transduction has exactly one output on a matroid and none otherwise
    return ClassSentence(btt.lift_exists(_f(psi), library("dual"), compact=True), "dual-class")


def direct_sum_class(phi1: ClassSentence | Formula, phi2: ClassSentence | Formula) -> ClassSentence:
    t = library("restrictions")
    b1 = btt.backtranslate(_f(phi1), t, compact=True)
    b2 = btt.backtranslate(_f(phi2), t, compact=True)
    from .logic.formula import fresh_name, substitute
    taken = set(b1.result.vars) | set(b2.result.vars)
    x1 = fresh_name("X1", taken)
    taken.add(x1)
    x2 = fresh_name("X2", taken)
    f1 = substitute(b1.result, {b1.zvars[0]: x1})
    f2 = substitute(b2.result, {b2.zvars[0]: x2})
    body = conj(c("DisjointSum", x1, x2), f1, f2)
    return ClassSentence(Exists(x1, Exists(x2, body)), "direct-sum")


# ---------------------------------------------------------------------------
# the excluded-minor families for lattice-path matroids

def pn_sentence(k: int = 2) -> ClassSentence:
    """{P_n : n ≥ k}: rank at least k and a bipartition into two circuit-hyperplanes
    that are the only non-spanning circuits."""
    if k < 2:
        raise ValueError("K must be at least 2")
    ns = Forall("C", Implies(And(c("Circuit", "C"), Not(c("Spanning", "C"))),
                             Or(Eq("C", "X1"), Eq("C", "X2"))))
    split = exists_many(["X1", "X2"], conj(c("Bipartition", "X1", "X2"), c("CircHyp", "X1"),
                                            c("CircHyp", "X2"), ns))
    return ClassSentence(conj(MatroidAtom(), rank_at_least(k), split), f"P_n, n >= {k}")


@lru_cache(maxsize=None)
def an_sentence() -> ClassSentence:
    """Delete a free element, dualise, delete a free element, land in {P_n}."""
    phi = pn_sentence(2).sentence
    free, d = library("delete_free"), library("dual")
    s = btt.lift_exists(phi, free, compact=True)
    s = btt.lift_exists(s, d, compact=True)
    s = btt.lift_exists(s, free, compact=True)
    return ClassSentence(s, "A_n")


@lru_cache(maxsize=None)
def bnk_sentence() -> ClassSentence:
    """Deleting a freely placed, coindependent, non-spanning circuit leaves some P_n."""
    return ClassSentence(btt.lift_exists(pn_sentence(2).sentence, library("delete_freely_placed_circuit"), compact=True),
                         "B_n,k")


@lru_cache(maxsize=None)
def dn_sentence() -> ClassSentence:
    """Delete a free element, then a coloop, land in {P_n : n ≥ 3}."""
    s = btt.lift_exists(pn_sentence(3).sentence, library("delete_coloop"), compact=True)
    s = btt.lift_exists(s, library("delete_free"), compact=True)
    return ClassSentence(s, "D_n")


def small_excluded_minors() -> list[SetSystem]:
    return [fam.m_w3(), fam.whirl3(), fam.r3(), fam.named("R3*")]


@lru_cache(maxsize=None)
def lattice_path_excluded_minors_sentence() -> ClassSentence:
    b, d = bnk_sentence(), dn_sentence()
    parts = [an_sentence(), b, dual_class(b), d, dual_class(d), finite_class_sentence(small_excluded_minors())]
    return ClassSentence(union(*parts).sentence, "lattice-path excluded minors")


@lru_cache(maxsize=None)
def lattice_path_sentence() -> ClassSentence:
    s = class_from_excluded_minors(lattice_path_excluded_minors_sentence())
    return ClassSentence(s.sentence, "lattice-path")


# ---------------------------------------------------------------------------
# spikes

def _leg_def() -> Definition:
    body = conj(exactly("X", 2, "t_"), Exists("C1", Exists("C2", conj(
        c("Circuit", "C1"), c("Circuit", "C2"), Neq("C1", "C2"),
        exactly("C1", 4, "u_"), exactly("C2", 4, "v_"), c("Intersection", "C1", "C2", "X")))))
    return Definition("Leg", ("X",), body, origin="classes")


LEG = _leg_def()


def leg(x: str) -> Formula:
    return Call(LEG, (x,))


def _chord_orbit_key(r: int, sel: list[int]) -> tuple[int, ...]:
    """Smallest image of a chord set under reordering legs and swapping within legs."""
    best = None
    for perm in permutations(range(r)):
        for flip in range(1 << r):
            img = []
            for ch in sel:
                y = 0
                for i in range(r):
                    b = (ch >> (2 * i + 1)) & 1
                    y |= 1 << (2 * perm[i] + (b ^ (flip >> i & 1)))
                img.append(y)
            img = tuple(sorted(img))
            if best is None or img < best:
                best = img
    return best


@lru_cache(maxsize=None)
def small_spikes() -> tuple[SetSystem, ...]:
    """Every tipless spike of rank three or four, one per isomorphism class."""
    out = []
    for r in (3, 4):
        chords = fam.all_chords(r)
        found = []
        seen = set()

        def grow(i: int, sel: list[int]) -> None:
            if i == len(chords):
                key = _chord_orbit_key(r, sel)
                if key in seen:
                    return
                seen.add(key)
                try:
                    found.append(fam.spike(r, sel))
                except fam.FamilyError:
                    pass
                return
            grow(i + 1, sel)
            # two chords differing in a single leg never coexist
            if all(bin(chords[i] ^ x).count("1") != 2 for x in sel):
                grow(i + 1, sel + [chords[i]])

        grow(0, [])
        out += iso_dedup(found)
    return tuple(out)


def spike_rank5_sentence() -> Formula:
    """Rank at least five: legs are the pairwise intersections of 4-circuits."""
    in_one_leg = Forall("s", Implies(c("Sing", "s"), And(
        Exists("L", And(leg("L"), Sub("s", "L"))),
        Forall("L1", Forall("L2", Implies(conj(leg("L1"), leg("L2"), Sub("s", "L1"), Sub("s", "L2")),
                                          Eq("L1", "L2")))))))
    pairs = Forall("L1", Forall("L2", Implies(conj(leg("L1"), leg("L2"), Neq("L1", "L2")),
                                              _is_circuit_union("L1", "L2"))))
    leg_pair = Exists("L1", Exists("L2", conj(leg("L1"), leg("L2"), Neq("L1", "L2"),
                                              c("Union", "L1", "L2", "C"))))
    transversal_ch = And(c("CircHyp", "C"), Forall("L", Implies(leg("L"), one_in("C", "L"))))
    ns = Forall("C", Implies(And(c("Circuit", "C"), Not(c("Spanning", "C"))), Or(leg_pair, transversal_ch)))
    # gap-fill: a basis meeting every leg once pins the number of legs to the rank
    tb = Exists("B", And(c("Basis", "B"), Forall("L", Implies(leg("L"), one_in("B", "L")))))
    return conj(MatroidAtom(), rank_at_least(5), in_one_leg, pairs, ns, tb)


@lru_cache(maxsize=None)
def spike_sentence() -> ClassSentence:
    # gap-fill: the finite part and the rank-five part are alternatives, so they
    # are joined by a disjunction
    small = finite_class_sentence(small_spikes()).sentence
    return ClassSentence(Or(small, spike_rank5_sentence()), "spike")


# ---------------------------------------------------------------------------
# the minor-closure of spikes, case by case

def _pairs_in(p: str) -> Formula:
    """Every two distinct elements of p form a circuit."""
    return Forall("a", Forall("b", Implies(conj(c("Sing", "a"), c("Sing", "b"), Neq("a", "b"),
                                                Sub("a", p), Sub("b", p)),
                                           _is_circuit_union("a", "b"))))


def _with_loop_class(x: str, p: str) -> Formula:
    """X ∪ {q} is a circuit for each q in P."""
    return Forall("q", Implies(And(c("Sing", "q"), Sub("q", p)), _is_circuit_union(x, "q")))


def _partition(parts: Sequence[str]) -> Formula:
    disjoint = [c("Disjoint", a, b) for a, b in combinations(parts, 2)]
    cover = Forall("e", Implies(c("Sing", "e"), disj(*[Sub("e", v) for v in parts])))
    return conj(*disjoint, cover)


def _ns_circuits(p: str, pair_classes: Sequence[str], maybe_pairs: bool, transversal: Formula) -> Formula:
    """Every non-spanning circuit C is a pair inside P, a two-element class plus
    an element of P, the union of two two-element classes, or satisfies
    ``transversal`` (a circuit-hyperplane picking one element per class)."""
    kinds = [And(Sub("C", p), two("C"))]
    for x in pair_classes:
        k = Exists("q", conj(c("Sing", "q"), Sub("q", p), c("Union", x, "q", "C")))
        kinds.append(And(two(x), k) if maybe_pairs else k)
    for x, y in combinations(pair_classes, 2):
        k = c("Union", x, y, "C")
        kinds.append(conj(two(x), two(y), k) if maybe_pairs else k)
    kinds.append(transversal)
    return Forall("C", Implies(And(c("Circuit", "C"), Not(c("Spanning", "C"))), disj(*kinds)))


def lift_explicit_sentence(k: int) -> Formula:
    """Lift matroids of a cycle with k parallel classes (sizes one or two) plus loops.

    Classes X1..Xk and loop set P partition the ground set.  The rank equals k:
    either some basis is a transversal of the classes, or every class is a
    single edge, the closed cycle is a circuit-hyperplane and P is nonempty.
    """
    xs = [f"X{i + 1}" for i in range(k)]
    parts = [_partition(["P"] + xs), _pairs_in("P")]
    for x in xs:
        parts.append(And(Not(c("Empty", x)), at_most(x, 2)))
        parts.append(Implies(two(x), _with_loop_class(x, "P")))
    for x, y in combinations(xs, 2):
        parts.append(Implies(And(two(x), two(y)), _is_circuit_union(x, y)))
    transversal_basis = Exists("B", conj(c("Basis", "B"), c("Disjoint", "B", "P"),
                                         *[one_in("B", x) for x in xs]))
    # gap-fill: with only single edges and a balanced cycle there is no transversal basis
    balanced_cycle = conj(*[Not(two(x)) for x in xs], Not(c("Empty", "P")),
                          Exists("H", And(c("Bipartition", "P", "H"), c("CircHyp", "H"))))
    parts.append(Or(transversal_basis, balanced_cycle))
    transversal = conj(c("CircHyp", "C"), c("Disjoint", "C", "P"), *[one_in("C", x) for x in xs])
    parts.append(_ns_circuits("P", xs, True, transversal))
    return exists_many(["P"] + xs, conj(*parts))


def lift_few_pairs_sentence(d: int) -> Formula:
    """Lift matroids of a cycle with d ≤ 2 doubled classes X1..Xd, single edges S
    (|S| + d ≥ 3) and loops P."""
    xs = [f"X{i + 1}" for i in range(d)]
    parts = [_pairs_in("P"), at_least("S", 3 - d)]
    for x in xs:
        parts.append(two(x))
        parts.append(_with_loop_class(x, "P"))
    if d == 2:
        parts.append(_is_circuit_union(xs[0], xs[1]))
    if d:
        rank = Exists("B", conj(c("Basis", "B"), Sub("S", "B"), c("Disjoint", "B", "P"),
                                *[one_in("B", x) for x in xs]))
    else:
        # gap-fill: S itself is a basis, or a circuit-hyperplane when P is nonempty
        rank = Or(c("Basis", "S"), And(Not(c("Empty", "P")), c("CircHyp", "S")))
    parts.append(rank)
    transversal = conj(c("CircHyp", "C"), Sub("S", "C"), c("Disjoint", "C", "P"), *[one_in("C", x) for x in xs])
    parts.append(_ns_circuits("P", xs, False, transversal))
    # W collects P and the doubled classes, S is its complement
    chain = ["P"] + xs
    ws = [f"W{i + 1}" for i in range(len(chain))]
    binds = [Eq(ws[0], "P")]
    for i in range(1, len(chain)):
        binds.append(c("Union", ws[i - 1], chain[i], ws[i]))
    disjoint = [c("Disjoint", a, b) for a, b in combinations(chain, 2)]
    body = conj(*binds, *disjoint, c("Bipartition", ws[-1], "S"), *parts)
    order = []
    for v, w in zip(chain, ws):
        order += [v, w]
    return exists_many(order + ["S"], body)


def _pair_def() -> Definition:
    """X, Y distinct singletons of Z lying together on two 4-element circuits inside Z."""
    def on(cv: str) -> Formula:
        return conj(c("Circuit", cv), Sub(cv, "Z"), Sub("X", cv), Sub("Y", cv))
    body = conj(c("Sing", "X"), c("Sing", "Y"), Neq("X", "Y"), Sub("X", "Z"), Sub("Y", "Z"),
                Exists("C1", Exists("C2", conj(on("C1"), on("C2"), Neq("C1", "C2"),
                                               exactly("C1", 4, "u_"), exactly("C2", 4, "v_")))))
    return Definition("Pair", ("Z", "X", "Y"), body, origin="classes")


PAIR = _pair_def()


def pair(z: str, x: str, y: str) -> Formula:
    return Call(PAIR, (z, x, y))


def lift_many_pairs_sentence() -> Formula:
    """At least five vertices and three parallel pairs, through the P/S/Z description
    (the pairing z ↦ z* recovered from 4-circuits)."""
    two_circ = Forall("a", Forall("b", Implies(conj(c("Sing", "a"), c("Sing", "b"), Neq("a", "b")),
                                               Iff(_is_circuit_union("a", "b"),
                                                   And(Sub("a", "P"), Sub("b", "P"))))))
    unique = Forall("z", Implies(And(c("Sing", "z"), Sub("z", "Z")), Exists("w", And(
        pair("Z", "z", "w"),
        Forall("w2", Implies(pair("Z", "z", "w2"), Eq("w2", "w")))))))
    # read as |B ∩ {z, z*}| = 1
    basis = Exists("B", conj(c("Basis", "B"), Sub("S", "B"), Not(Exists("o", conj(
        c("Sing", "o"), Sub("o", "B"), c("Disjoint", "o", "S"), NSub("o", "Z")))),
        Forall("z", Forall("w", Implies(pair("Z", "z", "w"),
                                        Not(Iff(Sub("z", "B"), Sub("w", "B"))))))))
    with_p = Forall("z", Forall("w", Forall("q", Implies(
        conj(pair("Z", "z", "w"), c("Sing", "q"), Sub("q", "P")), _is_circuit_union("z", "w", "q")))))
    quads = Forall("z1", Forall("w1", Forall("z2", Forall("w2", Implies(
        conj(pair("Z", "z1", "w1"), pair("Z", "z2", "w2"), Neq("z2", "z1"), Neq("z2", "w1")),
        _is_circuit_union("z1", "w1", "z2", "w2"))))))
    k_b = Exists("z", Exists("w", Exists("q", conj(pair("Z", "z", "w"), c("Sing", "q"), Sub("q", "P"),
                                                 _is_union("C", "z", "w", "q")))))
    k_c = Exists("z1", Exists("w1", Exists("z2", Exists("w2", conj(
        pair("Z", "z1", "w1"), pair("Z", "z2", "w2"), Neq("z2", "z1"), Neq("z2", "w1"),
        _is_union("C", "z1", "w1", "z2", "w2"))))))
    k_d = conj(c("CircHyp", "C"), Sub("S", "C"), c("Disjoint", "C", "P"),
               Forall("z", Forall("w", Implies(pair("Z", "z", "w"), Not(Iff(Sub("z", "C"), Sub("w", "C")))))))
    ns = Forall("C", Implies(And(c("Circuit", "C"), Not(c("Spanning", "C"))),
                             disj(And(two("C"), Sub("C", "P")), k_b, k_c, k_d)))
    body = conj(c("Disjoint", "P", "S"), c("Union", "P", "S", "W"), c("Bipartition", "W", "Z"),
                at_least("Z", 6), two_circ, unique, basis, with_p, quads, ns)
    return conj(rank_at_least(5), exists_many(["P", "S", "W", "Z"], body))


def rank_two_lift_sentence() -> Formula:
    """Two vertices: loopless, rank two, and outside one parallel class there are
    at most four elements and no three of them pairwise parallel."""
    # gap-fill: derived from the circuits of L(G, B) on a two-vertex graph
    loopless = Forall("e", Implies(c("Sing", "e"), Indep("e")))
    outside = "O"
    no_triple = Not(exists_many(["a", "b", "d"], conj(
        distinct(["a", "b", "d"]), Sub("a", outside), Sub("b", outside), Sub("d", outside),
        _is_circuit_union("a", "b"), _is_circuit_union("a", "d"), _is_circuit_union("b", "d"))))
    cls = Exists("Q", And(c("ParallelClass", "Q"), Exists(outside, conj(
        c("Bipartition", "Q", outside), at_most(outside, 4), no_triple))))
    return conj(rank_at_least(2), rank_at_most(2), loopless, cls)


def uniform_circuit_sentence() -> Formula:
    """{U_{n-1,n} : n ≥ 3}."""
    # gap-fill: "some circuit exists" rules out the free matroids
    every = Forall("C", Implies(c("Circuit", "C"), Forall("s", Implies(c("Sing", "s"), Sub("s", "C")))))
    return conj(at_least_elements(3), Exists("C", c("Circuit", "C")), every)


def at_least_elements(k: int) -> Formula:
    vs = _svars(k, "g_")
    return exists_many(vs, distinct(vs)) if k else TRUE


def no_parallel_triple() -> Formula:
    vs = ["a", "b", "d"]
    return Forall("a", Forall("b", Forall("d", Implies(distinct(vs), Forall("X", Implies(
        _is_union("X", "a", "b", "d"), Not(c("Parallel", "X"))))))))


@lru_cache(maxsize=None)
def graphic_cycle_sentence() -> Formula:
    """M(G) for a cycle with parallel classes of size at most two plus loops: no parallel
    triple, and the simplification is U_{n-1,n} with n ≥ 3."""
    t = simplification(domain=And(MatroidAtom(), no_parallel_triple()), name="simplification_no_triple")
    return btt.lift_exists(uniform_circuit_sentence(), t, compact=True)


def graphic_digon_sentence() -> Formula:
    """M(G) for two vertices joined by one to four edges, plus loops."""
    five_nonloops = exists_many(_svars(5, "n_"), conj(distinct(_svars(5, "n_")),
                                                      *[Indep(v) for v in _svars(5, "n_")]))
    return conj(rank_at_least(1), rank_at_most(1), Not(five_nonloops))


@lru_cache(maxsize=None)
def graphic_sentence() -> Formula:
    return Or(graphic_digon_sentence(), graphic_cycle_sentence())


def small_components_sentence() -> Formula:
    """Every connected component has at most two elements."""
    vs = ["a", "b", "d"]
    return Forall("a", Forall("b", Forall("d", Implies(distinct(vs), Forall("X", Implies(
        conj(Sub("a", "X"), Sub("b", "X"), Sub("d", "X")), Not(c("Component", "X"))))))))


def rank_at_most_one_sentence() -> Formula:
    return Forall("a", Forall("b", Implies(conj(c("Sing", "a"), c("Sing", "b"), Neq("a", "b")),
                                           Forall("X", Implies(c("Union", "a", "b", "X"), c("Dep", "X"))))))


def spike_minor_cases() -> dict[str, Formula]:
    g = graphic_sentence()
    lift_i = disj(lift_explicit_sentence(3), lift_explicit_sentence(4),
                  *[lift_few_pairs_sentence(d) for d in (0, 1, 2)], lift_many_pairs_sentence())
    return {
        "vi": rank_at_most_one_sentence(),
        "v": small_components_sentence(),
        "ii": rank_two_lift_sentence(),
        "i": lift_i,
        "iii": g,
        "iv": dual_class(g).sentence,
    }


@lru_cache(maxsize=None)
def spike_minor_class_sentence() -> ClassSentence:
    cases = spike_minor_cases()
    return ClassSentence(And(MatroidAtom(), disj(*cases.values())), "spike minors")


# ---------------------------------------------------------------------------
# lookup for the command line

def by_name(name: str, k: int = 2) -> ClassSentence:
    table = {
        "pn": lambda: pn_sentence(k),
        "an": an_sentence,
        "bnk": bnk_sentence,
        "dn": dn_sentence,
        "lattice-path": lattice_path_sentence,
        "lattice-path-excluded": lattice_path_excluded_minors_sentence,
        "spike": spike_sentence,
        "spike-minors": spike_minor_class_sentence,
    }
    if name not in table:
        raise KeyError(f"unknown class {name!r}; known: {', '.join(table)}")
    return table[name]()


CLASS_NAMES = ("pn", "an", "bnk", "dn", "lattice-path", "lattice-path-excluded", "spike", "spike-minors")
