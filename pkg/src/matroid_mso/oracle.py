"""Brute-force ground truth: small-matroid enumeration, semantic membership
tests for the families, and the curated corpus.

Nothing here touches the logic or classes modules, so verdicts computed here
are independent of the formula machinery they are used to check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterator

from . import families as fam
from .setsystem import (
    Matroid, SetSystem, components, dual, is_circuit_hyperplane, is_isomorphic, is_matroid, iso_dedup, mask, members,
    popcount, system_invariant, uniform,
)

ENUM_CAP = 6
LATTICE_PATH_CAP = 7
SPIKE_CAP = 10
S_CAP = 9


class OracleCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# enumeration by basis exchange

def _exchange_ok(bases: frozenset[int]) -> bool:
    for b1 in bases:
        for b2 in bases:
            diff = b1 & ~b2
            if not diff:
                continue
            other = b2 & ~b1
            for x in members(diff):
                base = b1 & ~(1 << x)
                if not any(base | (1 << y) in bases for y in members(other)):
                    return False
    return True


def _extensions(n: int, bases: frozenset[int]) -> Iterator[frozenset[int]]:
    """Every basis family on n+1 elements whose deletion of element n is ``bases``.

    Either n is a coloop, or the new bases through n are I+n for some family
    of independent (r-1)-sets I of the smaller matroid.
    """
    e = 1 << n
    yield frozenset(b | e for b in bases)
    r = popcount(next(iter(bases)))
    if r == 0:
        yield bases  # n is a loop
        return
    cands = sorted({b & ~(1 << x) for b in bases for x in members(b)})
    for bits in range(1 << len(cands)):
        extra = [cands[i] | e for i in members(bits)]
        fam_ = bases | frozenset(extra)
        if _exchange_ok(fam_):
            yield fam_


@lru_cache(maxsize=None)
def _labeled_bases(n: int) -> tuple[frozenset[int], ...]:
    if n == 0:
        return (frozenset([0]),)
    out = set()
    for b in _labeled_bases(n - 1):
        out.update(_extensions(n - 1, b))
    return tuple(sorted(out, key=lambda f: (popcount(next(iter(f))), sorted(f))))


@lru_cache(maxsize=None)
def _iso_classes(n: int) -> tuple[Matroid, ...]:
    if n == 0:
        return (Matroid(0, [0]),)
    found = []
    for m in _iso_classes(n - 1):
        for b in _extensions(n - 1, frozenset(m.bases)):
            found.append(Matroid.of(SetSystem.from_bases(n, b)))
    return tuple(iso_dedup(found))


def enumerate_matroids(n: int, up_to_iso: bool = False) -> list[Matroid]:
    """All matroids on {0..n-1}, or one per isomorphism class."""
    if not 0 <= n <= ENUM_CAP:
        raise OracleCapExceeded(f"enumeration is capped at n <= {ENUM_CAP}")
    if up_to_iso:
        return list(_iso_classes(n))
    return [Matroid.of(SetSystem.from_bases(n, b)) for b in _labeled_bases(n)]


# ---------------------------------------------------------------------------
# enumeration by the independence axioms

AXIOM_ENUM_CAP = 5


def _augment_ok(fam_: set[int]) -> bool:
    for a in fam_:
        for b in fam_:
            if popcount(b) > popcount(a) and not any(a | (1 << e) in fam_ for e in members(b & ~a)):
                return False
    return True


def enumerate_by_axioms(n: int) -> list[SetSystem]:
    """Every downward-closed family containing ∅ that satisfies augmentation."""
    if not 0 <= n <= AXIOM_ENUM_CAP:
        raise OracleCapExceeded(f"axiom enumeration is capped at n <= {AXIOM_ENUM_CAP}")
    subsets = sorted(range(1, 1 << n), key=lambda x: (popcount(x), x))
    out = []
    chosen = {0}

    def rec(i: int) -> None:
        if i == len(subsets):
            if _augment_ok(chosen):
                out.append(SetSystem(n, chosen))
            return
        x = subsets[i]
        if all(x & ~(1 << e) in chosen for e in members(x)):
            chosen.add(x)
            rec(i + 1)
            chosen.discard(x)
        rec(i + 1)

    rec(0)
    return out


def upto_matroids(nmax: int) -> list[Matroid]:
    return [m for n in range(nmax + 1) for m in enumerate_matroids(n, up_to_iso=True)]


# ---------------------------------------------------------------------------
# membership oracles

def _index(items) -> dict[tuple, list[SetSystem]]:
    out: dict[tuple, list[SetSystem]] = {}
    for s in items:
        out.setdefault(system_invariant(s), []).append(s)
    return out


def _member(m: SetSystem, index: dict[tuple, list[SetSystem]]) -> bool:
    return any(is_isomorphic(m, s) for s in index.get(system_invariant(m), ()))


@lru_cache(maxsize=None)
def _lattice_path_index(n: int):
    return _index(iso_dedup(fam.lattice_path_matroid(p, q) for p, q in fam.path_pairs(n)))


def is_lattice_path_oracle(m: SetSystem) -> bool:
    if m.n > LATTICE_PATH_CAP:
        raise OracleCapExceeded(f"lattice-path oracle is capped at n <= {LATTICE_PATH_CAP}")
    if not is_matroid(m):
        return False
    return _member(m, _lattice_path_index(m.n))


def _perfect_matchings(elems: list[int]) -> Iterator[list[int]]:
    if not elems:
        yield []
        return
    a = elems[0]
    for i in range(1, len(elems)):
        b = elems[i]
        rest = elems[1:i] + elems[i + 1:]
        for tail in _perfect_matchings(rest):
            yield [(1 << a) | (1 << b)] + tail


def spike_legs(m: SetSystem) -> list[int] | None:
    """A leg partition witnessing that m is a tipless spike, or None."""
    if m.n > SPIKE_CAP:
        raise OracleCapExceeded(f"spike oracle is capped at n <= {SPIKE_CAP}")
    if not is_matroid(m):
        return None
    r = m.rank()
    if r < 3 or m.n != 2 * r:
        return None
    circuits = set(m.circuits)
    nonspanning = [c for c in circuits if m.rank(c) < r]
    for legs in _perfect_matchings(list(range(m.n))):
        pairs = {a | b for a, b in combinations(legs, 2)}
        if not pairs <= circuits:
            continue
        ok = True
        for c in nonspanning:
            if c in pairs:
                continue
            if not is_circuit_hyperplane(m, c) or any(popcount(c & leg) != 1 for leg in legs):
                ok = False
                break
        if ok:
            return legs
    return None


def is_spike_oracle(m: SetSystem) -> bool:
    return spike_legs(m) is not None


# -- the excluded-minor families, by isomorphism against their generators

def family_members(name: str, n: int, k: int = 2) -> list[SetSystem]:
    """Every member of the named family with exactly n elements."""
    out = []
    if name == "pn" and n % 2 == 0 and n // 2 >= max(k, 2):
        out.append(fam.pn(n // 2))
    elif name == "an" and n % 2 == 0 and n // 2 >= 3:
        out.append(fam.an(n // 2))
    elif name == "dn" and n % 2 == 0 and n // 2 >= 4:
        out.append(fam.dn(n // 2))
    elif name == "bnk":
        for kk in range(2, n + 1):
            if (n - kk) % 2 == 0 and (n - kk) // 2 >= kk:
                out.append(fam.bnk((n - kk) // 2, kk))
    elif name not in ("pn", "an", "dn"):
        raise KeyError(f"unknown family {name!r}")
    return out


def is_family_member_oracle(name: str, m: SetSystem, k: int = 2) -> bool:
    return any(is_isomorphic(m, g) for g in family_members(name, m.n, k))


# -- the minor-closure of spikes

def _hypercube_independent(d: int) -> list[list[int]]:
    """Subsets of {0,1}^d (as ints) with no two members at Hamming distance one."""
    out: list[list[int]] = []
    verts = list(range(1 << d))

    def rec(i: int, chosen: list[int]) -> None:
        if i == len(verts):
            out.append(list(chosen))
            return
        v = verts[i]
        rec(i + 1, chosen)
        if all(popcount(v ^ u) != 1 for u in chosen):
            chosen.append(v)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return out


def _hypercube_orbits(d: int) -> list[list[int]]:
    """One independent set per orbit under the automorphisms of the d-cube.

    Swapping the two edges of a doubled class, or permuting the doubled
    classes around the cycle, maps the lift matroid to an isomorphic one: every
    two classes of a cycle on at least three vertices meet in at most one
    vertex, so the circuit description does not see the cyclic order.
    """
    from itertools import permutations

    def image(s, perm, flip):
        out = []
        for v in s:
            w = 0
            for i in range(d):
                if v >> i & 1:
                    w |= 1 << perm[i]
            out.append(w ^ flip)
        return tuple(sorted(out))

    seen = set()
    reps = []
    maps = [(perm, flip) for perm in permutations(range(d)) for flip in range(1 << d)]
    for s in _hypercube_independent(d):
        key = min(image(s, pm, fl) for pm, fl in maps)
        if key not in seen:
            seen.add(key)
            reps.append(list(key))
    return reps


def cycle_family(k: int, d: int, p: int):
    """The graph in the cycle part of the class of graphs: k classes, the first
    d doubled, p loops; with its Hamiltonian cycles indexed by bit patterns."""
    g = fam.cycle_graph(k, doubled=range(d), loops=p)
    # edge i is the first edge of class i, edge k+j the parallel copy of class j
    ham = []
    for bits in range(1 << d):
        ham.append(mask([k + i if bits >> i & 1 else i for i in range(d)] + list(range(d, k))))
    return g, ham


def digon_family(j: int, p: int) -> fam.Multigraph:
    return fam.Multigraph(2, [(0, 1)] * j + [(0, 0)] * p)


def _global_candidates(n: int) -> Iterator[tuple[str, tuple, int, Callable[[], Matroid]]]:
    """Lazily yields (case, cache key, vertex count, builder) for every
    structure in cases (i)-(iv) with n elements."""
    for k in range(3, n + 1):
        for d in range(0, min(k, n - k) + 1):
            p = n - k - d
            g, ham = cycle_family(k, d, p)
            yield "iii", ("cyc", k, d, p), k, (lambda g=g: fam.graphic_matroid(g))
            yield "iv", ("cyc*", k, d, p), k, (lambda g=g: dual(fam.graphic_matroid(g)))
            for chosen in _hypercube_orbits(d):
                bal = [ham[b] for b in chosen]
                yield "i", ("lift", k, d, p, tuple(chosen)), k, (lambda g=g, bal=bal: fam.lift_matroid(g, bal))
    for j in range(1, min(4, n) + 1):
        p = n - j
        g = digon_family(j, p)
        yield "iii", ("dig", j, p), 2, (lambda g=g: fam.graphic_matroid(g))
        yield "iv", ("dig*", j, p), 2, (lambda g=g: dual(fam.graphic_matroid(g)))
        # pairwise edge-disjoint balanced digons: a matching on the j joining edges
        digons = [(1 << a) | (1 << b) for a, b in combinations(range(j), 2)]
        for size in range(0, 3):
            for sel in combinations(digons, size):
                if size == 2 and sel[0] & sel[1]:
                    continue
                yield "ii", ("dlift", j, p, sel), 2, (lambda g=g, sel=sel: fam.lift_matroid(g, list(sel)))


_BUILT: dict[tuple, Matroid] = {}


def s_case(m: SetSystem) -> str | None:
    """Which clause of the characterisation of the minor-closure of spikes m
    satisfies first, or None if m is outside the class."""
    if m.n > S_CAP:
        raise OracleCapExceeded(f"oracle for the minor-closure of spikes is capped at n <= {S_CAP}")
    if not is_matroid(m):
        return None
    if m.rank() <= 1:
        return "vi"
    if all(popcount(c) <= 2 for c in components(m)):
        return "v"
    r = m.rank()
    for label, key, verts, build in _global_candidates(m.n):
        # cheap rank filter before building anything
        if label == "iii" and r != verts - 1:
            continue
        if label == "iv" and r != m.n - (verts - 1):
            continue
        if label in ("i", "ii") and r not in (verts, verts - 1):
            continue
        cand = _BUILT.get(key)
        if cand is None:
            cand = _BUILT[key] = build()
        if is_isomorphic(cand, m):
            return label
    return None


def is_in_S_oracle(m: SetSystem) -> bool:
    return s_case(m) is not None


# ---------------------------------------------------------------------------
# the curated corpus

@dataclass(frozen=True)
class CorpusEntry:
    label: str
    system: SetSystem
    note: str = ""


def _non_matroid_a() -> SetSystem:
    # not closed under subsets
    return SetSystem(2, [0, 0b11])


def _non_matroid_b() -> SetSystem:
    # augmentation fails: {0,1} cannot grow {2}
    return SetSystem(3, [0, 0b001, 0b010, 0b100, 0b011])


@lru_cache(maxsize=1)
def curated_corpus() -> tuple[CorpusEntry, ...]:
    e: list[CorpusEntry] = []
    for n in range(1, 7):
        for r in range(n + 1):
            e.append(CorpusEntry(f"U{r},{n}", uniform(r, n), "uniform"))
    for n in (2, 3, 4):
        e.append(CorpusEntry(f"P{n}", fam.pn(n), "truncated sum of two circuits"))
    e.append(CorpusEntry("A3", fam.an(3), "Q6"))
    for n, k in ((2, 2), (3, 2), (3, 3)):
        e.append(CorpusEntry(f"B{n},{k}", fam.bnk(n, k)))
    e.append(CorpusEntry("D4", fam.dn(4)))
    e.append(CorpusEntry("M_W3", fam.m_w3(), "M(K4)"))
    e.append(CorpusEntry("whirl3", fam.whirl3()))
    e.append(CorpusEntry("R3", fam.r3()))
    e.append(CorpusEntry("R3*", dual(fam.r3())))
    e.append(CorpusEntry("spike3", fam.spike(3)))
    e.append(CorpusEntry("spike3+1", fam.spike(3, [[0, 2, 4]])))
    e.append(CorpusEntry("spike3+2", fam.spike(3, [[0, 2, 4], [1, 3, 5]])))
    for p, q in (("EN", "NE"), ("ENEN", "NENE"), ("EENN", "NNEE"), ("EENEN", "NNEEE"),
                 ("EENNN", "NENEN"), ("EEENNN", "NNENEE")):
        e.append(CorpusEntry(f"LP[{p},{q}]", fam.lattice_path_matroid(p, q), "lattice path"))
    e.append(CorpusEntry("L(digon3)", fam.lift_matroid(fam.Multigraph(2, [(0, 1)] * 3)), "lift"))
    g, ham = cycle_family(3, 3, 0)
    e.append(CorpusEntry("L(C3 doubled)", fam.lift_matroid(g, [ham[0]]), "lift, one balanced triangle"))
    g, ham = cycle_family(4, 2, 1)
    e.append(CorpusEntry("L(C4+loop)", fam.lift_matroid(g, []), "lift with a loop"))
    e.append(CorpusEntry("nonmatroid-a", _non_matroid_a(), "not downward closed"))
    e.append(CorpusEntry("nonmatroid-b", _non_matroid_b(), "augmentation fails"))
    labels = [x.label for x in e]
    assert len(labels) == len(set(labels))
    return tuple(e)


def corpus_entry(label: str) -> CorpusEntry:
    for x in curated_corpus():
        if x.label == label:
            return x
    raise KeyError(label)


def corpus_matroids(max_n: int | None = None) -> list[CorpusEntry]:
    return [x for x in curated_corpus()
            if is_matroid(x.system) and (max_n is None or x.system.n <= max_n)]
