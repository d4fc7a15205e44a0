from itertools import combinations

import pytest

from matroid_mso import families as fam
from matroid_mso import oracle, stdlib
from matroid_mso.logic import satisfies
from matroid_mso.setsystem import (
    coloops, contraction, deletion, direct_sum, free_elements, dual, is_isomorphic, is_matroid, mask, popcount, relax, restriction, uniform,
)


def test_lattice_path_examples():
    assert fam.lattice_path_matroid("EN", "NE") == uniform(1, 2)
    m = fam.lattice_path_matroid("ENEN", "ENEN")
    assert m.bases == [fam.n_positions("ENEN")]
    assert fam.lattice_path_matroid("EENN", "NNEE") == uniform(2, 4)


@pytest.mark.parametrize("p,q", [("EN", "EE"), ("EN", "ENE"), ("NE", "EN"), ("EX", "XE")])
def test_lattice_path_errors(p, q):
    with pytest.raises(fam.FamilyError):
        fam.lattice_path_matroid(p, q)


def test_path_pairs_are_valid():
    pairs = list(fam.path_pairs(3))
    assert ("EEE", "EEE") in pairs and ("ENN", "NNE") in pairs and ("NEN", "ENN") not in pairs


def test_pn_examples():
    assert fam.pn(2) == direct_sum(uniform(1, 2), uniform(1, 2))
    for n in range(2, 6):
        assert is_isomorphic(dual(fam.pn(n)), fam.pn(n))
    with pytest.raises(fam.FamilyError):
        fam.pn(1)


def test_an_is_q6():
    a = fam.an(3)
    assert a.n == 6 and a.rank() == 3
    e, f = 5, 4
    assert e in free_elements(a)
    assert f in free_elements(dual(deletion(a, 1 << e)))
    assert is_isomorphic(contraction(deletion(a, 1 << e), 1 << f), fam.pn(2))


@pytest.mark.parametrize("n", [3, 4])
def test_an_defining_properties(n):
    a = fam.an(n)
    e, f = 2 * n - 1, 2 * n - 2
    assert e in free_elements(a)
    d = deletion(a, 1 << e)
    assert f in free_elements(dual(d))
    assert is_isomorphic(contraction(d, 1 << f), fam.pn(n - 1))


@pytest.mark.parametrize("n", [4])
def test_dn_defining_properties(n):
    d = fam.dn(n)
    e, f = 2 * n - 1, 2 * n - 2
    assert e in free_elements(d)
    de = deletion(d, 1 << e)
    assert f in coloops(de)
    assert is_isomorphic(deletion(de, 1 << f), fam.pn(n - 1))


@pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (3, 3)])
def test_bnk_characterization(n, k):
    m = fam.bnk(n, k)
    r = m.rank()
    c = mask(range(2 * n, 2 * n + k))
    assert c in m.circuits and m.rank(c) < r and popcount(c) >= 2
    # coindependent
    assert any(b & c == 0 for b in m.bases)
    # freely placed: every other circuit meeting C is spanning
    assert all(m.rank(d) == r for d in m.circuits if d != c and d & c)
    assert is_isomorphic(deletion(m, c), fam.pn(n))


def test_parameter_ranges():
    for bad in (lambda: fam.an(2), lambda: fam.bnk(2, 3), lambda: fam.dn(3), lambda: fam.spike(2)):
        with pytest.raises(fam.FamilyError):
            bad()


def test_free_extension_and_coextension():
    assert fam.free_extension(uniform(2, 3)) == uniform(2, 4)
    assert is_isomorphic(fam.cofree_coextension(uniform(1, 2)), uniform(2, 3))
    with pytest.raises(fam.FamilyError):
        fam.free_extension(uniform(0, 2))
    for n in range(1, 6):
        for m in oracle.enumerate_matroids(n, up_to_iso=True):
            if m.rank() == 0:
                continue
            x = fam.free_extension(m)
            assert satisfies(x, {"X": 1 << n}, stdlib.call("Free", "X"))


def test_from_nonspanning_circuits():
    r3 = fam.r3()
    assert r3.n == 7 and r3.rank() == 3
    ns = sorted(c for c in r3.circuits if r3.rank(c) < 3)
    want = sorted([mask([0, 1]), mask([2, 3])] + [mask([4, x, y]) for x in (0, 1) for y in (2, 3)])
    assert ns == want
    assert fam.from_nonspanning_circuits(3, 2, []) == uniform(2, 3)
    p3 = fam.from_nonspanning_circuits(6, 3, [[0, 1, 2], [3, 4, 5]])
    assert is_isomorphic(p3, fam.pn(3))
    with pytest.raises(fam.FamilyError):
        fam.from_nonspanning_circuits(4, 2, [[0, 1], [0, 2]])


def test_spike_examples():
    s = fam.spike(3)
    assert s.n == 6 and s.rank() == 3
    # in rank 3 the leg-pair 4-sets are spanning circuits
    legs = fam.legs(3)
    for a, b in combinations(legs, 2):
        assert a | b in s.circuits
    t = fam.spike(3, [[0, 2, 4]])
    assert mask([0, 2, 4]) in t.circuits and mask([0, 2, 4]) not in s.circuits
    for r, chords in [(3, []), (3, [[0, 2, 4]]), (4, []), (4, [[0, 2, 4, 6]]), (5, [])]:
        m = fam.spike(r, chords)
        for leg in fam.legs(r):
            assert leg in m.indep
        for a, b in combinations(fam.legs(r), 2):
            assert a | b in m.circuits
    with pytest.raises(fam.FamilyError):
        fam.spike(3, [[0, 1, 2]])
    with pytest.raises(fam.FamilyError):
        fam.spike(3, [[0, 2, 4], [0, 2, 5]])


def test_lift_matroid_examples():
    digon = fam.Multigraph(2, [(0, 1)] * 3)
    assert is_isomorphic(fam.lift_matroid(digon), uniform(2, 3))
    m = fam.lift_matroid(digon, [[0, 1]])
    assert m.circuits == [mask([0, 1])] and m.rank() == 2
    tri = fam.Multigraph(3, [(0, 1), (1, 2), (0, 2)])
    assert fam.graphic_matroid(tri) == uniform(2, 3)
    with pytest.raises(fam.FamilyError):
        fam.lift_matroid(digon, [[0, 1], [1, 2]])
    with pytest.raises(fam.FamilyError):
        fam.Multigraph(2, [(0, 2)])


def test_cycles_and_thetas():
    digon = fam.Multigraph(2, [(0, 1)] * 3)
    assert sorted(digon.cycles()) == [3, 5, 6]
    assert digon.thetas() == [7]
    loop = fam.Multigraph(1, [(0, 0)])
    assert loop.cycles() == [1] and loop.thetas() == []


def test_lift_matroid_rank_connected_graphs():
    # |V| - k_G holds on connected graphs; see the acceptance suite for the full sweep
    for g in [fam.complete_graph(4), fam.cycle_graph(3, [0, 1]), fam.Multigraph(2, [(0, 1)] * 3)]:
        for bal in fam.linear_classes(g):
            m = fam.lift_matroid(g, bal)
            assert m.rank() == g.vertices - fam.balanced_free_components(g, bal)


def test_named():
    assert fam.named("M_W3").n == 6 and fam.named("M_W3").rank() == 3
    rim = mask([0, 1, 3])
    assert fam.named("whirl3") == relax(fam.m_w3(), rim)
    assert is_isomorphic(dual(fam.m_w3()), fam.m_w3())
    assert is_isomorphic(dual(fam.whirl3()), fam.whirl3())
    assert fam.named("U(2,4)") == uniform(2, 4)
    assert is_isomorphic(fam.named("Q6"), fam.an(3))
    with pytest.raises(fam.FamilyError):
        fam.named("nope")


def test_generate():
    assert fam.generate("pn", {"n": "3"}) == fam.pn(3)
    assert fam.generate("spike", {"r": "3", "chords": "0,2,4"}) == fam.spike(3, [[0, 2, 4]])
    assert fam.generate("lp", {"P": "EN", "Q": "NE"}) == uniform(1, 2)
    g = fam.generate("lift", {"graph": '{"vertices": 2, "edges": [[0,1],[0,1],[0,1]]}'})
    assert is_isomorphic(g, uniform(2, 3))
    with pytest.raises(fam.FamilyError):
        fam.generate("pn", {})
    with pytest.raises(fam.FamilyError):
        fam.generate("zzz", {})


def test_lattice_path_matroids_small_exhaustive():
    for n in range(6):
        for p, q in fam.path_pairs(n):
            assert is_matroid(fam.lattice_path_matroid(p, q))


def test_restriction_helper_matches():
    m = fam.pn(3)
    assert is_isomorphic(restriction(m, mask([0, 1, 2])), uniform(2, 3))
