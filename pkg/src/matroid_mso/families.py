"""Generators for the concrete matroid families: lattice-path matroids, the
excluded-minor families P_n, A_n, B_{n,k}, D_n, R3 and friends, spikes, and
graphic and lift matroids of multigraphs.

Ground sets are 0-based.  Where the usual description numbers elements from 1
the indices here are shifted down by one.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .setsystem import (
    Matroid, NotAMatroid, SetSystem, direct_sum, dual, is_matroid, mask, members,
    popcount, relax, truncate, uniform,
)


class FamilyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# lattice paths

def _check_word(w: str) -> str:
    if not re.fullmatch(r"[EN]*", w):
        raise FamilyError(f"lattice path word {w!r} must use only E and N")
    return w


def n_positions(w: str) -> int:
    return mask(i for i, ch in enumerate(w) if ch == "N")


def path_leq(p: str, q: str) -> bool:
    """P ⪯ Q: every prefix of P has at most as many N steps as that of Q."""
    a = b = 0
    for x, y in zip(p, q):
        a += x == "N"
        b += y == "N"
        if a > b:
            return False
    return True


def lattice_path_matroid(p: str, q: str) -> Matroid:
    """M[P,Q]: bases are N(L) for the paths L between P and Q."""
    _check_word(p)
    _check_word(q)
    if len(p) != len(q):
        raise FamilyError("bounding paths must have the same length")
    n, r = len(p), p.count("N")
    if q.count("N") != r:
        raise FamilyError("bounding paths must have the same number of N steps")
    if not path_leq(p, q):
        raise FamilyError(f"{p} does not lie below {q}")
    bases = []
    for pos in combinations(range(n), r):
        w = "".join("N" if i in pos else "E" for i in range(n))
        if path_leq(p, w) and path_leq(w, q):
            bases.append(mask(pos))
    return Matroid.of(SetSystem.from_bases(n, bases))


def path_pairs(n: int) -> Iterable[tuple[str, str]]:
    """Every valid bounding pair (P, Q) of length n."""
    words = ["".join(w) for w in product("EN", repeat=n)]
    for p in words:
        for q in words:
            if p.count("N") == q.count("N") and path_leq(p, q):
                yield p, q


# ---------------------------------------------------------------------------
# extensions

def free_extension(m: SetSystem) -> Matroid:
    """Add element n on no non-spanning circuit."""
    if not is_matroid(m):
        raise NotAMatroid("free extension needs a matroid")
    r = m.rank()
    if r < 1:
        raise FamilyError("free extension of a rank-0 matroid would add a loop")
    e = 1 << m.n
    indep = list(m.indep) + [I | e for I in m.indep if popcount(I) <= r - 1]
    return Matroid(m.n + 1, indep)


def cofree_coextension(m: SetSystem) -> Matroid:
    return dual(free_extension(dual(m)))


# ---------------------------------------------------------------------------
# the excluded-minor families

def pn(n: int) -> Matroid:
    """T_n(U_{n-1,n} ⊕ U_{n-1,n}); the two circuits are {0..n-1} and {n..2n-1}."""
    if n < 2:
        raise FamilyError("P_n needs n >= 2")
    c = uniform(n - 1, n)
    return truncate(direct_sum(c, c), n)


def an(n: int) -> Matroid:
    """A free extension of a cofree coextension of P_{n-1}.

    Element 2n-2 is the coextension point f and 2n-1 the free point e.
    """
    if n < 3:
        raise FamilyError("A_n needs n >= 3")
    return free_extension(cofree_coextension(pn(n - 1)))


def bnk(n: int, k: int) -> Matroid:
    """T_n(U_{n-1,n} ⊕ U_{n-1,n} ⊕ U_{k-1,k}); the k-circuit is the last k elements."""
    if not n >= k >= 2:
        raise FamilyError("B_{n,k} needs n >= k >= 2")
    c = uniform(n - 1, n)
    return truncate(direct_sum(direct_sum(c, c), uniform(k - 1, k)), n)


def dn(n: int) -> Matroid:
    """Free extension of P_{n-1} ⊕ coloop: element 2n-2 is f, 2n-1 is e."""
    if n < 4:
        raise FamilyError("D_n needs n >= 4")
    return free_extension(direct_sum(pn(n - 1), uniform(1, 1)))


def from_nonspanning_circuits(n: int, r: int, circuits: Iterable[int | Iterable[int]]) -> Matroid:
    """The rank-r matroid on n elements with exactly the given non-spanning circuits."""
    circ = sorted({c if isinstance(c, int) else mask(c) for c in circuits})
    for c in circ:
        if c >> n:
            raise FamilyError(f"circuit {members(c)} is outside the ground set")
        if popcount(c) > r:
            raise FamilyError(f"circuit {members(c)} has more than r={r} elements")
    if not 0 <= r <= n:
        raise FamilyError("rank out of range")
    bases = [mask(b) for b in combinations(range(n), r)]
    bases = [b for b in bases if not any(c & ~b == 0 for c in circ)]
    s = SetSystem.from_bases(n, bases)
    if not bases or not is_matroid(s):
        raise FamilyError("listed circuits do not define a matroid")
    m = Matroid.of(s)
    got = sorted(c for c in m.circuits if m.rank(c) < r)
    if got != circ or m.rank() != r:
        raise FamilyError("listed circuits are not exactly the non-spanning circuits of the result")
    return m


def r3() -> Matroid:
    circuits = [{0, 1}, {2, 3}] + [{4, x, y} for x in (0, 1) for y in (2, 3)]
    return from_nonspanning_circuits(7, 3, circuits)


# ---------------------------------------------------------------------------
# spikes

def legs(r: int) -> list[int]:
    return [0b11 << (2 * i) for i in range(r)]


def spike(r: int, chords: Sequence[int | Iterable[int]] = ()) -> Matroid:
    """Tipless rank-r spike with legs {2i, 2i+1} and the given transversal circuit-hyperplanes."""
    if r < 3:
        raise FamilyError("spikes need rank >= 3")
    ls = legs(r)
    cs = []
    for c in chords:
        c = c if isinstance(c, int) else mask(c)
        if c >> (2 * r) or any(popcount(c & leg) != 1 for leg in ls):
            raise FamilyError(f"chord {members(c)} must meet every leg exactly once")
        cs.append(c)
    circuits = list(cs)
    if r >= 4:
        # for r = 3 the leg pairs are spanning circuits and come for free
        circuits += [a | b for a, b in combinations(ls, 2)]
    try:
        return from_nonspanning_circuits(2 * r, r, circuits)
    except FamilyError as exc:
        raise FamilyError(f"incompatible chords: {exc}") from None


def all_chords(r: int) -> list[int]:
    return [sum(1 << (2 * i + b) for i, b in enumerate(bits)) for bits in product((0, 1), repeat=r)]


# ---------------------------------------------------------------------------
# multigraphs

@dataclass
class Multigraph:
    vertices: int
    edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.edges = [tuple(e) for e in self.edges]
        for u, v in self.edges:
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise FamilyError(f"edge ({u},{v}) has an endpoint outside 0..{self.vertices - 1}")

    @classmethod
    def from_json(cls, data: dict | str) -> "Multigraph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["vertices"]), [tuple(e) for e in data["edges"]])

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "edges": [list(e) for e in self.edges]}

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertex_set(self, edge_mask: int) -> int:
        out = 0
        for i in members(edge_mask):
            u, v = self.edges[i]
            out |= 1 << u | 1 << v
        return out

    def degrees(self, edge_mask: int) -> dict[int, int]:
        deg: dict[int, int] = {}
        for i in members(edge_mask):
            u, v = self.edges[i]
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return deg

    def connected(self, edge_mask: int, vertex_mask: int | None = None) -> bool:
        """Whether the vertices touched by (or given for) the edges form one component."""
        verts = self.vertex_set(edge_mask) if vertex_mask is None else vertex_mask
        if not verts:
            return True
        return len(self.components(edge_mask, verts)) == 1

    def components(self, edge_mask: int, vertex_mask: int | None = None) -> list[tuple[int, int]]:
        """(vertex mask, edge mask) per component of the subgraph on the given vertices."""
        verts = (1 << self.vertices) - 1 if vertex_mask is None else vertex_mask
        parent = {v: v for v in members(verts)}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in members(edge_mask):
            u, v = self.edges[i]
            parent[find(u)] = find(v)
        groups: dict[int, list[int]] = {}
        for v in members(verts):
            groups.setdefault(find(v), [0, 0])[0] |= 1 << v
        for i in members(edge_mask):
            groups[find(self.edges[i][0])][1] |= 1 << i
        return sorted((g[0], g[1]) for g in groups.values())

    def key(self) -> tuple:
        return (self.vertices, tuple(self.edges))

    def cycles(self) -> list[int]:
        """Edge sets of all cycles (connected, every vertex of degree two; loops count twice)."""
        return list(_scan(self.key())[0])

    def thetas(self) -> list[int]:
        """Edge sets of theta subgraphs: two degree-3 vertices joined by three
        internally disjoint paths (no bridges, no loops)."""
        return list(_scan(self.key())[1])

    def _cycles(self) -> list[int]:
        out = []
        for e in range(1, 1 << self.m):
            deg = self.degrees(e)
            if all(d == 2 for d in deg.values()) and self.connected(e):
                out.append(e)
        return out

    def _thetas(self) -> list[int]:
        out = []
        for e in range(1, 1 << self.m):
            if any(self.edges[i][0] == self.edges[i][1] for i in members(e)):
                continue
            deg = self.degrees(e)
            if sorted(d for d in deg.values() if d != 2) != [3, 3]:
                continue
            if not self.connected(e):
                continue
            # a loose handcuff has the same degree pattern but contains a bridge
            if all(self.connected(e & ~(1 << i), self.vertex_set(e)) for i in members(e)):
                out.append(e)
        return out


@lru_cache(maxsize=4096)
def _scan(key: tuple) -> tuple[tuple[int, ...], tuple[int, ...]]:
    g = Multigraph(key[0], list(key[1]))
    return tuple(g._cycles()), tuple(g._thetas())


def _free_of(circuits: Sequence[int], m: int) -> list[int]:
    """Sets containing none of the circuits (dependence propagates upward)."""
    dep = bytearray(1 << m)
    for c in circuits:
        dep[c] = 1
    out = []
    for x in range(1 << m):
        if not dep[x]:
            y = x
            while y:
                low = y & -y
                if dep[x & ~low]:
                    dep[x] = 1
                    break
                y &= ~low
        if not dep[x]:
            out.append(x)
    return out


def graphic_matroid(g: Multigraph) -> Matroid:
    """Cycle matroid: independent sets are the forests."""
    return Matroid(g.m, _free_of(g.cycles(), g.m))


def _is_linear(g: Multigraph, balanced: set[int], thetas: list[int], cyc: list[int]) -> bool:
    for t in thetas:
        inside = [c for c in cyc if c & ~t == 0]
        if sum(c in balanced for c in inside) == 2:
            return False
    return True


def lift_circuits(g: Multigraph, balanced: Iterable[int], *, check: bool = True) -> list[int]:
    """Circuits of L(G, B)."""
    cyc = g.cycles()
    bal = set(balanced)
    for c in bal:
        if c not in cyc:
            raise FamilyError(f"balanced set {members(c)} is not a cycle of the graph")
    thetas = g.thetas()
    if check and not _is_linear(g, bal, thetas, cyc):
        raise FamilyError("balanced cycles do not form a linear class")
    out = set(c for c in cyc if c in bal)
    for t in thetas:
        if not any(c in bal for c in cyc if c & ~t == 0):
            out.add(t)
    unbal = [c for c in cyc if c not in bal]
    for a, b in combinations(unbal, 2):
        if a & b == 0 and popcount(g.vertex_set(a) & g.vertex_set(b)) <= 1:
            out.add(a | b)
    return sorted(out)


def lift_matroid(g: Multigraph, balanced: Iterable[int | Iterable[int]] = ()) -> Matroid:
    """L(G, B): circuits are balanced cycles, contrabalanced thetas, and pairs of
    edge-disjoint unbalanced cycles meeting in at most one vertex."""
    bal = [b if isinstance(b, int) else mask(b) for b in balanced]
    circ = lift_circuits(g, bal)
    s = SetSystem(g.m, _free_of(circ, g.m))
    if not is_matroid(s):
        raise FamilyError("lift circuits do not form a matroid")
    return Matroid.of(s)


def balanced_free_components(g: Multigraph, balanced: Iterable[int]) -> int:
    """k_G: components of G with no unbalanced cycle."""
    bal = set(balanced)
    cyc = g.cycles()
    count = 0
    for verts, edges in g.components((1 << g.m) - 1):
        if not any(c & ~edges == 0 and c not in bal for c in cyc):
            count += 1
    return count


def linear_classes(g: Multigraph, candidates: Sequence[int] | None = None) -> list[list[int]]:
    """Every subset of the candidate cycles (default: all cycles) that is a linear class."""
    cyc = g.cycles()
    cands = cyc if candidates is None else list(candidates)
    thetas = g.thetas()
    out = []
    for bits in range(1 << len(cands)):
        bal = {cands[i] for i in members(bits)}
        if _is_linear(g, bal, thetas, cyc):
            out.append(sorted(bal))
    return out


def complete_graph(k: int) -> Multigraph:
    return Multigraph(k, list(combinations(range(k), 2)))


def cycle_graph(k: int, doubled: Iterable[int] = (), loops: int = 0) -> Multigraph:
    """Cycle on k vertices; edge i joins i and i+1, classes in ``doubled`` get a
    parallel copy, and ``loops`` loops hang at vertex 0."""
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(i, (i + 1) % k) for i in sorted(set(doubled))]
    edges += [(0, 0)] * loops
    return Multigraph(k, edges)


# ---------------------------------------------------------------------------
# named matroids

def m_w3() -> Matroid:
    """M(K4); vertex 3 is the hub, so the rim triangle is edges {0, 1, 3}."""
    return graphic_matroid(complete_graph(4))


def whirl3() -> Matroid:
    return relax(m_w3(), mask([0, 1, 3]))


def named(name: str) -> Matroid:
    key = name.strip()
    simple = {
        "M_W3": m_w3, "MW3": m_w3, "K4": m_w3, "whirl3": whirl3, "W3": whirl3,
        "R3": r3, "R3*": lambda: dual(r3()), "R3dual": lambda: dual(r3()), "Q6": lambda: an(3),
    }
    if key in simple:
        return simple[key]()
    mt = re.fullmatch(r"U\(?(\d+),?(\d+)\)?", key)
    if mt and "," in key or (mt and len(key) == 3):
        r, n = int(mt.group(1)), int(mt.group(2))
        if not 0 <= r <= n:
            raise FamilyError(f"bad uniform parameters in {name!r}")
        return uniform(r, n)
    raise FamilyError(f"unknown named matroid {name!r}")


def generate(family: str, params: dict[str, str]) -> Matroid:
    """Dispatch used by the command line ``gen`` subcommand."""
    def need(key):
        if key not in params:
            raise FamilyError(f"family {family} needs parameter {key}")
        return params[key]

    def integer(key):
        try:
            return int(need(key))
        except ValueError:
            raise FamilyError(f"parameter {key} must be an integer") from None

    f = family.lower()
    if f in ("pn", "p"):
        return pn(integer("n"))
    if f in ("an", "a"):
        return an(integer("n"))
    if f in ("bnk", "b"):
        return bnk(integer("n"), integer("k"))
    if f in ("dn", "d"):
        return dn(integer("n"))
    if f in ("uniform", "u"):
        return uniform(integer("r"), integer("n"))
    if f in ("lattice-path", "lp", "lattice_path"):
        return lattice_path_matroid(need("P"), need("Q"))
    if f == "spike":
        chords = []
        raw = params.get("chords", "")
        for part in filter(None, raw.split(";")):
            chords.append([int(x) for x in part.split(",") if x != ""])
        return spike(integer("r"), chords)
    if f == "graphic":
        return graphic_matroid(Multigraph.from_json(need("graph")))
    if f == "lift":
        g = Multigraph.from_json(need("graph"))
        bal = json.loads(params.get("balanced", "[]"))
        return lift_matroid(g, [mask(b) for b in bal])
    if f == "named":
        return named(need("name"))
    if f in ("r3", "m_w3", "whirl3", "q6"):
        return named({"r3": "R3", "m_w3": "M_W3", "whirl3": "whirl3", "q6": "Q6"}[f])
    raise FamilyError(f"unknown family {family!r}")
