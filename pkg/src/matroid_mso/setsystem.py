"""Set-systems and matroids over small ground sets.

Element sets are plain ``int`` bitmasks: bit ``i`` set means element ``i`` is
a member.  A :class:`SetSystem` is a ground-set size plus a frozenset of such
masks, which keeps membership queries O(1) for the evaluator.
"""

from __future__ import annotations

import json
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

ElementSet = int


class SetSystemError(ValueError):
    """Raised for malformed set-systems or illegal matroid operations."""


class NotAMatroid(SetSystemError):
    pass


# ---------------------------------------------------------------------------
# bitmask helpers

def mask(elements: Iterable[int]) -> ElementSet:
    out = 0
    for e in elements:
        if e < 0:
            raise SetSystemError(f"negative element index {e}")
        out |= 1 << e
    return out


def members(x: ElementSet) -> list[int]:
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return out


def popcount(x: ElementSet) -> int:
    return bin(x).count("1")


def submasks(x: ElementSet) -> Iterator[ElementSet]:
    """All subsets of ``x``, including ``x`` and 0."""
    s = x
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & x


def supermasks(x: ElementSet, full: ElementSet) -> Iterator[ElementSet]:
    """All ``y`` with ``x <= y <= full``."""
    rest = full & ~x
    for s in submasks(rest):
        yield x | s


def fmt(x: ElementSet) -> str:
    return "{" + ",".join(map(str, members(x))) + "}"


# ---------------------------------------------------------------------------

class SetSystem:
    """A ground set ``{0,...,n-1}`` with a family of independent sets."""

    __slots__ = ("n", "indep", "__dict__")

    def __init__(self, n: int, indep: Iterable[ElementSet | Iterable[int]]):
        if n < 0:
            raise SetSystemError("ground set size must be non-negative")
        fam = set()
        full = (1 << n) - 1
        for s in indep:
            m = s if isinstance(s, int) else mask(s)
            if m & ~full:
                raise SetSystemError(f"set {fmt(m)} not inside ground set of size {n}")
            fam.add(m)
        self.n = n
        self.indep: frozenset[ElementSet] = frozenset(fam)

    @classmethod
    def from_bases(cls, n: int, bases: Iterable[ElementSet | Iterable[int]]) -> "SetSystem":
        """Build the downward closure of ``bases``."""
        fam: set[int] = set()
        for b in bases:
            m = b if isinstance(b, int) else mask(b)
            if m in fam:
                continue
            fam.update(submasks(m))
        return cls(n, fam)

    @property
    def full(self) -> ElementSet:
        return (1 << self.n) - 1

    def is_independent(self, x: ElementSet) -> bool:
        return x in self.indep

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetSystem):
            return NotImplemented
        return self.n == other.n and self.indep == other.indep

    def __hash__(self) -> int:
        return hash((self.n, self.indep))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, |indep|={len(self.indep)})"

    def sorted_indep(self) -> list[ElementSet]:
        return sorted(self.indep, key=lambda m: (popcount(m), members(m)))

    # -- derived data, computed on demand; valid for matroids, still defined otherwise

    @cached_property
    def rank_table(self) -> list[int]:
        """``rank_table[X]`` = size of the largest independent subset of X."""
        size = 1 << self.n
        table = [0] * size
        for x in range(size):
            if x in self.indep:
                table[x] = popcount(x)
            else:
                best = 0
                y = x
                while y:
                    low = y & -y
                    r = table[x & ~low]
                    if r > best:
                        best = r
                    y &= ~low
                table[x] = best
        return table

    def rank(self, x: ElementSet | None = None) -> int:
        return self.rank_table[self.full if x is None else x]

    @cached_property
    def bases(self) -> list[ElementSet]:
        return sorted(m for m in self.indep
                      if all((m | (1 << e)) not in self.indep
                             for e in range(self.n) if not m >> e & 1))

    @cached_property
    def circuits(self) -> list[ElementSet]:
        out = []
        for x in range(1 << self.n):
            if x in self.indep:
                continue
            if all((x & ~(1 << e)) in self.indep for e in members(x)):
                out.append(x)
        return out

    def to_json(self) -> dict:
        return {"format": "setsystem-v1", "elements": self.n,
                "independent": [members(m) for m in self.sorted_indep()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


class Matroid(SetSystem):
    """A set-system that passed :func:`is_matroid` on construction."""

    def __init__(self, n: int, indep: Iterable[ElementSet | Iterable[int]]):
        super().__init__(n, indep)
        if not is_matroid(self):
            raise NotAMatroid("independent sets violate the matroid axioms")

    @classmethod
    def of(cls, s: SetSystem) -> "Matroid":
        if isinstance(s, Matroid):
            return s
        return cls(s.n, s.indep)


# ---------------------------------------------------------------------------
# I/O

def from_json(data: dict | str) -> SetSystem:
    """Parse a setsystem-v1 document.  Returns a Matroid when the axioms hold."""
    if isinstance(data, str):
        data = json.loads(data)
    if data.get("format") != "setsystem-v1":
        raise SetSystemError("expected format setsystem-v1")
    n = data.get("elements")
    if not isinstance(n, int) or n < 0:
        raise SetSystemError("'elements' must be a non-negative integer")
    has_i, has_b = "independent" in data, "bases" in data
    if has_i == has_b:
        raise SetSystemError("exactly one of 'independent' or 'bases' is required")
    rows = data["independent"] if has_i else data["bases"]
    sets = []
    for row in rows:
        if list(row) != sorted(set(row)):
            raise SetSystemError(f"set {row} is not strictly ascending")
        sets.append(mask(row))
    s = SetSystem(n, sets) if has_i else SetSystem.from_bases(n, sets)
    return Matroid(s.n, s.indep) if is_matroid(s) else s


def load(path: str) -> SetSystem:
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))


def save(s: SetSystem, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(s.to_json(), fh)
        fh.write("\n")


# ---------------------------------------------------------------------------
# axioms

def is_matroid(s: SetSystem) -> bool:
    """Semantic check of the independence axioms."""
    fam = s.indep
    if 0 not in fam:
        return False
    for m in fam:
        for e in members(m):
            if (m & ~(1 << e)) not in fam:
                return False
    by_size: dict[int, list[int]] = {}
    for m in fam:
        by_size.setdefault(popcount(m), []).append(m)
    # augmentation between consecutive sizes suffices once downward closure holds
    for k, small in by_size.items():
        for big in by_size.get(k + 1, ()):
            for a in small:
                diff = big & ~a
                if not any((a | (1 << e)) in fam for e in members(diff)):
                    return False
    return True


def _require(m: SetSystem) -> Matroid:
    if isinstance(m, Matroid):
        return m
    if not is_matroid(m):
        raise NotAMatroid("operation requires a matroid")
    return Matroid(m.n, m.indep)


# ---------------------------------------------------------------------------
# constructions

def uniform(r: int, n: int) -> Matroid:
    if not 0 <= r <= n:
        raise SetSystemError(f"U({r},{n}) needs 0 <= r <= n")
    return Matroid(n, [x for x in range(1 << n) if popcount(x) <= r])


def dual(m: SetSystem) -> Matroid:
    m = _require(m)
    full = m.full
    return Matroid(m.n, SetSystem.from_bases(m.n, [full & ~b for b in m.bases]).indep)


def _reindex(x: ElementSet, keep: Sequence[int]) -> ElementSet:
    out = 0
    for i, e in enumerate(keep):
        if x >> e & 1:
            out |= 1 << i
    return out


def minor(m: SetSystem, contract: ElementSet, keep: ElementSet) -> Matroid:
    """(M / contract) | keep, re-indexed over ``keep`` in increasing order."""
    m = _require(m)
    if contract & keep:
        raise SetSystemError("contract and keep must be disjoint")
    if contract not in m.indep:
        raise SetSystemError(f"contract set {fmt(contract)} is dependent")
    if (contract | keep) & ~m.full:
        raise SetSystemError("sets exceed the ground set")
    order = members(keep)
    fam = [_reindex(x, order) for x in submasks(keep) if (x | contract) in m.indep]
    return Matroid(len(order), fam)


def restriction(m: SetSystem, keep: ElementSet) -> Matroid:
    return minor(m, 0, keep)


def deletion(m: SetSystem, drop: ElementSet) -> Matroid:
    return minor(m, 0, m.full & ~drop)


def contraction(m: SetSystem, x: ElementSet) -> Matroid:
    """M / x for an arbitrary set x (contracts a basis of x, deletes the rest)."""
    m = _require(m)
    r = m.rank(x)
    basis = next(i for i in submasks(x) if popcount(i) == r and i in m.indep)
    return minor(m, basis, m.full & ~x)


def loops(m: SetSystem) -> ElementSet:
    return mask(e for e in range(m.n) if (1 << e) not in m.indep)


def parallel_classes(m: SetSystem) -> list[ElementSet]:
    """Parallel classes of the non-loop elements, sorted by bit pattern."""
    m = _require(m)
    circ2 = {c for c in m.circuits if popcount(c) == 2}
    seen = 0
    out = []
    for e in range(m.n):
        if seen >> e & 1 or (1 << e) not in m.indep:
            continue
        cls = 1 << e
        for f in range(e + 1, m.n):
            if ((1 << e) | (1 << f)) in circ2:
                cls |= 1 << f
        seen |= cls
        out.append(cls)
    return sorted(out)


def simplify(m: SetSystem) -> tuple[Matroid, list[ElementSet]]:
    """Canonical simplification: one element per parallel class, loops dropped.

    Output element ``i`` corresponds to ``classes[i]``; a set of classes is
    independent iff a transversal of representatives is independent.
    """
    m = _require(m)
    classes = parallel_classes(m)
    reps = [c & -c for c in classes]
    fam = []
    for sub in range(1 << len(classes)):
        x = 0
        for i, r in enumerate(reps):
            if sub >> i & 1:
                x |= r
        if x in m.indep:
            fam.append(sub)
    return Matroid(len(classes), fam), classes


def components(m: SetSystem) -> list[ElementSet]:
    """Connected components (circuit-sharing classes), sorted by least element."""
    m = _require(m)
    parent = list(range(m.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in m.circuits:
        es = members(c)
        for e in es[1:]:
            ra, rb = find(es[0]), find(e)
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, int] = {}
    for e in range(m.n):
        groups[find(e)] = groups.get(find(e), 0) | (1 << e)
    return sorted(groups.values(), key=lambda x: x & -x)


def is_circuit_hyperplane(m: SetSystem, h: ElementSet) -> bool:
    m = _require(m)
    return h in set(m.circuits) and h in set(hyperplanes(m))


def relax(m: SetSystem, h: ElementSet) -> Matroid:
    m = _require(m)
    if not is_circuit_hyperplane(m, h):
        raise SetSystemError(f"{fmt(h)} is not a circuit-hyperplane")
    return Matroid(m.n, m.indep | {h})


def direct_sum(a: SetSystem, b: SetSystem) -> Matroid:
    a, b = _require(a), _require(b)
    fam = [x | (y << a.n) for x in a.indep for y in b.indep]
    return Matroid(a.n + b.n, fam)


def truncate(m: SetSystem, r: int) -> Matroid:
    m = _require(m)
    if not 0 <= r <= m.rank():
        raise SetSystemError(f"truncation rank {r} outside 0..{m.rank()}")
    return Matroid(m.n, [x for x in m.indep if popcount(x) <= r])


def permute(s: SetSystem, perm: Sequence[int]) -> SetSystem:
    """Relabel element ``i`` as ``perm[i]``."""
    fam = []
    for x in s.indep:
        y = 0
        for e in members(x):
            y |= 1 << perm[e]
        fam.append(y)
    cls = Matroid if isinstance(s, Matroid) else SetSystem
    return cls(s.n, fam)


# ---------------------------------------------------------------------------
# derived families (semantic oracles for the matroid predicates)

def closure(m: SetSystem, x: ElementSet) -> ElementSet:
    r = m.rank(x)
    out = x
    for e in range(m.n):
        if not x >> e & 1 and m.rank(x | (1 << e)) == r:
            out |= 1 << e
    return out


def flats(m: SetSystem) -> list[ElementSet]:
    return [x for x in range(1 << m.n) if closure(m, x) == x]


def hyperplanes(m: SetSystem) -> list[ElementSet]:
    r = m.rank()
    return [f for f in flats(m) if m.rank(f) == r - 1]


def spanning_sets(m: SetSystem) -> list[ElementSet]:
    r = m.rank()
    return [x for x in range(1 << m.n) if m.rank(x) == r]


def cocircuits(m: SetSystem) -> list[ElementSet]:
    return sorted(m.full & ~h for h in hyperplanes(m))


def separators(m: SetSystem) -> list[ElementSet]:
    """Non-empty unions of connected components."""
    comps = components(m)
    out = []
    for k in range(1, len(comps) + 1):
        for pick in combinations(comps, k):
            u = 0
            for c in pick:
                u |= c
            out.append(u)
    return sorted(out)


def coloops(m: SetSystem) -> list[int]:
    bases = m.bases
    return [e for e in range(m.n) if all(b >> e & 1 for b in bases)]


def free_elements(m: SetSystem) -> list[int]:
    """Non-coloops all of whose circuits are spanning."""
    r = m.rank()
    co = set(coloops(m))
    return [e for e in range(m.n) if e not in co
            and all(m.rank(c) == r for c in m.circuits if c >> e & 1)]


def derived_families(m: SetSystem) -> dict[str, list[ElementSet]]:
    m = _require(m)
    return {
        "circuits": list(m.circuits),
        "bases": list(m.bases),
        "flats": flats(m),
        "hyperplanes": hyperplanes(m),
        "cocircuits": cocircuits(m),
        "separators": separators(m),
    }


# ---------------------------------------------------------------------------
# isomorphism

def _element_invariants(s: SetSystem) -> list[tuple]:
    n = s.n
    counts = [[0] * (n + 1) for _ in range(n)]
    for x in s.indep:
        k = popcount(x)
        for e in members(x):
            counts[e][k] += 1
    loop = [(1 << e) not in s.indep for e in range(n)]
    return [(loop[e], tuple(counts[e])) for e in range(n)]


def system_invariant(s: SetSystem) -> tuple:
    sizes = [0] * (s.n + 1)
    for x in s.indep:
        sizes[popcount(x)] += 1
    return (s.n, tuple(sizes), tuple(sorted(_element_invariants(s))))


def find_isomorphism(a: SetSystem, b: SetSystem) -> list[int] | None:
    """A permutation ``p`` with ``permute(a, p) == b``, or None."""
    if system_invariant(a) != system_invariant(b):
        return None
    n = a.n
    if n == 0:
        return []
    inv_a, inv_b = _element_invariants(a), _element_invariants(b)
    # most constrained elements first
    order = sorted(range(n), key=lambda e: sum(1 for f in range(n) if inv_b[f] == inv_a[e]))
    # independent sets of a grouped by the last element in `order` they contain
    pos = {e: i for i, e in enumerate(order)}
    groups: list[list[int]] = [[] for _ in range(n)]
    for x in a.indep:
        if x:
            groups[max(pos[e] for e in members(x))].append(x)
    counts_a = []
    running = 1  # the empty set
    for i in range(n):
        running += len(groups[i])
        counts_a.append(running)
    b_sets = list(b.indep)
    img = [0] * n  # img[e] = 1 << image of e
    used = 0

    def count_b(within: int) -> int:
        return sum(1 for y in b_sets if y & ~within == 0)

    def rec(i: int, image_mask: int) -> bool:
        nonlocal used
        if i == n:
            return True
        e = order[i]
        for f in range(n):
            if used >> f & 1 or inv_b[f] != inv_a[e]:
                continue
            img[e] = 1 << f
            ok = True
            for x in groups[i]:
                y = 0
                for g in members(x):
                    y |= img[g]
                if y not in b.indep:
                    ok = False
                    break
            if ok and count_b(image_mask | (1 << f)) != counts_a[i]:
                ok = False
            if ok:
                used |= 1 << f
                if rec(i + 1, image_mask | (1 << f)):
                    return True
                used &= ~(1 << f)
        return False

    if not rec(0, 0):
        return None
    return [members(img[e])[0] for e in range(n)]


def is_isomorphic(a: SetSystem, b: SetSystem) -> bool:
    return find_isomorphism(a, b) is not None


def iso_dedup(items: Iterable[SetSystem]) -> list[SetSystem]:
    """Keep one representative per isomorphism class, preserving order."""
    buckets: dict[tuple, list[SetSystem]] = {}
    out = []
    for s in items:
        key = system_invariant(s)
        bucket = buckets.setdefault(key, [])
        if any(is_isomorphic(s, t) for t in bucket):
            continue
        bucket.append(s)
        out.append(s)
    return out


def iso_multiset_equal(xs: Sequence[SetSystem], ys: Sequence[SetSystem]) -> bool:
    """Whether the two lists agree as multisets of isomorphism classes."""
    if len(xs) != len(ys):
        return False
    pool = list(ys)
    for x in xs:
        for i, y in enumerate(pool):
            if is_isomorphic(x, y):
                del pool[i]
                break
        else:
            return False
    return True


def iso_set_equal(xs: Sequence[SetSystem], ys: Sequence[SetSystem]) -> bool:
    """Whether the two lists cover the same isomorphism classes."""
    return (all(any(is_isomorphic(x, y) for y in ys) for x in xs)
            and all(any(is_isomorphic(x, y) for x in xs) for y in ys))
