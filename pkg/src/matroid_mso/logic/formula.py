"""Formula syntax: hash-consed AST nodes, definitions, variable bookkeeping.

Nodes are interned, so structurally equal formulas are the same object and
identity comparison is structural comparison.  Sugar (or, implies, forall,
equality, ...) is expanded on construction into the core connectives.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

INDEP, SUB, CARD, MATROID, NOT, AND, EXISTS, CALL = range(8)
KIND_NAMES = ("indep", "sub", "card", "matroid", "not", "and", "ex", "call")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class FormulaError(ValueError):
    """Ill-formed formula, bad arity, or a violated variable condition."""


class Definition:
    """A named formula ``name(params) := body``.

    ``intrinsic`` marks the prelude definitions that the evaluator may
    compute by direct set arithmetic instead of quantification.
    """

    __slots__ = ("name", "params", "body", "intrinsic", "origin")

    def __init__(self, name: str, params: Sequence[str], body: "Formula",
                 intrinsic: str | None = None, origin: str | None = None):
        params = tuple(params)
        if len(set(params)) != len(params):
            raise FormulaError(f"definition {name}: repeated parameter")
        for p in params:
            check_var(p)
        extra = body.free - set(params)
        if extra:
            raise FormulaError(f"definition {name}: free variables {sorted(extra)} are not parameters")
        self.name = name
        self.params = params
        self.body = body
        self.intrinsic = intrinsic
        self.origin = origin

    def __repr__(self) -> str:
        return f"Definition({self.name}/{len(self.params)})"

    def __call__(self, *args: str) -> "Formula":
        return Call(self, args)


class Formula:
    __slots__ = ("kind", "a", "b", "c", "free", "bound", "_vars", "__weakref__")

    kind: int

    def __repr__(self) -> str:
        from .printer import to_dsl
        text = to_dsl(self)
        return text if len(text) < 200 else text[:197] + "..."

    # structural helpers
    def children(self) -> tuple["Formula", ...]:
        if self.kind in (NOT, EXISTS):
            return (self.b if self.kind == EXISTS else self.a,)
        if self.kind == AND:
            return (self.a, self.b)
        return ()

    @property
    def vars(self) -> frozenset[str]:
        """Every variable name occurring in the node (free or bound)."""
        v = self._vars
        if v is None:
            v = frozenset(self.free | self.bound)
            self._vars = v
        return v

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)


_INTERN: dict[tuple, Formula] = {}


def _make(kind: int, a=None, b=None, c=None, free=frozenset(), bound=frozenset()) -> Formula:
    key = (kind, a, b, c)
    node = _INTERN.get(key)
    if node is None:
        node = object.__new__(Formula)
        node.kind = kind
        node.a, node.b, node.c = a, b, c
        node.free = free
        node.bound = bound
        node._vars = None
        _INTERN[key] = node
    return node


def check_var(v: str) -> str:
    if not isinstance(v, str) or not _IDENT.match(v):
        raise FormulaError(f"bad variable name {v!r}")
    return v


# ---------------------------------------------------------------------------
# core constructors

def Indep(x: str) -> Formula:
    check_var(x)
    return _make(INDEP, x, free=frozenset((x,)))


def Sub(x: str, y: str) -> Formula:
    check_var(x)
    check_var(y)
    return _make(SUB, x, y, free=frozenset((x, y)))


def Card(x: str, p: int, q: int) -> Formula:
    check_var(x)
    if not (isinstance(p, int) and isinstance(q, int)) or not 0 <= p < q:
        raise FormulaError(f"card atom needs 0 <= p < q, got p={p}, q={q}")
    return _make(CARD, x, p, q, free=frozenset((x,)))


def MatroidAtom() -> Formula:
    return _make(MATROID)


def Not(f: Formula) -> Formula:
    return _make(NOT, f, free=f.free, bound=f.bound)


def Exists(x: str, f: Formula) -> Formula:
    check_var(x)
    if x not in f.free:
        raise FormulaError(f"quantified variable {x} is not free in its body")
    return _make(EXISTS, x, f, free=f.free - {x}, bound=f.bound | {x})


def And(f: Formula, g: Formula) -> Formula:
    """Binary conjunction; bound variables are freshened to meet the side condition."""
    if f.free & g.bound:
        g = freshen_bound(g, f.free & g.bound, avoid=f.vars | g.vars)
    if g.free & f.bound:
        f = freshen_bound(f, g.free & f.bound, avoid=f.vars | g.vars)
    return _make(AND, f, g, free=f.free | g.free, bound=f.bound | g.bound)


def Call(defn: Definition, args: Sequence[str]) -> Formula:
    args = tuple(args)
    if len(args) != len(defn.params):
        raise FormulaError(f"{defn.name} expects {len(defn.params)} arguments, got {len(args)}")
    for v in args:
        check_var(v)
    return _make(CALL, defn, args, free=frozenset(args))


# ---------------------------------------------------------------------------
# sugar, expanded exactly as the shorthand definitions

def Or(f: Formula, g: Formula) -> Formula:
    return Not(And(Not(f), Not(g)))


def Implies(f: Formula, g: Formula) -> Formula:
    return Or(Not(f), g)


def Iff(f: Formula, g: Formula) -> Formula:
    return And(Implies(f, g), Implies(g, f))


def Forall(x: str, f: Formula) -> Formula:
    return Not(Exists(x, Not(f)))


def Eq(x: str, y: str) -> Formula:
    return And(Sub(x, y), Sub(y, x))


def Neq(x: str, y: str) -> Formula:
    return Not(Eq(x, y))


def NSub(x: str, y: str) -> Formula:
    return Not(Sub(x, y))


def conj(*fs: Formula) -> Formula:
    """Right-nested conjunction of one or more formulas."""
    if not fs:
        raise FormulaError("empty conjunction")
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        raise FormulaError("empty disjunction")
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def exists_many(xs: Iterable[str], f: Formula) -> Formula:
    for x in reversed(list(xs)):
        f = Exists(x, f)
    return f


def forall_many(xs: Iterable[str], f: Formula) -> Formula:
    for x in reversed(list(xs)):
        f = Forall(x, f)
    return f


# ---------------------------------------------------------------------------
# variable bookkeeping

def free_vars(f: Formula) -> frozenset[str]:
    return f.free


def is_sentence(f: Formula) -> bool:
    return not f.free


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    if not isinstance(avoid, (set, frozenset)):
        avoid = set(avoid)
    stem = re.sub(r"_\d+\Z", "", base)
    i = 1
    while f"{stem}_{i}" in avoid:
        i += 1
    return f"{stem}_{i}"


def substitute(f: Formula, mapping: dict[str, str]) -> Formula:
    """Simultaneous capture-avoiding replacement of free variables."""
    mapping = {k: v for k, v in mapping.items() if k in f.free and k != v}
    if not mapping:
        return f
    return _subst(f, mapping, frozenset(mapping.values()))


def _subst(f: Formula, mp: dict[str, str], targets: frozenset[str], memo: dict | None = None) -> Formula:
    if not (f.free & mp.keys()):
        return f
    if memo is None:
        memo = {}
    key = (f, tuple(sorted(mp.items())))
    hit = memo.get(key)
    if hit is not None:
        return hit
    k = f.kind
    if k == INDEP:
        out = Indep(mp.get(f.a, f.a))
    elif k == SUB:
        out = Sub(mp.get(f.a, f.a), mp.get(f.b, f.b))
    elif k == CARD:
        out = Card(mp.get(f.a, f.a), f.b, f.c)
    elif k == NOT:
        out = Not(_subst(f.a, mp, targets, memo))
    elif k == AND:
        out = And(_subst(f.a, mp, targets, memo), _subst(f.b, mp, targets, memo))
    elif k == CALL:
        out = Call(f.a, [mp.get(v, v) for v in f.b])
    elif k == EXISTS:
        x, body = f.a, f.b
        inner = {a: b for a, b in mp.items() if a != x}
        if x in targets:
            # the bound variable would capture a substituted name
            nx = fresh_name(x, body.vars | targets | set(inner) | f.free)
            body = _subst(body, {x: nx}, frozenset((nx,)))
            x = nx
        out = Exists(x, _subst(body, inner, frozenset(inner.values()), memo))
    else:
        raise AssertionError(k)
    memo[key] = out
    return out


def rename(f: Formula, x: str, z: str) -> Formula:
    """``f[x -> z]``: replace the free variable ``x`` by ``z``."""
    if x not in f.free:
        raise FormulaError(f"{x} is not free in the formula")
    return substitute(f, {x: z})


def freshen_bound(f: Formula, names: Iterable[str], avoid: Iterable[str] = ()) -> Formula:
    """Rename every binder of a variable in ``names`` to a name outside ``avoid``.

    The choice of new name depends only on the old one, so shared subformulas
    stay shared; binders renamed alike keep their original nesting.
    """
    names = frozenset(names)
    avoid = set(avoid) | f.vars
    pick = {x: fresh_name(x, avoid) for x in names}
    return _freshen(f, names, pick, {})


def _freshen(f: Formula, names: frozenset[str], pick: dict[str, str], memo: dict) -> Formula:
    if not (f.bound & names):
        return f
    hit = memo.get(f)
    if hit is not None:
        return hit
    k = f.kind
    if k == NOT:
        out = Not(_freshen(f.a, names, pick, memo))
    elif k == AND:
        out = And(_freshen(f.a, names, pick, memo), _freshen(f.b, names, pick, memo))
    elif k == EXISTS:
        x, body = f.a, _freshen(f.b, names, pick, memo)
        if x in names:
            nx = pick[x]
            body = _subst(body, {x: nx}, frozenset((nx,)))
            x = nx
        out = Exists(x, body)
    else:
        out = f
    memo[f] = out
    return out


def definitions_used(f: Formula) -> list[Definition]:
    """Definitions reachable from ``f``, dependencies first."""
    order: list[Definition] = []
    done: set[int] = set()
    visited: set[int] = set()
    # iterative post-order; formula trees can be far deeper than the recursion limit
    stack: list[tuple[Definition | None, list[Formula]]] = [(None, [f])]
    while stack:
        owner, todo = stack[-1]
        if not todo:
            stack.pop()
            if owner is not None:
                order.append(owner)
            continue
        node = todo.pop()
        if id(node) in visited:
            continue
        visited.add(id(node))
        todo.extend(reversed(node.children()))
        if node.kind == CALL and id(node.a) not in done:
            done.add(id(node.a))
            stack.append((node.a, [node.a.body]))
    return order


def inline_calls(f: Formula) -> Formula:
    """Expand every Call into its definition body (recursively)."""
    cache: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        hit = cache.get(id(node))
        if hit is not None:
            return hit
        k = node.kind
        if k == CALL:
            d, args = node.a, node.b
            # simultaneous substitution handles permuted argument lists
            out = substitute(go(d.body), dict(zip(d.params, args)))
        elif k == NOT:
            out = Not(go(node.a))
        elif k == AND:
            out = And(go(node.a), go(node.b))
        elif k == EXISTS:
            out = Exists(node.a, go(node.b))
        else:
            out = node
        cache[id(node)] = out
        return out

    return go(f)


def has_card(f: Formula) -> bool:
    """Whether a counting atom occurs in ``f`` or any definition it uses."""
    seen: set[int] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if node.kind == CARD:
            return True
        if node.kind == CALL:
            stack.append(node.a.body)
        else:
            stack.extend(node.children())
    return False


def size(f: Formula) -> int:
    """Number of nodes in the tree (Calls count as one node)."""
    total, stack = 0, [f]
    while stack:
        node = stack.pop()
        total += 1
        if node.kind in (NOT, EXISTS, AND):
            stack.extend(node.children())
    return total