"""Model checking of formulas on set-systems.

:class:`Evaluator` is the fast path: results of quantified sub-formulas and
definition calls are memoized per restriction of the interpretation to their
free variables, and quantifier loops are narrowed by guards found in the
quantified body.  :func:`naive_satisfies` is a direct transcription of the
satisfaction clauses with none of that machinery, kept as a reference.
"""

from __future__ import annotations

import os
import sys
import threading
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

from ..setsystem import SetSystem, is_matroid, popcount, submasks, supermasks
from .formula import AND, CALL, CARD, EXISTS, INDEP, MATROID, NOT, SUB, Formula, FormulaError

DEFAULT_BUDGET = 200_000_000
DEFAULT_MEMO_LIMIT = 6_000_000

_R = TypeVar("_R")


class BudgetExceeded(RuntimeError):
    """The evaluation needed more steps or memo entries than allowed."""


class InterpretationError(ValueError):
    pass


def default_budget() -> int:
    raw = os.environ.get("MSO_BUDGET")
    if raw:
        try:
            return int(float(raw))
        except ValueError:
            raise InterpretationError(f"MSO_BUDGET={raw!r} is not a number") from None
    return DEFAULT_BUDGET


def run_deep(fn: Callable[..., _R], *args, stack_mb: int = 1024, **kwargs) -> _R:
    """Run ``fn`` on a thread with a large stack; deeply nested formulas recurse far."""
    result: list = []
    error: list = []

    def target():
        try:
            result.append(fn(*args, **kwargs))
        except BaseException as exc:  # re-raised in the caller
            error.append(exc)

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, 400_000))
    threading.stack_size(stack_mb * 1024 * 1024)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if error:
        raise error[0]
    return result[0]


_INTRINSIC_ARITY = {"Empty": 1, "Sing": 1, "Union": 3, "Intersection": 3, "Disjoint": 2, "Bipartition": 2}


def _conjuncts(f: Formula) -> list[Formula]:
    """Flatten nested conjunctions, dropping double negations."""
    out: list[Formula] = []
    stack = [f]
    while stack:
        g = stack.pop()
        if g.kind == AND:
            stack.append(g.b)
            stack.append(g.a)
        elif g.kind == NOT and g.a.kind == NOT:
            stack.append(g.a.a)
        else:
            out.append(g)
    return out


def _cost(f: Formula) -> int:
    k = f.kind
    if k in (INDEP, SUB, CARD, MATROID):
        return 0
    if k == NOT and f.a.kind in (INDEP, SUB, CARD, MATROID):
        return 0
    if k == CALL and f.a.intrinsic:
        return 1
    if k == NOT and f.a.kind == CALL and f.a.a.intrinsic:
        return 1
    return 10 + len(f.free)


def _lookahead(parts: list[Formula]) -> list[Formula]:
    """Add the conjuncts of nested existential matrices that do not mention
    the nested bound variables.  Sound because ∃Y(A ∧ B) implies A when Y is
    not free in A; lets ∃X1∃X2(Sing X1 ∧ ...) prune at the outer level.
    Descends through any mix of ∃ and ∧, as lifted formulas alternate them."""
    out = list(parts)
    seen = set(parts)
    visited = set()
    stack = [(c.b, frozenset((c.a,))) for c in parts if c.kind == EXISTS]
    while stack:
        body, bound = stack.pop()
        if (body, bound) in visited:
            continue
        visited.add((body, bound))
        for d in _conjuncts(body):
            if d.kind == EXISTS:
                stack.append((d.b, bound | {d.a}))
            if d not in seen and not (d.free & bound):
                seen.add(d)
                out.append(d)
    return out


class _ExistsPlan:
    __slots__ = ("var", "keyvars", "memo", "consts", "filters", "sing", "sub_down", "sub_up", "cached",
                 "exact")

    def __init__(self):
        self.memo: dict = {}


class Evaluator:
    """One evaluation session over a fixed set-system.

    The memo tables live as long as the session, so reuse one evaluator for
    many formulas or interpretations on the same structure.
    """

    def __init__(self, system: SetSystem, *, memo: bool = True, singleton_guard: bool = True,
                 subset_guard: bool = True, cached_guard: bool = True, intrinsics: bool = True,
                 exact_guard: bool = True,
                 budget: int | None = None, memo_limit: int | None = None):
        self.system = system
        self.n = system.n
        self.full = system.full
        self.indep = system.indep
        self.use_memo = memo
        self.singleton_guard = singleton_guard
        self.subset_guard = subset_guard
        self.cached_guard = cached_guard and memo
        self.intrinsics = intrinsics
        self.exact_guard = exact_guard and intrinsics
        self.budget = default_budget() if budget is None else budget
        self.memo_limit = DEFAULT_MEMO_LIMIT if memo_limit is None else memo_limit
        self.steps = 0
        self.memo_entries = 0
        self._matroid: bool | None = None
        self._singletons = [1 << i for i in range(self.n)]
        self._all = list(range(1 << self.n))
        self._exists_plans: dict[Formula, _ExistsPlan] = {}
        self._and_plans: dict[Formula, list[Formula]] = {}
        self._call_memo: dict = {}
        self._guard_lists: dict = {}

    # -- public API

    def satisfies(self, f: Formula, theta: Mapping[str, int] | None = None) -> bool:
        theta = dict(theta or {})
        if set(theta) != set(f.free):
            raise InterpretationError(
                f"interpretation covers {sorted(theta)} but free variables are {sorted(f.free)}")
        for v, x in theta.items():
            if not isinstance(x, int) or x < 0 or x & ~self.full:
                raise InterpretationError(f"value of {v} is not a subset of the ground set")
        return self._ev(f, theta)

    def stats(self) -> dict:
        return {"steps": self.steps, "memo_entries": self.memo_entries,
                "exists_nodes": len(self._exists_plans), "call_tables": len(self._call_memo)}

    # -- core

    def _tick(self, k: int = 1) -> None:
        self.steps += k
        if self.steps > self.budget:
            raise BudgetExceeded(f"evaluation exceeded {self.budget} steps")

    def _store(self, table: dict, key, value) -> None:
        table[key] = value
        self.memo_entries += 1
        if self.memo_entries > self.memo_limit:
            raise BudgetExceeded(f"memo tables exceeded {self.memo_limit} entries")

    def _ev(self, f: Formula, env: dict) -> bool:
        k = f.kind
        if k == SUB:
            return env[f.a] & ~env[f.b] == 0
        if k == NOT:
            return not self._ev(f.a, env)
        if k == CALL:
            return self._call(f, env)
        if k == EXISTS:
            return self._exists(f, env)
        if k == AND:
            plan = self._and_plans.get(f)
            if plan is None:
                plan = sorted(_conjuncts(f), key=_cost)
                self._and_plans[f] = plan
            ev = self._ev
            for c in plan:
                if not ev(c, env):
                    return False
            return True
        if k == INDEP:
            return env[f.a] in self.indep
        if k == CARD:
            return popcount(env[f.a]) % f.c == f.b
        if k == MATROID:
            if self._matroid is None:
                self._matroid = is_matroid(self.system)
            return self._matroid
        raise AssertionError(k)

    def _intrinsic(self, name: str, vals: Sequence[int]) -> bool:
        if name == "Sing":
            x = vals[0]
            return x != 0 and x & (x - 1) == 0
        if name == "Empty":
            return vals[0] == 0
        if name == "Union":
            return vals[0] | vals[1] == vals[2]
        if name == "Intersection":
            return vals[0] & vals[1] == vals[2]
        if name == "Disjoint":
            return vals[0] & vals[1] == 0
        if name == "Bipartition":
            return vals[0] & vals[1] == 0 and vals[0] | vals[1] == self.full
        raise AssertionError(name)

    def _call(self, f: Formula, env: dict) -> bool:
        d = f.a
        vals = tuple([env[v] for v in f.b])
        if self.intrinsics and d.intrinsic:
            return self._intrinsic(d.intrinsic, vals)
        if not self.use_memo:
            self._tick()
            return self._ev(d.body, dict(zip(d.params, vals)))
        table = self._call_memo.get(d)
        if table is None:
            table = self._call_memo[d] = {}
        hit = table.get(vals)
        if hit is not None:
            return hit
        self._tick()
        r = self._ev(d.body, dict(zip(d.params, vals)))
        self._store(table, vals, r)
        return r

    def _plan(self, f: Formula) -> _ExistsPlan:
        p = _ExistsPlan()
        x, body = f.a, f.b
        p.var = x
        p.keyvars = tuple(sorted(f.free))
        consts, rest = [], []
        for c in _lookahead(_conjuncts(body)):
            (rest if x in c.free else consts).append(c)
        p.consts = sorted(consts, key=_cost)
        p.sing = False
        p.sub_down = []  # x <= y: candidates are subsets of y
        p.sub_up = []    # y <= x: candidates are supersets of y
        p.cached = []
        p.exact = []     # (op, a, b): the only candidate is a|b, a&b, full&~a or a itself
        filters = []
        for c in rest:
            if self.exact_guard and c.kind == CALL and c.a.intrinsic and x not in c.b[:-1]:
                op = c.a.intrinsic
                if op in ("Union", "Intersection") and c.b[2] == x:
                    p.exact.append((op, c.b[0], c.b[1]))
                elif op == "Bipartition" and c.b[1] == x:
                    p.exact.append(("Complement", c.b[0], None))
            if self.exact_guard and c.kind == CALL and c.a.intrinsic == "Bipartition" and c.b[0] == x \
                    and c.b[1] != x:
                p.exact.append(("Complement", c.b[1], None))
            if (self.singleton_guard and c.kind == CALL and c.a.intrinsic == "Sing"
                    and c.b == (x,)):
                # kept as a filter too: a cached guard list may replace the singleton source
                p.sing = True
            if self.subset_guard and c.kind == SUB and c.a != c.b:
                if c.a == x:
                    p.sub_down.append(c.b)
                    if self.exact_guard and c.b in p.sub_up:
                        p.exact.append(("Equal", c.b, None))
                elif c.b == x:
                    p.sub_up.append(c.a)
                    if self.exact_guard and c.a in p.sub_down:
                        p.exact.append(("Equal", c.a, None))
            if (self.cached_guard and c.kind in (CALL, EXISTS, NOT) and _cost(c) >= 10
                    and len(c.free) < len(body.free)):
                outer = tuple(sorted(c.free - {x}))
                p.cached.append((c, outer))
            filters.append(c)
        p.filters = sorted(filters, key=_cost)
        return p

    def _guard_list(self, c: Formula, outer: tuple, x: str, env: dict) -> list[int]:
        key = (c, tuple([env[v] for v in outer]))
        hit = self._guard_lists.get(key)
        if hit is not None:
            return hit
        saved = env.get(x)
        out = []
        ev = self._ev
        self._tick(len(self._all))
        for u in self._all:
            env[x] = u
            if ev(c, env):
                out.append(u)
        if saved is None:
            del env[x]
        else:
            env[x] = saved
        self._store(self._guard_lists, key, out)
        return out

    def _exists(self, f: Formula, env: dict) -> bool:
        plan = self._exists_plans.get(f)
        if plan is None:
            plan = self._exists_plans[f] = self._plan(f)
        if self.use_memo:
            key = tuple([env[v] for v in plan.keyvars])
            hit = plan.memo.get(key)
            if hit is not None:
                return hit
        ev = self._ev
        result = False
        for c in plan.consts:
            if not ev(c, env):
                break
        else:
            x = plan.var
            if plan.sing:
                cands: Iterable[int] = self._singletons
                size = self.n
            else:
                cands, size = self._all, 1 << self.n
            skip = None
            for c, outer in plan.cached:
                lst = self._guard_list(c, outer, x, env)
                if len(lst) < size:
                    cands, size, skip = lst, len(lst), c
            for y in plan.sub_down:
                s = 1 << popcount(env[y])
                if s < size:
                    cands, size, skip = submasks(env[y]), s, None
            for y in plan.sub_up:
                s = 1 << (self.n - popcount(env[y]))
                if s < size:
                    cands, size, skip = supermasks(env[y], self.full), s, None
            for op, a, b in plan.exact:
                if op == "Union":
                    cands = (env[a] | env[b],)
                elif op == "Intersection":
                    cands = (env[a] & env[b],)
                elif op == "Complement":
                    cands = (self.full & ~env[a],)
                else:
                    cands = (env[a],)
                size, skip = 1, None
                break
            filters = plan.filters if skip is None else [c for c in plan.filters if c is not skip]
            saved = env.get(x)
            count = 0
            try:
                for u in cands:
                    count += 1
                    env[x] = u
                    for c in filters:
                        if not ev(c, env):
                            break
                    else:
                        result = True
                        break
            finally:
                if saved is None:
                    env.pop(x, None)
                else:
                    env[x] = saved
                self._tick(count + 1)
        if self.use_memo:
            self._store(plan.memo, key, result)
        return result


# ---------------------------------------------------------------------------

def _check_theta(system: SetSystem, f: Formula, theta: Mapping[str, int]) -> None:
    if set(theta) != set(f.free):
        raise InterpretationError(
            f"interpretation covers {sorted(theta)} but free variables are {sorted(f.free)}")


def naive_satisfies(system: SetSystem, theta: Mapping[str, int], f: Formula) -> bool:
    """Reference semantics: no memo, no guards, no intrinsics."""
    _check_theta(system, f, theta)
    return _naive(system, dict(theta), f)


def _naive(m: SetSystem, theta: dict, f: Formula) -> bool:
    k = f.kind
    if k == INDEP:
        return theta[f.a] in m.indep
    if k == SUB:
        return theta[f.a] & ~theta[f.b] == 0
    if k == CARD:
        return popcount(theta[f.a]) % f.c == f.b
    if k == MATROID:
        return is_matroid(m)
    if k == NOT:
        return not _naive(m, theta, f.a)
    if k == AND:
        t1 = {v: theta[v] for v in f.a.free}
        t2 = {v: theta[v] for v in f.b.free}
        return _naive(m, t1, f.a) and _naive(m, t2, f.b)
    if k == EXISTS:
        for u in range(1 << m.n):
            t = dict(theta)
            t[f.a] = u
            if _naive(m, t, f.b):
                return True
        return False
    if k == CALL:
        d = f.a
        inner = {p: theta[a] for p, a in zip(d.params, f.b)}
        body_theta = {v: inner[v] for v in d.body.free}
        return _naive(m, body_theta, d.body)
    raise AssertionError(k)


def satisfies(m: SetSystem, theta: Mapping[str, int] | None, f: Formula, **options) -> bool:
    return Evaluator(m, **options).satisfies(f, theta or {})


def satisfying_assignments(m: SetSystem, f: Formula, variables: Sequence[str],
                           evaluator: Evaluator | None = None) -> set[tuple[int, ...]]:
    """Every tuple of subsets (ordered as ``variables``) satisfying ``f``."""
    if set(variables) != set(f.free) or len(set(variables)) != len(variables):
        raise InterpretationError(f"variables {list(variables)} do not match free variables {sorted(f.free)}")
    ev = evaluator or Evaluator(m)
    out = set()
    for vals in product(range(1 << m.n), repeat=len(variables)):
        if ev.satisfies(f, dict(zip(variables, vals))):
            out.add(vals)
    return out


def check_formula(f: Formula) -> None:
    """Raise if a Call's definition graph recurses (cannot happen via the parser)."""
    stack: list = []
    done: set[int] = set()

    def walk(node: Formula) -> None:
        if node.kind == CALL:
            d = node.a
            if id(d) in done:
                return
            if d in stack:
                raise FormulaError(f"definition {d.name} is recursive")
            stack.append(d)
            walk(d.body)
            stack.pop()
            done.add(id(d))
        for ch in node.children():
            walk(ch)

    walk(f)
