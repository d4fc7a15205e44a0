"""Backwards translation: compile a formula about transduction outputs into
one about the input.

``backtranslate(phi, t)`` returns phi^t.  For every set-system M and every
interpretation theta of the Domain variables plus the free variables of phi,
M satisfies phi^t under theta iff rho = theta restricted to the Domain
variables satisfies Domain and each theta(X) is the union of some set Y_X of
new elements such that M_rho satisfies phi under X -> Y_X.

Definition calls are lifted into new definitions (one per definition and
transduction) so a lifted formula stays proportional in size to its source.

By default the lift is the literal construction.  With ``compact=True``:

- Domain and the element-union condition of a free variable are asserted once,
  at the root, at the binder of each quantified variable and at the head of
  each lifted definition.  Below those points every repeated copy is true.
- When every new element is a singleton (NewElement has a conjunct Sing T), a
  subset of the output is the same set in the input, so Empty, Sing, Union,
  Intersection and Disjoint lift to themselves and stay visible to the
  evaluator's set-arithmetic guards.

Both forms define the same relation; the compact one is far cheaper to evaluate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .logic.formula import (
    AND, CALL, CARD, EXISTS, INDEP, MATROID, NOT, SUB, And, Call, Definition, Exists, Formula,
    FormulaError, Implies, Not, Sub, conj, definitions_used, exists_many, forall_many, fresh_name,
    has_card, substitute, Forall,
)
from .logic.evaluator import run_deep
from .transduction import Transduction
from . import stdlib


class LiftError(FormulaError):
    pass


# intrinsic set predicates that commute with an injective union map
_PRESERVED = frozenset({"Empty", "Sing", "Union", "Intersection", "Disjoint"})


def _flat_and(f: Formula) -> list[Formula]:
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if g.kind == AND:
            stack += [g.b, g.a]
        else:
            out.append(g)
    return out


def singleton_elements(t: Transduction) -> bool:
    """NewElement[T] has the conjunct Sing T."""
    return any(c.kind == CALL and c.a.intrinsic == "Sing" and c.b == (t.tvar,) for c in _flat_and(t.new_element))


@dataclass(frozen=True)
class LiftedFormula:
    source: Formula
    transduction: Transduction
    result: Formula
    zvars: tuple[str, ...]
    domain: Formula


def _all_names(f: Formula) -> set[str]:
    names = set(f.vars)
    for d in definitions_used(f):
        names |= set(d.params) | d.body.vars
    return names


class Lifter:
    """Lifting context for one transduction with its Domain variables renamed
    away from a given set of names."""

    def __init__(self, t: Transduction, avoid: set[str] | frozenset[str] = frozenset(),
                 compact: bool = False):
        t.check()
        self.t = t
        self.compact = compact
        self.singletons = compact and singleton_elements(t)
        taken = set(avoid) | {t.tvar}
        zmap = {}
        for z in t.zvars:
            nz = z if z not in taken else fresh_name(z, taken | set(zmap.values()))
            zmap[z] = nz
            taken.add(nz)
        self.zvars = tuple(zmap[z] for z in t.zvars)
        self.domain = substitute(t.domain, zmap)
        self.new_element = substitute(t.new_element, zmap)
        self.new_indep = substitute(t.new_indep, zmap)
        self.T = t.tvar
        self._zset = frozenset(self.zvars)
        self._eu: dict[str, Formula] = {}
        self._eu_core: dict[str, Formula] = {}
        self._memo: dict[Formula, Formula] = {}

    # -- pieces

    def element_union(self, v: str) -> Formula:
        """Domain ∧ ∀X((Sing X ∧ X⊆v) → ∃T(NewElement ∧ X⊆T ∧ T⊆v))."""
        hit = self._eu.get(v)
        if hit is None:
            hit = self._eu[v] = And(self.domain, self.covered(v))
        return hit

    def covered(self, v: str) -> Formula:
        """The element-union condition without the Domain conjunct."""
        hit = self._eu_core.get(v)
        if hit is not None:
            return hit
        if v in self._zset:
            raise LiftError(f"variable {v} clashes with a Domain variable")
        avoid = {v} | self._zset | self.new_element.vars
        x = "X" if "X" not in avoid else fresh_name("X", avoid)
        avoid.add(x)
        t = "T" if "T" not in avoid else fresh_name("T", avoid)
        ne = substitute(self.new_element, {self.T: t})
        out = Forall(x, Implies(And(stdlib.call("Sing", x), Sub(x, v)),
                                Exists(t, conj(ne, Sub(x, t), Sub(t, v)))))
        self._eu_core[v] = out
        return out

    def _frame(self, core: Formula, free) -> Formula:
        if self.compact:
            return core
        parts = [core, self.domain] + [self.element_union(v) for v in sorted(free)]
        return conj(*parts)

    def head(self, core: Formula, variables) -> Formula:
        """Domain and the element-union conditions in front of a compact lift."""
        return conj(self.domain, *[self.covered(v) for v in sorted(variables)], core)

    # -- recursion

    def lift(self, f: Formula) -> Formula:
        hit = self._memo.get(f)
        if hit is not None:
            return hit
        clash = f.free & self._zset
        if clash:
            raise LiftError(f"free variables {sorted(clash)} clash with Domain variables")
        k = f.kind
        if k == INDEP:
            x = f.a
            ni = substitute(self.new_indep, {self.T: x})
            out = ni if self.compact else conj(self.domain, self.element_union(x), ni)
        elif k == SUB:
            u, v = f.a, f.b
            if self.compact:
                out = f
            elif u == v:
                out = conj(self.domain, self.element_union(u), f)
            else:
                out = conj(self.domain, self.element_union(u), self.element_union(v), f)
        elif k == CARD:
            if not self.t.cms:
                raise LiftError(f"counting atom cannot be lifted through non-CMS transduction {self.t.name}")
            out = f if self.compact else conj(self.domain, self.element_union(f.a), f)
        elif k == MATROID:
            if self.t.matroid_preserving:
                out = self.domain
            else:
                out = self.lift(stdlib.call("MatroidAxioms"))
        elif k == NOT:
            out = self._frame(Not(self.lift(f.a)), f.free)
        elif k == AND:
            out = self._frame(And(self.lift(f.a), self.lift(f.b)), f.free)
        elif k == EXISTS:
            u = f.a
            if u in self._zset:
                raise LiftError(f"bound variable {u} clashes with a Domain variable")
            eu = self.covered(u) if self.compact else self.element_union(u)
            inner = And(self.lift(f.b), eu)
            out = self._frame(Exists(u, inner), f.free)
        elif k == CALL and self.singletons and f.a.intrinsic in _PRESERVED:
            out = f
        elif k == CALL:
            out = Call(self.lifted_definition(f.a), self.zvars + f.b)
        else:
            raise AssertionError(k)
        self._memo[f] = out
        return out

    def lifted_definition(self, d: Definition) -> Definition:
        key = (id(d), id(self.t), self.zvars, self.compact)
        hit = _LIFTED.get(key)
        if hit is not None:
            return hit[1]
        if set(d.params) & self._zset or d.body.vars & self._zset:
            raise LiftError(f"definition {d.name} uses a Domain variable name")
        body = self.lift(d.body)
        if self.compact:
            body = self.head(body, d.params)
        else:
            missing = [p for p in d.params if p not in d.body.free]
            if missing:
                body = conj(body, *[self.element_union(p) for p in missing])
        name = base = f"{d.name}__{self.t.name}"
        i = 1
        while name in _LIFTED_NAMES:
            i += 1
            name = f"{base}_{i}"
        _LIFTED_NAMES.add(name)
        out = Definition(name, self.zvars + d.params, body, origin=f"lift:{self.t.name}")
        # hold d and t so their ids stay valid for the lifetime of the cache
        _LIFTED[key] = ((d, self.t), out)
        return out


# lifted definitions are shared between lifts of the same (definition,
# transduction, Domain variable names), which also shares evaluator memo tables
_LIFTED: dict[tuple, tuple] = {}
_LIFTED_NAMES: set[str] = set()


def _lifter(phi: Formula, t: Transduction, compact: bool) -> Lifter:
    if has_card(phi) and not t.cms:
        raise LiftError(f"formula uses counting atoms but {t.name} is not a CMS transduction")
    avoid = _all_names(phi)
    if not t.matroid_preserving:
        avoid |= _all_names(stdlib.call("MatroidAxioms"))
    return Lifter(t, avoid, compact)


def element_union(t: Transduction, w: str = "W") -> Formula:
    """ElementUnion with free variables 𝒵 ∪ {w}: w is a union of new elements."""
    return Lifter(t, {w}).element_union(w)


def backtranslate(phi: Formula, t: Transduction, compact: bool = False) -> LiftedFormula:
    # the lifter recurses along the formula; large sentences need a deep stack
    return run_deep(_backtranslate, phi, t, compact)


def _backtranslate(phi: Formula, t: Transduction, compact: bool) -> LiftedFormula:
    lf = _lifter(phi, t, compact)
    res = lf.lift(phi)
    if compact:
        res = lf.head(res, phi.free)
    return LiftedFormula(phi, t, res, lf.zvars, lf.domain)


def lift(phi: Formula, t: Transduction, compact: bool = False) -> Formula:
    return backtranslate(phi, t, compact).result


def lift_forall(phi: Formula, t: Transduction, compact: bool = False) -> Formula:
    """∀Z1..∀Zs(Domain → phi^t): every output satisfies phi."""
    if phi.free:
        raise LiftError(f"expected a sentence, found free variables {sorted(phi.free)}")
    b = backtranslate(phi, t, compact)
    return forall_many(b.zvars, Implies(b.domain, b.result))


def lift_exists(phi: Formula, t: Transduction, compact: bool = False) -> Formula:
    """∃Z1..∃Zs(Domain ∧ phi^t): at least one output satisfies phi."""
    if phi.free:
        raise LiftError(f"expected a sentence, found free variables {sorted(phi.free)}")
    b = backtranslate(phi, t, compact)
    return exists_many(b.zvars, And(b.domain, b.result))


def prune(f: Formula) -> Formula:
    """Drop repeated conjuncts inside every conjunction chain (not inside definitions)."""
    cache: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        hit = cache.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == AND:
            parts, seen = [], set()
            stack = [g]
            while stack:
                h = stack.pop()
                if h.kind == AND:
                    stack.append(h.b)
                    stack.append(h.a)
                    continue
                h = go(h)
                if h not in seen:
                    seen.add(h)
                    parts.append(h)
            out = conj(*parts)
        elif k == NOT:
            out = Not(go(g.a))
        elif k == EXISTS:
            out = Exists(g.a, go(g.b))
        else:
            out = g
        cache[g] = out
        return out

    return go(f)
