"""Transductions: (Domain, NewElement, NewIndep) triples and their application.

A transduction maps a set-system M to one derived set-system per satisfying
interpretation rho of Domain.  New elements are the subsets of E satisfying
NewElement; a set of new elements is independent when NewIndep holds of its
union.  ``library()`` holds the concrete transductions used elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from .logic.evaluator import Evaluator
from .logic.formula import (
    And, Definition, Eq, Exists, Forall, Formula, Implies, Indep, MatroidAtom, Not, NSub, Neq,
    Or, Sub, conj,
)
from .logic.parser import ParseError, _var, build_formula, read_sexprs, Atom, SList, build_definition, _is_def
from .logic.printer import to_dsl
from .setsystem import SetSystem, iso_dedup, members, popcount
from . import stdlib

DEFAULT_CAP = 16


class TransductionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Transduction:
    name: str
    domain: Formula
    new_element: Formula
    new_indep: Formula
    zvars: tuple[str, ...] = ()
    tvar: str = "T"
    cms: bool = False
    # every output is a matroid whenever Domain holds; lets lifting replace
    # the matroid atom by Domain instead of lifting the axiom sentence
    matroid_preserving: bool = False

    def __post_init__(self):
        object.__setattr__(self, "zvars", tuple(self.zvars))

    def violations(self) -> list[str]:
        return validate(self)

    def check(self) -> "Transduction":
        problems = validate(self)
        if problems:
            raise TransductionError(f"transduction {self.name}: " + "; ".join(problems))
        return self

    def to_dsl(self) -> str:
        return (f"(transduction (zvars {' '.join(self.zvars)}) (tvar {self.tvar})\n"
                f"  (domain {to_dsl(self.domain)})\n"
                f"  (new-element {to_dsl(self.new_element)})\n"
                f"  (new-indep {to_dsl(self.new_indep)})\n"
                f"  (cms {'true' if self.cms else 'false'}))\n")


def validate(t: Transduction) -> list[str]:
    """Report every violated variable condition (empty list means ok)."""
    out = []
    z, T = set(t.zvars), t.tvar
    if len(z) != len(t.zvars):
        out.append("repeated variable in zvars")
    if T in z:
        out.append(f"T variable {T} is also a Domain variable")
    if set(t.domain.free) != z:
        out.append(f"Domain free variables {sorted(t.domain.free)} differ from zvars {sorted(z)}")
    for label, f in (("NewElement", t.new_element), ("NewIndep", t.new_indep)):
        if T not in f.free:
            out.append(f"{label} does not contain {T} free")
        extra = f.free - z - {T}
        if extra:
            out.append(f"{label} has free variables {sorted(extra)} outside zvars and {T}")
    return out


@dataclass(eq=False)
class DerivedStructure:
    """One output M_rho: new elements are subsets of the base ground set."""

    base: SetSystem
    rho: dict[str, int]
    new_elements: list[int]
    system: SetSystem = field(repr=False)

    def inverse_image(self, index_set: int | Sequence[int]) -> int:
        idx = members(index_set) if isinstance(index_set, int) else list(index_set)
        out = 0
        for i in idx:
            if not 0 <= i < len(self.new_elements):
                raise IndexError(f"new element {i} out of range")
            out |= self.new_elements[i]
        return out

    def singletons(self) -> bool:
        return all(popcount(x) == 1 for x in self.new_elements)

    def manifest(self) -> dict:
        return {"rho": {k: members(v) for k, v in sorted(self.rho.items())},
                "new_elements": [members(x) for x in self.new_elements]}


# ---------------------------------------------------------------------------
# application

def _rhos(t: Transduction, m: SetSystem, ev: Evaluator):
    for vals in product(range(1 << m.n), repeat=len(t.zvars)):
        rho = dict(zip(t.zvars, vals))
        if ev.satisfies(t.domain, rho):
            yield rho


def _new_elements(t: Transduction, m: SetSystem, ev: Evaluator, rho: Mapping[str, int]) -> list[int]:
    keep = {v: rho[v] for v in t.new_element.free if v != t.tvar}
    out = []
    for F in range(1 << m.n):
        keep[t.tvar] = F
        if ev.satisfies(t.new_element, keep):
            out.append(F)
    return out  # already in bit-pattern order


def apply(t: Transduction, m: SetSystem, *, cap: int = DEFAULT_CAP, up_to_iso: bool = False,
          evaluator: Evaluator | None = None) -> list[DerivedStructure]:
    """All outputs M_rho, ordered by the rho bit-patterns."""
    t.check()
    ev = evaluator or Evaluator(m)
    outputs = []
    for rho in _rhos(t, m, ev):
        elems = _new_elements(t, m, ev, rho)
        k = len(elems)
        if k > cap:
            raise TransductionError(f"output has {k} new elements, above the cap of {cap}")
        theta = {v: rho[v] for v in t.new_indep.free if v != t.tvar}
        verdict: dict[int, bool] = {}
        indep = []
        for I in range(1 << k):
            union = 0
            for i in members(I):
                union |= elems[i]
            r = verdict.get(union)
            if r is None:
                theta[t.tvar] = union
                r = verdict[union] = ev.satisfies(t.new_indep, theta)
            if r:
                indep.append(I)
        outputs.append(DerivedStructure(m, dict(rho), elems, SetSystem(k, indep)))
    if up_to_iso:
        reps = iso_dedup(d.system for d in outputs)
        keep_ids = {id(s) for s in reps}
        outputs = [d for d in outputs if id(d.system) in keep_ids]
    return outputs


def check_cms(t: Transduction, m: SetSystem, evaluator: Evaluator | None = None) -> bool:
    """Whether every new element is a singleton for every satisfying rho on ``m``."""
    ev = evaluator or Evaluator(m)
    for rho in _rhos(t, m, ev):
        if any(popcount(x) != 1 for x in _new_elements(t, m, ev, rho)):
            return False
    return True


def inverse_image(d: DerivedStructure, index_set) -> int:
    return d.inverse_image(index_set)


# ---------------------------------------------------------------------------
# library

def _c(name, *args):
    return stdlib.call(name, *args)


def _new_in(z: str, T: str = "T") -> Formula:
    return And(Sub(T, z), _c("Sing", T))


def _indep_in(z: str, T: str = "T") -> Formula:
    return And(Sub(T, z), Indep(T))


def dual() -> Transduction:
    return Transduction("dual", MatroidAtom(), _c("Sing", "T"), _c("Coindep", "T"),
                        cms=True, matroid_preserving=True)


def simplification(domain: Formula | None = None, name: str = "simplification") -> Transduction:
    ni = Forall("C", Implies(And(Sub("C", "T"), _c("Circuit", "C")), _c("Parallel", "C")))
    return Transduction(name, domain if domain is not None else MatroidAtom(),
                        _c("ParallelClass", "T"), ni, cms=False, matroid_preserving=True)


def components() -> Transduction:
    return Transduction("components", And(MatroidAtom(), _c("Component", "Z")),
                        _new_in("Z"), _indep_in("Z"), zvars=("Z",), cms=True, matroid_preserving=True)


def _minor_domain() -> Formula:
    return conj(MatroidAtom(), Indep("Z1"), _c("Disjoint", "Z1", "Z2"))


def _minor_ne() -> Formula:
    return And(_c("Sing", "T"), Sub("T", "Z2"))


def minors() -> Transduction:
    ni = And(Sub("T", "Z2"), Forall("W", Implies(_c("Union", "T", "Z1", "W"), Indep("W"))))
    return Transduction("minors", _minor_domain(), _minor_ne(), ni, zvars=("Z1", "Z2"),
                        cms=True, matroid_preserving=True)


def proper_minors() -> Transduction:
    base = minors()
    dom = And(_minor_domain(), Exists("U", And(_c("Sing", "U"), NSub("U", "Z2"))))
    return Transduction("proper_minors", dom, base.new_element, base.new_indep, zvars=("Z1", "Z2"),
                        cms=True, matroid_preserving=True)


def restrictions() -> Transduction:
    # the dummy equality keeps Z2 free in Domain
    return Transduction("restrictions", And(MatroidAtom(), Eq("Z2", "Z2")), _minor_ne(),
                        _indep_in("Z2"), zvars=("Z2",), cms=True, matroid_preserving=True)


def relaxation() -> Transduction:
    return Transduction("relaxation", And(MatroidAtom(), _c("CircHyp", "Z1")), _c("Sing", "T"),
                        Or(Indep("T"), Eq("T", "Z1")), zvars=("Z1",), cms=True, matroid_preserving=True)


def _delete_one(pred: str, name: str) -> Transduction:
    dom = And(MatroidAtom(), Exists("W", And(_c(pred, "W"), _c("Bipartition", "W", "Z"))))
    return Transduction(name, dom, _new_in("Z"), _indep_in("Z"), zvars=("Z",), cms=True,
                        matroid_preserving=True)


def delete_coloop() -> Transduction:
    return _delete_one("Coloop", "delete_coloop")


def delete_free() -> Transduction:
    return _delete_one("Free", "delete_free")


def delete_freely_placed_circuit() -> Transduction:
    c1 = conj(
        _c("Bipartition", "Z", "C1"), _c("Circuit", "C1"), Not(_c("Spanning", "C1")), _c("Coindep", "C1"),
        Forall("W", Implies(_c("Sing", "W"), Neq("W", "C1"))),
        Forall("C2", Implies(conj(_c("Circuit", "C2"), Not(_c("Disjoint", "C1", "C2")), Neq("C1", "C2")),
                             _c("Spanning", "C2"))),
    )
    dom = And(MatroidAtom(), Exists("C1", c1))
    return Transduction("delete_freely_placed_circuit", dom, _new_in("Z"), _indep_in("Z"), zvars=("Z",),
                        cms=True, matroid_preserving=True)


_LIBRARY = {
    "dual": dual,
    "simplification": simplification,
    "components": components,
    "minors": minors,
    "proper_minors": proper_minors,
    "restrictions": restrictions,
    "relaxation": relaxation,
    "delete_coloop": delete_coloop,
    "delete_free": delete_free,
    "delete_freely_placed_circuit": delete_freely_placed_circuit,
}

_CACHE: dict[str, Transduction] = {}


def library(name: str) -> Transduction:
    if name not in _LIBRARY:
        raise KeyError(f"unknown transduction {name!r}; known: {', '.join(sorted(_LIBRARY))}")
    t = _CACHE.get(name)
    if t is None:
        t = _CACHE[name] = _LIBRARY[name]().check()
    return t


def library_names() -> list[str]:
    return list(_LIBRARY)


# ---------------------------------------------------------------------------
# transduction files

def parse_transduction(text: str, defs: Mapping[str, Definition] | None = None,
                       name: str = "file") -> Transduction:
    """Read ``(transduction (zvars ..) (tvar T) (domain f) (new-element f) (new-indep f) (cms b))``.

    Definitions may precede the form and are usable inside it.
    """
    table = dict(stdlib.prelude() if defs is None else defs)
    form = None
    for node in read_sexprs(text):
        if _is_def(node):
            d = build_definition(node, table, origin=name)
            table[d.name] = d
        elif form is None:
            form = node
        else:
            raise ParseError("only one transduction per file", node.line, node.col)
    if not isinstance(form, SList) or not form.items or not isinstance(form.items[0], Atom) \
            or form.items[0].text != "transduction":
        raise ParseError("expected a (transduction ...) form")
    parts: dict[str, SList] = {}
    for item in form.items[1:]:
        if not isinstance(item, SList) or not item.items or not isinstance(item.items[0], Atom):
            raise ParseError("malformed transduction clause", item.line, item.col)
        key = item.items[0].text
        if key in parts:
            raise ParseError(f"duplicate clause '{key}'", item.line, item.col)
        parts[key] = item
    for key in ("domain", "new-element", "new-indep"):
        if key not in parts:
            raise ParseError(f"missing clause '{key}'", form.line, form.col)
        if len(parts[key].items) != 2:
            raise ParseError(f"'{key}' takes one formula", parts[key].line, parts[key].col)
    unknown = set(parts) - {"zvars", "tvar", "domain", "new-element", "new-indep", "cms"}
    if unknown:
        raise ParseError(f"unknown clause(s) {sorted(unknown)}", form.line, form.col)
    zvars = tuple(_var(a) for a in parts["zvars"].items[1:]) if "zvars" in parts else ()
    tvar = "T"
    if "tvar" in parts:
        if len(parts["tvar"].items) != 2:
            raise ParseError("'tvar' takes one variable", parts["tvar"].line, parts["tvar"].col)
        tvar = _var(parts["tvar"].items[1])
    cms = False
    if "cms" in parts:
        flag = parts["cms"].items[1:]
        if len(flag) != 1 or not isinstance(flag[0], Atom) or flag[0].text not in ("true", "false"):
            raise ParseError("'cms' takes true or false", parts["cms"].line, parts["cms"].col)
        cms = flag[0].text == "true"
    t = Transduction(name, build_formula(parts["domain"].items[1], table),
                     build_formula(parts["new-element"].items[1], table),
                     build_formula(parts["new-indep"].items[1], table), zvars, tvar, cms)
    problems = validate(t)
    if problems:
        raise TransductionError("; ".join(problems))
    return t


def load_transduction(path_or_name: str) -> Transduction:
    """A library name, or a path to a transduction file."""
    if path_or_name in _LIBRARY:
        return library(path_or_name)
    with open(path_or_name, encoding="utf-8") as fh:
        return parse_transduction(fh.read(), name=path_or_name)
