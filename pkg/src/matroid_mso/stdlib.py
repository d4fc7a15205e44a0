"""The named formula library and the finite-encoding generators.

The prelude definitions are read from ``stdlib.mso`` so the DSL and Python
share one source.  ``max_formula``/``min_formula`` build the max/min pattern
for any formula with a designated variable.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .logic.formula import (
    Call, Definition, Eq, Forall, Formula, FormulaError, Implies, Sub, conj, disj, fresh_name,
    rename, Neq,
)
from .logic.parser import parse_definitions
from .setsystem import members

INTRINSICS = ("Empty", "Sing", "Union", "Intersection", "Disjoint", "Bipartition")
BASIC = INTRINSICS
MATROID_PREDICATES = ("Basis", "Dep", "Circuit", "Coindep", "Codep", "Cocircuit", "Spanning",
                      "Hyperplane", "Flat", "Coflat", "Skew", "Coskew", "Separator", "Component")
EXTENSION_PREDICATES = ("Coloop", "Free", "CircHyp", "Parallel", "ParallelClass", "DisjointSum")


def prelude_text() -> str:
    return resources.files(__package__).joinpath("stdlib.mso").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def prelude() -> Mapping[str, Definition]:
    table = parse_definitions(prelude_text(), origin="prelude")
    for name in INTRINSICS:
        table[name].intrinsic = name
    return table


def get(name: str) -> Definition:
    try:
        return prelude()[name]
    except KeyError:
        raise KeyError(f"no prelude definition named {name!r}") from None


def call(name: str, *args: str) -> Formula:
    return Call(get(name), args)


def _pick(names: Mapping[str, Definition], wanted: Sequence[str]) -> dict[str, Definition]:
    return {k: names[k] for k in wanted}


def basic_set_formulas() -> dict[str, Definition]:
    return _pick(prelude(), BASIC)


def matroid_predicates() -> dict[str, Definition]:
    return _pick(prelude(), MATROID_PREDICATES)


def extension_predicates() -> dict[str, Definition]:
    return _pick(prelude(), EXTENSION_PREDICATES)


def _other(phi: Formula, x: str, y: str | None) -> str:
    if y is not None and y not in phi.vars:
        return y
    return fresh_name(y or "Y", phi.vars | {x})


def max_formula(phi: Formula, x: str, y: str | None = "Y") -> Formula:
    """φ[X] ∧ ∀Y((φ[Y] ∧ X⊆Y) → Y=X)."""
    if x not in phi.free:
        raise FormulaError(f"{x} is not free in the formula")
    y = _other(phi, x, y)
    return conj(phi, Forall(y, Implies(conj(rename(phi, x, y), Sub(x, y)), Eq(y, x))))


def min_formula(phi: Formula, x: str, y: str | None = "Y") -> Formula:
    """φ[X] ∧ ∀Y((φ[Y] ∧ Y⊆X) → Y=X)."""
    if x not in phi.free:
        raise FormulaError(f"{x} is not free in the formula")
    y = _other(phi, x, y)
    return conj(phi, Forall(y, Implies(conj(rename(phi, x, y), Sub(y, x)), Eq(y, x))))


# ---------------------------------------------------------------------------
# finite encodings: one variable per ground-set element

def element_vars(n: int, prefix: str = "X") -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def ground_set(names: Sequence[str], x: str = "X") -> Formula:
    """The named variables are distinct singletons covering every singleton."""
    parts = [call("Sing", v) for v in names]
    parts += [Neq(a, b) for i, a in enumerate(names) for b in names[i + 1:]]
    if names:
        parts.append(Forall(x, Implies(call("Sing", x), disj(*[Eq(x, v) for v in names]))))
    else:
        parts.append(Forall(x, Implies(call("Sing", x), Neq(x, x))))
    return conj(*parts)


def equal_to(u: int | Iterable[int], names: Sequence[str], x: str = "X", y: str = "Y") -> Formula:
    """X is the union of the singletons named by the members of ``u``."""
    idx = members(u) if isinstance(u, int) else sorted(u)
    parts = [Sub(names[i], x) for i in idx]
    inner = disj(*[Eq(y, names[i]) for i in idx]) if idx else Neq(y, y)
    parts.append(Forall(y, Implies(conj(call("Sing", y), Sub(y, x)), inner)))
    return conj(*parts)


def member_of(family: Iterable[int], names: Sequence[str], x: str = "X", y: str = "Y") -> Formula:
    fam = sorted(family, key=lambda m: (bin(m).count("1"), members(m)))
    if not fam:
        return Neq(x, x)
    return disj(*[equal_to(u, names, x, y) for u in fam])


def finite_encoding(n: int, family: Iterable[int] | None = None, subset: int | None = None,
                    prefix: str = "X") -> dict[str, Formula]:
    """GroundSet_E, and when requested Equal_U / Member_J, over variables X1..Xn."""
    names = element_vars(n, prefix)
    out = {"GroundSet": ground_set(names)}
    if subset is not None:
        out["Equal"] = equal_to(subset, names)
    if family is not None:
        out["Member"] = member_of(family, names)
    return out
