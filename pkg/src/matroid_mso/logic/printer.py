"""Render formulas back to the s-expression DSL.

The printer re-sugars the standard desugaring patterns; since the parser
expands sugar into exactly those patterns, ``parse(to_dsl(f)) is f``.
"""

from __future__ import annotations

from .formula import AND, CALL, CARD, EXISTS, INDEP, MATROID, NOT, SUB, Definition, Formula, definitions_used


def _is_eq(f: Formula) -> bool:
    return (f.kind == AND and f.a.kind == SUB and f.b.kind == SUB
            and f.a.a == f.b.b and f.a.b == f.b.a and f.a.a != f.a.b)


def _imp_parts(f: Formula):
    # Not(And(Not(Not a), Not b))
    if f.kind == NOT and f.a.kind == AND:
        left, right = f.a.a, f.a.b
        if left.kind == NOT and left.a.kind == NOT and right.kind == NOT:
            return left.a.a, right.a
    return None


def _or_parts(f: Formula):
    if f.kind == NOT and f.a.kind == AND and f.a.a.kind == NOT and f.a.b.kind == NOT:
        return f.a.a.a, f.a.b.a
    return None


def _iff_parts(f: Formula):
    if f.kind == AND:
        p, q = _imp_parts(f.a), _imp_parts(f.b)
        if p and q and p[0] is q[1] and p[1] is q[0]:
            return p
    return None


def to_dsl(f: Formula) -> str:
    out: list[str] = []
    _emit(f, out)
    return "".join(out)


def _emit(f: Formula, out: list[str]) -> None:
    k = f.kind
    if k == INDEP:
        out.append(f"(indep {f.a})")
    elif k == SUB:
        out.append(f"(sub {f.a} {f.b})")
    elif k == CARD:
        out.append(f"(card {f.a} {f.b} {f.c})")
    elif k == MATROID:
        out.append("(matroid)")
    elif k == CALL:
        out.append("(call " + " ".join((f.a.name,) + f.b) + ")")
    elif k == EXISTS:
        out.append(f"(ex {f.a} ")
        _emit(f.b, out)
        out.append(")")
    elif k == NOT:
        g = f.a
        if g.kind == EXISTS and g.b.kind == NOT:
            out.append(f"(all {g.a} ")
            _emit(g.b.a, out)
            out.append(")")
            return
        if _is_eq(g):
            out.append(f"(neq {g.a.a} {g.a.b})")
            return
        parts = _imp_parts(f)
        if parts:
            _binary("imp", parts, out)
            return
        parts = _or_parts(f)
        if parts:
            _binary("or", parts, out)
            return
        out.append("(not ")
        _emit(g, out)
        out.append(")")
    elif k == AND:
        if _is_eq(f):
            out.append(f"(eq {f.a.a} {f.a.b})")
            return
        parts = _iff_parts(f)
        if parts:
            _binary("iff", parts, out)
            return
        out.append("(and")
        node = f
        while node.kind == AND and not _is_eq(node) and not _iff_parts(node):
            out.append(" ")
            _emit(node.a, out)
            node = node.b
        out.append(" ")
        _emit(node, out)
        out.append(")")
    else:
        raise AssertionError(k)


def _binary(op: str, parts, out: list[str]) -> None:
    out.append(f"({op} ")
    _emit(parts[0], out)
    out.append(" ")
    _emit(parts[1], out)
    out.append(")")


def definition_to_dsl(d: Definition) -> str:
    return f"(def {d.name} ({' '.join(d.params)}) {to_dsl(d.body)})"


def program_to_dsl(f: Formula, skip: set[str] | frozenset[str] = frozenset()) -> str:
    """Definitions reachable from ``f`` (minus ``skip``) followed by ``f`` itself."""
    lines = [definition_to_dsl(d) for d in definitions_used(f) if d.name not in skip]
    lines.append(to_dsl(f))
    return "\n".join(lines) + "\n"
