"""Reader for the s-expression formula DSL and definition files."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .formula import (
    Call, Card, Definition, Eq, Exists, Forall, FormulaError, Iff, Implies, Indep,
    MatroidAtom, Neq, Not, NSub, Sub, conj, disj,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + msg)
        self.line, self.col = line, col


@dataclass
class Atom:
    text: str
    line: int
    col: int


@dataclass
class SList:
    items: list
    line: int
    col: int


SExpr = Union[Atom, SList]


def read_sexprs(text: str) -> list[SExpr]:
    """Tokenize and bracket-match; ``;`` starts a comment to end of line."""
    stack: list[SList] = [SList([], 1, 1)]
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            stack.append(SList([], line, col))
            i += 1
            col += 1
            continue
        if ch == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            stack[-1].items.append(done)
            i += 1
            col += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in "();":
            j += 1
        stack[-1].items.append(Atom(text[i:j], line, col))
        col += j - i
        i = j
    if len(stack) != 1:
        s = stack[-1]
        raise ParseError("unclosed '('", s.line, s.col)
    return stack[0].items


def _err(node: SExpr, msg: str) -> ParseError:
    return ParseError(msg, node.line, node.col)


def _var(node: SExpr) -> str:
    if not isinstance(node, Atom):
        raise _err(node, "expected a variable name")
    try:
        from .formula import check_var
        return check_var(node.text)
    except FormulaError as exc:
        raise _err(node, str(exc)) from None


def _int(node: SExpr) -> int:
    if not isinstance(node, Atom) or not node.text.isdigit():
        raise _err(node, "expected a non-negative integer")
    return int(node.text)


_ARITY = {"indep": 1, "sub": 2, "card": 3, "matroid": 0, "not": 1, "imp": 2,
          "iff": 2, "ex": 2, "all": 2, "eq": 2, "neq": 2, "nsub": 2}


def build_formula(node: SExpr, defs: Mapping[str, Definition]):
    if not isinstance(node, SList) or not node.items:
        raise _err(node, "expected a parenthesised formula")
    head = node.items[0]
    if not isinstance(head, Atom):
        raise _err(head, "expected an operator")
    op, args = head.text, node.items[1:]
    want = _ARITY.get(op)
    if want is not None and len(args) != want:
        raise _err(node, f"'{op}' takes {want} argument(s), got {len(args)}")
    try:
        if op == "indep":
            return Indep(_var(args[0]))
        if op == "sub":
            return Sub(_var(args[0]), _var(args[1]))
        if op == "nsub":
            return NSub(_var(args[0]), _var(args[1]))
        if op == "card":
            return Card(_var(args[0]), _int(args[1]), _int(args[2]))
        if op == "matroid":
            return MatroidAtom()
        if op == "not":
            return Not(build_formula(args[0], defs))
        if op in ("and", "or"):
            if len(args) < 2:
                raise _err(node, f"'{op}' takes at least two arguments")
            parts = [build_formula(a, defs) for a in args]
            return conj(*parts) if op == "and" else disj(*parts)
        if op == "imp":
            return Implies(build_formula(args[0], defs), build_formula(args[1], defs))
        if op == "iff":
            return Iff(build_formula(args[0], defs), build_formula(args[1], defs))
        if op == "ex":
            return Exists(_var(args[0]), build_formula(args[1], defs))
        if op == "all":
            return Forall(_var(args[0]), build_formula(args[1], defs))
        if op == "eq":
            return Eq(_var(args[0]), _var(args[1]))
        if op == "neq":
            return Neq(_var(args[0]), _var(args[1]))
        if op == "call":
            if not args or not isinstance(args[0], Atom):
                raise _err(node, "'call' needs a definition name")
            name = args[0].text
            d = defs.get(name)
            if d is None:
                raise _err(args[0], f"unknown definition '{name}'")
            vs = [_var(a) for a in args[1:]]
            if len(vs) != len(d.params):
                raise _err(node, f"'{name}' expects {len(d.params)} argument(s), got {len(vs)}")
            return Call(d, vs)
    except FormulaError as exc:
        raise _err(node, str(exc)) from None
    raise _err(head, f"unknown operator '{op}'")


def build_definition(node: SList, defs: Mapping[str, Definition], origin: str | None = None) -> Definition:
    items = node.items
    if len(items) != 4 or not isinstance(items[1], Atom) or not isinstance(items[2], SList):
        raise _err(node, "expected (def <name> (<v>*) <formula>)")
    name = items[1].text
    params = [_var(p) for p in items[2].items]
    body = build_formula(items[3], defs)
    try:
        return Definition(name, params, body, origin=origin)
    except FormulaError as exc:
        raise _err(node, str(exc)) from None


def _is_def(node: SExpr) -> bool:
    return isinstance(node, SList) and bool(node.items) and isinstance(node.items[0], Atom) \
        and node.items[0].text == "def"


def parse_program(text: str, defs: Mapping[str, Definition] | None = None, origin: str | None = None):
    """Parse definitions followed by at most one formula.

    Returns ``(table, formula_or_None)``; ``table`` extends ``defs`` with the
    new definitions.  A definition may only call earlier ones, so the call
    graph is acyclic by construction.
    """
    table: dict[str, Definition] = dict(defs or {})
    formula = None
    for node in read_sexprs(text):
        if formula is not None:
            raise _err(node, "nothing may follow the formula")
        if _is_def(node):
            d = build_definition(node, table, origin)
            table[d.name] = d
        else:
            formula = build_formula(node, table)
    return table, formula


def parse(text: str, defs: Mapping[str, Definition] | None = None):
    """Parse one formula (definitions may precede it)."""
    _, f = parse_program(text, defs)
    if f is None:
        raise ParseError("no formula found")
    return f


def parse_definitions(text: str, defs: Mapping[str, Definition] | None = None,
                      origin: str | None = None) -> dict[str, Definition]:
    table, f = parse_program(text, defs, origin)
    if f is not None:
        raise ParseError("definition file contains a bare formula")
    return table
