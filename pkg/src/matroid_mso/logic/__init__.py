"""Formula syntax, the DSL, and the satisfaction relation."""

from .evaluator import (
    BudgetExceeded, Evaluator, InterpretationError, default_budget, naive_satisfies, run_deep,
    satisfies, satisfying_assignments,
)
from .formula import (
    AND, CALL, CARD, EXISTS, INDEP, MATROID, NOT, SUB, And, Call, Card, Definition, Eq, Exists,
    Forall, Formula, FormulaError, Iff, Implies, Indep, MatroidAtom, Neq, Not, NSub, Or, Sub, conj,
    definitions_used, disj, exists_many, forall_many, free_vars, fresh_name, has_card, inline_calls,
    is_sentence, rename, substitute,
)
from .parser import ParseError, parse, parse_definitions, parse_program, read_sexprs
from .printer import definition_to_dsl, program_to_dsl, to_dsl

__all__ = [name for name in dir() if not name.startswith("_")]
