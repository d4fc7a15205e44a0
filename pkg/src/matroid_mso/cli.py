"""Command-line entry point: ``matroid-mso <subcommand> ...``.

Exit codes: 0 for success or a true verdict, 1 for a false verdict, 2 for
any error.  ``--json`` switches to line-delimited JSON records, each with a
``"kind"`` field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import btt, classes, families, oracle, stdlib
from .logic import parser as dsl
from .logic.evaluator import BudgetExceeded, Evaluator, InterpretationError, run_deep, satisfying_assignments
from .logic.formula import FormulaError
from .logic.printer import program_to_dsl
from .setsystem import SetSystem, SetSystemError, load, mask, members, save
from .transduction import TransductionError, apply, load_transduction


class CLIError(Exception):
    pass


def _emit(args, kind: str, human: str, **fields) -> None:
    if args.json:
        print(json.dumps({"kind": kind, **fields}, sort_keys=True))
    elif human:
        print(human)


def _defs(args):
    return {} if args.no_prelude else dict(stdlib.prelude())


def _read_formula(args, source: str):
    text = open(source, encoding="utf-8").read() if os.path.exists(source) else source
    return dsl.parse(text, _defs(args))


def parse_assignment(text: str | None) -> dict[str, int]:
    """``"X=0,2;Y=;Z=1"`` → {X: {0,2}, Y: ∅, Z: {1}}."""
    out: dict[str, int] = {}
    if not text:
        return out
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise CLIError(f"bad assignment {part!r}, expected NAME=i,j,...")
        name, _, vals = part.partition("=")
        name = name.strip()
        if name in out:
            raise CLIError(f"variable {name} assigned twice")
        try:
            out[name] = mask(int(v) for v in vals.split(",") if v.strip())
        except ValueError:
            raise CLIError(f"bad element list in {part!r}") from None
    return out


def parse_params(text: str | None) -> dict[str, str]:
    out: dict[str, str] = {}
    if not text:
        return out
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, val = part.partition("=")
        if not sep:
            # values such as chord lists contain commas: glue onto the previous key
            if not out:
                raise CLIError(f"bad parameter {part!r}, expected k=v")
            last = list(out)[-1]
            out[last] += "," + part
            continue
        out[key.strip()] = val.strip()
    return out


def _evaluator(args, m: SetSystem) -> Evaluator:
    return Evaluator(m, budget=args.budget)


def _stats(args, ev: Evaluator) -> None:
    if args.stats:
        print(json.dumps({"kind": "stats", **ev.stats()}, sort_keys=True), file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands

def cmd_eval(args) -> int:
    m = load(args.structure)
    f = _read_formula(args, args.formula)
    theta = parse_assignment(args.assign)
    ev = _evaluator(args, m)
    verdict = run_deep(ev.satisfies, f, theta)
    _stats(args, ev)
    _emit(args, "verdict", "true" if verdict else "false", value=verdict)
    return 0 if verdict else 1


def cmd_sat(args) -> int:
    m = load(args.structure)
    f = _read_formula(args, args.formula)
    names = args.vars.split(",") if args.vars else sorted(f.free)
    ev = _evaluator(args, m)
    found = run_deep(satisfying_assignments, m, f, names, ev)
    _stats(args, ev)
    for vals in sorted(found):
        row = {v: members(x) for v, x in zip(names, vals)}
        text = ";".join(f"{v}={','.join(map(str, row[v]))}" for v in names)
        _emit(args, "assignment", text, assignment=row)
    _emit(args, "count", f"{len(found)} satisfying assignment(s)", value=len(found))
    return 0 if found else 1


def cmd_transduce(args) -> int:
    m = load(args.structure)
    t = load_transduction(args.transduction)
    outs = run_deep(apply, t, m, up_to_iso=args.up_to_iso)
    manifest = []
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    for i, d in enumerate(outs):
        entry = d.manifest()
        if args.out:
            fname = f"output_{i:04d}.json"
            save(d.system, os.path.join(args.out, fname))
            entry["file"] = fname
        manifest.append(entry)
        _emit(args, "output", d.system.dumps(), index=i, structure=d.system.to_json(), **entry)
    if args.out:
        with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump({"transduction": t.name, "outputs": manifest}, fh, indent=1)
            fh.write("\n")
    _emit(args, "count", f"{len(outs)} output(s)", value=len(outs))
    return 0


def cmd_lift(args) -> int:
    f = _read_formula(args, args.formula)
    t = load_transduction(args.transduction)
    compact = args.compact
    if args.mode == "raw":
        out = btt.lift(f, t, compact)
    elif args.mode == "forall":
        out = btt.lift_forall(f, t, compact)
    else:
        out = btt.lift_exists(f, t, compact)
    skip = frozenset() if args.no_prelude else frozenset(stdlib.prelude())
    text = program_to_dsl(out, skip).rstrip("\n")
    _emit(args, "formula", text, text=text, free=sorted(out.free))
    return 0


def cmd_gen(args) -> int:
    m = families.generate(args.family, parse_params(args.params))
    if args.out:
        save(m, args.out)
    _emit(args, "structure", m.dumps(), structure=m.to_json())
    return 0


def cmd_class(args) -> int:
    cs = classes.by_name(args.name, args.K)
    if args.emit:
        skip = frozenset() if args.no_prelude else frozenset(stdlib.prelude())
        text = program_to_dsl(cs.sentence, skip).rstrip("\n")
        _emit(args, "formula", text, text=text)
        if not args.structure:
            return 0
    if not args.structure:
        raise CLIError("class needs --structure (or --emit)")
    m = load(args.structure)
    ev = _evaluator(args, m)
    verdict = run_deep(ev.satisfies, cs.sentence, {})
    _stats(args, ev)
    if args.oracle:
        expected = _class_oracle(args.name, args.K, m)
        match = verdict == expected
        text = f"{str(verdict).lower()} {str(expected).lower()} {'MATCH' if match else 'MISMATCH'}"
        _emit(args, "verdict", text, value=verdict, oracle=expected, match=match)
        return 0 if match else 1
    _emit(args, "verdict", "true" if verdict else "false", value=verdict)
    return 0 if verdict else 1


def _class_oracle(name: str, k: int, m: SetSystem) -> bool:
    if name == "spike":
        return oracle.is_spike_oracle(m)
    if name == "spike-minors":
        return oracle.is_in_S_oracle(m)
    if name == "lattice-path":
        return oracle.is_lattice_path_oracle(m)
    if name in ("pn", "an", "bnk", "dn"):
        return oracle.is_family_member_oracle(name, m, k)
    raise CLIError(f"no oracle for class {name}")


def cmd_enumerate(args) -> int:
    ms = oracle.enumerate_matroids(args.n, up_to_iso=args.up_to_iso)
    files = []
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    for i, m in enumerate(ms):
        fname = f"matroid_n{args.n}_{i:04d}.json"
        if args.out:
            save(m, os.path.join(args.out, fname))
        files.append({"file": fname, "rank": m.rank(m.full), "independent_sets": len(m.indep)})
        if args.json:
            _emit(args, "structure", "", index=i, structure=m.to_json())
    if args.out:
        with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump({"n": args.n, "up_to_iso": args.up_to_iso, "count": len(ms), "files": files}, fh, indent=1)
            fh.write("\n")
    _emit(args, "count", f"{len(ms)} matroid(s) on {args.n} elements", value=len(ms))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="line-delimited JSON output")
    common.add_argument("--stats", action="store_true", help="evaluator statistics on stderr")
    common.add_argument("--no-prelude", action="store_true", help="do not load the named-formula prelude")
    common.add_argument("--budget", type=int, default=None,
                        help="evaluation step budget (default: $MSO_BUDGET or built-in)")

    p = argparse.ArgumentParser(prog="matroid-mso", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate a formula on a structure")
    s.add_argument("--structure", required=True)
    s.add_argument("--formula", required=True, help="formula file or inline DSL text")
    s.add_argument("--assign", help='assignment such as "X=0,2;Y=;Z=1"')
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("sat", parents=[common], help="list satisfying assignments")
    s.add_argument("--structure", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--vars", help="comma-separated variable order (default: sorted free variables)")
    s.set_defaults(func=cmd_sat)

    s = sub.add_parser("transduce", parents=[common], help="apply a transduction")
    s.add_argument("--structure", required=True)
    s.add_argument("--transduction", required=True, help="library name or transduction file")
    s.add_argument("--out", help="directory for output files and manifest.json")
    s.add_argument("--up-to-iso", action="store_true")
    s.set_defaults(func=cmd_transduce)

    s = sub.add_parser("lift", parents=[common], help="backwards-translate a formula")
    s.add_argument("--formula", required=True)
    s.add_argument("--transduction", required=True)
    s.add_argument("--mode", choices=("raw", "forall", "exists"), default="raw")
    s.add_argument("--compact", action="store_true",
                   help="assert Domain and element-union conditions once per binder instead of at every subformula")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("gen", parents=[common], help="generate a family member")
    s.add_argument("--family", required=True)
    s.add_argument("--params", help="k=v,... parameters")
    s.add_argument("--out", help="write the structure to this file")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("class", parents=[common], help="check membership in a definable class")
    s.add_argument("--name", required=True, choices=classes.CLASS_NAMES)
    s.add_argument("--K", type=int, default=2, help="lower bound for pn")
    s.add_argument("--structure")
    s.add_argument("--oracle", action="store_true", help="compare with the brute-force oracle")
    s.add_argument("--emit", action="store_true", help="print the class sentence in the DSL")
    s.set_defaults(func=cmd_class)

    s = sub.add_parser("enumerate", parents=[common], help="enumerate all matroids on n elements")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--up-to-iso", action="store_true")
    s.add_argument("--out", help="directory for output files and manifest.json")
    s.set_defaults(func=cmd_enumerate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (CLIError, FormulaError, InterpretationError, SetSystemError, TransductionError,
            BudgetExceeded, families.FamilyError, oracle.OracleCapExceeded, KeyError, ValueError,
            OSError, RecursionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return _fail(args, exc, str(msg))
    except Exception as exc:  # anything else is a bug, but still exit 2 without a traceback
        return _fail(args, exc, f"internal error: {exc}")


def _fail(args, exc: BaseException, msg: str) -> int:
    if getattr(args, "json", False):
        print(json.dumps({"kind": "error", "type": type(exc).__name__, "message": msg}))
    else:
        print(f"error: {msg}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
