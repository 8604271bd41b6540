"""Command-line front end.

Exit status: 0 for an affirmative verdict, 1 for a negative one, 2 for usage
or input errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import clones
from .collapse import (
    PreconditionError,
    Reason,
    collapse_pair,
    merge_is_classical,
    search_discrepancy,
)
from .fibring import FibredSystem, FibringError, decide_fibred, saturate
from .hilbert import (
    CalculusError,
    DerivationError,
    Hypothesis,
    bounded_derive,
    check_derivation,
    parse_derivation,
    parse_rule_file,
    render_derivation,
)
from .semantics import (
    BUILTIN_TABLES,
    BooleanMatrix,
    FileFormatError,
    MAX_ATOMS,
    SemanticsError,
    TruthTable,
    builtin_connective,
    entails,
    is_builtin,
    parse_connective_file,
)
from .syntax import Connective, FormulaError, Signature, parse_formula, parse_formula_list, render_formula

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class SessionConfig:
    connective_files: list[str] = field(default_factory=list)
    rule_files: list[str] = field(default_factory=list)
    structured: bool = False
    depth: int = 3
    premises: int = 2
    variables: int = 3
    max_size: int | None = None

    def __post_init__(self):
        if min(self.depth, self.premises, self.variables) < 1:
            raise UsageError("bounds must be positive")
        if self.variables > MAX_ATOMS:
            raise UsageError(f"variable budget is at most {MAX_ATOMS}")


class Registry:
    """Builtin connectives plus those loaded from connective files."""

    def __init__(self, files=()):
        self.defined: dict[str, tuple[Connective, TruthTable]] = {}
        for path in files:
            text = Path(path).read_text()
            for conn, table in parse_connective_file(text, str(path)).items():
                if is_builtin(conn.name):
                    raise UsageError(f"{path}: redefinition of builtin connective {conn.name!r}")
                if conn.name in self.defined:
                    raise UsageError(f"{path}: connective {conn.name!r} already defined")
                self.defined[conn.name] = (conn, table)

    def resolve(self, name: str) -> tuple[Connective, TruthTable]:
        if is_builtin(name):
            return builtin_connective(name)
        if name in self.defined:
            return self.defined[name]
        raise UsageError(f"unknown connective {name!r}")

    def matrix(self, names: str) -> BooleanMatrix:
        parts = [n for n in re.split(r"[,\s]+", names) if n]
        if not parts:
            raise UsageError("empty connective list")
        return BooleanMatrix(dict(self.resolve(n) for n in parts))

    def signature_for(self, text: str) -> Signature:
        """Every known connective, plus thresholds mentioned in text."""
        conns = [builtin_connective(n)[0] for n in BUILTIN_TABLES]
        conns += [c for c, _ in self.defined.values()]
        for name in set(re.findall(r"\bT\d+_\d+\b", text)):
            conns.append(builtin_connective(name)[0])
        return Signature(conns)


def _formulas(text: str, sig: Signature):
    return parse_formula_list(text, sig)


def _print_record(cfg: SessionConfig, record: dict, text_lines: list[str]):
    if cfg.structured:
        print(json.dumps(record, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _profile_lines(name: str, t: TruthTable) -> list[str]:
    c = clones.classify(t)
    p = clones.post_profile(t)
    return [
        f"{name}/{t.arity} table {t.bits}",
        f"  class: {c.label()}",
        f"  top_like={c.top_like} bottom_like={c.bottom_like} "
        f"projection_conjunction={c.projection_conjunction} significant={c.significant} "
        f"very_significant={c.very_significant}",
        f"  projective components: {sorted(c.projective_components)}",
        "  post: " + " ".join(f"{k}={v}" for k, v in p.as_dict().items()),
    ]


def cmd_classify(cfg, reg: Registry, args):
    conn, t = reg.resolve(args.conn)
    c = clones.classify(t)
    record = {
        "query": {"command": "classify", "connective": conn.name},
        "verdict": c.label(),
        "classification": {
            "top_like": c.top_like,
            "bottom_like": c.bottom_like,
            "projective_components": sorted(c.projective_components),
            "projection_conjunction": c.projection_conjunction,
            "significant": c.significant,
            "very_significant": c.very_significant,
        },
        "post_profile": clones.post_profile(t).as_dict(),
    }
    return record, _profile_lines(conn.name, t), EXIT_YES


def cmd_complete(cfg, reg: Registry, args):
    names = [n for a in args.conns for n in re.split(r"[,\s]+", a) if n]
    tables = [reg.resolve(n)[1] for n in names]
    escaped = clones.escaped_clones(tables)
    complete = all(escaped.values())
    lines = [f"functionally complete: {'yes' if complete else 'no'}"]
    for clone, out in escaped.items():
        lines.append(f"  {clone}: {'escaped' if out else 'all members inside'}")
    record = {
        "query": {"command": "complete", "connectives": names},
        "verdict": complete,
        "reason": {k: ("escaped" if v else "inside") for k, v in escaped.items()},
    }
    return record, lines, EXIT_YES if complete else EXIT_NO


def cmd_entail(cfg, reg: Registry, args):
    m = reg.matrix(args.matrix)
    prem = _formulas(args.gamma, m.signature)
    goal = parse_formula(args.goal, m.signature)
    v = entails(m, prem, goal)
    record = {
        "query": {"command": "entail", "matrix": args.matrix, "premises": args.gamma, "goal": args.goal},
        "verdict": v,
    }
    return record, [f"{'entailed' if v else 'not entailed'}"], EXIT_YES if v else EXIT_NO


def _system(reg: Registry, args) -> FibredSystem:
    try:
        return FibredSystem(reg.matrix(args.a), reg.matrix(args.b))
    except FibringError as e:
        raise UsageError(str(e)) from None


def cmd_fib_entail(cfg, reg: Registry, args):
    sys_ = _system(reg, args)
    sig = sys_.union_matrix().signature
    prem = _formulas(args.gamma, sig)
    goal = parse_formula(args.goal, sig)
    v = decide_fibred(sys_, prem, goal)
    sat = sorted(render_formula(f) for f in saturate(sys_, prem).closure)
    record = {
        "query": {"command": "fib-entail", "a": args.a, "b": args.b, "premises": args.gamma, "goal": args.goal},
        "verdict": v,
        "saturation": sat,
    }
    lines = [
        f"fibred: {'entailed' if v else 'not entailed'}",
        "saturation: {" + ", ".join(sat) + "}",
    ]
    return record, lines, EXIT_YES if v else EXIT_NO


def cmd_collapse(cfg, reg: Registry, args):
    ma, mb = reg.matrix(args.a), reg.matrix(args.b)
    if not ma.signature.isdisjoint(mb.signature):
        raise UsageError("the two sides must have disjoint signatures")
    ta, tb = list(ma.tables.values()), list(mb.tables.values())
    record = {"query": {"command": "collapse", "a": args.a, "b": args.b}}
    lines = []
    classical = None
    try:
        classical = merge_is_classical(ta, tb)
    except PreconditionError as e:
        if len(ta) > 1 or len(tb) > 1:
            raise
        record["classical_note"] = str(e)

    if len(ta) == 1 and len(tb) == 1:
        v = collapse_pair(ta[0], tb[0])
        record["verdict"] = v.collapses
        record["reason"] = str(v.reason)
        reason = "TopLike" if v.reason in (Reason.TOP_LIKE_A, Reason.TOP_LIKE_B) else str(v.reason)
        head = f"collapses: {reason}" if v.collapses else "does not collapse"
        if classical:
            head += "; merged logic is full classical"
        lines.append(head)
        if v.reason in (Reason.TOP_LIKE_A, Reason.TOP_LIKE_B):
            lines.append(f"  top-like side: {v.reason.value[-2]}")
        if not v.collapses and _constant_zero_with_equiv(ta[0], tb[0]):
            note = ("constant-0 connective of positive arity paired with a member of the "
                    "biconditional clone; no prediction, try the discrepancy command")
            record["note"] = note
            lines.append("  note: " + note)
        verdict = v.collapses
    else:
        record["verdict"] = classical
        lines.append("merged logic is full classical" if classical else "merged logic is not classical")
        verdict = classical
    if classical is not None:
        record["classical"] = classical
    return record, lines, EXIT_YES if verdict else EXIT_NO


def _constant_zero_with_equiv(t1: TruthTable, t2: TruthTable) -> bool:
    def k_ary_zero(t):
        return t.arity > 0 and not any(t.outputs)

    return (k_ary_zero(t1) and clones.in_equiv_clone(t2)) or (k_ary_zero(t2) and clones.in_equiv_clone(t1))


def cmd_discrepancy(cfg, reg: Registry, args):
    sys_ = _system(reg, args)
    w = search_discrepancy(sys_, cfg.depth, cfg.premises, cfg.variables, cfg.max_size)
    record = {
        "query": {
            "command": "discrepancy", "a": args.a, "b": args.b,
            "depth": cfg.depth, "premises": cfg.premises, "variables": cfg.variables,
            "max_size": cfg.max_size,
        },
        "verdict": w is not None,
    }
    if w is None:
        return record, ["none within bounds"], EXIT_NO
    record["witness"] = {
        "premises": [render_formula(p) for p in w.premises],
        "goal": render_formula(w.goal),
        "classical": w.classical_verdict,
        "fibred": w.fibred_verdict,
    }
    lines = [
        f"witness: {w.render()}",
        f"  classical: {w.classical_verdict}  fibred: {w.fibred_verdict}",
    ]
    return record, lines, EXIT_YES


def _load_calculus(reg: Registry, path: str):
    text = Path(path).read_text()
    return parse_rule_file(text, reg.signature_for(text), path)


def cmd_check_proof(cfg, reg: Registry, args):
    calc = _load_calculus(reg, args.calculus)
    text = Path(args.derivation).read_text()
    sig = reg.signature_for(text)
    try:
        tree = parse_derivation(text, sig)
    except FileFormatError as e:
        raise UsageError(f"{args.derivation}:{str(e)}") from None
    # without --hyps the tree is checked against its own hypothesis leaves
    hyps = _formulas(args.hyps, sig) if args.hyps is not None else _leaves(tree)
    goal = parse_formula(args.goal, sig) if args.goal else tree.formula
    v = check_derivation(calc, hyps, goal, tree)
    record = {
        "query": {"command": "check-proof", "calculus": args.calculus, "derivation": args.derivation,
                  "hypotheses": sorted(render_formula(h) for h in hyps), "goal": render_formula(goal)},
        "verdict": v,
    }
    return record, ["derivation accepted" if v else "derivation rejected"], EXIT_YES if v else EXIT_NO


def _leaves(tree):
    j = tree.justification
    if isinstance(j, Hypothesis):
        return [tree.formula]
    return [f for c in j.children for f in _leaves(c)]


def cmd_derive(cfg, reg: Registry, args):
    calc = _load_calculus(reg, args.calculus)
    sig = reg.signature_for(args.gamma + " " + args.goal)
    prem = _formulas(args.gamma, sig)
    goal = parse_formula(args.goal, sig)
    tree = bounded_derive(calc, prem, goal, args.bound)
    record = {
        "query": {"command": "derive", "calculus": args.calculus, "premises": args.gamma,
                  "goal": args.goal, "bound": args.bound},
        "verdict": tree is not None,
    }
    if tree is None:
        return record, [f"no derivation found within size bound {args.bound}"], EXIT_NO
    text = render_derivation(tree)
    record["derivation"] = text
    return record, ["derivation found:", text], EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="boolfib", description=__doc__.splitlines()[0])
    ap.add_argument("--connectives", action="append", default=[], metavar="FILE",
                    help="connective definition file (name arity bitstring per line)")
    ap.add_argument("--json", action="store_true", help="emit one JSON record per query")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="taxonomy and Post profile of a connective")
    p.add_argument("conn")
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("complete", help="functional completeness of a connective set")
    p.add_argument("conns", nargs="+")
    p.set_defaults(run=cmd_complete)

    p = sub.add_parser("entail", help="truth-table consequence in one matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("gamma", help="comma-separated premises (may be empty)")
    p.add_argument("goal")
    p.set_defaults(run=cmd_entail)

    for name, fn, helptext in (
        ("fib-entail", cmd_fib_entail, "consequence in the fibring of two fragments"),
        ("collapse", cmd_collapse, "does the fibring coincide with the joint classical logic"),
        ("discrepancy", cmd_discrepancy, "search a consecution separating fibred and classical"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--a", required=True)
        p.add_argument("--b", required=True)
        if name == "fib-entail":
            p.add_argument("gamma")
            p.add_argument("goal")
        if name == "discrepancy":
            p.add_argument("--depth", type=int, default=3)
            p.add_argument("--premises", type=int, default=2)
            p.add_argument("--vars", type=int, default=3)
            p.add_argument("--max-size", type=int, default=None,
                           help="cap on the total node count of a consecution")
        p.set_defaults(run=fn)

    p = sub.add_parser("check-proof", help="check a derivation file against a rule file")
    p.add_argument("calculus")
    p.add_argument("derivation")
    p.add_argument("--hyps", default=None, help="comma-separated hypotheses (default: the tree's hypothesis leaves)")
    p.add_argument("--goal", default=None, help="expected root formula (default: the tree's root)")
    p.set_defaults(run=cmd_check_proof)

    p = sub.add_parser("derive", help="bounded forward-chaining proof search")
    p.add_argument("calculus")
    p.add_argument("gamma")
    p.add_argument("goal")
    p.add_argument("--bound", type=int, default=10)
    p.set_defaults(run=cmd_derive)
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_YES
    try:
        cfg = SessionConfig(
            connective_files=args.connectives,
            structured=args.json,
            depth=getattr(args, "depth", 3),
            premises=getattr(args, "premises", 2),
            variables=getattr(args, "vars", 3),
            max_size=getattr(args, "max_size", None),
        )
        reg = Registry(args.connectives)
        start = time.perf_counter()
        record, lines, code = args.run(cfg, reg, args)
        record["elapsed_s"] = round(time.perf_counter() - start, 6)
    except (UsageError, FileFormatError, FormulaError, SemanticsError, CalculusError,
            DerivationError, PreconditionError, FibringError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    _print_record(cfg, record, lines)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
