"""Hilbert calculi: schematic rules, derivation checking and bounded forward search."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .semantics import FileFormatError, builtin_connective
from .syntax import (
    Application,
    Formula,
    FormulaError,
    Signature,
    Substitution,
    TokenStream,
    Variable,
    apply_substitution,
    connectives_of,
    parse_formula,
    render_formula,
    sort_key,
    subformulas,
    tokenize,
    variables,
)


class CalculusError(ValueError):
    pass


class DerivationError(ValueError):
    """A derivation node is malformed (as opposed to merely incorrect)."""

    def __init__(self, message: str, path: tuple[int, ...] = ()):
        self.path = path
        where = "root" if not path else "root/" + "/".join(map(str, path))
        super().__init__(f"{message} at node {where}")


@dataclass(frozen=True)
class InferenceRule:
    id: str
    premises: tuple[Formula, ...]
    conclusion: Formula

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    def variables(self) -> frozenset[str]:
        return variables([*self.premises, self.conclusion])

    def __str__(self):
        prem = "; ".join(render_formula(p) for p in self.premises)
        return f"{self.id} : {prem + ' ' if prem else ''}/ {render_formula(self.conclusion)}"


class HilbertCalculus:
    def __init__(self, signature: Signature, rules: Iterable[InferenceRule]):
        self.signature = signature
        self.rules: dict[str, InferenceRule] = {}
        for r in rules:
            if r.id in self.rules:
                raise CalculusError(f"duplicate rule id {r.id!r}")
            stray = [c for c in connectives_of([*r.premises, r.conclusion]) if c not in signature]
            if stray:
                raise CalculusError(f"rule {r.id} uses connectives outside the signature: {stray}")
            self.rules[r.id] = r

    def __repr__(self):
        return f"HilbertCalculus({self.signature!r}, {sorted(self.rules)})"

    def rule_ids(self) -> set[str]:
        return set(self.rules)


# -- derivation trees ---------------------------------------------------------

@dataclass(frozen=True)
class Hypothesis:
    pass


@dataclass(frozen=True)
class RuleApplication:
    rule_id: str
    substitution: Substitution
    children: tuple["DerivationTree", ...] = ()


@dataclass(frozen=True)
class DerivationTree:
    formula: Formula
    justification: Union[Hypothesis, RuleApplication] = field(default_factory=Hypothesis)

    def size(self) -> int:
        j = self.justification
        if isinstance(j, Hypothesis):
            return 1
        return 1 + sum(c.size() for c in j.children)


def hyp(f: Formula) -> DerivationTree:
    return DerivationTree(f, Hypothesis())


def step(f: Formula, rule_id: str, subst: Mapping[str, Formula], *children: DerivationTree) -> DerivationTree:
    return DerivationTree(f, RuleApplication(rule_id, Substitution(subst), tuple(children)))


def check_derivation(
    h: HilbertCalculus,
    hypotheses: Iterable[Formula],
    goal: Formula,
    tree: DerivationTree,
) -> bool:
    hyps = set(hypotheses)
    if tree.formula != goal:
        return False
    return _check_node(h, hyps, tree, ())


def _check_node(h, hyps, node: DerivationTree, path) -> bool:
    j = node.justification
    if isinstance(j, Hypothesis):
        return node.formula in hyps
    rule = h.rules.get(j.rule_id)
    if rule is None:
        return False
    needed = rule.variables()
    given = set(j.substitution.mapping)
    if needed - given:
        raise DerivationError(
            f"substitution for rule {rule.id} leaves {sorted(needed - given)} unassigned", path
        )
    if given - needed:
        raise DerivationError(
            f"substitution for rule {rule.id} assigns unknown variables {sorted(given - needed)}", path
        )
    s = j.substitution
    if apply_substitution(s, rule.conclusion) != node.formula:
        return False
    wanted = Counter(apply_substitution(s, p) for p in rule.premises)
    if wanted != Counter(c.formula for c in j.children):
        return False
    return all(_check_node(h, hyps, c, path + (i,)) for i, c in enumerate(j.children))


# -- calculus construction ----------------------------------------------------

def merge_calculi(a: HilbertCalculus, b: HilbertCalculus) -> HilbertCalculus:
    if not a.signature.isdisjoint(b.signature):
        shared = sorted(a.signature.names() & b.signature.names())
        raise CalculusError(f"signatures overlap on {shared}")
    clash = a.rule_ids() & b.rule_ids()
    if clash:
        raise CalculusError(f"rule ids used by both calculi: {sorted(clash)}")
    return HilbertCalculus(a.signature.union(b.signature), [*a.rules.values(), *b.rules.values()])


_BUILTIN_RULES = {
    "top": ["t1 : / top()"],
    "bot": ["b1 : bot() / p"],
    "not": [
        "n1 : p / not(not(p))",
        "n2 : not(not(p)) / p",
        "n3 : p; not(p) / q",
    ],
    "and": [
        "c1 : and(p, q) / p",
        "c2 : and(p, q) / q",
        "c3 : p; q / and(p, q)",
    ],
    "or": [
        "d1 : p / or(p, q)",
        "d2 : or(p, p) / p",
        "d3 : or(p, q) / or(q, p)",
        "d4 : or(p, or(q, r)) / or(or(p, q), r)",
    ],
    "imp": [
        "i1 : / imp(p, imp(q, p))",
        "i2 : / imp(imp(p, imp(q, r)), imp(imp(p, q), imp(p, r)))",
        "i3 : / imp(imp(imp(p, q), p), p)",
        "i4 : p; imp(p, q) / q",
    ],
    "eq": [
        "e1 : / eq(eq(p, eq(q, r)), eq(eq(p, q), r))",
        "e2 : / eq(eq(eq(p, r), eq(q, p)), eq(r, q))",
        "e3 : p; eq(p, q) / q",
    ],
}


def builtin_calculus(name: str) -> HilbertCalculus:
    key = "not" if name == "neg" else name
    if key not in _BUILTIN_RULES:
        raise CalculusError(f"no builtin calculus for {name!r}")
    conn, _ = builtin_connective(key)
    sig = Signature([conn])
    return HilbertCalculus(sig, [parse_rule(line, sig) for line in _BUILTIN_RULES[key]])


def parse_rule(line: str, sig: Signature) -> InferenceRule:
    """``id : premise ; premise / conclusion`` (premises may be absent)."""
    if ":" not in line:
        raise CalculusError("expected 'id : premises / conclusion'")
    rid, body = (part.strip() for part in line.split(":", 1))
    if not rid or not rid.replace("_", "a").isalnum():
        raise CalculusError(f"invalid rule id {rid!r}")
    if body.count("/") != 1:
        raise CalculusError("a rule needs exactly one '/'")
    lhs, rhs = body.split("/")
    premises = tuple(parse_formula(p, sig) for p in lhs.split(";") if p.strip()) if lhs.strip() else ()
    return InferenceRule(rid, premises, parse_formula(rhs, sig))


def parse_rule_file(text: str, sig: Signature, path: str | None = None) -> HilbertCalculus:
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rules.append(parse_rule(line, sig))
        except (CalculusError, FormulaError) as e:
            raise FileFormatError(str(e), lineno, path) from None
    used = connectives_of([f for r in rules for f in (*r.premises, r.conclusion)])
    try:
        return HilbertCalculus(Signature(used), rules)
    except CalculusError as e:
        raise FileFormatError(str(e), None, path) from None


# -- derivation files -----------------------------------------------------------

def parse_derivation(text: str, sig: Signature) -> DerivationTree:
    """Read ``(step F (hyp))`` / ``(step F (rule id v=G ...) child*)`` records."""
    ts = TokenStream(tokenize(text, extra="="), sig, strict=False)
    try:
        tree = _parse_step(ts)
        ts.take("eof")
    except FormulaError as e:
        line = text.count("\n", 0, e.position or 0) + 1 if e.position is not None else None
        raise FileFormatError(str(e), line) from None
    return tree


def _keyword(ts: TokenStream, word: str):
    tok = ts.take("ident")
    if tok[1] != word:
        raise FormulaError(f"expected {word!r}, found {tok[1]!r}", tok[2])


def _parse_step(ts: TokenStream) -> DerivationTree:
    ts.take("(")
    _keyword(ts, "step")
    f = ts.formula()
    ts.take("(")
    kind = ts.take("ident")
    if kind[1] == "hyp":
        ts.take(")")
        ts.take(")")
        return DerivationTree(f, Hypothesis())
    if kind[1] != "rule":
        raise FormulaError(f"expected 'hyp' or 'rule', found {kind[1]!r}", kind[2])
    rid = ts.take("ident")[1]
    mapping = {}
    while ts.peek()[0] == "ident":
        var = ts.take("ident")
        ts.take("=")
        if var[1] in mapping:
            raise FormulaError(f"variable {var[1]!r} assigned twice", var[2])
        mapping[var[1]] = ts.formula(True)
    ts.take(")")
    children = []
    while ts.peek()[0] == "(":
        children.append(_parse_step(ts))
    ts.take(")")
    return DerivationTree(f, RuleApplication(rid, Substitution(mapping), tuple(children)))


def render_derivation(tree: DerivationTree, indent: int = 0) -> str:
    pad = "  " * indent
    j = tree.justification
    head = f"{pad}(step {render_formula(tree.formula)} "
    if isinstance(j, Hypothesis):
        return head + "(hyp))"
    binds = "".join(
        f" {k}={render_formula(v)}" for k, v in sorted(j.substitution.mapping.items())
    )
    lines = [head + f"(rule {j.rule_id}{binds})"]
    lines += [render_derivation(c, indent + 1) for c in j.children]
    return "\n".join(lines) + ")"


# -- bounded forward chaining ----------------------------------------------------

def match(pattern: Formula, term: Formula, binding: dict[str, Formula]) -> dict[str, Formula] | None:
    """One-way matching of a rule schema against an object formula."""
    if isinstance(pattern, Variable):
        bound = binding.get(pattern.name)
        if bound is None:
            out = dict(binding)
            out[pattern.name] = term
            return out
        return binding if bound == term else None
    if not isinstance(term, Application) or term.connective != pattern.connective:
        return None
    for p, t in zip(pattern.args, term.args):
        binding = match(p, t, binding)
        if binding is None:
            return None
    return binding


def _occurrences(f: Formula, counts: Counter) -> int:
    """Count variable occurrences into ``counts``; return the number of connective nodes."""
    if isinstance(f, Variable):
        counts[f.name] += 1
        return 0
    return 1 + sum(_occurrences(a, counts) for a in f.args)


def bounded_derive(
    h: HilbertCalculus,
    hypotheses: Iterable[Formula],
    goal: Formula,
    size_bound: int,
) -> DerivationTree | None:
    """Saturate hypotheses under the rules, keeping formulas of size <= size_bound.

    Sound but incomplete: a returned tree always passes :func:`check_derivation`.
    """
    if size_bound < 1:
        raise ValueError("size_bound must be at least 1")
    hyps = sorted(set(hypotheses), key=sort_key)
    origin: dict[Formula, tuple | None] = {f: None for f in hyps}
    if goal in origin:
        return DerivationTree(goal, Hypothesis())

    rules = sorted(h.rules.values(), key=lambda r: r.id)
    shapes = {}
    for r in rules:
        counts: Counter = Counter()
        fixed = _occurrences(r.conclusion, counts)
        shapes[r.id] = (fixed, counts)

    pool = set(subformulas([*hyps, goal]))
    while True:
        pool |= subformulas(origin)
        ordered_pool = sorted((f for f in pool if f.size() <= size_bound), key=sort_key)
        derived = sorted(origin, key=sort_key)
        fresh: dict[Formula, tuple] = {}
        for rule in rules:
            fixed, counts = shapes[rule.id]
            for binding, used in _premise_matches(rule.premises, derived):
                free = sorted(v for v in counts if v not in binding)
                budget = size_bound - fixed - sum(counts[v] * binding[v].size() for v in counts if v in binding)
                if budget < sum(counts[v] for v in free):
                    continue
                for values in _bounded_choices(free, counts, ordered_pool, budget):
                    full = dict(binding)
                    full.update(zip(free, values))
                    # the rule may have premise-only variables
                    concl = apply_substitution(full, rule.conclusion)
                    if concl.size() > size_bound or concl in origin or concl in fresh:
                        continue
                    fresh[concl] = (rule, full, used)
                    if concl == goal:
                        origin.update(fresh)
                        return _build_tree(goal, origin)
        if not fresh:
            return None
        origin.update(fresh)


def _premise_matches(premises, derived):
    """All bindings matching the premises against derived formulas, in order."""
    def go(i, binding, used):
        if i == len(premises):
            yield binding, tuple(used)
            return
        for f in derived:
            b = match(premises[i], f, binding)
            if b is not None:
                yield from go(i + 1, b, used + [f])

    yield from go(0, {}, [])


def _bounded_choices(free, counts, pool, budget):
    if not free:
        yield ()
        return
    v, rest = free[0], free[1:]
    reserve = sum(counts[w] for w in rest)
    for f in pool:
        cost = counts[v] * f.size()
        if cost + reserve > budget:
            break  # pool is sorted by size
        for tail in _bounded_choices(rest, counts, pool, budget - cost):
            yield (f, *tail)


def _build_tree(f: Formula, origin) -> DerivationTree:
    src = origin[f]
    if src is None:
        return DerivationTree(f, Hypothesis())
    rule, binding, used = src
    mapping = {v: binding[v] for v in rule.variables()}
    children = tuple(_build_tree(g, origin) for g in used)
    return DerivationTree(f, RuleApplication(rule.id, Substitution(mapping), children))
