"""Disjoint fibring of two single-matrix two-valued logics.

Mixed consecutions are decided by saturating the premises under both
component logics and then checking the component condition selected by the
head of the goal; foreign-headed subformulas are seen by each component as
opaque skeletal variables.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .semantics import BooleanMatrix, consequences, entails, is_satisfiable
from .syntax import Formula, connectives_of, monoliths, render_formula, subformulas


class FibringError(ValueError):
    pass


@dataclass(frozen=True)
class SaturationResult:
    closure: frozenset[Formula]
    iterations: int


class FibredSystem:
    """Two boolean matrices over disjoint signatures."""

    def __init__(self, side_a: BooleanMatrix, side_b: BooleanMatrix):
        if not side_a.signature.isdisjoint(side_b.signature):
            shared = sorted(side_a.signature.names() & side_b.signature.names())
            raise FibringError(f"fibring requires disjoint signatures; shared: {shared}")
        self.side_a = side_a
        self.side_b = side_b
        # both caches are pure memoization keyed on immutable inputs
        self._sat_cache: dict[frozenset[Formula], SaturationResult] = {}
        self._verdicts: dict[tuple[frozenset[Formula], Formula], bool] = {}

    def __repr__(self):
        return f"FibredSystem({self.side_a!r}, {self.side_b!r})"

    def swapped(self) -> "FibredSystem":
        return FibredSystem(self.side_b, self.side_a)

    def union_matrix(self) -> BooleanMatrix:
        return self.side_a.merge(self.side_b)

    def check_language(self, formulas: Iterable[Formula]):
        for c in connectives_of(formulas):
            if c not in self.side_a.signature and c not in self.side_b.signature:
                raise FibringError(f"connective {c} belongs to neither component")


def saturate(sys: FibredSystem, gamma: Iterable[Formula]) -> SaturationResult:
    gamma = frozenset(gamma)
    cached = sys._sat_cache.get(gamma)
    if cached is not None:
        return cached
    sub = subformulas(gamma)
    current = set(gamma)
    iterations = 0
    while True:
        pending = [d for d in sub if d not in current]
        if not pending:
            break
        added = consequences(sys.side_a, current, pending)
        rest = [d for d in pending if d not in added]
        if rest:
            added |= consequences(sys.side_b, current, rest)
        if not added:
            break
        current |= added
        iterations += 1
    result = SaturationResult(frozenset(current), iterations)
    sys._sat_cache[gamma] = result
    return result


def is_explosive(side: BooleanMatrix, delta: Iterable[Formula]) -> bool:
    """Whether every substitution instance of delta entails everything.

    With designated set {1} this is plain unsatisfiability of the skeleton.
    """
    return not is_satisfiable(side, delta)


def decide_fibred(sys: FibredSystem, gamma: Iterable[Formula], goal: Formula) -> bool:
    gamma = frozenset(gamma)
    sys.check_language(gamma | {goal})
    return _decide(sys, gamma, goal)


def _decide(sys: FibredSystem, gamma: frozenset[Formula], goal: Formula) -> bool:
    key = (gamma, goal)
    r = sys._verdicts.get(key)
    if r is not None:
        return r
    head = goal.head
    if head is None or head in sys.side_a.signature:
        here, there = sys.side_a, sys.side_b
    else:
        here, there = sys.side_b, sys.side_a
    sat = saturate(sys, gamma).closure
    # every monolith is a proper subformula of goal, so this recursion is well-founded
    mx = [m for m in monoliths(here.signature, goal) if _decide(sys, gamma, m)]
    r = entails(here, [*sat, *mx], goal) or is_explosive(there, sat)
    sys._verdicts[key] = r
    return r


def equivalent_fibred(sys: FibredSystem, f: Formula, g: Formula) -> bool:
    return decide_fibred(sys, [f], g) and decide_fibred(sys, [g], f)


def explain(sys: FibredSystem, gamma: Iterable[Formula], goal: Formula) -> dict:
    """Verdict plus the intermediate sets, for reporting."""
    gamma = frozenset(gamma)
    verdict = decide_fibred(sys, gamma, goal)
    head = goal.head
    side = "a" if head is None or head in sys.side_a.signature else "b"
    here = sys.side_a if side == "a" else sys.side_b
    there = sys.side_b if side == "a" else sys.side_a
    sat = saturate(sys, gamma)
    mx = sorted(
        (m for m in monoliths(here.signature, goal) if decide_fibred(sys, gamma, m)),
        key=render_formula,
    )
    return {
        "verdict": verdict,
        "condition": side,
        "saturation": sorted(render_formula(f) for f in sat.closure),
        "iterations": sat.iterations,
        "mx": [render_formula(m) for m in mx],
        "explosive_other_side": is_explosive(there, sat.closure),
    }
