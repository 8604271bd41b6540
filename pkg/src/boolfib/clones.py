"""Term-function taxonomy and Post-lattice predicates on truth tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .semantics import TruthTable

TOP = TruthTable.from_bits("1")
BOT = TruthTable.from_bits("0")


@dataclass(frozen=True)
class Classification:
    top_like: bool
    bottom_like: bool
    projective_components: frozenset[int]
    projection_conjunction: bool
    significant: bool
    very_significant: bool

    def label(self) -> str:
        if self.top_like:
            return "top-like"
        if self.bottom_like:
            return "bottom-like"
        if self.projection_conjunction:
            return "projection-conjunction"
        return "very significant"


@dataclass(frozen=True)
class PostProfile:
    preserves_zero: bool
    preserves_one: bool
    monotone: bool
    affine: bool
    self_dual: bool

    def as_dict(self) -> dict[str, bool]:
        return {
            "preserves_zero": self.preserves_zero,
            "preserves_one": self.preserves_one,
            "monotone": self.monotone,
            "affine": self.affine,
            "self_dual": self.self_dual,
        }


# names of the maximal clones, keyed by the profile field they correspond to
MAXIMAL_CLONES = {
    "preserves_zero": "P0",
    "preserves_one": "P1",
    "monotone": "M",
    "affine": "A",
    "self_dual": "D",
}


def _arg(r: int, k: int, j: int) -> int:
    return (r >> (k - j)) & 1


def projective_components(t: TruthTable) -> frozenset[int]:
    """1-based indices j such that every designated row has argument j set."""
    k = t.arity
    return frozenset(
        j
        for j in range(1, k + 1)
        if all(_arg(r, k, j) for r, out in enumerate(t.outputs) if out)
    )


def classify(t: TruthTable) -> Classification:
    top = all(t.outputs)
    bottom = not any(t.outputs)
    J = projective_components(t)
    k = t.arity
    pc = all(
        out
        for r, out in enumerate(t.outputs)
        if all(_arg(r, k, j) for j in J)
    )
    significant = not top and not bottom
    return Classification(
        top_like=top,
        bottom_like=bottom,
        projective_components=J,
        projection_conjunction=pc,
        significant=significant,
        very_significant=significant and not pc,
    )


def anf(t: TruthTable) -> list[int]:
    """Coefficients of the algebraic normal form, indexed like the rows.

    Coefficient r belongs to the monomial of the arguments whose bits are set in r.
    """
    a = list(t.outputs)
    n = len(a)
    step = 1
    while step < n:
        for r in range(n):
            if r & step:
                a[r] ^= a[r ^ step]
        step <<= 1
    return a


def anf_degree(t: TruthTable) -> int:
    return max((bin(r).count("1") for r, c in enumerate(anf(t)) if c), default=0)


def is_monotone(t: TruthTable) -> bool:
    out = t.outputs
    # comparing rows that differ in a single bit suffices
    for r in range(len(out)):
        for b in range(t.arity):
            up = r | (1 << b)
            if out[r] > out[up]:
                return False
    return True


def post_profile(t: TruthTable) -> PostProfile:
    out = t.outputs
    last = len(out) - 1
    return PostProfile(
        preserves_zero=out[0] == 0,
        preserves_one=out[last] == 1,
        monotone=is_monotone(t),
        affine=anf_degree(t) <= 1,
        self_dual=all(out[r] == 1 - out[last ^ r] for r in range(len(out))),
    )


def escaped_clones(ts: Iterable[TruthTable]) -> dict[str, bool]:
    """For each maximal clone, whether some member falls outside it."""
    profiles = [post_profile(t) for t in ts]
    return {
        name: any(not getattr(p, field) for p in profiles)
        for field, name in MAXIMAL_CLONES.items()
    }


def is_functionally_complete(ts: Iterable[TruthTable]) -> bool:
    ts = list(ts)
    if not ts:
        raise ValueError("empty connective set")
    return all(escaped_clones(ts).values())


def in_equiv_clone(t: TruthTable) -> bool:
    """Membership in the clone generated by the biconditional."""
    p = post_profile(t)
    return p.affine and p.preserves_one


def generates_top_clone(ts: Iterable[TruthTable]) -> bool:
    ts = list(ts)
    if not ts:
        raise ValueError("empty connective set")
    return all(classify(t).top_like for t in ts)


def completable_by_top(ts: Iterable[TruthTable]) -> bool:
    ts = list(ts)
    if not ts:
        raise ValueError("empty connective set")
    return is_functionally_complete(ts + [TOP])
