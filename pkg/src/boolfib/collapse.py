"""When does fibring two Boolean fragments give back their joint classical logic?

``collapse_pair`` predicts the answer for two single connectives from their
truth tables, ``merge_is_classical`` answers it for connective sets whose union
is functionally complete, and ``search_discrepancy`` looks for an actual
consecution on which the fibred and the classical logic disagree.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .clones import (
    BOT,
    classify,
    completable_by_top,
    generates_top_clone,
    in_equiv_clone,
    is_functionally_complete,
)
from .fibring import FibredSystem, decide_fibred, equivalent_fibred
from .semantics import BooleanMatrix, TruthTable, entails, table_matrix, truth_table_of_term
from .syntax import (
    Application,
    Connective,
    Formula,
    Signature,
    Variable,
    apply_substitution,
    render_formula,
)


class PreconditionError(ValueError):
    """The inputs fall outside the hypotheses of the characterization."""


class VerificationError(RuntimeError):
    """A constructed object failed its own check; indicates a bug."""


class Reason(enum.Enum):
    TOP_LIKE_A = "TopLike(a)"
    TOP_LIKE_B = "TopLike(b)"
    NEITHER_VERY_SIGNIFICANT = "NeitherVerySignificant"
    EQUIV_CLONE_PLUS_BOT = "EquivClonePlusBot"
    NONE = "None"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CollapseVerdict:
    collapses: bool
    reason: Reason


def collapse_pair(t1: TruthTable, t2: TruthTable) -> CollapseVerdict:
    if t1 == t2:
        raise PreconditionError("the two connectives must be distinct")
    c1, c2 = classify(t1), classify(t2)
    if c1.top_like:
        return CollapseVerdict(True, Reason.TOP_LIKE_A)
    if c2.top_like:
        return CollapseVerdict(True, Reason.TOP_LIKE_B)
    if not c1.very_significant and not c2.very_significant:
        return CollapseVerdict(True, Reason.NEITHER_VERY_SIGNIFICANT)
    # only the nullary falsum itself, not any constant-0 function
    if (t2 == BOT and in_equiv_clone(t1)) or (t1 == BOT and in_equiv_clone(t2)):
        return CollapseVerdict(True, Reason.EQUIV_CLONE_PLUS_BOT)
    return CollapseVerdict(False, Reason.NONE)


def merge_is_classical(conn1: Iterable[TruthTable], conn2: Iterable[TruthTable]) -> bool:
    conn1, conn2 = list(conn1), list(conn2)
    if not conn1 or not conn2:
        raise PreconditionError("both connective sets must be nonempty")
    if is_functionally_complete(conn1):
        raise PreconditionError("the first connective set is already functionally complete")
    if is_functionally_complete(conn2):
        raise PreconditionError("the second connective set is already functionally complete")
    if not is_functionally_complete(conn1 + conn2):
        raise PreconditionError("the union of the connective sets is not functionally complete")
    return any(
        generates_top_clone(other) and completable_by_top(one)
        for one, other in ((conn1, conn2), (conn2, conn1))
    )


# -- discrepancy search ----------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    premises: tuple[Formula, ...]
    goal: Formula
    classical_verdict: bool
    fibred_verdict: bool

    def verify(self, sys: FibredSystem) -> bool:
        classical = entails(sys.union_matrix(), self.premises, self.goal)
        fibred = decide_fibred(sys, self.premises, self.goal)
        return (
            classical == self.classical_verdict
            and fibred == self.fibred_verdict
            and classical != fibred
        )

    def render(self) -> str:
        return render_consecution(self.premises, self.goal)


def render_consecution(premises: Sequence[Formula], goal: Formula) -> str:
    return ", ".join(render_formula(p) for p in premises) + " |- " + render_formula(goal)


def variable_pool(n: int) -> list[Variable]:
    names = "pqrstuvw"
    if n <= len(names):
        return [Variable(c) for c in names[:n]]
    return [Variable(f"p{i}") for i in range(1, n + 1)]


def formulas_by_size(sig: Signature, var_pool: int, max_depth: int, max_size: int) -> list[list[Formula]]:
    """``out[s]``: all formulas with s nodes and depth <= max_depth, in canonical order."""
    conns = list(sig)
    out: list[list[Formula]] = [[] for _ in range(max_size + 1)]
    if max_size >= 1:
        out[1] = variable_pool(var_pool) + [Application(c, ()) for c in conns if c.arity == 0]
    for s in range(2, max_size + 1):
        level = []
        for c in conns:
            k = c.arity
            if k == 0 or k > s - 1:
                continue
            for sizes in _compositions(s - 1, k):
                for args in product(*(out[z] for z in sizes)):
                    if max(a.depth() for a in args) + 1 <= max_depth:
                        level.append(Application(c, args))
        level.sort(key=render_formula)
        out[s] = level
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def _max_formula_size(sig: Signature, max_depth: int) -> int:
    k = max((c.arity for c in sig), default=0)
    if k <= 1:
        return max_depth + 1
    return (k ** (max_depth + 1) - 1) // (k - 1)


def consecutions(
    sig: Signature,
    max_depth: int,
    max_premises: int,
    var_pool: int,
    max_size: int | None = None,
) -> Iterator[tuple[tuple[Formula, ...], Formula]]:
    """All (premise set, goal) pairs within bounds.

    Ordered by total node count, then by rendered text. Premise sets are
    duplicate-free and listed in canonical order.
    """
    fmax = _max_formula_size(sig, max_depth)
    tmax = fmax * (max_premises + 1) if max_size is None else max_size
    fmax = min(fmax, tmax)
    table = formulas_by_size(sig, var_pool, max_depth, fmax)
    flat = [f for s in range(1, fmax + 1) for f in table[s]]
    for total in range(1, tmax + 1):
        batch = []
        for gsize in range(1, min(total, fmax) + 1):
            rest = total - gsize
            for n in range(0, max_premises + 1):
                for prem in _premise_sets(flat, n, rest):
                    for goal in table[gsize]:
                        batch.append((prem, goal))
        batch.sort(key=lambda c: render_consecution(*c))
        yield from batch


def _premise_sets(flat: list[Formula], n: int, total: int, start: int = 0):
    """Strictly increasing n-tuples from ``flat`` whose sizes sum to total."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for i in range(start, len(flat)):
        s = flat[i].size()
        if s * n > total:
            break  # flat is sorted by size
        for tail in _premise_sets(flat, n - 1, total - s, i + 1):
            yield (flat[i], *tail)


def search_discrepancy(
    sys: FibredSystem,
    max_depth: int,
    max_premises: int,
    var_pool: int,
    max_size: int | None = None,
) -> Witness | None:
    if min(max_depth, max_premises, var_pool) < 1:
        raise ValueError("bounds must be at least 1")
    union = sys.union_matrix()
    for prem, goal in consecutions(union.signature, max_depth, max_premises, var_pool, max_size):
        w = _compare(sys, union, prem, goal)
        if w is not None:
            return w
    return None


def _compare(sys: FibredSystem, union: BooleanMatrix, prem, goal) -> Witness | None:
    classical = entails(union, prem, goal)
    fibred = decide_fibred(sys, prem, goal)
    if classical == fibred:
        return None
    w = Witness(tuple(prem), goal, classical, fibred)
    if not w.verify(sys):
        raise VerificationError(f"witness {w.render()} does not re-verify")
    return w


def random_formula(rng: random.Random, sig: Signature, atoms: Sequence[Variable], depth: int) -> Formula:
    conns = list(sig)
    if depth == 0 or rng.random() < 0.25:
        nullary = [c for c in conns if c.arity == 0]
        pick = rng.randrange(len(atoms) + len(nullary))
        if pick < len(atoms):
            return atoms[pick]
        return Application(nullary[pick - len(atoms)], ())
    c = rng.choice(conns)
    return Application(c, [random_formula(rng, sig, atoms, depth - 1) for _ in range(c.arity)])


def random_discrepancy(
    sys: FibredSystem,
    samples: int,
    max_depth: int,
    max_premises: int,
    var_pool: int,
    seed: int = 0,
) -> Witness | None:
    """Like :func:`search_discrepancy` but over random consecutions."""
    rng = random.Random(seed)
    union = sys.union_matrix()
    atoms = variable_pool(var_pool)
    for _ in range(samples):
        n = rng.randint(0, max_premises)
        prem = tuple(random_formula(rng, union.signature, atoms, max_depth) for _ in range(n))
        goal = random_formula(rng, union.signature, atoms, max_depth)
        w = _compare(sys, union, prem, goal)
        if w is not None:
            return w
    return None


# -- non-local-tabularity families -----------------------------------------------

def find_significant_unary(t: TruthTable, conn: Connective | None = None, var: str = "p") -> Formula:
    """A compound one-variable term over ``t`` behaving as affirmation or negation."""
    cls = classify(t)
    if not cls.significant or t.arity < 1:
        raise PreconditionError("need a significant connective of arity >= 1")
    conn = conn or Connective("c", t.arity)
    p = Variable(var)
    diag = Application(conn, [p] * t.arity)
    m = BooleanMatrix({conn: t})
    phi = truth_table_of_term(m, diag, [var])
    if phi.bits in ("01", "10"):
        return diag
    k = t.arity
    if phi.bits == "11":
        # a row where the connective is 0; plug the diagonal into its 1-positions
        row = t.outputs.index(0)
        plugged = {i for i in range(1, k + 1) if (row >> (k - i)) & 1}
    else:
        row = t.outputs.index(1)
        plugged = {i for i in range(1, k + 1) if not (row >> (k - i)) & 1}
    args = [diag if i in plugged else p for i in range(1, k + 1)]
    out = Application(conn, args)
    if truth_table_of_term(m, out, [var]).bits not in ("01", "10"):
        raise VerificationError("constructed unary term is not significant")
    return out


def unary_terms(conn: Connective, var: str = "p") -> Iterator[Formula]:
    """Compound terms over one connective in one variable, by size then text."""
    p = Variable(var)
    by_size: dict[int, list[Formula]] = {1: [p]}
    size = 1
    while True:
        size += 1
        level = []
        for sizes in _compositions(size - 1, conn.arity):
            if any(z not in by_size for z in sizes):
                continue
            for args in product(*(by_size[z] for z in sizes)):
                level.append(Application(conn, args))
        level.sort(key=render_formula)
        if level:
            by_size[size] = level
        yield from level


def inequivalence_family(
    t1: TruthTable,
    t2: TruthTable,
    m: int,
    names: tuple[str, str] = ("c1", "c2"),
) -> list[Formula]:
    """m one-variable-family formulas that the fibred logic keeps pairwise apart."""
    if not classify(t1).very_significant:
        raise PreconditionError("the first connective must be very significant")
    cls2 = classify(t2)
    if cls2.top_like:
        raise PreconditionError("the second connective must not be top-like")
    if t2.arity == 0:
        raise PreconditionError("the second connective must not be falsum")
    if m < 1:
        raise PreconditionError("m must be positive")
    conn1 = Connective(names[0], t1.arity)
    conn2 = Connective(names[1], t2.arity)
    k = t1.arity
    need = m * k + 1

    psi: list[Formula] = []
    if cls2.significant:
        base = find_significant_unary(t2, conn2, "p")
        psi.append(base)
        while len(psi) < need:
            psi.append(apply_substitution({"p": psi[-1]}, base))
    else:
        gen = unary_terms(conn2, "p")
        while len(psi) < need:
            psi.append(next(gen))

    J = classify(t1).projective_components
    comps = [Variable(f"p{i}") for i in range(1, k + 1)]
    C = Application(conn1, comps)
    family = []
    for n in range(1, m + 1):
        sigma = {f"p{i}": psi[n * i] for i in range(1, k + 1) if i not in J}
        family.append(apply_substitution(sigma, C))

    sys = FibredSystem(BooleanMatrix({conn1: t1}), BooleanMatrix({conn2: t2}))
    if len(set(family)) != len(family):
        raise VerificationError("family members are not syntactically distinct")
    for f, g in combinations(family, 2):
        if equivalent_fibred(sys, f, g):
            raise VerificationError(f"{render_formula(f)} and {render_formula(g)} are equivalent")
    return family


def pair_system(t1: TruthTable, t2: TruthTable, names: tuple[str, str] = ("c1", "c2")) -> FibredSystem:
    return FibredSystem(table_matrix(t1, names[0]), table_matrix(t2, names[1]))
