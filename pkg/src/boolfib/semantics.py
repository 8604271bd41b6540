"""Two-valued matrix semantics: truth tables, valuations and brute-force consequence.

Truth values are 0 and 1 with 1 the only designated value. Rows of a k-ary
table are numbered 0 .. 2**k - 1 and argument i (1-based) of row r is bit
``k - i`` of r, so the first argument is the most significant bit.

Consequence is decided bit-parallel: every atom gets an integer whose bit r is
its value under valuation r, and each formula is evaluated once over all
2**n valuations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Mapping

from .syntax import (
    Application,
    Connective,
    Formula,
    Signature,
    SkeletalVariable,
    Variable,
    atoms,
    skeleton,
    sort_key,
    variables,
)

MAX_ATOMS = 24


class VariableBudgetError(ValueError):
    """Too many distinct (skeletal) variables for exhaustive enumeration."""


class SemanticsError(ValueError):
    pass


@dataclass(frozen=True)
class TruthTable:
    arity: int
    outputs: tuple[int, ...]

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError("arity must be non-negative")
        if len(self.outputs) != 1 << self.arity:
            raise ValueError(
                f"a {self.arity}-ary table needs {1 << self.arity} outputs, got {len(self.outputs)}"
            )
        if any(b not in (0, 1) for b in self.outputs):
            raise ValueError("outputs must be bits")

    @classmethod
    def from_bits(cls, bits: str, arity: int | None = None) -> "TruthTable":
        if not re.fullmatch(r"[01]+", bits):
            raise ValueError(f"not a bitstring: {bits!r}")
        n = len(bits)
        k = n.bit_length() - 1
        if 1 << k != n:
            raise ValueError(f"bitstring length {n} is not a power of two")
        if arity is not None and arity != k:
            raise ValueError(f"bitstring length {n} does not match arity {arity}")
        return cls(k, tuple(int(c) for c in bits))

    @classmethod
    def from_function(cls, arity: int, fn: Callable[..., int]) -> "TruthTable":
        return cls(arity, tuple(int(bool(fn(*row))) for row in rows(arity)))

    @property
    def bits(self) -> str:
        return "".join(map(str, self.outputs))

    def __call__(self, *args: int) -> int:
        return self.outputs[row_index(args)]

    def __str__(self):
        return self.bits


def rows(arity: int) -> list[tuple[int, ...]]:
    """Argument tuples in row order."""
    return list(product((0, 1), repeat=arity))


def row_index(args: Iterable[int]) -> int:
    r = 0
    for a in args:
        r = (r << 1) | a
    return r


class BooleanMatrix:
    """A signature together with a truth table for each of its connectives."""

    def __init__(self, tables: Mapping[Connective, TruthTable]):
        for c, t in tables.items():
            if c.arity != t.arity:
                raise ValueError(f"table arity {t.arity} does not match {c}")
        self.tables = dict(tables)
        self.signature = Signature(self.tables)
        self._ops = {c: compile_table(t) for c, t in self.tables.items()}

    def __repr__(self):
        return "BooleanMatrix(" + ", ".join(f"{c.name}:{t.bits}" for c, t in sorted(self.tables.items())) + ")"

    def __eq__(self, other):
        return isinstance(other, BooleanMatrix) and self.tables == other.tables

    def __hash__(self):
        return hash(frozenset(self.tables.items()))

    def table(self, conn: Connective | str) -> TruthTable:
        if isinstance(conn, str):
            c = self.signature.get(conn)
            if c is None:
                raise SemanticsError(f"unknown connective {conn!r}")
            conn = c
        return self.tables[conn]

    def merge(self, other: "BooleanMatrix") -> "BooleanMatrix":
        if not self.signature.isdisjoint(other.signature):
            shared = sorted(self.signature.names() & other.signature.names())
            raise SemanticsError(f"signatures overlap on {shared}")
        return BooleanMatrix({**self.tables, **other.tables})


# -- bit-parallel evaluation -------------------------------------------------

def compile_table(t: TruthTable) -> Callable[[int, tuple[int, ...]], int]:
    """Turn a table into an operation on valuation masks: op(full, args)."""
    bits = t.bits
    special = _SPECIAL.get(bits)
    if special is not None:
        return special
    ones = [r for r, b in enumerate(t.outputs) if b]
    k = t.arity

    def op(full, args):
        out = 0
        for r in ones:
            m = full
            for i, a in enumerate(args):
                m &= a if (r >> (k - 1 - i)) & 1 else full ^ a
                if not m:
                    break
            out |= m
        return out

    return op


_SPECIAL = {
    "0": lambda full, a: 0,
    "1": lambda full, a: full,
    "01": lambda full, a: a[0],
    "10": lambda full, a: full ^ a[0],
    "0001": lambda full, a: a[0] & a[1],
    "0111": lambda full, a: a[0] | a[1],
    "1101": lambda full, a: full ^ (a[0] & (full ^ a[1])),
    "1001": lambda full, a: full ^ a[0] ^ a[1],
    "0110": lambda full, a: a[0] ^ a[1],
    "0010": lambda full, a: a[0] & (full ^ a[1]),
    "0000": lambda full, a: 0,
    "1111": lambda full, a: full,
}


@lru_cache(maxsize=None)
def atom_mask(n: int, shift: int) -> int:
    """Mask over 2**n rows whose bit r is bit ``shift`` of r."""
    half = 1 << shift
    period = half << 1
    full = (1 << (1 << n)) - 1
    repunit = full // ((1 << period) - 1)
    return repunit * (((1 << half) - 1) << half)


class _Evaluator:
    def __init__(self, matrix: BooleanMatrix, assignment: Mapping[Formula, int], full: int):
        self.ops = matrix._ops
        self.memo = dict(assignment)
        self.full = full

    def __call__(self, f: Formula) -> int:
        r = self.memo.get(f)
        if r is not None:
            return r
        if not isinstance(f, Application):
            raise SemanticsError(f"unassigned variable {f}")
        op = self.ops.get(f.connective)
        if op is None:
            raise SemanticsError(f"unknown connective {f.connective}")
        r = op(self.full, tuple(self(a) for a in f.args))
        self.memo[f] = r
        return r


def _instance_masks(m: BooleanMatrix, formulas: list[Formula]):
    """Skeletonize formulas w.r.t. m and evaluate them over all valuations."""
    skels = [skeleton(m.signature, f) for f in formulas]
    atom_list = sorted(atoms(skels), key=sort_key)
    n = len(atom_list)
    if n > MAX_ATOMS:
        raise VariableBudgetError(f"{n} distinct variables exceed the budget of {MAX_ATOMS}")
    full = (1 << (1 << n)) - 1
    ev = _Evaluator(m, {a: atom_mask(n, i) for i, a in enumerate(atom_list)}, full)
    return [ev(f) for f in skels], full


def entails(m: BooleanMatrix, premises: Iterable[Formula], goal: Formula) -> bool:
    premises = list(premises)
    masks, full = _instance_masks(m, premises + [goal])
    sat = full
    for x in masks[:-1]:
        sat &= x
    return sat & ~masks[-1] == 0


def consequences(m: BooleanMatrix, premises: Iterable[Formula], candidates: Iterable[Formula]) -> set[Formula]:
    """The candidates entailed by the premises, sharing one enumeration."""
    premises = list(premises)
    candidates = list(candidates)
    masks, full = _instance_masks(m, premises + candidates)
    sat = full
    for x in masks[: len(premises)]:
        sat &= x
    return {c for c, x in zip(candidates, masks[len(premises):]) if sat & ~x == 0}


def is_satisfiable(m: BooleanMatrix, formulas: Iterable[Formula]) -> bool:
    formulas = list(formulas)
    if not formulas:
        return True
    masks, full = _instance_masks(m, formulas)
    sat = full
    for x in masks:
        sat &= x
    return sat != 0


def eval_formula(m: BooleanMatrix, v: Mapping, f: Formula) -> int:
    """Value of f under v; v may be keyed by variable names or atoms."""
    assignment: dict[Formula, int] = {}
    for k, b in v.items():
        atom = Variable(k) if isinstance(k, str) else k
        assignment[atom] = 1 if b else 0
    return _Evaluator(m, assignment, 1)(f)


def truth_table_of_term(m: BooleanMatrix, f: Formula, params: list[str]) -> TruthTable:
    if any(isinstance(a, SkeletalVariable) for a in atoms(f)):
        raise SemanticsError("term contains skeletal variables")
    free = variables(f) - set(params)
    if free:
        raise SemanticsError(f"free variable(s) outside parameters: {sorted(free)}")
    k = len(params)
    if k > MAX_ATOMS:
        raise VariableBudgetError(f"{k} parameters exceed the budget of {MAX_ATOMS}")
    full = (1 << (1 << k)) - 1
    # parameter i (0-based) is bit k-1-i of the row number
    ev = _Evaluator(m, {Variable(p): atom_mask(k, k - 1 - i) for i, p in enumerate(params)}, full)
    mask = ev(f)
    return TruthTable(k, tuple((mask >> r) & 1 for r in range(1 << k)))


# -- builtin connectives -------------------------------------------------------

def threshold_table(n: int, k: int) -> TruthTable:
    """T(n,k): 1 iff at least k of the n arguments are 1."""
    if not (0 <= k <= n):
        raise SemanticsError(f"invalid threshold parameters T({n},{k}): need n >= k >= 0")
    return TruthTable.from_function(n, lambda *xs: sum(xs) >= k)


BUILTIN_TABLES: dict[str, TruthTable] = {
    "top": TruthTable.from_bits("1"),
    "bot": TruthTable.from_bits("0"),
    "not": TruthTable.from_bits("10"),
    "and": TruthTable.from_bits("0001"),
    "or": TruthTable.from_bits("0111"),
    "imp": TruthTable.from_bits("1101"),
    "eq": TruthTable.from_bits("1001"),
    "nimp": TruthTable.from_bits("0010"),
    "xor": TruthTable.from_bits("0110"),
    "ite": TruthTable.from_function(3, lambda p, q, r: q if p else r),
    # ternary connectives from the list of minimal very significant clones
    "or_and": TruthTable.from_function(3, lambda p, q, r: p or (q and r)),
    "or_xor": TruthTable.from_function(3, lambda p, q, r: p or (q ^ r)),
    "and_or": TruthTable.from_function(3, lambda p, q, r: p and (q or r)),
    "and_imp": TruthTable.from_function(3, lambda p, q, r: p and ((not q) or r)),
    "xor3": TruthTable.from_function(3, lambda p, q, r: p ^ q ^ r),
}

ALIASES = {"neg": "not"}

_THRESHOLD = re.compile(r"T\(?\s*(\d+)\s*[,_]\s*(\d+)\s*\)?")


def builtin_names() -> list[str]:
    return list(BUILTIN_TABLES)


def is_builtin(name: str) -> bool:
    try:
        builtin_connective(name)
    except SemanticsError:
        return False
    return True


def builtin_connective(name: str) -> tuple[Connective, TruthTable]:
    """Resolve a builtin name (``and``, ``neg``, ``T(3,2)``, ``T3_2``...)."""
    name = ALIASES.get(name, name)
    t = BUILTIN_TABLES.get(name)
    if t is not None:
        return Connective(name, t.arity), t
    m = _THRESHOLD.fullmatch(name)
    if m:
        n, k = int(m.group(1)), int(m.group(2))
        return Connective(f"T{n}_{k}", n), threshold_table(n, k)
    raise SemanticsError(f"unknown builtin connective {name!r}")


def builtin_matrix(names: Iterable[str]) -> BooleanMatrix:
    return BooleanMatrix(dict(builtin_connective(n) for n in names))


def single_matrix(conn: Connective, table: TruthTable) -> BooleanMatrix:
    return BooleanMatrix({conn: table})


def table_matrix(table: TruthTable, name: str = "c") -> BooleanMatrix:
    """The matrix of one anonymous connective with the given table."""
    return BooleanMatrix({Connective(name, table.arity): table})


# -- connective definition files --------------------------------------------

class FileFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line


def parse_connective_file(text: str, path: str | None = None) -> dict[Connective, TruthTable]:
    """Read ``name arity bitstring`` lines; ``#`` starts a comment."""
    out: dict[Connective, TruthTable] = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError("expected 'name arity bitstring'", lineno, path)
        name, arity_s, bits = parts
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise FileFormatError(f"invalid connective name {name!r}", lineno, path)
        if not arity_s.isdigit():
            raise FileFormatError(f"invalid arity {arity_s!r}", lineno, path)
        arity = int(arity_s)
        try:
            table = TruthTable.from_bits(bits, arity)
        except ValueError as e:
            raise FileFormatError(str(e), lineno, path) from None
        if name in seen:
            raise FileFormatError(f"connective {name!r} defined twice", lineno, path)
        seen.add(name)
        out[Connective(name, arity)] = table
    return out


def render_connective_file(tables: Mapping[Connective, TruthTable]) -> str:
    return "".join(f"{c.name} {c.arity} {t.bits}\n" for c, t in sorted(tables.items()))
