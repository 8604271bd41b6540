"""Formulas, signatures, parsing/rendering, substitution, monoliths and skeletons."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class FormulaError(ValueError):
    """Raised on malformed formula text or ill-typed applications."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class Connective:
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name!r}")

    def __str__(self):
        return f"{self.name}/{self.arity}"


class Signature:
    """A finite set of connectives with unique names."""

    __slots__ = ("_by_name",)

    def __init__(self, connectives: Iterable[Connective] = ()):
        by_name: dict[str, Connective] = {}
        for c in connectives:
            prev = by_name.get(c.name)
            if prev is not None and prev != c:
                raise ValueError(f"connective {c.name!r} declared twice with different arities")
            by_name[c.name] = c
        self._by_name = by_name

    def __contains__(self, item) -> bool:
        if isinstance(item, Connective):
            return self._by_name.get(item.name) == item
        return item in self._by_name

    def __iter__(self) -> Iterator[Connective]:
        return iter(sorted(self._by_name.values()))

    def __len__(self):
        return len(self._by_name)

    def __eq__(self, other):
        return isinstance(other, Signature) and self._by_name == other._by_name

    def __hash__(self):
        return hash(frozenset(self._by_name.values()))

    def __repr__(self):
        return "Signature({" + ", ".join(str(c) for c in self) + "})"

    def get(self, name: str) -> Connective | None:
        return self._by_name.get(name)

    def names(self) -> frozenset[str]:
        return frozenset(self._by_name)

    def union(self, other: "Signature") -> "Signature":
        return Signature([*self, *other])

    def isdisjoint(self, other: "Signature") -> bool:
        return self._by_name.keys().isdisjoint(other._by_name.keys())


# Formula nodes. Hashes are computed once at construction since formulas are
# used heavily as set members and dict keys.

class Formula:
    __slots__ = ("_hash",)

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    @property
    def head(self) -> Connective | None:
        return None

    def size(self) -> int:
        raise NotImplementedError

    def depth(self) -> int:
        raise NotImplementedError

    def __hash__(self):
        return self._hash

    def __str__(self):
        return render_formula(self)

    def __lt__(self, other: "Formula"):
        return sort_key(self) < sort_key(other)


class Variable(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("v", name)))

    def __eq__(self, other):
        return self is other or (isinstance(other, Variable) and other.name == self.name)

    __hash__ = Formula.__hash__

    def __repr__(self):
        return f"Variable({self.name!r})"

    def size(self):
        return 1

    def depth(self):
        return 0


class SkeletalVariable(Formula):
    """An opaque atom standing for a foreign-headed subformula."""

    __slots__ = ("body",)

    def __init__(self, body: Formula):
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "_hash", hash(("x", body._hash)))

    def __eq__(self, other):
        return self is other or (
            isinstance(other, SkeletalVariable)
            and other._hash == self._hash
            and other.body == self.body
        )

    __hash__ = Formula.__hash__

    def __repr__(self):
        return f"SkeletalVariable({self.body!r})"

    def size(self):
        return 1

    def depth(self):
        return 0


class Application(Formula):
    __slots__ = ("connective", "args", "_size", "_depth")

    def __init__(self, connective: Connective, args: Iterable[Formula] = ()):
        args = tuple(args)
        if len(args) != connective.arity:
            raise FormulaError(
                f"{connective.name} expects {connective.arity} argument(s), got {len(args)}"
            )
        object.__setattr__(self, "connective", connective)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash((connective, tuple(a._hash for a in args))))
        object.__setattr__(self, "_size", 1 + sum(a.size() for a in args))
        # nullary applications have depth 0, like variables
        object.__setattr__(self, "_depth", 1 + max((a.depth() for a in args), default=-1))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Application)
            and other._hash == self._hash
            and other.connective == self.connective
            and other.args == self.args
        )

    __hash__ = Formula.__hash__

    def __repr__(self):
        return f"Application({self.connective.name}, {list(self.args)!r})"

    @property
    def head(self):
        return self.connective

    def size(self):
        return self._size

    def depth(self):
        return self._depth


def app(connective: Connective, *args: Formula) -> Application:
    return Application(connective, args)


def sort_key(f: Formula):
    """Deterministic total order: node count, then rendered text."""
    return (f.size(), render_formula(f))


# -- parsing / rendering ----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([(),=])|(\S))")


def tokenize(text: str, extra: str = ""):
    """Split text into (kind, text, offset) triples, ending with an eof token.

    Kinds are "ident" and the punctuation characters themselves; characters in
    ``extra`` (besides parentheses and commas) are also accepted.
    """
    allowed = "()," + extra
    pos = 0
    tokens = []
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        ident, punct, bad = m.groups()
        start = m.start(m.lastindex)
        if bad is not None or (punct is not None and punct not in allowed):
            raise FormulaError(f"unexpected character {m.group(m.lastindex)!r}", start)
        tokens.append(("ident" if ident else punct, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class TokenStream:
    def __init__(self, tokens, sig: Signature, strict: bool = True):
        self.tokens = tokens
        self.i = 0
        self.sig = sig
        # when False, an undeclared identifier followed by "(" at top level is
        # left for the caller (derivation files put a justification there)
        self.strict = strict

    def peek(self, ahead: int = 0):
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def take(self, kind):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise FormulaError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def formula(self, nested: bool = False) -> Formula:
        # an identifier is an application iff the signature declares it
        _, name, pos = self.take("ident")
        conn = self.sig.get(name)
        if conn is None:
            if self.peek()[0] == "(" and (nested or self.strict):
                raise FormulaError(f"unknown connective {name!r}", pos)
            return Variable(name)
        if self.peek()[0] != "(":
            raise FormulaError(f"connective {name!r} must be applied, e.g. {name}()", pos)
        self.take("(")
        args = []
        if self.peek()[0] != ")":
            args.append(self.formula(True))
            while self.peek()[0] == ",":
                self.take(",")
                args.append(self.formula(True))
        self.take(")")
        if len(args) != conn.arity:
            raise FormulaError(
                f"arity mismatch: {name} expects {conn.arity} argument(s), got {len(args)}", pos
            )
        return Application(conn, args)


def parse_formula(text: str, sig: Signature) -> Formula:
    ts = TokenStream(tokenize(text), sig)
    f = ts.formula()
    ts.take("eof")
    return f


def parse_formula_list(text: str, sig: Signature) -> list[Formula]:
    """Parse a comma-separated, possibly empty, list of formulas."""
    ts = TokenStream(tokenize(text), sig)
    out = []
    if ts.peek()[0] == "eof":
        return out
    out.append(ts.formula())
    while ts.peek()[0] == ",":
        ts.take(",")
        out.append(ts.formula())
    ts.take("eof")
    return out


def render_formula(f: Formula) -> str:
    if isinstance(f, Variable):
        return f.name
    if isinstance(f, SkeletalVariable):
        return "x[" + render_formula(f.body) + "]"
    return f.connective.name + "(" + ", ".join(render_formula(a) for a in f.args) + ")"


# -- structural analysis ----------------------------------------------------

def subformulas(f: Formula | Iterable[Formula]) -> frozenset[Formula]:
    if isinstance(f, Formula):
        f = (f,)
    seen: set[Formula] = set()
    stack = list(f)
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if isinstance(g, Application):
            stack.extend(g.args)
    return frozenset(seen)


def variables(f: Formula | Iterable[Formula]) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Variable))


def atoms(f: Formula | Iterable[Formula]) -> frozenset[Formula]:
    """Ordinary and skeletal variables occurring in f."""
    return frozenset(g for g in subformulas(f) if isinstance(g, (Variable, SkeletalVariable)))


def connectives_of(f: Formula | Iterable[Formula]) -> frozenset[Connective]:
    return frozenset(g.connective for g in subformulas(f) if isinstance(g, Application))


@dataclass(frozen=True)
class Analysis:
    head: Connective | None
    sub: frozenset[Formula]
    var: frozenset[str]


def analyze(f: Formula) -> Analysis:
    return Analysis(f.head, subformulas(f), variables(f))


# -- substitutions ----------------------------------------------------------

class Substitution:
    """Finite map from variable names to formulas; unmapped names are fixed."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: Mapping[str, Formula] | None = None):
        object.__setattr__(self, "mapping", dict(mapping or {}))

    def __setattr__(self, name, value):
        raise AttributeError("substitutions are immutable")

    def __eq__(self, other):
        return isinstance(other, Substitution) and self.mapping == other.mapping

    def __hash__(self):
        return hash(frozenset(self.mapping.items()))

    def __repr__(self):
        body = ", ".join(f"{k}={render_formula(v)}" for k, v in sorted(self.mapping.items()))
        return f"Substitution({body})"

    def __call__(self, f: Formula) -> Formula:
        return apply_substitution(self, f)


def apply_substitution(s: Substitution | Mapping[str, Formula], f: Formula) -> Formula:
    mapping = s.mapping if isinstance(s, Substitution) else s
    if not mapping:
        return f
    cache: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        if isinstance(g, Variable):
            return mapping.get(g.name, g)
        if isinstance(g, SkeletalVariable):
            return g
        r = cache.get(g)
        if r is None:
            args = tuple(go(a) for a in g.args)
            r = g if args == g.args else Application(g.connective, args)
            cache[g] = r
        return r

    return go(f)


# -- monoliths and skeletons ------------------------------------------------

def monoliths(sig: Signature, f: Formula | Iterable[Formula]) -> frozenset[Formula]:
    """Largest subformulas whose head lies outside ``sig``."""
    if not isinstance(f, Formula):
        out: set[Formula] = set()
        for g in f:
            out |= monoliths(sig, g)
        return frozenset(out)
    if isinstance(f, (Variable, SkeletalVariable)):
        return frozenset()
    if f.connective in sig:
        out = set()
        for a in f.args:
            out |= monoliths(sig, a)
        return frozenset(out)
    return frozenset({f})


def skeleton(sig: Signature, f: Formula) -> Formula:
    """Replace every ``sig``-monolith by a skeletal variable keyed on it."""
    if isinstance(f, (Variable, SkeletalVariable)):
        # already-opaque atoms are left alone, which makes this idempotent
        return f
    if f.connective in sig:
        args = tuple(skeleton(sig, a) for a in f.args)
        return f if args == f.args else Application(f.connective, args)
    return SkeletalVariable(f)


def unskeleton(f: Formula) -> Formula:
    """Inverse of :func:`skeleton`: put each monolith back in place."""
    if isinstance(f, SkeletalVariable):
        return f.body
    if isinstance(f, Variable):
        return f
    return Application(f.connective, tuple(unskeleton(a) for a in f.args))
