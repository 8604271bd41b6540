import random

import pytest
from hypothesis import given, settings, strategies as st

from boolfib.syntax import (
    Application,
    Connective,
    FormulaError,
    Signature,
    SkeletalVariable,
    Substitution,
    Variable,
    analyze,
    apply_substitution,
    monoliths,
    parse_formula,
    parse_formula_list,
    render_formula,
    skeleton,
    subformulas,
    unskeleton,
)

AND = Connective("and", 2)
OR = Connective("or", 2)
NEG = Connective("neg", 1)
IMP = Connective("imp", 2)
TOP = Connective("top", 0)
ITE = Connective("ite", 3)
SIG = Signature([AND, OR, NEG, IMP, TOP, ITE])
S_AND = Signature([AND])
S_OR = Signature([OR])

p, q, r = Variable("p"), Variable("q"), Variable("r")


def P(text, sig=SIG):
    return parse_formula(text, sig)


def test_parse_examples():
    assert P("and(p, or(p, q))") == Application(AND, [p, Application(OR, [p, q])])
    assert P("p") == p
    with pytest.raises(FormulaError, match="arity"):
        P("and(p)")


def test_parse_errors_carry_position():
    with pytest.raises(FormulaError) as e:
        P("and(p, q")
    assert e.value.position == 8
    with pytest.raises(FormulaError, match="unknown connective"):
        P("foo(p)")
    with pytest.raises(FormulaError, match="must be applied"):
        P("top")
    with pytest.raises(FormulaError):
        P("p q")
    with pytest.raises(FormulaError):
        P("and(p, $)")


def test_whitespace_and_nullary():
    assert P("  and ( p ,q ) ") == P("and(p,q)")
    assert P("top()") == Application(TOP, [])
    assert P("top( )").size() == 1


def test_render_examples():
    assert render_formula(Application(AND, [p, q])) == "and(p, q)"
    assert render_formula(q) == "q"
    assert render_formula(SkeletalVariable(Application(OR, [p, q]))) == "x[or(p, q)]"


def test_formula_list():
    assert parse_formula_list("", SIG) == []
    assert parse_formula_list("  ", SIG) == []
    assert parse_formula_list("p, and(p, q)", SIG) == [p, Application(AND, [p, q])]
    with pytest.raises(FormulaError):
        parse_formula_list("p,", SIG)


def test_analyze_examples():
    f = P("and(p, or(p, q))")
    a = analyze(f)
    assert a.head == AND
    assert a.sub == {f, p, P("or(p, q)"), q}
    assert a.var == {"p", "q"}
    a = analyze(p)
    assert a.head is None and a.sub == {p} and a.var == {"p"}
    a = analyze(P("top()"))
    assert a.head == TOP and a.sub == {P("top()")} and a.var == frozenset()


def test_substitution_examples():
    assert apply_substitution({"p": P("neg(q)")}, P("imp(p, p)")) == P("imp(neg(q), neg(q))")
    f = P("ite(p, and(q, r), top())")
    assert apply_substitution(Substitution(), f) == f
    assert apply_substitution({"p": q, "q": p}, P("and(p, q)")) == P("and(q, p)")


def test_substitution_is_simultaneous_and_immutable():
    s = Substitution({"p": q})
    with pytest.raises(AttributeError):
        s.mapping = {}
    assert s(P("and(p, q)")) == P("and(q, q)")


def test_monolith_examples():
    f = P("and(p, or(p, q))")
    assert monoliths(S_AND, f) == {P("or(p, q)")}
    assert monoliths(S_OR, f) == {f}
    assert monoliths(SIG, p) == frozenset()
    assert monoliths(S_AND, [f, P("or(q, q)")]) == {P("or(p, q)"), P("or(q, q)")}


def test_skeleton_examples():
    f = P("and(p, or(p, q))")
    assert skeleton(S_AND, f) == Application(AND, [p, SkeletalVariable(P("or(p, q)"))])
    assert skeleton(S_OR, f) == SkeletalVariable(f)
    assert skeleton(SIG, f) == f


def test_identical_subformulas_share_a_skeletal_variable():
    s = skeleton(S_AND, P("and(or(p, q), or(p, q))"))
    assert s.args[0] == s.args[1]
    assert s.args[0] != SkeletalVariable(P("or(q, p)"))


def test_immutability_and_hashing():
    f = P("and(p, q)")
    with pytest.raises(AttributeError):
        f.args = ()
    assert len({f, P("and(p, q)"), p, Variable("p")}) == 2
    assert SkeletalVariable(p) != p


# -- generated corpus ----------------------------------------------------------

_CONNS = [AND, OR, NEG, IMP, TOP, ITE]


def _random_formula(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return Variable(rng.choice(["p", "q", "r", "s1", "x_2"]))
    c = rng.choice(_CONNS)
    return Application(c, [_random_formula(rng, depth - 1) for _ in range(c.arity)])


def test_round_trip_corpus():
    rng = random.Random(20261018)
    for _ in range(10_000):
        f = _random_formula(rng, rng.randint(0, 6))
        text = render_formula(f)
        assert P(text) == f
        assert render_formula(P(text)) == text


formulas = st.recursive(
    st.sampled_from([p, q, r]),
    lambda inner: st.one_of(
        st.tuples(st.sampled_from(_CONNS), st.lists(inner, min_size=3, max_size=3)).map(
            lambda t: Application(t[0], t[1][: t[0].arity])
        )
    ),
    max_leaves=12,
)
sigs = st.sets(st.sampled_from(_CONNS)).map(Signature)


@settings(max_examples=300, deadline=None)
@given(formulas, sigs)
def test_monolith_properties(f, sig):
    ms = monoliths(sig, f)
    used = {g.head for g in subformulas(f) if g.head is not None}
    assert (ms == frozenset()) == (used <= set(sig))
    for m in ms:
        assert m in analyze(f).sub
        assert m.head not in sig


@settings(max_examples=300, deadline=None)
@given(formulas, sigs)
def test_skeleton_properties(f, sig):
    s = skeleton(sig, f)
    assert skeleton(sig, s) == s
    assert unskeleton(s) == f
    skel_vars = {g for g in _nodes(s) if isinstance(g, SkeletalVariable)}
    assert {v.body for v in skel_vars} == monoliths(sig, f)


def _nodes(f):
    yield f
    if isinstance(f, Application):
        for a in f.args:
            yield from _nodes(a)
