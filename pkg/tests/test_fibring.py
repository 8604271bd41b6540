import random
from itertools import combinations, product

import pytest

from boolfib.collapse import formulas_by_size, random_formula, variable_pool
from boolfib.fibring import (
    FibredSystem,
    FibringError,
    decide_fibred,
    equivalent_fibred,
    explain,
    is_explosive,
    saturate,
)
from boolfib.semantics import builtin_matrix, entails
from boolfib.syntax import Variable, apply_substitution, parse_formula, subformulas

from conftest import sig_of


def system(a, b):
    return FibredSystem(builtin_matrix([a]), builtin_matrix([b]))


SIG = sig_of("and", "or", "not", "bot", "top", "imp", "nimp", "eq", "xor")


def P(s):
    return parse_formula(s, SIG)


def test_disjointness_required():
    with pytest.raises(FibringError):
        FibredSystem(builtin_matrix(["and"]), builtin_matrix(["and", "or"]))


def test_language_checked():
    with pytest.raises(FibringError):
        decide_fibred(system("and", "or"), [P("not(p)")], P("p"))


def test_saturation_examples():
    s = system("and", "or")
    r = saturate(s, [P("or(p, and(p, q))")])
    assert r.closure == {P("or(p, and(p, q))")}
    r = saturate(s, [P("and(p, or(p, q))")])
    assert r.closure == {P("and(p, or(p, q))"), P("p"), P("or(p, q)")}
    assert r.iterations == 1
    r = saturate(s, [])
    assert r.closure == frozenset() and r.iterations == 0


def test_explosive_examples():
    assert not is_explosive(builtin_matrix(["bot"]), [])
    assert is_explosive(builtin_matrix(["bot"]), [P("bot()")])
    assert is_explosive(builtin_matrix(["not"]), [P("p"), P("not(p)")])


def test_decide_examples():
    s = system("and", "or")
    assert decide_fibred(s, [P("and(p, or(p, q))")], P("p"))
    assert decide_fibred(s, [P("p")], P("and(p, or(p, q))"))
    assert not decide_fibred(s, [P("or(p, and(p, q))")], P("p"))
    s = system("not", "bot")
    assert not decide_fibred(s, [], P("not(bot())"))
    assert entails(s.union_matrix(), [], P("not(bot())"))


def test_equivalence_examples():
    s = system("and", "or")
    assert equivalent_fibred(s, P("and(p, or(p, q))"), P("p"))
    assert not equivalent_fibred(s, P("or(p, and(p, q))"), P("p"))
    f = P("or(and(p, q), or(q, p))")
    assert equivalent_fibred(s, f, f)


def test_explain_record():
    e = explain(system("and", "or"), [P("and(p, or(p, q))")], P("p"))
    assert e["verdict"] is True and e["condition"] == "a"
    assert e["saturation"] == sorted(["and(p, or(p, q))", "or(p, q)", "p"])
    assert e["mx"] == [] and e["explosive_other_side"] is False


# -- explosiveness by substitution ------------------------------------------------

def explosive_by_substitution(side, delta):
    """Check every substitution of delta's variables by a small two-variable term
    and every small goal, including a fresh variable."""
    sig = side.signature
    small = [f for level in formulas_by_size(sig, 2, 1, 1 + max((c.arity for c in sig), default=0)) for f in level]
    goals = small + [Variable("r")]
    names = sorted({v for f in delta for v in _vars(f)})
    for values in product(small, repeat=len(names)):
        sigma = dict(zip(names, values))
        inst = [apply_substitution(sigma, f) for f in delta]
        for e in goals:
            if not entails(side, inst, e):
                return False
    return True


def _vars(f):
    return {g.name for g in subformulas(f) if isinstance(g, Variable)}


@pytest.mark.parametrize("name", ["not", "and", "or", "imp", "bot", "top", "nimp", "eq", "xor"])
def test_explosive_matches_substitution_oracle(name):
    side = builtin_matrix([name])
    pool = [f for level in formulas_by_size(side.signature, 2, 2, 7) for f in level][:14]
    for n in (0, 1, 2):
        for delta in combinations(pool, n):
            assert is_explosive(side, delta) == explosive_by_substitution(side, delta), delta


# -- properties of the fibred consequence ----------------------------------------

PAIRS = [("and", "or"), ("not", "bot"), ("imp", "top"), ("nimp", "top"), ("eq", "bot"),
         ("xor", "and"), ("or", "not"), ("bot", "top")]


def _corpus(sig, rng, n, depth=2, atoms=3):
    pool = variable_pool(atoms)
    for _ in range(n):
        prem = tuple(random_formula(rng, sig, pool, depth) for _ in range(rng.randint(0, 2)))
        yield prem, random_formula(rng, sig, pool, depth)


@pytest.mark.parametrize("a, b", PAIRS)
def test_extension_and_upper_bound(a, b):
    s = system(a, b)
    union = s.union_matrix()
    rng = random.Random(a + b)
    for prem, goal in _corpus(union.signature, rng, 400, depth=3):
        v = decide_fibred(s, prem, goal)
        if entails(s.side_a, prem, goal) or entails(s.side_b, prem, goal):
            assert v, (prem, goal)
        if v:
            assert entails(union, prem, goal), (prem, goal)


@pytest.mark.parametrize("a, b", PAIRS)
def test_conservative_on_pure_inputs(a, b):
    s = system(a, b)
    for side in (s.side_a, s.side_b):
        levels = formulas_by_size(side.signature, 2, 2, 7)
        flat = [f for level in levels for f in level]
        for goal in flat:
            for n in (0, 1):
                for prem in combinations(flat[:12], n):
                    assert decide_fibred(s, prem, goal) == entails(side, prem, goal)


@pytest.mark.parametrize("a, b", PAIRS)
def test_swap_invariance(a, b):
    s = system(a, b)
    t = s.swapped()
    rng = random.Random(b + a)
    for prem, goal in _corpus(s.union_matrix().signature, rng, 400, depth=3):
        assert decide_fibred(s, prem, goal) == decide_fibred(t, prem, goal)


@pytest.mark.parametrize("a, b", PAIRS)
def test_saturation_bounds(a, b):
    s = system(a, b)
    rng = random.Random(len(a) * 31 + len(b))
    for prem, _ in _corpus(s.union_matrix().signature, rng, 200, depth=3):
        r = saturate(s, prem)
        assert set(prem) <= r.closure <= subformulas(prem)
        # the closure is a fixpoint and is itself closed under each side
        assert saturate(s, r.closure).closure == r.closure


def test_variable_goal_uses_side_a_condition():
    s = system("bot", "not")
    e = explain(s, [P("bot()")], P("p"))
    assert e["verdict"] and e["condition"] == "a"
    assert decide_fibred(s, [P("not(p)"), P("p")], P("q"))
    assert decide_fibred(s, [P("not(bot())"), P("bot()")], P("not(q)"))
