import random
from itertools import product

import pytest

from boolfib.clones import (
    BOT,
    TOP,
    anf,
    classify,
    completable_by_top,
    generates_top_clone,
    in_equiv_clone,
    is_functionally_complete,
    post_profile,
    projective_components,
)
from boolfib.semantics import BUILTIN_TABLES, TruthTable, builtin_connective, entails, table_matrix
from boolfib.syntax import Application, Connective, Variable

from oracles import complete_oracle, equiv_clone_oracle, post_oracle


def T(name_or_bits):
    if set(name_or_bits) <= {"0", "1"}:
        return TruthTable.from_bits(name_or_bits)
    return builtin_connective(name_or_bits)[1]


def all_tables(max_arity):
    for k in range(max_arity + 1):
        for bits in product("01", repeat=1 << k):
            yield TruthTable.from_bits("".join(bits))


def test_projective_components_examples():
    assert projective_components(T("and")) == {1, 2}
    assert projective_components(T("or")) == frozenset()
    assert projective_components(T("0000")) == {1, 2}


def test_classify_examples():
    assert classify(T("not")).very_significant
    c = classify(T("and"))
    assert c.projection_conjunction and c.projective_components == {1, 2} and not c.very_significant
    assert classify(TOP).top_like


def test_post_profile_examples():
    assert post_profile(T("nimp")).as_dict() == {
        "preserves_zero": True, "preserves_one": False, "monotone": False,
        "affine": False, "self_dual": False,
    }
    p = post_profile(T("eq"))
    assert p.affine and p.preserves_one
    assert all(post_profile(T("01")).as_dict().values())


def test_anf_of_eq():
    # eq = 1 + p + q: coefficients for 1, q, p present, pq absent
    assert anf(T("eq")) == [1, 1, 1, 0]


def test_completeness_examples():
    assert is_functionally_complete([T("nimp"), TOP])
    assert not is_functionally_complete([T("eq"), BOT])
    assert is_functionally_complete([T("neg"), T("and")])
    with pytest.raises(ValueError):
        is_functionally_complete([])


def test_equiv_clone_examples():
    assert in_equiv_clone(T("eq"))
    assert in_equiv_clone(T("01101001"))
    assert not in_equiv_clone(T("and"))


def test_top_clone_examples():
    assert generates_top_clone([TOP])
    assert generates_top_clone([TOP, T("1111")])
    assert not generates_top_clone([TOP, T("and")])


def test_completable_by_top_examples():
    assert completable_by_top([T("nimp")])
    assert completable_by_top([T("T(3,2)"), T("neg")])
    assert not completable_by_top([T("and"), T("imp")])


def test_post_profile_matches_definitions():
    for t in all_tables(3):
        assert post_profile(t).as_dict() == post_oracle(t.bits), t.bits


def test_classify_matches_entailment():
    q = Variable("q_fresh")
    for t in all_tables(3):
        k = t.arity
        conn = Connective("c", k)
        m = table_matrix(t, "c")
        ps = [Variable(f"p{i}") for i in range(1, k + 1)]
        phi = Application(conn, ps)
        c = classify(t)
        assert c.top_like == entails(m, [], phi)
        assert c.bottom_like == entails(m, [phi], q)
        J = {j for j in range(1, k + 1) if entails(m, [phi], ps[j - 1])}
        assert c.projective_components == J
        assert c.projection_conjunction == entails(m, [ps[j - 1] for j in J], phi)
        # flag relations
        assert c.significant == (not c.top_like and not c.bottom_like)
        assert (not c.very_significant) == (c.bottom_like or c.projection_conjunction)
        assert not c.top_like or c.projection_conjunction


def test_equiv_clone_matches_term_enumeration():
    for k in (1, 2, 3):
        oracle = equiv_clone_oracle(k, 4)
        char = {t.bits for t in all_tables(3) if t.arity == k and in_equiv_clone(t)}
        assert oracle == char, k


MINIMAL_VERY_SIGNIFICANT = [
    "not", "imp", "eq", "nimp", "xor", "ite", "or_and", "or_xor", "and_or", "and_imp", "xor3",
    *(f"T({n + 1},{n})" for n in range(1, 6)),
    *(f"T({n + 1},2)" for n in range(2, 6)),
]


@pytest.mark.parametrize("name", MINIMAL_VERY_SIGNIFICANT)
def test_minimal_very_significant_connectives(name):
    assert classify(T(name)).very_significant


def test_non_very_significant_kinds():
    for bits in ("0001", "1", "01", "0011"):
        assert classify(T(bits)).projection_conjunction
    assert classify(BOT).bottom_like and classify(T("0000")).bottom_like


def test_completeness_against_closure_oracle():
    for t in all_tables(3):
        assert is_functionally_complete([t]) == complete_oracle([t.bits]), t.bits
    rng = random.Random(11)
    small = list(all_tables(2))
    for _ in range(400):
        ts = rng.sample(small, rng.randint(2, 3))
        assert is_functionally_complete(ts) == complete_oracle([t.bits for t in ts])


def test_shared_post_property_is_incomplete():
    binaries = list(all_tables(2))[6:]
    assert [t.arity for t in binaries] == [2] * 16
    assert is_functionally_complete(binaries)
    for prop in ("preserves_zero", "preserves_one", "monotone", "affine", "self_dual"):
        members = [t for t in all_tables(3) if getattr(post_profile(t), prop)]
        assert not is_functionally_complete(members)


def test_completable_by_top_is_completeness_with_top():
    for t in all_tables(3):
        assert completable_by_top([t]) == complete_oracle([t.bits, "1"])


@pytest.mark.parametrize("name", sorted(BUILTIN_TABLES))
def test_builtins_have_a_label(name):
    assert classify(BUILTIN_TABLES[name]).label() in {
        "top-like", "bottom-like", "projection-conjunction", "very significant"}
