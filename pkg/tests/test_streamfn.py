import pytest
from hypothesis import given, strategies as st

from streamalg.algebra import HomSpec, mk_counter_monoid, mk_list_monoid, mk_set_monoid
from streamalg.examples import prefix, stratified
from streamalg.processor import run
from streamalg.streamfn import (StreamFunctionSpec, check_stream_function, completion_for_idempotent,
                                completion_for_left_cancellative, from_homomorphism, generic_decompose,
                                refute_extension)

L = mk_list_monoid(lambda rng: rng.randint(-3, 3), name="List[Int]")
S = mk_set_monoid("abc", name="Set[abc]")


def test_prefix_sum_update_values():
    F = prefix.prefix_sum_fn()
    assert F((1, 2, 3)) == (1, 3, 6)
    assert F.update((1,), (2, 3)) == (3, 6)
    assert check_stream_function(F, 500, 0).ok


def test_wrong_update_is_caught():
    F = prefix.prefix_sum_fn()
    bad = StreamFunctionSpec("bad", F.source, F.target, F.apply, lambda p, a: prefix.prefix_sums(a))
    rep = check_stream_function(bad, 300, 0)
    assert "extension" in {c.law for c in rep.failures}


def test_from_homomorphism_uses_image_as_update():
    length = HomSpec("len", L, mk_counter_monoid(), len)
    F = from_homomorphism(length)
    assert F.update((1, 2), (3,)) == 1
    assert check_stream_function(F, 300, 0).ok
    with pytest.raises(ValueError):
        from_homomorphism(HomSpec("first", L, L, lambda xs: xs[:1]))


def test_left_cancellative_completion():
    F = prefix.prefix_sum_fn()
    assert completion_for_left_cancellative(F) is F
    G = StreamFunctionSpec("seen", L, S, lambda xs: frozenset(), lambda p, a: frozenset())
    with pytest.raises(ValueError):
        completion_for_left_cancellative(G)


def test_idempotent_completion_satisfies_all_conditions():
    letters = mk_list_monoid("abc", name="List[abc]")
    # re-emitting everything seen so far satisfies the extension condition but not the unit condition
    base = StreamFunctionSpec("seen", letters, S, frozenset, lambda p, a: frozenset(p + a))
    assert "unit" in {c.law for c in check_stream_function(base, 300, 0).failures}
    G = completion_for_idempotent(base)
    assert check_stream_function(G, 300, 0).ok
    assert G.update(("a",), ()) == frozenset()
    with pytest.raises(ValueError):
        completion_for_idempotent(prefix.prefix_sum_fn())


def test_set_difference_has_no_update():
    a = frozenset("a")
    w = refute_extension(stratified.set_difference, stratified.SET_PAIRS, stratified.SETS, 200, 0,
                         candidates=[((a, frozenset()), (frozenset(), a))])
    assert w is not None
    assert w["F(p)"] == a and w["F(pa)"] == frozenset()


def test_union_has_an_update():
    union = lambda x: x[0] | x[1]
    assert refute_extension(union, stratified.SET_PAIRS, stratified.SETS, 300, 0) is None


def test_stratified_update_is_lawful():
    assert check_stream_function(stratified.stratified_diff_fn(), 500, 1).ok
    assert check_stream_function(stratified.list_diff_fn(), 500, 1).ok


@given(st.lists(st.integers(-3, 3), max_size=6).map(tuple))
def test_generic_decomposition_reproduces_function(xs):
    F = prefix.prefix_sum_fn()
    P = generic_decompose(F)
    assert run(P, xs) == F(xs)
