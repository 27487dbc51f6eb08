import random

import pytest
from hypothesis import given, settings, strategies as st

from streamalg.algebra import TICK
from streamalg.examples import adder, join, loops, prefix, stratified, tcp
from streamalg.processor import denotation, equiv_check, loop, run, run_chunked

JOIN = join.join_parts()
EDGES = JOIN.cfg.edges()
edge_sets = st.frozensets(st.sampled_from(EDGES), max_size=8)
pair_sets = st.lists(st.tuples(st.frozensets(st.sampled_from("abcd")), st.frozensets(st.sampled_from("abcd"))),
                     max_size=5)


def test_prefix_sums():
    assert prefix.prefix_sums((1, 2, 3)) == (1, 3, 6)
    assert prefix.prefix_sums((2, 3), start=1) == (3, 6)
    assert run(prefix.prefix_sum_processor(), ()) == ()


def test_integral_derivative_values():
    I, D = prefix.integral_processor(), prefix.derivative_processor()
    assert run(I, (1, 2, 3)) == (1, 3, 6)
    assert run(D, (1, 3, 6)) == (1, 2, 3)


@settings(max_examples=80)
@given(edge_sets, edge_sets)
def test_join_variants_match_nested_loop(left, right):
    x = (left, right)
    expect = join.nested_loop_join(JOIN.cfg, left, right)
    assert run(JOIN.join, x) == expect
    assert run(join.unfused_join(JOIN), x) == expect
    assert run(join.partitioned_join(JOIN), x) == expect


def test_join_streaming_emits_only_new_pairs():
    a = (frozenset({(0, 1)}), frozenset())
    b = (frozenset(), frozenset({(1, 2)}))
    tr = run_chunked(JOIN.join, [a, b])
    assert tr.increments == [frozenset(), frozenset({((0, 1), (1, 2))})]


def test_join_config_rejects_bad_partition():
    cfg = join.JoinConfig(hash_left=lambda e: 0, hash_right=lambda e: e[0] % 2)
    with pytest.raises(ValueError):
        cfg.validate()


def test_split_merge_is_identity():
    x = (frozenset({(0, 1), (1, 2)}), frozenset({(1, 0), (2, 3)}))
    halves = JOIN.split(x)
    assert JOIN.input.product(*halves) == x


@given(pair_sets)
def test_stratified_ticked_matches_formula(pairs):
    P = stratified.stratified_diff_ticked()
    x = stratified.to_ticked(pairs)
    assert run(P, x) == stratified.stratified_diff(x)


@given(pair_sets)
def test_stratified_list_matches_formula(pairs):
    P = stratified.stratified_diff_list()
    assert run(P, tuple(pairs)) == stratified.list_diff(pairs)
    expect = tuple(a - (pairs[i - 1][1] if i else frozenset()) for i, (a, _) in enumerate(pairs))
    assert stratified.list_diff(pairs) == expect


def test_stratified_values_and_double_tick():
    a, b = frozenset("ab"), frozenset("a")
    x = stratified.to_ticked([(a, b), (a, frozenset())])
    assert stratified.stratified_diff(x) == (a, TICK, frozenset("b"))
    P = stratified.stratified_diff_ticked()
    tk = stratified.TICKED_IN.tick
    y = stratified.TICKED_IN.mul(stratified.TICKED_IN.inject((a, b)), tk, tk, stratified.TICKED_IN.inject((a, b)))
    assert run_chunked(P, [y[:2], tk, y[2:]]).output == run(P, y)


def test_adder_all_four_bit_sums():
    for x in range(16):
        for y in range(16):
            assert adder.add_via_processor(x, y) == x + y


def test_adder_step_table():
    A = adder.adder_processor()
    assert A.hom(((1, 1),))(0) == (1, (0,))
    assert A.hom(((1, 1),))(1) == (1, (1,))
    assert A.hom(((0, 1),))(0) == (0, (1,))


def test_loop_feedback_and_counting():
    assert run(loop(loops.feedback_processor()), (1, 1, 1)) == (0, 0, 1, 2)
    C = loop(loops.counting_body())
    rng = random.Random(0)
    for _ in range(50):
        batches = tuple(loops.LIST_INT.sample(rng) for _ in range(rng.randint(0, 4)))
        assert run(C, batches) == loops.loop_semantics(denotation(loops.counting_body()), batches)


def test_cancel_left():
    assert loops.cancel_left(loops.Z, 3, 5) == 2
    assert loops.cancel_left(loops.LL, ((1,), ()), ((1, 2), (3,))) == ((2,), (3,))
    with pytest.raises(ValueError):
        loops.cancel_left(loops.LIST_INT, (1,), (2,))


def test_tcp_perfect_network_delivers_in_one_round():
    sys_ = tcp.tcp_system(tcp.NetworkConfig(), tcp.NetworkConfig(seed=1))
    r = tcp.simulate(sys_, "abcd", 3)
    assert r.rounds_to_delivery == 1 and r.prefix_ok
    assert sys_.bound(4) == 1


@pytest.mark.parametrize("seed", range(20))
def test_tcp_adversarial_within_bound(seed):
    n1, n2 = tcp.NetworkConfig.adversarial(2 * seed, 6), tcp.NetworkConfig.adversarial(2 * seed + 1, 6)
    sys_ = tcp.tcp_system(n1, n2)
    r = tcp.simulate(sys_, "abcdef", sys_.bound(6))
    assert r.prefix_ok
    assert r.rounds_to_delivery is not None and r.rounds_to_delivery <= sys_.bound(6)
    assert r.delivered_per_round[-1] == tuple("abcdef")


def test_tcp_config_json_roundtrip():
    cfg = tcp.NetworkConfig.adversarial(5, 4)
    assert tcp.NetworkConfig.from_json(cfg.to_json()) == cfg


def test_tcp_streaming_matches_whole_run():
    sys_ = tcp.tcp_system(tcp.NetworkConfig.adversarial(1, 3), tcp.NetworkConfig.adversarial(2, 3))
    x = tcp.tcp_input("abc", 6)
    assert equiv_check(sys_.system, sys_.system, inputs=[x], chunked=True).ok
    assert run(sys_.system, x) == tuple("abc")
