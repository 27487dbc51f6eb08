import itertools
import random
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings, strategies as st

from streamalg.algebra import HomSpec, MonoidMismatch, identity_hom, mk_list_monoid
from streamalg.examples import loops, prefix
from streamalg.processor import (chunk, check_soundness, check_stateless_iff_hom, denotation, equiv_check,
                                 eval_of, fuse, homof, loop, make_processor, par, pure, run, run_chunked, seq,
                                 step)
from streamalg.state import int_space

LZ = prefix.LIST_Z
ints = st.lists(st.integers(-4, 4), max_size=8).map(tuple)


def neg_all():
    return HomSpec("negate_all", LZ, LZ, lambda xs: tuple(-x for x in xs))


def running_max():
    def on_gen(g):
        x = g[0]
        return lambda s: (max(s, x), (max(s, x),))
    return make_processor("running_max", LZ, LZ, int_space("Z"), on_gen, -100)


def test_prefix_run_and_step():
    P = prefix.prefix_sum_processor()
    assert run(P, (1, 2, 3)) == (1, 3, 6)
    assert step(P, 1, (2, 3)) == (6, (3, 6))


def test_run_chunked_records_increments():
    P = prefix.prefix_sum_processor()
    tr = run_chunked(P, [(1,), (2, 3)])
    assert tr.increments == [(1,), (3, 6)]
    assert tr.states == [0, 1, 6] and tr.final_state == 6
    assert tr.output == (1, 3, 6)


def test_chunk_sizes_and_random_cuts():
    assert chunk(LZ, (1, 2, 3, 4, 5), sizes=[2, 2]) == [(1, 2), (3, 4), (5,)]
    parts = chunk(LZ, (1, 2, 3, 4, 5), rng=random.Random(2))
    assert LZ.mul(*parts) == (1, 2, 3, 4, 5)


@given(ints, st.integers(0, 2**16))
def test_chunked_equals_whole(xs, seed):
    P = running_max()
    cs = chunk(LZ, xs, rng=random.Random(seed))
    assert run_chunked(P, cs).output == run(P, xs)


@given(ints)
def test_running_max_matches_oracle(xs):
    assert run(running_max(), xs) == tuple(itertools.accumulate(xs, max, initial=-100))[1:]


def test_pure_rejects_non_homomorphism():
    with pytest.raises(ValueError):
        pure(HomSpec("first", LZ, LZ, lambda xs: xs[:1]))


def test_pure_is_stateless_homomorphism():
    P = pure(neg_all())
    assert run(P, (1, -2)) == (-1, 2)
    assert check_stateless_iff_hom(P, 200).ok
    with pytest.raises(ValueError):
        check_stateless_iff_hom(prefix.prefix_sum_processor())


def test_eval_of_homof_is_original():
    P = prefix.prefix_sum_processor()
    E = seq(pure(homof(P), check=False), eval_of(P))
    assert equiv_check(E, P, budget=300).ok


def test_fuse_equals_pure_then_processor():
    P = prefix.prefix_sum_processor()
    f = neg_all()
    assert equiv_check(fuse(f, P), seq(pure(f), P), budget=300).ok


@given(ints)
def test_seq_composes_functions(xs):
    I, D = prefix.integral_processor(), prefix.derivative_processor()
    assert run(seq(I, D), xs) == xs
    assert run(seq(D, I), xs) == xs


def test_seq_type_mismatch():
    S = mk_list_monoid("ab", name="List[ab]")
    with pytest.raises(MonoidMismatch):
        seq(prefix.prefix_sum_processor(), pure(identity_hom(S)))


def test_integral_rejects_non_group():
    with pytest.raises(ValueError):
        prefix.integral_processor(LZ)


def test_par_runs_componentwise():
    P, Q = prefix.prefix_sum_processor(), running_max()
    x = ((1, 2), (3, 1))
    assert run(par(P, Q), x) == ((1, 3), (3, 3))
    with ThreadPoolExecutor(2) as ex:
        assert run(par(P, Q, executor=ex), x) == ((1, 3), (3, 3))


def test_equiv_check_finds_difference():
    v = equiv_check(prefix.prefix_sum_processor(), pure(identity_hom(LZ)), budget=200)
    assert not v.ok and v.witness is not None
    assert v.to_json()["status"] == "counterexample"


def test_soundness_of_examples():
    for P in (prefix.prefix_sum_processor(), running_max(), seq(prefix.integral_processor(),
                                                                  prefix.derivative_processor())):
        assert check_soundness(P, 300).ok


def test_loop_feedback_values():
    P = loop(loops.feedback_processor())
    assert run(P, (1, 1, 1)) == (0, 0, 1, 2)


@settings(max_examples=60)
@given(st.lists(st.integers(-3, 3), max_size=6).map(tuple))
def test_loop_matches_reference_semantics(batches):
    body = loops.feedback_processor()
    assert run(loop(body), batches) == loops.loop_semantics(denotation(body), batches)


def test_loop_rejects_non_product_body():
    with pytest.raises(MonoidMismatch):
        loop(prefix.prefix_sum_processor())
