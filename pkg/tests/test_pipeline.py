import pytest

from streamalg import catalog
from streamalg.algebra import HomSpec
from streamalg.examples import join, prefix
from streamalg.pipeline import (Eval, InvalidPath, Loop, Merge, NoMatch, Par, Pure, RewriteRule,
                                SideConditionRejected, Split, Stateful, apply_rule, candidates, chain, cost,
                                denote_term, dumps_term, flatten, make_certificate, optimize, rule_decompose,
                                rule_exchange, rule_fuse, rule_partition, rule_tighten_left, subterm,
                                verify_rewrite)
from streamalg.processor import eval_of, make_processor, run
from streamalg.state import int_space


@pytest.fixture(scope="module")
def jp():
    return join.join_parts()


@pytest.fixture(scope="module")
def reg():
    return catalog.default_registry()


def test_chain_and_flatten():
    P = Stateful(prefix.prefix_sum_processor())
    neg = Pure(HomSpec("n", prefix.LIST_Z, prefix.LIST_Z, lambda xs: tuple(-x for x in xs)))
    t = chain([neg, P, neg])
    assert flatten(t) == [neg, P, neg]
    assert subterm(t, (1, 0)) == P
    with pytest.raises(InvalidPath):
        subterm(t, (5,))


def test_cost_model():
    jp = join.join_parts()
    unfused = join.join_pipeline()
    assert cost(unfused) == pytest.approx(1.1)
    assert cost(Stateful(jp.join)) == 1.0
    part = chain([Split(jp.split), Par(Stateful(jp.join), Stateful(jp.join)), Merge(jp.tensor)])
    assert cost(part) == pytest.approx(0.7)


def test_join_optimization_log(jp):
    res = optimize(join.join_pipeline(), catalog.default_rules(), budget=300)
    assert res.applied == ["decompose", "exchange", "decouple^-1", "fuse"]
    assert all(e.verdict == "verified" for e in res.log)
    assert res.term == Stateful(jp.join)


def test_join_optimization_with_certificate(jp):
    cert = catalog.join_certificate()
    assert cert.verified
    res = optimize(join.join_pipeline(), catalog.default_rules(cert), budget=300)
    assert res.applied[-1] == "partition"
    assert [type(s).__name__ for s in flatten(res.term)] == ["Split", "Par", "Merge"]
    assert verify_rewrite(join.join_pipeline(), res.term, budget=500).ok


def test_exhaustive_matches_greedy_here():
    a = optimize(join.join_pipeline(), catalog.default_rules(), strategy="exhaustive", budget=200)
    assert cost(a.term) == 1.0


def test_single_pure_unchanged():
    t = Pure(HomSpec("n", prefix.LIST_Z, prefix.LIST_Z, lambda xs: tuple(-x for x in xs)))
    res = optimize(t, catalog.default_rules(), budget=50)
    assert res.term == t and res.log == []


def test_exchange_side_condition():
    def on_gen(g):
        return lambda s: (s, g)
    P = make_processor("echo_with_header", prefix.LIST_Z, prefix.LIST_Z, int_space(), on_gen, 0, (9,))
    neg = Pure(HomSpec("n", prefix.LIST_Z, prefix.LIST_Z, lambda xs: tuple(-x for x in xs)))
    with pytest.raises(SideConditionRejected):
        apply_rule(rule_exchange(), chain([Eval(P), neg]), index=0)


def test_no_match_and_bad_index():
    t = Stateful(prefix.prefix_sum_processor())
    with pytest.raises(NoMatch):
        apply_rule(rule_fuse(), t)
    with pytest.raises(InvalidPath):
        apply_rule(rule_fuse(), join.join_pipeline(), index=7)


def test_decompose_preserves_meaning():
    t = Stateful(prefix.prefix_sum_processor())
    t2 = apply_rule(rule_decompose(), t)
    assert isinstance(t2.right, Eval)
    assert verify_rewrite(t, t2, budget=300).ok


def test_partition_refuses_unverified_certificate(jp):
    cert = make_certificate(jp.pairs, jp.split, budget=300)
    assert not cert.verified and cert.witness is not None
    with pytest.raises(SideConditionRejected):
        apply_rule(rule_partition(cert), Stateful(jp.pairs))


def test_partition_is_top_level_only(jp):
    cert = catalog.join_certificate()
    t = Par(Stateful(jp.join), Stateful(jp.join))
    assert not any(r.name == "partition" for r, *_ in candidates(t, [rule_partition(cert)]))


def test_tighten_left_moves_map_inside():
    t = catalog.term_corpus()["map_into_loop"]
    t2 = apply_rule(rule_tighten_left(), t, index=0)
    assert isinstance(t2, Loop)
    assert verify_rewrite(t, t2, budget=300).ok


def test_term_json_roundtrip(reg):
    for name, t in catalog.term_corpus().items():
        assert reg.loads_term(dumps_term(t)) == t, name


def test_term_json_rejects_bad_annotation(reg):
    import json
    d = json.loads(dumps_term(join.join_pipeline()))
    d["monoids"]["output"] = "List[Z]"
    with pytest.raises(ValueError):
        reg.term(d)


class DropTrailingEndomap(RewriteRule):
    """Unsound on purpose: forgets a final pure stage whenever the types allow it."""
    name = "drop-endomap"

    def rewrite_pair(self, a, b):
        if isinstance(b, Pure) and b.input.name == b.output.name:
            return [a]
        return None


def test_mutated_rule_detected():
    t = join.join_pipeline()
    (rule, path, idx, t2), = list(candidates(t, [DropTrailingEndomap()]))
    v = verify_rewrite(t, t2, budget=1000)
    assert not v.ok and "input" in v.witness
    res = optimize(t, [DropTrailingEndomap()], budget=300)
    assert res.log[0].verdict == "rejected" and res.term == t


def test_denote_term_matches_manual_composition(jp):
    P = denote_term(join.join_pipeline())
    x = (frozenset({(0, 1)}), frozenset({(1, 2), (2, 3)}))
    assert run(P, x) == join.nested_loop_join(jp.cfg, *x)


def test_eval_term_processor_is_eval():
    P = prefix.prefix_sum_processor()
    assert Eval(P).processor().key == eval_of(P).key
