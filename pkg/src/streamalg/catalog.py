"""Registry of example objects, the term corpus, and the law suites run by the CLI and tests."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import algebra as alg
from .algebra import HomSpec, LawReport, check_homomorphism, check_monoid_laws
from .examples import adder, join, loops, prefix, stratified, tcp
from .pipeline import (Loop, Pure, Registry, Seq, Stateful, make_certificate, rule_decompose, rule_decouple,
                       rule_exchange, rule_fuse, rule_partition, rule_split_merge, rule_tighten_left,
                       rule_tighten_right)
from .processor import Processor, check_soundness, chunk, pure, run, run_chunked
from .representation import check_embedding, defunctionalize, tabulate, trivial_state_collapse
from .state import state_monoid
from .streamfn import (StreamFunctionSpec, check_stream_function, completion_for_idempotent,
                       completion_for_left_cancellative, from_homomorphism, refute_extension)


HEAVY = ("tcp",)


def example_processors() -> dict:
    jp = join.join_parts()
    system = tcp.tcp_system(tcp.NetworkConfig.adversarial(3, 4), tcp.NetworkConfig.adversarial(4, 4))
    return {
        "prefix_sum": prefix.prefix_sum_processor(),
        "integral": prefix.integral_processor(),
        "derivative": prefix.derivative_processor(),
        "pairs": jp.pairs,
        "join": jp.join,
        "stratified_diff_ticked": stratified.stratified_diff_ticked(),
        "stratified_diff_list": stratified.stratified_diff_list(),
        "adder": adder.adder_processor(),
        "tcp": system.system,
        "loop_feedback": loops_feedback(),
        "loop_counting": loops_counting(),
    }


def loops_feedback() -> Processor:
    from .processor import loop
    return loop(loops.feedback_processor())


def loops_counting() -> Processor:
    from .processor import loop
    return loop(loops.counting_body())


def default_registry() -> Registry:
    reg = Registry()
    jp = join.join_parts()
    for name, P in example_processors().items():
        reg.add_proc(P, name)
    reg.add_proc(jp.pairs, "pairs")
    reg.add_proc(loops.feedback_processor(), "shift_acc")
    reg.add_proc(loops.counting_body(), "counting_body")
    for h in (jp.filter, jp.split, jp.tensor_split, loops.feedback_hom(), loops.double_hom(),
              loops.negate_hom(), tcp.flatten_hom()):
        reg.add_hom(h)
    reg.add_hom(HomSpec("negate_all", prefix.LIST_Z, prefix.LIST_Z, lambda xs: tuple(-x for x in xs)))
    return reg


def join_certificate(budget: int = 300, seed: int = 0):
    jp = join.join_parts()
    return make_certificate(jp.join, jp.split, budget, seed)


def default_rules(certificate=None) -> list:
    rules = [rule_decompose(), rule_exchange(), rule_decouple(inverse=True), rule_fuse(),
             rule_tighten_left(), rule_tighten_right()]
    if certificate is not None:
        rules.append(rule_partition(certificate))
    return rules


def all_rules(budget: int = 200, seed: int = 0) -> list:
    jp = join.join_parts()
    cert = join_certificate(budget, seed)
    return [rule_fuse(), rule_decouple(), rule_decouple(inverse=True), rule_decompose(), rule_exchange(),
            rule_split_merge({jp.tensor.name: jp.tensor_split}, budget, seed), rule_partition(cert),
            rule_tighten_left(), rule_tighten_right(), rule_tighten_left(extract=True),
            rule_tighten_right(extract=True)]


def term_corpus() -> dict:
    """Named pipeline terms that together exercise every rule."""
    from .algebra import compose_hom, identity_hom, list_map, product_hom
    from .pipeline import Eval
    from .processor import homof
    jp = join.join_parts()
    reg = default_registry()
    neg = reg.homs["negate_all"]
    P = prefix.prefix_sum_processor()
    body = loops.feedback_processor()
    cbody = loops.counting_body()
    dbl = loops.double_hom()
    lm = list_map(dbl)
    return {
        "join_unfused": Seq(Stateful(jp.pairs), Pure(jp.filter)),
        "join_fused": Stateful(jp.join),
        "prefix_then_negate": Seq(Stateful(P), Pure(neg)),
        "negate_twice": Pure(compose_hom(neg, neg)),
        "filter_stage": Seq(Stateful(jp.join), Pure(jp.filter)),
        "map_into_loop": Seq(Pure(lm), Loop(Stateful(body))),
        "loop_then_map": Seq(Loop(Stateful(body)), Pure(lm)),
        "counting_loop": Loop(Stateful(cbody)),
        "negate_then_prefix": Seq(Pure(neg), Stateful(P)),
        "negate_then_negate": Seq(Pure(neg), Pure(neg)),
        "join_decomposed": Seq(Seq(Pure(homof(jp.pairs)), Eval(jp.pairs)), Pure(jp.filter)),
        "loop_with_inner_map": Loop(Seq(Pure(product_hom(dbl, identity_hom(loops.Z))), Stateful(body))),
        "loop_with_outer_map": Loop(Seq(Stateful(body), Pure(product_hom(dbl, identity_hom(loops.Z))))),
    }


# ---------------------------------------------------------------- suites


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: int = 0
    failures: list = field(default_factory=list)
    items: list = field(default_factory=list)
    wall_time_ms: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, rep: LawReport, expect_failure: bool = False):
        self.cases += rep.cases
        entry = {"name": rep.name, "cases": rep.cases}
        if expect_failure:
            entry["expected"] = "counterexample"
            entry["found"] = bool(rep.failures)
            if rep.failures:
                entry["witness"] = rep.failures[0].to_json()
            else:
                self.failures.append({"name": rep.name, "law": "expected-counterexample", "witness": None})
        elif rep.failures:
            for f in rep.failures:
                self.failures.append({"name": rep.name, **f.to_json()})
        self.items.append(entry)

    def to_json(self):
        return {"suite": self.suite, "seed": self.seed, "cases": self.cases, "failures": self.failures,
                "items": self.items, "wall_time_ms": self.wall_time_ms}


def suite_monoids(budget: int = 1000, seed: int = 0, inject_broken: bool = False) -> list:
    Z = alg.int_add_group()
    S = stratified.SETS
    bags = alg.mk_bag_monoid("xyz", name="Bag[X]")
    ms = [
        (prefix.LIST_Z, budget), (S, budget), (bags, budget), (Z, budget), (alg.bool_join(), budget),
        (alg.mk_counter_monoid(), budget),
        (alg.direct_product(prefix.LIST_Z, S), budget),
        (alg.tensor_product(S, S), budget), (alg.tensor_product(bags, S), budget),
        (stratified.TICKED_IN, budget), (tcp.DATA, budget), (tcp.REQUESTS, budget),
        (state_monoid(adder.CARRY, adder.BITS), budget),
        (tabulate(adder.CARRY, adder.BITS).rep_monoid, budget),
    ]
    if inject_broken:
        ms.append((broken_monoid(), budget))
    return [(M, b) for M, b in ms]


def broken_monoid():
    """Lists whose product drops the last letter: a deliberate law violation."""
    M = alg.mk_list_monoid("ab", name="Broken[List]")
    M.product = lambda a, b: (a + b)[:-1]
    return M


def run_monoid_suite(budget=1000, seed=0, inject_broken=False) -> SuiteReport:
    rep = SuiteReport("monoids", seed)
    for M, b in suite_monoids(budget, seed, inject_broken):
        rep.add(check_monoid_laws(M, b, seed))
    return rep


def suite_homs() -> list:
    jp = join.join_parts()
    procs = example_processors()
    homs = [jp.filter, jp.split, jp.tensor_split, join.merge_hom(jp.tensor), loops.double_hom(),
            loops.feedback_hom(), alg.list_map(loops.double_hom()), tcp.flatten_hom(),
            alg.identity_hom(prefix.LIST_Z), alg.compose_hom(jp.split, alg.product_hom(
                alg.identity_hom(jp.input), alg.identity_hom(jp.input)))]
    homs = [(h, 1.0) for h in homs]
    # transformer-valued images are compared pointwise over sampled states, so use fewer cases
    homs += [(P.hom, 0.025 if name in HEAVY else 0.1) for name, P in procs.items()]
    return homs


def run_hom_suite(budget=1000, seed=0) -> SuiteReport:
    rep = SuiteReport("homs", seed)
    for h, weight in suite_homs():
        rep.add(check_homomorphism(h, max(int(budget * weight), 1), seed))
    jp = join.join_parts()
    rep.add(check_homomorphism(join.pairs_hom_candidate(jp.edges, jp.edges), budget, seed), expect_failure=True)
    return rep


def suite_streamfns() -> list:
    jp = join.join_parts()
    S = stratified.SETS
    union_all = StreamFunctionSpec("union", S, S, lambda m: m, lambda p, a: a - p)
    return [
        prefix.prefix_sum_fn(),
        stratified.stratified_diff_fn(),
        completion_for_left_cancellative(stratified.list_diff_fn()),
        join.pairs_fn(jp.edges, jp.edges),
        from_homomorphism(jp.filter),
        from_homomorphism(loops.double_hom()),
        completion_for_idempotent(union_all),
    ]


def run_streamfn_suite(budget=1000, seed=0) -> SuiteReport:
    rep = SuiteReport("streamfns", seed)
    for F in suite_streamfns():
        rep.add(check_stream_function(F, budget, seed))
    rep.add(set_difference_refutation(budget, seed), expect_failure=True)
    return rep


def set_difference_refutation(budget=1000, seed=0) -> LawReport:
    S = stratified.SETS
    a = frozenset("a")
    lr = LawReport("set-difference")
    lr.cases = budget
    w = refute_extension(stratified.set_difference, stratified.SET_PAIRS, S, budget, seed,
                         candidates=[((a, frozenset()), (frozenset(), a))])
    if w is not None:
        lr.fail("no-update-exists", **w)
    return lr


def chunking_report(P: Processor, budget: int = 500, seed: int = 0) -> LawReport:
    """Whole-input output must equal the output of any chunked execution."""
    rng = random.Random(seed)
    rep = LawReport(f"chunking:{P.name}")
    for _ in range(budget):
        rep.cases += 1
        m = P.input.sample(rng)
        cs = chunk(P.input, m, rng=rng)
        whole = run(P, m)
        got = run_chunked(P, cs).output
        if not P.output.equal(whole, got):
            rep.fail("chunked-equals-whole", input=m, chunks=tuple(cs))
            break
    return rep


def run_processor_suite(budget=1000, seed=0) -> SuiteReport:
    rep = SuiteReport("processors", seed)
    for name, P in example_processors().items():
        b = budget if name not in HEAVY else max(budget // 5, 1)
        rep.add(check_soundness(P, b, seed))
        rep.add(chunking_report(P, max(b // 2, 1), seed))
    return rep


def suite_embeddings():
    A = adder.adder_processor()
    table = {((0, 0),): "x", ((0, 1),): "y", ((1, 0),): "y", ((1, 1),): "z"}
    dbl = pure(loops.double_hom(), check=False)
    jp = join.join_parts()
    flt = pure(jp.filter, check=False)
    return [
        (tabulate(A.states, A.output, A.hom), A.hom),
        (defunctionalize(A.hom, table, A.states), A.hom),
        (trivial_state_collapse(dbl.output), dbl.hom),
        (trivial_state_collapse(flt.output), flt.hom),
    ]


def run_embedding_suite(budget=1000, seed=0) -> SuiteReport:
    rep = SuiteReport("embeddings", seed)
    for emb, f in suite_embeddings():
        rep.add(check_embedding(emb, f, budget, seed))
    return rep


SUITES = {
    "monoids": run_monoid_suite,
    "homs": run_hom_suite,
    "streamfns": run_streamfn_suite,
    "processors": run_processor_suite,
    "embeddings": run_embedding_suite,
}


def run_suites(scope: str = "all", budget: int = 1000, seed: int = 0, inject_broken: bool = False) -> list:
    names = list(SUITES) if scope == "all" else [scope]
    out = []
    for n in names:
        if n not in SUITES:
            raise ValueError(f"unknown scope {n!r}")
        t0 = time.perf_counter()
        rep = SUITES[n](budget, seed, inject_broken) if n == "monoids" else SUITES[n](budget, seed)
        rep.wall_time_ms = int((time.perf_counter() - t0) * 1000)
        out.append(rep)
    return out
