"""Stream processors (S, f, s_ε, o_ε) and their combinators."""
from __future__ import annotations

import random
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from .algebra import (DirectProduct, HomSpec, LawReport, MonoidMismatch, MonoidSpec, check_homomorphism,
                      compose_hom, direct_product, list_of)
from .state import (StateElement, StateSpace, product_space, singleton_space, state_monoid)
from .streamfn import StreamFunctionSpec, check_stream_function


@dataclass(eq=False)
class Processor:
    name: str
    input: MonoidSpec
    output: MonoidSpec
    states: StateSpace
    hom: HomSpec
    init_state: Any
    init_output: Any
    key: Any = None

    def __post_init__(self):
        if self.key is None:
            self.key = self.name

    def __repr__(self):
        return f"<processor {self.name}: {self.input.name} ~> {self.output.name}>"


def make_processor(name: str, input: MonoidSpec, output: MonoidSpec, states: StateSpace,
                   on_gen: Callable[[Any], Callable], init_state, init_output=None, key=None) -> Processor:
    """Build a processor from its action on generators.

    ``on_gen(g)`` returns a step ``s -> (s', o)``; an arbitrary input is processed by
    running the steps of its canonical factorization in order.
    """
    SM = state_monoid(states, output)

    def hom(m):
        return StateElement(tuple(on_gen(g) for g in input.factor(m)), output)

    if init_output is None:
        init_output = output.identity
    return Processor(name, input, output, states, HomSpec(f"gen[{name}]", input, SM, hom, key=("homof", key or name)),
                     init_state, init_output, key)


def run(P: Processor, m) -> Any:
    _, o = P.hom(m)(P.init_state)
    return P.output.product(P.init_output, o)


def step(P: Processor, s, a) -> tuple:
    """Incremental output of a from state s, with the resulting state."""
    return P.hom(a)(s)


@dataclass
class StepTrace:
    states: list = field(default_factory=list)
    chunks: list = field(default_factory=list)
    increments: list = field(default_factory=list)
    output: Any = None

    @property
    def final_state(self):
        return self.states[-1]


def run_chunked(P: Processor, chunks: Iterable) -> StepTrace:
    tr = StepTrace(states=[P.init_state])
    s = P.init_state
    acc = P.init_output
    for c in chunks:
        s, o = P.hom(c)(s)
        tr.chunks.append(c)
        tr.increments.append(o)
        tr.states.append(s)
        acc = P.output.product(acc, o)
    tr.output = acc
    return tr


def chunk(M: MonoidSpec, m, sizes: Optional[list] = None, rng: Optional[random.Random] = None,
          parts: Optional[int] = None) -> list:
    """Split m into consecutive chunks of generators (fixed sizes, k random parts, or random cuts)."""
    gens = M.factor(m)
    n = len(gens)
    if sizes is not None:
        cuts, pos = [], 0
        for k in sizes:
            pos = min(n, pos + k)
            cuts.append(pos)
        if not cuts or cuts[-1] < n:
            cuts.append(n)
    elif parts is not None:
        r = rng or random.Random(0)
        cuts = sorted(r.randint(0, n) for _ in range(parts - 1)) + [n]
    else:
        r = rng or random.Random(0)
        cuts = sorted(i for i in range(1, n) if r.random() < 0.4) + [n]
    out, prev = [], 0
    for c in cuts:
        out.append(M.mul(*gens[prev:c]))
        prev = c
    return out


# ---------------------------------------------------------------- combinators


def pure(f: HomSpec, check: bool = True, budget: int = 200, seed: int = 0) -> Processor:
    if check:
        rep = check_homomorphism(f, budget, seed)
        if not rep.ok:
            raise ValueError(f"pure requires a homomorphism; {f.name} fails {rep.failures[0].law}")
    S = singleton_space()
    N = f.target
    SM = state_monoid(S, N)
    hom = HomSpec(f"pure[{f.name}]", f.source, SM,
                  lambda a: StateElement.of(lambda s: (s, f.apply(a)), N), key=("homof", ("pure", f.key)))
    return Processor(f"pure({f.name})", f.source, N, S, hom, "*", N.identity, key=("pure", f.key))


def eval_of(P: Processor) -> Processor:
    """(S, id, s_ε, o_ε): consumes transformers and runs them from the current state."""
    SM = state_monoid(P.states, P.output)
    hom = HomSpec(f"id[{SM.name}]", SM, SM, lambda a: a, key=("id", SM.name))
    return Processor(f"eval({P.name})", SM, P.output, P.states, hom, P.init_state, P.init_output,
                     key=("eval", P.key))


def eval_pushed(P: Processor, g: HomSpec) -> Processor:
    """(S, id, s_ε, ε) over transformers whose outputs live in g's target."""
    if g.source.name != P.output.name:
        raise MonoidMismatch(f"{g.name} does not consume {P.output.name}")
    N = g.target
    SM = state_monoid(P.states, N)
    hom = HomSpec(f"id[{SM.name}]", SM, SM, lambda a: a, key=("id", SM.name))
    return Processor(f"eval[{g.name}]({P.name})", SM, N, P.states, hom, P.init_state, N.identity,
                     key=("eval*", P.key, g.key))


def homof(P: Processor) -> HomSpec:
    h = P.hom
    return HomSpec(h.name, h.source, h.target, h.apply, key=("homof", P.key))


def fuse(f: HomSpec, P: Processor) -> Processor:
    """(S, f;g, s_ε, o_ε), equivalent to pure f ; P."""
    h = compose_hom(f, P.hom)
    return Processor(f"{f.name};{P.name}", f.source, P.output, P.states, h, P.init_state, P.init_output,
                     key=("fuse", f.key, P.key))


def seq(P: Processor, Q: Processor) -> Processor:
    if P.output.name != Q.input.name:
        raise MonoidMismatch(f"{P.name} emits {P.output.name} but {Q.name} consumes {Q.input.name}")
    N = Q.output
    S = product_space(P.states, Q.states)
    SM = state_monoid(S, N)

    def hom(m):
        fa = P.hom(m)

        def fn(st_):
            s1, n = fa(st_[0])
            t1, o = Q.hom(n)(st_[1])
            return (s1, t1), o
        return StateElement.of(fn, N)

    t0, p0 = Q.hom(P.init_output)(Q.init_state)
    return Processor(f"{P.name};{Q.name}", P.input, N, S, HomSpec("seq-hom", P.input, SM, hom),
                     (P.init_state, t0), N.product(Q.init_output, p0), key=("seq", P.key, Q.key))


def par(P: Processor, Q: Processor, executor: Optional[Executor] = None) -> Processor:
    """Componentwise product; with an executor the two halves run concurrently."""
    In = direct_product(P.input, Q.input)
    Out = direct_product(P.output, Q.output)
    S = product_space(P.states, Q.states)
    SM = state_monoid(S, Out)

    def hom(x):
        fa, ga = P.hom(x[0]), Q.hom(x[1])

        def fn(st_):
            if executor is not None:
                fut = executor.submit(ga, st_[1])
                s1, p = fa(st_[0])
                t1, q = fut.result()
            else:
                s1, p = fa(st_[0])
                t1, q = ga(st_[1])
            return (s1, t1), (p, q)
        return StateElement.of(fn, Out)

    return Processor(f"({P.name}×{Q.name})", In, Out, S, HomSpec("par-hom", In, SM, hom),
                     (P.init_state, Q.init_state), (P.init_output, Q.init_output), key=("par", P.key, Q.key))


def loop(P: Processor) -> Processor:
    """Feedback: each input batch m is processed together with the previous batch's feedback."""
    if not isinstance(P.input, DirectProduct) or not isinstance(P.output, DirectProduct):
        raise MonoidMismatch("loop body must map M×U to N×U")
    M, U = P.input.left, P.input.right
    N, U2 = P.output.left, P.output.right
    if U.name != U2.name:
        raise MonoidMismatch(f"feedback monoids differ: {U.name} vs {U2.name}")
    In, Out = list_of(M), list_of(N)
    S = product_space(P.states, _feedback_space(U))
    n0, u0 = P.init_output

    def on_batch(m):
        def fn(st_):
            s, u = st_
            s1, (n, u1) = P.hom((m, u))(s)
            return (s1, u1), (n,)
        return fn

    def hom(xs):
        return StateElement(tuple(on_batch(m) for m in xs), Out)

    SM = state_monoid(S, Out)
    return Processor(f"loop({P.name})", In, Out, S, HomSpec("loop-hom", In, SM, hom),
                     (P.init_state, u0), (n0,), key=("loop", P.key))


def _feedback_space(U: MonoidSpec) -> StateSpace:
    return StateSpace(U.name, U.sample, None, U.equal)


# ---------------------------------------------------------------- checks


@dataclass
class EquivVerdict:
    status: str
    cases_run: int
    witness: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.status == "equivalent"

    def to_json(self):
        w = None
        if self.witness is not None:
            w = {k: _safe_json(v) for k, v in self.witness.items()}
        return {"status": self.status, "cases_run": self.cases_run, "witness": w}


def _safe_json(v):
    from .codec import to_jsonable
    try:
        return to_jsonable(v)
    except TypeError:
        return repr(v)


def equiv_check(P: Processor, Q: Processor, inputs: Optional[Iterable] = None, budget: int = 1000,
                seed: int = 0, chunked: bool = True) -> EquivVerdict:
    """Compare run(P, m) and run(Q, m), and cross-check random chunked executions of each."""
    if P.input.name != Q.input.name or P.output.name != Q.output.name:
        raise MonoidMismatch(f"{P.name} and {Q.name} have different types")
    rng = random.Random(seed)
    M, N = P.input, P.output
    if inputs is None:
        source = (M.sample(rng) for _ in range(budget))
    else:
        source = iter(inputs)
    n = 0
    for m in source:
        n += 1
        o1, o2 = run(P, m), run(Q, m)
        if not N.equal(o1, o2):
            return EquivVerdict("counterexample", n, {"input": m, "lhs": o1, "rhs": o2})
        if chunked and M.factor is not None:
            cs = chunk(M, m, rng=rng)
            for R, ref in ((P, o1), (Q, o2)):
                got = run_chunked(R, cs).output
                if not N.equal(got, ref):
                    return EquivVerdict("counterexample", n,
                                        {"input": m, "chunks": tuple(cs), "chunked": got, "whole": ref,
                                         "processor": R.name})
    return EquivVerdict("equivalent", n)


def denotation(P: Processor) -> StreamFunctionSpec:
    """⟦P⟧ with the update given by incremental outputs."""
    def update(p, a):
        s_p = P.hom(p)(P.init_state)[0]
        return P.hom(a)(s_p)[1]
    return StreamFunctionSpec(P.name, P.input, P.output, lambda m: run(P, m), update)


def check_soundness(P: Processor, budget: int = 1000, seed: int = 0) -> LawReport:
    rep = check_stream_function(denotation(P), budget, seed)
    rep.name = f"soundness:{P.name}"
    return rep


def check_stateless_iff_hom(P: Processor, budget: int = 500, seed: int = 0) -> LawReport:
    """For a single-state processor with empty initial output, ⟦P⟧ must be a homomorphism."""
    S = P.states
    if S.enumeration is None or len(S.enumeration) != 1:
        raise ValueError(f"{P.name} is not stateless")
    if not P.output.is_identity(P.init_output):
        raise ValueError(f"{P.name} has a non-empty initial output")
    return check_homomorphism(HomSpec(f"⟦{P.name}⟧", P.input, P.output, lambda m: run(P, m)), budget, seed)
