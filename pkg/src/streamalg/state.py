"""The state-transformer monoid State[S, M] of functions s -> (s', m)."""
from __future__ import annotations

import operator
import random
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

from .algebra import HomSpec, LawReport, MonoidSpec
from .codec import seed_int


@dataclass(eq=False)
class StateSpace:
    name: str
    sampler: Callable[[random.Random], Any]
    enumeration: Optional[tuple] = None
    equal: Callable[[Any, Any], bool] = operator.eq

    @property
    def finite(self) -> bool:
        return self.enumeration is not None

    def states(self, budget: int, seed: int = 0) -> Sequence:
        if self.enumeration is not None:
            return self.enumeration
        rng = random.Random(seed)
        return [self.sampler(rng) for _ in range(budget)]


def finite_space(name: str, values) -> StateSpace:
    values = tuple(values)
    return StateSpace(name, lambda rng: rng.choice(values), values)


def singleton_space() -> StateSpace:
    return finite_space("{*}", ("*",))


def int_space(name: str = "Z", lo: int = -8, hi: int = 8) -> StateSpace:
    return StateSpace(name, lambda rng: rng.randint(lo, hi))


def monoid_space(M: MonoidSpec) -> StateSpace:
    """Elements of a monoid used as states."""
    return StateSpace(M.name, M.sample, None, M.equal)


def product_space(S: StateSpace, T: StateSpace) -> StateSpace:
    enum = None
    if S.enumeration is not None and T.enumeration is not None:
        enum = tuple((s, t) for s in S.enumeration for t in T.enumeration)
    return StateSpace(
        f"({S.name}×{T.name})",
        lambda rng: (S.sampler(rng), T.sampler(rng)),
        enum,
        lambda a, b: S.equal(a[0], b[0]) and T.equal(a[1], b[1]),
    )


class StateElement:
    """A state transformer, stored as a sequence of primitive steps run left to right."""

    __slots__ = ("steps", "monoid")

    def __init__(self, steps: tuple, monoid: MonoidSpec):
        self.steps = steps
        self.monoid = monoid

    @classmethod
    def of(cls, fn: Callable[[Any], tuple], monoid: MonoidSpec) -> "StateElement":
        return cls((fn,), monoid)

    def __call__(self, s):
        outs = []
        for fn in self.steps:
            s, o = fn(s)
            outs.append(o)
        return s, self.monoid.mul(*outs)

    def then(self, other: "StateElement") -> "StateElement":
        return StateElement(self.steps + other.steps, self.monoid)

    def __repr__(self):
        return f"<state-transformer x{len(self.steps)} -> {self.monoid.name}>"


def st(pair):
    return pair[0]


def out(pair):
    return pair[1]


def ext_equal(a: StateElement, b: StateElement, S: StateSpace, budget: int = 64, seed: int = 0) -> LawReport:
    """Compare two transformers pointwise, on every state if S is finite, else on sampled states."""
    rep = LawReport("ext-equal")
    M = a.monoid
    for s in S.states(budget, seed):
        rep.cases += 1
        s1, o1 = a(s)
        s2, o2 = b(s)
        if not (S.equal(s1, s2) and M.equal(o1, o2)):
            rep.fail("pointwise", state=s, lhs=(s1, o1), rhs=(s2, o2))
            break
    return rep


@dataclass(eq=False)
class StateMonoid(MonoidSpec):
    states: Optional[StateSpace] = None
    out_monoid: Optional[MonoidSpec] = None


def _random_transformer(S: StateSpace, M: MonoidSpec, rng: random.Random) -> StateElement:
    k = rng.getrandbits(48)

    def fn(s):
        r = random.Random(seed_int(k, s))
        return S.sampler(r), M.sample(r)

    return StateElement.of(fn, M)


def state_monoid(S: StateSpace, M: MonoidSpec, budget: int = 16, seed: int = 0) -> StateMonoid:
    ident = StateElement((), M)
    return StateMonoid(
        name=f"State[{S.name},{M.name}]",
        identity=ident,
        product=lambda a, b: a.then(b),
        equal=lambda a, b: ext_equal(a, b, S, budget, seed).ok,
        gen=lambda rng: _random_transformer(S, M, rng),
        factor=lambda a: [StateElement((fn,), M) for fn in a.steps],
        encode=lambda a: {"transformer": len(a.steps)},
        decode=None,
        states=S,
        out_monoid=M,
    )


def push_forward(g: Callable, target: Optional[MonoidSpec] = None) -> Callable[[StateElement], StateElement]:
    """Lift an output map to transformers: keep the state, map the output."""
    tgt = target if target is not None else g.target

    def lift(a: StateElement) -> StateElement:
        def fn(s):
            s2, o = a(s)
            return s2, g(o)
        return StateElement.of(fn, tgt)

    return lift


def push_forward_hom(g: HomSpec, S: StateSpace) -> HomSpec:
    return HomSpec(
        f"{g.name}_*",
        state_monoid(S, g.source),
        state_monoid(S, g.target),
        push_forward(g),
        key=("push", g.key, S.name),
        parts=(g,),
    )


__all__ = [
    "StateSpace", "StateElement", "StateMonoid", "state_monoid", "st", "out", "ext_equal", "push_forward",
    "push_forward_hom", "finite_space", "singleton_space", "int_space", "monoid_space", "product_space",
]
