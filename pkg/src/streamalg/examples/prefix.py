"""Prefix sums, and integration/differentiation over a group."""
from __future__ import annotations

from ..algebra import MonoidSpec, int_add_group, list_of, mk_list_monoid
from ..processor import Processor, make_processor
from ..state import StateElement, int_space, monoid_space
from ..streamfn import StreamFunctionSpec

Z = int_add_group()
LIST_Z = mk_list_monoid(lambda rng: rng.randint(-4, 4), name="List[Z]")


def prefix_sums(xs, start=0) -> tuple:
    out, s = [], start
    for x in xs:
        s += x
        out.append(s)
    return tuple(out)


def prefix_sum_fn() -> StreamFunctionSpec:
    return StreamFunctionSpec("prefix_sum", LIST_Z, LIST_Z, prefix_sums,
                              lambda xs, ys: prefix_sums(ys, sum(xs)))


def prefix_sum_generator(n: int) -> StateElement:
    """Image of the one-letter list [n]: s -> (s + n, [s + n])."""
    return StateElement.of(lambda s: (s + n, (s + n,)), LIST_Z)


def prefix_sum_processor() -> Processor:
    return make_processor("prefix_sum", LIST_Z, LIST_Z, int_space("Z"),
                          lambda g: prefix_sum_generator(g[0]).steps[0], 0)


def _require_group(G: MonoidSpec):
    if not G.group or G.inverse is None:
        raise ValueError(f"{G.name} is not a group")


def integral_processor(G: MonoidSpec = Z) -> Processor:
    _require_group(G)
    L = list_of(G)

    def on_gen(g):
        a = g[0]

        def fn(s):
            t = G.product(s, a)
            return t, (t,)
        return fn

    return make_processor(f"integral[{G.name}]", L, L, monoid_space(G), on_gen, G.identity, (),
                          key=f"integral[{G.name}]")


def derivative_processor(G: MonoidSpec = Z) -> Processor:
    _require_group(G)
    L = list_of(G)

    def on_gen(g):
        b = g[0]
        return lambda t: (b, (G.product(G.inverse(t), b),))

    return make_processor(f"derivative[{G.name}]", L, L, monoid_space(G), on_gen, G.identity, (),
                          key=f"derivative[{G.name}]")
