"""Set difference made streamable by stratifying the input with ticks (or by batching into a list)."""
from __future__ import annotations

from ..algebra import TICK, HomSpec, direct_product, list_of, mk_set_monoid, ticked
from ..processor import Processor, make_processor
from ..state import StateSpace
from ..streamfn import StreamFunctionSpec

UNIVERSE = tuple("abcd")
SETS = mk_set_monoid(UNIVERSE, name="Set[X]")
SET_PAIRS = direct_product(SETS, SETS)
TICKED_IN = ticked(SET_PAIRS)
TICKED_OUT = ticked(SETS)
PAIR_LIST = list_of(SET_PAIRS)
SET_LIST = list_of(SETS)
EMPTY = frozenset()


def set_difference(x):
    return x[0] - x[1]


def set_difference_map() -> HomSpec:
    return HomSpec("difference", SET_PAIRS, SETS, set_difference)


# -- ticked version


def stratified_diff(x) -> tuple:
    """A1 ⊤ (A2 \\ B1) ⊤ (A3 \\ B2) ... computed from the strata of x."""
    segs = TICKED_IN.segments(x)
    items, prev = [], EMPTY
    for i, (a, b) in enumerate(segs):
        if i:
            items.append(TICK)
        items.append(a - prev)
        prev = b
    return TICKED_OUT.normalize(items)


def _previous_negative(p) -> frozenset:
    segs = TICKED_IN.segments(p)
    return segs[-2][1] if len(segs) >= 2 else EMPTY


def stratified_diff_update(p, a) -> tuple:
    """Update defined generator by generator: ⊤ -> ⊤ and (A', B') -> A' \\ (previous stratum's B)."""
    out = TICKED_OUT.identity
    for g in TICKED_IN.factor(a):
        if g[0] is TICK:
            d = TICKED_OUT.tick
        else:
            d = TICKED_OUT.inject(g[0][0] - _previous_negative(p))
        out = TICKED_OUT.product(out, d)
        p = TICKED_IN.product(p, g)
    return out


def stratified_diff_fn() -> StreamFunctionSpec:
    return StreamFunctionSpec("stratified_diff", TICKED_IN, TICKED_OUT, stratified_diff, stratified_diff_update)


def _subsets_sampler(rng):
    return frozenset(x for x in UNIVERSE if rng.random() < 0.3)


STRATUM_STATES = StateSpace(
    "(Set×Set×B)",
    lambda rng: (_subsets_sampler(rng), _subsets_sampler(rng), rng.random() < 0.5),
)


def stratified_diff_ticked() -> Processor:
    """State: (negatives of the previous stratum, negatives of the current one, just-ticked flag).

    The flag makes a second consecutive tick a no-op, matching ⊤⊤ = ⊤ in the input.
    """
    def on_gen(g):
        item = g[0]
        if item is TICK:
            def fn(s):
                prev, cur, fresh = s
                if fresh:
                    return s, TICKED_OUT.tick
                return (cur, EMPTY, True), TICKED_OUT.tick
            return fn
        a, b = item

        def fn(s):
            prev, cur, _ = s
            return (prev, cur | b, False), TICKED_OUT.inject(a - prev)
        return fn

    return make_processor("stratified_diff_ticked", TICKED_IN, TICKED_OUT, STRATUM_STATES, on_gen,
                          (EMPTY, EMPTY, False))


# -- list version


def list_diff(xs) -> tuple:
    out, prev = [], EMPTY
    for a, b in xs:
        out.append(a - prev)
        prev = b
    return tuple(out)


def list_diff_fn() -> StreamFunctionSpec:
    def update(p, a):
        prev = p[-1][1] if p else EMPTY
        out = []
        for x, y in a:
            out.append(x - prev)
            prev = y
        return tuple(out)
    return StreamFunctionSpec("stratified_diff_list", PAIR_LIST, SET_LIST, list_diff, update)


def stratified_diff_list() -> Processor:
    def on_gen(g):
        a, b = g[0]
        return lambda prev: (b, (a - prev,))
    return make_processor("stratified_diff_list", PAIR_LIST, SET_LIST,
                          StateSpace("Set[X]", _subsets_sampler), on_gen, EMPTY)


def to_ticked(pairs) -> tuple:
    """[(A1,B1), (A2,B2), ...] -> (A1,B1) ⊤ (A2,B2) ⊤ ..."""
    items = []
    for i, p in enumerate(pairs):
        if i:
            items.append(TICK)
        items.append(p)
    return TICKED_IN.normalize(items)


def sets_to_ticked(sets) -> tuple:
    items = []
    for i, s in enumerate(sets):
        if i:
            items.append(TICK)
        items.append(s)
    return TICKED_OUT.normalize(items)
