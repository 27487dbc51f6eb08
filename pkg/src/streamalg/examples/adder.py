"""Serial binary addition, least significant bit first; the state is the carry."""
from __future__ import annotations

import itertools

from ..algebra import mk_list_monoid
from ..processor import Processor, make_processor
from ..state import StateElement, finite_space

BIT_PAIRS = mk_list_monoid(list(itertools.product((0, 1), repeat=2)), name="List[B×B]")
BITS = mk_list_monoid((0, 1), name="List[B]")
CARRY = finite_space("{0,1}", (0, 1))


def adder_step(a: int, b: int):
    if a == b:
        return lambda c: (a, (c,))
    return lambda c: (c, (1 - c,))


def adder_generator(a: int, b: int) -> StateElement:
    return StateElement.of(adder_step(a, b), BITS)


def adder_processor() -> Processor:
    return make_processor("adder", BIT_PAIRS, BITS, CARRY, lambda g: adder_step(*g[0]), 0)


def to_bits(n: int, width: int) -> list:
    return [(n >> i) & 1 for i in range(width)]


def from_bits(bits) -> int:
    return sum(b << i for i, b in enumerate(bits))


def add_via_processor(x: int, y: int, width: int = 4) -> int:
    P = adder_processor()
    word = tuple(zip(to_bits(x, width), to_bits(y, width)))
    carry, bits = P.hom(word)(P.init_state)
    return from_bits(bits + (carry,))
