"""Concrete representations of state transformers: defunctionalized words and lookup tables."""
from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .algebra import HomSpec, LawReport, MonoidSpec, mk_list_monoid
from .codec import dumps
from .state import StateElement, StateSpace, ext_equal, singleton_space


@dataclass(eq=False)
class Embedding:
    """An injective homomorphism from the image of f into rep_monoid, with its inverse psi.

    ``encode`` is f followed by phi, applied to source elements directly.
    ``phi`` is given when image elements can be converted without knowing their source.
    """
    name: str
    rep_monoid: MonoidSpec
    encode: Callable[[Any], Any]
    psi: Callable[[Any], StateElement]
    states: StateSpace
    phi: Optional[Callable[[StateElement], Any]] = None

    def to_json(self, x) -> str:
        return dumps(self.rep_monoid.encode(x))

    def from_json(self, text: str):
        return self.rep_monoid.decode(json.loads(text))


def defunctionalize(f: HomSpec, generator_table: dict, states: StateSpace, budget: int = 64,
                    seed: int = 0) -> Embedding:
    """Replace each generator's transformer by a tag; a word of tags stands for their product.

    Generators sharing a tag must have extensionally equal images.
    """
    reps: dict = {}
    for g, tag in generator_table.items():
        if tag in reps:
            if not ext_equal(f(reps[tag]), f(g), states, budget, seed).ok:
                raise ValueError(f"tag {tag!r} names transformers that differ")
        else:
            reps[tag] = g
    images = {tag: f(g) for tag, g in reps.items()}
    out_monoid = f.target.out_monoid
    words = mk_list_monoid(sorted(reps, key=str), name=f"Word[{f.name}]")

    def encode(m):
        return tuple(generator_table[g] for g in f.source.factor(m))

    def psi(word):
        steps: tuple = ()
        for tag in word:
            steps += images[tag].steps
        return StateElement(steps, out_monoid)

    return Embedding(f"defunct[{f.name}]", words, encode, psi, states)


def tabulation_monoid(S: StateSpace, N: MonoidSpec) -> MonoidSpec:
    if S.enumeration is None:
        raise ValueError(f"state space {S.name} is not enumerated")
    enum = S.enumeration
    index = {s: i for i, s in enumerate(enum)}

    def product(a, b):
        out = []
        for s1, n1 in a:
            s2, n2 = b[index[s1]]
            out.append((s2, N.product(n1, n2)))
        return tuple(out)

    def gen(rng):
        return tuple((rng.choice(enum), N.sample(rng)) for _ in enum)

    return MonoidSpec(
        name=f"Tab[{S.name},{N.name}]",
        identity=tuple((s, N.identity) for s in enum),
        product=product,
        equal=lambda a, b: len(a) == len(b) and all(x[0] == y[0] and N.equal(x[1], y[1]) for x, y in zip(a, b)),
        gen=gen,
        encode=lambda t: [[s, N.encode(n)] for s, n in t],
        decode=lambda v: tuple((s, N.decode(n)) for s, n in v),
    )


def tabulate(S: StateSpace, N: MonoidSpec, f: Optional[HomSpec] = None) -> Embedding:
    """Represent a transformer by its values on every state, in enumeration order."""
    T = tabulation_monoid(S, N)
    enum = S.enumeration
    index = {s: i for i, s in enumerate(enum)}

    def phi(a: StateElement):
        return tuple(a(s) for s in enum)

    def psi(t):
        return StateElement.of(lambda s: t[index[s]], N)

    encode = (lambda m: phi(f(m))) if f is not None else None
    return Embedding(T.name, T, encode, psi, S, phi)


def tabulate_chunked(emb: Embedding, f: HomSpec, chunks: list, workers: int = 4):
    """Tabulate each chunk independently (in parallel) and multiply the tables."""
    with ThreadPoolExecutor(max_workers=workers) as ex:
        tables = list(ex.map(lambda c: emb.phi(f(c)), chunks))
    return emb.rep_monoid.mul(*tables)


def trivial_state_collapse(N: MonoidSpec) -> Embedding:
    """With one state, a transformer is just its output."""
    S = singleton_space()
    return Embedding(
        f"collapse[{N.name}]",
        N,
        None,
        lambda n: StateElement.of(lambda s: (s, n), N),
        S,
        lambda a: a("*")[1],
    )


def check_embedding(emb: Embedding, f: HomSpec, budget: int = 1000, seed: int = 0) -> LawReport:
    """Round-trip, injectivity on samples, and the homomorphism laws for both directions."""
    rng = random.Random(seed)
    M, P = f.source, emb.rep_monoid
    S = emb.states
    rep = LawReport(f"embedding:{emb.name}")
    encode = emb.encode if emb.encode is not None else (lambda m: emb.phi(f(m)))
    seen: dict = {}
    for _ in range(budget):
        rep.cases += 1
        a, b = M.sample(rng), M.sample(rng)
        ea, eb = encode(a), encode(b)
        if not ext_equal(emb.psi(ea), f(a), S, 32, seed).ok:
            rep.fail("round-trip", m=a)
            break
        if not P.equal(encode(M.product(a, b)), P.product(ea, eb)):
            rep.fail("encode-product", a=a, b=b)
            break
        if not ext_equal(emb.psi(P.product(ea, eb)), emb.psi(ea).then(emb.psi(eb)), S, 32, seed).ok:
            rep.fail("decode-product", a=a, b=b)
            break
        if emb.phi is not None:
            if not P.equal(emb.phi(f(a)), ea):
                rep.fail("phi-agrees", m=a)
                break
        key = dumps(P.encode(ea))
        if key in seen and not ext_equal(f(seen[key]), f(a), S, 32, seed).ok:
            rep.fail("injective", a=seen[key], b=a)
            break
        seen.setdefault(key, a)
    return rep
