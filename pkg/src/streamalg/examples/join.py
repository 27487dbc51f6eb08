"""Self-join of an edge relation: paths of length two, computed incrementally."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from ..algebra import HomSpec, MonoidSpec, compose_hom, direct_product, mk_set_monoid, tensor_product
from ..processor import Processor, eval_pushed, fuse, homof, par, pure, seq
from ..state import push_forward_hom
from ..streamfn import StreamFunctionSpec, generic_decompose


def composes(a, b) -> bool:
    return a[1] == b[0]


def target_parity(a) -> int:
    return a[1] % 2


def source_parity(b) -> int:
    return b[0] % 2


@dataclass(eq=False)
class JoinConfig:
    vertices: int = 4
    predicate: Callable = composes
    hash_left: Callable = target_parity
    hash_right: Callable = source_parity
    name: str = "parity"

    def edges(self) -> list:
        return list(itertools.product(range(self.vertices), repeat=2))

    def validate(self):
        """Matching pairs must land in the same partition."""
        for a in self.edges():
            for b in self.edges():
                if self.hash_left(a) != self.hash_right(b) and self.predicate(a, b):
                    raise ValueError(f"partition invariant violated by {a}, {b}")
        return self


def edge_set_monoid(cfg: JoinConfig) -> MonoidSpec:
    return mk_set_monoid(cfg.edges(), name=f"Set[Edge{cfg.vertices}]")


def pairs_fn(M: MonoidSpec, N: MonoidSpec) -> StreamFunctionSpec:
    """Pairs((m, n)) = m⊗n with update m⊗n' + m'⊗n + m'⊗n'."""
    MN = direct_product(M, N)
    T = tensor_product(M, N)

    def apply(x):
        return T.embed(x[0], x[1])

    def update(p, a):
        m, n = p
        m2, n2 = a
        return T.mul(T.embed(m, n2), T.embed(m2, n), T.embed(m2, n2))

    return StreamFunctionSpec("pairs", MN, T, apply, update)


def pairs_hom_candidate(M: MonoidSpec, N: MonoidSpec) -> HomSpec:
    """Pairs viewed as a plain map; it is not a homomorphism."""
    F = pairs_fn(M, N)
    return HomSpec("pairs", F.source, F.target, F.apply)


def pairs_processor(M: MonoidSpec, N: MonoidSpec) -> Processor:
    return generic_decompose(pairs_fn(M, N))


def filter_hom(cfg: JoinConfig, T: MonoidSpec) -> HomSpec:
    pred = cfg.predicate
    if getattr(T, "set_mode", True):
        keep = lambda x: frozenset(p for p in x if pred(*p))
    else:
        from ..algebra import Bag
        keep = lambda x: Bag(p for p in x if pred(*p))
    return HomSpec("filter", T, T, keep)


def split_hom(cfg: JoinConfig, M: MonoidSpec, N: MonoidSpec) -> HomSpec:
    """Route left generators by hash_left and right generators by hash_right."""
    MN = direct_product(M, N)
    hl, hr = cfg.hash_left, cfg.hash_right

    def apply(x):
        m, n = x
        m0 = frozenset(a for a in m if hl(a) == 0)
        n0 = frozenset(b for b in n if hr(b) == 0)
        return (m0, n0), (m - m0, n - n0)

    return HomSpec("split", MN, direct_product(MN, MN), apply)


def tensor_split_hom(cfg: JoinConfig, T: MonoidSpec) -> HomSpec:
    hl = cfg.hash_left

    def apply(x):
        x0 = frozenset(p for p in x if hl(p[0]) == 0)
        return x0, x - x0

    return HomSpec("split⊗", T, direct_product(T, T), apply)


def merge_hom(M: MonoidSpec) -> HomSpec:
    return HomSpec(f"merge[{M.name}]", direct_product(M, M), M, lambda x: M.product(x[0], x[1]),
                   key=("merge", M.name))


@dataclass(eq=False)
class JoinParts:
    cfg: JoinConfig
    edges: MonoidSpec
    input: MonoidSpec
    tensor: MonoidSpec
    pairs: Processor
    filter: HomSpec
    split: HomSpec
    merge: HomSpec
    tensor_split: HomSpec
    join: Processor = field(default=None)


def join_parts(cfg: JoinConfig = None) -> JoinParts:
    cfg = (cfg or JoinConfig()).validate()
    E = edge_set_monoid(cfg)
    P = pairs_processor(E, E)
    T = P.output
    flt = filter_hom(cfg, T)
    parts = JoinParts(cfg, E, P.input, T, P, flt, split_hom(cfg, E, E), merge_hom(T), tensor_split_hom(cfg, T))
    pushed = push_forward_hom(flt, P.states)
    parts.join = fuse(compose_hom(homof(P), pushed), eval_pushed(P, flt))
    return parts


def join_processor(cfg: JoinConfig = None) -> Processor:
    """Fused join: state is the input so far; each step emits only the new matching pairs."""
    return join_parts(cfg).join


def unfused_join(parts: JoinParts) -> Processor:
    return seq(parts.pairs, pure(parts.filter, check=False))


def partitioned_join(parts: JoinParts) -> Processor:
    return seq(pure(parts.split, check=False),
               seq(par(parts.join, parts.join), pure(parts.merge, check=False)))


def join_pipeline(cfg: JoinConfig = None):
    """The unoptimized term: pairs followed by a filter."""
    from ..pipeline import Pure, Seq, Stateful
    parts = join_parts(cfg)
    return Seq(Stateful(parts.pairs), Pure(parts.filter))


def nested_loop_join(cfg: JoinConfig, left, right) -> frozenset:
    return frozenset((a, b) for a in left for b in right if cfg.predicate(a, b))
