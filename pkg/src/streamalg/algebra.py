"""Monoids, homomorphisms, and randomized law checking."""
from __future__ import annotations

import itertools
import operator
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, Sequence

from .codec import dumps, plain_decode, plain_encode, to_jsonable

Element = Any


class MonoidMismatch(TypeError):
    """Raised when two stages disagree on the monoid at their interface."""


class Tick:
    """The non-identity element of the two-element join monoid, used as a stratum marker."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "⊤"

    def __reduce__(self):
        return (Tick, ())


TICK = Tick()


def _sort_key(x):
    return dumps(to_jsonable(x))


def _canonical_sorted(xs) -> list:
    """Deterministic order: natural order when the items compare, else by canonical JSON."""
    try:
        return sorted(xs)
    except TypeError:
        return sorted(xs, key=_sort_key)


class Bag:
    """Immutable multiset."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, items: Iterable = ()):
        c = Counter(items)
        self._counts = {k: v for k, v in c.items() if v > 0}
        self._hash = None

    @classmethod
    def from_counts(cls, counts: dict) -> "Bag":
        b = cls()
        b._counts = {k: v for k, v in counts.items() if v > 0}
        return b

    def counts(self) -> dict:
        return dict(self._counts)

    def count(self, x) -> int:
        return self._counts.get(x, 0)

    def __iter__(self):
        for k in _canonical_sorted(self._counts):
            for _ in range(self._counts[k]):
                yield k

    def __len__(self):
        return sum(self._counts.values())

    def __add__(self, other: "Bag") -> "Bag":
        c = dict(self._counts)
        for k, v in other._counts.items():
            c[k] = c.get(k, 0) + v
        return Bag.from_counts(c)

    def issubbag(self, other: "Bag") -> bool:
        return all(other._counts.get(k, 0) >= v for k, v in self._counts.items())

    def __eq__(self, other):
        return isinstance(other, Bag) and self._counts == other._counts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self):
        return "Bag(" + repr(list(self)) + ")"


def _geometric(rng: random.Random, p: float = 0.2) -> int:
    # mean (1 - p) / p == 4 generators
    k = 0
    while rng.random() >= p:
        k += 1
    return k


@dataclass(eq=False)
class MonoidSpec:
    name: str
    identity: Element
    product: Callable[[Element, Element], Element]
    equal: Callable[[Element, Element], bool] = operator.eq
    gen: Optional[Callable[[random.Random], Element]] = None
    factor: Optional[Callable[[Element], list]] = None
    atoms: Optional[Callable[[Element], Iterable]] = None
    commutative: bool = False
    idempotent: bool = False
    left_cancellative: bool = False
    group: bool = False
    inverse: Optional[Callable[[Element], Element]] = None
    divides: Optional[Callable[[Element, Element], bool]] = None
    sampler: Optional[Callable[[random.Random], Element]] = None
    encode: Callable[[Element], Any] = plain_encode
    decode: Callable[[Any], Element] = plain_decode
    atom_encode: Callable[[Any], Any] = plain_encode
    atom_decode: Callable[[Any], Any] = plain_decode
    fold: Optional[Callable[[list], Element]] = None

    @property
    def flags(self) -> frozenset:
        names = ("commutative", "idempotent", "left_cancellative", "group")
        return frozenset(n for n in names if getattr(self, n))

    def mul(self, *xs: Element) -> Element:
        if self.fold is not None:
            return self.fold(xs)
        acc = self.identity
        for x in xs:
            acc = self.product(acc, x)
        return acc

    def is_identity(self, x: Element) -> bool:
        return self.equal(x, self.identity)

    def sample(self, rng: random.Random) -> Element:
        if self.sampler is not None:
            return self.sampler(rng)
        if self.gen is None:
            raise ValueError(f"monoid {self.name} has no sampler")
        return self.mul(*(self.gen(rng) for _ in range(_geometric(rng))))

    def __repr__(self):
        return f"<monoid {self.name}>"


def _chooser(alphabet):
    if callable(alphabet):
        return alphabet
    seq = list(alphabet)
    return lambda rng: rng.choice(seq)


def mk_list_monoid(alphabet, name: str = "List", atom_encode=plain_encode, atom_decode=plain_decode,
                   atom_equal=None) -> MonoidSpec:
    """Free monoid: tuples under concatenation."""
    pick = _chooser(alphabet)
    if atom_equal is None:
        eq = operator.eq
    else:
        def eq(a, b):
            return len(a) == len(b) and all(atom_equal(x, y) for x, y in zip(a, b))
    return MonoidSpec(
        name=name,
        identity=(),
        product=lambda a, b: a + b,
        equal=eq,
        gen=lambda rng: (pick(rng),),
        factor=lambda m: [(x,) for x in m],
        atoms=lambda m: iter(m),
        left_cancellative=True,
        fold=lambda xs: tuple(itertools.chain.from_iterable(xs)),
        divides=lambda a, b: len(a) <= len(b) and eq(b[: len(a)], a),
        encode=lambda m: [atom_encode(x) for x in m],
        decode=lambda v: tuple(atom_decode(x) for x in v),
        atom_encode=atom_encode,
        atom_decode=atom_decode,
    )


def mk_set_monoid(universe, name: str = "Set", atom_encode=plain_encode, atom_decode=plain_decode) -> MonoidSpec:
    """Finite sets under union."""
    pick = _chooser(universe)
    return MonoidSpec(
        name=name,
        identity=frozenset(),
        product=lambda a, b: a | b,
        gen=lambda rng: frozenset([pick(rng)]),
        factor=lambda m: [frozenset([x]) for x in _canonical_sorted(m)],
        atoms=_canonical_sorted,
        commutative=True,
        idempotent=True,
        divides=lambda a, b: a <= b,
        encode=lambda m: sorted((atom_encode(x) for x in m), key=dumps),
        decode=lambda v: frozenset(atom_decode(x) for x in v),
        atom_encode=atom_encode,
        atom_decode=atom_decode,
    )


def mk_bag_monoid(universe, name: str = "Bag", atom_encode=plain_encode, atom_decode=plain_decode) -> MonoidSpec:
    """Finite multisets under sum."""
    pick = _chooser(universe)
    return MonoidSpec(
        name=name,
        identity=Bag(),
        product=lambda a, b: a + b,
        gen=lambda rng: Bag([pick(rng)]),
        factor=lambda m: [Bag([x]) for x in m],
        atoms=lambda m: iter(m),
        commutative=True,
        left_cancellative=True,
        divides=lambda a, b: a.issubbag(b),
        encode=lambda m: sorted((atom_encode(x) for x in m), key=dumps),
        decode=lambda v: Bag(atom_decode(x) for x in v),
        atom_encode=atom_encode,
        atom_decode=atom_decode,
    )


def int_add_group(lo: int = -6, hi: int = 6) -> MonoidSpec:
    return MonoidSpec(
        name="Z",
        identity=0,
        product=operator.add,
        gen=lambda rng: rng.choice((1, -1)),
        factor=lambda n: [1] * n if n >= 0 else [-1] * (-n),
        commutative=True,
        left_cancellative=True,
        group=True,
        inverse=operator.neg,
        divides=lambda a, b: True,
        sampler=lambda rng: rng.randint(lo, hi),
    )


def bool_join() -> MonoidSpec:
    """({⊥, ⊤}, or, ⊥)."""
    return MonoidSpec(
        name="B",
        identity=False,
        product=lambda a, b: a or b,
        gen=lambda rng: True,
        factor=lambda b: [True] if b else [],
        commutative=True,
        idempotent=True,
        divides=lambda a, b: b or not a,
    )


def mk_counter_monoid(name: str = "N") -> MonoidSpec:
    return MonoidSpec(
        name=name,
        identity=0,
        product=operator.add,
        gen=lambda rng: 1,
        factor=lambda n: [1] * n,
        commutative=True,
        left_cancellative=True,
        divides=lambda a, b: a <= b,
    )


@dataclass(eq=False)
class DirectProduct(MonoidSpec):
    left: Optional[MonoidSpec] = None
    right: Optional[MonoidSpec] = None

    def inl(self, m):
        return (m, self.right.identity)

    def inr(self, n):
        return (self.left.identity, n)


def direct_product(M: MonoidSpec, N: MonoidSpec) -> DirectProduct:
    def factor(x):
        if M.factor is None or N.factor is None:
            return [(x[0], N.identity), (M.identity, x[1])]
        return [(g, N.identity) for g in M.factor(x[0])] + [(M.identity, h) for h in N.factor(x[1])]

    def gen(rng):
        if rng.random() < 0.5:
            return (M.gen(rng) if M.gen else M.sample(rng), N.identity)
        return (M.identity, N.gen(rng) if N.gen else N.sample(rng))

    divides = None
    if M.divides and N.divides:
        divides = lambda a, b: M.divides(a[0], b[0]) and N.divides(a[1], b[1])
    inverse = None
    if M.group and N.group:
        inverse = lambda a: (M.inverse(a[0]), N.inverse(a[1]))
    sampler = None
    if M.sampler or N.sampler:
        sampler = lambda rng: (M.sample(rng), N.sample(rng))
    return DirectProduct(
        name=f"({M.name}×{N.name})",
        identity=(M.identity, N.identity),
        product=lambda a, b: (M.product(a[0], b[0]), N.product(a[1], b[1])),
        equal=lambda a, b: M.equal(a[0], b[0]) and N.equal(a[1], b[1]),
        gen=gen,
        factor=factor,
        commutative=M.commutative and N.commutative,
        idempotent=M.idempotent and N.idempotent,
        left_cancellative=M.left_cancellative and N.left_cancellative,
        group=M.group and N.group,
        inverse=inverse,
        divides=divides,
        sampler=sampler,
        encode=lambda x: [M.encode(x[0]), N.encode(x[1])],
        decode=lambda v: (M.decode(v[0]), N.decode(v[1])),
        left=M,
        right=N,
    )


@dataclass(eq=False)
class TensorProduct(MonoidSpec):
    left: Optional[MonoidSpec] = None
    right: Optional[MonoidSpec] = None
    set_mode: bool = True

    def embed(self, m, n):
        """The bilinear map m ⊗ n, expanded over generator atoms."""
        pairs = [(a, b) for a in self.left.atoms(m) for b in self.right.atoms(n)]
        return frozenset(pairs) if self.set_mode else Bag(pairs)

    def terms(self, x) -> Iterable:
        return x if self.set_mode else iter(x)


def tensor_product(M: MonoidSpec, N: MonoidSpec) -> TensorProduct:
    if not (M.commutative and N.commutative):
        raise ValueError("tensor product requires commutative factors")
    if M.atoms is None or N.atoms is None:
        raise ValueError("tensor product requires generator-presented factors")
    set_mode = M.idempotent and N.idempotent

    def enc_pair(p):
        return [M.atom_encode(p[0]), N.atom_encode(p[1])]

    def dec_pair(v):
        return (M.atom_decode(v[0]), N.atom_decode(v[1]))

    def gen(rng):
        a = next(iter(M.atoms(M.gen(rng))))
        b = next(iter(N.atoms(N.gen(rng))))
        return frozenset([(a, b)]) if set_mode else Bag([(a, b)])

    if set_mode:
        base = dict(
            identity=frozenset(),
            product=lambda a, b: a | b,
            factor=lambda x: [frozenset([p]) for p in _canonical_sorted(x)],
            atoms=_canonical_sorted,
            idempotent=True,
            divides=lambda a, b: a <= b,
            decode=lambda v: frozenset(dec_pair(p) for p in v),
        )
    else:
        base = dict(
            identity=Bag(),
            product=lambda a, b: a + b,
            factor=lambda x: [Bag([p]) for p in x],
            atoms=lambda x: iter(x),
            left_cancellative=True,
            divides=lambda a, b: a.issubbag(b),
            decode=lambda v: Bag(dec_pair(p) for p in v),
        )
    return TensorProduct(
        name=f"({M.name}⊗{N.name})",
        gen=gen,
        commutative=True,
        encode=lambda x: sorted((enc_pair(p) for p in x), key=dumps),
        atom_encode=enc_pair,
        atom_decode=dec_pair,
        left=M,
        right=N,
        set_mode=set_mode,
        **base,
    )


@dataclass(eq=False)
class Ticked(MonoidSpec):
    """Free product M ⋆ B in normal form: tuples alternating non-identity segments and ticks."""

    base: Optional[MonoidSpec] = None

    def normalize(self, items: Iterable) -> tuple:
        M = self.base
        out: list = []
        for it in items:
            if it is TICK:
                if out and out[-1] is TICK:
                    continue
                out.append(TICK)
            else:
                if M.is_identity(it):
                    continue
                if out and out[-1] is not TICK:
                    merged = M.product(out[-1], it)
                    if M.is_identity(merged):
                        out.pop()
                    else:
                        out[-1] = merged
                else:
                    out.append(it)
        return tuple(out)

    def inject(self, m) -> tuple:
        return self.normalize((m,))

    @property
    def tick(self) -> tuple:
        return (TICK,)

    def segments(self, x) -> list:
        """Split into the list of strata (base elements) separated by ticks."""
        segs = [self.base.identity]
        for it in x:
            if it is TICK:
                segs.append(self.base.identity)
            else:
                segs[-1] = self.base.product(segs[-1], it)
        return segs


def ticked(M: MonoidSpec) -> Ticked:
    def factor(x):
        out = []
        for it in x:
            if it is TICK:
                out.append((TICK,))
            elif M.factor is not None:
                out.extend((g,) for g in M.factor(it))
            else:
                out.append((it,))
        return out

    def encode(x):
        return ["⊤" if it is TICK else M.encode(it) for it in x]

    T = Ticked(name=f"T[{M.name}]", identity=(), product=None, factor=factor, encode=encode, base=M)

    def gen(rng):
        if rng.random() < 0.3:
            return (TICK,)
        return T.normalize((M.gen(rng) if M.gen else M.sample(rng),))

    def equal(a, b):
        return len(a) == len(b) and all(
            (x is TICK and y is TICK) or (x is not TICK and y is not TICK and M.equal(x, y)) for x, y in zip(a, b)
        )

    def product(a, b):
        # both sides are normal forms, so only the junction can need work
        if not a:
            return b
        if not b:
            return a
        x, y = a[-1], b[0]
        if (x is TICK) != (y is TICK):
            return a + b
        return T.normalize(a + b)

    T.product = product
    T.fold = lambda xs: T.normalize(itertools.chain.from_iterable(xs))
    T.gen = gen
    T.equal = equal
    T.decode = lambda v: T.normalize(TICK if it == "⊤" else M.decode(it) for it in v)
    return T


def list_of(M: MonoidSpec) -> MonoidSpec:
    """List monoid whose letters are elements of M."""
    return mk_list_monoid(M.sample, name=f"List[{M.name}]", atom_encode=M.encode, atom_decode=M.decode,
                          atom_equal=M.equal)


# ---------------------------------------------------------------- homomorphisms


@dataclass(eq=False)
class HomSpec:
    name: str
    source: MonoidSpec
    target: MonoidSpec
    apply: Callable[[Element], Element]
    generator_table: Optional[dict] = None
    key: Any = None
    parts: tuple = ()

    def __post_init__(self):
        if self.key is None:
            self.key = self.name

    def __call__(self, x):
        return self.apply(x)

    def __repr__(self):
        return f"<hom {self.name}: {self.source.name} -> {self.target.name}>"


def hom_from_generators(name: str, source: MonoidSpec, target: MonoidSpec, on_gen: Callable,
                        key=None) -> HomSpec:
    """Extend a map on generators along the source's canonical factorization."""
    def apply(m):
        return target.mul(*(on_gen(g) for g in source.factor(m)))
    return HomSpec(name, source, target, apply, key=key)


def identity_hom(M: MonoidSpec) -> HomSpec:
    return HomSpec(f"id[{M.name}]", M, M, lambda x: x, key=("id", M.name))


def compose_hom(f: HomSpec, g: HomSpec) -> HomSpec:
    """f then g."""
    if f.target.name != g.source.name:
        raise MonoidMismatch(f"cannot compose {f.name}: ->{f.target.name} with {g.name}: {g.source.name}->")
    return HomSpec(f"{f.name};{g.name}", f.source, g.target, lambda x: g.apply(f.apply(x)),
                   key=("compose", f.key, g.key), parts=(f, g))


def product_hom(f: HomSpec, g: HomSpec) -> HomSpec:
    src = direct_product(f.source, g.source)
    tgt = direct_product(f.target, g.target)
    return HomSpec(f"({f.name}×{g.name})", src, tgt, lambda x: (f.apply(x[0]), g.apply(x[1])),
                   key=("prod", f.key, g.key), parts=(f, g))


def list_map(f: HomSpec) -> HomSpec:
    """Apply f to every letter of a list of batches."""
    return HomSpec(f"map({f.name})", list_of(f.source), list_of(f.target),
                   lambda xs: tuple(f.apply(x) for x in xs), key=("map", f.key), parts=(f,))


# ---------------------------------------------------------------- law checking


@dataclass
class Counterexample:
    law: str
    witness: dict

    def to_json(self):
        return {"law": self.law, "witness": {k: to_jsonable(v) for k, v in self.witness.items()}}


@dataclass
class LawReport:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    max_failures: int = 5

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, law: str, **witness):
        if len(self.failures) < self.max_failures:
            self.failures.append(Counterexample(law, witness))

    def merge(self, other: "LawReport") -> "LawReport":
        self.cases += other.cases
        for f in other.failures:
            if len(self.failures) < self.max_failures:
                self.failures.append(f)
        return self

    def to_json(self):
        return {"name": self.name, "cases": self.cases, "failures": [f.to_json() for f in self.failures]}


def shrink(M: MonoidSpec, xs: Sequence, still_fails: Callable[..., bool], rounds: int = 200) -> list:
    """Greedily drop generators from each witness element while the failure persists."""
    xs = list(xs)
    if M.factor is None:
        return xs
    for _ in range(rounds):
        progressed = False
        for i, x in enumerate(xs):
            gens = M.factor(x)
            for j in range(len(gens)):
                cand = M.mul(*(gens[:j] + gens[j + 1:]))
                trial = xs[:i] + [cand] + xs[i + 1:]
                try:
                    bad = still_fails(*trial)
                except Exception:
                    bad = False
                if bad:
                    xs = trial
                    progressed = True
                    break
            if progressed:
                break
        if not progressed:
            break
    return xs


def check_monoid_laws(M: MonoidSpec, budget: int = 1000, seed: int = 0) -> LawReport:
    rng = random.Random(seed)
    rep = LawReport(f"monoid:{M.name}")
    eq, mul, e = M.equal, M.product, M.identity

    laws: list[tuple[str, int, Callable[..., bool]]] = [
        ("left-identity", 1, lambda a: eq(mul(e, a), a)),
        ("right-identity", 1, lambda a: eq(mul(a, e), a)),
        ("associativity", 3, lambda a, b, c: eq(mul(mul(a, b), c), mul(a, mul(b, c)))),
    ]
    if M.commutative:
        laws.append(("commutativity", 2, lambda a, b: eq(mul(a, b), mul(b, a))))
    if M.idempotent:
        laws.append(("idempotence", 1, lambda a: eq(mul(a, a), a)))
    if M.group:
        laws.append(("inverse", 1, lambda a: eq(mul(a, M.inverse(a)), e) and eq(mul(M.inverse(a), a), e)))
    if M.left_cancellative:
        laws.append(("left-cancellation", 3, lambda x, a, b: (not eq(mul(x, a), mul(x, b))) or eq(a, b)))
    if M.factor is not None:
        laws.append(("factorization", 1, lambda a: eq(M.mul(*M.factor(a)), a)))

    failed = set()
    for _ in range(budget):
        rep.cases += 1
        pool = [M.sample(rng) for _ in range(3)]
        for law, arity, pred in laws:
            if law in failed:
                continue
            args = pool[:arity]
            if not pred(*args):
                failed.add(law)
                args = shrink(M, args, lambda *xs: not pred(*xs))
                rep.fail(law, **{f"x{i}": v for i, v in enumerate(args)})
    return rep


def check_homomorphism(f: HomSpec, budget: int = 1000, seed: int = 0) -> LawReport:
    rng = random.Random(seed)
    rep = LawReport(f"hom:{f.name}")
    S, T = f.source, f.target
    if not T.equal(f(S.identity), T.identity):
        rep.fail("preserves-identity", image=f(S.identity))
    for _ in range(budget):
        rep.cases += 1
        a, b = S.sample(rng), S.sample(rng)

        def bad_prod(x, y):
            return not T.equal(f(S.product(x, y)), T.product(f(x), f(y)))

        if bad_prod(a, b):
            a, b = shrink(S, [a, b], bad_prod)
            rep.fail("preserves-product", a=a, b=b, lhs=f(S.product(a, b)), rhs=T.product(f(a), f(b)))
            break
        if S.factor is not None:
            gens = S.factor(a)
            if not T.equal(f(a), T.mul(*(f(g) for g in gens))):
                rep.fail("preserves-product", a=a, generators=tuple(gens))
                break
    return rep
