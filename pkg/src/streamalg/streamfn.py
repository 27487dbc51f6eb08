"""Stream functions: a map F together with an update satisfying the prefix conditions."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .algebra import HomSpec, LawReport, MonoidSpec, check_homomorphism, shrink


@dataclass(eq=False)
class StreamFunctionSpec:
    name: str
    source: MonoidSpec
    target: MonoidSpec
    apply: Callable[[Any], Any]
    update: Callable[[Any, Any], Any]

    def __call__(self, m):
        return self.apply(m)


def check_stream_function(F: StreamFunctionSpec, budget: int = 1000, seed: int = 0) -> LawReport:
    """Check the three update conditions on sampled prefixes and extensions.

    Law names: "extension" for F(pa) = F(p)·ΔF(p,a), "unit" for ΔF(p,ε) = ε and
    "chain" for ΔF(p,ab) = ΔF(p,a)·ΔF(pa,b).
    """
    rng = random.Random(seed)
    M, N = F.source, F.target
    rep = LawReport(f"streamfn:{F.name}")
    d = F.update

    def bad_ext(p, a):
        return not N.equal(F(M.product(p, a)), N.product(F(p), d(p, a)))

    def bad_unit(p):
        return not N.equal(d(p, M.identity), N.identity)

    def bad_chain(p, a, b):
        return not N.equal(d(p, M.product(a, b)), N.product(d(p, a), d(M.product(p, a), b)))

    failed = set()
    for _ in range(budget):
        rep.cases += 1
        p, a, b = M.sample(rng), M.sample(rng), M.sample(rng)
        for law, pred, args in (("extension", bad_ext, [p, a]), ("unit", bad_unit, [p]),
                                ("chain", bad_chain, [p, a, b])):
            if law not in failed and pred(*args):
                failed.add(law)
                args = shrink(M, args, pred)
                rep.fail(law, **dict(zip("pab", args)))
        if len(failed) == 3:
            break
    return rep


def refute_extension(F: Callable, source: MonoidSpec, target: MonoidSpec, budget: int = 1000,
                     seed: int = 0, candidates=None) -> Optional[dict]:
    """Search for p, a with F(p) not a left divisor of F(pa); then no update can exist at all."""
    if target.divides is None:
        raise ValueError(f"{target.name} has no divisibility test")
    rng = random.Random(seed)
    pool = list(candidates or [])
    pool += [(source.sample(rng), source.sample(rng)) for _ in range(budget)]
    for p, a in pool:
        if not target.divides(F(p), F(source.product(p, a))):
            return {"p": p, "a": a, "F(p)": F(p), "F(pa)": F(source.product(p, a))}
    return None


def from_homomorphism(f: HomSpec, budget: int = 300, seed: int = 0) -> StreamFunctionSpec:
    rep = check_homomorphism(f, budget, seed)
    if not rep.ok:
        raise ValueError(f"{f.name} is not a homomorphism: {rep.failures[0]}")
    return StreamFunctionSpec(f.name, f.source, f.target, f.apply, lambda p, a: f.apply(a))


def completion_for_left_cancellative(F: StreamFunctionSpec, budget: int = 300, seed: int = 0) -> StreamFunctionSpec:
    """When the target is left-cancellative, the extension condition alone is enough."""
    if not F.target.left_cancellative:
        raise ValueError(f"{F.target.name} is not left-cancellative")
    rep = check_stream_function(F, budget, seed)
    bad = [c for c in rep.failures if c.law == "extension"]
    if bad:
        raise ValueError(f"update for {F.name} fails the extension condition: {bad[0]}")
    return F


def completion_for_idempotent(F: StreamFunctionSpec, budget: int = 300, seed: int = 0) -> StreamFunctionSpec:
    """Prefix the update with F(p) so the unit and chain conditions hold in an idempotent target."""
    N, M = F.target, F.source
    if not N.idempotent:
        raise ValueError(f"{N.name} is not idempotent")
    probe = StreamFunctionSpec(F.name, M, N, F.apply, F.update)
    bad = [c for c in check_stream_function(probe, budget, seed).failures if c.law == "extension"]
    if bad:
        raise ValueError(f"update for {F.name} fails the extension condition: {bad[0]}")

    def update(p, a):
        if M.is_identity(a):
            return N.identity
        return N.product(F.apply(p), F.update(p, a))

    return StreamFunctionSpec(F.name + "'", M, N, F.apply, update)


def generic_decompose(F: StreamFunctionSpec):
    """Processor whose state is the whole input seen so far and whose step is the update."""
    from .processor import Processor
    from .state import StateElement, monoid_space, state_monoid

    M, N = F.source, F.target
    S = monoid_space(M)
    SM = state_monoid(S, N)

    def hom(m):
        return StateElement.of(lambda s: (M.product(s, m), F.update(s, m)), N)

    return Processor(
        name=F.name,
        input=M,
        output=N,
        states=S,
        hom=HomSpec(f"gen[{F.name}]", M, SM, hom, key=("homof", F.name)),
        init_state=M.identity,
        init_output=F.apply(M.identity),
        key=F.name,
    )
