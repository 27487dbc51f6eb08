"""Pipeline terms, their meaning as processors, and verified rewriting."""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .algebra import (HomSpec, MonoidSpec, compose_hom, direct_product, identity_hom, list_map,
                      product_hom)
from .codec import dumps
from .processor import (EquivVerdict, Processor, equiv_check, eval_of, eval_pushed, fuse, homof, loop, par,
                        pure, run, seq)
from .state import push_forward_hom


class RewriteError(ValueError):
    pass


class NoMatch(RewriteError):
    pass


class SideConditionRejected(RewriteError):
    pass


class InvalidPath(RewriteError):
    pass


# ---------------------------------------------------------------- terms


def _merge_hom(M: MonoidSpec) -> HomSpec:
    return HomSpec(f"merge[{M.name}]", direct_product(M, M), M, lambda x: M.product(x[0], x[1]),
                   key=("merge", M.name))


class Term:
    kind = "Term"
    children: tuple = ()

    @property
    def input(self) -> MonoidSpec:
        raise NotImplementedError

    @property
    def output(self) -> MonoidSpec:
        raise NotImplementedError

    def refs(self) -> dict:
        return {}

    def with_children(self, children) -> "Term":
        return self

    def key(self):
        return (self.kind, _freeze(self.refs()), tuple(c.key() for c in self.children))

    def __eq__(self, other):
        return isinstance(other, Term) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _freeze(x):
    if isinstance(x, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in x.items()))
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    return x


@dataclass(eq=False)
class Pure(Term):
    hom: HomSpec
    kind = "Pure"

    input = property(lambda self: self.hom.source)
    output = property(lambda self: self.hom.target)

    def refs(self):
        return {"hom": self.hom.key}


@dataclass(eq=False)
class Stateful(Term):
    proc: Processor
    kind = "Stateful"

    input = property(lambda self: self.proc.input)
    output = property(lambda self: self.proc.output)

    def refs(self):
        return {"proc": self.proc.key}


@dataclass(eq=False)
class Eval(Term):
    """Runs incoming transformers of proc's state space; ``pushed`` marks a pushed-forward output map."""
    proc: Processor
    pushed: Optional[HomSpec] = None
    kind = "Eval"

    def processor(self) -> Processor:
        return eval_of(self.proc) if self.pushed is None else eval_pushed(self.proc, self.pushed)

    input = property(lambda self: self.processor().input)
    output = property(lambda self: self.pushed.target if self.pushed else self.proc.output)

    def refs(self):
        return {"proc": self.proc.key, "pushed": None if self.pushed is None else self.pushed.key}


@dataclass(eq=False)
class Seq(Term):
    left: Term
    right: Term
    kind = "Seq"

    def __post_init__(self):
        if self.left.output.name != self.right.input.name:
            from .algebra import MonoidMismatch
            raise MonoidMismatch(f"{self.left.output.name} feeds {self.right.input.name}")

    children = property(lambda self: (self.left, self.right))
    input = property(lambda self: self.left.input)
    output = property(lambda self: self.right.output)

    def with_children(self, c):
        return Seq(c[0], c[1])


@dataclass(eq=False)
class Par(Term):
    left: Term
    right: Term
    kind = "Par"

    children = property(lambda self: (self.left, self.right))
    input = property(lambda self: direct_product(self.left.input, self.right.input))
    output = property(lambda self: direct_product(self.left.output, self.right.output))

    def with_children(self, c):
        return Par(c[0], c[1])


@dataclass(eq=False)
class Loop(Term):
    body: Term
    kind = "Loop"

    children = property(lambda self: (self.body,))

    def processor(self) -> Processor:
        return loop(denote_term(self.body))

    input = property(lambda self: self.processor().input)
    output = property(lambda self: self.processor().output)

    def with_children(self, c):
        return Loop(c[0])


@dataclass(eq=False)
class Split(Term):
    hom: HomSpec
    kind = "Split"

    input = property(lambda self: self.hom.source)
    output = property(lambda self: self.hom.target)

    def refs(self):
        return {"hom": self.hom.key}


@dataclass(eq=False)
class Merge(Term):
    monoid: MonoidSpec
    kind = "Merge"

    input = property(lambda self: direct_product(self.monoid, self.monoid))
    output = property(lambda self: self.monoid)

    def refs(self):
        return {"monoid": self.monoid.name}


def denote_term(t: Term) -> Processor:
    if isinstance(t, Pure):
        return pure(t.hom, check=False)
    if isinstance(t, Stateful):
        return t.proc
    if isinstance(t, Eval):
        return t.processor()
    if isinstance(t, Seq):
        return seq(denote_term(t.left), denote_term(t.right))
    if isinstance(t, Par):
        return par(denote_term(t.left), denote_term(t.right))
    if isinstance(t, Loop):
        return t.processor()
    if isinstance(t, Split):
        return pure(t.hom, check=False)
    if isinstance(t, Merge):
        return pure(_merge_hom(t.monoid), check=False)
    raise TypeError(f"unknown term {t!r}")


def chain(stages: list) -> Term:
    """Right-nested sequence of stages."""
    t = stages[-1]
    for s in reversed(stages[:-1]):
        t = Seq(s, t)
    return t


def flatten(t: Term) -> list:
    if isinstance(t, Seq):
        return flatten(t.left) + flatten(t.right)
    return [t]


def subterm(t: Term, path) -> Term:
    for i in path:
        ch = t.children
        if not isinstance(i, int) or not 0 <= i < len(ch):
            raise InvalidPath(f"no child {i} under {t.kind}")
        t = ch[i]
    return t


def replace_at(t: Term, path, new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    ch = list(t.children)
    if not isinstance(i, int) or not 0 <= i < len(ch):
        raise InvalidPath(f"no child {i} under {t.kind}")
    ch[i] = replace_at(ch[i], rest, new)
    return t.with_children(ch)


def all_paths(t: Term, prefix=(), under_par=False):
    yield prefix, t, under_par
    for i, c in enumerate(t.children):
        yield from all_paths(c, prefix + (i,), under_par or isinstance(t, Par))


def node_count(t: Term) -> int:
    return 1 + sum(node_count(c) for c in t.children)


def cost(t: Term) -> float:
    """Critical-path work: stateful stages cost 1, stateless ones 0.1; parallel halves each see half the data."""
    if isinstance(t, Seq):
        return cost(t.left) + cost(t.right)
    if isinstance(t, Par):
        return max(cost(t.left), cost(t.right)) / 2
    if isinstance(t, Loop):
        return cost(t.body)
    if isinstance(t, (Stateful, Eval)):
        return 1.0
    return 0.1


# ---------------------------------------------------------------- serialization


def _to_json_key(k):
    if isinstance(k, tuple):
        return [_to_json_key(x) for x in k]
    return k


def _from_json_key(k):
    if isinstance(k, list):
        return tuple(_from_json_key(x) for x in k)
    return k


def term_to_json(t: Term) -> dict:
    refs = {k: _to_json_key(v) for k, v in t.refs().items()}
    return {
        "kind": t.kind,
        "children": [term_to_json(c) for c in t.children],
        "refs": refs,
        "monoids": {"input": t.input.name, "output": t.output.name},
    }


def dumps_term(t: Term) -> str:
    return dumps(term_to_json(t))


class Registry:
    """Named homomorphisms, processors and monoids, with rebuilding of derived objects from keys."""

    def __init__(self):
        self.homs: dict = {}
        self.procs: dict = {}
        self.monoids: dict = {}
        self.spaces: dict = {}

    def add_monoid(self, M: MonoidSpec):
        self.monoids.setdefault(M.name, M)
        for attr in ("left", "right", "base", "out_monoid"):
            sub = getattr(M, attr, None)
            if isinstance(sub, MonoidSpec):
                self.add_monoid(sub)
        S = getattr(M, "states", None)
        if S is not None and not callable(S):
            self.spaces.setdefault(S.name, S)
        return M

    def add_hom(self, h: HomSpec, name: Optional[str] = None):
        self.homs[name or h.key] = h
        self.add_monoid(h.source)
        self.add_monoid(h.target)
        return h

    def add_proc(self, P: Processor, name: Optional[str] = None):
        self.procs[name or P.key] = P
        self.add_monoid(P.input)
        self.add_monoid(P.output)
        self.spaces.setdefault(P.states.name, P.states)
        return P

    def hom(self, key) -> HomSpec:
        if isinstance(key, str) or key in self.homs:
            if key not in self.homs:
                raise KeyError(f"unknown homomorphism {key!r}")
            return self.homs[key]
        op = key[0]
        if op == "compose":
            return compose_hom(self.hom(key[1]), self.hom(key[2]))
        if op == "prod":
            return product_hom(self.hom(key[1]), self.hom(key[2]))
        if op == "map":
            return list_map(self.hom(key[1]))
        if op == "id":
            return identity_hom(self.monoids[key[1]])
        if op == "merge":
            return _merge_hom(self.monoids[key[1]])
        if op == "push":
            return push_forward_hom(self.hom(key[1]), self.spaces[key[2]])
        if op == "homof":
            return homof(self.proc(key[1]))
        raise KeyError(f"cannot rebuild homomorphism {key!r}")

    def proc(self, key) -> Processor:
        if isinstance(key, str) or key in self.procs:
            if key not in self.procs:
                raise KeyError(f"unknown processor {key!r}")
            return self.procs[key]
        op = key[0]
        if op == "fuse":
            return fuse(self.hom(key[1]), self.proc(key[2]))
        if op == "eval":
            return eval_of(self.proc(key[1]))
        if op == "eval*":
            return eval_pushed(self.proc(key[1]), self.hom(key[2]))
        if op == "pure":
            return pure(self.hom(key[1]), check=False)
        if op == "seq":
            return seq(self.proc(key[1]), self.proc(key[2]))
        if op == "par":
            return par(self.proc(key[1]), self.proc(key[2]))
        if op == "loop":
            return loop(self.proc(key[1]))
        raise KeyError(f"cannot rebuild processor {key!r}")

    def term(self, d: dict) -> Term:
        kind = d["kind"]
        refs = {k: _from_json_key(v) for k, v in d.get("refs", {}).items()}
        ch = [self.term(c) for c in d.get("children", [])]
        if kind == "Pure":
            t = Pure(self.hom(refs["hom"]))
        elif kind == "Stateful":
            t = Stateful(self.proc(refs["proc"]))
        elif kind == "Eval":
            t = Eval(self.proc(refs["proc"]), None if refs.get("pushed") is None else self.hom(refs["pushed"]))
        elif kind == "Seq":
            t = Seq(ch[0], ch[1])
        elif kind == "Par":
            t = Par(ch[0], ch[1])
        elif kind == "Loop":
            t = Loop(ch[0])
        elif kind == "Split":
            t = Split(self.hom(refs["hom"]))
        elif kind == "Merge":
            t = Merge(self.monoids[refs["monoid"]])
        else:
            raise ValueError(f"unknown term kind {kind!r}")
        ann = d.get("monoids")
        if ann and (ann.get("input") != t.input.name or ann.get("output") != t.output.name):
            raise ValueError(f"monoid annotations of {kind} do not match its parts")
        return t

    def loads_term(self, text: str) -> Term:
        return self.term(json.loads(text))


# ---------------------------------------------------------------- rules


class RewriteRule:
    """A local equivalence. Rules match a single node, or a window of adjacent stages in a sequence."""

    name = "rule"
    top_level_only = False

    def rewrite_node(self, t: Term) -> Optional[Term]:
        return None

    def rewrite_pair(self, a: Term, b: Term) -> Optional[list]:
        return None

    def rewrite_window(self, stages: list, i: int) -> Optional[tuple]:
        """Return (number of stages consumed, replacement stages) or None."""
        if i + 1 < len(stages):
            r = self.rewrite_pair(stages[i], stages[i + 1])
            if r is not None:
                return 2, r
        return None

    def __repr__(self):
        return f"<rule {self.name}>"


class Fuse(RewriteRule):
    name = "fuse"

    def rewrite_pair(self, a, b):
        if isinstance(a, Pure) and isinstance(b, (Stateful, Eval)):
            P = b.proc if isinstance(b, Stateful) else b.processor()
            if a.hom.target.name == P.input.name:
                return [Stateful(fuse(a.hom, P))]
        return None


class Decouple(RewriteRule):
    """pure(f;g) ~ pure f ; pure g. The inverse direction merges two adjacent pure stages."""

    def __init__(self, inverse: bool = False):
        self.inverse = inverse
        self.name = "decouple^-1" if inverse else "decouple"

    def rewrite_node(self, t):
        if not self.inverse and isinstance(t, Pure) and isinstance(t.hom.key, tuple) and t.hom.key[0] == "compose":
            f, g = t.hom.parts
            return Seq(Pure(f), Pure(g))
        return None

    def rewrite_pair(self, a, b):
        if self.inverse and isinstance(a, Pure) and isinstance(b, Pure):
            return [Pure(compose_hom(a.hom, b.hom))]
        return None


class Decompose(RewriteRule):
    name = "decompose"

    def rewrite_node(self, t):
        if isinstance(t, Stateful):
            P = t.proc
            return Seq(Pure(homof(P)), Eval(P))
        return None


class Exchange(RewriteRule):
    """eval P ; pure g ~ pure g_* ; eval_{g_*} P, when eval P starts with an empty output."""

    name = "exchange"

    def rewrite_pair(self, a, b):
        if isinstance(a, Eval) and isinstance(b, Pure) and b.hom.source.name == a.output.name:
            E = a.processor()
            if not E.output.is_identity(E.init_output):
                raise SideConditionRejected("exchange needs an empty initial output")
            g = b.hom
            pushed = g if a.pushed is None else compose_hom(a.pushed, g)
            return [Pure(push_forward_hom(g, a.proc.states)), Eval(a.proc, pushed)]
        return None


class SplitMerge(RewriteRule):
    """pure f ~ split ; (pure f × pure f) ; merge, for a registered splitter on f's input."""

    name = "split-merge"

    def __init__(self, splitters: dict, budget: int = 200, seed: int = 0):
        self.splitters = splitters
        self.budget, self.seed = budget, seed
        self._checked: dict = {}

    def _valid_splitter(self, sp: HomSpec, M: MonoidSpec) -> bool:
        if sp.key not in self._checked:
            lhs = seq(pure(sp, check=False), pure(_merge_hom(M), check=False))
            rhs = pure(identity_hom(M), check=False)
            self._checked[sp.key] = equiv_check(lhs, rhs, budget=self.budget, seed=self.seed, chunked=False).ok
        return self._checked[sp.key]

    def rewrite_node(self, t):
        if not isinstance(t, Pure):
            return None
        M, N = t.hom.source, t.hom.target
        if not N.commutative:
            raise SideConditionRejected(f"merge needs a commutative output, {N.name} is not")
        sp = self.splitters.get(M.name)
        if sp is None:
            raise SideConditionRejected(f"no splitter registered for {M.name}")
        if not self._valid_splitter(sp, M):
            raise SideConditionRejected(f"{sp.name} followed by merge is not the identity")
        return chain([Split(sp), Par(Pure(t.hom), Pure(t.hom)), Merge(N)])


@dataclass
class IndependenceCertificate:
    """Evidence that a processor distributes over the halves produced by a splitter."""
    processor: Processor
    splitter: HomSpec
    cases: int = 0
    verified: bool = False
    witness: Optional[dict] = None


def make_certificate(sigma: Processor, splitter: HomSpec, budget: int = 500, seed: int = 0) -> IndependenceCertificate:
    """Check split;merge = id, an empty initial output, and ⟦σ⟧(ab) = ⟦σ⟧(a)·⟦σ⟧(b) on split halves."""
    rng = random.Random(seed)
    M, N = sigma.input, sigma.output
    cert = IndependenceCertificate(sigma, splitter)
    if not N.is_identity(sigma.init_output):
        cert.witness = {"reason": "non-empty initial output"}
        return cert
    for _ in range(budget):
        cert.cases += 1
        x = M.sample(rng)
        a, b = splitter(x)
        if not M.equal(M.product(a, b), x):
            cert.witness = {"reason": "splitter loses data", "input": x}
            return cert
        if not N.equal(run(sigma, M.product(a, b)), N.product(run(sigma, a), run(sigma, b))):
            cert.witness = {"reason": "dependent halves", "a": a, "b": b}
            return cert
    cert.verified = True
    return cert


class Partition(RewriteRule):
    """σ ~ split ; (σ × σ) ; merge, and τ ; merge ; σ ~ τ ; (σ × σ) ; merge, given a certificate."""

    name = "partition"
    top_level_only = True

    def __init__(self, cert: IndependenceCertificate):
        self.cert = cert

    def _check(self):
        if not self.cert.verified:
            raise SideConditionRejected("independence certificate not verified")

    def rewrite_node(self, t):
        if isinstance(t, Stateful) and t.proc.key == self.cert.processor.key:
            self._check()
            return chain([Split(self.cert.splitter), Par(t, t), Merge(t.output)])
        return None

    def rewrite_window(self, stages, i):
        if i + 2 < len(stages):
            tau, mg, s = stages[i:i + 3]
            if isinstance(mg, Merge) and isinstance(s, Stateful) and s.proc.key == self.cert.processor.key:
                self._check()
                return 3, [tau, Par(s, s), Merge(s.output)]
        return None


class Tighten(RewriteRule):
    """pure (map f) ; loop σ ~ loop(pure(f × id) ; σ), and the mirror image on the right."""

    def __init__(self, side: str = "left", extract: bool = False):
        if side not in ("left", "right"):
            raise ValueError("side must be left or right")
        self.side, self.extract = side, extract
        self.name = f"tighten-{side}" + ("^-1" if extract else "")

    @staticmethod
    def _is_map(t):
        return isinstance(t, Pure) and isinstance(t.hom.key, tuple) and t.hom.key[0] == "map"

    @staticmethod
    def _is_prod_id(t):
        return (isinstance(t, Pure) and isinstance(t.hom.key, tuple) and t.hom.key[0] == "prod"
                and isinstance(t.hom.parts[1].key, tuple) and t.hom.parts[1].key[0] == "id")

    def rewrite_pair(self, a, b):
        if self.extract:
            return None
        if self.side == "left" and self._is_map(a) and isinstance(b, Loop):
            f = a.hom.parts[0]
            U = b.body.input.right
            return [Loop(Seq(Pure(product_hom(f, identity_hom(U))), b.body))]
        if self.side == "right" and isinstance(a, Loop) and self._is_map(b):
            g = b.hom.parts[0]
            U = a.body.output.right
            return [Loop(Seq(a.body, Pure(product_hom(g, identity_hom(U)))))]
        return None

    def rewrite_node(self, t):
        if not self.extract or not isinstance(t, Loop):
            return None
        st = flatten(t.body)
        if len(st) < 2:
            return None
        if self.side == "left" and self._is_prod_id(st[0]):
            return Seq(Pure(list_map(st[0].hom.parts[0])), Loop(chain(st[1:])))
        if self.side == "right" and self._is_prod_id(st[-1]):
            return Seq(Loop(chain(st[:-1])), Pure(list_map(st[-1].hom.parts[0])))
        return None


def rule_fuse():
    return Fuse()


def rule_decouple(inverse: bool = False):
    return Decouple(inverse)


def rule_decompose():
    return Decompose()


def rule_exchange():
    return Exchange()


def rule_split_merge(splitters: dict, budget: int = 200, seed: int = 0):
    return SplitMerge(splitters, budget, seed)


def rule_partition(cert: IndependenceCertificate):
    return Partition(cert)


def rule_tighten_left(extract: bool = False):
    return Tighten("left", extract)


def rule_tighten_right(extract: bool = False):
    return Tighten("right", extract)


# ---------------------------------------------------------------- application


def _rewrite_here(rule: RewriteRule, node: Term, index: Optional[int]) -> Term:
    rejected = None
    if index is None:
        try:
            r = rule.rewrite_node(node)
        except SideConditionRejected as e:
            r, rejected = None, e
        if r is not None:
            return r
    if isinstance(node, Seq):
        stages = flatten(node)
        idxs = range(len(stages)) if index is None else [index]
        for i in idxs:
            if not 0 <= i < len(stages):
                raise InvalidPath(f"no stage {i}")
            try:
                w = rule.rewrite_window(stages, i)
            except SideConditionRejected as e:
                rejected = e
                continue
            if w is not None:
                n, repl = w
                return chain(stages[:i] + list(repl) + stages[i + n:])
    if rejected is not None:
        raise rejected
    raise NoMatch(f"{rule.name} does not apply to {node.kind}")


def apply_rule(rule: RewriteRule, t: Term, path=(), index: Optional[int] = None) -> Term:
    """Rewrite the subterm at ``path``; inside a sequence, ``index`` selects the first stage of the window."""
    node = subterm(t, tuple(path))
    return replace_at(t, tuple(path), _rewrite_here(rule, node, index))


def verify_rewrite(t: Term, t2: Term, inputs: Optional[Iterable] = None, budget: int = 1000,
                   seed: int = 0) -> EquivVerdict:
    return equiv_check(denote_term(t), denote_term(t2), inputs, budget, seed)


def candidates(t: Term, rules: list):
    """Every single-step rewrite of t, in rule-priority then path order."""
    sites = list(all_paths(t))
    for r_i, rule in enumerate(rules):
        for path, node, under_par in sites:
            if rule.top_level_only and under_par:
                continue
            try:
                r = rule.rewrite_node(node)
            except SideConditionRejected:
                r = None
            if r is not None:
                yield rule, path, None, replace_at(t, path, r)
            # windows are enumerated only at the root of a maximal sequence
            if isinstance(node, Seq) and not _parent_is_seq(t, path):
                stages = flatten(node)
                for i in range(len(stages)):
                    try:
                        w = rule.rewrite_window(stages, i)
                    except SideConditionRejected:
                        w = None
                    if w is not None:
                        n, repl = w
                        yield rule, path, i, replace_at(t, path, chain(stages[:i] + list(repl) + stages[i + n:]))


def _parent_is_seq(t: Term, path) -> bool:
    return bool(path) and isinstance(subterm(t, path[:-1]), Seq)


@dataclass
class LogEntry:
    rule: str
    path: tuple
    index: Optional[int]
    verdict: str
    cases: int = 0

    def to_json(self):
        return {"rule": self.rule, "path": list(self.path), "index": self.index, "verdict": self.verdict,
                "cases": self.cases}


@dataclass
class OptimizeResult:
    term: Term
    log: list = field(default_factory=list)

    @property
    def applied(self) -> list:
        return [e.rule for e in self.log if e.verdict in ("verified", "trusted")]


def _score(t: Term):
    return (round(cost(t), 9), node_count(t))


def _search(t: Term, rules: list, depth: int, banned: set):
    """Breadth-first search for the lowest-cost term reachable in at most ``depth`` steps."""
    best, best_steps = _score(t), []
    seen = {t.key()}
    frontier = deque([(t, [])])
    while frontier:
        cur, steps = frontier.popleft()
        if len(steps) >= depth:
            continue
        for rule, path, idx, nxt in candidates(cur, rules):
            k = nxt.key()
            if k in seen or (cur.key(), rule.name, path, idx) in banned:
                continue
            seen.add(k)
            s2 = steps + [(cur, rule, path, idx, nxt)]
            sc = _score(nxt)
            if sc < best:
                best, best_steps = sc, s2
            frontier.append((nxt, s2))
    return best_steps


def optimize(t: Term, rules: list, strategy: str = "greedy", depth: int = 4, budget: int = 1000, seed: int = 0,
             max_rounds: int = 10, trusted: bool = False, inputs=None) -> OptimizeResult:
    """Rewrite t towards lower cost; every applied step is checked with verify_rewrite unless trusted.

    ``exhaustive`` searches all rule sequences up to ``depth`` once; ``greedy`` repeats that
    search from the improved term until nothing improves or ``max_rounds`` is reached.
    """
    if strategy not in ("greedy", "exhaustive"):
        raise ValueError(f"unknown strategy {strategy!r}")
    res = OptimizeResult(t)
    banned: set = set()
    rounds = 0
    while rounds < max_rounds:
        rounds += 1
        steps = _search(res.term, rules, depth, banned)
        if not steps:
            break
        cur = res.term
        ok = True
        for before, rule, path, idx, after in steps:
            if trusted:
                res.log.append(LogEntry(rule.name, path, idx, "trusted"))
            else:
                v = verify_rewrite(before, after, inputs, budget, seed)
                if not v.ok:
                    res.log.append(LogEntry(rule.name, path, idx, "rejected", v.cases_run))
                    banned.add((before.key(), rule.name, path, idx))
                    ok = False
                    break
                res.log.append(LogEntry(rule.name, path, idx, "verified", v.cases_run))
            cur = after
        res.term = cur
        if strategy == "exhaustive" and ok:
            break
    return res
