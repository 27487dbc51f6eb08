"""A retransmitting transport protocol built from a sender, a receiver and two lossy networks in a loop."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from ..algebra import TICK, HomSpec, direct_product, identity_hom, list_of, mk_list_monoid, ticked
from ..codec import seed_int
from ..processor import Processor, loop, make_processor, par, pure, run_chunked, seq
from ..state import StateSpace

MESSAGES = tuple("abcdefgh")
MSG_LIST = mk_list_monoid(MESSAGES, name="List[Msg]")
DATA = ticked(MSG_LIST)
PACKETS = ticked(mk_list_monoid(lambda rng: (rng.randint(0, 7), rng.choice(MESSAGES)), name="List[N×Msg]"))
REQUESTS = ticked(mk_list_monoid(lambda rng: rng.randint(0, 8), name="List[N]"))


@dataclass
class NetworkConfig:
    """Adversarial but fair channel.

    The first ``deadline(i)`` receipts of a packet with sequence number i may each be
    dropped (replaced by a tick) or held back until the next tick; every later
    receipt is forwarded immediately.
    """
    seed: int = 0
    deadlines: dict = field(default_factory=dict)
    default_deadline: int = 0
    drop_rate: float = 0.5
    delay_rate: float = 0.25

    def deadline(self, i: int) -> int:
        return self.deadlines.get(i, self.default_deadline)

    @classmethod
    def adversarial(cls, seed: int, k: int, max_deadline: int = 3) -> "NetworkConfig":
        rng = random.Random(seed)
        return cls(seed=seed, deadlines={i: rng.randint(0, max_deadline) for i in range(k + 1)},
                   drop_rate=0.6, delay_rate=0.3)

    def to_json(self):
        return {"seed": self.seed, "deadlines": {str(k): v for k, v in sorted(self.deadlines.items())},
                "default_deadline": self.default_deadline, "drop_rate": self.drop_rate,
                "delay_rate": self.delay_rate}

    @classmethod
    def from_json(cls, d: dict) -> "NetworkConfig":
        return cls(seed=int(d.get("seed", 0)), deadlines={int(k): int(v) for k, v in d.get("deadlines", {}).items()},
                   default_deadline=int(d.get("default_deadline", 0)), drop_rate=float(d.get("drop_rate", 0.5)),
                   delay_rate=float(d.get("delay_rate", 0.25)))


def _bump(counts: tuple, key) -> tuple:
    d = dict(counts)
    d[key] = d.get(key, 0) + 1
    return tuple(sorted(d.items())), d[key]


def network_processor(cfg: NetworkConfig, channel, seqno, salt: str) -> Processor:
    """State: (receipt counts per packet, packets held back until the next tick)."""

    def on_gen(g):
        item = g[0]
        if item is TICK:
            def release(s):
                counts, held = s
                out = channel.normalize((TICK,) + tuple(reversed(held)))
                return (counts, ()), out
            return release
        x = item[0]

        def fn(s):
            counts, held = s
            i = seqno(x)
            counts, c = _bump(counts, (i, x))
            if c > cfg.deadline(i):
                return (counts, held), channel.inject((x,))
            r = seed_int(cfg.seed, salt, i, c) / 2.0 ** 64
            if r < cfg.drop_rate:
                return (counts, held), channel.tick
            if r < cfg.drop_rate + cfg.delay_rate:
                # held as one-letter segments so a tick can splice them back in
                return (counts, held + ((x,),)), channel.tick
            return (counts, held), channel.inject((x,))
        return fn

    states = StateSpace(f"Net[{salt}]", lambda rng: ((), ()))
    return make_processor(f"network[{salt}]", channel, channel, states, on_gen, ((), ()),
                          key=("network", salt, cfg.seed))


def sender_processor() -> Processor:
    """Numbers outgoing messages, retransmits on request, forwards ticks. State: messages sent so far."""
    In = direct_product(DATA, REQUESTS)
    Out = direct_product(PACKETS, REQUESTS)
    none = REQUESTS.identity

    def on_gen(g):
        data, req = g
        if data:
            item = data[0]
            if item is TICK:
                return lambda s: (s, (PACKETS.tick, none))
            m = item[0]
            return lambda s: (s + (m,), (PACKETS.inject(((len(s), m),)), none))
        item = req[0]
        if item is TICK:
            return lambda s: (s, (PACKETS.tick, none))
        j = item[0]

        def resend(s):
            if 0 <= j < len(s):
                return s, (PACKETS.inject(((j, s[j]),)), none)
            return s, Out.identity
        return resend

    return make_processor("sender", In, Out, StateSpace("List[Msg]", lambda rng: ()), on_gen, ())


def _first_missing(received: dict, n: int) -> int:
    while n in received:
        n += 1
    return n


def receiver_processor() -> Processor:
    """Delivers the contiguous prefix and always answers with the first missing sequence number.

    State: (received packets as sorted pairs, first missing sequence number).
    """
    In = direct_product(PACKETS, REQUESTS)
    Out = direct_product(MSG_LIST, REQUESTS)

    def on_gen(g):
        pkt, _ = g
        if not pkt:
            return lambda s: (s, Out.identity)
        item = pkt[0]
        if item is TICK:
            return lambda s: (s, ((), REQUESTS.normalize((TICK, (s[1],)))))
        i, m = item[0]

        def fn(s):
            rec, n = s
            d = dict(rec)
            d.setdefault(i, m)
            if i != n:
                return (tuple(sorted(d.items())), n), ((), REQUESTS.inject((n,)))
            n2 = _first_missing(d, n)
            run_ = tuple(d[k] for k in range(n, n2))
            return (tuple(sorted(d.items())), n2), (run_, REQUESTS.inject((n2,)))
        return fn

    return make_processor("receiver", In, Out, StateSpace("Recv", lambda rng: ((), 0)), on_gen, ((), 0))


def flatten_hom() -> HomSpec:
    L = list_of(MSG_LIST)
    return HomSpec("flatten", L, MSG_LIST, lambda xs: tuple(m for x in xs for m in x))


@dataclass(eq=False)
class TcpSystem:
    body: Processor
    looped: Processor
    system: Processor
    net1: NetworkConfig
    net2: NetworkConfig

    def bound(self, k: int) -> int:
        """Rounds within which delivery is guaranteed: one plus the total adversarial budget."""
        return 1 + sum(self.net1.deadline(i) + self.net2.deadline(i) for i in range(k))


def tcp_system(net1: Optional[NetworkConfig] = None, net2: Optional[NetworkConfig] = None) -> TcpSystem:
    net1 = net1 or NetworkConfig()
    net2 = net2 or NetworkConfig(seed=1)
    n1 = network_processor(net1, PACKETS, lambda x: x[0], "packets")
    n2 = network_processor(net2, REQUESTS, lambda x: x, "requests")
    body = seq(sender_processor(),
               seq(par(n1, pure(identity_hom(REQUESTS), check=False)),
                   seq(receiver_processor(), par(pure(identity_hom(MSG_LIST), check=False), n2))))
    looped = loop(body)
    return TcpSystem(body, looped, seq(looped, pure(flatten_hom(), check=False)), net1, net2)


def tcp_input(messages, ticks: int) -> tuple:
    """First batch carries the messages, then one tick per round."""
    return (DATA.inject(tuple(messages)),) + (DATA.tick,) * ticks


@dataclass
class TcpRun:
    delivered_per_round: list
    rounds_to_delivery: Optional[int]
    prefix_ok: bool


def simulate(sys_: TcpSystem, messages, rounds: int) -> TcpRun:
    batches = tcp_input(messages, rounds - 1)
    tr = run_chunked(sys_.looped, [(b,) for b in batches])
    msgs = tuple(messages)
    got: tuple = ()
    per_round, done, ok = [], None, True
    for r, inc in enumerate(tr.increments, start=1):
        for x in inc:
            got += x
        per_round.append(got)
        if msgs[: len(got)] != got:
            ok = False
        if done is None and got == msgs:
            done = r
    if not msgs and done is None:
        done = 0
    return TcpRun(per_round, done, ok)
