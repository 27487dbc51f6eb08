"""Command-line entry point: run examples on traces, law suites, equivalence, optimization and the TCP model."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from . import catalog
from .algebra import MonoidMismatch, shrink
from .codec import digest, dumps
from .examples import tcp
from .pipeline import cost, denote_term, node_count, optimize, term_to_json, dumps_term
from .processor import chunk, equiv_check, run, run_chunked


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("STREAMALG_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"STREAMALG_SEED must be an integer, got {raw!r}")


def _emit(report: dict, t0: float) -> int:
    report["wall_time_ms"] = int((time.perf_counter() - t0) * 1000)
    print(dumps(report))
    return 0 if not report["failures"] else 1


def _read_json(source: str):
    """Inline JSON, or the contents of a file when source names one."""
    p = Path(source)
    text = p.read_text() if p.is_file() else source
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON in {source!r}: {e}")


# ---------------------------------------------------------------- run


def read_trace(path: str, M) -> list:
    """JSON-lines trace: a header naming the monoid, then one encoded element per line."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise UsageError(f"trace {path} has no header line")
    try:
        header = json.loads(lines[0])
        elems = [M.decode(json.loads(ln)) for ln in lines[1:]]
    except (json.JSONDecodeError, TypeError, ValueError, KeyError) as e:
        raise UsageError(f"malformed trace {path}: {e}")
    if not isinstance(header, dict) or header.get("monoid") != M.name:
        raise UsageError(f"trace header must be {{\"monoid\": {M.name!r}}}")
    return elems


def write_trace(path: str, M, elems) -> None:
    with open(path, "w") as fh:
        fh.write(dumps({"monoid": M.name}) + "\n")
        for e in elems:
            fh.write(dumps(M.encode(e)) + "\n")


def _parse_chunking(value: str):
    if value in ("whole", "per-generator", "lines", "random"):
        return value
    try:
        sizes = [int(x) for x in value.split(",")]
    except ValueError:
        raise UsageError(f"bad --chunking {value!r}")
    if not sizes or any(k <= 0 for k in sizes):
        raise UsageError("chunk sizes must be positive")
    return sizes


def _chunks(M, elems: list, mode, seed: int) -> list:
    m = M.mul(*elems) if elems else M.identity
    if mode == "lines":
        return list(elems)
    if mode == "whole":
        return [m] if not M.is_identity(m) else []
    gens = M.factor(m)
    if mode == "per-generator":
        return list(gens)
    if mode == "random":
        return chunk(M, m, rng=random.Random(seed))
    return chunk(M, m, sizes=mode)


def cmd_run(args) -> int:
    t0 = time.perf_counter()
    procs = catalog.example_processors()
    name = args.example.replace("-", "_")
    if name not in procs:
        raise UsageError(f"unknown example {args.example!r}; known: {', '.join(sorted(procs))}")
    P = procs[name]
    M, N = P.input, P.output
    if args.input is None:
        elems = []
    elif Path(args.input).is_file():
        elems = read_trace(args.input, M)
    else:
        try:
            elems = [M.decode(_read_json(args.input))]
        except (TypeError, ValueError, KeyError) as e:
            raise UsageError(f"input is not an element of {M.name}: {e}")
    mode = _parse_chunking(args.chunking or ("lines" if args.input and Path(args.input).is_file() else
                                             "per-generator"))
    chunks = _chunks(M, elems, mode, args.seed)
    tr = run_chunked(P, chunks)
    whole = run(P, M.mul(*chunks) if chunks else M.identity)
    failures = []
    if not N.equal(tr.output, whole):
        failures.append({"law": "streaming-determinism",
                         "witness": {"chunked": N.encode(tr.output), "whole": N.encode(whole)}})
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps({"monoid": N.name, "input_monoid": M.name, "example": name}) + "\n")
            for c, inc, s in zip(tr.chunks, tr.increments, tr.states[1:]):
                fh.write(dumps({"chunk": M.encode(c), "increment": N.encode(inc), "state": digest(s)}) + "\n")
            fh.write(dumps({"output": N.encode(tr.output)}) + "\n")
    report = {
        "command": "run", "example": name, "seed": args.seed,
        "chunking": mode if isinstance(mode, str) else list(mode),
        "cases": 1, "failures": failures,
        "initial_output": N.encode(P.init_output),
        "increments": [N.encode(o) for o in tr.increments],
        "output": N.encode(tr.output),
        "final_state": digest(tr.final_state),
    }
    return _emit(report, t0)


# ---------------------------------------------------------------- laws


def cmd_laws(args) -> int:
    t0 = time.perf_counter()
    if args.budget < 1:
        raise UsageError("--budget must be positive")
    reps = catalog.run_suites(args.scope, args.budget, args.seed, args.inject_broken)
    suites = [r.to_json() for r in reps]
    failures = [{"suite": r.suite, **f} for r in reps for f in r.failures]
    report = {"command": "laws", "scope": args.scope, "budget": args.budget, "seed": args.seed,
              "cases": sum(r.cases for r in reps), "failures": failures, "suites": suites}
    return _emit(report, t0)


# ---------------------------------------------------------------- equiv / optimize


def load_term(source: str, reg):
    """A term from a JSON file or inline JSON, or ``corpus:<name>`` for a bundled term."""
    if source.startswith("corpus:"):
        corpus = catalog.term_corpus()
        key = source.split(":", 1)[1]
        if key not in corpus:
            raise UsageError(f"unknown corpus term {key!r}; known: {', '.join(sorted(corpus))}")
        return corpus[key]
    d = _read_json(source)
    try:
        return reg.term(d)
    except (KeyError, ValueError, TypeError, IndexError, MonoidMismatch) as e:
        raise UsageError(f"cannot load term {source!r}: {e}")


def cmd_equiv(args) -> int:
    t0 = time.perf_counter()
    reg = catalog.default_registry()
    a, b = load_term(args.term_a, reg), load_term(args.term_b, reg)
    if a.input.name != b.input.name or a.output.name != b.output.name:
        raise UsageError(f"terms have different types: {a.input.name}→{a.output.name} "
                         f"vs {b.input.name}→{b.output.name}")
    P, Q = denote_term(a), denote_term(b)
    v = equiv_check(P, Q, budget=args.budget, seed=args.seed)
    failures = []
    if not v.ok:
        M, N = P.input, P.output
        m = v.witness["input"]
        m, = shrink(M, [m], lambda x: not N.equal(run(P, x), run(Q, x)))
        failures.append({"law": "equivalence",
                         "witness": {"input": M.encode(m), "lhs": N.encode(run(P, m)),
                                     "rhs": N.encode(run(Q, m))}})
    report = {"command": "equiv", "seed": args.seed, "budget": args.budget, "status": v.status,
              "cases": v.cases_run, "failures": failures}
    return _emit(report, t0)


def cmd_optimize(args) -> int:
    t0 = time.perf_counter()
    reg = catalog.default_registry()
    t = load_term(args.term, reg)
    cert = None
    if args.certificate == "parity":
        cert = catalog.join_certificate(seed=args.seed)
    elif args.certificate is not None:
        raise UsageError(f"unknown certificate {args.certificate!r}")
    res = optimize(t, catalog.default_rules(cert), strategy=args.strategy, depth=args.depth,
                   budget=args.budget, seed=args.seed, max_rounds=args.max_rounds)
    if args.out:
        Path(args.out).write_text(dumps_term(res.term) + "\n")
    failures = [{"law": "rewrite-soundness", "witness": e.to_json()} for e in res.log if e.verdict == "rejected"]
    report = {
        "command": "optimize", "seed": args.seed, "budget": args.budget, "strategy": args.strategy,
        "cases": sum(e.cases for e in res.log), "failures": failures,
        "log": [e.to_json() for e in res.log], "applied": res.applied,
        "cost": {"before": round(cost(t), 9), "after": round(cost(res.term), 9)},
        "nodes": {"before": node_count(t), "after": node_count(res.term)},
        "term": term_to_json(res.term),
    }
    return _emit(report, t0)


def cmd_export(args) -> int:
    """Write each bundled corpus term to <dir>/<name>.json."""
    t0 = time.perf_counter()
    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for name, t in sorted(catalog.term_corpus().items()):
        (out / f"{name}.json").write_text(dumps_term(t) + "\n")
        names.append(name)
    return _emit({"command": "export", "seed": args.seed, "cases": len(names), "failures": [],
                  "terms": names}, t0)


# ---------------------------------------------------------------- tcp


def _load_net(source, fallback: tcp.NetworkConfig) -> tcp.NetworkConfig:
    if source is None:
        return fallback
    d = _read_json(source)
    if not isinstance(d, dict):
        raise UsageError("network config must be a JSON object")
    try:
        cfg = tcp.NetworkConfig.from_json(d)
    except (TypeError, ValueError, AttributeError) as e:
        raise UsageError(f"bad network config: {e}")
    if not (0 <= cfg.drop_rate <= 1 and 0 <= cfg.delay_rate <= 1 and cfg.drop_rate + cfg.delay_rate <= 1):
        raise UsageError("drop_rate and delay_rate must be probabilities with sum at most 1")
    if cfg.default_deadline < 0 or any(v < 0 for v in cfg.deadlines.values()):
        raise UsageError("deadlines must be nonnegative")
    return cfg


def _tcp_case(net1, net2, k: int, max_rounds) -> dict:
    sys_ = tcp.tcp_system(net1, net2)
    bound = sys_.bound(k)
    rounds = max_rounds if max_rounds is not None else bound
    r = tcp.simulate(sys_, tcp.MESSAGES[:k], rounds)
    return {"seeds": [net1.seed, net2.seed], "bound": bound, "rounds_run": rounds,
            "rounds_to_delivery": r.rounds_to_delivery, "complete": r.rounds_to_delivery is not None,
            "prefix_ok": r.prefix_ok, "delivered": "".join(r.delivered_per_round[-1]) if r.delivered_per_round else ""}


def cmd_tcp(args) -> int:
    t0 = time.perf_counter()
    if not 0 <= args.k <= len(tcp.MESSAGES):
        raise UsageError(f"-k must be between 0 and {len(tcp.MESSAGES)}")
    if args.max_rounds is not None and args.max_rounds < 1:
        raise UsageError("--max-rounds must be positive")
    cases = []
    if args.sweep:
        for s in range(args.seed, args.seed + args.sweep):
            cases.append(_tcp_case(tcp.NetworkConfig.adversarial(2 * s, args.k),
                                   tcp.NetworkConfig.adversarial(2 * s + 1, args.k), args.k, args.max_rounds))
    else:
        net1 = _load_net(args.net1, tcp.NetworkConfig(seed=args.seed))
        net2 = _load_net(args.net2, tcp.NetworkConfig(seed=args.seed + 1))
        cases.append(_tcp_case(net1, net2, args.k, args.max_rounds))
    failures = []
    for c in cases:
        if not c["prefix_ok"]:
            failures.append({"law": "prefix-invariant", "witness": c})
        elif not c["complete"]:
            failures.append({"law": "incomplete-delivery", "witness": c})
        elif c["rounds_to_delivery"] > c["bound"]:
            failures.append({"law": "delivery-bound", "witness": c})
    report = {"command": "tcp", "k": args.k, "seed": args.seed, "cases": len(cases), "failures": failures,
              "worst_rounds": max((c["rounds_to_delivery"] or 0) for c in cases),
              "results": cases if len(cases) <= 10 else cases[:10]}
    return _emit(report, t0)


# ---------------------------------------------------------------- entry


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="streamalg", description="Stream processors as monoid homomorphisms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, budget=1000):
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (default: $STREAMALG_SEED or 0)")
        sp.add_argument("--budget", type=int, default=budget, help="cases per check")

    r = sub.add_parser("run", help="stream a trace through an example processor")
    r.add_argument("example")
    r.add_argument("--input", help="JSON-lines trace file, or an inline JSON element")
    r.add_argument("--chunking", help="whole | per-generator | lines | random | comma-separated sizes")
    r.add_argument("--out", help="write a JSON-lines step trace here")
    common(r)
    r.set_defaults(func=cmd_run)

    la = sub.add_parser("laws", help="run the law suites")
    la.add_argument("--scope", default="all", choices=["all", *catalog.SUITES])
    la.add_argument("--inject-broken", action="store_true", help="add a monoid that violates its laws")
    common(la)
    la.set_defaults(func=cmd_laws)

    e = sub.add_parser("equiv", help="check two pipeline terms for equivalence")
    e.add_argument("term_a")
    e.add_argument("term_b")
    common(e)
    e.set_defaults(func=cmd_equiv)

    o = sub.add_parser("optimize", help="rewrite a pipeline term to a cheaper equivalent one")
    o.add_argument("term")
    o.add_argument("--strategy", default="greedy", choices=["greedy", "exhaustive"])
    o.add_argument("--depth", type=int, default=4)
    o.add_argument("--max-rounds", type=int, default=10)
    o.add_argument("--certificate", help="enable partitioning with a named certificate (parity)")
    o.add_argument("--out", help="write the optimized term here")
    common(o, budget=300)
    o.set_defaults(func=cmd_optimize)

    x = sub.add_parser("export", help="write the bundled example terms as JSON files")
    x.add_argument("dir")
    x.add_argument("--seed", type=int, default=None)
    x.set_defaults(func=cmd_export)

    t = sub.add_parser("tcp", help="simulate reliable delivery over two lossy networks")
    t.add_argument("-k", type=int, default=8, help="number of messages")
    t.add_argument("--net1", help="data network config (JSON file or inline)")
    t.add_argument("--net2", help="request network config (JSON file or inline)")
    t.add_argument("--max-rounds", type=int, default=None, help="rounds to simulate (default: the bound)")
    t.add_argument("--sweep", type=int, default=0, help="run this many adversarial seed pairs instead")
    t.add_argument("--seed", type=int, default=None)
    t.set_defaults(func=cmd_tcp)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except UsageError as e:
        print(dumps({"error": str(e), "failures": [], "exit": 2}))
        return 2
    except OSError as e:
        print(dumps({"error": str(e), "failures": [], "exit": 2}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
