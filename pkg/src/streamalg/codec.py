"""Canonical JSON encoding for arbitrary immutable values, plus stable digests."""
from __future__ import annotations

import hashlib
import json
from typing import Any


def to_jsonable(x: Any) -> Any:
    """Structural encoding used for hashing and digests (not for round-tripping)."""
    from .algebra import Bag, Tick

    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Tick):
        return "⊤"
    if isinstance(x, tuple):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        items = [to_jsonable(v) for v in x]
        return {"set": sorted(items, key=dumps)}
    if isinstance(x, Bag):
        items = [to_jsonable(v) for v in x]
        return {"bag": sorted(items, key=dumps)}
    if isinstance(x, dict):
        return {"map": sorted(([to_jsonable(k), to_jsonable(v)] for k, v in x.items()), key=dumps)}
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(x: Any) -> str:
    return json.dumps(x, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(x: Any, n: int = 16) -> str:
    return hashlib.sha256(dumps(to_jsonable(x)).encode()).hexdigest()[:n]


def seed_int(*parts: Any) -> int:
    """Deterministic 64-bit integer derived from arbitrary values."""
    h = hashlib.blake2b(dumps(to_jsonable(tuple(parts))).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def plain_decode(v: Any) -> Any:
    """Inverse of the plain atom encoding: JSON lists become tuples."""
    if isinstance(v, list):
        return tuple(plain_decode(x) for x in v)
    return v


def plain_encode(v: Any) -> Any:
    if isinstance(v, tuple):
        return [plain_encode(x) for x in v]
    return v
