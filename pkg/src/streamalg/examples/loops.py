"""Small feedback examples used to exercise the loop combinator and its tightening laws."""
from __future__ import annotations

from ..algebra import DirectProduct, HomSpec, direct_product, int_add_group, mk_list_monoid
from ..processor import Processor, make_processor, pure
from ..state import int_space

Z = int_add_group()
ZZ = direct_product(Z, Z)


def feedback_hom() -> HomSpec:
    """(m, u) -> (u, u + m): emit the old feedback, feed back the running total."""
    return HomSpec("shift_acc", ZZ, ZZ, lambda x: (x[1], x[1] + x[0]))


def feedback_processor() -> Processor:
    return pure(feedback_hom(), check=False)


def double_hom() -> HomSpec:
    return HomSpec("double", Z, Z, lambda n: 2 * n)


def negate_hom() -> HomSpec:
    return HomSpec("negate", Z, Z, lambda n: -n)


LIST_INT = mk_list_monoid(lambda rng: rng.randint(-3, 3), name="List[Int]")
LL = direct_product(LIST_INT, LIST_INT)


def counting_body() -> Processor:
    """A stateful body on lists: numbers the data it sees and echoes feedback below a cap."""
    def on_gen(g):
        left, right = g
        if left:
            x = left[0]
            return lambda s: (s + x, ((s + x,), ()))
        y = right[0]
        return lambda s: (s, ((), (y + 1,) if y < 3 else ()))

    return make_processor("counting_body", LL, LL, int_space("Z"), on_gen, 0, ((), (0,)))


def cancel_left(N, prefix, whole):
    """The z with prefix·z = whole, for groups and (products of) lists."""
    if N.group:
        return N.product(N.inverse(prefix), whole)
    if isinstance(N, DirectProduct):
        return (cancel_left(N.left, prefix[0], whole[0]), cancel_left(N.right, prefix[1], whole[1]))
    if isinstance(whole, tuple) and whole[: len(prefix)] == prefix:
        return whole[len(prefix):]
    raise ValueError(f"cannot cancel in {N.name}")


def loop_semantics(F, batches) -> tuple:
    """Reference loop over a stream function F: M×U -> N×U, with the update recovered by cancellation.

    x0 = F(ε), x_i = ΔF(y_1...y_{i-1}, y_i) with y_i = (m_i, u_{i-1}); the result is [n_0, ..., n_k].
    """
    src, tgt = F.source, F.target
    p = src.identity
    n0, u = F(p)
    outs = [n0]
    for m in batches:
        y = (m, u)
        n, u = cancel_left(tgt, F(p), F(src.product(p, y)))
        p = src.product(p, y)
        outs.append(n)
    return tuple(outs)
