import itertools
import random

import pytest

from streamalg.examples import adder, loops
from streamalg.processor import pure
from streamalg.representation import (check_embedding, defunctionalize, tabulate, tabulate_chunked,
                                      tabulation_monoid, trivial_state_collapse)
from streamalg.state import ext_equal, int_space

A = adder.adder_processor()
WORD = ((0, 1), (0, 0), (1, 1))
TAGS = {((0, 0),): "x", ((0, 1),): "y", ((1, 0),): "y", ((1, 1),): "z"}


def brute_table(word):
    """Run the ripple-carry adder from each carry by hand."""
    rows = []
    for c in (0, 1):
        bits = []
        for a, b in word:
            t = a + b + c
            bits.append(t % 2)
            c = t // 2
        rows.append((c, tuple(bits)))
    return tuple(rows)


def test_adder_table_value():
    emb = tabulate(A.states, A.output, A.hom)
    assert emb.encode(WORD) == ((1, (1, 0, 0)), (1, (0, 1, 0)))
    assert emb.to_json(emb.encode(WORD)) == "[[1,[1,0,0]],[1,[0,1,0]]]"
    assert emb.from_json("[[1,[1,0,0]],[1,[0,1,0]]]") == emb.encode(WORD)


def test_table_matches_brute_force_on_all_short_words():
    emb = tabulate(A.states, A.output, A.hom)
    for n in range(5):
        for word in itertools.product(itertools.product((0, 1), repeat=2), repeat=n):
            assert emb.encode(word) == brute_table(word)


def test_table_product_is_composition():
    emb = tabulate(A.states, A.output, A.hom)
    T = emb.rep_monoid
    a, b = WORD[:1], WORD[1:]
    assert T.product(emb.encode(a), emb.encode(b)) == emb.encode(WORD)


def test_tabulate_chunked_parallel():
    emb = tabulate(A.states, A.output)
    rng = random.Random(0)
    word = tuple(rng.choice([(0, 0), (0, 1), (1, 0), (1, 1)]) for _ in range(20))
    chunks = [word[i:i + 3] for i in range(0, 20, 3)]
    assert tabulate_chunked(emb, A.hom, chunks) == brute_table(word)


def test_tabulation_needs_finite_states():
    with pytest.raises(ValueError):
        tabulation_monoid(int_space(), adder.BITS)


def test_defunctionalized_word_and_meaning():
    emb = defunctionalize(A.hom, TAGS, A.states)
    assert emb.encode(WORD) == ("y", "x", "z")
    assert ext_equal(emb.psi(("y", "x", "z")), A.hom(WORD), A.states).ok


def test_defunctionalize_rejects_conflicting_tags():
    bad = dict(TAGS)
    bad[((0, 0),)] = "z"
    with pytest.raises(ValueError):
        defunctionalize(A.hom, bad, A.states)


def test_embedding_laws():
    assert check_embedding(tabulate(A.states, A.output, A.hom), A.hom, 300).ok
    assert check_embedding(defunctionalize(A.hom, TAGS, A.states), A.hom, 300).ok
    dbl = pure(loops.double_hom(), check=False)
    emb = trivial_state_collapse(dbl.output)
    assert emb.phi(dbl.hom(3)) == 6
    assert check_embedding(emb, dbl.hom, 300).ok
