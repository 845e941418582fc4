from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import chains_by_start, composable_triples
from tensor_ideals.errors import PreconditionError, SchemaError
from tensor_ideals.splice import (
    ArrowSymbol,
    ArrowWord,
    ExtensionChain,
    chain_from_dict,
    chain_to_dict,
    generic_chains,
    hom_action,
    koszul_pullback,
    parse_alphabet,
    splice,
)

DATA = json.loads((Path(__file__).parent / "data" / "chains.json").read_text())
ALPHABET = parse_alphabet(DATA["arrows"])
a, b, c, d = (ALPHABET[k] for k in "abcd")


def test_degree_one_example():
    first, second = (chain_from_dict(doc, ALPHABET) for doc in DATA["chains"])
    out = splice(first, second)
    assert out.vertices == ("X", "W", "V", "Z")
    assert out.degree == 2
    assert out.arrows[1] == ArrowWord.of(b, c)
    assert str(out.arrows[1]) == "b;c"
    assert out.sign == -1


def test_unit_absorbs_into_first_word():
    first = chain_from_dict(DATA["chains"][0], ALPHABET)
    assert splice(ExtensionChain.identity("X"), first) == first
    assert splice(first, ExtensionChain.identity("Y")) == first


def test_endpoint_mismatch():
    first, second = (chain_from_dict(doc, ALPHABET) for doc in DATA["chains"])
    with pytest.raises(PreconditionError):
        splice(second, first)
    with pytest.raises(PreconditionError):
        hom_action(ArrowWord.of(a), first, "left")
    with pytest.raises(PreconditionError):
        koszul_pullback(second, second)
    with pytest.raises(PreconditionError):
        ArrowWord.of(a, c)


def test_malformed_chains():
    with pytest.raises(SchemaError):
        ExtensionChain(("X",), ())
    with pytest.raises(SchemaError):
        ExtensionChain(("X", "W"), (ArrowWord.of(a),), sign=2)
    with pytest.raises(PreconditionError):
        ExtensionChain(("X", "Y"), (ArrowWord.of(a),))
    with pytest.raises(SchemaError):
        chain_from_dict({"vertices": ["X", "W"], "words": [["zz"]]}, ALPHABET)
    with pytest.raises(SchemaError):
        chain_from_dict({"vertices": ["X", "W"], "words": []}, ALPHABET)
    with pytest.raises(SchemaError):
        parse_alphabet({"a": ["X"]})


def test_hom_action_examples():
    first = chain_from_dict(DATA["chains"][0], ALPHABET)
    assert hom_action(ArrowWord.identity("Y"), first, "left") == first
    assert hom_action(ArrowWord.identity("X"), first, "right") == first
    f = ArrowSymbol("f", "Y", "U")
    pushed = hom_action(ArrowWord.of(f), first, "left")
    assert pushed.degree == 1 and pushed.target == "U"
    assert str(pushed.arrows[-1]) == "b;f"
    g = ArrowSymbol("g", "T", "X")
    pulled = hom_action(ArrowWord.of(g), first, "right")
    assert pulled.source == "T" and str(pulled.arrows[0]) == "g;a"
    with pytest.raises(SchemaError):
        hom_action(ArrowWord.of(f), first, "middle")


def test_left_and_right_actions_commute():
    chain = splice(*(chain_from_dict(doc, ALPHABET) for doc in DATA["chains"]))
    f = ArrowWord.of(ArrowSymbol("f", "Z", "U"))
    g = ArrowWord.of(ArrowSymbol("g", "T", "X"))
    assert hom_action(g, hom_action(f, chain, "left"), "right") == hom_action(f, hom_action(g, chain, "right"), "left")


@pytest.mark.parametrize("i, j, flipped", [(0, 3, False), (2, 0, False), (1, 1, True), (2, 3, False), (3, 3, True)])
def test_koszul_examples(i, j, flipped):
    dd = next(x for x in generic_chains("AB", i) if x.degree == i and x.source == "A" and x.target == "B")
    ee = next(x for x in generic_chains("AB", j) if x.degree == j and x.source == "B" and x.target == "A")
    out = koszul_pullback(dd, ee)
    plain = splice(ee, dd)
    assert out.vertices == plain.vertices and out.arrows == plain.arrows
    assert out.sign == (-plain.sign if flipped else plain.sign)


def test_json_round_trip():
    for doc in DATA["chains"]:
        chain = chain_from_dict(doc, ALPHABET)
        again = chain_to_dict(chain)
        assert again["degree"] == 1
        assert chain_from_dict(again, ALPHABET) == chain
    ident = chain_from_dict({"vertices": ["X", "X"], "words": [[]]}, ALPHABET)
    assert ident == ExtensionChain.identity("X")


def test_unitality_exhaustive():
    for chain in generic_chains("ABCDE", 3, signs=(1, -1)):
        assert splice(ExtensionChain.identity(chain.source), chain) == chain
        assert splice(chain, ExtensionChain.identity(chain.target)) == chain


def test_associativity_small_alphabet_exhaustive():
    for x, y, z in composable_triples("AB", 3, 9, signs=(1,)):
        assert splice(splice(x, y), z) == splice(x, splice(y, z))


def test_associativity_with_signs():
    for x, y, z in composable_triples("ABC", 2, 2, signs=(1, -1)):
        left = splice(splice(x, y), z)
        assert left == splice(x, splice(y, z))
        assert left.sign == x.sign * y.sign * z.sign


chain_table = chains_by_start("ABCDE", 3, signs=(1, -1))


@st.composite
def triples(draw):
    start = draw(st.sampled_from("ABCDE"))
    out = []
    for _ in range(3):
        pool = chain_table[draw(st.integers(0, 3)), start]
        out.append(draw(st.sampled_from(pool)))
        start = out[-1].target
    return out


@given(triples())
def test_associativity_random_five_labels(t):
    x, y, z = t
    assert splice(splice(x, y), z) == splice(x, splice(y, z))
    assert splice(x, y).degree == x.degree + y.degree


@given(triples())
def test_koszul_sign_law(t):
    x, y, _ = t
    out = koszul_pullback(y, x)
    assert out.sign == (-1) ** (x.degree * y.degree) * splice(x, y).sign
