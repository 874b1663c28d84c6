import copy
import os

import pytest
import yaml
from hypothesis import given, strategies as st

from twistcalc.freegrp import (
    FreeAutomorphism,
    PresentationError,
    Word,
    are_conjugate,
    compose,
    compose_all,
    data_root,
    load_presentation,
    parse_presentation,
    power,
    reduce,
    same_curve,
    verify_lantern,
    verify_relation,
    verify_two_chain,
)
from twistcalc.verdict import Status

LANTERN = load_presentation("lantern")
TWO_CHAIN = load_presentation("two-chain")

letters3 = st.sampled_from([1, 2, 3, -1, -2, -3])
words3 = st.lists(letters3, max_size=12).map(Word)
twist_names = st.sampled_from(sorted(LANTERN.twists))


# Braid generators acting on the free group of the three-punctured disk.
S1 = FreeAutomorphism.parse(["abA", "a", "c"], ["b", "Bab", "c"])
S2 = FreeAutomorphism.parse(["a", "bcB", "b"], ["a", "c", "Cbc"])


def test_reduce_and_parse():
    assert reduce([1, -1, 2, 3, -3]) == (2,)
    assert Word.parse("aAbB").letters == ()
    assert Word.parse("abC").format() == "abC"
    assert Word.parse("1").letters == ()
    assert (Word.parse("ab") * Word.parse("Ba")).format() == "aa"
    assert Word.parse("abc").inverse().format() == "CBA"


@given(st.lists(letters3, max_size=20))
def test_reduce_idempotent(ls):
    r = reduce(ls)
    assert reduce(r) == r
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))


@given(words3, words3)
def test_inverse_and_product(u, v):
    assert (u * u.inverse()).letters == ()
    assert (u * v).inverse() == v.inverse() * u.inverse()


@given(words3, words3)
def test_conjugates_are_conjugate(u, g):
    assert are_conjugate(g * u * g.inverse(), u)
    assert same_curve(g * u.inverse() * g.inverse(), u)


def test_not_conjugate():
    assert not are_conjugate(Word.parse("ab"), Word.parse("ba").inverse())
    assert not are_conjugate(Word.parse("a"), Word.parse("aa"))


@given(twist_names, words3, words3)
def test_twists_are_homomorphisms(name, u, v):
    t = LANTERN.twist(name)
    assert t(u * v) == t(u) * t(v)
    assert t.inverse()(t(u)) == u


@given(st.lists(st.tuples(twist_names, st.integers(-2, 2)), max_size=4), words3)
def test_compose_is_functional(factors, w):
    autos = [LANTERN.twist(n, k) for n, k in factors]
    f = compose_all(autos, 3)
    expected = w
    for a in reversed(autos):
        expected = a(expected)
    assert f(w) == expected


def test_inverse_witness_checked():
    with pytest.raises(ValueError):
        FreeAutomorphism.parse(["ab", "b", "c"], ["a", "b", "c"])


def test_shipped_presentations_validate():
    assert LANTERN.validate() == []
    assert TWO_CHAIN.validate() == []


def test_lantern_twists_match_braid_oracle():
    x = compose(S1, S1)
    z = compose(S2, S2)
    y = compose(S2, compose(x, S2.inverse()))
    assert LANTERN.twist("x") == x
    assert LANTERN.twist("y") == y
    assert LANTERN.twist("z") == z
    assert compose_all([x, y, z], 3) == FreeAutomorphism.inner(Word.parse("abc"), 3)


def test_lantern_holds_and_order_matters():
    assert verify_lantern().status is Status.RELATION_HOLDS
    v = verify_relation(LANTERN, [("x", 1), ("z", 1), ("y", 1)], [(b, 1) for b in ("b1", "b2", "b3", "b4")])
    assert v.status is Status.RELATION_FAILS
    assert v.details["generator"] in "abc"


def test_lantern_with_inverse_z_fails():
    v = verify_relation(LANTERN, [("x", 1), ("y", 1)], [("b1", 1), ("b2", 1), ("b3", 1), ("b4", 1), ("z", 1)])
    assert v.status is Status.RELATION_FAILS
    v = verify_relation(LANTERN, [("x", 1), ("y", 1)], [("b1", 1), ("b2", 1), ("b3", 1), ("b4", 1), ("z", -1)])
    assert v.status is Status.RELATION_HOLDS


def test_product_of_x_and_y_preserves_z():
    f = compose(LANTERN.twist("x"), LANTERN.twist("y"))
    z = LANTERN.curves["z"]
    assert LANTERN.curve_named(f(z)) == "z"
    assert compose(f, compose(LANTERN.twist("z"), f.inverse())) == LANTERN.twist("z")


@given(twist_names, twist_names)
def test_conjugation_invariance(name, other):
    # f T_c f^-1 is the twist about f(c); the conjugated table validates too.
    f = LANTERN.twist(other)
    c = LANTERN.curves[name]
    g = compose(f, compose(LANTERN.twist(name), f.inverse()))
    assert are_conjugate(g(f(c)), f(c))
    assert LANTERN.conjugated(f).twists[name] == g


@pytest.mark.parametrize("k", [6, 12, -6, 18])
def test_two_chain_holds(k):
    v = verify_two_chain(k)
    assert v.status is Status.RELATION_HOLDS
    assert v.power == k // 6


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 7, -1, -5])
def test_two_chain_fails(k):
    assert verify_two_chain(k).status is Status.RELATION_FAILS


def test_two_chain_rejects_zero():
    with pytest.raises(ValueError):
        verify_two_chain(0)


def test_two_chain_boundary_twist_is_inner():
    c = TWO_CHAIN.curves["c"]
    assert TWO_CHAIN.twist("c") == FreeAutomorphism.inner(c.inverse(), 2)
    assert power(compose(TWO_CHAIN.twist("x"), TWO_CHAIN.twist("y")), 6) == TWO_CHAIN.twist("c")


def _lantern_doc():
    path = data_root() / "presentations" / "lantern.yaml"
    return yaml.safe_load(path.read_text())


def test_corrupted_presentation_is_rejected():
    doc = _lantern_doc()
    bad = copy.deepcopy(doc)
    bad["twists"]["x"]["images"][0] = "ab"
    bad["twists"]["x"]["inverse"][0] = "aB"
    with pytest.raises(PresentationError) as info:
        parse_presentation(bad)
    assert "twist x" in str(info.value)


def test_presentation_with_wrong_homology_rejected():
    doc = copy.deepcopy(_lantern_doc())
    doc["pairing"] = [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
    with pytest.raises(PresentationError) as info:
        parse_presentation(doc)
    assert "abelianization" in str(info.value)


def test_data_root_override(tmp_path, monkeypatch):
    (tmp_path / "presentations").mkdir()
    (tmp_path / "presentations" / "two-chain.yaml").write_text(
        (data_root() / "presentations" / "two-chain.yaml").read_text())
    monkeypatch.setenv("TWISTCALC_DATA", str(tmp_path))
    assert data_root() == tmp_path
    assert load_presentation("two-chain").validate() == []
    monkeypatch.delenv("TWISTCALC_DATA")
    assert os.path.isdir(data_root() / "presentations")
