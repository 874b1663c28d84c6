import warnings

import pytest
from hypothesis import given, settings, strategies as st

from twistcalc.intmat import IntMatrix, mat_pow
from twistcalc.twistlang import (
    BindingError,
    Group,
    ParseError,
    RelationStatement,
    Twist,
    TwistWord,
    ZeroExponentWarning,
    binding_from_doc,
    check_relation,
    evaluate,
    flatten,
    load_binding,
    parse,
    parse_word,
    pretty,
)
from twistcalc.verdict import Status

names = st.from_regex(r"[A-Za-z0-9_]{1,4}", fullmatch=True)
exps = st.integers(-9, 9).filter(bool)


def words(max_depth=4):
    twist = st.builds(Twist, names, exps)
    factor = st.recursive(
        twist,
        lambda inner: st.builds(
            Group, st.lists(inner, min_size=1, max_size=3).map(lambda fs: TwistWord(tuple(fs))), exps),
        max_leaves=12,
    )
    return st.lists(factor, max_size=4).map(lambda fs: TwistWord(tuple(fs)))


def depth(node):
    if isinstance(node, Twist):
        return 1
    if isinstance(node, Group):
        return 1 + depth(node.word)
    return max((depth(f) for f in node.factors), default=0)


def random_spacing(text, draw):
    # Insertion of whitespace and explicit '*' must not change the parse.
    return text.replace(" ", draw)


@given(words())
def test_round_trip_word(w):
    assert parse(pretty(w)) == w


@given(words(), words(), st.sampled_from([" ", "  ", " * ", "\n", "\t*\t"]))
def test_round_trip_relation(lhs, rhs, sep):
    stmt = RelationStatement(lhs, rhs)
    assert parse(pretty(stmt)) == stmt
    assert parse(random_spacing(pretty(stmt).replace(" = ", "="), sep)) == stmt


def test_documented_examples():
    stmt = parse("T_x T_y = T_b1 T_b2 T_b3 T_b4 T_z^-1")
    assert isinstance(stmt, RelationStatement)
    assert (len(stmt.lhs), len(stmt.rhs)) == (2, 5)
    assert stmt.rhs.factors[-1] == Twist("z", -1)
    w = parse("(T_x T_y)^6")
    assert w == TwistWord((Group(TwistWord((Twist("x"), Twist("y"))), 6),))
    assert len(flatten(w)) == 12
    with pytest.raises(ParseError) as info:
        parse("T_x^")
    assert (info.value.line, info.value.column) == (1, 5)
    assert "<integer>" in info.value.expected


def test_syntax_variants():
    assert parse("T_x*T_y^{-2}") == parse("T_x T_y^-2")
    assert parse("1 = T_a") == RelationStatement(TwistWord(), TwistWord((Twist("a"),)))
    assert parse("T_b1") == TwistWord((Twist("b1"),))


@pytest.mark.parametrize("text,line,column", [
    ("T_x T_", 1, 5), ("(T_x", 1, 5), ("T_x\n  = = T_y", 2, 5), ("T_x ^ y", 1, 7), ("T_x T_y)", 1, 8), ("", 1, 1),
])
def test_positioned_errors(text, line, column):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert info.value.expected


def test_zero_exponent_dropped_with_warning():
    with pytest.warns(ZeroExponentWarning):
        assert parse("T_x^0 T_y") == TwistWord((Twist("y"),))
    with pytest.warns(ZeroExponentWarning):
        assert parse("(T_x T_y)^0") == TwistWord()


@given(words(), st.integers(-3, 3))
def test_flatten_inverse(w, m):
    flat = flatten(TwistWord((Group(w, m),))) if m and w.factors else []
    base = flatten(w)
    if m > 0:
        assert flat == base * m
    elif m < 0:
        assert flat == [(n, -e) for n, e in reversed(base)] * -m


TORUS = load_binding("torus-xy")
S04 = load_binding("s04-xy")
LANTERN = load_binding("lantern")
TWO_CHAIN = load_binding("two-chain")


def test_golden_evaluations():
    assert evaluate(parse_word("T_x T_y"), TORUS) == IntMatrix([[0, 1], [-1, 1]])
    assert evaluate(parse_word("T_x T_y^-1"), S04) == IntMatrix([[5, 2], [2, 1]])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ZeroExponentWarning)
        assert evaluate(parse_word("T_x^0"), TORUS).is_identity()


def _word_over(ns):
    base = st.builds(Twist, st.sampled_from(ns), st.integers(-3, 3).filter(bool))
    factor = st.recursive(base, lambda inner: st.builds(
        Group, st.lists(inner, min_size=1, max_size=3).map(lambda fs: TwistWord(tuple(fs))),
        st.integers(-3, 3).filter(bool)), max_leaves=6)
    return st.lists(factor, max_size=3).map(lambda fs: TwistWord(tuple(fs)))


@given(_word_over(["x", "y"]), st.integers(-4, 4))
def test_eval_distributes_over_groups(w, m):
    for b in (TORUS, S04):
        direct = evaluate(TwistWord((Group(w, m),)), b) if m and w.factors else evaluate(TwistWord(), b)
        assert direct == mat_pow(evaluate(w, b), m)
        flat = TwistWord(tuple(Twist(n, e) for n, e in flatten(TwistWord((Group(w, m),))))) if m and w.factors \
            else TwistWord()
        assert evaluate(flat, b) == direct


@settings(max_examples=50)
@given(_word_over(["x", "y", "z", "b4"]).filter(lambda w: sum(abs(e) for _, e in flatten(w)) <= 5))
def test_freegroup_eval_matches_flattening(w):
    # Images grow exponentially with the number of twists, so words stay short.
    flat = TwistWord(tuple(Twist(n, e) for n, e in flatten(w)))
    assert evaluate(w, LANTERN) == evaluate(flat, LANTERN)


def test_relations():
    assert check_relation(parse("T_x T_y T_z = T_b1 T_b2 T_b3 T_b4"), LANTERN).status is Status.RELATION_HOLDS
    assert check_relation(parse("T_x T_y = T_b1 T_b2 T_b3 T_b4 T_z^-1"), LANTERN).status is Status.RELATION_HOLDS
    assert check_relation(parse("(T_x T_y)^6 = T_c"), TWO_CHAIN).status is Status.RELATION_HOLDS
    assert check_relation(parse("(T_x T_y)^5 = T_c"), TWO_CHAIN).status is Status.RELATION_FAILS
    v = check_relation(parse("T_x T_y = T_y T_x"), TORUS)
    assert v.status is Status.RELATION_FAILS
    assert v.witness.data["lhs"] == [[0, 1], [-1, 1]]
    assert v.witness.data["rhs"] == [[1, 1], [-1, 0]]
    # Braid relation for curves meeting once, and its failure on the four-punctured sphere.
    assert check_relation(parse("T_x T_y T_x = T_y T_x T_y"), TORUS).status is Status.RELATION_HOLDS
    assert check_relation(parse("T_x T_y T_x = T_y T_x T_y"), S04).status is Status.RELATION_FAILS


def test_binding_errors():
    with pytest.raises(BindingError, match="unbound"):
        evaluate(parse_word("T_q"), TORUS)
    mixed = binding_from_doc({
        "backend": "homology", "pairing": [[0, 1], [-1, 0]],
        "curves": {"x": [1, 0], "y": {"backend": "slope", "model": "torus", "slope": "0/1"}},
    })
    assert evaluate(parse_word("T_y^2"), mixed) == IntMatrix([[1, 0], [-2, 1]])
    with pytest.raises(BindingError, match="mixed"):
        evaluate(parse_word("T_x T_y"), mixed)
    with pytest.raises(BindingError):
        binding_from_doc({"backend": "quantum", "curves": {}})
    with pytest.raises(BindingError):
        binding_from_doc({"backend": "slope", "curves": {"x": "1/0"}})
    with pytest.raises(BindingError):
        binding_from_doc({"backend": "freegroup", "presentation": "lantern", "curves": {"x": "nope"}})
    with pytest.raises(BindingError):
        load_binding("does-not-exist")


def test_binding_is_immutable():
    with pytest.raises(TypeError):
        TORUS.curves["x"] = None
