import pytest
from hypothesis import given, strategies as st

from freetower.errors import MalformedInputError
from freetower.words import (
    EMPTY,
    CyclicWord,
    Word,
    commutator,
    commute,
    cyclic_reduce,
    format_word,
    invert,
    multiply,
    parse_word,
    parse_word_list,
    reduce,
)

from conftest import P, letters_strategy, words_strategy


def naive_reduce(letters):
    """Delete one cancelling pair at a time until none is left."""
    letters = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            if letters[i] == -letters[i + 1]:
                del letters[i : i + 2]
                changed = True
                break
    return tuple(letters)


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("x1 X1 x2", "x2"),
        ("x2 x1 X1 X2", "1"),
        ("x3 x2 x1 x2 x2 x3", "x3 x2 x1 x2 x2 x3"),
    ],
)
def test_reduce_examples(raw, expected):
    tokens = raw.split()
    letters = [int(t[1:]) * (1 if t[0] == "x" else -1) for t in tokens]
    assert format_word(reduce(letters)) == expected


@given(letters_strategy(rank=3, max_size=30))
def test_reduce_matches_naive_and_is_idempotent(letters):
    w = reduce(letters)
    assert w.letters == naive_reduce(letters)
    assert reduce(w.letters) == w


@given(letters_strategy(), st.integers(0, 30), st.integers(1, 3), st.booleans())
def test_reduce_ignores_inserted_pairs(letters, pos, k, sign):
    a = k if sign else -k
    pos = min(pos, len(letters))
    padded = letters[:pos] + [a, -a] + letters[pos:]
    assert reduce(padded) == reduce(letters)


@pytest.mark.parametrize(
    "w, core, conj",
    [("x2 x1 X2", "x1", "x2"), ("x2 x1 x2", "x2 x1 x2", "1"), ("1", "1", "1")],
)
def test_cyclic_reduce_examples(w, core, conj):
    c, g = cyclic_reduce(P(w))
    assert format_word(c) == core
    assert format_word(g) == conj


@given(words_strategy())
def test_cyclic_reduce_reconstructs(w):
    core, conj = cyclic_reduce(w)
    assert multiply(conj, multiply(core.word, invert(conj))) == w
    letters = core.letters
    assert len(letters) < 2 or letters[0] != -letters[-1]


def test_cyclic_reduce_conjugator_is_shortest():
    core, conj = cyclic_reduce(P("x2 x3 x1 X3 X2"))
    assert format_word(conj) == "x2 x3"
    assert format_word(core) == "x1"


@given(words_strategy(max_size=12))
def test_canonical_rotation_is_rotation_invariant(w):
    core, _ = cyclic_reduce(w)
    letters = core.letters
    for r in range(len(letters)):
        assert CyclicWord(letters[r:] + letters[:r]) == core
        assert CyclicWord(letters[r:] + letters[:r]).canonical == core.canonical


def test_canonical_rotation_uses_letter_order():
    assert CyclicWord(P("x2 x1 x2").letters).canonical == (1, 2, 2)
    assert CyclicWord(P("X1 x2 x1 x2").letters).canonical == (1, 2, -1, 2)


def test_cyclic_word_rejects_non_cyclically_reduced():
    with pytest.raises(MalformedInputError):
        CyclicWord((2, 1, -2))


@pytest.mark.parametrize(
    "u, v, expected",
    [("x1 x2", "X2 x3", "x1 x3"), ("x1", "X1", "1"), ("x2 x1 x2", "X2", "x2 x1")],
)
def test_multiply_examples(u, v, expected):
    assert format_word(P(u) * P(v)) == expected


@given(words_strategy(), words_strategy(), words_strategy())
def test_multiply_group_laws(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert u * EMPTY == u == EMPTY * u
    assert u * invert(u) == EMPTY
    assert len(u * v) <= len(u) + len(v)
    no_cancel = not u or not v or u.letters[-1] != -v.letters[0]
    assert (len(u * v) == len(u) + len(v)) == no_cancel


@pytest.mark.parametrize(
    "u, v, expected",
    [
        ("x1", "x2", "x1 x2 X1 X2"),
        ("x1", "x1", "1"),
        ("x1", "x1 x2", "x1 x1 x2 X1 X2 X1"),
    ],
)
def test_commutator_examples(u, v, expected):
    assert format_word(commutator(P(u), P(v))) == expected


@pytest.mark.parametrize(
    "u, v, expected",
    [
        ("x1 x1", "x1 x1 x1 x1 x1", True),
        ("x1", "x2", False),
        ("x2 x1 x2", "x2 x1 x2 x2 x1 x2", True),
    ],
)
def test_commute_examples(u, v, expected):
    assert commute(P(u), P(v)) is expected


@given(words_strategy(max_size=8), words_strategy(max_size=8))
def test_commute_symmetric_and_reflexive(u, v):
    assert commute(u, v) == commute(v, u)
    assert commute(u, u)


def test_text_round_trip():
    for text in ("1", "x1", "X12 x3 x3"):
        assert format_word(parse_word(text)) == text


@pytest.mark.parametrize("bad", ["x0", "x1a", "y2", "x", "", "x-1", "x01"])
def test_parse_rejects(bad):
    with pytest.raises(MalformedInputError):
        parse_word(bad)


def test_parse_word_list():
    assert parse_word_list("x2 x1 x2;x2") == [P("x2 x1 x2"), P("x2")]
    with pytest.raises(MalformedInputError):
        parse_word_list(" ; ")


def test_words_are_immutable():
    w = P("x1")
    with pytest.raises(AttributeError):
        w.letters = (2,)
