import itertools
import json
import math
import random

import pytest
from hypothesis import given, settings

from freetower.errors import MalformedInputError
from freetower.morphisms import (
    FreeMap,
    WhiteheadMove,
    apply,
    compose,
    is_primitive,
    type_one_moves,
    type_two_moves,
    verify_inverse_pair,
    whitehead_minimize,
    whitehead_moves,
)
from freetower.stallings import generates_ambient
from freetower.towers import chain_maps, gluing_sequence, stage_names, two_five_example
from freetower.presentations import parse_named
from freetower.words import Word, cyclic_core, format_word, invert

from conftest import P, random_reduced, words_strategy

SWAP = FreeMap(2, 2, (P("x2"), P("x1")))
SHEAR = FreeMap(2, 2, (P("x1 x2"), P("x2")))
SHEAR_INV = FreeMap(2, 2, (P("x1 X2"), P("x2")))


def all_reduced(rank, max_len):
    letters = [k for k in range(1, rank + 1)] + [-k for k in range(1, rank + 1)]
    out = [Word()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for a in letters:
                if not w or w[-1] != -a:
                    nxt.append(w + (a,))
        out.extend(Word(w) for w in nxt)
        frontier = nxt
    return out


def test_identity_map():
    ident = FreeMap.identity(3)
    for text in ("x1", "x3 X2 x1", "1"):
        assert apply(ident, P(text)) == P(text)


def test_example_map_on_conjugate():
    ex = two_five_example()
    w = ex.G.parse("t1 a1 t1^-1")
    assert ex.G_prime.show(apply(ex.f, w)) == "y1"


def test_first_chain_map_sends_sphere_boundary_to_commutator():
    f0, _ = chain_maps(1, 0)
    src, dst = stage_names(1, 0), stage_names(1, 1)
    w = parse_named("t1 a1 t1^-1 t2 a1^-1 t2^-1", src)
    assert apply(f0, w) == parse_named("y1 y2 y1^-1 y2^-1", dst)


def test_apply_rejects_out_of_range():
    with pytest.raises(MalformedInputError):
        apply(SWAP, P("x3"))


def test_compose_examples():
    assert compose(SWAP, SWAP).fixes_generators()
    assert format_word(compose(SHEAR, SHEAR).images[0]) == "x1 x2 x2"
    with pytest.raises(MalformedInputError):
        compose(SWAP, FreeMap(1, 3, (P("x3"),)))


@pytest.mark.parametrize("n", range(1, 6))
def test_composite_sends_w_2j_to_first_letter(n):
    names0 = stage_names(n, 0)
    ws = [parse_named(t, names0) for t in gluing_sequence(n)]
    composite = FreeMap.identity(len(names0))
    for j in range(1, n + 1):
        f, _ = chain_maps(n, j - 1)
        composite = compose(f, composite)
        first = stage_names(n, j)[0]
        assert apply(composite, ws[2 * j - 1]) == parse_named(first, stage_names(n, j))


def test_inverse_pair_examples():
    assert verify_inverse_pair(FreeMap.identity(2), FreeMap.identity(2))
    assert verify_inverse_pair(SHEAR, SHEAR_INV)
    assert not verify_inverse_pair(SHEAR, SHEAR)


@given(words_strategy(rank=2), words_strategy(rank=2))
def test_homomorphism_law(u, v):
    for f in (SHEAR, SWAP, FreeMap(2, 3, (P("x3 x1"), P("X2 x3 x3")))):
        assert apply(f, u * v) == apply(f, u) * apply(f, v)
        assert apply(f, invert(u)) == invert(apply(f, u))


def test_compose_associative(rng):
    maps = [FreeMap(3, 3, tuple(random_reduced(rng, 3, rng.randint(0, 4)) for _ in range(3))) for _ in range(6)]
    for f, g, h in itertools.permutations(maps, 3):
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_inverse_pair_inverts_random_words(rng):
    f = compose(SHEAR, compose(SWAP, SHEAR))
    g = compose(SHEAR_INV, compose(SWAP, SHEAR_INV))
    assert verify_inverse_pair(f, g)
    for _ in range(100):
        w = random_reduced(rng, 2, rng.randint(0, 20))
        assert apply(g, apply(f, w)) == w


def test_json_round_trip():
    data = {"source_rank": 2, "target_rank": 3, "images": {"x1": "x3 X1", "x2": "1"}}
    f = FreeMap.from_json(json.dumps(data))
    assert f.to_json_dict() == data
    with pytest.raises(MalformedInputError):
        FreeMap.from_json({"source_rank": 2, "target_rank": 2, "images": {"x1": "x1"}})
    with pytest.raises(MalformedInputError):
        FreeMap.from_json({"source_rank": 1, "target_rank": 1, "images": {"x1": "x2"}})


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_every_move_is_an_automorphism(rank):
    moves = list(whitehead_moves(rank))
    assert len(moves) == 2 ** rank * math.factorial(rank) - 1 + 2 * rank * (4 ** (rank - 1) - 1)
    for m in moves:
        assert verify_inverse_pair(m.to_map(), m.inverse().to_map())


def test_type_two_enumeration_order():
    moves = list(type_two_moves(2))
    assert [m.multiplier for m in moves[:3]] == [1, 1, 1]
    assert [m.actions[1] for m in moves[:3]] == [1, 2, 3]
    assert moves[3].multiplier == -1
    assert format_word(moves[0].to_map().images[1]) == "x1 x2"
    assert format_word(moves[1].to_map().images[1]) == "x2 X1"


def test_minimize_examples():
    m, t = whitehead_minimize(cyclic_core(P("x1")), 1)
    assert format_word(m) == "x1" and t == []
    m, t = whitehead_minimize(cyclic_core(P("x2 x1 x2")), 2)
    assert len(m) == 1
    m, t = whitehead_minimize(cyclic_core(P("x1 x2 X1 X2")), 2)
    assert len(m) == 4 and t == []


def test_transcript_replays_and_descends():
    w = cyclic_core(P("x2 x1 x2 x3 x1 x2 X3"))
    minimal, transcript = whitehead_minimize(w, 3)
    current = w
    for move in transcript:
        nxt = cyclic_core(apply(move.to_map(), current.word))
        assert len(nxt) < len(current)
        current = nxt
    assert current == minimal
    for move in type_two_moves(3):
        assert len(cyclic_core(apply(move.to_map(), minimal.word))) >= len(minimal)


def _automorphisms_rank2(max_len):
    """Maps x1 -> u, x2 -> v with {u, v} generating F_2, found by folding."""
    words = [w for w in all_reduced(2, max_len) if w]
    for u in words:
        for v in words:
            if generates_ambient([u, v], 2):
                yield FreeMap(2, 2, (u, v))


def test_commutator_has_no_shorter_image_under_small_automorphisms():
    w = P("x1 x2 X1 X2")
    count = 0
    for phi in _automorphisms_rank2(3):
        count += 1
        assert len(cyclic_core(apply(phi, w))) >= 4
    assert count > 100


def test_primitive_image_reaches_length_one_by_folding_oracle():
    w = P("x2 x1 x2")
    assert any(len(cyclic_core(apply(phi, w))) == 1 for phi in _automorphisms_rank2(3))


@pytest.mark.parametrize(
    "w, rank, expected",
    [("x1", 2, True), ("x1 x1", 2, False), ("x2 x1 x2", 2, True), ("x1 x2 X1 X2", 2, False),
     ("x1 x2 x3", 3, True), ("x1 x1 x2 x2", 2, False)],
)
def test_is_primitive_examples(w, rank, expected):
    assert is_primitive(P(w), rank) is expected


def test_is_primitive_rejects_identity():
    with pytest.raises(MalformedInputError):
        is_primitive(Word(), 2)


def test_primitive_implies_unimodular_abelianization():
    for w in all_reduced(2, 6):
        if w and is_primitive(w, 2):
            a = sum(1 if x > 0 else -1 for x in w.letters if abs(x) == 1)
            b = sum(1 if x > 0 else -1 for x in w.letters if abs(x) == 2)
            assert math.gcd(a, b) == 1


@settings(max_examples=25, deadline=None)
@given(words_strategy(rank=3, max_size=10))
def test_minimal_length_is_signed_permutation_invariant(w):
    core = cyclic_core(w)
    if not len(core):
        return
    base = len(whitehead_minimize(core, 3)[0])
    rng = random.Random(len(w))
    for move in rng.sample(list(type_one_moves(3)), 5):
        image = cyclic_core(apply(move.to_map(), core.word))
        assert len(whitehead_minimize(image, 3)[0]) == base


def test_rank_cap():
    with pytest.raises(MalformedInputError):
        whitehead_minimize(cyclic_core(P("x7 x1")), 7)
    assert len(whitehead_minimize(cyclic_core(P("x7 x1")), 7, max_rank=7)[0]) == 1
