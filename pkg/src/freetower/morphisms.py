"""Homomorphisms between free groups given by generator images.

Also holds Whitehead automorphisms and the length-descent used to test
primitivity.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import MalformedInputError
from .words import (
    EMPTY,
    CyclicWord,
    Word,
    check_rank,
    cyclic_core,
    format_word,
    letter_key,
    letter_name,
    parse_word,
)

DEFAULT_MAX_RANK = 6


@dataclass(frozen=True)
class FreeMap:
    """Homomorphism ``F_source_rank -> F_target_rank``.

    ``images[k - 1]`` is the image of ``x_k``.
    """

    source_rank: int
    target_rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        if self.source_rank < 1 or self.target_rank < 1:
            raise MalformedInputError("ranks must be positive")
        if len(self.images) != self.source_rank:
            raise MalformedInputError(
                f"expected {self.source_rank} images, got {len(self.images)}"
            )
        for w in self.images:
            if not isinstance(w, Word):
                raise MalformedInputError(f"image {w!r} is not a Word")
            check_rank(w, self.target_rank)

    @classmethod
    def identity(cls, rank: int) -> "FreeMap":
        return cls(rank, rank, tuple(Word.generator(k) for k in range(1, rank + 1)))

    @classmethod
    def from_partial(
        cls, source_rank: int, target_rank: int, images: Mapping[int, Word]
    ) -> "FreeMap":
        """Generators missing from ``images`` map to the same-index generator."""
        out = []
        for k in range(1, source_rank + 1):
            if k in images:
                out.append(images[k])
            elif k <= target_rank:
                out.append(Word.generator(k))
            else:
                raise MalformedInputError(f"no image for x{k} and x{k} is not in the target")
        return cls(source_rank, target_rank, tuple(out))

    @classmethod
    def from_json(cls, data: str | dict) -> "FreeMap":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n, m, images = data["source_rank"], data["target_rank"], data["images"]
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad FreeMap JSON: {exc}") from exc
        parsed = {}
        for key, text in images.items():
            w = parse_word(key)
            if len(w) != 1 or w.letters[0] < 0:
                raise MalformedInputError(f"image key {key!r} is not a generator")
            parsed[w.letters[0]] = parse_word(text)
        missing = set(range(1, n + 1)) - parsed.keys()
        if missing or len(parsed) != n:
            raise MalformedInputError(f"images must cover exactly x1..x{n}")
        return cls(n, m, tuple(parsed[k] for k in range(1, n + 1)))

    def to_json_dict(self) -> dict:
        return {
            "source_rank": self.source_rank,
            "target_rank": self.target_rank,
            "images": {f"x{k}": format_word(w) for k, w in enumerate(self.images, 1)},
        }

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def image_of(self, letter: int) -> Word:
        w = self.images[abs(letter) - 1]
        return w if letter > 0 else ~w

    def fixes_generators(self) -> bool:
        return all(
            w.letters == (k,) for k, w in enumerate(self.images, 1)
        )


def apply(f: FreeMap, w: Word) -> Word:
    letters: list[int] = []
    for a in w.letters:
        if abs(a) > f.source_rank:
            raise MalformedInputError(
                f"letter {letter_name(a)} outside the domain F_{f.source_rank}"
            )
        letters.extend(f.image_of(a).letters)
    return Word(letters)


def compose(f: FreeMap, g: FreeMap) -> FreeMap:
    """``f o g``: apply ``g`` first."""
    if g.target_rank > f.source_rank:
        raise MalformedInputError(
            f"cannot compose: inner target rank {g.target_rank} "
            f"exceeds outer source rank {f.source_rank}"
        )
    return FreeMap(g.source_rank, f.target_rank, tuple(apply(f, w) for w in g.images))


def verify_inverse_pair(f: FreeMap, g: FreeMap) -> bool:
    """True iff ``g o f`` and ``f o g`` both fix every generator."""
    if g.target_rank > f.source_rank or f.target_rank > g.source_rank:
        return False
    return compose(g, f).fixes_generators() and compose(f, g).fixes_generators()


# -- Whitehead automorphisms -------------------------------------------------

FIX, LEFT, RIGHT, CONJ = 0, 1, 2, 3
_ACTION_NAMES = {FIX: "fix", LEFT: "left", RIGHT: "right", CONJ: "conj"}


@dataclass(frozen=True)
class WhiteheadMove:
    """A Whitehead automorphism of ``F_rank``.

    Type I carries a signed permutation: ``perm[k - 1]`` is the signed image
    index of ``x_k``.  Type II carries a multiplier letter ``a`` and one
    action code per generator (the entry for ``|a|`` is ignored):
    ``FIX`` x -> x, ``LEFT`` x -> a x, ``RIGHT`` x -> x a^-1,
    ``CONJ`` x -> a x a^-1.
    """

    rank: int
    kind: str
    perm: tuple[int, ...] = ()
    multiplier: int = 0
    actions: tuple[int, ...] = ()

    def to_map(self) -> FreeMap:
        n = self.rank
        if self.kind == "I":
            return FreeMap(n, n, tuple(Word((p,)) for p in self.perm))
        a = self.multiplier
        images = []
        for k in range(1, n + 1):
            if k == abs(a):
                images.append(Word((k,)))
                continue
            act = self.actions[k - 1]
            left = (a,) if act & LEFT else ()
            right = (-a,) if act & RIGHT else ()
            images.append(Word(left + (k,) + right))
        return FreeMap(n, n, tuple(images))

    def inverse(self) -> "WhiteheadMove":
        if self.kind == "I":
            inv = [0] * self.rank
            for k, p in enumerate(self.perm, 1):
                inv[abs(p) - 1] = k if p > 0 else -k
            return WhiteheadMove(self.rank, "I", perm=tuple(inv))
        return WhiteheadMove(
            self.rank, "II", multiplier=-self.multiplier, actions=self.actions
        )

    def describe(self) -> str:
        if self.kind == "I":
            return "I(" + ", ".join(
                f"x{k}->{letter_name(p)}" for k, p in enumerate(self.perm, 1)
            ) + ")"
        parts = [
            f"x{k}:{_ACTION_NAMES[act]}"
            for k, act in enumerate(self.actions, 1)
            if k != abs(self.multiplier) and act != FIX
        ]
        return f"II[{letter_name(self.multiplier)}](" + ", ".join(parts) + ")"


def type_one_moves(rank: int) -> Iterator[WhiteheadMove]:
    """Signed permutations other than the identity."""
    for perm in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            p = tuple(s * k for s, k in zip(signs, perm))
            if p != tuple(range(1, rank + 1)):
                yield WhiteheadMove(rank, "I", perm=p)


def multipliers(rank: int) -> list[int]:
    return sorted((s * k for k in range(1, rank + 1) for s in (1, -1)), key=letter_key)


def type_two_moves(rank: int) -> Iterator[WhiteheadMove]:
    """Multipliers in letter order, actions in binary-counter order."""
    for a in multipliers(rank):
        others = [k for k in range(1, rank + 1) if k != abs(a)]
        for counter in range(1, 4 ** len(others)):
            actions = [FIX] * rank
            for pos, k in enumerate(others):
                actions[k - 1] = (counter >> (2 * pos)) & 3
            yield WhiteheadMove(rank, "II", multiplier=a, actions=tuple(actions))


def whitehead_moves(rank: int) -> Iterator[WhiteheadMove]:
    yield from type_one_moves(rank)
    yield from type_two_moves(rank)


def apply_cyclic(f: FreeMap, w: CyclicWord) -> CyclicWord:
    return cyclic_core(apply(f, w.word))


def whitehead_minimize(
    w: CyclicWord, rank: int, max_rank: int = DEFAULT_MAX_RANK
) -> tuple[CyclicWord, list[WhiteheadMove]]:
    """Steepest descent on cyclic length over all Whitehead moves.

    Each step takes the first move (in enumeration order) reaching the
    smallest cyclic length; stops when nothing strictly shortens the word.
    Type I moves preserve length, so only type II moves are scanned.
    """
    if not len(w):
        raise MalformedInputError("cannot minimize the empty word")
    check_rank(w, rank)
    if rank > max_rank:
        raise MalformedInputError(
            f"rank {rank} exceeds the move-enumeration cap {max_rank}"
        )
    moves = [(m, m.to_map()) for m in type_two_moves(rank)]
    current = w
    transcript: list[WhiteheadMove] = []
    while len(current) > 1:
        best = None
        best_len = len(current)
        for move, fmap in moves:
            image = apply_cyclic(fmap, current)
            if len(image) < best_len:
                best, best_len = (move, image), len(image)
        if best is None:
            break
        transcript.append(best[0])
        current = best[1]
    return current, transcript


def is_primitive(w: Word, rank: int, max_rank: int = DEFAULT_MAX_RANK) -> bool:
    if not w:
        raise MalformedInputError("the identity is not primitive")
    minimal, _ = whitehead_minimize(cyclic_core(w), rank, max_rank)
    return len(minimal) == 1


def signed_permutation_map(perm: Sequence[int]) -> FreeMap:
    n = len(perm)
    return FreeMap(n, n, tuple(Word((p,)) for p in perm))
