"""Reduced and cyclically reduced words in a free group of finite rank.

A letter is a nonzero ``int``: ``k`` stands for the generator ``x_k`` and
``-k`` for its inverse.  Words never store their ambient rank; any
operation that needs one takes it as an argument.

Text form: letters separated by spaces, ``x3`` for a generator, ``X3`` for
its inverse, and ``1`` for the empty word.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

from .errors import MalformedInputError

_TOKEN = re.compile(r"([xX])([1-9][0-9]*)\Z")


def letter_key(letter: int) -> int:
    """Sort key realising the order x1 < X1 < x2 < X2 < ..."""
    return 2 * abs(letter) - (1 if letter > 0 else 0)


def letter_name(letter: int) -> str:
    return ("x" if letter > 0 else "X") + str(abs(letter))


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for a in letters:
        if a == 0:
            raise MalformedInputError("0 is not a letter")
        if stack and stack[-1] == -a:
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


class Word:
    """An element of a free group, stored as its reduced letter sequence."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        object.__setattr__(self, "letters", _free_reduce(letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def parse(cls, text: str) -> "Word":
        return parse_word(text)

    @classmethod
    def generator(cls, k: int) -> "Word":
        return cls((k,))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(("Word", self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        return power(self, k)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)

    @property
    def max_index(self) -> int:
        return max((abs(a) for a in self.letters), default=0)


EMPTY = Word()


class CyclicWord:
    """A nonempty-or-empty cyclically reduced word, compared up to rotation.

    ``letters`` keeps the rotation it was built from, so that
    ``conjugator * core.word * conjugator**-1`` rebuilds the original word
    after :func:`cyclic_reduce`.  Equality and hashing go through
    ``canonical``, the least rotation under :func:`letter_key`.
    """

    __slots__ = ("letters", "canonical")

    def __init__(self, letters: Iterable[int]):
        letters = tuple(letters)
        if _free_reduce(letters) != letters or (
            len(letters) > 1 and letters[0] == -letters[-1]
        ):
            raise MalformedInputError(
                f"{format_letters(letters)} is not cyclically reduced"
            )
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "canonical", canonical_rotation(letters))

    def __setattr__(self, name, value):
        raise AttributeError("CyclicWord is immutable")

    @property
    def word(self) -> Word:
        return Word(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicWord) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(("CyclicWord", self.canonical))

    def __repr__(self) -> str:
        return f"CyclicWord({format_letters(self.letters)!r})"

    def __str__(self) -> str:
        return format_letters(self.letters)


def canonical_rotation(letters: Sequence[int]) -> tuple[int, ...]:
    n = len(letters)
    if n == 0:
        return ()
    keyed = [letter_key(a) for a in letters]
    best = min(range(n), key=lambda i: keyed[i:] + keyed[:i])
    return tuple(letters[best:]) + tuple(letters[:best])


def reduce(raw: Iterable[int]) -> Word:
    return Word(raw)


def invert(w: Word) -> Word:
    return Word(-a for a in reversed(w.letters))


def multiply(u: Word, v: Word) -> Word:
    return Word(u.letters + v.letters)


def power(w: Word, k: int) -> Word:
    if k < 0:
        return power(invert(w), -k)
    return Word(w.letters * k)


def commutator(u: Word, v: Word) -> Word:
    """Reduced form of ``u v u^-1 v^-1``."""
    return Word(u.letters + v.letters + invert(u).letters + invert(v).letters)


def commute(u: Word, v: Word) -> bool:
    return not commutator(u, v)


def cyclic_reduce(w: Word) -> tuple[CyclicWord, Word]:
    """Split ``w`` as ``conjugator * core * conjugator**-1``.

    The core is cyclically reduced and the conjugator is the shortest such
    prefix of ``w``.
    """
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return CyclicWord(letters[i : j + 1]), Word(letters[:i])


def cyclic_core(w: Word) -> CyclicWord:
    return cyclic_reduce(w)[0]


def support(w: Word | CyclicWord) -> frozenset[int]:
    """Generator indices occurring in ``w`` with either sign."""
    return frozenset(abs(a) for a in w.letters)


def is_cyclically_reduced(w: Word) -> bool:
    return len(w) < 2 or w.letters[0] != -w.letters[-1]


def format_letters(letters: Sequence[int]) -> str:
    if not letters:
        return "1"
    return " ".join(letter_name(a) for a in letters)


def format_word(w: Word | CyclicWord) -> str:
    return format_letters(w.letters)


def parse_word(text: str) -> Word:
    """Parse the space-separated text form; reduces the result."""
    tokens = text.split()
    if tokens == ["1"]:
        return EMPTY
    if not tokens:
        raise MalformedInputError("empty word text; write the identity as '1'")
    letters = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if m is None:
            raise MalformedInputError(f"bad letter token {tok!r}")
        k = int(m.group(2))
        letters.append(k if m.group(1) == "x" else -k)
    return Word(letters)


def parse_word_list(text: str) -> list[Word]:
    """Semicolon-separated word texts, as used on the command line."""
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise MalformedInputError("no words given")
    return [parse_word(p) for p in parts]


def check_rank(w: Word | CyclicWord, rank: int) -> None:
    if rank < 1:
        raise MalformedInputError(f"rank must be positive, got {rank}")
    for a in w.letters:
        if abs(a) > rank:
            raise MalformedInputError(
                f"letter {letter_name(a)} exceeds rank {rank}"
            )
