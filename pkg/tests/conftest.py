import random

import pytest
from hypothesis import strategies as st

from freetower.words import Word, parse_word


def P(text):
    return parse_word(text)


def random_reduced(rng: random.Random, rank: int, length: int) -> Word:
    letters = []
    while len(letters) < length:
        a = rng.choice([k for k in range(1, rank + 1)] + [-k for k in range(1, rank + 1)])
        if letters and letters[-1] == -a:
            continue
        letters.append(a)
    return Word(letters)


def letters_strategy(rank=3, max_size=20):
    return st.lists(
        st.integers(1, rank).flatmap(lambda k: st.sampled_from([k, -k])), max_size=max_size
    )


def words_strategy(rank=3, max_size=20):
    return letters_strategy(rank, max_size).map(Word)


@pytest.fixture
def rng():
    return random.Random(20261018)


# criterion number -> "PASS"/"FAIL" summary line, filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
