"""Finite presentations and checks that generator maps between them are isomorphisms.

The standard is deliberately narrow: a relator's image must *be* a target
relator up to free and cyclic reduction, rotation and inversion.  Anything
weaker is reported as unmatched rather than searched for.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import MalformedInputError
from .morphisms import FreeMap, compose
from .words import (
    Word,
    check_rank,
    cyclic_core,
    format_word,
    invert,
    parse_word,
)

MATCHED = "MATCHED"
KILLED = "KILLED"
UNMATCHED = "UNMATCHED"

VERIFIED = "VERIFIED"
RETRACTION_ONLY = "RETRACTION_ONLY"
FAILED = "FAILED"
INCONCLUSIVE = "INCONCLUSIVE"

_NAMED_TOKEN = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?[0-9]+))?\Z")


@dataclass(frozen=True)
class Presentation:
    """``<generators | relators>``; relator letters index ``generators`` from 1."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise MalformedInputError(f"duplicate generator names in {gens}")
        for name in gens:
            if not _NAMED_TOKEN.match(name) or "^" in name:
                raise MalformedInputError(f"bad generator name {name!r}")
        rels = []
        for r in self.relators:
            if gens:
                check_rank(r, len(gens))
            elif r:
                raise MalformedInputError("relator over an empty alphabet")
            rels.append(cyclic_core(r).word)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name) + 1
        except ValueError:
            raise MalformedInputError(f"unknown generator {name!r}") from None

    def gen(self, name: str) -> Word:
        return Word.generator(self.index(name))

    def parse(self, text: str) -> Word:
        """Parse a word written with generator names, e.g. ``"t1 a1 t1^-1"``."""
        return parse_named(text, self.generators)

    def show(self, w: Word) -> str:
        return format_named(w, self.generators)

    def extend(self, new_generators: Sequence[str], new_relators: Iterable[Word] = ()) -> "Presentation":
        return Presentation(self.generators + tuple(new_generators), self.relators + tuple(new_relators))

    def reordered(self, order: Sequence[str]) -> "Presentation":
        """Same group with the generator list permuted to ``order``."""
        if sorted(order) != sorted(self.generators):
            raise MalformedInputError("reordering must permute the generators")
        return Presentation(tuple(order), tuple(translate(r, self.generators, order) for r in self.relators))

    def to_json_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [format_word(r) for r in self.relators],
        }

    def to_json(self) -> str:
        """Canonical serialization used for byte-level comparisons."""
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, data: str | dict) -> "Presentation":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            gens, rels = data["generators"], data["relators"]
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad Presentation JSON: {exc}") from exc
        return cls(tuple(gens), tuple(parse_word(r) for r in rels))

    def pretty(self) -> str:
        rels = ", ".join(self.show(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"


def parse_named(text: str, names: Sequence[str]) -> Word:
    lookup = {name: k for k, name in enumerate(names, 1)}
    letters: list[int] = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _NAMED_TOKEN.match(tok)
        if m is None or m.group(1) not in lookup:
            raise MalformedInputError(f"bad token {tok!r}")
        k = lookup[m.group(1)]
        e = int(m.group(2)) if m.group(2) else 1
        letters.extend([k if e > 0 else -k] * abs(e))
    return Word(letters)


def format_named(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    return " ".join(names[a - 1] if a > 0 else names[-a - 1] + "^-1" for a in w.letters)


def translate(w: Word, src_names: Sequence[str], dst_names: Sequence[str]) -> Word:
    """Rewrite ``w`` from one generator list into another by name."""
    lookup = {name: k for k, name in enumerate(dst_names, 1)}
    out = []
    for a in w.letters:
        name = src_names[abs(a) - 1]
        if name not in lookup:
            raise MalformedInputError(f"generator {name!r} missing from target alphabet")
        out.append(lookup[name] if a > 0 else -lookup[name])
    return Word(out)


def support(w: Word) -> frozenset[int]:
    return frozenset(abs(a) for a in w.letters)


@dataclass(frozen=True)
class RelatorMatch:
    source_index: int
    status: str
    image: Word
    target_index: int | None = None
    rotation: int | None = None
    inverted: bool = False

    def to_json_dict(self) -> dict:
        return {
            "source_index": self.source_index,
            "status": self.status,
            "image": format_word(self.image),
            "target_index": self.target_index,
            "rotation": self.rotation,
            "inverted": self.inverted,
        }


def _find_rotation(target: tuple[int, ...], image: tuple[int, ...]) -> int | None:
    if len(target) != len(image):
        return None
    for r in range(len(target)):
        if target[r:] + target[:r] == image:
            return r
    return None


def match_relator(image: Word, targets: Sequence[Word], source_index: int = 0) -> RelatorMatch:
    core = cyclic_core(image)
    if not len(core):
        return RelatorMatch(source_index, KILLED, core.word)
    for j, t in enumerate(targets):
        for inverted, cand in ((False, t), (True, invert(t))):
            r = _find_rotation(cand.letters, core.letters)
            if r is not None:
                return RelatorMatch(source_index, MATCHED, core.word, j, r, inverted)
    return RelatorMatch(source_index, UNMATCHED, core.word)


def _check_ranks(f: FreeMap, src: Presentation, dst: Presentation) -> None:
    if f.source_rank != src.rank or f.target_rank != dst.rank:
        raise MalformedInputError(
            f"map F_{f.source_rank} -> F_{f.target_rank} does not fit "
            f"presentations on {src.rank} and {dst.rank} generators"
        )


def map_relator_check(f: FreeMap, src: Presentation, dst: Presentation) -> list[RelatorMatch]:
    _check_ranks(f, src, dst)
    return [match_relator(f(r), dst.relators, i) for i, r in enumerate(src.relators)]


@dataclass(frozen=True)
class IsoReport:
    status: str
    forward: tuple[RelatorMatch, ...]
    backward: tuple[RelatorMatch, ...]
    g_after_f_fixes: tuple[bool, ...]
    f_after_g_fixes: tuple[bool, ...]
    notes: tuple[str, ...] = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "forward": [m.to_json_dict() for m in self.forward],
            "backward": [m.to_json_dict() for m in self.backward],
            "inverse_check": {
                "g_after_f": list(self.g_after_f_fixes),
                "f_after_g": list(self.f_after_g_fixes),
            },
            "notes": list(self.notes),
        }


def _fixed(h: FreeMap) -> tuple[bool, ...]:
    return tuple(w.letters == (k,) for k, w in enumerate(h.images, 1))


def verify_isomorphism(f: FreeMap, g: FreeMap, src: Presentation, dst: Presentation) -> IsoReport:
    """Check ``f: src -> dst`` against the candidate inverse ``g: dst -> src``.

    The composites are computed in the free groups on the generators,
    without using any relator.
    """
    forward = tuple(map_relator_check(f, src, dst))
    backward = tuple(map_relator_check(g, dst, src))
    gf = _fixed(compose(g, f))
    fg = _fixed(compose(f, g))
    relators_ok = all(m.status == MATCHED for m in forward + backward)
    notes = []
    if all(gf) and all(fg):
        if relators_ok:
            status = VERIFIED
        else:
            status = INCONCLUSIVE
            notes.append("maps are mutually inverse on free groups but some relator image is not a target relator")
    elif all(gf) or all(fg):
        status = RETRACTION_ONLY
    else:
        status = FAILED
    return IsoReport(status, forward, backward, gf, fg, tuple(notes))


def exponent_matrix(p: Presentation) -> list[list[int]]:
    rows = []
    for r in p.relators:
        row = [0] * p.rank
        for a in r.letters:
            row[abs(a) - 1] += 1 if a > 0 else -1
        rows.append(row)
    return rows


def smith_diagonal(matrix: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix."""
    m = [row[:] for row in matrix]
    if not m or not m[0]:
        return []
    rows, cols = len(m), len(m[0])
    diag = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            p = m[t][t]
            for i in range(t + 1, rows):
                q = m[i][t] // p
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                if m[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = m[t][j] // p
                if q:
                    for row in m:
                        row[j] -= q * row[t]
                if m[t][j]:
                    done = False
            if done:
                bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if m[i][j] % p]
                if not bad:
                    break
                i, _ = bad[0]
                m[t] = [a + b for a, b in zip(m[t], m[i])]
                continue
            entries = [(abs(m[i][t]), i, t) for i in range(t, rows) if m[i][t]]
            entries += [(abs(m[t][j]), t, j) for j in range(t, cols) if m[t][j]]
            _, pi, pj = min(entries)
            m[t], m[pi] = m[pi], m[t]
            for row in m:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(m[t][t]))
        t += 1
    return diag


def abelian_invariants(p: Presentation) -> tuple[int, tuple[int, ...]]:
    """``(free rank, torsion coefficients)`` of the abelianization."""
    diag = smith_diagonal(exponent_matrix(p))
    return p.rank - len(diag), tuple(d for d in diag if d > 1)
