"""Witnesses that an element forks with every member of an independent sequence.

For a nontrivial ``a`` the union Whitehead graph of ``{a, b_i}`` is checked
for cut vertices; a connected cut-vertex-free graph certifies that
``{a, b_i}`` is not separable.  Generation of ``F_{i+1}`` by
``b_1 .. b_i, x_{i+1}`` certifies the sequence is a basis fragment.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import MalformedInputError
from .morphisms import FreeMap, apply, signed_permutation_map
from .stallings import generates_ambient
from .whitehead import (
    WhiteheadGraph,
    analyse,
    build,
    format_vertex_set,
    graph_json,
)
from .words import CyclicWord, Word, cyclic_core, format_word, letter_name

FORKS = "FORKS"
SPECIAL_CASE_POWER = "SPECIAL_CASE_POWER"
INCONCLUSIVE = "INCONCLUSIVE"

POWER_NOTE = (
    "cyclic core is a power of one basis element; it realises the generic "
    "type of a primitive element, whose infinite weight is known"
)


def b_word(i: int) -> Word:
    """``x_{i+1} x_i .. x_2 x_1 x_2^2 x_3^2 .. x_i^2 x_{i+1}``, of length ``3i``."""
    if i < 1:
        raise MalformedInputError("b_word needs i >= 1")
    letters = list(range(i + 1, 0, -1))
    for k in range(2, i + 1):
        letters += [k, k]
    letters.append(i + 1)
    return Word(letters)


@dataclass(frozen=True)
class Normalization:
    sigma: FreeMap | None
    a_norm: Word
    special: bool


def normalize_for_witness(a: Word, rank: int | None = None) -> Normalization:
    """Rename generators so the cyclic core of ``a`` contains ``x1`` and no ``x2``.

    The most frequent generator (ties to the smaller index) becomes ``x1``;
    the rest, in order of first occurrence in the canonical rotation, take
    ``x3, x4, ...``.  A power of a single generator is flagged as special
    and renamed to a power of ``x1``.
    """
    if not a:
        raise MalformedInputError("the identity has an algebraic type; nothing to witness")
    core = cyclic_core(a)
    n = max(rank or 0, core.word.max_index)
    counts = Counter(abs(x) for x in core.letters)
    shared = min(counts, key=lambda k: (-counts[k], k))
    target = {shared: 1}
    nxt = 3
    for x in core.canonical:
        if abs(x) not in target:
            target[abs(x)] = nxt
            nxt += 1
    special = len(counts) == 1
    size = max(n, max(target.values()))
    free_targets = iter(sorted(set(range(1, size + 1)) - set(target.values())))
    perm = []
    for k in range(1, size + 1):
        perm.append(target[k] if k in target else next(free_targets))
    sigma = signed_permutation_map(perm)
    return Normalization(sigma, apply(sigma, core.word), special)


@dataclass(frozen=True)
class ForkReport:
    input_word: Word
    normalization: Normalization
    index_i: int
    ambient_rank: int
    graph: WhiteheadGraph
    verdict: str
    cut_vertices: frozenset[int]
    reason: str

    def to_json_dict(self) -> dict:
        sigma = self.normalization.sigma
        return {
            "input_word": format_word(self.input_word),
            "normalized_word": format_word(self.normalization.a_norm),
            "normalization": sigma.to_json_dict() if sigma else None,
            "special_case": self.normalization.special,
            "i": self.index_i,
            "ambient_rank": self.ambient_rank,
            "b_word": format_word(b_word(self.index_i)),
            "verdict": self.verdict,
            "reason": self.reason,
            "cut_vertices": [letter_name(v) for v in sorted(self.cut_vertices, key=abs)],
            "graph": graph_json(self.graph),
        }

    def render_text(self) -> str:
        lines = [
            f"a = {format_word(self.input_word)}",
            f"normalized a = {format_word(self.normalization.a_norm)}",
            f"b_{self.index_i} = {format_word(b_word(self.index_i))}",
            f"rank = {self.ambient_rank}",
            "edges:",
        ]
        for (u, v), m in self.graph.sorted_edges():
            lines.append(f"  {letter_name(u)} -- {letter_name(v)}  [{m}]")
        lines.append(f"cut vertices: {format_vertex_set(self.cut_vertices)}")
        lines.append(f"verdict: {self.verdict} ({self.reason})")
        return "\n".join(lines) + "\n"


def minimal_index(a: Word) -> int:
    """Smallest ``i`` for which ``fork_witness(a, i)`` is admissible."""
    norm = normalize_for_witness(a)
    return max(1, norm.a_norm.max_index - 1)


def fork_witness(a: Word, i: int) -> ForkReport:
    norm = normalize_for_witness(a)
    if i < 1:
        raise MalformedInputError("i must be at least 1")
    rank = i + 1
    if norm.a_norm.max_index > rank:
        raise MalformedInputError(
            f"normalized word {format_word(norm.a_norm)} needs rank "
            f"{norm.a_norm.max_index} > i + 1 = {rank}"
        )
    graph = build([CyclicWord(norm.a_norm.letters), cyclic_core(b_word(i))], rank)
    verdict = analyse(graph)
    if norm.special:
        status, reason = SPECIAL_CASE_POWER, POWER_NOTE
    elif verdict.status == "NOT_SEPARABLE":
        status, reason = FORKS, "connected, every vertex used, no cut vertex"
    else:
        status, reason = INCONCLUSIVE, verdict.reason
    return ForkReport(a, norm, i, rank, graph, status, verdict.cut_vertices, reason)


@dataclass(frozen=True)
class GenerationCertificate:
    i: int
    rank: int
    generators: tuple[Word, ...]
    generates: bool

    def to_json_dict(self) -> dict:
        return {
            "i": self.i,
            "rank": self.rank,
            "generators": [format_word(w) for w in self.generators],
            "generates_ambient": self.generates,
        }


@dataclass(frozen=True)
class WeightReport:
    input_word: Word
    start: int
    count: int
    generation: tuple[GenerationCertificate, ...]
    forks: tuple[ForkReport, ...]

    @property
    def complete(self) -> bool:
        return all(g.generates for g in self.generation) and all(
            f.verdict in (FORKS, SPECIAL_CASE_POWER) for f in self.forks
        )

    def to_json_dict(self) -> dict:
        return {
            "input_word": format_word(self.input_word),
            "start": self.start,
            "count": self.count,
            "complete": self.complete,
            "preweight_lower_bound": self.count if self.complete else None,
            "generation": [g.to_json_dict() for g in self.generation],
            "forks": [f.to_json_dict() for f in self.forks],
        }

    def render_text(self) -> str:
        lines = [f"a = {format_word(self.input_word)}; indices {self.start}..{self.start + self.count - 1}"]
        for g in self.generation:
            lines.append(f"  generation b_1..b_{g.i}, x{g.rank} -> F_{g.rank}: {g.generates}")
        for f in self.forks:
            lines.append(f"  i={f.index_i}: {f.verdict}")
        lines.append(f"complete: {self.complete}")
        return "\n".join(lines) + "\n"


def weight_witness(a: Word, count: int) -> WeightReport:
    """Certificates for ``b_start .. b_{start+count-1}``, starting at the least admissible index."""
    if count < 0:
        raise MalformedInputError("count must be non-negative")
    start = minimal_index(a)
    generation = []
    forks = []
    for i in range(start, start + count):
        gens = tuple(b_word(k) for k in range(1, i + 1)) + (Word.generator(i + 1),)
        generation.append(GenerationCertificate(i, i + 1, gens, generates_ambient(gens, i + 1)))
        forks.append(fork_witness(a, i))
    return WeightReport(a, start, count, tuple(generation), tuple(forks))
