"""Whitehead graphs, cut vertices and one-sided separability certificates."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .errors import MalformedInputError
from .words import CyclicWord, Word, check_rank, cyclic_core, letter_key, letter_name

NOT_SEPARABLE = "NOT_SEPARABLE"
INCONCLUSIVE = "INCONCLUSIVE"


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if letter_key(u) <= letter_key(v) else (v, u)


@dataclass(frozen=True)
class WhiteheadGraph:
    """Graph on the 2n letters of ``F_n``; edges carry multiplicities."""

    rank: int
    edges: dict[tuple[int, int], int] = field(hash=False)

    @property
    def vertices(self) -> list[int]:
        return sorted(
            (s * k for k in range(1, self.rank + 1) for s in (1, -1)), key=letter_key
        )

    def sorted_edges(self) -> list[tuple[tuple[int, int], int]]:
        return sorted(
            self.edges.items(),
            key=lambda item: (letter_key(item[0][0]), letter_key(item[0][1])),
        )

    def total_multiplicity(self) -> int:
        return sum(self.edges.values())

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def incident_vertices(self) -> set[int]:
        return {x for e in self.edges for x in e}

    def components(self) -> list[set[int]]:
        """Connected components of the vertices incident to an edge."""
        adj = self.adjacency()
        seen: set[int] = set()
        comps = []
        for v in self.vertices:
            if v in seen or not adj[v]:
                continue
            comp = {v}
            stack = [v]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        """Connected and every one of the 2n vertices carries an edge."""
        comps = self.components()
        return len(comps) == 1 and len(comps[0]) == 2 * self.rank

    def permuted(self, perm) -> "WhiteheadGraph":
        """Relabel vertices through a signed permutation (``perm[k-1]`` = image of x_k)."""

        def img(a):
            p = perm[abs(a) - 1]
            return p if a > 0 else -p

        return WhiteheadGraph(
            self.rank, {_edge(img(u), img(v)): m for (u, v), m in self.edges.items()}
        )

    def to_dot(self, name: str = "W") -> str:
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            lines.append(f"  {dot_vertex(v)};")
        for (u, v), m in self.sorted_edges():
            lines.append(f"  {dot_vertex(u)} -- {dot_vertex(v)} [label={m}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def dot_vertex(v: int) -> str:
    return f"x{abs(v)}" + ("" if v > 0 else "p")


def build(words: Iterable[CyclicWord], rank: int) -> WhiteheadGraph:
    """Edge ``{u, v^-1}`` for every cyclic adjacency ``uv``, counted with multiplicity."""
    counts: Counter = Counter()
    for w in words:
        if not isinstance(w, CyclicWord):
            raise MalformedInputError(f"{w!r} is not a CyclicWord")
        if not len(w):
            raise MalformedInputError("the empty word has no Whitehead graph")
        check_rank(w, rank)
        letters = w.letters
        for i, u in enumerate(letters):
            v = letters[(i + 1) % len(letters)]
            if u == -v:
                raise MalformedInputError(f"loop at {letter_name(u)}: word not cyclically reduced")
            counts[_edge(u, -v)] += 1
    return WhiteheadGraph(rank, dict(counts))


def union(g: WhiteheadGraph, h: WhiteheadGraph) -> WhiteheadGraph:
    if g.rank != h.rank:
        raise MalformedInputError("cannot unite graphs of different rank")
    counts = Counter(g.edges)
    counts.update(h.edges)
    return WhiteheadGraph(g.rank, dict(counts))


def articulation_points(adj: dict[int, set[int]]) -> set[int]:
    """Tarjan's low-link search, iterative; ``adj`` is a simple undirected graph."""
    order = {v: i for i, v in enumerate(adj)}
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    cuts: set[int] = set()
    timer = 0
    for root in adj:
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, None, iter(sorted(adj[root], key=order.get)))]
        while stack:
            v, parent, it = stack[-1]
            for w in it:
                if w == parent:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(sorted(adj[w], key=order.get))))
                    break
            else:
                stack.pop()
                if parent is not None:
                    low[parent] = min(low[parent], low[v])
                    if parent == root:
                        root_children += 1
                    elif low[v] >= disc[parent]:
                        cuts.add(parent)
        if root_children > 1:
            cuts.add(root)
    return cuts


def cut_vertices(g: WhiteheadGraph) -> set[int]:
    adj = {v: nbrs for v, nbrs in g.adjacency().items() if nbrs}
    return articulation_points(adj)


def format_vertex_set(vs: Iterable[int]) -> str:
    return "{" + ", ".join(letter_name(v) for v in sorted(vs, key=letter_key)) + "}"


@dataclass(frozen=True)
class SeparabilityVerdict:
    status: str
    graph: WhiteheadGraph
    reason: str
    cut_vertices: frozenset[int] = frozenset()
    unused_generators: tuple[int, ...] = ()
    components: int = 1

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "cut_vertices": [letter_name(v) for v in sorted(self.cut_vertices, key=letter_key)],
            "unused_generators": [f"x{k}" for k in self.unused_generators],
            "components": self.components,
            "graph": graph_json(self.graph),
        }


def graph_json(g: WhiteheadGraph) -> dict:
    return {
        "rank": g.rank,
        "edges": [[letter_name(u), letter_name(v), m] for (u, v), m in g.sorted_edges()],
    }


def analyse(g: WhiteheadGraph) -> SeparabilityVerdict:
    """Certificate check on an already built graph."""
    used = {abs(v) for v in g.incident_vertices()}
    unused = tuple(k for k in range(1, g.rank + 1) if k not in used)
    comps = g.components()
    cuts = frozenset(cut_vertices(g))
    if unused:
        reason = "unused generator " + ", ".join(f"x{k}" for k in unused)
    elif len(comps) != 1:
        reason = f"disconnected ({len(comps)} components)"
    elif cuts:
        reason = "cut vertex " + format_vertex_set(cuts)
    else:
        return SeparabilityVerdict(NOT_SEPARABLE, g, "connected, no cut vertex", cuts, (), 1)
    return SeparabilityVerdict(INCONCLUSIVE, g, reason, cuts, unused, len(comps))


def separability_obstruction(words: Iterable[Word], rank: int) -> SeparabilityVerdict:
    """NOT_SEPARABLE is a certificate; INCONCLUSIVE names what blocked it."""
    cores = []
    for w in words:
        if not w:
            raise MalformedInputError("trivial word in the set")
        cores.append(cyclic_core(w))
    return analyse(build(cores, rank))
