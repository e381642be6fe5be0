"""Stallings core graphs of finitely generated subgroups of free groups."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .words import Word, check_rank, letter_key, letter_name

BASEPOINT = 0


@dataclass(frozen=True)
class CoreGraph:
    """Folded, trimmed core graph.

    Vertices are ``0..num_vertices-1`` with ``0`` the basepoint, numbered
    by breadth-first search so that equal graphs compare equal.  ``arcs``
    holds ``(source, label, target)`` with ``label`` a positive generator
    index.
    """

    rank: int
    num_vertices: int
    arcs: tuple[tuple[int, int, int], ...]
    folded: bool = True

    def out_map(self) -> dict[int, dict[int, int]]:
        """``out[v][l]`` is the end of the arc leaving ``v`` reading letter ``l``."""
        out: dict[int, dict[int, int]] = {v: {} for v in range(self.num_vertices)}
        for s, k, t in self.arcs:
            out[s][k] = t
            out[t][-k] = s
        return out

    def to_dot(self, name: str = "core") -> str:
        lines = [f"digraph {name} {{"]
        for v in range(self.num_vertices):
            shape = "doublecircle" if v == BASEPOINT else "circle"
            lines.append(f"  v{v} [shape={shape}];")
        for s, k, t in self.arcs:
            lines.append(f"  v{s} -> v{t} [label=x{k}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "rank": self.rank,
            "vertices": self.num_vertices,
            "basepoint": BASEPOINT,
            "arcs": [[s, f"x{k}", t] for s, k, t in self.arcs],
        }


class _Folder:
    """Mutable working graph; folding identifies vertices via union-find."""

    def __init__(self):
        self.parent: list[int] = []
        # adj[v][signed label] -> set of neighbour vertices
        self.adj: list[dict[int, set[int]]] = []

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.adj.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def add_arc(self, s: int, k: int, t: int) -> None:
        self.adj[s].setdefault(k, set()).add(t)
        self.adj[t].setdefault(-k, set()).add(s)

    def add_loop(self, w: Word) -> None:
        v = BASEPOINT
        letters = w.letters
        for i, a in enumerate(letters):
            t = BASEPOINT if i == len(letters) - 1 else self.new_vertex()
            self.add_arc(v, a, t)
            v = t

    def merge(self, u: int, v: int) -> int:
        u, v = self.find(u), self.find(v)
        if u == v:
            return u
        if v == BASEPOINT:
            u, v = v, u
        self.parent[v] = u
        for label, nbrs in self.adj[v].items():
            for x in nbrs:
                x = u if x == v else x
                self.adj[u].setdefault(label, set()).add(x)
                back = self.adj[x].setdefault(-label, set())
                back.discard(v)
                back.add(u)
        self.adj[v] = {}
        return u

    def fold(self, rng: random.Random | None = None) -> None:
        pending = list(range(len(self.adj)))
        while pending:
            if rng is not None:
                i = rng.randrange(len(pending))
                pending[i], pending[-1] = pending[-1], pending[i]
            v = self.find(pending.pop())
            labels = [l for l, n in self.adj[v].items() if len(n) > 1]
            if not labels:
                continue
            label = rng.choice(labels) if rng is not None else labels[0]
            a, b = sorted(self.adj[v][label])[:2]
            if rng is not None:
                a, b = rng.sample(sorted(self.adj[v][label]), 2)
            w = self.merge(a, b)
            pending.extend([w, self.find(v)])
            for nbrs in self.adj[w].values():
                pending.extend(nbrs)

    def live_vertices(self) -> list[int]:
        return [v for v in range(len(self.parent)) if self.find(v) == v]

    def degree(self, v: int) -> int:
        total = 0
        for label, nbrs in self.adj[v].items():
            total += len(nbrs)
        return total

    def trim(self) -> set[int]:
        alive = set(self.live_vertices())
        queue = [v for v in alive if v != BASEPOINT and self.degree(v) <= 1]
        while queue:
            v = queue.pop()
            if v not in alive:
                continue
            alive.discard(v)
            for label, nbrs in list(self.adj[v].items()):
                for x in nbrs:
                    self.adj[x][-label].discard(v)
                    if not self.adj[x][-label]:
                        del self.adj[x][-label]
                    if x != BASEPOINT and x in alive and self.degree(x) <= 1:
                        queue.append(x)
            self.adj[v] = {}
        return alive


def _canonical(folder: _Folder, rank: int) -> CoreGraph:
    order = sorted(
        (s * k for k in range(1, rank + 1) for s in (1, -1)), key=letter_key
    )
    number = {BASEPOINT: 0}
    queue = deque([BASEPOINT])
    arcs = []
    while queue:
        v = queue.popleft()
        for label in order:
            for t in folder.adj[v].get(label, ()):
                if t not in number:
                    number[t] = len(number)
                    queue.append(t)
                if label > 0:
                    arcs.append((number[v], label, number[t]))
    return CoreGraph(rank, len(number), tuple(sorted(arcs)))


def core_graph(
    gens: Iterable[Word], rank: int, rng: random.Random | None = None
) -> CoreGraph:
    """Fold the wedge of loops spelling ``gens`` and trim to the core.

    ``rng`` randomises the fold order; the result does not depend on it.
    """
    folder = _Folder()
    folder.new_vertex()
    gens = list(gens)
    for w in gens:
        check_rank(w, rank)
    if rng is not None:
        gens = gens[:]
        rng.shuffle(gens)
    for w in gens:
        if w:
            folder.add_loop(w)
    folder.fold(rng)
    folder.trim()
    return _canonical(folder, rank)


def contains(g: CoreGraph, w: Word) -> bool:
    out = g.out_map()
    v = BASEPOINT
    for a in w.letters:
        nxt = out[v].get(a)
        if nxt is None:
            return False
        v = nxt
    return v == BASEPOINT


def subgroup_rank(g: CoreGraph) -> int:
    return len(g.arcs) - g.num_vertices + 1


def is_rose(g: CoreGraph) -> bool:
    return g.num_vertices == 1 and sorted(k for _, k, _ in g.arcs) == list(
        range(1, g.rank + 1)
    )


def generates_ambient(gens: Iterable[Word], rank: int) -> bool:
    return is_rose(core_graph(gens, rank))


def describe(g: CoreGraph) -> str:
    lines = [f"vertices: {g.num_vertices} (basepoint v0)", f"arcs: {len(g.arcs)}"]
    for s, k, t in g.arcs:
        lines.append(f"  v{s} --{letter_name(k)}--> v{t}")
    return "\n".join(lines)
