"""Surfaces, hyperbolic floors, and the two families of tower presentations.

Every floor here has one surface vertex and one non-surface vertex joined
by as many edges as the surface has boundary components.  Gluing a
surface with ``k`` boundary classes adds ``k - 1`` Bass-Serre generators.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import InvalidFloorError, MalformedInputError
from .morphisms import FreeMap, compose
from .presentations import (
    KILLED,
    MATCHED,
    Presentation,
    map_relator_check,
    translate,
)
from .words import EMPTY, Word, commutator, commute, cyclic_core, invert, support

PASS, FAIL, UNCHECKED = "PASS", "FAIL", "UNCHECKED"


@dataclass(frozen=True)
class Surface:
    """Compact connected surface: orientability, genus or crosscaps, boundary count."""

    orientable: bool
    genus_or_crosscaps: int
    boundary_count: int
    euler: int = field(init=False)

    def __post_init__(self):
        if self.genus_or_crosscaps < 0 or self.boundary_count < 0:
            raise MalformedInputError("surface parameters must be non-negative")
        if not self.orientable and self.genus_or_crosscaps < 1:
            raise MalformedInputError("a non-orientable surface needs at least one crosscap")
        if self.orientable:
            chi = -(2 * self.genus_or_crosscaps - 2 + self.boundary_count)
        else:
            chi = 2 - self.genus_or_crosscaps - self.boundary_count
        object.__setattr__(self, "euler", chi)

    @property
    def name(self) -> str:
        r = self.boundary_count
        if self.orientable and self.genus_or_crosscaps == 0:
            base = "sphere"
        elif self.orientable and self.genus_or_crosscaps == 1:
            base = "torus"
        elif self.orientable:
            base = f"genus-{self.genus_or_crosscaps} surface"
        elif self.genus_or_crosscaps == 1:
            base = "projective plane"
        else:
            base = f"{self.genus_or_crosscaps}-crosscap surface"
        return f"{r}-punctured {base}" if r else base

    def is_once_punctured_torus(self) -> bool:
        return self.orientable and self.genus_or_crosscaps == 1 and self.boundary_count == 1

    def is_four_punctured_sphere(self) -> bool:
        return self.orientable and self.genus_or_crosscaps == 0 and self.boundary_count == 4

    def is_thrice_punctured_projective_plane(self) -> bool:
        return (not self.orientable) and self.genus_or_crosscaps == 1 and self.boundary_count == 3

    @property
    def free_rank(self) -> int:
        if not self.boundary_count:
            raise MalformedInputError("closed surface groups are not free")
        return 1 - self.euler

    def presentation(self) -> Presentation:
        """``<y.., s_1..s_r | [y1,y2]..[y_{2m-1},y_{2m}] = s_1..s_r>``, or squares of crosscaps."""
        m, r = self.genus_or_crosscaps, self.boundary_count
        if self.orientable:
            handles = [f"y{k}" for k in range(1, 2 * m + 1)]
        else:
            handles = [f"c{k}" for k in range(1, m + 1)]
        gens = handles + [f"s{k}" for k in range(1, r + 1)]
        lhs = EMPTY
        if self.orientable:
            for k in range(0, 2 * m, 2):
                lhs = lhs * commutator(Word.generator(k + 1), Word.generator(k + 2))
        else:
            for k in range(1, m + 1):
                lhs = lhs * Word((k, k))
        rhs = Word(range(len(handles) + 1, len(gens) + 1))
        return Presentation(tuple(gens), (lhs * invert(rhs),))

    def tietze_free(self) -> Presentation:
        """Drop ``s_r`` together with the single relator."""
        if not self.boundary_count:
            raise MalformedInputError("closed surface groups are not free")
        gens = self.presentation().generators[:-1]
        return Presentation(gens, ())


def surface(orientable: bool, genus_or_crosscaps: int, boundary_count: int) -> Surface:
    return Surface(orientable, genus_or_crosscaps, boundary_count)


ONCE_PUNCTURED_TORUS = Surface(True, 1, 1)
FOUR_PUNCTURED_SPHERE = Surface(True, 0, 4)
THRICE_PUNCTURED_PROJECTIVE_PLANE = Surface(False, 1, 3)


@dataclass(frozen=True)
class FloorSpec:
    """One floor ``(upper, lower, retraction)``.

    ``gluing_words`` are words in ``lower``, one per boundary class.
    ``surface_pair`` names two surface-group elements (words in ``upper``)
    whose images under the retraction must not commute.
    """

    lower: Presentation
    upper: Presentation
    surface: Surface
    gluing_words: tuple[Word, ...]
    bass_serre_generators: tuple[str, ...]
    retraction: FreeMap
    surface_generators: tuple[str, ...] = ()
    surface_pair: tuple[Word, Word] | None = None


def _check_fresh(lower: Presentation, fresh: Sequence[str], count: int) -> tuple[str, ...]:
    fresh = tuple(fresh)
    if len(fresh) != count:
        raise InvalidFloorError(f"expected {count} fresh generator names, got {len(fresh)}")
    clash = set(fresh) & set(lower.generators)
    if clash or len(set(fresh)) != len(fresh):
        raise InvalidFloorError(f"fresh names clash: {sorted(clash) or fresh}")
    return fresh


def _check_pair(lower: Presentation, w1: Word, w2: Word) -> None:
    for w in (w1, w2):
        if not w:
            raise InvalidFloorError("gluing words must be nontrivial")
        if w.max_index > lower.rank:
            raise InvalidFloorError(f"gluing word {w} is not a word in the lower floor")
    if commute(w1, w2):
        raise InvalidFloorError(
            f"gluing words {lower.show(w1)} and {lower.show(w2)} commute"
        )


def glue_punctured_sphere(
    lower: Presentation, boundary_words: Sequence[Word], fresh: Sequence[str]
) -> FloorSpec:
    """Glue a sphere with ``r`` holes along ``boundary_words`` (``u_1 .. u_r``).

    Boundary ``s_i`` is identified with ``t_i u_i t_i^-1`` for ``i < r`` and
    with ``u_r`` itself, giving the relator ``t_1 u_1 t_1^-1 ... u_r``.
    """
    words = tuple(boundary_words)
    r = len(words)
    if r < 1:
        raise InvalidFloorError("need at least one boundary word")
    for w in words:
        if not w or w.max_index > lower.rank:
            raise InvalidFloorError(f"bad boundary word {w}")
    fresh = _check_fresh(lower, fresh, r - 1)
    n = lower.rank
    upper_rank = n + r - 1
    t = [Word.generator(n + i + 1) for i in range(r - 1)]
    boundary = [t[i] * words[i] * invert(t[i]) for i in range(r - 1)] + [words[-1]]
    relator = EMPTY
    for b in boundary:
        relator = relator * b
    upper = lower.extend(fresh, [relator])
    retraction = FreeMap.from_partial(upper_rank, n, {n + i + 1: EMPTY for i in range(r - 1)})
    pair = (boundary[0], boundary[max(0, r - 2)])
    return FloorSpec(
        lower, upper, Surface(True, 0, r), words, fresh, retraction, (), pair
    )


def glue_four_punctured_sphere(
    lower: Presentation, w1: Word, w2: Word, fresh: Sequence[str] = ("t1", "t2", "t3")
) -> FloorSpec:
    """Relator ``t1 w1 t1^-1 t2 w1^-1 t2^-1 [w2, t3]^-1``; retraction kills the t's."""
    _check_pair(lower, w1, w2)
    return glue_punctured_sphere(lower, (w1, invert(w1), w2, invert(w2)), fresh)


def glue_once_punctured_torus(
    lower: Presentation, w1: Word, w2: Word, fresh: Sequence[str] = ("y1", "y2")
) -> FloorSpec:
    """Relator ``[y1, y2][w1, w2]^-1``; retraction ``y1 -> w1, y2 -> w2``."""
    _check_pair(lower, w1, w2)
    fresh = _check_fresh(lower, fresh, 2)
    n = lower.rank
    y1, y2 = Word.generator(n + 1), Word.generator(n + 2)
    upper = lower.extend(fresh, [commutator(y1, y2) * invert(commutator(w1, w2))])
    retraction = FreeMap.from_partial(n + 2, n, {n + 1: w1, n + 2: w2})
    return FloorSpec(
        lower, upper, ONCE_PUNCTURED_TORUS, (commutator(w1, w2),), (), retraction, fresh, (y1, y2)
    )


@dataclass(frozen=True)
class Condition:
    name: str
    status: str
    detail: str


@dataclass(frozen=True)
class FloorReport:
    conditions: tuple[Condition, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.conditions)

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "conditions": [
                {"name": c.name, "status": c.status, "detail": c.detail} for c in self.conditions
            ],
        }


def validate_floor(floor: FloorSpec, strict_surface_list: bool = False) -> FloorReport:
    s = floor.surface
    conds = []

    ok = s.is_once_punctured_torus() or s.euler <= -2
    detail = f"{s.name}, euler characteristic {s.euler}"
    if ok and strict_surface_list:
        ok = (
            s.is_once_punctured_torus()
            or s.is_four_punctured_sphere()
            or s.is_thrice_punctured_projective_plane()
        )
        if not ok:
            detail += "; not in the three-surface list"
    conds.append(Condition("surface", PASS if ok else FAIL, detail))

    n_glue = len(floor.gluing_words)
    conds.append(
        Condition(
            "boundary classes",
            PASS if n_glue == s.boundary_count else FAIL,
            f"{n_glue} gluing classes for {s.boundary_count} boundary components",
        )
    )

    r = floor.retraction
    lower_n = floor.lower.rank
    fixes = r.source_rank == floor.upper.rank and r.target_rank == lower_n and all(
        r.images[k - 1].letters == (k,) for k in range(1, lower_n + 1)
    )
    if fixes:
        matches = map_relator_check(r, floor.upper, floor.lower)
        bad = [m.source_index for m in matches if m.status not in (KILLED, MATCHED)]
        killed = sum(m.status == KILLED for m in matches)
        if bad:
            fixes = False
            detail = f"relators {bad} do not map to relators of the lower floor"
        else:
            detail = f"identity on {lower_n} lower generators; {killed} relator(s) killed"
    else:
        detail = "retraction does not restrict to the identity on the lower floor"
    conds.append(Condition("retraction", PASS if fixes else FAIL, detail))

    if floor.surface_pair is None:
        conds.append(Condition("non-abelian image", UNCHECKED, "no designated pair"))
    else:
        p1, p2 = floor.surface_pair
        i1, i2 = r(p1), r(p2)
        ok = bool(i1) and bool(i2) and not commute(i1, i2)
        how = "exact: lower floor is free" if not floor.lower.relators else (
            "checked in the free group on the lower generators"
        )
        conds.append(
            Condition(
                "non-abelian image",
                PASS if ok else FAIL,
                f"images {floor.lower.show(i1)} and {floor.lower.show(i2)} "
                f"{'do not commute' if ok else 'commute'} ({how})",
            )
        )
    conds.append(Condition("cyclic-floor alternative", UNCHECKED, "not exercised"))
    return FloorReport(tuple(conds))


@dataclass(frozen=True)
class TowerSpec:
    """Floors ordered from the top down to the free ground floor."""

    floors: tuple[FloorSpec, ...]
    ground: Presentation

    def __post_init__(self):
        if self.ground.relators:
            raise MalformedInputError("the ground floor must be free")
        below = self.ground
        for floor in reversed(self.floors):
            if floor.lower != below:
                raise MalformedInputError("floor does not sit on the floor below it")
            below = floor.upper

    @property
    def top(self) -> Presentation:
        return self.floors[0].upper if self.floors else self.ground

    def to_dot(self, name: str = "tower") -> str:
        lines = [f"graph {name} {{", "  rankdir=BT;"]
        m = len(self.floors)
        lines.append(
            f'  G{m} [shape=box, label="G{m} = <{", ".join(self.ground.generators)}>"];'
        )
        for j in range(m - 1, -1, -1):
            floor = self.floors[j]
            lines.append(f'  G{j} [shape=box, label="G{j}: {floor.upper.rank} generators"];')
            lines.append(f'  S{j} [shape=ellipse, label="{floor.surface.name}"];')
            lines.append(f"  G{j} -- G{j + 1} [style=dashed];")
            for w in floor.gluing_words:
                lines.append(f'  S{j} -- G{j + 1} [label="{floor.lower.show(w)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_tower(ground: Presentation, floors_bottom_up: Sequence[FloorSpec]) -> TowerSpec:
    return TowerSpec(tuple(reversed(floors_bottom_up)), ground)


# -- the G^n family ------------------------------------------------------------


def gn_names(n: int) -> tuple[str, ...]:
    return ("a1", "a2") + tuple(f"t{k}" for k in range(1, 3 * n + 1))


def gluing_sequence(n: int) -> list[str]:
    """``w_1 .. w_2n`` as named words: a1; a2, a2; t1^-1, t1^-1; t4^-1, ..."""
    ws = ["a1", "a2", "a2"]
    i = 1
    while len(ws) < 2 * n + 1:
        ws += [f"t{3 * i - 2}^-1"] * 2
        i += 1
    return ws[: 2 * n]


def build_Gn(n: int) -> tuple[TowerSpec, Presentation]:
    if n < 1:
        raise MalformedInputError("n must be at least 1")
    names = gn_names(n)
    ws = [parse(names, text) for text in gluing_sequence(n)]
    ground = Presentation(("a1", "a2"))
    floors = []
    current = ground
    for k in range(1, n + 1):
        floor = glue_four_punctured_sphere(
            current, ws[2 * k - 2], ws[2 * k - 1], (f"t{3 * k - 2}", f"t{3 * k - 1}", f"t{3 * k}")
        )
        floors.append(floor)
        current = floor.upper
    tower = build_tower(ground, floors)
    return tower, tower.top


def parse(names: Sequence[str], text: str) -> Word:
    from .presentations import parse_named

    return parse_named(text, names)


def stage_names(n: int, i: int) -> tuple[str, ...]:
    """Generators of the ``i``-th intermediate group, ``0 <= i <= n``."""
    a = "e" if i == n else "a"
    return (
        tuple(f"{a}{k}" for k in range(1, i + 3))
        + tuple(f"y{k}" for k in range(1, 2 * i + 1))
        + tuple(f"t{k}" for k in range(3 * i + 1, 3 * n + 1))
    )


def _named_map(src: Sequence[str], dst: Sequence[str], images: dict[str, str]) -> FreeMap:
    """Generator map by name; names absent from ``images`` go to the same name."""
    out = []
    for name in src:
        text = images.get(name, name)
        out.append(parse(dst, text))
    return FreeMap(len(src), len(dst), tuple(out))


def chain_maps(n: int, i: int) -> tuple[FreeMap, FreeMap]:
    """The isomorphism from stage ``i`` to stage ``i + 1`` and its inverse."""
    src, dst = stage_names(n, i), stage_names(n, i + 1)
    a = src[0][0]
    b = dst[0][0]
    t1, t2, t3 = f"t{3 * i + 1}", f"t{3 * i + 2}", f"t{3 * i + 3}"
    fwd = {
        f"{a}1": f"{b}2 y{2 * i + 1} {b}2^-1",
        f"{a}2": f"{b}1",
        t1: f"{b}2^-1",
        t2: f"y{2 * i + 2} {b}2^-1",
        t3: f"{b}{i + 3}",
    }
    for k in range(3, i + 3):
        fwd[f"{a}{k}"] = f"{b}{k}"
    bwd = {
        f"y{2 * i + 1}": f"{t1} {a}1 {t1}^-1",
        f"y{2 * i + 2}": f"{t2} {t1}^-1",
        f"{b}2": f"{t1}^-1",
        f"{b}1": f"{a}2",
        f"{b}{i + 3}": t3,
    }
    for k in range(3, i + 3):
        bwd[f"{b}{k}"] = f"{a}{k}"
    return _named_map(src, dst, fwd), _named_map(dst, src, bwd)


def _stage_presentation(n: int, i: int, to_stage: FreeMap, w0: list[Word]) -> Presentation:
    """Stage ``i`` relators with every ``w_j`` replaced by its image ``to_stage(w_j)``."""
    names = stage_names(n, i)
    g = lambda name: Word.generator(names.index(name) + 1)
    a = names[0][0]
    rels = []
    for j in range(1, i + 1):
        rels.append(
            commutator(g(f"y{2 * j - 1}"), g(f"y{2 * j}"))
            * invert(commutator(to_stage(w0[2 * j - 1]), g(f"{a}{j + 2}")))
        )
    for j in range(i + 1, n + 1):
        u, v = to_stage(w0[2 * j - 2]), to_stage(w0[2 * j - 1])
        t1, t2, t3 = g(f"t{3 * j - 2}"), g(f"t{3 * j - 1}"), g(f"t{3 * j}")
        rels.append(t1 * u * ~t1 * t2 * ~u * ~t2 * ~commutator(v, t3))
    return Presentation(names, tuple(rels))


class TildeConstruction(NamedTuple):
    tower: TowerSpec
    presentation: Presentation
    chain: list[tuple[FreeMap, FreeMap]]
    stages: list[Presentation]
    w_primes: list[Word]


def build_Gn_tilde(n: int) -> TildeConstruction:
    """Stages ``G^(0) = G^n`` through ``G^(n)``, the maps between them, and
    the once-punctured-torus tower over ``<e_1 .. e_{n+2}>``.

    ``w_primes[k - 1]`` is ``w'_k`` as a word in the final presentation.
    """
    if n < 1:
        raise MalformedInputError("n must be at least 1")
    names0 = stage_names(n, 0)
    w0 = [parse(names0, text) for text in gluing_sequence(n)]
    to_stage = FreeMap.identity(len(names0))
    stages = [_stage_presentation(n, 0, to_stage, w0)]
    chain = []
    for i in range(n):
        f, g = chain_maps(n, i)
        chain.append((f, g))
        to_stage = compose(f, to_stage)
        stages.append(_stage_presentation(n, i + 1, to_stage, w0))
    final = stages[-1]
    w_primes = []
    for j in range(1, n + 1):
        w_primes.append(to_stage(w0[2 * j - 1]))
        w_primes.append(to_stage(Word.generator(names0.index(f"t{3 * j}") + 1)))

    ground = Presentation(tuple(f"e{k}" for k in range(1, n + 3)))
    floors = []
    current = ground
    for j in range(n, 0, -1):
        u = translate(w_primes[2 * j - 2], final.generators, current.generators)
        v = translate(w_primes[2 * j - 1], final.generators, current.generators)
        floor = glue_once_punctured_torus(current, u, v, (f"y{2 * j - 1}", f"y{2 * j}"))
        floors.append(floor)
        current = floor.upper
    return TildeConstruction(build_tower(ground, floors), final, chain, stages, w_primes)


def same_presentation(p: Presentation, q: Presentation) -> bool:
    """Equal generator lists and equal relator multisets up to rotation."""
    if p.generators != q.generators:
        return False
    return Counter(cyclic_core(r) for r in p.relators) == Counter(cyclic_core(r) for r in q.relators)


def w_prime_support_ok(construction: TildeConstruction, j: int) -> bool:
    """``w'_{2j-1}`` and ``w'_{2j}`` use only e's and ``y_{2j+1} .. y_{2n}``."""
    final = construction.presentation
    n = len(construction.chain)
    allowed = {final.index(f"e{k}") for k in range(1, n + 3)}
    allowed |= {final.index(f"y{k}") for k in range(2 * j + 1, 2 * n + 1)}
    used = support(construction.w_primes[2 * j - 2]) | support(construction.w_primes[2 * j - 1])
    return used <= allowed


# -- the example with ground floors of ranks 2 and 5 ---------------------------


class TwoFiveExample(NamedTuple):
    G: Presentation
    G_prime: Presentation
    f: FreeMap
    g: FreeMap
    tower: TowerSpec
    tower_prime: TowerSpec


def two_five_example() -> TwoFiveExample:
    """``G = G^3`` and the regluing ``G'`` with the explicit map between them.

    ``g`` is the inverse of ``f`` read off from its definition.
    """
    tower, G = build_Gn(3)
    ground = Presentation(("b1", "b2", "b3"))
    b = ground.parse
    floor1 = glue_once_punctured_torus(ground, b("b1"), b("b3"), ("y1", "y2"))
    p = floor1.upper.parse
    floor2 = glue_four_punctured_sphere(floor1.upper, p("b1"), p("b2"), ("t4", "t5", "t6"))
    p = floor2.upper.parse
    floor3 = glue_four_punctured_sphere(floor2.upper, p("b2"), p("t4^-1"), ("t7", "t8", "t9"))
    tower_prime = build_tower(ground, [floor1, floor2, floor3])
    Gp = tower_prime.top
    f = _named_map(
        G.generators,
        Gp.generators,
        {"a1": "b2 y1 b2^-1", "a2": "b1", "t1": "b2^-1", "t2": "y2 b2^-1", "t3": "b3"},
    )
    g = _named_map(
        Gp.generators,
        G.generators,
        {"b1": "a2", "b2": "t1^-1", "b3": "t3", "y1": "t1 a1 t1^-1", "y2": "t2 t1^-1"},
    )
    return TwoFiveExample(G, Gp, f, g, tower, tower_prime)
