"""The eight acceptance criteria, each at its stated tolerance and time budget."""
import itertools
import random
import time
from collections import defaultdict

import networkx as nx

from freetower.forking import FORKS, b_word, fork_witness, minimal_index
from freetower.morphisms import apply, is_primitive, signed_permutation_map
from freetower.presentations import MATCHED, VERIFIED, Presentation, map_relator_check, verify_isomorphism
from freetower.stallings import core_graph, generates_ambient
from freetower.towers import (
    FOUR_PUNCTURED_SPHERE,
    ONCE_PUNCTURED_TORUS,
    THRICE_PUNCTURED_PROJECTIVE_PLANE,
    build_Gn,
    build_Gn_tilde,
    glue_four_punctured_sphere,
    two_five_example,
    w_prime_support_ok,
)
from freetower.whitehead import build, cut_vertices, union
from freetower.words import Word, cyclic_core, reduce

from conftest import ACCEPTANCE, P, random_reduced
from test_morphisms import all_reduced


def run_criterion(number, title, body, budget=None):
    start = time.perf_counter()
    ok, failure = True, None
    try:
        body()
    except AssertionError as exc:
        ok, failure = False, exc
    elapsed = time.perf_counter() - start
    over = budget is not None and elapsed >= budget
    verdict = "PASS" if ok and not over else "FAIL"
    limit = f" < {budget:g}s" if budget is not None else ""
    line = f"criterion {number}: {verdict} - {title} ({elapsed:.2f}s{limit})"
    ACCEPTANCE[number] = line
    print(line)
    if failure is not None:
        raise failure
    assert not over, line


def test_criterion_1_b_word_cut_vertices():
    def body():
        for i in range(1, 9):
            g = build([cyclic_core(b_word(i))], i + 1)
            assert g.is_connected(), i
            assert cut_vertices(g) == {2, -2}, i
            # independent check of the cut vertices
            simple = nx.Graph()
            simple.add_edges_from(g.edges)
            assert set(nx.articulation_points(simple)) == {2, -2}

    run_criterion(1, "b_i graphs connected with cut vertices exactly {x2, X2}, i = 1..8", body, 1.0)


def test_criterion_2_b_sequence_generates():
    def body():
        for n in range(1, 9):
            gens = [b_word(k) for k in range(1, n + 1)] + [Word.generator(n + 1)]
            assert generates_ambient(gens, n + 1), n

    run_criterion(2, "{b_1..b_n, x_(n+1)} generates F_(n+1), n = 1..8", body, 1.0)


def test_criterion_3_isomorphism_chain():
    def body():
        for n in range(1, 6):
            c = build_Gn_tilde(n)
            for i, (f, g) in enumerate(c.chain):
                assert verify_isomorphism(f, g, c.stages[i], c.stages[i + 1]).status == VERIFIED, (n, i)
            _, gn = build_Gn(n)
            assert gn.rank == 2 + 3 * n
            assert c.presentation.rank == 3 * n + 2
            assert all(w_prime_support_ok(c, j) for j in range(1, n + 1))

    run_criterion(3, "isomorphism chain VERIFIED, generator counts, w' support, n = 1..5", body, 2.0)


def test_criterion_4_three_floor_example():
    def body():
        ground = Presentation(("a1", "a2"))
        p = ground
        steps = [("a1", "a2", "t1 t2 t3"), ("a2", "t1^-1", "t4 t5 t6"), ("t1^-1", "t4^-1", "t7 t8 t9")]
        for w1, w2, fresh in steps:
            p = glue_four_punctured_sphere(p, p.parse(w1), p.parse(w2), tuple(fresh.split())).upper
        # transcription of the displayed presentation, relation "lhs = [u, v]" as lhs [u, v]^-1
        names = ("a1", "a2") + tuple(f"t{k}" for k in range(1, 10))
        q = Presentation(names)
        display = Presentation(
            names,
            (
                q.parse("t1 a1 t1^-1 t2 a1^-1 t2^-1 t3 a2 t3^-1 a2^-1"),
                q.parse("t4 a2 t4^-1 t5 a2^-1 t5^-1 t6 t1^-1 t6^-1 t1"),
                q.parse("t7 t1^-1 t7^-1 t8 t1 t8^-1 t9 t4^-1 t9^-1 t4"),
            ),
        )
        assert p.to_json() == display.to_json()
        ex = two_five_example()
        assert ex.G.to_json() == display.to_json()
        Gp = ex.G_prime
        images = {"a1": "b2 y1 b2^-1", "a2": "b1", "t1": "b2^-1", "t2": "y2 b2^-1", "t3": "b3"}
        for name in display.generators:
            assert ex.f(display.gen(name)) == Gp.parse(images.get(name, name))
        assert [m.status for m in map_relator_check(ex.f, display, Gp)] == [MATCHED] * 3

    run_criterion(4, "three sphere gluings reproduce G byte-for-byte; f matches every relator", body)


def _words_with_two_letters(rng, count):
    out = []
    while len(out) < count:
        rank = rng.randint(2, 3)
        core = cyclic_core(random_reduced(rng, rank, rng.randint(2, 16)))
        if len({abs(a) for a in core.letters}) >= 2:
            out.append(core.word)
    return out


def test_criterion_5_fork_witness_suite():
    failures = []

    def body():
        rng = random.Random(5)
        for a in _words_with_two_letters(rng, 200):
            i0 = minimal_index(a)
            for i in (i0, i0 + 2):
                report = fork_witness(a, i)
                if report.verdict != FORKS:
                    failures.append(report.render_text())
        assert not failures, "\n".join(failures)

    run_criterion(5, "200 random words fork with b_i at the minimal i and i + 2", body, 5.0)


def _abelian(w):
    a = sum(1 if x > 0 else -1 for x in w.letters if abs(x) == 1)
    b = sum(1 if x > 0 else -1 for x in w.letters if abs(x) == 2)
    return a, b


def test_criterion_6_primitivity():
    def body():
        assert is_primitive(P("x1"), 2)
        assert is_primitive(P("x2 x1 x2"), 2)
        assert not is_primitive(P("x1 x1"), 2)
        assert not is_primitive(P("x1 x2 X1 X2"), 2)
        words = [w for w in all_reduced(2, 6) if w]
        by_class = defaultdict(list)
        for w in words:
            by_class[_abelian(w)].append(w)

        def has_companion(w):
            # a basis abelianizes to a basis of Z^2, so the determinant must be +-1
            a, b = _abelian(w)
            for (c, d), group in by_class.items():
                if abs(a * d - b * c) == 1:
                    if any(generates_ambient([w, u], 2) for u in group):
                        return True
            return False

        disagreements = [w for w in words if has_companion(w) and not is_primitive(w, 2)]
        assert not disagreements, disagreements

    run_criterion(6, "is_primitive agrees with the companion-word oracle, |w| <= 6", body, 30.0)


def test_criterion_7_surfaces():
    def body():
        for s, chi in (
            (ONCE_PUNCTURED_TORUS, -1),
            (FOUR_PUNCTURED_SPHERE, -2),
            (THRICE_PUNCTURED_PROJECTIVE_PLANE, -2),
        ):
            assert s.euler == chi
            assert s.free_rank == 1 - chi
            assert s.tietze_free().rank == 1 - chi

    run_criterion(7, "Euler characteristics -1, -2, -2 and presentation rank 1 - chi", body)


def test_criterion_8_infrastructure():
    def body():
        rng = random.Random(8)
        for _ in range(500):
            raw = [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(rng.randint(0, 30))]
            once = reduce(raw)
            assert reduce(once.letters) == once
            assert all(x != -y for x, y in zip(once.letters, once.letters[1:]))

        for _ in range(20):
            gens = [random_reduced(rng, 3, rng.randint(1, 7)) for _ in range(rng.randint(1, 4))]
            reference = core_graph(gens, 3)
            for trial in range(10):
                assert core_graph(gens, 3, rng=random.Random(1000 * trial + 17)) == reference

        def cores(k):
            out = []
            while len(out) < k:
                w = cyclic_core(random_reduced(rng, 3, rng.randint(1, 10)))
                if len(w):
                    out.append(w)
            return out

        for _ in range(200):
            A, B = cores(rng.randint(1, 3)), cores(rng.randint(1, 3))
            assert build(A + B, 3).edges == union(build(A, 3), build(B, 3)).edges

        perms = [
            tuple(s * k for s, k in zip(signs, p))
            for p in itertools.permutations(range(1, 4))
            for signs in itertools.product((1, -1), repeat=3)
        ]
        for _ in range(200):
            A = cores(rng.randint(1, 3))
            perm = rng.choice(perms)
            image = [cyclic_core(apply(signed_permutation_map(perm), w.word)) for w in A]
            assert build(image, 3).edges == build(A, 3).permuted(perm).edges

    run_criterion(8, "reduction, fold confluence, union law, permutation equivariance", body)
