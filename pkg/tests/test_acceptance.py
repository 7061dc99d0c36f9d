"""Acceptance criteria, one test per criterion, each printing a verdict line.

Run with `pytest -v tests/test_acceptance.py` to get one pass/fail line per
criterion from pytest itself; each test also prints a summary line.
"""

import itertools
import random
import time
from fractions import Fraction

from corpus import discharging_corpus
from ewcolour.cli import run
from ewcolour.colouring import ListAssignment, exact_solve, is_e1_acyclic, is_proper
from ewcolour.discharging import apply_rules, initial_charges, required_rho, verify_final
from ewcolour.edgewidth import (
    iter_simple_cycles,
    weighted_edge_width_fast,
    weighted_edge_width_oracle,
)
from ewcolour.embedding import EmbeddingError, add_cofacial_edge, euler_genus, replace_star
from ewcolour.generators import (
    GeneratorSpec,
    e1_all,
    e1_none,
    e1_random,
    generate,
    k7_torus,
    klein_grid,
    projective_wheel,
    random_embedded_graph,
    random_planar_triangulation,
    torus_grid_quad,
    torus_grid_tri,
)
from ewcolour.reducer import detect_configuration, solve_by_reduction

EPS = Fraction(1, 43)


def _criterion_1_instances():
    specs = []
    for m in range(3, 9):
        for n in range(m, 9):
            specs.append(GeneratorSpec("torus_grid_tri", m=m, n=n))
    for m, n in ((3, 9), (3, 10), (3, 11), (3, 12), (4, 9), (4, 10), (4, 11),
                 (4, 12), (5, 9), (5, 10), (6, 9), (10, 10), (12, 12)):
        specs.append(GeneratorSpec("torus_grid_tri", m=m, n=n))
    for m in range(3, 8):
        for n in range(m, 8):
            specs.append(GeneratorSpec("klein_grid", m=m, n=n))
    for m, n in ((3, 8), (4, 8), (5, 8), (8, 8), (10, 10)):
        specs.append(GeneratorSpec("klein_grid", m=m, n=n))
    for n in range(4, 49):
        specs.append(GeneratorSpec("projective_wheel", n=n))
    specs.append(GeneratorSpec("k7_torus"))
    assert len(specs) == 100
    return specs


def test_criterion_1_vacuous_hypothesis_end_to_end():
    t0 = time.time()
    passed = 0
    for i, base in enumerate(_criterion_1_instances()):
        spec = GeneratorSpec(base.family, m=base.m, n=base.n,
                             e1_policy="all", palette_size=30, k=9,
                             lists_seed=1000 + i)
        graph, classing, lists = generate(spec)
        phi = solve_by_reduction(graph, classing, lists)
        norm = lists.normalized(9)
        assert is_proper(graph, phi)
        ok, _ = is_e1_acyclic(graph, classing, phi)
        assert ok
        assert all(phi[v] in norm.colours(v) for v in graph.vertices())
        passed += 1
    elapsed = time.time() - t0
    print(f"ACCEPTANCE 1 vacuous-hypothesis end-to-end: "
          f"{'PASS' if passed == 100 else 'FAIL'} ({passed}/100 in {elapsed:.1f}s)")
    assert passed == 100
    assert elapsed < 120.0


def test_criterion_2_exact_solver_soundness():
    rng = random.Random(424)
    instances = 0
    feasible = infeasible = 0
    while instances < 200:
        seed = rng.randrange(10 ** 6)
        n = rng.randrange(3, 9)
        g = random_embedded_graph(n, rng.randrange(1, 6), seed)
        classing = (e1_all(g), e1_none(g), e1_random(g, 0.5, seed))[instances % 3]
        k = rng.choice((2, 2, 3))
        palette = list(range(k + 2))
        lists = ListAssignment(
            {v: frozenset(rng.sample(palette, k)) for v in g.vertices()}, k)
        phi = exact_solve(g, classing, lists)
        if phi is not None:
            assert is_proper(g, phi)
            assert is_e1_acyclic(g, classing, phi)[0]
            assert all(phi[v] in lists.colours(v) for v in g.vertices())
            feasible += 1
        else:
            verts = sorted(g.vertices())
            for combo in itertools.product(*(sorted(lists.colours(v)) for v in verts)):
                cand = dict(zip(verts, combo))
                if is_proper(g, cand) and is_e1_acyclic(g, classing, cand)[0]:
                    raise AssertionError(
                        f"solver said INFEASIBLE but {cand} is valid (seed {seed})")
            infeasible += 1
        instances += 1
    print(f"ACCEPTANCE 2 oracle soundness: PASS "
          f"(200 instances, {feasible} feasible, {infeasible} confirmed infeasible)")
    assert feasible + infeasible == 200
    assert infeasible > 0  # the sample must actually exercise both verdicts


def test_criterion_3_edge_width_agreement():
    rng = random.Random(77)
    graphs = 0
    comparisons = 0
    while graphs < 100:
        seed = rng.randrange(10 ** 6)
        n = rng.randrange(4, 15)
        g = random_embedded_graph(n, rng.randrange(2, 6), seed)
        for t in (1, 2):
            for classing in (e1_all(g), e1_none(g), e1_random(g, 0.5, seed)):
                a = weighted_edge_width_oracle(g, classing, t)
                b = weighted_edge_width_fast(g, classing, t)
                assert a.width == b.width, (seed, t, a.width, b.width)
                comparisons += 1
        graphs += 1
    print(f"ACCEPTANCE 3 edge-width agreement: PASS "
          f"(100 graphs, {comparisons} comparisons, exact equality)")


def _surgery_bases():
    while True:
        yield torus_grid_quad(3, 3)
        yield torus_grid_quad(3, 4)
        yield torus_grid_tri(3, 3)
        yield torus_grid_tri(3, 4)
        yield klein_grid(3, 3)
        yield klein_grid(3, 4)
        yield projective_wheel(6)
        yield projective_wheel(8)
        yield k7_torus()
        yield random_planar_triangulation(10, 77)


def _ge(after, before):
    if before is None:
        return after is None
    return after is None or after >= before


def test_criterion_4_surgery_monotonicity():
    rng = random.Random(99)
    applied_cofacial = applied_star = 0
    bases = _surgery_bases()
    while applied_cofacial + applied_star < 200:
        g = next(bases)
        assert euler_genus(g) <= 2
        classing = e1_random(g, 0.75, rng.randrange(10 ** 6)) \
            if rng.random() < 0.5 else e1_all(g)
        if (applied_cofacial + applied_star) % 2 == 0:
            sites = []
            for face in g.faces():
                steps = face.steps
                for k in range(len(steps)):
                    d1, _ = steps[k]
                    d2, _ = steps[(k + 1) % len(steps)]
                    u, v, w = g.tail(d1), g.head(d1), g.head(d2)
                    if (len({u, v, w}) == 3 and classing.is_e1(d1 >> 1)
                            and classing.is_e1(d2 >> 1)
                            and not g.has_edge_between(u, w)):
                        sites.append((u, v, w))
            if not sites:
                continue
            u, v, w = sites[rng.randrange(len(sites))]
            before = weighted_edge_width_oracle(g, classing, 2).width
            g2 = add_cofacial_edge(g, classing, u, v, w)
            after = weighted_edge_width_oracle(g2, classing.restricted_to(g2), 2).width
            assert _ge(after, before), ("cofacial", u, v, w, before, after)
            applied_cofacial += 1
        else:
            v = rng.choice(sorted(g.vertices()))
            e1_nbrs = [g.head(d) for d in g.rotation_at(v) if classing.is_e1(d >> 1)]
            chords = []
            for _ in range(5):
                if len(e1_nbrs) < 2:
                    break
                x, y = rng.sample(e1_nbrs, 2)
                if g.has_edge_between(x, y):
                    continue
                try:
                    replace_star(g, classing, v, chords + [(x, y)])
                except EmbeddingError:
                    continue
                chords.append((x, y))
            g2 = replace_star(g, classing, v, chords)
            if not g2.is_connected():
                continue
            before = weighted_edge_width_oracle(g, classing, 2).width
            after = weighted_edge_width_oracle(g2, classing.restricted_to(g2), 2).width
            assert _ge(after, before), ("star", v, chords, before, after)
            applied_star += 1
    print(f"ACCEPTANCE 4 surgery monotonicity: PASS "
          f"({applied_cofacial} cofacial + {applied_star} star, 0 violations)")


def test_criterion_5_discharging_exactness():
    checked = 0
    none_seen = 0
    for name, g in discharging_corpus():
        ledger = apply_rules(g, initial_charges(g), EPS)
        genus = euler_genus(g)
        totals = {s: ledger.stage_total(s) for s in ledger.stages()}
        assert totals["ch0"] == 6 * (genus - 2), name
        assert len(set(totals.values())) == 1, name
        cfg = detect_configuration(g, e1_all(g))
        report = verify_final(g, ledger, EPS, None if cfg is None else cfg.kind.value)
        assert report.conserved
        if cfg is None:
            none_seen += 1
            assert not report.deficient_vertices, name
            assert not report.deficient_faces, name
        checked += 1
    print(f"ACCEPTANCE 5 discharging exactness: PASS "
          f"({checked} graphs, {none_seen} configuration-free, all exact)")
    assert none_seen >= 1


def test_criterion_6_rho_formula():
    for g in range(2, 11):
        assert required_rho(g, EPS) == 516 * (g - 2)
        assert run(["rho", "--genus", str(g), "--epsilon", "1/43"]) == 0
    print("ACCEPTANCE 6 formula reproduction: PASS (rho = 516(g-2) for g in 2..10)")


def _greedy_proper(g, rng, colours=12):
    phi = {}
    for v in sorted(g.vertices()):
        used = {phi[u] for u in g.neighbours(v) if u in phi}
        options = [c for c in range(colours + len(used)) if c not in used]
        phi[v] = rng.choice(options[:4]) if len(options) > 1 else options[0]
    return phi


def test_criterion_7_checker_equivalence():
    rng = random.Random(2024)
    compared = 0
    disagreements = 0
    failures_seen = 0
    while compared < 120:
        seed = rng.randrange(10 ** 6)
        n = rng.randrange(4, 11)
        g = random_embedded_graph(n, rng.randrange(2, 7), seed)
        classing = e1_all(g) if compared % 2 else e1_random(g, 0.7, seed)
        phi = _greedy_proper(g, rng, colours=3 if n <= 6 else 4)
        if not is_proper(g, phi):
            continue
        fast_ok, _ = is_e1_acyclic(g, classing, phi)
        naive_ok = True
        for cycle, _w in iter_simple_cycles(g):
            if all(classing.is_e1(e) for e in cycle.edges) \
                    and len({phi[v] for v in cycle.vertices}) == 2:
                naive_ok = False
                break
        if fast_ok != naive_ok:
            disagreements += 1
        if not naive_ok:
            failures_seen += 1
        compared += 1
    print(f"ACCEPTANCE 7 checker equivalence: "
          f"{'PASS' if disagreements == 0 else 'FAIL'} "
          f"({compared} colourings, {failures_seen} with bicoloured cycles, "
          f"{disagreements} discrepancies)")
    assert disagreements == 0
    assert failures_seen > 0  # both verdicts must occur in the sample


def test_criterion_8_unavoidability_on_planar_triangulations():
    rng = random.Random(31)
    hits = 0
    for i in range(100):
        n = rng.randrange(5, 40)
        g = random_planar_triangulation(n, seed=rng.randrange(10 ** 6))
        classing = e1_all(g) if i % 2 else e1_random(g, 0.5, i)
        cfg = detect_configuration(g, classing)
        assert cfg is not None, f"no configuration on planar triangulation (i={i})"
        hits += 1
    print(f"ACCEPTANCE 8 unavoidability at desk scale: PASS ({hits}/100 detections)")
    assert hits == 100
