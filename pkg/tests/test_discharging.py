from fractions import Fraction

import pytest

from corpus import complete_graph_embedded, discharging_corpus, wheel
from ewcolour.discharging import (
    apply_rules,
    initial_charges,
    required_rho,
    verify_final,
)
from ewcolour.embedding import euler_genus, insert_vertex_in_face
from ewcolour.generators import e1_all, k7_torus, torus_grid_quad, torus_grid_tri
from ewcolour.reducer import detect_configuration

EPS = Fraction(1, 43)


def discharged(graph, eps=EPS):
    return apply_rules(graph, initial_charges(graph), eps)


def test_initial_charge_values():
    g = torus_grid_tri(4, 4)  # 6-regular triangulation
    ledger = initial_charges(g)
    assert all(c == 0 for c in ledger.vertex["ch0"].values())  # deg 6 -> 0
    assert all(c == 0 for c in ledger.face["ch0"].values())    # 3-faces -> 0


def test_k7_total_is_six_times_genus_minus_two():
    g = k7_torus()
    ledger = initial_charges(g)
    assert ledger.stage_total("ch0") == 0  # 6(2-2)


def test_initial_total_matches_topology_on_corpus():
    for name, g in discharging_corpus():
        ledger = initial_charges(g)
        assert ledger.stage_total("ch0") == 6 * (euler_genus(g) - 2), name


def test_conservation_exact_across_all_stages():
    for name, g in discharging_corpus():
        ledger = discharged(g)
        totals = {s: ledger.stage_total(s) for s in ledger.stages()}
        assert len(set(totals.values())) == 1, name


def _pump_degree(graph, hub, forbidden, target):
    """Stellar-subdivide faces at `hub` avoiding `forbidden` corners until
    deg(hub) reaches target."""
    next_id = max(graph.vertices()) + 1
    while graph.degree(hub) < target:
        for fi, face in enumerate(graph.faces()):
            corners = [graph.tail(d) for d, _ in face.steps]
            if hub in corners and len(set(corners)) == len(corners) \
                    and not (set(corners) - {hub}) & set(forbidden):
                graph = insert_vertex_in_face(graph, fi, next_id)
                next_id += 1
                break
        else:
            raise AssertionError("no pumpable face found")
    return graph


def test_r1_four_face_with_two_low_vertices_sends_one_each():
    g = torus_grid_quad(3, 4)
    face = g.faces()[0]
    a, b, c, d = [g.tail(dd) for dd, _ in face.steps]
    g = _pump_degree(g, a, (b, c, d), 7)
    g = _pump_degree(g, c, (a, b, d), 7)
    ledger = discharged(g)
    got = {}
    for t in ledger.transfers:
        if t.rule == "R1" and t.source[0] == "f":
            corners = {g.tail(dd) for dd, _ in g.faces()[t.source[1]].steps}
            if corners == {a, b, c, d}:
                got[t.sink] = got.get(t.sink, Fraction(0)) + t.amount
    assert got == {("v", b): Fraction(1), ("v", d): Fraction(1)}


def test_r2_nine_vertex_sender_amount():
    g = wheel(9)  # hub degree 9, rim degree 3
    ledger = discharged(g)
    amounts = {t.amount for t in ledger.transfers
               if t.rule == "R2" and t.source == ("v", 0) and t.redirected_from is None}
    assert amounts == {Fraction(128, 387)}  # (3 - 1/43)/9


def test_sheltered_six_vertex_receives_nothing():
    # 6-regular triangular torus: no 4+ faces, no 7+ vertices anywhere
    g = torus_grid_tri(4, 4)
    ledger = discharged(g)
    assert ledger.transfers == []
    assert ledger.vertex["ch2"] == ledger.vertex["ch0"]


def test_redirection_never_exceeds_sender_budget():
    for name, g in discharging_corpus():
        ledger = discharged(g)
        sent: dict[int, Fraction] = {}
        for t in ledger.transfers:
            if t.rule == "R2":
                v = t.source[1]
                sent[v] = sent.get(v, Fraction(0)) + t.amount
        for v, total in sent.items():
            budget = ledger.vertex["ch0"][v] - EPS
            assert total <= budget, (name, v)


def test_seven_plus_vertices_keep_epsilon():
    for name, g in discharging_corpus():
        ledger = discharged(g)
        for v in g.vertices():
            if g.degree(v) >= 7:
                assert ledger.vertex["ch3"][v] >= EPS, (name, v)


def test_faces_never_negative_after_rules():
    for name, g in discharging_corpus():
        ledger = discharged(g)
        assert all(c >= 0 for c in ledger.face["ch3"].values()), name


def test_verify_final_on_corpus():
    for name, g in discharging_corpus():
        ledger = discharged(g)
        cfg = detect_configuration(g, e1_all(g))
        report = verify_final(g, ledger, EPS, None if cfg is None else cfg.kind.value)
        assert report.conserved, name
        assert not report.redirection_violations, name
        assert not report.unavoidability_violated, name
        if cfg is None:
            assert not report.deficient_vertices, name
            assert not report.deficient_faces, name


def test_k12_configuration_free_graph_has_no_deficiencies():
    g = complete_graph_embedded(12)
    assert detect_configuration(g, e1_all(g)) is None
    report = verify_final(g, discharged(g), EPS, None)
    assert report.deficient_vertices == []
    assert report.deficient_faces == []
    assert not report.unavoidability_violated


def test_configuration_free_claim_across_epsilon_range():
    g = complete_graph_embedded(12)
    for denom in (43, 50, 100, 1000):
        eps = Fraction(1, denom)
        report = verify_final(g, discharged(g, eps), eps, None)
        assert report.conserved
        assert not report.deficient_vertices
        assert not report.deficient_faces


def test_epsilon_range_enforced():
    g = k7_torus()
    with pytest.raises(ValueError):
        apply_rules(g, initial_charges(g), Fraction(1, 42))
    with pytest.raises(ValueError):
        apply_rules(g, initial_charges(g), Fraction(0))
    with pytest.raises(ValueError):
        required_rho(3, Fraction(1, 10))


def test_verify_requires_final_stage():
    g = k7_torus()
    with pytest.raises(ValueError):
        verify_final(g, initial_charges(g), EPS, None)


def test_required_rho_values():
    assert required_rho(2, EPS) == 0
    assert required_rho(3, EPS) == 516
    assert required_rho(10, EPS) == 516 * 8
    assert required_rho(2, Fraction(1, 100)) == 0
