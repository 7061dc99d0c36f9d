"""Reducible configurations: detection, surgery, and colouring extension.

The engine repeatedly finds one of the reducible configurations, shrinks the
graph (delete the anchor and embed a prescribed chord set, or close a
saturation corner with a new non-E1 edge), colours the child recursively, and
extends the colouring back.  The extension replays each configuration's
case analysis: choose a colour for the anchor avoiding its neighbours'
colours and the E1-neighbourhoods of a hitting set S of the monochromatic
pairs; when no hitting set leaves a free colour, recolour one member of a
monochromatic pair away from the anchor's neighbourhood colours (legal when
that member's E1-neighbours are rainbow) and retry.  A bounded exhaustive
safety net backs the scripts so the engine can never silently emit a wrong
answer; every produced colouring is checked on the original graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional

from .colouring import (
    Colouring,
    ColouringError,
    ListAssignment,
    creates_bicoloured_cycle,
    exact_solve,
    is_e1_acyclic,
    is_proper,
    rainbow_base,
)
from .discharging import required_rho
from .edgewidth import weighted_edge_width_oracle
from .embedding import (
    EdgeClassing,
    EmbeddedGraph,
    EmbeddingError,
    add_cofacial_edge,
    dart_edge,
    euler_genus,
    replace_star,
)


class ConfigKind(str, Enum):
    LOW_E1 = "LOW_E1"
    SATURATION = "SATURATION"
    DEG3MINUS = "DEG3MINUS"
    FOUR_ADJ_8MINUS = "FOUR_ADJ_8MINUS"
    FIVE_E1FOUR_7MINUS = "FIVE_E1FOUR_7MINUS"
    FIVE_ADJ_6_7 = "FIVE_ADJ_6_7"
    TRIANGULAR6_CLUSTER = "TRIANGULAR6_CLUSTER"


PRIORITY = (
    ConfigKind.LOW_E1,
    ConfigKind.SATURATION,
    ConfigKind.DEG3MINUS,
    ConfigKind.FOUR_ADJ_8MINUS,
    ConfigKind.FIVE_E1FOUR_7MINUS,
    ConfigKind.FIVE_ADJ_6_7,
    ConfigKind.TRIANGULAR6_CLUSTER,
)


class ReductionError(RuntimeError):
    """Engine failure (safety-net exhaustion or hypothesis violation); carries
    the reduction trace collected so far for diagnosis."""

    def __init__(self, message: str, trace: Optional[list] = None):
        super().__init__(message)
        self.trace = trace or []


@dataclass(frozen=True)
class Configuration:
    """A detected reducible configuration: anchor, role-labelled neighbours
    and the chord set its reduction prescribes."""

    kind: ConfigKind
    anchor: int
    roles: dict[str, int] = field(default_factory=dict)
    chords: tuple[tuple[int, int], ...] = ()
    variant: str = ""

    def to_json_dict(self) -> dict:
        return {"kind": self.kind.value, "anchor": self.anchor,
                "roles": dict(self.roles), "chords": [list(c) for c in self.chords],
                "variant": self.variant}


@dataclass(frozen=True)
class ReductionStep:
    """One applied reduction: the child graph plus everything needed to
    extend a child colouring back to the parent."""

    config: Configuration
    deleted_vertex: Optional[int]
    added_edges: tuple[int, ...]
    child: EmbeddedGraph
    child_e1: EdgeClassing


# ---------------------------------------------------------------------------
# detection
# ---------------------------------------------------------------------------

def _e1_degree(graph: EmbeddedGraph, classing: EdgeClassing, v: int) -> int:
    return sum(1 for d in graph.rotation_at(v) if classing.is_e1(dart_edge(d)))


def _e1_neighbours(graph: EmbeddedGraph, classing: EdgeClassing, v: int) -> list[int]:
    return [graph.head(d) for d in graph.rotation_at(v)
            if classing.is_e1(dart_edge(d))]


def _is_triangular(graph: EmbeddedGraph, v: int) -> bool:
    return graph.degree(v) > 0 and all(l == 3 for l in graph.incident_face_lengths(v))


def _complete_chords(nbrs: Iterable[int]) -> tuple[tuple[int, int], ...]:
    ns = sorted(nbrs)
    return tuple((ns[i], ns[j]) for i in range(len(ns)) for j in range(i + 1, len(ns)))


def _detect_low_e1(graph, classing) -> Optional[Configuration]:
    for v in graph.vertices():
        d = graph.degree(v)
        if 4 <= d <= 8 and _e1_degree(graph, classing, v) <= 3:
            return Configuration(ConfigKind.LOW_E1, v,
                                 chords=_complete_chords(_e1_neighbours(graph, classing, v)))
    return None


def _detect_saturation(graph, classing) -> Optional[Configuration]:
    best = None
    for face in graph.faces():
        steps = face.steps
        n = len(steps)
        for k in range(n):
            d1, _ = steps[k]
            d2, _ = steps[(k + 1) % n]
            if not (classing.is_e1(dart_edge(d1)) and classing.is_e1(dart_edge(d2))):
                continue
            u, v, w = graph.tail(d1), graph.head(d1), graph.head(d2)
            if len({u, v, w}) != 3 or graph.has_edge_between(u, w):
                continue
            key = (v, min(u, w), max(u, w))
            if best is None or key < best[0]:
                best = (key, u, v, w)
    if best is None:
        return None
    _, u, v, w = best
    return Configuration(ConfigKind.SATURATION, v, roles={"u": u, "w": w})


def _detect_deg3(graph, classing) -> Optional[Configuration]:
    for v in graph.vertices():
        if graph.degree(v) <= 3:
            return Configuration(ConfigKind.DEG3MINUS, v,
                                 chords=_complete_chords(_e1_neighbours(graph, classing, v)))
    return None


def _detect_four_adj_8minus(graph, classing) -> Optional[Configuration]:
    for v in graph.vertices():
        if graph.degree(v) != 4:
            continue
        lows = [x for x in graph.neighbours(v) if graph.degree(x) <= 8]
        if not lows:
            continue
        u = min(lows)
        nbrs = list(graph.neighbours(v))
        i = nbrs.index(u)
        seq = nbrs[i:] + nbrs[:i]  # (u, v1, v2, v3) in cyclic order
        roles = {"u": seq[0], "v1": seq[1], "v2": seq[2], "v3": seq[3]}
        return Configuration(ConfigKind.FOUR_ADJ_8MINUS, v, roles=roles,
                             chords=((seq[1], seq[3]),))
    return None


def _detect_five_e1four(graph, classing) -> Optional[Configuration]:
    for v in graph.vertices():
        if graph.degree(v) != 5 or _e1_degree(graph, classing, v) != 4:
            continue
        rot = graph.rotation_at(v)
        e1_flags = [classing.is_e1(dart_edge(d)) for d in rot]
        nbrs = [graph.head(d) for d in rot]
        cands = [nbrs[i] for i in range(5)
                 if e1_flags[i] and graph.degree(nbrs[i]) <= 7]
        if not cands:
            continue
        u = min(cands)
        i_u = nbrs.index(u)
        seq = nbrs[i_u:] + nbrs[:i_u]
        flags = e1_flags[i_u:] + e1_flags[:i_u]
        i = flags.index(False)  # the one non-E1 neighbour, position 1..4
        if i >= 3:
            seq = [seq[0]] + seq[1:][::-1]
            i = 5 - i
        # H has edge-set {v_{3-i} v_4, v_{i-1} v_{i+1}} with v_0 = u
        chords = ((seq[3 - i], seq[4]), (seq[i - 1], seq[i + 1]))
        roles = {"u": seq[0], "v1": seq[1], "v2": seq[2], "v3": seq[3], "v4": seq[4]}
        return Configuration(ConfigKind.FIVE_E1FOUR_7MINUS, v, roles=roles,
                             chords=chords, variant=f"i={i}")
    return None


def _detect_five_adj_6_7(graph, classing) -> Optional[Configuration]:
    for v in graph.vertices():
        if graph.degree(v) != 5:
            continue
        six = sorted(x for x in graph.neighbours(v) if graph.degree(x) <= 6)
        seven = sorted(x for x in graph.neighbours(v) if graph.degree(x) <= 7)
        if not six or len(seven) < 2:
            continue
        w = six[0]
        u = min(x for x in seven if x != w)
        nbrs = list(graph.neighbours(v))
        i_u = nbrs.index(u)
        seq = nbrs[i_u:] + nbrs[:i_u]  # starts at u
        if seq[1] == w or seq[4] == w:
            if seq[4] == w:
                seq = [seq[0]] + seq[1:][::-1]
            roles = {"u": seq[0], "w": seq[1], "v1": seq[2], "v2": seq[3], "v3": seq[4]}
            chords = ((roles["v1"], roles["v3"]), (roles["u"], roles["v1"]))
            return Configuration(ConfigKind.FIVE_ADJ_6_7, v, roles=roles,
                                 chords=chords, variant="consecutive")
        if seq[3] == w:
            seq = [seq[0]] + seq[1:][::-1]
        roles = {"u": seq[0], "x1": seq[1], "w": seq[2], "x2": seq[3], "x3": seq[4]}
        chords = ((roles["x1"], roles["x2"]), (roles["x1"], roles["x3"]))
        return Configuration(ConfigKind.FIVE_ADJ_6_7, v, roles=roles,
                             chords=chords, variant="split")
    return None


def _detect_triangular6(graph, classing) -> Optional[Configuration]:
    tri6 = {v for v in graph.vertices()
            if graph.degree(v) == 6 and _is_triangular(graph, v)}
    for v in sorted(tri6):
        nbrs = list(graph.neighbours(v))
        if any(x not in tri6 for x in nbrs):
            continue
        rot = graph.rotation_at(v)
        e1_flags = [classing.is_e1(dart_edge(d)) for d in rot]
        non = [p for p in range(6) if not e1_flags[p]]
        odd_all = all(e1_flags[p] for p in (0, 2, 4))
        even_all = all(e1_flags[p] for p in (1, 3, 5))
        if odd_all or even_all:
            # case B: an alternating triple of E1 spokes exists; label v6 at a
            # non-E1 position so that v1, v3, v5 land on the all-E1 triple
            base = 5
            for q in non:
                if all(e1_flags[(q + j) % 6] for j in (1, 3, 5)):
                    base = q
                    break
            seq = [nbrs[(base + j) % 6] for j in range(1, 7)]
            roles = {f"v{k}": seq[k - 1] for k in range(1, 7)}
            chords = ((seq[0], seq[2]), (seq[0], seq[4]), (seq[2], seq[4]))
            return Configuration(ConfigKind.TRIANGULAR6_CLUSTER, v, roles=roles,
                                 chords=chords, variant="B")
        # case A: exactly two non-E1 spokes of opposite parity; normalize so
        # v6 is non-E1, v1 is E1 and the second non-E1 lands on v3 or v5
        labelling = None
        for base in non:
            for direction in (1, -1):
                seq_pos = [(base + direction * j) % 6 for j in range(1, 7)]
                if not e1_flags[seq_pos[0]]:
                    continue
                other = [k + 1 for k in range(5) if not e1_flags[seq_pos[k]]]
                if other and other[0] in (3, 5):
                    labelling = (seq_pos, other[0])
                    break
            if labelling:
                break
        if labelling is None:
            continue
        seq_pos, bad = labelling
        seq = [nbrs[p] for p in seq_pos]
        u = seq[4] if bad == 3 else seq[2]
        roles = {f"v{k}": seq[k - 1] for k in range(1, 7)}
        roles["u"] = u
        chords = ((seq[0], seq[3]), (seq[1], seq[3]))
        return Configuration(ConfigKind.TRIANGULAR6_CLUSTER, v, roles=roles,
                             chords=chords, variant="A")
    return None


_DETECTORS = {
    ConfigKind.LOW_E1: _detect_low_e1,
    ConfigKind.SATURATION: _detect_saturation,
    ConfigKind.DEG3MINUS: _detect_deg3,
    ConfigKind.FOUR_ADJ_8MINUS: _detect_four_adj_8minus,
    ConfigKind.FIVE_E1FOUR_7MINUS: _detect_five_e1four,
    ConfigKind.FIVE_ADJ_6_7: _detect_five_adj_6_7,
    ConfigKind.TRIANGULAR6_CLUSTER: _detect_triangular6,
}


def detect_configuration(graph: EmbeddedGraph,
                         classing: EdgeClassing) -> Optional[Configuration]:
    """First configuration in priority order, lowest anchor id within a kind.

    Returns None only when every vertex is heavy and the graph is
    saturated, which the charge accounting rules out below genus 3.
    """
    for kind in PRIORITY:
        cfg = _DETECTORS[kind](graph, classing)
        if cfg is not None:
            return cfg
    return None


# ---------------------------------------------------------------------------
# surgery
# ---------------------------------------------------------------------------

def reduce_once(graph: EmbeddedGraph, classing: EdgeClassing,
                cfg: Configuration) -> ReductionStep:
    """Apply the surgery a configuration prescribes.

    SATURATION closes the corner with one non-E1 edge; every other kind
    deletes the anchor and embeds the configuration's chord set, skipping
    chords already present.  Raises if the configuration went stale.
    """
    v = cfg.anchor
    if v not in graph.vertices():
        raise EmbeddingError(f"stale configuration: anchor {v} is gone")
    if cfg.kind == ConfigKind.SATURATION:
        u, w = cfg.roles["u"], cfg.roles["w"]
        before = set(graph.edge_ids())
        child = add_cofacial_edge(graph, classing, u, v, w)
        added = tuple(sorted(set(child.edge_ids()) - before))
        return ReductionStep(cfg, None, added, child, classing.restricted_to(child))

    chords = [c for c in cfg.chords if not graph.has_edge_between(*c)]
    e1_nbrs = set(_e1_neighbours(graph, classing, v))
    for x, y in chords:
        if x not in e1_nbrs or y not in e1_nbrs:
            raise EmbeddingError(f"stale configuration: chord {x}{y} leaves N_E1({v})")
    before = set(graph.edge_ids())
    child = replace_star(graph, classing, v, chords)
    added = tuple(sorted(set(child.edge_ids()) - before))
    return ReductionStep(cfg, v, added, child, classing.restricted_to(child))


# ---------------------------------------------------------------------------
# extension primitives
# ---------------------------------------------------------------------------

def _mono_pairs(phi: Mapping[int, int], e1_nbrs: list[int]) -> list[tuple[int, int]]:
    pairs = []
    for i in range(len(e1_nbrs)):
        for j in range(i + 1, len(e1_nbrs)):
            a, b = e1_nbrs[i], e1_nbrs[j]
            if a != b and phi[a] == phi[b]:
                pairs.append((min(a, b), max(a, b)))
    return sorted(set(pairs))


def _hitting_sets(pairs: list[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
    universe = sorted({x for p in pairs for x in p})
    for size in range(len(universe) + 1):
        for S in itertools.combinations(universe, size):
            sset = set(S)
            if all(sset & set(p) for p in pairs):
                yield S


def extend_at_vertex(graph: EmbeddedGraph, classing: EdgeClassing,
                     lists: ListAssignment, v: int, phi: Mapping[int, int],
                     S: Iterable[int]) -> Optional[int]:
    """A colour for v avoiding phi(N(v)) and the E1-neighbourhood colours of
    the hitting set S, or None when no such colour exists.

    S must contain a member of every monochromatic pair of E1-neighbours of
    v; with that, the extended colouring has no bicoloured E1-cycle.
    """
    e1_nbrs = _e1_neighbours(graph, classing, v)
    s_set = set(S)
    if not s_set <= set(e1_nbrs):
        raise ColouringError("S must be a subset of the E1-neighbours of v")
    for a, b in _mono_pairs(phi, e1_nbrs):
        if not s_set & {a, b}:
            raise ColouringError(
                f"S does not hit the monochromatic pair {a},{b} at vertex {v}")
    forbidden = {phi[x] for x in graph.neighbours(v)}
    for u in s_set:
        for x in _e1_neighbours(graph, classing, u):
            if x != v:
                forbidden.add(phi[x])
    free = lists.colours(v) - forbidden
    return min(free) if free else None


def e1_rainbow_at(graph: EmbeddedGraph, classing: EdgeClassing,
                  phi: Mapping[int, int], v: int) -> bool:
    e1_nbrs = _e1_neighbours(graph, classing, v)
    return len({phi[x] for x in e1_nbrs}) == len(e1_nbrs)


def recolour_vertex(graph: EmbeddedGraph, classing: EdgeClassing,
                    lists: ListAssignment, phi: Mapping[int, int], v: int,
                    forbidden: Iterable[int]) -> Optional[int]:
    """A replacement colour for v outside `forbidden`, or None.

    Preconditions (raised on violation): forbidden covers phi(N(v) + v), and
    v's E1-neighbours are rainbow under phi, which is what keeps the
    recoloured map E1-acyclic: any E1-cycle through v needs two
    like-coloured E1-neighbours.
    """
    fset = set(forbidden)
    needed = {phi[x] for x in graph.neighbours(v)} | {phi[v]}
    if not needed <= fset:
        raise ColouringError("forbidden set must cover phi(N(v)) and phi(v)")
    if not e1_rainbow_at(graph, classing, phi, v):
        raise ColouringError(f"E1-neighbours of {v} are not rainbow; recolouring unsafe")
    free = lists.colours(v) - fset
    return min(free) if free else None


# ---------------------------------------------------------------------------
# extension replay
# ---------------------------------------------------------------------------

def _check_extension(graph, classing, phi, v) -> bool:
    # a new bicoloured E1-cycle would have to pass through v
    partial = {x: c for x, c in phi.items() if x != v}
    return not creates_bicoloured_cycle(graph, classing, partial, v, phi[v])


def _safety_net(parent: EmbeddedGraph, parent_e1: EdgeClassing,
                lists: ListAssignment, v: int, phi_child: Colouring,
                cap: int, trace: list) -> Colouring:
    nbrs = sorted(parent.neighbours(v))
    base = dict(phi_child)
    adj = {z: [x for x in parent.neighbours(z) if x != v] for z in nbrs}
    budget = [cap]

    def assignments(idx: int, chosen: dict[int, int]) -> Iterator[dict[int, int]]:
        if idx == len(nbrs):
            yield chosen
            return
        z = nbrs[idx]
        options = [base[z]] + sorted(lists.colours(z) - {base[z]})
        for c in options:
            ok = True
            for x in adj[z]:
                cx = chosen.get(x, base[x])
                if cx == c and (x in chosen or x not in set(nbrs[idx:])):
                    ok = False
                    break
            if not ok:
                continue
            chosen[z] = c
            yield from assignments(idx + 1, chosen)
            del chosen[z]

    for chosen in assignments(0, {}):
        used = {chosen[z] for z in nbrs}
        for c in sorted(lists.colours(v) - used):
            budget[0] -= 1
            if budget[0] < 0:
                raise ReductionError(
                    f"safety net exhausted at vertex {v} after {cap} candidates", trace)
            cand = dict(base)
            cand.update(chosen)
            cand[v] = c
            if is_proper(parent, cand) and is_e1_acyclic(parent, parent_e1, cand)[0]:
                return cand
    raise ReductionError(f"safety net found no extension at vertex {v}", trace)


def _replay_step(parent: EmbeddedGraph, parent_e1: EdgeClassing,
                 lists: ListAssignment, step: ReductionStep,
                 phi_child: Colouring, safety_cap: int,
                 trace: list) -> Colouring:
    record = {"kind": step.config.kind.value, "anchor": step.config.anchor,
              "roles": dict(step.config.roles),
              "added_edges": list(step.added_edges),
              "deleted_vertex": step.deleted_vertex,
              "extension": None}
    trace.append(record)
    if step.config.kind == ConfigKind.SATURATION:
        record["extension"] = {"identity": True}
        return dict(phi_child)

    v = step.deleted_vertex
    assert v is not None
    phi = dict(phi_child)
    e1_nbrs = _e1_neighbours(parent, parent_e1, v)
    recolours: list[list[int]] = []

    for _ in range(len(e1_nbrs) + 1):
        pairs = _mono_pairs(phi, e1_nbrs)
        for S in _hitting_sets(pairs):
            colour = extend_at_vertex(parent, parent_e1, lists, v, phi, S)
            if colour is None:
                continue
            phi[v] = colour
            if _check_extension(parent, parent_e1, phi, v):
                record["extension"] = {
                    "s_set": list(S), "colour": colour,
                    "neighbour_colours": sorted({phi[x] for x in parent.neighbours(v)}),
                    "recolours": recolours, "safety_net": False}
                return phi
            del phi[v]  # unreachable for a genuine hitting set; stay safe
        progressed = False
        nv_colours = {phi[x] for x in parent.neighbours(v)}
        for a, b in pairs:
            for z in (a, b):
                if not e1_rainbow_at(step.child, step.child_e1, phi, z):
                    continue
                forbidden = ({phi[x] for x in step.child.neighbours(z)}
                             | {phi[z]} | nv_colours)
                new_c = recolour_vertex(step.child, step.child_e1, lists, phi,
                                        z, forbidden)
                if new_c is not None:
                    recolours.append([z, phi[z], new_c])
                    phi[z] = new_c
                    progressed = True
                    break
            if progressed:
                break
        if not progressed:
            break

    result = _safety_net(parent, parent_e1, lists, v, phi, safety_cap, trace)
    record["extension"] = {
        "s_set": None, "colour": result[v],
        "neighbour_colours": sorted({result[x] for x in parent.neighbours(v)}),
        "recolours": recolours, "safety_net": True}
    return result


# ---------------------------------------------------------------------------
# the solver
# ---------------------------------------------------------------------------

def solve_by_reduction(graph: EmbeddedGraph, classing: EdgeClassing,
                       lists: ListAssignment,
                       epsilon: Fraction = Fraction(1, 43),
                       verify_ew: bool = False,
                       trace: Optional[list] = None,
                       safety_cap: int = 200000) -> Colouring:
    """E1-acyclic 9-list colouring by the reduce-and-extend loop.

    Reduce while more than 9 vertices remain; rainbow-colour the base; replay
    the extension scripts in reverse.  When no configuration exists (possible
    only at genus >= 3) the exact solver takes over.  The output always
    passes both checkers on the input graph; `trace` (if given) receives one
    record per reduction step.
    """
    if not graph.simple:
        raise ColouringError("solve_by_reduction requires a simple graph")
    classing.validate(graph)
    lists = lists.normalized(9)
    lists.validate(graph)
    if trace is None:
        trace = []

    if verify_ew:
        if not graph.is_connected():
            raise EmbeddingError("the edge-width hypothesis check needs a connected graph")
        rho = required_rho(euler_genus(graph), epsilon)
        if rho > 0:
            cutoff = int(rho) if rho != int(rho) else int(rho) - 1
            probe = weighted_edge_width_oracle(graph, classing, 2, budget=cutoff)
            if probe.width is not None:
                raise ReductionError(
                    f"hypothesis violated: ew_2 = {probe.width} < rho = {rho}", trace)

    steps: list[tuple[EmbeddedGraph, EdgeClassing, ReductionStep]] = []
    work_g, work_e1 = graph, classing
    max_edges = graph.vertex_count() * (graph.vertex_count() - 1) // 2
    measure = (work_g.vertex_count(), max_edges - work_g.edge_count())
    phi: Optional[Colouring] = None
    while work_g.vertex_count() > 9:
        cfg = detect_configuration(work_g, work_e1)
        if cfg is None:
            phi = exact_solve(work_g, work_e1, lists)
            if phi is None:
                raise ReductionError(
                    "exact fallback reported INFEASIBLE; engine cannot certify this",
                    trace)
            break
        step = reduce_once(work_g, work_e1, cfg)
        steps.append((work_g, work_e1, step))
        work_g, work_e1 = step.child, step.child_e1
        new_measure = (work_g.vertex_count(), max_edges - work_g.edge_count())
        if not new_measure < measure:
            raise ReductionError(
                f"termination measure did not decrease at {cfg.kind.value}", trace)
        measure = new_measure
    if phi is None:
        phi = rainbow_base(work_g, lists)

    for parent, parent_e1, step in reversed(steps):
        phi = _replay_step(parent, parent_e1, lists, step, phi, safety_cap, trace)

    if not is_proper(graph, phi):
        raise ReductionError("engine produced an improper colouring (bug)", trace)
    ok, witness = is_e1_acyclic(graph, classing, phi)
    if not ok:
        raise ReductionError(
            f"engine produced a bicoloured E1-cycle {witness} (bug)", trace)
    return phi
