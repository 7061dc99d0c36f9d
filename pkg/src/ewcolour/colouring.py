"""E1-acyclic list colouring: checkers, exact backtracking solver, rainbow base.

A colouring is a plain dict vertex -> colour.  The validity notion is:
proper, and for the distinguished edge class E1, no cycle whose edges all lie
in E1 uses exactly two colours.  Equivalently (and this is what the checker
tests), for every unordered colour pair {a, b} the E1 edges whose endpoints
are coloured a and b form a forest: in a proper colouring any cycle in that
subgraph alternates between a and b, so it is exactly a bicoloured E1-cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .embedding import CycleInEmbedding, EdgeClassing, EmbeddedGraph, dart_edge

Colouring = dict[int, int]


class ColouringError(ValueError):
    """Invalid colouring-layer input (partial maps, lists too small, ...)."""


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex colour lists with a target list size k."""

    lists: Mapping[int, frozenset[int]]
    k: int = 9

    def colours(self, v: int) -> frozenset[int]:
        try:
            return self.lists[v]
        except KeyError:
            raise ColouringError(f"no colour list for vertex {v}") from None

    def validate(self, graph: EmbeddedGraph) -> None:
        for v in graph.vertices():
            if len(self.colours(v)) < self.k:
                raise ColouringError(
                    f"list at vertex {v} has {len(self.colours(v))} < k={self.k} colours")

    def normalized(self, k: Optional[int] = None) -> "ListAssignment":
        """Truncate every list to exactly k colours (smallest kept), mirroring
        the normalization |L(v)| = k used by the reduction engine."""
        k = self.k if k is None else k
        out = {}
        for v, colours in self.lists.items():
            if len(colours) < k:
                raise ColouringError(f"list at vertex {v} is smaller than k={k}")
            out[v] = frozenset(sorted(colours)[:k])
        return ListAssignment(out, k)

    def to_json_dict(self) -> dict:
        return {str(v): sorted(cs) for v, cs in sorted(self.lists.items())}

    @staticmethod
    def from_json_dict(data: Mapping, k: int = 9) -> "ListAssignment":
        try:
            lists = {int(v): frozenset(int(c) for c in cs) for v, cs in data.items()}
        except (TypeError, ValueError) as exc:
            raise ColouringError(f"malformed list-assignment JSON: {exc}") from exc
        return ListAssignment(lists, k)


def _require_total(graph: EmbeddedGraph, phi: Mapping[int, int]) -> None:
    missing = [v for v in graph.vertices() if v not in phi]
    if missing:
        raise ColouringError(f"colouring is partial; missing vertices {missing[:5]}")


def is_proper(graph: EmbeddedGraph, phi: Mapping[int, int]) -> bool:
    """Whether every edge is bichromatic at its endpoints."""
    _require_total(graph, phi)
    for eid in graph.edge_ids():
        e = graph.edge(eid)
        if phi[e.u] == phi[e.v]:
            return False
    return True


def is_e1_acyclic(graph: EmbeddedGraph, classing: EdgeClassing,
                  phi: Mapping[int, int]) -> tuple[bool, Optional[CycleInEmbedding]]:
    """Forest test per colour pair on the E1 edges; returns a witness
    bicoloured E1-cycle on failure.  Requires phi to be proper."""
    if not is_proper(graph, phi):
        raise ColouringError("is_e1_acyclic requires a proper colouring")
    buckets: dict[frozenset[int], list[int]] = {}
    for eid in classing.e1:
        e = graph.edge(eid)
        buckets.setdefault(frozenset((phi[e.u], phi[e.v])), []).append(eid)
    for pair_edges in buckets.values():
        adj: dict[int, list[tuple[int, int]]] = {}
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for eid in sorted(pair_edges):
            e = graph.edge(eid)
            for x in (e.u, e.v):
                if x not in parent:
                    parent[x] = x
                    adj[x] = []
            ru, rv = find(e.u), find(e.v)
            if ru == rv:
                return False, _bucket_cycle(adj, e.u, e.v, eid)
            parent[ru] = rv
            adj[e.u].append((e.v, eid))
            adj[e.v].append((e.u, eid))
    return True, None


def _bucket_cycle(adj: dict[int, list[tuple[int, int]]], u: int, v: int,
                  closing: int) -> CycleInEmbedding:
    # path from u to v in the forest built so far, plus the closing edge
    prev: dict[int, tuple[int, int]] = {u: (u, -1)}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for y, eid in adj[x]:
            if y not in prev:
                prev[y] = (x, eid)
                stack.append(y)
    verts = [v]
    eids = []
    x = v
    while x != u:
        x, eid = prev[x]
        eids.append(eid)
        verts.append(x)
    verts.reverse()
    eids.reverse()
    return CycleInEmbedding(tuple(verts), tuple(eids) + (closing,))


def creates_bicoloured_cycle(graph: EmbeddedGraph, classing: EdgeClassing,
                             phi: Mapping[int, int], v: int, colour: int) -> bool:
    """Whether colouring v with `colour` closes a bicoloured E1-cycle through
    v, given the (possibly partial) colouring phi of other vertices.

    Any new bicoloured E1-cycle passes through v, so it suffices to look at
    colour pairs {colour, c} for c ranging over v's coloured E1-neighbours.
    """
    e1_nbrs = [graph.head(d) for d in graph.rotation_at(v)
               if classing.is_e1(dart_edge(d))]
    by_colour: dict[int, list[int]] = {}
    for u in e1_nbrs:
        if u in phi:
            by_colour.setdefault(phi[u], []).append(u)
    for c, anchors in by_colour.items():
        if len(anchors) < 2:
            continue
        # connectivity among the anchors in the {colour, c} E1-subgraph, avoiding v
        allowed = {colour, c}
        seen = {anchors[0]}
        stack = [anchors[0]]
        targets = set(anchors[1:])
        while stack:
            x = stack.pop()
            if x in targets:
                return True
            for d in graph.rotation_at(x):
                if not classing.is_e1(dart_edge(d)):
                    continue
                y = graph.head(d)
                if y == v or y in seen or y not in phi or phi[y] not in allowed:
                    continue
                seen.add(y)
                stack.append(y)
        if targets & seen:
            return True
    return False


def degeneracy_order(graph: EmbeddedGraph) -> list[int]:
    """Smallest-last order: repeatedly remove a minimum-degree vertex (lowest
    id first) and colour in reverse removal order."""
    deg = {v: graph.degree(v) for v in graph.vertices()}
    adj = {v: set(graph.neighbours(v)) for v in graph.vertices()}
    removed = []
    alive = set(graph.vertices())
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        removed.append(v)
        alive.discard(v)
        for u in adj[v]:
            if u in alive:
                deg[u] -= 1
    removed.reverse()
    return removed


def exact_solve(graph: EmbeddedGraph, classing: EdgeClassing,
                lists: ListAssignment) -> Optional[Colouring]:
    """Exhaustive backtracking for an E1-acyclic list colouring.

    Vertices are coloured in degeneracy order, pruning on properness and on
    incremental bicoloured-cycle creation.  Returns None when the whole space
    is exhausted (INFEASIBLE).  Ground-truth oracle for the engine.
    """
    if not graph.simple:
        raise ColouringError("exact_solve requires a simple graph")
    order = degeneracy_order(graph)
    phi: Colouring = {}

    def place(idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        nbr_cols = {phi[u] for u in graph.neighbours(v) if u in phi}
        for c in sorted(lists.colours(v)):
            if c in nbr_cols:
                continue
            if creates_bicoloured_cycle(graph, classing, phi, v, c):
                continue
            phi[v] = c
            if place(idx + 1):
                return True
            del phi[v]
        return False

    if place(0):
        ok, _ = is_e1_acyclic(graph, classing, phi)
        if not ok or not is_proper(graph, phi):
            raise ColouringError("internal error: solver output failed validation")
        return dict(phi)
    return None


def rainbow_base(graph: EmbeddedGraph, lists: ListAssignment) -> Colouring:
    """All-distinct greedy colouring for graphs on at most 9 vertices with
    9-lists; always succeeds by pigeonhole and is trivially E1-acyclic."""
    if graph.vertex_count() > 9:
        raise ColouringError(
            f"rainbow base case needs at most 9 vertices, got {graph.vertex_count()}")
    phi: Colouring = {}
    used: set[int] = set()
    for v in sorted(graph.vertices()):
        colours = lists.colours(v)
        if len(colours) < 9:
            raise ColouringError(f"rainbow base case needs 9-lists (vertex {v})")
        c = min(colours - used)
        phi[v] = c
        used.add(c)
    return phi
