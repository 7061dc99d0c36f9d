"""Signed rotation systems for graphs cellularly embedded in surfaces.

An embedding is stored as a rotation system with edge signs: every edge owns
two darts (its two directions), every vertex carries a cyclic order of its
outgoing darts, and every edge carries a sign in {+1, -1}.  A sign of -1 means
the edge band is glued with a half twist, so non-orientable surfaces
(projective plane, Klein bottle, ...) are first-class citizens.  A rotation
system is automatically a cellular embedding; its faces are recovered by the
signed face-tracing rule implemented in :meth:`EmbeddedGraph.faces`.

Darts are encoded as integers ``2*edge_id + end`` where end 0 is the dart
leaving ``edge.u`` and end 1 the dart leaving ``edge.v``.  The reversal of a
dart ``d`` is ``d ^ 1``.

The two surgery operations used by the reduction engine live here as well:
:func:`add_cofacial_edge` inserts a new edge across a face corner so that the
resulting triangle bounds a disk, and :func:`replace_star` deletes a vertex
and embeds a non-crossing chord set inside the vacated disk.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class EmbeddingError(ValueError):
    """A structurally invalid embedded graph, cycle, or surgery request."""


# ---------------------------------------------------------------------------
# darts
# ---------------------------------------------------------------------------

def dart_id(edge_id: int, end: int) -> int:
    return 2 * edge_id + end


def dart_edge(d: int) -> int:
    return d >> 1


def dart_end(d: int) -> int:
    return d & 1


def dart_reverse(d: int) -> int:
    return d ^ 1


@dataclass(frozen=True)
class Edge:
    """An undirected edge with a fixed id, endpoint order and sign."""

    id: int
    u: int
    v: int
    sign: int = 1

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise EmbeddingError(f"vertex {x} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class EdgeClassing:
    """The E1 / non-E1 partition of the edge set, stored as the E1 id set."""

    e1: frozenset[int]

    @staticmethod
    def of(edge_ids: Iterable[int]) -> "EdgeClassing":
        return EdgeClassing(frozenset(edge_ids))

    def is_e1(self, edge_id: int) -> bool:
        return edge_id in self.e1

    def validate(self, graph: "EmbeddedGraph") -> None:
        unknown = self.e1 - set(graph.edge_ids())
        if unknown:
            raise EmbeddingError(f"E1 contains unknown edge ids {sorted(unknown)}")

    def restricted_to(self, graph: "EmbeddedGraph") -> "EdgeClassing":
        return EdgeClassing(self.e1 & set(graph.edge_ids()))

    def without(self, edge_ids: Iterable[int]) -> "EdgeClassing":
        return EdgeClassing(self.e1 - set(edge_ids))


class Face:
    """One face boundary walk: a cyclic sequence of (dart, flag) steps.

    The flag records the local orientation carried along the walk; it flips
    every time a sign -1 edge is traversed.  ``len(face)`` is the degree of
    the face (edge traversals counted with multiplicity).
    """

    __slots__ = ("steps",)

    def __init__(self, steps: Sequence[tuple[int, int]]):
        self.steps = tuple(steps)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def darts(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.steps)

    def edge_ids(self) -> tuple[int, ...]:
        return tuple(dart_edge(d) for d, _ in self.steps)

    def __repr__(self) -> str:
        return f"Face({list(self.steps)!r})"


@dataclass(frozen=True)
class CycleInEmbedding:
    """A simple cycle given as vertex and edge id sequences.

    ``edges[i]`` joins ``vertices[i]`` and ``vertices[(i+1) % L]``.  Loops
    (length 1) and pairs of parallel edges (length 2) are valid cycles in the
    embedding layer.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def weight(self, classing: EdgeClassing, t: int) -> int:
        return sum(1 if classing.is_e1(e) else t for e in self.edges)

    def validate_in(self, graph: "EmbeddedGraph") -> None:
        if len(self.vertices) != len(self.edges) or not self.edges:
            raise EmbeddingError("cycle must have equally many vertices and edges")
        if len(set(self.vertices)) != len(self.vertices):
            raise EmbeddingError("cycle is not simple (repeated vertex)")
        if len(set(self.edges)) != len(self.edges):
            raise EmbeddingError("cycle repeats an edge")
        n = len(self.vertices)
        for i, eid in enumerate(self.edges):
            edge = graph.edge(eid)
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            if {edge.u, edge.v} != {a, b}:
                raise EmbeddingError(
                    f"edge {eid} does not join consecutive cycle vertices {a},{b}")


class EmbeddedGraph:
    """A graph with a signed rotation system.

    Instances are immutable; all surgeries return new graphs.  Construction
    validates the structure: every dart appears exactly once, at the vertex it
    leaves from, and (when ``simple`` is set) there are no loops or parallel
    edges.  Connectivity is *not* required by the type; operations whose
    meaning is surface-global (Euler genus, contractibility, edge-width)
    reject disconnected input themselves.
    """

    __slots__ = ("_vertices", "_edges", "_rotation", "simple",
                 "_faces", "_edge_slots", "_corner_faces", "_pos")

    def __init__(self,
                 vertices: Iterable[int],
                 edges: Iterable[Edge],
                 rotation: Mapping[int, Sequence[int]],
                 simple: bool = False):
        self._vertices = tuple(sorted(vertices))
        self._edges = {e.id: e for e in edges}
        self._rotation = {v: tuple(rotation.get(v, ())) for v in self._vertices}
        self.simple = simple
        self._faces: Optional[tuple[Face, ...]] = None
        self._edge_slots: Optional[dict[int, list[int]]] = None
        self._corner_faces: Optional[dict[tuple[int, int], int]] = None
        self._pos: Optional[dict[int, dict[int, int]]] = None
        self._validate()

    # -- construction helpers ------------------------------------------------

    def _validate(self) -> None:
        vset = set(self._vertices)
        if len(vset) != len(self._vertices):
            raise EmbeddingError("duplicate vertex ids")
        seen_darts: set[int] = set()
        for e in self._edges.values():
            if e.u not in vset or e.v not in vset:
                raise EmbeddingError(f"edge {e.id} has endpoint outside vertex set")
            if e.sign not in (1, -1):
                raise EmbeddingError(f"edge {e.id} has sign {e.sign}, expected +-1")
        if set(self._rotation) != vset:
            raise EmbeddingError("rotation must have exactly one entry per vertex")
        for v, rot in self._rotation.items():
            for d in rot:
                eid = dart_edge(d)
                if eid not in self._edges:
                    raise EmbeddingError(f"rotation at {v} uses unknown edge {eid}")
                if d in seen_darts:
                    raise EmbeddingError(f"dart {d} appears twice in the rotation system")
                seen_darts.add(d)
                if self.tail(d) != v:
                    raise EmbeddingError(
                        f"dart {d} (edge {eid}) listed at {v} but leaves {self.tail(d)}")
        expected = {dart_id(eid, end) for eid in self._edges for end in (0, 1)}
        if seen_darts != expected:
            missing = sorted(expected - seen_darts)
            raise EmbeddingError(f"darts missing from rotation system: {missing}")
        if self.simple:
            pairs = set()
            for e in self._edges.values():
                if e.u == e.v:
                    raise EmbeddingError(f"loop edge {e.id} in a graph flagged simple")
                key = frozenset((e.u, e.v))
                if key in pairs:
                    raise EmbeddingError(f"parallel edge {e.id} in a graph flagged simple")
                pairs.add(key)

    def replace(self,
                vertices: Optional[Iterable[int]] = None,
                edges: Optional[Iterable[Edge]] = None,
                rotation: Optional[Mapping[int, Sequence[int]]] = None,
                simple: Optional[bool] = None) -> "EmbeddedGraph":
        return EmbeddedGraph(
            self._vertices if vertices is None else vertices,
            self._edges.values() if edges is None else edges,
            self._rotation if rotation is None else rotation,
            self.simple if simple is None else simple)

    # -- basic accessors -----------------------------------------------------

    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    def vertex_count(self) -> int:
        return len(self._vertices)

    def edge_ids(self) -> Iterator[int]:
        return iter(self._edges)

    def edge(self, edge_id: int) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise EmbeddingError(f"unknown edge id {edge_id}") from None

    def edge_count(self) -> int:
        return len(self._edges)

    def edge_list(self) -> list[Edge]:
        return [self._edges[i] for i in sorted(self._edges)]

    def next_edge_id(self) -> int:
        return max(self._edges, default=-1) + 1

    def tail(self, d: int) -> int:
        e = self.edge(dart_edge(d))
        return e.u if dart_end(d) == 0 else e.v

    def head(self, d: int) -> int:
        return self.tail(dart_reverse(d))

    def rotation_at(self, v: int) -> tuple[int, ...]:
        try:
            return self._rotation[v]
        except KeyError:
            raise EmbeddingError(f"unknown vertex {v}") from None

    def degree(self, v: int) -> int:
        return len(self.rotation_at(v))

    def neighbours(self, v: int) -> tuple[int, ...]:
        """Heads of the darts at v, in rotation order (multiplicity kept)."""
        return tuple(self.head(d) for d in self.rotation_at(v))

    def edge_between(self, u: int, v: int) -> Optional[Edge]:
        """Some edge joining u and v, or None.  Intended for simple graphs."""
        for d in self.rotation_at(u):
            if self.head(d) == v:
                return self.edge(dart_edge(d))
        return None

    def has_edge_between(self, u: int, v: int) -> bool:
        return self.edge_between(u, v) is not None

    def is_connected(self) -> bool:
        if not self._vertices:
            return True
        seen = {self._vertices[0]}
        stack = [self._vertices[0]]
        while stack:
            x = stack.pop()
            for d in self._rotation[x]:
                y = self.head(d)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self._vertices)

    def components(self) -> list[set[int]]:
        seen: set[int] = set()
        out = []
        for start in self._vertices:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for d in self._rotation[x]:
                    y = self.head(d)
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            out.append(comp)
        return out

    def induced_subgraph(self, keep: Iterable[int]) -> "EmbeddedGraph":
        """The induced embedding on a vertex subset (edges within it kept,
        rotations restricted).  Used for per-component runs."""
        keep_set = set(keep)
        edges = [e for e in self._edges.values() if e.u in keep_set and e.v in keep_set]
        keep_edges = {e.id for e in edges}
        rotation = {v: tuple(d for d in self._rotation[v] if dart_edge(d) in keep_edges)
                    for v in keep_set}
        return EmbeddedGraph(keep_set, edges, rotation, simple=self.simple)

    # -- face tracing ----------------------------------------------------------

    def _position_maps(self) -> dict[int, dict[int, int]]:
        if self._pos is None:
            self._pos = {v: {d: i for i, d in enumerate(rot)}
                         for v, rot in self._rotation.items()}
        return self._pos

    def _step(self, d: int, f: int) -> tuple[int, int]:
        # Traverse dart d with flag f, then turn at head(d).  Crossing a
        # sign -1 edge flips the flag; flag 1 walks the rotation backwards.
        g = f ^ (1 if self.edge(dart_edge(d)).sign < 0 else 0)
        r = dart_reverse(d)
        v = self.tail(r)
        rot = self._rotation[v]
        i = self._position_maps()[v][r]
        nxt = rot[(i + 1) % len(rot)] if g == 0 else rot[(i - 1) % len(rot)]
        return nxt, g

    def faces(self) -> tuple[Face, ...]:
        """All face boundary walks, one per face, deterministically ordered.

        States (dart, flag) are traced under the signed next-dart rule; each
        boundary circle appears as two mirror-image orbits, and one
        representative per mirror pair is returned.
        """
        if self._faces is not None:
            return self._faces
        states = [(dart_id(eid, end), f)
                  for eid in sorted(self._edges) for end in (0, 1) for f in (0, 1)]
        orbit_of: dict[tuple[int, int], int] = {}
        orbits: list[list[tuple[int, int]]] = []
        for s in states:
            if s in orbit_of:
                continue
            idx = len(orbits)
            orbit = []
            cur = s
            while cur not in orbit_of:
                orbit_of[cur] = idx
                orbit.append(cur)
                cur = self._step(*cur)
            if cur != s:
                raise EmbeddingError("face tracing did not close up; malformed rotation")
            orbits.append(orbit)

        def mirror(state: tuple[int, int]) -> tuple[int, int]:
            d, f = state
            g = f ^ (1 if self.edge(dart_edge(d)).sign < 0 else 0)
            return dart_reverse(d), 1 ^ g

        def orbit_key(orbit):
            # flag-0 states first so orientable embeddings keep one coherent
            # orientation across all representative walks
            return min((f, d) for d, f in orbit)

        faces = []
        paired: set[int] = set()
        for idx, orbit in enumerate(orbits):
            if idx in paired:
                continue
            partner = orbit_of[mirror(orbit[0])]
            if partner == idx or partner in paired or len(orbits[partner]) != len(orbit):
                raise EmbeddingError("face orbits do not pair up; malformed rotation")
            paired.add(idx)
            paired.add(partner)
            rep = orbit if orbit_key(orbit) <= orbit_key(orbits[partner]) else orbits[partner]
            k = min(range(len(rep)), key=lambda i: (rep[i][1], rep[i][0]))
            faces.append(Face(rep[k:] + rep[:k]))
        faces.sort(key=lambda fc: (fc.steps[0][1], fc.steps[0][0]))
        self._faces = tuple(faces)
        return self._faces

    def face_count(self) -> int:
        return len(self.faces())

    def edge_slots(self) -> dict[int, list[int]]:
        """edge id -> the (exactly two) face indices of its traversals."""
        if self._edge_slots is None:
            slots: dict[int, list[int]] = {eid: [] for eid in self._edges}
            for fi, face in enumerate(self.faces()):
                for d, _ in face.steps:
                    slots[dart_edge(d)].append(fi)
            for eid, fs in slots.items():
                if len(fs) != 2:
                    raise EmbeddingError(f"edge {eid} traversed {len(fs)} times in face walks")
            self._edge_slots = slots
        return self._edge_slots

    def corner_faces(self) -> dict[tuple[int, int], int]:
        """(vertex, position i) -> face index of the corner between the darts
        at positions i and i+1 of the vertex's rotation."""
        if self._corner_faces is None:
            pos = self._position_maps()
            corners: dict[tuple[int, int], int] = {}
            for fi, face in enumerate(self.faces()):
                steps = face.steps
                for k, (d, f) in enumerate(steps):
                    g = f ^ (1 if self.edge(dart_edge(d)).sign < 0 else 0)
                    v = self.head(d)
                    r = dart_reverse(d)
                    i = pos[v][r]
                    deg = len(self._rotation[v])
                    corner = i if g == 0 else (i - 1) % deg
                    corners[(v, corner)] = fi
            self._corner_faces = corners
        return self._corner_faces

    def incident_face_lengths(self, v: int) -> list[int]:
        """Degrees of the corner faces around v (one per rotation corner)."""
        faces = self.faces()
        cf = self.corner_faces()
        deg = self.degree(v)
        return [len(faces[cf[(v, i)]]) for i in range(deg)]

    # -- serialization -------------------------------------------------------

    def to_json_dict(self, classing: Optional[EdgeClassing] = None) -> dict:
        edges = []
        for e in self.edge_list():
            entry = {"id": e.id, "u": e.u, "v": e.v, "sign": e.sign}
            if classing is not None:
                entry["e1"] = classing.is_e1(e.id)
            edges.append(entry)
        rotation = {str(v): [[dart_edge(d), dart_end(d)] for d in rot]
                    for v, rot in sorted(self._rotation.items())}
        return {"vertices": list(self._vertices), "edges": edges, "rotation": rotation}

    @staticmethod
    def from_json_dict(data: Mapping) -> tuple["EmbeddedGraph", EdgeClassing]:
        try:
            vertices = [int(v) for v in data["vertices"]]
            edges = [Edge(int(e["id"]), int(e["u"]), int(e["v"]), int(e.get("sign", 1)))
                     for e in data["edges"]]
            e1 = frozenset(int(e["id"]) for e in data["edges"] if e.get("e1", False))
            rotation = {int(v): tuple(dart_id(int(eid), int(end)) for eid, end in rot)
                        for v, rot in data["rotation"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise EmbeddingError(f"malformed graph JSON: {exc}") from exc
        pairs = set()
        is_simple = True
        for e in edges:
            if e.u == e.v or frozenset((e.u, e.v)) in pairs:
                is_simple = False
            pairs.add(frozenset((e.u, e.v)))
        g = EmbeddedGraph(vertices, edges, rotation, simple=is_simple)
        return g, EdgeClassing(e1)

    def to_json(self, classing: Optional[EdgeClassing] = None) -> str:
        return json.dumps(self.to_json_dict(classing), sort_keys=True)


# ---------------------------------------------------------------------------
# top-level operations
# ---------------------------------------------------------------------------

def trace_faces(graph: EmbeddedGraph) -> list[Face]:
    """Face boundary walks of the embedding (see EmbeddedGraph.faces)."""
    return list(graph.faces())


def euler_genus(graph: EmbeddedGraph) -> int:
    """Euler genus 2 - (v - e + f) of the embedding's surface.

    Raises on disconnected input: the genus of an embedding is defined per
    connected cellular embedding here.
    """
    if not graph.is_connected():
        raise EmbeddingError("euler_genus requires a connected graph")
    g = 2 - (graph.vertex_count() - graph.edge_count() + graph.face_count())
    if g < 0:
        raise EmbeddingError(f"negative Euler genus {g}; malformed rotation system")
    return g


def is_contractible(graph: EmbeddedGraph, cycle: CycleInEmbedding) -> bool:
    """Whether a simple cycle bounds a disk in the embedding's surface.

    One-sided cycles (odd sign product) are non-contractible outright.  A
    two-sided cycle is contractible iff cutting the surface along it leaves
    exactly two pieces, at least one of which has Euler characteristic 1.
    """
    cycle.validate_in(graph)
    if not graph.is_connected():
        raise EmbeddingError("is_contractible requires a connected graph")
    if euler_genus(graph) == 0:
        return True
    sign = 1
    for eid in cycle.edges:
        sign *= graph.edge(eid).sign
    if sign < 0:
        return False

    cycle_edges = set(cycle.edges)
    cycle_vertices = set(cycle.vertices)
    slots = graph.edge_slots()
    parent = list(range(graph.face_count()))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid, (fa, fb) in slots.items():
        if eid not in cycle_edges:
            ra, rb = find(fa), find(fb)
            if ra != rb:
                parent[ra] = rb

    roots = {find(i) for i in range(graph.face_count())}
    if len(roots) == 1:
        return False
    if len(roots) != 2:
        raise EmbeddingError("cutting along one cycle produced more than two pieces")

    # chi of a piece: uncut vertices - uncut edges + faces.  The boundary
    # copies of cycle vertices and cycle edges cancel pairwise.
    chi = {r: 0 for r in roots}
    for fi in range(graph.face_count()):
        chi[find(fi)] += 1
    for eid, (fa, fb) in slots.items():
        if eid not in cycle_edges:
            chi[find(fa)] -= 1
    for v in graph.vertices():
        if v in cycle_vertices:
            continue
        rot = graph.rotation_at(v)
        if not rot:
            raise EmbeddingError("isolated vertex in a graph with a cycle")
        chi[find(slots[dart_edge(rot[0])][0])] += 1
    return any(c == 1 for c in chi.values())


def _insert_before(rot: tuple[int, ...], anchor: int, new: int) -> tuple[int, ...]:
    i = rot.index(anchor)
    return rot[:i] + (new,) + rot[i:]


def _insert_after(rot: tuple[int, ...], anchor: int, new: int) -> tuple[int, ...]:
    i = rot.index(anchor)
    return rot[:i + 1] + (new,) + rot[i + 1:]


def _insert_chord(graph: EmbeddedGraph, face: Face, i: int, j: int,
                  new_edge_id: int) -> EmbeddedGraph:
    """Split a face with a new edge between its corners i and j.

    Corner k of a face walk sits just before step k, at the tail of step k's
    dart.  The insertion positions and the sign of the new edge are forced by
    the walk flags, so that the two fragments of the old walk plus the chord
    are again face walks.
    """
    steps = face.steps
    d_i, f_i = steps[i]
    d_j, f_j = steps[j]
    a, b = graph.tail(d_i), graph.tail(d_j)
    if a == b:
        raise EmbeddingError("chord endpoints coincide; loops are not supported here")
    sign = 1 if f_i == f_j else -1
    edge = Edge(new_edge_id, a, b, sign)
    c_ab, c_ba = dart_id(new_edge_id, 0), dart_id(new_edge_id, 1)
    rotation = dict(graph._rotation)
    rotation[a] = (_insert_before if f_i == 0 else _insert_after)(rotation[a], d_i, c_ab)
    rotation[b] = (_insert_before if f_j == 0 else _insert_after)(rotation[b], d_j, c_ba)
    edges = list(graph._edges.values()) + [edge]
    return graph.replace(edges=edges, rotation=rotation)


def find_corner(graph: EmbeddedGraph, u: int, v: int, w: int
                ) -> Optional[tuple[Face, int]]:
    """A face walk passing u -> v -> w through consecutive steps, if any.

    Returns (face, k) where step k traverses uv into v and step k+1 leaves v
    along vw.  Both walk directions are searched.
    """
    for face in graph.faces():
        steps = face.steps
        n = len(steps)
        for k in range(n):
            d1, _ = steps[k]
            d2, _ = steps[(k + 1) % n]
            if (graph.tail(d1) == u and graph.head(d1) == v
                    and graph.head(d2) == w):
                return face, k
    return None


def add_cofacial_edge(graph: EmbeddedGraph, classing: EdgeClassing,
                      u: int, v: int, w: int) -> EmbeddedGraph:
    """Add the edge uw inside a face whose boundary passes u, v, w, so that
    the triangle u v w bounds a disk.

    Requires uv and wv to be E1 edges sharing a corner at v, and uw absent.
    The new edge is classed non-E1 by construction (it is simply not added to
    the E1 set, which is keyed by edge id).
    """
    if len({u, v, w}) != 3:
        raise EmbeddingError("add_cofacial_edge needs three distinct vertices")
    e_uv = graph.edge_between(u, v)
    e_wv = graph.edge_between(w, v)
    if e_uv is None or not classing.is_e1(e_uv.id):
        raise EmbeddingError(f"edge {u}{v} is missing or not in E1")
    if e_wv is None or not classing.is_e1(e_wv.id):
        raise EmbeddingError(f"edge {w}{v} is missing or not in E1")
    if graph.has_edge_between(u, w):
        raise EmbeddingError(f"edge {u}{w} already exists")
    hit = find_corner(graph, u, v, w)
    if hit is None:
        hit = find_corner(graph, w, v, u)
        if hit is not None:
            u, w = w, u
    if hit is None:
        raise EmbeddingError(f"edges {u}{v} and {w}{v} are not cofacial at {v}")
    face, k = hit
    n = len(face.steps)
    return _insert_chord(graph, face, k, (k + 2) % n, graph.next_edge_id())


def _chords_cross(i: int, j: int, k: int, l: int, n: int) -> bool:
    """Whether position chords {i,j} and {k,l} interleave on an n-cycle."""
    if {i, j} & {k, l}:
        return False

    def between(a: int, x: int, b: int) -> bool:
        # x strictly inside the arc from a to b (going forward mod n)
        return (x - a) % n < (b - a) % n and x != a

    return between(i, k, j) != between(i, l, j)


def replace_star(graph: EmbeddedGraph, classing: EdgeClassing, v: int,
                 chords: Iterable[tuple[int, int]]) -> EmbeddedGraph:
    """Delete v and its star, embedding a chord set inside the vacated disk.

    Chords join E1-neighbours of v and must be pairwise non-crossing with
    respect to the cyclic order of N(v) in the rotation at v; none may already
    be an edge of the graph (callers filter existing adjacencies).  All new
    edges are non-E1.
    """
    rot = graph.rotation_at(v)
    k = len(rot)
    nbrs = [graph.head(d) for d in rot]
    position = {}
    for i, x in enumerate(nbrs):
        if x in position or x == v:
            raise EmbeddingError("replace_star requires distinct neighbours (simple graph)")
        position[x] = i
    e1_positions = {i for i, d in enumerate(rot) if classing.is_e1(dart_edge(d))}

    chord_list = []
    seen = set()
    for x, y in chords:
        if x not in position or y not in position:
            raise EmbeddingError(f"chord endpoint not a neighbour of {v}")
        i, j = position[x], position[y]
        if i == j:
            raise EmbeddingError("chord endpoints coincide")
        if i not in e1_positions or j not in e1_positions:
            raise EmbeddingError(f"chord {x}{y} endpoint is not an E1-neighbour of {v}")
        if graph.has_edge_between(x, y):
            raise EmbeddingError(f"chord {x}{y} is already an edge")
        key = frozenset((i, j))
        if key in seen:
            raise EmbeddingError(f"duplicate chord {x}{y}")
        seen.add(key)
        chord_list.append((min(i, j), max(i, j)))
    chord_list.sort()
    for a in range(len(chord_list)):
        for b in range(a + 1, len(chord_list)):
            if _chords_cross(*chord_list[a], *chord_list[b], n=k):
                raise EmbeddingError(
                    f"chords at positions {chord_list[a]} and {chord_list[b]} cross")

    flip = [1 if graph.edge(dart_edge(d)).sign < 0 else 0 for d in rot]
    next_id = graph.next_edge_id()
    new_edges = []
    out_darts: dict[int, list[tuple[int, int]]] = {i: [] for i in range(k)}
    for eid, (i, j) in enumerate(chord_list, start=next_id):
        sign = 1 if flip[i] == flip[j] else -1
        new_edges.append(Edge(eid, nbrs[i], nbrs[j], sign))
        out_darts[i].append((j, dart_id(eid, 0)))
        out_darts[j].append((i, dart_id(eid, 1)))

    removed = {dart_edge(d) for d in rot}
    rotation = {}
    for x in graph.vertices():
        if x == v:
            continue
        rotation[x] = graph.rotation_at(x)
    for i in range(k):
        x = nbrs[i]
        spoke = dart_reverse(rot[i])
        # chords replace the spoke slot, ordered by cyclic distance around v;
        # a sign -1 spoke reverses the local orientation at x
        ordered = sorted(out_darts[i], key=lambda tj: (tj[0] - i) % k,
                         reverse=bool(flip[i]))
        r = rotation[x]
        pos = r.index(spoke)
        rotation[x] = r[:pos] + tuple(d for _, d in ordered) + r[pos + 1:]

    vertices = [x for x in graph.vertices() if x != v]
    edges = [e for e in graph._edges.values() if e.id not in removed] + new_edges
    return EmbeddedGraph(vertices, edges, rotation, simple=graph.simple)


def insert_vertex_in_face(graph: EmbeddedGraph, face_index: int,
                          new_vertex: int) -> EmbeddedGraph:
    """Stellar subdivision: a new vertex inside a face, joined to each corner.

    The face's corner vertices must be distinct (no pinched walks).  Used by
    the planar triangulation generator.
    """
    face = graph.faces()[face_index]
    steps = face.steps
    m = len(steps)
    corners = [graph.tail(d) for d, _ in steps]
    if len(set(corners)) != m:
        raise EmbeddingError("insert_vertex_in_face needs distinct corner vertices")
    if new_vertex in graph.vertices():
        raise EmbeddingError(f"vertex {new_vertex} already exists")
    flags = [f for _, f in steps]
    # spoke sign chain keeps the walk flags consistent around the new wheel
    neg = [0] * m
    for idx in range(m - 2, -1, -1):
        neg[idx] = flags[idx] ^ flags[(idx + 1) % m] ^ neg[idx + 1]
    frame = flags[0] ^ neg[0]
    base = graph.next_edge_id()
    new_edges = [Edge(base + idx, corners[idx], new_vertex, 1 if neg[idx] == 0 else -1)
                 for idx in range(m)]
    rotation = {x: graph.rotation_at(x) for x in graph.vertices()}
    for idx in range(m):
        d_k, f_k = steps[idx]
        spoke_out = dart_id(base + idx, 0)  # corner -> new vertex
        x = corners[idx]
        rotation[x] = (_insert_before if f_k == 0 else _insert_after)(
            rotation[x], d_k, spoke_out)
    hub = [dart_id(base + idx, 1) for idx in range(m)]
    rotation[new_vertex] = tuple(hub) if frame == 1 else tuple(reversed(hub))
    vertices = list(graph.vertices()) + [new_vertex]
    return EmbeddedGraph(vertices, list(graph._edges.values()) + new_edges,
                         rotation, simple=graph.simple)
