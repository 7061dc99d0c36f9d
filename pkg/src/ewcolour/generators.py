"""Instance generators: embedded graph families, E1 policies and colour lists.

All generators are deterministic given their seeds, so seeded CLI runs are
byte-identical across invocations.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from .colouring import ListAssignment
from .embedding import (
    EdgeClassing,
    EmbeddedGraph,
    Edge,
    dart_id,
    insert_vertex_in_face,
)


class GeneratorError(ValueError):
    """A malformed generator request."""


# ---------------------------------------------------------------------------
# grid families
# ---------------------------------------------------------------------------

def torus_grid_quad(m: int, n: int) -> EmbeddedGraph:
    """The m x n quadrangulation of the torus (4-regular, all faces squares)."""
    if m < 3 or n < 3:
        raise GeneratorError("torus grids need m, n >= 3 to stay simple")

    def vid(i: int, j: int) -> int:
        return (i % m) * n + (j % n)

    edges = []
    right = {}
    up = {}
    for i in range(m):
        for j in range(n):
            eid = len(edges)
            right[(i, j)] = eid
            edges.append(Edge(eid, vid(i, j), vid(i + 1, j)))
            eid = len(edges)
            up[(i, j)] = eid
            edges.append(Edge(eid, vid(i, j), vid(i, j + 1)))
    rotation = {}
    for i in range(m):
        for j in range(n):
            rotation[vid(i, j)] = (
                dart_id(right[(i, j)], 0),             # east
                dart_id(up[(i, j)], 0),                # north
                dart_id(right[((i - 1) % m, j)], 1),   # west
                dart_id(up[(i, (j - 1) % n)], 1),      # south
            )
    return EmbeddedGraph(range(m * n), edges, rotation, simple=True)


def torus_grid_tri(m: int, n: int) -> EmbeddedGraph:
    """The m x n toroidal grid with one consistent diagonal per square face:
    a 6-regular triangulation of the torus."""
    if m < 3 or n < 3:
        raise GeneratorError("torus grids need m, n >= 3 to stay simple")

    def vid(i: int, j: int) -> int:
        return (i % m) * n + (j % n)

    edges = []
    right = {}
    up = {}
    diag = {}
    for i in range(m):
        for j in range(n):
            right[(i, j)] = len(edges)
            edges.append(Edge(len(edges), vid(i, j), vid(i + 1, j)))
            up[(i, j)] = len(edges)
            edges.append(Edge(len(edges), vid(i, j), vid(i, j + 1)))
            diag[(i, j)] = len(edges)
            edges.append(Edge(len(edges), vid(i, j), vid(i + 1, j + 1)))
    rotation = {}
    for i in range(m):
        for j in range(n):
            rotation[vid(i, j)] = (
                dart_id(right[(i, j)], 0),                      # east
                dart_id(diag[(i, j)], 0),                       # north-east
                dart_id(up[(i, j)], 0),                         # north
                dart_id(right[((i - 1) % m, j)], 1),            # west
                dart_id(diag[((i - 1) % m, (j - 1) % n)], 1),   # south-west
                dart_id(up[(i, (j - 1) % n)], 1),               # south
            )
    return EmbeddedGraph(range(m * n), edges, rotation, simple=True)


def klein_grid(m: int, n: int) -> EmbeddedGraph:
    """An m x n quadrangulation of the Klein bottle: a torus-like grid whose
    vertical wrap row is glued with a reflection and sign -1 edges."""
    if m < 3 or n < 3:
        raise GeneratorError("klein grids need m, n >= 3 to stay simple")

    def vid(i: int, j: int) -> int:
        return (i % m) * n + j

    edges = []
    horiz = {}
    vert = {}
    wrap = {}
    for i in range(m):
        for j in range(n):
            horiz[(i, j)] = len(edges)
            edges.append(Edge(len(edges), vid(i, j), vid(i + 1, j)))
    for i in range(m):
        for j in range(n - 1):
            vert[(i, j)] = len(edges)
            edges.append(Edge(len(edges), vid(i, j), vid(i, j + 1)))
    for i in range(m):
        wrap[i] = len(edges)
        edges.append(Edge(len(edges), vid(i, n - 1), vid((m - i) % m, 0), -1))
    rotation = {}
    for i in range(m):
        for j in range(n):
            north = (dart_id(vert[(i, j)], 0) if j < n - 1
                     else dart_id(wrap[i], 0))
            south = (dart_id(vert[(i, j - 1)], 1) if j > 0
                     else dart_id(wrap[(m - i) % m], 1))
            rotation[vid(i, j)] = (
                dart_id(horiz[(i, j)], 0),
                north,
                dart_id(horiz[((i - 1) % m, j)], 1),
                south,
            )
    return EmbeddedGraph(range(m * n), edges, rotation, simple=True)


def projective_wheel(n: int) -> EmbeddedGraph:
    """A wheel with n rim vertices whose rim closes through a cross-cap:
    flipping one rim edge's sign drops chi of the planar wheel to 1."""
    if n < 4:
        raise GeneratorError("projective wheels need n >= 4 to stay simple")
    hub = 0
    edges = []
    spoke = {}
    rim = {}
    for i in range(1, n + 1):
        spoke[i] = len(edges)
        edges.append(Edge(len(edges), hub, i))
    for i in range(1, n + 1):
        j = i % n + 1
        rim[i] = len(edges)
        edges.append(Edge(len(edges), i, j, -1 if i == n else 1))
    rotation = {hub: tuple(dart_id(spoke[i], 0) for i in range(1, n + 1))}
    for i in range(1, n + 1):
        prev = (i - 2) % n + 1
        rotation[i] = (
            dart_id(spoke[i], 1),
            dart_id(rim[prev], 1),
            dart_id(rim[i], 0),
        )
    return EmbeddedGraph(range(n + 1), edges, rotation, simple=True)


# ---------------------------------------------------------------------------
# fixed graphs
# ---------------------------------------------------------------------------

def k7_torus() -> EmbeddedGraph:
    """K7 triangulating the torus, as the circulant C7(1,2,3) with the
    triangular-grid rotation (+1, +3, +2, -1, -3, -2) at every vertex."""
    edges = []
    eid_of = {}
    for i in range(7):
        for j in range(i + 1, 7):
            eid_of[(i, j)] = len(edges)
            edges.append(Edge(len(edges), i, j))

    def out_dart(i: int, j: int) -> int:
        a, b = min(i, j), max(i, j)
        return dart_id(eid_of[(a, b)], 0 if i == a else 1)

    rotation = {i: tuple(out_dart(i, (i + k) % 7) for k in (1, 3, 2, 6, 4, 5))
                for i in range(7)}
    return EmbeddedGraph(range(7), edges, rotation, simple=True)


def icosahedron() -> EmbeddedGraph:
    """The icosahedron on the sphere (5-regular, 20 triangular faces)."""
    phi = (1 + math.sqrt(5)) / 2
    coords = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            coords.append((0.0, a, b))
            coords.append((a, b, 0.0))
            coords.append((b, 0.0, a))
    edges = []
    eid_of = {}
    for i in range(12):
        for j in range(i + 1, 12):
            d2 = sum((coords[i][k] - coords[j][k]) ** 2 for k in range(3))
            if d2 < 4.5:  # shortest pair distance^2 is exactly 4
                eid_of[(i, j)] = len(edges)
                edges.append(Edge(len(edges), i, j))

    def out_dart(i: int, j: int) -> int:
        a, b = min(i, j), max(i, j)
        return dart_id(eid_of[(a, b)], 0 if i == a else 1)

    rotation = {}
    for i in range(12):
        p = coords[i]
        norm = math.sqrt(sum(c * c for c in p))
        nrm = tuple(c / norm for c in p)
        ref = (1.0, 0.0, 0.0) if abs(nrm[0]) < 0.9 else (0.0, 1.0, 0.0)
        b1 = _cross(nrm, ref)
        b1 = _unit(b1)
        b2 = _cross(nrm, b1)
        nbrs = []
        for (a, b) in eid_of:
            if a == i:
                nbrs.append(b)
            elif b == i:
                nbrs.append(a)
        angled = []
        for j in nbrs:
            rel = tuple(coords[j][k] - p[k] for k in range(3))
            angled.append((math.atan2(_dot(rel, b2), _dot(rel, b1)), j))
        angled.sort()
        rotation[i] = tuple(out_dart(i, j) for _, j in angled)
    return EmbeddedGraph(range(12), edges, rotation, simple=True)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _unit(a):
    n = math.sqrt(_dot(a, a))
    return (a[0] / n, a[1] / n, a[2] / n)


def tetrahedron() -> EmbeddedGraph:
    """K4 on the sphere (four triangular faces)."""
    edges = [Edge(0, 0, 1), Edge(1, 1, 2), Edge(2, 0, 2),
             Edge(3, 0, 3), Edge(4, 1, 3), Edge(5, 2, 3)]
    # outer triangle 0,1,2 counterclockwise with 3 inside
    rotation = {
        0: (dart_id(0, 0), dart_id(3, 0), dart_id(2, 0)),
        1: (dart_id(1, 0), dart_id(4, 0), dart_id(0, 1)),
        2: (dart_id(2, 1), dart_id(5, 0), dart_id(1, 1)),
        3: (dart_id(3, 1), dart_id(4, 1), dart_id(5, 1)),
    }
    return EmbeddedGraph(range(4), edges, rotation, simple=True)


def random_planar_triangulation(n: int, seed: int) -> EmbeddedGraph:
    """A random planar triangulation on n vertices grown by seeded stellar
    subdivision from the tetrahedron."""
    if n < 4:
        raise GeneratorError("planar triangulations need n >= 4")
    rng = random.Random(seed)
    g = tetrahedron()
    for v in range(4, n):
        face_index = rng.randrange(g.face_count())
        g = insert_vertex_in_face(g, face_index, v)
    return g


def random_embedded_graph(n: int, extra_edges: int, seed: int,
                          neg_prob: float = 0.3) -> EmbeddedGraph:
    """A random connected simple graph with a random signed rotation system.

    Spanning tree plus `extra_edges` random chords, random rotations, edge
    signs flipped with probability `neg_prob`.  Test-corpus supply.
    """
    if n < 2:
        raise GeneratorError("random graphs need n >= 2")
    rng = random.Random(seed)
    pairs = set()
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        pairs.add((u, v))
        edges.append((u, v))
    budget = n * (n - 1) // 2 - len(pairs)
    for _ in range(min(extra_edges, budget)):
        while True:
            u = rng.randrange(n)
            v = rng.randrange(n)
            if u == v:
                continue
            key = (min(u, v), max(u, v))
            if key not in pairs:
                pairs.add(key)
                edges.append(key)
                break
    edge_objs = [Edge(i, u, v, -1 if rng.random() < neg_prob else 1)
                 for i, (u, v) in enumerate(edges)]
    rotation = {v: [] for v in range(n)}
    for e in edge_objs:
        rotation[e.u].append(dart_id(e.id, 0))
        rotation[e.v].append(dart_id(e.id, 1))
    for v in range(n):
        rng.shuffle(rotation[v])
    return EmbeddedGraph(range(n), edge_objs, rotation, simple=True)


# ---------------------------------------------------------------------------
# E1 policies and lists
# ---------------------------------------------------------------------------

def e1_all(graph: EmbeddedGraph) -> EdgeClassing:
    return EdgeClassing.of(graph.edge_ids())


def e1_none(graph: EmbeddedGraph) -> EdgeClassing:
    return EdgeClassing.of(())


def e1_random(graph: EmbeddedGraph, p: float, seed: int) -> EdgeClassing:
    rng = random.Random(seed)
    return EdgeClassing.of(eid for eid in sorted(graph.edge_ids())
                           if rng.random() < p)


def palette_lists(graph: EmbeddedGraph, size: int, k: int, seed: int) -> ListAssignment:
    """k distinct colours per vertex, sampled from a palette of `size`."""
    if size < k:
        raise GeneratorError("palette size must be at least k")
    rng = random.Random(seed)
    lists = {v: frozenset(rng.sample(range(size), k))
             for v in sorted(graph.vertices())}
    return ListAssignment(lists, k)


# ---------------------------------------------------------------------------
# one-stop generation
# ---------------------------------------------------------------------------

FAMILIES = ("torus_grid_quad", "torus_grid_tri", "klein_grid",
            "projective_wheel", "random_planar_triangulation",
            "icosahedron", "k7_torus")


@dataclass(frozen=True)
class GeneratorSpec:
    """A reproducible instance recipe: family, E1 policy and list policy."""

    family: str
    m: int = 0
    n: int = 0
    seed: int = 0
    e1_policy: str = "all"          # all | none | random
    e1_prob: float = 0.5
    e1_seed: int = 0
    palette_size: int = 30
    k: int = 9
    lists_seed: int = 0


def generate(spec: GeneratorSpec) -> tuple[EmbeddedGraph, EdgeClassing, ListAssignment]:
    if spec.family == "torus_grid_quad":
        g = torus_grid_quad(spec.m, spec.n)
    elif spec.family == "torus_grid_tri":
        g = torus_grid_tri(spec.m, spec.n)
    elif spec.family == "klein_grid":
        g = klein_grid(spec.m, spec.n)
    elif spec.family == "projective_wheel":
        g = projective_wheel(spec.n)
    elif spec.family == "random_planar_triangulation":
        g = random_planar_triangulation(spec.n, spec.seed)
    elif spec.family == "icosahedron":
        g = icosahedron()
    elif spec.family == "k7_torus":
        g = k7_torus()
    else:
        raise GeneratorError(f"unknown family {spec.family!r}; one of {FAMILIES}")

    if spec.e1_policy == "all":
        classing = e1_all(g)
    elif spec.e1_policy == "none":
        classing = e1_none(g)
    elif spec.e1_policy == "random":
        classing = e1_random(g, spec.e1_prob, spec.e1_seed)
    else:
        raise GeneratorError(f"unknown E1 policy {spec.e1_policy!r}")

    lists = palette_lists(g, spec.palette_size, spec.k, spec.lists_seed)
    return g, classing, lists
