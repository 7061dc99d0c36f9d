"""Exact-rational discharging: initial charges, rules R1-R3, verification.

Charges live on vertices (deg(v) - 6) and faces (2(deg(f) - 3)); their total
is exactly 6(g - 2) on a cellular embedding.  Three rules then redistribute
charge:

  R1  every 4+-face splits its initial charge evenly among its distinct
      incident 6--vertices;
  R2  every 7+-vertex sends (ch0(v) - eps)/deg(v) to each neighbour, but a
      share aimed at a 7+-neighbour u is redirected: half goes to the next
      6--vertex clockwise from u in the sender's rotation, half to the next
      one anticlockwise;
  R3  every 6-vertex incident with a 4+-face or adjacent to a 7+-vertex
      splits (ch2(v) - eps) evenly among its neighbouring triangular
      6-vertices that are not adjacent to any 7+-vertex.

Each rule reads only the stage it names; a rule with no eligible recipient
leaves the charge where it is, so the total is conserved exactly at every
stage.  All arithmetic is Fraction-exact; the verifier's claims are strict
inequalities at eps = 1/43 and floats would make it unsound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .embedding import EmbeddedGraph, EmbeddingError, euler_genus

STAGES = ("ch0", "ch1", "ch2", "ch3")

EPSILON_MAX = Fraction(1, 43)


@dataclass(frozen=True)
class Transfer:
    """One logged charge movement.  Sources and sinks are ('v', id) or
    ('f', face_index); `redirected_from` names the 7+-vertex whose share was
    deflected, when the R2 redirection fired."""

    rule: str
    source: tuple[str, int]
    sink: tuple[str, int]
    amount: Fraction
    redirected_from: Optional[int] = None

    def to_json_dict(self) -> dict:
        return {"rule": self.rule, "source": list(self.source),
                "sink": list(self.sink), "amount": _frac_str(self.amount),
                "redirected_from": self.redirected_from}


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class ChargeLedger:
    """Per-vertex and per-face exact charges at stages ch0..ch3 plus the
    transfer log.  Stages beyond the last computed one are absent."""

    vertex: dict[str, dict[int, Fraction]]
    face: dict[str, dict[int, Fraction]]
    transfers: list[Transfer] = field(default_factory=list)

    def stage_total(self, stage: str) -> Fraction:
        return (sum(self.vertex[stage].values(), Fraction(0))
                + sum(self.face[stage].values(), Fraction(0)))

    def stages(self) -> list[str]:
        return [s for s in STAGES if s in self.vertex]


def initial_charges(graph: EmbeddedGraph) -> ChargeLedger:
    """Stage ch0: deg(v) - 6 per vertex, 2(deg(f) - 3) per face.

    The total equals 6(e - v - f) = 6(g - 2) exactly (cellular embedding).
    """
    if not graph.is_connected():
        raise EmbeddingError("initial_charges requires a connected cellular embedding")
    v0 = {v: Fraction(graph.degree(v) - 6) for v in graph.vertices()}
    f0 = {i: Fraction(2 * (len(face) - 3)) for i, face in enumerate(graph.faces())}
    ledger = ChargeLedger({"ch0": v0}, {"ch0": f0})
    expected = Fraction(6 * (euler_genus(graph) - 2))
    if ledger.stage_total("ch0") != expected:
        raise EmbeddingError("initial charge total is not 6(g-2); malformed embedding")
    return ledger


def _face_distinct_vertices(graph: EmbeddedGraph, face) -> list[int]:
    seen = []
    for d, _ in face.steps:
        v = graph.tail(d)
        if v not in seen:
            seen.append(v)
    return seen


def apply_rules(graph: EmbeddedGraph, ledger: ChargeLedger,
                epsilon: Fraction) -> ChargeLedger:
    """Apply R1, R2, R3 in order, logging every transfer.

    Requires 0 < eps <= 1/43 (the discharging analysis' admissible range) and
    a simple graph (the rules speak of neighbours, not parallel edges).
    """
    if not (0 < epsilon <= EPSILON_MAX):
        raise ValueError(f"epsilon must lie in (0, 1/43], got {epsilon}")
    if not graph.simple:
        raise EmbeddingError("discharging rules require a simple graph")
    if "ch0" not in ledger.vertex:
        raise ValueError("ledger must carry stage ch0")

    faces = graph.faces()
    deg = {v: graph.degree(v) for v in graph.vertices()}
    transfers = list(ledger.transfers)

    # R1: faces to their 6^- vertices
    v1 = dict(ledger.vertex["ch0"])
    f1 = dict(ledger.face["ch0"])
    for fi, face in enumerate(faces):
        if len(face) < 4:
            continue
        charge = ledger.face["ch0"][fi]
        recipients = [x for x in _face_distinct_vertices(graph, face) if deg[x] <= 6]
        if not recipients or charge == 0:
            continue
        share = charge / len(recipients)
        for x in recipients:
            f1[fi] -= share
            v1[x] += share
            transfers.append(Transfer("R1", ("f", fi), ("v", x), share))

    # R2: 7^+ vertices to their neighbours, with redirection past 7^+ ones
    v2 = dict(v1)
    f2 = dict(f1)
    for v in graph.vertices():
        if deg[v] < 7:
            continue
        amount = (ledger.vertex["ch0"][v] - epsilon) / deg[v]
        rot = graph.rotation_at(v)
        heads = [graph.head(d) for d in rot]
        for i, u in enumerate(heads):
            if deg[u] <= 6:
                v2[v] -= amount
                v2[u] += amount
                transfers.append(Transfer("R2", ("v", v), ("v", u), amount))
                continue
            # redirected: half to the next 6^- vertex each way around v
            for step in (1, -1):
                target = None
                for off in range(1, len(heads)):
                    cand = heads[(i + step * off) % len(heads)]
                    if deg[cand] <= 6:
                        target = cand
                        break
                if target is None:
                    continue  # no 6^- neighbour at all: the half-share stays
                half = amount / 2
                v2[v] -= half
                v2[target] += half
                transfers.append(Transfer("R2", ("v", v), ("v", target), half,
                                          redirected_from=u))

    # R3: triggered 6-vertices to sheltered triangular 6-neighbours
    tri6 = {v for v in graph.vertices()
            if deg[v] == 6 and all(l == 3 for l in graph.incident_face_lengths(v))}
    adj7 = {v: any(deg[x] >= 7 for x in graph.neighbours(v)) for v in graph.vertices()}
    v3 = dict(v2)
    f3 = dict(f2)
    for v in graph.vertices():
        if deg[v] != 6:
            continue
        has_big_face = any(l >= 4 for l in graph.incident_face_lengths(v))
        if not (has_big_face or adj7[v]):
            continue
        recipients = [x for x in graph.neighbours(v) if x in tri6 and not adj7[x]]
        if not recipients:
            continue
        surplus = v2[v] - epsilon
        if surplus == 0:
            continue
        share = surplus / len(recipients)
        for x in recipients:
            v3[v] -= share
            v3[x] += share
            transfers.append(Transfer("R3", ("v", v), ("v", x), share))

    return ChargeLedger(
        {"ch0": dict(ledger.vertex["ch0"]), "ch1": v1, "ch2": v2, "ch3": v3},
        {"ch0": dict(ledger.face["ch0"]), "ch1": f1, "ch2": f2, "ch3": f3},
        transfers)


@dataclass
class DischargeReport:
    """verify_final's findings: per-stage totals, conservation, deficiency
    lists, the redirection check, and whether the unavoidability claim was
    violated (no configuration present, yet some deficiency exists)."""

    totals: dict[str, Fraction]
    conserved: bool
    deficient_vertices: list[tuple[int, Fraction]]
    deficient_faces: list[tuple[int, Fraction]]
    redirection_violations: list[dict]
    config_kind: Optional[str]
    unavoidability_violated: bool

    def to_json_dict(self, transfers: Optional[list[Transfer]] = None) -> dict:
        out = {
            "totals": {s: _frac_str(t) for s, t in self.totals.items()},
            "conserved": self.conserved,
            "deficient_vertices": [[v, _frac_str(c)] for v, c in self.deficient_vertices],
            "deficient_faces": [[f, _frac_str(c)] for f, c in self.deficient_faces],
            "redirection_violations": self.redirection_violations,
            "configuration": self.config_kind,
            "unavoidability_violated": self.unavoidability_violated,
        }
        if transfers is not None:
            out["transfers"] = [t.to_json_dict() for t in transfers]
        return out


def verify_final(graph: EmbeddedGraph, ledger: ChargeLedger, epsilon: Fraction,
                 config_kind: Optional[str]) -> DischargeReport:
    """Check the target inequalities ch3(v) >= eps and ch3(f) >= 0, exact
    conservation across stages, and the redirection observation.

    `config_kind` is the detector's verdict on the graph (None when no
    configuration exists).  A configuration-free graph must have empty
    deficiency lists; the report flags any violation of that claim.
    """
    if "ch3" not in ledger.vertex:
        raise ValueError("ledger must be at stage ch3; run apply_rules first")
    if set(ledger.vertex["ch3"]) != set(graph.vertices()):
        raise EmbeddingError("ledger does not match the graph's vertex set")
    if set(ledger.face["ch3"]) != set(range(graph.face_count())):
        raise EmbeddingError("ledger does not match the graph's face set")

    totals = {s: ledger.stage_total(s) for s in ledger.stages()}
    conserved = len(set(totals.values())) == 1
    deficient_v = sorted((v, c) for v, c in ledger.vertex["ch3"].items() if c < epsilon)
    deficient_f = sorted((f, c) for f, c in ledger.face["ch3"].items() if c < 0)

    # Observation "redir": for consecutive 7+ neighbours u, w of v sharing a
    # triangular corner face at v, u must send v at least half its direct
    # share redirected from w (and symmetrically).
    deg = {v: graph.degree(v) for v in graph.vertices()}
    direct: dict[tuple[int, int], Fraction] = {}
    redirected: dict[tuple[int, int, int], Fraction] = {}
    for t in ledger.transfers:
        if t.rule != "R2" or t.source[0] != "v" or t.sink[0] != "v":
            continue
        if t.redirected_from is None:
            direct[(t.source[1], t.sink[1])] = (
                direct.get((t.source[1], t.sink[1]), Fraction(0)) + t.amount)
        else:
            key = (t.source[1], t.sink[1], t.redirected_from)
            redirected[key] = redirected.get(key, Fraction(0)) + t.amount

    faces = graph.faces()
    corner = graph.corner_faces()
    violations = []
    for v in graph.vertices():
        heads = graph.neighbours(v)
        k = len(heads)
        if k < 2 or deg[v] > 6:
            continue
        for i in range(k):
            u, w = heads[i], heads[(i + 1) % k]
            if deg[u] < 7 or deg[w] < 7 or u == w:
                continue
            if len(faces[corner[(v, i)]]) != 3:
                continue
            for a, b in ((u, w), (w, u)):
                c_a = direct.get((a, v), Fraction(0))
                if c_a <= 0:
                    continue
                got = redirected.get((a, v, b), Fraction(0))
                if got < c_a / 2:
                    violations.append({"vertex": v, "sender": a, "past": b,
                                       "direct": _frac_str(c_a),
                                       "redirected": _frac_str(got)})

    unavoidability_violated = (config_kind is None
                      and bool(deficient_v or deficient_f))
    return DischargeReport(totals, conserved, deficient_v, deficient_f,
                           violations, config_kind, unavoidability_violated)


def required_rho(genus: int, epsilon: Fraction) -> Fraction:
    """The locally-planar threshold 12(g-2)/eps; 516(g-2) at eps = 1/43."""
    if not (0 < epsilon <= EPSILON_MAX):
        raise ValueError(f"epsilon must lie in (0, 1/43], got {epsilon}")
    return Fraction(12 * (genus - 2)) / epsilon
