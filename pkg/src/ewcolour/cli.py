"""Command-line surface: generate instances, compute widths, solve, check,
discharge.  Exit codes: 0 success, 1 negative verdict (invalid colouring or
INFEASIBLE), 2 input error.  All machine output is JSON on stdout; --pretty
switches to an indented rendering of the same object.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from .colouring import (
    ColouringError,
    ListAssignment,
    exact_solve,
    is_e1_acyclic,
    is_proper,
)
from .discharging import apply_rules, initial_charges, required_rho, verify_final
from .edgewidth import weighted_edge_width_fast, weighted_edge_width_oracle
from .embedding import EdgeClassing, EmbeddedGraph, EmbeddingError, euler_genus
from .generators import FAMILIES, GeneratorSpec, GeneratorError, generate
from .reducer import ReductionError, detect_configuration, solve_by_reduction


class InputError(ValueError):
    pass


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _emit(obj: dict, pretty: bool) -> None:
    if pretty:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(json.dumps(obj, sort_keys=True))


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_graph(path: str) -> tuple[EmbeddedGraph, EdgeClassing]:
    try:
        return EmbeddedGraph.from_json_dict(_load_json(path))
    except EmbeddingError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_lists(path: str, k: int) -> ListAssignment:
    try:
        return ListAssignment.from_json_dict(_load_json(path), k)
    except ColouringError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_colouring(path: str) -> dict[int, int]:
    data = _load_json(path)
    try:
        return {int(v): int(c) for v, c in data.items()}
    except (TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"{path}: malformed colouring JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_gen(args) -> int:
    spec = GeneratorSpec(
        family=args.family, m=args.m, n=args.n, seed=args.seed,
        e1_policy=args.e1, e1_prob=args.e1_prob, e1_seed=args.e1_seed,
        palette_size=args.palette_size, k=args.k, lists_seed=args.lists_seed)
    graph, classing, lists = generate(spec)
    with open(args.out, "w") as fh:
        json.dump(graph.to_json_dict(classing), fh, sort_keys=True)
        fh.write("\n")
    if args.lists_out:
        with open(args.lists_out, "w") as fh:
            json.dump(lists.to_json_dict(), fh, sort_keys=True)
            fh.write("\n")
    _emit({"family": args.family,
           "vertices": graph.vertex_count(),
           "edges": graph.edge_count(),
           "faces": graph.face_count(),
           "genus": euler_genus(graph),
           "e1_size": len(classing.e1)}, args.pretty)
    return 0


def _cmd_ew(args) -> int:
    graph, classing = _load_graph(args.graph)
    if args.fast:
        result = weighted_edge_width_fast(graph, classing, args.t)
    else:
        result = weighted_edge_width_oracle(graph, classing, args.t, args.budget)
    _emit(result.to_json_dict(), args.pretty)
    return 0


def _cmd_check(args) -> int:
    graph, classing = _load_graph(args.graph)
    phi = _load_colouring(args.colouring)
    missing = [v for v in graph.vertices() if v not in phi]
    if missing:
        _emit({"valid": False, "reason": "partial-colouring",
               "missing": missing[:10]}, args.pretty)
        return 1
    if args.lists:
        lists = _load_lists(args.lists, args.k)
        off_list = [v for v in graph.vertices() if phi[v] not in lists.colours(v)]
        if off_list:
            _emit({"valid": False, "reason": "colour-not-in-list",
                   "vertices": off_list[:10]}, args.pretty)
            return 1
    if not is_proper(graph, phi):
        bad = [[e.u, e.v] for e in graph.edge_list() if phi[e.u] == phi[e.v]]
        _emit({"valid": False, "reason": "improper", "edges": bad[:10]}, args.pretty)
        return 1
    ok, witness = is_e1_acyclic(graph, classing, phi)
    if not ok:
        _emit({"valid": False, "reason": "bicoloured-e1-cycle",
               "witness": {"vertices": list(witness.vertices),
                           "edges": list(witness.edges)}}, args.pretty)
        return 1
    _emit({"valid": True}, args.pretty)
    return 0


def _cmd_solve(args) -> int:
    graph, classing = _load_graph(args.graph)
    lists = _load_lists(args.lists, 9)
    epsilon = _parse_fraction(args.epsilon)
    trace: list = []
    phi: dict[int, int] = {}
    # disconnected inputs are coloured one component at a time
    components = graph.components()
    for comp in components:
        sub = graph.induced_subgraph(comp) if len(components) > 1 else graph
        sub_classing = classing.restricted_to(sub)
        if args.exact:
            part = exact_solve(sub, sub_classing, lists)
            if part is None:
                _emit({"status": "infeasible"}, args.pretty)
                return 1
        else:
            part = solve_by_reduction(sub, sub_classing, lists, epsilon=epsilon,
                                      verify_ew=not args.waive_ew_check,
                                      trace=trace)
        phi.update(part)
    if args.trace:
        with open(args.trace, "w") as fh:
            json.dump({"steps": trace}, fh, sort_keys=True)
            fh.write("\n")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({str(v): c for v, c in sorted(phi.items())}, fh, sort_keys=True)
            fh.write("\n")
    _emit({"status": "ok",
           "colouring": {str(v): c for v, c in sorted(phi.items())}}, args.pretty)
    return 0


def _cmd_discharge(args) -> int:
    graph, classing = _load_graph(args.graph)
    epsilon = _parse_fraction(args.epsilon)
    ledger = apply_rules(graph, initial_charges(graph), epsilon)
    cfg = detect_configuration(graph, classing)
    report = verify_final(graph, ledger, epsilon,
                          None if cfg is None else cfg.kind.value)
    _emit(report.to_json_dict(ledger.transfers if args.log_transfers else None),
          args.pretty)
    return 0


def _cmd_find_config(args) -> int:
    graph, classing = _load_graph(args.graph)
    cfg = detect_configuration(graph, classing)
    _emit({"kind": None} if cfg is None else cfg.to_json_dict(), args.pretty)
    return 0


def _cmd_rho(args) -> int:
    epsilon = _parse_fraction(args.epsilon)
    try:
        rho = required_rho(args.genus, epsilon)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit({"rho": _frac_str(rho)}, args.pretty)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ewcolour",
        description="weighted edge-width, E1-acyclic list colouring and "
                    "discharging verification for embedded graphs")
    parser.add_argument("--pretty", action="store_true",
                        help="indent the JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--e1", default="all", choices=("all", "none", "random"))
    p.add_argument("--e1-prob", type=float, default=0.5)
    p.add_argument("--e1-seed", type=int, default=0)
    p.add_argument("--palette-size", type=int, default=30)
    p.add_argument("--k", type=int, default=9)
    p.add_argument("--lists-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--lists-out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("ew", help="weighted edge-width of a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--fast", action="store_true",
                   help="use the candidate heuristic instead of the oracle")
    p.set_defaults(func=_cmd_ew)

    p = sub.add_parser("check", help="validate a colouring file")
    p.add_argument("--graph", required=True)
    p.add_argument("--colouring", required=True)
    p.add_argument("--lists")
    p.add_argument("--k", type=int, default=9)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("solve", help="produce an E1-acyclic list colouring")
    p.add_argument("--graph", required=True)
    p.add_argument("--lists", required=True)
    p.add_argument("--exact", action="store_true",
                   help="exhaustive solver instead of the reduction engine")
    p.add_argument("--epsilon", default="1/43")
    p.add_argument("--trace", help="dump every reduction step to this file")
    p.add_argument("--waive-ew-check", action="store_true",
                   help="skip the edge-width hypothesis check")
    p.add_argument("--out", help="also write the colouring to this file")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("discharge", help="run charge rules and verify totals")
    p.add_argument("--graph", required=True)
    p.add_argument("--epsilon", default="1/43")
    p.add_argument("--log-transfers", action="store_true")
    p.set_defaults(func=_cmd_discharge)

    p = sub.add_parser("find-config", help="detect a reducible configuration")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_find_config)

    p = sub.add_parser("rho", help="print the threshold 12(g-2)/epsilon")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--epsilon", default="1/43")
    p.set_defaults(func=_cmd_rho)
    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, EmbeddingError, ColouringError, GeneratorError,
            ValueError) as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True))
        return 2
    except ReductionError as exc:
        print(json.dumps({"error": str(exc), "trace_length": len(exc.trace)},
                         sort_keys=True))
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
