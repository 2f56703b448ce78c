"""Batch command-line front end.

Subcommands: ``analyze`` (full invariant report, text or JSON), ``enumerate``
(write one canonical graph file per isomorphism class plus an index),
``grc`` (check a residue assignment two ways), ``undegenerate`` and ``dot``.

Graph files are JSON objects with keys "mu" (the list of orders),
"vertices" (objects with "genus", "level" and "legs", the legs being 1-based
indices into mu) and "edges" (objects with "ends", a pair of 0-based vertex
indices, and "kappa" present exactly for vertical edges).  Residue files
carry Gaussian rationals as [real numerator, real denominator, imaginary
numerator, imaginary denominator] under "vertical", "horizontal" (edge
indices) and optional "marked_poles" (leg labels).

Exit codes: 0 success, 1 malformed or invalid input, 2 failed mathematical
check, 3 internal consistency failure (never expected).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import blowup_ideals, toric_closure, twist_lattice
from .enumeration import (
    DeskScaleError,
    canonical_form,
    canonical_key_digest,
    enumerate_enhanced_level_graphs,
)
from .level_graph import (
    Edge,
    EnhancedLevelGraph,
    GraphStructureError,
    SignatureMu,
    codim,
    validate,
)
from .degenerations import undegenerate_by_level_subset, undegenerate_horizontal
from .residue_grc import (
    GaussianRational,
    ResidueAssignment,
    check_grc,
    check_grc_homological,
    dim_identity_check,
    grc_conditions,
    grc_space_dim,
    residue_theorem_violations,
    stratum_dim,
)


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------

def graph_to_dict(graph: EnhancedLevelGraph) -> dict:
    vertices = []
    for v in range(graph.num_vertices):
        vertices.append(
            {
                "genus": graph.genera[v],
                "level": graph.levels[v],
                "legs": graph.legs_at(v),
            }
        )
    edges = []
    for e in graph.edges:
        entry = {"ends": list(e.ends)}
        if e.kappa is not None:
            entry["kappa"] = e.kappa
        edges.append(entry)
    return {"mu": list(graph.mu.m), "vertices": vertices, "edges": edges}


def graph_from_dict(data: dict) -> EnhancedLevelGraph:
    """Build a graph from the JSON schema; levels are normalized on load."""
    if not isinstance(data, dict):
        raise GraphStructureError("graph file must hold a JSON object")
    try:
        mu_list = [int(x) for x in data["mu"]]
        raw_vertices = list(data["vertices"])
        raw_edges = list(data.get("edges", []))
    except (KeyError, TypeError) as exc:
        raise GraphStructureError("missing graph fields: %s" % exc)
    genus = (sum(mu_list) + 2) // 2 if (sum(mu_list) + 2) % 2 == 0 else None
    if genus is None or genus < 0:
        raise GraphStructureError("orders do not sum to 2g-2 for any g >= 0")
    mu = SignatureMu(mu_list, genus)

    genera, levels = [], []
    leg_vertex = [None] * mu.n
    for idx, entry in enumerate(raw_vertices):
        genera.append(int(entry["genus"]))
        level = int(entry["level"])
        if level > 0:
            raise GraphStructureError("vertex level must be <= 0")
        levels.append(level)
        for leg in entry.get("legs", []):
            leg = int(leg)
            if not (1 <= leg <= mu.n):
                raise GraphStructureError("leg label %d out of range" % leg)
            if leg_vertex[leg - 1] is not None:
                raise GraphStructureError("leg %d assigned twice" % leg)
            leg_vertex[leg - 1] = idx
    if any(v is None for v in leg_vertex):
        missing = [j + 1 for j, v in enumerate(leg_vertex) if v is None]
        raise GraphStructureError("legs %s not assigned" % missing)

    edges = []
    for entry in raw_edges:
        edges.append(Edge(tuple(int(x) for x in entry["ends"]), entry.get("kappa")))

    graph = EnhancedLevelGraph(genera, levels, leg_vertex, edges, mu)
    return graph.with_normalized_levels()


def load_graph(path: str) -> EnhancedLevelGraph:
    with open(path) as handle:
        return graph_from_dict(json.load(handle))


def save_graph(graph: EnhancedLevelGraph, path: str):
    with open(path, "w") as handle:
        handle.write(dumps_stable(graph_to_dict(graph)))
        handle.write("\n")


def dumps_stable(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ": "), indent=2)


def _quadruple_to_gaussian(raw) -> GaussianRational:
    a, b, c, d = (int(x) for x in raw)
    if b <= 0 or d <= 0:
        raise GraphStructureError("residue denominators must be positive")
    return GaussianRational(Fraction(a, b), Fraction(c, d))


def residues_from_dict(data: dict) -> ResidueAssignment:
    try:
        vertical = {
            int(k): _quadruple_to_gaussian(v)
            for k, v in dict(data.get("vertical", {})).items()
        }
        horizontal = {
            int(k): _quadruple_to_gaussian(v)
            for k, v in dict(data.get("horizontal", {})).items()
        }
        marked = data.get("marked_poles")
        if marked is not None:
            marked = {int(k): _quadruple_to_gaussian(v) for k, v in marked.items()}
    except (TypeError, ValueError) as exc:
        raise GraphStructureError("malformed residue file: %s" % exc)
    return ResidueAssignment(vertical, horizontal, marked)


def load_residues(path: str) -> ResidueAssignment:
    with open(path) as handle:
        return residues_from_dict(json.load(handle))


# ----------------------------------------------------------------------
# DOT export
# ----------------------------------------------------------------------

def to_dot(graph: EnhancedLevelGraph) -> str:
    lines = ["graph level_graph {"]
    for lvl in graph.level_set():
        members = [
            "v%d" % v for v in range(graph.num_vertices) if graph.levels[v] == lvl
        ]
        lines.append("  { rank=same; %s }" % "; ".join(members))
    for v in range(graph.num_vertices):
        legs = ",".join(str(j) for j in graph.legs_at(v)) or "-"
        lines.append(
            '  v%d [label="g=%d | legs %s"];' % (v, graph.genera[v], legs)
        )
    for i, e in enumerate(graph.edges):
        label = "hor" if graph.is_horizontal(i) else "κ=%d" % e.kappa
        lines.append('  v%d -- v%d [label="%s"];' % (e.ends[0], e.ends[1], label))
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# analysis report
# ----------------------------------------------------------------------

def _group_dict(group: twist_lattice.FinAbGroup) -> dict:
    return {
        "invariant_factors": list(group.invariant_factors),
        "free_rank": group.free_rank,
        "order": group.order,
        "name": str(group),
    }


def _adjusting_parameters(graph: EnhancedLevelGraph):
    """Adjusting-parameter monomials of a two-level star, if the graph is one.

    Covers the cherry-type cases: every bottom vertex hangs on a single edge
    to the top level, so its parameter is that edge's smoothing coordinate
    raised to the enhancement.  Anything else has no canonical monomial
    model and reports nothing.
    """
    if graph.depth != 1 or graph.horizontal_edges():
        return None
    bottoms = [v for v in range(graph.num_vertices) if graph.levels[v] == -1]
    params = []
    variables = tuple("f%d" % e for e in graph.vertical_edges())
    for v in bottoms:
        hanging = [e for e in graph.vertical_edges() if graph.bottom_end(e) == v]
        if len(hanging) != 1:
            return None
        e = hanging[0]
        exps = [0] * len(variables)
        exps[graph.vertical_edges().index(e)] = graph.edges[e].kappa
        params.append(blowup_ideals.Monomial(variables, exps))
    return params


def build_report(graph: EnhancedLevelGraph) -> dict:
    """All invariants of one graph, each reproducible by a library call."""
    report = {}
    vreport = validate(graph)
    report["validation"] = {
        "valid": vreport.valid,
        "violations": [
            {"rule": v.rule, "locus": list(v.locus), "detail": v.detail}
            for v in vreport.violations
        ],
    }
    if not vreport.valid:
        return report

    report["codim"] = codim(graph)
    report["levels_below_zero"] = graph.depth
    report["horizontal_edges"] = graph.horizontal_edges()

    prong = twist_lattice.prong_rotation_group(graph)
    report["prong_rotation_group"] = _group_dict(prong)
    report["pm_class_count"] = twist_lattice.pm_class_count(graph)
    report["twist_basis"] = twist_lattice.twist_group_basis(graph)
    a, gens = twist_lattice.simple_twist_data(graph)
    report["simple_twist"] = {"a": a, "generators": gens}
    report["k_group"] = _group_dict(twist_lattice.k_group(graph))
    covering = twist_lattice.covering_groups(graph)
    report["covering"] = {
        "h_factors": list(covering.h_factors),
        "h_order": covering.h_order,
        "g_group": _group_dict(covering.g_group),
        "sequence_check": covering.sequence_check,
    }

    report["grc_conditions"] = [
        {
            "level": c.level,
            "component_vertices": list(c.component_vertices),
            "edges": list(c.edges),
        }
        for c in grc_conditions(graph)
    ]
    report["grc_space_dims"] = {
        str(lvl): grc_space_dim(graph, lvl) for lvl in graph.level_set()
    }
    identity = dim_identity_check(graph)
    report["dim_identity"] = {
        "lhs": identity.lhs,
        "rhs": identity.rhs,
        "equal": identity.equal,
        "stratum_dim": identity.stratum_dimension,
        "horizontal_count": identity.horizontal_count,
    }

    report["torus_equations"] = [
        {"levels": list(eq.levels), "edge": eq.edge, "exponent": eq.exponent}
        for eq in toric_closure.torus_equations(graph)
    ]
    monoid = toric_closure.character_monoid(graph)
    report["character_monoid"] = {
        "ambient_rank": monoid.ambient_rank,
        "generators": monoid.generators,
    }
    verdict = toric_closure.closure_normality(graph)
    report["normality"] = {
        "status": verdict.status,
        "witness": list(verdict.witness) if verdict.witness else None,
    }

    params = _adjusting_parameters(graph)
    if params is None:
        report["disorderly_ideal"] = None
    else:
        ideal = blowup_ideals.disorderly_ideal(params)
        report["disorderly_ideal"] = {
            "parameters": [str(p) for p in params],
            "generators": [str(m) for m in ideal.generators],
            "principal": blowup_ideals.is_principal(ideal) is not None,
            "orderly": blowup_ideals.is_orderly(params),
        }
    return report


def _format_text(report: dict) -> str:
    lines = []
    push = lines.append
    val = report["validation"]
    push("valid: %s" % val["valid"])
    for item in val["violations"]:
        push("  violation [%s] at %s: %s" % (item["rule"], item["locus"], item["detail"]))
    if not val["valid"]:
        return "\n".join(lines) + "\n"
    push("codim: %d" % report["codim"])
    push("prong rotation group: %s (order %s)" % (
        report["prong_rotation_group"]["name"],
        report["prong_rotation_group"]["order"],
    ))
    push("prong-matching classes: %d" % report["pm_class_count"])
    push("twist basis: %s" % report["twist_basis"])
    push("simple twist a: %s" % report["simple_twist"]["a"])
    push("simple twist generators: %s" % report["simple_twist"]["generators"])
    push("K group: %s" % report["k_group"]["name"])
    cov = report["covering"]
    push(
        "covering: |H|=%d (factors %s), G=%s, exact sequence check: %s"
        % (cov["h_order"], cov["h_factors"], cov["g_group"]["name"], cov["sequence_check"])
    )
    for cond in report["grc_conditions"]:
        push(
            "grc condition: level %d, component %s, edges %s"
            % (cond["level"], cond["component_vertices"], cond["edges"])
        )
    push("grc space dims: %s" % report["grc_space_dims"])
    ident = report["dim_identity"]
    push(
        "dimension identity: %d == %d (%s)"
        % (ident["lhs"], ident["rhs"], "ok" if ident["equal"] else "VIOLATED")
    )
    for eq in report["torus_equations"]:
        left = "*".join("r[%d]" % l for l in eq["levels"]) or "1"
        push("torus equation: %s = rho[%d]^%d" % (left, eq["edge"], eq["exponent"]))
    push("character monoid generators: %s" % report["character_monoid"]["generators"])
    push("normality: %s" % report["normality"]["status"])
    if report["normality"]["witness"]:
        push("  witness: %s" % report["normality"]["witness"])
    dis = report["disorderly_ideal"]
    if dis is not None:
        push(
            "disorderly ideal: %s from %s, principal: %s, orderly: %s"
            % (dis["generators"], dis["parameters"], dis["principal"], dis["orderly"])
        )
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def cmd_analyze(args) -> int:
    try:
        graph = load_graph(args.graph)
    except (GraphStructureError, OSError, json.JSONDecodeError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 1
    report = build_report(graph)
    if args.json:
        print(dumps_stable(report))
    else:
        sys.stdout.write(_format_text(report))
    return 0 if report["validation"]["valid"] else 1


def cmd_enumerate(args) -> int:
    try:
        mu_list = [int(x) for x in args.mu.split(",")]
        mu = SignatureMu(mu_list, args.genus)
        graphs = enumerate_enhanced_level_graphs(mu, args.max_codim)
    except (GraphStructureError, DeskScaleError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    index = []
    for graph in graphs:
        _, key = canonical_form(graph)
        name = "graph_%s.json" % canonical_key_digest(key)
        save_graph(graph, os.path.join(args.out, name))
        index.append({"file": name, "codim": codim(graph)})
    with open(os.path.join(args.out, "index.json"), "w") as handle:
        handle.write(dumps_stable({"mu": list(mu.m), "genus": mu.genus, "graphs": index}))
        handle.write("\n")
    print("wrote %d graphs to %s" % (len(graphs), args.out))
    return 0


def cmd_grc(args) -> int:
    try:
        graph = load_graph(args.graph)
        rho = load_residues(args.residues)
        if not validate(graph).valid:
            print("input error: graph is not admissible", file=sys.stderr)
            return 1
        direct = check_grc(graph, rho)
        homological = check_grc_homological(graph, rho)
    except (GraphStructureError, OSError, json.JSONDecodeError, ValueError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 1

    print("direct: %s" % direct)
    print("homological: %s" % homological)

    # the two checkers are provably equivalent only on assignments obeying
    # the per-vertex residue theorems; gate the consistency alarm on that
    theorems_ok = not residue_theorem_violations(graph, rho)
    grc_only_pass = not direct.violated_conditions
    if theorems_ok and grc_only_pass != homological.passed:
        print("internal consistency failure between the two checkers", file=sys.stderr)
        return 3
    if direct.passed and homological.passed and theorems_ok:
        return 0
    if not theorems_ok:
        bad = residue_theorem_violations(graph, rho)
        print("residue theorem fails at vertices %s" % bad)
    return 2


def cmd_undegenerate(args) -> int:
    try:
        graph = load_graph(args.graph)
        if not validate(graph).valid:
            print("input error: graph is not admissible", file=sys.stderr)
            return 1
        if args.keep_levels is None:
            kept = graph.level_set()[1:]  # identity on levels
        elif args.keep_levels.strip() == "":
            kept = []
        else:
            kept = [int(x) for x in args.keep_levels.split(",")]
        result, _ = undegenerate_by_level_subset(graph, kept)
        if args.smooth_horizontal:
            smoothed = [int(x) for x in args.smooth_horizontal.split(",")]
            result, _ = undegenerate_horizontal(result, smoothed)
    except (GraphStructureError, OSError, json.JSONDecodeError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    print(dumps_stable(graph_to_dict(result)))
    return 0


def cmd_dot(args) -> int:
    try:
        graph = load_graph(args.graph)
    except (GraphStructureError, OSError, json.JSONDecodeError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 1
    sys.stdout.write(to_dot(graph))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msd-strata",
        description="Exact invariants of enhanced level graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full invariant report for one graph")
    p.add_argument("graph")
    p.add_argument("--json", action="store_true", help="machine-stable JSON output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("enumerate", help="enumerate graphs of a signature")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--mu", required=True, help="comma-separated orders")
    p.add_argument("--max-codim", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("grc", help="check a residue assignment")
    p.add_argument("graph")
    p.add_argument("--residues", required=True)
    p.set_defaults(func=cmd_grc)

    p = sub.add_parser("undegenerate", help="merge levels / smooth horizontal edges")
    p.add_argument("graph")
    p.add_argument(
        "--keep-levels",
        default=None,
        help="comma-separated levels to keep separated; empty string merges all",
    )
    p.add_argument("--smooth-horizontal", default="", help="edge indices to smooth")
    p.set_defaults(func=cmd_undegenerate)

    p = sub.add_parser("dot", help="DOT export")
    p.add_argument("graph")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
