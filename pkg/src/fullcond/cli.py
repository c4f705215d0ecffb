"""Command-line front end.

Every subcommand reads one problem document (a path, or ``-`` for stdin) and
writes a single result to stdout.  Exit codes: 0 compatible/ok, 1
incompatible, 2 invalid input, 3 resource cap hit, 4 decider disagreement
(check --mode both only; indicates a bug, not an input problem).

Caps resolve as: command-line flag, else document "caps", else environment
(FULLCOND_MAX_CIRCUITS for enumeration, FULLCOND_MAX_CELLS for instance
size), else built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .decide import (
    check_compatibility_oracle,
    check_compatibility_theorem,
    joint_to_nested,
    verdict_to_dict,
)
from .document import Document, load_document, parse_document
from .errors import DocumentError, IncompatibleInput, InvalidInputError, ResourceCapError
from .graph import EnumerationCaps, build_graph, enumerate_induced_circuits, to_dot
from .incidence import build_matrix, minor_unimodularity_probe
from .ideal import generators, symmetry_orbits
from .model import DEFAULT_CELL_CAP, validate_problem
from .rationals import parse_rational

ENV_MAX_CIRCUITS = "FULLCOND_MAX_CIRCUITS"
ENV_MAX_CELLS = "FULLCOND_MAX_CELLS"


def _read_document(args) -> Document:
    if args.document == "-":
        return parse_document(sys.stdin.read())
    return load_document(args.document)


def _env_int(name: str):
    raw = os.environ.get(name)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise DocumentError(f"{name} must be an integer, got {raw!r}") from exc


def _validated(doc: Document):
    cell_cap = _env_int(ENV_MAX_CELLS)
    if cell_cap is None:
        cell_cap = DEFAULT_CELL_CAP
    return validate_problem(doc.spec, cell_cap=cell_cap)


def _caps(doc: Document, args) -> EnumerationCaps:
    max_circuits = getattr(args, "max_circuits", None)
    if max_circuits is None:
        max_circuits = doc.max_circuits
    if max_circuits is None:
        max_circuits = _env_int(ENV_MAX_CIRCUITS)
    if max_circuits is None:
        max_circuits = EnumerationCaps.max_circuits
    max_length = getattr(args, "max_length", None)
    if max_length is None:
        max_length = doc.max_length
    return EnumerationCaps(max_circuits=max_circuits, max_length=max_length)


def _arrays(doc: Document):
    if doc.arrays is None:
        raise DocumentError("this command needs conditional arrays in the document")
    return doc.arrays


def _emit(text: str):
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def cmd_matrix(args) -> int:
    doc = _read_document(args)
    matrix = build_matrix(_validated(doc))
    _emit(matrix.to_csv() if args.format == "csv" else matrix.to_json())
    return 0


def cmd_graph(args) -> int:
    doc = _read_document(args)
    graph = build_graph(_validated(doc))
    if args.format == "dot":
        _emit(to_dot(graph))
    else:
        out = {
            "pVertices": [v.render() for v in graph.p_vertices],
            "uVertices": [v.render() for v in graph.u_vertices],
            "edges": [
                {
                    "conditional": e.conditional,
                    "cell": list(e.cell),
                    "p": graph.endpoints[e][0].render(),
                    "u": graph.endpoints[e][1].render(),
                }
                for e in graph.edges
            ],
        }
        _emit(json.dumps(out, indent=2))
    return 0


def cmd_circuits(args) -> int:
    doc = _read_document(args)
    problem = _validated(doc)
    circuits = enumerate_induced_circuits(build_graph(problem), _caps(doc, args))
    if args.format == "json":
        _emit(circuits.to_json(problem.m))
    else:
        lines = [f"{len(circuits)} induced circuits"]
        lines += [f"length {l}: {c}" for l, c in circuits.histogram]
        lines += [" - ".join(v.render() for v in c.vertices) for c in circuits.circuits]
        _emit("\n".join(lines))
    return 0


def cmd_generators(args) -> int:
    doc = _read_document(args)
    problem = _validated(doc)
    gen_set = generators(problem, _caps(doc, args))
    orbit_part = symmetry_orbits(gen_set, problem) if args.orbits else None
    if args.format == "json":
        out = gen_set.to_dict()
        if orbit_part is not None:
            out["orbits"] = orbit_part.to_dict(problem.m)
        _emit(json.dumps(out, indent=2))
    else:
        lines = [f"{len(gen_set)} generators"]
        lines += [f"degree {k}: {v}" for k, v in sorted(gen_set.degree_histogram().items())]
        lines += [b.render(problem.m) for b in gen_set.binomials]
        if orbit_part is not None:
            lines.append(f"{len(gen_set)} generators in {len(orbit_part.orbits)} orbits")
            lines += [
                f"orbit of size {len(o.members)}: {o.representative.render(problem.m)}"
                for o in orbit_part.orbits
            ]
        _emit("\n".join(lines))
    return 0


def cmd_orbits(args) -> int:
    doc = _read_document(args)
    problem = _validated(doc)
    orbit_part = symmetry_orbits(generators(problem, _caps(doc, args)), problem)
    if args.format == "json":
        _emit(orbit_part.to_json(problem.m))
    else:
        lines = [f"{len(orbit_part.orbits)} orbits"]
        lines += [
            f"orbit of size {len(o.members)}: {o.representative.render(problem.m)}"
            for o in orbit_part.orbits
        ]
        _emit("\n".join(lines))
    return 0


def cmd_check(args) -> int:
    doc = _read_document(args)
    problem = _validated(doc)
    arrays = _arrays(doc)
    caps = _caps(doc, args)

    if args.mode == "oracle":
        verdict = check_compatibility_oracle(arrays, problem)
    elif args.mode == "theorem":
        verdict = check_compatibility_theorem(arrays, problem, caps, args.all_witnesses)
    else:
        theorem = check_compatibility_theorem(arrays, problem, caps, args.all_witnesses)
        oracle = check_compatibility_oracle(arrays, problem)
        if theorem.compatible != oracle.compatible:
            sys.stderr.write(
                "decider disagreement: theorem says "
                f"{theorem.compatible}, oracle says {oracle.compatible}\n"
            )
            return 4
        verdict = theorem
    _emit(json.dumps(verdict_to_dict(verdict, problem), indent=2))
    return 0 if verdict.compatible else 1


def cmd_reconstruct(args) -> int:
    from .decide import reconstruct_joint

    doc = _read_document(args)
    problem = _validated(doc)
    arrays = _arrays(doc)
    weights = None
    if args.weights is not None:
        weights = [parse_rational(w.strip()) for w in args.weights.split(",")]
    joint, dof = reconstruct_joint(arrays, problem, weights)
    _emit(json.dumps(
        {"joint": joint_to_nested(joint), "degrees_of_freedom": dof}, indent=2,
    ))
    return 0


def cmd_probe(args) -> int:
    doc = _read_document(args)
    matrix = build_matrix(_validated(doc))
    report = minor_unimodularity_probe(matrix, args.samples, args.seed)
    _emit(json.dumps(
        {
            "rank": report.rank,
            "samples": report.sample_count,
            "seed": report.seed,
            "determinants": {str(v): c for v, c in report.determinant_counts},
            "passed": report.passed,
        },
        indent=2,
    ))
    return 0 if report.passed else 1


def cmd_report(args) -> int:
    from .report import write_report

    doc = _read_document(args)
    paths = write_report(doc, _validated(doc), args.out_dir, _caps(doc, args))
    _emit("\n".join(paths))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fullcond",
        description="Exact compatibility checking for full conditional distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, helptext):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("document", help="problem document path, or - for stdin")
        p.set_defaults(func=func)
        return p

    p = add("matrix", cmd_matrix, "print the cell/margin incidence matrix")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("graph", cmd_graph, "print the bipartite compatibility graph")
    p.add_argument("--format", choices=("dot", "json"), default="dot")

    for name, func, helptext in (
        ("circuits", cmd_circuits, "enumerate induced circuits"),
        ("generators", cmd_generators, "list the circuit binomial generators"),
        ("orbits", cmd_orbits, "group generators into symmetry orbits"),
    ):
        p = add(name, func, helptext)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--max-circuits", type=int, default=None)
        p.add_argument("--max-length", type=int, default=None)
        if name == "generators":
            p.add_argument("--orbits", action="store_true")

    p = add("check", cmd_check, "decide compatibility of the document's arrays")
    p.add_argument("--mode", choices=("theorem", "oracle", "both"), default="both")
    p.add_argument("--all-witnesses", action="store_true")
    p.add_argument("--max-circuits", type=int, default=None)
    p.add_argument("--max-length", type=int, default=None)

    p = add("reconstruct", cmd_reconstruct, "build a joint with the given conditionals")
    p.add_argument("--weights", default=None,
                   help="comma-separated positive rationals, one per support component")

    p = add("probe", cmd_probe, "sample minors of the incidence matrix")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    p = add("report", cmd_report, "write CSV tables and PNG figures to a directory")
    p.add_argument("--out-dir", default="fullcond-report")
    p.add_argument("--max-circuits", type=int, default=None)
    p.add_argument("--max-length", type=int, default=None)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IncompatibleInput as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except InvalidInputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ResourceCapError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
