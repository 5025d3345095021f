import sys
import logging
import argparse
from fractions import Fraction

from dotenv import load_dotenv

from polyring import PolyError, eval_rational, rename, render, to_json
from ribbon_core import RibbonGraphError, dual, medial, to_chord_diagram
from br_poly import (
    ChordDiagramError,
    RecipeSpec,
    c_recipe,
    canonical_eval,
    canonical_form,
    classical_tutte,
    identity_recipe,
    r_delcon,
    r_state_sum,
    r_state_sum_basis,
    recipe_evaluate,
)
from transition import NonPlanarInput, WeightSystemError, circuit_partition, q_medial
from links import (
    LinkUniverseError,
    checkerboard_color,
    green_face_graph,
    kauffman_bracket,
    signed_to_json,
    universe_from_json,
)
from corpus import CorpusBoundError
from verification import SUITES, SuiteOptions, run_suites, summary_table
from utils import InterchangeError, dump_json, graph_to_json, load_graph, load_json, medial_to_json, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_COUNTEREXAMPLE = 0, 2, 3

INPUT_ERRORS = (
    RibbonGraphError,
    PolyError,
    ChordDiagramError,
    WeightSystemError,
    NonPlanarInput,
    LinkUniverseError,
    CorpusBoundError,
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ribbonforge",
        description="Exact topological Tutte, transition and bracket polynomials of ribbon graphs",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--vars", help="comma-separated names replacing the output variables in order")
    common.add_argument("--point", help="evaluate at a rational point, e.g. x=2,y=3/2")

    sub = parser.add_subparsers(dest="command", required=True)

    def graph_command(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--input", required=True, help="ribbon graph JSON document")
        return p

    p = graph_command("compute-r", "Bollobás–Riordan polynomial R(G; x, y, z, w)")
    p.add_argument("--method", choices=("statesum", "delcon", "basis"), default="statesum")
    graph_command("compute-q", "transition polynomial of the medial graph under the medial weights")
    graph_command("medial", "medial graph as JSON")
    graph_command("dual", "dual ribbon graph as JSON")
    p = graph_command("tutte", "classical Tutte polynomial T(G; x, y)")
    p.add_argument("--circuit", action="store_true", help="print the circuit partition polynomial instead")
    graph_command("canonical", "canonical diagram D_ijk of a bouquet")
    p = sub.add_parser("bracket", parents=[common], help="Kauffman bracket of a link universe")
    p.add_argument("--input", required=True, help="link universe JSON document")
    p = sub.add_parser("green-face", parents=[common], help="signed green-face graph of a link universe")
    p.add_argument("--input", required=True, help="link universe JSON document")
    p.add_argument("--complement", action="store_true", help="use the other checkerboard colouring")
    p = graph_command("recipe", "evaluate a recipe specification on a graph")
    p.add_argument("--recipe", default="identity", help="identity, c, or a recipe JSON path")

    p = sub.add_parser("verify", parents=[common], help="run identity verification suites")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--max-edges", type=int, default=3)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    return parser


def _parse_point(text):
    point = {}
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep:
            raise PolyError(f"point entry {item!r} is not name=value")
        point[name.strip()] = Fraction(value.strip())
    return point


def emit_poly(p, args, out):
    if args.vars:
        names = [n.strip() for n in args.vars.split(",")]
        if len(names) != len(p.table.names):
            raise PolyError(f"--vars needs {len(p.table.names)} names ({', '.join(p.table.names)})")
        p = rename(p, dict(zip(p.table.names, names)))
    if args.point:
        value = eval_rational(p, _parse_point(args.point))
        print(dump_json({"value": str(value)}) if args.format == "json" else str(value), file=out)
        return
    print(dump_json(to_json(p)) if args.format == "json" else render(p), file=out)


def _load_recipe(name):
    if name == "identity":
        return identity_recipe()
    if name == "c":
        return c_recipe()
    return RecipeSpec.parse(load_json(name))


def dispatch(args, out):
    command = args.command
    if command == "verify":
        options = SuiteOptions(args.max_edges, args.exhaustive, args.seed, args.count)
        names = sorted(SUITES) if args.suite == "all" else [args.suite]
        reports = run_suites(names, options)
        if args.format == "json":
            print(dump_json([r.as_dict() for r in reports]), file=out)
        else:
            print(summary_table(reports).to_string(index=False), file=out)
        failures = [f for r in reports for f in r.failures]
        if failures:
            print(dump_json({"counterexamples": failures}), file=out)
            return EXIT_COUNTEREXAMPLE
        return EXIT_OK

    if command in ("bracket", "green-face"):
        u = universe_from_json(load_json(args.input))
        if command == "bracket":
            emit_poly(kauffman_bracket(u), args, out)
        else:
            coloring = checkerboard_color(u)
            if args.complement:
                coloring = coloring.complement()
            print(dump_json(signed_to_json(green_face_graph(u, coloring))), file=out)
        return EXIT_OK

    g, free_loops = load_graph(args.input)
    if free_loops:
        raise InterchangeError(f"{command} takes a ribbon graph without free loops")
    if command == "compute-r":
        if args.method == "delcon":
            emit_poly(r_delcon(g), args, out)
        elif args.method == "basis":
            emit_poly(r_state_sum_basis(g), args, out)
        else:
            emit_poly(r_state_sum(g), args, out)
    elif command == "compute-q":
        emit_poly(q_medial(g), args, out)
    elif command == "medial":
        print(dump_json(medial_to_json(medial(g))), file=out)
    elif command == "dual":
        print(dump_json(graph_to_json(dual(g))), file=out)
    elif command == "tutte":
        emit_poly(circuit_partition(g) if args.circuit else classical_tutte(g), args, out)
    elif command == "canonical":
        cf = canonical_form(to_chord_diagram(g))
        if args.format == "json":
            print(dump_json({"i": cf.i, "j": cf.j, "k": cf.k, "R": to_json(canonical_eval(cf))}), file=out)
        else:
            print(str(cf), file=out)
    elif command == "recipe":
        emit_poly(recipe_evaluate(g, _load_recipe(args.recipe)), args, out)
    return EXIT_OK


def run(argv=None, out=None):
    """Command-line entry point; returns the process exit code."""
    out = out or sys.stdout
    load_dotenv()
    setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    try:
        return dispatch(args, out)
    except InterchangeError as e:
        for line in e.diagnostics:
            print(f"error: {line}", file=sys.stderr)
        return EXIT_INPUT
    except INPUT_ERRORS as e:
        logger.error("Error running %s: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(run())
