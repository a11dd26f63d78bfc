"""Command-line front end.

Exit codes: 0 for a positive result, 1 for a negative verdict, 2 for input
errors, 3 when an internal cross-check fails. Results are JSON documents on
stdout with sorted keys; logs go to stderr.
"""
import argparse
import json
import logging
import sys
from typing import Callable, List, Optional, Tuple

from pydantic import BaseModel, ValidationError

import config
import degeneracy
from alpha import conforms, extract_alpha_tree, validate_alpha_forest
from cactus import is_cactus
from errors import ConsistencyError, DifferentialFlowError, DocumentError
from generator import BoundStyle, GeneratorConfig, Topology, generate
from hardness import SubsetSumInstance, build_gadget, gadget_degenerate
from models import (
    AlphaTreeDocument,
    AlphaValidationDocument,
    CactusReportDocument,
    DegeneracyWitnessDocument,
    ExtremalityCertificateDocument,
    FeasibilityDocument,
    GadgetDecisionDocument,
    GadgetDocument,
    NetworkDocument,
    NondegeneracyVerdictDocument,
    SufficientConditionDocument,
    VertexListDocument,
    WitnessCheckDocument,
    error_location,
    load_flow,
    load_network,
    parse_document,
)
from polytope import enumerate_vertices, is_extremal, is_feasible

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3

Result = Tuple[int, BaseModel]


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as e:
        raise DocumentError(path, f"cannot read file: {e.strerror}")
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path}:{e.lineno}:{e.colno}", e.msg)


def _document_error(path: str, e: DocumentError) -> DocumentError:
    return DocumentError(f"{path}: {e.location}", e.message)


def _load_network(path: str):
    try:
        return load_network(_read_json(path))
    except DocumentError as e:
        raise _document_error(path, e)


def _load_flow(net, path: str):
    try:
        return load_flow(net, _read_json(path))
    except DocumentError as e:
        raise _document_error(path, e)


def _load_document(model, path: str):
    try:
        return parse_document(model, _read_json(path))
    except DocumentError as e:
        raise _document_error(path, e)


def _sizes(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# Subcommands

def cmd_check_feasible(args) -> Result:
    net = _load_network(args.network)
    report = is_feasible(net, _load_flow(net, args.flow))
    return (EXIT_OK if report.feasible else EXIT_NEGATIVE), FeasibilityDocument.from_report(net, report)


def cmd_check_extremal(args) -> Result:
    net = _load_network(args.network)
    certificate = is_extremal(net, _load_flow(net, args.flow))
    document = ExtremalityCertificateDocument.from_certificate(net, certificate)
    return (EXIT_OK if certificate.is_extremal else EXIT_NEGATIVE), document


def cmd_enumerate_vertices(args) -> Result:
    net = _load_network(args.network)
    return EXIT_OK, VertexListDocument.from_flows(net, enumerate_vertices(net, args.cap))


def cmd_alpha_validate(args) -> Result:
    net = _load_network(args.network)
    F = _load_document(AlphaTreeDocument, args.forest).to_forest()
    result = validate_alpha_forest(net, F)
    document = AlphaValidationDocument.from_validation(net, F, result)
    positive = document.is_alpha_tree
    if args.flow is not None and result.valid:
        positive = positive and conforms(net, _load_flow(net, args.flow), F)
        if not positive and document.is_alpha_tree:
            document.reason = "flow does not conform to the alpha-tree"
    return (EXIT_OK if positive else EXIT_NEGATIVE), document


def cmd_alpha_extract(args) -> Result:
    net = _load_network(args.network)
    F = extract_alpha_tree(net, _load_flow(net, args.flow))
    return EXIT_OK, AlphaTreeDocument.from_forest(net, F)


def cmd_cactus_check(args) -> Result:
    net = _load_network(args.network)
    report = is_cactus(net, find_minor=args.minor)
    return (EXIT_OK if report.is_cactus else EXIT_NEGATIVE), CactusReportDocument.from_report(report)


def cmd_degeneracy_witness(args) -> Result:
    net = _load_network(args.network)
    witness = degeneracy.build_degeneracy_witness(net)
    if witness is None:
        return EXIT_NEGATIVE, CactusReportDocument.from_report(is_cactus(net))
    return EXIT_OK, DegeneracyWitnessDocument.from_witness(witness)


def cmd_degeneracy_test(args) -> Result:
    net = _load_network(args.network)
    verdict = degeneracy.test_nondegeneracy(net, budget=args.budget, mode=args.mode)
    return (EXIT_NEGATIVE if verdict.degenerate else EXIT_OK), NondegeneracyVerdictDocument.from_verdict(verdict)


def cmd_degeneracy_verify(args) -> Result:
    witness = _load_document(DegeneracyWitnessDocument, args.witness).to_witness()
    failures = degeneracy.verify_degeneracy_witness(witness)
    return (EXIT_NEGATIVE if failures else EXIT_OK), WitnessCheckDocument(valid=not failures, failures=failures)


def cmd_suffcond_check(args) -> Result:
    net = _load_network(args.network)
    f = _load_flow(net, args.flow)
    F = _load_document(AlphaTreeDocument, args.forest).to_forest()
    document = SufficientConditionDocument.from_results(
        degeneracy.check_suff_one_active_per_component(net, f, F),
        degeneracy.check_suff_small_degree(net, f, F),
    )
    return (EXIT_OK if document.certified else EXIT_NEGATIVE), document


def cmd_gadget_build(args) -> Result:
    gadget = build_gadget(SubsetSumInstance(tuple(args.sizes), args.target))
    return EXIT_OK, GadgetDocument.from_gadget(gadget)


def cmd_gadget_decide(args) -> Result:
    decision = gadget_degenerate(SubsetSumInstance(tuple(args.sizes), args.target), args.cap)
    return (EXIT_OK if decision.degenerate else EXIT_NEGATIVE), GadgetDecisionDocument.from_decision(decision)


def cmd_generate(args) -> Result:
    low = args.vertices if args.vertices is not None else args.min_vertices
    high = args.vertices if args.vertices is not None else args.max_vertices
    settings = GeneratorConfig(
        seed=args.seed,
        min_vertices=low,
        max_vertices=high,
        topology=args.topology,
        bound_style=args.bound_style,
        magnitude_cap=args.magnitude_cap,
        cycle_count=args.cycle_count,
    )
    return EXIT_OK, NetworkDocument.from_network(generate(settings))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffflow", description="Extreme points of differential-flow polytopes")
    parser.add_argument("--format", choices=["json", "compact"], default="json", help="output layout")
    parser.add_argument("--log-level", default=None, help="overrides LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("check-feasible", help="is the flow feasible")
    p.add_argument("network")
    p.add_argument("flow")
    p.set_defaults(handler=cmd_check_feasible)

    p = commands.add_parser("check-extremal", help="is the flow an extreme point")
    p.add_argument("network")
    p.add_argument("flow")
    p.set_defaults(handler=cmd_check_extremal)

    p = commands.add_parser("enumerate-vertices", help="all extreme points of a small network")
    p.add_argument("network")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(handler=cmd_enumerate_vertices)

    alpha = commands.add_parser("alpha", help="alpha-forests").add_subparsers(dest="action", required=True)
    p = alpha.add_parser("validate")
    p.add_argument("network")
    p.add_argument("forest")
    p.add_argument("--flow", default=None, help="also check conformance of this flow")
    p.set_defaults(handler=cmd_alpha_validate)
    p = alpha.add_parser("extract")
    p.add_argument("network")
    p.add_argument("flow")
    p.set_defaults(handler=cmd_alpha_extract)

    cactus = commands.add_parser("cactus", help="cactus recognition").add_subparsers(dest="action", required=True)
    p = cactus.add_parser("check")
    p.add_argument("network")
    p.add_argument("--minor", action="store_true", help="report a diamond minor on failure")
    p.set_defaults(handler=cmd_cactus_check)

    degen = commands.add_parser("degeneracy", help="degeneracy witnesses and tests").add_subparsers(
        dest="action", required=True
    )
    p = degen.add_parser("witness")
    p.add_argument("network")
    p.set_defaults(handler=cmd_degeneracy_witness)
    p = degen.add_parser("test")
    p.add_argument("network")
    p.add_argument("--mode", choices=[m.value for m in degeneracy.SearchMode], default="free")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(handler=cmd_degeneracy_test)
    p = degen.add_parser("verify")
    p.add_argument("witness")
    p.set_defaults(handler=cmd_degeneracy_verify)

    suff = commands.add_parser("suffcond", help="sufficient extremality conditions").add_subparsers(
        dest="action", required=True
    )
    p = suff.add_parser("check")
    p.add_argument("network")
    p.add_argument("flow")
    p.add_argument("forest")
    p.set_defaults(handler=cmd_suffcond_check)

    gadget = commands.add_parser("gadget", help="SubsetSum gadget").add_subparsers(dest="action", required=True)
    for name, handler in (("build", cmd_gadget_build), ("decide", cmd_gadget_decide)):
        p = gadget.add_parser(name)
        p.add_argument("--sizes", type=_sizes, required=True, help="comma-separated positive integers")
        p.add_argument("--target", type=int, required=True)
        if name == "decide":
            p.add_argument("--cap", type=int, default=None)
        p.set_defaults(handler=handler)

    p = commands.add_parser("generate", help="seeded random network")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertices", type=int, default=None, help="exact vertex count")
    p.add_argument("--min-vertices", type=int, default=4)
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--topology", choices=[t.value for t in Topology], default=Topology.RANDOM.value)
    p.add_argument("--bound-style", choices=[s.value for s in BoundStyle], default=BoundStyle.FREE.value)
    p.add_argument("--magnitude-cap", type=int, default=5)
    p.add_argument("--cycle-count", type=int, default=None)
    p.set_defaults(handler=cmd_generate)
    return parser


def render(document: BaseModel, layout: str = "json") -> str:
    data = json.loads(document.json())
    if layout == "compact":
        return json.dumps(data, sort_keys=True, separators=(",", ":"))
    return json.dumps(data, indent=2, sort_keys=True)


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT_ERROR if e.code else EXIT_OK
    config.configure_logging(args.log_level, stream=stderr)
    handler: Callable = args.handler
    try:
        code, document = handler(args)
    except ValidationError as e:
        error = error_location(e)
        print(f"error: {error}", file=stderr)
        return EXIT_INPUT_ERROR
    except ConsistencyError as e:
        logger.error(f"{args.command}: internal check failed: {e}")
        print(f"internal error: {e}", file=stderr)
        return EXIT_INTERNAL_ERROR
    except DifferentialFlowError as e:
        logger.debug(f"{args.command} failed: {e}")
        print(f"error: {e}", file=stderr)
        return EXIT_INPUT_ERROR
    print(render(document, args.format), file=stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
