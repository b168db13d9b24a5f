#!/usr/bin/env python3
"""
Main entry point for the generalized topology workbench.
"""

import argparse
import logging
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .bisimulation import (
    BISIMULATION_KINDS,
    ModelMap,
    WorldRelation,
    bisim_from_map,
    bisimulation_report,
    map_properties,
)
from .config import (
    DEFAULT_BUDGET,
    DEFAULT_JOBS,
    DEFAULT_MAX_NODES,
    DEFAULT_MAX_OPENS,
    DEFAULT_MAX_WORLDS,
    DEFAULT_SEED,
    DEFAULT_VARS,
    EXAMPLE_IDS,
    EXIT_FAILURE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    FRAME_CLASSES,
    MODEL_KINDS,
    TRANSFORMS,
)
from .exceptions import (
    InputError,
    InvalidModelError,
    PreconditionError,
    UnsupportedOperatorError,
    WorkbenchError,
)
from .formatters import (
    bisimulation_to_dict,
    dump_json,
    format_axiom_report,
    format_bisimulation,
    format_certificate,
    format_ifs,
    format_search,
    format_validation,
    model_to_dict,
    names,
    search_to_dict,
    write_model_file,
)
from .formulas import (
    LANGUAGES,
    SCHEMAS,
    Box,
    Bullet,
    enumerate_formulas,
    replace_modality,
)
from .gtf import GTFModel, check_regularities, is_consistent, validate_gtf
from .gtff import axiom_report, rule_admissibility, validate_gtff, validate_gtfi, world_properties
from .gtn import gtf_to_gtn, gtn_to_gtf, validate_gtn
from .ifs import ifs_to_strong, strong_to_ifs, validate_ifs, validate_sgt
from .parsers import (
    LoadedModel,
    load_json,
    load_model_file,
    map_table,
    parse,
    parse_schema_id,
    parse_variables,
    relation_pairs,
)
from .reports import ValidationReport
from .search import SearchConfig, random_model, search_countermodel
from .topology import example_space
from .utils import setup_logger
from .validity import pointwise_certificate, schema_report

VALIDATORS: Dict[str, Callable[[Any], ValidationReport]] = {
    "gtf": validate_gtf,
    "gtn": validate_gtn,
    "gtff": validate_gtff,
    "gtfi": validate_gtfi,
    "sgt": validate_sgt,
}

# Schemas reported by `validate --axioms` on single-box models
GTF_AXIOMS = ("M", "Four", "BulletT", "T", "C", "K", "D", "N")


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments using argparse."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=DEFAULT_SEED, help="Random seed (default: 0)"
    )
    common.add_argument(
        "--max-nodes",
        type=int,
        default=DEFAULT_MAX_NODES,
        help="Largest formula size in enumerations (default: 5)",
    )
    common.add_argument(
        "--vars",
        default=",".join(DEFAULT_VARS),
        help="Comma-separated variables of enumerated formulas (default: p,q)",
    )
    common.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        help="Random iterations of the countermodel search (default: 10000)",
    )
    common.add_argument(
        "--max-worlds",
        type=int,
        default=DEFAULT_MAX_WORLDS,
        help="Largest universe of random models (default: 5)",
    )
    common.add_argument(
        "--max-opens",
        type=int,
        default=DEFAULT_MAX_OPENS,
        help="Largest number of random base sets of a topology (default: 6)",
    )
    common.add_argument(
        "-j",
        "--jobs",
        type=int,
        default=DEFAULT_JOBS,
        help="Number of parallel processes to use (default: number of CPU cores)",
    )
    common.add_argument(
        "--json", action="store_true", help="Print machine-readable JSON reports"
    )
    common.add_argument(
        "--quiet", action="store_true", help="Disable progress bars"
    )
    common.add_argument(
        "--debug",
        action="store_true",
        help="Enable debug logging for detailed information",
    )

    parser = argparse.ArgumentParser(
        description="Model checking workbench for generalized topological semantics"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", parents=[common], help="Validate a model file")
    validate.add_argument("file", help="Model file")
    validate.add_argument(
        "--axioms",
        action="store_true",
        help="Also report schema validity, rules and world properties",
    )

    evaluate = commands.add_parser("eval", parents=[common], help="Evaluate a formula")
    evaluate.add_argument("file", help="Model file")
    evaluate.add_argument("formula", help="Formula text, e.g. '[]p -> p'")
    evaluate.add_argument("-w", "--world", help="Report the verdict at one world")

    transform = commands.add_parser(
        "transform", parents=[common], help="Translate a model into another kind"
    )
    transform.add_argument("file", help="Model file")
    transform.add_argument(
        "--to", required=True, choices=["gtf", "gtn", "strong", "ifs"], help="Target"
    )
    transform.add_argument("-o", "--output", help="Output model file")

    bisim = commands.add_parser("bisim", parents=[common], help="Check bisimulations")
    bisim.add_argument("left", help="Left GTF model file")
    bisim.add_argument("right", help="Right GTF model file")
    bisim.add_argument(
        "-k", "--kind", type=int, choices=BISIMULATION_KINDS, default=0, help="Kind"
    )
    given = bisim.add_mutually_exclusive_group(required=True)
    given.add_argument("--relation", help="JSON file with pairs of world names")
    given.add_argument(
        "--map",
        help="JSON file mapping left worlds to right worlds; the left valuation is pulled back",
    )
    given.add_argument(
        "--largest", action="store_true", help="Compute the largest bisimulation"
    )
    bisim.add_argument(
        "--equiv",
        action="store_true",
        help="Compare related worlds on enumerated formulas",
    )

    search = commands.add_parser(
        "search", parents=[common], help="Search a countermodel to a schema"
    )
    search.add_argument("schema", help="Schema id, e.g. T, C, K, GJ, 4")
    search.add_argument(
        "-c", "--class", dest="frame_class", choices=FRAME_CLASSES, default="gtf"
    )
    search.add_argument(
        "--orphans",
        action="store_true",
        help="Only accept countermodels failing outside the union of opens",
    )
    search.add_argument("-o", "--output", help="Write the countermodel to this file")

    generate = commands.add_parser(
        "generate", parents=[common], help="Generate an example or random model"
    )
    generate.add_argument("example", choices=list(EXAMPLE_IDS) + ["random"])
    generate.add_argument(
        "--kind", choices=MODEL_KINDS, default="gtf", help="Kind of random model"
    )
    generate.add_argument(
        "--worlds", default="a,b,c", help="World names of ex4 (default: a,b,c)"
    )
    generate.add_argument("--forbidden", default="c", help="Forbidden worlds of ex4")
    generate.add_argument("--length", type=int, default=3, help="Chain length of ex5")
    generate.add_argument(
        "--extra", type=int, default=0, help="Worlds of ex5 outside the chain"
    )
    generate.add_argument("-o", "--output", help="Output model file")

    return parser.parse_args(argv)


def search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        seed=args.seed,
        max_worlds=args.max_worlds,
        max_opens=args.max_opens,
        variables=tuple(parse_variables(args.vars)),
        max_nodes=args.max_nodes,
        budget=args.budget,
        jobs=args.jobs,
        orphans_only=getattr(args, "orphans", False),
        progress=not (args.quiet or args.json),
    )


def emit(args: argparse.Namespace, data: Dict[str, Any], text: str) -> None:
    if args.json:
        sys.stdout.write(dump_json(data))
    else:
        print(text)


def require_kind(loaded: LoadedModel, *kinds: str) -> None:
    if loaded.kind not in kinds:
        raise InputError(f"expected a {' or '.join(kinds)} model, got {loaded.kind}")


def load_valid_model(path: str, *kinds: str) -> LoadedModel:
    """
    Load a model file for a command that computes on it.

    Raises:
        InputError: the file is not of one of `kinds`
        InvalidModelError: the validator of its kind reports violations
    """
    loaded = load_model_file(path)
    if kinds:
        require_kind(loaded, *kinds)
    report = VALIDATORS[loaded.kind](loaded.model)
    if not report.valid:
        raise InvalidModelError(f"{loaded.kind} model {path}", report)
    return loaded


def cmd_validate(args: argparse.Namespace) -> int:
    loaded = load_model_file(args.file)
    report = VALIDATORS[loaded.kind](loaded.model)
    data: Dict[str, Any] = {"kind": loaded.kind, **report.to_dict()}
    lines = [format_validation(report, f"{loaded.kind} model {args.file}")]

    if args.axioms and report.valid:
        variables = parse_variables(args.vars)
        model = loaded.model
        if loaded.kind == "gtf":
            axioms = schema_report(
                model, [SCHEMAS[s] for s in GTF_AXIOMS], variables, args.max_nodes
            )
            regularities = check_regularities(model, variables, args.max_nodes)
            ifs = validate_ifs(model)
            data.update(
                consistent=is_consistent(model),
                axioms=axioms.to_dict(),
                regularities=regularities.to_dict(),
                ifs=ifs.to_report().to_dict(),
            )
            lines += [
                f"consistent: {'yes' if is_consistent(model) else 'no'}",
                format_axiom_report(axioms),
                format_validation(regularities, "regularities"),
                format_ifs(ifs),
            ]
        elif loaded.kind in ("gtff", "gtfi"):
            axioms = axiom_report(model, variables=variables, max_nodes=args.max_nodes)
            rules = [
                rule_admissibility(model, rule, variables, args.max_nodes)
                for rule in ("RE_box", "RE_blackbox")
            ]
            data.update(axioms=axioms.to_dict(), rules=[r.to_dict() for r in rules])
            lines.append(format_axiom_report(axioms))
            lines += [f"{r.rule}: {'admissible' if r.valid else r.witness}" for r in rules]
            if loaded.kind == "gtfi":
                properties = world_properties(model, variables, args.max_nodes)
                data["properties"] = properties.to_dict()
                for prop in properties.properties:
                    detail = f" ({prop.world}, {prop.formula})" if prop.world else ""
                    lines.append(f"{prop.name}: {'yes' if prop.holds else 'no'}{detail}")

    emit(args, data, "\n".join(lines))
    return EXIT_OK if report.valid else EXIT_FAILURE


def cmd_eval(args: argparse.Namespace) -> int:
    loaded = load_valid_model(args.file)
    formula = parse(args.formula)
    model = loaded.model
    table = model.truth_table()
    truth = table.truth_set(formula)
    data: Dict[str, Any] = {"formula": str(formula), "truth_set": names(truth, model.worlds)}
    if args.world is None:
        text = f"{formula}: {truth.describe(model.worlds)}"
    else:
        if args.world not in model.worlds:
            raise InputError(f"unknown world {args.world}")
        verdict = model.worlds.index(args.world) in truth
        data.update(world=args.world, forces=verdict)
        text = f"{args.world} {'forces' if verdict else 'does not force'} {formula}"
    emit(args, data, text)
    return EXIT_OK


def _transform(loaded: LoadedModel, target: str) -> Tuple[str, Any, Any, Callable, Tuple[type, ...]]:
    """Output kind, output model, input model, formula translation, language."""
    name = TRANSFORMS.get((loaded.kind, target))
    if name is None:
        raise InputError(f"no transformation from {loaded.kind} to {target}")
    m = loaded.model
    if name == "gtn_to_gtf":
        return "gtf", gtn_to_gtf(m), m, lambda f: f, LANGUAGES["box"]
    if name == "gtf_to_gtn":
        return "gtn", gtf_to_gtn(m), m, lambda f: f, LANGUAGES["box"]
    if name == "ifs_to_strong":
        return (
            "sgt",
            ifs_to_strong(m),
            m,
            lambda f: replace_modality(f, Bullet, Box),
            LANGUAGES["bullet"],
        )
    return (
        "gtf",
        strong_to_ifs(m),
        m,
        lambda f: replace_modality(f, Box, Bullet),
        LANGUAGES["box"],
    )


def cmd_transform(args: argparse.Namespace) -> int:
    loaded = load_valid_model(args.file)
    kind, output, source, translate, language = _transform(loaded, args.to)
    formulas = enumerate_formulas(parse_variables(args.vars), args.max_nodes, language)
    certificate = pointwise_certificate(source, output, formulas, translate)
    document = model_to_dict(kind, output, loaded.name)
    bijection = {w: w for w in output.worlds}
    if args.output:
        write_model_file(args.output, kind, output, loaded.name)
        logging.info(f"Wrote {kind} model to {args.output}")
    text = format_certificate(certificate)
    if not args.output:
        text = dump_json(document) + text
    emit(
        args,
        {"model": document, "bijection": bijection, "certificate": certificate.to_dict()},
        text,
    )
    return EXIT_OK if certificate.valid else EXIT_FAILURE


def cmd_bisim(args: argparse.Namespace) -> int:
    left = load_valid_model(args.left, "gtf")
    right = load_valid_model(args.right, "gtf")
    m1, m2 = left.model, right.model
    rel = None
    properties = None
    if args.relation:
        rel = WorldRelation.from_names(m1, m2, relation_pairs(load_json(args.relation)))
    elif args.map:
        f = ModelMap.from_names(m1, m2, map_table(load_json(args.map)))
        properties = map_properties(f, m1, m2)
        m1, rel = bisim_from_map(args.kind, f, m1, m2)
    report = bisimulation_report(
        args.kind, m1, m2, rel, args.equiv, parse_variables(args.vars), args.max_nodes
    )
    data = bisimulation_to_dict(report, m1, m2)
    text = format_bisimulation(report, m1, m2)
    if properties is not None:
        data["map"] = properties.to_dict()
        flags = ", ".join(f"{k}={v}" for k, v in properties.to_dict().items())
        text = f"map: {flags}\n{text}"
    emit(args, data, text)
    return EXIT_OK if report.valid else EXIT_FAILURE


def cmd_search(args: argparse.Namespace) -> int:
    schema_id = parse_schema_id(args.schema)
    result = search_countermodel(schema_id, args.frame_class, search_config(args))
    data = search_to_dict(result)
    if result.found:
        kind = "gtf" if isinstance(result.model, GTFModel) else args.frame_class
        data["model"] = model_to_dict(kind, result.model)
        if args.output:
            write_model_file(args.output, kind, result.model, f"{schema_id} countermodel")
            logging.info(f"Wrote countermodel to {args.output}")
    emit(args, data, format_search(result))
    return EXIT_FAILURE if result.found else EXIT_OK


def _split(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def cmd_generate(args: argparse.Namespace) -> int:
    if args.example == "random":
        kind = args.kind
        model = random_model(kind, search_config(args))
        name = f"random {kind} seed {args.seed}"
    else:
        params: Dict[str, Any] = {}
        if args.example == "ex4":
            params = {"worlds": _split(args.worlds), "forbidden": _split(args.forbidden)}
        elif args.example == "ex5":
            params = {"length": args.length, "extra": args.extra}
        kind = "gtf"
        model = GTFModel.build(example_space(args.example, **params))
        name = args.example
    document = model_to_dict(kind, model, name)
    if args.output:
        write_model_file(args.output, kind, model, name)
        logging.info(f"Wrote {kind} model to {args.output}")
        if args.json:
            sys.stdout.write(dump_json(document))
    else:
        sys.stdout.write(dump_json(document))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "validate": cmd_validate,
    "eval": cmd_eval,
    "transform": cmd_transform,
    "bisim": cmd_bisim,
    "search": cmd_search,
    "generate": cmd_generate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""

    # Setup
    start_time = time.time()
    args = parse_arguments(argv)

    setup_logger(args.debug)

    try:
        code = COMMANDS[args.command](args)
    except (InputError, UnsupportedOperatorError) as e:
        logging.error(str(e))
        if args.json:
            sys.stdout.write(dump_json({"error": str(e)}))
        code = EXIT_INPUT_ERROR
    except (InvalidModelError, PreconditionError) as e:
        logging.error(str(e))
        if args.json:
            sys.stdout.write(dump_json({"error": str(e)}))
        else:
            print(str(e))
        code = EXIT_FAILURE
    except WorkbenchError as e:
        logging.error(str(e))
        code = EXIT_FAILURE

    total_time = time.time() - start_time
    logging.info(f"Total execution time: {total_time:.2f}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
