"""
Output formatting: JSON model files and text or JSON reports.
"""

import codecs
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

from .bisimulation import BisimulationReport
from .gtf import GTFModel
from .gtff import GTFFModel
from .gtn import GTNModel
from .ifs import IfsCertificate, SGTModel
from .reports import ValidationReport
from .search import SearchResult
from .topology import GenTopology, WorldSet
from .validity import AxiomReport, EquivalenceCertificate


def names(x: WorldSet, worlds: Sequence[str]) -> List[str]:
    """World names of a set, in world order."""
    return [worlds[i] for i in x]


def family_names(family: Sequence[WorldSet], worlds: Sequence[str]) -> List[List[str]]:
    return [names(x, worlds) for x in family]


def topology_to_dict(t: GenTopology) -> Dict[str, Any]:
    # ∅ is implicit in model files
    return {
        "worlds": list(t.worlds),
        "opens": family_names([x for x in t.opens if x], t.worlds),
    }


def _valuation(valuation: Dict[str, WorldSet], worlds: Sequence[str]) -> Dict[str, List[str]]:
    return {name: names(x, worlds) for name, x in sorted(valuation.items())}


def model_to_dict(kind: str, model: Any, name: Optional[str] = None) -> Dict[str, Any]:
    """
    JSON document of a model file.

    GTF families are written for orphaned worlds only, since the topology
    determines the others; GTN families are written as their minimal sets.
    """
    data: Dict[str, Any] = {"kind": kind}
    if name:
        data["name"] = name
    if isinstance(model, GTNModel):
        data["worlds"] = list(model.worlds)
        data["N"] = {
            model.worlds[w]: family_names(family, model.worlds)
            for w, family in enumerate(model.minimal)
            if family
        }
    elif isinstance(model, GTFModel):
        t = model.topology
        data["topology"] = topology_to_dict(t)
        data["F"] = {
            t.worlds[w]: family_names(model.families[w], t.worlds) for w in t.orphans
        }
    elif isinstance(model, GTFFModel):
        t = model.topology
        data["topology"] = topology_to_dict(t)
        data["Y1"] = names(model.y1, t.worlds)
        data["Y2"] = names(model.y2, t.worlds)
        data["f"] = {t.worlds[w]: t.worlds[v] for w, v in sorted(model.link.items())}
        data["N"] = {
            t.worlds[w]: family_names(family, t.worlds)
            for w, family in model.neighbourhoods.items()
        }
    elif isinstance(model, SGTModel):
        data["topology"] = topology_to_dict(model.topology)
    else:
        raise TypeError(f"cannot write {type(model).__name__}")
    data["valuation"] = _valuation(model.valuation, model.worlds)
    return data


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def open_output_file(file_path: str) -> TextIO:
    """
    Open an output file with proper encoding, creating its directory.

    Args:
        file_path: Path to the output file

    Returns:
        File object
    """
    Path(file_path).parent.mkdir(parents=True, exist_ok=True)
    return codecs.open(file_path, "w", encoding="utf-8")


def write_model_file(file_path: str, kind: str, model: Any, name: Optional[str] = None) -> None:
    with open_output_file(file_path) as f:
        f.write(dump_json(model_to_dict(kind, model, name)))


def format_validation(report: ValidationReport, what: str) -> str:
    if report.valid:
        return f"{what}: valid"
    lines = [f"{what}: invalid"]
    lines.extend(f"  {violation}" for violation in report.violations)
    return "\n".join(lines)


def format_axiom_report(report: AxiomReport) -> str:
    lines = []
    for result in report.results:
        if result.valid:
            lines.append(f"{result.schema_id}: valid ({result.instances} instances)")
        else:
            lines.append(
                f"{result.schema_id}: fails at {result.world} on {result.instance}"
            )
    return "\n".join(lines)


def format_certificate(certificate: EquivalenceCertificate) -> str:
    lines = [
        f"pointwise equivalence over {certificate.formulas} formulas: "
        + ("pass" if certificate.valid else "fail")
    ]
    for verdict in certificate.worlds:
        if verdict.agrees:
            lines.append(f"  {verdict.world}: pass")
        else:
            lines.append(f"  {verdict.world}: fail on {verdict.formula}")
    return "\n".join(lines)


def format_ifs(certificate: IfsCertificate) -> str:
    lines = [f"in-fact-strong ({certificate.method}): {'yes' if certificate.valid else 'no'}"]
    for check in certificate.checks:
        status = "pass" if check.passed else f"fail: {check.witness}"
        lines.append(f"  {check.world}: {status}")
    return "\n".join(lines)


def bisimulation_to_dict(report: BisimulationReport, m1: Any, m2: Any) -> Dict[str, Any]:
    return {
        "kind": report.kind,
        "relation": report.relation.to_names(m1, m2) if report.relation else None,
        "validation": report.validation.to_dict(),
        "equivalence": [
            {"pair": [m1.worlds[w], m2.worlds[v]], **result.to_dict()}
            for (w, v), result in sorted(report.equivalence.items())
        ],
        "skipped": [[m1.worlds[w], m2.worlds[v]] for w, v in report.skipped],
        "warnings": list(report.warnings),
        "valid": report.valid,
    }


def format_bisimulation(report: BisimulationReport, m1: Any, m2: Any) -> str:
    if report.relation is None:
        return f"{report.kind}-bisimulation: none"
    pairs = ", ".join(f"({a},{b})" for a, b in report.relation.to_names(m1, m2))
    lines = [
        format_validation(report.validation, f"{report.kind}-bisimulation {{{pairs}}}")
    ]
    for (w, v), result in sorted(report.equivalence.items()):
        pair = f"({m1.worlds[w]},{m2.worlds[v]})"
        if result.equivalent:
            lines.append(f"  {pair}: equivalent up to {result.formulas} formulas")
        else:
            lines.append(f"  {pair}: distinguished by {result.formula}")
    for w, v in report.skipped:
        lines.append(f"  ({m1.worlds[w]},{m2.worlds[v]}): skipped, outside the opens")
    lines.extend(f"  warning: {warning}" for warning in report.warnings)
    return "\n".join(lines)


def search_to_dict(result: SearchResult) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "schema": result.schema_id,
        "class": result.frame_class,
        "found": result.found,
        "checked": result.checked,
    }
    if result.found:
        data.update(
            {
                "phase": result.phase,
                "iteration": result.iteration,
                "world": result.model.worlds[result.world],
                "instance": result.instance,
            }
        )
    return data


def format_search(result: SearchResult) -> str:
    if not result.found:
        return (
            f"{result.schema_id} on {result.frame_class}: no counterexample found "
            f"({result.checked} frames)"
        )
    return (
        f"{result.schema_id} on {result.frame_class}: countermodel found in the "
        f"{result.phase} phase (iteration {result.iteration}), "
        f"{result.instance} fails at {result.model.worlds[result.world]}"
    )
