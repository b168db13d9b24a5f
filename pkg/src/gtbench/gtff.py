"""
Two-modality models: a generalized topology interprets □, while ■ is read at
a linked world of the union of opens (worlds of Y1) or through a raw
neighbourhood family (worlds of Y2).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .config import DEFAULT_MAX_NODES, DEFAULT_VARS, GTFF_SCHEMAS
from .evaluation import TruthTable, valuation_bits
from .formulas import (
    SCHEMAS,
    BlackBox,
    BlackDiamond,
    Box,
    Diamond,
    Formula,
    Implies,
    LANGUAGES,
    enumerate_formulas,
)
from .gtf import check_valuation
from .reports import ValidationReport, Violation
from .topology import GenTopology, WorldSet, canonical_family, interior_bits
from .validity import AxiomReport, RuleReport, schema_report
from .validity import rule_admissibility as model_rule_admissibility


@dataclass(frozen=True)
class GTFFModel:
    """
    A GTFF-model.

    Attributes:
        topology: The generalized topology
        y1: Worlds reading ■ through the link
        y2: Worlds reading ■ through their neighbourhoods
        link: World of Y1 to its linked world
        neighbourhoods: World of Y2 to its family of sets
        valuation: Variable name to truth set
    """

    topology: GenTopology
    y1: WorldSet
    y2: WorldSet
    link: Dict[int, int] = field(default_factory=dict)
    neighbourhoods: Dict[int, Tuple[WorldSet, ...]] = field(default_factory=dict)
    valuation: Dict[str, WorldSet] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        topology: GenTopology,
        y1: WorldSet,
        link: Mapping[int, int],
        neighbourhoods: Optional[Mapping[int, Iterable[WorldSet]]] = None,
        valuation: Optional[Mapping[str, WorldSet]] = None,
        y2: Optional[WorldSet] = None,
    ) -> "GTFFModel":
        """
        Assemble a model. Y2 defaults to the worlds outside Y1, and worlds of
        Y2 without a given family get the empty one.
        """
        y1.check_universe(topology.universe)
        if y2 is None:
            y2 = y1.complement()
        y2.check_universe(topology.universe)
        families = {w: canonical_family(n) for w, n in (neighbourhoods or {}).items()}
        for family in families.values():
            for member in family:
                member.check_universe(topology.universe)
        for w in y2:
            families.setdefault(w, ())
        return cls(
            topology,
            y1,
            y2,
            dict(link),
            dict(sorted(families.items())),
            check_valuation(topology.size, valuation or {}),
        )

    @property
    def size(self) -> int:
        return self.topology.size

    @property
    def worlds(self) -> Tuple[str, ...]:
        return self.topology.worlds

    def with_valuation(self, valuation: Mapping[str, WorldSet]) -> "GTFFModel":
        return GTFFModel(
            self.topology,
            self.y1,
            self.y2,
            self.link,
            self.neighbourhoods,
            check_valuation(self.size, valuation),
        )

    def box_bits(self, target: int) -> int:
        return interior_bits(self.topology, target)

    def blackbox_bits(self, target: int) -> int:
        inside = interior_bits(self.topology, target)
        result = 0
        for w in self.y1:
            linked = self.link.get(w)
            if linked is not None and inside >> linked & 1:
                result |= 1 << w
        for w in self.y2:
            if any(x.bits == target for x in self.neighbourhoods.get(w, ())):
                result |= 1 << w
        return result

    def truth_table(self) -> TruthTable:
        return TruthTable(
            self.size,
            valuation_bits(self.valuation),
            {Box: self.box_bits, BlackBox: self.blackbox_bits},
            "gtff",
        )


def validate_gtff(m: GTFFModel) -> ValidationReport:
    """
    Check the GTFF conditions.

    Y1 and Y2 split the worlds, the link is defined exactly on Y1 and points
    into the union of opens, and neighbourhood families are given exactly on Y2.

    Returns:
        Report with `partition`, `link-domain`, `link-range` and `N-domain`
        violations
    """
    t = m.topology
    violations = []
    overlap = m.y1 & m.y2
    if overlap:
        violations.append(
            Violation("partition", f"{t.describe(overlap)} lies in both Y1 and Y2")
        )
    missing = (m.y1 | m.y2).complement()
    if missing:
        violations.append(
            Violation("partition", f"{t.describe(missing)} lies in neither Y1 nor Y2")
        )
    for w in m.y1:
        if w not in m.link:
            violations.append(
                Violation("link-domain", f"{t.worlds[w]} ∈ Y1 has no linked world")
            )
    for w, target in sorted(m.link.items()):
        if w not in m.y1:
            violations.append(
                Violation("link-domain", f"{t.worlds[w]} is linked but not in Y1")
            )
        if not 0 <= target < t.size or target not in t.union:
            violations.append(
                Violation(
                    "link-range",
                    f"{t.worlds[w]} is linked outside the union of opens",
                )
            )
    for w in sorted(m.neighbourhoods):
        if w not in m.y2:
            violations.append(
                Violation("N-domain", f"{t.worlds[w]} has neighbourhoods but is not in Y2")
            )
    return ValidationReport.of(violations)


def validate_gtfi(m: GTFFModel) -> ValidationReport:
    """
    GTFF conditions plus: the union of opens lies inside Y1 and the link is
    the identity there.

    Returns:
        Report adding `gtfi-union` and `gtfi-identity` violations
    """
    t = m.topology
    violations = list(validate_gtff(m).violations)
    outside = t.union - m.y1
    if outside:
        violations.append(
            Violation("gtfi-union", f"{t.describe(outside)} is open but not in Y1")
        )
    for w in t.union:
        if m.link.get(w) != w:
            violations.append(
                Violation("gtfi-identity", f"{t.worlds[w]} is not linked to itself")
            )
    return ValidationReport.of(violations)


def forces_gtff(m: GTFFModel, w: int, formula: Formula) -> bool:
    return m.truth_table().forces(w, formula)


def truth_set_gtff(m: GTFFModel, formula: Formula) -> WorldSet:
    return m.truth_table().truth_set(formula)


def axiom_report(
    m: GTFFModel,
    schemas: Sequence[str] = GTFF_SCHEMAS,
    variables: Sequence[str] = DEFAULT_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> AxiomReport:
    return schema_report(m, [SCHEMAS[s] for s in schemas], variables, max_nodes)


def rule_admissibility(
    m: GTFFModel,
    rule: str,
    variables: Sequence[str] = DEFAULT_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> RuleReport:
    """Extensionality of □ (`RE_box`) or ■ (`RE_blackbox`)."""
    return model_rule_admissibility(m, rule, variables, max_nodes)


@dataclass(frozen=True)
class WorldProperty:
    """
    A property over worlds and formulas.

    Expected properties hold when no counterexample was found; `world` and
    `formula` then stay empty. Search properties hold when a witness was found.
    """

    name: str
    expected: bool
    holds: bool
    world: Optional[str] = None
    formula: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "property": self.name,
            "expected": self.expected,
            "holds": self.holds,
            "world": self.world,
            "formula": self.formula,
        }


@dataclass(frozen=True)
class WorldPropertyReport:
    properties: Tuple[WorldProperty, ...]

    @property
    def valid(self) -> bool:
        return all(p.holds for p in self.properties if p.expected)

    def get(self, name: str) -> WorldProperty:
        for prop in self.properties:
            if prop.name == name:
                return prop
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "properties": [p.to_dict() for p in self.properties],
        }


def world_properties(
    m: GTFFModel,
    variables: Sequence[str] = DEFAULT_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> WorldPropertyReport:
    """
    World-level properties of a GTFI-model over enumerated formulas.

    Expected to hold:
      * blackbox-to-box: ■φ → □φ at every world of the union of opens
      * y1-blackbox-consistent: ■φ → ◆φ at every world of Y1
      * orphan-blackbox: at worlds outside the union of opens, ■φ → □φ holds
        only together with ¬■φ, and then ■φ → φ holds as well
    Searched for:
      * y1-orphan-gap: a world of Y1 outside the union of opens failing
        ■ψ → ◇ψ or ◆ψ → ◇ψ
      * y2-blackbox-inconsistent: a world of Y2 failing ■φ → ◆φ

    Returns:
        One result per property
    """
    t = m.topology
    table = m.truth_table()
    union = t.union.bits
    orphans = t.orphans.bits
    y1_orphans = m.y1.bits & orphans
    found: Dict[str, Tuple[int, Formula]] = {}

    def note(name: str, bits: int, formula: Formula) -> None:
        if bits and name not in found:
            found[name] = ((bits & -bits).bit_length() - 1, formula)

    full = table.full
    for phi in enumerate_formulas(variables, max_nodes, LANGUAGES["gtff"]):
        blackbox = table.bits(BlackBox(phi))
        to_box = table.bits(Implies(BlackBox(phi), Box(phi)))
        to_black_diamond = table.bits(Implies(BlackBox(phi), BlackDiamond(phi)))
        note("blackbox-to-box", union & ~to_box, phi)
        note("y1-blackbox-consistent", m.y1.bits & ~to_black_diamond, phi)
        note("y2-blackbox-inconsistent", m.y2.bits & ~to_black_diamond, phi)
        gap = table.bits(Implies(BlackBox(phi), Diamond(phi))) & table.bits(
            Implies(BlackDiamond(phi), Diamond(phi))
        )
        note("y1-orphan-gap", y1_orphans & ~gap, phi)
        reflexive = table.bits(Implies(BlackBox(phi), phi))
        bad = orphans & to_box & (blackbox | (full & ~reflexive))
        note("orphan-blackbox", bad, phi)

    properties = []
    for name, expected in (
        ("blackbox-to-box", True),
        ("y1-blackbox-consistent", True),
        ("orphan-blackbox", True),
        ("y1-orphan-gap", False),
        ("y2-blackbox-inconsistent", False),
    ):
        hit = found.get(name)
        world = t.worlds[hit[0]] if hit else None
        formula = str(hit[1]) if hit else None
        holds = hit is None if expected else hit is not None
        properties.append(WorldProperty(name, expected, holds, world, formula))
    report = WorldPropertyReport(tuple(properties))
    logging.debug(
        f"World properties: {sum(p.holds for p in properties)} of {len(properties)} hold"
    )
    return report
