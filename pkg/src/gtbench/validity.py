"""
Schema and rule checking over single models and whole frames, and pointwise
equivalence certificates between two models on the same worlds.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .config import DEFAULT_MAX_NODES, DEFAULT_VARS
from .evaluation import Model, TruthTable
from .formulas import (
    AxiomSchema,
    BlackBox,
    Box,
    Bullet,
    Formula,
    LANGUAGES,
    Var,
    enumerate_formulas,
)
from .topology import WorldSet, all_subsets
from .utils.bits import full_mask, lowest_bit

# Rule ids understood by `rule_admissibility`
RULES: Dict[str, Tuple[str, type]] = {
    "RE_box": ("RE", Box),
    "RE_bullet": ("RE", Bullet),
    "RE_blackbox": ("RE", BlackBox),
    "RM_box": ("RM", Box),
    "RM_bullet": ("RM", Bullet),
    "RM_blackbox": ("RM", BlackBox),
}


def supported_operators(table: TruthTable) -> Tuple[type, ...]:
    return tuple(op for op in LANGUAGES["full"] if table.supports(op))


def representatives(
    table: TruthTable, formulas: Iterable[Formula]
) -> Dict[int, Formula]:
    """The first formula for every distinct truth set."""
    found: Dict[int, Formula] = {}
    for formula in formulas:
        found.setdefault(table.bits(formula), formula)
    return found


@dataclass(frozen=True)
class SchemaResult:
    """Outcome of checking every instance of one schema in one model."""

    schema_id: str
    valid: bool
    instances: int
    world: Optional[str] = None
    instance: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "schema": self.schema_id,
            "valid": self.valid,
            "instances": self.instances,
            "world": self.world,
            "instance": self.instance,
        }


@dataclass(frozen=True)
class AxiomReport:
    results: Tuple[SchemaResult, ...]

    @property
    def valid(self) -> bool:
        return all(result.valid for result in self.results)

    def result(self, schema_id: str) -> SchemaResult:
        for result in self.results:
            if result.schema_id == schema_id:
                return result
        raise KeyError(schema_id)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "schemas": [result.to_dict() for result in self.results],
        }


def check_schema(
    m: Model,
    schema: AxiomSchema,
    variables: Sequence[str] = DEFAULT_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> SchemaResult:
    """
    Check every instance of `schema` built from formulas of at most
    `max_nodes` nodes. Formulas with the same truth set give instances with
    the same truth set, so one formula per truth set is enough.

    Args:
        m: The model
        schema: The schema to instantiate
        variables: Variables of the enumerated formulas
        max_nodes: Size bound of the enumerated formulas

    Returns:
        Validity, number of instances checked and the first failing world
    """
    table = m.truth_table()
    operators = supported_operators(table)
    reps = list(
        representatives(table, enumerate_formulas(variables, max_nodes, operators)).values()
    )
    names = schema.metavariables
    count = 0
    for chosen in product(reps, repeat=len(names)):
        instance = schema.instantiate(dict(zip(names, chosen)))
        count += 1
        bits = table.bits(instance)
        if bits != table.full:
            world = lowest_bit(table.full & ~bits)
            return SchemaResult(
                schema.schema_id, False, count, m.worlds[world], str(instance)
            )
    return SchemaResult(schema.schema_id, True, count)


def schema_report(
    m: Model,
    schemas: Sequence[AxiomSchema],
    variables: Sequence[str] = DEFAULT_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> AxiomReport:
    results = tuple(check_schema(m, s, variables, max_nodes) for s in schemas)
    logging.debug(
        f"Checked {len(results)} schemas, {sum(not r.valid for r in results)} failed"
    )
    return AxiomReport(results)


@dataclass(frozen=True)
class RuleReport:
    """Admissibility of a rule in one model over an enumerated formula population."""

    rule: str
    valid: bool
    pairs: int
    witness: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "valid": self.valid,
            "pairs": self.pairs,
            "witness": self.witness,
        }


def rule_admissibility(
    m: Model,
    rule: str,
    variables: Sequence[str] = DEFAULT_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> RuleReport:
    """
    Check extensionality (RE) or monotonicity (RM) of a modality.

    RE: formulas with equal truth sets give modalized formulas with equal
    truth sets. RM: inclusion of truth sets is preserved by the modality.

    Args:
        m: The model
        rule: One of the ids of `RULES`
        variables: Variables of the enumerated formulas
        max_nodes: Size bound of the enumerated formulas

    Returns:
        Report with the first offending pair
    """
    kind, operator = RULES[rule]
    table = m.truth_table()
    formulas = list(enumerate_formulas(variables, max_nodes, supported_operators(table)))
    pairs = 0
    if kind == "RE":
        first: Dict[int, Formula] = {}
        for formula in formulas:
            bits = table.bits(formula)
            other = first.setdefault(bits, formula)
            if other is formula:
                continue
            pairs += 1
            if table.bits(operator(formula)) != table.bits(operator(other)):
                return RuleReport(rule, False, pairs, f"{other} and {formula}")
        return RuleReport(rule, True, pairs)

    reps = representatives(table, formulas)
    for (a, left), (b, right) in product(reps.items(), repeat=2):
        if a & ~b:
            continue
        pairs += 1
        if table.bits(operator(left)) & ~table.bits(operator(right)):
            return RuleReport(rule, False, pairs, f"{left} entails {right}")
    return RuleReport(rule, True, pairs)


def all_world_sets(size: int) -> List[WorldSet]:
    return list(all_subsets(WorldSet.full(size)))


@dataclass(frozen=True)
class FrameCounterexample:
    """A valuation and world falsifying a schema on a frame."""

    valuation: Dict[str, WorldSet]
    world: int
    instance: Formula


def frame_counterexample(
    m: Model, schema: AxiomSchema, within: Optional[WorldSet] = None
) -> Optional[FrameCounterexample]:
    """
    Search the assignments of world sets to the metavariables of a schema.

    A schema is valid on a frame iff this returns None. The metavariables are
    bound to fresh variables p, q, ... whose truth sets range over all subsets.

    Args:
        m: Any model over the frame; its valuation is ignored
        schema: The schema to falsify
        within: Only failures at these worlds count; all worlds when None

    Returns:
        The first falsifying valuation, or None
    """
    names = schema.metavariables
    letters = tuple("pqrs"[: len(names)])
    instance = schema.instantiate({n: Var(v) for n, v in zip(names, letters)})
    subsets = all_world_sets(m.size)
    mask = within.bits if within is not None else full_mask(m.size)
    for sets in product(subsets, repeat=len(letters)):
        valuation = dict(zip(letters, sets))
        table = m.with_valuation(valuation).truth_table()
        failing = table.full & ~table.bits(instance) & mask
        if failing:
            return FrameCounterexample(valuation, lowest_bit(failing), instance)
    return None


@dataclass(frozen=True)
class WorldVerdict:
    world: str
    agrees: bool
    formula: Optional[str] = None


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Per-world agreement of two models over an enumerated formula population."""

    formulas: int
    worlds: Tuple[WorldVerdict, ...]

    @property
    def valid(self) -> bool:
        return all(verdict.agrees for verdict in self.worlds)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "formulas": self.formulas,
            "worlds": {
                v.world: {"agrees": v.agrees, "formula": v.formula}
                for v in self.worlds
            },
        }


def pointwise_certificate(
    left: Model,
    right: Model,
    formulas: Iterable[Formula],
    translate: Callable[[Formula], Formula] = lambda f: f,
) -> EquivalenceCertificate:
    """
    Compare the truth set of every formula in `left` with the truth set of its
    translation in `right`, world by world.

    Both models must share the world numbering.

    Returns:
        Certificate with the first distinguishing formula per world
    """
    left_table, right_table = left.truth_table(), right.truth_table()
    first: Dict[int, Formula] = {}
    count = 0
    for formula in formulas:
        count += 1
        diff = left_table.bits(formula) ^ right_table.bits(translate(formula))
        while diff:
            w = lowest_bit(diff)
            first.setdefault(w, formula)
            diff &= diff - 1
    verdicts = tuple(
        WorldVerdict(
            left.worlds[w],
            w not in first,
            str(first[w]) if w in first else None,
        )
        for w in range(left.size)
    )
    if first:
        logging.warning(f"Models disagree at {len(first)} worlds")
    return EquivalenceCertificate(count, verdicts)
