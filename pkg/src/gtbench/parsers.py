"""
Parsing of formula text and of JSON model files.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput

from .config import MODEL_KINDS, SCHEMA_ALIASES
from .exceptions import FormulaSyntaxError, InputError, ModelFileError
from .formulas import (
    SCHEMAS,
    And,
    BlackBox,
    BlackDiamond,
    Bottom,
    Box,
    Bullet,
    Diamond,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    Var,
)
from .gtf import GTFModel
from .gtff import GTFFModel
from .gtn import GTNModel
from .ifs import SGTModel
from .topology import GenTopology, WorldSet

FORMULA_GRAMMAR = r"""
    ?start: iff
    ?iff: imp
        | iff "<->" imp     -> iff_op
    ?imp: disj
        | disj "->" imp     -> implies
    ?disj: conj
        | disj "|" conj     -> or_op
    ?conj: unary
        | conj "&" unary    -> and_op
    ?unary: atom
        | "~" unary         -> not_op
        | "[]" unary        -> box
        | "<>" unary        -> diamond
        | "*" unary         -> bullet
        | "[b]" unary       -> blackbox
        | "<b>" unary       -> blackdiamond
    ?atom: "true"           -> top
        | "false"           -> bottom
        | VAR               -> var
        | "(" iff ")"
    VAR: /[a-z][a-z0-9_]*/

    %import common.WS
    %ignore WS
"""


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Builds the formula AST bottom-up from the parse tree."""

    def var(self, token):
        return Var(str(token))

    def top(self):
        return Top()

    def bottom(self):
        return Bottom()

    def not_op(self, operand):
        return Not(operand)

    def box(self, operand):
        return Box(operand)

    def diamond(self, operand):
        return Diamond(operand)

    def bullet(self, operand):
        return Bullet(operand)

    def blackbox(self, operand):
        return BlackBox(operand)

    def blackdiamond(self, operand):
        return BlackDiamond(operand)

    def and_op(self, left, right):
        return And(left, right)

    def or_op(self, left, right):
        return Or(left, right)

    def implies(self, left, right):
        return Implies(left, right)

    def iff_op(self, left, right):
        return Iff(left, right)


_parser = Lark(FORMULA_GRAMMAR, parser="lalr", transformer=FormulaBuilder())


def parse(text: str) -> Formula:
    """
    Parse a formula written in the ASCII syntax.

    Args:
        text: Formula text

    Returns:
        The formula AST, abbreviations kept as written

    Raises:
        FormulaSyntaxError: the text does not follow the grammar
    """
    try:
        return _parser.parse(text)
    except UnexpectedInput as e:
        position = getattr(e, "pos_in_stream", None)
        if position is None or position < 0:
            position = len(text)
        raise FormulaSyntaxError(f"cannot parse formula {text!r}", position) from e


def parse_schema_id(text: str) -> str:
    """
    Raises:
        InputError: unknown schema
    """
    schema_id = SCHEMA_ALIASES.get(text, text)
    if schema_id not in SCHEMAS:
        raise InputError(
            f"unknown schema {text!r}, expected one of {', '.join(sorted(SCHEMAS))}"
        )
    return schema_id


Model = Union[GTFModel, GTNModel, GTFFModel, SGTModel]


@dataclass(frozen=True)
class LoadedModel:
    kind: str
    model: Model
    name: Optional[str] = None


def load_json(path: Union[str, Path]) -> Any:
    """
    Raises:
        ModelFileError: the file cannot be read or is not JSON
    """
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise ModelFileError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ModelFileError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})") from e


def _expect(value: Any, kind: type, what: str) -> Any:
    if not isinstance(value, kind):
        raise ModelFileError(f"{what} must be a {kind.__name__}")
    return value


def _world_names(value: Any) -> List[str]:
    names = _expect(value, list, "worlds")
    if not names:
        raise ModelFileError("worlds must not be empty")
    if not all(isinstance(name, str) for name in names):
        raise ModelFileError("world names must be strings")
    if len(set(names)) != len(names):
        raise ModelFileError("world names must be unique")
    return names


class _Universe:
    """Resolves world names of one model file."""

    def __init__(self, worlds: Sequence[str]):
        self.worlds = tuple(worlds)
        self.index = {name: i for i, name in enumerate(worlds)}

    def world(self, name: Any, what: str) -> int:
        if name not in self.index:
            raise ModelFileError(f"{what} names undeclared world {name!r}")
        return self.index[name]

    def world_set(self, value: Any, what: str) -> WorldSet:
        members = _expect(value, list, what)
        return WorldSet.of((self.world(n, what) for n in members), len(self.worlds))

    def family(self, value: Any, what: str) -> List[WorldSet]:
        return [self.world_set(member, what) for member in _expect(value, list, what)]

    def families(self, value: Any, what: str) -> Dict[int, List[WorldSet]]:
        table = _expect(value, dict, what)
        return {
            self.world(name, what): self.family(family, f"{what}[{name}]")
            for name, family in table.items()
        }

    def valuation(self, value: Any) -> Dict[str, WorldSet]:
        table = _expect(value if value is not None else {}, dict, "valuation")
        return {
            str(name): self.world_set(members, f"valuation[{name}]")
            for name, members in table.items()
        }


def topology_from_dict(data: Any) -> GenTopology:
    """
    Raises:
        ModelFileError: wrong shape or undeclared worlds
        InvalidModelError: the opens are not closed under unions
    """
    data = _expect(data, dict, "topology")
    universe = _Universe(_world_names(data.get("worlds")))
    opens = universe.family(data.get("opens", []), "opens")
    opens.append(WorldSet.empty(len(universe.worlds)))
    return GenTopology.build(len(universe.worlds), opens, universe.worlds)


def model_from_dict(data: Any) -> LoadedModel:
    """
    Build a model from the JSON document of a model file.

    Raises:
        ModelFileError: unknown kind, wrong shape or undeclared worlds
        InvalidModelError: the topology is not a generalized topology
    """
    data = _expect(data, dict, "model file")
    kind = data.get("kind")
    if kind not in MODEL_KINDS:
        raise ModelFileError(f"unknown model kind {kind!r}")
    name = data.get("name")

    if kind == "gtn":
        universe = _Universe(_world_names(data.get("worlds")))
        model: Model = GTNModel.build(
            universe.worlds,
            universe.families(data.get("N", {}), "N"),
            universe.valuation(data.get("valuation")),
        )
        if model.closure_added:
            logging.info("Neighbourhoods were closed under supersets")
        return LoadedModel(kind, model, name)

    topology = topology_from_dict(data.get("topology"))
    universe = _Universe(topology.worlds)
    valuation = universe.valuation(data.get("valuation"))
    if kind == "gtf":
        model = GTFModel.build(topology, universe.families(data.get("F", {}), "F"), valuation)
    elif kind == "sgt":
        model = SGTModel.build(topology, valuation)
    else:
        y1 = universe.world_set(data.get("Y1", []), "Y1")
        y2 = universe.world_set(data["Y2"], "Y2") if "Y2" in data else None
        link = {
            universe.world(source, "f"): universe.world(target, "f")
            for source, target in _expect(data.get("f", {}), dict, "f").items()
        }
        model = GTFFModel.build(
            topology,
            y1,
            link,
            universe.families(data.get("N", {}), "N"),
            valuation,
            y2,
        )
    return LoadedModel(kind, model, name)


def load_model_file(path: Union[str, Path]) -> LoadedModel:
    loaded = model_from_dict(load_json(path))
    logging.debug(f"Loaded {loaded.kind} model with {loaded.model.size} worlds from {path}")
    return loaded


def relation_pairs(data: Any) -> List[List[str]]:
    """
    Raises:
        ModelFileError: not a list of name pairs
    """
    pairs = _expect(data, list, "relation")
    for pair in pairs:
        if not isinstance(pair, list) or len(pair) != 2:
            raise ModelFileError("relation entries must be pairs of world names")
    return pairs


def map_table(data: Any) -> Mapping[str, str]:
    return _expect(data, dict, "map")


def parse_variables(text: str) -> List[str]:
    """Comma-separated variable names."""
    names = [name.strip() for name in text.split(",") if name.strip()]
    if not names:
        raise InputError("at least one variable is needed")
    for name in names:
        if not isinstance(parse(name), Var):
            raise InputError(f"{name!r} is not a variable name")
    return names
