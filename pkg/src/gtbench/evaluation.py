"""
Memoized truth-set evaluation shared by every model kind.

Each semantics supplies its necessity operators as functions from the truth
set of the operand to the truth set of the modalized formula; the boolean
clauses and the dual possibility operators are handled here.
"""

from typing import Callable, Dict, Mapping, Protocol, Tuple

from .exceptions import UnboundMetavariableError, UnsupportedOperatorError
from .formulas import (
    And,
    BINARY,
    Bottom,
    DUALS,
    Formula,
    Iff,
    Implies,
    MetaVar,
    Not,
    Or,
    SYMBOLS,
    Top,
    Var,
)
from .topology import WorldSet
from .utils.bits import full_mask

ModalOperator = Callable[[int], int]


class TruthTable:
    """
    Truth sets of formulas in one model, memoized per subformula.

    Args:
        size: Number of worlds
        valuation: Variable name to bit-vector of worlds where it holds
        operators: Necessity operator class to its set transformer
        semantics: Model kind, used in error messages
    """

    def __init__(
        self,
        size: int,
        valuation: Mapping[str, int],
        operators: Mapping[type, ModalOperator],
        semantics: str,
    ):
        self.size = size
        self.full = full_mask(size)
        self.semantics = semantics
        self._valuation = dict(valuation)
        self._operators = dict(operators)
        self._cache: Dict[Formula, int] = {}

    def supports(self, operator: type) -> bool:
        return DUALS.get(operator, operator) in self._operators

    def bits(self, formula: Formula) -> int:
        cached = self._cache.get(formula)
        if cached is None:
            cached = self._compute(formula)
            self._cache[formula] = cached
        return cached

    def _modal(self, operator: type, operand_bits: int) -> int:
        transformer = self._operators.get(operator)
        if transformer is None:
            raise UnsupportedOperatorError(SYMBOLS[operator], self.semantics)
        return transformer(operand_bits)

    def _compute(self, f: Formula) -> int:
        if isinstance(f, Var):
            return self._valuation.get(f.name, 0)
        if isinstance(f, Bottom):
            return 0
        if isinstance(f, Top):
            return self.full
        if isinstance(f, MetaVar):
            raise UnboundMetavariableError(
                f"cannot evaluate schema metavariable {f.name}"
            )
        if isinstance(f, Not):
            return self.full & ~self.bits(f.operand)
        if isinstance(f, BINARY):
            left, right = self.bits(f.left), self.bits(f.right)
            if isinstance(f, And):
                return left & right
            if isinstance(f, Or):
                return left | right
            if isinstance(f, Implies):
                return (self.full & ~left) | right
            if isinstance(f, Iff):
                return self.full & ~(left ^ right)
        dual = DUALS.get(type(f))
        if dual is not None:
            negated = self.full & ~self.bits(f.operand)
            return self.full & ~self._modal(dual, negated)
        return self._modal(type(f), self.bits(f.operand))

    def truth_set(self, formula: Formula) -> WorldSet:
        return WorldSet(self.bits(formula), self.size)

    def forces(self, world: int, formula: Formula) -> bool:
        return bool(self.bits(formula) >> world & 1)

    def is_valid(self, formula: Formula) -> bool:
        """True at every world."""
        return self.bits(formula) == self.full


class Model(Protocol):
    """What the generic checkers need from a model."""

    @property
    def size(self) -> int: ...

    @property
    def worlds(self) -> Tuple[str, ...]: ...

    def truth_table(self) -> TruthTable: ...

    def with_valuation(self, valuation: Mapping[str, WorldSet]) -> "Model": ...


def valuation_bits(valuation: Mapping[str, WorldSet]) -> Dict[str, int]:
    return {name: world_set.bits for name, world_set in valuation.items()}
