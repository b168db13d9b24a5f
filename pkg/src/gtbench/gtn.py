"""
GTN neighbourhood models, their forcing, the induced generalized topology and
the pointwise equivalent translations to and from GTF-models.

A model stores, per world, the ⊆-minimal neighbourhoods together with the
union of all neighbourhoods; membership of any other set is decided on demand,
since neighbourhood families are closed under supersets inside that union.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .evaluation import TruthTable, valuation_bits
from .exceptions import InvalidModelError, UniverseMismatchError
from .formulas import Box, Formula
from .gtf import GTFModel, check_valuation, minimal_neighbourhoods, validate_gtf
from .reports import ValidationReport, Violation
from .topology import GenTopology, WorldSet, canonical_family
from .utils.bits import submasks


def _minimal(family: Iterable[int]) -> Tuple[int, ...]:
    members = set(family)
    return tuple(
        sorted(
            (x for x in members if not any(y != x and y & ~x == 0 for y in members)),
            key=lambda bits: (bin(bits).count("1"), bits),
        )
    )


@dataclass(frozen=True)
class GTNModel:
    """
    A GTN-model in antichain form.

    Attributes:
        worlds: World names
        minimal: Per world, the ⊆-minimal neighbourhoods
        support: Union of all neighbourhoods
        valuation: Variable name to truth set
        closure_added: Whether building the model added supersets missing from
            the given families
    """

    worlds: Tuple[str, ...]
    minimal: Tuple[Tuple[WorldSet, ...], ...]
    support: WorldSet
    valuation: Dict[str, WorldSet] = field(default_factory=dict)
    closure_added: bool = False

    @classmethod
    def build(
        cls,
        worlds: Sequence[str],
        neighbourhoods: Mapping[int, Iterable[WorldSet]],
        valuation: Optional[Mapping[str, WorldSet]] = None,
    ) -> "GTNModel":
        """
        Close the given families under supersets within their union.

        Args:
            worlds: World names
            neighbourhoods: World index to its given neighbourhoods; missing
                worlds have none
            valuation: Variable name to truth set

        Returns:
            The model, recording whether the closure added sets
        """
        size = len(worlds)
        given: Dict[int, set] = {}
        support = 0
        for w, family in neighbourhoods.items():
            if not 0 <= w < size:
                raise UniverseMismatchError(
                    f"world index {w} outside a universe of {size} worlds"
                )
            given[w] = set()
            for member in family:
                if member.size != size:
                    raise UniverseMismatchError(
                        f"neighbourhood over {member.size} worlds, expected {size}"
                    )
                given[w].add(member.bits)
                support |= member.bits

        minimal = []
        closure_added = False
        for w in range(size):
            family = given.get(w, set())
            antichain = _minimal(family)
            minimal.append(tuple(WorldSet(x, size) for x in antichain))
            closed = sum(
                1
                for x in submasks(support)
                if any(m & ~x == 0 for m in antichain)
            )
            if closed > len(family):
                closure_added = True
        if closure_added:
            logging.debug("Neighbourhood families were closed under supersets")
        return cls(
            tuple(worlds),
            tuple(minimal),
            WorldSet(support, size),
            check_valuation(size, valuation or {}),
            closure_added,
        )

    @property
    def size(self) -> int:
        return len(self.worlds)

    def with_valuation(self, valuation: Mapping[str, WorldSet]) -> "GTNModel":
        return GTNModel(
            self.worlds,
            self.minimal,
            self.support,
            check_valuation(self.size, valuation),
            self.closure_added,
        )

    @cached_property
    def _minimal_bits(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(x.bits for x in family) for family in self.minimal)

    def members(self, w: int) -> Tuple[WorldSet, ...]:
        """Every neighbourhood of `w`, not only the minimal ones."""
        antichain = self._minimal_bits[w]
        return canonical_family(
            WorldSet(x, self.size)
            for x in submasks(self.support.bits)
            if any(m & ~x == 0 for m in antichain)
        )

    @cached_property
    def first_kind(self) -> WorldSet:
        """Worlds with neighbourhoods that belong to all of them."""
        bits = 0
        for w, antichain in enumerate(self._minimal_bits):
            if antichain and all(m >> w & 1 for m in antichain):
                bits |= 1 << w
        return WorldSet(bits, self.size)

    @property
    def second_kind(self) -> WorldSet:
        """Worlds outside every neighbourhood."""
        return self.support.complement()

    def box_bits(self, target: int) -> int:
        result = 0
        for w, antichain in enumerate(self._minimal_bits):
            if any(m & ~target == 0 for m in antichain):
                result |= 1 << w
        return result

    def truth_table(self) -> TruthTable:
        return TruthTable(
            self.size, valuation_bits(self.valuation), {Box: self.box_bits}, "gtn"
        )

    def describe(self, x: WorldSet) -> str:
        return x.describe(self.worlds)


def in_neighbourhood(m: GTNModel, w: int, x: WorldSet) -> bool:
    """Whether `x` is a neighbourhood of `w`."""
    x.check_universe(m.support)
    if not x <= m.support:
        return False
    return any(member <= x for member in m.minimal[w])


def validate_gtn(m: GTNModel) -> ValidationReport:
    """
    Check the four GTN conditions.

    Worlds of the first kind have neighbourhoods and belong to all of them;
    an empty family does not place a world in the first kind.

    Returns:
        Report with `support`, `world-split`, `superset-closure` and `core`
        violations
    """
    violations = []
    if m.support and not any(m._minimal_bits):
        violations.append(
            Violation(
                "support",
                f"{m.describe(m.support)} is given as the union of neighbourhoods "
                "but no world has one",
            )
        )

    for w, family in enumerate(m.minimal):
        for member in family:
            if not member <= m.support:
                violations.append(
                    Violation(
                        "superset-closure",
                        f"{m.describe(member)} ∈ N_{m.worlds[w]} leaves the union of neighbourhoods",
                    )
                )

    split = m.first_kind | m.second_kind
    for w in split.complement():
        violations.append(
            Violation(
                "world-split",
                f"{m.worlds[w]} is in a neighbourhood but not in each of its own neighbourhoods",
            )
        )

    first_kind = list(m.first_kind)
    for w, family in enumerate(m.minimal):
        for member in family:
            core = WorldSet.of(
                (z for z in first_kind if in_neighbourhood(m, z, member)), m.size
            )
            if not in_neighbourhood(m, w, core):
                violations.append(
                    Violation(
                        "core",
                        f"{m.describe(member)} ∈ N_{m.worlds[w]} but its core "
                        f"{m.describe(core)} is not",
                    )
                )
    return ValidationReport.of(violations)


def forces_gtn(m: GTNModel, w: int, formula: Formula) -> bool:
    return m.truth_table().forces(w, formula)


def truth_set_gtn(m: GTNModel, formula: Formula) -> WorldSet:
    return m.truth_table().truth_set(formula)


def induced_topology(m: GTNModel) -> GenTopology:
    """
    The sets inside the union of neighbourhoods that are neighbourhoods of
    each of their worlds.
    """
    opens = [
        WorldSet(x, m.size)
        for x in submasks(m.support.bits)
        if all(in_neighbourhood(m, w, WorldSet(x, m.size)) for w in WorldSet(x, m.size))
    ]
    t = GenTopology.build(m.size, opens, m.worlds)
    logging.debug(f"Induced topology has {len(t)} open sets")
    return t


def _require_valid(report: ValidationReport, what: str) -> None:
    if not report.valid:
        raise InvalidModelError(what, report)


def gtn_to_gtf(m: GTNModel) -> GTFModel:
    """
    Pointwise equivalent GTF-model on the induced topology.

    Each world keeps its open neighbourhoods as its family.

    Raises:
        InvalidModelError: the input is not a valid GTN-model
    """
    _require_valid(validate_gtn(m), "GTN-model")
    t = induced_topology(m)
    families = {
        w: [x for x in t.opens if in_neighbourhood(m, w, x)] for w in range(m.size)
    }
    result = GTFModel.build(t, families, m.valuation)
    _require_valid(validate_gtf(result), "GTF-model built from a GTN-model")
    return result


def gtf_to_gtn(m: GTFModel) -> GTNModel:
    """
    Pointwise equivalent GTN-model whose neighbourhoods are the generalized
    neighbourhoods of the GTF-model.

    Raises:
        InvalidModelError: the input is not a valid GTF-model
    """
    _require_valid(validate_gtf(m), "GTF-model")
    result = GTNModel(
        m.worlds,
        tuple(minimal_neighbourhoods(m, w) for w in range(m.size)),
        m.topology.union,
        dict(m.valuation),
        False,
    )
    _require_valid(validate_gtn(result), "GTN-model built from a GTF-model")
    return result

