"""
GTF-models: a generalized topology, a family F_w of opens per world and a
valuation. Forcing for the box, its dual and the bullet modality, the inverse
operator, generalized neighbourhoods and the regularity checks.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .config import DEFAULT_MAX_NODES, DEFAULT_VARS
from .evaluation import TruthTable, valuation_bits
from .exceptions import NotOpenError, UniverseMismatchError
from .formulas import Box, Bullet, Formula, enumerate_formulas, in_mod_fragment
from .reports import ValidationReport, Violation
from .topology import GenTopology, WorldSet, canonical_family
from .utils.bits import iter_bits, submasks


def check_valuation(size: int, valuation: Mapping[str, WorldSet]) -> Dict[str, WorldSet]:
    """
    Copy a valuation after checking that every set fits the universe.

    Raises:
        UniverseMismatchError: a truth set is over another universe
    """
    checked = {}
    for name, world_set in sorted(valuation.items()):
        if world_set.size != size:
            raise UniverseMismatchError(
                f"valuation of {name} is over {world_set.size} worlds, expected {size}"
            )
        checked[name] = world_set
    return checked


@dataclass(frozen=True)
class GTFModel:
    """
    A GTF-model. `families[w]` is F_w, stored in canonical order.

    Use `GTFModel.build`, which fills in the families that the topology
    determines.
    """

    topology: GenTopology
    families: Tuple[Tuple[WorldSet, ...], ...]
    valuation: Dict[str, WorldSet] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        topology: GenTopology,
        families: Optional[Mapping[int, Iterable[WorldSet]]] = None,
        valuation: Optional[Mapping[str, WorldSet]] = None,
    ) -> "GTFModel":
        """
        Assemble a model from the families given for some worlds.

        Worlds of the union of opens without an explicit family receive the
        determined one, {X ∈ μ : w ∈ X}; orphans without one receive the empty
        family. Explicit families are kept as given, so `validate_gtf` can
        report them.

        Args:
            topology: The generalized topology
            families: World index to F_w
            valuation: Variable name to truth set

        Returns:
            The model
        """
        families = dict(families or {})
        assembled = []
        for w in range(topology.size):
            if w in families:
                family = list(families[w])
                for member in family:
                    member.check_universe(topology.universe)
            elif w in topology.union:
                family = determined_family(topology, w)
            else:
                family = []
            assembled.append(canonical_family(family))
        return cls(
            topology,
            tuple(assembled),
            check_valuation(topology.size, valuation or {}),
        )

    @property
    def size(self) -> int:
        return self.topology.size

    @property
    def worlds(self) -> Tuple[str, ...]:
        return self.topology.worlds

    def family(self, w: int) -> Tuple[WorldSet, ...]:
        return self.families[w]

    def with_valuation(self, valuation: Mapping[str, WorldSet]) -> "GTFModel":
        return GTFModel(
            self.topology, self.families, check_valuation(self.size, valuation)
        )

    @cached_property
    def _family_bits(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(x.bits for x in family) for family in self.families)

    @cached_property
    def _inverse_bits(self) -> Dict[int, int]:
        inverses = {bits: 0 for bits in self.topology.open_bits()}
        for w, family in enumerate(self._family_bits):
            for bits in family:
                if bits in inverses:
                    inverses[bits] |= 1 << w
        return inverses

    def inverse_bits(self, bits: int) -> int:
        """Bit-vector of the worlds whose family holds the open `bits`."""
        return self._inverse_bits.get(bits, 0)

    def box_bits(self, target: int) -> int:
        """Worlds having a member of F_w inside `target`."""
        result = 0
        for w, family in enumerate(self._family_bits):
            if any(o & ~target == 0 for o in family):
                result |= 1 << w
        return result

    def bullet_bits(self, target: int) -> int:
        """Worlds having a member O of F_w whose inverse lies inside `target`."""
        result = 0
        inverses = self._inverse_bits
        for w, family in enumerate(self._family_bits):
            if any(inverses.get(o, 0) & ~target == 0 for o in family):
                result |= 1 << w
        return result

    def truth_table(self) -> TruthTable:
        return TruthTable(
            self.size,
            valuation_bits(self.valuation),
            {Box: self.box_bits, Bullet: self.bullet_bits},
            "gtf",
        )


def determined_family(topology: GenTopology, w: int) -> List[WorldSet]:
    """The opens containing `w`."""
    return [x for x in topology.opens if w in x]


def validate_gtf(m: GTFModel) -> ValidationReport:
    """
    Check the constraints on F.

    Worlds of the union of opens must have exactly the opens containing them;
    every other family may only hold opens.

    Args:
        m: The model to check

    Returns:
        Report with `determined-F` and `F-open` violations
    """
    t = m.topology
    violations = []
    for w, family in enumerate(m.families):
        name = t.worlds[w]
        for member in family:
            if member not in t:
                violations.append(
                    Violation("F-open", f"{t.describe(member)} ∈ F_{name} is not open")
                )
        if w not in t.union:
            continue
        expected = set(determined_family(t, w))
        given = set(family)
        for missing in canonical_family(expected - given):
            violations.append(
                Violation(
                    "determined-F",
                    f"F_{name} misses the open {t.describe(missing)} containing {name}",
                )
            )
        for extra in canonical_family(given - expected):
            if extra in t:
                violations.append(
                    Violation(
                        "determined-F",
                        f"F_{name} holds the open {t.describe(extra)} not containing {name}",
                    )
                )
    return ValidationReport.of(violations)


def inverse(m: GTFModel, a: WorldSet) -> WorldSet:
    """
    The worlds whose family contains the open `a`.

    Raises:
        NotOpenError: `a` is not open
    """
    a.check_universe(m.topology.universe)
    if a not in m.topology:
        raise NotOpenError(f"{m.topology.describe(a)} is not open")
    return WorldSet(m.inverse_bits(a.bits), m.size)


def truth_set(m: GTFModel, formula: Formula) -> WorldSet:
    return m.truth_table().truth_set(formula)


def forces(m: GTFModel, w: int, formula: Formula) -> bool:
    return m.truth_table().forces(w, formula)


def neighbourhoods(m: GTFModel, w: int) -> Tuple[WorldSet, ...]:
    """
    Generalized neighbourhoods of `w`: subsets of the union of opens that
    contain some member of F_w.
    """
    union = m.topology.union
    family = m._family_bits[w]
    found = [
        WorldSet(x, m.size)
        for x in submasks(union.bits)
        if any(o & ~x == 0 for o in family)
    ]
    return canonical_family(found)


def minimal_neighbourhoods(m: GTFModel, w: int) -> Tuple[WorldSet, ...]:
    """The ⊆-minimal members of F_w."""
    family = m.families[w]
    return tuple(
        x for x in family if not any(y != x and y <= x for y in family)
    )


def is_consistent(m: GTFModel) -> bool:
    """No family contains the empty set."""
    return all(x for family in m.families for x in family)


def check_regularities(
    m: GTFModel,
    variables: Sequence[str] = DEFAULT_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> ValidationReport:
    """
    Brute-force check of the regularities of orphaned worlds.

    1. An orphan v with ∅ ∉ F_v forces ◇φ whenever φ holds on all of ⋃μ.
    2. An orphan v with F_v ≠ ∅ forces □φ whenever φ holds on all of ⋃μ.
    3. If no family is empty, □φ holds everywhere whenever φ holds on ⋃μ.
    4. Worlds with equal families agree on boxed formulas and their
       combinations, up to `max_nodes` nodes over `variables`.

    Items 1 to 3 quantify over every truth set containing ⋃μ.

    Returns:
        Report with `regularity-1` to `regularity-4` violations
    """
    t = m.topology
    full = t.universe.bits
    union = t.union.bits
    orphans = t.orphans
    violations = []
    supersets = [union | extra for extra in submasks(orphans.bits)]

    for target in supersets:
        shown = t.describe(WorldSet(target, m.size))
        boxed = m.box_bits(target)
        # v forces ◇φ iff no member of F_v lies inside the complement of φ
        possible = full & ~m.box_bits(full & ~target)
        for v in orphans:
            name = t.worlds[v]
            if WorldSet(0, m.size) not in m.families[v] and not possible >> v & 1:
                violations.append(
                    Violation("regularity-1", f"{name} does not force ◇ of {shown}")
                )
            if m.families[v] and not boxed >> v & 1:
                violations.append(
                    Violation("regularity-2", f"{name} does not force □ of {shown}")
                )
        if all(m.families) and boxed != full:
            missing = WorldSet(full & ~boxed, m.size)
            violations.append(
                Violation(
                    "regularity-3",
                    f"□ of {shown} fails at {t.describe(missing)}",
                )
            )

    pairs = [
        (v, w)
        for v in range(m.size)
        for w in range(v + 1, m.size)
        if set(m.families[v]) == set(m.families[w])
    ]
    if pairs:
        table = m.truth_table()
        for formula in enumerate_formulas(variables, max_nodes, (Box,)):
            if not in_mod_fragment(formula):
                continue
            bits = table.bits(formula)
            for v, w in pairs:
                if (bits >> v & 1) != (bits >> w & 1):
                    violations.append(
                        Violation(
                            "regularity-4",
                            f"{t.worlds[v]} and {t.worlds[w]} share F but disagree on {formula}",
                        )
                    )
    logging.debug(f"Regularity check found {len(violations)} violations")
    return ValidationReport.of(violations)


def orphan_assignments(
    topology: GenTopology, max_family: int
) -> Iterable[Dict[int, Tuple[WorldSet, ...]]]:
    """
    Every assignment of families of at most `max_family` opens to the orphans,
    the remaining worlds keeping their determined families.
    """
    options: List[Tuple[WorldSet, ...]] = []
    for k in range(max_family + 1):
        options.extend(combinations(topology.opens, k))
    orphans = list(iter_bits(topology.orphans.bits))
    for choice in product(options, repeat=len(orphans)):
        yield dict(zip(orphans, choice))
