"""
Generalized topo-bisimulations of kinds 0, 1 and 2 between GTF-models.

Kind 0 matches open neighbourhoods, kind 1 matches members of the F families
and kind 2 matches the inverses of those members. Every kind checks atomic
harmony and a forth and a back condition at each related pair.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .config import DEFAULT_MAX_NODES, DEFAULT_VARS
from .exceptions import InputError, PreconditionError
from .formulas import LANGUAGES, enumerate_formulas
from .gtf import GTFModel, is_consistent
from .reports import ValidationReport, Violation
from .topology import WorldSet
from .utils.bits import iter_bits

BISIMULATION_KINDS = (0, 1, 2)

# Modal language preserved by each kind on the models its theorem assumes
KIND_LANGUAGES = {0: "box", 1: "box", 2: "bullet"}


@dataclass(frozen=True)
class WorldRelation:
    """Pairs of (left world index, right world index)."""

    pairs: FrozenSet[Tuple[int, int]]

    @classmethod
    def of(cls, pairs: Iterable[Tuple[int, int]]) -> "WorldRelation":
        return cls(frozenset(pairs))

    @classmethod
    def identity(cls, size: int) -> "WorldRelation":
        return cls(frozenset((w, w) for w in range(size)))

    @classmethod
    def from_names(
        cls, m1: GTFModel, m2: GTFModel, pairs: Iterable[Sequence[str]]
    ) -> "WorldRelation":
        """
        Raises:
            InputError: a pair is malformed or names an unknown world
        """
        left = {name: i for i, name in enumerate(m1.worlds)}
        right = {name: i for i, name in enumerate(m2.worlds)}
        found = set()
        for pair in pairs:
            if len(pair) != 2 or pair[0] not in left or pair[1] not in right:
                raise InputError(f"invalid relation pair {pair!r}")
            found.add((left[pair[0]], right[pair[1]]))
        return cls(frozenset(found))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def to_names(self, m1: GTFModel, m2: GTFModel) -> List[List[str]]:
        return [[m1.worlds[w], m2.worlds[v]] for w, v in self]


@dataclass(frozen=True)
class ModelMap:
    """A total function between the worlds of two frames, by index."""

    images: Tuple[int, ...]

    @classmethod
    def from_names(
        cls, m1: GTFModel, m2: GTFModel, mapping: Mapping[str, str]
    ) -> "ModelMap":
        """
        Raises:
            InputError: the map is not total or names an unknown world
        """
        right = {name: i for i, name in enumerate(m2.worlds)}
        images = []
        for name in m1.worlds:
            target = mapping.get(name)
            if target not in right:
                raise InputError(f"map sends {name} to unknown world {target!r}")
            images.append(right[target])
        if set(mapping) - set(m1.worlds):
            raise InputError("map names worlds outside the left frame")
        return cls(tuple(images))

    def image(self, bits: int) -> int:
        result = 0
        for w in iter_bits(bits):
            result |= 1 << self.images[w]
        return result

    def preimage(self, bits: int) -> int:
        result = 0
        for w, target in enumerate(self.images):
            if bits >> target & 1:
                result |= 1 << w
        return result

    def graph(self) -> WorldRelation:
        return WorldRelation.of(enumerate(self.images))


def _regions(kind: int, m: GTFModel, w: int) -> Tuple[List[int], List[int]]:
    """
    Sets that trigger a condition at `w` and sets that may answer one.
    """
    if kind == 0:
        opens = [x for x in m.topology.open_bits() if x >> w & 1]
        return opens, opens
    family = [x.bits for x in m.families[w]]
    if kind == 2:
        return (
            [m.inverse_bits(x) for x in family if x],
            [m.inverse_bits(x) for x in family],
        )
    return [x for x in family if x], family


def _check_kind(kind: int) -> None:
    if kind not in BISIMULATION_KINDS:
        raise InputError(f"unknown bisimulation kind {kind}")


def _atoms(m1: GTFModel, m2: GTFModel) -> Tuple[str, ...]:
    return tuple(sorted(set(m1.valuation) | set(m2.valuation)))


def _harmony(m1: GTFModel, m2: GTFModel, w: int, v: int) -> Optional[str]:
    for name in _atoms(m1, m2):
        left = w in m1.valuation.get(name, WorldSet.empty(m1.size))
        right = v in m2.valuation.get(name, WorldSet.empty(m2.size))
        if left != right:
            return name
    return None


class _Matcher:
    """Forth and back checks against a fixed relation."""

    def __init__(self, kind: int, m1: GTFModel, m2: GTFModel, pairs: Iterable[Tuple[int, int]]):
        self.kind = kind
        self.m1, self.m2 = m1, m2
        self.successors = [0] * m1.size
        self.predecessors = [0] * m2.size
        for w, v in pairs:
            self.successors[w] |= 1 << v
            self.predecessors[v] |= 1 << w

    def _image(self, bits: int) -> int:
        result = 0
        for w in iter_bits(bits):
            result |= self.successors[w]
        return result

    def _preimage(self, bits: int) -> int:
        result = 0
        for v in iter_bits(bits):
            result |= self.predecessors[v]
        return result

    def forth(self, w: int, v: int) -> Optional[int]:
        """The first left region with no answer on the right, if any."""
        triggers, _ = _regions(self.kind, self.m1, w)
        _, answers = _regions(self.kind, self.m2, v)
        for region in triggers:
            reached = self._image(region)
            if not any(answer & ~reached == 0 for answer in answers):
                return region
        return None

    def back(self, w: int, v: int) -> Optional[int]:
        """The first right region with no answer on the left, if any."""
        triggers, _ = _regions(self.kind, self.m2, v)
        _, answers = _regions(self.kind, self.m1, w)
        for region in triggers:
            reached = self._preimage(region)
            if not any(answer & ~reached == 0 for answer in answers):
                return region
        return None


def _check_indices(m1: GTFModel, m2: GTFModel, rel: WorldRelation) -> None:
    for w, v in rel.pairs:
        if not (0 <= w < m1.size and 0 <= v < m2.size):
            raise InputError(f"relation pair ({w}, {v}) is out of range")


def is_bisimulation(
    kind: int, m1: GTFModel, m2: GTFModel, rel: WorldRelation
) -> ValidationReport:
    """
    Check a relation against the conditions of a kind-`kind` bisimulation.

    Kind 0 answers an open containing w with an open containing w'. The back
    condition of kind 2 answers with a member of the left family of w.

    Args:
        kind: 0, 1 or 2
        m1: Left model
        m2: Right model
        rel: Candidate relation

    Returns:
        Report with `nonempty`, `atoms`, `forth` and `back` violations

    Raises:
        InputError: unknown kind or a pair out of range
    """
    _check_kind(kind)
    _check_indices(m1, m2, rel)
    if not rel.pairs:
        return ValidationReport.of([Violation("nonempty", "the relation is empty")])
    matcher = _Matcher(kind, m1, m2, rel.pairs)
    left_names, right_names = m1.worlds, m2.worlds
    violations = []
    for w, v in rel:
        pair = f"({left_names[w]},{right_names[v]})"
        atom = _harmony(m1, m2, w, v)
        if atom is not None:
            violations.append(Violation("atoms", f"{pair} disagree on {atom}"))
        region = matcher.forth(w, v)
        if region is not None:
            violations.append(
                Violation(
                    "forth",
                    f"{pair}: {WorldSet(region, m1.size).describe(left_names)} has no answer",
                )
            )
        region = matcher.back(w, v)
        if region is not None:
            violations.append(
                Violation(
                    "back",
                    f"{pair}: {WorldSet(region, m2.size).describe(right_names)} has no answer",
                )
            )
    return ValidationReport.of(violations)


def refine(
    kind: int, m1: GTFModel, m2: GTFModel, pairs: Iterable[Tuple[int, int]]
) -> FrozenSet[Tuple[int, int]]:
    """Remove pairs violating forth or back until nothing changes."""
    current = set(pairs)
    while True:
        matcher = _Matcher(kind, m1, m2, current)
        kept = {
            (w, v)
            for w, v in current
            if matcher.forth(w, v) is None and matcher.back(w, v) is None
        }
        if kept == current:
            return frozenset(kept)
        current = kept


def largest_bisimulation(
    kind: int, m1: GTFModel, m2: GTFModel
) -> Optional[WorldRelation]:
    """
    Greatest fixpoint of the forth and back conditions, starting from every
    pair in atomic harmony.

    Returns:
        The largest bisimulation, or None when it is empty
    """
    _check_kind(kind)
    start = [
        (w, v)
        for w in range(m1.size)
        for v in range(m2.size)
        if _harmony(m1, m2, w, v) is None
    ]
    pairs = refine(kind, m1, m2, start)
    logging.debug(
        f"Largest {kind}-bisimulation kept {len(pairs)} of {len(start)} pairs"
    )
    if not pairs:
        return None
    return WorldRelation(pairs)


@dataclass(frozen=True)
class MapProperties:
    continuous: bool
    open: bool
    F_continuous: bool
    F_open: bool

    def to_dict(self) -> Dict[str, bool]:
        return {
            "continuous": self.continuous,
            "open": self.open,
            "F_continuous": self.F_continuous,
            "F_open": self.F_open,
        }


def map_properties(f: ModelMap, frame1: GTFModel, frame2: GTFModel) -> MapProperties:
    """Continuity and openness of `f`, globally and per world through F."""
    if len(f.images) != frame1.size or any(
        not 0 <= v < frame2.size for v in f.images
    ):
        raise InputError("map does not fit the frames")
    left_opens = set(frame1.topology.open_bits())
    right_opens = set(frame2.topology.open_bits())
    continuous = all(f.preimage(g) in left_opens for g in right_opens)
    is_open = all(f.image(g) in right_opens for g in left_opens)

    f_continuous = True
    f_open = True
    for w, v in enumerate(f.images):
        left_family = {x.bits for x in frame1.families[w]}
        right_family = {x.bits for x in frame2.families[v]}
        if any(f.preimage(g) not in left_family for g in right_family):
            f_continuous = False
        if any(f.image(g) not in right_family for g in left_family):
            f_open = False
    return MapProperties(continuous, is_open, f_continuous, f_open)


def bisim_from_map(
    kind: int, f: ModelMap, frame1: GTFModel, m2: GTFModel
) -> Tuple[GTFModel, WorldRelation]:
    """
    Pull the valuation of `m2` back along `f` and return the graph of `f`.

    Args:
        kind: 0 needs a continuous and open map, 1 an F-continuous and F-open one
        f: The map
        frame1: Left frame; its valuation is replaced
        m2: Right model

    Returns:
        The left model with the pulled-back valuation and the graph of `f`

    Raises:
        PreconditionError: the map lacks a required property
    """
    if kind not in (0, 1):
        raise InputError(f"maps induce bisimulations of kind 0 or 1, not {kind}")
    properties = map_properties(f, frame1, m2)
    required = ("continuous", "open") if kind == 0 else ("F_continuous", "F_open")
    missing = [name for name in required if not getattr(properties, name)]
    if missing:
        raise PreconditionError(f"map is not {' and '.join(missing)}")
    valuation = {
        name: WorldSet(f.preimage(world_set.bits), frame1.size)
        for name, world_set in m2.valuation.items()
    }
    return frame1.with_valuation(valuation), f.graph()


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    formulas: int
    formula: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "formulas": self.formulas,
            "formula": self.formula,
        }


def modal_equivalence(
    m1: GTFModel,
    w: int,
    m2: GTFModel,
    v: int,
    variables: Sequence[str] = DEFAULT_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
    language: str = "box",
) -> EquivalenceReport:
    """
    Compare two worlds on every formula of the language up to `max_nodes`.

    Returns:
        The first distinguishing formula, or equivalence up to the bound
    """
    left, right = m1.truth_table(), m2.truth_table()
    count = 0
    for formula in enumerate_formulas(variables, max_nodes, LANGUAGES[language]):
        count += 1
        if left.forces(w, formula) != right.forces(v, formula):
            return EquivalenceReport(False, count, str(formula))
    return EquivalenceReport(True, count)


@dataclass
class BisimulationReport:
    """What the command line prints for one bisimulation run."""

    kind: int
    relation: Optional[WorldRelation]
    validation: ValidationReport
    equivalence: Dict[Tuple[int, int], EquivalenceReport] = field(default_factory=dict)
    skipped: List[Tuple[int, int]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (
            self.relation is not None
            and self.validation.valid
            and all(r.equivalent for r in self.equivalence.values())
        )


def bisimulation_report(
    kind: int,
    m1: GTFModel,
    m2: GTFModel,
    rel: Optional[WorldRelation] = None,
    equiv: bool = False,
    variables: Sequence[str] = DEFAULT_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> BisimulationReport:
    """
    Check `rel`, or compute the largest bisimulation when it is None, then
    optionally compare every related pair on the language the kind preserves.

    Kind 0 pairs outside the unions of opens are skipped; kinds 1 and 2 on
    inconsistent models raise a warning, since equivalence is only
    guaranteed between consistent models.
    """
    if rel is None:
        rel = largest_bisimulation(kind, m1, m2)
        validation = (
            ValidationReport()
            if rel is not None
            else ValidationReport.of([Violation("nonempty", "no bisimulation exists")])
        )
    else:
        validation = is_bisimulation(kind, m1, m2, rel)
    report = BisimulationReport(kind, rel, validation)
    if not equiv or rel is None:
        return report

    if kind in (1, 2) and not (is_consistent(m1) and is_consistent(m2)):
        message = (
            f"equivalence for kind {kind} needs consistent models: "
            "some family contains the empty set"
        )
        logging.warning(message)
        report.warnings.append(message)
    for w, v in rel:
        if kind == 0 and not (w in m1.topology.union and v in m2.topology.union):
            report.skipped.append((w, v))
            continue
        report.equivalence[(w, v)] = modal_equivalence(
            m1, w, m2, v, variables, max_nodes, KIND_LANGUAGES[kind]
        )
    return report
