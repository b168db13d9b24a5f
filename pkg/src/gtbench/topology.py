"""
Finite generalized topologies: world sets, validation, union closure,
interior and closure operators, density notions and the example spaces.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .config import WORLD_PREFIX
from .exceptions import (
    InvalidModelError,
    UniverseMismatchError,
    UnknownExampleError,
)
from .reports import ValidationReport, Violation
from .utils.bits import full_mask, iter_bits, popcount, submasks


@dataclass(frozen=True)
class WorldSet:
    """
    A set of worlds stored as a bit-vector over a universe of fixed size.

    World `i` belongs to the set when bit `i` of `bits` is set.
    """

    bits: int
    size: int

    def __post_init__(self):
        if self.size < 0 or self.bits < 0:
            raise UniverseMismatchError(
                f"invalid world set bits={self.bits} size={self.size}"
            )
        if self.bits >> self.size:
            raise UniverseMismatchError(
                f"world set {self.bits:b} does not fit a universe of {self.size} worlds"
            )

    @classmethod
    def empty(cls, size: int) -> "WorldSet":
        return cls(0, size)

    @classmethod
    def full(cls, size: int) -> "WorldSet":
        return cls(full_mask(size), size)

    @classmethod
    def of(cls, indices: Iterable[int], size: int) -> "WorldSet":
        bits = 0
        for index in indices:
            if not 0 <= index < size:
                raise UniverseMismatchError(
                    f"world index {index} outside a universe of {size} worlds"
                )
            bits |= 1 << index
        return cls(bits, size)

    def check_universe(self, other: "WorldSet") -> None:
        if self.size != other.size:
            raise UniverseMismatchError(
                f"cannot combine sets over {self.size} and {other.size} worlds"
            )

    def __or__(self, other: "WorldSet") -> "WorldSet":
        self.check_universe(other)
        return WorldSet(self.bits | other.bits, self.size)

    def __and__(self, other: "WorldSet") -> "WorldSet":
        self.check_universe(other)
        return WorldSet(self.bits & other.bits, self.size)

    def __sub__(self, other: "WorldSet") -> "WorldSet":
        self.check_universe(other)
        return WorldSet(self.bits & ~other.bits, self.size)

    def __le__(self, other: "WorldSet") -> bool:
        self.check_universe(other)
        return self.bits & ~other.bits == 0

    def __ge__(self, other: "WorldSet") -> bool:
        return other <= self

    def __contains__(self, index: object) -> bool:
        return isinstance(index, int) and 0 <= index < self.size and bool(
            self.bits >> index & 1
        )

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def complement(self) -> "WorldSet":
        return WorldSet(full_mask(self.size) & ~self.bits, self.size)

    def isdisjoint(self, other: "WorldSet") -> bool:
        self.check_universe(other)
        return self.bits & other.bits == 0

    def sort_key(self) -> Tuple[int, int]:
        """Canonical order: by cardinality, then by bit pattern."""
        return (len(self), self.bits)

    def describe(self, worlds: Optional[Sequence[str]] = None) -> str:
        names = worlds if worlds is not None else default_world_names(self.size)
        return "{" + ",".join(names[i] for i in self) + "}"

    def __repr__(self) -> str:
        return f"WorldSet({self.describe()})"


def default_world_names(size: int) -> Tuple[str, ...]:
    """World names used when a universe is given only by its size."""
    return tuple(f"{WORLD_PREFIX}{i}" for i in range(size))


def all_subsets(of: WorldSet) -> Iterator[WorldSet]:
    """Every subset of `of`, smallest bit pattern first."""
    for bits in submasks(of.bits):
        yield WorldSet(bits, of.size)


def canonical_family(family: Iterable[WorldSet]) -> Tuple[WorldSet, ...]:
    """Deduplicate and sort a family of sets by (cardinality, bit pattern)."""
    return tuple(sorted(set(family), key=WorldSet.sort_key))


@dataclass(frozen=True)
class GenTopology:
    """
    A generalized topology: a family of world sets containing the empty set
    and closed under unions. The full universe does not need to be open.

    Build instances with `GenTopology.build`, which validates the family.
    """

    worlds: Tuple[str, ...]
    opens: Tuple[WorldSet, ...]

    @classmethod
    def build(
        cls,
        size: int,
        family: Iterable[WorldSet],
        worlds: Optional[Sequence[str]] = None,
    ) -> "GenTopology":
        """
        Validate a family and wrap it as a topology.

        Raises:
            UniverseMismatchError: a set does not fit the universe
            InvalidModelError: the family is not a generalized topology
        """
        family = list(family)
        report = validate_topology(size, family)
        if not report.valid:
            raise InvalidModelError("generalized topology", report)
        names = tuple(worlds) if worlds is not None else default_world_names(size)
        if len(names) != size:
            raise UniverseMismatchError(
                f"{len(names)} world names given for a universe of {size} worlds"
            )
        return cls(names, canonical_family(family))

    @property
    def size(self) -> int:
        return len(self.worlds)

    @cached_property
    def union(self) -> WorldSet:
        """The union of all open sets."""
        bits = 0
        for open_set in self.opens:
            bits |= open_set.bits
        return WorldSet(bits, self.size)

    @property
    def universe(self) -> WorldSet:
        return WorldSet.full(self.size)

    @property
    def orphans(self) -> WorldSet:
        """Worlds that belong to no open set."""
        return self.union.complement()

    def is_open(self, x: WorldSet) -> bool:
        return x in self.opens

    def __contains__(self, x: object) -> bool:
        return x in self.opens

    def __iter__(self) -> Iterator[WorldSet]:
        return iter(self.opens)

    def __len__(self) -> int:
        return len(self.opens)

    def world_set(self, names: Iterable[str]) -> WorldSet:
        index = {name: i for i, name in enumerate(self.worlds)}
        return WorldSet.of((index[name] for name in names), self.size)

    def describe(self, x: WorldSet) -> str:
        return x.describe(self.worlds)

    def open_bits(self) -> Tuple[int, ...]:
        return self._open_bits

    @cached_property
    def _open_bits(self) -> Tuple[int, ...]:
        return tuple(open_set.bits for open_set in self.opens)


def validate_topology(size: int, family: Iterable[WorldSet]) -> ValidationReport:
    """
    Check the generalized topology conditions on a finite family.

    For finite families, membership of the empty set plus closure under binary
    unions is equivalent to closure under arbitrary non-empty unions.

    Args:
        size: Number of worlds in the universe
        family: Candidate open sets

    Returns:
        Report with `nonempty-universe`, `empty-set` and `union-closure` violations

    Raises:
        UniverseMismatchError: a set does not fit the universe
    """
    family = list(family)
    for member in family:
        if member.size != size:
            raise UniverseMismatchError(
                f"set over {member.size} worlds in a family over {size} worlds"
            )

    names = default_world_names(size)
    violations = []
    if size == 0:
        violations.append(Violation("nonempty-universe", "the universe has no worlds"))

    members = {member.bits for member in family}
    if 0 not in members:
        violations.append(Violation("empty-set", "∅ is not in the family"))

    ordered = sorted(members)
    for x, y in combinations(ordered, 2):
        if x | y not in members:
            violations.append(
                Violation(
                    "union-closure",
                    f"{WorldSet(x, size).describe(names)} ∪ "
                    f"{WorldSet(y, size).describe(names)} is not in the family",
                )
            )
            break

    return ValidationReport.of(violations)


def _union_closure_bits(members: Iterable[int]) -> List[int]:
    closed = set(members) | {0}
    frontier = list(closed)
    while frontier:
        added = []
        for x in frontier:
            for y in list(closed):
                union = x | y
                if union not in closed:
                    closed.add(union)
                    added.append(union)
        frontier = added
    return sorted(closed)


def close_under_unions(
    size: int, base: Iterable[WorldSet], worlds: Optional[Sequence[str]] = None
) -> GenTopology:
    """
    Smallest generalized topology containing every set of `base`.

    Args:
        size: Number of worlds in the universe
        base: Generating sets
        worlds: Optional world names

    Returns:
        The union closure of `base` together with the empty set
    """
    bits = []
    for member in base:
        if member.size != size:
            raise UniverseMismatchError(
                f"base set over {member.size} worlds for a universe of {size} worlds"
            )
        bits.append(member.bits)
    closed = _union_closure_bits(bits)
    logging.debug(f"Union closure of {len(bits)} base sets has {len(closed)} members")
    return GenTopology.build(size, (WorldSet(b, size) for b in closed), worlds)


def is_strong(t: GenTopology) -> bool:
    """A topology is strong when the full universe is open."""
    return t.universe in t.opens


def interior_bits(t: GenTopology, bits: int) -> int:
    result = 0
    for open_bits in t.open_bits():
        if open_bits & ~bits == 0:
            result |= open_bits
    return result


def interior(t: GenTopology, x: WorldSet) -> WorldSet:
    """Union of all open sets contained in `x`, the greatest open subset of `x`."""
    x.check_universe(t.universe)
    return WorldSet(interior_bits(t, x.bits), t.size)


def closure(t: GenTopology, x: WorldSet) -> WorldSet:
    """
    Dual of the interior: `W \\ Int(W \\ x)`.

    Every world outside the union of opens belongs to the closure of any set.
    """
    return interior(t, x.complement()).complement()


def is_nowhere_dense(t: GenTopology, a: WorldSet) -> bool:
    """`a` is nowhere dense when the interior of its closure is empty."""
    return not interior(t, closure(t, a))


def is_strongly_nowhere_dense(t: GenTopology, a: WorldSet) -> bool:
    """
    Every non-empty open G contains a non-empty open H disjoint from `a`.
    """
    a.check_universe(t.universe)
    nonempty = [bits for bits in t.open_bits() if bits]
    for g in nonempty:
        if not any(h & ~g == 0 and h & a.bits == 0 for h in nonempty):
            return False
    return True


def enumerate_topologies(
    size: int, worlds: Optional[Sequence[str]] = None
) -> Iterator[GenTopology]:
    """
    Every generalized topology on a universe of `size` worlds.

    Families are visited in increasing order of their membership bit-vector
    over the non-empty subsets, so the order is deterministic.
    """
    subsets = list(range(1, 1 << size))
    names = tuple(worlds) if worlds is not None else default_world_names(size)
    for selector in range(1 << len(subsets)):
        members = {subsets[i] for i in iter_bits(selector)}
        if all(x | y in members for x, y in combinations(members, 2)):
            opens = [WorldSet(0, size)] + [WorldSet(b, size) for b in members]
            yield GenTopology(names, canonical_family(opens))


def find_density_witness(
    max_size: int,
) -> Optional[Tuple[GenTopology, WorldSet]]:
    """
    Search small universes for a set that is nowhere dense but not strongly so.

    Returns:
        The first (topology, set) pair found, or None
    """
    for size in range(1, max_size + 1):
        for t in enumerate_topologies(size):
            for a in all_subsets(t.universe):
                if is_nowhere_dense(t, a) and not is_strongly_nowhere_dense(t, a):
                    logging.debug(
                        f"Density witness on {size} worlds: {t.describe(a)}"
                    )
                    return t, a
    return None


def example_space(example_id: str, **params) -> GenTopology:
    """
    Finite versions of the standard example spaces.

    Args:
        example_id: One of "ex1", "ex2", "ex4", "ex5"
        params: For "ex4", `worlds` (names) and `forbidden` (names of the set X);
                for "ex5", `length` (chain length) and optional `extra` worlds
                outside the chain

    Returns:
        The example topology

    Raises:
        UnknownExampleError: unknown id or invalid parameters
    """
    if example_id == "ex1":
        t = _from_names(("a", "b", "c"), [[], ["a"], ["b"], ["a", "b"]])
    elif example_id == "ex2":
        t = _from_names(
            ("a", "b", "c"),
            [[], ["a"], ["c"], ["a", "b"], ["a", "c"], ["b", "c"], ["a", "b", "c"]],
        )
    elif example_id == "ex4":
        t = _forbidden_space(params.get("worlds", ("a", "b", "c")), params.get("forbidden"))
    elif example_id == "ex5":
        t = _chain_space(params.get("length"), params.get("extra", 0))
    else:
        raise UnknownExampleError(f"unknown example space: {example_id}")
    logging.debug(f"Example space {example_id} has {len(t)} open sets")
    return t


def _from_names(worlds: Sequence[str], family: Iterable[Iterable[str]]) -> GenTopology:
    index: Dict[str, int] = {name: i for i, name in enumerate(worlds)}
    sets = [WorldSet.of((index[n] for n in member), len(worlds)) for member in family]
    return GenTopology.build(len(worlds), sets, worlds)


def _forbidden_space(worlds: Sequence[str], forbidden: Optional[Sequence[str]]) -> GenTopology:
    worlds = tuple(worlds)
    if not worlds or len(set(worlds)) != len(worlds):
        raise UnknownExampleError("ex4 needs distinct world names")
    if not forbidden or not set(forbidden) <= set(worlds):
        raise UnknownExampleError("ex4 needs a non-empty forbidden set of declared worlds")
    allowed = [i for i, name in enumerate(worlds) if name not in set(forbidden)]
    allowed_bits = WorldSet.of(allowed, len(worlds))
    return GenTopology.build(len(worlds), all_subsets(allowed_bits), worlds)


def _chain_space(length: Optional[int], extra: int) -> GenTopology:
    if not isinstance(length, int) or length < 1 or extra < 0:
        raise UnknownExampleError("ex5 needs a positive chain length")
    size = length + extra
    chain = [WorldSet(full_mask(k), size) for k in range(length + 1)]
    return GenTopology.build(size, chain)
