"""
Strong generalized topological models, in-fact-strong GTF-models and the
translations between them.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

from .config import MAX_PARTITION_OPENS
from .evaluation import TruthTable, valuation_bits
from .exceptions import InvalidModelError, PreconditionError
from .formulas import Box
from .gtf import GTFModel, check_valuation, inverse, validate_gtf
from .reports import ValidationReport, Violation
from .topology import GenTopology, WorldSet, interior_bits, is_strong

IFS_METHODS = ("auto", "enumerate", "cover")


@dataclass(frozen=True)
class SGTModel:
    """A strong generalized topology with a valuation; □ is the interior."""

    topology: GenTopology
    valuation: Dict[str, WorldSet] = field(default_factory=dict)

    @classmethod
    def build(
        cls, topology: GenTopology, valuation: Optional[Mapping[str, WorldSet]] = None
    ) -> "SGTModel":
        return cls(topology, check_valuation(topology.size, valuation or {}))

    @property
    def size(self) -> int:
        return self.topology.size

    @property
    def worlds(self) -> Tuple[str, ...]:
        return self.topology.worlds

    def with_valuation(self, valuation: Mapping[str, WorldSet]) -> "SGTModel":
        return SGTModel(self.topology, check_valuation(self.size, valuation))

    def box_bits(self, target: int) -> int:
        return interior_bits(self.topology, target)

    def truth_table(self) -> TruthTable:
        return TruthTable(
            self.size, valuation_bits(self.valuation), {Box: self.box_bits}, "sgt"
        )


def validate_sgt(m: SGTModel) -> ValidationReport:
    if is_strong(m.topology):
        return ValidationReport()
    return ValidationReport.of(
        [Violation("strong", f"the universe {m.topology.describe(m.topology.universe)} is not open")]
    )


@dataclass(frozen=True)
class OrphanCheck:
    """The three in-fact-strong conditions at one orphaned world."""

    world: str
    superset: bool
    partition: bool
    nonempty: bool
    witness: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.superset and self.partition and self.nonempty


@dataclass(frozen=True)
class IfsCertificate:
    checks: Tuple[OrphanCheck, ...]
    method: str

    @property
    def valid(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_conditions(self) -> Tuple[str, ...]:
        failed: Dict[str, None] = {}
        for check in self.checks:
            for condition in ("superset", "partition", "nonempty"):
                if not getattr(check, condition):
                    failed.setdefault(condition)
        return tuple(failed)

    def to_report(self) -> ValidationReport:
        violations = []
        for check in self.checks:
            for condition in ("superset", "partition", "nonempty"):
                if not getattr(check, condition):
                    violations.append(
                        Violation(condition, f"{check.world}: {check.witness}")
                    )
        return ValidationReport.of(violations)


def _partition_by_enumeration(
    inside: Tuple[int, ...], in_family: Dict[int, bool], target: int
) -> Optional[Tuple[int, ...]]:
    # A decomposition fails when none of its parts belongs to F_w
    for selector in range(1, 1 << len(inside)):
        parts = tuple(x for i, x in enumerate(inside) if selector >> i & 1)
        union = 0
        for part in parts:
            union |= part
        if union == target and not any(in_family[part] for part in parts):
            return parts
    return None


def _partition_by_cover(
    inside: Tuple[int, ...], in_family: Dict[int, bool], target: int
) -> Optional[Tuple[int, ...]]:
    # The opens outside F_w form a failing decomposition iff they cover target
    outside = tuple(x for x in inside if not in_family[x])
    union = 0
    for x in outside:
        union |= x
    if outside and union == target:
        return outside
    return None


def validate_ifs(m: GTFModel, method: str = "auto") -> IfsCertificate:
    """
    Check the in-fact-strong conditions at every orphaned world.

    1. Superset: an open containing a member of F_w belongs to F_w.
    2. Union partition: however a member of F_w is written as a union of
       opens, one of the parts belongs to F_w.
    3. F_w is not empty.

    Args:
        m: A valid GTF-model
        method: "enumerate" walks every subfamily of opens inside each member,
            "cover" uses the equivalent single cover test, "auto" enumerates
            while the topology has at most MAX_PARTITION_OPENS opens

    Returns:
        Per-orphan certificate
    """
    if method not in IFS_METHODS:
        raise ValueError(f"unknown method {method}")
    t = m.topology
    if method == "auto":
        method = "enumerate" if len(t) <= MAX_PARTITION_OPENS else "cover"
    decompose = _partition_by_enumeration if method == "enumerate" else _partition_by_cover

    checks = []
    for w in t.orphans:
        family = {x.bits for x in m.families[w]}
        in_family = {x: x in family for x in t.open_bits()}
        witness = None
        superset = True
        for x in sorted(family):
            bigger = [y for y in t.open_bits() if x & ~y == 0 and y not in family]
            if bigger:
                superset = False
                witness = (
                    f"{t.describe(WorldSet(bigger[0], t.size))} contains "
                    f"{t.describe(WorldSet(x, t.size))} but is not in F"
                )
                break
        partition = True
        for target in sorted(family):
            inside = tuple(y for y in t.open_bits() if y & ~target == 0)
            parts = decompose(inside, in_family, target)
            if parts is not None:
                partition = False
                witness = witness or (
                    f"{t.describe(WorldSet(target, t.size))} = ∪ of "
                    + ", ".join(t.describe(WorldSet(p, t.size)) for p in parts)
                    + " with no part in F"
                )
                break
        nonempty = bool(family)
        if not nonempty:
            witness = witness or "F is empty"
        checks.append(OrphanCheck(t.worlds[w], superset, partition, nonempty, witness))
    return IfsCertificate(tuple(checks), method)


def ifs_to_strong(m: GTFModel, method: str = "auto") -> SGTModel:
    """
    Strong model whose □ agrees with the bullet modality of `m`.

    The opens are ∅ together with the inverses of the opens of `m`.

    Raises:
        InvalidModelError: `m` is not a valid GTF-model
        PreconditionError: `m` is not in-fact-strong
    """
    report = validate_gtf(m)
    if not report.valid:
        raise InvalidModelError("GTF-model", report)
    certificate = validate_ifs(m, method)
    if not certificate.valid:
        raise PreconditionError(
            "model is not in-fact-strong, failed conditions: "
            + ", ".join(certificate.failed_conditions)
        )
    inverses = {inverse(m, x) for x in m.topology.opens}
    inverses.add(WorldSet.empty(m.size))
    tau = GenTopology.build(m.size, inverses, m.worlds)
    if not is_strong(tau):
        raise InvalidModelError(
            "translation", validate_sgt(SGTModel(tau, dict(m.valuation)))
        )
    logging.debug(f"Strong translation has {len(tau)} open sets")
    return SGTModel(tau, dict(m.valuation))


def strong_to_ifs(m: SGTModel) -> GTFModel:
    """
    GTF-model over the same strong topology; every world has the opens
    containing it, and no world is orphaned.

    Raises:
        PreconditionError: the topology is not strong
    """
    if not is_strong(m.topology):
        raise PreconditionError("topology is not strong: the universe is not open")
    return GTFModel.build(m.topology, {}, m.valuation)
