"""M-topologies: validation, interior/closure, subspaces and bases."""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from src.mset import (
    MSet,
    MSpace,
    canonical_family,
    complement_in,
    intersection_all,
    union_all,
)
from src.utils import (
    BasisGenerationError,
    EquivalenceViolationError,
    MalformedFamilyError,
    NotASubsetError,
    SpaceMismatchError,
)

logger = logging.getLogger("msettop.topology")

UNION_REDUCTION_NOTE = (
    "arbitrary unions certified by pairwise union closure: the family is finite "
    "and union is associative and idempotent"
)


@dataclass(frozen=True)
class MTopology:
    ground: MSet
    family: tuple[MSet, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", canonical_family(self.family))

    @property
    def space(self) -> MSpace:
        return self.ground.space

    @cached_property
    def _open(self) -> frozenset[MSet]:
        return frozenset(self.family)

    @cached_property
    def closed(self) -> tuple[MSet, ...]:
        return canonical_family(complement_in(u, self.ground) for u in self.family)

    @cached_property
    def _closed(self) -> frozenset[MSet]:
        return frozenset(self.closed)

    @cached_property
    def open_closures(self) -> dict[MSet, MSet]:
        """cl(O) for every open O, computed once per topology."""
        return {o: closure(self, o) for o in self.family}

    def is_open(self, a: MSet) -> bool:
        return a in self._open

    def is_closed(self, a: MSet) -> bool:
        return a in self._closed

    def is_clopen(self, a: MSet) -> bool:
        return self.is_open(a) and self.is_closed(a)

    def __len__(self) -> int:
        return len(self.family)


@dataclass(frozen=True)
class Violation:
    axiom: str
    message: str
    witness: tuple[MSet, ...] = ()

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "message": self.message,
            "witness": [str(m) for m in self.witness],
        }


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    duplicates: int = 0
    notes: list[str] = field(default_factory=list)
    topology: MTopology | None = None

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [v.to_dict() for v in self.violations],
            "duplicates": self.duplicates,
            "notes": self.notes,
        }


def require_sub(a: MSet, ground: MSet) -> None:
    if a.space != ground.space:
        raise SpaceMismatchError(f"{a} is not in the space of {ground}")
    if not a <= ground:
        raise NotASubsetError(f"{a} is not a sub-M-set of {ground}")


def _pair_closure_violations(ground: MSet, family: tuple[MSet, ...]) -> list[Violation]:
    members = frozenset(family)
    union_gap: Violation | None = None
    meet_gap: Violation | None = None
    for i, p in enumerate(family):
        for q in family[i + 1 :]:
            if union_gap is None and (p | q) not in members:
                union_gap = Violation(
                    "union", f"union {p | q} of {p} and {q} absent", (p, q)
                )
            if meet_gap is None and (p & q) not in members:
                meet_gap = Violation(
                    "intersection", f"intersection {p & q} of {p} and {q} absent", (p, q)
                )
            if union_gap and meet_gap:
                return [union_gap, meet_gap]
    return [v for v in (union_gap, meet_gap) if v is not None]


def validate_topology(ground: MSet, family: Iterable[MSet]) -> ValidationReport:
    members = list(family)
    for m in members:
        if m.space != ground.space:
            raise SpaceMismatchError(f"{m} is not in the space of {ground}")
        if not m <= ground:
            raise MalformedFamilyError(f"member {m} is not a sub-M-set of {ground}")

    deduped = canonical_family(members)
    report = ValidationReport(duplicates=len(members) - len(deduped))
    report.notes.append(UNION_REDUCTION_NOTE)

    if ground not in deduped:
        report.violations.append(Violation("ground", "ground M-set absent", (ground,)))
    empty = ground.space.empty()
    if empty not in deduped:
        report.violations.append(Violation("empty", "empty M-set absent", (empty,)))
    report.violations.extend(_pair_closure_violations(ground, deduped))

    if report.valid:
        report.topology = MTopology(ground, deduped)
    else:
        logger.debug("family rejected: %s", [v.message for v in report.violations])
    return report


def interior(t: MTopology, a: MSet) -> MSet:
    require_sub(a, t.ground)
    return union_all((g for g in t.family if g <= a), t.space)


def closure(t: MTopology, a: MSet, cross_check: bool = False) -> MSet:
    require_sub(a, t.ground)
    result = intersection_all((k for k in t.closed if a <= k), t.ground)
    if cross_check:
        dual = complement_in(interior(t, complement_in(a, t.ground)), t.ground)
        if dual != result:
            raise EquivalenceViolationError(
                f"closure {result} differs from complement of interior {dual}", t, a
            )
    return result


def subspace(t: MTopology, n: MSet) -> MTopology:
    require_sub(n, t.ground)
    return MTopology(n, tuple(n & u for u in t.family))


@dataclass(frozen=True)
class BasisWitness:
    """The point m/x that some pair P, Q fails to refine."""

    multiplicity: int
    symbol: str
    first: MSet
    second: MSet

    def __str__(self) -> str:
        return f"{self.multiplicity}/{self.symbol} in {self.first} ∩ {self.second}"


def validate_basis(ground: MSet, basis: Iterable[MSet]) -> ValidationReport:
    members = list(basis)
    for b in members:
        require_sub(b, ground)
    deduped = canonical_family(members)
    report = ValidationReport(duplicates=len(members) - len(deduped))

    for symbol, _ in ground.items():
        if not any(b.count(symbol) > 0 for b in deduped):
            report.violations.append(
                Violation("basis-cover", f"no basis element contains {symbol}")
            )

    for i, p in enumerate(deduped):
        for q in deduped[i + 1 :]:
            meet = p & q
            for symbol, m in meet.items():
                if any(r <= meet and r.count(symbol) == m for r in deduped):
                    continue
                witness = BasisWitness(m, symbol, p, q)
                report.violations.append(
                    Violation(
                        "basis-refinement",
                        f"no basis element R <= {meet} with {witness.multiplicity}/"
                        f"{witness.symbol}",
                        (p, q),
                    )
                )
                report.notes.append(f"refinement witness: {witness}")
                return report
    return report


def close_under_pairs(
    members: Iterable[MSet], unions: bool = True, intersections: bool = True
) -> set[MSet]:
    """Smallest superset of ``members`` closed under the chosen pairwise operations."""
    family = set(members)
    frontier = list(family)
    while frontier:
        fresh: list[MSet] = []
        snapshot = list(family)
        for p in frontier:
            for q in snapshot:
                for r in (
                    (p | q) if unions else None,
                    (p & q) if intersections else None,
                ):
                    if r is not None and r not in family:
                        family.add(r)
                        fresh.append(r)
        frontier = fresh
    return family


def topology_from_basis(ground: MSet, basis: Iterable[MSet]) -> MTopology:
    """All unions of sub-collections of the basis, plus the empty M-set."""
    members = list(basis)
    for b in members:
        require_sub(b, ground)
    generated = close_under_pairs(members + [ground.space.empty()], intersections=False)
    report = validate_topology(ground, generated)
    if report.topology is None:
        first = report.violations[0]
        raise BasisGenerationError(
            f"basis does not generate an M-topology: {first.message}", first
        )
    return report.topology
