"""Semi-open (SOM) and semi-closed (SCM) M-sets of an M-topology."""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

from src.mset import (
    DEFAULT_ENUM_BUDGET,
    MSet,
    canonical_family,
    complement_in,
    enumerate_power,
    intersection_all,
    union_all,
)
from src.topology import MTopology, closure, interior, require_sub
from src.utils import EquivalenceViolationError

logger = logging.getLogger("msettop.semi")

Algorithm = Literal["witness", "criterion", "both"]


@dataclass(frozen=True)
class Membership:
    """A yes/no answer, with the open (or closed) set that proves a yes."""

    holds: bool
    witness: MSet | None = None

    def __bool__(self) -> bool:
        return self.holds


def _som_by_witness(t: MTopology, s: MSet) -> Membership:
    for o, cl_o in t.open_closures.items():
        if o <= s <= cl_o:
            return Membership(True, o)
    return Membership(False)


def _som_by_criterion(t: MTopology, s: MSet) -> Membership:
    inner = interior(t, s)
    if s <= closure(t, inner):
        return Membership(True, inner)
    return Membership(False)


def _scm_by_witness(t: MTopology, s: MSet) -> Membership:
    for p in t.closed:
        if interior(t, p) <= s <= p:
            return Membership(True, p)
    return Membership(False)


def _scm_by_criterion(t: MTopology, s: MSet) -> Membership:
    outer = closure(t, s)
    if interior(t, outer) <= s:
        return Membership(True, outer)
    return Membership(False)


def is_semi_open(t: MTopology, s: MSet, algorithm: Algorithm = "criterion") -> Membership:
    require_sub(s, t.ground)
    if algorithm == "witness":
        return _som_by_witness(t, s)
    if algorithm == "criterion":
        return _som_by_criterion(t, s)
    by_witness = _som_by_witness(t, s)
    by_criterion = _som_by_criterion(t, s)
    if by_witness.holds != by_criterion.holds:
        raise EquivalenceViolationError(
            f"witness search says {by_witness.holds}, cl(int(S)) criterion says "
            f"{by_criterion.holds} for S = {s}",
            t,
            s,
        )
    return by_witness


def is_semi_closed(t: MTopology, s: MSet, algorithm: Algorithm = "criterion") -> Membership:
    require_sub(s, t.ground)
    if algorithm == "witness":
        return _scm_by_witness(t, s)
    if algorithm == "criterion":
        return _scm_by_criterion(t, s)
    by_witness = _scm_by_witness(t, s)
    by_criterion = _scm_by_criterion(t, s)
    by_complement = is_semi_open(t, complement_in(s, t.ground), "both")
    if not by_witness.holds == by_criterion.holds == by_complement.holds:
        raise EquivalenceViolationError(
            f"semi-closedness of {s} disagrees: witness {by_witness.holds}, "
            f"criterion {by_criterion.holds}, complement SOM {by_complement.holds}",
            t,
            s,
        )
    return by_witness


@dataclass(frozen=True)
class SemiFamily:
    topology: MTopology
    som: tuple[MSet, ...]
    scm: tuple[MSet, ...]

    @cached_property
    def _som(self) -> frozenset[MSet]:
        return frozenset(self.som)

    @cached_property
    def _scm(self) -> frozenset[MSet]:
        return frozenset(self.scm)

    @property
    def ground(self) -> MSet:
        return self.topology.ground

    def is_som(self, a: MSet) -> bool:
        return a in self._som

    def is_scm(self, a: MSet) -> bool:
        return a in self._scm


def enumerate_semi(
    t: MTopology, budget: int = DEFAULT_ENUM_BUDGET, prune: bool = True
) -> SemiFamily:
    candidates = enumerate_power(t.ground, "all", budget)
    empty = t.space.empty()

    som: list[MSet] = []
    for s in candidates:
        # S <= cl(int(S)) rules out every non-empty S with empty interior
        if prune and s != empty and interior(t, s) == empty:
            continue
        if _som_by_criterion(t, s).holds:
            som.append(s)

    for s in som:
        if not _som_by_witness(t, s).holds:
            raise EquivalenceViolationError(
                f"{s} passes the cl(int(S)) criterion but has no open witness", t, s
            )

    scm = [s for s in candidates if _scm_by_criterion(t, s).holds]
    complements = canonical_family(complement_in(s, t.ground) for s in som)
    if tuple(scm) != complements:
        raise EquivalenceViolationError(
            "semi-closed family differs from the complements of the semi-open family", t
        )
    logger.debug("%d SOM / %d SCM among %d candidates", len(som), len(scm), len(candidates))
    return SemiFamily(t, tuple(som), complements)


def semi_interior(f: SemiFamily, a: MSet) -> MSet:
    require_sub(a, f.ground)
    return union_all((s for s in f.som if s <= a), f.ground.space)


def semi_closure(f: SemiFamily, a: MSet) -> MSet:
    require_sub(a, f.ground)
    return intersection_all((s for s in f.scm if a <= s), f.ground)


SOM_CONDITIONS = (
    "open",
    "clopen",
    "closure_of_open",
    "interior_of_some",
    "cl_int_criterion",
    "som_sandwich",
)
SCM_CONDITIONS = (
    "closed",
    "clopen",
    "closure_of_some",
    "interior_of_closed",
    "int_cl_criterion",
    "scm_sandwich",
)


@dataclass
class ChecklistReport:
    target: MSet
    som_conditions: dict[str, bool] = field(default_factory=dict)
    scm_conditions: dict[str, bool] = field(default_factory=dict)
    is_som: bool = False
    is_scm: bool = False

    @property
    def sound(self) -> bool:
        """Any listed sufficient condition must imply the membership it claims."""
        som_ok = self.is_som or not any(self.som_conditions.values())
        scm_ok = self.is_scm or not any(self.scm_conditions.values())
        return som_ok and scm_ok

    def to_dict(self) -> dict:
        return {
            "target": str(self.target),
            "som": {"holds": self.is_som, "conditions": self.som_conditions},
            "scm": {"holds": self.is_scm, "conditions": self.scm_conditions},
            "sound": self.sound,
        }


def condition_checklist(f: SemiFamily, a: MSet) -> ChecklistReport:
    t = f.topology
    require_sub(a, t.ground)
    int_a = interior(t, a)
    cl_a = closure(t, a)

    report = ChecklistReport(a, is_som=f.is_som(a), is_scm=f.is_scm(a))
    report.som_conditions = {
        "open": t.is_open(a),
        "clopen": t.is_clopen(a),
        "closure_of_open": a in t.open_closures.values(),
        "interior_of_some": int_a == a,
        "cl_int_criterion": a <= closure(t, int_a),
        "som_sandwich": any(s <= a <= closure(t, s) for s in f.som),
    }
    report.scm_conditions = {
        "closed": t.is_closed(a),
        "clopen": t.is_clopen(a),
        "closure_of_some": cl_a == a,
        "interior_of_closed": any(interior(t, p) == a for p in t.closed),
        "int_cl_criterion": interior(t, cl_a) <= a,
        "scm_sandwich": any(interior(t, s) <= a <= s for s in f.scm),
    }
    if not report.sound:
        logger.warning("checklist unsound for %s: %s", a, report.to_dict())
    return report
