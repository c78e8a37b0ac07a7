"""Semi open covers, subcover search and the semi-compactness deciders."""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal, Sequence

from src.mset import (
    DEFAULT_ENUM_BUDGET,
    MSet,
    canonical_family,
    classify_sub,
    enumerate_power,
    intersection_all,
    union_all,
)
from src.semi import SemiFamily, enumerate_semi, semi_closure
from src.topology import MTopology, require_sub, subspace
from src.utils import BudgetExceededError, ChainError

logger = logging.getLogger("msettop.compact")

DEFAULT_COVER_BUDGET = 4096
SCL_SWEEP_POWER_CAP = 12

Variant = Literal["semi", "semi_whole", "semi_partial_whole", "semi_full"]
SubcoverFilter = Literal["any", "whole", "partial_whole", "full"]

VARIANTS: tuple[Variant, ...] = ("semi", "semi_whole", "semi_partial_whole", "semi_full")
VARIANT_FILTERS: dict[str, SubcoverFilter] = {
    "semi": "any",
    "semi_whole": "whole",
    "semi_partial_whole": "partial_whole",
    "semi_full": "full",
}


def passes_filter(member: MSet, ground: MSet, filt: SubcoverFilter) -> bool:
    if filt == "any":
        return True
    relation = classify_sub(member, ground)
    if filt == "whole":
        return relation.is_whole
    if filt == "partial_whole":
        return relation.is_partial_whole
    if filt == "full":
        return relation.is_full
    raise ValueError(f"unknown subcover filter {filt!r}")


def covers(target: MSet, members: Iterable[MSet]) -> bool:
    return target <= union_all(members, target.space)


@dataclass(frozen=True)
class Cover:
    target: MSet
    members: tuple[MSet, ...]

    def __post_init__(self) -> None:
        # repeated members never change the pointwise max
        object.__setattr__(self, "members", canonical_family(self.members))

    def is_cover(self) -> bool:
        return covers(self.target, self.members)

    def __len__(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {"target": str(self.target), "members": [str(m) for m in self.members]}


def is_semi_open_cover(
    f: SemiFamily, members: Iterable[MSet], target: MSet | None = None
) -> bool:
    members = list(members)
    for m in members:
        require_sub(m, f.ground)
    target = f.ground if target is None else target
    return covers(target, members) and all(f.is_som(m) for m in members)


def _search_subcover(
    target: MSet, pool: Sequence[MSet], budget: int
) -> tuple[MSet, ...] | None:
    """Smallest sub-collection of ``pool`` covering ``target``, canonical first."""
    examined = 0
    for k in range(len(pool) + 1):
        for combo in itertools.combinations(pool, k):
            examined += 1
            if examined > budget:
                raise BudgetExceededError("subcover search frontier", examined, budget)
            if covers(target, combo):
                return combo
    return None


def find_subcover(
    t: MTopology,
    cover: Cover,
    filt: SubcoverFilter = "any",
    budget: int = DEFAULT_ENUM_BUDGET,
) -> Cover | None:
    for m in cover.members:
        require_sub(m, t.ground)
    passing = [m for m in cover.members if passes_filter(m, t.ground, filt)]
    # every qualifying subcover draws only on the passing members
    if not covers(cover.target, passing):
        return None
    found = _search_subcover(cover.target, passing, budget)
    return None if found is None else Cover(cover.target, found)


@dataclass
class CompactnessVerdict:
    variant: str
    holds: bool
    witness: Cover | None = None
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "holds": self.holds,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "certificate": self.certificate,
        }


def _fails(target: MSet, combo: Sequence[MSet], passes: Callable[[MSet], bool]) -> bool:
    return covers(target, combo) and not covers(target, [m for m in combo if passes(m)])


def _first_failing_cover(
    target: MSet,
    family: Sequence[MSet],
    passes: Callable[[MSet], bool],
    exhaustive: bool,
    budget: int,
    search_budget: int,
) -> tuple[MSet, ...] | None:
    """First cover from ``family`` with no qualifying subcover.

    Candidates are tried in (size, canonical) order.
    """
    if exhaustive:
        total = 2 ** len(family)
        if total > budget:
            raise BudgetExceededError("covering subfamilies", total, budget)
        for k in range(len(family) + 1):
            for combo in itertools.combinations(family, k):
                if not covers(target, combo):
                    continue
                # a finite cover has a qualifying subcover iff its qualifying
                # members already cover
                if not covers(target, [m for m in combo if passes(m)]):
                    return combo
        return None

    passing = [m for m in family if passes(m)]
    rejected = [m for m in family if not passes(m)]
    # A failing cover's passing members miss some point x; adding every rejected
    # member and every passing member that also misses x keeps it failing.
    fails = False
    for i, need in enumerate(target.counts):
        if need == 0:
            continue
        missing_x = [m for m in passing if m.counts[i] < need]
        if covers(target, rejected + missing_x):
            fails = True
            break
    if not fails:
        return None

    examined = 0
    for k in range(1, len(family) + 1):
        for combo in itertools.combinations(family, k):
            examined += 1
            if examined > search_budget:
                raise BudgetExceededError("witness cover search", examined, search_budget)
            if _fails(target, combo, passes):
                return combo
    return None


def decide_compactness(
    f: SemiFamily,
    variant: Variant,
    budget: int = DEFAULT_COVER_BUDGET,
    exhaustive: bool = False,
    search_budget: int = DEFAULT_ENUM_BUDGET,
) -> CompactnessVerdict:
    if variant not in VARIANT_FILTERS:
        raise ValueError(f"unknown compactness variant {variant!r}")
    filt = VARIANT_FILTERS[variant]
    ground = f.ground
    certificate = {
        "som_size": len(f.som),
        "method": "exhaustive" if exhaustive else "pruned",
        "note": "every semi open cover is a sub-collection of the finite SOM family, "
        "so every qualifying subcover is finite",
    }
    if filt == "any" and not exhaustive:
        return CompactnessVerdict(variant, True, None, certificate)

    witness = _first_failing_cover(
        ground,
        f.som,
        lambda m: passes_filter(m, ground, filt),
        exhaustive,
        budget,
        search_budget,
    )
    if witness is None:
        return CompactnessVerdict(variant, True, None, certificate)
    logger.debug("%s fails with witness %s", variant, [str(m) for m in witness])
    return CompactnessVerdict(variant, False, Cover(ground, witness), certificate)


def witness_revalidates(f: SemiFamily, verdict: CompactnessVerdict) -> bool:
    """Independent exhaustive re-check of a failing verdict's witness cover."""
    if verdict.witness is None:
        return verdict.holds
    witness = verdict.witness
    if not is_semi_open_cover(f, witness.members):
        return False
    filt = VARIANT_FILTERS[verdict.variant]
    passing = [m for m in witness.members if passes_filter(m, f.ground, filt)]
    for k in range(len(passing) + 1):
        for combo in itertools.combinations(passing, k):
            if covers(f.ground, combo):
                return False
    return True


def has_fip(family: Sequence[MSet]) -> bool:
    """Finite intersection property of a finite, non-empty family.

    Every sub-collection meets in a superset of the whole family's meet, so
    the property reduces to a non-empty total intersection.
    """
    if not family:
        raise ValueError("FIP is defined for non-empty families")
    return not intersection_all(family[1:], family[0]).is_empty()


def has_fip_exhaustive(family: Sequence[MSet], budget: int = DEFAULT_COVER_BUDGET) -> bool:
    if not family:
        raise ValueError("FIP is defined for non-empty families")
    total = 2 ** len(family) - 1
    if total > budget:
        raise BudgetExceededError("sub-collections", total, budget)
    for k in range(1, len(family) + 1):
        for combo in itertools.combinations(family, k):
            if intersection_all(combo[1:], combo[0]).is_empty():
                return False
    return True


def _fip_sweep(
    members: Sequence[MSet], images: Sequence[MSet], top: MSet, budget: int
) -> tuple[bool, tuple[MSet, ...] | None, int]:
    """Does every FIP sub-collection of ``members`` have images that still meet?

    Sub-collections are bitmasks; each mask's meet and FIP flag come from its
    submasks, which are always visited first.
    """
    n = len(members)
    total = 2**n - 1
    if total > budget:
        raise BudgetExceededError("sub-collections", total, budget)
    meet: list[MSet] = [top] * (total + 1)
    image_meet: list[MSet] = [top] * (total + 1)
    fip = [True] * (total + 1)
    for mask in range(1, total + 1):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        meet[mask] = meet[rest] & members[low]
        image_meet[mask] = image_meet[rest] & images[low]
        fip[mask] = not meet[mask].is_empty() and all(
            fip[mask ^ (1 << i)] for i in range(n) if mask >> i & 1 and mask ^ (1 << i)
        )
        if fip[mask] and image_meet[mask].is_empty():
            collection = tuple(members[i] for i in range(n) if mask >> i & 1)
            return False, collection, mask
    return True, None, total


@dataclass
class BiconditionalReport:
    claim: str
    left: bool
    right: bool
    collections_checked: int
    witness: tuple[MSet, ...] | None = None

    @property
    def agree(self) -> bool:
        return self.left == self.right

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "left": self.left,
            "right": self.right,
            "agree": self.agree,
            "collections_checked": self.collections_checked,
            "witness": None if self.witness is None else [str(m) for m in self.witness],
        }


def check_fip_scm(
    f: SemiFamily,
    variant: Variant = "semi",
    budget: int = DEFAULT_COVER_BUDGET,
    search_budget: int = DEFAULT_ENUM_BUDGET,
) -> BiconditionalReport:
    """Compactness against: every FIP family of SCM-sets has a non-empty meet."""
    left = decide_compactness(f, variant, budget, search_budget=search_budget).holds
    right, witness, checked = _fip_sweep(f.scm, f.scm, f.ground, budget)
    return BiconditionalReport(f"fip-scm[{variant}]", left, right, checked, witness)


def check_fip_scl(
    f: SemiFamily,
    variant: Variant = "semi",
    budget: int = DEFAULT_COVER_BUDGET,
    search_budget: int = DEFAULT_ENUM_BUDGET,
) -> BiconditionalReport:
    """Compactness against: every FIP family of M-sets has semi closures that meet."""
    members = enumerate_power(f.ground, "all", SCL_SWEEP_POWER_CAP)
    left = decide_compactness(f, variant, budget, search_budget=search_budget).holds
    images = [semi_closure(f, n) for n in members]
    right, witness, checked = _fip_sweep(members, images, f.ground, budget)
    return BiconditionalReport(f"fip-scl[{variant}]", left, right, checked, witness)


def is_target_semi_compact(
    target: MSet,
    som: Sequence[MSet],
    budget: int = DEFAULT_COVER_BUDGET,
    search_budget: int = DEFAULT_ENUM_BUDGET,
) -> bool:
    """Every cover of ``target`` drawn from ``som`` has a finite subcover."""
    exhaustive = 2 ** len(som) <= budget
    failing = _first_failing_cover(
        target, som, lambda m: True, exhaustive, budget, search_budget
    )
    return failing is None


@dataclass
class SubspaceCompactReport:
    subspace_ground: MSet
    target: MSet
    tau_holds: bool
    subspace_holds: bool

    @property
    def agree(self) -> bool:
        return self.tau_holds == self.subspace_holds

    def to_dict(self) -> dict:
        return {
            "subspace": str(self.subspace_ground),
            "target": str(self.target),
            "tau_semi_compact": self.tau_holds,
            "subspace_semi_compact": self.subspace_holds,
            "agree": self.agree,
        }


def subspace_compact_equiv(
    t: MTopology,
    n: MSet,
    a: MSet,
    budget: int = DEFAULT_COVER_BUDGET,
    f: SemiFamily | None = None,
    f_sub: SemiFamily | None = None,
) -> SubspaceCompactReport:
    if not (a.space == n.space == t.space and a <= n <= t.ground):
        raise ChainError(f"need {a} <= {n} <= {t.ground}")
    f_tau = enumerate_semi(t) if f is None else f
    f_sub = enumerate_semi(subspace(t, n)) if f_sub is None else f_sub
    return SubspaceCompactReport(
        n,
        a,
        is_target_semi_compact(a, f_tau.som, budget),
        is_target_semi_compact(a, f_sub.som, budget),
    )
