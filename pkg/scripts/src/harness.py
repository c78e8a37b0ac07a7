"""Topology corpora, the theorem catalogue, and counterexample mining."""

import hashlib
import itertools
import logging
import string
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterator, Sequence

import numpy as np
from tqdm import tqdm

from src.compact import (
    VARIANTS,
    check_fip_scl,
    check_fip_scm,
    decide_compactness,
    subspace_compact_equiv,
    witness_revalidates,
)
from src.controller import Settings, topology_from_dict, topology_to_dict
from src.mset import (
    MSet,
    MSpace,
    complement_in,
    enumerate_power,
    power_cardinality,
)
from src.semi import SemiFamily, enumerate_semi, is_semi_closed, is_semi_open
from src.topology import (
    MTopology,
    close_under_pairs,
    closure,
    interior,
    subspace,
    validate_topology,
)
from src.utils import (
    BudgetExceededError,
    EquivalenceViolationError,
    ParallelRun,
    UnknownClaimError,
    dump_json,
)

logger = logging.getLogger("msettop.harness")

GENERATION_RETRIES = 4
TOPOLOGY_POWER_CAP = 12
DEFAULT_EXHAUSTIVE_SPACES: tuple[tuple[int, int], ...] = (
    (1, 1),
    (1, 2),
    (2, 1),
    (2, 2),
    (3, 1),
)
DEFAULT_EXHAUSTIVE_POWER = 9
# subspace sweeps on large grounds look at an evenly spaced sample of sub-M-sets
SUBSPACE_SAMPLE = 12


@dataclass(frozen=True)
class GenConfig:
    max_domain: int = 3
    max_w: int = 3
    seed: int = 0
    density: float = 0.3
    trials: int = 500
    family_budget: int = 4096

    def __post_init__(self) -> None:
        if not 1 <= self.max_domain <= len(string.ascii_lowercase):
            raise ValueError(f"max_domain must be in [1, 26], got {self.max_domain}")
        if self.max_w < 1:
            raise ValueError(f"max_w must be >= 1, got {self.max_w}")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {self.density}")
        if self.trials < 0:
            raise ValueError(f"trials must be >= 0, got {self.trials}")


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream per (seed, trial index)."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def generate_topology(cfg: GenConfig, index: int = 0) -> MTopology:
    rng = trial_rng(cfg.seed, index)
    size = int(rng.integers(1, cfg.max_domain + 1))
    w = int(rng.integers(1, cfg.max_w + 1))
    space = MSpace(tuple(string.ascii_lowercase[:size]), w)
    counts = [int(c) for c in rng.integers(0, w + 1, size=size)]
    if not any(counts):
        counts[int(rng.integers(size))] = int(rng.integers(1, w + 1))
    ground = MSet(space, tuple(counts))
    candidates = enumerate_power(ground, "all")

    density = cfg.density
    for _ in range(GENERATION_RETRIES):
        picked = rng.random(len(candidates)) < density
        seeds = [c for c, keep in zip(candidates, picked) if keep]
        family = close_under_pairs(seeds + [ground, space.empty()])
        if len(family) <= cfg.family_budget:
            return MTopology(ground, tuple(family))
        logger.debug("closure of %d members over budget, halving density", len(family))
        density /= 2
    raise BudgetExceededError("generated family", len(family), cfg.family_budget)


def enumerate_topologies(
    ground: MSet, max_power: int = TOPOLOGY_POWER_CAP
) -> Iterator[MTopology]:
    """Every M-topology on ``ground``, each once, ordered by member bitmask."""
    power = enumerate_power(ground, "all", min(max_power, TOPOLOGY_POWER_CAP))
    index = {m: i for i, m in enumerate(power)}
    joins = [[index[p | q] for q in power] for p in power]
    meets = [[index[p & q] for q in power] for p in power]
    bottom, top = index[ground.space.empty()], index[ground]
    inner = [i for i in range(len(power)) if i not in (bottom, top)]

    for mask in range(2 ** len(inner)):
        picked = {inner[k] for k in range(len(inner)) if mask >> k & 1}
        chosen = sorted({bottom, top} | picked)
        bits = sum(1 << i for i in chosen)
        if all(
            bits >> joins[i][j] & 1 and bits >> meets[i][j] & 1
            for i, j in itertools.combinations(chosen, 2)
        ):
            yield MTopology(ground, tuple(power[i] for i in chosen))


def special_topologies(ground: MSet) -> dict[str, MTopology]:
    """The discrete topology P(M) and the whole-power topology PW(M)."""
    return {
        "discrete": MTopology(ground, enumerate_power(ground, "all")),
        "whole-power": MTopology(ground, enumerate_power(ground, "whole")),
    }


@dataclass
class Corpus:
    kind: str
    bounds: dict[str, Any]
    seed: int | None
    topologies: tuple[MTopology, ...]

    @cached_property
    def fingerprint(self) -> str:
        text = dump_json([topology_to_dict(t) for t in self.topologies])
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

    def describe(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "bounds": self.bounds,
            "seed": self.seed,
            "size": len(self.topologies),
            "fingerprint": self.fingerprint,
        }


def exhaustive_corpus(
    spaces: Sequence[tuple[int, int]] = DEFAULT_EXHAUSTIVE_SPACES,
    max_power: int = DEFAULT_EXHAUSTIVE_POWER,
) -> Corpus:
    topologies: list[MTopology] = []
    for size, w in spaces:
        space = MSpace(tuple(string.ascii_lowercase[:size]), w)
        for ground in enumerate_power(space.top(), "all"):
            if ground.is_empty() or power_cardinality(ground) > max_power:
                continue
            topologies.extend(enumerate_topologies(ground, max_power))
    bounds = {"spaces": [list(s) for s in spaces], "max_power": max_power}
    return Corpus("exhaustive", bounds, None, tuple(topologies))


def random_corpus(cfg: GenConfig) -> Corpus:
    topologies = tuple(generate_topology(cfg, i) for i in range(cfg.trials))
    bounds = {"max_domain": cfg.max_domain, "max_w": cfg.max_w, "density": cfg.density}
    return Corpus("random", bounds, cfg.seed, topologies)


def fixture_corpus(topologies: Sequence[MTopology], name: str = "fixture") -> Corpus:
    return Corpus("fixture", {"name": name}, None, tuple(topologies))


@dataclass
class Counterexample:
    claim: str
    topology: MTopology
    offending: dict[str, Any]
    check: str
    origin: str = "artifact-discovered"

    def to_dict(self) -> dict[str, Any]:
        kind, ident = self.check.split(":", 1)
        flag = "--claim" if kind == "claim" else "--remark"
        verb = "verify" if kind == "claim" else "mine"
        return {
            "claim": self.claim,
            "fixture": topology_to_dict(self.topology),
            "offending": self.offending,
            "check": self.check,
            "command": f"python scripts/msettop.py {verb} {flag} {ident} "
            "--corpus <fixture.json>",
            "origin": self.origin,
        }


@dataclass
class TrialOutcome:
    violations: list[dict[str, Any]] = field(default_factory=list)
    findings: list[dict[str, Any]] = field(default_factory=list)
    table: dict[str, int] = field(default_factory=dict)
    skipped: str | None = None

    def tally(self, cell: str) -> None:
        self.table[cell] = self.table.get(cell, 0) + 1


def _strs(members: Sequence[MSet]) -> list[str]:
    return [str(m) for m in members]


def _closure_sweep(
    members: Sequence[MSet],
    contains: Callable[[MSet], bool],
    op: Callable[[MSet, MSet], MSet],
    neutral: MSet,
    budget: int,
    out: TrialOutcome,
    label: str,
) -> None:
    """Check that ``op`` over every sub-collection of ``members`` stays in the family.

    Falls back to pairs when the sub-collection count exceeds ``budget``;
    for a finite family pairwise closure implies closure under any sub-collection.
    """
    n = len(members)
    if 2**n <= budget:
        out.tally("mode:all-subfamilies")
        acc = [neutral] * (2**n)
        for mask in range(1, 2**n):
            low = (mask & -mask).bit_length() - 1
            acc[mask] = op(acc[mask & (mask - 1)], members[low])
            if not contains(acc[mask]):
                chosen = [members[i] for i in range(n) if mask >> i & 1]
                out.violations.append({"subfamily": _strs(chosen), label: str(acc[mask])})
                return
        return
    out.tally("mode:pairwise")
    for p, q in itertools.combinations(members, 2):
        r = op(p, q)
        if not contains(r):
            out.violations.append({"subfamily": _strs([p, q]), label: str(r)})
            return


def _semi(t: MTopology, settings: Settings) -> SemiFamily:
    return enumerate_semi(t, settings.enum_budget)


def check_som_union(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    empty = t.space.empty()
    _closure_sweep(
        f.som, f.is_som, lambda a, b: a | b, empty, settings.cover_budget, out, "union"
    )


def check_som_open_union(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    for s in f.som:
        for o in t.family:
            if not f.is_som(s | o):
                out.violations.append({"som": str(s), "open": str(o), "union": str(s | o)})
                return


def check_som_sandwich(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    power = enumerate_power(t.ground, "all", settings.enum_budget)
    for s in f.som:
        upper = closure(t, s)
        for n in power:
            if s <= n <= upper and not f.is_som(n):
                out.violations.append(
                    {"som": str(s), "closure": str(upper), "between": str(n)}
                )
                return


def check_scm_sandwich(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    power = enumerate_power(t.ground, "all", settings.enum_budget)
    for s in f.scm:
        lower = interior(t, s)
        for r in power:
            if lower <= r <= s and not f.is_scm(r):
                out.violations.append(
                    {"scm": str(s), "interior": str(lower), "between": str(r)}
                )
                return


def check_semi_equivalence(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    for s in enumerate_power(t.ground, "all", settings.enum_budget):
        c = complement_in(s, t.ground)
        answers = {
            "som_witness": is_semi_open(t, s, "witness").holds,
            "cl_int": s <= closure(t, interior(t, s)),
            "int_cl_complement": interior(t, closure(t, c)) <= c,
            "complement_scm_witness": is_semi_closed(t, c, "witness").holds,
        }
        if len(set(answers.values())) > 1:
            out.violations.append({"candidate": str(s), "answers": answers})
            return


def check_scm_intersection(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    _closure_sweep(
        f.scm,
        f.is_scm,
        lambda a, b: a & b,
        t.ground,
        settings.cover_budget,
        out,
        "intersection",
    )


def check_fip_scm_claim(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    report = check_fip_scm(f, "semi", settings.cover_budget, settings.enum_budget)
    out.tally(f"compact={report.left}/fip-meets={report.right}")
    if not report.agree:
        out.violations.append(report.to_dict())


def check_fip_scl_claim(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    report = check_fip_scl(f, "semi", settings.cover_budget, settings.enum_budget)
    out.tally(f"compact={report.left}/scl-meets={report.right}")
    if not report.agree:
        out.findings.append(report.to_dict())


def check_fip_variants(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    for variant in VARIANTS[1:]:
        report = check_fip_scm(f, variant, settings.cover_budget, settings.enum_budget)
        out.tally(f"{variant}:compact={report.left}/fip-meets={report.right}")
        if not report.agree:
            out.findings.append(report.to_dict())


def _sample(members: Sequence[MSet], limit: int) -> list[MSet]:
    if len(members) <= limit:
        return list(members)
    step = len(members) / limit
    picked = [members[int(i * step)] for i in range(limit)]
    return picked[:-1] + [members[-1]]


def check_subspace_compact(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    power = enumerate_power(t.ground, "all", settings.enum_budget)
    for n in _sample(power, SUBSPACE_SAMPLE):
        f_sub = enumerate_semi(subspace(t, n), settings.enum_budget)
        for a in _sample(enumerate_power(n, "all", settings.enum_budget), SUBSPACE_SAMPLE):
            report = subspace_compact_equiv(t, n, a, settings.cover_budget, f, f_sub)
            out.tally(f"tau={report.tau_holds}/subspace={report.subspace_holds}")
            if not report.agree:
                out.violations.append(report.to_dict())
                return


def check_operator_laws(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    power = enumerate_power(t.ground, "all", settings.enum_budget)
    inner = {a: interior(t, a) for a in power}
    outer = {a: closure(t, a) for a in power}

    def fail(law: str, *sets: MSet) -> None:
        out.violations.append({"law": law, "sets": _strs(sets)})

    for a in power:
        i, c = inner[a], outer[a]
        if interior(t, i) != i:
            return fail("interior idempotent", a, i)
        if closure(t, c) != c:
            return fail("closure idempotent", a, c)
        if not i <= a:
            return fail("interior deflationary", a, i)
        if not a <= c:
            return fail("closure inflationary", a, c)
        if not t.is_open(i):
            return fail("interior open", a, i)
        if not t.is_closed(c):
            return fail("closure closed", a, c)
        if c != complement_in(inner[complement_in(a, t.ground)], t.ground):
            return fail("closure-interior duality", a, c)
        if is_semi_open(t, a, "witness").holds != is_semi_open(t, a, "criterion").holds:
            return fail("SOM witness/criterion agreement", a)
    for a, b in itertools.combinations(power, 2):
        if a <= b and not (inner[a] <= inner[b] and outer[a] <= outer[b]):
            return fail("monotone", a, b)

    f = _semi(t, settings)
    complements = sorted(
        (complement_in(s, t.ground) for s in f.som), key=lambda m: m.counts
    )
    if list(f.scm) != complements:
        return fail("scm equals complements of som", *f.scm)


def check_compact_pruning(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    for variant in VARIANTS:
        pruned = decide_compactness(f, variant, settings.cover_budget)
        full = decide_compactness(f, variant, settings.cover_budget, exhaustive=True)
        out.tally(f"{variant}:holds={full.holds}")
        if pruned.holds != full.holds or pruned.witness != full.witness:
            out.violations.append(
                {
                    "variant": variant,
                    "pruned": pruned.to_dict(),
                    "exhaustive": full.to_dict(),
                }
            )
            return
        if not witness_revalidates(f, pruned):
            out.violations.append({"variant": variant, "unverifiable": pruned.to_dict()})
            return


def check_som_discrete(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    for name, special in special_topologies(t.ground).items():
        f = enumerate_semi(special, settings.enum_budget)
        if f.som != special.family or f.scm != special.closed:
            extra = [s for s in f.som if not special.is_open(s)]
            out.violations.append({"topology": name, "non_open_som": _strs(extra)})


def mine_som_intersection(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    for s1, s2 in itertools.combinations(f.som, 2):
        if not f.is_som(s1 & s2):
            meet = str(s1 & s2)
            out.violations.append(
                {"first": str(s1), "second": str(s2), "intersection": meet}
            )
            return


def mine_scm_union(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    for s1, s2 in itertools.combinations(f.scm, 2):
        if not f.is_scm(s1 | s2):
            join = str(s1 | s2)
            out.violations.append({"first": str(s1), "second": str(s2), "union": join})
            return


def mine_som_not_open(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    f = _semi(t, settings)
    for s in f.som:
        if not t.is_open(s):
            out.violations.append({"som": str(s)})
            return


def mine_som_topology(t: MTopology, settings: Settings, out: TrialOutcome) -> None:
    """Hit when SOM fails the topology axioms; clause disagreements are findings."""
    f = _semi(t, settings)
    closures_open = all(t.is_open(c) for c in t.open_closures.values())
    disjoint_closures = all(
        (closure(t, p) & closure(t, q)).is_empty()
        for p, q in itertools.combinations(t.family, 2)
        if (p & q).is_empty()
    )
    som_report = validate_topology(t.ground, f.som)
    som_topology = som_report.valid
    out.tally(f"closures-open={closures_open}/som-topology={som_topology}")
    out.tally(f"disjoint-closures={disjoint_closures}/som-topology={som_topology}")
    payload = {
        "closures_open": closures_open,
        "disjoint_closures": disjoint_closures,
        "som_is_topology": som_topology,
        "som": _strs(f.som),
        "axiom_violations": [v.to_dict() for v in som_report.violations],
    }
    if not som_topology:
        out.violations.append(payload)
    if closures_open != som_topology or disjoint_closures != som_topology:
        out.findings.append(payload)


CheckFn = Callable[[MTopology, Settings, TrialOutcome], None]


@dataclass(frozen=True)
class Claim:
    description: str
    check: CheckFn
    findings_only: bool = False


CLAIMS: dict[str, Claim] = {
    "som-union": Claim("every union of SOM-sets is a SOM-set", check_som_union),
    "som-open-union": Claim(
        "a SOM-set joined with an open M-set is a SOM-set", check_som_open_union
    ),
    "som-sandwich": Claim(
        "S <= N <= cl(S) with S SOM makes N SOM", check_som_sandwich
    ),
    "scm-sandwich": Claim(
        "int(T) <= R <= T with T SCM makes R SCM", check_scm_sandwich
    ),
    "semi-equivalence": Claim(
        "the four SOM characterisations agree", check_semi_equivalence
    ),
    "scm-intersection": Claim(
        "every intersection of SCM-sets is an SCM-set", check_scm_intersection
    ),
    "fip-scm": Claim(
        "semi compact iff FIP families of SCM-sets meet", check_fip_scm_claim
    ),
    "fip-scl": Claim(
        "semi compact iff semi closures of FIP families meet", check_fip_scl_claim, True
    ),
    "subspace-compact": Claim(
        "tau- and subspace semi compactness agree", check_subspace_compact
    ),
    "operator-laws": Claim(
        "interior/closure laws and SOM algorithm agreement", check_operator_laws
    ),
    "compact-pruning": Claim(
        "pruned decider matches exhaustive search", check_compact_pruning
    ),
    "som-discrete": Claim("SOM equals open on P(M) and PW(M)", check_som_discrete),
    "fip-variants": Claim(
        "FIP characterisation against the whole/partial-whole/full deciders",
        check_fip_variants,
        True,
    ),
}

REMARKS: dict[str, Claim] = {
    "som-intersection": Claim(
        "two SOM-sets whose intersection is not SOM", mine_som_intersection
    ),
    "som-topology": Claim(
        "SOM family against the topology axioms and the closure clauses",
        mine_som_topology,
    ),
    "som-not-open": Claim("a SOM-set that is not open", mine_som_not_open),
    "scm-union": Claim("two SCM-sets whose union is not SCM", mine_scm_union),
}
EXHAUSTIVE_REMARKS = frozenset({"som-topology"})


def _lookup(check: str) -> Claim:
    kind, _, ident = check.partition(":")
    catalogue = CLAIMS if kind == "claim" else REMARKS if kind == "remark" else None
    if catalogue is None or ident not in catalogue:
        raise UnknownClaimError(
            f"unknown check {check!r}; claims: {sorted(CLAIMS)}, remarks: {sorted(REMARKS)}"
        )
    return catalogue[ident]


def run_trial(index: int, t: MTopology, check: str, settings: Settings) -> TrialOutcome:
    out = TrialOutcome()
    try:
        _lookup(check).check(t, settings, out)
    except BudgetExceededError as e:
        out.skipped = str(e)
        logger.debug("trial %d skipped: %s", index, e)
    except EquivalenceViolationError as e:
        candidate = None if e.candidate is None else str(e.candidate)
        record = {"equivalence": str(e), "candidate": candidate}
        # miner hits are remark witnesses only
        (out.findings if check.startswith("remark:") else out.violations).append(record)
        logger.warning("trial %d: %s", index, e)
    return out


def recheck(record: dict[str, Any], settings: Settings | None = None) -> bool:
    """Re-run a serialized counterexample's check on its own fixture."""
    t = topology_from_dict(record["fixture"])
    out = run_trial(0, t, record["check"], settings or Settings())
    return bool(out.violations or out.findings)


@dataclass
class TheoremReport:
    claim: str
    corpus: dict[str, Any]
    trials: int
    skipped: int
    violation_count: int
    violations: list[Counterexample]
    finding_count: int
    findings: list[Counterexample]
    table: dict[str, int]
    elapsed_ms: int = 0

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        data = {
            "claim": self.claim,
            "corpus": self.corpus,
            "trials": self.trials,
            "skipped": self.skipped,
            "violation_count": self.violation_count,
            "violations": [c.to_dict() for c in self.violations],
            "finding_count": self.finding_count,
            "findings": [c.to_dict() for c in self.findings],
            "table": dict(sorted(self.table.items())),
        }
        if timing:
            data["elapsed_ms"] = self.elapsed_ms
        return data


@dataclass
class MiningReport:
    remark: str
    corpus: dict[str, Any]
    trials: int
    skipped: int
    found: Counterexample | None
    hits: int
    finding_count: int
    findings: list[Counterexample]
    table: dict[str, int]
    elapsed_ms: int = 0

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        data = {
            "remark": self.remark,
            "corpus": self.corpus,
            "trials": self.trials,
            "skipped": self.skipped,
            "status": "found" if self.found else "exhausted",
            "hits": self.hits,
            "counterexample": None if self.found is None else self.found.to_dict(),
            "finding_count": self.finding_count,
            "findings": [c.to_dict() for c in self.findings],
            "table": dict(sorted(self.table.items())),
        }
        if timing:
            data["elapsed_ms"] = self.elapsed_ms
        return data


def _corpus_line(corpus: dict[str, Any]) -> str:
    return (
        f"corpus {corpus['kind']} ({corpus['size']} topologies, "
        f"fingerprint {corpus['fingerprint']})"
    )


def _merge_tables(outcomes: Sequence[TrialOutcome]) -> dict[str, int]:
    table: dict[str, int] = {}
    for out in outcomes:
        for cell, n in out.table.items():
            table[cell] = table.get(cell, 0) + n
    return table


class PropertyVerifier:
    """Runs catalogue checks over a corpus, one trial per topology."""

    def __init__(
        self, settings: Settings, quiet: bool = False, max_records: int = 20
    ) -> None:
        self.settings = settings
        self.quiet = quiet
        self.max_records = max_records

    def run_trials(self, check: str, corpus: Corpus) -> list[TrialOutcome]:
        _lookup(check)
        runtime = ParallelRun(run_trial, check, self.settings)
        return runtime(
            corpus.topologies,
            workers=self.settings.workers,
            desc=f"Checking {check}",
            quiet=self.quiet,
        )

    def _records(
        self,
        claim: str,
        check: str,
        corpus: Corpus,
        outcomes: Sequence[TrialOutcome],
        attr: str,
    ) -> tuple[int, list[Counterexample]]:
        records: list[Counterexample] = []
        count = 0
        for t, out in zip(corpus.topologies, outcomes):
            for payload in getattr(out, attr):
                count += 1
                if len(records) < self.max_records:
                    records.append(Counterexample(claim, t, payload, check))
        return count, records

    def verify(self, claim: str, corpus: Corpus) -> TheoremReport:
        check = f"claim:{claim}"
        start = time.perf_counter()
        outcomes = self.run_trials(check, corpus)
        violation_count, violations = self._records(
            claim, check, corpus, outcomes, "violations"
        )
        finding_count, findings = self._records(
            claim, check, corpus, outcomes, "findings"
        )
        report = TheoremReport(
            claim=claim,
            corpus=corpus.describe(),
            trials=len(outcomes),
            skipped=sum(1 for out in outcomes if out.skipped),
            violation_count=violation_count,
            violations=violations,
            finding_count=finding_count,
            findings=findings,
            table=_merge_tables(outcomes),
            elapsed_ms=int((time.perf_counter() - start) * 1000),
        )
        logger.info(
            "%s: %d trials, %d skipped, %d violations, %d findings",
            claim, report.trials, report.skipped, violation_count, finding_count,
        )
        return report

    def summary(self, report: TheoremReport) -> str:
        claim = CLAIMS[report.claim]
        kind = "findings only" if claim.findings_only else "theorem"
        lines = [
            f"claim {report.claim} ({kind}): {claim.description}",
            _corpus_line(report.corpus),
            f"trials {report.trials}, skipped {report.skipped}, "
            f"violations {report.violation_count}, findings {report.finding_count}",
        ]
        lines += [f"  {cell}: {n}" for cell, n in sorted(report.table.items())]
        for c in report.violations + report.findings:
            lines.append(f"  witness on ground {c.topology.ground}: {c.offending}")
        return "\n".join(lines)


class RemarkMiner(PropertyVerifier):
    """Searches a corpus for the witnesses the remark catalogue asserts exist."""

    def mine(self, remark: str, corpus: Corpus) -> MiningReport:
        check = f"remark:{remark}"
        start = time.perf_counter()
        # som-topology tabulates every member; the others stop at the first hit
        if remark in EXHAUSTIVE_REMARKS:
            outcomes = self.run_trials(check, corpus)
        else:
            outcomes = self._mine_inline(check, corpus)
        hits, records = self._records(remark, check, corpus, outcomes, "violations")
        finding_count, findings = self._records(remark, check, corpus, outcomes, "findings")
        report = MiningReport(
            remark=remark,
            corpus=corpus.describe(),
            trials=len(outcomes),
            skipped=sum(1 for out in outcomes if out.skipped),
            found=records[0] if records else None,
            hits=hits,
            finding_count=finding_count,
            findings=findings,
            table=_merge_tables(outcomes),
            elapsed_ms=int((time.perf_counter() - start) * 1000),
        )
        status = "found" if report.found else "exhausted"
        logger.info("%s: %s after %d trials", remark, status, report.trials)
        return report

    def _mine_inline(self, check: str, corpus: Corpus) -> list[TrialOutcome]:
        outcomes = []
        for idx, t in enumerate(
            tqdm(corpus.topologies, desc=f"Mining {check}", disable=self.quiet)
        ):
            out = run_trial(idx, t, check, self.settings)
            outcomes.append(out)
            if out.violations:
                break
        return outcomes

    def mining_summary(self, report: MiningReport) -> str:
        lines = [
            f"remark {report.remark}: {REMARKS[report.remark].description}",
            _corpus_line(report.corpus),
            f"trials {report.trials}, skipped {report.skipped}, hits {report.hits}, "
            f"findings {report.finding_count}",
        ]
        if report.found is None:
            lines.append("status: exhausted, no witness in this corpus")
        else:
            lines.append(f"status: found on ground {report.found.topology.ground}")
            lines.append(f"  tau = {_strs(report.found.topology.family)}")
            lines.append(f"  {report.found.offending}")
        lines += [f"  {cell}: {n}" for cell, n in sorted(report.table.items())]
        return "\n".join(lines)
