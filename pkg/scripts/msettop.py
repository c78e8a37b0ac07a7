#!/usr/bin/env python3
"""
Command-line front end for the multiset topology engine.

Usage:
    python scripts/msettop.py validate data/fixtures/reference_space.json
    python scripts/msettop.py som list data/fixtures/reference_space.json
    python scripts/msettop.py closure data/fixtures/reference_space.json "{1/a, 2/b}"
    python scripts/msettop.py compact --variant semi_whole data/fixtures/reference_space.json
    python scripts/msettop.py verify --claim som-union --corpus exhaustive
    python scripts/msettop.py mine --remark som-intersection --corpus random --trials 200

Exit status: 0 when the checked property holds, 1 when it fails (or on an
input error), 2 when an enumeration budget is exceeded.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from src.compact import (
    VARIANTS,
    Cover,
    check_fip_scl,
    check_fip_scm,
    decide_compactness,
    find_subcover,
    has_fip,
    is_semi_open_cover,
    witness_revalidates,
)
from src.controller import (
    LoadedTopology,
    Settings,
    list_fixtures,
    load_settings,
    load_topology,
    save_topology,
)
from src.harness import (
    CLAIMS,
    REMARKS,
    Corpus,
    GenConfig,
    PropertyVerifier,
    RemarkMiner,
    exhaustive_corpus,
    fixture_corpus,
    random_corpus,
)
from src.mset import MSet
from src.semi import (
    condition_checklist,
    enumerate_semi,
    is_semi_closed,
    is_semi_open,
    semi_closure,
    semi_interior,
)
from src.topology import (
    closure,
    interior,
    subspace,
    topology_from_basis,
    validate_basis,
)
from src.utils import (
    BudgetExceededError,
    MSetError,
    dump_json,
    setup_logging,
    write_to_file,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BUDGET = 2


class Output:
    """Collects a command's report and prints it as text or JSON."""

    def __init__(self, mode: str) -> None:
        self.mode = mode

    def emit(self, payload: dict[str, Any], text: str) -> None:
        if self.mode == "json":
            sys.stdout.write(dump_json(payload))
        else:
            print(text)


def _family_text(members: Sequence[MSet]) -> str:
    return "\n".join(str(m) for m in members)


def _parse_sets(loaded: LoadedTopology, literals: Sequence[str]) -> list[MSet]:
    return [loaded.space.parse(text) for text in literals]


def cmd_validate(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    report = loaded.report
    lines = [f"valid: {report.valid}"]
    lines += [f"  {v.axiom}: {v.message}" for v in report.violations]
    if report.duplicates:
        lines.append(f"  duplicates removed: {report.duplicates}")
    lines += [f"note: {n}" for n in report.notes]
    out.emit(report.to_dict(), "\n".join(lines))
    return EXIT_OK if report.valid else EXIT_FAIL


def cmd_interior(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    (a,) = _parse_sets(loaded, [args.set])
    result = interior(loaded.topology, a)
    out.emit({"set": str(a), "interior": str(result)}, str(result))
    return EXIT_OK


def cmd_closure(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    (a,) = _parse_sets(loaded, [args.set])
    result = closure(loaded.topology, a, cross_check=True)
    out.emit({"set": str(a), "closure": str(result)}, str(result))
    return EXIT_OK


def cmd_subspace(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    (n,) = _parse_sets(loaded, [args.set])
    sub = subspace(loaded.topology, n)
    payload = {"ground": str(n), "tau": [str(u) for u in sub.family]}
    out.emit(payload, _family_text(sub.family))
    return EXIT_OK


def cmd_basis(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    members = _parse_sets(loaded, args.member) if args.member else loaded.basis
    if not members:
        raise MSetError("no basis given: pass --member or add a 'basis' key to the file")
    report = validate_basis(loaded.ground, members)
    payload: dict[str, Any] = {"basis": report.to_dict()}
    lines = [f"basis valid: {report.valid}"]
    lines += [f"  {v.axiom}: {v.message}" for v in report.violations]
    lines += [f"  {n}" for n in report.notes]
    if report.valid:
        generated = topology_from_basis(loaded.ground, members)
        payload["tau"] = [str(u) for u in generated.family]
        lines += ["generated topology:", _family_text(generated.family)]
    out.emit(payload, "\n".join(lines))
    return EXIT_OK if report.valid else EXIT_FAIL


def _semi_list(
    args: argparse.Namespace, settings: Settings, out: Output, som: bool
) -> int:
    loaded = load_topology(args.file)
    f = enumerate_semi(loaded.topology, settings.enum_budget)
    members = f.som if som else f.scm
    key = "som" if som else "scm"
    out.emit({key: [str(m) for m in members], "count": len(members)}, _family_text(members))
    return EXIT_OK


def _semi_check(
    args: argparse.Namespace, settings: Settings, out: Output, som: bool
) -> int:
    loaded = load_topology(args.file)
    (a,) = _parse_sets(loaded, [args.set])
    check = is_semi_open if som else is_semi_closed
    answer = check(loaded.topology, a, args.algorithm)
    label = "semi open" if som else "semi closed"
    witness = None if answer.witness is None else str(answer.witness)
    text = f"{a} is {'' if answer.holds else 'not '}{label}"
    if witness is not None:
        text += f" (witness {witness})"
    out.emit({"set": str(a), "holds": answer.holds, "witness": witness}, text)
    return EXIT_OK if answer.holds else EXIT_FAIL


def cmd_som(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    if args.action == "list":
        return _semi_list(args, settings, out, som=True)
    return _semi_check(args, settings, out, som=True)


def cmd_scm(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    if args.action == "list":
        return _semi_list(args, settings, out, som=False)
    return _semi_check(args, settings, out, som=False)


def cmd_sint(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    (a,) = _parse_sets(loaded, [args.set])
    result = semi_interior(enumerate_semi(loaded.topology, settings.enum_budget), a)
    out.emit({"set": str(a), "semi_interior": str(result)}, str(result))
    return EXIT_OK


def cmd_scl(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    (a,) = _parse_sets(loaded, [args.set])
    result = semi_closure(enumerate_semi(loaded.topology, settings.enum_budget), a)
    out.emit({"set": str(a), "semi_closure": str(result)}, str(result))
    return EXIT_OK


def cmd_checklist(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    (a,) = _parse_sets(loaded, [args.set])
    report = condition_checklist(enumerate_semi(loaded.topology, settings.enum_budget), a)
    lines = [f"{a}: SOM {report.is_som}, SCM {report.is_scm}"]
    lines += [f"  som {name}: {value}" for name, value in report.som_conditions.items()]
    lines += [f"  scm {name}: {value}" for name, value in report.scm_conditions.items()]
    out.emit(report.to_dict(), "\n".join(lines))
    return EXIT_OK if report.sound else EXIT_FAIL


def _cover_args(args: argparse.Namespace, loaded: LoadedTopology) -> Cover:
    members = _parse_sets(loaded, args.members)
    target = loaded.ground if args.target is None else loaded.space.parse(args.target)
    return Cover(target, tuple(members))


def cmd_cover(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    cover = _cover_args(args, loaded)
    f = enumerate_semi(loaded.topology, settings.enum_budget)
    holds = is_semi_open_cover(f, cover.members, cover.target)
    non_som = [str(m) for m in cover.members if not f.is_som(m)]
    text = f"semi open cover of {cover.target}: {holds}"
    if non_som:
        text += f"\n  not semi open: {', '.join(non_som)}"
    out.emit({**cover.to_dict(), "is_semi_open_cover": holds, "not_som": non_som}, text)
    return EXIT_OK if holds else EXIT_FAIL


def cmd_subcover(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    cover = _cover_args(args, loaded)
    found = find_subcover(loaded.topology, cover, args.filter, settings.enum_budget)
    if found is None:
        out.emit({"filter": args.filter, "subcover": None}, f"no {args.filter} subcover")
        return EXIT_FAIL
    payload = {"filter": args.filter, "subcover": found.to_dict()}
    out.emit(payload, _family_text(found.members))
    return EXIT_OK


def cmd_compact(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    f = enumerate_semi(loaded.topology, settings.enum_budget)
    verdict = decide_compactness(
        f, args.variant, settings.cover_budget, exhaustive=args.exhaustive
    )
    payload = verdict.to_dict()
    lines = [f"{args.variant}: {'holds' if verdict.holds else 'fails'}"]
    if verdict.witness is not None:
        payload["witness_revalidates"] = witness_revalidates(f, verdict)
        lines.append("witness cover:")
        lines.append(_family_text(verdict.witness.members))
    out.emit(payload, "\n".join(lines))
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_fip(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    loaded = load_topology(args.file)
    if args.members:
        members = _parse_sets(loaded, args.members)
        holds = has_fip(members)
        out.emit({"members": [str(m) for m in members], "fip": holds}, f"FIP: {holds}")
        return EXIT_OK if holds else EXIT_FAIL

    f = enumerate_semi(loaded.topology, settings.enum_budget)
    reports = []
    skipped: dict[str, BudgetExceededError] = {}
    for name, check in (("fip-scm", check_fip_scm), ("fip-scl", check_fip_scl)):
        try:
            reports.append(
                check(f, args.variant, settings.cover_budget, settings.enum_budget)
            )
        except BudgetExceededError as e:
            skipped[f"{name}[{args.variant}]"] = e
    if not reports:
        raise next(iter(skipped.values()))
    lines = [
        f"{r.claim}: compact {r.left}, FIP side {r.right}, "
        f"{'agree' if r.agree else 'DISAGREE'} ({r.collections_checked} collections)"
        for r in reports
    ]
    lines += [f"{claim}: skipped, {reason}" for claim, reason in skipped.items()]
    payload = {
        "reports": [r.to_dict() for r in reports],
        "skipped": {claim: str(e) for claim, e in skipped.items()},
    }
    out.emit(payload, "\n".join(lines))
    return EXIT_OK if all(r.agree for r in reports) else EXIT_FAIL


def _resolve_corpus(sources: Sequence[str], settings: Settings) -> Corpus:
    if list(sources) == ["exhaustive"]:
        return exhaustive_corpus()
    if list(sources) == ["random"]:
        cfg = GenConfig(
            max_domain=settings.max_domain,
            max_w=settings.max_w,
            seed=settings.seed,
            density=settings.density,
            trials=settings.trials,
            family_budget=settings.family_budget,
        )
        return random_corpus(cfg)
    paths: list[Path] = []
    for source in sources:
        path = Path(source)
        paths.extend(list_fixtures(path) if path.is_dir() else [path])
    topologies = [load_topology(p).topology for p in paths]
    return fixture_corpus(topologies, ",".join(str(p) for p in paths))


def _save_report(args: argparse.Namespace, payload: dict[str, Any]) -> None:
    if args.save_report:
        write_to_file(args.save_report, dump_json(payload))


def cmd_verify(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    corpus = _resolve_corpus(args.corpus, settings)
    verifier = PropertyVerifier(settings, quiet=args.quiet or args.output == "json")
    report = verifier.verify(args.claim, corpus)
    payload = report.to_dict(timing=not args.no_timing)
    _save_report(args, payload)
    out.emit(payload, verifier.summary(report))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_mine(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    corpus = _resolve_corpus(args.corpus, settings)
    miner = RemarkMiner(settings, quiet=args.quiet or args.output == "json")
    report = miner.mine(args.remark, corpus)
    payload = report.to_dict(timing=not args.no_timing)
    _save_report(args, payload)
    if args.save_fixture and report.found is not None:
        save_topology(report.found.topology, args.save_fixture)
    out.emit(payload, miner.mining_summary(report))
    return EXIT_OK if report.found is not None else EXIT_FAIL


def cmd_catalogue(args: argparse.Namespace, settings: Settings, out: Output) -> int:
    claims = {k: c.description for k, c in CLAIMS.items()}
    remarks = {k: c.description for k, c in REMARKS.items()}
    lines = ["claims:"] + [f"  {k}: {d}" for k, d in claims.items()]
    lines += ["remarks:"] + [f"  {k}: {d}" for k, d in remarks.items()]
    out.emit({"claims": claims, "remarks": remarks}, "\n".join(lines))
    return EXIT_OK


Handler = Callable[[argparse.Namespace, Settings, Output], int]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--output",
        choices=["text", "json"],
        default="text",
        help="Report format (default: text)",
    )
    common.add_argument(
        "--budget",
        type=int,
        default=None,
        help="Power-family enumeration budget (default: MSETTOP_ENUM_BUDGET or 1000000)",
    )
    common.add_argument(
        "--cover-budget",
        type=int,
        default=None,
        help="Subfamily enumeration budget (default: MSETTOP_COVER_BUDGET or 4096)",
    )
    common.add_argument("--seed", type=int, default=None, help="Random corpus seed")
    common.add_argument("--trials", type=int, default=None, help="Random corpus size")
    common.add_argument(
        "--max-domain", type=int, default=None, help="Random corpus bound on |X|"
    )
    common.add_argument(
        "--max-w", type=int, default=None, help="Random corpus multiplicity bound"
    )
    common.add_argument(
        "--density",
        type=float,
        default=None,
        help="Random corpus probability of seeding each sub-M-set",
    )
    common.add_argument(
        "--workers",
        type=int,
        default=None,
        help="Worker processes for corpus sweeps (0 = physical cores)",
    )
    common.add_argument("--quiet", action="store_true", help="Hide progress bars")
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    common.add_argument(
        "--log-dir",
        type=str,
        default=None,
        help="Also write msettop.log into this directory",
    )

    parser = argparse.ArgumentParser(
        description="Finite multiset topology: M-topologies, semi open M-sets and "
        "semi compactness"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Handler, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(handler=handler)
        return p

    p = add("validate", cmd_validate, "Check a topology file against the axioms")
    p.add_argument("file", type=str)

    for name, handler, help in (
        ("interior", cmd_interior, "Interior of an M-set"),
        ("closure", cmd_closure, "Closure of an M-set"),
        ("subspace", cmd_subspace, "Relative topology on a sub-M-set"),
        ("sint", cmd_sint, "Semi interior of an M-set"),
        ("scl", cmd_scl, "Semi closure of an M-set"),
        ("checklist", cmd_checklist, "Sufficient conditions for SOM and SCM"),
    ):
        p = add(name, handler, help)
        p.add_argument("file", type=str)
        p.add_argument("set", type=str, help="M-set literal, e.g. '{1/a, 2/b}'")

    p = add("basis", cmd_basis, "Validate a basis and generate its topology")
    p.add_argument("file", type=str)
    p.add_argument("--member", action="append", default=[], help="Basis element")

    for name, handler in (("som", cmd_som), ("scm", cmd_scm)):
        p = add(name, handler, f"List or check {name.upper()}-sets")
        p.add_argument("action", choices=["list", "check"])
        p.add_argument("file", type=str)
        p.add_argument("set", type=str, nargs="?", default=None)
        p.add_argument(
            "--algorithm",
            choices=["witness", "criterion", "both"],
            default="both",
            help="Membership algorithm for 'check' (default: both, cross-checked)",
        )

    p = add("cover", cmd_cover, "Check a semi open cover")
    p.add_argument("action", choices=["check"])
    p.add_argument("file", type=str)
    p.add_argument("members", type=str, nargs="+")
    p.add_argument("--target", type=str, default=None)

    p = add("subcover", cmd_subcover, "Smallest qualifying subcover of a cover")
    p.add_argument("file", type=str)
    p.add_argument("members", type=str, nargs="+")
    p.add_argument("--target", type=str, default=None)
    p.add_argument(
        "--filter",
        choices=["any", "whole", "partial_whole", "full"],
        default="any",
    )

    p = add("compact", cmd_compact, "Decide a semi compactness variant")
    p.add_argument("file", type=str)
    p.add_argument("--variant", choices=list(VARIANTS), default="semi")
    p.add_argument(
        "--exhaustive",
        action="store_true",
        help="Enumerate every subfamily instead of the pruned decision",
    )

    p = add("fip", cmd_fip, "FIP of given M-sets, or both FIP characterisations")
    p.add_argument("file", type=str)
    p.add_argument("members", type=str, nargs="*")
    p.add_argument("--variant", choices=list(VARIANTS), default="semi")

    for name, handler, flag, choices in (
        ("verify", cmd_verify, "--claim", sorted(CLAIMS)),
        ("mine", cmd_mine, "--remark", sorted(REMARKS)),
    ):
        p = add(name, handler, f"Run a {flag[2:]} over a corpus")
        p.add_argument(flag, choices=choices, required=True)
        p.add_argument(
            "--corpus",
            nargs="+",
            default=["exhaustive"],
            help="'exhaustive', 'random', or topology files/directories",
        )
        p.add_argument("--save-report", type=str, default=None)
        if name == "mine":
            p.add_argument(
                "--save-fixture",
                type=str,
                default=None,
                help="Write the witness topology as a fixture file",
            )
        p.add_argument(
            "--no-timing",
            action="store_true",
            help="Omit elapsed_ms so the report is byte-stable",
        )

    add("catalogue", cmd_catalogue, "List claim and remark ids")
    return parser


def main(argv: Sequence[str] | None = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command in ("som", "scm") and args.action == "check" and args.set is None:
        print(f"Error: '{args.command} check' needs an M-set literal", file=sys.stderr)
        sys.exit(EXIT_FAIL)

    setup_logging(
        Path(args.log_dir) if args.log_dir else None,
        logging.DEBUG if args.verbose else logging.WARNING,
    )

    try:
        settings = load_settings(
            enum_budget=args.budget,
            cover_budget=args.cover_budget,
            seed=args.seed,
            trials=args.trials,
            workers=args.workers,
            max_domain=args.max_domain,
            max_w=args.max_w,
            density=args.density,
        )
        code = args.handler(args, settings, Output(args.output))
    except BudgetExceededError as e:
        print(f"Error: budget exceeded: {e}", file=sys.stderr)
        sys.exit(EXIT_BUDGET)
    except (MSetError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_FAIL)
    except FileNotFoundError as e:
        print(f"Error: file not found: {e.filename}", file=sys.stderr)
        sys.exit(EXIT_FAIL)

    sys.exit(code)


if __name__ == "__main__":
    main()
