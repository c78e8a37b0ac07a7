import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from dotenv import load_dotenv

from src.mset import DEFAULT_ENUM_BUDGET, MSet, MSpace, mset_from_json
from src.topology import MTopology, ValidationReport, validate_topology
from src.utils import MSetError, ParseError, dump_json, read_file, write_to_file

DEFAULT_FIXTURE_DIR = Path(__file__).resolve().parents[2] / "data" / "fixtures"


@dataclass(frozen=True)
class Settings:
    enum_budget: int = DEFAULT_ENUM_BUDGET
    cover_budget: int = 4096
    family_budget: int = 4096
    seed: int = 0
    trials: int = 500
    workers: int = 1
    max_domain: int = 3
    max_w: int = 3
    density: float = 0.3


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise MSetError(f"environment variable {name} must be an integer, got {raw!r}")


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise MSetError(f"environment variable {name} must be a number, got {raw!r}")


def load_settings(**overrides: float | None) -> Settings:
    """Settings from the environment (and a .env file), then explicit overrides."""
    load_dotenv()
    values: dict[str, Any] = {
        "enum_budget": _env_int("MSETTOP_ENUM_BUDGET", Settings.enum_budget),
        "cover_budget": _env_int("MSETTOP_COVER_BUDGET", Settings.cover_budget),
        "family_budget": _env_int("MSETTOP_FAMILY_BUDGET", Settings.family_budget),
        "seed": _env_int("MSETTOP_SEED", Settings.seed),
        "trials": _env_int("MSETTOP_TRIALS", Settings.trials),
        "workers": _env_int("MSETTOP_WORKERS", Settings.workers),
        "max_domain": _env_int("MSETTOP_MAX_DOMAIN", Settings.max_domain),
        "max_w": _env_int("MSETTOP_MAX_W", Settings.max_w),
        "density": _env_float("MSETTOP_DENSITY", Settings.density),
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Settings(**values)


@dataclass
class LoadedTopology:
    """A parsed topology file: the normalised pieces plus the validation outcome."""

    space: MSpace
    ground: MSet
    family: list[MSet]
    report: ValidationReport
    basis: list[MSet] | None = None

    @property
    def topology(self) -> MTopology:
        if self.report.topology is None:
            messages = "; ".join(v.message for v in self.report.violations)
            raise MSetError(f"not an M-topology: {messages}")
        return self.report.topology


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise ParseError(message)


def parse_topology_json(text: str) -> LoadedTopology:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None

    _expect(isinstance(data, dict), "topology file must hold a JSON object")
    for key in ("domain", "w", "M", "tau"):
        _expect(key in data, f"missing key {key!r}")
    domain = data["domain"]
    _expect(
        isinstance(domain, list) and all(isinstance(x, str) for x in domain),
        "'domain' must be a list of symbols",
    )
    _expect(
        isinstance(data["w"], int) and not isinstance(data["w"], bool),
        "'w' must be an integer",
    )
    try:
        space = MSpace(tuple(domain), data["w"])
    except ValueError as e:
        raise ParseError(str(e)) from None

    ground = mset_from_json(data["M"], space, "M")
    _expect(isinstance(data["tau"], list), "'tau' must be a list of M-set objects")
    family = [
        mset_from_json(member, space, f"tau[{i}]") for i, member in enumerate(data["tau"])
    ]
    basis = None
    if "basis" in data:
        _expect(isinstance(data["basis"], list), "'basis' must be a list of M-set objects")
        basis = [
            mset_from_json(member, space, f"basis[{i}]")
            for i, member in enumerate(data["basis"])
        ]

    report = validate_topology(ground, family)
    return LoadedTopology(space, ground, family, report, basis)


def load_topology(path: str | Path) -> LoadedTopology:
    return parse_topology_json(read_file(path))


def topology_to_dict(
    t: MTopology, basis: Sequence[MSet] | None = None
) -> dict[str, Any]:
    data: dict[str, Any] = {
        "domain": list(t.space.domain),
        "w": t.space.w,
        "M": t.ground.to_json(),
        "tau": [u.to_json() for u in t.family],
    }
    if basis is not None:
        data["basis"] = [b.to_json() for b in basis]
    return data


def topology_from_dict(data: dict[str, Any]) -> MTopology:
    return parse_topology_json(json.dumps(data)).topology


def save_topology(
    t: MTopology, path: str | Path, basis: Sequence[MSet] | None = None
) -> None:
    write_to_file(path, dump_json(topology_to_dict(t, basis)))


def list_fixtures(path: str | Path = DEFAULT_FIXTURE_DIR) -> list[Path]:
    return sorted(p for p in Path(path).glob("*.json") if p.is_file())
