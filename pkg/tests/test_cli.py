import json
from pathlib import Path

import pytest

import msettop
from src.controller import load_topology

from test_semi import REFERENCE_SOM


def run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str, str]:
    with pytest.raises(SystemExit) as exc:
        msettop.main(list(argv))
    captured = capsys.readouterr()
    return int(exc.value.code or 0), captured.out, captured.err


@pytest.fixture
def ref_file(fixture_dir: Path) -> str:
    return str(fixture_dir / "reference_space.json")


def test_validate_ok(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, out, _ = run(capsys, "validate", ref_file)
    assert code == 0
    assert out.startswith("valid: True")


def test_validate_missing_empty(capsys: pytest.CaptureFixture[str], fixture_dir: Path) -> None:
    broken = str(fixture_dir / "invalid" / "missing_empty.json")
    code, out, _ = run(capsys, "validate", broken)
    assert code == 1
    assert "empty M-set absent" in out


def test_som_list_golden(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, out, _ = run(capsys, "som", "list", ref_file)
    assert code == 0
    assert out.splitlines() == REFERENCE_SOM


def test_som_list_json(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, out, _ = run(capsys, "som", "list", ref_file, "--output", "json")
    assert code == 0
    assert json.loads(out) == {"som": REFERENCE_SOM, "count": 12}


def test_som_check(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, out, _ = run(capsys, "som", "check", ref_file, "{2/a, 2/b}")
    assert code == 0
    assert "witness {1/a, 2/b}" in out
    code, _, _ = run(capsys, "som", "check", ref_file, "{4/a}")
    assert code == 1


def test_scm_check_needs_literal(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, _, err = run(capsys, "scm", "check", ref_file)
    assert code == 1
    assert err.startswith("Error:")


@pytest.mark.parametrize(
    "command, literal, expected",
    [
        ("interior", "{4/a, 2/b}", "{1/a, 2/b}"),
        ("closure", "{1/a, 2/b}", "{5/a, 2/b}"),
        ("scl", "{4/a}", "{4/a}"),
        ("sint", "{4/a, 2/b}", "{4/a, 2/b}"),
    ],
)
def test_operators(
    capsys: pytest.CaptureFixture[str], ref_file: str, command: str, literal: str, expected: str
) -> None:
    code, out, _ = run(capsys, command, ref_file, literal)
    assert code == 0
    assert out.strip() == expected


def test_subspace(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, out, _ = run(capsys, "subspace", ref_file, "{1/a, 2/b, 3/c}")
    assert code == 0
    assert out.splitlines() == ["{}", "{3/c}", "{1/a, 2/b}", "{1/a, 2/b, 3/c}"]


def test_basis_from_file(capsys: pytest.CaptureFixture[str], fixture_dir: Path) -> None:
    code, out, _ = run(capsys, "basis", str(fixture_dir / "basis_example.json"))
    assert code == 0
    assert "{2/a, 2/b}" in out


def test_checklist(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, out, _ = run(capsys, "checklist", ref_file, "{2/a, 2/b}", "--output", "json")
    assert code == 0
    data = json.loads(out)
    assert data["som"]["holds"] and data["sound"]
    assert not data["som"]["conditions"]["open"]


def test_cover_check(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, _, _ = run(capsys, "cover", "check", ref_file, "{5/a, 2/b}", "{3/c}")
    assert code == 0
    code, _, _ = run(capsys, "cover", "check", ref_file, "{1/a, 2/b}", "{3/c}")
    assert code == 1


def test_subcover_filter(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    members = ("{5/a, 2/b}", "{1/a, 2/b, 3/c}")
    code, _, _ = run(capsys, "subcover", ref_file, *members, "--filter", "whole")
    assert code == 1
    code, out, _ = run(capsys, "subcover", ref_file, *members, "--filter", "partial_whole")
    assert code == 0
    assert out.splitlines() == ["{1/a, 2/b, 3/c}", "{5/a, 2/b}"]


@pytest.mark.parametrize(
    "variant, expected",
    [("semi", 0), ("semi_whole", 1), ("semi_partial_whole", 0), ("semi_full", 1)],
)
def test_compact_exit_codes(
    capsys: pytest.CaptureFixture[str], ref_file: str, variant: str, expected: int
) -> None:
    code, out, _ = run(capsys, "compact", ref_file, "--variant", variant, "--output", "json")
    assert code == expected
    data = json.loads(out)
    assert data["holds"] is (expected == 0)
    if expected:
        assert data["witness_revalidates"] is True


def test_compact_budget_exit(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, _, err = run(
        capsys, "compact", ref_file, "--variant", "semi_whole", "--exhaustive",
        "--cover-budget", "16",
    )
    assert code == 2
    assert "budget" in err


def test_fip(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, _, _ = run(capsys, "fip", ref_file, "{5/a, 2/b}", "{3/c}")
    assert code == 1
    code, _, _ = run(capsys, "fip", ref_file, "{5/a, 2/b}", "{1/a, 2/b, 3/c}")
    assert code == 0


def test_parse_error(capsys: pytest.CaptureFixture[str], ref_file: str) -> None:
    code, _, err = run(capsys, "interior", ref_file, "{9/a}")
    assert code == 1
    assert "Error:" in err and "column" in err


def test_missing_file(capsys: pytest.CaptureFixture[str]) -> None:
    code, _, err = run(capsys, "validate", "no/such/file.json")
    assert code == 1
    assert "not found" in err


def test_verify_exhaustive(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(
        capsys, "verify", "--claim", "semi-equivalence", "--quiet", "--output", "json",
        "--no-timing",
    )
    assert code == 0
    data = json.loads(out)
    assert data["violation_count"] == 0
    assert data["corpus"]["kind"] == "exhaustive"
    assert "elapsed_ms" not in data


def test_mine_on_fixture(capsys: pytest.CaptureFixture[str], ref_file: str, tmp_path: Path) -> None:
    report_path = tmp_path / "report.json"
    code, out, _ = run(
        capsys, "mine", "--remark", "som-not-open", "--corpus", ref_file,
        "--save-report", str(report_path), "--quiet",
    )
    assert code == 0
    assert "{2/a, 2/b}" in out
    saved = json.loads(report_path.read_text(encoding="utf-8"))
    assert saved["status"] == "found"
    assert saved["counterexample"]["offending"] == {"som": "{2/a, 2/b}"}


def test_mine_pins_witness_fixture(
    capsys: pytest.CaptureFixture[str], fixture_dir: Path, tmp_path: Path
) -> None:
    pinned = tmp_path / "witness.json"
    source = fixture_dir / "som_intersection.json"
    code, _, _ = run(
        capsys, "mine", "--remark", "scm-union", "--corpus", str(source),
        "--save-fixture", str(pinned), "--quiet",
    )
    assert code == 0
    assert load_topology(pinned).topology == load_topology(source).topology


def test_mine_fixture_directory(capsys: pytest.CaptureFixture[str], fixture_dir: Path) -> None:
    code, _, _ = run(
        capsys, "mine", "--remark", "som-intersection", "--corpus", str(fixture_dir),
        "--quiet",
    )
    assert code == 0


def test_catalogue(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "catalogue", "--output", "json")
    assert code == 0
    data = json.loads(out)
    assert "som-union" in data["claims"] and "scm-union" in data["remarks"]


def test_fip_characterisations_on_reference(
    capsys: pytest.CaptureFixture[str], ref_file: str
) -> None:
    # P(M) has 72 members, too many for the semi closure sweep
    code, out, _ = run(capsys, "fip", ref_file)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("fip-scm[semi]: compact True, FIP side True, agree")
    assert lines[1].startswith("fip-scl[semi]: skipped")

    code, out, _ = run(capsys, "fip", ref_file, "--output", "json")
    assert code == 0
    data = json.loads(out)
    assert [r["claim"] for r in data["reports"]] == ["fip-scm[semi]"]
    assert "72 exceeds budget 12" in data["skipped"]["fip-scl[semi]"]


def test_fip_budget_when_nothing_runs(
    capsys: pytest.CaptureFixture[str], ref_file: str
) -> None:
    code, _, err = run(capsys, "fip", ref_file, "--cover-budget", "8")
    assert code == 2
    assert "budget" in err


def test_random_corpus_bounds(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(
        capsys, "verify", "--claim", "som-union", "--corpus", "random", "--trials", "6",
        "--seed", "3", "--max-domain", "2", "--max-w", "5", "--density", "0.5",
        "--quiet", "--output", "json", "--no-timing",
    )
    assert code == 0
    corpus = json.loads(out)["corpus"]
    assert corpus["bounds"] == {"max_domain": 2, "max_w": 5, "density": 0.5}
    assert corpus["seed"] == 3 and corpus["size"] == 6


def test_random_corpus_bad_density(capsys: pytest.CaptureFixture[str]) -> None:
    code, _, err = run(
        capsys, "verify", "--claim", "som-union", "--corpus", "random",
        "--density", "1.5",
    )
    assert code == 1
    assert "density" in err
