from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.controller import (
    load_settings,
    load_topology,
    parse_topology_json,
    save_topology,
    topology_from_dict,
    topology_to_dict,
)
from src.harness import GenConfig, generate_topology
from src.mset import MSpace, complement_in, enumerate_power
from src.topology import (
    UNION_REDUCTION_NOTE,
    MTopology,
    close_under_pairs,
    closure,
    interior,
    subspace,
    topology_from_basis,
    validate_basis,
    validate_topology,
)
from src.utils import (
    BasisGenerationError,
    MalformedFamilyError,
    MSetError,
    NotASubsetError,
    ParseError,
)


def test_reference_space_validates(reference: MTopology) -> None:
    report = validate_topology(reference.ground, reference.family)
    assert report.valid
    assert report.topology == reference
    assert UNION_REDUCTION_NOTE in report.notes
    assert len(reference) == 6


def test_closed_family(reference: MTopology) -> None:
    assert [str(k) for k in reference.closed] == [
        "{}",
        "{3/c}",
        "{4/a}",
        "{4/a, 3/c}",
        "{5/a, 2/b}",
        "{5/a, 2/b, 3/c}",
    ]
    s = reference.space
    assert reference.is_clopen(s.parse("{3/c}"))
    assert reference.is_open(s.parse("{1/a, 2/b}"))
    assert not reference.is_closed(s.parse("{1/a, 2/b}"))


def test_missing_empty_reported(fixture_dir) -> None:
    loaded = load_topology(fixture_dir / "invalid" / "missing_empty.json")
    assert not loaded.report.valid
    assert "empty M-set absent" in [v.message for v in loaded.report.violations]
    with pytest.raises(Exception, match="empty M-set absent"):
        _ = loaded.topology


def test_pair_gap_witness() -> None:
    space = MSpace(("a", "b"), 1)
    ground = space.mset(a=1, b=1)
    a, b = space.mset(a=1), space.mset(b=1)
    assert validate_topology(ground, [ground, space.empty(), a, b]).valid

    report = validate_topology(ground, [ground, a, b])
    axioms = {v.axiom: v for v in report.violations}
    assert set(axioms) == {"empty", "intersection"}
    assert axioms["intersection"].witness == (b, a)


def test_duplicates_counted() -> None:
    space = MSpace(("a",), 2)
    ground = space.mset(a=2)
    report = validate_topology(ground, [ground, space.empty(), ground])
    assert report.valid and report.duplicates == 1


def test_member_outside_ground() -> None:
    space = MSpace(("a", "b"), 2)
    with pytest.raises(MalformedFamilyError):
        validate_topology(space.mset(a=1), [space.mset(a=2)])


def test_interior_examples(reference: MTopology) -> None:
    s = reference.space
    assert interior(reference, s.parse("{4/a, 2/b}")) == s.parse("{1/a, 2/b}")
    assert interior(reference, reference.ground) == reference.ground
    assert interior(reference, s.empty()) == s.empty()
    assert interior(reference, s.parse("{4/a}")) == s.empty()
    with pytest.raises(NotASubsetError):
        interior(reference, s.parse("{3/b}"))


def test_closure_examples(reference: MTopology) -> None:
    s = reference.space
    assert closure(reference, s.parse("{1/a, 2/b}"), cross_check=True) == s.parse("{5/a, 2/b}")
    assert closure(reference, reference.ground) == reference.ground
    assert closure(reference, s.empty()) == s.empty()
    assert closure(reference, s.parse("{3/c}")) == s.parse("{3/c}")


def test_subspace(reference: MTopology) -> None:
    s = reference.space
    n = s.parse("{1/a, 2/b, 3/c}")
    sub = subspace(reference, n)
    assert [str(u) for u in sub.family] == ["{}", "{3/c}", "{1/a, 2/b}", "{1/a, 2/b, 3/c}"]
    assert validate_topology(n, sub.family).valid
    assert subspace(reference, reference.ground) == reference
    assert subspace(reference, s.empty()).family == (s.empty(),)


def test_basis_of_reference_is_itself(reference: MTopology) -> None:
    assert validate_basis(reference.ground, reference.family).valid
    assert topology_from_basis(reference.ground, reference.family) == reference


def test_basis_generates_discrete_pair() -> None:
    space = MSpace(("a", "b"), 1)
    ground = space.mset(a=1, b=1)
    t = topology_from_basis(ground, [space.mset(a=1), space.mset(b=1)])
    assert [str(u) for u in t.family] == ["{}", "{1/b}", "{1/a}", "{1/a, 1/b}"]


def test_basis_refinement_witness() -> None:
    space = MSpace(("a", "b"), 2)
    ground = space.mset(a=2, b=1)
    p, q = space.mset(a=2), space.mset(a=1, b=1)
    report = validate_basis(ground, [p, q])
    assert not report.valid
    (violation,) = report.violations
    assert violation.axiom == "basis-refinement"
    assert violation.witness == (q, p) or violation.witness == (p, q)
    assert any("1/a" in note for note in report.notes)


def test_basis_cover_clause() -> None:
    space = MSpace(("a", "b"), 1)
    report = validate_basis(space.mset(a=1, b=1), [space.mset(a=1)])
    assert [v.axiom for v in report.violations] == ["basis-cover"]


def test_basis_generation_failure() -> None:
    space = MSpace(("a", "b", "c"), 1)
    ground = space.mset(a=1, b=1, c=1)
    # unions of these miss the meet {1/b}
    with pytest.raises(BasisGenerationError) as exc:
        topology_from_basis(ground, [space.mset(a=1, b=1), space.mset(b=1, c=1)])
    assert exc.value.witness.axiom in {"intersection", "ground"}


def test_basis_fixture(fixture_dir) -> None:
    loaded = load_topology(fixture_dir / "basis_example.json")
    assert loaded.basis is not None
    assert topology_from_basis(loaded.ground, loaded.basis) == loaded.topology


def test_close_under_pairs() -> None:
    space = MSpace(("a", "b"), 2)
    family = close_under_pairs([space.mset(a=2), space.mset(a=1, b=2)])
    assert family == {
        space.mset(a=2),
        space.mset(a=1, b=2),
        space.mset(a=2, b=2),
        space.mset(a=1),
    }


class TestTopologyFiles:
    def test_round_trip(self, reference: MTopology) -> None:
        assert topology_from_dict(topology_to_dict(reference)) == reference

    def test_missing_key(self) -> None:
        with pytest.raises(ParseError, match="'tau'"):
            parse_topology_json('{"domain": ["a"], "w": 1, "M": {"a": 1}}')

    def test_json_error_has_position(self) -> None:
        with pytest.raises(ParseError) as exc:
            parse_topology_json('{"domain": ["a"],\n  "w": }')
        assert exc.value.line == 2

    def test_unknown_symbol(self) -> None:
        with pytest.raises(ParseError, match="not in domain"):
            parse_topology_json(
                '{"domain": ["a"], "w": 1, "M": {"a": 1}, "tau": [{"b": 1}]}'
            )


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), index=st.integers(0, 50), pick=st.data())
def test_operator_laws_on_generated_spaces(seed: int, index: int, pick: st.DataObject) -> None:
    t = generate_topology(GenConfig(max_domain=3, max_w=2, seed=seed), index)
    assert validate_topology(t.ground, t.family).valid
    power = enumerate_power(t.ground)
    a = pick.draw(st.sampled_from(power))
    b = pick.draw(st.sampled_from(power))

    i, c = interior(t, a), closure(t, a)
    assert t.is_open(i) and t.is_closed(c)
    assert i <= a <= c
    assert interior(t, i) == i and closure(t, c) == c
    assert c == complement_in(interior(t, complement_in(a, t.ground)), t.ground)
    if a <= b:
        assert interior(t, a) <= interior(t, b)
        assert closure(t, a) <= closure(t, b)
    assert validate_topology(a, subspace(t, a).family).valid


def test_basis_survives_save(fixture_dir: Path, tmp_path: Path) -> None:
    loaded = load_topology(fixture_dir / "basis_example.json")
    assert "basis" not in topology_to_dict(loaded.topology)
    path = tmp_path / "basis.json"
    save_topology(loaded.topology, path, loaded.basis)
    again = load_topology(path)
    assert again.basis == loaded.basis
    assert again.topology == loaded.topology


def test_semantic_json_errors_name_the_key() -> None:
    text = '{"domain": ["a"], "w": 2, "M": {"a": 2}, "tau": [{}, {"a": 3}]}'
    with pytest.raises(ParseError, match=r"tau\[1\]\.a: count 3") as exc:
        parse_topology_json(text)
    assert exc.value.line is None


def test_symbol_syntax_checked_on_load() -> None:
    with pytest.raises(ParseError, match="must be non-empty"):
        parse_topology_json('{"domain": ["a b"], "w": 1, "M": {}, "tau": []}')


def test_settings_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("MSETTOP_MAX_W", "5")
    monkeypatch.setenv("MSETTOP_DENSITY", "0.5")
    env = load_settings(max_domain=2)
    assert (env.max_domain, env.max_w, env.density) == (2, 5, 0.5)
    monkeypatch.setenv("MSETTOP_DENSITY", "dense")
    with pytest.raises(MSetError, match="MSETTOP_DENSITY"):
        load_settings()
