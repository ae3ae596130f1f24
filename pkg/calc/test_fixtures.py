import json

import pytest

from cyccohom import GradedAction
from f2poly import Presentation, graded_dimension
from fixtures import (
    FixtureError,
    bundled_fixtures,
    fixtures_of_kind,
    load_cokernel_tables,
    load_fixture,
    load_identity_suite,
    load_ring,
    read_fixture,
)
from isotropy import RepMatrixGroup
from series import expand, parse_series


def _write(tmp_path, name, payload):
    path = tmp_path / f"{name}.json"
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
    return path


@pytest.mark.parametrize("name", bundled_fixtures())
def test_every_bundled_fixture_loads(name):
    assert load_fixture(name) is not None


def test_kinds():
    assert isinstance(load_fixture("m16_swap"), GradedAction)
    assert isinstance(load_fixture("q8_rep"), RepMatrixGroup)
    assert isinstance(load_ring("sd16_ring"), Presentation)
    assert len(load_identity_suite()) >= 15
    assert set(fixtures_of_kind("cokernel_table")) == {"q2_table", "q3_table", "q5_table", "q7_table", "q11_table"}


@pytest.mark.parametrize("name", ["m16_target", "sd16_ring", "m16_e2", "sd16_e2", "d8c4_zero_line"])
def test_ring_fixtures_match_their_series(name):
    fx = read_fixture(name)
    pres = load_ring(name)
    assert [graded_dimension(pres, d) for d in range(16)] == expand(parse_series(fx.series), 15)


def test_tabulated_cokernels():
    tables = load_cokernel_tables()
    assert tables[(2, 3)].counts == {1: 3, 2: 3, 4: 1}
    assert tables[(11, 2)].summand_count == 120
    for (p, n), group in tables.items():
        assert group.summand_count == p ** n - 1


def test_missing_fixture():
    with pytest.raises(FixtureError):
        read_fixture("no_such_fixture")


def test_malformed_json_reports_line(tmp_path):
    path = _write(tmp_path, "broken", '{\n  "kind": "ring",\n  "name": "broken",\n  "generators": [,]\n}')
    with pytest.raises(FixtureError, match="line 4"):
        read_fixture(path)


def test_schema_violation(tmp_path):
    path = _write(tmp_path, "bad_degree", {"kind": "ring", "name": "bad", "generators": [{"name": "x", "degree": 0}]})
    with pytest.raises(FixtureError, match="degree"):
        read_fixture(path)
    path = _write(tmp_path, "bad_kind", {"kind": "graph", "name": "bad"})
    with pytest.raises(FixtureError):
        read_fixture(path)


def test_broken_relation_in_rep(tmp_path):
    fx = {
        "kind": "rep",
        "name": "swap",
        "generators": [{"name": "s", "matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}],
        "order": 2,
        "relations": [["s", "e"]],
    }
    with pytest.raises(FixtureError, match="relation"):
        load_fixture(_write(tmp_path, "swap", fx))


def test_invalid_action_is_wrapped(tmp_path):
    fx = {
        "kind": "action",
        "name": "bad_action",
        "ring": {"generators": [{"name": "x", "degree": 1}, {"name": "w", "degree": 2}]},
        "images": {"x": "w"},
        "group_order": 2,
    }
    with pytest.raises(FixtureError, match="NotWellDefined"):
        load_fixture(_write(tmp_path, "bad_action", fx))


def test_table_column_with_wrong_size(tmp_path):
    fx = {"kind": "cokernel_table", "name": "bad_table", "p": 2, "columns": {"2": {"1": 2}}}
    with pytest.raises(FixtureError, match="n=2"):
        load_fixture(_write(tmp_path, "bad_table", fx))
