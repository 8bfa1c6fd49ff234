import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpmsim.commands import RunOptions, montecarlo_table
from hpmsim.scenario import parse_scenario
from hpmsim.tables import Column, ResultTable, emit, read_csv, read_json, to_csv, write_table


def _table(rows=None):
    return ResultTable(
        "demo",
        [Column("range_m", "m"), Column("efield_vpm", "V/m"), Column("ok", "bool")],
        rows if rows is not None else [[20.0, 494.6780901988219, 1], [40.0, math.nan, 0]],
        {"scenario_hash": "abc", "seed": 42},
    )


def test_csv_layout():
    text = to_csv(_table())
    lines = text.split("\n")
    assert lines[0] == "# table: demo"
    assert lines[1] == "# scenario_hash: abc"
    assert lines[3] == "range_m [m],efield_vpm [V/m],ok [bool]"
    assert lines[4] == "20.0,494.6780901988219,1"
    assert "\r" not in text and text.endswith("\n")


def test_empty_table_is_header_only():
    text = to_csv(_table(rows=[]))
    assert text.splitlines()[-1] == "range_m [m],efield_vpm [V/m],ok [bool]"
    back = read_csv(text)
    assert back.rows == [] and back.columns == _table().columns


def test_csv_round_trip():
    t = _table()
    back = read_csv(to_csv(t))
    assert back.name == t.name and back.metadata == t.metadata and back.columns == t.columns
    assert back.rows[0] == t.rows[0]
    assert math.isnan(back.rows[1][1])


def test_json_round_trip():
    t = _table()
    doc = json.loads(emit(t, "json"))
    assert set(doc) == {"metadata", "columns", "rows"}
    assert doc["rows"][1][1] is None
    back = read_json(emit(t, "json").decode())
    assert back.rows[0] == t.rows[0] and back.columns == t.columns


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=1, max_size=20))
def test_float_round_trip_is_exact(values):
    t = ResultTable("x", [Column("v", "1")], [[v] for v in values])
    assert [r[0] for r in read_csv(to_csv(t)).rows] == pytest.approx(values, rel=1e-15, abs=0)


def test_invariants():
    with pytest.raises(ValueError, match="row 0"):
        ResultTable("x", [Column("a", "m")], [[1, 2]])
    with pytest.raises(ValueError, match="unit"):
        ResultTable("x", [Column("a", "")])
    with pytest.raises(ValueError):
        emit(_table(), "xml")


def test_unwritable_sink_names_path(tmp_path):
    bad = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        write_table(_table(), bad)


def test_montecarlo_schema():
    t = montecarlo_table(parse_scenario(""), RunOptions(trials=200, timestamp=False), [20.0, 30.0])
    names = [c.name for c in t.columns]
    for col in ("range_m", "mc_kill_pct", "ci_low_pct", "ci_high_pct", "det_kill_pct", "efield_mean_vpm", "efield_std_vpm"):
        assert col in names
    assert "scenario_hash" in t.metadata and "timestamp" not in t.metadata
    assert len(t.rows) == 2
