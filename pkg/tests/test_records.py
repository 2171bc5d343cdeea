from __future__ import annotations

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stagsearch.experiments import FitResult, RunRecord
from stagsearch.records import emit, format_value, read_records, render

finite = st.floats(allow_nan=False, allow_infinity=False)
records = st.builds(
    RunRecord,
    n=st.integers(2, 10**4),
    N=st.integers(16, 10**8),
    t_opt=st.none() | st.integers(1, 10**6),
    p_max=finite,
    lam=finite,
    phi_min=finite,
    wall_time_seconds=st.none() | finite,
)


def test_empty_csv_is_header_only(tmp_path):
    path = tmp_path / "r.csv"
    emit([], "csv", path, RunRecord.COLUMNS)
    assert path.read_text() == "n,N,t_opt,p_max,lambda,phi_min,wall_time_s\n"


def test_render_needs_columns_for_empty():
    with pytest.raises(ValueError):
        render([], "csv")


def test_unknown_format():
    with pytest.raises(ValueError):
        render([FitResult("t", 0.5, 1.0, 1.0)], "xml")


def test_float_format_17_digits():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(None) == ""
    assert format_value(3) == "3"
    assert format_value(True) == "true"


@pytest.mark.parametrize("fmt", ["csv", "json"])
@given(st.lists(records, max_size=5))
def test_round_trip(tmp_path_factory, fmt, recs):
    path = tmp_path_factory.mktemp("rt") / f"r.{fmt}"
    emit(recs, fmt, path, RunRecord.COLUMNS)
    assert read_records(path, fmt, RunRecord) == recs


def test_json_is_array_with_fixed_keys(tmp_path):
    path = tmp_path / "r.json"
    emit([RunRecord(4, 64, None, 0.5, 0.2, math.pi, None)], "json", path)
    rows = json.loads(path.read_text())
    assert list(rows[0]) == list(RunRecord.COLUMNS)
    assert rows[0]["t_opt"] is None


def test_write_error_names_path(tmp_path):
    bad = tmp_path / "missing" / "r.csv"
    with pytest.raises(OSError, match="missing"):
        emit([], "csv", bad, RunRecord.COLUMNS)
