import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lzdist.dataset import (
    FIELD_NAMES,
    DatasetError,
    EditRecord,
    apply_edit,
    load_jsonl,
    read_jsonl,
    records_from_csv,
    simulate_effort_dataset,
    write_csv,
    write_jsonl,
)

opt_text = st.none() | st.text(max_size=30)
records = st.builds(
    EditRecord,
    id=st.text(min_size=1, max_size=10),
    source=st.text(max_size=40),
    target=st.text(max_size=40),
    context=opt_text,
    edit_time_s=st.none() | st.floats(0, 1e6, allow_nan=False),
    keystrokes=st.none() | st.integers(0, 10**6),
    annotator=opt_text,
    scenario=st.none() | st.sampled_from(["normal", "similar", "fast", "human"]),
)


def unique_ids(rs):
    seen = {}
    for r in rs:
        seen.setdefault(r.id, r)
    return list(seen.values())


@settings(max_examples=100, deadline=None)
@given(st.lists(records, max_size=8))
def test_jsonl_round_trip(tmp_path_factory, rs):
    rs = unique_ids(rs)
    path = tmp_path_factory.mktemp("rt") / "d.jsonl"
    write_jsonl(rs, path)
    assert load_jsonl(path) == rs


def test_empty_file(tmp_path):
    path = tmp_path / "e.jsonl"
    write_jsonl([], path)
    assert path.read_bytes() == b""
    assert load_jsonl(path) == []


def test_stable_field_order(tmp_path):
    path = tmp_path / "d.jsonl"
    write_jsonl([EditRecord(str(i), "s", "t") for i in range(3)], path)
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert all(list(json.loads(l)) == list(FIELD_NAMES) for l in lines)


def test_non_ascii_bytes_preserved(tmp_path):
    text = "Réponse: 税金 → ok 😀"
    path = tmp_path / "u.jsonl"
    write_jsonl([EditRecord("x", text, text[::-1])], path)
    assert text.encode("utf-8") in path.read_bytes()
    assert load_jsonl(path)[0].source == text


def test_malformed_lines_reported_with_numbers(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(
        '{"id": "a", "source": "s", "target": "t"}\n'
        '{"id": "b", "source": "s"}\n'
        "not json\n"
        '{"id": "c", "source": "s", "target": "t", "edit_time_s": -1}\n'
        '["list"]\n',
        encoding="utf-8",
    )
    report = read_jsonl(path)
    assert [r.id for r in report.records] == ["a"]
    assert [e.line for e in report.errors] == [2, 3, 4, 5]
    assert "target" in report.errors[0].message
    with pytest.raises(DatasetError) as info:
        load_jsonl(path)
    assert "line 2" in str(info.value)
    assert len(info.value.problems) == 4


def test_duplicate_id_named(tmp_path):
    path = tmp_path / "dup.jsonl"
    path.write_text('{"id": "q1", "source": "", "target": ""}\n' * 2)
    with pytest.raises(DatasetError, match="q1"):
        load_jsonl(path)


def test_unknown_fields_ignored(tmp_path, caplog):
    path = tmp_path / "x.jsonl"
    path.write_text('{"id": "a", "source": "s", "target": "t", "extra": 1, "more": 2}\n')
    with caplog.at_level("WARNING"):
        assert load_jsonl(path) == [EditRecord("a", "s", "t")]
    assert read_jsonl(path).unknown_fields == 2
    assert "2 unknown" in caplog.text


def test_missing_file():
    with pytest.raises(OSError):
        load_jsonl("/nonexistent/file.jsonl")


@settings(max_examples=200)
@given(st.binary(max_size=200))
def test_loader_never_crashes(tmp_path_factory, blob):
    path = tmp_path_factory.mktemp("fz") / "f.jsonl"
    path.write_bytes(blob)
    try:
        report = read_jsonl(path)
    except (DatasetError, UnicodeDecodeError):
        return
    assert all(isinstance(e.line, int) for e in report.errors)


def test_record_validation():
    with pytest.raises(DatasetError):
        EditRecord("", "s", "t")
    with pytest.raises(DatasetError):
        EditRecord("a", "s", "t", keystrokes=1.5)
    with pytest.raises(DatasetError):
        EditRecord("a", "s", "t", scenario="slow")
    assert EditRecord("a", "s", "t", keystrokes=3.0).keystrokes == 3


def test_csv_round_trip(tmp_path):
    rs = [
        EditRecord("a", "line1\nline2, \"quoted\"", "t", context="k", edit_time_s=1.5, keystrokes=4, annotator="A0"),
        EditRecord("b", "s", "t", scenario="fast"),
    ]
    path = tmp_path / "d.csv"
    write_csv(rs, path)
    assert records_from_csv(path) == rs


def test_simulator_deterministic():
    a = simulate_effort_dataset(20, 0.5, 7)
    assert a == simulate_effort_dataset(20, 0.5, 7)
    assert a != simulate_effort_dataset(20, 0.5, 8)
    assert [r.id for r in a] == [f"sim-{i:04d}" for i in range(20)]


def test_simulator_noise_free_times_are_op_counts():
    rs = simulate_effort_dataset(50, 0.0, 3)
    for r in rs:
        assert r.edit_time_s == int(r.edit_time_s)
        assert 1 <= r.edit_time_s <= 20
    assert len({r.edit_time_s for r in rs}) > 5


def test_simulator_parameter_validation():
    with pytest.raises(ValueError):
        simulate_effort_dataset(5)
    with pytest.raises(ValueError):
        simulate_effort_dataset(20, -1.0)


@pytest.mark.parametrize("kind", ["char", "move", "duplicate", "delete"])
def test_apply_edit_kinds(kind):
    rng = np.random.default_rng(0)
    text = "".join(chr(97 + i % 26) for i in range(300))
    out = apply_edit(rng, text, kind)
    if kind == "move":
        assert sorted(out) == sorted(text)
    elif kind == "duplicate":
        assert len(out) > len(text)
    elif kind == "delete":
        assert len(out) < len(text)
    else:
        assert abs(len(out) - len(text)) <= 1
    with pytest.raises(ValueError):
        apply_edit(rng, text, "swap")
