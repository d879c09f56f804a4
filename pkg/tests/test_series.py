import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcbench.series import (
    CorpusError,
    TimeSeries,
    embed,
    load_corpus,
    write_corpus,
)


def _write(tmp_path, rows, meta, name="corpus.csv"):
    data = tmp_path / name
    data.write_text("series_id,t,value\n" + "".join(f"{r}\n" for r in rows))
    (tmp_path / name.replace(".csv", ".meta.csv")).write_text(
        "series_id,period_m,source\n" + "".join(f"{m}\n" for m in meta)
    )
    return data


def test_three_row_series_parses(tmp_path):
    path = _write(tmp_path, ["a,0,1.5", "a,1,2", "a,2,3"], ["a,1,demo"])
    corpus = load_corpus(path, cap=1000, min_length=1)
    assert len(corpus) == 1
    s = corpus[0]
    assert s.id == "a" and s.origin_tag == "demo" and s.period_m == 1
    np.testing.assert_array_equal(s.values, [1.5, 2.0, 3.0])


def test_truncation_at_cap(tmp_path):
    rows = [f"x,{t},{t + 1}" for t in range(1100)]
    path = _write(tmp_path, rows, ["x,1,long"])
    corpus = load_corpus(path, cap=1000)
    assert len(corpus[0]) == 1000
    assert corpus[0].values[-1] == 1000.0


def test_missing_value_names_series_and_line(tmp_path):
    path = _write(tmp_path, ["s1,0,1", "s1,1,", "s1,2,3"], ["s1,1,x"])
    with pytest.raises(CorpusError, match=r"corpus.csv:3.*'s1'.*missing"):
        load_corpus(path, min_length=1)


def test_missing_value_beyond_cap_is_ignored(tmp_path):
    path = _write(tmp_path, ["s1,0,1", "s1,1,2", "s1,2,"], ["s1,1,x"])
    corpus = load_corpus(path, cap=2, min_length=1)
    assert len(corpus[0]) == 2


def test_non_numeric_value_is_error(tmp_path):
    path = _write(tmp_path, ["s1,0,1", "s1,1,abc"], ["s1,1,x"])
    with pytest.raises(CorpusError, match="non-numeric"):
        load_corpus(path, min_length=1)


def test_duplicate_series_id_is_error(tmp_path):
    path = _write(tmp_path, ["a,0,1", "b,0,1", "a,0,2"], ["a,1,x", "b,1,x"])
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(path, min_length=1)


def test_gap_in_t_is_error(tmp_path):
    path = _write(tmp_path, ["a,0,1", "a,2,1"], ["a,1,x"])
    with pytest.raises(CorpusError, match="expected t=1"):
        load_corpus(path, min_length=1)


def test_empty_file_is_error(tmp_path):
    (tmp_path / "corpus.csv").write_text("")
    (tmp_path / "corpus.meta.csv").write_text("series_id,period_m,source\n")
    with pytest.raises(CorpusError, match="empty"):
        load_corpus(tmp_path / "corpus.csv")


def test_short_series_rejected_with_warning(tmp_path):
    rows = [f"long,{t},1" for t in range(60)] + [f"short,{t},1" for t in range(20)]
    path = _write(tmp_path, rows, ["long,1,x", "short,1,x"])
    with pytest.warns(UserWarning, match="short"):
        corpus = load_corpus(path)
    assert [s.id for s in corpus] == ["long"]
    assert corpus.rejected == ["short"]


def test_write_then_load_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    series = [TimeSeries(f"s{i}", rng.normal(size=60), 4, "syn") for i in range(3)]
    write_corpus(series, tmp_path)
    back = load_corpus(tmp_path)
    for a, b in zip(series, back):
        assert a.id == b.id and a.period_m == b.period_m
        np.testing.assert_array_equal(a.values, b.values)


def test_timeseries_invariants():
    with pytest.raises(ValueError):
        TimeSeries("a", [1.0, np.nan])
    with pytest.raises(ValueError):
        TimeSeries("a", np.ones(10), period_m=12)
    s = TimeSeries("a", [1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 5.0


def test_embed_definition():
    ds = embed([1, 2, 3, 4, 5], 2)
    np.testing.assert_array_equal(ds.features, [[2, 1], [3, 2], [4, 3]])
    np.testing.assert_array_equal(ds.targets, [3, 4, 5])


def test_embed_row_count():
    assert embed(np.arange(1000.0), 10).features.shape == (990, 10)


def test_embed_too_short():
    with pytest.raises(ValueError):
        embed(np.arange(10.0), 10)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=60),
    st.integers(1, 12),
)
def test_embed_rows_are_contiguous_windows(values, p):
    y = np.asarray(values)
    if len(y) <= p:
        return
    ds = embed(y, p)
    assert len(ds.targets) == len(y) - p
    for i in range(len(ds.targets)):
        window = np.r_[ds.features[i][::-1], ds.targets[i]]
        np.testing.assert_array_equal(window, y[i : i + p + 1])
