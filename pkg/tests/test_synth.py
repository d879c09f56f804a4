import numpy as np
import pytest
from scipy import stats

from fcbench.series import load_corpus, write_corpus
from fcbench.synth import FAMILIES, gen_ar2, gen_tar, synth_corpus


def squared_residual_acf_pvalue(y, lags=5):
    """Ljung-Box p-value on squared residuals of a least-squares AR(2) fit."""
    X = np.column_stack([np.ones(len(y) - 2), y[1:-1], y[:-2]])
    beta, *_ = np.linalg.lstsq(X, y[2:], rcond=None)
    r2 = (y[2:] - X @ beta) ** 2
    d = r2 - r2.mean()
    n = len(d)
    rho = np.array([d[k:] @ d[:-k] / (d @ d) for k in range(1, lags + 1)])
    q = n * (n + 2) * np.sum(rho**2 / (n - np.arange(1, lags + 1)))
    return stats.chi2.sf(q, lags)


def test_four_series_one_per_family():
    corpus = synth_corpus(4, 200, seed=3)
    assert [s.origin_tag for s in corpus] == [f"synth:{f}" for f in FAMILIES]
    assert [s.period_m for s in corpus] == [1, 12, 1, 1]
    assert all(len(s) == 200 and s.values.min() > 1 for s in corpus)


def test_same_seed_identical_files(tmp_path):
    a = write_corpus(synth_corpus(8, 150, seed=9), tmp_path / "a.csv")
    b = write_corpus(synth_corpus(8, 150, seed=9), tmp_path / "b.csv")
    assert a[0].read_bytes() == b[0].read_bytes()
    assert a[1].read_bytes() == b[1].read_bytes()
    c = write_corpus(synth_corpus(8, 150, seed=10), tmp_path / "c.csv")
    assert a[0].read_bytes() != c[0].read_bytes()


def test_series_do_not_depend_on_corpus_size():
    small = synth_corpus(2, 120, seed=1)
    large = synth_corpus(6, 120, seed=1)
    np.testing.assert_array_equal(small[1].values, large[1].values)


def test_mix_cycles_families():
    corpus = synth_corpus(20, 100, seed=1, mix=("tar", "seasonal", "tar", "ar2"))
    tags = [s.origin_tag.split(":")[1] for s in corpus]
    assert tags.count("tar") == 10 and tags.count("seasonal") == 5 and tags.count("ar2") == 5


def test_tar_is_nonlinear_and_ar2_is_not():
    nonlinear = [squared_residual_acf_pvalue(gen_tar(1000, np.random.default_rng(s))) for s in range(20)]
    assert np.mean(np.array(nonlinear) < 0.01) >= 0.9
    linear = [squared_residual_acf_pvalue(gen_ar2(1000, np.random.default_rng(s))) for s in range(20)]
    # a linear Gaussian process flags at roughly the nominal rate
    assert np.mean(np.array(linear) < 0.01) <= 0.15


def test_roundtrip_through_files(tmp_path):
    corpus = synth_corpus(4, 120, seed=2)
    write_corpus(corpus, tmp_path / "corpus.csv")
    loaded = load_corpus(tmp_path)
    for a, b in zip(corpus, loaded):
        assert a.id == b.id and a.period_m == b.period_m
        np.testing.assert_array_equal(a.values, b.values)


@pytest.mark.parametrize("kwargs", [dict(length=99), dict(n_series=0), dict(mix=("arma",))])
def test_invalid_arguments(kwargs):
    args = dict(n_series=4, length=120, seed=0) | kwargs
    with pytest.raises(ValueError):
        synth_corpus(**args)
