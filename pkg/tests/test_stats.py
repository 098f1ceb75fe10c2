import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats as sps
from scipy.special import kolmogorov

from timebell import histogram, ks_normality_test
from timebell.errors import DegenerateSample, TooFewSamples
from timebell.stats import kolmogorov_sf, ks_statistic


def sup_distance(x, mean, sd):
    """Definition-based two-sided KS distance, one point at a time."""
    x = sorted(x)
    n = len(x)
    best = 0.0
    for i, xi in enumerate(x, start=1):
        f = sps.norm.cdf((xi - mean) / sd)
        best = max(best, i / n - f, f - (i - 1) / n)
    return best


def fixed_samples():
    rng = np.random.default_rng(2718)
    return [rng.normal(rng.uniform(-3, 3), rng.uniform(0.1, 4), size=rng.integers(8, 400))
            for _ in range(20)]


@pytest.mark.parametrize("x", fixed_samples())
def test_statistic_matches_definition_and_scipy(x):
    res = ks_normality_test(x)
    m, s = x.mean(), x.std(ddof=1)
    assert res.statistic == pytest.approx(sup_distance(x, m, s), abs=1e-12)
    assert res.statistic == pytest.approx(sps.kstest(x, "norm", args=(m, s)).statistic, abs=1e-12)
    assert res.p_value == pytest.approx(kolmogorov(np.sqrt(x.size) * res.statistic), abs=1e-9)
    assert res.n == x.size and res.fitted_sd == pytest.approx(s)


@pytest.mark.parametrize("x", fixed_samples())
def test_affine_invariance(x):
    base = ks_normality_test(x).statistic
    for a, b in ((2.5, -7.0), (0.01, 0.5), (1e3, 0.0), (1.0, 1e-9)):
        assert ks_normality_test(a * x + b).statistic == pytest.approx(base, abs=1e-12)


def test_kolmogorov_series():
    ts = np.linspace(0.0, 4.0, 4001)
    q = np.array([kolmogorov_sf(t) for t in ts])
    assert np.max(np.abs(q - kolmogorov(ts))) < 1e-12
    assert np.all(np.diff(q) <= 0)


def test_known_parameter_quantile_fit():
    n = 100
    x = sps.norm.ppf((np.arange(1, n + 1) - 0.5) / n)
    assert ks_statistic(x, 0.0, 1.0) == pytest.approx(0.5 / n, abs=1e-12)


def test_errors():
    with pytest.raises(TooFewSamples):
        ks_normality_test([1.0, 2.0, 3.0])
    with pytest.raises(DegenerateSample):
        ks_normality_test([4.2] * 20)
    with pytest.raises(DegenerateSample):
        histogram([1.0, 1.0], 3)


def test_histogram_example():
    h = histogram([0, 1, 2, 3], 2)
    assert h.bin_edges.tolist() == [0, 1.5, 3]
    assert h.counts.tolist() == [2, 2]
    m, s = 1.5, np.std([0, 1, 2, 3], ddof=1)
    assert h.density_overlay == pytest.approx(sps.norm.pdf([0.75, 2.25], m, s))


def test_histogram_uniform_grid():
    n = 37
    h = histogram(np.arange(n) * 0.25, n)
    assert h.counts.tolist() == [1] * n


@given(st.lists(st.integers(-10**9, 10**9).map(lambda v: v / 1000), min_size=2, max_size=300)
       .filter(lambda v: len(set(v)) > 1),
       st.integers(1, 50))
def test_histogram_conserves(values, bins):
    h = histogram(values, bins)
    assert h.counts.sum() == len(values)
    assert len(h.counts) == len(h.bin_edges) - 1 == bins


def test_histogram_csv():
    text = histogram([0, 1, 2, 3], 2).to_csv()
    lines = text.splitlines()
    assert lines[0] == "bin_left,bin_right,count,normal_density"
    assert lines[1].startswith("0.000000,1.500000,2,")
    assert len(lines) == 3
