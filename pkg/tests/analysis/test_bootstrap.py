"""Tests for the multinomial bootstrap."""
import numpy as np
import pytest

from tangle.analysis.bootstrap import bootstrap_estimates, bootstrap_std
from tangle.models.counts import CountTable, SettingCounts
from tangle.models.settings import BasisSetting
from tangle.utils.errors import DataError

HV_Z = BasisSetting(photon_basis="HV", ion_axis="z")


@pytest.fixture
def coin():
    """One setting with 1000 events split evenly between two outcomes"""
    table = CountTable()
    table.rows[HV_Z.label] = SettingCounts(setting=HV_Z, outcomes=[0, 500, 500, 0], no_photon=0)
    return table


def first_fraction(counts: CountTable) -> float:
    return counts.rows["HV-z"].frequencies()[1]


def fraction_and_angle(counts: CountTable) -> np.ndarray:
    f = counts.rows["HV-z"].frequencies()[1]
    return np.array([f, np.pi * (2 * f - 1) + np.pi])


def always_fails(counts: CountTable) -> float:
    raise DataError("no estimate")


def test_bootstrap_needs_100_resamples(coin):
    """Fewer than 100 resamples are refused"""
    with pytest.raises(DataError):
        bootstrap_estimates(coin, first_fraction, 50, seed=0)


def test_bootstrap_is_seeded(coin):
    """The same seed reproduces the resamples"""
    a = bootstrap_estimates(coin, first_fraction, 100, seed=3)
    b = bootstrap_estimates(coin, first_fraction, 100, seed=3)
    assert a.shape == (100, 1)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, bootstrap_estimates(coin, first_fraction, 100, seed=4))


def test_bootstrap_std_matches_binomial(coin):
    """The spread of a binomial fraction is sqrt(p(1-p)/n)"""
    std = bootstrap_std(coin, first_fraction, resamples=400, seed=1)
    assert isinstance(std, float)
    assert std == pytest.approx(np.sqrt(0.25 / 1000), rel=0.2)


def test_bootstrap_circular_components(coin):
    """Angle-valued components use the circular spread"""
    stds = bootstrap_std(coin, fraction_and_angle, resamples=200, seed=2, circular=[False, True])
    assert stds.shape == (2,)
    assert stds[1] == pytest.approx(2 * np.pi * stds[0], rel=0.05)


def test_bootstrap_all_failures(coin):
    """An estimator that never succeeds is an error"""
    with pytest.raises(DataError, match="every bootstrap resample"):
        bootstrap_estimates(coin, always_fails, 100, seed=0)


@pytest.mark.integration
def test_bootstrap_independent_of_workers(coin):
    """Parallel resampling gives the serial result"""
    serial = bootstrap_estimates(coin, first_fraction, 100, seed=8, workers=1)
    parallel = bootstrap_estimates(coin, first_fraction, 100, seed=8, workers=2)
    np.testing.assert_array_equal(serial, parallel)
