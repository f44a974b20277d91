import os
import sys

import numpy as np
import pytest

# Add project root to PYTHONPATH
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)

from tangle.models.counts import CountTable, SettingCounts  # noqa: E402
from tangle.models.settings import standard_settings  # noqa: E402
from tangle.tomography.povm import probabilities, setting_povm  # noqa: E402


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep the caller's tangle environment out of the tests"""
    for name in ("TANGLE_OUTPUT_DIR", "TANGLE_WORKERS", "TANGLE_WEAVE_PROJECT", "LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    yield


def expected_counts(rho, per_setting=10000, settings=None) -> CountTable:
    """Count table whose rows are the rounded Born-rule expectations of ``rho``"""
    table = CountTable()
    for setting in settings if settings is not None else standard_settings():
        p = np.clip(probabilities(rho, setting_povm(setting)), 0.0, None)
        outcomes = np.rint(per_setting * p).astype(int).tolist()
        table.rows[setting.label] = SettingCounts(setting=setting, outcomes=outcomes, no_photon=0)
    return table


@pytest.fixture
def counts_for():
    """Factory for noiseless count tables of a given state"""
    return expected_counts
