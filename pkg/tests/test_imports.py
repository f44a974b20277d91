"""Tests for top-level package imports."""

import pytest


def test_top_level_imports():
    """Verify that core classes can be imported directly from the tangle package."""
    try:
        from tangle import (  # noqa: F401
            CountTable,
            NoiseModel,
            PhotonSource,
            Registry,
            RunStore,
            SystemParams,
            TomographyResult,
            WitnessReport,
            default_params,
            get_photon_source,
            mle_reconstruct,
            run_experiment,
        )
    except ImportError as e:
        pytest.fail(f"Failed to import one or more top-level classes: {e}")


def test_version():
    """The package version matches the distribution"""
    from tangle import __version__
    assert __version__ == "0.1.0"
