"""Tests for witness reports and parameter sweeps."""
import numpy as np
import pytest

from tangle.analysis.sweeps import amplitude_sweep, phase_sweep, point_seed, witness_report
from tangle.dynamics.hamiltonians import default_params
from tangle.models.noise import NoiseModel
from tangle.quantum.operators import bell_state, werner_state
from tangle.utils.errors import FitError


def test_witness_report_without_bootstrap(counts_for):
    """Point estimates of a Werner state, errors left at zero"""
    report = witness_report(counts_for(werner_state(0.9, bell_state(0.5)), per_setting=1000), bell_state(0.5),
                            resamples=0, label="werner")
    assert report.fidelity == pytest.approx(0.925, abs=5e-3)
    assert report.concurrence == pytest.approx(0.85, abs=1e-2)
    assert report.chsh == pytest.approx(2 * np.sqrt(2) * 0.9, abs=1e-2)
    assert report.coherence_phase == pytest.approx(0.5, abs=5e-3)
    assert report.rho11 == pytest.approx(0.475, abs=5e-3)
    assert report.fidelity_std == 0.0
    assert abs(report.events - 18 * 1000) <= 36
    assert report.converged
    assert report.label == "werner"


def test_witness_report_without_coherence(counts_for):
    """A state with no |DH>-|D'V> coherence reports no phase"""
    report = witness_report(counts_for(werner_state(0.0)), bell_state(), resamples=0)
    assert report.coherence_phase is None
    assert report.concurrence == pytest.approx(0.0, abs=1e-3)


@pytest.mark.integration
def test_witness_report_bootstrap(counts_for):
    """Bootstrap errors are positive and shrink with more data"""
    small = witness_report(counts_for(werner_state(0.9), per_setting=500), bell_state(), resamples=100, seed=1)
    large = witness_report(counts_for(werner_state(0.9), per_setting=5000), bell_state(), resamples=100, seed=1)
    assert 0 < large.fidelity_std < small.fidelity_std
    assert 0 < large.coherence_phase_std < small.coherence_phase_std


def test_point_seed():
    """Sweep points get distinct, reproducible seeds"""
    assert point_seed(3, 0) == point_seed(3, 0)
    assert len({point_seed(3, k) for k in range(8)}) == 8
    assert 0 <= point_seed(2 ** 63, 5) < 2 ** 64


def test_phase_sweep_needs_four_phases():
    """Too few phases to fit fail before any simulation"""
    with pytest.raises(FitError):
        phase_sweep(default_params(), NoiseModel.ideal(), [0.0, 1.0, 2.0], 10, seed=1)


def test_amplitude_sweep_rejects_bad_amplitude():
    """cos(alpha) outside [0, 1] is refused"""
    with pytest.raises(FitError):
        amplitude_sweep(default_params(), NoiseModel.ideal(), [1.5], 10, seed=1)


@pytest.mark.integration
def test_phase_sweep_tracks_raman_phase():
    """The coherence phase follows the Raman phase with full contrast"""
    phases = [k * np.pi / 2 for k in range(4)]
    result = phase_sweep(default_params(), NoiseModel.ideal(), phases, 400, seed=3, resamples=0)
    assert [p.value for p in result.points] == phases
    assert result.fit.contrast == pytest.approx(1.0, abs=0.1)
    assert abs(result.fit.phase_offset) < 0.15
    table = result.table()
    assert len(table) == 4
    assert {"value", "fidelity", "re_rho14", "im_rho14"} <= set(table.columns)
    assert list(result.fit_table().columns) == ["phase", "re", "im", "fit_re", "fit_im"]


@pytest.mark.integration
def test_amplitude_sweep_tracks_target():
    """Populations follow cos^2(alpha)"""
    amplitudes = [1 / np.sqrt(2), 1 / np.sqrt(8)]
    result = amplitude_sweep(default_params(), NoiseModel.ideal(), amplitudes, 400, seed=5, resamples=0)
    table = result.table()
    np.testing.assert_allclose(table["rho11"], table["target_rho11"], atol=0.06)
    np.testing.assert_allclose(table["rho44"], table["target_rho44"], atol=0.06)
    assert all(f > 0.9 for f in table["fidelity"])
    with pytest.raises(FitError):
        result.fit_table()
