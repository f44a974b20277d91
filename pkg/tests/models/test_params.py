"""Tests for the parameter, noise and timing records."""
import logging

import numpy as np
import pytest
from pydantic import ValidationError

from tangle.models.noise import NoiseModel
from tangle.models.params import MHZ, LevelFrequencies, SystemParams
from tangle.models.timing import SequenceTiming


def test_defaults_fill_bare_resonance():
    """Missing tone detunings default to bare two-photon resonance"""
    p = SystemParams()
    assert p.Delta1 == p.DeltaC1
    assert p.Delta2 == pytest.approx(p.DeltaC1 + p.DeltaDDp)
    assert p.two_photon_detunings() == pytest.approx((0.0, 0.0), abs=1e-3)
    assert p.tone_splitting == pytest.approx(p.DeltaDDp)


def test_rates_must_be_positive():
    """Nonpositive rates are rejected"""
    with pytest.raises(ValidationError):
        SystemParams(kappa=0.0)
    with pytest.raises(ValidationError):
        SystemParams(g=-1.0)


def test_zero_detuning_rejected():
    """Delta1 = 0 is invalid"""
    with pytest.raises(ValidationError):
        SystemParams(Delta1=0.0)


def test_small_detuning_warns(caplog):
    """|Delta| < 10 max(Omega, g) logs a warning"""
    with caplog.at_level(logging.WARNING):
        SystemParams(Delta1=20 * MHZ, Delta2=20 * MHZ)
    assert "adiabatic elimination is questionable" in caplog.text


def test_large_detuning_is_quiet(caplog):
    """Default detunings do not warn"""
    with caplog.at_level(logging.WARNING):
        SystemParams()
    assert "questionable" not in caplog.text


def test_level_frequencies_must_match_zeeman_splitting():
    """LevelFrequencies and DeltaDDp agree within 1e-6 relative"""
    good = LevelFrequencies(omegaS=0.0, omegaD=1e9, omegaDp=1e9 + 4.97 * MHZ, omegaC=2e9)
    assert SystemParams(levels=good).zeeman_splitting == pytest.approx(4.97 * MHZ)
    bad = LevelFrequencies(omegaS=0.0, omegaD=1e9, omegaDp=1e9 + 5.2 * MHZ, omegaC=2e9)
    with pytest.raises(ValidationError):
        SystemParams(levels=bad)


def test_absolute_frequencies_give_two_photon_detunings():
    """With levels and tone frequencies the detunings come from energy balance"""
    levels = LevelFrequencies(omegaS=0.0, omegaD=1e9, omegaDp=1e9 + 4.97 * MHZ, omegaC=2e9)
    p = SystemParams(levels=levels, omega1=3e9 + 100.0, omega2=3e9 + 4.97 * MHZ)
    delta1, delta2 = p.two_photon_detunings()
    assert delta1 == pytest.approx(100.0, abs=1e-3)
    assert delta2 == pytest.approx(0.0, abs=1e-3)
    assert p.tone_splitting == pytest.approx(4.97 * MHZ - 100.0)


def test_tone_frequencies_come_in_pairs():
    """omega1 without omega2 is rejected"""
    with pytest.raises(ValidationError):
        SystemParams(omega1=3e9)


def test_key_is_stable_and_sensitive():
    """Equal parameters hash equally, any change alters the key"""
    assert SystemParams().key() == SystemParams().key()
    assert SystemParams().key() != SystemParams(phiL=0.1).key()


def test_params_are_frozen():
    """Parameter sets are immutable"""
    p = SystemParams()
    with pytest.raises(ValidationError):
        p.g = 1.0


def test_noise_defaults():
    """Default noise model and derived efficiencies"""
    n = NoiseModel()
    assert n.exit_efficiency == 0.16
    assert n.mean_apd_efficiency == pytest.approx(0.40)
    assert n.port_efficiencies == (0.40, 0.40)
    assert n.dark_rate == 36.0


def test_noise_path_imbalance():
    """Imbalance scales port 1 and is capped at 1"""
    assert NoiseModel(path_imbalance=0.5).port_efficiencies == (0.40, pytest.approx(0.20))
    assert NoiseModel(path_imbalance=0.5).mean_apd_efficiency == pytest.approx(0.30)
    assert NoiseModel(apd_efficiency1=0.8, path_imbalance=2.0).port_efficiencies[1] == 1.0


def test_ideal_noise():
    """The ideal apparatus is lossless and dark-count free"""
    n = NoiseModel.ideal()
    assert n.exit_efficiency == 1.0 and n.dark_rate == 0.0 and n.readout_error == 0.0


def test_noise_rejects_out_of_range():
    """Efficiencies are probabilities"""
    with pytest.raises(ValidationError):
        NoiseModel(exit_efficiency=1.5)


def test_sequence_timing():
    """Default steps fit in the 1.5 ms period"""
    timing = SequenceTiming()
    assert timing.active == pytest.approx(1.4083e-3)
    assert timing.repetition_rate == pytest.approx(1 / 1.5e-3)
    with pytest.raises(ValidationError):
        SequenceTiming(period=1e-3)
