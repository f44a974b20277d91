"""Tests for the Raman Hamiltonians and parameter calibration."""
import numpy as np
import pytest

from tangle.dynamics.hamiltonians import (
    amplitude_angle,
    atomic_frame_rate,
    default_params,
    effective_couplings,
    effective_generator,
    hamiltonian_full,
    hamiltonian_rotating,
    light_shifts,
    raman_resonant,
    target_state,
    with_mismatch,
    with_phase,
    with_target_amplitude,
)
from tangle.models.params import MHZ, LevelFrequencies, SystemParams
from tangle.utils.errors import DataError


@pytest.fixture
def symmetric():
    return SystemParams(Omega1=10 * MHZ, Omega2=10 * MHZ, G1=0.5, G2=0.5,
                        Delta1=400 * MHZ, Delta2=400 * MHZ)


def test_effective_coupling_value(symmetric):
    """Omega 10 MHz, G 0.5, g 1.4 MHz, Delta 400 MHz gives 17.5 kHz"""
    g1, g2 = effective_couplings(symmetric)
    assert g1 == pytest.approx(0.0175 * MHZ, rel=1e-12)
    assert g1 == g2


def test_symmetric_couplings_give_quarter_pi(symmetric):
    """Equal tones and detunings give alpha = pi/4"""
    assert amplitude_angle(symmetric) == pytest.approx(np.pi / 4)


def test_doubling_omega2(symmetric):
    """Doubling Omega2 doubles g2eff and maps alpha to arctan(2 tan alpha)"""
    doubled = symmetric.model_copy(update={"Omega2": 2 * symmetric.Omega2})
    assert effective_couplings(doubled)[1] == pytest.approx(2 * effective_couplings(symmetric)[1])
    alpha = amplitude_angle(symmetric)
    assert amplitude_angle(doubled) == pytest.approx(np.arctan(2 * np.tan(alpha)))


def test_common_scaling_keeps_alpha():
    """Scaling both tones by a common factor leaves alpha unchanged"""
    p = default_params()
    scaled = p.model_copy(update={"Omega1": 1.7 * p.Omega1, "Omega2": 1.7 * p.Omega2})
    assert abs(amplitude_angle(scaled) - amplitude_angle(p)) < 1e-12


def test_zero_detuning_rejected(symmetric):
    """A zero Raman detuning cannot be eliminated"""
    broken = symmetric.model_construct(**{**symmetric.model_dump(), "Delta1": 0.0})
    with pytest.raises(DataError):
        effective_couplings(broken)


def test_target_state_examples():
    """Maximally entangled, product and one-third population targets"""
    assert np.allclose(target_state(np.pi / 4, 0.0), np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert np.array_equal(target_state(0.0, 1.3), np.array([1, 0, 0, 0], dtype=complex))
    psi = target_state(np.arccos(1 / np.sqrt(3)), 0.4)
    assert abs(psi[0]) ** 2 == pytest.approx(1 / 3)
    assert np.linalg.norm(psi) == pytest.approx(1.0)


def test_rotating_hamiltonian_is_hermitian():
    """The eliminated Hamiltonian equals its conjugate transpose"""
    H = hamiltonian_rotating(with_phase(default_params(), 0.9))
    assert np.allclose(H, H.conj().T)


def test_rotating_hamiltonian_couplings():
    """Off-diagonal entries are g1eff and g2eff e^{i phiL}"""
    p = with_phase(default_params(), 0.9)
    g1, g2 = effective_couplings(p)
    H = hamiltonian_rotating(p)
    assert H[1, 0] == pytest.approx(g1)
    assert H[2, 0] == pytest.approx(g2 * np.exp(0.9j))
    assert H[2, 1] == 0


def test_phase_pi_flips_only_second_path():
    """phiL = pi flips the sign of the S0-D'1V coupling only"""
    p = default_params()
    H0 = hamiltonian_rotating(with_phase(p, 0.0))
    Hpi = hamiltonian_rotating(with_phase(p, np.pi))
    assert Hpi[2, 0] == pytest.approx(-H0[2, 0])
    assert Hpi[1, 0] == pytest.approx(H0[1, 0])
    assert np.allclose(np.diag(Hpi), np.diag(H0))


def test_resonance_makes_paths_degenerate():
    """Under Raman resonance D1H and D'1V sit symmetrically about S0, a few tens of Hz apart"""
    H = hamiltonian_rotating(default_params())
    diag = np.diag(H).real
    assert diag[1] - diag[0] == pytest.approx(-(diag[2] - diag[0]), abs=1e-3)
    assert abs(diag[1] - diag[2]) < 2 * np.pi * 100


def test_raman_resonant_detunings():
    """Both paths end up with the same light-shift-compensating two-photon detuning"""
    p = raman_resonant(SystemParams())
    delta1, delta2 = p.two_photon_detunings()
    shift_s, shift_d, shift_dp = light_shifts(p)
    assert delta1 == pytest.approx(delta2, rel=1e-9)
    assert delta1 == pytest.approx(0.5 * (shift_d + shift_dp) - shift_s, rel=1e-9)
    assert atomic_frame_rate(p, "effective") == pytest.approx(0.0, abs=1e-3)


def test_raman_resonant_requires_detunings():
    """Absolute frequencies must be dropped before calibration"""
    levels = LevelFrequencies(omegaS=0.0, omegaD=1e9, omegaDp=1e9 + 4.97 * MHZ, omegaC=2e9)
    p = SystemParams(levels=levels, omega1=3e9, omega2=3e9 + 4.97 * MHZ)
    with pytest.raises(DataError):
        raman_resonant(p)


def test_with_target_amplitude_sets_ratio():
    """Retargeting sets tan(alpha) and keeps the total coupling"""
    p = default_params()
    bright = np.hypot(*effective_couplings(p))
    for cos_alpha in (1 / np.sqrt(2), 1 / np.sqrt(3), 1 / np.sqrt(8)):
        alpha = np.arccos(cos_alpha)
        q = with_target_amplitude(p, alpha)
        assert amplitude_angle(q) == pytest.approx(alpha, abs=1e-12)
        assert np.hypot(*effective_couplings(q)) == pytest.approx(bright, rel=1e-12)


def test_with_target_amplitude_rejects_bad_angle():
    """alpha outside [0, pi/2] is an error"""
    with pytest.raises(DataError):
        with_target_amplitude(default_params(), 2.0)


def test_with_mismatch_sets_frame_rate():
    """A tone mismatch delta makes the atomic frame rotate at +delta"""
    delta = 2 * np.pi * 50e3
    q = with_mismatch(default_params(), delta)
    assert atomic_frame_rate(q, "effective") == pytest.approx(delta, rel=1e-9)


def test_full_hamiltonian_hermitian_at_random_times():
    """H(t) is Hermitian for 100 random times"""
    p = with_phase(default_params(), 0.3)
    rng = np.random.default_rng(7)
    for t in rng.uniform(0, p.T, 100):
        H = hamiltonian_full(p, t)
        assert H.shape == (7, 7)
        assert np.allclose(H, H.conj().T)


def test_full_hamiltonian_couplings():
    """Both tones drive S-P and the cavity couples P to both one-photon levels"""
    p = default_params()
    H = hamiltonian_full(p, 0.0)
    assert H[1, 0] == pytest.approx(p.Omega1 + p.Omega2)
    assert H[2, 1] == pytest.approx(p.G1 * p.g)
    assert H[3, 1] == pytest.approx(p.G2 * p.g)


def test_effective_generator_shapes():
    """Six-level Hamiltonian with cavity decay and per-tone scattering"""
    H, collapse = effective_generator(default_params())
    assert H.shape == (6, 6)
    assert all(L.shape == (6, 6) for L in collapse)
    # two cavity channels plus return and loss for each tone
    assert len(collapse) == 6


def test_pure_loss_scattering():
    """scatter_return = 0 drops the return channels"""
    _, collapse = effective_generator(default_params(scatter_return=0.0))
    assert len(collapse) == 4


def test_default_params_values():
    """Default rates and geometry"""
    p = default_params()
    assert p.g == pytest.approx(2 * np.pi * 1.4e6)
    assert p.kappa == pytest.approx(2 * np.pi * 0.05e6)
    assert p.gamma == pytest.approx(2 * np.pi * 11.2e6)
    assert p.T == pytest.approx(40e-6)
    assert amplitude_angle(p) == pytest.approx(np.pi / 4, abs=1e-12)
