"""Tests for master-equation propagation and the conditional joint state."""
import numpy as np
import pytest

from tangle.analysis.witnesses import coherence_phase, concurrence, fidelity
from tangle.dynamics.hamiltonians import default_params, raman_resonant, target_state, with_mismatch, with_phase
from tangle.dynamics.master import (
    Trajectory,
    conditional_joint_state,
    elimination_error,
    elimination_scan,
    emission_pulse,
    evolve_master,
    simulate_trajectory,
)
from tangle.models.params import MHZ, SystemParams
from tangle.quantum.operators import check_density_matrix, pauli, purity
from tangle.utils.errors import DataError, DimensionError, EmissionError, IntegrationError


@pytest.fixture
def excited():
    return np.array([[0, 0], [0, 1]], dtype=complex)


def test_unitary_evolution_preserves_purity():
    """No collapse operators and constant H keep the state pure"""
    rho0 = np.array([[1, 0], [0, 0]], dtype=complex)
    grid = np.linspace(0, 5, 51)
    states = evolve_master(pauli("x") + 0.3 * pauli("z"), rho0, [], grid, rtol=1e-11, atol=1e-13)
    assert states.shape == (51, 2, 2)
    for rho in states:
        assert purity(rho) == pytest.approx(1.0, abs=1e-8)


def test_rabi_oscillation():
    """A resonant drive sigma_x flips the qubit at t = pi/2"""
    rho0 = np.array([[1, 0], [0, 0]], dtype=complex)
    grid = np.linspace(0, np.pi / 2, 11)
    states = evolve_master(pauli("x"), rho0, [], grid, rtol=1e-11, atol=1e-13)
    assert states[-1][1, 1].real == pytest.approx(1.0, abs=1e-8)


def test_single_mode_decay(excited):
    """Excited population decays as exp(-2 kappa t)"""
    kappa = 1.0
    L = np.sqrt(2 * kappa) * np.array([[0, 1], [0, 0]], dtype=complex)
    grid = np.linspace(0, 2, 41)
    states = evolve_master(np.zeros((2, 2)), excited, [L], grid)
    assert np.max(np.abs(states[:, 1, 1].real - np.exp(-2 * kappa * grid))) < 1e-6


def test_trace_preserved_on_every_step(excited):
    """Trace stays 1 within 1e-8 and every state is physical"""
    L = np.sqrt(0.4) * np.array([[0, 1], [0, 0]], dtype=complex)
    states = evolve_master(pauli("x"), excited, [L], np.linspace(0, 10, 101))
    traces = np.trace(states, axis1=1, axis2=2).real
    assert np.max(np.abs(traces - 1)) < 1e-8
    assert all(check_density_matrix(rho, 1e-6).ok for rho in states)


def test_time_dependent_hamiltonian(excited):
    """A callable H is evaluated along the grid"""
    states = evolve_master(lambda t: np.cos(t) * pauli("x"), excited, [], np.linspace(0, 1, 5))
    assert states.shape == (5, 2, 2)


def test_grid_must_increase(excited):
    """Non-increasing grids are rejected"""
    with pytest.raises(DataError):
        evolve_master(pauli("x"), excited, [], [0.0, 1.0, 1.0])
    with pytest.raises(DataError):
        evolve_master(pauli("x"), excited, [], [])


def test_dimension_mismatch(excited):
    """Hamiltonian, state and collapse dimensions must agree"""
    with pytest.raises(DimensionError):
        evolve_master(np.eye(3), excited, [], [0.0, 1.0])
    with pytest.raises(DimensionError):
        evolve_master(pauli("x"), excited, [np.eye(3)], [0.0, 1.0])


def test_refinement_exhausted(excited):
    """An unreachable trace tolerance raises IntegrationError"""
    with pytest.raises(IntegrationError):
        evolve_master(pauli("x"), excited, [], [0.0, 1.0], trace_tol=0.0, max_refinements=0)


def test_trajectory_interpolation():
    """state_at interpolates linearly and refuses times outside the grid"""
    states = np.array([np.eye(2), 3 * np.eye(2)], dtype=complex)
    tr = Trajectory(times=np.array([0.0, 1.0]), states=states)
    assert np.allclose(tr.state_at(0.25), 1.5 * np.eye(2))
    with pytest.raises(DataError):
        tr.state_at(1.5)


def test_zero_drive_emits_nothing():
    """No Raman drive gives identically zero pulses"""
    p = SystemParams(Omega1=0.0, Omega2=0.0)
    tr = simulate_trajectory(p, "effective", points=21)
    I_H, I_V = emission_pulse(tr, p)
    assert not I_H.any() and not I_V.any()
    assert np.allclose(tr.population("S0"), 1.0)


def test_zero_drive_full_model_keeps_ground_state():
    """Without drive the full model leaves S0 untouched"""
    p = SystemParams(Omega1=0.0, Omega2=0.0)
    tr = simulate_trajectory(p, "full", points=11)
    assert np.allclose(tr.population("S0"), 1.0)


def test_emission_probability_bounded():
    """The integrated pulse never exceeds one photon"""
    p = default_params()
    tr = simulate_trajectory(p, "effective", points=401)
    I_H, I_V = emission_pulse(tr, p)
    assert np.all(I_H >= 0) and np.all(I_V >= 0)
    total = np.trapezoid(I_H + I_V, tr.times)
    assert 0 < total <= 1


def test_populations_account_for_everything():
    """Every level population sums to one, lost norm included"""
    tr = simulate_trajectory(default_params(), "effective", points=101)
    levels = ("S0", "D1H", "DP1V", "D0", "DP0", "lost")
    total = sum(tr.population(level) for level in levels)
    assert np.allclose(total, 1.0, atol=1e-8)


@pytest.mark.parametrize("phi", [0.0, 1.0, -2.5])
def test_resonant_conditional_state_matches_target(phi):
    """Symmetric resonant drive heralds the maximally entangled target at every time"""
    p = with_phase(default_params(), phi)
    tr = simulate_trajectory(p, "effective", points=201)
    psi = target_state(np.pi / 4, phi)
    for t in tr.times[1:]:
        rho = conditional_joint_state(tr, t, p)
        assert check_density_matrix(rho).ok
        assert fidelity(rho, psi) > 1 - 1e-6


def test_resonant_coherence_phase_is_constant():
    """Under Raman resonance the coherence phase varies by less than 1e-3 rad over the pulse"""
    p = with_phase(default_params(), 0.7)
    tr = simulate_trajectory(p, "effective", points=201)
    phases = np.unwrap([coherence_phase(conditional_joint_state(tr, t, p)) for t in tr.times[1:]])
    assert np.ptp(phases) < 1e-3
    assert phases.mean() == pytest.approx(0.7, abs=3e-3)


def test_mismatch_phase_drifts_linearly():
    """A tone mismatch delta makes the coherence phase advance at delta"""
    delta = 2 * np.pi * 50e3
    p = with_mismatch(default_params(), delta)
    tr = simulate_trajectory(p, "effective", points=401)
    times = tr.times[tr.times > 10e-6]
    phases = np.unwrap([coherence_phase(conditional_joint_state(tr, t, p)) for t in times])
    slope = np.polyfit(times, phases, 1)[0]
    assert slope == pytest.approx(delta, rel=0.05)


def test_separable_limit():
    """g2eff = 0 heralds |DH><DH| with zero concurrence"""
    p = default_params().model_copy(update={"Omega2": 0.0})
    tr = simulate_trajectory(p, "effective", points=101)
    rho = conditional_joint_state(tr, p.T / 2, p)
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 0] = 1
    assert np.allclose(rho, expected, atol=1e-12)
    assert concurrence(rho) == pytest.approx(0.0, abs=1e-9)


def test_no_emission_raises():
    """At t = 0 no photon amplitude exists yet"""
    p = default_params()
    tr = simulate_trajectory(p, "effective", points=21)
    with pytest.raises(EmissionError):
        conditional_joint_state(tr, 0.0, p)


def test_common_scaling_keeps_population_ratio():
    """Scaling both tones keeps the heralded population ratio"""
    p = default_params()
    q = raman_resonant(p.model_copy(update={"Omega1": 1.5 * p.Omega1, "Omega2": 1.5 * p.Omega2}))
    ratios = []
    for params in (p, q):
        tr = simulate_trajectory(params, "effective", points=101, rtol=1e-10, atol=1e-12)
        rho = conditional_joint_state(tr, params.T, params)
        ratios.append(rho[0, 0].real / rho[3, 3].real)
    assert ratios[0] == pytest.approx(ratios[1], rel=1e-6)


@pytest.mark.integration
def test_adiabatic_elimination_oracle():
    """Full and eliminated models agree within 5% at Delta = 400 MHz"""
    error = elimination_error(default_params(), points=201, rtol=1e-7, atol=1e-10, trace_tol=1e-6)
    assert error < 0.05


@pytest.mark.integration
def test_elimination_degrades_as_detuning_shrinks():
    """The elimination error grows monotonically as |Delta| shrinks"""
    errors = elimination_scan(default_params(), [400 * MHZ, 100 * MHZ, 40 * MHZ], points=201,
                              rtol=1e-7, atol=1e-10, trace_tol=1e-6)
    assert errors[0] < errors[1] < errors[2]
