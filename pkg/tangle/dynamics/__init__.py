"""Bichromatic Raman dynamics: Hamiltonians, master equation, photon source."""
from tangle.dynamics.hamiltonians import (
    effective_couplings,
    light_shifts,
    target_state,
    amplitude_angle,
    hamiltonian_rotating,
    hamiltonian_full,
    effective_generator,
    full_collapse,
    atomic_frame_rate,
    raman_resonant,
    with_mismatch,
    with_phase,
    with_target_amplitude,
    default_params,
)
from tangle.dynamics.master import (
    Trajectory,
    evolve_master,
    simulate_trajectory,
    emission_pulse,
    conditional_joint_state,
    elimination_error,
    elimination_scan,
)
from tangle.dynamics.source import PhotonSource, generation_probability, pulse_overlap, get_photon_source
