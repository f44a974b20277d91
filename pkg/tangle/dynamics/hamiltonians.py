"""Bichromatic Raman Hamiltonians and their dissipators.

Two descriptions of the same single-excitation system are provided:

- the full model on {S0, P0, D1H, D'1V, D0, D'0, lost}, with the P level
  explicit and the second Raman tone rotating at the tone splitting nu;
- the eliminated model on {S0, D1H, D'1V, D0, D'0, lost}, where P has been
  adiabatically removed and both Raman paths are static in their own frame.

The ``lost`` level collects population scattered out of the protocol, so the
master equation stays trace preserving and the lost norm is booked as a
no-photon sequence.
"""
from typing import Callable, List, Tuple

import numpy as np

from tangle.models.params import SystemParams
from tangle.quantum.operators import Ket, Operator, embed
from tangle.utils.errors import DataError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

# Eliminated-model basis
S0, D1H, DP1V, D0, DP0, LOST = range(6)
EFFECTIVE_DIM = 6
EFFECTIVE_INDICES = {"S0": S0, "D1H": D1H, "DP1V": DP1V, "D0": D0, "DP0": DP0, "lost": LOST}

# Full-model basis
F_S0, F_P0, F_D1H, F_DP1V, F_D0, F_DP0, F_LOST = range(7)
FULL_DIM = 7
FULL_INDICES = {"S0": F_S0, "P0": F_P0, "D1H": F_D1H, "DP1V": F_DP1V,
                "D0": F_D0, "DP0": F_DP0, "lost": F_LOST}


def _transition(dim: int, to: int, frm: int) -> Operator:
    op = np.zeros((dim, dim), dtype=complex)
    op[to, frm] = 1.0
    return op


def effective_couplings(p: SystemParams) -> Tuple[float, float]:
    """g_eff_i = Omega_i G_i g / Delta_i for the two Raman paths.

    Raises:
        DataError: If a Raman detuning is zero.
    """
    if p.Delta1 == 0 or p.Delta2 == 0:
        raise DataError("Raman detuning must be nonzero for adiabatic elimination")
    return (p.Omega1 * p.G1 * p.g / p.Delta1, p.Omega2 * p.G2 * p.g / p.Delta2)


def light_shifts(p: SystemParams) -> Tuple[float, float, float]:
    """AC Stark shifts of S0, D1H and D'1V from the eliminated P level."""
    return (
        p.Omega1 ** 2 / p.Delta1 + p.Omega2 ** 2 / p.Delta2,
        (p.G1 * p.g) ** 2 / p.Delta1,
        (p.G2 * p.g) ** 2 / p.Delta2,
    )


def target_state(alpha: float, phi: float) -> Ket:
    """cos(alpha)|DH> + e^{i phi} sin(alpha)|D'V> in the joint basis {DH, DV, D'H, D'V}."""
    return np.array([np.cos(alpha), 0, 0, np.exp(1j * phi) * np.sin(alpha)], dtype=complex)


def amplitude_angle(p: SystemParams) -> float:
    """alpha with tan(alpha) = |g2eff| / |g1eff|."""
    g1, g2 = effective_couplings(p)
    return float(np.arctan2(abs(g2), abs(g1)))


def hamiltonian_rotating(p: SystemParams) -> Operator:
    """3x3 eliminated Hamiltonian on {S0, D1H, D'1V}."""
    g1, g2 = effective_couplings(p)
    delta1, delta2 = p.two_photon_detunings()
    shift_s, shift_d, shift_dp = light_shifts(p)
    H = np.diag([shift_s, -delta1 + shift_d, -delta2 + shift_dp]).astype(complex)
    H[1, 0] = g1
    H[0, 1] = g1
    H[2, 0] = g2 * np.exp(1j * p.phiL)
    H[0, 2] = np.conj(H[2, 0])
    return H


def effective_generator(p: SystemParams) -> Tuple[Operator, List[Operator]]:
    """Hamiltonian and collapse operators of the eliminated model.

    Scattering through P is split per tone: each collapse carries the coherent
    P amplitude sourced by S0 and by the one-photon level on that tone's path.
    """
    dim = EFFECTIVE_DIM
    H = embed(hamiltonian_rotating(p), [S0, D1H, DP1V], dim)

    collapse = [
        np.sqrt(2 * p.kappa) * _transition(dim, D0, D1H),
        np.sqrt(2 * p.kappa) * _transition(dim, DP0, DP1V),
    ]
    for Omega, phase, G, Delta, path in (
        (p.Omega1, 1.0, p.G1, p.Delta1, D1H),
        (p.Omega2, np.exp(1j * p.phiL), p.G2, p.Delta2, DP1V),
    ):
        bra = np.zeros(dim, dtype=complex)
        bra[S0] = Omega * phase / Delta
        bra[path] = G * p.g / Delta
        if not np.any(bra):
            continue
        for rate, to in ((p.scatter_return, S0), (1 - p.scatter_return, LOST)):
            if rate > 0:
                ket = np.zeros(dim, dtype=complex)
                ket[to] = 1.0
                collapse.append(np.sqrt(2 * p.gamma * rate) * np.outer(ket, bra))
    return H, collapse


def hamiltonian_full(p: SystemParams, t: float) -> Operator:
    """7x7 full-model Hamiltonian at time t in the frame of tone 1.

    Both Raman tones drive S0 <-> P0; the second rotates at nu relative to the
    first. P0 couples to D1H and D'1V through the cavity with G1 g and G2 g.
    """
    delta1, delta2 = p.two_photon_detunings()
    nu = p.tone_splitting
    H = np.zeros((FULL_DIM, FULL_DIM), dtype=complex)
    H[F_P0, F_P0] = -p.Delta1
    H[F_D1H, F_D1H] = -delta1
    H[F_DP1V, F_DP1V] = -delta2 + nu
    drive = p.Omega1 + p.Omega2 * np.exp(1j * (p.phiL - nu * t))
    H[F_P0, F_S0] = drive
    H[F_S0, F_P0] = np.conj(drive)
    H[F_D1H, F_P0] = H[F_P0, F_D1H] = p.G1 * p.g
    H[F_DP1V, F_P0] = H[F_P0, F_DP1V] = p.G2 * p.g
    return H


def full_hamiltonian_fn(p: SystemParams) -> Callable[[float], Operator]:
    """H(t) for evolve_master, splitting the static part out of the loop."""
    static = hamiltonian_full(p, 0.0)
    static[F_P0, F_S0] = p.Omega1
    static[F_S0, F_P0] = p.Omega1
    nu = p.tone_splitting

    def H(t: float) -> Operator:
        out = static.copy()
        drive = p.Omega2 * np.exp(1j * (p.phiL - nu * t))
        out[F_P0, F_S0] += drive
        out[F_S0, F_P0] += np.conj(drive)
        return out

    return H


def full_collapse(p: SystemParams) -> List[Operator]:
    dim = FULL_DIM
    collapse = [
        np.sqrt(2 * p.kappa) * _transition(dim, F_D0, F_D1H),
        np.sqrt(2 * p.kappa) * _transition(dim, F_DP0, F_DP1V),
    ]
    if p.scatter_return > 0:
        collapse.append(np.sqrt(2 * p.gamma * p.scatter_return) * _transition(dim, F_S0, F_P0))
    if p.scatter_return < 1:
        collapse.append(np.sqrt(2 * p.gamma * (1 - p.scatter_return)) * _transition(dim, F_LOST, F_P0))
    return collapse


def atomic_frame_rate(p: SystemParams, model: str) -> float:
    """Rate at which the model-frame D'/D coherence lags the atomic frame.

    The atomic-frame coherence equals the model coherence times
    exp(i * rate * t).
    """
    if model == "full":
        return p.zeeman_splitting
    return p.zeeman_splitting - p.tone_splitting


def raman_resonant(p: SystemParams) -> SystemParams:
    """Tune the cavity so both Raman paths are resonant including light shifts.

    The tone detunings are kept (so the effective couplings and alpha do not
    move); the cavity detuning absorbs the mean AC Stark shift and the second
    tone sits exactly one Zeeman splitting above the first. The residual
    differential shift (G g)^2 (1/Delta1 - 1/Delta2) is left symmetric about S0.
    """
    if p.levels is not None or p.omega1 is not None:
        raise DataError("Raman resonance calibration works on detunings; drop absolute frequencies first")
    shift_s, shift_d, shift_dp = light_shifts(p)
    common = 0.5 * (shift_d + shift_dp) - shift_s
    resonant = p.model_copy(update={
        "DeltaC1": p.Delta1 - common,
        "Delta2": p.Delta1 + p.DeltaDDp,
    })
    logger.debug(f"Raman resonance: two-photon detuning {common / (2 * np.pi):.4g} Hz absorbs light shifts")
    return resonant


def with_mismatch(p: SystemParams, delta: float) -> SystemParams:
    """Raise omega1 - omega2 by delta (rad/s) with everything else fixed."""
    if p.omega2 is not None:
        return p.model_copy(update={"omega2": p.omega2 - delta, "Delta2": p.Delta2 - delta})
    return p.model_copy(update={"Delta2": p.Delta2 - delta})


def with_phase(p: SystemParams, phiL: float) -> SystemParams:
    return p.model_copy(update={"phiL": phiL})


def with_target_amplitude(p: SystemParams, alpha: float, resonant: bool = True) -> SystemParams:
    """Set Omega1, Omega2 for tan(alpha) = |g2eff/g1eff| keeping g1eff^2 + g2eff^2.

    Raises:
        DataError: If alpha is outside [0, pi/2] or both couplings vanish.
    """
    if not 0 <= alpha <= np.pi / 2:
        raise DataError(f"target amplitude angle must lie in [0, pi/2], got {alpha}")
    g1, g2 = effective_couplings(p)
    bright = np.hypot(g1, g2)
    if bright == 0:
        raise DataError("cannot retarget amplitudes with both Raman tones off")
    Omega1 = abs(bright * np.cos(alpha) * p.Delta1 / (p.G1 * p.g)) if p.G1 else 0.0
    Omega2 = abs(bright * np.sin(alpha) * p.Delta2 / (p.G2 * p.g)) if p.G2 else 0.0
    q = p.model_copy(update={"Omega1": Omega1, "Omega2": Omega2})
    return raman_resonant(q) if resonant else q


def default_params(**overrides) -> SystemParams:
    """Default parameter set: symmetric couplings (alpha = pi/4), Raman resonant."""
    base = SystemParams(**overrides)
    return with_target_amplitude(base, np.pi / 4)
