"""Jones calculus for the photon polarization analyzer.

The analyzer is a quarter-waveplate followed by a half-waveplate in front of a
polarizing beamsplitter whose transmitted (H) output is port 0 and reflected
(V) output is port 1. The swapped partner of a setting rotates the
half-waveplate by a further 45 degrees, which exchanges the two ports.
"""
from typing import Dict, Tuple

import numpy as np

from tangle.models.settings import BasisSetting
from tangle.quantum.operators import Ket, Operator

# (quarter-waveplate, half-waveplate) fast-axis angles in degrees per basis
WAVEPLATE_ANGLES: Dict[str, Tuple[float, float]] = {
    "HV": (0.0, 0.0),
    "DA": (45.0, 22.5),
    "RL": (45.0, 0.0),
}
SWAP_OFFSET = 45.0

_KETS: Dict[str, Ket] = {
    "H": np.array([1, 0], dtype=complex),
    "V": np.array([0, 1], dtype=complex),
    "D": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "A": np.array([1, -1], dtype=complex) / np.sqrt(2),
    "R": np.array([1, 1j], dtype=complex) / np.sqrt(2),
    "L": np.array([1, -1j], dtype=complex) / np.sqrt(2),
}


def _rotation(theta: float) -> Operator:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]], dtype=complex)


def retarder(theta_deg: float, retardance: float) -> Operator:
    """Waveplate with fast axis at theta (degrees) and the given retardance (rad)."""
    theta = np.deg2rad(theta_deg)
    return _rotation(-theta) @ np.diag([1, np.exp(1j * retardance)]) @ _rotation(theta)


def half_wave_plate(theta_deg: float) -> Operator:
    return retarder(theta_deg, np.pi)


def quarter_wave_plate(theta_deg: float) -> Operator:
    return retarder(theta_deg, np.pi / 2)


def polarization_ket(label: str) -> Ket:
    """One of H, V, D, A, R, L."""
    try:
        return _KETS[label].copy()
    except KeyError:
        raise ValueError(f"Unknown polarization: {label}")


def analyzer_unitary(setting: BasisSetting) -> Operator:
    """Waveplate unitary taking the setting's basis pair onto ports 0 and 1.

    For the unswapped setting the first letter of the basis (H, D or R) exits
    port 0. The swapped partner sends it to port 1.
    """
    quarter, half = WAVEPLATE_ANGLES[setting.photon_basis]
    if setting.swapped:
        half += SWAP_OFFSET
    return half_wave_plate(half) @ quarter_wave_plate(quarter)


def port_projector(setting: BasisSetting, port: int) -> Operator:
    """Polarization projector U^dagger |port><port| U of a physical output port."""
    if port not in (0, 1):
        raise ValueError(f"port must be 0 or 1, got {port}")
    U = analyzer_unitary(setting)
    row = U[port]
    return np.outer(row.conj(), row)


def logical_port_projector(setting: BasisSetting, port: int) -> Operator:
    """Projector of a logical port; identical for a setting and its swapped partner."""
    return port_projector(setting.logical(), port)
