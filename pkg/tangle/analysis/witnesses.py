"""Entanglement witnesses of a reconstructed two-qubit state."""
from typing import NamedTuple, Tuple

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize

from tangle.quantum.operators import Operator, as_ket, as_operator, hermitian_eigh, pauli, tensor
from tangle.utils.errors import DataError, DimensionError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

COHERENCE_FLOOR = 1e-9
GRID_STEP_DEG = 15.0

_SIGMA_YY = tensor(pauli("y"), pauli("y"))


def fidelity(rho: npt.ArrayLike, psi: npt.ArrayLike) -> float:
    """<psi|rho|psi>."""
    rho = as_operator(rho)
    psi = as_ket(psi)
    if rho.shape[0] != psi.size:
        raise DimensionError(f"state of dimension {rho.shape[0]} vs ket of dimension {psi.size}")
    return float(np.real(psi.conj() @ rho @ psi))


def _sqrtm_psd(rho: Operator) -> Operator:
    values, vectors = hermitian_eigh(rho)
    return (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T


def concurrence(rho: npt.ArrayLike) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4)."""
    rho = as_operator(rho)
    if rho.shape != (4, 4):
        raise DimensionError("concurrence is defined for two-qubit states")
    root = _sqrtm_psd(rho)
    spin_flipped = _SIGMA_YY @ rho.conj() @ _SIGMA_YY
    values = np.linalg.eigvalsh(0.5 * ((root @ spin_flipped @ root) + (root @ spin_flipped @ root).conj().T))
    lambdas = np.sort(np.sqrt(np.clip(values, 0.0, None)))[::-1]
    return float(max(0.0, lambdas[0] - lambdas[1:].sum()))


def correlation_matrix(rho: npt.ArrayLike) -> np.ndarray:
    """T_ij = tr(rho sigma_i x sigma_j), ion index first."""
    rho = as_operator(rho)
    axes = ("x", "y", "z")
    return np.array([[np.trace(rho @ tensor(pauli(a), pauli(b))).real for b in axes] for a in axes])


def horodecki_bound(rho: npt.ArrayLike) -> float:
    """Maximal CHSH value 2 sqrt(m1 + m2) from the two largest eigenvalues of T^T T."""
    T = correlation_matrix(rho)
    m = np.sort(np.linalg.eigvalsh(T.T @ T))[::-1]
    return float(2 * np.sqrt(max(m[0] + m[1], 0.0)))


class CHSHResult(NamedTuple):
    value: float
    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray
    horodecki: float


def _direction(theta: float, phi: float) -> np.ndarray:
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def _grid_directions(step_deg: float) -> np.ndarray:
    thetas = np.deg2rad(np.arange(0.0, 180.0 + 1e-9, step_deg))
    phis = np.deg2rad(np.arange(0.0, 360.0, step_deg))
    return np.array([[t, f] for t in thetas for f in phis])


def chsh_value(rho: npt.ArrayLike, a, a_prime, b, b_prime) -> float:
    """|E(a,b) - E(a,b') + E(a',b) + E(a',b')| for fixed unit axes."""
    T = correlation_matrix(rho)
    E = lambda x, y: float(np.asarray(x) @ T @ np.asarray(y))  # noqa: E731
    return abs(E(a, b) - E(a, b_prime) + E(a_prime, b) + E(a_prime, b_prime))


def _best_ion_axes(T: np.ndarray, b: np.ndarray, b_prime: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
    u, v = T @ (b - b_prime), T @ (b + b_prime)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    a = u / nu if nu > 0 else np.array([1.0, 0.0, 0.0])
    a_prime = v / nv if nv > 0 else np.array([1.0, 0.0, 0.0])
    return nu + nv, a, a_prime


def chsh_optimal(rho: npt.ArrayLike, step_deg: float = GRID_STEP_DEG) -> CHSHResult:
    """Maximal CHSH value over analyzer axes.

    For fixed photon axes b, b' the best ion axes are along T(b - b') and
    T(b + b'), so S = |T(b - b')| + |T(b + b')|. The photon axes are searched on a
    spherical grid and polished with Nelder-Mead; the first grid maximum wins ties.
    """
    rho = as_operator(rho)
    if rho.shape != (4, 4):
        raise DimensionError("CHSH is defined for two-qubit states")
    T = correlation_matrix(rho)
    angles = _grid_directions(step_deg)
    dirs = np.array([_direction(t, f) for t, f in angles])
    TB = dirs @ T.T
    minus = np.linalg.norm(TB[:, None, :] - TB[None, :, :], axis=2)
    plus = np.linalg.norm(TB[:, None, :] + TB[None, :, :], axis=2)
    i, j = np.unravel_index(np.argmax(minus + plus), minus.shape)

    def negative_s(x):
        return -_best_ion_axes(T, _direction(x[0], x[1]), _direction(x[2], x[3]))[0]

    start = np.concatenate([angles[i], angles[j]])
    result = minimize(negative_s, start, method="Nelder-Mead",
                      options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 20000})
    x = result.x if -result.fun >= -negative_s(start) else start
    b, b_prime = _direction(x[0], x[1]), _direction(x[2], x[3])
    value, a, a_prime = _best_ion_axes(T, b, b_prime)
    bound = horodecki_bound(rho)
    if value > bound + 1e-6:
        logger.warning(f"CHSH optimum {value:.9f} exceeds the Horodecki bound {bound:.9f}")
    return CHSHResult(value=float(value), a=a, a_prime=a_prime, b=b, b_prime=b_prime, horodecki=bound)


def coherence_phase(rho: npt.ArrayLike) -> float:
    """arg <D'V|rho|DH> in (-pi, pi].

    Raises:
        DataError: If the coherence vanishes.
    """
    rho = as_operator(rho)
    coherence = rho[3, 0]
    if abs(coherence) <= COHERENCE_FLOOR:
        raise DataError("coherence between |DH> and |D'V> vanishes")
    phase = float(np.angle(coherence))
    return np.pi if phase <= -np.pi else phase


def populations(rho: npt.ArrayLike) -> Tuple[float, float]:
    """(rho11, rho44): populations of |DH> and |D'V>."""
    rho = as_operator(rho)
    return float(rho[0, 0].real), float(rho[3, 3].real)
