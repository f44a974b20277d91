"""Lindblad propagation, pulse shapes and the conditional ion-photon state."""
from typing import Callable, List, Literal, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict
from scipy.integrate import solve_ivp

from tangle.dynamics import hamiltonians as hm
from tangle.models.params import SystemParams
from tangle.quantum.operators import Operator, as_operator, check_density_matrix, embed
from tangle.utils.errors import DataError, DimensionError, EmissionError, IntegrationError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

ModelKind = Literal["effective", "full"]
HamiltonianLike = Union[npt.ArrayLike, Callable[[float], Operator]]

TRACE_TOL = 1e-8
STATE_TOL = 1e-6
EMISSION_FLOOR = 1e-14
DEFAULT_POINTS = 801


def evolve_master(
    H: HamiltonianLike,
    rho0: npt.ArrayLike,
    collapse: Sequence[npt.ArrayLike],
    grid: npt.ArrayLike,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    trace_tol: float = TRACE_TOL,
    max_refinements: int = 4,
) -> np.ndarray:
    """Integrate the Lindblad master equation and sample rho(t) on a grid.

    ``H`` is either a constant operator or a callable t -> operator. The step
    tolerances are tightened tenfold until the trace drifts by less than
    ``trace_tol`` over the whole grid.

    Returns:
        Array of shape (len(grid), d, d).

    Raises:
        DimensionError: If operator dimensions disagree.
        DataError: If the grid is not strictly increasing.
        IntegrationError: If the tolerance is not met at the last refinement.
    """
    rho0 = as_operator(rho0)
    d = rho0.shape[0]
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DataError("time grid must be a non-empty list")
    if np.any(np.diff(grid) <= 0):
        raise DataError("time grid must be strictly increasing")

    if callable(H):
        H_of_t = H
        if as_operator(H(grid[0])).shape != rho0.shape:
            raise DimensionError("Hamiltonian and initial state dimensions differ")
    else:
        H_const = as_operator(H)
        if H_const.shape != rho0.shape:
            raise DimensionError("Hamiltonian and initial state dimensions differ")
        H_of_t = lambda t: H_const  # noqa: E731

    Ls = np.zeros((len(collapse), d, d), dtype=complex)
    for k, L in enumerate(collapse):
        L = as_operator(L)
        if L.shape != (d, d):
            raise DimensionError(f"collapse operator {k} has shape {L.shape}, state is {d}x{d}")
        Ls[k] = L
    LdL = np.einsum('kji,kjl->il', Ls.conj(), Ls)

    def rhs(t, y):
        rho = y.reshape(d, d)
        Ht = H_of_t(t)
        drho = -1j * (Ht @ rho - rho @ Ht)
        if len(Ls):
            drho += np.einsum('kij,jl,kml->im', Ls, rho, Ls.conj())
            drho -= 0.5 * (LdL @ rho + rho @ LdL)
        return drho.reshape(-1)

    trace0 = np.trace(rho0).real
    for attempt in range(max_refinements + 1):
        if grid.size == 1:
            states = rho0[None, :, :].copy()
        else:
            solution = solve_ivp(rhs, (grid[0], grid[-1]), rho0.reshape(-1).copy(),
                                 method="DOP853", t_eval=grid, rtol=rtol, atol=atol)
            if not solution.success:
                logger.debug(f"solve_ivp failed at rtol={rtol:g}: {solution.message}")
                rtol, atol = rtol / 10, atol / 10
                continue
            states = solution.y.T.reshape(-1, d, d)
        drift = np.max(np.abs(np.trace(states, axis1=1, axis2=2).real - trace0))
        logger.debug(f"evolve_master attempt {attempt}: rtol={rtol:g}, trace drift {drift:.3g}")
        if drift < trace_tol:
            break
        rtol, atol = rtol / 10, atol / 10
    else:
        raise IntegrationError(f"trace drift above {trace_tol:g} after {max_refinements} refinements")

    states = 0.5 * (states + np.conj(np.transpose(states, (0, 2, 1))))
    if abs(trace0 - 1) < STATE_TOL:
        for k in range(len(states)):
            check = check_density_matrix(states[k], STATE_TOL)
            if not check.ok:
                raise IntegrationError(f"state at t={grid[k]:.6g} failed the {check.diagnostic} check")
    return states


class Trajectory(BaseModel):
    """rho(t) of one model on a time grid."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    states: np.ndarray
    model: ModelKind = "effective"

    @property
    def indices(self) -> dict:
        return hm.EFFECTIVE_INDICES if self.model == "effective" else hm.FULL_INDICES

    def population(self, level: str) -> np.ndarray:
        i = self.indices[level]
        return self.states[:, i, i].real

    def state_at(self, t: float) -> Operator:
        """Linear interpolation of rho between grid points."""
        if t < self.times[0] or t > self.times[-1]:
            raise DataError(f"t={t:g} s lies outside the trajectory")
        if len(self.times) == 1:
            return self.states[0]
        k = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, len(self.times) - 2))
        w = (t - self.times[k]) / (self.times[k + 1] - self.times[k])
        return (1 - w) * self.states[k] + w * self.states[k + 1]


def time_grid(p: SystemParams, points: int = DEFAULT_POINTS) -> np.ndarray:
    return np.linspace(0.0, p.T, points)


def simulate_trajectory(p: SystemParams, model: ModelKind = "effective", points: int = DEFAULT_POINTS,
                        **solver_options) -> Trajectory:
    """Evolve |S0> through one Raman pulse in the eliminated or full model."""
    grid = time_grid(p, points)
    if model == "effective":
        H, collapse = hm.effective_generator(p)
        rho0 = np.zeros((hm.EFFECTIVE_DIM, hm.EFFECTIVE_DIM), dtype=complex)
        rho0[hm.S0, hm.S0] = 1
    elif model == "full":
        H, collapse = hm.full_hamiltonian_fn(p), hm.full_collapse(p)
        rho0 = np.zeros((hm.FULL_DIM, hm.FULL_DIM), dtype=complex)
        rho0[hm.F_S0, hm.F_S0] = 1
    else:
        raise ValueError(f"Unknown model: {model}")
    logger.debug(f"Simulating {model} model over {p.T * 1e6:g} us on {points} points")
    states = evolve_master(H, rho0, collapse, grid, **solver_options)
    return Trajectory(times=grid, states=states, model=model)


def emission_pulse(trajectory: Trajectory, p: SystemParams) -> Tuple[np.ndarray, np.ndarray]:
    """Photon emission rates I_H(t), I_V(t) = 2 kappa x one-photon populations."""
    I_H = 2 * p.kappa * np.clip(trajectory.population("D1H"), 0.0, None)
    I_V = 2 * p.kappa * np.clip(trajectory.population("DP1V"), 0.0, None)
    return I_H, I_V


def conditional_joint_state(trajectory: Trajectory, t: float, p: SystemParams) -> Operator:
    """Joint ion-photon state given that the photon leaves the cavity at t.

    The one-photon block {D1H, D'1V} is moved to the atomic frame, normalised
    and embedded as |DH>, |D'V> in the joint basis {DH, DV, D'H, D'V}.

    Raises:
        EmissionError: If the one-photon population at t vanishes.
    """
    rho = trajectory.state_at(t)
    idx = [trajectory.indices["D1H"], trajectory.indices["DP1V"]]
    block = rho[np.ix_(idx, idx)].copy()
    population = float(np.trace(block).real)
    if population <= EMISSION_FLOOR:
        raise EmissionError(f"no one-photon amplitude at t={t:.6g} s")
    rotation = np.exp(1j * hm.atomic_frame_rate(p, trajectory.model) * t)
    block[1, 0] *= rotation
    block[0, 1] = np.conj(block[1, 0])
    block /= population
    return embed(block, [0, 3], 4)


def elimination_error(p: SystemParams, points: int = 201, **solver_options) -> float:
    """Relative L2 distance of the D and D' populations, full vs eliminated model.

    D counts D1H + D0 and D' counts D'1V + D'0 over the whole pulse.
    """
    eff = simulate_trajectory(p, "effective", points, **solver_options)
    full = simulate_trajectory(p, "full", points, **solver_options)

    def transfer(tr: Trajectory) -> np.ndarray:
        return np.concatenate([tr.population("D1H") + tr.population("D0"),
                               tr.population("DP1V") + tr.population("DP0")])

    reference = transfer(eff)
    norm = np.linalg.norm(reference)
    if norm == 0:
        return 0.0
    error = float(np.linalg.norm(transfer(full) - reference) / norm)
    logger.debug(f"Elimination error at Delta1={p.Delta1 / (2e6 * np.pi):.4g} MHz: {error:.4g}")
    return error


def with_detuning(p: SystemParams, delta: float) -> SystemParams:
    """Move the Raman tones to detuning -delta (rad/s) and re-resonate."""
    shift = -abs(delta) - p.Delta1
    q = p.model_copy(update={"Delta1": p.Delta1 + shift, "Delta2": p.Delta2 + shift,
                             "DeltaC1": p.DeltaC1 + shift})
    return hm.raman_resonant(q)


def elimination_scan(p: SystemParams, detunings: Sequence[float], points: int = 201,
                     **solver_options) -> List[float]:
    """elimination_error at a series of tone detunings |Delta| (rad/s)."""
    return [elimination_error(with_detuning(p, delta), points, **solver_options) for delta in detunings]
