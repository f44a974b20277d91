"""Witness reports and the Raman-phase and target-amplitude sweeps."""
from functools import partial
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
import weave
from pydantic import BaseModel, ConfigDict
from scipy.stats import circstd

from tangle.analysis.bootstrap import bootstrap_estimates
from tangle.analysis.fits import SinusoidFit, fit_table, sinusoid_fit
from tangle.analysis.witnesses import (
    COHERENCE_FLOOR,
    chsh_optimal,
    coherence_phase,
    concurrence,
    fidelity,
    populations,
)
from tangle.dynamics.hamiltonians import amplitude_angle, target_state, with_phase, with_target_amplitude
from tangle.measurement.experiment import run_experiment
from tangle.models.counts import CountTable
from tangle.models.noise import NoiseModel
from tangle.models.params import SystemParams
from tangle.models.results import TomographyResult, WitnessReport
from tangle.models.settings import standard_settings
from tangle.quantum.operators import Ket, Operator, purity
from tangle.tomography.reconstruct import mle_reconstruct
from tangle.utils.errors import FitError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

WITNESS_FIELDS = ("fidelity", "concurrence", "chsh", "coherence_phase", "rho11", "rho44")


def _witnesses(rho: Operator, psi: Ket) -> np.ndarray:
    rho11, rho44 = populations(rho)
    phase = coherence_phase(rho) if abs(rho[3, 0]) > COHERENCE_FLOOR else np.nan
    return np.array([
        np.clip(fidelity(rho, psi), 0.0, 1.0),
        concurrence(rho),
        chsh_optimal(rho).value,
        phase,
        rho11,
        rho44,
    ])


def _witness_estimator(counts: CountTable, psi: Ket) -> np.ndarray:
    return _witnesses(mle_reconstruct(counts, tol=1e-8).rho_hat, psi)


def _spread(values: np.ndarray, circular: bool) -> float:
    finite = values[np.isfinite(values)]
    if len(finite) < 2:
        return 0.0
    if circular:
        return float(circstd(finite, high=np.pi, low=-np.pi))
    return float(np.std(finite, ddof=1))


@weave.op()
def witness_report(counts: CountTable, psi: Ket, resamples: int = 100, seed: int = 0,
                   workers: int = 1, label: str = "",
                   reconstruction: Optional[TomographyResult] = None) -> WitnessReport:
    """MLE reconstruction, witnesses against ``psi`` and their bootstrap errors.

    ``resamples=0`` skips the bootstrap (all std fields 0).
    """
    result = reconstruction or mle_reconstruct(counts)
    rho = result.rho_hat
    values = _witnesses(rho, psi)
    stds = np.zeros(len(WITNESS_FIELDS))
    if resamples:
        samples = bootstrap_estimates(counts, partial(_witness_estimator, psi=psi), resamples, seed, workers)
        stds = np.array([_spread(samples[:, k], name == "coherence_phase")
                         for k, name in enumerate(WITNESS_FIELDS)])
    fields = dict(zip(WITNESS_FIELDS, values))
    report = WitnessReport(
        fidelity=fields["fidelity"], fidelity_std=stds[0],
        concurrence=fields["concurrence"], concurrence_std=stds[1],
        chsh=min(fields["chsh"], 2 * np.sqrt(2)), chsh_std=stds[2],
        coherence_phase=None if np.isnan(fields["coherence_phase"]) else fields["coherence_phase"],
        coherence_phase_std=stds[3],
        rho11=fields["rho11"], rho11_std=stds[4],
        rho44=fields["rho44"], rho44_std=stds[5],
        purity=purity(rho),
        events=counts.detected,
        converged=result.converged,
        label=label,
    )
    logger.info(f"Witnesses{f' [{label}]' if label else ''}: F={report.fidelity:.4f}, "
                f"C={report.concurrence:.4f}, S={report.chsh:.4f}")
    return report


class SweepPoint(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: float
    params: SystemParams
    counts: CountTable
    rho_hat: np.ndarray
    report: WitnessReport


class SweepResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: str
    points: List[SweepPoint]
    fit: Optional[SinusoidFit] = None

    def table(self) -> pd.DataFrame:
        """One row per sweep point: sweep value, witnesses and (for amplitudes) targets."""
        rows = []
        for point in self.points:
            row = {"value": point.value, **point.report.row()}
            row["re_rho14"] = float(point.rho_hat[3, 0].real)
            row["im_rho14"] = float(point.rho_hat[3, 0].imag)
            if self.kind == "amplitude":
                row["target_rho11"] = point.value ** 2
                row["target_rho44"] = 1 - point.value ** 2
            rows.append(row)
        return pd.DataFrame(rows)

    def fit_table(self) -> pd.DataFrame:
        if self.fit is None:
            raise FitError("sweep has no sinusoid fit")
        frame = self.table()
        return fit_table(frame["value"], frame["re_rho14"], frame["im_rho14"], self.fit)


def point_seed(seed: int, index: int) -> int:
    """Independent stream seed for one sweep point."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def _run_point(p: SystemParams, noise: NoiseModel, psi: Ket, value: float, sequences_per_setting: int,
               seed: int, resamples: int, workers: int, label: str) -> SweepPoint:
    experiment = run_experiment(p, noise, standard_settings(), sequences_per_setting, seed, workers)
    counts = experiment.counts
    reconstruction = mle_reconstruct(counts)
    report = witness_report(counts, psi, resamples, seed, workers, label, reconstruction)
    return SweepPoint(value=value, params=p, counts=counts, rho_hat=reconstruction.rho_hat, report=report)


@weave.op()
def phase_sweep(base: SystemParams, noise: NoiseModel, phases: Sequence[float], sequences_per_setting: int,
                seed: int, resamples: int = 100, workers: int = 1, fit: bool = True) -> SweepResult:
    """Tomography at each Raman phase, then a joint sinusoid fit of Re/Im rho14.

    Raises:
        FitError: If a fit is requested with fewer than four distinct phases.
    """
    phases = list(phases)
    if fit and len(np.unique(np.round(np.mod(phases, 2 * np.pi), 12))) < 4:
        raise FitError(f"phase sweep with {len(phases)} point(s) cannot be fitted; need 4 distinct phases")
    alpha = amplitude_angle(base)
    points = []
    for k, phi in enumerate(phases):
        p = with_phase(base, phi)
        points.append(_run_point(p, noise, target_state(alpha, phi), phi, sequences_per_setting,
                                 point_seed(seed, k), resamples, workers, f"phiL={phi:.6g}"))
    result = SweepResult(kind="phase", points=points)
    if fit:
        frame = result.table()
        result.fit = sinusoid_fit(frame["value"], frame["re_rho14"], frame["im_rho14"])
        logger.info(f"Phase sweep contrast {result.fit.contrast:.4f}, offset {result.fit.phase_offset:.4f} rad")
    return result


@weave.op()
def amplitude_sweep(base: SystemParams, noise: NoiseModel, amplitudes: Sequence[float],
                    sequences_per_setting: int, seed: int, resamples: int = 100,
                    workers: int = 1) -> SweepResult:
    """Tomography at each target cos(alpha), e.g. 1/sqrt(2), 1/sqrt(3), 1/sqrt(8)."""
    points = []
    for k, amplitude in enumerate(amplitudes):
        if not 0 <= amplitude <= 1:
            raise FitError(f"target amplitude cos(alpha) must lie in [0, 1], got {amplitude}")
        alpha = float(np.arccos(amplitude))
        p = with_target_amplitude(base, alpha)
        points.append(_run_point(p, noise, target_state(alpha, p.phiL), amplitude, sequences_per_setting,
                                 point_seed(seed, k), resamples, workers, f"cos_alpha={amplitude:.6g}"))
    return SweepResult(kind="amplitude", points=points)
