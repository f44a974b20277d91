"""Least-squares fits behind the phase-sweep and time-bin figures."""
from typing import NamedTuple, Optional, Sequence

import numpy as np
import numpy.typing as npt
import pandas as pd

from tangle.utils.errors import FitError

MIN_DISTINCT_PHASES = 4


class SinusoidFit(NamedTuple):
    contrast: float
    phase_offset: float
    amplitude: float
    residuals: np.ndarray
    fit_re: np.ndarray
    fit_im: np.ndarray


def sinusoid_fit(phases: npt.ArrayLike, re_values: npt.ArrayLike, im_values: npt.ArrayLike) -> SinusoidFit:
    """Joint fit of Re = A cos(phi + phi0) and Im = A cos(phi + phi0 - pi/2).

    Linear in (c, s) = A (cos phi0, sin phi0). Contrast is 2A, so a family of
    maximally entangled states gives 1.

    Raises:
        FitError: With fewer than four distinct phases or a singular design.
    """
    phi = np.asarray(phases, dtype=float)
    re = np.asarray(re_values, dtype=float)
    im = np.asarray(im_values, dtype=float)
    if not (phi.shape == re.shape == im.shape) or phi.ndim != 1:
        raise FitError("phases, real and imaginary parts must be equal-length lists")
    distinct = np.unique(np.round(np.mod(phi, 2 * np.pi), 12))
    if len(distinct) < MIN_DISTINCT_PHASES:
        raise FitError(f"need at least {MIN_DISTINCT_PHASES} distinct phases, got {len(distinct)}")

    design = np.vstack([
        np.column_stack([np.cos(phi), -np.sin(phi)]),
        np.column_stack([np.sin(phi), np.cos(phi)]),
    ])
    target = np.concatenate([re, im])
    if np.linalg.matrix_rank(design) < 2:
        raise FitError("degenerate design matrix")
    (c, s), *_ = np.linalg.lstsq(design, target, rcond=None)
    fitted = design @ np.array([c, s])
    amplitude = float(np.hypot(c, s))
    return SinusoidFit(
        contrast=2 * amplitude,
        phase_offset=float(np.arctan2(s, c)),
        amplitude=amplitude,
        residuals=target - fitted,
        fit_re=fitted[:len(phi)],
        fit_im=fitted[len(phi):],
    )


def fit_table(phases: Sequence[float], re_values: Sequence[float], im_values: Sequence[float],
              fit: SinusoidFit) -> pd.DataFrame:
    """Columns phase, re, im, fit_re, fit_im for plotting."""
    return pd.DataFrame({
        "phase": np.asarray(phases, dtype=float),
        "re": np.asarray(re_values, dtype=float),
        "im": np.asarray(im_values, dtype=float),
        "fit_re": fit.fit_re,
        "fit_im": fit.fit_im,
    })


class SlopeFit(NamedTuple):
    slope: float
    slope_std: float
    intercept: float


def phase_slope(times: npt.ArrayLike, phases: npt.ArrayLike, stds: Optional[npt.ArrayLike] = None) -> SlopeFit:
    """Weighted straight-line fit of unwrapped phase against time.

    Raises:
        FitError: With fewer than two points.
    """
    t = np.asarray(times, dtype=float)
    order = np.argsort(t)
    t = t[order]
    phi = np.unwrap(np.asarray(phases, dtype=float)[order])
    if len(t) < 2:
        raise FitError("a slope needs at least two time bins")
    sigma = np.ones_like(t) if stds is None else np.asarray(stds, dtype=float)[order]
    sigma = np.where(sigma > 0, sigma, np.min(sigma[sigma > 0]) if np.any(sigma > 0) else 1.0)
    w = 1.0 / sigma ** 2
    A = np.column_stack([t, np.ones_like(t)])
    normal = A.T @ (A * w[:, None])
    if abs(np.linalg.det(normal)) == 0:
        raise FitError("time bins do not determine a slope")
    cov = np.linalg.inv(normal)
    slope, intercept = cov @ (A.T @ (w * phi))
    return SlopeFit(slope=float(slope), slope_std=float(np.sqrt(cov[0, 0])), intercept=float(intercept))
