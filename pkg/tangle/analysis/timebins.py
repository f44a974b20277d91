"""Coherence phase as a function of photon detection time."""
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from tangle.analysis.bootstrap import bootstrap_std
from tangle.analysis.witnesses import coherence_phase
from tangle.models.counts import CountTable
from tangle.models.events import DetectionEvent
from tangle.tomography.reconstruct import mle_reconstruct
from tangle.utils.errors import UnderpopulatedBinError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

BinStrategy = Literal["population", "width"]
DEFAULT_BINS = 5
MIN_BIN_EVENTS = 500


class TimeBinPhase(BaseModel):
    start: float
    stop: float
    center: float
    phase: float
    std: float
    events: int


def _phase_estimator(counts: CountTable) -> float:
    return coherence_phase(mle_reconstruct(counts, tol=1e-8).rho_hat)


def bin_edges(times: np.ndarray, bins: int, strategy: BinStrategy,
              window: Optional[Tuple[float, float]] = None) -> np.ndarray:
    """Equal-population (quantile) or equal-width edges over the window."""
    low, high = window if window is not None else (times.min(), times.max())
    if strategy == "population":
        edges = np.quantile(times, np.linspace(0.0, 1.0, bins + 1))
        edges[0], edges[-1] = low, high
        return edges
    if strategy == "width":
        return np.linspace(low, high, bins + 1)
    raise ValueError(f"Unknown bin strategy: {strategy}")


def phase_vs_timebin(events: Sequence[DetectionEvent], bins: int = DEFAULT_BINS,
                     strategy: BinStrategy = "population", window: Optional[Tuple[float, float]] = None,
                     min_events: int = MIN_BIN_EVENTS, resamples: int = 100, seed: int = 0,
                     workers: int = 1) -> List[TimeBinPhase]:
    """Per-bin MLE reconstruction followed by coherence_phase.

    The bin center is the mean detection time of its events; the phase error
    is the circular bootstrap standard deviation.

    Raises:
        UnderpopulatedBinError: If any bin holds fewer than ``min_events`` events.
    """
    if window is not None:
        events = [e for e in events if window[0] <= e.detection_time <= window[1]]
    if not events:
        raise UnderpopulatedBinError("no events to bin")
    times = np.array([e.detection_time for e in events])
    edges = bin_edges(times, bins, strategy, window)

    index = np.clip(np.searchsorted(edges, times, side="right") - 1, 0, bins - 1)
    results = []
    for k in range(bins):
        members = [e for e, i in zip(events, index) if i == k]
        if len(members) < min_events:
            raise UnderpopulatedBinError(
                f"bin {k} [{edges[k] * 1e6:.3f}, {edges[k + 1] * 1e6:.3f}] us holds "
                f"{len(members)} events, need {min_events}"
            )
        counts = CountTable()
        for event in members:
            counts.add_event(event)
        phase = _phase_estimator(counts)
        std = bootstrap_std(counts, _phase_estimator, resamples, seed + k, circular=True, workers=workers) \
            if resamples else 0.0
        center = float(np.mean([e.detection_time for e in members]))
        logger.debug(f"Time bin {k}: center {center * 1e6:.3f} us, phase {phase:.4f} +- {std:.4f}")
        results.append(TimeBinPhase(start=float(edges[k]), stop=float(edges[k + 1]), center=center,
                                    phase=phase, std=float(std), events=len(members)))
    return results
