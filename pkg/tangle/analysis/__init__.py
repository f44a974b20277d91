"""Witnesses, fits, bootstrap errors, time-bin analysis and sweeps."""
from tangle.analysis.witnesses import (
    fidelity,
    concurrence,
    correlation_matrix,
    horodecki_bound,
    chsh_value,
    chsh_optimal,
    CHSHResult,
    coherence_phase,
    populations,
)
from tangle.analysis.fits import SinusoidFit, SlopeFit, sinusoid_fit, fit_table, phase_slope
from tangle.analysis.bootstrap import bootstrap_estimates, bootstrap_std
from tangle.analysis.timebins import TimeBinPhase, bin_edges, phase_vs_timebin
from tangle.analysis.sweeps import SweepPoint, SweepResult, witness_report, phase_sweep, amplitude_sweep
