"""Main CLI for tangle"""
from dotenv import load_dotenv
load_dotenv()  # Load environment variables from .env file

import json
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import click
import numpy as np
import pandas as pd
import weave
from rich import box
from rich.console import Console
from rich.table import Table

from tangle.analysis.fits import phase_slope
from tangle.analysis.sweeps import SweepResult, amplitude_sweep, phase_sweep, witness_report
from tangle.analysis.timebins import phase_vs_timebin
from tangle.budget import comparison_table, detection_budget
from tangle.cli.config import RunConfig, load_config
from tangle.dynamics.source import generation_probability, get_photon_source, pulse_overlap
from tangle.measurement.experiment import run_experiment
from tangle.models.counts import CountTable
from tangle.models.events import DetectionEvent
from tangle.models.settings import standard_settings
from tangle.quantum.serialization import format_operator
from tangle.storage.run_store import RunStore, RunStoreError
from tangle.tomography.reconstruct import mle_reconstruct
from tangle.utils.errors import ConfigError, ConvergenceError, DataError, ParseError
from tangle.utils.logging import configure_logging, get_logger

logger = get_logger(__name__)

# Initialize rich console
console = Console()

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CONVERGENCE = 3


class Context:
    """State shared by every subcommand."""

    def __init__(self, config: RunConfig):
        self.config = config

    def store(self, out: Optional[str]) -> RunStore:
        return RunStore.create(out or self.config.output_dir)

    def workers(self, override: Optional[int]) -> Optional[int]:
        return override if override is not None else self.config.workers


pass_context = click.make_pass_decorator(Context)


def _init_tracing() -> None:
    project = os.getenv("TANGLE_WEAVE_PROJECT")
    if project:
        weave.init(project)


def _summary_table(title: str, rows: Sequence[tuple]) -> None:
    table = Table(title=title, box=box.SIMPLE)
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for name, value in rows:
        table.add_row(name, f"{value:.6g}" if isinstance(value, float) else str(value))
    console.print(table)


def _read_events(path: str) -> List[DetectionEvent]:
    events = []
    for number, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        try:
            events.append(DetectionEvent.from_record(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as e:
            raise ParseError(f"invalid event record ({e})", line=number)
    return events


def _read_counts(path: str) -> CountTable:
    counts = CountTable.from_csv(path)
    counts.require_coverage(standard_settings())
    return counts


def _pulse_data(times: np.ndarray, values: np.ndarray) -> str:
    frame = pd.DataFrame({"t_us": times * 1e6, "intensity": values})
    return frame.to_csv(sep=" ", index=False, header=False, float_format="%.10g", lineterminator="\n")


@click.group()
@click.option('--config', '-c', 'config_file', help='Path to run config file (YAML)')
@click.option('--verbose', '-v', is_flag=True, help='Log at DEBUG level')
@click.version_option(package_name="tangle-sim")
@click.pass_context
def cli(ctx: click.Context, config_file: Optional[str], verbose: bool):
    """tangle - simulate and analyse tunable ion-photon entanglement."""
    if verbose:
        configure_logging("DEBUG")
    _init_tracing()
    ctx.obj = Context(load_config(config_file))


@cli.command()
@click.option('--seed', type=int, help='Master seed (overrides the config)')
@click.option('--out', '-o', help='Output directory')
@click.option('--workers', type=int, help='Worker processes')
@click.option('--sequences', type=int, help='Sequences per setting (overrides the config)')
@pass_context
def simulate(ctx: Context, seed: Optional[int], out: Optional[str], workers: Optional[int],
             sequences: Optional[int]):
    """Run the sequence Monte Carlo over all 18 settings."""
    config = ctx.config
    seed = config.require_seed(seed)
    n_sequences = config.sequences_per_setting if sequences is None else sequences
    if n_sequences < 0:
        raise click.BadParameter("must be nonnegative", param_hint="--sequences")
    p = config.params()
    noise = config.noise_model()
    store = ctx.store(out)

    result = run_experiment(p, noise, standard_settings(), n_sequences, seed, ctx.workers(workers))
    source = get_photon_source(p)
    store.save("events.jsonl", result.event_log())
    store.save("counts.csv", result.counts.to_csv())
    summary = {
        "sequences": result.counts.sequences,
        "detected": result.counts.detected,
        "detection_fraction": result.detection_fraction,
        "generation_probability": generation_probability(source),
        "event_rate": result.detection_fraction * result.timing.repetition_rate,
    }
    store.save_json("summary.json", summary)
    store.write_manifest("simulate", seed, config.config_hash(), {"sequences_per_setting": n_sequences})
    _summary_table("simulate", list(summary.items()))
    console.print(f"Wrote run to {store.base_path}")


@cli.command()
@click.option('--counts', 'counts_file', required=True, type=click.Path(exists=True, dir_okay=False),
              help='Count table CSV')
@click.option('--out', '-o', help='Output directory')
@pass_context
def reconstruct(ctx: Context, counts_file: str, out: Optional[str]):
    """Maximum-likelihood density matrix from a count table."""
    counts = _read_counts(counts_file)
    result = mle_reconstruct(counts)
    store = ctx.store(out)
    store.save("rho.txt", format_operator(result.rho_hat))
    store.save("summary.json", result.summary() + "\n")
    store.write_manifest("reconstruct", None, ctx.config.config_hash(), {"counts": Path(counts_file).name})
    _summary_table("reconstruct", [("iterations", result.iterations),
                                   ("log-likelihood", result.final_loglikelihood),
                                   ("converged", result.converged)])
    if not result.converged:
        raise ConvergenceError(f"MLE did not converge within {result.iterations} iterations")


@cli.command()
@click.option('--counts', 'counts_file', required=True, type=click.Path(exists=True, dir_okay=False),
              help='Count table CSV')
@click.option('--events', 'events_file', type=click.Path(exists=True, dir_okay=False),
              help='Event log for the per-time-bin phase analysis')
@click.option('--out', '-o', help='Output directory')
@click.option('--seed', type=int, help='Bootstrap seed (overrides the config)')
@click.option('--resamples', type=int, default=100, show_default=True, help='Bootstrap resamples')
@click.option('--bins', type=int, default=5, show_default=True, help='Detection-time bins')
@click.option('--strategy', type=click.Choice(["population", "width"]), default="population",
              show_default=True, help='Time-bin edges')
@click.option('--workers', type=int, help='Worker processes')
@pass_context
def analyze(ctx: Context, counts_file: str, events_file: Optional[str], out: Optional[str],
            seed: Optional[int], resamples: int, bins: int, strategy: str, workers: Optional[int]):
    """Witnesses with bootstrap errors, optionally the phase per detection-time bin."""
    config = ctx.config
    seed = config.require_seed(seed)
    workers = ctx.workers(workers) or 1
    counts = _read_counts(counts_file)
    report = witness_report(counts, config.target_state(), resamples, seed, workers, label="analyze")
    store = ctx.store(out)
    store.save("witnesses.txt", report.to_record())
    extra = {"counts": Path(counts_file).name, "resamples": resamples}

    if events_file:
        events = _read_events(events_file)
        timebins = phase_vs_timebin(events, bins=bins, strategy=strategy, resamples=resamples,
                                    seed=seed, workers=workers)
        frame = pd.DataFrame([b.model_dump() for b in timebins])
        store.save("timebins.csv", frame.to_csv(index=False, lineterminator="\n"))
        slope = phase_slope(frame["center"], frame["phase"], frame["std"] if resamples else None)
        store.save_json("slope.json", slope._asdict())
        extra.update({"events": Path(events_file).name, "bins": bins, "strategy": strategy})
        console.print(f"Phase slope {slope.slope:.6g} +- {slope.slope_std:.3g} rad/s")

    store.write_manifest("analyze", seed, config.config_hash(), extra)
    _summary_table("witnesses", [(k, v) for k, v in report.row().items() if k != "label"])
    if not report.converged:
        raise ConvergenceError("MLE did not converge on the full data set")


def _write_sweep(store: RunStore, name: str, result: SweepResult) -> None:
    table = result.table()
    store.save(f"{name}.csv", table.to_csv(index=False, lineterminator="\n"))
    for k, point in enumerate(result.points):
        store.save(f"points/{k:02d}/rho.txt", format_operator(point.rho_hat))
        store.save(f"points/{k:02d}/witnesses.txt", point.report.to_record())
    if result.fit is not None:
        store.save(f"{name}_fit.csv", result.fit_table().to_csv(index=False, lineterminator="\n"))
        store.save_json(f"{name}_fit.json", {
            "contrast": result.fit.contrast,
            "phase_offset": result.fit.phase_offset,
            "amplitude": result.fit.amplitude,
        })
    console.print(table[["value", "fidelity", "concurrence", "chsh", "rho11", "rho44"]].to_string(index=False))


@cli.command("sweep-phase")
@click.option('--seed', type=int, help='Master seed (overrides the config)')
@click.option('--out', '-o', help='Output directory')
@click.option('--resamples', type=int, default=100, show_default=True, help='Bootstrap resamples per point')
@click.option('--workers', type=int, help='Worker processes')
@pass_context
def sweep_phase(ctx: Context, seed: Optional[int], out: Optional[str], resamples: int,
                workers: Optional[int]):
    """Tomography at every configured Raman phase plus the sinusoid fit."""
    config = ctx.config
    seed = config.require_seed(seed)
    result = phase_sweep(config.params(), config.noise_model(), config.sweep.phases,
                         config.sequences_per_setting, seed, resamples, ctx.workers(workers) or 1,
                         fit=config.sweep.fit)
    store = ctx.store(out)
    _write_sweep(store, "sweep_phase", result)
    store.write_manifest("sweep-phase", seed, config.config_hash())


@cli.command("sweep-amplitude")
@click.option('--seed', type=int, help='Master seed (overrides the config)')
@click.option('--out', '-o', help='Output directory')
@click.option('--resamples', type=int, default=100, show_default=True, help='Bootstrap resamples per point')
@click.option('--workers', type=int, help='Worker processes')
@pass_context
def sweep_amplitude(ctx: Context, seed: Optional[int], out: Optional[str], resamples: int,
                    workers: Optional[int]):
    """Tomography at every configured target amplitude cos(alpha)."""
    config = ctx.config
    seed = config.require_seed(seed)
    result = amplitude_sweep(config.params(), config.noise_model(), config.sweep.amplitudes,
                             config.sequences_per_setting, seed, resamples, ctx.workers(workers) or 1)
    store = ctx.store(out)
    _write_sweep(store, "sweep_amplitude", result)
    store.write_manifest("sweep-amplitude", seed, config.config_hash())


@cli.command("pulse-shape")
@click.option('--out', '-o', help='Output directory')
@pass_context
def pulse_shape(ctx: Context, out: Optional[str]):
    """Emission rates of the H and V paths against time."""
    source = get_photon_source(ctx.config.params())
    store = ctx.store(out)
    store.save("pulse_H.dat", _pulse_data(source.times, source.I_H))
    store.save("pulse_V.dat", _pulse_data(source.times, source.I_V))
    summary = {
        "generation_probability": generation_probability(source),
        "pulse_overlap_distance": pulse_overlap(source),
    }
    store.save_json("summary.json", summary)
    store.write_manifest("pulse-shape", None, ctx.config.config_hash())
    _summary_table("pulse shape", list(summary.items()))


@cli.command()
@click.option('--generation', type=float,
              help='Photon generation probability (default: computed from the configured system)')
@click.option('--out', '-o', help='Output directory')
@pass_context
def budget(ctx: Context, generation: Optional[float], out: Optional[str]):
    """Detection rate and the cavity output-coupling comparison."""
    if generation is None:
        generation = generation_probability(get_photon_source(ctx.config.params()))
    result = detection_budget(generation, ctx.config.noise_model())
    rows = comparison_table()
    store = ctx.store(out)
    frame = pd.DataFrame([r._asdict() for r in rows])
    store.save("budget.csv", frame.to_csv(index=False, lineterminator="\n"))
    store.save_json("detection.json", {
        "generation_probability": generation,
        "detection_probability": result.probability,
        "event_rate": result.rate,
        "per_port": list(result.per_port),
    })
    store.write_manifest("budget", None, ctx.config.config_hash())

    table = Table(title="collection efficiency", box=box.SIMPLE)
    table.add_column("configuration")
    table.add_column("efficiency", justify="right")
    for row in rows:
        table.add_row(row.label, f"{row.efficiency:.4f}")
    console.print(table)
    _summary_table("detection", [("per-sequence probability", result.probability),
                                 ("events per second", result.rate)])


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the CLI; returns the process exit code."""
    try:
        cli.main(args=argv, prog_name="tangle", standalone_mode=False)
        return EXIT_OK
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        console.print("[red]Aborted[/]")
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except ConfigError as e:
        console.print(f"[red]Configuration error:[/] {e}")
        return EXIT_USAGE
    except (DataError, RunStoreError) as e:
        console.print(f"[red]Data error:[/] {e}")
        return EXIT_DATA
    except ConvergenceError as e:
        console.print(f"[red]Did not converge:[/] {e}")
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
