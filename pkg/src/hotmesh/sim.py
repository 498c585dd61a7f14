"""Closed-loop simulation: transient thermal runs with periodic migration.

run() executes two transient simulations from the same starting point, the
steady state of the initial placement: a static baseline and a migrated run
with one event per period. At each event the plan's downtime stalls every
PE at idle power, the transfer energy lands as a one-timestep heat pulse on
the source PEs, and the placement permutes. Statistics are taken over the
window after warm-up so they describe settled behavior rather than the
decay of the shared initial condition.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, HotmeshError
from .grid import Mapping, identity_mapping, idle_vector, power_vector
from .migration import MigrationPlan, execute, plan
from .placement import AnnealConfig, place
from .scenario import ScenarioConfig
from .thermal import TransientSolver, build_network, steady_state
from .transforms import MigrationFunction

# Collapses float noise when comparing simulation instants; far below dt,
# far above the drift accumulated over any realistic step count.
_TIME_EPS = 1e-9

CSV_COLUMNS = (
    "scenario", "fn", "period_us", "peak_c", "baseline_peak_c",
    "peak_reduction_c", "time_avg_mean_c", "max_spread_c", "penalty_pct",
    "migrations", "energy_j", "error",
)


@dataclass(frozen=True)
class RunSummary:
    """Settled-window statistics of one scenario run."""

    peak_overall: float
    peak_static_baseline: float
    peak_reduction: float
    time_avg_mean_temp: float
    max_spatial_spread: float
    throughput_penalty: float
    migration_count: int
    total_migration_energy: float


@dataclass(frozen=True)
class Trace:
    """Sampled trajectory of the migrated run (block temps plus sink)."""

    times: np.ndarray   # (m,) sample instants, s; first sample is t = 0
    temps: np.ndarray   # (m, n_blocks + 1) deg C


@dataclass(frozen=True)
class SweepCell:
    """One (function, period) run of a sweep; error is set when it failed."""

    scenario: str
    fn: MigrationFunction
    period: float
    summary: RunSummary | None
    error: str | None


@dataclass
class _LoopResult:
    times: np.ndarray
    temps: np.ndarray
    events: int


def _transient_loop(net, cfg: ScenarioConfig, mapping0: Mapping,
                    temps0: np.ndarray, mplan: MigrationPlan | None) -> _LoopResult:
    """Backward-Euler march with optional periodic migration events.

    Steps are capped so event instants, stall ends, and pulse ends land on
    step boundaries; events fire at t = k*period strictly inside the run.
    """
    solver = TransientSolver(net, cfg.dt)
    duration = cfg.sim_duration
    mapping = mapping0
    active = power_vector(mapping, cfg.profile)
    stalled = idle_vector(cfg.profile, cfg.grid)

    enabled = mplan is not None and mplan.total_hops > 0
    src_idx = np.array([], dtype=int)
    if enabled and cfg.deposit_migration_energy:
        src_idx = np.array(sorted(cfg.grid.index(c) for c in mplan.source_cells()))
    pulse = np.zeros(cfg.grid.n_cells)
    next_event = cfg.period if enabled else float("inf")
    stall_until = 0.0
    pulse_until = 0.0
    fired = 0

    temps = temps0.copy()
    t = 0.0
    times = [0.0]
    trace = [temps.copy()]
    while t < duration - _TIME_EPS:
        if enabled and t >= next_event - _TIME_EPS and next_event < duration - _TIME_EPS:
            mapping = execute(mapping, mplan)
            active = power_vector(mapping, cfg.profile)
            stall_until = t + mplan.downtime
            if src_idx.size:
                pulse[:] = 0.0
                pulse[src_idx] = mplan.energy / (src_idx.size * cfg.dt)
                pulse_until = t + cfg.dt
            fired += 1
            next_event = (fired + 1) * cfg.period
        t_next = min(t + cfg.dt, duration)
        for brk in (next_event, stall_until, pulse_until):
            if t + _TIME_EPS < brk < t_next - _TIME_EPS:
                t_next = brk
        p = stalled if t < stall_until - _TIME_EPS else active
        if t < pulse_until - _TIME_EPS:
            p = p + pulse
        dt_step = t_next - t
        temps = solver.step(temps, p, None if abs(dt_step - cfg.dt) < _TIME_EPS else dt_step)
        t = t_next
        times.append(t)
        trace.append(temps.copy())
    return _LoopResult(times=np.array(times), temps=np.vstack(trace), events=fired)


def _window_stats(res: _LoopResult, warmup: float, n_blocks: int):
    """(peak, time-avg mean, max spread) over block temps after warm-up."""
    step_ends = res.times[1:]
    weights = np.diff(res.times)
    mask = step_ends > warmup + _TIME_EPS
    blocks = res.temps[1:, :n_blocks][mask]
    w = weights[mask]
    peak_overall = float(blocks.max())
    time_avg = float((blocks.mean(axis=1) * w).sum() / w.sum())
    spread = float((blocks.max(axis=1) - blocks.min(axis=1)).max())
    return peak_overall, time_avg, spread


def _resolve_initial_mapping(cfg: ScenarioConfig, net) -> Mapping:
    if isinstance(cfg.initial_mapping, Mapping):
        return cfg.initial_mapping
    if cfg.initial_mapping == "identity":
        return identity_mapping(cfg.grid)
    anneal_cfg = cfg.anneal if cfg.anneal is not None else AnnealConfig(seed=cfg.seed)
    return place(cfg.profile, cfg.grid, net, anneal_cfg)


def run(cfg: ScenarioConfig) -> tuple[RunSummary, Trace]:
    """Simulate one scenario (baseline plus migrated run) and summarize."""
    cfg.validate()
    net = build_network(cfg.grid, cfg.thermal)
    mapping0 = _resolve_initial_mapping(cfg, net)
    temps0 = steady_state(net, power_vector(mapping0, cfg.profile)).temps

    if cfg.migration_fn.kind == "identity":
        mplan = None
    else:
        mplan = plan(cfg.migration_fn, cfg.grid, cfg.cost)
        if mplan.total_hops == 0:
            mplan = None  # e.g. zero-offset translation: nothing ever moves

    baseline = _transient_loop(net, cfg, mapping0, temps0, None)
    migrated = _transient_loop(net, cfg, mapping0, temps0, mplan)

    warmup = cfg.effective_warmup
    n = cfg.grid.n_cells
    base_peak, _, _ = _window_stats(baseline, warmup, n)
    mig_peak, time_avg, spread = _window_stats(migrated, warmup, n)

    penalty = 0.0 if mplan is None else mplan.downtime / cfg.period
    energy = 0.0 if mplan is None else migrated.events * mplan.energy
    summary = RunSummary(
        peak_overall=mig_peak,
        peak_static_baseline=base_peak,
        peak_reduction=base_peak - mig_peak,
        time_avg_mean_temp=time_avg,
        max_spatial_spread=spread,
        throughput_penalty=penalty,
        migration_count=migrated.events,
        total_migration_energy=energy,
    )
    return summary, Trace(times=migrated.times, temps=migrated.temps)


def sweep(base: ScenarioConfig, functions: Sequence[MigrationFunction],
          periods: Sequence[float]) -> list[SweepCell]:
    """Cross product of runs in (function, period) input order.

    A failing cell records its error instead of aborting the sweep.
    """
    functions = list(functions)
    periods = list(periods)
    if not functions or not periods:
        raise ConfigurationError("sweep needs at least one function and one period")
    rows = []
    for fn in functions:
        for period in periods:
            try:
                cell_cfg = replace(base, migration_fn=fn, period=period)
                summary, _ = run(cell_cfg)
                rows.append(SweepCell(base.name, fn, period, summary, None))
            except HotmeshError as exc:
                rows.append(SweepCell(base.name, fn, period, None, str(exc)))
    return rows


def _csv_row(row: SweepCell) -> list[str]:
    head = [row.scenario, row.fn.label(), f"{row.period * 1e6:.1f}"]
    if row.summary is None:
        return head + [""] * 8 + [row.error or "unknown error"]
    s = row.summary
    return head + [
        f"{s.peak_overall:.6f}",
        f"{s.peak_static_baseline:.6f}",
        f"{s.peak_reduction:.6f}",
        f"{s.time_avg_mean_temp:.6f}",
        f"{s.max_spatial_spread:.6f}",
        f"{s.throughput_penalty * 100:.6f}",
        str(s.migration_count),
        f"{s.total_migration_energy:.6e}",
        "",
    ]


def report(rows: Iterable[SweepCell], csv_path) -> str:
    """Write the sweep table as CSV and return a text summary."""
    rows = list(rows)
    if not rows:
        raise ConfigurationError("nothing to report")
    try:
        with open(csv_path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(CSV_COLUMNS)
            for row in rows:
                w.writerow(_csv_row(row))
    except OSError as exc:
        raise HotmeshError(f"cannot write report to {csv_path}: {exc}") from None
    return summarize(rows)


def summarize(rows: Iterable[SweepCell]) -> str:
    """Text block naming the best function per scenario by peak reduction."""
    by_scenario: dict[str, list[SweepCell]] = {}
    for row in rows:
        by_scenario.setdefault(row.scenario, []).append(row)
    lines = []
    for scenario, cells in by_scenario.items():
        ok = [c for c in cells if c.summary is not None]
        if ok:
            best = max(ok, key=lambda c: c.summary.peak_reduction)
            lines.append(
                f"{scenario}: best fn={best.fn.label()} at period_us="
                f"{best.period * 1e6:.1f} (peak reduction "
                f"{best.summary.peak_reduction:.3f} C, penalty "
                f"{best.summary.throughput_penalty * 100:.3f}%)")
        for c in cells:
            if c.summary is None:
                lines.append(f"{scenario}: fn={c.fn.label()} period_us="
                             f"{c.period * 1e6:.1f} failed: {c.error}")
    return "\n".join(lines)


def format_run(cfg: ScenarioConfig, s: RunSummary) -> str:
    """Human-readable block for one run."""
    return "\n".join([
        f"scenario {cfg.name}: fn={cfg.migration_fn.label()} "
        f"period_us={cfg.period * 1e6:.1f}",
        f"  peak overall        {s.peak_overall:.3f} C",
        f"  static baseline     {s.peak_static_baseline:.3f} C",
        f"  peak reduction      {s.peak_reduction:.3f} C",
        f"  time-avg mean temp  {s.time_avg_mean_temp:.3f} C",
        f"  max spatial spread  {s.max_spatial_spread:.3f} C",
        f"  throughput penalty  {s.throughput_penalty * 100:.3f} %",
        f"  migrations          {s.migration_count}",
        f"  migration energy    {s.total_migration_energy:.3e} J",
    ])
