"""Scenario runners behind the command-line interface.

Every runner is deterministic: the same config yields the same bytes.
"""

from __future__ import annotations

import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from . import __version__
from .config import ScenarioConfig
from .dynamics import TrajectoryRecord, check_density_matrix, propagate, steady_state
from .errors import ConfigError
from .hilbert import STATE_LABELS, DensityMatrix
from .liouvillian import build_full_generator, build_generator
from .observables import (
    coherences,
    logarithmic_negativity,
    onset_time,
    purity,
    superposition_populations,
)

OUTPUT_COLUMNS = (
    "t",
    "rho11",
    "rho22",
    "rho33",
    "rho44",
    "rho55",
    "rho66",
    "rho14_re",
    "negativity",
    "gamma12",
    "eta12",
    "rho_alpha_alpha",
    "trace",
    "min_eigenvalue",
    "shell_population",
    "flag",
)

SENSITIVITY_THRESHOLDS = (0.01, 0.02, 0.05)
SWEEP_KEYS = ("kappa2", "eta", "N", "onset_threshold")
FIGURES = ("fig2", "fig3", "fig4", "fig5a", "fig5b", "fig7a", "fig7b")


def fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return f"{x:.9g}"


def write_csv(stream: TextIO, columns: Iterable[str], rows: Iterable[dict], comments: Iterable[str] = ()):
    for c in comments:
        stream.write(f"# {c}\n")
    columns = list(columns)
    stream.write(",".join(columns) + "\n")
    for r in rows:
        stream.write(",".join(fmt(r[c]) for c in columns) + "\n")


def _populations(rho: DensityMatrix) -> dict:
    out = {}
    for label, (na, nb) in STATE_LABELS.items():
        if rho.basis.contains(na, nb):
            i = rho.basis.index(na, nb)
            out[f"rho{label}{label}"] = rho.entries[i, i].real
        else:
            out[f"rho{label}{label}"] = 0.0
    return out


def _state_columns(rho: DensityMatrix, config: ScenarioConfig) -> dict:
    b = rho.basis
    row = _populations(rho)
    has11 = b.contains(1, 1)
    row["rho14_re"] = rho.entries[b.index(0, 0), b.index(1, 1)].real if has11 else 0.0
    # |alpha> is built from the photon number the cavities actually see
    row["rho_alpha_alpha"] = (
        superposition_populations(rho, config.eta * config.N).rho_alpha_alpha
        if has11
        else rho.population(1)
    )
    return row


def state_row(rho: DensityMatrix, config: ScenarioConfig, t: float) -> dict:
    """One output row for a single state at reported time ``t``."""
    diag = check_density_matrix(rho, trace_preserving=config.jump_mode == "full")
    coh = coherences(rho)
    row = {"t": t, **_state_columns(rho, config)}
    row.update(
        negativity=logarithmic_negativity(rho),
        gamma12=coh.gamma12,
        eta12=coh.eta12,
        trace=diag.trace,
        min_eigenvalue=diag.min_eigenvalue,
        shell_population=diag.shell_population,
        flag=int(any(f != "shell" for f in diag.flags)),
    )
    return row


def _record_rows(rec: TrajectoryRecord, config: ScenarioConfig) -> list[dict]:
    obs = rec.observables
    rows = []
    for i, rho in enumerate(rec.states):
        row = {"t": rec.times[i] * config.kappa1, **_state_columns(rho, config)}
        for key in ("negativity", "gamma12", "eta12", "trace", "min_eigenvalue", "shell_population"):
            row[key] = obs[key][i]
        row["flag"] = int(rec.flagged[i])
        rows.append(row)
    return rows


@dataclass
class SimulationResult:
    config: ScenarioConfig
    record: TrajectoryRecord
    rows: list[dict]
    onsets: dict[float, float | None]
    steady_negativity: float | None
    messages: list[str] = field(default_factory=list)

    @property
    def onset(self):
        return self.onsets[self.config.onset_threshold]

    @property
    def failed(self) -> bool:
        return any("violated" in m for m in self.messages)


def _steady_negativity(config: ScenarioConfig):
    g = build_full_generator(config.system_params(), config.basis)
    return logarithmic_negativity(steady_state(g))


def simulate(config: ScenarioConfig) -> SimulationResult:
    g = build_generator(config.system_params(), config.basis, config.jump_mode)
    k1 = config.kappa1
    rec = propagate(
        g,
        config.initial_density_matrix(),
        config.t_max / k1,
        dt=config.dt_value,
        sample_interval=config.sample_interval / k1,
        keep_states=True,
    )
    times = rec.times * k1
    rows = _record_rows(rec, config)
    thresholds = sorted(set(SENSITIVITY_THRESHOLDS) | {config.onset_threshold})
    onsets = {th: onset_time(times, rec["negativity"], th) for th in thresholds}
    return SimulationResult(config, rec, rows, onsets, _steady_negativity(config), list(rec.warnings))


def _header(kind: str, config: ScenarioConfig) -> list[str]:
    return [f"sqtransfer {__version__} {kind}"] + config.to_lines()


def run_simulate(config: ScenarioConfig, stream: TextIO | None = None) -> SimulationResult:
    """Propagate ``config`` and write the trajectory CSV to ``stream``."""
    result = simulate(config)
    if stream is not None:
        comments = _header("simulate", config)
        for th, on in result.onsets.items():
            comments.append(f"onset_time[theta={fmt(th)}]={fmt(on)}")
        comments.append(f"steady_negativity={fmt(result.steady_negativity)}")
        comments += [f"warning: {m}" for m in result.messages]
        write_csv(stream, OUTPUT_COLUMNS, result.rows, comments)
    return result


@dataclass
class SteadyReport:
    row: dict
    purity: float
    state: DensityMatrix


def run_steady_state(config: ScenarioConfig, stream: TextIO | None = None) -> SteadyReport:
    if config.jump_mode != "full":
        raise ConfigError("steady state needs jump_mode=full", "jump_mode")
    rho = steady_state(build_full_generator(config.system_params(), config.basis))
    row = state_row(rho, config, float("inf"))
    report = SteadyReport(row, purity(rho), rho)
    if stream is not None:
        comments = _header("steady", config) + [f"purity={fmt(report.purity)}"]
        write_csv(stream, OUTPUT_COLUMNS, [row], comments)
    return report


@dataclass(frozen=True)
class SweepRow:
    value: float
    onset_time: float | None
    steady_negativity: float


def _sweep_one(args) -> SweepRow:
    config, key, value = args
    cfg = config.replace(**{key: value})
    res = simulate(cfg)
    return SweepRow(value, res.onset, res.steady_negativity)


def run_sweep(
    config: ScenarioConfig,
    sweep_key: str,
    values: Iterable[float],
    stream: TextIO | None = None,
    workers: int = 1,
) -> list[SweepRow]:
    """Independent simulations over ``values`` of ``sweep_key``.

    Rows come back in input order whatever the worker count.
    """
    if sweep_key not in SWEEP_KEYS:
        raise ConfigError(f"cannot sweep {sweep_key!r}; choose from {SWEEP_KEYS}", sweep_key)
    values = [float(v) for v in values]
    for v in values:  # validate every point before running any
        config.replace(**{sweep_key: v})
    jobs = [(config, sweep_key, v) for v in values]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            rows = list(pool.map(_sweep_one, jobs))
    else:
        rows = [_sweep_one(j) for j in jobs]
    if stream is not None:
        comments = _header("sweep", config) + [f"sweep_key={sweep_key}"]
        write_csv(
            stream,
            ("value", "onset_time", "steady_negativity"),
            [{"value": r.value, "onset_time": r.onset_time, "steady_negativity": r.steady_negativity} for r in rows],
            comments,
        )
    return rows


BASE_FIGURE_CONFIG = ScenarioConfig(N=0.125, M="max", eta=1.0, kappa1=1.0, kappa2=1.0, t_max=10.0)


def figure_scenarios(figure_id: str) -> list[tuple[str, ScenarioConfig]]:
    """Curve label and config for every curve of a figure preset."""
    base = BASE_FIGURE_CONFIG
    if figure_id in ("fig2", "fig3", "fig4"):
        return [(f"init{s}", base.replace(initial_state=str(s))) for s in (1, 2, 4, 5)]
    if figure_id in ("fig5a", "fig5b"):
        init = "5" if figure_id == "fig5a" else "4"
        return [(f"k2_{fmt(r)}", base.replace(initial_state=init, kappa2=r)) for r in (1.0, 0.5, 2.0)]
    if figure_id in ("fig7a", "fig7b"):
        init = "2" if figure_id == "fig7a" else "4"
        return [(f"eta_{fmt(e)}", base.replace(initial_state=init, eta=e)) for e in (1.0, 0.9, 0.8)]
    raise ConfigError(f"unknown figure id {figure_id!r}; choose from {FIGURES}", "figure")


def run_reproduce(figure_id: str, out_dir: str | os.PathLike, workers: int = 1) -> list[str]:
    """Write one CSV per curve of ``figure_id`` into ``out_dir``; return the paths."""
    scenarios = figure_scenarios(figure_id)
    os.makedirs(out_dir, exist_ok=True)
    configs = [c for _, c in scenarios]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(configs))) as pool:
            texts = list(pool.map(_simulate_text, configs))
    else:
        texts = [_simulate_text(c) for c in configs]
    paths = []
    for (label, _), text in zip(scenarios, texts):
        path = os.path.join(out_dir, f"{figure_id}_{label}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        paths.append(path)
    return paths


def _simulate_text(config: ScenarioConfig) -> str:
    buf = io.StringIO()
    run_simulate(config, buf)
    return buf.getvalue()
