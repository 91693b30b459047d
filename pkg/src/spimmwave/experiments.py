"""Declarative experiment runner: sweeps, canned presets, CSV and plot scripts.

A spec is a flat JSON object mirroring ExperimentSpec; unknown keys are
rejected with the offending field path. Runs are deterministic given the
seed: channel draws use one stream per trial, Monte-Carlo runs derive their
seeds from (seed, grid index, trial, system), and output rows are emitted in
a fixed (axis, method, variant) order regardless of execution order.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .beamforming import build_abf, effective_channel, pattern_alphabet
from .capacity import (
    METHOD_CLOSED_FORM_CROSSDET,
    METHOD_CLOSED_FORM_LB,
    METHOD_GENERAL_M,
    METHOD_MONTE_CARLO,
    METHOD_SHANNON,
    covariances,
    dirichlet_gain,
    mmwave_rate,
    spim_rate,
    spim_rate_two_path,
)
from .channel import DEFAULT_AOA_RANGE, DEFAULT_AOD_RANGE, sample_channel
from .conditions import MarginQuery, spim_margin
from .errors import ParameterError, SpecValidationError
from .montecarlo import MonteCarloSpec, mc_mutual_information
from .numerics import make_rng

METHOD_MARGIN = "margin"
METHOD_Q_FUNCTION = "q-function"

CSV_COLUMNS = ("axis", "method", "variant", "value", "value_std", "mc_stderr", "seed", "trials")

EXPERIMENT_KINDS = ("snr-sweep", "w1-sweep", "gamma-sweep", "margin-map", "q-function")


@dataclass
class ChannelParams:
    n_tx: int = 64
    n_rx: int = 8
    m: object = 2  # beam count, or a list of counts for gamma sweeps
    gains: list | None = None
    normalize: bool = False
    aod_range: tuple = DEFAULT_AOD_RANGE
    aoa_range: tuple = DEFAULT_AOA_RANGE
    asymptotic: bool = False


@dataclass
class NoiseParams:
    n0: object = None  # scalar, or a list for margin maps
    snr_db: float | None = None


@dataclass
class MarginParams:
    b_max: int = 6
    relax_integer: bool = True


@dataclass
class OutputParams:
    csv: str | None = None
    plot_script: str | None = None


@dataclass
class ExperimentSpec:
    experiment: str
    grid: list
    channel: ChannelParams = field(default_factory=ChannelParams)
    noise: NoiseParams | None = None
    trials: int = 100
    mc: MonteCarloSpec | None = None
    seed: int = 0
    margin: MarginParams = field(default_factory=MarginParams)
    outputs: OutputParams = field(default_factory=OutputParams)


@dataclass(frozen=True)
class ResultRow:
    axis: float
    method: str
    variant: str
    value: float
    value_std: float | None
    mc_stderr: float | None
    seed: int
    trials: int


def _coerce(cls, data, path: str):
    if not isinstance(data, dict):
        raise SpecValidationError(path, f"expected an object, got {type(data).__name__}")
    names = [f.name for f in dataclasses.fields(cls)]
    for key in data:
        if key not in names:
            raise SpecValidationError(f"{path}.{key}", "unknown key")
    try:
        return cls(**data)
    except (TypeError, ParameterError) as exc:
        raise SpecValidationError(path, str(exc)) from exc


def load_spec(path) -> ExperimentSpec:
    """Parse and validate a JSON experiment file."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecValidationError(str(path), f"invalid JSON: {exc}") from exc
    return spec_from_dict(data)


def spec_from_dict(data: dict) -> ExperimentSpec:
    if not isinstance(data, dict):
        raise SpecValidationError("<root>", "spec must be a JSON object")
    nested = {"channel": (ChannelParams, "channel"), "noise": (NoiseParams, "noise"),
              "mc": (MonteCarloSpec, "mc"), "margin": (MarginParams, "margin"),
              "outputs": (OutputParams, "outputs")}
    prepared = dict(data)
    for key, (cls, path) in nested.items():
        if key in prepared and prepared[key] is not None:
            prepared[key] = _coerce(cls, prepared[key], path)
    spec = _coerce(ExperimentSpec, prepared, "<root>")
    validate_spec(spec)
    return spec


def validate_spec(spec: ExperimentSpec) -> None:
    if spec.experiment not in EXPERIMENT_KINDS:
        raise SpecValidationError("experiment", f"must be one of {EXPERIMENT_KINDS}")
    grid = list(spec.grid)
    if not grid:
        raise SpecValidationError("grid", "must be non-empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise SpecValidationError("grid", "must be strictly increasing")
    if spec.trials < 1:
        raise SpecValidationError("trials", "must be >= 1")
    ch = spec.channel
    kind = spec.experiment
    if isinstance(ch.n_rx, (list, tuple)) and kind != "q-function":
        raise SpecValidationError("channel.n_rx", f"must be a single count for {kind}")
    n_rx_values = ch.n_rx if isinstance(ch.n_rx, (list, tuple)) else [ch.n_rx]
    if ch.n_tx < 1 or any(int(v) < 1 for v in n_rx_values):
        raise SpecValidationError("channel", "antenna counts must be >= 1")
    if kind in ("snr-sweep", "w1-sweep", "gamma-sweep"):
        m_values = ch.m if isinstance(ch.m, (list, tuple)) else [ch.m]
        if any(int(m) < 1 for m in m_values):
            raise SpecValidationError("channel.m", "beam counts must be >= 1")
        if kind != "gamma-sweep" and isinstance(ch.m, (list, tuple)):
            raise SpecValidationError("channel.m", f"must be a single count for {kind}")
    if kind == "snr-sweep":
        if spec.noise is not None:
            raise SpecValidationError("noise", "snr-sweep takes its noise axis from the grid")
        if ch.gains is None:
            raise SpecValidationError("channel.gains", "snr-sweep needs explicit path gains")
        if len(ch.gains) != int(ch.m):
            raise SpecValidationError("channel.gains", f"expected {ch.m} entries")
    elif kind == "w1-sweep":
        if int(ch.m) != 2:
            raise SpecValidationError("channel.m", "w1-sweep is a two-beam experiment")
        if any(not 0.5 <= w < 1.0 for w in grid):
            raise SpecValidationError("grid", "w1 values must lie in [0.5, 1)")
        _require_scalar_noise(spec)
    elif kind == "gamma-sweep":
        if ch.gains is not None:
            raise SpecValidationError("channel.gains", "gamma-sweep derives gains from the axis")
        if any(not 0.0 < g < 1.0 for g in grid):
            raise SpecValidationError("grid", "decay values must lie in (0, 1)")
        _require_scalar_noise(spec)
    elif kind == "margin-map":
        if spec.noise is None or spec.noise.n0 is None:
            raise SpecValidationError("noise.n0", "margin-map needs one or more noise levels")
        if any(not 0.0 < g < 1.0 for g in grid):
            raise SpecValidationError("grid", "decay values must lie in (0, 1)")
    elif kind == "q-function":
        if spec.noise is not None:
            raise SpecValidationError("noise", "q-function uses no noise model")


def _require_scalar_noise(spec: ExperimentSpec) -> None:
    noise = spec.noise
    if noise is None or (noise.n0 is None) == (noise.snr_db is None):
        raise SpecValidationError("noise", "set exactly one of n0 or snr_db")
    if noise.n0 is not None and isinstance(noise.n0, (list, tuple)):
        raise SpecValidationError("noise.n0", "must be a scalar for this experiment")


def _noise_level(spec: ExperimentSpec) -> float:
    if spec.noise.n0 is not None:
        n0 = float(spec.noise.n0)
    else:
        n0 = 10.0 ** (-float(spec.noise.snr_db) / 10.0)
    if n0 <= 0:
        raise SpecValidationError("noise", "noise power must be > 0")
    return n0


def _mix_seed(*parts: int) -> int:
    out = 0
    for p in parts:
        out = (out * 1_000_003 + int(p) + 0x9E3779B9) & 0x7FFFFFFFFFFFFFFF
    return out


def _draw_channels(spec: ExperimentSpec, m: int):
    ch = spec.channel
    gains = ch.gains
    if gains is not None and ch.normalize:
        total = float(np.sum(gains))
        gains = [g / total for g in gains]
    draws = []
    for t in range(spec.trials):
        draws.append(sample_channel(
            make_rng(spec.seed, t), ch.n_tx, ch.n_rx, m,
            gains=gains, aod_range=tuple(ch.aod_range), aoa_range=tuple(ch.aoa_range)))
    return draws


def _mc_rates(spec: ExperimentSpec, chan, m: int, n0: float, point: int, trial: int):
    """Monte-Carlo (spim, mmwave) estimates for one channel draw at one noise level."""
    mode = "asymptotic" if spec.channel.asymptotic else "exact"
    cfg = build_abf(chan, m)
    eff = effective_channel(chan, cfg, mode)
    spim_covs = covariances(eff, pattern_alphabet(m, 1), n0, source=mode)
    mm_covs = covariances(eff[:, :1], pattern_alphabet(1, 1), n0, source=mode)
    base = spec.mc
    spim_est = mc_mutual_information(spim_covs, MonteCarloSpec(
        base.n_samples, seed=_mix_seed(base.seed, point, trial, 0), batch=base.batch))
    mm_est = mc_mutual_information(mm_covs, MonteCarloSpec(
        base.n_samples, seed=_mix_seed(base.seed, point, trial, 1), batch=base.batch))
    return spim_est, mm_est


class _Aggregator:
    """Collects per-trial samples and emits one averaged row per series."""

    def __init__(self, seed: int, trials: int):
        self.seed = seed
        self.trials = trials
        self.values: dict = {}
        self.errs: dict = {}

    def add(self, axis: float, method: str, variant: str, value: float,
            stderr: float | None = None):
        self.values.setdefault((axis, method, variant), []).append(value)
        if stderr is not None:
            self.errs.setdefault((axis, method, variant), []).append(stderr)

    def rows(self) -> list[ResultRow]:
        out = []
        for key in sorted(self.values):
            axis, method, variant = key
            vals = np.asarray(self.values[key])
            std = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
            stderr = None
            if key in self.errs:
                errs = np.asarray(self.errs[key])
                stderr = float(np.sqrt(np.sum(errs ** 2)) / len(errs))
            out.append(ResultRow(float(axis), method, variant, float(np.mean(vals)),
                                 std, stderr, self.seed, len(vals)))
        return out


def _run_se_sweep(spec: ExperimentSpec) -> list[ResultRow]:
    """Shared implementation of snr-sweep and w1-sweep."""
    kind = spec.experiment
    m = int(spec.channel.m)
    agg = _Aggregator(spec.seed, spec.trials)
    if kind == "snr-sweep":
        points = [(float(snr), 10.0 ** (-float(snr) / 10.0), None) for snr in spec.grid]
        draw_sets = {None: _draw_channels(spec, m)}
    else:
        n0 = _noise_level(spec)
        points = [(float(w1), n0, float(w1)) for w1 in spec.grid]
        draw_sets = {}
    g = float(spec.channel.n_tx)
    for point_idx, (axis, n0, w1) in enumerate(points):
        if w1 is None:
            draws = draw_sets[None]
        else:
            # per-point gains, same per-trial angle streams across the axis
            override = dataclasses.replace(spec.channel, gains=[w1, 1.0 - w1])
            draws = _draw_channels(dataclasses.replace(spec, channel=override), m)
        for trial, chan in enumerate(draws):
            w = chan.gains
            gains_vec = np.full(m, g)
            agg.add(axis, METHOD_SHANNON, "mmwave", mmwave_rate(w[0], g, n0))
            if m == 2:
                for variant_tag, variant in ((METHOD_CLOSED_FORM_LB, "lb"),
                                             (METHOD_CLOSED_FORM_CROSSDET, "crossdet")):
                    agg.add(axis, variant_tag, "spim", spim_rate_two_path(
                        w[0], w[1], g, g, chan.aoa[0], chan.aoa[1], chan.n_rx, n0,
                        variant=variant))
            else:
                agg.add(axis, METHOD_GENERAL_M, "spim",
                        spim_rate(w, gains_vec, chan.aoa, chan.n_rx, n0))
            if spec.mc is not None:
                spim_est, mm_est = _mc_rates(spec, chan, m, n0, point_idx, trial)
                agg.add(axis, METHOD_MONTE_CARLO, "spim", spim_est.estimate, spim_est.stderr)
                agg.add(axis, METHOD_MONTE_CARLO, "mmwave", mm_est.estimate, mm_est.stderr)
    return agg.rows()


def _run_gamma_sweep(spec: ExperimentSpec) -> list[ResultRow]:
    n0 = _noise_level(spec)
    m_values = spec.channel.m if isinstance(spec.channel.m, (list, tuple)) else [spec.channel.m]
    m_values = [int(m) for m in m_values]
    g = float(spec.channel.n_tx)
    agg = _Aggregator(spec.seed, spec.trials)
    for point_idx, gamma in enumerate(spec.grid):
        gamma = float(gamma)
        for m in m_values:
            override = dataclasses.replace(spec.channel,
                                           gains=list(gamma ** np.arange(m)))
            draws = _draw_channels(dataclasses.replace(spec, channel=override), m)
            for trial, chan in enumerate(draws):
                variant = f"m={m}"
                agg.add(gamma, METHOD_GENERAL_M, variant,
                        spim_rate(chan.gains, np.full(m, g), chan.aoa, chan.n_rx, n0))
                if spec.mc is not None:
                    spim_est, _ = _mc_rates(spec, chan, m, n0,
                                            point_idx * 101 + m, trial)
                    agg.add(gamma, METHOD_MONTE_CARLO, variant,
                            spim_est.estimate, spim_est.stderr)
    return agg.rows()


def _run_margin_map(spec: ExperimentSpec) -> list[ResultRow]:
    n0_values = spec.noise.n0
    if not isinstance(n0_values, (list, tuple)):
        n0_values = [n0_values]
    rows = []
    for gamma in spec.grid:
        for n0 in n0_values:
            query = MarginQuery(gamma=float(gamma), n0=float(n0), g1=float(spec.channel.n_tx),
                                b_max=spec.margin.b_max,
                                relax_integer=spec.margin.relax_integer)
            rows.append(ResultRow(float(gamma), METHOD_MARGIN, f"n0={n0:g}",
                                  float(spim_margin(query)), None, None, spec.seed, 1))
    rows.sort(key=lambda r: (r.axis, r.method, r.variant))
    return rows


def _run_q_function(spec: ExperimentSpec) -> list[ResultRow]:
    n_rx_values = spec.channel.n_rx
    if not isinstance(n_rx_values, (list, tuple)):
        n_rx_values = [n_rx_values]
    rows = []
    for delta in spec.grid:
        for n_rx in n_rx_values:
            rows.append(ResultRow(float(delta), METHOD_Q_FUNCTION, f"nr={int(n_rx)}",
                                  dirichlet_gain(float(delta), int(n_rx)),
                                  None, None, spec.seed, 1))
    rows.sort(key=lambda r: (r.axis, r.method, r.variant))
    return rows


_RUNNERS = {
    "snr-sweep": _run_se_sweep,
    "w1-sweep": _run_se_sweep,
    "gamma-sweep": _run_gamma_sweep,
    "margin-map": _run_margin_map,
    "q-function": _run_q_function,
}


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    """Execute a validated spec and return its result rows; write outputs if set."""
    validate_spec(spec)
    rows = _RUNNERS[spec.experiment](spec)
    if spec.outputs.csv:
        write_csv(rows, spec.outputs.csv)
    if spec.outputs.plot_script:
        write_plot_script(spec, Path(spec.outputs.csv or "results.csv").name,
                          spec.outputs.plot_script)
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(rows, path) -> None:
    """UTF-8 CSV, '.' decimal separator, fixed column order, deterministic bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, col)) for col in CSV_COLUMNS])


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Render %(title)s from %(csv_name)s."""
import collections
import csv
import math

import matplotlib.pyplot as plt

rows = list(csv.DictReader(open("%(csv_name)s", encoding="utf-8")))
series = collections.defaultdict(list)
for row in rows:
    series[(row["method"], row["variant"])].append((float(row["axis"]), float(row["value"])))

fig, ax = plt.subplots(figsize=(7, 4.5))
for (method, variant), points in sorted(series.items()):
    points.sort()
    xs = [p[0] for p in points]
    ys = [%(y_expr)s for p in points]
    ax.plot(xs, ys, marker="o", markersize=3, label=f"{method} {variant}".strip())
ax.set_xlabel(%(x_label)r)
ax.set_ylabel(%(y_label)r)
ax.grid(alpha=0.3)
ax.legend(fontsize=8)
fig.savefig("%(png_name)s", dpi=150, bbox_inches="tight")
print("wrote %(png_name)s")
'''

_AXIS_LABELS = {
    "snr-sweep": ("SNR [dB]", "spectral efficiency [bits/s/Hz]"),
    "w1-sweep": ("strongest-path share w1", "spectral efficiency [bits/s/Hz]"),
    "gamma-sweep": ("gain decay factor", "spectral efficiency [bits/s/Hz]"),
    "margin-map": ("gain decay factor", "log2 feasible beam count"),
    "q-function": ("normalized angle difference", "beam overlap gain"),
}


def write_plot_script(spec: ExperimentSpec, csv_name: str, path) -> None:
    """Emit a standalone matplotlib script next to the data; the package itself never plots."""
    x_label, y_label = _AXIS_LABELS[spec.experiment]
    y_expr = "math.log2(p[1])" if spec.experiment == "margin-map" else "p[1]"
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    script = _PLOT_TEMPLATE % {
        "title": spec.experiment,
        "csv_name": csv_name,
        "y_expr": y_expr,
        "x_label": x_label,
        "y_label": y_label,
        "png_name": Path(csv_name).with_suffix(".png").name,
    }
    path.write_text(script, encoding="utf-8")


def _preset_specs() -> dict:
    snr_grid = [float(v) for v in range(-10, 21, 2)]
    w1_grid = [round(0.5 + 0.02 * i, 2) for i in range(25)]
    gamma_grid = [round(0.05 * i, 2) for i in range(1, 20)]
    dense_gamma = [round(0.02 * i, 2) for i in range(1, 50)]
    q_grid = [round(-1.0 + 0.01 * i, 2) for i in range(201)]
    return {
        "snr-sweep-imbalanced": dict(
            experiment="snr-sweep", grid=snr_grid,
            channel=dict(gains=[0.9, 0.1]), mc=dict()),
        "snr-sweep-balanced": dict(
            experiment="snr-sweep", grid=snr_grid,
            channel=dict(gains=[0.6, 0.4]), mc=dict()),
        "w1-sweep-low-noise": dict(
            experiment="w1-sweep", grid=w1_grid, noise=dict(n0=0.1), mc=dict()),
        "w1-sweep-high-noise": dict(
            experiment="w1-sweep", grid=w1_grid, noise=dict(n0=1.0), mc=dict()),
        "gamma-sweep": dict(
            experiment="gamma-sweep", grid=gamma_grid,
            channel=dict(m=[1, 2, 4, 8]), noise=dict(n0=0.1), mc=dict()),
        "margin-map": dict(
            experiment="margin-map", grid=dense_gamma,
            noise=dict(n0=[0.05, 0.1, 0.5])),
        "q-function": dict(
            experiment="q-function", grid=q_grid, channel=dict(n_rx=[2, 4, 8])),
    }


PRESET_IDS = tuple(sorted(_preset_specs()))


def reproduce(preset: str, out_dir, *, seed: int | None = None, trials: int | None = None,
              mc_samples: int | None = None, asymptotic: bool = False) -> list[ResultRow]:
    """Run a canned experiment and write <preset>.csv plus plot_<preset>.py."""
    presets = _preset_specs()
    if preset not in presets:
        raise ParameterError(
            f"unknown preset {preset!r}; valid ids: {', '.join(sorted(presets))}")
    data = presets[preset]
    out_dir = Path(out_dir)
    data.setdefault("outputs", {})
    data["outputs"]["csv"] = str(out_dir / f"{preset}.csv")
    data["outputs"]["plot_script"] = str(out_dir / f"plot_{preset}.py")
    if seed is not None:
        data["seed"] = seed
    if trials is not None:
        data["trials"] = trials
    if mc_samples is not None and "mc" in data:
        data["mc"]["n_samples"] = mc_samples
    if asymptotic:
        data.setdefault("channel", {})["asymptotic"] = True
    spec = spec_from_dict(data)
    return run_experiment(spec)
