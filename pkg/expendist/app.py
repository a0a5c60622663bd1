"""Command-line entry point: ``expendist <command> [options] [inputs]``.

Commands: fit, gof, gini, kde, trend, simulate, agents. Results go to stdout (or ``--out``)
as JSON with a provenance block, or as CSV; summaries and logs go to stderr.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, fields
import json
from pathlib import Path
import sys
from typing import Any

import numpy as np
import pandas as pd

from expendist import __version__
from expendist.config import CONFIG, Config, config
from expendist.core import (
    CLI,
    CLIError,
    Logger,
    dump_json,
    file_digest,
    read_table,
    set_package_level,
    start_run_log,
    stop_run_log,
    write_frame,
    write_text,
)
from expendist.core.errors import (
    EXIT_INPUT,
    EXIT_IO,
    ExpendistError,
    InputError,
    InvalidConfig,
    InvalidParams,
)
from expendist.data import fixture_path
from expendist.distributions import FAMILIES, Distribution, Mixture, load_spec
from expendist.estimation import chi2_at, compare_families, fit_chi2, fit_weibull_grid
from expendist.format import percent, render_table
from expendist.gof import STATISTICS, mc_pvalue
from expendist.grouped import (
    GroupedSample,
    deflate,
    load_deflators,
    load_grouped_csv,
    load_sector_weights,
    sector_weight,
)
from expendist.inequality import (
    gini_from_lorenz,
    lorenz_from_grouped,
    simulation_scenarios,
    simulation_study,
    top_share,
)
from expendist.kde import (
    SCALES,
    KdeCurve,
    default_grid,
    grouped_kde,
    kde_series,
    pool_national,
    pooled_bandwidth,
)
from expendist.microfoundation import (
    FORMS,
    AgentModelConfig,
    RatioDistribution,
    hill_curve,
    log_normality,
    simulate_consumption,
)
from expendist.timeutils import timer
from expendist.trends import (
    GINI_COLUMNS,
    MIXTURE_PARAMETERS,
    PARAMETER_COLUMNS,
    TrendResult,
    gini_trend_inputs,
    linear_trend,
    load_gini_series,
    load_parameter_table,
    parameter_series,
    trend_frame,
    trend_table,
)
from expendist.types import UNITS

log = Logger("expendist.app")

COMMANDS = ("fit", "gof", "gini", "kde", "trend", "simulate", "agents")
FORMATS = ("json", "csv")
NEEDS_TABLES = ("fit", "gof", "gini", "kde")
DEFAULT_TOP = (0.1, 0.2)
# urban households, 2002 round, with the tail exponent and weight used for the simulation study
BASELINE_ROUND = "2002"
BASELINE_OVERRIDES = {"nu": 1.5, "pi": 0.3538}

Payload = dict[str, Any]
Outcome = tuple[Payload, pd.DataFrame | None]


@dataclass
class RunConfig:
    """
    One CLI invocation.

    Unset optional fields fall back to the loaded ``Config``.
    """

    command: str
    inputs: tuple[str, ...] = ()
    family: str = "mixture"
    unit: str = "household"
    sector: str | None = None
    round_label: str | None = None
    midpoint: float | None = None
    seed: int | None = None
    replicates: int | None = None
    mc_sample_size: int | None = None
    statistic: str = "ks"
    spec: str | None = None
    compare: bool = False
    grid: bool = False
    tie_shape: bool = False
    bandwidth: float | None = None
    truncated: bool = False
    scale: str = "level"
    deflators: str | None = None
    weights: str | None = None
    n: int = 1_000_000
    repeats: int = 1
    top: tuple[float, ...] = DEFAULT_TOP
    counterfactuals: bool = False
    parameter: tuple[str, ...] = ()
    column: tuple[str, ...] = ()
    degree: int = 1
    time_encoding: str | None = None
    rounding_slack: str | None = None
    threads: int | None = None
    n_agents: int = 100_000
    kappa: float = 1.0
    tau: int | None = None
    tau_mean: float | None = None
    ratio: str = "uniform:0.01"
    form: str = "additive"
    out: str | None = None
    format: str = "json"
    config: str | None = None
    log_file: str | None = None
    verbose: bool = False
    quiet: bool = False
    settings: Config = field(default_factory=lambda: CONFIG, repr=False, compare=False)

    @classmethod
    def from_args(cls, args: dict[str, Any]) -> RunConfig:
        known = {f.name for f in fields(cls)} - {"settings"}
        values = {k: v for k, v in args.items() if k in known and v is not None}
        for name in ("inputs", "top", "parameter", "column"):
            if name in values:
                values[name] = tuple(values[name])
        return cls(**values)

    def validate(self) -> None:
        """
        Raises:
            InvalidConfig: unknown command or format, or a command missing its inputs
        """
        if self.command not in COMMANDS:
            raise InvalidConfig(f"command must be one of {COMMANDS}, got {self.command!r}")
        if self.format not in FORMATS:
            raise InvalidConfig(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.command in NEEDS_TABLES and not self.inputs:
            raise InvalidConfig(f"{self.command} needs at least one grouped table")
        if self.unit not in UNITS:
            raise InvalidConfig(f"unit must be one of {UNITS}, got {self.unit!r}")
        if self.verbose and self.quiet:
            raise InvalidConfig("--verbose and --quiet are mutually exclusive")
        if self.n < 2 or self.repeats < 1:
            raise InvalidConfig("--n must be >= 2 and --repeats >= 1")

    def resolved(self) -> Config:
        """Settings after applying ``--config`` and the per-invocation overrides."""
        base = config(self.config) if self.config else self.settings
        slack: int | str | None = self.rounding_slack
        if slack is not None and slack != "published":
            try:
                slack = int(slack)
            except ValueError as exc:
                raise InvalidConfig("--rounding-slack must be an integer or 'published'") from exc
        return base.replace(
            seed=self.seed,
            replicates=self.replicates,
            mc_sample_size=self.mc_sample_size,
            threads=self.threads,
            rounding_slack=slack,
            time_encoding=self.time_encoding,
        )


# --- inputs ----------------------------------------------------------------------------------


def _load_tables(cfg: RunConfig, settings: Config) -> list[GroupedSample]:
    deflators = load_deflators(cfg.deflators) if cfg.deflators else None
    samples = []
    for path in cfg.inputs:
        sample = load_grouped_csv(
            path,
            unit=cfg.unit,
            sector=cfg.sector,
            round_label=cfg.round_label,
            survey_midpoint=cfg.midpoint,
            rounding_slack=settings.rounding_slack,
        )
        if deflators is not None:
            sample = deflate(sample, deflators)
        samples.append(sample)
    return samples


def _model_for(cfg: RunConfig, settings: Config, sample: GroupedSample) -> Distribution:
    if cfg.spec:
        return load_spec(cfg.spec)
    return fit_chi2(sample, cfg.family, seed=settings.seed, threads=settings.threads).spec


def baseline_spec() -> Mixture:
    """The urban-household 2002 mixture with the simulation-study tail settings."""
    table = load_parameter_table(fixture_path("mixture_urban.csv"))
    row = table[(table["round_label"] == BASELINE_ROUND) & (table["unit"] == "household")]
    if row.empty:
        raise InputError(f"no urban household parameters for round {BASELINE_ROUND}")
    r = row.iloc[0]
    return Mixture(
        x_M=float(r["x_M"]),
        sigma2=float(r["sigma2"]),
        nu=BASELINE_OVERRIDES["nu"],
        x0=float(r["x0"]),
        pi=BASELINE_OVERRIDES["pi"],
    )


# --- commands --------------------------------------------------------------------------------


def _fit(cfg: RunConfig, settings: Config) -> Outcome:
    results = []
    rows = []
    for path, sample in zip(cfg.inputs, _load_tables(cfg, settings), strict=True):
        if cfg.compare:
            ranked = compare_families(sample, seed=settings.seed, threads=settings.threads)
            render_table(
                f"Families by chi2: {Path(path).name} ({cfg.unit})",
                ["family", "chi2", "dof", "params"],
                [
                    (r.family, r.chi2, r.dof, json.dumps(r.spec.params(), sort_keys=True))
                    for r in ranked
                ],
            )
            results.append({"input": path, "fits": [r.to_dict() for r in ranked]})
            rows.extend({"input": path, "family": r.family, "chi2": r.chi2} for r in ranked)
        elif cfg.grid:
            grid = fit_weibull_grid(sample, k_grid=settings.k_grid(), tie_shape=cfg.tie_shape)
            results.append({"input": path, "weibull_grid": grid.to_dict()})
            rows.append({"input": path, **grid.to_dict()})
        else:
            fit = fit_chi2(sample, cfg.family, seed=settings.seed, threads=settings.threads)
            results.append({"input": path, "fit": fit.to_dict()})
            rows.append(
                {"input": path, "family": fit.family, "chi2": fit.chi2, **fit.spec.params()}
            )
    return {"unit": cfg.unit, "results": results}, pd.DataFrame(rows)


def _gof(cfg: RunConfig, settings: Config) -> Outcome:
    results = []
    for path, sample in zip(cfg.inputs, _load_tables(cfg, settings), strict=True):
        spec = _model_for(cfg, settings, sample)
        report = mc_pvalue(
            sample,
            spec,
            statistic_name=cfg.statistic,
            replicates=settings.replicates,
            seed=settings.seed,
            mc_sample_size=settings.mc_sample_size,
            threads=settings.threads,
            progress=cfg.verbose,
        )
        results.append(
            {
                "input": path,
                "spec": spec.to_dict(),
                "chi2": chi2_at(spec, sample),
                "gof": report.to_dict(),
            }
        )
    frame = pd.DataFrame(
        [{"input": r["input"], **r["gof"], "chi2": r["chi2"]} for r in results]
    )
    return {"unit": cfg.unit, "results": results}, frame


def _gini(cfg: RunConfig, settings: Config) -> Outcome:
    results = []
    frames = []
    for path, sample in zip(cfg.inputs, _load_tables(cfg, settings), strict=True):
        curve = lorenz_from_grouped(sample)
        gini = gini_from_lorenz(curve)
        results.append({"input": path, **gini.to_dict(), "lorenz_points": len(curve)})
        frame = curve.to_frame()
        if len(cfg.inputs) > 1:
            frame.insert(0, "input", path)
        frames.append(frame)
    render_table(
        f"Grouped Gini ({cfg.unit})",
        ["input", "Gini (%)"],
        [(Path(r["input"]).name, percent(r["gini"])) for r in results],
    )
    return {"unit": cfg.unit, "results": results}, pd.concat(frames, ignore_index=True)


def _curve_payload(curve: KdeCurve, scale: str) -> Payload:
    out = curve.to_level() if scale == "level" else curve.to_log()
    return {
        "label": curve.label,
        "bandwidth": curve.bandwidth,
        "mass_log_scale": curve.to_log().mass(),
        "x": out.grid.tolist(),
        "density": out.density.tolist(),
    }


def _curves_frame(curves: dict[str, KdeCurve], scale: str) -> pd.DataFrame:
    converted = {k: (c.to_level() if scale == "level" else c.to_log()) for k, c in curves.items()}
    first = next(iter(converted.values()))
    if len(converted) == 1:
        return first.to_frame()
    frame = pd.DataFrame({"x": first.grid})
    for label, curve in converted.items():
        frame[f"density_{label}"] = curve.density
    return frame


def _national(cfg: RunConfig, samples: list[GroupedSample]) -> dict[str, KdeCurve]:
    by_sector = {s.sector: s for s in samples}
    if len(samples) != 2 or set(by_sector) != {"rural", "urban"}:
        raise InputError("--weights needs exactly one rural and one urban table")
    rural, urban = by_sector["rural"], by_sector["urban"]
    year = rural.survey_midpoint if cfg.midpoint is None else cfg.midpoint
    if year is None:
        raise InputError("pooling needs a survey midpoint; pass --midpoint or --round")
    share, _ = sector_weight(load_sector_weights(cfg.weights), year)  # type: ignore[arg-type]
    h = pooled_bandwidth(samples, cfg.unit) if cfg.bandwidth is None else cfg.bandwidth
    grid = default_grid(samples, h)
    r = grouped_kde(rural, cfg.unit, h, grid, cfg.truncated)
    u = grouped_kde(urban, cfg.unit, h, grid, cfg.truncated)
    log.info("Pooling at %.1f with rural share %.4f", year, share)
    return {"rural": r, "urban": u, "national": pool_national(r, u, share)}


def _kde(cfg: RunConfig, settings: Config) -> Outcome:
    if cfg.scale not in SCALES:
        raise InvalidConfig(f"--scale must be one of {SCALES}, got {cfg.scale!r}")
    samples = _load_tables(cfg, settings)
    if cfg.weights:
        curves = _national(cfg, samples)
    elif len(samples) == 1:
        s = samples[0]
        curve = grouped_kde(s, cfg.unit, cfg.bandwidth, truncated=cfg.truncated)
        curves = {s.round_label or Path(cfg.inputs[0]).stem: curve}
    else:
        curves = kde_series(samples, cfg.unit, cfg.bandwidth, cfg.truncated)
    payload = {
        "unit": cfg.unit,
        "scale": cfg.scale,
        "truncated": cfg.truncated,
        "curves": {label: _curve_payload(c, cfg.scale) for label, c in curves.items()},
    }
    return payload, _curves_frame(curves, cfg.scale)


def _population(path: str) -> str:
    stem = Path(path).stem.lower()
    for sector in ("rural", "urban"):
        if sector in stem:
            return sector
    return stem


def _trend_grid(title: str, table: dict[str, dict[str, TrendResult]]) -> None:
    populations = list(next(iter(table.values())))
    render_table(
        title,
        ["parameter", *populations],
        [
            (
                parameter,
                *(
                    f"{row[p].slope:.4g} (p={row[p].slope_p_value:.4f})"
                    for p in populations
                ),
            )
            for parameter, row in table.items()
        ],
    )


def _trend(cfg: RunConfig, settings: Config) -> Outcome:
    encoding = settings.time_encoding
    inputs = cfg.inputs or (
        str(fixture_path("mixture_rural.csv")),
        str(fixture_path("mixture_urban.csv")),
    )
    series: dict[str, list] = {}
    gini_tables: list[pd.DataFrame] = []
    for path in inputs:
        header = tuple(str(c).strip() for c in read_table(path).columns)
        if header == PARAMETER_COLUMNS:
            params = load_parameter_table(path)
            for unit in UNITS:
                pairs = parameter_series(params, unit, encoding)
                if pairs:
                    series[f"{_population(path)}_{unit}"] = pairs
        else:
            gini_tables.append(load_gini_series(path))

    trends: dict[str, dict[str, TrendResult]] = {}
    if series:
        parameters = cfg.parameter or MIXTURE_PARAMETERS
        trends.update(trend_table(series, parameters, cfg.degree))
    for table in gini_tables:
        columns = cfg.column or GINI_COLUMNS[1:]
        trends.setdefault("gini", {})
        for population in columns:
            times, values = gini_trend_inputs(table, population, encoding)
            trends["gini"][population] = linear_trend(times, values, cfg.degree)
    if not trends:
        raise InputError("no parameter table or Gini series to regress")

    _trend_grid(f"Trend slopes ({encoding} time encoding)", trends)
    payload = {
        "time_encoding": encoding,
        "degree": cfg.degree,
        "trends": {
            parameter: {population: r.to_dict() for population, r in row.items()}
            for parameter, row in trends.items()
        },
    }
    return payload, trend_frame(trends)


def _simulate(cfg: RunConfig, settings: Config) -> Outcome:
    spec = load_spec(cfg.spec) if cfg.spec else baseline_spec()
    seed = settings.seed
    payload: Payload = {"spec": spec.to_dict(), "n": cfg.n, "seed": seed}
    if cfg.counterfactuals:
        studies = simulation_scenarios(spec, cfg.n, seed, cfg.repeats)
    else:
        studies = {"baseline": simulation_study(spec, cfg.n, seed, cfg.repeats)}
    payload["scenarios"] = {name: s.to_dict() for name, s in studies.items()}
    payload["top_shares"] = {f"{f:g}": top_share(spec, f, cfg.n, seed) for f in cfg.top}

    render_table(
        f"Simulated Gini (n={cfg.n}, {cfg.repeats} run(s))",
        ["scenario", "Gini (%)"],
        [(name, f"{s.mean:.2f}") for name, s in studies.items()],
    )
    frame = pd.DataFrame(
        [
            {"scenario": name, "gini_mean": s.mean, "runs": len(s.values)}
            for name, s in studies.items()
        ]
    )
    return payload, frame


def _agents(cfg: RunConfig, settings: Config) -> Outcome:
    tau_mode = "geometric" if cfg.tau_mean is not None else "fixed"
    model = AgentModelConfig(
        n_agents=cfg.n_agents,
        kappa=cfg.kappa,
        tau_mode=tau_mode,
        tau=cfg.tau if cfg.tau is not None else 400,
        tau_mean=cfg.tau_mean if cfg.tau_mean is not None else 10.0,
        ratio=RatioDistribution.parse(cfg.ratio),
        form=cfg.form,
        seed=settings.seed,
        threads=settings.threads,
    )
    values = simulate_consumption(model)
    try:
        shape: dict[str, float | None] = dict(log_normality(values).to_dict())
    except InvalidParams as exc:
        log.warning("No log-normality check: %s", exc)
        shape = {"log_skewness": None, "log_ks_distance": None}
    payload: Payload = {
        "config": model.to_dict(),
        "mean": float(values.mean()),
        "min": float(values.min()),
        "max": float(values.max()),
        **shape,
        "hill": hill_curve(values).to_dict(orient="records"),
    }
    return payload, pd.DataFrame({"consumption": values})


HANDLERS: dict[str, Callable[[RunConfig, Config], Outcome]] = {
    "fit": _fit,
    "gof": _gof,
    "gini": _gini,
    "kde": _kde,
    "trend": _trend,
    "simulate": _simulate,
    "agents": _agents,
}


# --- output ----------------------------------------------------------------------------------


def provenance(cfg: RunConfig, settings: Config) -> Payload:
    """Input digests, seed and version; no timestamps, so reruns are byte-identical."""
    inputs = [{"path": p, "sha256": file_digest(p)} for p in cfg.inputs]
    for name in (cfg.deflators, cfg.weights):
        if name:
            inputs.append({"path": name, "sha256": file_digest(name)})
    return {"inputs": inputs, "seed": settings.seed, "version": __version__}


def _emit(cfg: RunConfig, settings: Config, payload: Payload, frame: pd.DataFrame | None) -> None:
    if cfg.format == "csv":
        if frame is None:
            raise InvalidConfig(f"{cfg.command} has no CSV output")
        if cfg.out:
            write_frame(cfg.out, frame)
        else:
            sys.stdout.write(frame.to_csv(index=False, float_format="%.10g"))
        return

    document = {
        "command": cfg.command,
        "result": payload,
        "provenance": provenance(cfg, settings),
    }
    text = dump_json(_plain(document))
    if cfg.out:
        write_text(cfg.out, text)
        log.info("Wrote %s", cfg.out)
    else:
        sys.stdout.write(text)


def _plain(value: Any) -> Any:
    """numpy scalars and arrays to builtins; non-finite floats to None."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def _apply_logging(cfg: RunConfig, settings: Config) -> None:
    if cfg.verbose:
        set_package_level("debug")
    elif cfg.quiet:
        set_package_level("warning")
    else:
        set_package_level(settings.log_level)
    if cfg.log_file:
        start_run_log(cfg.log_file)


@timer("expendist", reporter=log.info)
def run(cfg: RunConfig) -> int:
    """
    Execute one command and write its outputs.

    Returns:
        0 on success, 1 for input errors, 2 for numeric failures, 3 for I/O failures
    """
    try:
        cfg.validate()
        settings = cfg.resolved()
        _apply_logging(cfg, settings)
        payload, frame = HANDLERS[cfg.command](cfg, settings)
        _emit(cfg, settings, payload, frame)
    except ExpendistError as exc:
        log.error("%s failed: %s", cfg.command, exc)
        return exc.error_code
    except FileNotFoundError as exc:
        log.error("%s failed: %s", cfg.command, exc)
        return EXIT_INPUT
    except OSError as exc:
        log.error("%s failed: %s", cfg.command, exc)
        return EXIT_IO
    finally:
        stop_run_log()
    return 0


def build_cli() -> CLI:
    cli = CLI(prog="expendist", description="Heavy-tailed models for grouped expenditure data")
    cli.add("--version", action="version", version=f"expendist {__version__}")

    help_text = {
        "fit": "fit a family to grouped tables by minimum chi2",
        "gof": "Monte-Carlo goodness-of-fit p-value",
        "gini": "grouped Lorenz curve and Gini coefficient",
        "kde": "log-scale kernel density of grouped tables",
        "trend": "linear trends of fitted parameters or Gini series",
        "simulate": "simulation Gini and top shares of a fitted model",
        "agents": "agent-based consumption simulation",
    }
    for name in COMMANDS:
        sub = cli.command(name, help=help_text[name])
        sub.add("inputs", nargs="*", help="input CSV files")
        sub.add("--out", help="output file (default stdout)")
        sub.add("--format", choices=FORMATS, default="json")
        sub.add("--seed", type=int)
        sub.add("--threads", type=int)
        sub.add("--config", help="YAML config file")
        sub.add("--log-file", dest="log_file", help="append package logs to this file")
        sub.add("--time-encoding", dest="time_encoding", choices=("midpoint", "start"))
        sub.add("-v", "--verbose", action="store_true")
        sub.add("-q", "--quiet", action="store_true")
        if name in NEEDS_TABLES:
            sub.add("--unit", choices=UNITS, default="household")
            sub.add("--sector", choices=("rural", "urban"))
            sub.add("--round", dest="round_label")
            sub.add("--midpoint", type=float, help="survey midpoint as a fractional year")
            sub.add("--deflators", help="round_label,index CSV")
            sub.add("--rounding-slack", dest="rounding_slack")
        if name in ("fit", "gof"):
            sub.add("--family", choices=tuple(FAMILIES), default="mixture")
        if name in ("gof", "simulate"):
            sub.add("--spec", help="distribution JSON, inline or a file")
        if name == "fit":
            sub.add("--compare", action="store_true", help="fit and rank several families")
            sub.add("--grid", action="store_true", help="Weibull shape grid regression")
            sub.add("--tie-shape", dest="tie_shape", action="store_true")
        if name == "gof":
            sub.add("--statistic", choices=STATISTICS, default="ks")
            sub.add("--replicates", type=int)
            sub.add("--mc-sample-size", dest="mc_sample_size", type=int)
        if name == "kde":
            sub.add("--bandwidth", type=float)
            sub.add("--truncated", action="store_true")
            sub.add("--scale", choices=SCALES, default="level")
            sub.add("--weights", help="year,rural_count,urban_count CSV for national pooling")
        if name == "trend":
            sub.add("--parameter", nargs="+", choices=MIXTURE_PARAMETERS)
            sub.add("--column", nargs="+", choices=GINI_COLUMNS[1:])
            sub.add("--degree", type=int, choices=(1, 2), default=1)
        if name == "simulate":
            sub.add("--n", type=int, default=1_000_000)
            sub.add("--repeats", type=int, default=1)
            sub.add("--top", type=float, nargs="+", default=list(DEFAULT_TOP))
            sub.add("--counterfactuals", action="store_true")
        if name == "agents":
            sub.add("--n-agents", dest="n_agents", type=int, default=100_000)
            sub.add("--kappa", type=float, default=1.0)
            sub.add("--tau", type=int, help="goods per agent (fixed mode)")
            sub.add("--tau-mean", dest="tau_mean", type=float, help="mean goods (geometric)")
            sub.add("--ratio", default="uniform:0.01", help="uniform:u, point:r or exponential:m")
            sub.add("--form", choices=FORMS, default="additive")
    return cli


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_cli().get(argv)
    except CLIError as exc:
        log.error("%s", exc)
        return exc.error_code
    return run(RunConfig.from_args(args))


__all__ = [
    "COMMANDS",
    "FORMATS",
    "HANDLERS",
    "RunConfig",
    "baseline_spec",
    "build_cli",
    "main",
    "provenance",
    "run",
]
