"""Experiment presets, config parsing, orchestration and output files."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path

from .analysis import ConvergenceTable, LevelErrors, build_table, cell_errors, l1_norm, linf_norm
from .errmodel import pitfall_factors, remedy_factors
from .grid import DEFAULT_PERTURB_FRACTION, GRID_KINDS, Grid1D, grid_family
from .manufactured import ProblemSpec
from .march import MarchMode, integrate
from .scheme import steady_solve

log = logging.getLogger(__name__)

EXPERIMENTS = ("steady", "ode_time", "unsteady_fixed_dt", "unsteady_scaled_dt", "remedy",
               "factors")

DESIGN_BAND = (1.9, 2.1)
PITFALL_BAND = (0.8, 1.2)
REMEDY_BAND = (1.85, 2.15)


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class CaseConfig:
    """One verification experiment.

    ``grid_kind`` may be ``both`` (regular and irregular), which
    :func:`run_case` expands; :func:`run_experiment` takes a single kind.
    Scaled experiments use dt = mu * h / a, where h is the grid's smallest
    cell, and T_f either explicit or ``t_final_multiple`` coarsest steps.
    """

    experiment: str
    name: str = "custom"
    a: float = 1.0
    grid_kind: str = "both"
    base_cells: int = 8
    n_levels: int = 6
    seed: int = 0
    perturb_fraction: float = DEFAULT_PERTURB_FRACTION
    dt_fixed: float | None = None
    mu: float | None = None
    t_final: float | None = None
    t_final_multiple: float | None = None
    output_dir: str | None = None

    def __post_init__(self):
        validate(self)

    @property
    def grid_kinds(self) -> tuple[str, ...]:
        if self.grid_kind == "both":
            return ("regular", "irregular")
        return (self.grid_kind,)

    def for_kind(self, kind: str) -> "CaseConfig":
        return dataclasses.replace(self, grid_kind=kind)


def validate(cfg: CaseConfig) -> None:
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}; choose from {EXPERIMENTS}")
    if cfg.grid_kind not in GRID_KINDS + ("both",):
        raise ConfigError(f"unknown grid kind {cfg.grid_kind!r}")
    if not cfg.a > 0.0:
        raise ConfigError(f"advection speed must be positive, got {cfg.a}")
    if cfg.n_levels < 2:
        raise ConfigError("need at least 2 refinement levels")
    if cfg.base_cells < 4:
        raise ConfigError("base_cells must be at least 4")
    if cfg.t_final is not None and cfg.t_final_multiple is not None:
        raise ConfigError("set either t_final or t_final_multiple, not both")

    exp = cfg.experiment
    if exp in ("steady", "factors"):
        extra = [k for k in ("dt_fixed", "mu", "t_final", "t_final_multiple")
                 if getattr(cfg, k) is not None]
        if extra:
            raise ConfigError(f"{exp} experiment takes no time-step settings, got {extra}")
    elif exp == "unsteady_fixed_dt":
        if cfg.dt_fixed is None or not cfg.dt_fixed > 0.0:
            raise ConfigError("unsteady_fixed_dt needs a positive dt_fixed")
        if cfg.mu is not None or cfg.t_final_multiple is not None:
            raise ConfigError("unsteady_fixed_dt takes dt_fixed and t_final, not mu")
    else:
        if cfg.mu is None or not cfg.mu > 0.0:
            raise ConfigError(f"{exp} needs a positive mu")
        if cfg.dt_fixed is not None:
            raise ConfigError(f"{exp} sets dt from mu; dt_fixed conflicts")
        if exp == "remedy":
            if cfg.mu > 1.0:
                raise ConfigError("remedy needs mu <= 1")
            if cfg.t_final is not None:
                raise ConfigError("remedy ties T_f to the coarsest step; use t_final_multiple")
            if cfg.t_final_multiple is not None and cfg.t_final_multiple < 1.0:
                raise ConfigError("remedy needs t_final_multiple >= 1")
    if cfg.t_final is not None and not cfg.t_final > 0.0:
        raise ConfigError("t_final must be positive")
    if cfg.t_final_multiple is not None and not cfg.t_final_multiple > 0.0:
        raise ConfigError("t_final_multiple must be positive")


PRESETS = {
    "fig1b": dict(experiment="steady", grid_kind="both"),
    "fig1c": dict(experiment="ode_time", grid_kind="regular", mu=0.01, t_final_multiple=1.0),
    "fig1de": dict(experiment="unsteady_fixed_dt", grid_kind="both", dt_fixed=1e-8,
                   t_final=1e-8),
    "scaled_dt_pitfall": dict(experiment="unsteady_scaled_dt", grid_kind="both", mu=0.01,
                              t_final_multiple=1.0),
    "fig2": dict(experiment="remedy", grid_kind="both", mu=0.95, t_final_multiple=1.0),
    "exp_tables": dict(experiment="factors", grid_kind="regular"),
}

PRESET_HELP = {
    "fig1b": "steady problem, regular and irregular grids",
    "fig1c": "ODE-only time integration, T_f = 0.01 h_c, dt = 0.01 h",
    "fig1de": "single tiny step dt = T_f = 1e-8",
    "scaled_dt_pitfall": "refined small steps dt = 0.01 h, T_f = 0.01 h_c",
    "fig2": "remedy: mu = 0.95, T_f = coarsest dt",
    "exp_tables": "exp(-a T_f / h) factor tables",
}


def preset(name: str) -> CaseConfig:
    try:
        fields = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return CaseConfig(name=name, **fields)


_KEY_ALIASES = {
    "grid": "grid_kind",
    "levels": "n_levels",
    "dt": "dt_fixed",
    "tf": "t_final",
    "tf_multiple": "t_final_multiple",
    "out": "output_dir",
    "perturb": "perturb_fraction",
}
_FIELD_TYPES = {
    "experiment": str, "name": str, "grid_kind": str, "output_dir": str,
    "a": float, "perturb_fraction": float, "dt_fixed": float, "mu": float,
    "t_final": float, "t_final_multiple": float,
    "base_cells": int, "n_levels": int, "seed": int,
}


def coerce_fields(raw: dict[str, str]) -> dict:
    """Map config/flag keys to CaseConfig fields and convert their values."""
    out = {}
    for key, value in raw.items():
        field = _KEY_ALIASES.get(key.replace("-", "_"), key.replace("-", "_"))
        if field not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        if field in out:
            raise ConfigError(f"config key {field!r} given twice")
        try:
            out[field] = _FIELD_TYPES[field](value)
        except ValueError:
            raise ConfigError(f"bad value for {key!r}: {value!r}") from None
    return out


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines with ``#`` comments into CaseConfig fields."""
    raw = {}
    seen = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        raw[key] = value
    return coerce_fields(raw)


def load_config(path) -> CaseConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    fields = parse_config_text(text)
    if "preset" in fields:
        raise ConfigError("preset is not a config key")
    if "experiment" not in fields:
        raise ConfigError(f"{path}: 'experiment' is required")
    return CaseConfig(**fields)


def config_text(cfg: CaseConfig) -> str:
    """Render a config in the ``key = value`` file format."""
    lines = []
    for f in dataclasses.fields(cfg):
        value = getattr(cfg, f.name)
        if value is not None:
            lines.append(f"{f.name} = {value!r}" if isinstance(value, float)
                         else f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def time_settings(cfg: CaseConfig, grids: list[Grid1D]) -> list[tuple[float, float]]:
    """(dt, T_f) for each level of a time-dependent experiment."""
    if cfg.experiment == "unsteady_fixed_dt":
        t_final = cfg.t_final if cfg.t_final is not None else cfg.dt_fixed
        return [(cfg.dt_fixed, t_final)] * len(grids)
    dts = [cfg.mu * g.cfl_spacing / cfg.a for g in grids]
    if cfg.t_final is not None:
        t_final = cfg.t_final
    else:
        multiple = 1.0 if cfg.t_final_multiple is None else cfg.t_final_multiple
        t_final = multiple * dts[0]
    return [(dt, t_final) for dt in dts]


def _solve_level(cfg: CaseConfig, spec: ProblemSpec, grid: Grid1D, dt, t_final):
    if cfg.experiment == "steady":
        return steady_solve(spec, grid), 0.0
    mode = MarchMode.ODE_ONLY if cfg.experiment == "ode_time" else MarchMode.FULL
    return integrate(spec, grid, t_final, dt, mode), t_final


def run_experiment(cfg: CaseConfig, write: bool = True) -> ConvergenceTable:
    """Run every refinement level of a single-grid-kind config."""
    if cfg.experiment == "factors":
        raise ConfigError("the factors preset has no refinement study; use `verify factors`")
    if len(cfg.grid_kinds) != 1:
        raise ConfigError("run_experiment takes one grid kind; use run_case for 'both'")
    spec = ProblemSpec(cfg.a)
    grids = grid_family(cfg.grid_kind, cfg.base_cells, cfg.n_levels, cfg.seed,
                        cfg.perturb_fraction)
    if cfg.experiment == "steady":
        settings = [(None, None)] * len(grids)
    else:
        settings = time_settings(cfg, grids)

    levels = []
    for k, (grid, (dt, t_final)) in enumerate(zip(grids, settings)):
        try:
            field, t_eval = _solve_level(cfg, spec, grid, dt, t_final)
        except Exception as exc:
            raise type(exc)(f"level {k} ({grid.n_cells} cells): {exc}") from exc
        err = cell_errors(field, t_eval)
        linf, cell = linf_norm(err)
        levels.append(LevelErrors(grid.n_cells, l1_norm(err), linf, cell))
        log.debug("%s %s level %d: N=%d l1=%.3e linf=%.3e", cfg.name, cfg.grid_kind, k,
                  grid.n_cells, levels[-1].l1_error, linf)
    table = build_table(levels)
    if write and cfg.output_dir is not None:
        emit_outputs(table, cfg)
    return table


def run_case(cfg: CaseConfig, write: bool = True) -> dict[str, ConvergenceTable]:
    return {kind: run_experiment(cfg.for_kind(kind), write) for kind in cfg.grid_kinds}


def expected_bands(cfg: CaseConfig) -> dict[str, tuple[float, float]]:
    """Expected final-pair order band per norm ('l1', 'linf')."""
    exp = cfg.experiment
    if exp == "remedy":
        return {"l1": REMEDY_BAND, "linf": REMEDY_BAND}
    if exp in ("unsteady_fixed_dt", "unsteady_scaled_dt"):
        if cfg.grid_kind == "regular":
            return {"l1": DESIGN_BAND, "linf": PITFALL_BAND}
        return {"l1": PITFALL_BAND, "linf": PITFALL_BAND}
    return {"l1": DESIGN_BAND, "linf": DESIGN_BAND}


def band_name(band) -> str:
    return {DESIGN_BAND: "design", PITFALL_BAND: "pitfall", REMEDY_BAND: "remedy"}.get(
        tuple(band), "expected")


def band_checks(table: ConvergenceTable, cfg: CaseConfig) -> list[tuple[str, float, tuple, bool]]:
    bands = expected_bands(cfg)
    out = []
    for norm, order in (("l1", table.final_l1_order), ("linf", table.final_linf_order)):
        lo, hi = bands[norm]
        out.append((norm, order, (lo, hi), lo <= order <= hi))
    return out


def _fmt(x) -> str:
    return "" if x is None else f"{x:.17g}"


def output_stem(cfg: CaseConfig) -> str:
    return f"{cfg.name}_{cfg.grid_kind}"


def format_table(table: ConvergenceTable) -> str:
    lines = [f"{'k':>2} {'N':>5} {'h':>10} {'L1 error':>12} {'order':>6} "
             f"{'Linf error':>12} {'order':>6} {'argmax':>6}"]
    for r in table:
        o1 = "" if r.l1_order is None else f"{r.l1_order:.3f}"
        oi = "" if r.linf_order is None else f"{r.linf_order:.3f}"
        lines.append(f"{r.level:>2} {r.n_cells:>5} {r.h:>10.3e} {r.l1_error:>12.4e} {o1:>6} "
                     f"{r.linf_error:>12.4e} {oi:>6} {r.linf_cell:>6}")
    return "\n".join(lines)


def report_text(table: ConvergenceTable, cfg: CaseConfig) -> str:
    lines = [f"case {cfg.name}: experiment={cfg.experiment} grid={cfg.grid_kind} a={cfg.a!r}"
             f" levels={cfg.n_levels} base_cells={cfg.base_cells}", ""]
    lines.append(format_table(table))
    lines.append("")
    lines.append(f"final pair N={table.rows[-2].n_cells} -> {table.rows[-1].n_cells}:")
    for norm, order, (lo, hi), ok in band_checks(table, cfg):
        label = "L1" if norm == "l1" else "Linf"
        lines.append(f"  observed {label} order {order:.3f} in {band_name((lo, hi))} band "
                     f"[{lo}, {hi}]: {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def emit_outputs(table: ConvergenceTable, cfg: CaseConfig) -> list[Path]:
    """Write the CSV, the plot-ready .dat and the text report for one grid kind."""
    if len(table) == 0:
        raise ValueError("empty convergence table")
    if cfg.output_dir is None:
        raise ConfigError("no output directory configured")
    out = Path(cfg.output_dir)
    stem = output_stem(cfg)
    csv_lines = ["level,n_cells,h,l1_error,linf_error,l1_order,linf_order"]
    for r in table:
        csv_lines.append(",".join([str(r.level), str(r.n_cells), _fmt(r.h), _fmt(r.l1_error),
                                   _fmt(r.linf_error), _fmt(r.l1_order), _fmt(r.linf_order)]))
    dat_lines = ["# h l1_error linf_error"]
    dat_lines += [f"{_fmt(r.h)} {_fmt(r.l1_error)} {_fmt(r.linf_error)}" for r in table]
    files = {
        out / f"{stem}.csv": "\n".join(csv_lines) + "\n",
        out / f"{stem}.dat": "\n".join(dat_lines) + "\n",
        out / f"{stem}_report.txt": report_text(table, cfg),
    }
    written = []
    for path, text in files.items():
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        written.append(path)
    return written


def factor_tables_text() -> str:
    lines = ["exp(-a T_f / h) with dt = 0.01 h, T_f = 0.01 h_c, h_c = 1/8 (a = 1):",
             f"{'N':>5} {'a T_f / h':>10} {'factor':>8}"]
    for k, (x, f) in enumerate(pitfall_factors()):
        lines.append(f"{8 * 2**k:>5} {x:>10.2f} {f:>8.2f}")
    lines += ["", "exp(-n mu) with dt = mu h / a, T_f = coarsest dt, mu = 1:",
              f"{'N':>5} {'n':>4} {'factor':>10}"]
    for k, (n, f) in enumerate(remedy_factors()):
        lines.append(f"{8 * 2**k:>5} {n:>4} {f:>10.2g}")
    return "\n".join(lines) + "\n"


def all_bands_pass(tables: dict[str, ConvergenceTable], cfg: CaseConfig) -> bool:
    return all(ok for kind, t in tables.items()
               for *_, ok in band_checks(t, cfg.for_kind(kind)))

