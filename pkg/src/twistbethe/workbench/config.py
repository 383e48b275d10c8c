"""Experiment configuration: validation, JSON config files, CLI merging."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from ..common import Boundary
from ..baes import SolverSettings
from ..thermo import SeriesSettings

__all__ = ["EXPERIMENTS", "ConfigError", "ExperimentConfig", "load_config_file"]

EXPERIMENTS = (
    "EdSpectrum",
    "SolveHom",
    "SolveInhom",
    "EinhScan",
    "BoundaryEnergyScan",
    "GapScan",
    "ChargeScan",
    "Thermo",
    "Fit",
)

_CANONICAL = {name.lower(): name for name in EXPERIMENTS}
_CANONICAL.update({
    "ed-spectrum": "EdSpectrum",
    "solve-hom": "SolveHom",
    "solve-inhom": "SolveInhom",
    "einh-scan": "EinhScan",
    "boundary-energy-scan": "BoundaryEnergyScan",
    "gap-scan": "GapScan",
    "charge-scan": "ChargeScan",
})


class ConfigError(ValueError):
    """Invalid experiment configuration (maps to CLI exit code 2)."""


def coerce_experiment(name) -> str:
    key = str(name).strip().lower().replace("_", "-")
    try:
        return _CANONICAL[key]
    except KeyError:
        raise ConfigError(
            f"unknown experiment {name!r}; expected one of {EXPERIMENTS}") from None


@dataclass
class ExperimentConfig:
    """One experiment sweep: grid, physical parameters, solver knobs, output.

    ``eta`` may be a single value or a list (swept); ``N_list`` must be
    nonempty and ascending.  ``fit_*`` fields are used only by the Fit
    experiment, which reads its samples from a CSV produced by a scan.
    """

    experiment: str
    eta: object = 2.0
    N_list: tuple = (4, 6, 8)
    boundary: str = "antiperiodic"
    solver: SolverSettings = field(default_factory=SolverSettings)
    series: SeriesSettings = field(default_factory=SeriesSettings)
    output_dir: str = "results"
    seed: int = 0
    fit_kind: str | None = None
    fit_input: str | None = None
    fit_x: str = "N"
    fit_y: str | None = None

    def __post_init__(self):
        self.experiment = coerce_experiment(self.experiment)
        try:
            self.boundary = Boundary.coerce(self.boundary)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

        etas = self.eta if isinstance(self.eta, (list, tuple)) else [self.eta]
        try:
            etas = tuple(float(e) for e in etas)
        except (TypeError, ValueError):
            raise ConfigError(f"eta must be a number or list: {self.eta!r}") from None
        if not etas or any(e <= 0 for e in etas):
            raise ConfigError("eta values must be positive")
        self.eta = etas if len(etas) > 1 else etas[0]

        try:
            ns = tuple(int(n) for n in self.N_list)
        except (TypeError, ValueError):
            raise ConfigError(f"N_list must be a list of integers: {self.N_list!r}") from None
        if not ns:
            raise ConfigError("N_list must be nonempty")
        if any(n < 2 for n in ns):
            raise ConfigError("N_list entries must be >= 2")
        if list(ns) != sorted(ns):
            raise ConfigError("N_list must be ascending")
        self.N_list = ns

        if isinstance(self.solver, dict):
            try:
                self.solver = SolverSettings(**self.solver)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad solver settings: {exc}") from None
        if isinstance(self.series, dict):
            try:
                self.series = SeriesSettings(**self.series)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad series settings: {exc}") from None

        self.output_dir = str(self.output_dir)
        self.seed = int(self.seed)

        if self.experiment == "Fit":
            if not self.fit_kind or not self.fit_input:
                raise ConfigError("Fit experiment needs fit_kind and fit_input")

    @property
    def etas(self) -> tuple:
        """Always a tuple, regardless of scalar or list input."""
        return self.eta if isinstance(self.eta, tuple) else (self.eta,)

    @classmethod
    def from_dict(cls, data: dict, overrides: dict | None = None) -> "ExperimentConfig":
        """Build a config from a JSON-style dict, with CLI overrides on top.

        Override values that are None are ignored, so absent CLI flags do
        not clobber config-file values.
        """
        merged = dict(data)
        for key, val in (overrides or {}).items():
            if val is not None:
                merged[key] = val
        known = {f.name for f in fields(cls)}
        unknown = set(merged) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "experiment" not in merged:
            raise ConfigError("config needs an 'experiment' entry")
        return cls(**merged)


def load_config_file(path) -> dict:
    """Read a JSON config file mirroring ExperimentConfig fields."""
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {p}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data
