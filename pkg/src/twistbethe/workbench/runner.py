"""Experiment orchestration: sweep grids, per-point JSON cache, records.

Each sweep point is computed once and cached as a JSON file keyed by a
hash of the experiment name and its full parameter set (solver and series
settings included), so interrupted sweeps resume and repeated runs are
byte-identical.  Point failures are recorded with an error status and
never abort the sweep.
"""

from __future__ import annotations

import cmath
import hashlib
import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .. import __version__
from .. import baes, model, scaling, thermo
from ..common import Boundary, Parity
from .config import ExperimentConfig

__all__ = ["ResultRecord", "run", "flatten_record"]


@dataclass
class ResultRecord:
    """One sweep point: parameter echo, named scalar outputs, provenance."""

    experiment: str
    params: dict
    outputs: dict
    status: str
    error: str | None
    timestamp: str
    version: str

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": dict(self.params),
            "outputs": dict(self.outputs),
            "status": self.status,
            "error": self.error,
            "timestamp": self.timestamp,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ResultRecord":
        return cls(
            experiment=data["experiment"],
            params=dict(data["params"]),
            outputs=dict(data["outputs"]),
            status=data["status"],
            error=data.get("error"),
            timestamp=data["timestamp"],
            version=data["version"],
        )


def flatten_record(record: ResultRecord) -> dict:
    """Single flat mapping for tabular output: params, outputs, provenance."""
    flat = {"experiment": record.experiment}
    flat.update(record.params)
    flat.update(record.outputs)
    flat["status"] = record.status
    flat["error"] = record.error if record.error else ""
    flat["timestamp"] = record.timestamp
    flat["version"] = record.version
    return flat


# ---------------------------------------------------------------------------
# cache


def _canonical(obj):
    if isinstance(obj, dict):
        return {k: _canonical(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, Boundary):
        return obj.value
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    return obj


def _point_key(experiment: str, params: dict, config: ExperimentConfig) -> str:
    payload = {
        "experiment": experiment,
        "params": _canonical(params),
        "solver": _canonical(asdict(config.solver)),
        "series": _canonical(asdict(config.series)),
        "version": __version__,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:20]


def _cache_path(config: ExperimentConfig, experiment: str, key: str) -> Path:
    return Path(config.output_dir) / "cache" / f"{experiment}-{key}.json"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# experiment bodies; each returns a dict of named scalars


def _first_gap(eigenvalues, tol: float = 1e-8) -> float:
    e0 = eigenvalues[0]
    for e in eigenvalues[1:]:
        if e - e0 > tol:
            return float(e - e0)
    return 0.0


def _exp_ed_spectrum(cfg: ExperimentConfig, eta: float, N: int) -> dict:
    params = model.ModelParams(N=N, eta=eta, boundary=cfg.boundary)
    H = model.build_hamiltonian(params)
    count = min(6, params.dim)
    spec = model.ed_spectrum(H, count, seed=cfg.seed)
    evs = spec.eigenvalues
    return {
        "e0": float(evs[0]),
        "e0_per_site": float(evs[0] / N),
        "gap": _first_gap(evs),
        "g0_degeneracy": int(spec.degeneracies[0]),
        "method": spec.method,
    }


def _exp_solve_hom(cfg: ExperimentConfig, eta: float, N: int) -> dict:
    qn = baes.ground_quantum_numbers(N, cfg.boundary)
    roots = baes.solve_log_baes(eta, N, qn, cfg.solver)
    energy = baes.energy_hom(roots)
    return {
        "M": int(roots.M),
        "energy": float(energy),
        "energy_over_cosh": float(energy / math.cosh(eta)),
        "energy_per_site": float(energy / N),
        "residual": float(roots.residual),
        "iterations": int(roots.iterations),
    }


def _exp_solve_inhom(cfg: ExperimentConfig, eta: float, N: int) -> dict:
    params = model.ModelParams(N=N, eta=eta, boundary=Boundary.ANTIPERIODIC)
    roots = baes.solve_inhom_baes(params, settings=cfg.solver)
    energy = baes.energy_inhom(roots, params)
    ed = model.ed_spectrum(model.build_hamiltonian(params), 1,
                           seed=cfg.seed).eigenvalues[0]
    return {
        "energy": float(energy),
        "ed_energy": float(ed),
        "abs_defect": float(abs(energy - ed)),
        "residual": float(roots.residual),
        "root_sum_re": float(np.sum(roots.lam).real),
        "root_sum_im": float(np.sum(roots.lam).imag),
    }


def _exp_einh_scan(cfg: ExperimentConfig, eta: float, N: int) -> dict:
    e_inh = baes.inhom_contribution(N, eta, "Energy", cfg.solver, seed=cfg.seed)
    return {
        "e_inh": float(e_inh),
        "e_inh_over_cosh": float(e_inh / math.cosh(eta)),
    }


def _exp_boundary_energy_scan(cfg: ExperimentConfig, eta: float, N: int) -> dict:
    out = {}
    for tag, boundary in (("anti", Boundary.ANTIPERIODIC), ("per", Boundary.PERIODIC)):
        params = model.ModelParams(N=N, eta=eta, boundary=boundary)
        H = model.build_hamiltonian(params)
        out[f"e_{tag}"] = float(model.ed_spectrum(H, 1, seed=cfg.seed).eigenvalues[0])
    e_b = out["e_anti"] - out["e_per"]
    out["e_b"] = float(e_b)
    out["e_b_over_cosh"] = float(e_b / math.cosh(eta))
    return out


def _exp_gap_scan(cfg: ExperimentConfig, eta: float, N: int) -> dict:
    params = model.ModelParams(N=N, eta=eta, boundary=cfg.boundary)
    H = model.build_hamiltonian(params)
    count = min(6, params.dim)
    spec = model.ed_spectrum(H, count, seed=cfg.seed)
    gap = _first_gap(spec.eigenvalues)
    return {
        "e0": float(spec.eigenvalues[0]),
        "gap": gap,
        "gap_over_cosh": float(gap / math.cosh(eta)),
        "g0_degeneracy": int(spec.degeneracies[0]),
    }


def _exp_charge_scan(cfg: ExperimentConfig, eta: float, N: int) -> dict:
    params = model.ModelParams(N=N, eta=eta, boundary=Boundary.ANTIPERIODIC)
    gs = model.ground_space(params, seed=cfg.seed)
    momenta = sorted((cmath.log(complex(ev)).imag for ev in gs.t0_eigenvalues))
    p_inh = baes.inhom_contribution(N, eta, "Momentum", cfg.solver, seed=cfg.seed)
    h2_inh = baes.inhom_contribution(N, eta, "ChargeH2", cfg.solver, seed=cfg.seed)
    return {
        "p_im_low": float(momenta[0]),
        "p_im_high": float(momenta[1]),
        "p_inh_im": float(complex(p_inh).imag),
        "h2_inh": float(np.real(h2_inh)),
    }


def _exp_thermo(cfg: ExperimentConfig, eta: float, N: int | None) -> dict:
    e0 = thermo.e0_density(eta, cfg.series)
    e_b = thermo.twisted_boundary_energy(eta, Parity.EVEN, cfg.series)
    gap = thermo.excitation_gap_tl(eta, Parity.ODD, cfg.series)
    ch = math.cosh(eta)
    return {
        "e0": float(e0),
        "e0_over_cosh": float(e0 / ch),
        "e_b": float(e_b),
        "e_b_over_cosh": float(e_b / ch),
        "gap": float(gap),
        "gap_over_cosh": float(gap / ch),
        "e_h_band_edge": float(thermo.hole_energy(math.pi / eta, eta, cfg.series)),
    }


def _exp_fit(cfg: ExperimentConfig) -> dict:
    from .emit import parse_csv

    rows = parse_csv(cfg.fit_input)
    y_field = cfg.fit_y
    if y_field is None:
        raise ValueError("Fit experiment needs fit_y (value column name)")
    samples = []
    for row in rows:
        if str(row.get("status", "ok")) not in ("ok", ""):
            continue
        samples.append((int(float(row[cfg.fit_x])), float(row[y_field])))
    result = scaling.fit(cfg.fit_kind, samples)
    return {
        "kind": result.kind,
        "a": float(result.a),
        "b": float(result.b),
        "c": float(result.c) if result.c is not None else "",
        "rms_residual": float(result.rms_residual),
        "n_points": int(result.n_points),
        "asymptote": float(scaling.extrapolate(result)) if result.b < 0 else "",
    }


# ---------------------------------------------------------------------------
# sweep driver


def _grid(config: ExperimentConfig):
    """Sweep points as (params_echo, callable) pairs, in deterministic order."""
    exp = config.experiment
    boundary = config.boundary.value
    points = []
    if exp == "Thermo":
        for eta in config.etas:
            params = {"eta": float(eta), "seed": config.seed}
            points.append((params, lambda c, e=eta: _exp_thermo(c, e, None)))
        return points
    if exp == "Fit":
        params = {
            "kind": config.fit_kind,
            "input": str(config.fit_input),
            "x": config.fit_x,
            "y": config.fit_y,
        }
        points.append((params, lambda c: _exp_fit(c)))
        return points

    bodies = {
        "EdSpectrum": _exp_ed_spectrum,
        "SolveHom": _exp_solve_hom,
        "SolveInhom": _exp_solve_inhom,
        "EinhScan": _exp_einh_scan,
        "BoundaryEnergyScan": _exp_boundary_energy_scan,
        "GapScan": _exp_gap_scan,
        "ChargeScan": _exp_charge_scan,
    }
    body = bodies[exp]
    for eta in config.etas:
        for N in config.N_list:
            params = {"eta": float(eta), "N": int(N), "boundary": boundary,
                      "seed": config.seed}
            points.append((params, lambda c, e=eta, n=N: body(c, e, n)))
    return points


def _compute_point(config: ExperimentConfig, params: dict, body) -> ResultRecord:
    stamp = datetime.now(timezone.utc).isoformat()
    try:
        outputs = body(config)
        return ResultRecord(config.experiment, params, outputs, "ok", None,
                            stamp, __version__)
    except Exception as exc:  # per-point failures must not abort the sweep
        return ResultRecord(config.experiment, params, {}, "error",
                            f"{type(exc).__name__}: {exc}", stamp, __version__)


def run(config: ExperimentConfig, *, force: bool = False,
        workers: int = 1) -> list[ResultRecord]:
    """Execute a sweep, reusing cached points unless ``force``.

    Points run independently (optionally in parallel); results return in
    grid order.  A failed point yields a record with status ``error``.
    """
    points = _grid(config)
    paths = [_cache_path(config, config.experiment,
                         _point_key(config.experiment, params, config))
             for params, _ in points]

    def produce(idx: int) -> ResultRecord:
        params, body = points[idx]
        path = paths[idx]
        if not force and path.exists():
            try:
                return ResultRecord.from_dict(
                    json.loads(path.read_text(encoding="utf-8")))
            except (json.JSONDecodeError, KeyError):
                pass  # corrupt cache entry: recompute below
        record = _compute_point(config, params, body)
        _write_atomic(path, json.dumps(record.to_dict(), indent=2) + "\n")
        return record

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(produce, range(len(points))))
    else:
        records = [produce(i) for i in range(len(points))]
    return records
