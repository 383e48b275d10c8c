"""Self-check suites: fast (small N, seconds) and full (dense + iterative).

Each check is a named function returning a detail string on success and
raising AssertionError (or any exception) on failure.  ``verify`` runs
the selected level's checks, reports one line per check, and the CLI maps
any failure to a nonzero exit code.

The large-N consistency check deliberately reads ``thermo.e0_density``
through the module attribute at call time, so a perturbed series is
picked up rather than a stale reference.
"""

from __future__ import annotations

import json
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import baes, model, scaling, thermo
from ..common import Boundary, Parity
from .config import ExperimentConfig
from .emit import emit, parse_csv
from .runner import flatten_record, run

__all__ = ["CheckResult", "VerifyReport", "verify"]

_ETA = 2.0


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    elapsed: float

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return f"{mark}  {self.name} ({self.elapsed:.2f}s): {self.detail}"


@dataclass
class VerifyReport:
    level: str
    checks: list
    elapsed: float

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def summary(self) -> str:
        lines = [c.line() for c in self.checks]
        n_fail = sum(not c.ok for c in self.checks)
        lines.append(
            f"{'OK' if n_fail == 0 else 'FAILED'}: "
            f"{len(self.checks) - n_fail}/{len(self.checks)} checks passed "
            f"({self.elapsed:.1f}s, level={self.level})")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# individual checks


def _check_thermo_identities() -> str:
    worst = 0.0
    for eta in (1.0, 2.0, 3.0):
        e_b = thermo.twisted_boundary_energy(eta, Parity.EVEN)
        e_edge = thermo.hole_energy(math.pi / eta, eta)
        gap = thermo.excitation_gap_tl(eta, Parity.ODD)
        worst = max(worst, abs(e_b - e_edge), abs(gap - 2 * e_edge))
        assert abs(e_b - e_edge) < 1e-13, f"band-edge hole vs boundary energy, eta={eta}"
        assert abs(gap - 2 * e_edge) < 1e-13, f"gap vs twice band-edge hole, eta={eta}"
        assert thermo.excitation_gap_tl(eta, Parity.EVEN) == 0.0
    return f"band-edge identities to {worst:.1e}"


def _check_parity_reversal() -> str:
    worst = 0.0
    for eta in (1.5, 2.0):
        e_b = thermo.twisted_boundary_energy(eta, Parity.EVEN)
        for N, sign in ((100, +1.0), (101, -1.0)):
            diff = (thermo.ground_energy_tl(N, eta, Boundary.ANTIPERIODIC)
                    - thermo.ground_energy_tl(N, eta, Boundary.PERIODIC))
            worst = max(worst, abs(diff - sign * e_b))
            assert abs(diff - sign * e_b) < 1e-13, f"N={N}, eta={eta}"
    return f"boundary-energy parity reversal to {worst:.1e}"


def _check_operator_identities(n_pairs: int) -> str:
    params = model.ModelParams(N=6, eta=_ETA, boundary=Boundary.ANTIPERIODIC)
    rng = np.random.default_rng(11)
    worst_comm = 0.0
    for _ in range(n_pairs):
        u, v = rng.uniform(-1.0, 1.0, 2) + 1j * rng.uniform(-0.5, 0.5, 2)
        tu = model.transfer_matrix(complex(u), params).dense
        tv = model.transfer_matrix(complex(v), params).dense
        worst_comm = max(worst_comm, np.linalg.norm(tu @ tv - tv @ tu))
    assert worst_comm < 1e-10, f"transfer commutator {worst_comm:.2e}"

    h = 1e-6
    t0 = model.transfer_matrix(0.0, params).dense
    tp = model.transfer_matrix(h, params).dense
    tm = model.transfer_matrix(-h, params).dense
    dlog = np.linalg.solve(t0, (tp - tm) / (2 * h))
    H_fd = 2 * math.sinh(_ETA) * dlog - params.N * math.cosh(_ETA) * np.eye(params.dim)
    H = model.build_hamiltonian(params).dense
    defect_h = np.max(np.abs(H_fd - H))
    assert defect_h < 1e-6, f"derivative identity defect {defect_h:.2e}"

    power = np.linalg.matrix_power(t0, 2 * params.N)
    defect_p = np.max(np.abs(power - np.eye(params.dim)))
    assert defect_p < 1e-10, f"t(0)^2N defect {defect_p:.2e}"
    return (f"commutators {worst_comm:.1e}, derivative identity {defect_h:.1e}, "
            f"shift power {defect_p:.1e}")


def _check_hom_vs_ed(n_max: int) -> str:
    worst = 0.0
    for N in range(4, n_max + 1):
        qn = baes.ground_quantum_numbers(N, Boundary.PERIODIC)
        roots = baes.solve_log_baes(_ETA, N, qn)
        e_hom = baes.energy_hom(roots)
        params = model.ModelParams(N=N, eta=_ETA, boundary=Boundary.PERIODIC)
        ed = model.ed_spectrum(model.build_hamiltonian(params), 1).eigenvalues[0]
        defect = abs(e_hom - ed)
        worst = max(worst, defect)
        assert defect < 1e-9, f"periodic N={N}: {defect:.2e}"
    return f"periodic reduced-root energies match ED to {worst:.1e}"


def _check_inhom_vs_ed(n_list) -> str:
    rng = np.random.default_rng(3)
    worst_e, worst_lam = 0.0, 0.0
    for N in n_list:
        params = model.ModelParams(N=N, eta=_ETA, boundary=Boundary.ANTIPERIODIC)
        roots = baes.solve_inhom_baes(params)
        e = baes.energy_inhom(roots, params)
        ed = model.ed_spectrum(model.build_hamiltonian(params), 1).eigenvalues[0]
        worst_e = max(worst_e, abs(e - ed))
        assert abs(e - ed) < 1e-8, f"N={N} energy defect {abs(e - ed):.2e}"
        gs = model.ground_space(params)
        v = gs.branch_vector(1j if N % 2 == 0 else 1.0)
        for u in rng.uniform(-0.7, 0.7, 2) + 1j * rng.uniform(-0.5, 0.5, 2):
            t_u = model.transfer_matrix(complex(u), params)
            lam_ed = np.vdot(v, t_u.matvec(v))
            lam_tq = baes.tq_eigenvalue(complex(u), roots)
            rel = abs(lam_ed - lam_tq) / max(abs(lam_ed), 1e-30)
            worst_lam = max(worst_lam, rel)
            assert rel < 1e-8, f"N={N} eigenvalue mismatch {rel:.2e}"
    return f"energies to {worst_e:.1e}, eigenvalue reconstruction to {worst_lam:.1e}"


def _check_einh_signs(evens, odds) -> str:
    prev = None
    for N in evens:
        e = baes.inhom_contribution(N, _ETA, "Energy")
        assert e > 0, f"even N={N}: E_inh={e:.3e} not positive"
        if prev is not None:
            assert abs(e) < abs(prev), f"|E_inh| not decreasing at even N={N}"
        prev = e
    prev = None
    for N in odds:
        e = baes.inhom_contribution(N, _ETA, "Energy")
        assert e < 0, f"odd N={N}: E_inh={e:.3e} not negative"
        if prev is not None:
            assert abs(e) < abs(prev), f"|E_inh| not decreasing at odd N={N}"
        prev = e
    return (f"sign and decay over even {list(evens)} / odd {list(odds)}")


def _check_charges(even_max: int, odd_max: int) -> str:
    worst_p, worst_h2 = 0.0, 0.0
    for N in range(4, even_max + 1, 2):
        params = model.ModelParams(N=N, eta=_ETA, boundary=Boundary.ANTIPERIODIC)
        gs = model.ground_space(params)
        moms = sorted(np.log(np.asarray(gs.t0_eigenvalues, dtype=complex)).imag)
        defect = max(abs(moms[0] + math.pi / 2), abs(moms[1] - math.pi / 2))
        worst_p = max(worst_p, defect)
        assert defect < 1e-9, f"even N={N} momentum defect {defect:.2e}"
    for N in range(5, odd_max + 1, 2):
        params = model.ModelParams(N=N, eta=_ETA, boundary=Boundary.ANTIPERIODIC)
        gs = model.ground_space(params)
        moms = sorted(np.log(np.asarray(gs.t0_eigenvalues, dtype=complex)).imag)
        defect = max(abs(moms[0]), abs(moms[1] - math.pi))
        worst_p = max(worst_p, defect)
        assert defect < 1e-9, f"odd N={N} momentum defect {defect:.2e}"
    for N in range(4, even_max + 1):
        params = model.ModelParams(N=N, eta=_ETA, boundary=Boundary.ANTIPERIODIC)
        gs = model.ground_space(params)
        H2 = model.build_h2_charge(params)
        for col in range(2):
            v = gs.vectors[:, col]
            expect = abs(np.vdot(v, H2.matvec(v)))
            worst_h2 = max(worst_h2, expect)
            assert expect < 1e-8, f"N={N} H2 expectation {expect:.2e}"
    for N in (5, 7):
        assert baes.inhom_contribution(N, _ETA, "Momentum") == 0
        assert baes.inhom_contribution(N, _ETA, "ChargeH2") == 0
    return f"momenta to {worst_p:.1e}, H2 expectations to {worst_h2:.1e}, odd zeros exact"


def _check_scaling_recovery() -> str:
    s = [(N, 3.7 * N ** -1.8) for N in range(8, 41, 2)]
    f = scaling.fit("power", s)
    assert abs(f.a - 3.7) < 1e-8 and abs(f.b + 1.8) < 1e-8
    s = [(N, 1.028 * math.exp(-0.3787 * N) + 1.027) for N in range(4, 41, 2)]
    f = scaling.fit("exp-offset", s)
    assert (abs(f.a - 1.028) < 1e-6 and abs(f.b + 0.3787) < 1e-6
            and abs(f.c - 1.027) < 1e-6)
    assert abs(scaling.extrapolate(f) - 1.027) < 1e-6
    return "synthetic power and offset-exponential recovery to 1e-6"


def _check_workbench_roundtrip() -> str:
    with tempfile.TemporaryDirectory() as tmp:
        cfg = ExperimentConfig(experiment="Thermo", eta=[2.0, 3.0],
                               N_list=[4], output_dir=tmp)
        records = run(cfg)
        assert all(r.status == "ok" for r in records)
        first = emit(records, "CSV", tmp)[0].read_bytes()
        again = emit(run(cfg), "CSV", tmp)[0].read_bytes()
        assert first == again, "rerun is not byte-identical"
        rows = parse_csv(Path(tmp) / "thermo.csv")
        for row, rec in zip(rows, records):
            flat = flatten_record(rec)
            for key, val in flat.items():
                assert row[key] == val, f"round-trip mismatch in {key}"
        path = emit(records, "JSON", tmp)[0]
        parsed = json.loads(path.read_text(encoding="utf-8"))
        assert [r.to_dict() for r in records] == parsed
    return "cache determinism and CSV/JSON round-trip"


def _check_large_n_consistency() -> str:
    """Reduced-root energies at N ~ 200 against the thermodynamic series.

    Hole-free combinations must match N*e0 tightly; hole-carrying ones sit
    a finite-size hole-quantization correction above the series value and
    get a looser band.
    """
    settings = thermo.SeriesSettings()
    worst = 0.0
    for N, boundary in ((201, Boundary.ANTIPERIODIC), (200, Boundary.PERIODIC)):
        qn = baes.ground_quantum_numbers(N, boundary)
        roots = baes.solve_log_baes(_ETA, N, qn)
        e_hom = baes.energy_hom(roots)
        # module-attribute access, so a perturbed series is actually used
        expected = N * thermo.e0_density(_ETA, settings)
        defect = abs(e_hom - expected)
        worst = max(worst, defect)
        assert defect < 1e-5, (
            f"hole-free N={N} {boundary.value}: defect {defect:.2e}")
    for N, boundary in ((200, Boundary.ANTIPERIODIC), (201, Boundary.PERIODIC)):
        qn = baes.ground_quantum_numbers(N, boundary)
        roots = baes.solve_log_baes(_ETA, N, qn)
        e_hom = baes.energy_hom(roots)
        expected = thermo.ground_energy_tl(N, _ETA, boundary, settings)
        defect = abs(e_hom - expected)
        assert defect < 2e-3, (
            f"hole-carrying N={N} {boundary.value}: defect {defect:.2e}")
    return f"hole-free combinations match N*e0 to {worst:.1e}"


# ---------------------------------------------------------------------------
# suite driver


def _fast_checks():
    return [
        ("thermo-series-identities", _check_thermo_identities),
        ("parity-reversal", _check_parity_reversal),
        ("operator-identities", lambda: _check_operator_identities(3)),
        ("hom-roots-vs-ed", lambda: _check_hom_vs_ed(8)),
        ("inhom-roots-vs-ed", lambda: _check_inhom_vs_ed((4, 6))),
        ("inhom-energy-signs", lambda: _check_einh_signs((8,), (7,))),
        ("conserved-charges", lambda: _check_charges(8, 7)),
        ("scaling-fit-recovery", _check_scaling_recovery),
        ("workbench-roundtrip", _check_workbench_roundtrip),
    ]


def _full_checks():
    return [
        ("thermo-series-identities", _check_thermo_identities),
        ("parity-reversal", _check_parity_reversal),
        ("operator-identities", lambda: _check_operator_identities(20)),
        ("hom-roots-vs-ed", lambda: _check_hom_vs_ed(12)),
        ("inhom-roots-vs-ed", lambda: _check_inhom_vs_ed((4, 6, 8, 10))),
        ("inhom-energy-signs",
         lambda: _check_einh_signs((8, 10, 12, 14, 16, 18), (7, 9, 11, 13))),
        ("conserved-charges", lambda: _check_charges(12, 11)),
        ("scaling-fit-recovery", _check_scaling_recovery),
        ("workbench-roundtrip", _check_workbench_roundtrip),
        ("large-n-bae-consistency", _check_large_n_consistency),
    ]


def verify(level: str = "fast", *, only=None) -> VerifyReport:
    """Run the named level's checks; ``only`` filters by check name."""
    key = str(level).strip().lower()
    if key == "fast":
        checks = _fast_checks()
    elif key == "full":
        checks = _full_checks()
    else:
        raise ValueError(f"unknown verify level: {level!r}; use fast or full")
    if only is not None:
        wanted = set(only)
        checks = [c for c in checks if c[0] in wanted]

    results = []
    t_start = time.perf_counter()
    for name, fn in checks:
        t0 = time.perf_counter()
        try:
            detail = fn()
            results.append(CheckResult(name, True, detail,
                                       time.perf_counter() - t0))
        except Exception as exc:
            results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}",
                                       time.perf_counter() - t0))
    return VerifyReport(key, results, time.perf_counter() - t_start)
