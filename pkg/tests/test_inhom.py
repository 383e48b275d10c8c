"""Inhomogeneous T-Q pipeline: root finding, reconstruction, charges."""

import cmath
import math

import numpy as np
import pytest

from twistbethe.baes import (
    SolverSettings,
    bae_relative_residual,
    charge_from_roots,
    energy_inhom,
    inhom_contribution,
    solve_inhom_baes,
    tq_eigenvalue,
)
from twistbethe.model import (
    ModelParams,
    build_hamiltonian,
    ed_spectrum,
    ground_space,
    transfer_matrix,
)

ETA = 2.0


def _solve(N, eta=ETA):
    params = ModelParams(N, eta, "anti")
    return params, solve_inhom_baes(params)


def test_two_site_closed_form():
    # the two-site twisted chain is 2 sx.sx with ground energy -2
    params, roots = _solve(2)
    assert energy_inhom(roots, params) == pytest.approx(-2.0, abs=1e-10)


def test_energy_matches_ed():
    for N in (3, 4, 5, 6):
        params, roots = _solve(N)
        e = energy_inhom(roots, params)
        ed = ed_spectrum(build_hamiltonian(params), 1).eigenvalues[0]
        assert e == pytest.approx(ed, abs=1e-10)
        assert roots.residual < 1e-9


def test_eigenvalue_reconstruction():
    rng = np.random.default_rng(12)
    for N in (3, 4, 6):
        params, roots = _solve(N)
        gs = ground_space(params)
        v = gs.branch_vector(1j if N % 2 == 0 else 1.0)
        for u in rng.uniform(-0.8, 0.8, 4) + 1j * rng.uniform(-0.6, 0.6, 4):
            t_u = transfer_matrix(complex(u), params)
            lam_ed = np.vdot(v, t_u.matvec(v))
            lam_tq = tq_eigenvalue(complex(u), roots)
            assert abs(lam_ed - lam_tq) <= 1e-10 * max(abs(lam_ed), 1.0)


def test_root_count_and_residual_definition():
    params, roots = _solve(5)
    assert roots.lam.shape == (5,)
    assert bae_relative_residual(roots.lam, 5, ETA) == pytest.approx(
        roots.residual, rel=1e-6)
    # imaginary parts live on the principal strip
    assert np.all(np.abs(roots.lam.imag) <= math.pi / 2 + 1e-12)


def test_sum_scalar_consistency():
    # the scalar entering the extra term is exp(-sum of roots)
    params, roots = _solve(4)
    assert roots.sum_scalar == pytest.approx(
        cmath.exp(-roots.root_sum), abs=1e-10)


def test_contribution_signs():
    assert inhom_contribution(8, ETA, "Energy") > 0
    assert inhom_contribution(7, ETA, "Energy") < 0


def test_contribution_momentum_even():
    # reduced momentum deviates from the exact doublet branch by a pure
    # imaginary defect with a fixed sign that decays with N
    vals = [complex(inhom_contribution(N, ETA, "Momentum")) for N in (4, 6, 8)]
    for v in vals:
        assert abs(v.real) < 1e-12
        assert v.imag < 0
    mags = [abs(v.imag) for v in vals]
    assert mags == sorted(mags, reverse=True)


def test_contribution_exact_zeros_odd():
    for N in (5, 7, 9):
        assert inhom_contribution(N, ETA, "Momentum") == 0
        assert inhom_contribution(N, ETA, "ChargeH2") == 0


def test_contribution_h2_even():
    vals = [inhom_contribution(N, ETA, "ChargeH2") for N in (4, 6, 8)]
    assert all(v < 0 for v in vals)
    mags = [abs(v) for v in vals]
    assert mags == sorted(mags, reverse=True)


def test_momentum_from_inhom_roots_on_doublet_branch():
    for N, expected in ((4, math.pi / 2), (5, (0.0, math.pi))):
        params, roots = _solve(N)
        p = charge_from_roots("Momentum", roots)
        assert abs(p.real) < 1e-9
        if N % 2 == 0:
            assert abs(abs(p.imag) - math.pi / 2) < 1e-9
        else:
            assert min(abs(p.imag), abs(abs(p.imag) - math.pi)) < 1e-9


def test_rejects_unsupported_inputs():
    with pytest.raises(ValueError):
        solve_inhom_baes(ModelParams(4, ETA, "per"))
    with pytest.raises(ValueError):
        solve_inhom_baes(ModelParams(4, ETA, "anti", theta=(0.1, 0, 0, 0)))
    with pytest.raises(ValueError):
        solve_inhom_baes(ModelParams(14, ETA, "anti"))
    with pytest.raises(ValueError):
        inhom_contribution(22, ETA, "Energy")
    with pytest.raises(ValueError):
        inhom_contribution(8, ETA, "Spin")


def test_other_anisotropy():
    params = ModelParams(4, 1.2, "anti")
    roots = solve_inhom_baes(params)
    e = energy_inhom(roots, params)
    ed = ed_spectrum(build_hamiltonian(params), 1).eigenvalues[0]
    assert e == pytest.approx(ed, abs=1e-9)
