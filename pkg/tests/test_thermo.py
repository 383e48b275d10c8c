"""Thermodynamic-limit series: oracles, identities, guards."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from twistbethe.common import Boundary, Parity
from twistbethe.thermo import (
    XXX_LIMIT,
    SeriesSettings,
    density_fourier,
    e0_density,
    energy_via_density,
    excitation_gap_tl,
    ground_energy_tl,
    hole_energy,
    kernel_a,
    twisted_boundary_energy,
)

# frozen from an independent 40-digit evaluation of the defining series
E0_ETA2 = -4.023304650511254
EB_OVER_COSH_ETA2 = 1.0274615190603027
EB_OVER_COSH_ETA3 = 1.6135586287295256
GAP_OVER_COSH_ETA2 = 2.054923038120605
GAP_OVER_COSH_ETA3 = 3.227117257459051


def test_e0_density_frozen_value():
    assert e0_density(2.0) == pytest.approx(E0_ETA2, abs=1e-14)


def test_twisted_boundary_energy_values():
    assert twisted_boundary_energy(2.0, Parity.EVEN) / math.cosh(2.0) == pytest.approx(
        EB_OVER_COSH_ETA2, abs=1e-13)
    assert twisted_boundary_energy(3.0, Parity.EVEN) / math.cosh(3.0) == pytest.approx(
        EB_OVER_COSH_ETA3, abs=1e-13)
    assert twisted_boundary_energy(2.0, Parity.ODD) == pytest.approx(
        -twisted_boundary_energy(2.0, Parity.EVEN), abs=1e-15)


def test_gap_values():
    assert excitation_gap_tl(2.0, Parity.ODD) / math.cosh(2.0) == pytest.approx(
        GAP_OVER_COSH_ETA2, abs=1e-13)
    assert excitation_gap_tl(3.0, Parity.ODD) / math.cosh(3.0) == pytest.approx(
        GAP_OVER_COSH_ETA3, abs=1e-13)
    assert excitation_gap_tl(2.0, Parity.EVEN) == 0.0


def test_kernel_quadrature_normalization():
    # each kernel integrates to 1 over one Brillouin zone
    for eta in (0.7, 2.0):
        for m in (1, 2):
            val, err = quad(lambda x: kernel_a(m, x, eta),
                            -math.pi / eta, math.pi / eta, limit=200)
            assert val == pytest.approx(1.0, abs=1e-10)


def test_kernel_fourier_modes():
    # Fourier coefficients of a_m over the zone are e^{-m eta |k|}/(2 pi / ...)
    eta, m = 1.3, 1
    L = 2 * math.pi / eta
    for k in (0, 1, 3):
        re, _ = quad(lambda x: kernel_a(m, x, eta) * math.cos(k * eta * x),
                     -math.pi / eta, math.pi / eta, limit=200)
        assert re * L / (2 * math.pi / eta) == pytest.approx(
            math.exp(-m * eta * abs(k)), abs=1e-10)


def test_hole_energy_band_edge_equals_boundary_energy():
    for eta in (0.5, 1.0, 2.0, 3.0):
        assert hole_energy(math.pi / eta, eta) == pytest.approx(
            twisted_boundary_energy(eta, Parity.EVEN), abs=1e-13)


def test_hole_energy_window_and_shape():
    eta = 2.0
    with pytest.raises(ValueError):
        hole_energy(1.2 * math.pi / eta, eta)
    xs = np.linspace(-math.pi / eta, math.pi / eta, 41)
    vals = np.array([hole_energy(float(x), eta) for x in xs])
    assert np.all(vals > 0)
    assert vals.argmax() == 20            # maximum at x0 = 0
    assert np.all(np.diff(vals[:21]) > 0)  # rising toward the center
    assert np.all(np.diff(vals[20:]) < 0)  # falling toward the edge
    assert vals == pytest.approx(vals[::-1], abs=1e-13)  # even in x0


def test_hole_energy_minimal_at_band_edge():
    eta = 2.0
    edge = hole_energy(math.pi / eta, eta)
    interior = [hole_energy(x, eta) for x in np.linspace(0, math.pi / eta, 30)[:-1]]
    assert all(v > edge for v in interior)


def test_series_truncation_stability():
    # doubling the term budget does not move the sums
    tight = SeriesSettings(max_terms=400)
    loose = SeriesSettings(max_terms=200)
    for eta in (0.3, 1.0, 2.5):
        assert e0_density(eta, tight) == pytest.approx(
            e0_density(eta, loose), abs=1e-13)
        assert twisted_boundary_energy(eta, Parity.EVEN, tight) == pytest.approx(
            twisted_boundary_energy(eta, Parity.EVEN, loose), abs=1e-13)


def test_xxx_limit():
    eta = 1e-3
    assert e0_density(eta) / math.cosh(eta) == pytest.approx(
        XXX_LIMIT, abs=2e-3)
    assert XXX_LIMIT == pytest.approx(1.0 - 4.0 * math.log(2.0), abs=0)


def test_band_edge_hole_vanishes_at_small_eta():
    # exponentially small: compare on a grid above float noise (~1e-16)
    vals = [hole_energy(math.pi / eta, eta) for eta in (0.6, 0.45, 0.3, 0.2)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert abs(hole_energy(math.pi / 0.05, 0.05)) < 1e-3


def test_eta_guard():
    with pytest.raises(ValueError):
        e0_density(1e-6)
    with pytest.raises(ValueError):
        e0_density(-1.0)


def test_ground_energy_tl_tabulates_hole():
    eta, N = 2.0, 100
    e0 = e0_density(eta)
    eh = hole_energy(math.pi / eta, eta)
    assert ground_energy_tl(N, eta, Boundary.ANTIPERIODIC) == pytest.approx(
        N * e0 + eh, abs=1e-14)
    assert ground_energy_tl(N, eta, Boundary.PERIODIC) == pytest.approx(
        N * e0, abs=1e-14)
    assert ground_energy_tl(N + 1, eta, Boundary.ANTIPERIODIC) == pytest.approx(
        (N + 1) * e0, abs=1e-14)
    assert ground_energy_tl(N + 1, eta, Boundary.PERIODIC) == pytest.approx(
        (N + 1) * e0 + eh, abs=1e-14)


def test_parity_reversal_of_boundary_energy():
    for eta in (1.0, 2.0):
        e_b = twisted_boundary_energy(eta, Parity.EVEN)
        for N, sign in ((60, 1.0), (61, -1.0)):
            diff = (ground_energy_tl(N, eta, Boundary.ANTIPERIODIC)
                    - ground_energy_tl(N, eta, Boundary.PERIODIC))
            assert diff == pytest.approx(sign * e_b, abs=1e-13)


def test_density_fourier_case_guards():
    eta, N = 2.0, 10
    with pytest.raises(ValueError):
        density_fourier(0, N, eta, Boundary.ANTIPERIODIC)  # hole case needs x0
    with pytest.raises(ValueError):
        density_fourier(0, N + 1, eta, Boundary.ANTIPERIODIC, x0=0.1)


def test_density_fourier_energy_reconstruction():
    # summing the mode expansion against e^{-eta|k|} reproduces the
    # thermodynamic-limit table entries, hole and boundary terms included
    eta = 2.0
    for N, boundary in ((40, Boundary.ANTIPERIODIC), (41, Boundary.ANTIPERIODIC),
                        (40, Boundary.PERIODIC), (41, Boundary.PERIODIC)):
        has_hole = (boundary is Boundary.ANTIPERIODIC) == (N % 2 == 0)
        x0 = math.pi / eta if has_hole else None
        via_density = energy_via_density(N, eta, boundary, x0=x0)
        table = ground_energy_tl(N, eta, boundary)
        assert via_density == pytest.approx(table, abs=1e-10)
