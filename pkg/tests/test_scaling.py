"""Finite-size fit laws: recovery, equivariance, windowing, error paths."""

import numpy as np
import pytest
from scipy.optimize import least_squares

from twistbethe.scaling import (
    FitError,
    FitResult,
    Sample,
    extrapolate,
    fit,
    fit_with_window,
)

NS = np.array([4, 6, 8, 10, 12, 14, 16, 18], dtype=float)


def _samples(values):
    return [Sample(int(n), float(v)) for n, v in zip(NS, values)]


def test_power_recovery():
    r = fit("power", _samples(3.7 * NS ** -1.8))
    assert r.kind == "power"
    assert r.a == pytest.approx(3.7, abs=1e-10)
    assert r.b == pytest.approx(-1.8, abs=1e-10)
    assert r.c is None
    assert r.rms_residual < 1e-12


def test_power_recovery_negative_branch():
    r = fit("power", _samples(-2.1 * NS ** -0.9746))
    assert r.a == pytest.approx(-2.1, abs=1e-10)
    assert r.b == pytest.approx(-0.9746, abs=1e-10)


def test_power_offset_recovery():
    a, b, c = 1.028, -0.3787, 1.027
    r = fit("power-offset", _samples(a * NS ** b + c))
    assert r.a == pytest.approx(a, abs=1e-6)
    assert r.b == pytest.approx(b, abs=1e-6)
    assert r.c == pytest.approx(c, abs=1e-6)
    assert extrapolate(r) == pytest.approx(c, abs=1e-6)


def test_exp_recovery():
    a, b = 4.2, -0.33
    r = fit("exp", _samples(a * np.exp(b * NS)))
    assert r.a == pytest.approx(a, abs=1e-8)
    assert r.b == pytest.approx(b, abs=1e-8)
    assert extrapolate(r) == 0.0


def test_exp_offset_recovery():
    a, b, c = -0.55, -0.41, 1.0274615
    r = fit("exp-offset", _samples(a * np.exp(b * NS) + c))
    assert r.a == pytest.approx(a, abs=1e-6)
    assert r.b == pytest.approx(b, abs=1e-6)
    assert r.c == pytest.approx(c, abs=1e-6)


def test_kind_spelling_variants():
    vals = _samples(2.0 * NS ** -1.0 + 0.3)
    for kind in ("power-offset", "power_offset", "PowerOffset"):
        assert fit(kind, vals).kind == "power-offset"
    with pytest.raises(ValueError):
        fit("cubic", vals)


def test_scale_equivariance():
    vals = 3.7 * NS ** -1.8
    r1 = fit("power", _samples(vals))
    r2 = fit("power", _samples(137.0 * vals))
    assert r2.a == pytest.approx(137.0 * r1.a, rel=1e-10)
    assert r2.b == pytest.approx(r1.b, abs=1e-10)


def test_matches_direct_nonlinear_solver():
    # same law fitted by an unrelated parameterization must agree
    rng = np.random.default_rng(5)
    vals = 1.4 * NS ** -1.1 + 0.2 + 1e-9 * rng.standard_normal(NS.size)
    r = fit("power-offset", _samples(vals))

    def resid(p):
        return p[0] * NS ** p[1] + p[2] - vals

    direct = least_squares(resid, [1.0, -1.0, 0.0], xtol=1e-15, ftol=1e-15)
    assert r.a == pytest.approx(direct.x[0], abs=1e-7)
    assert r.b == pytest.approx(direct.x[1], abs=1e-7)
    assert r.c == pytest.approx(direct.x[2], abs=1e-7)


def test_local_minimum():
    # perturbing the returned parameters must not reduce the rms residual
    rng = np.random.default_rng(9)
    vals = 0.9 * NS ** -0.7 + 0.05 + 1e-4 * rng.standard_normal(NS.size)
    r = fit("power-offset", _samples(vals))

    def rms(a, b, c):
        return float(np.sqrt(np.mean((a * NS ** b + c - vals) ** 2)))

    base = rms(r.a, r.b, r.c)
    assert base == pytest.approx(r.rms_residual, rel=1e-8)
    for da, db, dc in ((1e-6, 0, 0), (0, 1e-6, 0), (0, 0, 1e-6),
                       (-1e-6, 0, 0), (0, -1e-6, 0), (0, 0, -1e-6)):
        assert rms(r.a + da, r.b + db, r.c + dc) >= base * (1 - 1e-9)


def test_predict_vectorized():
    r = fit("power", _samples(3.7 * NS ** -1.8))
    out = r.predict(NS)
    assert out.shape == NS.shape
    np.testing.assert_allclose(out, 3.7 * NS ** -1.8, rtol=1e-10)


def test_constant_data_has_no_limit():
    r = fit("power", _samples(np.full(NS.size, 1.0)))
    assert r.b == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        extrapolate(r)


def test_growing_law_rejected_for_extrapolation():
    r = fit("power", _samples(2.0 * NS ** 0.5))
    assert r.b > 0
    with pytest.raises(ValueError):
        extrapolate(r)


def test_sign_mixed_rejected():
    with pytest.raises((ValueError, FitError)):
        fit("power", [Sample(4, 1.0), Sample(6, -1.0), Sample(8, 0.5),
                      Sample(10, 0.2)])


def test_too_few_points():
    with pytest.raises(ValueError):
        fit("power", [Sample(4, 1.0), Sample(6, 0.5)])
    with pytest.raises(ValueError):
        fit("power-offset", [Sample(4, 1.0), Sample(6, 0.5), Sample(8, 0.3)])


def test_sample_validation():
    with pytest.raises(ValueError):
        Sample(1, 0.5)
    with pytest.raises(ValueError):
        Sample(4, float("nan"))


def test_window_drops_small_n_outlier():
    a, b, c = 1.0, -1.5, 0.5
    vals = a * NS ** b + c
    vals[0] += 0.2
    r, used = fit_with_window("power-offset", _samples(vals))
    assert len(used) == NS.size - 1
    assert min(s.N for s in used) == 6
    assert r.c == pytest.approx(c, abs=1e-8)


def test_window_keeps_clean_data():
    vals = 1.0 * NS ** -1.5 + 0.5
    r, used = fit_with_window("power-offset", _samples(vals))
    assert len(used) == NS.size
    assert r.c == pytest.approx(0.5, abs=1e-8)


def test_fit_result_predict_without_offset_kind_mismatch():
    r = FitResult(kind="exp", a=2.0, b=-0.5, c=None,
                  rms_residual=0.0, n_points=5)
    assert r.predict(4.0) == pytest.approx(2.0 * np.exp(-2.0))
