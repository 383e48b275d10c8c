"""Finite-size scaling fits: power and exponential laws, optional offset.

Supported laws, with size N and parameters (a, b) or (a, b, c):

    power         value = a * N**b
    power-offset  value = a * N**b + c
    exp           value = a * exp(b*N)
    exp-offset    value = a * exp(b*N) + c

No-offset kinds reduce to exact linear regression in log space.  Offset
kinds run Levenberg-Marquardt least squares seeded from a grid of offset
candidates, which avoids the local-minimum trap of three-parameter
exponential fits.  ``extrapolate`` reads off the N -> infinity asymptote
of a converged fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

__all__ = [
    "Sample",
    "FitResult",
    "FitError",
    "fit",
    "extrapolate",
    "fit_with_window",
]

_KINDS = ("power", "power-offset", "exp", "exp-offset")


def _coerce_kind(kind) -> str:
    key = str(kind).strip().lower().replace("_", "-").replace(" ", "-")
    if key == "poweroffset":
        key = "power-offset"
    elif key == "expoffset":
        key = "exp-offset"
    if key not in _KINDS:
        raise ValueError(f"unknown fit kind: {kind!r}; expected one of {_KINDS}")
    return key


def _has_offset(kind: str) -> bool:
    return kind.endswith("-offset")


@dataclass(frozen=True)
class Sample:
    """One data point of a finite-size law."""

    N: int
    value: float

    def __post_init__(self):
        if int(self.N) < 2:
            raise ValueError("sample size N must be >= 2")
        if not math.isfinite(self.value):
            raise ValueError("sample value must be finite")


@dataclass(frozen=True)
class FitResult:
    """Converged parameters of a scaling law; c is None for no-offset kinds."""

    kind: str
    a: float
    b: float
    c: float | None
    rms_residual: float
    n_points: int

    def predict(self, N):
        """Model value at size N; accepts scalars or arrays."""
        N_arr = np.asarray(N, dtype=float)
        if self.kind.startswith("power"):
            val = self.a * N_arr ** self.b
        else:
            val = self.a * np.exp(self.b * N_arr)
        if self.c is not None:
            val = val + self.c
        return val if val.ndim else float(val)


class FitError(RuntimeError):
    """Nonlinear fit did not converge; ``iterate`` holds the best point found."""

    def __init__(self, message: str, iterate=None):
        super().__init__(message)
        self.iterate = iterate


def _coerce_samples(samples):
    Ns, vals = [], []
    for s in samples:
        if isinstance(s, Sample):
            Ns.append(int(s.N))
            vals.append(float(s.value))
        else:
            n, v = s
            Ns.append(int(n))
            vals.append(float(v))
    Ns = np.asarray(Ns, dtype=float)
    vals = np.asarray(vals, dtype=float)
    if np.any(Ns < 2):
        raise ValueError("sample sizes must be >= 2")
    if not np.all(np.isfinite(vals)):
        raise ValueError("sample values must be finite")
    order = np.argsort(Ns)
    return Ns[order], vals[order]


def _log_linear(kind: str, Ns, vals):
    """Exact log-space regression for a*N**b or a*exp(b*N); single-signed data."""
    pos, neg = np.all(vals > 0), np.all(vals < 0)
    if not (pos or neg):
        raise ValueError(
            "sign-mixed data cannot be log-linearized; use an offset kind")
    sign = 1.0 if pos else -1.0
    x = np.log(Ns) if kind.startswith("power") else Ns
    y = np.log(np.abs(vals))
    b, log_a = np.polyfit(x, y, 1)
    return sign * math.exp(log_a), float(b)


def _residual_fn(kind: str, Ns, vals):
    if kind.startswith("power"):
        def fun(p):
            return p[0] * Ns ** p[1] + p[2] - vals
    else:
        def fun(p):
            return p[0] * np.exp(p[1] * Ns) + p[2] - vals
    return fun


def _fit_offset(kind: str, Ns, vals):
    """Grid of offset candidates, each polished by Levenberg-Marquardt."""
    vmin, vmax = float(np.min(vals)), float(np.max(vals))
    spread = vmax - vmin
    if spread == 0.0:
        raise ValueError("constant data leaves the law parameters undetermined")
    grid = np.linspace(vmin - spread, vmax + spread, 50)
    fun = _residual_fn(kind, Ns, vals)

    best = None
    for c0 in grid:
        shifted = vals - c0
        if not (np.all(shifted > 0) or np.all(shifted < 0)):
            continue
        try:
            a0, b0 = _log_linear(kind.split("-")[0], Ns, shifted)
        except (ValueError, OverflowError):
            continue
        with np.errstate(over="ignore", invalid="ignore"):
            sol = least_squares(fun, x0=[a0, b0, c0], method="lm",
                                xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                max_nfev=20000)
        if not np.all(np.isfinite(sol.x)):
            continue
        if best is None or sol.cost < best.cost:
            best = sol
    if best is None:
        raise FitError("no offset candidate yields a single-signed seed",
                       iterate=None)
    # restart once from the winner; polishes stragglers at no real cost
    with np.errstate(over="ignore", invalid="ignore"):
        again = least_squares(fun, x0=best.x, method="lm",
                              xtol=1e-15, ftol=1e-15, gtol=1e-15,
                              max_nfev=20000)
    if again.cost <= best.cost and np.all(np.isfinite(again.x)):
        best = again
    if not best.success:
        raise FitError(f"offset fit stalled: {best.message}",
                       iterate=tuple(best.x))
    a, b, c = best.x
    return float(a), float(b), float(c)


def fit(kind, samples) -> FitResult:
    """Fit a scaling law to (N, value) samples.

    Parameters
    ----------
    kind : {'power', 'power-offset', 'exp', 'exp-offset'}
        Law to fit; underscores and CamelCase spellings are accepted.
    samples : iterable of Sample or (N, value) pairs

    Returns
    -------
    FitResult

    Raises
    ------
    ValueError
        Too few points, or sign-mixed data for a no-offset kind.
    FitError
        The nonlinear engine did not converge; carries its last iterate.
    """
    kind = _coerce_kind(kind)
    Ns, vals = _coerce_samples(samples)
    n_free = 3 if _has_offset(kind) else 2
    if len(Ns) < n_free + 1:
        raise ValueError(f"{kind} fit needs at least {n_free + 1} points")

    if _has_offset(kind):
        a, b, c = _fit_offset(kind, Ns, vals)
    else:
        a, b = _log_linear(kind, Ns, vals)
        c = None

    result = FitResult(kind, float(a), float(b), c, 0.0, len(Ns))
    resid = result.predict(Ns) - vals
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return FitResult(kind, float(a), float(b), c, rms, len(Ns))


def extrapolate(fit_result: FitResult) -> float:
    """N -> infinity limit of a fitted law: c for offset kinds, else 0."""
    if fit_result.b >= 0:
        raise ValueError(
            f"b = {fit_result.b:.6g} >= 0: the law has no large-N asymptote")
    if fit_result.c is not None:
        return float(fit_result.c)
    return 0.0


def fit_with_window(kind, samples, max_drops: int = 3):
    """Fit with the small-N window policy.

    The smallest size is excluded while its deleted residual (its deviation
    from the law fitted to the remaining points) exceeds 3x that fit's rms:
    small sizes carry subleading corrections outside the fitted law, and a
    flexible offset law fitted to all points would bend through such a
    point instead of exposing it.  At most ``max_drops`` sizes are removed,
    never going below the minimum point count.

    Returns ``(FitResult, samples_used)``.
    """
    kind = _coerce_kind(kind)
    Ns, vals = _coerce_samples(samples)
    n_free = 3 if _has_offset(kind) else 2
    floor = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
    drops = 0
    while drops < max_drops and len(Ns) > n_free + 1:
        rest = fit(kind, list(zip(Ns[1:], vals[1:])))
        deleted = rest.predict(Ns[0]) - vals[0]
        if abs(deleted) <= 3.0 * max(rest.rms_residual, floor):
            break
        Ns, vals = Ns[1:], vals[1:]
        drops += 1
    pairs = [Sample(int(n), float(v)) for n, v in zip(Ns, vals)]
    return fit(kind, pairs), pairs
