"""Teager energy operators and amplitude-variance measures.

The Teager energy operator (TEO) of a real signal,

    psi(x) = (dx/dt)^2 - x d2x/dt2,

tracks the energy of the harmonic oscillator that would generate x: for
x = A cos(omega t) it returns the constant A^2 omega^2, and for a pure
exponential x = e^{-alpha t} it returns exactly zero.  It extends to a
complex signal xbar = x_d + j x_q as

    psi_c(xbar) = |dxbar/dt|^2 - Re(d2xbar/dt2 conj(xbar)),

which equals psi(x_d) + psi(x_q) sample by sample when both sides use the
same differentiation scheme.  The TEO is the diagonal case of the Lie
bracket [x, y] = (dx/dt) y - x (dy/dt), i.e. psi(x) = [x, dx/dt].

A related second-order quantity is the conditional variance of the
instantaneous frequency given time for a signal with envelope a(t):

    var_omega(a) = 0.5 [ (da/dt / a)^2 - (d2a/dt2) / a ].

It vanishes for exponential envelopes, equals alpha / 2 for the Gaussian
envelope e^{-alpha t^2 / 2}, and can be negative: the sign distinguishes
envelope shapes, so it is reported as is.

All derivatives come from :func:`syncenergy.signals.differentiate`.  The
one-sided boundary stencils compose less accurately than the interior
ones, so the first and last two samples of every operator output are
"edge" samples; comparisons against analytic values should use
``interior()`` views.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signals import EPS_MAG, ParkSeries, TimeGrid, _as_series, differentiate

# samples at each end whose value rests on composed one-sided stencils
EDGE_WIDTH = 2


@dataclass
class TeoSeries:
    """TEO samples on a grid, with the boundary samples marked as edge."""

    grid: TimeGrid
    value: np.ndarray

    def __post_init__(self) -> None:
        self.value = _as_series(self.value, self.grid.n, "value")

    def interior(self) -> np.ndarray:
        """Samples unaffected by boundary stencils."""
        return self.value[EDGE_WIDTH:-EDGE_WIDTH]

    def interior_mask(self) -> np.ndarray:
        mask = np.zeros(self.grid.n, dtype=bool)
        mask[EDGE_WIDTH:-EDGE_WIDTH] = True
        return mask


@dataclass
class ConditionalVarianceSeries:
    """Conditional frequency variance of an envelope, with validity mask."""

    grid: TimeGrid
    value: np.ndarray
    valid: np.ndarray

    def __post_init__(self) -> None:
        self.value = _as_series(self.value, self.grid.n, "value")
        self.valid = np.asarray(self.valid, dtype=bool)
        if self.valid.shape != (self.grid.n,):
            raise ValueError("valid mask shape does not match grid")

    def interior(self) -> np.ndarray:
        return self.value[EDGE_WIDTH:-EDGE_WIDTH]


def _require_min_samples(n: int, who: str) -> None:
    if n < 5:
        raise ValueError(f"{who} needs at least 5 samples, got {n}")


def teo_real(x, grid: TimeGrid) -> TeoSeries:
    """Teager energy operator of a real sampled signal.

    The second derivative is obtained by differentiating twice with the
    same stencil, which makes several discrete identities exact: psi of a
    sampled exponential vanishes to round-off on interior samples, and psi
    of a sampled sinusoid is constant there.

    Parameters
    ----------
    x : array-like
        Real samples on ``grid`` (at least 5).
    grid : TimeGrid

    Returns
    -------
    TeoSeries
    """
    _require_min_samples(grid.n, "teo_real")
    x = _as_series(x, grid.n, "x")
    xd = differentiate(x, grid)
    xdd = differentiate(xd, grid)
    return TeoSeries(grid, xd * xd - x * xdd)


def teo_discrete_kaiser(x) -> np.ndarray:
    """Three-point sample-domain TEO: y[k] = x[k]^2 - x[k-1] x[k+1].

    Operates directly on samples without a grid; the result approximates
    dt^2 times :func:`teo_real` on smooth signals.  Endpoints copy the
    nearest interior value.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 3:
        raise ValueError("teo_discrete_kaiser expects a 1-D sequence of >= 3 samples")
    out = np.empty_like(x)
    out[1:-1] = x[1:-1] * x[1:-1] - x[:-2] * x[2:]
    out[0] = out[1]
    out[-1] = out[-2]
    return out


def lie_bracket(x, y, grid: TimeGrid) -> np.ndarray:
    """Derivative bracket [x, y] = (dx/dt) y - x (dy/dt).

    Antisymmetric in its arguments; [x, dx/dt] reproduces the TEO of x
    exactly under the shared differentiation scheme.
    """
    x = _as_series(x, grid.n, "x")
    y = _as_series(y, grid.n, "y")
    return differentiate(x, grid) * y - x * differentiate(y, grid)


def teo_complex(x: ParkSeries) -> TeoSeries:
    """Complex TEO psi_c(xbar) = |dxbar/dt|^2 - Re(d2xbar/dt2 conj(xbar)).

    Decomposes as psi(x_d) + psi(x_q) up to floating-point association,
    since both components are differentiated with the same stencils.
    """
    _require_min_samples(x.grid.n, "teo_complex")
    dd = differentiate(x.d, x.grid)
    qd = differentiate(x.q, x.grid)
    ddd = differentiate(dd, x.grid)
    qdd = differentiate(qd, x.grid)
    value = (dd * dd + qd * qd) - (ddd * x.d + qdd * x.q)
    return TeoSeries(x.grid, value)


def conditional_variance(a, grid: TimeGrid) -> ConditionalVarianceSeries:
    """Conditional frequency variance 0.5 [ (a'/a)^2 - a''/a ] of an envelope.

    Samples with ``a <= EPS_MAG`` are flagged invalid; the envelope is
    clamped there before dividing, so the output stays finite everywhere.
    The value may legitimately be negative (growing envelopes).

    Parameters
    ----------
    a : array-like
        Envelope samples on ``grid`` (at least 5), expected positive.
    grid : TimeGrid

    Returns
    -------
    ConditionalVarianceSeries
    """
    _require_min_samples(grid.n, "conditional_variance")
    a = _as_series(a, grid.n, "a")
    valid = a > EPS_MAG
    safe = np.maximum(a, EPS_MAG)
    ad = differentiate(a, grid)
    add = differentiate(ad, grid)
    ratio = ad / safe
    value = 0.5 * (ratio * ratio - add / safe)
    return ConditionalVarianceSeries(grid, value, valid)
