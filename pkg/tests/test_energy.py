"""Teager energy operators, the Lie bracket, and envelope variances."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syncenergy.energy import (
    EDGE_WIDTH,
    conditional_variance,
    lie_bracket,
    teo_complex,
    teo_discrete_kaiser,
    teo_real,
)
from syncenergy.signals import ParkSeries, TimeGrid

GRID = TimeGrid(0.0, 1e-3, 2001)
T = GRID.times()


# ---------------------------------------------------------------- teo_real

def test_teo_sinusoid_is_constant_on_interior():
    """psi(A cos wt) is exactly flat: the discrete value is A^2 (sin(w dt)/dt)^2."""
    a, w = 1.5, 4.0
    psi = teo_real(a * np.cos(w * T), GRID)
    inner = psi.interior()
    expected = a * a * (np.sin(w * GRID.dt) / GRID.dt) ** 2
    np.testing.assert_allclose(inner, expected, rtol=1e-10)
    np.testing.assert_allclose(inner, a * a * w * w, rtol=1e-5)


def test_teo_sinusoid_phase_invariant():
    base = teo_real(np.cos(3.0 * T), GRID).interior()
    shifted = teo_real(np.cos(3.0 * T + 1.234), GRID).interior()
    np.testing.assert_allclose(base, shifted, rtol=1e-9)


def test_teo_exponential_vanishes_on_interior():
    """Pure exponentials carry no oscillation energy; the discrete form cancels too."""
    for alpha in (0.5, 1.0, 5.0):
        psi = teo_real(np.exp(-alpha * T), GRID)
        assert np.max(np.abs(psi.interior())) < 1e-9


def test_teo_growing_exponential_also_vanishes():
    psi = teo_real(np.exp(0.8 * T), GRID)
    scale = np.exp(2.0 * 0.8 * T[2:-2])
    assert np.max(np.abs(psi.interior()) / scale) < 1e-9


def test_teo_interior_mask_marks_edges():
    psi = teo_real(np.cos(T), GRID)
    mask = psi.interior_mask()
    assert not mask[:EDGE_WIDTH].any() and not mask[-EDGE_WIDTH:].any()
    assert mask[EDGE_WIDTH:-EDGE_WIDTH].all()
    assert psi.interior().size == GRID.n - 2 * EDGE_WIDTH


def test_teo_requires_five_samples():
    g = TimeGrid(0.0, 1.0, 4)
    with pytest.raises(ValueError, match="at least 5"):
        teo_real(np.ones(4), g)


# ----------------------------------------------------- teo_discrete_kaiser

def test_kaiser_frozen_quadratic():
    """On the squares k^2 the three-point form gives 2 k^2 - 1 pointwise."""
    out = teo_discrete_kaiser([0.0, 1.0, 4.0, 9.0, 16.0])
    np.testing.assert_array_equal(out, [1.0, 1.0, 7.0, 17.0, 17.0])


def test_kaiser_sinusoid_matches_closed_form():
    a, w = 2.0, 5.0
    out = teo_discrete_kaiser(a * np.cos(w * T))
    expected = a * a * np.sin(w * GRID.dt) ** 2
    np.testing.assert_allclose(out[1:-1], expected, rtol=0, atol=1e-12)


def test_kaiser_scales_like_dt2_times_teo():
    x = np.cos(5.0 * T) + 0.3 * np.sin(2.0 * T)
    kaiser = teo_discrete_kaiser(x) / GRID.dt**2
    cont = teo_real(x, GRID).value
    np.testing.assert_allclose(kaiser[2:-2], cont[2:-2], rtol=1e-4)


def test_kaiser_rejects_short_input():
    with pytest.raises(ValueError, match=">= 3"):
        teo_discrete_kaiser([1.0, 2.0])


# ------------------------------------------------------------- lie_bracket

def test_bracket_of_signal_with_its_derivative_is_teo():
    from syncenergy.signals import differentiate

    x = np.cos(3.0 * T) * (1.0 + 0.1 * T)
    xd = differentiate(x, GRID)
    np.testing.assert_array_equal(lie_bracket(x, xd, GRID), teo_real(x, GRID).value)


@settings(deadline=None, max_examples=30)
@given(
    st.floats(min_value=0.5, max_value=5.0),
    st.floats(min_value=0.5, max_value=5.0),
    st.floats(min_value=0.0, max_value=6.28),
)
def test_bracket_is_antisymmetric(w1, w2, phase):
    x = np.cos(w1 * T)
    y = np.sin(w2 * T + phase)
    np.testing.assert_array_equal(lie_bracket(x, y, GRID), -lie_bracket(y, x, GRID))


def test_bracket_of_independent_oscillations_frozen_form():
    """[cos w1 t, cos w2 t] has the closed form from the product rule."""
    w1, w2 = 2.0, 3.0
    out = lie_bracket(np.cos(w1 * T), np.cos(w2 * T), GRID)
    s1 = np.sin(w1 * GRID.dt) / GRID.dt
    s2 = np.sin(w2 * GRID.dt) / GRID.dt
    expected = -s1 * np.sin(w1 * T) * np.cos(w2 * T) + s2 * np.cos(w1 * T) * np.sin(w2 * T)
    np.testing.assert_allclose(out[1:-1], expected[1:-1], rtol=0, atol=1e-10)


# ------------------------------------------------------------- teo_complex

def test_complex_teo_equals_component_sum():
    d = np.cos(2.0 * T) + 0.4 * np.cos(5.0 * T + 0.7)
    q = np.sin(3.0 * T) - 0.2 * np.cos(1.0 * T)
    x = ParkSeries(GRID, d, q)
    combined = teo_complex(x).value
    split = teo_real(d, GRID).value + teo_real(q, GRID).value
    np.testing.assert_allclose(combined, split, rtol=0, atol=1e-12)


def test_complex_teo_of_rotating_phasor():
    """A constant-amplitude rotation carries psi_c = 2 a^2 w^2."""
    a, w = 1.2, 3.0
    x = ParkSeries.from_complex(GRID, a * np.exp(1j * w * T))
    psi = teo_complex(x).interior()
    np.testing.assert_allclose(psi, 2.0 * a * a * w * w, rtol=1e-5)


def test_complex_teo_of_constant_vector_is_zero():
    """Exact zeros on the interior; the one-sided edge stencils may keep
    representation residue of order 1e-13."""
    x = ParkSeries(GRID, np.full(GRID.n, 0.7), np.full(GRID.n, -0.2))
    np.testing.assert_array_equal(teo_complex(x).interior(), 0.0)


# ---------------------------------------------------- conditional_variance

def test_variance_gaussian_envelope_is_constant_half_rate():
    for alpha in (0.5, 1.0, 2.0):
        cv = conditional_variance(np.exp(-0.5 * alpha * T * T), GRID)
        np.testing.assert_allclose(cv.interior(), alpha / 2.0, rtol=1e-4)
        assert cv.valid.all()


def test_variance_exponential_envelope_is_zero():
    for alpha in (0.5, 1.0, 5.0):
        cv = conditional_variance(np.exp(-alpha * T), GRID)
        assert np.max(np.abs(cv.interior())) < 1e-8


def test_variance_growing_gaussian_is_negative():
    """The sign flips for an envelope curving away from zero."""
    cv = conditional_variance(np.exp(0.5 * 1.0 * T * T), GRID)
    np.testing.assert_allclose(cv.interior(), -0.5, rtol=1e-4)


def test_variance_flags_tiny_envelope_but_stays_finite():
    a = np.full(GRID.n, 2.0)
    a[100:120] = 0.0
    cv = conditional_variance(a, GRID)
    assert not cv.valid[100:120].any()
    assert cv.valid[:100].all() and cv.valid[120:].all()
    assert np.isfinite(cv.value).all()


def test_variance_requires_five_samples():
    with pytest.raises(ValueError, match="at least 5"):
        conditional_variance(np.ones(3), TimeGrid(0.0, 1.0, 3))
