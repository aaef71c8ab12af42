"""Classical fixed-step fourth-order Runge-Kutta on small state tuples.

States are plain tuples of floats rather than arrays: the systems
integrated here have two states, and per-step array overhead would
dominate the run time of long simulations.
"""

from __future__ import annotations

from typing import Callable, Tuple

State = Tuple[float, ...]


def rk4_step(f: Callable[[float, State], State], t: float, y: State, dt: float) -> State:
    """Advance y' = f(t, y) by one step of size dt.

    ``f`` must return a tuple of the same length as ``y``.  The classical
    tableau is used: local truncation error O(dt^5).
    """
    half = 0.5 * dt
    k1 = f(t, y)
    k2 = f(t + half, tuple(yi + half * ki for yi, ki in zip(y, k1)))
    k3 = f(t + half, tuple(yi + half * ki for yi, ki in zip(y, k2)))
    k4 = f(t + dt, tuple(yi + dt * ki for yi, ki in zip(y, k3)))
    sixth = dt / 6.0
    return tuple(
        yi + sixth * (a + 2.0 * (b + c) + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    )
