"""Dormand-Prince 5(4) Runge-Kutta stepping.

Two entry points: an adaptive integrator for small systems held as Python
floats (fast for the scalar shooting problems), and a fixed-step vectorized
step for many independent short integrations at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NoConverge

C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

ORDER = 5


class GuardExceeded(Exception):
    """Raised internally when the guard callback rejects a state."""

    def __init__(self, t: float, state: Sequence[float]):
        self.t = t
        self.state = tuple(state)
        super().__init__(t)


@dataclass
class Trajectory:
    """States recorded at requested output times."""

    times: list[float]
    states: list[tuple[float, ...]]
    n_steps: int


def _combine(y, h, ks, coeffs):
    out = []
    for i, yi in enumerate(y):
        acc = 0.0
        for k, c in zip(ks, coeffs):
            if c:
                acc += c * k[i]
        out.append(yi + h * acc)
    return out


def dp5_step(f: Callable, t: float, y: Sequence[float], h: float, k1=None):
    """One Dormand-Prince step on a small system of Python floats.

    Returns
    -------
    y_new, error_vector, k7
        ``k7`` is the derivative at the new point (first-same-as-last).
    """
    if k1 is None:
        k1 = f(t, y)
    k2 = f(t + C2 * h, _combine(y, h, [k1], [A21]))
    k3 = f(t + C3 * h, _combine(y, h, [k1, k2], [A31, A32]))
    k4 = f(t + C4 * h, _combine(y, h, [k1, k2, k3], [A41, A42, A43]))
    k5 = f(t + C5 * h, _combine(y, h, [k1, k2, k3, k4], [A51, A52, A53, A54]))
    k6 = f(t + h, _combine(y, h, [k1, k2, k3, k4, k5], [A61, A62, A63, A64, A65]))
    y_new = _combine(y, h, [k1, k3, k4, k5, k6], [B1, B3, B4, B5, B6])
    k7 = f(t + h, y_new)
    err = [
        h * (E1 * a + E3 * c + E4 * d + E5 * e + E6 * g + E7 * k)
        for a, c, d, e, g, k in zip(k1, k3, k4, k5, k6, k7)
    ]
    return y_new, err, k7


def integrate(
    f: Callable,
    t0: float,
    y0: Sequence[float],
    t_end: float,
    *,
    rtol: float = 1e-10,
    atol: float = 1e-14,
    h_init: float = 1e-3,
    h_max: float = np.inf,
    out_times: Sequence[float] | None = None,
    guard: Callable[[float, Sequence[float]], bool] | None = None,
    stop: Callable[[float, Sequence[float]], bool] | None = None,
    fixed_step: float | None = None,
    h_min: float = 1e-13,
) -> Trajectory:
    """Integrate ``y' = f(t, y)`` from ``t0`` to ``t_end``.

    Parameters
    ----------
    f : callable
        Right-hand side taking ``(t, list_of_floats)`` and returning a list.
    out_times : sequence of float, optional
        Monotone output times between ``t0`` and ``t_end``. Steps are
        clamped so that every output time is hit exactly.
    guard : callable, optional
        Returns False for states that must abort the run; raises
        :class:`GuardExceeded`.
    stop : callable, optional
        Returns True to end the run successfully at the current state.
    fixed_step : float, optional
        Use constant steps of this magnitude (no error control). The span
        must be an integer multiple of the step up to rounding.

    Returns
    -------
    Trajectory
        States at ``out_times`` (or only the final state).
    """
    direction = 1.0 if t_end >= t0 else -1.0
    span = abs(t_end - t0)
    targets = list(out_times) if out_times is not None else [t_end]
    times: list[float] = []
    states: list[tuple[float, ...]] = []
    t = float(t0)
    y = [float(v) for v in y0]
    idx = 0
    while idx < len(targets) and direction * (targets[idx] - t) <= 0.0:
        times.append(targets[idx])
        states.append(tuple(y))
        idx += 1
    if span == 0.0 or idx == len(targets):
        return Trajectory(times, states, 0)

    k1 = f(t, y)
    n_steps = 0
    if fixed_step is not None:
        h_abs = abs(fixed_step)
    else:
        h_abs = min(abs(h_init), h_max, span)
    while idx < len(targets):
        target = targets[idx]
        remaining = direction * (target - t)
        hit = False
        if fixed_step is not None:
            if remaining <= h_abs * (1.0 + 1e-9):
                h_try, hit = remaining, True
            else:
                h_try = h_abs
        elif h_abs >= remaining:
            h_try, hit = remaining, True
        else:
            h_try = h_abs
        h = direction * h_try
        y_new, err, k7 = dp5_step(f, t, y, h, k1)
        if fixed_step is None:
            enorm = 0.0
            for yi, yn, e in zip(y, y_new, err):
                sc = atol + rtol * max(abs(yi), abs(yn))
                enorm = max(enorm, abs(e) / sc)
            if not np.isfinite(enorm):
                enorm = 1e10
            if enorm > 1.0:
                h_abs = h_try * max(0.2, 0.9 * enorm ** -0.2)
                if h_abs < h_min:
                    raise NoConverge(f"step size underflow at t = {t:.17g}")
                continue
            grow = 5.0 if enorm == 0.0 else min(5.0, max(0.2, 0.9 * enorm ** -0.2))
            h_next = min(h_try * grow, h_max)
        n_steps += 1
        t = target if hit else t + h
        y = y_new
        k1 = k7
        if guard is not None and not guard(t, y):
            raise GuardExceeded(t, y)
        if hit:
            times.append(t)
            states.append(tuple(y))
            idx += 1
        if stop is not None and stop(t, y):
            if not hit:
                times.append(t)
                states.append(tuple(y))
            break
        if fixed_step is None:
            # keep the pre-clamp step so output clamping does not shrink steps
            h_abs = max(h_next, h_abs if hit else 0.0)
            h_abs = min(h_abs, h_max)
    return Trajectory(times, states, n_steps)


def dp5_step_vec(f: Callable, t: np.ndarray, y: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Vectorized fixed Dormand-Prince step.

    ``y`` has shape ``(m, n_points)`` and ``t``, ``h`` broadcast against the
    point axis; every point advances with its own step.
    """
    k1 = f(t, y)
    k2 = f(t + C2 * h, y + h * (A21 * k1))
    k3 = f(t + C3 * h, y + h * (A31 * k1 + A32 * k2))
    k4 = f(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3))
    k5 = f(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
    k6 = f(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
    return y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
