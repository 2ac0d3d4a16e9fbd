"""Angular profiles of (-1)-homogeneous axisymmetric no-swirl flows.

The reduced equation for the profile ``U(y)``, ``y = cos(theta)``, reads::

    (1 - y^2) U' + 2 y U + U^2 / 2 = c1 (1 - y) + c2 (1 + y) + c3 (1 - y^2)

with ``U(0) = gamma``. It is solved by shooting from ``y = 0`` toward both
poles in the variable ``xi = artanh(y)``, in which ``(1 - y^2) d/dy``
becomes ``d/dxi`` and the poles move to ``xi = +-inf``. Writing
``s = 1 - y`` and ``sigma = 1 + y`` (both evaluated from ``xi`` without
cancellation) and ``U = U* + delta`` with ``U*`` a root of the endpoint
quadratic of the current half, the equation becomes, on the right half::

    d delta / d xi = p1 s - c3 s^2 + 2 s U - (2 + U*) delta - delta^2 / 2

with ``p1 = c1 - c2 + 2 c3``, and on the left half::

    d delta / d xi = q1 sigma - c3 sigma^2 - 2 sigma U + (2 - U*) delta - delta^2 / 2

with ``q1 = c2 - c1 + 2 c3``. Alongside ``delta`` the solver carries
``N = (1 - y^2) U''``, which obeys::

    dN / d xi = -2 c3 (1 - y^2) - 2 G - G U' - U N

where ``G = dU/dxi = (1 - y^2) U'``. Keeping ``delta`` and ``N`` as state
variables preserves relative accuracy in ``U - U*``, ``U'`` and ``U''``
all the way down to ``1 - |y| ~ 1e-13``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _rk
from .errors import BlowUp, DomainError, NoConverge

S_MIN_DEFAULT = 1e-13
EPS_BL_DEFAULT = 1e-6
XI_CLAMP = 300.0
EXTREMAL_ACCEPT = 1e-5


# --------------------------------------------------------------------------
# parameter records
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HomParams:
    """Parameters ``(c1, c2, c3, gamma)`` of a homogeneous solution."""

    c1: float
    c2: float
    c3: float
    gamma: float = 0.0

    @property
    def c(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    def reflected(self) -> "HomParams":
        """Parameters of ``V(y) = -U(-y)``."""
        return HomParams(self.c2, self.c1, self.c3, -self.gamma)


class Classification(str, Enum):
    OUTSIDE_J = "outside_J"
    IN_J = "in_J"
    IN_M = "in_M"


class Branch(str, Enum):
    INTERIOR = "interior"
    PLUS_EXTREMAL = "plus_extremal"
    MINUS_EXTREMAL = "minus_extremal"


@dataclass(frozen=True)
class GammaRange:
    """Admissible interval ``[gamma_minus, gamma_plus]`` for fixed ``c``."""

    gamma_minus: float
    gamma_plus: float
    tol: float

    @property
    def width(self) -> float:
        return self.gamma_plus - self.gamma_minus

    def contains(self, gamma: float, strict: bool = True) -> bool:
        if strict:
            return self.gamma_minus < gamma < self.gamma_plus
        return self.gamma_minus <= gamma <= self.gamma_plus


@dataclass(frozen=True)
class ProfileGrid:
    """Resolution settings for :func:`solve_profile`.

    Parameters
    ----------
    spacing : float, optional
        Export node spacing in ``xi``. Defaults to 0.01, reduced when the
        endpoint decay rates ``2 sqrt(1 + c_i)`` exceed 4.
    s_min : float
        Smallest distance ``1 - |y|`` of an export node.
    eps_bl : float
        Boundary-layer width at which the endpoint branch is decided.
    fixed_step : bool
        Integrate with constant steps equal to ``spacing`` and no error
        control (used for order-of-accuracy checks).
    rtol, atol : float
        Error-control tolerances of the adaptive integrator.
    """

    spacing: float | None = None
    s_min: float = S_MIN_DEFAULT
    eps_bl: float = EPS_BL_DEFAULT
    fixed_step: bool = False
    rtol: float = 1e-12
    atol: float = 1e-16


@dataclass(frozen=True, eq=False)
class ThetaProfile:
    """Discretized profile with endpoint data and residual metadata.

    ``offsets`` hold ``U - endpoint_minus`` on nodes with ``xi < 0`` and
    ``U - endpoint_plus`` on nodes with ``xi >= 0``; ``second`` holds
    ``(1 - y^2) U''``. Nodes are uniform in ``xi`` with step ``spacing``.
    """

    nodes: np.ndarray
    u_values: np.ndarray
    du_values: np.ndarray
    endpoint_minus: float
    endpoint_plus: float
    params: HomParams
    max_residual: float
    xi: np.ndarray
    offsets: np.ndarray
    second: np.ndarray
    spacing: float
    gamma_effective: float
    extremal_minus: bool
    extremal_plus: bool
    meta: dict = field(default_factory=dict)

    @property
    def zero_index(self) -> int:
        return int(np.argmin(np.abs(self.xi)))

    @property
    def is_zero(self) -> bool:
        return bool(
            np.all(self.u_values == 0.0)
            and self.endpoint_minus == 0.0
            and self.endpoint_plus == 0.0
        )

    @property
    def branch(self) -> Branch:
        if self.extremal_minus:
            return Branch.PLUS_EXTREMAL
        if self.extremal_plus:
            return Branch.MINUS_EXTREMAL
        return Branch.INTERIOR


# --------------------------------------------------------------------------
# algebra of the endpoint data
# --------------------------------------------------------------------------


def cbar3(c1: float, c2: float) -> float:
    """Lower admissibility bound for ``c3``.

    ``-(a + b)(a + b + 2) / 2`` with ``a = sqrt(1 + c1)``, ``b = sqrt(1 + c2)``.
    """
    if c1 < -1 or c2 < -1:
        raise DomainError(f"cbar3 requires c1, c2 >= -1, got ({c1}, {c2})")
    a = math.sqrt(1.0 + c1)
    b = math.sqrt(1.0 + c2)
    return -0.5 * (a + b) * (a + b + 2.0)


def in_J(c: Sequence[float]) -> bool:
    c1, c2, c3 = c
    if c1 < -1 or c2 < -1:
        return False
    return c3 >= cbar3(c1, c2)


def left_roots(c1: float) -> tuple[float, float]:
    """Roots of ``U^2 - 4U - 4 c1 = 0`` as (attracting, extremal)."""
    r = math.sqrt(1.0 + c1)
    return 2.0 - 2.0 * r, 2.0 + 2.0 * r


def right_roots(c2: float) -> tuple[float, float]:
    """Roots of ``U^2 + 4U - 4 c2 = 0`` as (attracting, extremal)."""
    r = math.sqrt(1.0 + c2)
    return -2.0 + 2.0 * r, -2.0 - 2.0 * r


def endpoint_values(params: HomParams, branch: Branch | str) -> tuple[float, float]:
    """Endpoint values ``(U(-1), U(1))`` of a branch.

    The plus-extremal branch takes the larger root at ``y = -1``; the
    minus-extremal branch takes the smaller root at ``y = 1``.
    """
    if not in_J(params.c):
        raise DomainError(f"parameters {params.c} are outside J")
    branch = Branch(branch)
    lo_att, lo_ext = left_roots(params.c1)
    hi_att, hi_ext = right_roots(params.c2)
    if branch is Branch.PLUS_EXTREMAL:
        return lo_ext, hi_att
    if branch is Branch.MINUS_EXTREMAL:
        return lo_att, hi_ext
    return lo_att, hi_att


def guard_bound(params: HomParams) -> float:
    return 10.0 * (
        4.0
        + 2.0 * math.sqrt(1.0 + params.c1)
        + 2.0 * math.sqrt(1.0 + params.c2)
        + abs(params.gamma)
    )


def xi_of_s(s: float) -> float:
    """``xi`` at which ``1 - tanh(xi) = s``."""
    return 0.5 * math.log(2.0 / s - 1.0)


def _s_sigma(xi: float) -> tuple[float, float]:
    e = math.exp(2.0 * max(-XI_CLAMP, min(XI_CLAMP, xi)))
    return 2.0 / (1.0 + e), 2.0 * e / (1.0 + e)


def s_sigma(xi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``(1 - tanh xi, 1 + tanh xi)`` without cancellation."""
    x = np.clip(xi, -XI_CLAMP, XI_CLAMP)
    e = np.exp(-2.0 * np.abs(x))
    small = 2.0 * e / (1.0 + e)
    large = 2.0 / (1.0 + e)
    s = np.where(x >= 0, small, large)
    sig = np.where(x >= 0, large, small)
    return s, sig


def forcing(c: Sequence[float], y):
    c1, c2, c3 = c
    return c1 * (1 - y) + c2 * (1 + y) + c3 * (1 - y * y)


# --------------------------------------------------------------------------
# right-hand sides in xi
# --------------------------------------------------------------------------


class _Half:
    """Right-hand side of one half of the profile around a reference root."""

    def __init__(self, c: Sequence[float], side: str, ref: float):
        self.c1, self.c2, self.c3 = (float(v) for v in c)
        self.side = side
        self.ref = float(ref)
        if side == "right":
            self.lin = self.c1 - self.c2 + 2.0 * self.c3
        else:
            self.lin = self.c2 - self.c1 + 2.0 * self.c3

    def g(self, s: float, sig: float, delta: float) -> float:
        u = self.ref + delta
        if self.side == "right":
            return (
                self.lin * s
                - self.c3 * s * s
                + 2.0 * s * u
                - (2.0 + self.ref) * delta
                - 0.5 * delta * delta
            )
        return (
            self.lin * sig
            - self.c3 * sig * sig
            + (-2.0) * sig * u
            + (2.0 - self.ref) * delta
            - 0.5 * delta * delta
        )

    def scalar(self, xi: float, y):
        s, sig = _s_sigma(xi)
        return [self.g(s, sig, y[0])]

    def full(self, xi: float, y):
        s, sig = _s_sigma(xi)
        delta, n = y[0], y[1]
        g = self.g(s, sig, delta)
        ss = s * sig
        v = g / ss
        u = self.ref + delta
        return [g, -2.0 * self.c3 * ss - 2.0 * g - g * v - u * n]

    def full_vec(self, xi, y):
        s, sig = s_sigma(xi)
        delta, n = y[0], y[1]
        u = self.ref + delta
        if self.side == "right":
            g = (
                self.lin * s
                - self.c3 * s * s
                + 2.0 * s * u
                - (2.0 + self.ref) * delta
                - 0.5 * delta * delta
            )
        else:
            g = (
                self.lin * sig
                - self.c3 * sig * sig
                - 2.0 * sig * u
                + (2.0 - self.ref) * delta
                - 0.5 * delta * delta
            )
        ss = s * sig
        v = g / ss
        return np.stack([g, -2.0 * self.c3 * ss - 2.0 * g - g * v - u * n])

    def series(self, s_end: np.ndarray | float):
        """Two-term expansion of the branch leaving the reference root.

        Returns ``(delta, N)`` at distance ``s_end`` from the pole of this
        half (``s`` on the right, ``sigma`` on the left).
        """
        c3, r = self.c3, self.ref
        if self.side == "right":
            a1 = (self.lin + 2.0 * r) / r
            a2 = (-c3 + a1 - 0.5 * a1 * a1) / (r - 2.0)
        else:
            a1 = (self.lin - 2.0 * r) / r
            a2 = (-c3 - a1 - 0.5 * a1 * a1) / (2.0 + r)
        d = a1 * s_end + a2 * s_end * s_end
        n = 2.0 * a2 * s_end * (2.0 - s_end)
        return d, n


def _initial_second(c: Sequence[float], gamma: float) -> float:
    # at y = 0: (1 - y^2) = 1, U' = P(0) - U^2/2, N = P'(0) - 2U - U U'
    c1, c2, c3 = c
    v0 = c1 + c2 + c3 - 0.5 * gamma * gamma
    return -c1 + c2 - 2.0 * gamma - gamma * v0


# --------------------------------------------------------------------------
# shooting
# --------------------------------------------------------------------------


@dataclass
class _HalfResult:
    xi: np.ndarray  # ordered from 0 outward
    delta: np.ndarray
    second: np.ndarray
    ref: float
    extremal: bool
    value_at_zero: float


def _half_nodes(spacing: float, xi_max: float) -> np.ndarray:
    n = int(math.floor(xi_max / spacing + 1e-9))
    return spacing * np.arange(n + 1)


def _forward_half(
    c, gamma: float, side: str, grid: ProfileGrid, spacing: float, xi_max: float, guard: float
) -> _HalfResult:
    sign = 1.0 if side == "right" else -1.0
    att, ext = right_roots(c[1]) if side == "right" else left_roots(c[0])
    half = _Half(c, side, att)
    nodes = sign * _half_nodes(spacing, xi_max)
    xi_bl = sign * xi_of_s(grid.eps_bl)
    n_inner = int(np.searchsorted(np.abs(nodes), abs(xi_bl), side="right"))
    stage1 = list(nodes[:n_inner]) + [xi_bl]

    def guard_fn(xi, y):
        return abs(att + y[0]) <= guard and math.isfinite(y[0])

    y0 = [gamma - att, _initial_second(c, gamma)]
    kw = dict(
        rtol=grid.rtol,
        atol=grid.atol,
        h_init=spacing,
        h_max=spacing,
        guard=guard_fn,
        fixed_step=spacing if grid.fixed_step else None,
    )
    try:
        tr1 = _rk.integrate(half.full, 0.0, y0, xi_bl, out_times=stage1, **kw)
        bl_state = tr1.states[-1]
        u_bl = att + bl_state[0]
        distinct = abs(ext - att) > 1e-12
        if distinct and abs(u_bl - ext) < abs(u_bl - att):
            back = _backward_half(c, side, ext, nodes, kw)
            if back is not None and abs(back.value_at_zero - gamma) <= EXTREMAL_ACCEPT:
                return back
        tr2 = _rk.integrate(
            half.full, xi_bl, bl_state, float(nodes[-1]), out_times=list(nodes[n_inner:]), **kw
        )
    except _rk.GuardExceeded as exc:
        raise BlowUp(math.tanh(exc.t)) from None
    states = np.array(tr1.states[:-1] + tr2.states)
    delta = states[:, 0]
    u_end = att + delta[-1]
    # nearest root at the far end decides the endpoint value
    if distinct and abs(u_end - ext) < abs(u_end - att):
        delta = delta + (att - ext)
        return _HalfResult(nodes, delta, states[:, 1], ext, True, gamma)
    return _HalfResult(nodes, delta, states[:, 1], att, False, gamma)


def _backward_half(c, side: str, ext: float, nodes: np.ndarray, kw: dict) -> _HalfResult | None:
    half = _Half(c, side, ext)
    xi_end = float(nodes[-1])
    s_end = _s_sigma(xi_end)[0 if side == "right" else 1]
    d0, n0 = half.series(s_end)
    rev = list(nodes[::-1])
    try:
        tr = _rk.integrate(half.full, xi_end, [d0, n0], 0.0, out_times=rev, **kw)
    except _rk.GuardExceeded:
        return None
    states = np.array(tr.states[::-1])
    return _HalfResult(nodes, states[:, 0], states[:, 1], ext, True, ext + states[0, 0])


def _default_spacing(c) -> float:
    rate = max(2.0 * math.sqrt(1.0 + c[0]), 2.0 * math.sqrt(1.0 + c[1]), 4.0)
    return 0.01 * min(1.0, 4.0 / rate)


def solve_profile(
    params: HomParams, grid: ProfileGrid | None = None, tol: float = 1e-8
) -> ThetaProfile:
    """Solve the reduced equation with ``U(0) = gamma``.

    Parameters
    ----------
    params : HomParams
        Parameters in J; ``gamma`` inside the admissible range.
    grid : ProfileGrid, optional
        Resolution settings.
    tol : float
        Target bound on :func:`ode_residual`. In adaptive mode the solve is
        repeated with finer export spacing and tighter tolerances until met.

    Returns
    -------
    ThetaProfile

    Raises
    ------
    BlowUp
        The trajectory left the guard band (gamma outside the range).
    NoConverge
        Step-size underflow, or the residual target could not be met.
    """
    if not in_J(params.c):
        raise DomainError(f"parameters {params.c} are outside J")
    grid = grid or ProfileGrid()
    spacing = grid.spacing or _default_spacing(params.c)
    attempts = 1 if grid.fixed_step else 3
    profile = None
    for attempt in range(attempts):
        profile = _solve_once(params, grid, spacing)
        if grid.fixed_step or profile.max_residual <= tol:
            return profile
        spacing *= 0.5
        grid = ProfileGrid(
            spacing=spacing,
            s_min=grid.s_min,
            eps_bl=grid.eps_bl,
            fixed_step=False,
            rtol=grid.rtol * 0.1,
            atol=grid.atol,
        )
    raise NoConverge(
        f"residual {profile.max_residual:.3e} above tol {tol:.3e} after {attempts} refinements"
    )


def _solve_once(params: HomParams, grid: ProfileGrid, spacing: float) -> ThetaProfile:
    c = params.c
    xi_max = xi_of_s(grid.s_min)
    guard = guard_bound(params)
    left = _forward_half(c, params.gamma, "left", grid, spacing, xi_max, guard)
    g_eff = left.value_at_zero
    right = _forward_half(c, g_eff, "right", grid, spacing, xi_max, guard)
    if right.extremal and not left.extremal:
        g_eff = right.value_at_zero
        left = _forward_half(c, g_eff, "left", grid, spacing, xi_max, guard)
    xi = np.concatenate([left.xi[:0:-1], right.xi])
    offsets = np.concatenate([left.delta[:0:-1], right.delta])
    second = np.concatenate([left.second[:0:-1], right.second])
    refs = np.concatenate([np.full(len(left.xi) - 1, left.ref), np.full(len(right.xi), right.ref)])
    u = refs + offsets
    s, sig = s_sigma(xi)
    du = np.empty_like(u)
    neg = xi < 0
    for mask, half in ((neg, _Half(c, "left", left.ref)), (~neg, _Half(c, "right", right.ref))):
        g = half.full_vec(xi[mask], np.stack([offsets[mask], second[mask]]))[0]
        du[mask] = g / (s[mask] * sig[mask])
    profile = ThetaProfile(
        nodes=np.tanh(xi),
        u_values=u,
        du_values=du,
        endpoint_minus=left.ref,
        endpoint_plus=right.ref,
        params=params,
        max_residual=np.nan,
        xi=xi,
        offsets=offsets,
        second=second,
        spacing=spacing,
        gamma_effective=float(right.value_at_zero if right.extremal else g_eff),
        extremal_minus=left.extremal,
        extremal_plus=right.extremal,
        meta={"fixed_step": grid.fixed_step, "eps_bl": grid.eps_bl, "s_min": grid.s_min},
    )
    object.__setattr__(profile, "max_residual", ode_residual(profile))
    return profile


def _shoot_ok(c, gamma: float, side: str, xi_max: float, xi_bl: float, guard: float) -> bool:
    """True if the half starting at ``U(0) = gamma`` stays bounded."""
    att, ext = right_roots(c[1]) if side == "right" else left_roots(c[0])
    gap = abs(ext - att)
    half = _Half(c, side, att)
    sign = 1.0 if side == "right" else -1.0

    def guard_fn(xi, y):
        return abs(att + y[0]) <= guard and math.isfinite(y[0])

    def captured(xi, y):
        return gap > 1e-12 and abs(xi) >= xi_bl and abs(y[0]) < 0.25 * gap

    try:
        tr = _rk.integrate(
            half.scalar,
            0.0,
            [gamma - att],
            sign * xi_max,
            rtol=1e-11,
            atol=1e-15,
            h_init=0.05,
            h_max=0.25,
            guard=guard_fn,
            stop=captured,
        )
    except _rk.GuardExceeded:
        return False
    # beyond the extremal root the quadratic term wins and |U| blows up
    u_end = att + tr.states[-1][0]
    return u_end <= ext if side == "left" else u_end >= ext


def _bisect(pred, good: float, bad: float, tol: float) -> float:
    """Bisect a monotone predicate; returns the last good point."""
    for _ in range(200):
        if abs(bad - good) <= tol:
            return good
        mid = 0.5 * (good + bad)
        if pred(mid):
            good = mid
        else:
            bad = mid
    raise NoConverge("bisection did not reach the tolerance")


def _expand(pred, start: float, step: float, want: bool) -> float:
    """Move from ``start`` by doubling steps until ``pred`` equals ``want``."""
    x = start
    for _ in range(60):
        if pred(x) == want:
            return x
        x += step
        step *= 2.0
    raise NoConverge("could not bracket the admissible gamma range")


def gamma_range(c: Sequence[float], tol: float = 1e-8, s_min: float = S_MIN_DEFAULT) -> GammaRange:
    """Admissible range of ``gamma`` for fixed ``c`` in J.

    Bisection on each half separately: the left half stays bounded iff
    ``gamma <= gamma_plus`` and the right half iff ``gamma >= gamma_minus``.
    """
    c = tuple(float(v) for v in c)
    if not in_J(c):
        raise DomainError(f"parameters {c} are outside J")
    xi_max = xi_of_s(s_min)
    xi_bl = xi_of_s(EPS_BL_DEFAULT)
    la, le = left_roots(c[0])
    ra, re = right_roots(c[1])
    scale = 1.0 + abs(le) + abs(re) + abs(c[2])

    def guard_for(g):
        return guard_bound(HomParams(*c, g))

    def left_ok(g):
        return _shoot_ok(c, g, "left", xi_max, xi_bl, guard_for(g))

    def right_ok(g):
        return _shoot_ok(c, g, "right", xi_max, xi_bl, guard_for(g))

    lg = _expand(left_ok, la, -1.0, True)
    lb = _expand(left_ok, max(le, lg) + 1.0, scale, False)
    g_plus = _bisect(left_ok, lg, lb, tol)
    rg = _expand(right_ok, ra, 1.0, True)
    rb = _expand(right_ok, min(re, rg) - 1.0, -scale, False)
    g_minus = _bisect(right_ok, rg, rb, tol)
    if g_minus > g_plus and g_minus - g_plus <= 10.0 * tol:
        mid = 0.5 * (g_minus + g_plus)
        g_minus = g_plus = mid
    return GammaRange(g_minus, g_plus, tol)


def is_admissible(params: HomParams, tol: float = 1e-8) -> Classification:
    """Classify parameters into outside J, J, or M."""
    if params.c1 < -1 or params.c2 < -1 or params.c3 < cbar3(params.c1, params.c2):
        return Classification.OUTSIDE_J
    if params.c1 == 0.0 and params.c2 == 0.0 and params.c3 > -4.0:
        rng = gamma_range(params.c, tol)
        if rng.contains(params.gamma):
            return Classification.IN_M
    return Classification.IN_J


# --------------------------------------------------------------------------
# residual and evaluation
# --------------------------------------------------------------------------


def _fd_weights(offsets: np.ndarray) -> np.ndarray:
    """First-derivative weights on integer offsets (unit spacing)."""
    m = len(offsets)
    vander = np.vander(offsets.astype(float), m, increasing=True).T
    rhs = np.zeros(m)
    rhs[1] = 1.0
    return np.linalg.solve(vander, rhs)


def _fd_derivative(values: np.ndarray, h: float, width: int = 11) -> np.ndarray:
    n = len(values)
    half = width // 2
    out = np.empty(n)
    centre = _fd_weights(np.arange(-half, half + 1))
    if n >= width:
        windows = np.lib.stride_tricks.sliding_window_view(values, width)
        out[half : n - half] = windows @ centre
        for i in list(range(half)) + list(range(n - half, n)):
            start = min(max(i - half, 0), n - width)
            offs = np.arange(start, start + width) - i
            out[i] = _fd_weights(offs) @ values[start : start + width]
    else:
        for i in range(n):
            offs = np.arange(n) - i
            out[i] = _fd_weights(offs) @ values
    return out / h


def ode_residual(profile: ThetaProfile) -> float:
    """Maximum defect of the reduced equation over the export nodes.

    ``(1 - y^2) U'`` is recomputed from ``u_values`` alone by 11-point
    finite differences in ``xi`` (order 10), so ``du_values`` and the
    solver's error control play no part.
    """
    if profile.is_zero and profile.params.c == (0.0, 0.0, 0.0):
        return 0.0
    xi = profile.xi
    u = profile.u_values
    h = float(np.mean(np.diff(xi)))
    dudxi = _fd_derivative(u, h)
    y = np.tanh(xi)
    rhs = forcing(profile.params.c, y) - 2.0 * y * u - 0.5 * u * u
    return float(np.max(np.abs(dudxi - rhs)))


@dataclass
class ProfileState:
    """Profile data at arbitrary ``xi``.

    ``offset`` is ``U`` minus the endpoint value of the half containing
    each point (``endpoint_minus`` for ``xi < 0``).
    """

    xi: np.ndarray
    s: np.ndarray
    sigma: np.ndarray
    u: np.ndarray
    offset: np.ndarray
    du: np.ndarray
    d2u_num: np.ndarray

    @property
    def d2u(self) -> np.ndarray:
        return self.d2u_num / (self.s * self.sigma)


def evaluate(profile: ThetaProfile, xi) -> ProfileState:
    """Evaluate ``U``, ``U'`` and ``(1 - y^2) U''`` at arbitrary ``xi``.

    Each point is advanced from its nearest export node on the same half
    by Dormand-Prince steps no longer than half the node spacing; points
    beyond the last node of an extremal half use the endpoint expansion.
    """
    xi = np.asarray(xi, dtype=float)
    shape = xi.shape
    x = np.clip(xi.ravel(), -XI_CLAMP, XI_CLAMP)
    out_u = np.empty_like(x)
    out_off = np.empty_like(x)
    out_g = np.empty_like(x)
    out_n = np.empty_like(x)
    c = profile.params.c
    h = profile.spacing
    k0 = profile.zero_index
    nodes = profile.xi
    for side in ("left", "right"):
        mask = x < 0 if side == "left" else x >= 0
        if not np.any(mask):
            continue
        xq = x[mask]
        if side == "right":
            ref = profile.endpoint_plus
            lo, hi = k0, len(nodes) - 1
            extremal = profile.extremal_plus
        else:
            ref = profile.endpoint_minus
            lo, hi = 0, k0
            extremal = profile.extremal_minus
        half = _Half(c, side, ref)
        k = np.clip(np.rint((xq - nodes[k0]) / h).astype(int) + k0, lo, hi)
        d0 = profile.offsets[k].copy()
        if side == "left":
            at_zero = k == k0
            d0[at_zero] = profile.u_values[k0] - ref
        state = np.stack([d0, profile.second[k].copy()])
        dist = xq - nodes[k]
        n_sub = max(1, int(math.ceil(np.max(np.abs(dist)) / (0.5 * h) - 1e-9)))
        step = dist / n_sub
        t = nodes[k].copy()
        for _ in range(n_sub):
            state = _rk.dp5_step_vec(half.full_vec, t, state, step)
            t = t + step
        if extremal:
            beyond = np.abs(xq) > abs(nodes[hi if side == "right" else lo])
            if np.any(beyond):
                s_q, sig_q = s_sigma(xq[beyond])
                dist_pole = s_q if side == "right" else sig_q
                ds, ns = half.series(dist_pole)
                state[0, beyond] = ds
                state[1, beyond] = ns
        g = half.full_vec(xq, state)[0]
        out_off[mask] = state[0]
        out_u[mask] = ref + state[0]
        out_g[mask] = g
        out_n[mask] = state[1]
    s, sig = s_sigma(x)
    if profile.is_zero:
        out_u[:] = 0.0
        out_off[:] = 0.0
        out_g[:] = 0.0
        out_n[:] = 0.0
    du = out_g / (s * sig)
    return ProfileState(
        xi=x.reshape(shape),
        s=s.reshape(shape),
        sigma=sig.reshape(shape),
        u=out_u.reshape(shape),
        offset=out_off.reshape(shape),
        du=du.reshape(shape),
        d2u_num=out_n.reshape(shape),
    )


def interpolate_u(profile: ThetaProfile, y) -> np.ndarray:
    """``U`` at values of ``y`` in (-1, 1)."""
    y = np.asarray(y, dtype=float)
    return evaluate(profile, np.arctanh(y)).u


def zero_profile(grid: ProfileGrid | None = None) -> ThetaProfile:
    """Exact zero profile for ``c = 0, gamma = 0``."""
    grid = grid or ProfileGrid()
    spacing = grid.spacing or 0.01
    half = _half_nodes(spacing, xi_of_s(grid.s_min))
    xi = np.concatenate([-half[:0:-1], half])
    z = np.zeros_like(xi)
    return ThetaProfile(
        nodes=np.tanh(xi),
        u_values=z,
        du_values=z.copy(),
        endpoint_minus=0.0,
        endpoint_plus=0.0,
        params=HomParams(0.0, 0.0, 0.0, 0.0),
        max_residual=0.0,
        xi=xi,
        offsets=z.copy(),
        second=z.copy(),
        spacing=spacing,
        gamma_effective=0.0,
        extremal_minus=False,
        extremal_plus=False,
    )


def profile_from_function(
    params: HomParams, u_func, du_func, d2u_func, grid: ProfileGrid | None = None
) -> ThetaProfile:
    """Wrap a closed-form profile sampled on the standard node grid.

    Useful for oracles: the sampled values carry no integration error.
    Endpoint values are the attracting roots unless the sampled values sit
    closer to the extremal ones.
    """
    grid = grid or ProfileGrid()
    spacing = grid.spacing or _default_spacing(params.c)
    half = _half_nodes(spacing, xi_of_s(grid.s_min))
    xi = np.concatenate([-half[:0:-1], half])
    y = np.tanh(xi)
    s, sig = s_sigma(xi)
    u = u_func(y, s, sig)
    la, le = left_roots(params.c1)
    ra, re = right_roots(params.c2)
    ext_minus = abs(u[0] - le) < abs(u[0] - la)
    ext_plus = abs(u[-1] - re) < abs(u[-1] - ra)
    lo = le if ext_minus else la
    hi = re if ext_plus else ra
    offsets = np.where(xi < 0, u - lo, u - hi)
    prof = ThetaProfile(
        nodes=y,
        u_values=u,
        du_values=du_func(y, s, sig),
        endpoint_minus=lo,
        endpoint_plus=hi,
        params=params,
        max_residual=np.nan,
        xi=xi,
        offsets=offsets,
        second=s * sig * d2u_func(y, s, sig),
        spacing=spacing,
        gamma_effective=float(u[np.argmin(np.abs(xi))]),
        extremal_minus=bool(ext_minus),
        extremal_plus=bool(ext_plus),
    )
    object.__setattr__(prof, "max_residual", ode_residual(prof))
    return prof


def landau_profile(gamma: float, grid: ProfileGrid | None = None) -> ThetaProfile:
    """Closed-form profile ``2 gamma (1 - y^2) / (2 + gamma y)`` for ``c = 0``."""
    if abs(gamma) > 2.0:
        raise DomainError("closed-form profile is bounded only for |gamma| <= 2")
    g = float(gamma)

    def u(y, s, sig):
        return 2.0 * g * s * sig / (2.0 + g * y)

    def du(y, s, sig):
        d = 2.0 + g * y
        return (-4.0 * g * y * d - 2.0 * g * g * s * sig) / (d * d)

    def d2u(y, s, sig):
        d = 2.0 + g * y
        return -4.0 * g * (4.0 - g * g) / d**3

    return profile_from_function(HomParams(0.0, 0.0, 0.0, g), u, du, d2u, grid)


# --------------------------------------------------------------------------
# export
# --------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def profile_to_csv(profile: ThetaProfile, path: str | Path) -> None:
    """Write columns ``y, U, dU``."""
    lines = ["y,U,dU"]
    for y, u, du in zip(profile.nodes, profile.u_values, profile.du_values):
        lines.append(f"{_fmt(y)},{_fmt(u)},{_fmt(du)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def profile_summary(profile: ThetaProfile) -> dict:
    p = profile.params
    return {
        "schema": "homstab.profile/1",
        "params": {"c1": p.c1, "c2": p.c2, "c3": p.c3, "gamma": p.gamma},
        "endpoints": {"minus": profile.endpoint_minus, "plus": profile.endpoint_plus},
        "branch": profile.branch.value,
        "gamma_effective": profile.gamma_effective,
        "residual": profile.max_residual,
        "n_nodes": int(len(profile.nodes)),
        "xi_spacing": profile.spacing,
    }


def profile_to_json(profile: ThetaProfile, path: str | Path) -> None:
    Path(path).write_text(json.dumps(profile_summary(profile), indent=2) + "\n", encoding="utf-8")
