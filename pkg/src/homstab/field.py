"""Velocity, pressure and gradient of the homogeneous flows in 3D.

For a profile ``U`` the velocity is::

    u = U'(y) / r  e_r  +  U(y) / (r sin(theta))  e_theta,    y = cos(theta),

where ``U'`` is the derivative in ``y`` (not in ``theta``). The pressure is
``p = (U' - U^2 / (2 (1 - y^2)) + c3) / r^2``: the radial momentum balance
with the twice-differentiated profile equation fixes the constant ``c3``,
which vanishes for the closed-form ``c = 0`` family. :func:`nse_residual`
checks the reading against the stationary equations.

Chain-rule conventions used throughout: with ``f(theta) = U'(cos theta)``
and ``g(theta) = U(cos theta) / sin(theta)``::

    f' = -sin(theta) U''          = -N / sin(theta),   N = (1 - y^2) U''
    g' = -U' - U cos(theta) / sin(theta)^2

and the gradient ``(grad u)_{ij} = d_j u_i`` in the orthonormal basis
``(e_r, e_theta, e_phi)`` is::

    1/r^2 [[-f, f' - g, 0], [-g, g' + f, 0], [0, 0, f + g cot(theta)]].
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InsufficientSamples, OnAxis, StepTooLarge
from .profile import HomParams, ProfileGrid, ThetaProfile, evaluate, solve_profile


@dataclass(frozen=True, eq=False)
class VelocityField:
    """Velocity field built from a profile.

    Values between export nodes come from one Dormand-Prince step of the
    profile equation started at the nearest node (``method = "local-dp5"``).
    """

    profile: ThetaProfile
    method: str = "local-dp5"

    @classmethod
    def from_params(cls, params: HomParams, grid: ProfileGrid | None = None, tol: float = 1e-8):
        return cls(solve_profile(params, grid, tol))


@dataclass
class _Geometry:
    r: np.ndarray
    rho: np.ndarray
    xi: np.ndarray
    cos_t: np.ndarray
    sin_t: np.ndarray
    cos_p: np.ndarray
    sin_p: np.ndarray


def _points(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    return np.atleast_2d(arr), single


def _geometry(pts: np.ndarray) -> _Geometry:
    x1, x2, x3 = pts[:, 0], pts[:, 1], pts[:, 2]
    rho = np.hypot(x1, x2)
    if np.any(rho == 0.0):
        raise OnAxis("evaluation point on the x3-axis")
    r = np.sqrt(rho * rho + x3 * x3)
    up = x3 >= 0
    # distances to the poles without cancellation
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(up, rho * rho / (r * (r + x3)), (r - x3) / r)
        sig = np.where(up, (r + x3) / r, rho * rho / (r * (r - x3)))
    xi = 0.5 * np.log(sig / s)
    return _Geometry(r, rho, xi, x3 / r, rho / r, x1 / rho, x2 / rho)


def _basis(geo: _Geometry) -> np.ndarray:
    """Columns ``e_r, e_theta, e_phi`` for each point, shape (n, 3, 3)."""
    n = len(geo.r)
    out = np.empty((n, 3, 3))
    st, ct, cp, sp = geo.sin_t, geo.cos_t, geo.cos_p, geo.sin_p
    out[:, :, 0] = np.stack([st * cp, st * sp, ct], axis=1)
    out[:, :, 1] = np.stack([ct * cp, ct * sp, -st], axis=1)
    out[:, :, 2] = np.stack([-sp, cp, np.zeros(n)], axis=1)
    return out


def eval_velocity(field: VelocityField, x) -> np.ndarray:
    """Cartesian velocity at one point ``(3,)`` or many ``(n, 3)``.

    Raises
    ------
    OnAxis
        If a point has ``x1 = x2 = 0``.
    """
    pts, single = _points(x)
    geo = _geometry(pts)
    st = evaluate(field.profile, geo.xi)
    u_r = st.du / geo.r
    u_t = st.u / geo.rho
    basis = _basis(geo)
    vel = basis[:, :, 0] * u_r[:, None] + basis[:, :, 1] * u_t[:, None]
    return vel[0] if single else vel


def eval_spherical(field: VelocityField, x) -> np.ndarray:
    """Components ``(u_r, u_theta, u_phi)``; ``u_phi`` is identically zero."""
    pts, single = _points(x)
    geo = _geometry(pts)
    st = evaluate(field.profile, geo.xi)
    out = np.stack([st.du / geo.r, st.u / geo.rho, np.zeros_like(geo.r)], axis=1)
    return out[0] if single else out


def eval_pressure(field: VelocityField, x) -> np.ndarray | float:
    """Pressure ``(U' - U^2 / (2 (1 - y^2)) + c3) / r^2``."""
    pts, single = _points(x)
    geo = _geometry(pts)
    st = evaluate(field.profile, geo.xi)
    c3 = field.profile.params.c3
    p = (st.du - st.u * st.u / (2.0 * st.s * st.sigma) + c3) / (geo.r * geo.r)
    return float(p[0]) if single else p


def eval_gradient(field: VelocityField, x) -> np.ndarray:
    """Velocity gradient ``(grad u)_{ij} = d u_i / d x_j`` in Cartesian axes."""
    pts, single = _points(x)
    geo = _geometry(pts)
    st = evaluate(field.profile, geo.xi)
    sin_t, cos_t = geo.sin_t, geo.cos_t
    f = st.du
    g = st.u / sin_t
    fp = -st.d2u_num / sin_t
    gp = -st.du - st.u * cos_t / (st.s * st.sigma)
    n = len(geo.r)
    a = np.zeros((n, 3, 3))
    a[:, 0, 0] = -f
    a[:, 0, 1] = fp - g
    a[:, 1, 0] = -g
    a[:, 1, 1] = gp + f
    a[:, 2, 2] = f + g * cos_t / sin_t
    a /= (geo.r * geo.r)[:, None, None]
    basis = _basis(geo)
    grad = basis @ a @ np.transpose(basis, (0, 2, 1))
    return grad[0] if single else grad


def _check_step(pts: np.ndarray, h: float) -> None:
    rho = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(rho == 0.0):
        raise OnAxis("evaluation point on the x3-axis")
    if np.any(h >= rho / 4.0):
        raise StepTooLarge(f"h = {h} too large for axis distance {rho.min():.3g}")


def _stencil(pts: np.ndarray, h: float) -> np.ndarray:
    """Points ``x``, ``x +- h e_j`` for each point, shape (n, 7, 3)."""
    offs = np.zeros((7, 3))
    for j in range(3):
        offs[1 + 2 * j, j] = h
        offs[2 + 2 * j, j] = -h
    return pts[:, None, :] + offs[None, :, :]


def nse_residual(field: VelocityField, x, h: float) -> np.ndarray:
    """Second-order finite-difference value of ``-Lap u + u.grad u + grad p``.

    Raises
    ------
    OnAxis
        If a point lies on the axis.
    StepTooLarge
        If ``h >= dist(x, axis) / 4``.
    """
    pts, single = _points(x)
    _check_step(pts, h)
    n = len(pts)
    sten = _stencil(pts, h).reshape(-1, 3)
    vel = eval_velocity(field, sten).reshape(n, 7, 3)
    pres = np.asarray(eval_pressure(field, sten)).reshape(n, 7)
    u0 = vel[:, 0, :]
    lap = np.zeros((n, 3))
    grad_u = np.zeros((n, 3, 3))
    grad_p = np.zeros((n, 3))
    for j in range(3):
        up, um = vel[:, 1 + 2 * j, :], vel[:, 2 + 2 * j, :]
        lap += (up - 2.0 * u0 + um) / (h * h)
        grad_u[:, :, j] = (up - um) / (2.0 * h)
        grad_p[:, j] = (pres[:, 1 + 2 * j] - pres[:, 2 + 2 * j]) / (2.0 * h)
    conv = np.einsum("nij,nj->ni", grad_u, u0)
    res = -lap + conv + grad_p
    return res[0] if single else res


def divergence_fd(field: VelocityField, x, h: float) -> np.ndarray | float:
    """Central-difference divergence of the velocity."""
    pts, single = _points(x)
    _check_step(pts, h)
    n = len(pts)
    vel = eval_velocity(field, _stencil(pts, h).reshape(-1, 3)).reshape(n, 7, 3)
    div = sum((vel[:, 1 + 2 * j, j] - vel[:, 2 + 2 * j, j]) / (2.0 * h) for j in range(3))
    return float(div[0]) if single else div


def gradient_fd(field: VelocityField, x, h: float) -> np.ndarray:
    """Central-difference velocity gradient (oracle for :func:`eval_gradient`)."""
    pts, single = _points(x)
    _check_step(pts, h)
    n = len(pts)
    vel = eval_velocity(field, _stencil(pts, h).reshape(-1, 3)).reshape(n, 7, 3)
    grad = np.zeros((n, 3, 3))
    for j in range(3):
        grad[:, :, j] = (vel[:, 1 + 2 * j, :] - vel[:, 2 + 2 * j, :]) / (2.0 * h)
    return grad[0] if single else grad


@dataclass(frozen=True)
class SingularityFit:
    coefficient: float
    intercept: float
    rms: float
    n_samples: int


def singularity_fit(
    field: VelocityField, axis_distances, pole: str = "north", min_samples: int = 3
) -> SingularityFit:
    """Fit ``|u| ~ A ln(1/|x'|) + B`` on the unit sphere near a pole.

    Parameters
    ----------
    axis_distances : array_like
        Values of ``|x'|`` in (0, 1).
    pole : {"north", "south"}
        Which end of the axis the samples approach.
    """
    rho = np.asarray(axis_distances, dtype=float).ravel()
    if rho.size < min_samples:
        raise InsufficientSamples(f"need at least {min_samples} samples, got {rho.size}")
    sign = 1.0 if pole == "north" else -1.0
    pts = np.stack([rho, np.zeros_like(rho), sign * np.sqrt(1.0 - rho * rho)], axis=1)
    speed = np.linalg.norm(eval_velocity(field, pts), axis=1)
    design = np.stack([np.log(1.0 / rho), np.ones_like(rho)], axis=1)
    coef, *_ = np.linalg.lstsq(design, speed, rcond=None)
    resid = speed - design @ coef
    return SingularityFit(float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid**2))), rho.size)


def evaluate_point_cloud(
    field: VelocityField, in_path: str | Path, out_path: str | Path, h: float | None = None
) -> int:
    """Read ``x,y,z`` rows and write ``x,y,z,u1,u2,u3,p,residual``.

    The residual column is the Euclidean norm of :func:`nse_residual` with
    step ``h`` (default ``|x'| / 8`` capped at ``1e-3 |x|``).
    """
    with open(in_path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    pts = np.array([[float(v) for v in r[:3]] for r in rows], dtype=float).reshape(-1, 3)
    vel = eval_velocity(field, pts)
    pres = np.atleast_1d(eval_pressure(field, pts))
    res = np.empty(len(pts))
    for i, p in enumerate(pts):
        rho = math.hypot(p[0], p[1])
        step = h if h is not None else min(rho / 8.0, 1e-3 * np.linalg.norm(p))
        res[i] = np.linalg.norm(nse_residual(field, p, step))
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        fh.write("x,y,z,u1,u2,u3,p,residual\n")
        for p, v, q, e in zip(pts, vel, pres, res):
            vals = list(p) + list(v) + [q, e]
            fh.write(",".join(format(float(t), ".17g") for t in vals) + "\n")
    return len(pts)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True
