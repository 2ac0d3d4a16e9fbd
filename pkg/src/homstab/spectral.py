"""Pseudo-spectral simulation of perturbations of a stationary singular flow.

The perturbation ``w`` of a background ``u`` solves, on the periodic box
``[-L/2, L/2)^3``::

    d_t w - Lap w + P div(w (x) w + w (x) u + u (x) w) = 0,   div w = 0,

where ``P`` is the Leray projector. The terms ``w.grad u`` and ``u.grad w``
are written in divergence form ``div(u (x) w)`` and ``div(w (x) u)``, which is
equivalent because both fields are divergence-free.

Discretization:

* Fourier coefficients from ``scipy.fft.rfftn``; wavenumbers ``2 pi n / L``.
* 2/3-rule: only modes with ``|n_i| < N/3`` on every axis are kept, so every
  quadratic product is exact on the retained modes and the discrete
  ``int (u.grad w).w`` vanishes identically.
* Lawson (integrating-factor) midpoint rule: the heat semigroup
  ``exp(-|k|^2 dt)`` is applied exactly and the remaining terms are advanced
  with the explicit midpoint rule (second order).
* The background is the singular field multiplied by a quintic smoothstep
  cutoff that vanishes within ``rho_m / 2`` of the axis and beyond ``R_c``,
  then band-limited and projected onto divergence-free fields.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import fft as sfft

from .errors import (
    CFLViolation,
    ConfigError,
    MemoryBudgetExceeded,
    NaNDetected,
    NoConverge,
    NotInM,
    PicardDivergence,
    SmallnessViolated,
)
from .field import VelocityField, eval_velocity
from .profile import Classification, HomParams, is_admissible, solve_profile, zero_profile

CHECKPOINT_MAGIC = b"HOMSTAB\x00"
CHECKPOINT_VERSION = 1
_HEADER = struct.Struct("<8sIIdd")
CFL_NUMBER = 0.5
DEFAULT_MEMORY_BUDGET = 1 << 30


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationSpec:
    """Initial perturbation.

    ``kind``:
      * ``"random"``: divergence-free random field with energy spectrum
        ``|k|^2 exp(-|k|^2 / k0^2)`` (``k0`` in units of ``2 pi / L``).
      * ``"mode"``: ``sin(2 pi n.x / L) e`` with ``e`` orthogonal to ``n``.
      * ``"zero"``: identically zero.

    The first two are scaled to L^3 norm ``l3_norm``.
    """

    kind: str = "random"
    l3_norm: float = 0.05
    k0: float = 2.0
    seed: int = 0
    mode: tuple[int, int, int] = (1, 0, 0)


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings; see :meth:`validate` for the constraints."""

    params: HomParams = field(default_factory=lambda: HomParams(0.0, 0.0, 0.0, 0.0))
    L: float = 2.0 * math.pi
    N: int = 32
    dt: float = 0.01
    T: float = 1.0
    rho_m: float = 0.6
    R_c: float = 2.8
    init: PerturbationSpec = field(default_factory=PerturbationSpec)
    q_list: tuple[float, ...] = (6.0,)
    dealias: str = "2/3"
    record_every: int = 1

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    def validate(self) -> "SimConfig":
        """Raise :class:`ConfigError` on invalid settings."""
        if self.N < 4 or self.N & (self.N - 1):
            raise ConfigError("N must be a power of two >= 4")
        if not self.rho_m > 2.0 * self.L / self.N:
            raise ConfigError("rho_m must exceed 2 L / N")
        if not self.R_c < 0.5 * self.L:
            raise ConfigError("R_c must be below L / 2")
        if not (self.dt > 0.0 and self.T > 0.0):
            raise ConfigError("dt and T must be positive")
        if abs(self.n_steps * self.dt - self.T) > 1e-9 * self.T:
            raise ConfigError("T must be an integer multiple of dt")
        if self.dealias != "2/3":
            raise ConfigError("only the 2/3 dealiasing rule is implemented")
        if self.record_every < 1:
            raise ConfigError("record_every must be >= 1")
        return self


# --------------------------------------------------------------------------
# spectral grid
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Grid:
    N: int
    L: float

    def __post_init__(self):
        n = self.N
        scale = 2.0 * math.pi / self.L
        ni = np.fft.fftfreq(n, 1.0 / n)
        nz = np.fft.rfftfreq(n, 1.0 / n)
        kx = scale * ni[:, None, None]
        ky = scale * ni[None, :, None]
        kz = scale * nz[None, None, :]
        shape = (n, n, n // 2 + 1)
        k = np.stack(np.broadcast_arrays(kx, ky, kz)).astype(float)
        k2 = np.sum(k * k, axis=0)
        keep = (
            (np.abs(ni)[:, None, None] < n / 3.0)
            & (np.abs(ni)[None, :, None] < n / 3.0)
            & (nz[None, None, :] < n / 3.0)
        )
        # rfft half-spectrum weights for Parseval sums
        wz = np.full(n // 2 + 1, 2.0)
        wz[0] = 1.0
        wz[-1] = 1.0
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "k2", k2)
        object.__setattr__(self, "mask", np.broadcast_to(keep, shape).copy())
        object.__setattr__(self, "parseval", np.broadcast_to(wz[None, None, :], shape).copy())
        x = -0.5 * self.L + self.L * np.arange(n) / n
        object.__setattr__(self, "x", x)

    @property
    def vol(self) -> float:
        return (self.L / self.N) ** 3

    def coords(self) -> np.ndarray:
        X, Y, Z = np.meshgrid(self.x, self.x, self.x, indexing="ij")
        return np.stack([X, Y, Z])

    def forward(self, f: np.ndarray) -> np.ndarray:
        return sfft.rfftn(f, axes=(-3, -2, -1))

    def inverse(self, fh: np.ndarray) -> np.ndarray:
        return sfft.irfftn(fh, s=(self.N,) * 3, axes=(-3, -2, -1))

    def project(self, vh: np.ndarray) -> np.ndarray:
        """Leray projection ``v - k (k.v) / |k|^2``; the ``k = 0`` mode is unchanged."""
        kv = np.sum(self.k * vh, axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            fac = np.where(self.k2 > 0.0, kv / self.k2, 0.0)
        return vh - self.k * fac

    def sq_norm(self, fh: np.ndarray) -> float:
        """``int |f|^2`` from coefficients (any leading axes summed)."""
        return float(self.L**3 / self.N**6 * np.sum(self.parseval * np.abs(fh) ** 2))

    def grad_sq(self, vh: np.ndarray) -> float:
        """``int |grad v|^2``."""
        return float(self.L**3 / self.N**6 * np.sum(self.parseval * self.k2 * np.abs(vh) ** 2))


_GRIDS: dict[tuple[int, float], Grid] = {}


def grid_for(N: int, L: float) -> Grid:
    key = (N, float(L))
    if key not in _GRIDS:
        _GRIDS[key] = Grid(N, float(L))
    return _GRIDS[key]


@dataclass(frozen=True, eq=False)
class SpectralState:
    """Coefficients ``w_hat`` (shape ``(3, N, N, N//2 + 1)``) at time ``t``."""

    w_hat: np.ndarray
    t: float
    L: float

    @property
    def N(self) -> int:
        return self.w_hat.shape[1]

    @property
    def grid(self) -> Grid:
        return grid_for(self.N, self.L)

    def physical(self) -> np.ndarray:
        return self.grid.inverse(self.w_hat)

    def divergence_max(self) -> float:
        """``max |k.w_hat| / max |k| |w_hat|`` (0 for the zero field)."""
        g = self.grid
        div = np.abs(np.sum(g.k * self.w_hat, axis=0))
        scale = np.max(np.sqrt(g.k2) * np.linalg.norm(np.abs(self.w_hat), axis=0))
        return float(div.max() / scale) if scale > 0.0 else 0.0

    def hermitian_defect(self) -> float:
        """Largest ``|w(-k) - conj(w(k))|`` over the self-conjugate planes ``k3 = 0, N/2``."""
        out = 0.0
        n = self.N
        idx = (-np.arange(n)) % n
        for j in (0, n // 2):
            plane = self.w_hat[:, :, :, j]
            mirrored = np.conj(plane[:, idx][:, :, idx])
            out = max(out, float(np.max(np.abs(plane - mirrored))))
        return out

    def with_hat(self, w_hat: np.ndarray, t: float | None = None) -> "SpectralState":
        return SpectralState(w_hat, self.t if t is None else t, self.L)


def leray_project(state: SpectralState) -> SpectralState:
    """Leray projection of ``state``."""
    return state.with_hat(state.grid.project(state.w_hat))


def lq_norm(w: np.ndarray, q: float, vol: float) -> float:
    """``(int |w|^q)^(1/q)`` of a physical vector field, ``|.|`` Euclidean."""
    mag = np.sqrt(np.sum(w * w, axis=0))
    m = float(mag.max())
    if m == 0.0:
        return 0.0
    return m * float(vol * np.sum((mag / m) ** q)) ** (1.0 / q)


# --------------------------------------------------------------------------
# background
# --------------------------------------------------------------------------


def smoothstep5(t):
    """Quintic ``6t^5 - 15t^4 + 10t^3`` clamped to [0, 1] (C^2 at both ends)."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


@dataclass(frozen=True)
class GridK:
    """Weighted sup-norms of a gridded field, taken over grid points off the axis."""

    k_cone: float
    k_outer: float
    k_grad: float


@dataclass(frozen=True, eq=False)
class Background:
    params: HomParams
    N: int
    L: float
    u_hat: np.ndarray
    u: np.ndarray
    grad: np.ndarray
    raw: np.ndarray
    sup: float
    sup_raw: float
    K: GridK
    rho_m: float
    R_c: float

    @property
    def is_zero(self) -> bool:
        return not np.any(self.u_hat)

    def report(self) -> dict:
        return {"params": asdict(self.params), "sup": self.sup, "sup_raw": self.sup_raw, "K": asdict(self.K),
                "rho_m": self.rho_m, "R_c": self.R_c, "N": self.N, "L": self.L}


def cutoff(x: np.ndarray, rho_m: float, R_c: float) -> np.ndarray:
    """Blend factor: 0 within ``rho_m/2`` of the axis or beyond ``R_c``, 1 for
    ``rho >= rho_m`` and ``r <= R_c / 2``."""
    rho = np.hypot(x[0], x[1])
    r = np.sqrt(rho * rho + x[2] * x[2])
    axis = smoothstep5((rho - 0.5 * rho_m) / (0.5 * rho_m))
    outer = 1.0 - smoothstep5((r - 0.5 * R_c) / (0.5 * R_c))
    return axis * outer


def _grid_K(grid: Grid, u: np.ndarray, grad: np.ndarray) -> GridK:
    x = grid.coords()
    rho = np.hypot(x[0], x[1])
    r = np.sqrt(rho * rho + x[2] * x[2])
    off = rho > 0.0
    speed = np.sqrt(np.sum(u * u, axis=0))
    gnorm = np.sqrt(np.sum(grad * grad, axis=(0, 1)))
    cone = off & (rho <= r / math.e)
    outer = off & ~cone
    kc = float(np.max(np.sqrt(rho * r)[cone] * speed[cone])) if np.any(cone) else 0.0
    ko = float(np.max((r * speed)[outer])) if np.any(outer) else 0.0
    kg = float(np.max((rho * r * gnorm)[off]))
    return GridK(kc, ko, kg)


def make_background(params: HomParams, config: SimConfig, field_: VelocityField | None = None) -> Background:
    """Mollified, band-limited, divergence-free background on the grid.

    Raises
    ------
    NotInM
        If ``params`` is outside the class ``c1 = c2 = 0``, ``c3 > -4``,
        ``gamma_minus < gamma < gamma_plus``.
    """
    config.validate()
    if is_admissible(params) is not Classification.IN_M:
        raise NotInM(f"parameters {params} are not in M")
    grid = grid_for(config.N, config.L)
    x = grid.coords()
    chi = cutoff(x, config.rho_m, config.R_c)
    raw = np.zeros_like(x)
    zero = params.c1 == 0.0 and params.c2 == 0.0 and params.c3 == 0.0 and params.gamma == 0.0
    if not zero:
        fld = field_ or VelocityField(solve_profile(params))
        live = chi > 0.0
        pts = np.stack([x[i][live] for i in range(3)], axis=1)
        vel = eval_velocity(fld, pts)
        for i in range(3):
            raw[i][live] = chi[live] * vel[:, i]
    u_hat = grid.project(grid.forward(raw) * grid.mask)
    u = grid.inverse(u_hat)
    grad = np.empty((3, 3) + u.shape[1:])
    for j in range(3):
        grad[:, j] = grid.inverse(1j * grid.k[j] * u_hat)
    sup = float(np.sqrt(np.max(np.sum(u * u, axis=0))))
    sup_raw = float(np.sqrt(np.max(np.sum(raw * raw, axis=0))))
    K = _grid_K(grid, u, grad) if not zero else GridK(0.0, 0.0, 0.0)
    return Background(params, config.N, config.L, u_hat, u, grad, raw, sup, sup_raw, K, config.rho_m, config.R_c)


def zero_background(config: SimConfig) -> Background:
    return make_background(HomParams(0.0, 0.0, 0.0, 0.0), config)


# --------------------------------------------------------------------------
# right-hand sides and steps
# --------------------------------------------------------------------------


def bilinear_flux(grid: Grid, a_hat: np.ndarray, b_hat: np.ndarray) -> np.ndarray:
    """``-P div(a (x) b)`` dealiased, with ``(a (x) b)_ij = a_i b_j``."""
    a = grid.inverse(a_hat)
    b = grid.inverse(b_hat)
    out = np.zeros_like(a_hat)
    for i in range(3):
        for j in range(3):
            out[i] += 1j * grid.k[j] * grid.forward(a[i] * b[j])
    return -grid.project(out * grid.mask)


def _flux(grid: Grid, w_hat: np.ndarray, u: np.ndarray | None, nonlinear: bool) -> tuple[np.ndarray, np.ndarray]:
    """``-P div(T)`` with ``T = w (x) w [+ w (x) u + u (x) w]`` and the physical ``w``."""
    w = grid.inverse(w_hat)
    out = np.zeros_like(w_hat)
    for i in range(3):
        for j in range(i, 3):
            t = np.zeros_like(w[0])
            if nonlinear:
                t += w[i] * w[j]
            if u is not None:
                t += w[i] * u[j] + u[i] * w[j]
            th = grid.forward(t)
            out[i] += 1j * grid.k[j] * th
            if j != i:
                out[j] += 1j * grid.k[i] * th
    return -grid.project(out * grid.mask), w


def _lawson(grid: Grid, w_hat: np.ndarray, dt: float, rhs: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    e_half = np.exp(-0.5 * dt * grid.k2)
    n0 = rhs(w_hat)
    mid = e_half * (w_hat + 0.5 * dt * n0)
    n1 = rhs(mid)
    return e_half * (e_half * w_hat + dt * n1)


def _check_cfl(sup: float, config_h: float, dt: float) -> None:
    if sup > 0.0 and dt > CFL_NUMBER * config_h / sup:
        raise CFLViolation(f"dt = {dt} exceeds {CFL_NUMBER} h / sup|u| = {CFL_NUMBER * config_h / sup:.4g}")


def linear_step(state: SpectralState, background: Background, dt: float) -> SpectralState:
    """One Lawson-midpoint step of ``d_t a - Lap a + P div(a (x) u + u (x) a) = 0``.

    Raises
    ------
    CFLViolation
        If ``dt > 0.5 h / sup|u|``.
    """
    grid = state.grid
    _check_cfl(background.sup, state.L / state.N, dt)
    u = None if background.is_zero else background.u

    def rhs(wh):
        return _flux(grid, wh, u, nonlinear=False)[0]

    return state.with_hat(_lawson(grid, state.w_hat, dt, rhs), state.t + dt)


def nonlinear_step(state: SpectralState, background: Background, dt: float) -> SpectralState:
    """One Lawson-midpoint step of the full perturbation equations."""
    grid = state.grid
    u = None if background.is_zero else background.u

    def rhs(wh):
        return _flux(grid, wh, u, nonlinear=True)[0]

    return state.with_hat(_lawson(grid, state.w_hat, dt, rhs), state.t + dt)


# --------------------------------------------------------------------------
# initial data
# --------------------------------------------------------------------------


def initial_state(config: SimConfig) -> SpectralState:
    """Initial perturbation described by ``config.init``."""
    spec = config.init
    grid = grid_for(config.N, config.L)
    if spec.kind == "zero" or spec.l3_norm == 0.0:
        return SpectralState(np.zeros((3,) + grid.k2.shape, dtype=complex), 0.0, config.L)
    if spec.kind == "random":
        rng = np.random.default_rng(spec.seed)
        noise = rng.standard_normal((3, config.N, config.N, config.N))
        kk = grid.k2 * (config.L / (2.0 * math.pi)) ** 2  # |n|^2 in integer units
        amp = np.exp(-0.5 * kk / spec.k0**2)
        w_hat = grid.project(grid.forward(noise) * amp * grid.mask)
        w_hat[:, 0, 0, 0] = 0.0
    elif spec.kind == "mode":
        n = np.asarray(spec.mode, dtype=float)
        if not np.any(n):
            raise ConfigError("mode must be a nonzero integer vector")
        trial = np.eye(3)[int(np.argmin(np.abs(n)))]
        e = np.cross(n, trial)
        e /= np.linalg.norm(e)
        x = grid.coords()
        phase = 2.0 * math.pi / config.L * np.tensordot(n, x, axes=1)
        w = e[:, None, None, None] * np.sin(phase)[None]
        w_hat = grid.project(grid.forward(w) * grid.mask)
    else:
        raise ConfigError(f"unknown perturbation kind {spec.kind!r}")
    w = grid.inverse(w_hat)
    norm = lq_norm(w, 3.0, grid.vol)
    if norm == 0.0:
        raise ConfigError("initial perturbation vanishes after dealiasing")
    return SpectralState(w_hat * (spec.l3_norm / norm), 0.0, config.L)


# --------------------------------------------------------------------------
# norm series and the full run
# --------------------------------------------------------------------------


@dataclass
class NormSeries:
    """Diagnostics per recorded time.

    ``grad_l2`` is ``||grad w||_2`` and ``cross`` is ``int (w.grad u).w``.
    """

    t: list[float] = field(default_factory=list)
    l2: list[float] = field(default_factory=list)
    l3: list[float] = field(default_factory=list)
    lq: dict[float, list[float]] = field(default_factory=dict)
    grad_l2: list[float] = field(default_factory=list)
    cross: list[float] = field(default_factory=list)
    final_state: SpectralState | None = field(default=None, repr=False)

    def columns(self) -> list[str]:
        return ["t", "l2", "l3"] + [f"l{_qname(q)}" for q in self.lq] + ["grad_l2", "cross"]

    def rows(self) -> list[list[float]]:
        out = []
        for i, t in enumerate(self.t):
            row = [t, self.l2[i], self.l3[i]] + [self.lq[q][i] for q in self.lq]
            out.append(row + [self.grad_l2[i], self.cross[i]])
        return out

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.columns())
            for r in self.rows():
                w.writerow([format(float(v), ".17g") for v in r])

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {
            "t": np.asarray(self.t),
            "l2": np.asarray(self.l2),
            "l3": np.asarray(self.l3),
            "grad_l2": np.asarray(self.grad_l2),
            "cross": np.asarray(self.cross),
            **{f"l{_qname(q)}": np.asarray(v) for q, v in self.lq.items()},
        }


def _qname(q: float) -> str:
    return str(int(q)) if float(q).is_integer() else str(q)


def _record(series: NormSeries, state: SpectralState, background: Background, q_list) -> np.ndarray:
    grid = state.grid
    w = state.physical()
    if not np.all(np.isfinite(w)):
        raise NaNDetected(f"non-finite values at t = {state.t}")
    series.t.append(state.t)
    series.l2.append(math.sqrt(grid.sq_norm(state.w_hat)))
    series.l3.append(lq_norm(w, 3.0, grid.vol))
    for q in q_list:
        series.lq.setdefault(q, []).append(lq_norm(w, q, grid.vol))
    series.grad_l2.append(math.sqrt(grid.grad_sq(state.w_hat)))
    if background.is_zero:
        series.cross.append(0.0)
    else:
        series.cross.append(float(grid.vol * np.einsum("inmk,jnmk,ijnmk->", w, w, background.grad)))
    return w


def run_sim(config: SimConfig, background: Background | None = None,
            state: SpectralState | None = None) -> NormSeries:
    """Time-step the perturbation equations and record norms.

    Raises
    ------
    CFLViolation
        If ``dt > 0.5 h / sup|u + w|`` at a recorded step.
    NaNDetected
        If a non-finite value appears.
    """
    config.validate()
    bg = background if background is not None else make_background(config.params, config)
    _check_cfl(bg.sup, config.h, config.dt)
    st = state if state is not None else initial_state(config)
    series = NormSeries(lq={q: [] for q in config.q_list})
    w = _record(series, st, bg, config.q_list)
    for n in range(1, config.n_steps + 1):
        st = nonlinear_step(st, bg, config.dt)
        st = SpectralState(st.w_hat, n * config.dt, st.L)
        if n % config.record_every == 0 or n == config.n_steps:
            w = _record(series, st, bg, config.q_list)
            total = float(np.sqrt(np.max(np.sum((w + bg.u) ** 2, axis=0))))
            _check_cfl(total, config.h, config.dt)
    series.final_state = st
    return series


# --------------------------------------------------------------------------
# energy balance and envelope
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EnergyReport:
    """Discrete energy balance of a series recorded at every step.

    ``defects[n] = (E_{n+1} - E_n)/dt + ((D + X)_n + (D + X)_{n+1}) / 2`` with
    ``E = ||w||^2 / 2``, ``D = ||grad w||^2``, ``X = int (w.grad u).w``.
    ``ratios`` are ``|X| / D`` per recorded time (0 where ``D = 0``).
    ``bound`` is ``comparison * K_grad`` of the gridded background; it is
    reported, not asserted.
    """

    defects: np.ndarray
    max_defect: float
    ratios: np.ndarray
    max_ratio: float
    k_background: float
    comparison: float
    bound: float

    @property
    def ratio_within_bound(self) -> bool:
        return self.max_ratio <= self.bound


def energy_report(series: NormSeries, background: Background | None = None, comparison: float = 4.0) -> EnergyReport:
    t = np.asarray(series.t)
    e = 0.5 * np.asarray(series.l2) ** 2
    d = np.asarray(series.grad_l2) ** 2
    x = np.asarray(series.cross)
    s = d + x
    dt = np.diff(t)
    defects = np.diff(e) / dt + 0.5 * (s[:-1] + s[1:]) if len(t) > 1 else np.zeros(0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(d > 0.0, np.abs(x) / d, 0.0)
    kb = background.K.k_grad if background is not None else 0.0
    return EnergyReport(
        defects,
        float(np.max(np.abs(defects))) if defects.size else 0.0,
        ratios,
        float(np.max(ratios)) if ratios.size else 0.0,
        kb,
        comparison,
        comparison * kb,
    )


@dataclass(frozen=True)
class EnvelopeReport:
    q: float
    tau: float
    t_min: float
    crossings: list[dict]
    checked: int

    @property
    def below(self) -> bool:
        return not self.crossings

    def describe(self) -> str:
        if self.below:
            return f"||w||_{_qname(self.q)} below the envelope at all {self.checked} times t >= {self.t_min}"
        first = self.crossings[0]
        return (
            f"{len(self.crossings)} of {self.checked} times exceed the envelope (q={self.q}, tau={self.tau}); "
            f"first at t={first['t']:.6g}: norm={first['norm']:.6g} envelope={first['envelope']:.6g}"
        )


def envelope_comparison(series: NormSeries, q: float = 6.0, tau: float = 0.5, t_min: float | None = None,
                        constant=None) -> EnvelopeReport:
    """Compare ``||w(t)||_q`` with the decay envelope for ``t >= t_min``.

    ``t_min`` defaults to a tenth of the final time. Every crossing is listed
    with its time, norm and envelope value.
    """
    from .decay import decay_envelope, sharp_constant

    if q not in series.lq:
        raise ConfigError(f"series has no L^{q} norms")
    t = np.asarray(series.t)
    t_min = 0.1 * t[-1] if t_min is None else t_min
    w0 = series.l3[0]
    const = constant or sharp_constant
    crossings = []
    checked = 0
    for ti, v in zip(t, series.lq[q]):
        if ti < t_min or ti <= 0.0:
            continue
        checked += 1
        env = decay_envelope(q, tau, w0, ti, constant=const)
        if v > env:
            crossings.append({"t": float(ti), "norm": float(v), "envelope": float(env), "w0_l3": w0})
    return EnvelopeReport(q, tau, t_min, crossings, checked)


# --------------------------------------------------------------------------
# Picard iteration for the linear problem
# --------------------------------------------------------------------------


def _sup_l3(grid: Grid, traj: Sequence[np.ndarray]) -> float:
    return max(lq_norm(grid.inverse(a), 3.0, grid.vol) for a in traj)


@dataclass
class PicardResult:
    """``ratios[k-1] = D(a_{k+1}, a_k) / D(a_k, a_{k-1})`` with ``D = sup_t ||.||_3``."""

    differences: list[float]
    ratios: list[float]
    final: list[np.ndarray] = field(repr=False)
    times: np.ndarray = field(repr=False, default=None)


def picard_linear(w0: SpectralState, background: Background, config: SimConfig, K: int = 6) -> PicardResult:
    """Picard iterates for the linear problem on ``[0, config.T]``.

    ``a_0 = 0`` and ``a_k`` solves the heat system with source
    ``-P div(u (x) a_{k-1} + a_{k-1} (x) u)`` and initial value ``w0``, by the
    exponential trapezoid rule ``a_{n+1} = E a_n + dt/2 (E S_n + S_{n+1})``.
    A ratio ``0/0`` is reported as 0.

    Raises
    ------
    PicardDivergence
        If ratios exceed 1 for three consecutive ``k``.
    """
    grid = w0.grid
    dt, m = config.dt, config.n_steps
    e = np.exp(-dt * grid.k2)
    u = None if background.is_zero else background.u

    def source(a_hat):
        if u is None:
            return np.zeros_like(a_hat)
        return _flux(grid, a_hat, u, nonlinear=False)[0]

    prev = [np.zeros_like(w0.w_hat) for _ in range(m + 1)]
    diffs: list[float] = []
    ratios: list[float] = []
    above = 0
    for _ in range(K):
        src = [source(a) for a in prev]
        cur = [w0.w_hat.copy()]
        for n in range(m):
            cur.append(e * cur[n] + 0.5 * dt * (e * src[n] + src[n + 1]))
        diffs.append(_sup_l3(grid, [c - p for c, p in zip(cur, prev)]))
        if len(diffs) >= 2:
            num, den = diffs[-1], diffs[-2]
            r = 0.0 if num == 0.0 and den == 0.0 else (num / den if den > 0.0 else math.inf)
            ratios.append(r)
            above = above + 1 if r > 1.0 else 0
            if above >= 3:
                raise PicardDivergence(f"contraction ratios above 1: {ratios[-3:]}")
        prev = cur
    return PicardResult(diffs, ratios, prev, dt * np.arange(m + 1))


# --------------------------------------------------------------------------
# Duhamel term and the abstract fixed point
# --------------------------------------------------------------------------


def linear_trajectory(w0: SpectralState, background: Background, dt: float, steps: int) -> np.ndarray:
    """``e^{-t L} w0`` at ``t = n dt``, shape ``(steps + 1, 3, N, N, N//2 + 1)``."""
    out = [w0.w_hat]
    st = w0
    for _ in range(steps):
        st = linear_step(st, background, dt)
        out.append(st.w_hat)
    return np.stack(out)


def duhamel_rhs(traj: np.ndarray, background: Background, dt: float, other: np.ndarray | None = None,
                L: float = 2.0 * math.pi, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> np.ndarray:
    """``N(w, v)(t_n) = -int_0^t e^{-(t-s)L} P div(w (x) v) ds`` on the stored times.

    ``z_{n+1} = Lstep(z_n) + dt/2 (Lstep(S_n) + S_{n+1})`` with
    ``S = -P div(w (x) v)`` and ``Lstep`` one :func:`linear_step`.

    Raises
    ------
    MemoryBudgetExceeded
        If input plus output trajectories exceed ``memory_budget`` bytes.
    """
    v = traj if other is None else other
    need = traj.nbytes * (2 if other is None else 3)
    if need > memory_budget:
        raise MemoryBudgetExceeded(f"Duhamel integral needs {need} bytes, budget {memory_budget}")
    m = traj.shape[0]
    grid = grid_for(traj.shape[2], L)

    def lstep(a_hat):
        return linear_step(SpectralState(a_hat, 0.0, L), background, dt).w_hat

    out = np.zeros_like(traj)
    s_prev = bilinear_flux(grid, traj[0], v[0])
    for n in range(m - 1):
        s_next = bilinear_flux(grid, traj[n + 1], v[n + 1])
        out[n + 1] = lstep(out[n]) + 0.5 * dt * (lstep(s_prev) + s_next)
        s_prev = s_next
    return out


def sup_l3_norm(traj: np.ndarray, L: float = 2.0 * math.pi) -> float:
    """``sup_n ||traj[n]||_3``."""
    grid = grid_for(traj.shape[2], L)
    return _sup_l3(grid, traj)


@dataclass
class FixedPointResult:
    x: object
    iterations: int
    differences: list[float]
    norm_estimate: float
    a_norm: float
    x_norm: float


def _default_sampler(a, rng):
    arr = np.asarray(a)
    if np.iscomplexobj(arr):
        return rng.standard_normal(arr.shape) + 1j * rng.standard_normal(arr.shape)
    return rng.standard_normal(arr.shape) if arr.shape else float(rng.standard_normal())


def bilinear_fixed_point(
    a,
    N: Callable,
    norm: Callable = lambda v: float(np.max(np.abs(v))),
    tol: float = 1e-12,
    max_iter: int = 200,
    samples: int = 16,
    seed: int = 0,
    sampler: Callable | None = None,
) -> FixedPointResult:
    """Solve ``x = a + N(x, x)`` by iteration from ``x_0 = a``.

    ``||N||`` is estimated as the largest ``||N(u, v)||`` over ``samples``
    random pairs normalized to ``||u|| = ||v|| = 1``.

    Raises
    ------
    SmallnessViolated
        If ``4 ||N||_est ||a|| >= 1``.
    NoConverge
        If successive differences stay above ``tol`` after ``max_iter`` steps.
    """
    rng = np.random.default_rng(seed)
    draw = sampler or _default_sampler
    n_est = 0.0
    for _ in range(samples):
        u, v = draw(a, rng), draw(a, rng)
        nu, nv = norm(u), norm(v)
        if nu == 0.0 or nv == 0.0:
            continue
        n_est = max(n_est, norm(N(u / nu, v / nv)))
    a_norm = norm(a)
    if not 4.0 * n_est * a_norm < 1.0:
        raise SmallnessViolated(f"4 ||N|| ||a|| = {4.0 * n_est * a_norm:.4g} >= 1")
    x = a
    diffs = []
    for k in range(1, max_iter + 1):
        x_new = a + N(x, x)
        diffs.append(norm(x_new - x))
        x = x_new
        if diffs[-1] < tol:
            return FixedPointResult(x, k, diffs, n_est, a_norm, norm(x))
    raise NoConverge(f"no convergence after {max_iter} iterations (last difference {diffs[-1]:.3g})")


# --------------------------------------------------------------------------
# checkpoints
# --------------------------------------------------------------------------


def write_checkpoint(path: str | Path, state: SpectralState) -> None:
    """Binary checkpoint.

    Layout (little-endian): 8-byte magic ``HOMSTAB\\0``, uint32 version,
    uint32 N, float64 L, float64 t, then the full ``fftn`` coefficients of the
    three components as complex128 (real, imaginary float64 pairs) in C order
    over ``(component, k1, k2, k3)``, each axis in FFT order
    ``0, 1, ..., N/2 - 1, -N/2, ..., -1``.
    """
    full = sfft.fftn(state.physical(), axes=(-3, -2, -1)).astype("<c16")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, state.N, float(state.L), float(state.t)))
        fh.write(full.tobytes(order="C"))


def read_checkpoint(path: str | Path) -> SpectralState:
    data = Path(path).read_bytes()
    magic, version, n, L, t = _HEADER.unpack_from(data, 0)
    if magic != CHECKPOINT_MAGIC or version != CHECKPOINT_VERSION:
        raise ConfigError(f"{path} is not a version-{CHECKPOINT_VERSION} checkpoint")
    full = np.frombuffer(data, dtype="<c16", offset=_HEADER.size).reshape(3, n, n, n)
    w_hat = np.ascontiguousarray(full[..., : n // 2 + 1]).astype(complex)
    return SpectralState(w_hat, t, L)


def config_dict(config: SimConfig) -> dict:
    d = asdict(config)
    d["q_list"] = list(config.q_list)
    return d


def with_dt(config: SimConfig, dt: float) -> SimConfig:
    return replace(config, dt=dt)
