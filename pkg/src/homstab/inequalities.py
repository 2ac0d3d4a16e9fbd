"""Functional-inequality toolbox.

* Admissibility conditions of the anisotropic Caffarelli-Kohn-Nirenberg
  (CKN) inequality

      || |x'|^a1 |x|^b1 u ||_{s1} <= C || |x'|^a2 |x|^b2 grad u ||_{s2}^theta
                                       || |x'|^a3 |x|^b3 u ||_{s3}^(1 - theta)

  on R^n, where ``x' = (x_1, ..., x_{n-1})``, and an empirical constant from
  sampled axisymmetric bumps.
* Index sets of the power weights ``|x'|^t1 |x|^t2`` in the Muckenhoupt class
  ``A_q`` and Monte-Carlo ball averages.
* The logarithmic Sobolev inequality on R^3, the Riesz-transform constant
  ``cot(pi / 2p)`` and the Lyapunov interpolation inequality.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss
from scipy import special
from scipy.stats import qmc

from .errors import ConditionsFail, ConfigError, DomainError

EQ_TOL = 1e-12


# --------------------------------------------------------------------------
# CKN conditions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CknSpec:
    """Exponents of the three norms; slot 2 carries the gradient.

    Raises
    ------
    ConfigError
        Unless ``s1, s3 > 0``, ``s2 >= 1``, ``0 <= theta <= 1`` and ``n >= 2``.
    """

    n: int
    theta: float
    s: tuple[float, float, float]
    alpha: tuple[float, float, float]
    beta: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(float(v) for v in self.s))
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))
        if len(self.s) != 3 or len(self.alpha) != 3 or len(self.beta) != 3:
            raise ConfigError("s, alpha and beta need three entries each")
        s1, s2, s3 = self.s
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError("n must be an integer >= 2")
        if not (s1 > 0.0 and s3 > 0.0 and s2 >= 1.0 and 0.0 <= self.theta <= 1.0):
            raise ConfigError("need s1, s3 > 0, s2 >= 1 and 0 <= theta <= 1")

    @classmethod
    def hardy_type(cls, alpha: float) -> "CknSpec":
        """``|| |x'|^-alpha |x|^(alpha-1) u ||_2 <= C || grad u ||_2`` on R^3."""
        return cls(3, 1.0, (2.0, 2.0, 2.0), (-alpha, 0.0, 0.0), (alpha - 1.0, 0.0, 0.0))


@dataclass(frozen=True)
class ConditionReport:
    integrability: bool
    scaling: bool
    beta_bound: bool
    total_weight: bool
    axis_scaling: bool
    endpoint_exponents: bool
    integrability_slots: tuple[bool, bool, bool] = (True, True, True)

    @property
    def overall(self) -> bool:
        return self.integrability and self.scaling and self.beta_bound and self.total_weight and self.axis_scaling and self.endpoint_exponents

    def flags(self) -> dict[str, bool]:
        return {
            "integrability": self.integrability,
            "scaling": self.scaling,
            "beta_bound": self.beta_bound,
            "total_weight": self.total_weight,
            "axis_scaling": self.axis_scaling,
            "endpoint_exponents": self.endpoint_exponents,
        }


def _measure_ok(n: int, s: float, a: float, b: float, tol: float) -> bool:
    first = 1.0 / s + a / (n - 1)
    if not first > tol:
        return False
    if b >= 0.0:
        return True
    return 1.0 / s + (a + b) / n > tol


def ckn_conditions(spec: CknSpec, tol: float = EQ_TOL) -> ConditionReport:
    """Evaluate the admissibility conditions.

    Strict inequalities require a margin above ``tol``; non-strict ones and
    equalities allow ``tol`` of slack.
    """
    n, th = spec.n, spec.theta
    (s1, s2, s3), (a1, a2, a3), (b1, b2, b3) = spec.s, spec.alpha, spec.beta
    slots = tuple(_measure_ok(n, s, a, b, tol) for s, a, b in zip(spec.s, spec.alpha, spec.beta))
    lhs3 = 1.0 / s1 + (a1 + b1) / n
    mid2 = 1.0 / s2 + (a2 + b2 - 1.0) / n
    mid3 = 1.0 / s3 + (a3 + b3) / n
    scaling = abs(lhs3 - (th * mid2 + (1.0 - th) * mid3)) <= tol
    beta_bound = b1 <= th * b2 + (1.0 - th) * b3 + tol
    total_weight = a1 + b1 <= th * (a2 + b2) + (1.0 - th) * (a3 + b3) + tol
    lhs7 = 1.0 / s1 + a1 / (n - 1)
    rhs7 = th * (1.0 / s2 + (a2 - 1.0) / (n - 1)) + (1.0 - th) * (1.0 / s3 + a3 / (n - 1))
    axis_scaling = lhs7 >= rhs7 - tol
    triggered = (
        (abs(lhs3 - mid2) <= tol and abs(mid2 - mid3) <= tol)
        or th == 0.0
        or th == 1.0
        or abs(lhs7 - rhs7) <= tol
    )
    endpoint_exponents = (not triggered) or (1.0 / s1 <= th / s2 + (1.0 - th) / s3 + tol)
    return ConditionReport(all(slots), scaling, beta_bound, total_weight, axis_scaling, endpoint_exponents, slots)


# --------------------------------------------------------------------------
# empirical CKN constant
# --------------------------------------------------------------------------

BUMP_RADIUS = 3.0
BUMP_POWER = 4


@dataclass(frozen=True)
class Bump:
    """Axisymmetric bump centred on the axis at ``x_n = z0``.

    ``u = exp(-t/2) (1 - t/R^2)^4`` for ``t = rho^2/a^2 + (z - z0)^2/b^2 < R^2``
    and zero outside; ``rho = |x'|`` and ``z = x_n``.
    """

    a: float
    b: float
    z0: float

    def dilate(self, lam: float) -> "Bump":
        """Parameters of ``x -> u(lam x)``."""
        return Bump(self.a / lam, self.b / lam, self.z0 / lam)

    def values(self, rho: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``u``, ``du/drho`` and ``du/dz``."""
        p = rho / self.a
        q = (z - self.z0) / self.b
        t = p * p + q * q
        inside = t < BUMP_RADIUS**2
        cut = np.where(inside, 1.0 - t / BUMP_RADIUS**2, 0.0)
        g = np.exp(-0.5 * t)
        u = g * cut**BUMP_POWER
        # du/dt
        dudt = g * (-0.5 * cut**BUMP_POWER - BUMP_POWER * cut ** (BUMP_POWER - 1) / BUMP_RADIUS**2)
        dudt = np.where(inside, dudt, 0.0)
        return u, dudt * 2.0 * p / self.a, dudt * 2.0 * q / self.b


def _graded_panels(length: float, uniform: int, levels: int) -> list[tuple[float, float]]:
    """Panels on ``[0, length]``: ``uniform`` equal panels, the first split geometrically toward 0."""
    edges = np.linspace(0.0, length, uniform + 1)
    panels = [(edges[i], edges[i + 1]) for i in range(1, uniform)]
    hi = edges[1]
    for _ in range(levels):
        panels.append((0.5 * hi, hi))
        hi *= 0.5
    panels.append((0.0, hi))
    return sorted(panels)


def _rule_1d(panels: list[tuple[float, float]], order: int, jacobi_first: float | None = None):
    x, w = leggauss(order)
    nodes, weights = [], []
    for k, (lo, hi) in enumerate(panels):
        if k == 0 and jacobi_first is not None and lo == 0.0:
            # weight rho^e on [0, hi]: map to Gauss-Jacobi with beta = e
            e = jacobi_first
            xj, wj = special.roots_jacobi(order, 0.0, e)
            nodes.append(0.5 * hi * (xj + 1.0))
            weights.append(wj * (0.5 * hi) ** (1.0 + e))
        else:
            nodes.append(0.5 * (hi - lo) * (x + 1.0) + lo)
            weights.append(0.5 * (hi - lo) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _z_panels(lo: float, hi: float, uniform: int, levels: int) -> list[tuple[float, float]]:
    if lo < 0.0 < hi:
        left = [(-b, -a) for a, b in _graded_panels(-lo, max(2, int(uniform * -lo / (hi - lo)) + 1), levels)]
        right = _graded_panels(hi, max(2, int(uniform * hi / (hi - lo)) + 1), levels)
        return sorted(left + right)
    edges = np.linspace(lo, hi, uniform + 1)
    return [(edges[i], edges[i + 1]) for i in range(uniform)]


def _weighted_norm(bump: Bump, n: int, s: float, a: float, b: float, gradient: bool,
                   order: int, uniform: int, levels: int) -> float:
    """``|| |x'|^a |x|^b f ||_s`` with ``f = u`` or ``|grad u|``, by cylindrical quadrature."""
    rho_max = BUMP_RADIUS * bump.a
    z_lo, z_hi = bump.z0 - BUMP_RADIUS * bump.b, bump.z0 + BUMP_RADIUS * bump.b
    # rho^(n-2) from the measure and rho^(a s) from the weight go into the Jacobi rule
    e = a * s + (n - 2)
    r_nodes, r_w = _rule_1d(_graded_panels(rho_max, uniform, levels), order, jacobi_first=e)
    z_nodes, z_w = _rule_1d(_z_panels(z_lo, z_hi, uniform, levels), order)
    R, Z = np.meshgrid(r_nodes, z_nodes, indexing="ij")
    W = np.outer(r_w, z_w)
    u, ur, uz = bump.values(R, Z)
    f = np.hypot(ur, uz) if gradient else np.abs(u)
    n_first = order  # nodes of the Jacobi panel carry rho^e already
    rho_pow = R**e
    rho_pow[:n_first, :] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        dens = rho_pow * (R * R + Z * Z) ** (0.5 * b * s) * f**s
    dens = np.where(f > 0.0, dens, 0.0)
    sphere = 2.0 * math.pi ** ((n - 1) / 2.0) / math.gamma((n - 1) / 2.0)  # |S^{n-2}|
    total = sphere * float(np.sum(W * dens))
    return total ** (1.0 / s)


@dataclass(frozen=True)
class CknSample:
    bump: Bump
    ratio: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class CknEmpirical:
    constant: float
    samples: list[CknSample] = field(repr=False)
    seed: int = 0


def ckn_ratio(spec: CknSpec, bump: Bump, order: int = 10, uniform: int = 12, levels: int = 30) -> CknSample:
    """LHS / RHS of the CKN inequality for one bump."""
    n, th = spec.n, spec.theta
    (s1, s2, s3), (a1, a2, a3), (b1, b2, b3) = spec.s, spec.alpha, spec.beta
    lhs = _weighted_norm(bump, n, s1, a1, b1, False, order, uniform, levels)
    rhs = 1.0
    if th > 0.0:
        rhs *= _weighted_norm(bump, n, s2, a2, b2, True, order, uniform, levels) ** th
    if th < 1.0:
        rhs *= _weighted_norm(bump, n, s3, a3, b3, False, order, uniform, levels) ** (1.0 - th)
    return CknSample(bump, lhs / rhs, lhs, rhs)


def sample_bumps(samples: int, seed: int, decades: float = 4.0) -> list[Bump]:
    """Random bumps with ``a, b`` log-uniform over ``decades`` decades around 1.

    The centre offset ``z0`` is uniform in ``[-2b, 2b]``, so the support may
    or may not contain the origin.
    """
    rng = np.random.default_rng(seed)
    half = decades / 2.0
    out = []
    for _ in range(samples):
        a = 10.0 ** rng.uniform(-half, half)
        b = 10.0 ** rng.uniform(-half, half)
        z0 = b * rng.uniform(-2.0, 2.0)
        out.append(Bump(a, b, z0))
    return out


def ckn_empirical(
    spec: CknSpec,
    family: Callable[[int, int], Sequence[Bump]] = sample_bumps,
    samples: int = 50,
    seed: int = 0,
) -> CknEmpirical:
    """Largest observed ratio over sampled bumps (an observed max, not a sharp constant).

    Raises
    ------
    ConditionsFail
        If ``spec`` fails :func:`ckn_conditions`.
    """
    rep = ckn_conditions(spec)
    if not rep.overall:
        failed = [k for k, v in rep.flags().items() if not v]
        raise ConditionsFail(f"CKN conditions fail: {', '.join(failed)}")
    results = [ckn_ratio(spec, b) for b in family(samples, seed)]
    return CknEmpirical(max(r.ratio for r in results), results, seed)


# --------------------------------------------------------------------------
# A_q power weights
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightSpec:
    """Power weight ``|x'|^theta1 |x|^theta2`` tested against ``A_q`` on R^n."""

    theta1: float
    theta2: float
    q: float
    n: int = 3

    def __post_init__(self):
        if not self.q > 1.0:
            raise ConfigError("q must exceed 1")
        if self.n < 2:
            raise ConfigError("n must be >= 2")


def index_sets(spec: WeightSpec) -> dict[str, bool]:
    """Membership of ``(theta1, theta2)`` in the four index sets."""
    t1, t2, n, q = spec.theta1, spec.theta2, spec.n, spec.q
    return {
        "A": t1 > -(n - 1) and t2 >= 0.0,
        "B": t1 > -(n - 1) and t2 < 0.0 and t1 + t2 > -n,
        "C": t1 < (n - 1) * (q - 1) and t2 <= 0.0,
        "D": t1 < (n - 1) * (q - 1) and t2 > 0.0 and t1 + t2 < n * (q - 1),
    }


def aq_membership(spec: WeightSpec) -> bool:
    """``(theta1, theta2)`` in ``(A or B) and (C or D)``."""
    s = index_sets(spec)
    return (s["A"] or s["B"]) and (s["C"] or s["D"])


DEFAULT_CENTERS = ((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.6, 0.0, 0.8))


@dataclass(frozen=True)
class MuckenhouptResult:
    max_ratio: float
    min_ratio: float
    ratios: np.ndarray = field(repr=False)
    centers: tuple = field(repr=False, default=DEFAULT_CENTERS)
    radii: np.ndarray = field(repr=False, default=None)

    @property
    def growth(self) -> float:
        return self.max_ratio / self.min_ratio

    @property
    def bounded(self) -> bool:
        """Less than 2x variation over every ball in the sweep."""
        return bool(np.isfinite(self.growth) and self.growth < 2.0)


def _ball_points(m: int, seed: int) -> np.ndarray:
    """Scrambled Sobol points mapped to the unit ball (volume-uniform)."""
    u = qmc.Sobol(3, scramble=True, seed=seed).random_base2(m)
    r = np.cbrt(u[:, 0])
    ct = 2.0 * u[:, 1] - 1.0
    st = np.sqrt(np.maximum(0.0, 1.0 - ct * ct))
    ph = 2.0 * math.pi * u[:, 2]
    return np.stack([r * st * np.cos(ph), r * st * np.sin(ph), r * ct], axis=1)


def muckenhoupt_ratio(
    spec: WeightSpec,
    centers: Sequence[Sequence[float]] = DEFAULT_CENTERS,
    radii: Sequence[float] | None = None,
    log2_samples: int = 14,
    seed: int = 0,
) -> MuckenhouptResult:
    """Muckenhoupt products ``avg_B w (avg_B w^(-1/(q-1)))^(q-1)`` over balls.

    Radii default to 13 values spanning ``1e-3`` to ``1e3``. Only ``n = 3``
    is sampled.
    """
    if spec.n != 3:
        raise DomainError("ball sampling is implemented for n = 3")
    radii = np.logspace(-3, 3, 13) if radii is None else np.asarray(radii, dtype=float)
    unit = _ball_points(log2_samples, seed)
    ratios = np.empty((len(centers), len(radii)))
    for i, c in enumerate(centers):
        for j, r in enumerate(radii):
            pts = np.asarray(c, dtype=float) + r * unit
            ax = np.hypot(pts[:, 0], pts[:, 1])
            rad = np.linalg.norm(pts, axis=1)
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                logw = spec.theta1 * np.log(ax) + spec.theta2 * np.log(rad)
                # scale by the centre value to keep both averages finite
                shift = np.median(logw[np.isfinite(logw)])
                w = np.exp(logw - shift)
                dual = np.exp(-(logw - shift) / (spec.q - 1.0))
                ratios[i, j] = np.mean(w) * np.mean(dual) ** (spec.q - 1.0)
    ratios = np.where(np.isnan(ratios), np.inf, ratios)
    return MuckenhouptResult(float(np.max(ratios)), float(np.min(ratios)), ratios, tuple(centers), radii)


# 20 curated (theta1, theta2, q) points: members well inside the index sets
# and non-members whose dual or primal weight is not locally integrable.
CURATED_AQ = (
    (0.0, 0.0, 2.0),
    (0.5, 0.0, 2.0),
    (-0.5, 0.0, 2.0),
    (0.0, 0.5, 2.0),
    (0.0, -0.5, 2.0),
    (0.3, 0.3, 3.0),
    (1.0, 0.0, 3.0),
    (-0.3, -0.3, 3.0),
    (0.5, -0.5, 2.5),
    (-0.5, 0.5, 2.5),
    (5.0, 0.0, 2.0),
    (-2.5, 0.0, 2.0),
    (-3.0, 0.0, 3.0),
    (3.0, 0.0, 2.0),
    (6.0, 0.0, 3.0),
    (-2.2, 1.0, 2.0),
    (-4.0, 2.0, 3.0),
    (4.5, -1.0, 3.0),
    (2.5, 0.0, 2.0),
    (-2.1, 0.5, 2.0),
)


# --------------------------------------------------------------------------
# logarithmic Sobolev inequality on R^3
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianMixture:
    """``f(x) = sum_k c_k exp(-|x - m_k|^2 / (2 s_k^2))`` on R^3 (positive weights)."""

    weights: tuple[float, ...]
    means: tuple[tuple[float, float, float], ...]
    scales: tuple[float, ...]

    @classmethod
    def gaussian(cls, width: float) -> "GaussianMixture":
        return cls((1.0,), ((0.0, 0.0, 0.0),), (width,))

    def dilate(self, lam: float) -> "GaussianMixture":
        """Parameters of ``x -> f(lam x)``."""
        return GaussianMixture(
            self.weights,
            tuple(tuple(m_i / lam for m_i in m) for m in self.means),
            tuple(s / lam for s in self.scales),
        )

    def values(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        f = np.zeros(x.shape[0])
        grad = np.zeros_like(x)
        for c, m, s in zip(self.weights, self.means, self.scales):
            d = x - np.asarray(m)
            g = c * np.exp(-0.5 * np.sum(d * d, axis=1) / (s * s))
            f += g
            grad -= g[:, None] * d / (s * s)
        return f, grad


@dataclass(frozen=True)
class LogSobolevTerms:
    entropy: float
    norm2: float
    dirichlet: float


def log_sobolev_terms(f: GaussianMixture, order: int = 48) -> LogSobolevTerms:
    """``int f^2 ln(f^2 / ||f||^2)``, ``||f||_2^2`` and ``int |grad f|^2`` on R^3.

    Tensor Gauss-Hermite grid centred at the weighted mean of the components
    with half-width matched to the widest component.
    """
    x, w = hermgauss(order)
    centre = np.average(np.asarray(f.means), axis=0, weights=f.weights)
    spread = max(f.scales) + max(np.linalg.norm(np.asarray(m) - centre) for m in f.means) / 3.0
    # x = L t turns exp(-t^2) into exp(-x^2 / L^2), the square of a width-L Gaussian
    L = spread
    node = x * L
    wt = w * L * np.exp(x * x)
    X, Y, Z = np.meshgrid(node, node, node, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1) + centre
    W = (wt[:, None, None] * wt[None, :, None] * wt[None, None, :]).ravel()
    val, grad = f.values(pts)
    f2 = val * val
    norm2 = float(W @ f2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = np.where(f2 > 0.0, f2 * np.log(f2 / norm2), 0.0)
    return LogSobolevTerms(float(W @ ent), norm2, float(W @ np.sum(grad * grad, axis=1)))


def log_sobolev_margin(f: GaussianMixture, a: float, order: int = 48) -> float:
    """``(RHS - LHS) / ||f||_2^2`` for

    ``int f^2 ln(f^2/||f||^2) + 3 (1 + ln a) ||f||^2 <= (a^2/pi) int |grad f|^2``.

    The normalization makes the margin invariant under ``f -> k f``.
    """
    if not a > 0.0:
        raise DomainError("a must be positive")
    t = log_sobolev_terms(f, order)
    lhs = t.entropy + 3.0 * (1.0 + math.log(a)) * t.norm2
    rhs = a * a / math.pi * t.dirichlet
    return (rhs - lhs) / t.norm2


def optimal_gaussian_width(a: float) -> float:
    """Width ``s`` of the equality case ``exp(-pi |x|^2 / (2 a^2))``."""
    return a / math.sqrt(math.pi)


def sample_log_sobolev(samples: int, seed: int) -> list[tuple[GaussianMixture, float]]:
    """Pairs ``(f, a)``: Gaussians over 4 width decades (half at the equality
    ``a``, half at random ``a``) and random 2-3 component mixtures."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(samples):
        kind = k % 3
        width = 10.0 ** rng.uniform(-2.0, 2.0)
        if kind == 0:
            f = GaussianMixture.gaussian(width)
            a = width * math.sqrt(math.pi)
        elif kind == 1:
            f = GaussianMixture.gaussian(width)
            a = width * math.sqrt(math.pi) * 10.0 ** rng.uniform(-1.0, 1.0)
        else:
            m = int(rng.integers(2, 4))
            weights = tuple(float(v) for v in rng.uniform(0.2, 1.0, m))
            scales = tuple(float(width * v) for v in 10.0 ** rng.uniform(-0.3, 0.3, m))
            means = tuple(tuple(float(c) for c in width * rng.normal(0.0, 0.7, 3)) for _ in range(m))
            f = GaussianMixture(weights, means, scales)
            a = width * math.sqrt(math.pi) * 10.0 ** rng.uniform(-0.5, 0.5)
        out.append((f, a))
    return out


def log_sobolev_check(pairs: Sequence[tuple[GaussianMixture, float]] | None = None,
                      samples: int = 100, seed: int = 0) -> float:
    """Smallest normalized margin over ``pairs`` (default: :func:`sample_log_sobolev`)."""
    pairs = sample_log_sobolev(samples, seed) if pairs is None else pairs
    return min(log_sobolev_margin(f, a) for f, a in pairs)


# --------------------------------------------------------------------------
# scalar constants and interpolation
# --------------------------------------------------------------------------


def riesz_constant(p: float) -> float:
    """``H_p = cot(pi / (2 p))``."""
    if not p > 1.0:
        raise DomainError("p must exceed 1")
    return 1.0 / math.tan(math.pi / (2.0 * p))


def lebesgue_interpolation_check(u, q0: float, q1: float, lam: float, weights=None) -> float:
    """``||u||_q0^(1-lam) ||u||_q1^lam - ||u||_q`` with ``1/q = (1-lam)/q0 + lam/q1``.

    Norms are discrete: ``(sum w |u|^p)^(1/p)`` with cell weights ``w``
    (default 1). The margin is divided by ``||u||_q`` so it is scale-free.
    """
    if not (q0 >= 1.0 and q1 >= 1.0 and 0.0 <= lam <= 1.0):
        raise DomainError("need q0, q1 >= 1 and 0 <= lam <= 1")
    a = np.abs(np.asarray(u, dtype=float)).ravel()
    w = np.ones_like(a) if weights is None else np.broadcast_to(np.asarray(weights, float), a.shape).ravel()
    q = 1.0 / ((1.0 - lam) / q0 + lam / q1)

    def norm(p):
        m = a.max()
        if m == 0.0:
            return 0.0
        return m * float(np.sum(w * (a / m) ** p)) ** (1.0 / p)

    nq = norm(q)
    if nq == 0.0:
        return 0.0
    return (norm(q0) ** (1.0 - lam) * norm(q1) ** lam - nq) / nq


# --------------------------------------------------------------------------
# sweeps
# --------------------------------------------------------------------------

SWEEP_COLUMNS = ("n", "theta", "s1", "s2", "s3", "alpha1", "alpha2", "alpha3", "beta1", "beta2",
                 "beta3", "integrability", "scaling", "beta_bound", "total_weight", "axis_scaling", "endpoint_exponents", "overall",
                 "empirical_constant", "samples", "seed")


def ckn_sweep(specs: Sequence[CknSpec], path: str | Path, samples: int = 20, seed: int = 0) -> list[dict]:
    """One CSV row per spec with condition flags and (if admissible) the empirical constant."""
    rows = []
    for spec in specs:
        rep = ckn_conditions(spec)
        emp = ckn_empirical(spec, samples=samples, seed=seed).constant if rep.overall else float("nan")
        row = {"n": spec.n, "theta": spec.theta}
        row.update({f"s{i + 1}": v for i, v in enumerate(spec.s)})
        row.update({f"alpha{i + 1}": v for i, v in enumerate(spec.alpha)})
        row.update({f"beta{i + 1}": v for i, v in enumerate(spec.beta)})
        row.update({k: int(v) for k, v in rep.flags().items()})
        row.update({"overall": int(rep.overall), "empirical_constant": emp, "samples": samples, "seed": seed})
        rows.append(row)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in SWEEP_COLUMNS])
    return rows


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)
