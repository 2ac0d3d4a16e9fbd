"""Scalar functionals of the stationary fields.

* ``b``: the coefficient of the point force at the origin,

      b = int_{-1}^{1} y U'^2 - (2 - y^2) / (1 - y^2) U - y / (1 - y^2) U^2 dy.

  With ``y = tanh(xi)`` and ``dy = (1 - y^2) dxi`` the integrand becomes
  ``y U'^2 (1 - y^2) - (2 - y^2) U - y U^2`` in ``xi``. For interior
  branches (both endpoint values zero) it decays exponentially as
  ``|xi| -> inf``; a nonzero endpoint value makes the ``U`` term tend to a
  constant and the integral diverges.
* ``K``: three weighted sup-norms of the velocity and its gradient. By
  homogeneity each weight times the field is independent of ``r``, so every
  sup is a one-dimensional maximization over the polar angle.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import optimize

from .errors import Diverging
from .field import VelocityField, eval_gradient, eval_spherical
from .profile import ThetaProfile, evaluate, profile_summary, xi_of_s

INV_E = math.exp(-1.0)


# --------------------------------------------------------------------------
# force coefficient b
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadSpec:
    """Gauss-Legendre panels in ``xi`` on ``[-X, X]`` with ``s(X) = offset``.

    The three panel counts feed one Richardson step; ``order`` is the number
    of Gauss points per panel.
    """

    offset: float = 1e-10
    panels: tuple[int, int, int] = (64, 128, 256)
    order: int = 8
    endpoint_tol: float = 1e-8


@dataclass(frozen=True)
class BResult:
    value: float
    error: float
    tail: float
    raw: tuple[float, float, float]

    def __float__(self) -> float:
        return self.value


def _b_integrand(profile: ThetaProfile, xi: np.ndarray) -> np.ndarray:
    st = evaluate(profile, xi)
    y = np.tanh(xi)
    w = st.s * st.sigma
    return y * st.du * st.du * w - (2.0 - y * y) * st.u - y * st.u * st.u


def _gl_panels(f, a: float, b: float, panels: int, order: int) -> float:
    x, w = leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    pts = (half[:, None] * (x + 1.0) + lo[:, None]).ravel()
    weights = (half[:, None] * w).ravel()
    return float(weights @ f(pts))


def compute_b(profile: ThetaProfile, quad: QuadSpec | None = None) -> BResult:
    """Force coefficient ``b`` with an error estimate.

    The error estimate is the Richardson correction between the two finest
    panel counts plus the magnitude of the truncated tails, which are
    estimated from the integrand at the cut assuming exponential decay at the
    endpoint rate.

    Raises
    ------
    Diverging
        If either endpoint value differs from zero by more than
        ``quad.endpoint_tol``.
    """
    quad = quad or QuadSpec()
    if profile.is_zero:
        return BResult(0.0, 0.0, 0.0, (0.0, 0.0, 0.0))
    ends = (profile.endpoint_minus, profile.endpoint_plus)
    if max(abs(e) for e in ends) > quad.endpoint_tol:
        raise Diverging(f"endpoint values {ends} are not both zero; b diverges")
    x_max = xi_of_s(quad.offset)

    def f(xi):
        return _b_integrand(profile, xi)

    raw = tuple(_gl_panels(f, -x_max, x_max, n, quad.order) for n in quad.panels)
    # GL with m points per panel converges like h^(2m) on smooth integrands
    factor = 2.0 ** (2 * quad.order) - 1.0
    value = raw[2] + (raw[2] - raw[1]) / factor
    # tails: integrand ~ A exp(-rate |xi|) beyond the cut
    tail = 0.0
    for side, rate in ((-1.0, _rate(profile.params.c1)), (1.0, _rate(profile.params.c2))):
        tail += abs(float(f(np.array([side * x_max]))[0])) / rate
    error = abs(raw[2] - raw[1]) + tail
    return BResult(float(value), float(error), float(tail), raw)


def _rate(c_end: float) -> float:
    # offset decay rate 2 sqrt(1 + c) in xi; the U^2 term decays twice as fast
    return max(2.0 * math.sqrt(1.0 + c_end), 1e-3)


# --------------------------------------------------------------------------
# weighted sup-norms K
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeSpec:
    """Cone ``{x : |x'| <= rho |x|}`` around the x3-axis."""

    rho: float = INV_E

    def contains(self, x) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        rho_ax = np.hypot(x[..., 0], x[..., 1])
        return rho_ax <= self.rho * np.linalg.norm(x, axis=-1)


@dataclass(frozen=True)
class KReport:
    """Weighted sup-norms of a field.

    Attributes
    ----------
    k_cone : float
        sup of ``|x'|^(1/2) |x|^(1/2) |u|`` over the cone of aperture ``1/e``.
    k_outer : float
        sup of ``|x| |u|`` outside that cone.
    k_grad : float
        sup of ``|x'| |x| |grad u|`` over all off-axis points (Frobenius norm).
    """

    k_cone: float
    k_outer: float
    k_grad: float

    @property
    def k(self) -> float:
        return max(self.k_cone, self.k_outer, self.k_grad)


def _points_at(xi: np.ndarray, r: float = 1.0) -> np.ndarray:
    """Points at polar angle ``theta`` with ``cos(theta) = tanh(xi)`` in the x1-x3 plane."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return r * np.stack([1.0 / np.cosh(xi), np.zeros_like(xi), np.tanh(xi)], axis=1)


def weighted_magnitudes(field: VelocityField, xi, r: float = 1.0) -> dict[str, np.ndarray]:
    """The three weighted magnitudes at angle ``xi`` and radius ``r``."""
    pts = _points_at(xi, r)
    rad = np.linalg.norm(pts, axis=1)
    ax = np.abs(pts[:, 0])
    speed = np.linalg.norm(eval_spherical(field, pts), axis=1)
    grad = np.linalg.norm(eval_gradient(field, pts), axis=(1, 2))
    return {
        "cone": np.sqrt(ax * rad) * speed,
        "outer": rad * speed,
        "grad": ax * rad * grad,
    }


def _sup(field: VelocityField, key: str, intervals: list[tuple[float, float]], n: int) -> float:
    best = 0.0
    for a, b in intervals:
        xs = np.linspace(a, b, n)
        vals = weighted_magnitudes(field, xs)[key]
        k = int(np.argmax(vals))
        best = max(best, float(vals[k]))
        if k == 0 or k == n - 1:
            continue

        def neg(t, key=key):
            return -float(weighted_magnitudes(field, np.array([t]))[key][0])

        t_best = optimize.golden(neg, brack=(xs[k - 1], xs[k], xs[k + 1]), tol=1e-10)
        best = max(best, -neg(float(t_best)))
    return best


def compute_K(field: VelocityField, n_samples: int = 2001, s_min: float = 1e-12) -> KReport:
    """Weighted sup-norms of ``field`` as a :class:`KReport`.

    Each sup is taken on the unit sphere over ``xi = artanh(cos theta)`` by
    dense sampling followed by a bracketed golden-section refinement around
    the best sample. The sampled range stops where ``1 - |cos theta|``
    reaches ``s_min``.
    """
    if field.profile.is_zero:
        return KReport(0.0, 0.0, 0.0)
    x_max = xi_of_s(s_min)
    # |x'| = |x| / e  <=>  sech(xi) = 1/e
    x_cone = math.acosh(math.e)
    cone = [(-x_max, -x_cone), (x_cone, x_max)]
    outer = [(-x_cone, x_cone)]
    full = [(-x_max, x_max)]
    return KReport(
        k_cone=_sup(field, "cone", cone, n_samples),
        k_outer=_sup(field, "outer", outer, n_samples),
        k_grad=_sup(field, "grad", full, 2 * n_samples),
    )


# --------------------------------------------------------------------------
# pointwise logarithmic bounds on the cone
# --------------------------------------------------------------------------


def log_power_bound(alpha: float) -> float:
    """Sharp bound ``1 / (alpha e)`` of ``|t^alpha ln t|`` on ``(0, 1]``."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    return 1.0 / (alpha * math.e)


@dataclass(frozen=True)
class ConeLogReport:
    """Largest relative violation of each inequality (``<= 0`` means none).

    ``lower``: ``1/|x| <= -ln(|x'|/|x|) / |x|`` on the cone.
    ``upper``: ``-ln(|x'|/|x|) / |x| <= (2/e) |x'|^(-1/2) |x|^(-1/2)`` on the cone.
    ``gradient``: ``-ln(|x'|/|x|) / |x|^2 <= 1 / (e |x'| |x|)`` everywhere.
    """

    lower: float
    upper: float
    gradient: float
    n_samples: int

    @property
    def worst(self) -> float:
        return max(self.lower, self.upper, self.gradient)


def cone_log_check(n_samples: int = 10000, seed: int = 0) -> ConeLogReport:
    """Sample points and return the worst relative violation of each bound.

    Samples include the cone boundary ``|x'| = |x|/e`` and the equality
    point ``|x'| = |x| e^-2`` of the upper bound, then log-uniform angles over
    twelve decades at random radii.
    """
    rng = np.random.default_rng(seed)
    m = max(n_samples - 2, 0)
    t_cone = np.concatenate([[INV_E, math.exp(-2.0)], INV_E * 10.0 ** (-12.0 * rng.random(m))])
    radius = 10.0 ** rng.uniform(-3.0, 3.0, t_cone.size)
    ax = t_cone * radius
    log_t = np.log(ax / radius)
    lhs1, rhs1 = 1.0 / radius, -log_t / radius
    lhs2, rhs2 = rhs1, (2.0 / math.e) / np.sqrt(ax * radius)
    lower = float(np.max((lhs1 - rhs1) / np.abs(rhs1)))
    upper = float(np.max((lhs2 - rhs2) / np.abs(rhs2)))
    t_all = np.concatenate([[INV_E, 1.0], 10.0 ** (-12.0 * rng.random(m))])
    r_all = 10.0 ** rng.uniform(-3.0, 3.0, t_all.size)
    ax_all = t_all * r_all
    lhs3 = -np.log(ax_all / r_all) / r_all**2
    rhs3 = 1.0 / (math.e * ax_all * r_all)
    grad = float(np.max((lhs3 - rhs3) / rhs3))
    return ConeLogReport(lower, upper, grad, int(t_cone.size))


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------


def functionals_report(field: VelocityField, quad: QuadSpec | None = None) -> dict:
    """JSON-ready report of ``b`` (when finite) and ``K`` for one parameter point."""
    prof = field.profile
    out = {"schema": "homstab.functionals/1", "profile": profile_summary(prof)}
    try:
        b = compute_b(prof, quad)
        out["b"] = {"value": b.value, "error": b.error, "tail": b.tail}
    except Diverging as exc:
        out["b"] = {"value": None, "reason": str(exc)}
    out["K"] = asdict(compute_K(field))
    return out


def write_functionals_json(field: VelocityField, path: str | Path, quad: QuadSpec | None = None) -> dict:
    rep = functionals_report(field, quad)
    Path(path).write_text(json.dumps(rep, indent=2, allow_nan=False, default=_repr17) + "\n", encoding="utf-8")
    return rep


def _repr17(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    raise TypeError(type(v))
