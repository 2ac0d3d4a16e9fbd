"""Decay constant and envelope for the L^q norm of small perturbations.

With ``D = 1/3 - 1/q`` the envelope is::

    ||w(t)||_q <= C_q D^(3D/2) t^(-3D/2) ||w_0||_3,

and ``C_q`` arises from a Gronwall argument along the exponent ramp
``r(t) = 1 / ((1/T)(1/q - 1/3) t + 1/3)``::

    ln C_q = -(D/T) int_0^T 3 + (3/2) ln(4 pi (r - 2)(1 - tau) / r^2) dt
           = -3 D - (3/2) I,    I = int_3^q r^-2 ln(4 pi (r - 2)(1 - tau) / r^2) dr,

with ``I = P1 + P2 - P3`` split into the elementary pieces::

    P1 = D ln(4 pi (1 - tau))
    P2 = (1/2 - 1/q) ln(q - 2) + (1/2) ln(3/q)
    P3 = 2 ((1 + ln 3)/3 - (1 + ln q)/q).

:func:`sharp_constant` evaluates the published closed-form product, which
equals ``exp(-3D - (3/2)(P1 + P2 + P3))``. :func:`constant_via_quadrature`
evaluates the integral itself and :func:`integral_constant` its exact
closed form ``3^(1/4) q^(3/4 - 3/q) (q - 2)^(3/(2q) - 3/4) (4 pi (1 - tau))^(-3D/2)``.
The two closed forms share the limit 1 as ``q -> 3+`` and differ elsewhere.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path

from scipy import integrate

from .errors import DomainError, QuadratureError

PIECE_TOL = 1e-10
T_INDEPENDENCE_TOL = 1e-10


def _check(q: float, tau: float) -> None:
    if not (q > 3.0 and math.isfinite(q)):
        raise DomainError(f"q must be a finite number > 3, got {q}")
    if not 0.0 < tau < 1.0:
        raise DomainError(f"tau must lie in (0, 1), got {tau}")


def exponent(q: float) -> float:
    """Decay exponent ``(3/2)(1/3 - 1/q)``."""
    return 1.5 * (1.0 / 3.0 - 1.0 / q)


@dataclass(frozen=True)
class DecayBound:
    q: float
    tau: float
    c_q: float
    exponent: float

    @classmethod
    def of(cls, q: float, tau: float) -> "DecayBound":
        return cls(q, tau, sharp_constant(q, tau), exponent(q))

    def __post_init__(self):
        if not self.c_q > 0.0:
            raise DomainError("c_q must be positive")
        if not 0.0 < self.exponent < 0.5:
            raise DomainError("exponent must lie in (0, 1/2)")


def sharp_constant(q: float, tau: float) -> float:
    """Published closed-form product for ``C_q``.

    Evaluated in logarithms, so ``q`` up to ~1e300 is safe.
    """
    _check(q, tau)
    d = 1.0 / 3.0 - 1.0 / q
    log_c = (
        -1.75 * math.log(3.0)
        + (3.0 / q) * math.log(q)
        + (1.5 / q) * math.log(q - 2.0)
        + 0.75 * (math.log(q) - math.log(q - 2.0))
        - 1.5 * d * math.log(4.0 * math.pi * (1.0 - tau))
        - 6.0 * d
    )
    return math.exp(log_c)


def integral_constant(q: float, tau: float) -> float:
    """Exact closed form of ``exp(-3D - (3/2)(P1 + P2 - P3))``."""
    _check(q, tau)
    d = 1.0 / 3.0 - 1.0 / q
    log_c = (
        0.25 * math.log(3.0)
        + (0.75 - 3.0 / q) * math.log(q)
        + (1.5 / q - 0.75) * math.log(q - 2.0)
        - 1.5 * d * math.log(4.0 * math.pi * (1.0 - tau))
    )
    return math.exp(log_c)


def pieces(q: float, tau: float) -> tuple[float, float, float]:
    """Closed-form pieces ``(P1, P2, P3)`` with ``I = P1 + P2 - P3``."""
    _check(q, tau)
    p1 = (1.0 / 3.0 - 1.0 / q) * math.log(4.0 * math.pi * (1.0 - tau))
    p2 = (0.5 - 1.0 / q) * math.log(q - 2.0) + 0.5 * math.log(3.0 / q)
    p3 = 2.0 * ((1.0 + math.log(3.0)) / 3.0 - (1.0 + math.log(q)) / q)
    return p1, p2, p3


def _r_integral(q: float, tau: float) -> float:
    """``I`` after the substitution ``u = 1/r``: ``int_{1/q}^{1/3} lam + ln(1 - 2u) + ln u du``."""
    lam = math.log(4.0 * math.pi * (1.0 - tau))

    def f(u):
        return lam + math.log1p(-2.0 * u) + math.log(u)

    val, err = integrate.quad(f, 1.0 / q, 1.0 / 3.0, epsabs=1e-14, epsrel=1e-13, limit=400)
    if not err < 1e-11:
        raise QuadratureError(f"r-integral error estimate {err:.3g} too large")
    return val


def _time_integral(q: float, tau: float, T: float) -> float:
    """``(D/T) int_0^T 3 + (3/2) ln(4 pi (r - 2)(1 - tau) / r^2) dt``."""
    d = 1.0 / 3.0 - 1.0 / q
    spec = RampSpec(q=q, T=T)

    def f(t):
        r = ramp(spec, t)
        return 3.0 + 1.5 * math.log(4.0 * math.pi * (r - 2.0) * (1.0 - tau) / (r * r))

    val, err = integrate.quad(f, 0.0, T, epsabs=1e-14, epsrel=1e-13, limit=400)
    if not err < 1e-10 * max(1.0, T):
        raise QuadratureError(f"time-integral error estimate {err:.3g} too large")
    return d * val / T


@dataclass(frozen=True)
class QuadratureBreakdown:
    """Components of the quadrature evaluation of ``C_q``."""

    q: float
    tau: float
    r_integral: float
    pieces: tuple[float, float, float]
    piece_sum: float
    piece_defect: float
    time_exponent_T1: float
    time_exponent_T2: float
    value: float


def quadrature_breakdown(q: float, tau: float) -> QuadratureBreakdown:
    """Evaluate ``C_q`` from its integral form and check the internal identities.

    Raises
    ------
    QuadratureError
        If the piece sum ``P1 + P2 - P3`` misses the ``r``-integral by more
        than ``1e-10``, or the time-integral exponent depends on ``T`` (checked
        at ``T = 1`` and ``T = 2``) by more than ``1e-10``, or quadrature does
        not converge.
    """
    _check(q, tau)
    d = 1.0 / 3.0 - 1.0 / q
    i_r = _r_integral(q, tau)
    p = pieces(q, tau)
    psum = p[0] + p[1] - p[2]
    defect = abs(psum - i_r)
    if defect > PIECE_TOL:
        raise QuadratureError(f"piece sum differs from quadrature by {defect:.3g}")
    e1 = _time_integral(q, tau, 1.0)
    e2 = _time_integral(q, tau, 2.0)
    if abs(e1 - e2) > T_INDEPENDENCE_TOL:
        raise QuadratureError(f"time integral depends on T: {e1!r} vs {e2!r}")
    # change of variables: (D/T) int_0^T ... dt = 3 D + (3/2) I
    e_r = 3.0 * d + 1.5 * i_r
    if abs(e1 - e_r) > T_INDEPENDENCE_TOL:
        raise QuadratureError(f"time and r integrals disagree: {e1!r} vs {e_r!r}")
    return QuadratureBreakdown(q, tau, i_r, p, psum, defect, e1, e2, math.exp(-e_r))


def constant_via_quadrature(q: float, tau: float) -> float:
    """``C_q`` computed by quadrature of its defining integral."""
    return quadrature_breakdown(q, tau).value


def decay_envelope(q: float, tau: float, w0_l3_norm: float, t: float, constant=sharp_constant) -> float:
    """``C_q D^(3D/2) t^(-3D/2) ||w_0||_3`` with ``D = 1/3 - 1/q``."""
    if not (w0_l3_norm >= 0.0 and t > 0.0):
        raise DomainError("need w0_l3_norm >= 0 and t > 0")
    d = 1.0 / 3.0 - 1.0 / q
    e = 1.5 * d
    return constant(q, tau) * d**e * t ** (-e) * w0_l3_norm


class RampVariant(str, Enum):
    MAIN = "main"
    STEP2 = "step2"


@dataclass(frozen=True)
class RampSpec:
    """Exponent ramp on ``[0, T]``: ``main`` runs 3 -> q, ``step2`` runs 5/2 -> 3."""

    q: float
    T: float
    variant: RampVariant = RampVariant.MAIN

    def __post_init__(self):
        if not self.T > 0.0:
            raise DomainError("T must be positive")
        v = RampVariant(self.variant)
        if v is RampVariant.MAIN and not self.q > 3.0:
            raise DomainError("main ramp needs q > 3")
        object.__setattr__(self, "variant", v)


def ramp(spec: RampSpec, t: float) -> float:
    """Exponent ``r(t)`` of the ramp."""
    if not 0.0 <= t <= spec.T:
        raise DomainError(f"t = {t} outside [0, {spec.T}]")
    if spec.variant is RampVariant.MAIN:
        return 1.0 / ((1.0 / spec.T) * (1.0 / spec.q - 1.0 / 3.0) * t + 1.0 / 3.0)
    return 1.0 / (-t / (15.0 * spec.T) + 0.4)


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------


def table_rows(qs, taus) -> list[dict]:
    rows = []
    for q in qs:
        for tau in taus:
            rows.append(
                {
                    "q": float(q),
                    "tau": float(tau),
                    "c_q": sharp_constant(q, tau),
                    "exponent": exponent(q),
                    "c_q_integral": integral_constant(q, tau),
                }
            )
    return rows


TABLE_COLUMNS = ("q", "tau", "c_q", "exponent", "c_q_integral")


def write_table_csv(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        for r in rows:
            w.writerow([format(r[k], ".17g") for k in TABLE_COLUMNS])


def write_table_json(rows: list[dict], path: str | Path) -> None:
    doc = {"schema": "homstab.constants/1", "rows": rows}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def bound_dict(b: DecayBound) -> dict:
    return asdict(b)
