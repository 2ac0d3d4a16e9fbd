import math

import numpy as np
import pytest

from homstab.errors import Diverging
from homstab.field import VelocityField
from homstab.functionals import (
    ConeSpec,
    compute_b,
    compute_K,
    functionals_report,
    log_power_bound,
    cone_log_check,
    weighted_magnitudes,
)
from homstab.profile import HomParams, solve_profile, zero_profile


def test_b_zero_profile():
    assert compute_b(zero_profile()).value == 0.0


def test_b_diverges_for_nonzero_endpoints():
    with pytest.raises(Diverging):
        compute_b(solve_profile(HomParams(1.0, 0.0, 0.5, 0.0)))


def test_b_landau_converged():
    res = compute_b(solve_profile(HomParams(0.0, 0.0, 0.0, 1.0)))
    assert res.error <= 1e-7
    # Richardson step and finest panel agree to the error estimate
    assert abs(res.value - res.raw[2]) <= res.error


def test_b_odd_profile_vanishes():
    # c1 = c2 and gamma = 0 make U odd in y and the integrand odd
    res = compute_b(solve_profile(HomParams(0.0, 0.0, 0.4, 0.0)))
    assert abs(res.value) <= max(res.error, 1e-12)


def test_b_trend_along_gamma_equal_c3():
    vals = [abs(compute_b(solve_profile(HomParams(0.0, 0.0, c, c))).value) for c in (0.4, 0.2, 0.1)]
    assert vals[0] > vals[1] > vals[2] > 0.0


def test_b_reflection_antisymmetry():
    p = HomParams(0.0, 0.0, 0.2, 0.1)
    b1 = compute_b(solve_profile(p))
    b2 = compute_b(solve_profile(p.reflected()))
    assert abs(b1.value) > 1e-3
    assert abs(b1.value + b2.value) <= b1.error + b2.error


def test_cone_spec():
    cone = ConeSpec()
    assert cone.contains([0.1, 0.0, 1.0])
    assert not cone.contains([1.0, 0.0, 0.1])


def test_K_zero_field():
    k = compute_K(VelocityField(zero_profile()))
    assert (k.k_cone, k.k_outer, k.k_grad) == (0.0, 0.0, 0.0)


def test_K_radius_independent():
    fld = VelocityField.from_params(HomParams(0.0, 0.0, 0.5, 0.0))
    xi = np.linspace(-5, 5, 11)
    a = weighted_magnitudes(fld, xi, 1.0)
    b = weighted_magnitudes(fld, xi, 7.5)
    for key in a:
        assert np.allclose(a[key], b[key], rtol=1e-12)


def test_K_decreases_with_c3():
    ks = [compute_K(VelocityField.from_params(HomParams(0.0, 0.0, c, 0.0)), n_samples=401) for c in (1.0, 0.5, 0.25)]
    for attr in ("k_cone", "k_outer", "k_grad"):
        vals = [getattr(k, attr) for k in ks]
        assert vals[0] > vals[1] > vals[2] > 0.0


def test_log_power_bound_is_sharp():
    for alpha in (0.25, 0.5, 1.0):
        t = np.exp(-1.0 / alpha)  # maximizer of |t^alpha ln t|
        assert math.isclose(abs(t**alpha * math.log(t)), log_power_bound(alpha), rel_tol=1e-14)
    with pytest.raises(ValueError):
        log_power_bound(0.0)


def test_cone_log_bounds_hold():
    rep = cone_log_check(n_samples=5000, seed=3)
    assert rep.worst <= 1e-12


def test_functionals_report_shape():
    rep = functionals_report(VelocityField.from_params(HomParams(1.0, 0.0, 0.5, 0.0)))
    assert rep["b"]["value"] is None
    assert set(rep["K"]) == {"k_cone", "k_outer", "k_grad"}
