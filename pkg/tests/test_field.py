import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homstab.errors import InsufficientSamples, OnAxis, StepTooLarge
from homstab.field import (
    VelocityField,
    divergence_fd,
    eval_gradient,
    eval_pressure,
    eval_spherical,
    eval_velocity,
    evaluate_point_cloud,
    gradient_fd,
    nse_residual,
    singularity_fit,
)
from homstab.profile import HomParams


@pytest.fixture(scope="module")
def type3():
    return VelocityField.from_params(HomParams(0.0, 0.0, 1.0, 0.0))


@pytest.fixture(scope="module")
def landau():
    return VelocityField.from_params(HomParams(0.0, 0.0, 0.0, 1.0))


def off_axis_points(n, seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n, 3))
    pts[:, :2] += 0.3 * np.sign(pts[:, :2])
    return pts


def test_landau_velocity_closed_form(landau):
    # U = 2(1-y^2)/(2+y): u_r = U'/r, u_theta = U/(r sin theta)
    pts = off_axis_points(10, 1)
    r = np.linalg.norm(pts, axis=1)
    y = pts[:, 2] / r
    sph = eval_spherical(landau, pts)
    du = (-4.0 * y * (2.0 + y) - 2.0 * (1.0 - y * y)) / (2.0 + y) ** 2
    assert np.allclose(sph[:, 0], du / r, rtol=1e-10, atol=1e-12)
    assert np.allclose(sph[:, 1], 2.0 * (1.0 - y * y) / (2.0 + y) / (r * np.sqrt(1.0 - y * y)), rtol=1e-10)


@pytest.mark.parametrize("params", [HomParams(0.0, 0.0, 1.0, 0.0), HomParams(1.0, 0.5, 0.3, 0.4)])
def test_residual_second_order(params):
    fld = VelocityField.from_params(params)
    pts = off_axis_points(8, 2)
    r1 = np.linalg.norm(nse_residual(fld, pts, 1e-2), axis=1)
    r2 = np.linalg.norm(nse_residual(fld, pts, 5e-3), axis=1)
    ratio = r1 / r2
    assert np.all((ratio > 3.5) & (ratio < 4.5))


def test_divergence_second_order(type3):
    pts = off_axis_points(6, 3)
    d1 = np.abs(divergence_fd(type3, pts, 1e-2))
    d2 = np.abs(divergence_fd(type3, pts, 5e-3))
    assert np.all(d2 < d1)
    assert np.all(d1 / d2 > 3.5)


def test_gradient_matches_finite_differences(type3):
    pts = off_axis_points(6, 4)
    exact = eval_gradient(type3, pts)
    approx = gradient_fd(type3, pts, 1e-4)
    assert np.max(np.abs(exact - approx)) <= 1e-6 * np.max(np.abs(exact))
    # trace of the exact gradient is the divergence
    assert np.max(np.abs(np.trace(exact, axis1=1, axis2=2))) <= 1e-9 * np.max(np.abs(exact))


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(0.2, 2.0), st.floats(-2.0, 2.0), st.floats(0.0, 6.28))
def test_homogeneity(lam, rho, z, phi):
    fld = _FIELD
    x = np.array([rho * np.cos(phi), rho * np.sin(phi), z])
    assert np.allclose(eval_velocity(fld, lam * x), eval_velocity(fld, x) / lam, rtol=1e-10, atol=1e-14)
    assert np.isclose(eval_pressure(fld, lam * x), eval_pressure(fld, x) / lam**2, rtol=1e-10, atol=1e-14)


_FIELD = VelocityField.from_params(HomParams(0.0, 0.0, 0.5, 0.2))


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 6.28), st.floats(0.1, 3.0), st.floats(-3.0, 3.0))
def test_axisymmetric_no_swirl(phi, rho, z):
    x = np.array([rho * np.cos(phi), rho * np.sin(phi), z])
    sph = eval_spherical(_FIELD, x)
    assert sph[2] == 0.0
    base = eval_velocity(_FIELD, np.array([rho, 0.0, z]))
    rot = np.array([[np.cos(phi), -np.sin(phi), 0.0], [np.sin(phi), np.cos(phi), 0.0], [0.0, 0.0, 1.0]])
    assert np.allclose(eval_velocity(_FIELD, x), rot @ base, rtol=1e-10, atol=1e-14)


def test_on_axis_and_step_errors(type3):
    with pytest.raises(OnAxis):
        eval_velocity(type3, np.array([0.0, 0.0, 1.0]))
    with pytest.raises(StepTooLarge):
        nse_residual(type3, np.array([0.1, 0.0, 1.0]), 0.05)


def test_singularity_fit(type3):
    fit = singularity_fit(type3, np.logspace(-6, -3, 12))
    assert abs(fit.coefficient - 2.0) <= 0.1
    with pytest.raises(InsufficientSamples):
        singularity_fit(type3, [1e-4, 1e-5])


def test_point_cloud(tmp_path, type3):
    src = tmp_path / "pts.csv"
    src.write_text("x,y,z\n1,0,0\n0.5,0.5,1\n", encoding="utf-8")
    dst = tmp_path / "out.csv"
    assert evaluate_point_cloud(type3, src, dst) == 2
    rows = dst.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "x,y,z,u1,u2,u3,p,residual"
    vals = [float(v) for v in rows[1].split(",")]
    assert np.allclose(vals[3:6], eval_velocity(type3, np.array([1.0, 0.0, 0.0])), rtol=0, atol=0)
