import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homstab.errors import BlowUp, DomainError
from homstab.profile import (
    Branch,
    Classification,
    HomParams,
    ProfileGrid,
    cbar3,
    endpoint_values,
    gamma_range,
    in_J,
    interpolate_u,
    is_admissible,
    landau_profile,
    left_roots,
    ode_residual,
    profile_summary,
    profile_to_csv,
    right_roots,
    solve_profile,
    zero_profile,
)


def aitken(a, b, c):
    """Limit of a geometric sequence a, b, c (c closest to the limit)."""
    den = (c - b) - (b - a)
    return c if den == 0.0 else c - (c - b) ** 2 / den


def test_cbar3_origin_is_exact():
    assert cbar3(0.0, 0.0) == -4.0


def test_cbar3_rejects_outside():
    with pytest.raises(DomainError):
        cbar3(-1.5, 0.0)


@given(st.floats(-1.0, 10.0), st.floats(-1.0, 10.0))
def test_cbar3_symmetric_nonpositive_decreasing(c1, c2):
    assert cbar3(c1, c2) == cbar3(c2, c1)
    assert cbar3(c1, c2) <= 0.0
    assert cbar3(c1 + 0.5, c2) < cbar3(c1, c2)


@given(st.floats(-1.0, 50.0))
def test_endpoint_roots_solve_quadratics(c):
    for u in left_roots(c):
        assert abs(u * u - 4.0 * u - 4.0 * c) <= 1e-9 * (1.0 + u * u)
    for u in right_roots(c):
        assert abs(u * u + 4.0 * u - 4.0 * c) <= 1e-9 * (1.0 + u * u)


@given(st.floats(-1.0, 5.0), st.floats(-1.0, 5.0), st.floats(0.0, 5.0))
def test_J_is_upward_closed_in_c3(c1, c2, extra):
    c3 = cbar3(c1, c2)
    assert in_J((c1, c2, c3))
    assert in_J((c1, c2, c3 + extra))


def test_classification_outside_and_inside():
    assert is_admissible(HomParams(-2.0, 0.0, 0.0)) is Classification.OUTSIDE_J
    assert is_admissible(HomParams(0.0, 0.0, -5.0)) is Classification.OUTSIDE_J
    assert is_admissible(HomParams(1.0, 0.0, 0.0)) is Classification.IN_J
    assert is_admissible(HomParams(0.0, 0.0, 0.1, 0.0)) is Classification.IN_M
    assert is_admissible(HomParams(0.0, 0.0, 0.1, 5.0)) is Classification.IN_J


def test_endpoint_values_branches():
    p = HomParams(0.0, 0.0, 0.0)
    assert endpoint_values(p, Branch.INTERIOR) == (0.0, 0.0)
    assert endpoint_values(p, "plus_extremal") == (4.0, 0.0)
    assert endpoint_values(p, "minus_extremal") == (0.0, -4.0)


def test_gamma_range_landau_oracle():
    rng = gamma_range((0.0, 0.0, 0.0))
    assert abs(rng.gamma_minus + 2.0) <= 1e-6
    assert abs(rng.gamma_plus - 2.0) <= 1e-6


@pytest.mark.parametrize("gamma", [0.5, 1.0, 1.5, -1.0])
def test_landau_closed_form(gamma):
    prof = solve_profile(HomParams(0.0, 0.0, 0.0, gamma))
    y = prof.nodes
    exact = 2.0 * gamma * (1.0 - y * y) / (2.0 + gamma * y)
    assert np.max(np.abs(prof.u_values - exact)) <= 1e-7
    assert ode_residual(prof) <= 1e-8


def test_landau_oracle_profile_has_tiny_residual():
    assert ode_residual(landau_profile(1.0)) <= 1e-9


def test_profile_between_nodes_matches_closed_form():
    prof = solve_profile(HomParams(0.0, 0.0, 0.0, 1.0))
    y = np.linspace(-0.999, 0.999, 37) + 1e-3 / 7.0
    exact = 2.0 * (1.0 - y * y) / (2.0 + y)
    assert np.max(np.abs(interpolate_u(prof, y) - exact)) <= 1e-9


def test_zero_profile():
    prof = zero_profile()
    assert prof.is_zero
    assert ode_residual(prof) == 0.0


def test_outside_J_raises():
    with pytest.raises(DomainError):
        solve_profile(HomParams(0.0, 0.0, -5.0, 0.0))


def test_gamma_beyond_range_blows_up():
    with pytest.raises(BlowUp) as info:
        solve_profile(HomParams(0.0, 0.0, 0.0, 3.0))
    assert -1.0 <= info.value.y_star <= 1.0


ENDPOINT_SWEEP = [
    (0.0, 0.0, 0.0),
    (0.0, 0.0, 1.0),
    (0.5, 0.2, 0.3),
    (1.0, 1.0, 1.0),
    (2.0, -0.5, 0.5),
    (-0.5, 0.0, 0.0),
    (0.0, 0.0, -3.0),
    (3.0, 1.0, -2.0),
    (-0.5, 0.3, cbar3(-0.5, 0.3) + 0.01),
]


def endpoint_defects(c):
    """Quadratic defects of the extrapolated endpoint limits at the mid-range gamma."""
    rng = gamma_range(c)
    prof = solve_profile(HomParams(*c, 0.5 * (rng.gamma_minus + rng.gamma_plus)))
    u = prof.u_values
    m = 100  # nodes per unit of xi
    lo = aitken(u[2 * m], u[m], u[0])
    hi = aitken(u[-1 - 2 * m], u[-1 - m], u[-1])
    return abs(lo * lo - 4.0 * lo - 4.0 * c[0]), abs(hi * hi + 4.0 * hi - 4.0 * c[1])


@pytest.mark.parametrize("c", ENDPOINT_SWEEP[:4])
def test_endpoint_quadratics(c):
    assert max(endpoint_defects(c)) <= 1e-6


def test_reflection_symmetry():
    c = (0.4, 0.1, 0.2)
    rng = gamma_range(c)
    p = HomParams(*c, 0.3 * rng.gamma_plus + 0.7 * rng.gamma_minus)
    u = solve_profile(p).u_values
    v = solve_profile(p.reflected()).u_values
    assert np.max(np.abs(v + u[::-1])) <= 1e-6


def test_fixed_step_order():
    """Halving the fixed step cuts the residual by about 2^5 (Dormand-Prince order)."""
    p = HomParams(0.0, 0.0, 0.3, 0.5)
    coarse = ode_residual(solve_profile(p, ProfileGrid(spacing=0.04, fixed_step=True)))
    fine = ode_residual(solve_profile(p, ProfileGrid(spacing=0.02, fixed_step=True)))
    assert 24.0 <= coarse / fine <= 48.0


def test_csv_round_trip(tmp_path):
    prof = solve_profile(HomParams(0.0, 0.0, 0.5, 0.2))
    path = tmp_path / "p.csv"
    profile_to_csv(prof, path)
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert np.array_equal(data[:, 1], prof.u_values)
    assert np.array_equal(data[:, 0], prof.nodes)
    summary = profile_summary(prof)
    assert summary["branch"] == "interior"
    assert math.isclose(summary["params"]["c3"], 0.5)


@settings(max_examples=6, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(-0.9, 0.9))
def test_landau_family_property(frac, sign):
    gamma = 1.9 * frac * (1 if sign >= 0 else -1)
    prof = solve_profile(HomParams(0.0, 0.0, 0.0, gamma))
    assert abs(prof.u_values[prof.zero_index] - gamma) <= 1e-10
    assert prof.endpoint_minus == 0.0 and prof.endpoint_plus == 0.0
