import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flattumor.errors import (
    BracketError,
    CharacteristicEscapeError,
    ConsistencyError,
    ContractionError,
    DomainError,
    ParameterError,
    ResolutionError,
)
from flattumor.grid import GridFunction
from flattumor.stationary import (
    ModelParams,
    apply_T,
    fixed_point,
    mass_balance,
    p0_profile,
    pressure_from_profile,
    sigma0_profile,
    solve_rho_s,
    solve_stationary,
    solve_xi30,
    zero_pressure,
)
from flattumor.tau_expansion import rho_star_1

T1 = math.tanh(1.0)


def test_rho_s_inverse_construction():
    assert solve_rho_s(1.0, T1) == pytest.approx(1.0, abs=1e-14)


def test_rho_s_small_limit_and_scale_invariance():
    assert 0 < solve_rho_s(1.0, 0.9999) < 0.05
    assert solve_rho_s(2.0, 1.0) == pytest.approx(solve_rho_s(1.0, 0.5), rel=1e-14)


def test_rho_s_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        solve_rho_s(1.0, 1.0)
    with pytest.raises(ParameterError):
        ModelParams(1.0, 0.5, -1.0)
    with pytest.raises(ParameterError):
        ModelParams(1.0, 0.5, 1.0, tau=-0.1)


@settings(max_examples=60, deadline=None)
@given(rho=st.floats(0.01, 30.0), sb=st.floats(0.1, 10.0))
def test_rho_s_round_trip(rho, sb):
    p = ModelParams.from_rho0(rho, sb)
    assert p.rho_s == pytest.approx(rho, rel=1e-9)


def test_sigma0_profile_values():
    assert sigma0_profile(1.3, 2.0, 1.3) == pytest.approx(2.0)
    assert sigma0_profile(1.3, 2.0, 0.0) == pytest.approx(2.0 / math.cosh(1.3), rel=1e-15)
    assert sigma0_profile(1.0, 1.0, 0.5) == pytest.approx(math.cosh(0.5) / math.cosh(1.0), rel=1e-14)
    assert sigma0_profile(1.0, 1.0, 0.0, order=1) == 0.0
    with pytest.raises(DomainError):
        sigma0_profile(1.0, 1.0, 1.5)
    assert sigma0_profile(1.0, 1.0, 1.5, extend=True) == 1.0


def test_p0_profile_boundary_values():
    rho, mu, sb = 1.2, 3.0, 1.5
    st_ = sb * math.tanh(rho) / rho
    assert p0_profile(rho, mu, sb, st_, rho) == pytest.approx(0.0, abs=1e-14)
    assert p0_profile(rho, mu, sb, st_, rho, order=1) == pytest.approx(0.0, abs=1e-14)
    assert p0_profile(rho, mu, sb, st_, rho, order=3) == pytest.approx(-mu * sb * math.tanh(rho), rel=1e-14)
    assert p0_profile(rho, mu, sb, st_, 0.0, order=1) == 0.0
    with pytest.raises(ConsistencyError):
        p0_profile(rho, mu, sb, st_ * 1.1, 0.5)


def test_p0_profile_solves_its_equation():
    rho, mu, sb = 0.8, 2.0, 1.0
    st_ = sb * math.tanh(rho) / rho
    y = np.linspace(0, rho, 7)
    lhs = -p0_profile(rho, mu, sb, st_, y, order=2)
    rhs = mu * (sigma0_profile(rho, sb, y) - st_)
    assert np.allclose(lhs, rhs, atol=1e-14)


def test_apply_T_without_delay_is_the_rescaled_profile():
    params = ModelParams(1.0, T1, 1.0, 0.0)
    rho = 1.0
    start = pressure_from_profile(0.7, params, 256)  # arbitrary input: output must not depend on it
    tp = apply_T(start, rho, params, 256)
    y = tp.grid.nodes[:129]
    want = rho * p0_profile(rho, 1.0, 1.0, T1, rho * y)
    assert np.max(np.abs(tp.grid.values[:129] - want)) < 1e-8
    assert tp.grid.values[128] == 0.0
    assert tp.grid.deriv[0] == 0.0


def test_apply_T_zero_pressure_freezes_characteristics():
    p = zero_pressure(256)
    a = apply_T(p, 1.0, ModelParams(1.0, T1, 1.0, 0.1), 256)
    b = apply_T(p, 1.0, ModelParams(1.0, T1, 1.0, 0.0), 256)
    assert np.array_equal(a.grid.values, b.grid.values)
    assert np.array_equal(a.grid.deriv, b.grid.deriv)


def test_apply_T_linear_extension():
    params = ModelParams(1.0, T1, 1.0, 0.01)
    tp = apply_T(zero_pressure(128), 1.0, params, 128)
    y = tp.grid.nodes[64:]
    assert np.allclose(tp.grid.values[64:], tp.grid.deriv[64] * (y - 1.0), atol=1e-15)


def test_grid_resolution_errors():
    params = ModelParams(1.0, T1, 1.0, 0.0)
    with pytest.raises(ResolutionError):
        apply_T(zero_pressure(32), 1.0, params, 32)
    with pytest.raises(ResolutionError):
        solve_stationary(params, grid_n=66)


def test_xi30_trivial_cases():
    p = pressure_from_profile(1.0, ModelParams(1.0, T1, 1.0), 128)
    assert solve_xi30(p, 1.0, 0.0, 0.3) == 0.3
    assert solve_xi30(zero_pressure(128), 1.0, 0.5, 0.3) == 0.3


@pytest.mark.parametrize("c", [-0.4, 0.25, 1.0])
def test_xi30_constant_field_exact(c):
    rho, tau, y = 1.3, 0.2, 0.6
    field = lambda x: np.full_like(np.asarray(x, dtype=float), c)  # noqa: E731
    assert solve_xi30(field, rho, tau, y) == pytest.approx(y + c * tau / rho ** 3, abs=1e-12)


def test_xi30_escape_is_reported():
    field = lambda x: np.full_like(np.asarray(x, dtype=float), -50.0)  # noqa: E731
    with pytest.raises(CharacteristicEscapeError):
        solve_xi30(field, 1.0, 1.0, 0.1)


def test_fixed_point_residual_small():
    params = ModelParams(1.0, T1, 1.0, 1e-3)
    fp = fixed_point(1.0, params, 512, 1e-12)
    again = apply_T(fp.pressure, 1.0, params, 512)
    assert again.distance(fp.pressure) <= 1e-9
    assert 0 < fp.contraction < 1


def test_mass_balance_decreasing_without_delay():
    params = ModelParams(1.0, T1, 1.0, 0.0)
    rhos = np.linspace(0.5, 1.5, 11)
    F = [mass_balance(fixed_point(r, params, 256), 256) for r in rhos]
    assert np.all(np.diff(F) < 0)


def test_solve_stationary_without_delay():
    st_ = solve_stationary(ModelParams(1.0, T1, 1.0, 0.0), grid_n=256)
    assert st_.rho_star == pytest.approx(st_.rho_s, abs=1e-10)
    assert st_.residual <= 1e-10


@pytest.mark.parametrize("tau", [1e-3, 1e-2])
def test_delay_enlarges_stationary_thickness(tau):
    st_ = solve_stationary(ModelParams(1.0, T1, 1.0, tau), grid_n=256)
    assert st_.rho_star > st_.rho_s
    assert all(0 < f < 1 for f in st_.contraction_factors)


def test_delayed_thickness_first_order_slope():
    r1 = rho_star_1(1.0, 1.0, 1.0)
    taus = [1e-2, 5e-3, 2.5e-3]
    errs = []
    for tau in taus:
        s = solve_stationary(ModelParams(1.0, T1, 1.0, tau), grid_n=512)
        errs.append(abs((s.rho_star - s.rho_s) / tau - r1))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(orders) > 0.9
    # the remainder rho* - rho_S - tau rho1 is second order
    assert errs[0] < 0.05 * r1


def test_stationary_state_xi30_and_physical_pressure():
    s = solve_stationary(ModelParams(1.0, T1, 1.0, 0.01), grid_n=256)
    assert isinstance(s.xi30, GridFunction)
    assert s.xi30(0.0) == pytest.approx(0.0, abs=1e-14)
    assert np.all(s.xi30.deriv > 0)
    assert s.xi30_path.shape[0] == 17
    assert s.pressure_physical(s.rho_star) == pytest.approx(0.0, abs=1e-12)


def test_large_delay_escapes_domain():
    with pytest.raises(CharacteristicEscapeError):
        solve_stationary(ModelParams(1.0, T1, 50.0, 5.0), grid_n=128)


def test_large_delay_loses_contraction():
    with pytest.raises(ContractionError):
        solve_stationary(ModelParams(1.0, T1, 1.0, 3.0), grid_n=128)


def test_bracket_error_when_no_sign_change(monkeypatch):
    import flattumor.stationary as stationary

    monkeypatch.setattr(stationary, "mass_balance", lambda fp, n: 1.0)
    with pytest.raises(BracketError):
        stationary.solve_stationary(ModelParams(1.0, T1, 1.0, 0.0), grid_n=128)
