import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relgodunov.eos import (
    GammaLawBarotrope,
    MassivePolytrope,
    MasslessGammaLaw,
    ProductFormEos,
    IdealGasEos,
    stiff_barotrope,
    stiff_isentropic,
)
from relgodunov.errors import DomainError
from relgodunov.index import (
    IndexFunction,
    enthalpy_index_residual,
    index_f,
    index_table,
    legendre_residual,
    legendre_transform,
    nu,
    nu_df_residual,
    nu_equals_n_residual,
    ode_residual,
    pi_of_f,
    product_form_index_checks,
    xhat_of_f,
)
from relgodunov.numerics import central_diff

G43 = IndexFunction(GammaLawBarotrope(4 / 3))
STIFF = IndexFunction(stiff_barotrope())
P_GRID = np.geomspace(1e-3, 1e3, 61)


def test_index_examples():
    assert index_f(G43, 16.0) == pytest.approx(2.0, rel=1e-15)
    assert index_f(STIFF, 4.0) == pytest.approx(2.0, rel=1e-15)
    assert index_f(G43, 1.0) == 1.0
    poly = IndexFunction(MassivePolytrope(1.0, 1.0, 5 / 3).to_barotropic(), p_ref=0.7)
    assert index_f(poly, 0.7) == 1.0


def test_nu_examples():
    assert nu(G43, 16.0) == pytest.approx(32.0, rel=1e-14)
    assert nu(G43, 1.0) == pytest.approx(4.0, rel=1e-15)
    assert nu(STIFF, 1.0) == pytest.approx(2.0, rel=1e-15)


def test_pi_examples():
    assert pi_of_f(G43, 2.0) == pytest.approx(16.0, rel=1e-14)
    assert pi_of_f(G43, 1.0) == 1.0
    assert pi_of_f(STIFF, 3.0) == pytest.approx(9.0, rel=1e-14)


def test_pi_out_of_range():
    idx = IndexFunction(GammaLawBarotrope(4 / 3, p_min=1.0, p_max=100.0), p_ref=10.0)
    lo, hi = idx.f_range()
    with pytest.raises(DomainError):
        idx.pi(lo * 0.5)
    with pytest.raises(DomainError):
        idx.pi(hi * 2.0)


@pytest.mark.parametrize("gamma", [4 / 3, 1.5, 2.0])
def test_quadrature_matches_closed_form(gamma):
    eos = GammaLawBarotrope(gamma)
    closed = IndexFunction(eos, mode="closed-form")
    quad = IndexFunction(eos, mode="quadrature")
    err = max(abs(quad.f(p) - closed.f(p)) / closed.f(p) for p in P_GRID)
    assert err < 1e-8


@pytest.mark.parametrize(
    "eos",
    [GammaLawBarotrope(4 / 3), stiff_barotrope(), MassivePolytrope(1.0, 1.0, 5 / 3).to_barotropic()],
    ids=["gamma43", "stiff", "polytrope"],
)
def test_ode_and_nu_residuals(eos):
    idx = IndexFunction(eos)
    assert max(ode_residual(idx, p) for p in P_GRID) < 1e-8
    assert max(nu_df_residual(idx, p) for p in P_GRID) < 1e-8


def test_pi_inverts_f_quadrature():
    idx = IndexFunction(MassivePolytrope(1.0, 1.0, 5 / 3).to_barotropic())
    for p in P_GRID:
        assert abs(idx.pi(idx.f(p)) - p) <= 1e-12 * p


@pytest.mark.parametrize("idx", [G43, STIFF, IndexFunction(GammaLawBarotrope(1.5), mode="quadrature")])
def test_xhat_derivative(idx):
    for fval in (0.5, 1.7, 3.0):
        d = central_diff(idx.xhat, fval)
        assert d == pytest.approx(idx.pi(fval) / fval**3, rel=1e-8)
    assert xhat_of_f(idx, idx.f_ref) == 0.0


def test_xhat_closed_vs_quadrature():
    eos = GammaLawBarotrope(4 / 3)
    a, b = IndexFunction(eos, mode="closed-form"), IndexFunction(eos, mode="quadrature")
    for fval in (0.3, 0.9, 2.5):
        assert b.xhat(fval) == pytest.approx(a.xhat(fval), rel=1e-8, abs=1e-12)


def test_enthalpy_index():
    for eos in (MasslessGammaLaw(4 / 3), stiff_isentropic(), MassivePolytrope(1.0, 1.0, 5 / 3)):
        idx = IndexFunction.calibrated_to_enthalpy(eos)
        assert enthalpy_index_residual(eos, idx, 1.0) < 1e-15
        for n in np.geomspace(0.1, 10, 9):
            assert enthalpy_index_residual(eos, idx, n) < 1e-9


def test_legendre_examples():
    stiff = stiff_isentropic()
    idx = IndexFunction.calibrated_to_enthalpy(stiff)
    assert stiff.rho(2.0) + idx.pi(stiff.h(2.0)) == pytest.approx(4.0, rel=1e-14)
    assert legendre_residual(stiff, idx, 2.0) < 1e-9
    m43 = MasslessGammaLaw(4 / 3)
    idx43 = IndexFunction.calibrated_to_enthalpy(m43)
    assert m43.rho(1.0) + idx43.pi(m43.h(1.0)) == pytest.approx(1.0, rel=1e-14)
    # conjugate exponent delta with gamma + delta = gamma delta is 4
    for h in (0.5, 1.0, 2.0):
        assert idx43.pi(h) == pytest.approx(h**4 / 4, rel=1e-13)
    for n in np.geomspace(0.1, 10, 9):
        assert legendre_residual(m43, idx43, n) < 1e-9


def test_stiff_self_dual():
    stiff = stiff_isentropic()
    idx = IndexFunction.calibrated_to_enthalpy(stiff)
    for x in np.geomspace(0.1, 10, 9):
        assert abs(idx.pi(x) - x * x / 2) <= 1e-10 * x * x
        assert abs(stiff.rho(x) - x * x / 2) <= 1e-10 * x * x


def test_double_legendre_transform():
    eos = MassivePolytrope(1.0, 1.0, 5 / 3)
    idx = IndexFunction.calibrated_to_enthalpy(eos)
    for n in (0.5, 1.0, 3.0):
        h = eos.h(n)
        # rho is the conjugate of pi at slope n, maximiser at h
        rho = legendre_transform(idx.pi, n, (0.5 * h, 2.0 * h))
        assert rho == pytest.approx(eos.rho(n), rel=1e-7)
        pi_back = legendre_transform(eos.rho, h, (0.5 * n, 2.0 * n))
        assert pi_back == pytest.approx(idx.pi(h), rel=1e-7)


def test_nu_equals_n():
    stiff = stiff_isentropic()
    idx = IndexFunction.calibrated_to_enthalpy(stiff)
    for n in (0.5, 1.0, 2.0, 5.0):
        assert nu_equals_n_residual(stiff, idx, n) < 1e-9
    m43 = MasslessGammaLaw(4 / 3)
    assert nu_equals_n_residual(m43, IndexFunction.calibrated_to_enthalpy(m43), 1.0) < 1e-9
    poly = MassivePolytrope(1.0, 2.0, 1.5)
    pidx = IndexFunction.calibrated_to_enthalpy(poly, n_ref=2.0)
    assert nu_equals_n_residual(poly, pidx, 2.0) < 1e-12
    for n in np.geomspace(0.1, 10, 11):
        assert nu_equals_n_residual(poly, pidx, n) < 1e-9


def test_product_form_double_gamma():
    rep = product_form_index_checks(ProductFormEos.double_gamma(4 / 3), np.linspace(0.5, 5, 10), np.linspace(0.5, 5, 10))
    assert rep.points == 100
    assert rep.f_theta_spread < 1e-10
    assert rep.nu_entropy_spread < 1e-10
    assert rep.sigma_recovery_residual < 1e-12


def test_product_form_exp():
    grid = np.linspace(0.5, 5, 10)
    rep = product_form_index_checks(ProductFormEos.massless_ideal(4 / 3), grid, grid)
    assert rep.f_theta_spread > 0.1
    same = product_form_index_checks(IdealGasEos(m=0, gamma=4 / 3), grid, grid)
    assert same.f_theta_spread == pytest.approx(rep.f_theta_spread, rel=1e-12)


def test_index_table_columns():
    rows = index_table(G43, [1.0, 16.0])
    assert rows[0][:4] == (1.0, 1.0, pytest.approx(4.0), 0.0)
    assert rows[1][1] == pytest.approx(2.0) and rows[1][2] == pytest.approx(32.0)


@given(st.floats(1e-3, 1e3), st.floats(1.05, 2.0))
def test_f_monotone_and_positive(p, gamma):
    idx = IndexFunction(GammaLawBarotrope(gamma))
    f1, f2 = idx.f(p), idx.f(p * 1.01)
    assert 0 < f1 < f2
    assert idx.nu(p) > 0


POLY = IndexFunction(MassivePolytrope(0.5, 1.0, 1.4).to_barotropic())


@given(st.floats(0.25, 20.0))
def test_pi_roundtrip_property(fval):
    assert POLY.f(POLY.pi(fval)) == pytest.approx(fval, rel=1e-12)


def test_massive_index_bounded_below():
    # rest mass keeps int dp / rho finite as p -> 0
    lo, hi = POLY.f_range()
    assert 0 < lo < 1 and hi == np.inf
    with pytest.raises(DomainError):
        POLY.pi(0.9 * lo)
