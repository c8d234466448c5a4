import math

import numpy as np
import pytest

from relgodunov.eos import (
    GammaLawBarotrope,
    IdealGasEos,
    MassivePolytrope,
    MasslessGammaLaw,
    ProductFormEos,
    TabulatedBarotrope,
    baro_props,
    causality_scan,
    gnl_value,
    isen_props,
    reduce_to_barotropic,
    stiff_barotrope,
    stiff_isentropic,
    thermo_props,
)
from relgodunov.errors import DomainError, UnsupportedError


def test_baro_props_gamma43():
    rho, d, cs2 = baro_props(GammaLawBarotrope(4 / 3), 1.0)
    assert rho == pytest.approx(3.0, rel=1e-15)
    assert d == pytest.approx(3.0, rel=1e-15)
    assert cs2 == pytest.approx(1 / 3, rel=1e-15)


def test_baro_props_stiff():
    assert baro_props(stiff_barotrope(), 5.0) == pytest.approx((5.0, 1.0, 1.0), rel=1e-15)


def test_baro_props_domain():
    eos = GammaLawBarotrope(4 / 3, p_min=1e-3)
    with pytest.raises(DomainError):
        baro_props(eos, 1e-4)
    with pytest.raises(DomainError):
        baro_props(GammaLawBarotrope(4 / 3), 0.0)


@pytest.mark.parametrize("gamma", [1.0, 2.5, 0.5])
def test_gamma_out_of_range(gamma):
    with pytest.raises(DomainError):
        GammaLawBarotrope(gamma)


def test_isen_props_stiff():
    s = isen_props(stiff_isentropic(), 2.0)
    assert (s.e, s.rho, s.p, s.h) == pytest.approx((1.0, 2.0, 2.0, 2.0), rel=1e-15)
    assert isen_props(stiff_isentropic(), 1.0).h == pytest.approx(1.0, rel=1e-15)


def test_isen_props_massless():
    s = isen_props(MasslessGammaLaw(4 / 3), 1.0)
    assert (s.e, s.rho, s.p, s.h) == pytest.approx((0.75, 0.75, 0.25, 1.0), rel=1e-15)


def test_isen_props_rejects_nonpositive_n():
    with pytest.raises(DomainError):
        isen_props(MasslessGammaLaw(4 / 3), 0.0)
    with pytest.raises(DomainError):
        isen_props(MassivePolytrope(1.0, 1.0, 5 / 3), -1.0)


def test_thermo_props_ideal_gas():
    s = thermo_props(IdealGasEos(m=1, k=1, c_v=1, gamma=5 / 3), 1.0, 0.0)
    got = (s.e, s.rho, s.p, s.theta, s.h, s.mu)
    assert got == pytest.approx((2.0, 2.0, 2 / 3, 1.0, 8 / 3, 8 / 3), rel=1e-14)


def test_thermo_props_product_exp_is_gamma_law(rng):
    eos = ProductFormEos.massless_ideal(1.4)
    for n, sigma in zip(rng.uniform(0.1, 10, 50), rng.uniform(-3, 3, 50)):
        s = thermo_props(eos, n, sigma)
        assert abs(s.p - 0.4 * s.rho) <= 1e-14 * s.rho


def test_thermo_props_double_gamma():
    s = thermo_props(ProductFormEos.double_gamma(4 / 3), 1.0, 1.0)
    assert (s.rho, s.p, s.theta) == pytest.approx((1.0, 1 / 3, 4 / 3), rel=1e-14)


def test_thermo_props_zero_temperature():
    from relgodunov.errors import DegenerateTemperatureError

    flat = ProductFormEos(1.5, r=lambda s: 1.0, dr=lambda s: 0.0)
    with pytest.raises(DegenerateTemperatureError):
        thermo_props(flat, 1.0, 0.3)


def test_ideal_gas_massless_matches_product_form(rng):
    a = IdealGasEos(m=0, k=2.0, c_v=1.5, gamma=4 / 3)
    b = ProductFormEos.massless_ideal(4 / 3, k=2.0, c_v=1.5)
    for n, sigma in zip(rng.uniform(0.1, 10, 50), rng.uniform(-2, 2, 50)):
        sa, sb = thermo_props(a, n, sigma), thermo_props(b, n, sigma)
        for x, y in ((sa.rho, sb.rho), (sa.p, sb.p), (sa.theta, sb.theta)):
            assert abs(x - y) <= 1e-14 * abs(y)


@pytest.mark.parametrize("gamma, expected", [(4 / 3, 4 / 9), (2.0, 0.0), (1.5, 0.5)])
def test_gnl_value_examples(gamma, expected):
    eos = GammaLawBarotrope(gamma)
    for rho in (0.01, 1.0, 37.0):
        assert gnl_value(eos, rho) == pytest.approx(expected, abs=1e-14)


def test_gnl_value_formula_spread():
    gammas = np.linspace(1.05, 1.95, 19)
    vals = np.array([gnl_value(GammaLawBarotrope(g), 2.0) / (2 * (2 - g) * (g - 1)) for g in gammas])
    assert np.ptp(vals) / np.mean(vals) < 1e-12


def test_gnl_value_polytrope_positive():
    eos = MassivePolytrope(1.0, 1.0, 5 / 3).to_barotropic()
    for p in (0.01, 1.0, 10.0):
        assert gnl_value(eos, eos.rho_hat(p)) > 0


@pytest.mark.parametrize("gamma, slope", [(4 / 3, 3.0), (2.0, 1.0), (1.5, 2.0)])
def test_reduce_to_barotropic(gamma, slope):
    b = reduce_to_barotropic(ProductFormEos.massless_ideal(gamma) if gamma < 2 else IdealGasEos(gamma=2.0))
    assert b.rho_hat(7.0) == pytest.approx(slope * 7.0, rel=1e-15)


def test_reduce_rejects_massive():
    with pytest.raises(UnsupportedError):
        reduce_to_barotropic(IdealGasEos(m=1.0))
    with pytest.raises(UnsupportedError):
        reduce_to_barotropic(MasslessGammaLaw(4 / 3))


def test_causality_scan():
    grid = np.geomspace(0.01, 100, 41)
    rep = causality_scan(GammaLawBarotrope(4 / 3), grid)
    assert rep.ok and not rep.marginal and rep.checked == 41
    bad = causality_scan(GammaLawBarotrope(3.0, strict=False), grid)
    assert len(bad.violations) == 41
    stiff = causality_scan(stiff_barotrope(), grid)
    assert stiff.ok and len(stiff.marginal) == 41


def test_isentropic_barotrope_consistency():
    iso = MassivePolytrope(1.0, 0.5, 5 / 3)
    b = iso.to_barotropic()
    for n in (0.3, 1.0, 4.0):
        p = iso.p(n)
        assert b.rho_hat(p) == pytest.approx(iso.rho(n), rel=1e-12)
        h = 1e-6 * p
        fd = (b.rho_hat(p + h) - b.rho_hat(p - h)) / (2 * h)
        assert b.drho_hat(p) == pytest.approx(fd, rel=1e-7)


def test_p_hat_inverts_rho_hat():
    for eos in (GammaLawBarotrope(1.4), MassivePolytrope(1.0, 1.0, 1.5).to_barotropic()):
        for p in (1e-3, 0.5, 20.0):
            assert eos.p_hat(eos.rho_hat(p)) == pytest.approx(p, rel=1e-11)


def test_tabulated_from_csv(tmp_path):
    p = np.geomspace(1e-2, 1e2, 200)
    path = tmp_path / "t.csv"
    np.savetxt(path, np.column_stack([p, 3 * p]), delimiter=",", header="p,rho", comments="")
    eos = TabulatedBarotrope.from_csv(path)
    assert eos.rho_hat(1.234) == pytest.approx(3 * 1.234, rel=1e-10)
    assert eos.drho_hat(5.0) == pytest.approx(3.0, rel=1e-8)
    with pytest.raises(DomainError):
        eos.rho_hat(1e3)


def test_tabulated_rejects_nonmonotone():
    with pytest.raises(DomainError):
        TabulatedBarotrope([1.0, 2.0, 1.5], [1.0, 2.0, 3.0])


def test_stiff_isentropic_is_stiff_barotrope():
    b = stiff_isentropic().to_barotropic()
    assert isinstance(b, GammaLawBarotrope) and b.gamma == 2.0
    assert math.isclose(b.rho_hat(3.0), 3.0)
