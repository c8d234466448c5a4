import math

import numpy as np
import pytest

from relgodunov.eos import GammaLawBarotrope, MassivePolytrope, stiff_barotrope, stiff_isentropic
from relgodunov.errors import UnphysicalStateError
from relgodunov.fvsim import (
    ConservedState1D,
    SimConfig,
    convergence_study,
    cons_to_prim,
    hll_step,
    initial_state,
    nu_total,
    particle_total,
    prim_to_cons,
    run,
    track_front,
)
from relgodunov.index import IndexFunction
from relgodunov.shock import rh_solve_barotropic

G43 = GammaLawBarotrope(4 / 3)
STIFF = stiff_barotrope()
SMOOTH = dict(p0=1.0, v0=0.2, amplitude=0.01, wavenumber=1, length=1.0)


def test_prim_to_cons_examples():
    assert prim_to_cons(G43, 1.0, 0.0) == pytest.approx((3.0, 0.0), abs=1e-15)
    assert prim_to_cons(STIFF, 2.0, 0.6) == pytest.approx((4.25, 3.75), rel=1e-14)


def test_cons_to_prim_examples():
    p, v = cons_to_prim(G43, np.array([3.0]), np.array([0.0]))
    assert (p[0], v[0]) == pytest.approx((1.0, 0.0), abs=1e-14)
    p, v = cons_to_prim(STIFF, np.array([4.25]), np.array([3.75]))
    assert (p[0], v[0]) == pytest.approx((2.0, 0.6), rel=1e-12)
    with pytest.raises(UnphysicalStateError):
        cons_to_prim(G43, np.array([1.0]), np.array([2.0]))


@pytest.mark.parametrize("eos", [G43, STIFF, MassivePolytrope(1.0, 1.0, 5 / 3).to_barotropic()],
                         ids=["gamma43", "stiff", "polytrope"])
def test_primitive_roundtrip(eos, rng):
    count = 10_000 if hasattr(eos, "gamma") else 500
    p = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), count))
    v = rng.uniform(-0.99, 0.99, count)
    E, S = prim_to_cons(eos, p, v)
    p2, v2 = cons_to_prim(eos, E, S)
    assert np.max(np.abs(p2 - p) / p) < 1e-10
    assert np.max(np.abs(v2 - v)) < 1e-10


def test_constant_state_unchanged():
    E, S = prim_to_cons(G43, np.full(32, 1.3), np.full(32, 0.4))
    st = ConservedState1D(E, S, 1 / 32)
    new, dt = hll_step(st, G43)
    assert dt > 0
    np.testing.assert_array_equal(new.E, st.E)
    np.testing.assert_array_equal(new.S, st.S)


@pytest.mark.parametrize("order", [1, 2])
def test_periodic_totals_conserved(order):
    cfg = SimConfig(G43, "sound-wave", dict(SMOOTH, v0=0.5, amplitude=0.2), N=64, order=order)
    _, st = initial_state(cfg)
    E0, S0 = st.E.sum(), st.S.sum()
    for _ in range(1000):
        st, _ = hll_step(st, G43, order=order)
    assert abs(st.E.sum() - E0) / abs(E0) < 1e-12
    assert abs(st.S.sum() - S0) / abs(S0) < 1e-12


def test_nu_total_examples():
    idx = IndexFunction(G43)
    E, S = prim_to_cons(G43, np.ones(50), np.zeros(50))
    assert nu_total(ConservedState1D(E, S, 1 / 50), G43, idx) == pytest.approx(4.0, rel=1e-14)
    L = 2.0
    E, S = prim_to_cons(G43, np.full(40, 3.0), np.full(40, 0.6))
    assert nu_total(ConservedState1D(E, S, L / 40), G43, idx) == pytest.approx(idx.nu(3.0) * 1.25 * L, rel=1e-12)


def test_stiff_nu_is_particle_number():
    iso = stiff_isentropic()
    idx = IndexFunction.calibrated_to_enthalpy(iso)
    x = np.linspace(0, 1, 64)
    E, S = prim_to_cons(STIFF, 1 + 0.5 * np.sin(2 * np.pi * x), 0.3 * np.cos(2 * np.pi * x))
    st = ConservedState1D(E, S, 1 / 64)
    assert nu_total(st, STIFF, idx) == pytest.approx(particle_total(st, STIFF, iso), rel=1e-12)


def test_smooth_run_nu_drift():
    drifts = []
    for N in (200, 400, 800):
        out = run(SimConfig(G43, "sound-wave", SMOOTH, N=N, t_end=1.0))
        assert out.t_shock is None
        drifts.append(abs(out.nu_drift()))
    assert drifts[-1] < 1e-4
    assert drifts[0] > drifts[1] > drifts[2]


def test_simple_wave_matches_characteristics():
    # exact solution before breaking: p(xi) carried along x = xi + lambda_+(xi) t
    from scipy.optimize import brentq
    from relgodunov.fvsim import initial_profile

    par = dict(SMOOTH, amplitude=0.05)
    c = 1 / math.sqrt(3)

    def lam(xi):
        v = initial_profile(G43, "sound-wave", np.array([xi]), par)[1][0]
        return (v + c) / (1 + v * c)

    errs = []
    for N in (200, 400):
        out = run(SimConfig(G43, "sound-wave", par, N=N, t_end=0.5, order=2))
        t, p = out.snapshots[-1][:2]
        xi = [brentq(lambda z: z + lam(z) * t - x, x - 2, x + 1) for x in out.x]
        exact = initial_profile(G43, "sound-wave", np.array(xi), par)[0]
        errs.append(np.mean(np.abs(p - exact)))
    assert math.log2(errs[0] / errs[1]) > 1.7


def test_shock_run_produces_monotonically():
    cfg = SimConfig(G43, "shock", dict(p_minus=1.0, p_plus=2.0, shock_speed=0.3, x0=0.3),
                    N=200, t_end=0.5, boundary="outflow", t_shock=0.0)
    out = run(cfg)
    assert out.monotone_after_shock()
    assert out.nu_budget[-1] > out.nu_budget[0]
    assert out.verdict().startswith("producing")


def test_outflow_budget_accounts_for_boundaries():
    # uniform flow through outflow boundaries: N_nu constant, budget equal to it
    cfg = SimConfig(G43, "uniform", dict(p0=1.0, v0=0.5), N=32, t_end=0.2, boundary="outflow")
    out = run(cfg)
    np.testing.assert_allclose(out.nu_tot, out.nu_tot[0], rtol=1e-13)
    assert abs(out.nu_drift()) < 1e-13


def test_stiff_cfl1_is_flat():
    cfg = SimConfig(STIFF, "riemann", dict(p_left=2.0, p_right=1.0), N=200, cfl=1.0, t_end=0.25)
    out = run(cfg)
    assert np.max(np.abs(out.nu_budget - out.nu_budget[0])) / out.nu_budget[0] < 1e-10
    assert out.verdict(stiff=True).startswith("degenerate (flat")


def test_stiff_cfl_half_is_diffusive():
    # numerical diffusion smears the light-speed front; the drift is scheme error
    cfg = SimConfig(STIFF, "riemann", dict(p_left=2.0, p_right=1.0), N=200, cfl=0.5, t_end=0.25)
    assert abs(run(cfg).nu_drift()) > 1e-6


def test_shock_speed_n800():
    s = 0.3
    cfg = SimConfig(G43, "shock", dict(p_minus=1.0, p_plus=2.0, shock_speed=s, x0=0.3),
                    N=800, t_end=0.5, boundary="outflow")
    out = run(cfg)
    pos = [track_front(out.x, snap[1], 1.5) for snap in out.snapshots]
    speed = (pos[-1] - pos[0]) / (out.snapshots[-1][0] - out.snapshots[0][0])
    assert speed == pytest.approx(s, rel=0.02)


def test_signal_speeds_causal():
    # nothing may move faster than light: the right state is untouched ahead of x0 + t
    cfg = SimConfig(STIFF, "riemann", dict(p_left=10.0, p_right=1.0), N=200, cfl=1.0, t_end=0.2,
                    boundary="outflow")
    out = run(cfg)
    p = out.snapshots[-1][1]
    disturbed = out.x[np.abs(p - 1.0) > 1e-12]
    assert disturbed.max() <= 0.5 + 0.2 + 1.0 / 200


def test_track_front():
    x = np.linspace(0, 1, 11)
    assert track_front(x, np.where(x < 0.45, 1.0, 2.0), 1.5) == pytest.approx(0.45)
    with pytest.raises(ValueError):
        track_front(x, np.ones(11), 1.5)


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(G43, cfl=1.2)
    with pytest.raises(ValueError):
        SimConfig(G43, N=8)
    with pytest.raises(ValueError):
        SimConfig(G43, boundary="reflective")
    with pytest.raises(ValueError):
        convergence_study(SimConfig(G43), resolutions=(100, 200))


def test_rh_profile_is_exact_jump():
    cfg = SimConfig(G43, "shock", dict(p_minus=1.0, p_plus=2.0, shock_speed=0.0, x0=0.5), N=16)
    x, st = initial_state(cfg)
    p, v = cons_to_prim(G43, st.E, st.S)
    sol = rh_solve_barotropic(G43, None, 1.0, 2.0)
    assert v[0] == pytest.approx(sol.v_minus) and v[-1] == pytest.approx(sol.v_plus)


def test_shock_tube_production_rate_converges():
    # a front moving at s produces nu at the lab rate P / W_s; the gap shrinks at first order
    from relgodunov.shock import nu_production

    idx = IndexFunction(G43)
    sol = rh_solve_barotropic(G43, idx, 1.0, 2.0)
    s, t_end = 0.3, 0.5
    expected = nu_production(G43, idx, sol) * t_end * math.sqrt(1 - s * s)
    gaps = []
    for N in (400, 800):
        cfg = SimConfig(G43, "shock", dict(p_minus=1.0, p_plus=2.0, shock_speed=s, x0=0.3),
                        N=N, t_end=t_end, boundary="outflow", t_shock=0.0)
        out = run(cfg, idx)
        gaps.append(out.nu_budget[-1] - out.nu_budget[0] - expected)
    assert 0 < gaps[1] < 0.6 * gaps[0]
    assert gaps[1] / expected < 0.06
