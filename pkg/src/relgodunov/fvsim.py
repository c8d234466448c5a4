"""One-dimensional finite-volume solver for the barotropic four-field system.

Only the energy-momentum pair ``E = T^tt``, ``S = T^tx`` is evolved.  The
``nu``-current is never evolved; its total ``sum nu(p) W dx`` is a
diagnostic that stays constant on smooth flows (up to scheme error) and
grows across shocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .eos import BarotropicEos, GammaLawBarotrope
from .errors import UnphysicalStateError
from .index import IndexFunction
from .shock import rh_solve_barotropic

_MAX_NEWTON = 100


@dataclass
class ConservedState1D:
    E: np.ndarray
    S: np.ndarray
    dx: float
    boundary: str = "periodic"

    @property
    def N(self):
        return self.E.size

    def copy(self):
        return ConservedState1D(self.E.copy(), self.S.copy(), self.dx, self.boundary)


def prim_to_cons(eos: BarotropicEos, p, v):
    """``E = (rho + p) W^2 - p`` and ``S = (rho + p) W^2 v``."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(np.abs(v) >= 1.0):
        raise UnphysicalStateError("|v| >= 1")
    w = eos.rho_hat_array(p) + p
    W2 = 1.0 / ((1.0 - v) * (1.0 + v))
    E, S = w * W2 - p, w * W2 * v
    if E.ndim == 0:
        return float(E), float(S)
    return E, S


def cons_to_prim(eos: BarotropicEos, E, S, tol=1e-12):
    """Invert :func:`prim_to_cons` cell by cell.

    With ``v = S / (E + p)`` the energy density is ``rho = E - S v``, so the
    pressure is the root of ``F(p) = rho_hat(p) - E + S**2 / (E + p)``.
    ``F' = rho_hat' - v**2 > 0`` for causal closures, so the root is unique
    in ``(max(p_min, |S| - E), E]``; a bracket-safeguarded Newton iteration
    finds it.
    """
    scalar = np.ndim(E) == 0
    E = np.atleast_1d(np.asarray(E, dtype=float))
    S = np.atleast_1d(np.asarray(S, dtype=float))
    p_min = max(eos.p_min, 0.0)
    lo = np.maximum(np.abs(S) - E, p_min)
    hi = np.minimum(E, eos.p_max)

    def F(p):
        return eos.rho_hat_array(p) - E + S * S / (E + p)

    # at the floor p_min the closure may be undefined; use its limit there
    rho_lo = np.full_like(lo, eos.rho_min)
    above = lo > p_min
    if np.any(above):
        rho_lo[above] = eos.rho_hat_array(lo[above])
    F_lo = rho_lo - E + S * S / (E + lo)
    bad = ~(E > 0) | (hi <= lo) | (F_lo >= 0.0) | (F(hi) < 0.0)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise UnphysicalStateError(f"no admissible pressure in cell {i} (E={E[i]!r}, S={S[i]!r})", cell=i)
    p = 0.5 * (lo + hi)
    for _ in range(_MAX_NEWTON):
        Fp = F(p)
        neg = Fp < 0.0
        lo = np.where(neg, p, lo)
        hi = np.where(neg, hi, p)
        v = S / (E + p)
        dF = eos.drho_hat_array(p) - v * v
        step = p - Fp / dF
        inside = (step >= lo) & (step <= hi)
        new = np.where(inside, step, 0.5 * (lo + hi))
        done = np.abs(new - p) <= tol * new
        p = new
        if np.all(done):
            break
    else:
        i = int(np.flatnonzero(~done)[0])
        raise UnphysicalStateError(f"pressure iteration did not converge in cell {i}", cell=i)
    v = S / (E + p)
    if scalar:
        return float(p[0]), float(v[0])
    return p, v


# ---------------------------------------------------------------------------
# HLL


def _phys_flux(p, v, S):
    return S, S * v + p


def _wave_speeds(eos, p, v):
    cs = np.sqrt(1.0 / eos.drho_hat_array(p))
    return (v - cs) / (1.0 - v * cs), (v + cs) / (1.0 + v * cs)


def _hll(eos, pL, vL, pR, vR):
    EL, SL = prim_to_cons(eos, pL, vL)
    ER, SR = prim_to_cons(eos, pR, vR)
    lmL, lpL = _wave_speeds(eos, pL, vL)
    lmR, lpR = _wave_speeds(eos, pR, vR)
    aL = np.minimum(lmL, lmR)
    aR = np.maximum(lpL, lpR)
    fEL, fSL = _phys_flux(pL, vL, SL)
    fER, fSR = _phys_flux(pR, vR, SR)
    den = aR - aL
    fE = (aR * fEL - aL * fER + aL * aR * (ER - EL)) / den
    fS = (aR * fSL - aL * fSR + aL * aR * (SR - SL)) / den
    fE = np.where(aL >= 0, fEL, np.where(aR <= 0, fER, fE))
    fS = np.where(aL >= 0, fSL, np.where(aR <= 0, fSR, fS))
    return fE, fS, np.maximum(np.abs(aL), np.abs(aR))


def _pad(a, boundary, width):
    if boundary == "periodic":
        return np.concatenate([a[-width:], a, a[:width]])
    return np.concatenate([np.repeat(a[:1], width), a, np.repeat(a[-1:], width)])


def _minmod(a, b):
    return np.where(a * b > 0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def _rhs(state, eos, order):
    """``-(F_{i+1/2} - F_{i-1/2}) / dx`` plus the maximum wave speed."""
    p, v = cons_to_prim(eos, state.E, state.S)
    if order == 1:
        pp, vp = _pad(p, state.boundary, 1), _pad(v, state.boundary, 1)
        pL, vL, pR, vR = pp[:-1], vp[:-1], pp[1:], vp[1:]
    else:
        pp, vp = _pad(p, state.boundary, 2), _pad(v, state.boundary, 2)
        dp = _minmod(pp[1:-1] - pp[:-2], pp[2:] - pp[1:-1])
        dv = _minmod(vp[1:-1] - vp[:-2], vp[2:] - vp[1:-1])
        pc, vc = pp[1:-1], vp[1:-1]
        pL, vL = (pc + 0.5 * dp)[:-1], (vc + 0.5 * dv)[:-1]
        pR, vR = (pc - 0.5 * dp)[1:], (vc - 0.5 * dv)[1:]
    fE, fS, amax = _hll(eos, pL, vL, pR, vR)
    return -(fE[1:] - fE[:-1]) / state.dx, -(fS[1:] - fS[:-1]) / state.dx, float(np.max(amax))


def hll_step(state: ConservedState1D, eos: BarotropicEos, cfl=0.5, order=1, dt=None):
    """Advance one forward-Euler (or midpoint, ``order=2``) HLL step.

    Returns the new state and the step size ``dt = cfl dx / max|lambda|``.
    """
    dE, dS, amax = _rhs(state, eos, order)
    if dt is None:
        dt = cfl * state.dx / amax
    if order == 1:
        return ConservedState1D(state.E + dt * dE, state.S + dt * dS, state.dx, state.boundary), dt
    half = ConservedState1D(state.E + 0.5 * dt * dE, state.S + 0.5 * dt * dS, state.dx, state.boundary)
    dE, dS, _ = _rhs(half, eos, order)
    return ConservedState1D(state.E + dt * dE, state.S + dt * dS, state.dx, state.boundary), dt


def nu_total(state: ConservedState1D, eos: BarotropicEos, idx: IndexFunction):
    p, v = cons_to_prim(eos, state.E, state.S)
    W = 1.0 / np.sqrt((1.0 - v) * (1.0 + v))
    return float(np.sum(idx.nu_array(p) * W) * state.dx)


def particle_total(state, eos, isentropic):
    """``sum n W dx`` for a barotrope induced by an isentropic closure."""
    p, v = cons_to_prim(eos, state.E, state.S)
    n = np.array([isentropic.n_of_p(float(q)) for q in p])
    W = 1.0 / np.sqrt((1.0 - v) * (1.0 + v))
    return float(np.sum(n * W) * state.dx)


# ---------------------------------------------------------------------------
# initial conditions


def _simple_wave_phase(eos, p0, p):
    """``int_{p0}^{p} c_s drho / (rho + p)``, the acoustic Riemann-invariant shift.

    With ``drho = dp / c_s**2`` the integrand in ``p`` is ``1 / (c_s (rho + p))``.
    """
    if isinstance(eos, GammaLawBarotrope):
        g = eos.gamma
        return math.sqrt(g - 1.0) / g * np.log(np.asarray(p) / p0)
    fn = np.vectorize(lambda q: quad(lambda s: 1.0 / (math.sqrt(eos.sound_speed2(s)) * (eos.rho_hat(s) + s)), p0, q)[0])
    return fn(p)


def initial_profile(eos, profile, x, params):
    """Primitive ``(p, v)`` on cell centres ``x`` for a named profile.

    Profiles: ``uniform``, ``sound-wave`` (right-moving simple wave),
    ``riemann`` and ``shock`` (exact jump from the Rankine-Hugoniot solver,
    moving at ``shock_speed`` in the lab).
    """
    L = params.get("length", 1.0)
    if profile == "uniform":
        return np.full_like(x, params.get("p0", 1.0)), np.full_like(x, params.get("v0", 0.0))
    if profile == "sound-wave":
        p0, v0 = params.get("p0", 1.0), params.get("v0", 0.0)
        amp, k = params.get("amplitude", 0.01), params.get("wavenumber", 1)
        p = p0 * (1.0 + amp * np.sin(2.0 * np.pi * k * x / L))
        v = np.tanh(np.arctanh(v0) + _simple_wave_phase(eos, p0, p))
        return p, v
    x0 = params.get("x0", 0.5 * L)
    left = x < x0
    if profile == "riemann":
        p = np.where(left, params["p_left"], params["p_right"])
        v = np.where(left, params.get("v_left", 0.0), params.get("v_right", 0.0))
        return p.astype(float), v.astype(float)
    if profile == "shock":
        sol = rh_solve_barotropic(eos, None, params["p_minus"], params["p_plus"])
        vm, vp = sol.lab_velocities(params.get("shock_speed", 0.0))
        return np.where(left, sol.p_minus, sol.p_plus), np.where(left, vm, vp)
    raise ValueError(f"unknown profile {profile!r}")


# ---------------------------------------------------------------------------
# driver


@dataclass
class SimConfig:
    eos: BarotropicEos
    profile: str = "sound-wave"
    params: dict = field(default_factory=dict)
    N: int = 200
    cfl: float = 0.5
    t_end: float = 1.0
    output_interval: Optional[float] = None
    boundary: str = "periodic"
    order: int = 1
    t_shock: Optional[float] = None
    p_ref: float = 1.0

    def __post_init__(self):
        # cfl = 1 is allowed: it makes the stiff-fluid scheme exact transport
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"CFL {self.cfl!r} outside (0, 1]")
        if self.N < 16:
            raise ValueError(f"N = {self.N} < 16")
        if self.boundary not in ("periodic", "outflow"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.order not in (1, 2):
            raise ValueError("order must be 1 or 2")


@dataclass
class SimOutput:
    times: np.ndarray
    E_tot: np.ndarray
    S_tot: np.ndarray
    nu_tot: np.ndarray
    snapshots: list
    x: np.ndarray
    t_shock: Optional[float]
    steps: int
    nu_outflow: Optional[np.ndarray] = None

    @property
    def nu_budget(self):
        """``N_nu`` plus the cumulative net outflow through the boundaries."""
        if self.nu_outflow is None:
            return self.nu_tot
        return self.nu_tot + self.nu_outflow

    def nu_increments(self):
        return np.diff(self.nu_budget)

    def nu_drift(self):
        b = self.nu_budget
        return (b[-1] - b[0]) / b[0]

    def monotone_after_shock(self, tol=1e-12):
        """``True`` if every per-step change of ``N_nu`` after shock formation is ``>= -tol``."""
        if self.t_shock is None:
            return True
        inc = self.nu_increments()
        after = self.times[1:] > self.t_shock
        return bool(np.all(inc[after] >= -tol * abs(self.nu_budget[0])))

    def verdict(self, stiff=False):
        d = self.nu_drift()
        if stiff:
            return f"degenerate (flat, drift {d:.3e})" if abs(d) < 1e-10 else f"degenerate (drift {d:.3e})"
        if self.t_shock is not None and d > 0 and self.monotone_after_shock():
            b = self.nu_budget
            return f"producing (dN_nu = {b[-1] - b[0]:.6e} > 0)"
        return f"conserved (drift {d:.3e})"


def initial_state(config: SimConfig):
    L = config.params.get("length", 1.0)
    dx = L / config.N
    x = (np.arange(config.N) + 0.5) * dx
    p, v = initial_profile(config.eos, config.profile, x, config.params)
    E, S = prim_to_cons(config.eos, p, v)
    return x, ConservedState1D(np.asarray(E), np.asarray(S), dx, config.boundary)


def _max_dvdx(state, eos):
    _, v = cons_to_prim(eos, state.E, state.S)
    vp = _pad(v, state.boundary, 1)
    return float(np.max(np.abs(vp[2:] - vp[:-2]))) / (2.0 * state.dx)


def _nu_boundary_flux(state, eos, idx):
    # net outflow rate of nu W v through the two ends (zero when periodic)
    if state.boundary == "periodic":
        return 0.0
    p, v = cons_to_prim(eos, state.E[[0, -1]], state.S[[0, -1]])
    flux = idx.nu_array(p) * v / np.sqrt((1.0 - v) * (1.0 + v))
    return float(flux[1] - flux[0])


def run(config: SimConfig, idx: Optional[IndexFunction] = None) -> SimOutput:
    """Integrate to ``t_end`` recording totals every step and snapshots at the cadence.

    If ``config.t_shock`` is unset, shock formation is taken as the first
    time ``max|dv/dx|`` exceeds ten times its initial value.  With outflow
    boundaries the net boundary flux of the ``nu``-current is accumulated
    alongside, so that ``SimOutput.nu_budget`` isolates interior production.
    """
    eos = config.eos
    if idx is None:
        idx = IndexFunction(eos, p_ref=config.p_ref)
    x, state = initial_state(config)
    g0 = _max_dvdx(state, eos)
    t_shock = config.t_shock
    t = 0.0
    times, Et, St, Nt = [0.0], [state.E.sum() * state.dx], [state.S.sum() * state.dx], [nu_total(state, eos, idx)]
    snaps = [(0.0, *cons_to_prim(eos, state.E, state.S), state.E.copy(), state.S.copy())]
    next_out = config.output_interval if config.output_interval else math.inf
    steps = 0
    outflow = [0.0]
    while t < config.t_end * (1 - 1e-14):
        rate = _nu_boundary_flux(state, eos, idx)
        state_try, dt = hll_step(state, eos, config.cfl, config.order)
        if t + dt > config.t_end:
            state_try, dt = hll_step(state, eos, config.cfl, config.order, dt=config.t_end - t)
        state = state_try
        t += dt
        steps += 1
        outflow.append(outflow[-1] + dt * rate)
        times.append(t)
        Et.append(state.E.sum() * state.dx)
        St.append(state.S.sum() * state.dx)
        Nt.append(nu_total(state, eos, idx))
        if t_shock is None and g0 > 0 and _max_dvdx(state, eos) > 10.0 * g0:
            t_shock = t
        if t >= next_out * (1 - 1e-12) or t >= config.t_end * (1 - 1e-14):
            p, v = cons_to_prim(eos, state.E, state.S)
            snaps.append((t, p, v, state.E.copy(), state.S.copy()))
            next_out += config.output_interval or math.inf
    return SimOutput(np.array(times), np.array(Et), np.array(St), np.array(Nt), snaps, x, t_shock, steps, np.array(outflow))


def track_front(x, p, level):
    """Position where ``p`` first crosses ``level`` (linear interpolation)."""
    s = np.sign(p - level)
    i = np.flatnonzero(s[:-1] != s[1:])
    if i.size == 0:
        raise ValueError("no crossing found")
    i = i[0]
    return x[i] + (level - p[i]) * (x[i + 1] - x[i]) / (p[i + 1] - p[i])


@dataclass
class ConvergenceStudy:
    resolutions: list
    l1_differences: np.ndarray
    nu_drifts: np.ndarray

    @property
    def l1_order(self):
        """Self-convergence order from the last three resolutions."""
        e = self.l1_differences
        return float(np.log2(e[-2] / e[-1]))

    @property
    def drift_order(self):
        d = np.abs(self.nu_drifts)
        return float(np.log2(d[-2] / d[-1]))


def convergence_study(config: SimConfig, resolutions=(200, 400, 800)):
    """Run ``config`` at successive doublings of ``N``.

    The L1 difference between the pressure at ``N`` and the pair-averaged
    pressure at ``2N`` gives the self-convergence order; the ``N_nu`` drift
    order is reported alongside for comparison.
    """
    resolutions = sorted(resolutions)
    if len(resolutions) < 3 or any(b != 2 * a for a, b in zip(resolutions, resolutions[1:])):
        raise ValueError("need at least three successively doubled resolutions")
    p_final, drifts = [], []
    for N in resolutions:
        cfg = SimConfig(**{**config.__dict__, "N": N})
        out = run(cfg)
        p_final.append(out.snapshots[-1][1])
        drifts.append(out.nu_drift())
    diffs = [
        float(np.mean(np.abs(pc - 0.5 * (pf[0::2] + pf[1::2]))))
        for pc, pf in zip(p_final, p_final[1:])
    ]
    return ConvergenceStudy(resolutions, np.array(diffs), np.array(drifts))
