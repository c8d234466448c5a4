"""Planar shocks: jump conditions, Lax admissibility and production rates.

States are given in the shock rest frame with the fluid flowing in the +x
direction through the discontinuity: the "minus" state sits on the left
(upstream for compressive shocks) and the "plus" state on the right.
Velocities are x-components; both are positive.

A light-speed discontinuity of the stiff fluid has no rest frame.  It is
reported in a frame where the right state is at rest and the front moves
at ``shock_speed = +1``; production rates use the general moving-front
formula ``[nu W (v - s)]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .eos import BarotropicEos, GammaLawBarotrope, IdealGasEos, gnl_value, thermo_props
from .errors import DegenerateShockError, NoRootError, SubsonicUpstreamError
from .index import IndexFunction

_RTOL = 4 * np.finfo(float).eps


def _w(v):
    return 1.0 / math.sqrt((1.0 - v) * (1.0 + v))


@dataclass(frozen=True)
class ShockSolution:
    p_minus: float
    p_plus: float
    v_minus: float
    v_plus: float
    rho_minus: float
    rho_plus: float
    shock_speed: float = 0.0
    linearly_degenerate: bool = False
    n_minus: Optional[float] = None
    n_plus: Optional[float] = None
    sigma_minus: Optional[float] = None
    sigma_plus: Optional[float] = None
    residuals: dict = field(default_factory=dict)

    @property
    def W_minus(self):
        return _w(self.v_minus)

    @property
    def W_plus(self):
        return _w(self.v_plus)

    @property
    def max_residual(self):
        return max(self.residuals.values()) if self.residuals else 0.0

    def lab_velocities(self, s):
        """Fluid velocities seen from a frame in which the front moves at ``s``."""
        u = (s - self.shock_speed) / (1.0 - s * self.shock_speed)
        return tuple((v + u) / (1.0 + v * u) for v in (self.v_minus, self.v_plus))

    def swapped(self):
        """Same jump read with upstream and downstream exchanged."""
        return ShockSolution(
            self.p_plus, self.p_minus, self.v_plus, self.v_minus, self.rho_plus, self.rho_minus,
            self.shock_speed, self.linearly_degenerate, self.n_plus, self.n_minus,
            self.sigma_plus, self.sigma_minus, dict(self.residuals))


def _fluxes(rho, p, v, s=0.0):
    """Energy and momentum flux through a front moving at ``s``."""
    W2 = 1.0 / ((1.0 - v) * (1.0 + v))
    w = rho + p
    ttx = w * W2 * v
    ttt = w * W2 - p
    txx = ttx * v + p
    return ttx - s * ttt, txx - s * ttx


def _rel_jump(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def char_speeds(eos: BarotropicEos, p, v):
    """Acoustic characteristic speeds ``(lambda_-, lambda_+)``."""
    cs = math.sqrt(eos.sound_speed2(p))
    return (v - cs) / (1.0 - v * cs), (v + cs) / (1.0 + v * cs)


def _is_stiff(eos, p_a, p_b):
    if isinstance(eos, GammaLawBarotrope):
        return eos.gamma == 2.0
    return abs(eos.drho_hat(p_a) - 1.0) < 1e-12 and abs(eos.drho_hat(p_b) - 1.0) < 1e-12


def _solve_compressive(eos, p_u, p_d):
    """Shock-frame velocities for upstream pressure ``p_u`` < downstream ``p_d``."""
    rho_u, rho_d = eos.rho_hat(p_u), eos.rho_hat(p_d)
    w_u, w_d = rho_u + p_u, rho_d + p_d

    def downstream_v(vu):
        J = w_u * vu * vu / ((1.0 - vu) * (1.0 + vu))
        q = (J + p_u - p_d) / w_d  # W_d^2 v_d^2
        return J / vu, q

    def residual(vu):
        J, q = downstream_v(vu)
        if q <= 0.0:
            return -J
        vd = math.sqrt(q / (1.0 + q))
        return w_d * q / vd - J

    # the momentum flux must exceed p_d, which sets the lower end of the bracket
    a = (p_d - p_u) / w_u
    lo = math.sqrt(a / (1.0 + a))
    hi = None
    for k in range(1, 16):
        cand = 1.0 - 10.0 ** (-k)
        if cand > lo and residual(cand) > 0.0:
            hi = cand
            break
    if hi is None:
        raise NoRootError(f"no shock connects p={p_u!r} to p={p_d!r} for {eos.label}")
    vu = brentq(residual, lo, hi, xtol=1e-17, rtol=_RTOL, maxiter=500)
    J, q = downstream_v(vu)
    vd = math.sqrt(q / (1.0 + q))
    return vu, vd, rho_u, rho_d


def _stiff_front(eos, p_minus, p_plus):
    # p (1 - v) / (1 + v) is continuous across a front moving at +1
    v_minus = (p_minus - p_plus) / (p_minus + p_plus)
    rho_m, rho_p = eos.rho_hat(p_minus), eos.rho_hat(p_plus)
    fm = _fluxes(rho_m, p_minus, v_minus, 1.0)
    fp = _fluxes(rho_p, p_plus, 0.0, 1.0)
    scale = max(p_minus, p_plus)
    res = {"energy": abs(fm[0] - fp[0]) / scale, "momentum": abs(fm[1] - fp[1]) / scale}
    return ShockSolution(p_minus, p_plus, v_minus, 0.0, rho_m, rho_p, shock_speed=1.0,
                         linearly_degenerate=True, residuals=res)


def rh_solve_barotropic(eos: BarotropicEos, idx: Optional[IndexFunction], p_minus, p_plus) -> ShockSolution:
    """Solve the shock-frame jump conditions between two pressures.

    The compressive ordering is solved and the expansive one obtained by
    relabelling, so swapping the pressures swaps the velocities exactly.
    """
    if p_minus == p_plus:
        raise DegenerateShockError(f"p_minus == p_plus == {p_minus!r}")
    eos.check_p(p_minus)
    eos.check_p(p_plus)
    if _is_stiff(eos, p_minus, p_plus):
        return _stiff_front(eos, p_minus, p_plus)
    p_u, p_d = min(p_minus, p_plus), max(p_minus, p_plus)
    vu, vd, rho_u, rho_d = _solve_compressive(eos, p_u, p_d)
    fu = _fluxes(rho_u, p_u, vu)
    fd = _fluxes(rho_d, p_d, vd)
    res = {"energy": _rel_jump(fu[0], fd[0]), "momentum": _rel_jump(fu[1], fd[1])}
    sol = ShockSolution(p_u, p_d, vu, vd, rho_u, rho_d, residuals=res)
    return sol if p_minus < p_plus else sol.swapped()


def lax_admissible(eos: BarotropicEos, sol: ShockSolution) -> bool:
    """Supersonic inflow and subsonic outflow in the shock frame."""
    if sol.linearly_degenerate:
        return False
    if sol.sigma_minus is not None:
        cs_m = math.sqrt(eos.sound_speed2(sol.n_minus, sol.sigma_minus))
        cs_p = math.sqrt(eos.sound_speed2(sol.n_plus, sol.sigma_plus))
    else:
        cs_m = math.sqrt(eos.sound_speed2(sol.p_minus))
        cs_p = math.sqrt(eos.sound_speed2(sol.p_plus))
    return sol.v_minus > cs_m and sol.v_plus < cs_p


def nu_production(eos: BarotropicEos, idx: IndexFunction, sol: ShockSolution) -> float:
    """Net outflow of the ``nu``-current through the front per unit area."""
    s = sol.shock_speed
    out = idx.nu(sol.p_plus) * sol.W_plus * (sol.v_plus - s)
    inn = idx.nu(sol.p_minus) * sol.W_minus * (sol.v_minus - s)
    return out - inn


def gnl_min(eos: BarotropicEos, sol: ShockSolution, points=51) -> float:
    """Smallest GNL value over the energy-density interval spanned by the jump."""
    lo, hi = sorted((sol.rho_minus, sol.rho_plus))
    return min(gnl_value(eos, float(r)) for r in np.linspace(lo, hi, points))


def weak_shock_exponent(eos: BarotropicEos, idx: IndexFunction, p_minus, amplitudes) -> float:
    """Slope of ``log P`` against ``log (p_+ - p_-)`` over weak shocks."""
    eps = np.asarray(sorted(amplitudes), dtype=float)
    if eps.size < 2 or eps[-1] / eps[0] < 100.0 * (1 - 1e-12):
        raise ValueError("amplitudes must span at least two decades")
    prod = []
    for e in eps:
        sol = rh_solve_barotropic(eos, idx, p_minus, p_minus + e)
        if not lax_admissible(eos, sol):
            raise ValueError(f"amplitude {e!r} gives a non-admissible shock")
        prod.append(nu_production(eos, idx, sol))
    prod = np.asarray(prod)
    if np.any(prod <= 1e-12 * idx.nu(p_minus)):
        raise ValueError("production unresolved (linearly degenerate mode); slope undefined")
    return float(np.polyfit(np.log(eps), np.log(prod), 1)[0])


# ---------------------------------------------------------------------------
# five-field ideal gas


def rh_solve_ideal(eos: IdealGasEos, n_minus, sigma_minus, v_minus, sonic_tol=1e-12) -> ShockSolution:
    """Downstream ideal-gas state for a given supersonic upstream state."""
    up = thermo_props(eos, n_minus, sigma_minus)
    cs = math.sqrt(eos.gamma * up.p / (up.rho + up.p))
    if not 0.0 < v_minus < 1.0:
        raise ValueError(f"upstream velocity {v_minus!r} outside (0, 1)")
    if v_minus < cs * (1.0 - sonic_tol):
        raise SubsonicUpstreamError(f"v_minus = {v_minus!r} below sound speed {cs!r}")
    base = dict(p_minus=up.p, rho_minus=up.rho, v_minus=v_minus, n_minus=n_minus, sigma_minus=sigma_minus)
    if v_minus <= cs * (1.0 + sonic_tol):
        return ShockSolution(p_plus=up.p, v_plus=v_minus, rho_plus=up.rho, n_plus=n_minus,
                             sigma_plus=sigma_minus, residuals={"energy": 0.0, "momentum": 0.0, "matter": 0.0},
                             **base)
    g, m = eos.gamma, eos.m
    W = _w(v_minus)
    j = n_minus * W * v_minus
    J = (up.rho + up.p) * W * W * v_minus
    Pi = J * v_minus + up.p

    def residual(v):
        W2 = 1.0 / ((1.0 - v) * (1.0 + v))
        return J / (W2 * v) - g / (g - 1.0) * (Pi - J * v) - m * j / (math.sqrt(W2) * v)

    # residual > 0 near v = 0 and < 0 between the physical root and v_minus
    neg = None
    for k in range(1, 14):
        cand = v_minus * (1.0 - 10.0 ** (-k))
        if residual(cand) < 0.0:
            neg = cand
    if neg is None:
        raise NoRootError("no downstream state found")
    lo = neg * 0.5
    while residual(lo) <= 0.0:
        lo *= 0.5
        if lo < 1e-300:
            raise NoRootError("no downstream state found")
    v_plus = brentq(residual, lo, neg, xtol=1e-17, rtol=_RTOL, maxiter=500)
    Wp = _w(v_plus)
    n_plus = j / (Wp * v_plus)
    p_plus = Pi - J * v_plus
    sigma_plus = eos.sigma_of(n_plus, p_plus)
    down = thermo_props(eos, n_plus, sigma_plus)
    fu = _fluxes(up.rho, up.p, v_minus)
    fd = _fluxes(down.rho, down.p, v_plus)
    res = {"energy": _rel_jump(fu[0], fd[0]), "momentum": _rel_jump(fu[1], fd[1]),
           "matter": _rel_jump(j, n_plus * Wp * v_plus)}
    return ShockSolution(p_plus=down.p, v_plus=v_plus, rho_plus=down.rho, n_plus=n_plus,
                         sigma_plus=sigma_plus, residuals=res, **base)


def entropy_production(sol: ShockSolution) -> float:
    """Jump of the entropy flux ``n sigma W v`` across the front."""
    return (sol.n_plus * sol.W_plus * sol.v_plus * sol.sigma_plus
            - sol.n_minus * sol.W_minus * sol.v_minus * sol.sigma_minus)


def matter_production(sol: ShockSolution) -> float:
    """Jump of ``n W (v - s)`` for isentropic shocks given ``n`` on both sides."""
    s = sol.shock_speed
    return sol.n_plus * sol.W_plus * (sol.v_plus - s) - sol.n_minus * sol.W_minus * (sol.v_minus - s)


SHOCK_CSV_COLUMNS = ("gamma", "p_minus", "p_plus", "v_minus", "v_plus", "lax", "gnl_min", "production")


def shock_row(eos, idx, sol):
    return {
        "gamma": getattr(eos, "gamma", float("nan")),
        "p_minus": sol.p_minus,
        "p_plus": sol.p_plus,
        "v_minus": sol.v_minus,
        "v_plus": sol.v_plus,
        "lax": lax_admissible(eos, sol),
        "gnl_min": gnl_min(eos, sol),
        "production": nu_production(eos, idx, sol),
    }
