"""Godunov variables, 4-potentials, fluxes and symmetrizers.

Four-field (barotropic) system
    ``Y_a = U_a / f`` with ``f = (-Y.Y)**-1/2``, potential ``X^b = pi(f) Y^b``
    and flux ``T^{ab} = (rho + p) U^a U^b + p g^{ab}``.

Five-field (ideal gas) system
    ``psi_a = U_a / theta``, ``psi_4 = mu / theta`` with generating function
    ``xhat(theta, psi_4)`` equal to the pressure, potential
    ``X^b = xhat psi^b``, fluxes ``T^{ab}`` and ``N^b = n U^b``.

All covectors are stored with lower indices; the contravariant partner is
obtained by flipping the sign of the time component.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .eos import IdealGasEos, thermo_props
from .errors import DomainError, InvalidStateError, NumericError
from .errors import PreconditionError, UsageError
from .index import IndexFunction
from .numerics import jacobian_fd
from .spacetime import METRIC, dot, flip

log = logging.getLogger(__name__)

GINV = METRIC  # g^{ab} = g_{ab} for this metric


def _covector(x, n=4):
    a = np.asarray(x, dtype=float)
    if a.shape != (n,):
        raise ValueError(f"expected {n} components, got shape {a.shape}")
    return a


def _timelike_scale(y, what="Godunov covector"):
    nrm = dot(y, y)
    if not nrm < 0:
        raise InvalidStateError(f"{what} {np.array2string(y, precision=6)} is not timelike (norm {nrm:.3g})")
    return 1.0 / math.sqrt(-nrm)


def _lower_velocity(U):
    u = np.asarray(U, dtype=float)
    if getattr(U, "covariant", False):
        return u
    return flip(u)


# ---------------------------------------------------------------------------
# four-field


@dataclass(frozen=True)
class GodunovState4:
    upsilon: np.ndarray

    @property
    def f(self):
        return _timelike_scale(self.upsilon)


def to_godunov4(idx: IndexFunction, p, U) -> GodunovState4:
    """``Y_a = U_a / f(p)`` from pressure and (contravariant) 4-velocity."""
    return GodunovState4(_lower_velocity(U) / idx.f(p))


def _upsilon(state):
    return _covector(state.upsilon if isinstance(state, GodunovState4) else state)


def from_godunov4(idx: IndexFunction, state):
    """Recover ``(p, U^a)`` from Godunov variables."""
    y = _upsilon(state)
    f = _timelike_scale(y)
    p = idx.pi(f)
    return p, flip(f * y)


def potential4(idx: IndexFunction, state, check=False):
    """4-potential ``X^b = pi(f) Y^b`` (contravariant)."""
    y = _upsilon(state)
    f = _timelike_scale(y)
    x = idx.pi(f) * flip(y)
    if check:
        fd = jacobian_fd(lambda z: np.array([idx.xhat(_timelike_scale(z))]), y)[0]
        err = np.max(np.abs(fd - x)) / np.max(np.abs(x))
        if err > 1e-6:
            raise NumericError(f"potential disagrees with gradient of xhat by {err:.3g}", achieved=err)
    return x


def flux4(idx: IndexFunction, state):
    """Energy-momentum tensor ``T^{ab}`` as a function of Godunov variables."""
    y = _upsilon(state)
    f = _timelike_scale(y)
    u = flip(f * y)
    p = idx.pi(f)
    w = f * idx.dpi(f)  # f pi'(f) = rho + p
    return w * np.outer(u, u) + p * GINV


def stress_tensor(rho, p, U):
    u = np.asarray(U, dtype=float)
    return (rho + p) * np.outer(u, u) + p * GINV


def extra_current4(idx: IndexFunction, state):
    """``X^b - T^{ab} Y_a``; equals ``nu(p) U^b`` on every state."""
    y = _upsilon(state)
    return potential4(idx, y) - y @ flux4(idx, y)


# ---------------------------------------------------------------------------
# symmetrizer


@dataclass(frozen=True)
class Symmetrizer:
    matrix: np.ndarray
    T: np.ndarray
    eigenvalues: np.ndarray
    asymmetry: float
    sign: int
    min_abs_eigenvalue: float

    @property
    def definite(self):
        return self.sign != 0


def _certify(M, T, what):
    M = np.asarray(M)
    scale = np.linalg.norm(M)
    asym = float(np.linalg.norm(M - M.T) / scale) if scale > 0 else 0.0
    ev = np.linalg.eigvalsh(0.5 * (M + M.T))
    if np.all(ev > 0):
        sign = 1
    elif np.all(ev < 0):
        sign = -1
    else:
        sign = 0
        log.info("%s symmetrizer not definite for T=%s: eigenvalues %s", what, T, ev)
    return Symmetrizer(M, np.asarray(T, dtype=float), ev, asym, sign, float(np.min(np.abs(ev))))


def _check_T(T):
    t = _covector(T)
    if not dot(t, t) < 0:
        raise PreconditionError(f"contraction covector {t} is not timelike")
    return t


def symmetrizer4(idx: IndexFunction, state, T) -> Symmetrizer:
    """``M_ag = d(T^{ab} T_b)/dY_g`` by central differences of the analytic flux."""
    y = _upsilon(state)
    _timelike_scale(y)
    t = _check_T(T)
    M = jacobian_fd(lambda z: flux4(idx, z) @ t, y)
    return _certify(M, t, "four-field")


def symmetrizers4(idx: IndexFunction, state, Ts):
    """:func:`symmetrizer4` for many covectors, differencing the flux only once."""
    y = _upsilon(state)
    _timelike_scale(y)
    D = jacobian_fd(lambda z: flux4(idx, z), y)  # D[a, b, g] = dT^{ab}/dY_g
    out = []
    for T in Ts:
        t = _check_T(T)
        out.append(_certify(np.einsum("abg,b->ag", D, t), t, "four-field"))
    return out


# ---------------------------------------------------------------------------
# five-field ideal gas


@dataclass(frozen=True)
class GodunovState5:
    psi: np.ndarray
    psi4: float

    @property
    def theta(self):
        return _timelike_scale(self.psi)

    @property
    def vector(self):
        return np.concatenate([self.psi, [self.psi4]])

    @classmethod
    def from_vector(cls, z):
        z = np.asarray(z, dtype=float)
        return cls(z[:4], float(z[4]))


def _state5(state):
    if isinstance(state, GodunovState5):
        return _covector(state.psi), float(state.psi4)
    z = _covector(state, 5)
    return z[:4], float(z[4])


def to_godunov5(eos: IdealGasEos, n, sigma, U) -> GodunovState5:
    st = thermo_props(eos, n, sigma)
    return GodunovState5(_lower_velocity(U) / st.theta, st.mu / st.theta)


def from_godunov5(eos: IdealGasEos, state):
    """Closed-form inverse: ``(n, sigma, U^a)`` from ``(psi_a, psi_4)``."""
    psi, psi4 = _state5(state)
    theta = _timelike_scale(psi, "temperature covector")
    sigma = eos.m / theta + eos.gamma * eos.c_v - psi4
    n = (eos.c_v * theta * math.exp(-sigma / eos.c_v) / eos.k) ** (1.0 / (eos.gamma - 1.0))
    eos.check(n, sigma)
    return n, sigma, flip(theta * psi)


def _ktilde(eos):
    return (eos.gamma - 1.0) * eos.c_v * (eos.c_v / eos.k) ** (1.0 / (eos.gamma - 1.0))


def xhat_ideal(eos: IdealGasEos, theta, psi4):
    """Ideal-gas generating function (equal to the pressure)."""
    if not theta > 0:
        raise DomainError(f"theta = {theta!r} must be positive")
    g, cv = eos.gamma, eos.c_v
    return _ktilde(eos) * theta ** (1.0 / (1.0 - 1.0 / g)) * math.exp(
        (psi4 - eos.m / theta - g * cv) / (cv * (g - 1.0)))


def xhat_ideal_expanded(eos: IdealGasEos, theta, psi4):
    """Same function written with separate mass and entropy factors."""
    if not theta > 0:
        raise DomainError(f"theta = {theta!r} must be positive")
    g, cv, k, m = eos.gamma, eos.c_v, eos.k, eos.m
    return ((g - 1.0) * cv * theta * (k / (cv * theta)) ** (1.0 / (1.0 - g))
            * math.exp(m / theta / (cv * (1.0 - g)))
            * math.exp((-psi4 + g * cv) / (cv * (1.0 - g))))


def xhat_ideal_partials(eos: IdealGasEos, theta, psi4):
    """``(xhat, d xhat/d theta, d xhat/d psi_4)``."""
    x = xhat_ideal(eos, theta, psi4)
    g, cv = eos.gamma, eos.c_v
    dtheta = x * (g / ((g - 1.0) * theta) + eos.m / (cv * (g - 1.0) * theta * theta))
    dpsi = x / (cv * (g - 1.0))
    return x, dtheta, dpsi


def potential5(eos: IdealGasEos, state):
    psi, psi4 = _state5(state)
    theta = _timelike_scale(psi, "temperature covector")
    return xhat_ideal(eos, theta, psi4) * flip(psi)


def fluxes5(eos: IdealGasEos, state):
    """Analytic ``(T^{ab}, N^b)`` from the partial derivatives of ``xhat``."""
    psi, psi4 = _state5(state)
    theta = _timelike_scale(psi, "temperature covector")
    x, dth, dps = xhat_ideal_partials(eos, theta, psi4)
    up = flip(psi)
    T = theta**3 * dth * np.outer(up, up) + x * GINV
    N = dps * up
    return T, N


def flux_matrix5(eos: IdealGasEos, state):
    """All five flux rows ``F^{ab}``: energy-momentum then matter."""
    T, N = fluxes5(eos, state)
    return np.vstack([T, N])


def symmetrizer5(eos: IdealGasEos, state, T) -> Symmetrizer:
    psi, psi4 = _state5(state)
    _timelike_scale(psi, "temperature covector")
    t = _check_T(T)
    z = np.concatenate([psi, [psi4]])
    M = jacobian_fd(lambda w: flux_matrix5(eos, w) @ t, z)
    return _certify(M, t, "five-field")


def symmetrizers5(eos: IdealGasEos, state, Ts):
    """:func:`symmetrizer5` for many covectors, differencing the fluxes only once."""
    psi, psi4 = _state5(state)
    _timelike_scale(psi, "temperature covector")
    D = jacobian_fd(lambda w: flux_matrix5(eos, w), np.concatenate([psi, [psi4]]))
    out = []
    for T in Ts:
        t = _check_T(T)
        out.append(_certify(np.einsum("abg,b->ag", D, t), t, "five-field"))
    return out


def entropy_current5(eos: IdealGasEos, state):
    """``X^b - T^{ab} psi_a - N^b psi_4``; equals ``n sigma U^b``."""
    psi, psi4 = _state5(state)
    T, N = fluxes5(eos, (*psi, psi4))
    return potential5(eos, (*psi, psi4)) - psi @ T - psi4 * N


def entropy_current_residual(eos: IdealGasEos, state):
    """Max-component mismatch between the extra current and ``n sigma U^b``.

    Normalised by the larger of the expected current and the potential, so
    that states with ``sigma = 0`` still get a meaningful relative value.
    """
    n, sigma, U = from_godunov5(eos, state)
    expected = n * sigma * U
    got = entropy_current5(eos, state)
    scale = max(np.max(np.abs(expected)), np.max(np.abs(potential5(eos, state))))
    return float(np.max(np.abs(got - expected)) / scale)


# ---------------------------------------------------------------------------
# divergence of the extra current on sampled fields


@dataclass(frozen=True)
class StateField:
    """States sampled on a uniform ``(t, x)`` grid with an extra-current map.

    ``states`` has shape ``(nt, nx, k)``; ``current`` maps one state to its
    contravariant 4-current.
    """

    states: np.ndarray
    dt: float
    dx: float
    current: Callable[[np.ndarray], np.ndarray]


def _d4(a, h, axis):
    # fourth-order central first derivative on interior points
    a = np.moveaxis(a, axis, 0)
    d = (-a[4:] + 8.0 * a[3:-1] - 8.0 * a[1:-3] + a[:-4]) / (12.0 * h)
    return np.moveaxis(d, 0, axis)


def smooth_conservation_residual(field: StateField):
    """Max over interior points of ``|d_t J^t + d_x J^x|`` with 4th-order stencils."""
    nt, nx = field.states.shape[:2]
    if nt < 5 or nx < 5:
        raise UsageError(f"need at least 5 points per axis, got {nt} x {nx}")
    J = np.empty((nt, nx, 2))
    for i in range(nt):
        for j in range(nx):
            c = field.current(field.states[i, j])
            J[i, j] = c[0], c[1]
    dt_Jt = _d4(J[..., 0], field.dt, 0)[:, 2:-2]
    dx_Jx = _d4(J[..., 1], field.dx, 1)[2:-2, :]
    return float(np.max(np.abs(dt_Jt + dx_Jx)))


def barotropic_field(idx: IndexFunction, p, v, dt, dx) -> StateField:
    """Godunov states from 1+1 arrays of pressure and x-velocity."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    states = np.empty(p.shape + (4,))
    for ij in np.ndindex(p.shape):
        W = 1.0 / math.sqrt(1.0 - v[ij] ** 2)
        states[ij] = to_godunov4(idx, float(p[ij]), np.array([W, W * v[ij], 0.0, 0.0])).upsilon
    return StateField(states, dt, dx, lambda y: extra_current4(idx, y))


def ideal_gas_field(eos: IdealGasEos, n, sigma, v, dt, dx) -> StateField:
    n = np.asarray(n, dtype=float)
    states = np.empty(n.shape + (5,))
    for ij in np.ndindex(n.shape):
        W = 1.0 / math.sqrt(1.0 - v[ij] ** 2)
        st = to_godunov5(eos, float(n[ij]), float(sigma[ij]), np.array([W, W * v[ij], 0.0, 0.0]))
        states[ij] = st.vector
    return StateField(states, dt, dx, lambda z: entropy_current5(eos, z))

