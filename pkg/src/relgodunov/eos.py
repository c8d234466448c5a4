"""Equation-of-state hierarchy.

Four families are provided:

* barotropic closures ``rho = rho_hat(p)`` (gamma-law, tabulated, generic),
* isentropic closures ``e = e(n)`` (massless gamma-law, massive polytrope),
* product-form fluids ``e(n, sigma) = n**(gamma-1) r(sigma)``,
* the ideal gas ``e(n, sigma) = m + k n**(gamma-1) exp(sigma / c_v)``.

All records are immutable; evaluators raise :class:`DomainError` outside the
declared valid interval instead of returning garbage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import DegenerateTemperatureError, DomainError, UnsupportedError

FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)


def _check_gamma(gamma, strict, upper_closed=True):
    ok = 1.0 < gamma <= 2.0 if upper_closed else 1.0 < gamma < 2.0
    if strict and not ok:
        rng = "(1, 2]" if upper_closed else "(1, 2)"
        raise DomainError(f"gamma = {gamma!r} outside {rng}")


# ---------------------------------------------------------------------------
# barotropic


class BarotropicEos:
    """Base class for ``rho = rho_hat(p)`` closures on ``(p_min, p_max)``.

    Subclasses supply ``rho_hat``, ``drho_hat`` and ``d2rho_hat``; the
    inverse ``p_hat`` falls back to a bracketed root find.
    """

    p_min: float = 0.0
    p_max: float = math.inf
    label: str = "barotrope"

    def check_p(self, p):
        if not (self.p_min < p <= self.p_max) or not math.isfinite(p):
            raise DomainError(f"p = {p!r} outside ({self.p_min!r}, {self.p_max!r}] for {self.label}")

    def rho_hat(self, p):
        raise NotImplementedError

    def drho_hat(self, p):
        raise NotImplementedError

    def d2rho_hat(self, p):
        raise NotImplementedError

    def sound_speed2(self, p):
        return 1.0 / self.drho_hat(p)

    # unchecked array evaluators for the finite-volume solver

    def rho_hat_array(self, p):
        return np.vectorize(self.rho_hat, otypes=[float])(p)

    def drho_hat_array(self, p):
        return np.vectorize(self.drho_hat, otypes=[float])(p)

    @property
    def rho_min(self):
        return self.rho_hat(self.p_min) if self.p_min > 0 else 0.0

    def p_hat(self, rho, rtol=1e-12):
        """Inverse of ``rho_hat`` by bracketed monotone root finding."""
        if not rho > self.rho_min:
            raise DomainError(f"rho = {rho!r} below range of {self.label}")
        lo = self.p_min * (1.0 + 1e-14) if self.p_min > 0 else rho * 1e-12
        hi = max(rho, 2.0 * lo)
        while self.rho_hat(hi) < rho:
            hi *= 2.0
            if hi > self.p_max:
                hi = self.p_max
                if self.rho_hat(hi) < rho:
                    raise DomainError(f"rho = {rho!r} above range of {self.label}")
                break
        while self.p_min == 0 and self.rho_hat(lo) > rho:
            lo *= 1e-3
        return brentq(lambda p: self.rho_hat(p) - rho, lo, hi, xtol=1e-300, rtol=rtol, maxiter=500)

    def dp_hat(self, rho):
        return 1.0 / self.drho_hat(self.p_hat(rho))

    def d2p_hat(self, rho):
        p = self.p_hat(rho)
        d1 = self.drho_hat(p)
        return -self.d2rho_hat(p) / d1**3


@dataclass(frozen=True)
class GammaLawBarotrope(BarotropicEos):
    """``rho_hat(p) = p / (gamma - 1)``; ``gamma = 2`` is the stiff fluid.

    ``strict=False`` admits acausal exponents so that checks can be run on
    them; every shipped instance is strict.
    """

    gamma: float
    p_min: float = 0.0
    p_max: float = math.inf
    strict: bool = True
    label: str = ""

    def __post_init__(self):
        _check_gamma(self.gamma, self.strict)
        if not self.label:
            object.__setattr__(self, "label", f"gamma-law({self.gamma:g})")

    def rho_hat(self, p):
        self.check_p(p)
        return p / (self.gamma - 1.0)

    def drho_hat(self, p):
        self.check_p(p)
        return 1.0 / (self.gamma - 1.0)

    def d2rho_hat(self, p):
        self.check_p(p)
        return 0.0

    def rho_hat_array(self, p):
        return np.asarray(p, dtype=float) / (self.gamma - 1.0)

    def drho_hat_array(self, p):
        return np.full(np.shape(p), 1.0 / (self.gamma - 1.0))

    def p_hat(self, rho, rtol=1e-12):
        p = (self.gamma - 1.0) * rho
        self.check_p(p)
        return p

    def dp_hat(self, rho):
        self.p_hat(rho)
        return self.gamma - 1.0

    def d2p_hat(self, rho):
        self.p_hat(rho)
        return 0.0


def stiff_barotrope(**kwargs) -> GammaLawBarotrope:
    return GammaLawBarotrope(2.0, **kwargs)


@dataclass(frozen=True)
class CallableBarotrope(BarotropicEos):
    """Barotrope from user-supplied evaluators (``rho_hat`` and derivatives)."""

    fn: Callable[[float], float]
    dfn: Callable[[float], float]
    d2fn: Callable[[float], float]
    p_min: float = 0.0
    p_max: float = math.inf
    label: str = "callable"
    inverse: Optional[Callable[[float], float]] = None

    def rho_hat(self, p):
        self.check_p(p)
        return self.fn(p)

    def drho_hat(self, p):
        self.check_p(p)
        return self.dfn(p)

    def d2rho_hat(self, p):
        self.check_p(p)
        return self.d2fn(p)

    def p_hat(self, rho, rtol=1e-12):
        if self.inverse is not None:
            p = self.inverse(rho)
            self.check_p(p)
            return p
        return super().p_hat(rho, rtol)


@dataclass(frozen=True)
class TabulatedBarotrope(BarotropicEos):
    """Monotone cubic (PCHIP) interpolant through ``(p, rho)`` samples.

    Second derivatives are those of the interpolant, only piecewise
    continuous; GNL values computed from them carry interpolation error.
    """

    p_table: np.ndarray
    rho_table: np.ndarray
    label: str = "tabulated"
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = np.asarray(self.p_table, dtype=float)
        rho = np.asarray(self.rho_table, dtype=float)
        if p.ndim != 1 or p.shape != rho.shape or p.size < 2:
            raise DomainError("table needs matching 1-D p and rho columns with >= 2 rows")
        if np.any(np.diff(p) <= 0) or np.any(np.diff(rho) <= 0):
            raise DomainError("tabulated p and rho must be strictly increasing")
        if np.any(rho <= 0):
            raise DomainError("tabulated rho must be positive")
        object.__setattr__(self, "p_table", p)
        object.__setattr__(self, "rho_table", rho)
        object.__setattr__(self, "_interp", PchipInterpolator(p, rho))

    @property
    def p_min(self):
        return float(self.p_table[0])

    @property
    def p_max(self):
        return float(self.p_table[-1])

    def check_p(self, p):
        if not (self.p_min <= p <= self.p_max):
            raise DomainError(f"p = {p!r} outside [{self.p_min!r}, {self.p_max!r}] for {self.label}")

    @property
    def rho_min(self):
        return float(self.rho_table[0])

    def rho_hat(self, p):
        self.check_p(p)
        return float(self._interp(p))

    def drho_hat(self, p):
        self.check_p(p)
        return float(self._interp(p, 1))

    def d2rho_hat(self, p):
        self.check_p(p)
        return float(self._interp(p, 2))

    def rho_hat_array(self, p):
        return self._interp(np.clip(p, self.p_min, self.p_max))

    def drho_hat_array(self, p):
        return self._interp(np.clip(p, self.p_min, self.p_max), 1)

    def p_hat(self, rho, rtol=1e-12):
        if not self.rho_table[0] <= rho <= self.rho_table[-1]:
            raise DomainError(f"rho = {rho!r} outside table range")
        if rho == self.rho_table[0]:
            return self.p_min
        return brentq(lambda p: float(self._interp(p)) - rho, self.p_min, self.p_max, rtol=rtol, xtol=1e-300)

    @classmethod
    def from_csv(cls, path, label=None):
        data = np.genfromtxt(path, delimiter=",", comments="#")
        if data.ndim == 2 and np.isnan(data[0]).any():
            data = data[1:]
        return cls(data[:, 0], data[:, 1], label=label or f"tabulated({path})")


def baro_props(eos: BarotropicEos, p):
    """Return ``(rho, rho_hat'(p), c_s**2)`` at pressure ``p``."""
    rho = eos.rho_hat(p)
    d = eos.drho_hat(p)
    return rho, d, 1.0 / d


def gnl_value(eos: BarotropicEos, rho):
    """Left-hand side of the genuine-nonlinearity condition at energy density ``rho``.

    Positive means the acoustic mode is genuinely nonlinear there; zero is
    linear degeneracy (stiff fluid).
    """
    p = eos.p_hat(rho)
    dp = eos.dp_hat(rho)
    d2p = eos.d2p_hat(rho)
    return (rho + p) * d2p + 2.0 * (1.0 - dp) * dp


@dataclass(frozen=True)
class CausalityReport:
    violations: list
    marginal: list
    checked: int

    @property
    def ok(self):
        return not self.violations


def causality_scan(eos: BarotropicEos, p_grid, marginal_tol=1e-12) -> CausalityReport:
    """Flag pressures where ``rho_hat'(p) < 1`` (superluminal sound)."""
    violations, marginal = [], []
    for p in p_grid:
        d = eos.drho_hat(float(p))
        if abs(d - 1.0) <= marginal_tol:
            marginal.append(float(p))
        elif d < 1.0:
            violations.append(float(p))
    return CausalityReport(violations, marginal, len(p_grid))


# ---------------------------------------------------------------------------
# thermodynamic state


@dataclass(frozen=True)
class ThermoState:
    n: float
    e: float
    rho: float
    p: float
    h: float
    sigma: Optional[float] = None
    theta: Optional[float] = None
    mu: Optional[float] = None


# ---------------------------------------------------------------------------
# isentropic


class IsentropicEos:
    """Base class for ``e = e(n)`` closures on ``(n_min, n_max)``."""

    n_min: float = 0.0
    n_max: float = math.inf
    label: str = "isentropic"

    def check_n(self, n):
        if not (self.n_min < n <= self.n_max) or not math.isfinite(n):
            raise DomainError(f"n = {n!r} outside ({self.n_min!r}, {self.n_max!r}] for {self.label}")

    def e(self, n):
        raise NotImplementedError

    def de(self, n):
        raise NotImplementedError

    def d2e(self, n):
        raise NotImplementedError

    def d3e(self, n):
        s = FD_STEP * max(1.0, abs(n))
        return (self.d2e(n + s) - self.d2e(n - s)) / (2.0 * s)

    def rho(self, n):
        return n * self.e(n)

    def p(self, n):
        return n * n * self.de(n)

    def h(self, n):
        return self.e(n) + n * self.de(n)

    def dp_dn(self, n):
        return 2.0 * n * self.de(n) + n * n * self.d2e(n)

    def d2p_dn2(self, n):
        return 2.0 * self.de(n) + 4.0 * n * self.d2e(n) + n * n * self.d3e(n)

    def n_of_p(self, p):
        lo, hi = 1.0, 1.0
        while self.p(hi) < p:
            hi *= 2.0
        while self.p(lo) > p:
            lo *= 0.5
        return brentq(lambda n: self.p(n) - p, lo, hi, xtol=1e-300, rtol=1e-15)

    def to_barotropic(self) -> BarotropicEos:
        """The barotrope ``rho_hat(p) = rho(n(p))`` induced by this closure."""

        def fn(p):
            return self.rho(self.n_of_p(p))

        def dfn(p):
            n = self.n_of_p(p)
            return self.h(n) / self.dp_dn(n)

        def d2fn(p):
            n = self.n_of_p(p)
            dp = self.dp_dn(n)
            return (dp / n * dp - self.h(n) * self.d2p_dn2(n)) / dp**3

        p_lo = self.p(self.n_min) if self.n_min > 0 else 0.0
        p_hi = self.p(self.n_max) if math.isfinite(self.n_max) else math.inf
        return CallableBarotrope(fn, dfn, d2fn, p_lo, p_hi, label=f"barotrope[{self.label}]")


@dataclass(frozen=True)
class MasslessGammaLaw(IsentropicEos):
    """``e(n) = n**(gamma-1) / gamma`` so that ``rho = n**gamma / gamma`` and ``h = n**(gamma-1)``."""

    gamma: float
    n_min: float = 0.0
    n_max: float = math.inf
    label: str = ""

    def __post_init__(self):
        _check_gamma(self.gamma, True)
        if not self.label:
            object.__setattr__(self, "label", f"massless-isentropic({self.gamma:g})")

    def e(self, n):
        self.check_n(n)
        return n ** (self.gamma - 1.0) / self.gamma

    def de(self, n):
        self.check_n(n)
        g = self.gamma
        return (g - 1.0) / g * n ** (g - 2.0)

    def d2e(self, n):
        self.check_n(n)
        g = self.gamma
        return (g - 1.0) * (g - 2.0) / g * n ** (g - 3.0)

    def d3e(self, n):
        self.check_n(n)
        g = self.gamma
        return (g - 1.0) * (g - 2.0) * (g - 3.0) / g * n ** (g - 4.0)

    def n_of_p(self, p):
        g = self.gamma
        return (g * p / (g - 1.0)) ** (1.0 / g)

    def to_barotropic(self) -> GammaLawBarotrope:
        return GammaLawBarotrope(self.gamma)


def stiff_isentropic() -> MasslessGammaLaw:
    """Stiff fluid ``e(n) = n / 2``: ``rho = p = n**2 / 2``."""
    return MasslessGammaLaw(2.0, label="stiff")


@dataclass(frozen=True)
class MassivePolytrope(IsentropicEos):
    """``e(n) = m + kappa n**(gamma-1)``: rest mass plus polytropic energy."""

    m: float
    kappa: float
    gamma: float
    n_min: float = 0.0
    n_max: float = math.inf
    label: str = ""

    def __post_init__(self):
        _check_gamma(self.gamma, True)
        if self.m < 0 or self.kappa <= 0:
            raise DomainError("polytrope needs m >= 0 and kappa > 0")
        if not self.label:
            object.__setattr__(self, "label", f"polytrope(m={self.m:g},kappa={self.kappa:g},gamma={self.gamma:g})")

    def e(self, n):
        self.check_n(n)
        return self.m + self.kappa * n ** (self.gamma - 1.0)

    def de(self, n):
        self.check_n(n)
        g = self.gamma
        return self.kappa * (g - 1.0) * n ** (g - 2.0)

    def d2e(self, n):
        self.check_n(n)
        g = self.gamma
        return self.kappa * (g - 1.0) * (g - 2.0) * n ** (g - 3.0)

    def d3e(self, n):
        self.check_n(n)
        g = self.gamma
        return self.kappa * (g - 1.0) * (g - 2.0) * (g - 3.0) * n ** (g - 4.0)

    def n_of_p(self, p):
        return (p / (self.kappa * (self.gamma - 1.0))) ** (1.0 / self.gamma)


def isen_props(eos: IsentropicEos, n) -> ThermoState:
    if not n > 0:
        raise DomainError(f"n = {n!r} must be positive")
    e = eos.e(n)
    rho = n * e
    p = eos.p(n)
    return ThermoState(n=n, e=e, rho=rho, p=p, h=(rho + p) / n)


# ---------------------------------------------------------------------------
# product form and ideal gas


@dataclass(frozen=True)
class ProductFormEos:
    """``e(n, sigma) = n**(gamma-1) r(sigma)`` with ``1 < gamma < 2``.

    ``flavor`` is ``"exp"`` (massless ideal gas, ``r = k exp(sigma/c_v)``),
    ``"power"`` (double gamma-law, ``r = k sigma**gamma``) or ``"custom"``.
    """

    gamma: float
    r: Callable[[float], float]
    dr: Callable[[float], float]
    flavor: str = "custom"
    sigma_min: float = -math.inf
    sigma_max: float = math.inf
    r_inverse: Optional[Callable[[float], float]] = None
    label: str = "product-form"
    m: float = 0.0

    def __post_init__(self):
        _check_gamma(self.gamma, True, upper_closed=False)

    @classmethod
    def massless_ideal(cls, gamma, k=1.0, c_v=1.0):
        return cls(
            gamma,
            r=lambda s: k * math.exp(s / c_v),
            dr=lambda s: k * math.exp(s / c_v) / c_v,
            flavor="exp",
            r_inverse=lambda r: c_v * math.log(r / k),
            label=f"massless-ideal(gamma={gamma:g},k={k:g},c_v={c_v:g})",
        )

    @classmethod
    def double_gamma(cls, gamma, k=1.0):
        return cls(
            gamma,
            r=lambda s: k * s**gamma,
            dr=lambda s: k * gamma * s ** (gamma - 1.0),
            flavor="power",
            sigma_min=0.0,
            r_inverse=lambda r: (r / k) ** (1.0 / gamma),
            label=f"double-gamma(gamma={gamma:g},k={k:g})",
        )

    def check(self, n, sigma):
        if not n > 0:
            raise DomainError(f"n = {n!r} must be positive")
        if not (self.sigma_min < sigma < self.sigma_max):
            raise DomainError(f"sigma = {sigma!r} outside ({self.sigma_min!r}, {self.sigma_max!r})")

    def sigma_of(self, n, p):
        """Entropy recovered from ``(n, p)`` via the inverse of ``r``."""
        if self.r_inverse is None:
            raise UnsupportedError("no inverse of r available")
        return self.r_inverse(p / ((self.gamma - 1.0) * n**self.gamma))


@dataclass(frozen=True)
class IdealGasEos:
    """``e(n, sigma) = m + k n**(gamma-1) exp(sigma / c_v)``."""

    m: float = 0.0
    k: float = 1.0
    c_v: float = 1.0
    gamma: float = 5.0 / 3.0
    n_min: float = 0.0
    n_max: float = math.inf

    def __post_init__(self):
        _check_gamma(self.gamma, True)
        if self.m < 0 or self.k <= 0 or self.c_v <= 0:
            raise DomainError("ideal gas needs m >= 0, k > 0, c_v > 0")

    @property
    def label(self):
        return f"ideal-gas(m={self.m:g},k={self.k:g},c_v={self.c_v:g},gamma={self.gamma:g})"

    def check(self, n, sigma):
        if not (self.n_min < n <= self.n_max) or not math.isfinite(n):
            raise DomainError(f"n = {n!r} outside ({self.n_min!r}, {self.n_max!r}]")
        if not math.isfinite(sigma):
            raise DomainError(f"sigma = {sigma!r} not finite")

    def sound_speed2(self, n, sigma):
        s = thermo_props(self, n, sigma)
        return self.gamma * s.p / (s.rho + s.p)

    def pressure(self, n, sigma):
        return (self.gamma - 1.0) * self.k * n**self.gamma * math.exp(sigma / self.c_v)

    def sigma_of(self, n, p):
        return self.c_v * math.log(p / ((self.gamma - 1.0) * self.k * n**self.gamma))


def thermo_props(eos, n, sigma) -> ThermoState:
    """Full thermodynamic state of a product-form fluid or ideal gas."""
    if isinstance(eos, ProductFormEos):
        eos.check(n, sigma)
        g = eos.gamma
        r = eos.r(sigma)
        ng1 = n ** (g - 1.0)
        e = ng1 * r
        theta = ng1 * eos.dr(sigma)
        p = (g - 1.0) * n * e
    elif isinstance(eos, IdealGasEos):
        eos.check(n, sigma)
        g = eos.gamma
        r = eos.k * math.exp(sigma / eos.c_v)
        ng1 = n ** (g - 1.0)
        e = eos.m + ng1 * r
        theta = ng1 * r / eos.c_v
        p = (g - 1.0) * n * (ng1 * r)
    else:
        raise UnsupportedError(f"thermo_props does not handle {type(eos).__name__}")
    if not theta > 0:
        raise DegenerateTemperatureError(f"theta = {theta!r} <= 0 at n={n!r}, sigma={sigma!r}")
    rho = n * e
    h = (rho + p) / n
    return ThermoState(n=n, e=e, rho=rho, p=p, h=h, sigma=sigma, theta=theta, mu=h - theta * sigma)


def reduce_to_barotropic(eos) -> GammaLawBarotrope:
    """Product-form fluids obey ``p = (gamma - 1) rho``: a gamma-law barotrope."""
    if isinstance(eos, IdealGasEos) and eos.m == 0.0:
        return GammaLawBarotrope(eos.gamma)
    if isinstance(eos, ProductFormEos) and eos.m == 0.0:
        return GammaLawBarotrope(eos.gamma)
    raise UnsupportedError(f"{getattr(eos, 'label', type(eos).__name__)} is not in product form")
