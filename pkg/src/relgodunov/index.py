"""Lichnerowicz index ``f(p)`` and the quantities derived from it.

The index solves ``f'(p) / f(p) = 1 / (rho_hat(p) + p)`` with the
normalisation ``f(p_ref) = f_ref``.  From it follow

* ``nu(p) = (rho_hat(p) + p) / f(p) = 1 / f'(p)``, the density of the extra
  conserved current of the four-field system,
* ``pi = f^{-1}`` (pressure as a function of the index),
* ``xhat(f) = int pi(g) g**-3 dg``, the scalar generating function, with
  ``xhat(f_ref) = 0``.

Gamma-law barotropes use closed forms; anything else integrates the ODE in
``log p`` with QUADPACK, panel by panel outward from ``p_ref``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

from .eos import BarotropicEos, GammaLawBarotrope, IsentropicEos, ProductFormEos, IdealGasEos
from .eos import reduce_to_barotropic, thermo_props
from .errors import DomainError, NumericError
from .numerics import central_diff, central_diff4, rel_spread

QUAD_TOL = 1e-10
_SAMPLE_HALF_WIDTH = 40.0  # cached samples cover log p_ref +- this
_SAMPLE_COUNT = 81


def _quad(fn, a, b):
    val, err = quad(fn, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)
    if err > QUAD_TOL * max(1.0, abs(val)):
        raise NumericError(f"quadrature on [{a:g}, {b:g}] reached only {err:.3g}", achieved=err)
    return val


@dataclass(frozen=True)
class IndexFunction:
    """Index of a barotrope, normalised by ``f(p_ref) = f_ref``.

    ``mode`` is ``"closed-form"`` (gamma-law only), ``"quadrature"`` or
    ``"auto"`` (closed form whenever available).
    """

    eos: BarotropicEos
    p_ref: float = 1.0
    f_ref: float = 1.0
    mode: str = "auto"
    _logp: np.ndarray = field(init=False, repr=False, compare=False)
    _logf: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.mode == "auto":
            mode = "closed-form" if isinstance(self.eos, GammaLawBarotrope) else "quadrature"
            object.__setattr__(self, "mode", mode)
        if self.mode not in ("closed-form", "quadrature"):
            raise ValueError(f"unknown index mode {self.mode!r}")
        if self.mode == "closed-form" and not isinstance(self.eos, GammaLawBarotrope):
            raise ValueError("closed-form index needs a gamma-law barotrope")
        self.eos.check_p(self.p_ref)
        if not self.f_ref > 0:
            raise DomainError("f_ref must be positive")
        self._build_samples()

    @classmethod
    def calibrated_to_enthalpy(cls, eos: IsentropicEos, n_ref=1.0, mode="auto"):
        """Index of the barotrope induced by ``eos``, scaled so that ``f = h``."""
        return cls(eos.to_barotropic(), p_ref=eos.p(n_ref), f_ref=eos.h(n_ref), mode=mode)

    # -- construction ------------------------------------------------------

    def _integrand(self, logp):
        p = math.exp(logp)
        return p / (self.eos.rho_hat(p) + p)

    def _build_samples(self):
        x0 = math.log(self.p_ref)
        lo = x0 - _SAMPLE_HALF_WIDTH
        hi = x0 + _SAMPLE_HALF_WIDTH
        if self.eos.p_min > 0:
            lo = max(lo, math.log(self.eos.p_min))
        if math.isfinite(self.eos.p_max):
            hi = min(hi, math.log(self.eos.p_max))
        below = np.linspace(lo, x0, _SAMPLE_COUNT // 2 + 1)
        above = np.linspace(x0, hi, _SAMPLE_COUNT // 2 + 1)
        logp = np.concatenate([below[:-1], above])
        logf = np.empty_like(logp)
        i0 = below.size - 1
        logf[i0] = math.log(self.f_ref)
        if self.mode == "closed-form":
            logf[:] = self._logf_closed(logp)
        else:
            # endpoints with p == p_min are excluded from the interior sums
            for i in range(i0 + 1, logp.size):
                logf[i] = logf[i - 1] + _quad(self._integrand, logp[i - 1], logp[i])
            for i in range(i0 - 1, -1, -1):
                a = logp[i]
                if self.eos.p_min > 0 and a <= math.log(self.eos.p_min):
                    a = math.log(self.eos.p_min * (1 + 1e-12))
                    logp[i] = a
                logf[i] = logf[i + 1] - _quad(self._integrand, a, logp[i + 1])
        logp.setflags(write=False)
        logf.setflags(write=False)
        object.__setattr__(self, "_logp", logp)
        object.__setattr__(self, "_logf", logf)

    @property
    def exponent(self):
        """``(gamma - 1) / gamma`` for the closed-form index."""
        g = self.eos.gamma
        return (g - 1.0) / g

    def _logf_closed(self, logp):
        return math.log(self.f_ref) + self.exponent * (np.asarray(logp) - math.log(self.p_ref))

    # -- evaluation --------------------------------------------------------

    def log_f(self, p):
        self.eos.check_p(p)
        if p == self.p_ref:
            return math.log(self.f_ref)
        x = math.log(p)
        if self.mode == "closed-form":
            return float(self._logf_closed(x))
        j = int(np.argmin(np.abs(self._logp - x)))
        return float(self._logf[j]) + _quad(self._integrand, float(self._logp[j]), x)

    def f(self, p):
        if p == self.p_ref:
            return self.f_ref
        return math.exp(self.log_f(p))

    def df(self, p):
        """``f'(p) = f(p) / (rho_hat(p) + p)``, the ODE itself."""
        return self.f(p) / (self.eos.rho_hat(p) + p)

    def nu(self, p):
        return (self.eos.rho_hat(p) + p) / self.f(p)

    def nu_array(self, p):
        p = np.asarray(p, dtype=float)
        if self.mode == "closed-form":
            f = self.f_ref * (p / self.p_ref) ** self.exponent
            return (self.eos.rho_hat_array(p) + p) / f
        return np.vectorize(self.nu, otypes=[float])(p)

    def f_range(self):
        lo = 0.0
        if self.eos.p_min > 0:
            lo = self.f(self.eos.p_min * (1 + 1e-12))
        elif self.mode == "quadrature":
            lo = self._extend_low(-math.inf)[1]
        hi = math.inf if not math.isfinite(self.eos.p_max) else self.f(self.eos.p_max)
        return lo, hi

    def _extend_low(self, target_logf):
        # walk below the cached samples until log f drops under the target
        x, lf = float(self._logp[0]), float(self._logf[0])
        step = 1.0
        while lf > target_logf:
            nx = x - step
            if nx < math.log(1e-300):
                return x, math.exp(lf)
            lf -= _quad(self._integrand, nx, x)
            x = nx
            step *= 2.0
        return x, math.exp(lf)

    def pi(self, fval):
        """Pressure with ``f(p) = fval`` (the inverse ``pi = f^{-1}``)."""
        if not fval > 0:
            raise DomainError(f"index value {fval!r} must be positive")
        if fval == self.f_ref:
            return self.p_ref
        target = math.log(fval)
        if self.mode == "closed-form":
            p = self.p_ref * math.exp((target - math.log(self.f_ref)) / self.exponent)
            self.eos.check_p(p)
            return p
        logp, logf = self._logp, self._logf
        if target < logf[0]:
            if self.eos.p_min > 0:
                raise DomainError(f"index value {fval!r} below f(p_min)")
            x_lo, f_lo = self._extend_low(target)
            if math.log(f_lo) > target:
                raise DomainError(f"index value {fval!r} below the range of f")
            lo, hi = x_lo, float(logp[0])
        elif target > logf[-1]:
            if math.isfinite(self.eos.p_max):
                raise DomainError(f"index value {fval!r} above f(p_max)")
            lo, hi = float(logp[-1]), float(logp[-1]) + 1.0
            while self.log_f(math.exp(hi)) < target:
                lo, hi = hi, hi + 2.0 * (hi - lo)
        else:
            j = int(np.searchsorted(logf, target))
            lo, hi = float(logp[max(j - 1, 0)]), float(logp[min(j, logp.size - 1)])
            if lo == hi:
                return math.exp(lo)
        return math.exp(self._solve_logp(target, lo, hi))

    def _solve_logp(self, target, lo, hi):
        # Newton in log p (slope p / (rho_hat + p) is the ODE itself), with
        # bisection-safe fallback to brentq if an iterate leaves [lo, hi]
        x = 0.5 * (lo + hi)
        for _ in range(12):
            p = math.exp(x)
            r = self.log_f(p) - target
            x_new = x - r * (self.eos.rho_hat(p) + p) / p
            if not lo <= x_new <= hi:
                break
            if abs(x_new - x) <= 2e-16 * max(1.0, abs(x_new)):
                return x_new
            x = x_new
        return brentq(lambda t: self.log_f(math.exp(t)) - target, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)

    def dpi(self, fval):
        """``pi'(f) = (rho_hat + p) / f`` at ``p = pi(f)``."""
        p = self.pi(fval)
        return (self.eos.rho_hat(p) + p) / fval

    def xhat(self, fval):
        """Generating function ``xhat(f)``, zero at ``f_ref``."""
        if fval == self.f_ref:
            return 0.0
        if self.mode == "closed-form":
            a = 1.0 / self.exponent  # pi(g) = p_ref (g / f_ref)**a
            c = self.p_ref * self.f_ref ** (-a)
            if abs(a - 2.0) < 1e-14:
                return c * math.log(fval / self.f_ref)
            return c * (fval ** (a - 2.0) - self.f_ref ** (a - 2.0)) / (a - 2.0)
        p_end = self.pi(fval)

        def integrand(logp):
            p = math.exp(logp)
            return p * p / (self.f(p) ** 2 * (self.eos.rho_hat(p) + p))

        return _quad(integrand, math.log(self.p_ref), math.log(p_end))

    def potential_scalar_derivative(self, fval):
        """``f**3 xhat'(f)``, which equals ``pi(f)``."""
        return self.pi(fval)


# module-level spellings used by the CLI and tests


def index_f(idx: IndexFunction, p):
    return idx.f(p)


def nu(idx: IndexFunction, p):
    return idx.nu(p)


def pi_of_f(idx: IndexFunction, fval):
    return idx.pi(fval)


def xhat_of_f(idx: IndexFunction, fval):
    return idx.xhat(fval)


def ode_residual(idx: IndexFunction, p):
    """``|f'(p)(rho_hat + p) - f| / f`` with ``f'`` from central differences."""
    d = central_diff(idx.f, p)
    f = idx.f(p)
    return abs(d * (idx.eos.rho_hat(p) + p) - f) / f


def nu_df_residual(idx: IndexFunction, p):
    """``|nu(p) f'(p) - 1|`` with ``f'`` from central differences."""
    return abs(idx.nu(p) * central_diff(idx.f, p) - 1.0)


# ---------------------------------------------------------------------------
# isentropic identities


def _n_ref(eos: IsentropicEos, idx: IndexFunction):
    return eos.n_of_p(idx.p_ref)


def enthalpy_index_residual(eos: IsentropicEos, idx: IndexFunction, n, n_ref=None):
    """Relative mismatch between ``h(n)`` and the index, up to a constant factor."""
    if n_ref is None:
        n_ref = _n_ref(eos, idx)
    scale = eos.h(n_ref) / idx.f(eos.p(n_ref))
    h = eos.h(n)
    return abs(idx.f(eos.p(n)) * scale - h) / h


def legendre_residual(eos: IsentropicEos, idx: IndexFunction, n):
    """Max of ``|rho + pi(h) - n h|`` and ``|pi'(h) - n|``; ``idx`` must satisfy ``f = h``."""
    h = eos.h(n)
    r1 = abs(eos.rho(n) + idx.pi(h) - n * h)
    r2 = abs(central_diff4(idx.pi, h) - n)
    return max(r1, r2)


def nu_equals_n_residual(eos: IsentropicEos, idx: IndexFunction, n):
    return abs(idx.nu(eos.p(n)) - n) / n


def legendre_transform(fn, slope, bounds):
    """Numerical convex conjugate ``sup_x (slope * x - fn(x))`` over ``bounds``."""
    res = minimize_scalar(lambda x: fn(x) - slope * x, bounds=bounds, method="bounded",
                          options={"xatol": 1e-12 * max(1.0, abs(bounds[1]))})
    return slope * res.x - fn(res.x)


# ---------------------------------------------------------------------------
# product form


@dataclass(frozen=True)
class ProductFormReport:
    flavor: str
    f_theta_spread: float
    nu_entropy_spread: float
    sigma_recovery_residual: float
    points: int


def product_form_index_checks(eos, n_grid, sigma_grid, p_ref=1.0) -> ProductFormReport:
    """Compare the index with temperature and ``nu`` with entropy density on a grid.

    For double gamma-law gases both ratios are constant; for massless ideal
    gases they are not.  The entropy is also recovered from ``(n, p)`` to
    confirm the grid points lie on distinct isentropes.
    """
    if isinstance(eos, IdealGasEos):
        if eos.m != 0.0:
            raise ValueError("product-form checks need m = 0")
        eos = ProductFormEos.massless_ideal(eos.gamma, eos.k, eos.c_v)
    idx = IndexFunction(reduce_to_barotropic(eos), p_ref=p_ref)
    f_theta, nu_ns, sig_res = [], [], 0.0
    for n in n_grid:
        for s in sigma_grid:
            st = thermo_props(eos, float(n), float(s))
            f_theta.append(idx.f(st.p) / st.theta)
            nu_ns.append(idx.nu(st.p) / (st.n * st.sigma))
            sig_res = max(sig_res, abs(eos.sigma_of(st.n, st.p) - s) / max(1.0, abs(s)))
    return ProductFormReport(eos.flavor, rel_spread(f_theta), rel_spread(nu_ns), sig_res, len(f_theta))


def index_table(idx: IndexFunction, p_values):
    """Rows ``(p, f, nu, xhat, f_ode_residual)``."""
    rows = []
    for p in p_values:
        p = float(p)
        f = idx.f(p)
        rows.append((p, f, idx.nu(p), idx.xhat(f), ode_residual(idx, p)))
    return rows
