"""Verification suites.

Each check returns a :class:`CheckResult`; suites are lists of them.  A
check that raises is recorded as failed with the exception text, so a
single bad closure cannot hide the remaining results.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .eos import (
    GammaLawBarotrope,
    IdealGasEos,
    ProductFormEos,
    causality_scan,
    reduce_to_barotropic,
    thermo_props,
)
from .godunov import (
    entropy_current_residual,
    extra_current4,
    flux4,
    fluxes5,
    from_godunov4,
    from_godunov5,
    potential4,
    potential5,
    stress_tensor,
    symmetrizers4,
    symmetrizers5,
    to_godunov4,
    to_godunov5,
    xhat_ideal,
    xhat_ideal_expanded,
)
from .index import (
    IndexFunction,
    enthalpy_index_residual,
    legendre_residual,
    nu_df_residual,
    nu_equals_n_residual,
    ode_residual,
    product_form_index_checks,
)
from .numerics import jacobian_fd
from .spacetime import four_velocity, sample_timelike


@dataclass
class CheckResult:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    seeds: list = field(default_factory=list)
    detail: str = ""

    def as_dict(self):
        d = asdict(self)
        r = d["max_residual"]
        d["max_residual"] = r if math.isfinite(r) else str(r)
        return d


def _run(name, tol, fn, seeds=(), compare="le"):
    try:
        res, detail = fn()
    except Exception as exc:  # recorded, not swallowed: the check fails
        return CheckResult(name, math.inf, tol, False, list(seeds), f"{type(exc).__name__}: {exc}")
    ok = res <= tol if compare == "le" else res > tol
    return CheckResult(name, float(res), tol, bool(ok), list(seeds), detail)


# ---------------------------------------------------------------------------
# random samples


def random_velocity(rng, vmax=0.95):
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    return d * rng.uniform(0.0, vmax)


def random_pressures(rng, size, lo, hi):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _p_window(eos, lo=1e-3, hi=1e3):
    a = max(lo, eos.p_min * (1 + 1e-9)) if eos.p_min > 0 else lo
    b = min(hi, eos.p_max)
    return a, b


def default_index(eos, p_ref=None):
    if p_ref is None:
        a, b = _p_window(eos)
        p_ref = 1.0 if a <= 1.0 <= b else math.sqrt(a * b)
    return IndexFunction(eos, p_ref=p_ref)


# ---------------------------------------------------------------------------
# barotropic four-field system


def index_checks(eos, idx, points=41):
    a, b = _p_window(eos)
    grid = np.geomspace(a, b, points)
    # stay off the table ends where central differences would step outside
    grid = grid[(grid > a * 1.001) & (grid < b / 1.001)] if eos.p_min > 0 or math.isfinite(eos.p_max) else grid
    out = [
        _run("index-ode", 1e-8, lambda: (max(ode_residual(idx, p) for p in grid), "")),
        _run("nu-times-df", 1e-8, lambda: (max(nu_df_residual(idx, p) for p in grid), "")),
        _run("pi-inverts-f", 1e-9, lambda: (max(abs(idx.pi(idx.f(p)) - p) / p for p in grid), "")),
    ]
    if isinstance(eos, GammaLawBarotrope):
        def closed_vs_quad():
            q = IndexFunction(eos, idx.p_ref, idx.f_ref, mode="quadrature")
            c = IndexFunction(eos, idx.p_ref, idx.f_ref, mode="closed-form")
            return max(abs(q.f(p) / c.f(p) - 1.0) for p in grid), ""
        out.append(_run("index-quadrature-vs-closed-form", 1e-8, closed_vs_quad))
    return out


def four_field_checks(eos, idx, samples=100, covectors=10, seed=0):
    rng = np.random.default_rng(seed)
    lo, hi = _p_window(eos, 1e-2, 1e2)
    states = []
    for p in random_pressures(rng, samples, lo, hi):
        U = four_velocity(random_velocity(rng))
        states.append((float(p), to_godunov4(idx, float(p), U)))
    Ts = [np.asarray(sample_timelike(seed * 100003 + j)) for j in range(covectors)]
    seeds = [seed]

    def flux_identity():
        r = 0.0
        for p, st in states:
            _, U = from_godunov4(idx, st)
            ref = stress_tensor(eos.rho_hat(p), p, U)
            r = max(r, np.max(np.abs(flux4(idx, st) - ref)) / np.max(np.abs(ref)))
        return r, ""

    def flux_potential():
        r = 0.0
        for _, st in states:
            J = jacobian_fd(lambda y: potential4(idx, y), st.upsilon)
            T = flux4(idx, st)
            r = max(r, np.max(np.abs(J - T)) / np.max(np.abs(T)))
        return r, ""

    def roundtrip():
        r = 0.0
        for p, st in states:
            q, U = from_godunov4(idx, st)
            back = to_godunov4(idx, q, U).upsilon
            r = max(r, abs(q - p) / p, np.max(np.abs(back - st.upsilon)) / np.max(np.abs(st.upsilon)))
        return r, ""

    def current_identity():
        r = 0.0
        for p, st in states:
            _, U = from_godunov4(idx, st)
            ref = idx.nu(p) * U
            r = max(r, np.max(np.abs(extra_current4(idx, st) - ref)) / np.max(np.abs(ref)))
        return r, ""

    def isotropy():
        r = 0.0
        for _, st in states:
            x = potential4(idx, st)
            up = st.upsilon * np.array([-1.0, 1.0, 1.0, 1.0])
            r = max(r, np.max(np.abs(x - (x @ up) / (up @ up) * up)) / np.max(np.abs(x)))
        return r, ""

    syms = _symmetrizer_sweep(lambda st, ts: symmetrizers4(idx, st, ts), [s for _, s in states], Ts)
    return [
        _run("flux4-stress-tensor", 1e-10, flux_identity, seeds),
        _run("flux4-potential-gradient", 1e-6, flux_potential, seeds),
        _run("godunov4-roundtrip", 1e-11, roundtrip, seeds),
        _run("extra-current4-nu-U", 1e-9, current_identity, seeds),
        _run("potential4-isotropy", 1e-12, isotropy, seeds),
        *_symmetrizer_results("4", syms, seeds),
    ]


def _symmetrizer_sweep(fn, states, Ts):
    """``{orientation: [(asymmetry, sign), ...]}`` over all ``(state, T)`` pairs."""
    out = {+1: [], -1: []}
    for st in states:
        for T, s in zip(Ts, fn(st, Ts)):
            out[1 if T[0] > 0 else -1].append((s.asymmetry, s.sign))
    return out


def _symmetrizer_results(tag, sweep, seeds):
    asym = max(a for rows in sweep.values() for a, _ in rows)
    bad = sum(1 for rows in sweep.values() for _, s in rows if s == 0)
    signs = {o: sorted({s for _, s in rows if s != 0}) for o, rows in sweep.items() if rows}
    mixed = sum(1 for v in signs.values() if len(v) > 1)
    detail = "; ".join(f"T_0 {'>' if o > 0 else '<'} 0: sign {v}" for o, v in signs.items())
    return [
        CheckResult(f"symmetrizer{tag}-symmetry", asym, 1e-5, asym < 1e-5, list(seeds)),
        CheckResult(f"symmetrizer{tag}-definiteness", float(bad + mixed), 0.0, bad == 0 and mixed == 0,
                    list(seeds), detail),
    ]


def causality_check(eos):
    a, b = _p_window(eos, 1e-2, 1e2)
    rep = causality_scan(eos, np.geomspace(a, b, 101))
    worst = max((1.0 - eos.drho_hat(float(p)) for p in rep.violations), default=0.0)
    detail = f"{len(rep.violations)} violations, {len(rep.marginal)} marginal of {rep.checked}"
    return CheckResult("causality", worst, 0.0, rep.ok, [], detail)


# ---------------------------------------------------------------------------
# isentropic and product-form identities


def isentropic_checks(eos, n_grid=None):
    if n_grid is None:
        n_grid = np.geomspace(0.1, 10.0, 21)
    idx = IndexFunction.calibrated_to_enthalpy(eos)
    return [
        _run("enthalpy-index", 1e-9, lambda: (max(enthalpy_index_residual(eos, idx, n) for n in n_grid), "")),
        _run("legendre-duality", 1e-9, lambda: (max(legendre_residual(eos, idx, n) for n in n_grid), "")),
        _run("nu-equals-n", 1e-9, lambda: (max(nu_equals_n_residual(eos, idx, n) for n in n_grid), "")),
    ]


def product_form_checks(eos, size=10):
    n_grid = np.geomspace(0.2, 5.0, size)
    s_grid = np.linspace(0.5, 3.0, size)
    out = []

    def consistency():
        baro = reduce_to_barotropic(eos)
        r = 0.0
        for n in np.geomspace(0.2, 5.0, 20):
            for s in np.linspace(0.5, 3.0, 20):
                st = thermo_props(eos, float(n), float(s))
                r = max(r, abs(baro.rho_hat(st.p) - st.rho) / st.rho)
        return r, ""

    out.append(_run("product-form-barotropic", 1e-12, consistency))
    rep = product_form_index_checks(eos, n_grid, s_grid)
    spread = max(rep.f_theta_spread, rep.nu_entropy_spread)
    detail = f"f/theta spread {rep.f_theta_spread:.3e}, nu/(n sigma) spread {rep.nu_entropy_spread:.3e}"
    if rep.flavor == "power":
        out.append(CheckResult("index-temperature-proportional", spread, 1e-10, spread < 1e-10, [], detail))
    elif rep.flavor == "exp":
        low = min(rep.f_theta_spread, rep.nu_entropy_spread)
        out.append(CheckResult("index-temperature-not-proportional", low, 0.1, low > 0.1, [], detail))
    return out


# ---------------------------------------------------------------------------
# ideal gas five-field system


def _ideal_grid(size):
    return np.geomspace(0.2, 5.0, size), np.linspace(-1.0, 2.0, size)


def five_field_checks(eos: IdealGasEos, samples=50, covectors=10, seed=0):
    rng = np.random.default_rng(seed)
    seeds = [seed]
    n_grid, s_grid = _ideal_grid(20)

    def pressure_identity():
        r = 0.0
        for n in n_grid:
            for s in s_grid:
                st = thermo_props(eos, float(n), float(s))
                r = max(r, abs(xhat_ideal(eos, st.theta, st.mu / st.theta) - st.p) / st.p)
        return r, ""

    def two_forms():
        r = 0.0
        for th in np.geomspace(0.1, 10.0, 20):
            for ps in np.linspace(-2.0, 4.0, 20):
                a, b = xhat_ideal(eos, th, ps), xhat_ideal_expanded(eos, th, ps)
                r = max(r, abs(a - b) / abs(a))
        return r, ""

    states = []
    for _ in range(samples):
        n = float(math.exp(rng.uniform(math.log(0.2), math.log(5.0))))
        s = float(rng.uniform(-1.0, 2.0))
        U = four_velocity(random_velocity(rng))
        states.append((n, s, np.asarray(U), to_godunov5(eos, n, s, U)))

    def flux_identity():
        r = 0.0
        for n, s, U, st in states:
            th = thermo_props(eos, n, s)
            T, N = fluxes5(eos, st)
            ref = stress_tensor(th.rho, th.p, U)
            r = max(r, np.max(np.abs(T - ref)) / np.max(np.abs(ref)),
                    np.max(np.abs(N - n * U)) / np.max(np.abs(n * U)))
        return r, ""

    def flux_potential():
        r = 0.0
        for *_, st in states:
            z = st.vector
            J = jacobian_fd(lambda w: potential5(eos, w), z)
            T, N = fluxes5(eos, st)
            ref = np.vstack([T, N])
            r = max(r, np.max(np.abs(J.T - ref)) / np.max(np.abs(ref)))
        return r, ""

    def roundtrip():
        r = 0.0
        for n, s, U, st in states:
            n2, s2, U2 = from_godunov5(eos, st)
            r = max(r, abs(n2 - n) / n, abs(s2 - s) / max(1.0, abs(s)), np.max(np.abs(U2 - U)) / np.max(np.abs(U)))
        return r, ""

    def entropy_identity():
        return max(entropy_current_residual(eos, st) for *_, st in states), ""

    Ts = [np.asarray(sample_timelike(seed * 100003 + 7919 + j)) for j in range(covectors)]
    syms = _symmetrizer_sweep(lambda st, ts: symmetrizers5(eos, st, ts), [st for *_, st in states], Ts)
    return [
        _run("xhat-ideal-equals-pressure", 1e-10, pressure_identity),
        _run("xhat-ideal-two-forms", 1e-12, two_forms),
        _run("fluxes5-stress-tensor-and-matter", 1e-10, flux_identity, seeds),
        _run("fluxes5-potential-gradient", 1e-6, flux_potential, seeds),
        _run("godunov5-roundtrip", 1e-11, roundtrip, seeds),
        _run("entropy-current", 1e-9, entropy_identity, seeds),
        *_symmetrizer_results("5", syms, seeds),
    ]


# ---------------------------------------------------------------------------
# dispatch


def run_suite(cfg, samples=None, seed=None):
    """All checks applicable to a parsed :class:`~relgodunov.config.Config`."""
    samples = samples if samples is not None else cfg.get("samples", 50)
    seed = seed if seed is not None else cfg.get("seed", 0)
    results = []
    if cfg.barotrope is not None:
        eos = cfg.barotrope
        results.append(causality_check(eos))
        try:
            idx = default_index(eos, cfg.get("p_ref"))
        except Exception as exc:
            results.append(CheckResult("index-construction", math.inf, 0.0, False, [], str(exc)))
        else:
            results += index_checks(eos, idx)
            results += four_field_checks(eos, idx, samples=samples, seed=seed)
    if cfg.isentropic is not None:
        results += isentropic_checks(cfg.isentropic)
    thermal = cfg.thermal
    if isinstance(thermal, ProductFormEos) or (isinstance(thermal, IdealGasEos) and thermal.m == 0.0):
        results += product_form_checks(thermal)
    if isinstance(thermal, IdealGasEos):
        results += five_field_checks(thermal, samples=samples, seed=seed)
    return results


def report(results, command="verify", label: Optional[str] = None):
    return {
        "command": command,
        "eos": label,
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
