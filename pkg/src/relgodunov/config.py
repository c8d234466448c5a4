"""Flat ``key = value`` configuration files.

A config is a list of assignments, ``#`` or ``;`` comments allowed, no
section headers.  Keys are case-insensitive.  ``family`` selects the
equation of state; other keys are read only where they apply.  Unknown keys
raise :class:`UsageError` so that typos cannot pass silently.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .eos import (
    BarotropicEos,
    GammaLawBarotrope,
    IdealGasEos,
    IsentropicEos,
    MassivePolytrope,
    MasslessGammaLaw,
    ProductFormEos,
    TabulatedBarotrope,
    reduce_to_barotropic,
    stiff_isentropic,
)
from .errors import UsageError
from .fvsim import SimConfig

FAMILIES = (
    "gamma-law",
    "stiff",
    "tabulated",
    "massless",
    "polytrope",
    "product-exp",
    "double-gamma",
    "ideal-gas",
)

_FLOAT_KEYS = {
    # eos
    "gamma", "m", "k", "c_v", "kappa", "p_min", "p_max", "p_ref", "n_ref",
    # simulation
    "cfl", "t_end", "output_interval", "t_shock",
    "p0", "v0", "amplitude", "wavenumber", "length",
    "p_left", "p_right", "v_left", "v_right", "x0", "shock_speed",
    # shock analysis
    "p_minus", "p_plus", "n_minus", "sigma_minus", "v_minus",
}
_INT_KEYS = {"cells", "order", "samples", "seed"}
_BOOL_KEYS = {"strict", "calibrate"}
_STR_KEYS = {"family", "table", "profile", "boundary", "label"}
_PROFILE_KEYS = (
    "p0", "v0", "amplitude", "wavenumber", "length",
    "p_left", "p_right", "v_left", "v_right", "x0",
    "p_minus", "p_plus", "shock_speed",
)


@dataclass
class Config:
    """Parsed configuration plus the closures it describes."""

    values: dict
    path: Optional[Path] = None
    barotrope: Optional[BarotropicEos] = None
    isentropic: Optional[IsentropicEos] = None
    thermal: Optional[object] = None  # ProductFormEos or IdealGasEos
    extras: dict = field(default_factory=dict)

    @property
    def family(self):
        return self.values["family"]

    def get(self, key, default=None):
        return self.values.get(key, default)

    @property
    def label(self):
        for e in (self.thermal, self.isentropic, self.barotrope):
            if e is not None:
                return e.label
        return self.family


def _coerce(key, raw):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _BOOL_KEYS:
            low = raw.lower()
            if low not in ("true", "false", "yes", "no", "1", "0"):
                raise ValueError(raw)
            return low in ("true", "yes", "1")
    except ValueError:
        raise UsageError(f"bad value for {key}: {raw!r}") from None
    if key in _STR_KEYS:
        return raw
    raise UsageError(f"unknown config key {key!r}")


def parse_text(text, path=None) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string("[config]\n" + text, source=str(path or "<string>"))
    except configparser.Error as exc:
        raise UsageError(f"cannot parse config: {exc}".replace("\n", " ")) from None
    return {k.lower(): _coerce(k.lower(), v.strip()) for k, v in parser["config"].items()}


def build(values: dict, path=None) -> Config:
    """Construct the closures named by ``values['family']``."""
    fam = values.get("family")
    if fam not in FAMILIES:
        raise UsageError(f"family must be one of {', '.join(FAMILIES)} (got {fam!r})")
    cfg = Config(dict(values), Path(path) if path else None)
    g = values.get("gamma")
    k, c_v, m = values.get("k", 1.0), values.get("c_v", 1.0), values.get("m", 0.0)

    def need_gamma():
        if g is None:
            raise UsageError(f"family {fam} needs gamma")
        return g

    if fam == "gamma-law":
        strict = values.get("strict", True)
        cfg.barotrope = GammaLawBarotrope(
            need_gamma(), p_min=values.get("p_min", 0.0), p_max=values.get("p_max", math.inf), strict=strict
        )
        if strict:
            cfg.isentropic = MasslessGammaLaw(g)
    elif fam == "stiff":
        cfg.isentropic = stiff_isentropic()
        cfg.barotrope = cfg.isentropic.to_barotropic()
    elif fam == "tabulated":
        table = values.get("table")
        if table is None:
            raise UsageError("family tabulated needs table = PATH")
        tpath = Path(table)
        if not tpath.is_absolute() and path is not None:
            tpath = Path(path).parent / tpath
        if not tpath.exists():
            raise UsageError(f"table file {tpath} not found")
        cfg.barotrope = TabulatedBarotrope.from_csv(tpath)
    elif fam == "massless":
        cfg.isentropic = MasslessGammaLaw(need_gamma())
        cfg.barotrope = cfg.isentropic.to_barotropic()
    elif fam == "polytrope":
        cfg.isentropic = MassivePolytrope(m, values.get("kappa", 1.0), need_gamma())
        cfg.barotrope = cfg.isentropic.to_barotropic()
    elif fam == "product-exp":
        cfg.thermal = ProductFormEos.massless_ideal(need_gamma(), k, c_v)
        cfg.barotrope = reduce_to_barotropic(cfg.thermal)
    elif fam == "double-gamma":
        cfg.thermal = ProductFormEos.double_gamma(need_gamma(), k)
        cfg.barotrope = reduce_to_barotropic(cfg.thermal)
    elif fam == "ideal-gas":
        cfg.thermal = IdealGasEos(m, k, c_v, g if g is not None else 5.0 / 3.0)
        if m == 0.0:
            cfg.barotrope = reduce_to_barotropic(cfg.thermal)
    return cfg


def load(path) -> Config:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    return build(parse_text(text, path), path)


def sim_config(cfg: Config) -> SimConfig:
    """``SimConfig`` from the simulation keys of a parsed config."""
    if cfg.barotrope is None:
        raise UsageError(f"family {cfg.family} has no barotropic reduction to simulate")
    v = cfg.values
    params = {key: v[key] for key in _PROFILE_KEYS if key in v}
    if "wavenumber" in params:
        params["wavenumber"] = int(params["wavenumber"])
    try:
        return SimConfig(
            eos=cfg.barotrope,
            profile=v.get("profile", "sound-wave"),
            params=params,
            N=v.get("cells", 200),
            cfl=v.get("cfl", 0.5),
            t_end=v.get("t_end", 1.0),
            output_interval=v.get("output_interval"),
            boundary=v.get("boundary", "periodic"),
            order=v.get("order", 1),
            t_shock=v.get("t_shock"),
            p_ref=v.get("p_ref", 1.0),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
