"""Command-line interface.

Subcommands ``verify``, ``index-table``, ``shock`` and ``simulate`` all read
a flat config file (see :mod:`relgodunov.config`).  Tables are written as
CSV with 17 significant digits, to stdout or into ``--out DIR`` together
with a ``manifest.json``.

Exit codes: 0 success, 1 a check or computation failed, 2 usage error.
Errors are reported on stderr as a single line ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import Config, load, sim_config
from .eos import GammaLawBarotrope, IdealGasEos
from .errors import RelGodunovError, UsageError
from .fvsim import run
from .index import IndexFunction, index_table
from .shock import (
    SHOCK_CSV_COLUMNS,
    entropy_production,
    lax_admissible,
    rh_solve_barotropic,
    rh_solve_ideal,
    shock_row,
    weak_shock_exponent,
)
from .verify import default_index, report, run_suite

IDEAL_SHOCK_COLUMNS = (
    "gamma", "m", "n_minus", "sigma_minus", "v_minus", "n_plus", "sigma_plus", "v_plus",
    "p_minus", "p_plus", "lax", "entropy_production",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x):
    """17-significant-digit text for floats; ``true``/``false`` for booleans."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def csv_text(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        vals = [row[c] for c in columns] if isinstance(row, dict) else row
        w.writerow([fmt(v) for v in vals])
    return buf.getvalue()


def parse_sweep(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--sweep expects LO:HI:N, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--sweep expects LO:HI:N, got {text!r}") from None
    if n < 1 or not (lo > 0 and hi >= lo) or (n == 1 and hi != lo):
        raise UsageError(f"--sweep needs 0 < LO <= HI and N >= 1 (N = 1 only with LO = HI), got {text!r}")
    return lo, hi, n


class Output:
    """Collects the files of one command and writes the manifest."""

    def __init__(self, args, command):
        self.dir = Path(args.out) if args.out else None
        self.command = command
        self.args = args
        self.files = {}
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    def emit(self, name, text, to_stdout=True):
        if self.dir is None:
            if to_stdout:
                sys.stdout.write(text)
            return
        (self.dir / name).write_text(text)
        self.files[name] = hashlib.sha256(text.encode()).hexdigest()

    def close(self):
        if self.dir is None:
            return
        manifest = {
            "command": self.command,
            "config": str(self.args.config),
            "seed": self.args.seed,
            "output_dir": str(self.dir),
            "version": __version__,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "files": self.files,
        }
        (self.dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_verify(cfg: Config, args):
    results = run_suite(cfg, samples=args.points, seed=args.seed)
    rep = report(results, label=cfg.label)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:40s} {r.max_residual:.3e} (tol {r.tolerance:g}) {r.detail}")
    out = Output(args, "verify")
    out.emit("verify.json", _json(rep), to_stdout=False)
    out.close()
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"error: check-failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_index_table(cfg: Config, args):
    eos = cfg.barotrope
    if eos is None:
        raise UsageError(f"family {cfg.family} has no barotropic index")
    if args.sweep:
        lo, hi, n = parse_sweep(args.sweep)
    else:
        lo, hi, n = 1e-3, 1e3, args.points or 13
    if not lo > eos.p_min:
        raise UsageError(f"pressure range [{lo:g}, {hi:g}] reaches p_min = {eos.p_min:g} of {eos.label}")
    if hi > eos.p_max:
        raise UsageError(f"pressure range [{lo:g}, {hi:g}] exceeds p_max = {eos.p_max:g} of {eos.label}")
    idx = default_index(eos, cfg.get("p_ref"))
    rows = index_table(idx, np.geomspace(lo, hi, n))
    out = Output(args, "index-table")
    out.emit("index_table.csv", csv_text(("p", "f", "nu", "xhat", "f_ode_residual"), rows))
    out.close()
    return 0


def _shock_barotropic(cfg, args, out):
    eos = cfg.barotrope
    idx = default_index(eos, cfg.get("p_ref"))
    p_minus = args.p_minus if args.p_minus is not None else cfg.get("p_minus", 1.0)
    p_plus = args.p_plus if args.p_plus is not None else cfg.get("p_plus", 2.0)
    rows, failures, notes = [], 0, []
    if args.sweep:
        lo, hi, n = parse_sweep(args.sweep)
        targets = [p_minus + e for e in np.geomspace(lo, hi, n)]
    else:
        targets = [p_plus]
    for pp in targets:
        try:
            sol = rh_solve_barotropic(eos, idx, p_minus, float(pp))
        except RelGodunovError as exc:
            failures += 1
            print(f"error: {exc.kind}: p_plus = {fmt(pp)}: {exc}", file=sys.stderr)
            continue
        rows.append(shock_row(eos, idx, sol))
        if sol.linearly_degenerate:
            notes.append(f"p_plus = {fmt(pp)}: linearly degenerate front, production {fmt(rows[-1]['production'])}")
    out.emit("shock.csv", csv_text(SHOCK_CSV_COLUMNS, rows))
    summary = {"rows": len(rows), "failures": failures, "notes": notes}
    for note in notes:
        print(f"# {note}")
    if args.sweep:
        lo, hi, n = parse_sweep(args.sweep)
        try:
            slope = weak_shock_exponent(eos, idx, p_minus, np.geomspace(lo, hi, n))
        except (RelGodunovError, ValueError) as exc:
            summary["slope"] = None
            print(f"# weak-shock slope: undefined ({exc})")
        else:
            summary["slope"] = slope
            print(f"# weak-shock slope: {fmt(slope)}")
    out.emit("summary.json", _json(summary), to_stdout=False)
    return 1 if failures else 0


def _shock_ideal(cfg, args, out):
    eos = cfg.thermal
    n_m, s_m = cfg.get("n_minus", 1.0), cfg.get("sigma_minus", 0.0)
    if args.sweep:
        lo, hi, n = parse_sweep(args.sweep)
        vs = np.linspace(lo, hi, n)
    else:
        vs = [cfg.get("v_minus", 0.9)]
    rows, failures = [], 0
    for v in vs:
        try:
            sol = rh_solve_ideal(eos, n_m, s_m, float(v))
        except RelGodunovError as exc:
            failures += 1
            print(f"error: {exc.kind}: v_minus = {fmt(v)}: {exc}", file=sys.stderr)
            continue
        rows.append({
            "gamma": eos.gamma, "m": eos.m, "n_minus": sol.n_minus, "sigma_minus": sol.sigma_minus,
            "v_minus": sol.v_minus, "n_plus": sol.n_plus, "sigma_plus": sol.sigma_plus, "v_plus": sol.v_plus,
            "p_minus": sol.p_minus, "p_plus": sol.p_plus, "lax": lax_admissible(eos, sol),
            "entropy_production": entropy_production(sol),
        })
    out.emit("shock.csv", csv_text(IDEAL_SHOCK_COLUMNS, rows))
    return 1 if failures else 0


def cmd_shock(cfg: Config, args):
    out = Output(args, "shock")
    if isinstance(cfg.thermal, IdealGasEos) and args.p_minus is None and args.p_plus is None:
        code = _shock_ideal(cfg, args, out)
    elif cfg.barotrope is not None:
        code = _shock_barotropic(cfg, args, out)
    else:
        raise UsageError(f"family {cfg.family} supports no shock analysis")
    out.close()
    return code


def _is_stiff(eos):
    return isinstance(eos, GammaLawBarotrope) and eos.gamma == 2.0


def cmd_simulate(cfg: Config, args):
    if not args.out:
        raise UsageError("simulate needs --out DIR")
    sc = sim_config(cfg)
    idx = IndexFunction(sc.eos, p_ref=sc.p_ref)
    res = run(sc, idx)
    out = Output(args, "simulate")
    diag = zip(res.times, res.E_tot, res.S_tot, res.nu_tot, res.nu_outflow)
    out.emit("diagnostics.csv", csv_text(("t", "E_tot", "S_tot", "Nu_tot", "Nu_outflow"), diag))
    for k, (t, p, v, E, S) in enumerate(res.snapshots):
        rows = zip(res.x, p, v, E, S, idx.nu_array(p))
        out.emit(f"snapshot_{k:04d}.csv", csv_text(("x", "p", "v", "E", "S", "nu"), rows))
    verdict = res.verdict(stiff=_is_stiff(sc.eos))
    summary = {
        "verdict": verdict,
        "steps": res.steps,
        "t_end": float(res.times[-1]),
        "t_shock": res.t_shock,
        "nu_drift": res.nu_drift(),
        "monotone_after_shock": res.monotone_after_shock(),
        "snapshot_times": [float(s[0]) for s in res.snapshots],
    }
    out.emit("summary.json", _json(summary))
    out.close()
    print(f"verdict: {verdict}")
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "index-table": cmd_index_table,
    "shock": cmd_shock,
    "simulate": cmd_simulate,
}


def build_parser():
    p = _Parser(prog="relgodunov", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", required=True, type=Path)
        s.add_argument("--out", type=Path, default=None)
        s.add_argument("--seed", type=int, default=None)
        s.add_argument("--points", type=int, default=None)
        s.add_argument("--sweep", default=None)
        if name == "shock":
            s.add_argument("--p-minus", type=float, default=None)
            s.add_argument("--p-plus", type=float, default=None)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.points is not None and args.points < 1:
            raise UsageError("--points must be positive")
        cfg = load(args.config)
        if args.seed is None:
            args.seed = cfg.get("seed", 0)
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"error: usage: {_one_line(exc)}", file=sys.stderr)
        return 2
    except RelGodunovError as exc:
        print(f"error: {exc.kind}: {_one_line(exc)}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {_one_line(exc)}", file=sys.stderr)
        return 1


def _one_line(exc):
    return " ".join(str(exc).split())


if __name__ == "__main__":
    sys.exit(main())
