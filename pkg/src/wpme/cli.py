"""Command-line front end.

Subcommands: audit, solve, scenario, sweep, fit.  Exit codes: 0 when every
verdict was computed (holds or fails), 1 on error, 2 when some verdict is
inconclusive.  Every output directory ends with a MANIFEST listing the files
written, their byte counts and SHA-256 digests.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import jsonschema
import numpy as np
from referencing import Registry, Resource

from . import catalog
from .diagnostics import FitError, check_bound, fit_exponential_decay, fit_power_decay
from .domain import Domain1D, DomainError
from .poincare import INCONCLUSIVE, EigenConvergenceError, PreconditionError, audit
from .scenarios import SCENARIOS, ScenarioError, _jsonable
from .solver import Datum, PMEProblem, StepError, TimeControls, solve, summary_rows, write_summary_csv, write_trajectory_csv
from .weights import WeightSpec

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configs
# ---------------------------------------------------------------------------
def _schema_text(name: str) -> str:
    return resources.files("wpme").joinpath("schemas", f"{name}.schema.json").read_text()


def _registry() -> Registry:
    reg = Registry()
    for name in ("defs", "audit", "solve", "sweep"):
        res = Resource.from_contents(json.loads(_schema_text(name)))
        reg = reg.with_resource(f"wpme/{name}.schema.json", res)
    return reg


def validate_config(cfg: dict, command: str) -> dict:
    """Validate against the command's schema; unknown keys are rejected."""
    schema = json.loads(_schema_text(command))
    validator = jsonschema.Draft202012Validator(schema, registry=_registry())
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"invalid {command} config at {where}: {e.message}")
    return cfg


def load_config(path: str, command: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: malformed JSON ({err})") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")
    cfg.setdefault("command", command)
    return validate_config(cfg, command)


def problem_from_config(p: dict) -> PMEProblem:
    domain = Domain1D.from_dict(p["domain"])
    controls = dict(p.get("controls", {}))
    if "target_iters" in controls:
        controls["target_iters"] = tuple(controls["target_iters"])
    return PMEProblem(
        m=float(p["m"]),
        bc=p["bc"],
        nu=WeightSpec.from_dict(p["nu"], domain),
        mu=WeightSpec.from_dict(p["mu"], domain),
        domain=domain,
        datum=Datum.from_dict(p["datum"]),
        truncation=p.get("truncation"),
        far_policy=p.get("far_policy", "neumann"),
        eps=p.get("eps"),
        eps_schedule=tuple(p.get("eps_schedule", ())),
        controls=TimeControls(**controls),
        grading=p.get("grading"),
    )


def times_from_config(t) -> list:
    if isinstance(t, list):
        return [float(v) for v in t]
    if t["spacing"] == "linear":
        return list(np.linspace(t["start"], t["stop"], t["count"]))
    return list(np.geomspace(t["start"], t["stop"], t["count"]))


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------
def write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(outdir: str, files, complete: bool = True) -> str:
    """One line per file: name, byte count, sha256.  Written last."""
    lines = [f"complete\t{str(complete).lower()}"]
    for name in sorted(set(files)):
        path = os.path.join(outdir, name)
        if not os.path.exists(path):
            continue
        data = open(path, "rb").read()
        lines.append(f"{name}\t{len(data)}\t{hashlib.sha256(data).hexdigest()}")
    path = os.path.join(outdir, "MANIFEST")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _verdict_code(verdicts) -> int:
    return EXIT_INCONCLUSIVE if any(v == INCONCLUSIVE for v in verdicts) else EXIT_OK


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------
def cmd_audit(cfg: dict, outdir: str) -> int:
    if "catalog" in cfg:
        entry = catalog.get(cfg["catalog"])
        nu, mu, domain = entry.nu, entry.mu, entry.domain
        kinds = tuple(cfg.get("kinds", [entry.kind]))
    else:
        domain = Domain1D.from_dict(cfg["domain"])
        nu = WeightSpec.from_dict(cfg["nu"], domain)
        mu = WeightSpec.from_dict(cfg["mu"], domain)
        kinds = tuple(cfg.get("kinds", ["dirichlet", "zero_mean"]))
    kw = {"kinds": kinds, "discrete": cfg.get("discrete", True), "budget": cfg.get("budget", 256)}
    if "grid_sizes" in cfg:
        kw["grid_sizes"] = tuple(cfg["grid_sizes"])
    if "truncations" in cfg:
        kw["truncations"] = tuple(float(v) for v in cfg["truncations"])
    rep = audit(nu, mu, domain, **kw)
    out = rep.to_dict()
    out["config"] = cfg
    write_json(os.path.join(outdir, "report.json"), out)
    write_manifest(outdir, ["report.json"])
    return _verdict_code(rep.verdicts.values())


def _solve_outputs(cfg: dict, outdir: str) -> dict:
    """Run one solve config into ``outdir``; returns a summary row."""
    os.makedirs(outdir, exist_ok=True)
    problem = problem_from_config(cfg["problem"])
    traj = solve(problem, int(cfg["cells"]), times_from_config(cfg["times"]))
    q = cfg.get("summary_q")
    files = ["trajectory.csv", "summary.csv", "result.json"]
    write_trajectory_csv(traj, os.path.join(outdir, "trajectory.csv"))
    write_summary_csv(traj, os.path.join(outdir, "summary.csv"), q)
    bounds = []
    for req in cfg.get("bounds", []):
        params = {k: req[k] for k in ("q0", "rho", "epsilon") if k in req}
        if params.get("rho") == "inf":
            params["rho"] = math.inf
        try:
            bounds.append(check_bound(traj, req["bound"], params, t_min=req.get("t_min", 0.0)).to_dict())
        except (FitError, PreconditionError, DomainError) as err:
            bounds.append({"bound": req["bound"], "verdict": INCONCLUSIVE, "error": str(err)})
    keys = ("t", "norm1", "norm2", "normq", "normInf", "mean", "energy")
    last = {k: float(v) for k, v in zip(keys, summary_rows(traj, q)[-1])}
    result = {
        "config": cfg,
        "m": traj.m,
        "eps": traj.eps,
        "cells": int(traj.grid.centers.size),
        "final": last,
        "bounds": bounds,
        "diagnostics": traj.diagnostics,
    }
    write_json(os.path.join(outdir, "result.json"), result)
    write_manifest(outdir, files)
    return {"final": last, "bounds": bounds}


def cmd_solve(cfg: dict, outdir: str) -> int:
    res = _solve_outputs(cfg, outdir)
    return _verdict_code(b.get("verdict") for b in res["bounds"])


def _apply_override(base: dict, key: str, value) -> dict:
    cfg = json.loads(json.dumps(base))
    p = cfg["problem"]
    if key == "cells":
        cfg["cells"] = value
    elif key in ("m", "truncation", "eps"):
        p[key] = value
    elif key in ("amplitude", "offset"):
        p["datum"][key] = value
    return cfg


def sweep_points(cfg: dict) -> list:
    """Cartesian product of the swept values, in sorted key order."""
    keys = sorted(cfg["sweep"])
    return [dict(zip(keys, vals)) for vals in itertools.product(*(cfg["sweep"][k] for k in keys))]


def _sweep_one(args):
    index, point, base, outdir = args
    cfg = base
    for k, v in point.items():
        cfg = _apply_override(cfg, k, v)
    cfg = dict(cfg, command="solve")
    run_dir = os.path.join(outdir, f"run_{index:03d}")
    try:
        validate_config(cfg, "solve")
        res = _solve_outputs(cfg, run_dir)
        return index, point, "ok", res["final"], ""
    except (DomainError, StepError, ConfigError, PreconditionError, FloatingPointError) as err:
        os.makedirs(run_dir, exist_ok=True)
        write_json(os.path.join(run_dir, "error.json"), {"config": cfg, "error": str(err)})
        write_manifest(run_dir, ["error.json"], complete=False)
        return index, point, "error", {}, str(err)


def cmd_sweep(cfg: dict, outdir: str, jobs: int = 1) -> int:
    points = sweep_points(cfg)
    base = dict(cfg["base"])
    tasks = [(i, pt, base, outdir) for i, pt in enumerate(points)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_sweep_one, tasks))
    else:
        results = [_sweep_one(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    keys = sorted(cfg["sweep"])
    stat_keys = ["norm1", "norm2", "normq", "normInf", "mean", "energy"]
    with open(os.path.join(outdir, "index.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["run"] + keys + ["status"] + [f"final_{k}" for k in stat_keys] + ["error"])
        for index, point, status, final, err in results:
            w.writerow([f"run_{index:03d}"] + [repr(point[k]) for k in keys] + [status] + [repr(float(final[k])) if k in final else "" for k in stat_keys] + [err])
    files = ["index.csv"]
    for index, *_ in results:
        sub = f"run_{index:03d}"
        files += [os.path.join(sub, f) for f in sorted(os.listdir(os.path.join(outdir, sub)))]
    write_manifest(outdir, files, complete=all(r[2] == "ok" for r in results))
    return EXIT_OK if all(r[2] == "ok" for r in results) else EXIT_ERROR


_SCENARIO_FLAGS = {"m": "m", "beta": "beta", "L": "L", "cells": "M"}


def cmd_scenario(name: str, overrides: dict, outdir: str) -> int:
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    sc = SCENARIOS[name]
    kw = {}
    for flag, value in overrides.items():
        key = _SCENARIO_FLAGS[flag]
        if key not in sc.sweep:
            raise ConfigError(f"scenario {name!r} does not take --{flag}")
        kw[key] = value
    try:
        result = sc.runner(**kw)
    except ScenarioError as err:
        write_json(os.path.join(outdir, "verdict.json"), {"name": name, "params": kw, "verdict": INCONCLUSIVE, "reason": str(err)})
        write_manifest(outdir, ["verdict.json"], complete=False)
        return EXIT_INCONCLUSIVE
    files = result.write(outdir)
    write_manifest(outdir, files)
    return EXIT_OK


def read_series(path: str, column: str | None = None):
    """(t, y) from a CSV with a header; ``column`` defaults to the second one."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ConfigError(f"{path}: no data rows")
    header = rows[0]
    if "t" not in header:
        raise ConfigError(f"{path}: needs a 't' column")
    col = column if column is not None else next(h for h in header if h != "t")
    if col not in header:
        raise ConfigError(f"{path}: no column {col!r}")
    it, iy = header.index("t"), header.index(col)
    try:
        t = np.array([float(r[it]) for r in rows[1:]])
        y = np.array([float(r[iy]) for r in rows[1:]])
    except (ValueError, IndexError) as err:
        raise ConfigError(f"{path}: unreadable row ({err})") from None
    return t, y, col


def cmd_fit(path: str, form: str, outdir: str, column: str | None = None, window=None) -> int:
    t, y, col = read_series(path, column)
    fitter = fit_power_decay if form == "power" else fit_exponential_decay
    try:
        fit = fitter(t, y, window=tuple(window) if window else None)
        out = {"form": form, "column": col, "source": os.path.basename(path), "verdict": "computed", **fit.to_dict()}
        code = EXIT_OK
    except FitError as err:
        out = {"form": form, "column": col, "source": os.path.basename(path), "verdict": INCONCLUSIVE, "reason": str(err)}
        code = EXIT_INCONCLUSIVE
    write_json(os.path.join(outdir, "fit.json"), out)
    write_manifest(outdir, ["fit.json"])
    return code


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wpme", description="Weighted porous medium equation toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, help="recorded in the outputs; the commands are deterministic")

    common(sub.add_parser("audit", help="Poincare-type audit of a weight pair"))
    common(sub.add_parser("solve", help="solve one problem and write trajectories"))
    p = sub.add_parser("sweep", help="parameter sweep over solve configs")
    common(p)
    p.add_argument("--jobs", type=int, default=1)
    p = sub.add_parser("scenario", help="run a named scenario")
    p.add_argument("name", choices=sorted(SCENARIOS))
    common(p, config=False)
    p.add_argument("--m", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--cells", type=int)
    p = sub.add_parser("fit", help="fit a decay law to a series CSV")
    p.add_argument("series")
    common(p, config=False)
    p.add_argument("--form", choices=("power", "exponential"), default="power")
    p.add_argument("--column")
    p.add_argument("--window", type=float, nargs=2, metavar=("T_LO", "T_HI"))
    return ap


def _seeded(cfg: dict, seed: int | None) -> dict:
    # a seed in the config file wins over the flag; either way it is echoed in the outputs
    if seed is not None and seed < 0:
        raise ConfigError("--seed must be >= 0")
    if seed is not None and "seed" not in cfg:
        cfg = dict(cfg, seed=seed)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        os.makedirs(args.out, exist_ok=True)
        if args.command == "audit":
            return cmd_audit(_seeded(load_config(args.config, "audit"), args.seed), args.out)
        if args.command == "solve":
            return cmd_solve(_seeded(load_config(args.config, "solve"), args.seed), args.out)
        if args.command == "sweep":
            if args.jobs < 1:
                raise ConfigError("--jobs must be >= 1")
            return cmd_sweep(_seeded(load_config(args.config, "sweep"), args.seed), args.out, args.jobs)
        if args.command == "scenario":
            overrides = {k: getattr(args, k) for k in _SCENARIO_FLAGS if getattr(args, k) is not None}
            return cmd_scenario(args.name, overrides, args.out)
        return cmd_fit(args.series, args.form, args.out, args.column, args.window)
    except (ConfigError, DomainError, PreconditionError, EigenConvergenceError, StepError, OSError) as err:
        print(f"wpme: error: {err}", file=sys.stderr)
        _flush_partial(args.out, err)
        return EXIT_ERROR


def _flush_partial(outdir: str, err: Exception) -> None:
    """Record the error and mark whatever was written as incomplete."""
    if not os.path.isdir(outdir):
        return
    try:
        write_json(os.path.join(outdir, "error.json"), {"error": str(err), "type": type(err).__name__})
        files = [f for f in os.listdir(outdir) if f != "MANIFEST" and os.path.isfile(os.path.join(outdir, f))]
        write_manifest(outdir, files, complete=False)
    except OSError:
        pass


if __name__ == "__main__":
    sys.exit(main())
