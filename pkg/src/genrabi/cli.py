"""Command-line scenario runner and data exporter.

Subcommands:

- run: evaluate a built-in scenario (closed form, numerical oracle, or both)
  and write a plot-ready CSV or JSON series.
- list-scenarios: show the family catalog with parameter defaults.
- verify: report how well a generating ansatz solves a scenario profile
  (detuning residual and deviation from the oracle).
- modes: the coupled-waveguide front end; writes mode amplitudes and powers
  along z.

Times on the command line (t-max, step) are on the scenario's dimensionless
axis (see list-scenarios); the CSV t column uses the same axis. Exit codes:
0 success, 2 usage or config error, 3 numeric failure (including a verify
that misses its thresholds).
"""

from __future__ import annotations

import argparse
import difflib
import json
import math
import os
import sys

import numpy as np

from .errors import ConfigError, GenrabiError, NumericError
from .modes import (ModeTrajectory, coupling_from_config, propagate_modes,
                    to_su2_profile)
from .propagator import (SCHEMES, PropagatorConfig, Trajectory, propagate,
                         suggested_step)
from .scenarios import (DEFAULT_SAMPLES, FAMILIES, ScenarioParams,
                        closed_form_series, default_window, family_summary,
                        make_scenario, resolved_params, scenario_time_scale)
from .theta import beta0_ansatz, load_ansatz_table, named_ansatz, verify_ansatz

ENGINE_CHOICES = ("closed_form", "oracle", "both")

_SCHEME_ENV = "GRS_DEFAULT_SCHEME"

_RUN_COLUMNS = ("t", "omega_z", "omega_mag", "phi_omega", "detuning",
                "re_a", "im_a", "re_b", "im_b", "p_flip",
                "sigma_x", "sigma_y", "sigma_z")

_MODE_COLUMNS = ("z", "re_A", "im_A", "re_B", "im_B",
                 "powerA", "powerB", "total")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _default_scheme() -> str:
    scheme = os.environ.get(_SCHEME_ENV, "").strip()
    if not scheme:
        return "midpoint_exponential"
    if scheme not in SCHEMES:
        raise ConfigError(
            f"{_SCHEME_ENV}={scheme!r} is not a scheme; choose from "
            f"{', '.join(SCHEMES)}")
    return scheme


def _parse_params(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, sep, value = chunk.partition("=")
        name = name.strip()
        if not sep or not name:
            raise ConfigError(
                f"--params entry {chunk!r} must have the form name=number")
        try:
            out[name] = float(value)
        except ValueError:
            raise ConfigError(
                f"--params value for {name!r} must be a number, "
                f"got {value.strip()!r}")
    return out


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return doc


def _number_field(doc: dict, path: str, default=None):
    cur = doc
    parts = path.split(".")
    for p in parts[:-1]:
        cur = cur.get(p, {})
        if not isinstance(cur, dict):
            raise ConfigError(f"field {path} must live in an object")
    if parts[-1] not in cur:
        return default
    val = cur[parts[-1]]
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(f"field {path} must be a number")
    return val


def _scenario_from_args(args) -> tuple[ScenarioParams, float, int]:
    """Returns (params, axis t_max, samples) honoring config and overrides."""
    if bool(args.scenario) == bool(args.config):
        raise ConfigError("give exactly one of --scenario or --config")
    cli_params = _parse_params(args.params)
    split = cli_params.pop("split_fraction", None)

    if args.scenario:
        family = args.scenario
        file_params: dict = {}
        t_max = None
        samples = None
    else:
        doc = _load_json(args.config)
        if "family" not in doc:
            raise ConfigError("missing field: family")
        family = doc["family"]
        file_params = doc.get("params", {})
        if not isinstance(file_params, dict):
            raise ConfigError("field params must be an object")
        t_max = _number_field(doc, "window.t_max")
        samples = _number_field(doc, "window.samples")
        if samples is not None:
            if samples != int(samples) or int(samples) < 2:
                raise ConfigError("field window.samples must be an integer >= 2")
            samples = int(samples)
        cfg_split = _number_field(doc, "split_fraction")
        if split is None:
            split = cfg_split
        known = {"family", "params", "window", "split_fraction"}
        extra = set(doc) - known
        if extra:
            raise ConfigError(
                f"unknown config field: {sorted(extra)[0]}")

    if not isinstance(family, str) or family not in FAMILIES:
        near = difflib.get_close_matches(str(family), FAMILIES, n=3,
                                         cutoff=0.4)
        if not near:
            near = [n for n in FAMILIES if n.startswith(str(family))]
        hint = f"; did you mean: {', '.join(near)}" if near else ""
        raise ConfigError(
            f"unknown scenario {family!r}{hint}; available: "
            f"{', '.join(n for n in FAMILIES if n != 'custom')}")

    merged = dict(file_params)
    merged.update(cli_params)
    params = ScenarioParams(family=family, params=merged,
                            split_fraction=0.0 if split is None else split)

    if args.t_max is not None:
        t_max = args.t_max
    if getattr(args, "samples", None) is not None:
        samples = args.samples
    d_t_max, d_samples = default_window(family)
    if t_max is None:
        t_max = d_t_max
    if samples is None:
        samples = d_samples
    if not t_max > 0:
        raise ConfigError("t-max must be > 0")
    if samples < 2:
        raise ConfigError("samples must be >= 2")
    return params, float(t_max), int(samples)


def _oracle_config(args, profile, t_max_phys: float, samples: int,
                   scale: float) -> PropagatorConfig:
    scheme = args.scheme if args.scheme else _default_scheme()
    if args.step is not None:
        if not args.step > 0:
            raise ConfigError("step must be > 0")
        step = args.step / scale  # axis units to physical time
    else:
        step = suggested_step(profile, t_max_phys)
    return PropagatorConfig(scheme=scheme, step=step, samples=samples)


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _trajectory_rows(traj: Trajectory, axis_t: np.ndarray):
    for i in range(axis_t.size):
        yield (axis_t[i], traj.omega_z[i], traj.omega_mag[i],
               traj.phi_omega[i], traj.detuning[i],
               traj.a[i].real, traj.a[i].imag, traj.b[i].real,
               traj.b[i].imag, traj.p_flip[i],
               traj.sigma_x[i], traj.sigma_y[i], traj.sigma_z[i])


def _serialize(columns, rows, fmt: str, out: str | None) -> None:
    if fmt == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        _write_text(out, "\n".join(lines) + "\n")
    else:
        records = [dict(zip(columns, (float(v) for v in row)))
                   for row in rows]
        _write_text(out, json.dumps(records, indent=1) + "\n")


# ---------------------------------------------------------------------------
# run

def _cmd_run(args) -> int:
    params, t_max_axis, samples = _scenario_from_args(args)
    profile = make_scenario(params)
    scale = scenario_time_scale(params)
    t_max_phys = t_max_axis / scale
    ts = np.linspace(0.0, t_max_phys, samples)
    axis_t = scale * ts

    closed = oracle = None
    if args.engine in ("closed_form", "both"):
        a, b = closed_form_series(params, profile, ts)
        closed = Trajectory.from_entries(profile, ts, a, b)
    if args.engine in ("oracle", "both"):
        config = _oracle_config(args, profile, t_max_phys, samples, scale)
        oracle = propagate(profile, config, t_max_phys)

    primary = closed if closed is not None else oracle
    _serialize(_RUN_COLUMNS, _trajectory_rows(primary, axis_t),
               args.format, args.out)

    if args.engine == "both":
        dev = {
            "max_abs_dP": float(np.max(np.abs(closed.p_flip - oracle.p_flip))),
            "max_abs_da": float(np.max(np.abs(closed.a - oracle.a))),
            "max_abs_db": float(np.max(np.abs(closed.b - oracle.b))),
        }
        summary = ("deviation closed_form vs oracle: "
                   f"max|dP|={dev['max_abs_dP']:.3e} "
                   f"max|da|={dev['max_abs_da']:.3e} "
                   f"max|db|={dev['max_abs_db']:.3e}")
        print(summary if args.out else f"# {summary}",
              file=sys.stdout if args.out else sys.stderr)
        if args.out:
            with open(args.out + ".deviation.json", "w", newline="") as fh:
                json.dump(dev, fh, indent=1)
                fh.write("\n")
    return 0


# ---------------------------------------------------------------------------
# list-scenarios

def _cmd_list(args) -> int:
    rows = family_summary()
    for row in rows:
        print(f"{row['family']}")
        print(f"  {row['description']}")
        if row["default_t_max"] is not None:
            defaults = ", ".join(f"{k}={v:g}" for k, v in row["defaults"].items())
            print(f"  axis: {row['axis']}; default window: "
                  f"{row['default_t_max']:g} ({DEFAULT_SAMPLES} samples)")
            print(f"  defaults: {defaults}")
    return 0


# ---------------------------------------------------------------------------
# verify

def _default_ansatz(params: ScenarioParams):
    fam = params.family
    r = resolved_params(params)
    if fam in ("sech_resonant", "exp_resonant", "modulated_resonant"):
        return named_ansatz("zero")
    if fam == "rabi":
        beta = (r["omega_z0"] + 0.5 * r["phi_dot0"]) / r["omega_mag0"]
        return beta0_ansatz(beta)
    if fam == "constant_beta0":
        return beta0_ansatz(r["beta0"])
    if fam in ("case1", "case2"):
        return named_ansatz(fam)
    raise ConfigError(f"no default ansatz for family {fam!r}; use --ansatz")


def _cmd_verify(args) -> int:
    params, t_max_axis, samples = _scenario_from_args(args)
    profile = make_scenario(params)
    scale = scenario_time_scale(params)
    t_max_phys = t_max_axis / scale

    if args.ansatz:
        if args.ansatz in ("zero", "case1", "case2"):
            ansatz = named_ansatz(args.ansatz)
        elif os.path.exists(args.ansatz):
            ansatz = load_ansatz_table(args.ansatz)
        else:
            raise ConfigError(
                f"--ansatz {args.ansatz!r} is neither a catalog name "
                "(zero, case1, case2) nor a readable table path")
    else:
        ansatz = _default_ansatz(params)

    config = _oracle_config(args, profile, t_max_phys, samples, scale)
    # inner quadrature only needs two decades beyond the strictest check;
    # loose tolerances admit kinky table ansatz interpolants
    quad_tol = max(1e-12, 1e-2 * min(args.residual_tol, args.entries_tol))
    report = verify_ansatz(ansatz, profile, t_max_phys,
                           tol=args.residual_tol,
                           entries_tol=args.entries_tol,
                           samples=samples, config=config,
                           quad_tol=quad_tol)

    def flag(ok: bool) -> str:
        return "PASS" if ok else "FAIL"

    print(f"ansatz={report.ansatz_label} profile={report.profile_label} "
          f"window={t_max_axis:g} samples={report.samples}")
    print(f"  residual_max={report.residual_max:.3e} "
          f"(tol {report.residual_tol:.1e}) {flag(report.residual_ok)}")
    print(f"  entries_deviation_max={report.entries_deviation_max:.3e} "
          f"(tol {report.entries_tol:.1e}) {flag(report.entries_ok)}")
    if report.note:
        print(f"  note: {report.note}")
    return 0 if report.passed else 3


# ---------------------------------------------------------------------------
# modes

def _parse_initial(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ConfigError(
            "--initial must be four numbers: re_A,im_A,re_B,im_B")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ConfigError("--initial components must be numbers")
    return complex(vals[0], vals[1]), complex(vals[2], vals[3])


def _cmd_modes(args) -> int:
    if bool(args.config) == bool(args.coupling):
        raise ConfigError("give exactly one of --config or --coupling")
    if args.config:
        doc = _load_json(args.config)
        spec = coupling_from_config(doc)
    else:
        if args.delta is None:
            raise ConfigError("--delta is required with --coupling")
        spec = coupling_from_config({
            "delta": args.delta,
            "coupling": {"family": args.coupling,
                         "params": _parse_params(args.params)},
        })
    if args.z_max is None or not args.z_max > 0:
        raise ConfigError("--z-max must be given and > 0")

    a0, b0 = _parse_initial(args.initial)
    scheme = args.scheme if args.scheme else _default_scheme()
    profile_step = args.step if args.step is not None else None
    if profile_step is not None and not profile_step > 0:
        raise ConfigError("step must be > 0")

    profile = to_su2_profile(spec, window=args.z_max)
    step = profile_step if profile_step is not None \
        else suggested_step(profile, args.z_max)
    config = PropagatorConfig(scheme=scheme, step=step, samples=args.samples)
    traj = propagate_modes(spec, (a0, b0), args.z_max, config)

    def rows(tr: ModeTrajectory):
        for i in range(tr.z.size):
            yield (tr.z[i], tr.amp_a[i].real, tr.amp_a[i].imag,
                   tr.amp_b[i].real, tr.amp_b[i].imag,
                   tr.power_a[i], tr.power_b[i], tr.total_power[i])

    _serialize(_MODE_COLUMNS, rows(traj), args.format, args.out)
    if traj.power_scale != 1.0:
        print(f"# input power {traj.power_scale:g} normalized to 1",
              file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genrabi",
        description="Exactly solvable driven two-level dynamics: scenario "
                    "runner, ansatz verifier, coupled-mode front end.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_engine: bool):
        p.add_argument("--scenario", help="built-in family name")
        p.add_argument("--config", help="path to a scenario JSON config")
        p.add_argument("--t-max", type=float, default=None,
                       help="window end on the scenario's dimensionless axis")
        p.add_argument("--samples", type=int, default=None,
                       help="output samples (default per family)")
        p.add_argument("--params", default=None,
                       help="comma-separated name=value overrides; "
                            "split_fraction is accepted here for case1/case2")
        p.add_argument("--step", type=float, default=None,
                       help="oracle substep bound, dimensionless axis units "
                            "(default: auto from the profile's fastest scale)")
        p.add_argument("--scheme", choices=list(SCHEMES), default=None,
                       help=f"integrator (default ${_SCHEME_ENV} or "
                            "midpoint_exponential)")
        if with_engine:
            p.add_argument("--engine", choices=list(ENGINE_CHOICES),
                           default="closed_form")
            p.add_argument("--format", choices=("csv", "json"), default="csv")
            p.add_argument("--out", default=None,
                           help="output path (default stdout)")

    p_run = sub.add_parser("run", help="evaluate a scenario and export series")
    add_common(p_run, with_engine=True)
    p_run.set_defaults(handler=_cmd_run)

    p_list = sub.add_parser("list-scenarios", help="show the family catalog")
    p_list.set_defaults(handler=_cmd_list)

    p_ver = sub.add_parser("verify",
                           help="check an ansatz against a scenario profile")
    add_common(p_ver, with_engine=False)
    p_ver.add_argument("--ansatz", default=None,
                       help="zero | case1 | case2 | path to a (tau, theta) "
                            "CSV table (default: the family's own ansatz)")
    p_ver.add_argument("--residual-tol", type=float, default=1e-8)
    p_ver.add_argument("--entries-tol", type=float, default=1e-6)
    p_ver.set_defaults(handler=_cmd_verify)

    p_modes = sub.add_parser("modes", help="coupled-waveguide propagation")
    p_modes.add_argument("--config", help="mode JSON config "
                                          "{delta, coupling:{family, params}}")
    p_modes.add_argument("--coupling", choices=("constant", "sech",
                                                "custom_table"))
    p_modes.add_argument("--delta", type=float, default=None)
    p_modes.add_argument("--params", default=None,
                         help="coupling params, e.g. k0=1")
    p_modes.add_argument("--z-max", type=float, default=None)
    p_modes.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p_modes.add_argument("--initial", default="1,0,0,0",
                         help="re_A,im_A,re_B,im_B at z=0")
    p_modes.add_argument("--step", type=float, default=None)
    p_modes.add_argument("--scheme", choices=list(SCHEMES), default=None)
    p_modes.add_argument("--format", choices=("csv", "json"), default="csv")
    p_modes.add_argument("--out", default=None)
    p_modes.set_defaults(handler=_cmd_modes)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except GenrabiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
