"""Built-in drive scenario catalog.

Each family fixes the three profile functions from a handful of numbers.
Parameter names double as config keys:

- rabi: omega_z0, omega_mag0, phi_dot0 (all constant; generic off-resonance)
- sech_resonant: omega_mag0, phi_dot0 (hyperbolic-secant pulse, resonant)
- exp_resonant: omega_mag0, gamma or alpha, phi_dot0 (decaying drive, resonant)
- modulated_resonant: C, k, n, phi_dot0 (cosine-modulated drive, resonant)
- constant_beta0: beta0, omega_mag0 (detuning locked to beta0 |omega|)
- case1, case2: omega_mag0 plus the split_fraction knob

For case1/case2 the required detuning may be divided between the diagonal
entry and the phase velocity: Omega = (1 - f) Delta and phi_omega_dot =
2 f Delta with f the split fraction. The entry moduli are invariant under f;
the entry phases are not.

Each family also declares a dimensionless time axis (the natural abscissa
for plots: |omega0| t for most, gamma t for the decaying drive, phi_dot0 t
for the modulated one) and a default window on that axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closed_forms import (beta0_series, case1_detuning_integral,
                           case1_detuning_ratio, case1_series,
                           case2_detuning_integral, case2_detuning_ratio,
                           case2_series, resonance_series)
from .errors import ConfigError
from .fields import FieldProfile

__all__ = [
    "FAMILIES",
    "ScenarioParams",
    "make_scenario",
    "resolved_params",
    "scenario_time_scale",
    "default_window",
    "family_summary",
    "closed_form_series",
    "DEFAULT_SAMPLES",
]

FAMILIES = ("rabi", "sech_resonant", "exp_resonant", "modulated_resonant",
            "constant_beta0", "case1", "case2", "custom")

DEFAULT_SAMPLES = 1001

_SPLIT_FAMILIES = ("case1", "case2")


@dataclass(frozen=True)
class ScenarioParams:
    """Family name plus its numeric parameters.

    params holds only keys the family defines; omitted ones take their
    defaults. split_fraction is meaningful for case1/case2 only.
    """

    family: str
    params: dict = field(default_factory=dict)
    split_fraction: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(
                f"unknown family {self.family!r}; choose from "
                f"{', '.join(FAMILIES)}")
        object.__setattr__(self, "params", dict(self.params))
        f = self.split_fraction
        if not (isinstance(f, (int, float)) and math.isfinite(f)
                and 0.0 <= f <= 1.0):
            raise ConfigError("split_fraction must be in [0, 1]")
        if f != 0.0 and self.family not in _SPLIT_FAMILIES:
            raise ConfigError(
                f"split_fraction applies to {', '.join(_SPLIT_FAMILIES)} "
                f"only, not {self.family!r}")


def _require(cond: bool, name: str, msg: str) -> None:
    if not cond:
        raise ConfigError(f"parameter {name!r} {msg}")


def _finite(resolved: dict) -> None:
    for k, v in resolved.items():
        _require(isinstance(v, (int, float)) and math.isfinite(v), k,
                 "must be a finite number")


def _check_keys(family: str, params: dict, allowed: tuple) -> None:
    for k in params:
        if k not in allowed:
            raise ConfigError(
                f"unknown parameter {k!r} for family {family!r}; "
                f"valid: {', '.join(allowed)}")


# -- per-family resolvers: fill defaults, enforce domains -------------------

def _resolve_rabi(p: dict) -> dict:
    _check_keys("rabi", p, ("omega_z0", "omega_mag0", "phi_dot0"))
    r = {"omega_z0": p.get("omega_z0", 0.5),
         "omega_mag0": p.get("omega_mag0", 1.0),
         "phi_dot0": p.get("phi_dot0", 1.0)}
    _finite(r)
    _require(r["omega_mag0"] > 0, "omega_mag0", "must be > 0")
    return r


def _resolve_sech(p: dict) -> dict:
    _check_keys("sech_resonant", p, ("omega_mag0", "phi_dot0"))
    r = {"omega_mag0": p.get("omega_mag0", 1.0),
         "phi_dot0": p.get("phi_dot0", 10.0)}
    _finite(r)
    _require(r["omega_mag0"] > 0, "omega_mag0", "must be > 0")
    return r


def _resolve_exp(p: dict) -> dict:
    _check_keys("exp_resonant", p, ("omega_mag0", "gamma", "alpha", "phi_dot0"))
    w0 = p.get("omega_mag0", 1.0)
    _require(isinstance(w0, (int, float)) and math.isfinite(w0) and w0 > 0,
             "omega_mag0", "must be a finite number > 0")
    if "gamma" in p and "alpha" in p:
        raise ConfigError(
            "give either 'gamma' or 'alpha' (= omega_mag0/gamma), not both")
    if "gamma" in p:
        gamma = p["gamma"]
    elif "alpha" in p:
        alpha = p["alpha"]
        _require(isinstance(alpha, (int, float)) and math.isfinite(alpha)
                 and alpha > 0, "alpha", "must be > 0")
        gamma = w0 / alpha
    else:
        gamma = w0 / (4.5 * math.pi)
    r = {"omega_mag0": w0, "gamma": gamma,
         "phi_dot0": p.get("phi_dot0", 10.0 * gamma)}
    _finite(r)
    _require(r["gamma"] > 0, "gamma", "must be > 0")
    return r


def _resolve_modulated(p: dict) -> dict:
    _check_keys("modulated_resonant", p, ("C", "k", "n", "phi_dot0"))
    r = {"C": p.get("C", 1.0), "k": p.get("k", 1.0), "n": p.get("n", 10),
         "phi_dot0": p.get("phi_dot0", 1.0)}
    _finite(r)
    _require(r["C"] > 0, "C", "must be > 0")
    _require(0.0 <= r["k"] <= 1.0, "k",
             "must be in [0, 1] (the modulated |omega| must stay >= 0)")
    _require(float(r["n"]).is_integer() and r["n"] >= 1, "n",
             "must be a positive integer")
    _require(r["phi_dot0"] > 0, "phi_dot0", "must be > 0")
    r["n"] = int(r["n"])
    return r


def _resolve_beta0(p: dict) -> dict:
    _check_keys("constant_beta0", p, ("beta0", "omega_mag0"))
    r = {"beta0": p.get("beta0", 1.0), "omega_mag0": p.get("omega_mag0", 1.0)}
    _finite(r)
    _require(r["beta0"] >= 0, "beta0", "must be >= 0")
    _require(r["omega_mag0"] > 0, "omega_mag0", "must be > 0")
    return r


def _resolve_case(family: str):
    def resolver(p: dict) -> dict:
        _check_keys(family, p, ("omega_mag0",))
        r = {"omega_mag0": p.get("omega_mag0", 1.0)}
        _finite(r)
        _require(r["omega_mag0"] > 0, "omega_mag0", "must be > 0")
        return r
    return resolver


# -- builders ---------------------------------------------------------------

def _const(value: float):
    def fn(t):
        return np.full_like(np.asarray(t, dtype=float), value)
    return fn


def _linear(rate: float):
    def fn(t):
        return rate * np.asarray(t, dtype=float)
    return fn


def _label(family: str, resolved: dict, split: float) -> str:
    parts = [f"{k}={v:g}" for k, v in resolved.items()]
    if split:
        parts.append(f"split={split:g}")
    return f"{family}({', '.join(parts)})"


def _build_rabi(r: dict, split: float) -> FieldProfile:
    w0 = r["omega_mag0"]
    return FieldProfile(
        omega_z=_const(r["omega_z0"]),
        omega_mag=_const(w0),
        phi_omega=_linear(r["phi_dot0"]),
        phi_omega_dot=_const(r["phi_dot0"]),
        tau_of_t=_linear(w0),
        label=_label("rabi", r, split))


def _build_sech(r: dict, split: float) -> FieldProfile:
    w0 = r["omega_mag0"]

    def mag(t):
        return w0 / np.cosh(w0 * np.asarray(t, dtype=float))

    def tau(t):
        return np.arctan(np.sinh(w0 * np.asarray(t, dtype=float)))

    return FieldProfile(
        omega_z=_const(-0.5 * r["phi_dot0"]),
        omega_mag=mag,
        phi_omega=_linear(r["phi_dot0"]),
        phi_omega_dot=_const(r["phi_dot0"]),
        tau_of_t=tau,
        label=_label("sech_resonant", r, split))


def _build_exp(r: dict, split: float) -> FieldProfile:
    w0, gamma = r["omega_mag0"], r["gamma"]
    alpha = w0 / gamma

    def mag(t):
        return w0 * np.exp(-gamma * np.asarray(t, dtype=float))

    def tau(t):
        return alpha * (1.0 - np.exp(-gamma * np.asarray(t, dtype=float)))

    return FieldProfile(
        omega_z=_const(-0.5 * r["phi_dot0"]),
        omega_mag=mag,
        phi_omega=_linear(r["phi_dot0"]),
        phi_omega_dot=_const(r["phi_dot0"]),
        tau_of_t=tau,
        label=_label("exp_resonant", r, split))


def _build_modulated(r: dict, split: float) -> FieldProfile:
    rate = r["phi_dot0"]
    w0 = r["C"] * rate
    lam = r["n"] * rate
    k = r["k"]

    def mag(t):
        return w0 * (1.0 + k * np.cos(lam * np.asarray(t, dtype=float)))

    def tau(t):
        arr = np.asarray(t, dtype=float)
        return w0 * (arr + (k / lam) * np.sin(lam * arr))

    return FieldProfile(
        omega_z=_const(-0.5 * rate),
        omega_mag=mag,
        phi_omega=_linear(rate),
        phi_omega_dot=_const(rate),
        tau_of_t=tau,
        label=_label("modulated_resonant", r, split))


def _build_beta0(r: dict, split: float) -> FieldProfile:
    w0 = r["omega_mag0"]
    return FieldProfile(
        omega_z=_const(r["beta0"] * w0),
        omega_mag=_const(w0),
        phi_omega=_const(0.0),
        phi_omega_dot=_const(0.0),
        tau_of_t=_linear(w0),
        label=_label("constant_beta0", r, split))


def _build_case(family: str, ratio, integral):
    def builder(r: dict, split: float) -> FieldProfile:
        w0 = r["omega_mag0"]
        f = split

        def omega_z(t):
            return (1.0 - f) * w0 * ratio(w0 * np.asarray(t, dtype=float))

        def phi(t):
            return 2.0 * f * integral(w0 * np.asarray(t, dtype=float))

        def phi_dot(t):
            return 2.0 * f * w0 * ratio(w0 * np.asarray(t, dtype=float))

        return FieldProfile(
            omega_z=omega_z,
            omega_mag=_const(w0),
            phi_omega=phi,
            phi_omega_dot=phi_dot,
            tau_of_t=_linear(w0),
            label=_label(family, r, split))
    return builder


@dataclass(frozen=True)
class _Family:
    resolver: object
    builder: object
    time_scale_key: str
    default_t_max: float  # on the dimensionless axis
    axis: str
    description: str


_CATALOG = {
    "rabi": _Family(
        _resolve_rabi, _build_rabi, "omega_mag0", 4.0 * math.pi,
        "omega_mag0*t",
        "constant (omega_z0, omega_mag0, phi_dot0) triple; oscillation at "
        "the stretched rate sqrt(1+beta^2)|omega0| capped by 1/(1+beta^2)"),
    "sech_resonant": _Family(
        _resolve_sech, _build_sech, "omega_mag0", 6.0, "omega_mag0*t",
        "resonant hyperbolic-secant pulse; flip probability tanh^2"),
    "exp_resonant": _Family(
        _resolve_exp, _build_exp, "gamma", 20.0, "gamma*t",
        "resonant exponentially decaying drive; flip probability saturates "
        "at sin^2(alpha), alpha = omega_mag0/gamma"),
    "modulated_resonant": _Family(
        _resolve_modulated, _build_modulated, "phi_dot0", 4.0 * math.pi,
        "phi_dot0*t",
        "resonant cosine-modulated drive; flip probability periodic on the "
        "phi_dot0*t axis when n is an integer"),
    "constant_beta0": _Family(
        _resolve_beta0, _build_beta0, "omega_mag0", 4.0 * math.pi,
        "omega_mag0*t",
        "detuning locked to beta0*|omega|; flip probability capped at "
        "1/(1+beta0^2)"),
    "case1": _Family(
        _resolve_case("case1"), _build_case("case1", case1_detuning_ratio,
                                            case1_detuning_integral),
        "omega_mag0", 50.0, "omega_mag0*t",
        "arctangent-ansatz detuning; flip probability saturates at 1/2 with "
        "elliptic entry phases"),
    "case2": _Family(
        _resolve_case("case2"), _build_case("case2", case2_detuning_ratio,
                                            case2_detuning_integral),
        "omega_mag0", 20.0, "omega_mag0*t",
        "arctangent-ansatz detuning; full asymptotic inversion"),
}


def _family_entry(family: str) -> _Family:
    if family == "custom":
        raise ConfigError(
            "family 'custom' profiles are built directly as FieldProfile "
            "values through the library API; the catalog covers named "
            "families only")
    return _CATALOG[family]


def resolved_params(params: ScenarioParams) -> dict:
    """Family parameters with defaults filled in and domains enforced."""
    return _family_entry(params.family).resolver(params.params)


def make_scenario(params: ScenarioParams | str) -> FieldProfile:
    """Build the FieldProfile of a named family.

    A bare family name means all-default parameters. Every built-in profile
    carries analytic phase derivative and transverse area, so nothing
    downstream needs numerical differentiation for these.
    """
    if isinstance(params, str):
        params = ScenarioParams(family=params)
    fam = _family_entry(params.family)
    return fam.builder(fam.resolver(params.params), params.split_fraction)


def scenario_time_scale(params: ScenarioParams | str) -> float:
    """Factor u mapping physical time to the family's plot axis u*t."""
    if isinstance(params, str):
        params = ScenarioParams(family=params)
    fam = _family_entry(params.family)
    return float(fam.resolver(params.params)[fam.time_scale_key])


def default_window(family: str) -> tuple[float, int]:
    """(t_max on the dimensionless axis, samples) used when unspecified."""
    return _family_entry(family).default_t_max, DEFAULT_SAMPLES


def family_summary() -> list[dict]:
    """Catalog rows for the CLI listing."""
    rows = []
    for name in FAMILIES:
        if name == "custom":
            rows.append({"family": name, "axis": "t",
                         "default_t_max": None, "defaults": {},
                         "description": "user-supplied FieldProfile via the "
                                        "library API (library only)"})
            continue
        fam = _CATALOG[name]
        rows.append({"family": name, "axis": fam.axis,
                     "default_t_max": fam.default_t_max,
                     "defaults": fam.resolver({}),
                     "description": fam.description})
    return rows


def closed_form_series(params: ScenarioParams, profile: FieldProfile, ts):
    """Dispatch to the family's closed-form entries on a time grid."""
    fam = params.family
    r = resolved_params(params)
    if fam == "rabi":
        beta = (r["omega_z0"] + 0.5 * r["phi_dot0"]) / r["omega_mag0"]
        return beta0_series(profile, beta, ts, tol=1e-9)
    if fam in ("sech_resonant", "exp_resonant", "modulated_resonant"):
        return resonance_series(profile, ts)
    if fam == "constant_beta0":
        return beta0_series(profile, r["beta0"], ts)
    if fam == "case1":
        return case1_series(profile, ts)
    if fam == "case2":
        return case2_series(profile, ts)
    raise ConfigError(f"no closed form cataloged for family {fam!r}")
