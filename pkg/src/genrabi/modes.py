"""Two coupled co-propagating modes mapped onto the su(2) core.

The amplitudes obey first-order equations in the propagation length z:

    dA/dz =  k(z) e^{-i delta z} B,
    dB/dz = -k*(z) e^{+i delta z} A,

with coupling k(z) and constant phase mismatch delta. After the tilde
transformation A_t = A e^{i delta z/2}, B_t = B e^{-i delta z/2} this is a
two-level problem with z as time: Omega = -delta/2 and off-diagonal
gamma(z) = i k(z), so |omega| = |k| and phi_omega = arg(k) + pi/2. The form
above conserves |A|^2 + |B|^2 exactly; only this conservative case is
supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError
from .fields import FieldProfile, _held_phase
from .propagator import PropagatorConfig, Trajectory, propagate, suggested_step

__all__ = [
    "ModeState",
    "CouplingSpec",
    "ModeTrajectory",
    "to_su2_profile",
    "detilde",
    "tilde",
    "propagate_modes",
    "coupling_from_config",
    "COUPLING_FAMILIES",
]

COUPLING_FAMILIES = ("constant", "sech", "custom_table")


@dataclass(frozen=True)
class ModeState:
    """Complex mode amplitudes (units of sqrt power) at one position."""

    amp_a: complex
    amp_b: complex
    z: float = 0.0

    @property
    def power(self) -> float:
        return abs(self.amp_a) ** 2 + abs(self.amp_b) ** 2


@dataclass(frozen=True)
class CouplingSpec:
    """Coupling function and phase mismatch.

    k_ba defaults to the power-conserving partner -conj(k_ab) and may be
    passed explicitly only to assert that same relation; anything else is
    rejected, since v1 supports only the conservative case.
    """

    k_ab: Callable
    delta: float
    label: str = "coupling"
    k_ba: Callable | None = None


@dataclass(frozen=True)
class ModeTrajectory:
    """Detilded amplitudes and powers along z (input power normalized to 1)."""

    z: np.ndarray
    amp_a: np.ndarray
    amp_b: np.ndarray
    power_a: np.ndarray
    power_b: np.ndarray
    total_power: np.ndarray
    power_scale: float
    delta: float
    label: str
    base: Trajectory


def _check_conservative(spec: CouplingSpec, z_max: float) -> None:
    if spec.k_ba is None:
        return
    grid = np.linspace(0.0, z_max, 33)
    kab = np.asarray([complex(spec.k_ab(z)) for z in grid])
    kba = np.asarray([complex(spec.k_ba(z)) for z in grid])
    dev = float(np.max(np.abs(kba + np.conj(kab))))
    bound = 1e-12 * max(1.0, float(np.max(np.abs(kab))))
    if dev > bound:
        raise ConfigError(
            f"coupling {spec.label!r} is not power-conserving: "
            f"max |k_ba + conj(k_ab)| = {dev:.3e} on [0, {z_max:g}]; "
            "only k_ba = -conj(k_ab) is supported")


def to_su2_profile(spec: CouplingSpec, *, window: float = 1.0) -> FieldProfile:
    """The two-level profile equivalent to the tilded mode problem.

    window is only used to probe an explicitly supplied k_ba for power
    conservation; the returned profile itself is evaluable anywhere.
    """
    _check_conservative(spec, float(window))
    half = -0.5 * float(spec.delta)

    def omega_z(z):
        return np.full_like(np.asarray(z, dtype=float), half)

    def kvals(z):
        arr = np.asarray(z, dtype=float)
        flat = np.atleast_1d(arr)
        vals = np.asarray([complex(spec.k_ab(float(x))) for x in flat])
        return arr, flat, vals

    def omega_mag(z):
        arr, _, vals = kvals(z)
        out = np.abs(vals).reshape(arr.shape) if arr.ndim else np.abs(vals)[0]
        return float(out) if arr.ndim == 0 else out

    def phi_omega(z):
        # arg(i k) = arg(k) + pi/2, held where k vanishes, unwrapped along
        # array queries (branch choice is per call; only e^{i phi} matters)
        arr, flat, vals = kvals(z)
        gam = 1j * vals
        phase = _held_phase(np.real(gam), -np.imag(gam))
        if flat.size > 1:
            phase = np.unwrap(phase)
        if arr.ndim == 0:
            return float(phase[0])
        return phase.reshape(arr.shape)

    return FieldProfile(omega_z=omega_z, omega_mag=omega_mag,
                        phi_omega=phi_omega, label=f"modes:{spec.label}")


def detilde(v, z: float, delta: float) -> ModeState:
    """Undo the tilde transformation at position z.

    v is the tilded amplitude pair (A_t, B_t) or a ModeState holding one.
    Moduli are unchanged: the transformation is a pure opposite phase on
    each mode.
    """
    if isinstance(v, ModeState):
        at, bt = v.amp_a, v.amp_b
    else:
        at, bt = v
    rot = np.exp(-0.5j * delta * z)
    return ModeState(amp_a=complex(at * rot), amp_b=complex(bt / rot),
                     z=float(z))


def tilde(state: ModeState, delta: float) -> tuple[complex, complex]:
    """The tilded amplitude pair of a physical ModeState."""
    rot = np.exp(0.5j * delta * state.z)
    return complex(state.amp_a * rot), complex(state.amp_b / rot)


def propagate_modes(spec: CouplingSpec, initial, z_max: float,
                    config: PropagatorConfig | None = None) -> ModeTrajectory:
    """Evolve the mode pair from z = 0 to z_max via the su(2) oracle.

    initial is a ModeState at z = 0 (or a bare (A, B) pair); its power is
    normalized to 1 and the raw value recorded as power_scale.
    """
    if not isinstance(initial, ModeState):
        initial = ModeState(amp_a=complex(initial[0]),
                            amp_b=complex(initial[1]), z=0.0)
    if initial.z != 0.0:
        raise ConfigError("initial ModeState must sit at z = 0")
    p0 = initial.power
    if p0 <= 0.0:
        raise ConfigError("initial state must carry nonzero power")
    a0 = initial.amp_a / np.sqrt(p0)
    b0 = initial.amp_b / np.sqrt(p0)

    profile = to_su2_profile(spec, window=z_max)
    if config is None:
        config = PropagatorConfig(step=suggested_step(profile, z_max))
    traj = propagate(profile, config, z_max)

    # tilded evolution, then detilde sample-wise
    at = traj.a * a0 + traj.b * b0
    bt = -np.conj(traj.b) * a0 + np.conj(traj.a) * b0
    rot = np.exp(-0.5j * spec.delta * traj.t)
    amp_a = at * rot
    amp_b = bt / rot
    pa = np.abs(amp_a) ** 2
    pb = np.abs(amp_b) ** 2
    return ModeTrajectory(
        z=traj.t, amp_a=amp_a, amp_b=amp_b, power_a=pa, power_b=pb,
        total_power=pa + pb, power_scale=float(p0), delta=float(spec.delta),
        label=spec.label, base=traj)


# ---------------------------------------------------------------------------
# coupling catalog for config-driven use

def _constant_coupling(params: dict) -> tuple[Callable, str]:
    k0 = params.get("k0", 1.0)
    phase = params.get("phase", 0.0)
    if not k0 >= 0:
        raise ConfigError("coupling.params.k0 must be >= 0")
    value = complex(k0 * np.exp(1j * phase))
    return (lambda z: value), f"constant(k0={k0:g})"


def _sech_coupling(params: dict) -> tuple[Callable, str]:
    k0 = params.get("k0", 1.0)
    if not k0 > 0:
        raise ConfigError("coupling.params.k0 must be > 0")

    def fn(z):
        return k0 / np.cosh(k0 * z)

    return fn, f"sech(k0={k0:g})"


def _table_coupling(params: dict) -> tuple[Callable, str]:
    path = params.get("path")
    if not path:
        raise ConfigError("coupling.params.path is required for custom_table")
    rows = np.genfromtxt(path, delimiter=",", comments="#",
                         skip_header=0, dtype=float)
    if rows.ndim == 1:
        rows = rows.reshape(1, -1)
    # tolerate a header line by dropping non-numeric leading rows
    while rows.size and np.isnan(rows[0]).any():
        rows = rows[1:]
    if rows.ndim != 2 or rows.shape[0] < 2 or rows.shape[1] < 2:
        raise ConfigError(
            f"coupling table {path} needs >= 2 numeric rows of "
            "z, re_k[, im_k]")
    zs = rows[:, 0]
    if np.any(np.diff(zs) <= 0):
        raise ConfigError("coupling table z column must be strictly ascending")
    re = rows[:, 1]
    im = rows[:, 2] if rows.shape[1] > 2 else np.zeros_like(re)

    def fn(z):
        return complex(np.interp(z, zs, re) + 1j * np.interp(z, zs, im))

    return fn, f"custom_table({path})"


def coupling_from_config(cfg: dict) -> CouplingSpec:
    """Build a CouplingSpec from the JSON-shaped mapping.

    Schema: {"delta": number, "coupling": {"family": name, "params": {...}}}
    with family one of constant, sech, custom_table.
    """
    if not isinstance(cfg, dict):
        raise ConfigError("mode config must be a JSON object")
    if "delta" not in cfg:
        raise ConfigError("missing field: delta")
    try:
        delta = float(cfg["delta"])
    except (TypeError, ValueError):
        raise ConfigError("field delta must be a number")
    coupling = cfg.get("coupling")
    if not isinstance(coupling, dict) or "family" not in coupling:
        raise ConfigError("missing field: coupling.family")
    family = coupling["family"]
    params = coupling.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("field coupling.params must be an object")
    builders = {"constant": _constant_coupling, "sech": _sech_coupling,
                "custom_table": _table_coupling}
    if family not in builders:
        raise ConfigError(
            f"unknown coupling family {family!r}; choose from "
            f"{', '.join(COUPLING_FAMILIES)}")
    fn, label = builders[family](params)
    return CouplingSpec(k_ab=fn, delta=delta, label=label)
