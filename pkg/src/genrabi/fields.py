"""Time-dependent su(2) Hamiltonian parameters and physical-field conversion.

The Hamiltonian is parametrized by the diagonal entry Omega(t) and the
off-diagonal entry omega(t) = |omega(t)| e^{i phi_omega(t)}:

    H(t) = [[ Omega(t),       omega(t) ],
            [ omega*(t),     -Omega(t) ]]

All quantities use hbar = 1; energies are expressed in units of a reference
transverse amplitude and times in the inverse of that reference, so every
number in a profile is dimensionless. The quantity

    detuning(t) = Omega(t) + phi_omega_dot(t) / 2

controls solvability: it vanishes identically for generalized-resonant
drives, and the exactly solvable out-of-resonance families fix its shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError
from .quadrature import CumulativeIntegral

__all__ = [
    "FieldProfile",
    "PhysicalField",
    "detuning",
    "phase_derivative",
    "is_generalized_resonant",
    "to_profile",
    "from_profile",
    "transverse_area",
    "transverse_area_series",
]

ArrayFunc = Callable[[np.ndarray], np.ndarray]

# Default step for the 5-point phase-derivative stencil, in reference time.
DIFF_STEP = 1e-5


def _as_array(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


@dataclass(frozen=True)
class FieldProfile:
    """Evaluable Hamiltonian parameter triple plus metadata.

    Parameters
    ----------
    omega_z : callable
        Diagonal entry Omega(t). Must accept numpy arrays.
    omega_mag : callable
        Off-diagonal modulus |omega(t)| >= 0. Must accept numpy arrays.
    phi_omega : callable
        Off-diagonal phase in radians, continuous on the evaluation window.
    label : str
        Human-readable scenario name.
    phi_omega_dot : callable, optional
        Analytic phase derivative. When absent, a 5-point central difference
        with step ``diff_step`` is used (see ``phase_derivative``).
    tau_of_t : callable, optional
        Analytic accumulated transverse area, integral of |omega| from 0 to t.
        Consumers fall back to adaptive quadrature when absent; the numerical
        propagator never uses it.
    allow_numeric_phase_derivative : bool
        Set False to make a missing phi_omega_dot a hard configuration error
        instead of silently differencing.
    diff_step : float
        Stencil step for the numerical phase derivative.
    """

    omega_z: ArrayFunc
    omega_mag: ArrayFunc
    phi_omega: ArrayFunc
    label: str = "custom"
    phi_omega_dot: ArrayFunc | None = None
    tau_of_t: ArrayFunc | None = None
    allow_numeric_phase_derivative: bool = True
    diff_step: float = DIFF_STEP


def phase_derivative(profile: FieldProfile, t):
    """d(phi_omega)/dt at t, analytic when supplied, else 5-point stencil.

    The stencil values are locally unwrapped so a profile whose phase is
    reported modulo 2 pi still differentiates cleanly away from genuine
    discontinuities.
    """
    arr, scalar = _as_array(t)
    if profile.phi_omega_dot is not None:
        out = np.asarray(profile.phi_omega_dot(arr), dtype=float)
        return float(out) if scalar else out
    if not profile.allow_numeric_phase_derivative:
        raise ConfigError(
            f"profile {profile.label!r} has no analytic phase derivative and "
            "numerical differentiation is disabled")
    h = profile.diff_step
    stencil = np.stack([np.asarray(profile.phi_omega(arr + k * h), dtype=float)
                        for k in (-2.0, -1.0, 0.0, 1.0, 2.0)])
    stencil = np.unwrap(stencil, axis=0)
    out = (stencil[0] - 8.0 * stencil[1] + 8.0 * stencil[3] - stencil[4]) / (12.0 * h)
    return float(out) if scalar else out


def detuning(profile: FieldProfile, t):
    """Omega(t) + phi_omega_dot(t)/2, the residual longitudinal drive."""
    arr, scalar = _as_array(t)
    out = np.asarray(profile.omega_z(arr), dtype=float) + 0.5 * phase_derivative(profile, arr)
    return float(out) if scalar else out


def _window_grid(window, samples: int) -> np.ndarray:
    try:
        lo, hi = 0.0, float(window)
    except TypeError:
        lo, hi = (float(window[0]), float(window[1]))
    if not hi > lo:
        raise ConfigError(f"empty evaluation window [{lo:g}, {hi:g}]")
    return np.linspace(lo, hi, samples)


def is_generalized_resonant(profile: FieldProfile, window, tol: float = 1e-10,
                            samples: int = 512) -> bool:
    """True iff sup |detuning| <= tol over the sampled window.

    ``window`` is either t_max (window starts at 0) or a (t_min, t_max) pair.
    """
    if not tol > 0:
        raise ConfigError("tol must be > 0")
    grid = _window_grid(window, samples)
    return bool(np.max(np.abs(detuning(profile, grid))) <= tol)


def transverse_area(profile: FieldProfile, t: float) -> float:
    """Accumulated transverse area tau(t) = integral of |omega| from 0 to t.

    Uses the analytic ``tau_of_t`` when the profile carries one, adaptive
    quadrature otherwise. tau is the natural clock of every solvable family.
    """
    if profile.tau_of_t is not None:
        return float(profile.tau_of_t(float(t)))
    area = CumulativeIntegral(lambda u: float(profile.omega_mag(u)))
    return area(float(t))


def transverse_area_series(profile: FieldProfile, ts) -> np.ndarray:
    """tau evaluated on an ascending grid, sharing one quadrature frontier."""
    ts = np.asarray(ts, dtype=float)
    if profile.tau_of_t is not None:
        return np.asarray(profile.tau_of_t(ts), dtype=float)
    area = CumulativeIntegral(lambda u: float(profile.omega_mag(u)))
    return np.array([area(float(x)) for x in ts])


@dataclass(frozen=True)
class PhysicalField:
    """Laboratory-frame magnetic field with its moment scale.

    b_x, b_y, b_z map time to tesla; mu0_g (energy per tesla) converts field
    components to Hamiltonian entries. This is the only layer where
    dimensional field units appear.
    """

    b_x: ArrayFunc
    b_y: ArrayFunc
    b_z: ArrayFunc
    mu0_g: float
    label: str = "physical"


def _held_phase(bx: np.ndarray, by: np.ndarray) -> np.ndarray:
    # atan2 is undefined where the transverse field vanishes; hold the last
    # valid value there (any constant works since |omega| = 0).
    phase = np.arctan2(-by, bx)
    dead = np.hypot(bx, by) == 0.0
    if dead.any():
        phase = phase.copy()
        alive = np.where(~dead)[0]
        if alive.size == 0:
            return np.zeros_like(phase)
        idx = np.maximum.accumulate(np.where(dead, -1, np.arange(phase.size)))
        phase[idx < 0] = phase[alive[0]]
        keep = idx >= 0
        phase[keep] = phase[idx[keep]]
    return phase


def to_profile(field: PhysicalField) -> FieldProfile:
    """Convert a laboratory field to a FieldProfile.

    Omega = (mu0_g/2) B_z, |omega| = (mu0_g/2) sqrt(B_x^2 + B_y^2),
    phi_omega = atan2(-B_y, B_x) unwrapped continuously along array input.
    Scalar phase queries return the principal value.
    """
    if not field.mu0_g > 0:
        raise ConfigError("mu0_g must be > 0")
    half = 0.5 * field.mu0_g

    def omega_z(t):
        return half * np.asarray(field.b_z(np.asarray(t, dtype=float)), dtype=float)

    def omega_mag(t):
        arr = np.asarray(t, dtype=float)
        return half * np.hypot(np.asarray(field.b_x(arr), dtype=float),
                               np.asarray(field.b_y(arr), dtype=float))

    def phi_omega(t):
        arr, scalar = _as_array(t)
        flat = np.atleast_1d(arr)
        phase = _held_phase(np.asarray(field.b_x(flat), dtype=float),
                            np.asarray(field.b_y(flat), dtype=float))
        if flat.size > 1:
            phase = np.unwrap(phase)
        phase = phase.reshape(arr.shape) if not scalar else phase[0]
        return float(phase) if scalar else phase

    return FieldProfile(omega_z=omega_z, omega_mag=omega_mag,
                        phi_omega=phi_omega, label=field.label)


def from_profile(profile: FieldProfile, mu0_g: float) -> PhysicalField:
    """Reconstruct the laboratory field that produces ``profile``."""
    if not mu0_g > 0:
        raise ConfigError("mu0_g must be > 0")
    scale = 2.0 / mu0_g

    def b_x(t):
        arr = np.asarray(t, dtype=float)
        return scale * np.asarray(profile.omega_mag(arr), dtype=float) \
            * np.cos(np.asarray(profile.phi_omega(arr), dtype=float))

    def b_y(t):
        arr = np.asarray(t, dtype=float)
        return -scale * np.asarray(profile.omega_mag(arr), dtype=float) \
            * np.sin(np.asarray(profile.phi_omega(arr), dtype=float))

    def b_z(t):
        return scale * np.asarray(profile.omega_z(np.asarray(t, dtype=float)), dtype=float)

    return PhysicalField(b_x=b_x, b_y=b_y, b_z=b_z, mu0_g=mu0_g,
                         label=profile.label)
