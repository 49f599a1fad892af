"""Closed-form evolution entries for the exactly solvable drive families.

Every family fixes the detuning Delta(t) = Omega(t) + phi_omega_dot(t)/2 in a
way that makes the two-level Cauchy problem integrable:

- generalized resonance: Delta = 0, entries driven by the accumulated
  transverse area tau(t) alone;
- constant ratio: Delta(t) = beta0 |omega(t)|, a rescaled resonance with
  transition probability capped at 1/(1+beta0^2);
- case1: an arctangent ansatz whose transition probability saturates at 1/2,
  with entry phases carrying an incomplete-elliptic-integral term;
- case2: an arctangent ansatz with linearly growing late-time detuning and
  full asymptotic inversion (Landau-Zener-like).

Entries are returned as signed complex numbers; moduli are exposed on the
EvolutionEntries container. The phase convention keeps the global choice
phi_omega(0) = 0 natural but does not require it: the general forms carry
(phi(t) -+ phi(0))/2 factors and reduce to the familiar displays when
phi(0) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InconsistentProfileError
from .fields import FieldProfile, detuning, transverse_area, transverse_area_series
from .quadrature import CumulativeIntegral, adaptive_quad

__all__ = [
    "EvolutionEntries",
    "resonance_entries",
    "resonance_asymptote",
    "modulated_probability",
    "beta0_entries",
    "case1_entries",
    "case2_entries",
    "elliptic_phase",
    "resonance_series",
    "beta0_series",
    "case1_series",
    "case2_series",
    "case1_detuning_ratio",
    "case2_detuning_ratio",
    "case1_detuning_integral",
    "case2_detuning_integral",
    "case1_probability_deficit",
]

_UNITARITY_TOL = 1e-9


@dataclass(frozen=True)
class EvolutionEntries:
    """First-row entries (a, b) of the evolution operator at time t.

    The full operator is [[a, b], [-conj(b), conj(a)]]; |b|^2 is the
    spin-flip probability. b keeps its sign as a complex number; use b_mag
    for the modulus.
    """

    a: complex
    b: complex
    t: float

    def __post_init__(self):
        defect = abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0)
        if not defect <= _UNITARITY_TOL:
            raise ConfigError(
                f"entries at t={self.t:g} violate unitarity by {defect:.3e}")

    @property
    def a_mag(self) -> float:
        return abs(self.a)

    @property
    def b_mag(self) -> float:
        return abs(self.b)

    @property
    def unitarity_defect(self) -> float:
        return abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0)


def _check_condition(profile: FieldProfile, t: float, expected, tol: float,
                     what: str, samples: int = 33) -> None:
    # expected: callable grid -> required detuning on that grid
    grid = np.linspace(0.0, t, samples) if t > 0 else np.array([0.0])
    dev = np.max(np.abs(detuning(profile, grid) - expected(grid)))
    if not dev <= tol:
        raise InconsistentProfileError(
            f"profile {profile.label!r} does not satisfy {what}: "
            f"max detuning deviation {dev:.3e} > {tol:.1e} on [0, {t:g}]")


# ---------------------------------------------------------------------------
# generalized resonance

def _resonance_pair(tau, phi_t, phi_0):
    a = np.cos(tau) * np.exp(0.5j * (phi_t - phi_0))
    b = np.sin(tau) * np.exp(1j * (0.5 * (phi_t + phi_0) - 0.5 * np.pi))
    return a, b


def resonance_entries(profile: FieldProfile, t: float, *, check: bool = True,
                      tol: float = 1e-10) -> EvolutionEntries:
    """Entries for a generalized-resonant profile (zero detuning).

    a = cos(tau) e^{i phi/2}, b = sin(tau) e^{i(phi/2 - pi/2)} with
    tau the accumulated transverse area; the flip probability is sin^2(tau)
    independent of the phase realization.
    """
    if check:
        _check_condition(profile, t, lambda g: np.zeros_like(g), tol,
                         "the generalized resonance condition")
    tau = transverse_area(profile, t)
    phi_t = float(profile.phi_omega(t))
    phi_0 = float(profile.phi_omega(0.0))
    a, b = _resonance_pair(tau, phi_t, phi_0)
    return EvolutionEntries(a=complex(a), b=complex(b), t=float(t))


def resonance_series(profile: FieldProfile, ts: np.ndarray, *,
                     check: bool = True, tol: float = 1e-10):
    """Vectorized resonance entries over an ascending time grid."""
    ts = np.asarray(ts, dtype=float)
    if check and ts.size:
        dev = np.max(np.abs(detuning(profile, ts)))
        if not dev <= tol:
            raise InconsistentProfileError(
                f"profile {profile.label!r} is not generalized-resonant: "
                f"max |detuning| {dev:.3e} > {tol:.1e}")
    tau = transverse_area_series(profile, ts)
    phi = np.asarray(profile.phi_omega(ts), dtype=float)
    phi_0 = float(profile.phi_omega(0.0))
    return _resonance_pair(tau, phi, phi_0)


def resonance_asymptote(alpha: float) -> float:
    """Limit flip probability sin^2(alpha) of the exponential-decay drive.

    alpha is the total transverse area of the decaying pulse; integer
    multiples of pi leave the spin unflipped in the infinite-time limit,
    half-integer multiples invert it completely.
    """
    return float(np.sin(alpha) ** 2)


def modulated_probability(C: float, k: float, n: int, tau_tilde):
    """Flip probability of the cosine-modulated resonant drive.

    P = sin^2[ C (tau_tilde + (k/n) sin(n tau_tilde)) ] on the dimensionless
    axis tau_tilde; periodic with period 2 pi when n is an integer.
    """
    if not (isinstance(n, (int, np.integer)) or float(n).is_integer()):
        raise ConfigError("n must be a positive integer")
    if n <= 0:
        raise ConfigError("n must be a positive integer")
    if k < 0:
        raise ConfigError("k must be >= 0")
    x = np.asarray(tau_tilde, dtype=float)
    arg = C * (x + (k / float(n)) * np.sin(float(n) * x))
    out = np.sin(arg) ** 2
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# constant-ratio detuning (Delta = beta0 |omega|)

def _beta0_pair(beta0, tau, phi_t, phi_0):
    stretch = np.sqrt(1.0 + beta0 * beta0)
    big_phi = stretch * tau
    a_rot = np.cos(big_phi) - 1j * (beta0 / stretch) * np.sin(big_phi)
    b_rot = -1j * np.sin(big_phi) / stretch
    a = np.exp(0.5j * (phi_t - phi_0)) * a_rot
    b = np.exp(0.5j * (phi_t + phi_0)) * b_rot
    return a, b


def beta0_entries(profile: FieldProfile, beta0: float, t: float, *,
                  check: bool = True, tol: float = 1e-10) -> EvolutionEntries:
    """Entries when the detuning is locked to beta0 |omega(t)|.

    The flip probability is sin^2(sqrt(1+beta0^2) tau) / (1+beta0^2): the
    resonant law with the area axis stretched by sqrt(1+beta0^2) and the
    amplitude capped at 1/(1+beta0^2). beta0 = 0 recovers resonance exactly.
    """
    if check:
        mag = profile.omega_mag
        _check_condition(
            profile, t,
            lambda g: beta0 * np.asarray(mag(g), dtype=float), tol,
            f"detuning = {beta0:g} * |omega|")
    tau = transverse_area(profile, t)
    a, b = _beta0_pair(float(beta0), tau, float(profile.phi_omega(t)),
                       float(profile.phi_omega(0.0)))
    return EvolutionEntries(a=complex(a), b=complex(b), t=float(t))


def beta0_series(profile: FieldProfile, beta0: float, ts: np.ndarray, *,
                 check: bool = True, tol: float = 1e-10):
    ts = np.asarray(ts, dtype=float)
    if check and ts.size:
        mag = np.asarray(profile.omega_mag(ts), dtype=float)
        dev = np.max(np.abs(detuning(profile, ts) - beta0 * mag))
        if not dev <= tol:
            raise InconsistentProfileError(
                f"profile {profile.label!r} does not hold detuning = "
                f"{beta0:g} * |omega|: max deviation {dev:.3e} > {tol:.1e}")
    tau = transverse_area_series(profile, ts)
    phi = np.asarray(profile.phi_omega(ts), dtype=float)
    return _beta0_pair(float(beta0), tau, phi, float(profile.phi_omega(0.0)))


# ---------------------------------------------------------------------------
# case1: half-flip saturation with elliptic phases

def case1_detuning_ratio(tau):
    """Detuning in units of |omega| that the case1 ansatz induces."""
    tau = np.asarray(tau, dtype=float)
    out = 4.0 * (1.0 + tau ** 2) / ((1.0 + 4.0 * tau ** 2) * np.sqrt(2.0 + 4.0 * tau ** 2))
    return float(out) if out.ndim == 0 else out


def case1_detuning_integral(tau):
    """Integral of case1_detuning_ratio from 0 to tau, in closed form."""
    tau = np.asarray(tau, dtype=float)
    out = 0.5 * np.arcsinh(np.sqrt(2.0) * tau) \
        + 1.5 * np.arctan(2.0 * tau / np.sqrt(2.0 + 4.0 * tau ** 2))
    return float(out) if out.ndim == 0 else out


def case1_probability_deficit(tau):
    """How far below 1/2 the case1 flip probability sits: 1/(2 sqrt(1+4 tau^2))."""
    tau = np.asarray(tau, dtype=float)
    out = 0.5 / np.sqrt(1.0 + 4.0 * tau ** 2)
    return float(out) if out.ndim == 0 else out


def elliptic_phase(tau: float) -> float:
    """The real elliptic-integral term in the case1 entry phases.

    Equals -(1/sqrt(2)) integral of sqrt(1 + sinh(u)^2 / 2) for u from 0 to
    asinh(2 tau), evaluated by real adaptive quadrature (no complex-argument
    special functions). It is minus the generic phase quadrature of the case1
    ansatz, which provides an independent cross-check.
    """
    if tau < 0:
        raise ConfigError("tau must be >= 0")
    if tau == 0:
        return 0.0
    upper = float(np.arcsinh(2.0 * tau))
    integral = adaptive_quad(
        lambda u: np.sqrt(1.0 + 0.5 * np.sinh(u) ** 2), 0.0, upper, tol=1e-12)
    return -integral / np.sqrt(2.0)


def _case1_r_integrand(s: float) -> float:
    # d/dtau of the case1 phase quadrature, algebraically simplified
    return np.sqrt((2.0 + 4.0 * s * s) / (1.0 + 4.0 * s * s))


def _case1_pair(tau, r_val, phi_t, phi_0):
    growth = np.sqrt(1.0 + 4.0 * tau ** 2)
    a_mag = np.sqrt((growth + 1.0) / (2.0 * growth))
    b_mag = np.sqrt((growth - 1.0) / (2.0 * growth))
    half_theta = np.arctan(2.0 * tau / np.sqrt(2.0 + 4.0 * tau ** 2))
    phase_a = 0.5 * (phi_t - phi_0) - half_theta - r_val
    phase_b = 0.5 * (phi_t + phi_0) - half_theta + r_val - 0.5 * np.pi
    return a_mag * np.exp(1j * phase_a), b_mag * np.exp(1j * phase_b)


def case1_entries(omega_mag, phi_omega, t: float, *,
                  tau: float | None = None) -> EvolutionEntries:
    """Case1 entries from the transverse drive alone.

    The caller is responsible for pairing these with a profile whose detuning
    follows case1_detuning_ratio; use case1_series for a checked evaluation.
    tau may be passed directly to skip the quadrature of omega_mag.
    """
    if tau is None:
        area = CumulativeIntegral(lambda u: float(omega_mag(u)))
        tau = area(float(t))
    r_val = -elliptic_phase(float(tau))
    a, b = _case1_pair(float(tau), r_val, float(phi_omega(t)),
                       float(phi_omega(0.0)))
    return EvolutionEntries(a=complex(a), b=complex(b), t=float(t))


def case1_series(profile: FieldProfile, ts: np.ndarray, *,
                 check: bool = True, tol: float = 1e-8):
    ts = np.asarray(ts, dtype=float)
    tau = transverse_area_series(profile, ts)
    if check and ts.size:
        mag = np.asarray(profile.omega_mag(ts), dtype=float)
        dev = np.max(np.abs(detuning(profile, ts) - case1_detuning_ratio(tau) * mag))
        if not dev <= tol:
            raise InconsistentProfileError(
                f"profile {profile.label!r} does not follow the case1 "
                f"detuning: max deviation {dev:.3e} > {tol:.1e}")
    r_area = CumulativeIntegral(_case1_r_integrand)
    r_vals = np.array([r_area(x) for x in tau])
    phi = np.asarray(profile.phi_omega(ts), dtype=float)
    return _case1_pair(tau, r_vals, phi, float(profile.phi_omega(0.0)))


# ---------------------------------------------------------------------------
# case2: Landau-Zener-like full inversion

def case2_detuning_ratio(tau):
    """Detuning in units of |omega| that the case2 ansatz induces."""
    tau = np.asarray(tau, dtype=float)
    out = (2.0 + (1.0 - tau ** 2) * (2.0 + tau ** 2)) \
        / (2.0 * (1.0 + tau ** 2) * np.sqrt(2.0 + tau ** 2))
    return float(out) if out.ndim == 0 else out


def case2_detuning_integral(tau):
    """Integral of case2_detuning_ratio from 0 to tau, in closed form."""
    tau = np.asarray(tau, dtype=float)
    out = -0.25 * tau * np.sqrt(2.0 + tau ** 2) \
        + 0.5 * np.arcsinh(tau / np.sqrt(2.0)) \
        + 2.0 * np.arctan(tau / np.sqrt(2.0 + tau ** 2))
    return float(out) if out.ndim == 0 else out


def _case2_phase_quadrature(tau):
    # integral of sqrt(2+s^2)/2 from 0 to tau, in closed form
    tau = np.asarray(tau, dtype=float)
    return 0.5 * (0.5 * tau * np.sqrt(2.0 + tau ** 2)
                  + np.arcsinh(tau / np.sqrt(2.0)))


def _case2_pair(tau, phi_t, phi_0):
    shrink = np.sqrt(1.0 + tau ** 2)
    a_mag = 1.0 / shrink
    b_mag = tau / shrink
    half_theta = np.arctan(tau / np.sqrt(2.0 + tau ** 2))
    r_val = _case2_phase_quadrature(tau)
    phase_a = 0.5 * (phi_t - phi_0) - half_theta - r_val
    phase_b = 0.5 * (phi_t + phi_0) - half_theta + r_val - 0.5 * np.pi
    return a_mag * np.exp(1j * phase_a), b_mag * np.exp(1j * phase_b)


def case2_entries(omega_mag, phi_omega, t: float, *,
                  tau: float | None = None) -> EvolutionEntries:
    """Case2 entries from the transverse drive alone.

    Flip probability tau^2 / (1 + tau^2): monotone inversion approaching 1.
    Pair with a profile following case2_detuning_ratio; use case2_series for
    a checked evaluation.
    """
    if tau is None:
        area = CumulativeIntegral(lambda u: float(omega_mag(u)))
        tau = area(float(t))
    a, b = _case2_pair(float(tau), float(phi_omega(t)), float(phi_omega(0.0)))
    return EvolutionEntries(a=complex(a), b=complex(b), t=float(t))


def case2_series(profile: FieldProfile, ts: np.ndarray, *,
                 check: bool = True, tol: float = 1e-8):
    ts = np.asarray(ts, dtype=float)
    tau = transverse_area_series(profile, ts)
    if check and ts.size:
        mag = np.asarray(profile.omega_mag(ts), dtype=float)
        dev = np.max(np.abs(detuning(profile, ts) - case2_detuning_ratio(tau) * mag))
        if not dev <= tol:
            raise InconsistentProfileError(
                f"profile {profile.label!r} does not follow the case2 "
                f"detuning: max deviation {dev:.3e} > {tol:.1e}")
    phi = np.asarray(profile.phi_omega(ts), dtype=float)
    return _case2_pair(tau, phi, float(profile.phi_omega(0.0)))
