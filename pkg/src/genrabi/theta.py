"""Free-function ansatz machinery for solvable detunings.

A solvable family is generated by choosing a continuous function Theta(tau)
with Theta(0) = 0 on the rescaled clock tau = integral of |omega|. The
choice induces the detuning (in units of |omega|)

    ratio(tau) = Theta'(tau)/2 + sin(Theta) cot(2 phi_int(tau)),
    phi_int(tau) = integral of cos(Theta) from 0 to tau,

and any profile whose detuning follows |omega(t)| ratio(tau(t)) is solved in
closed representation by the pair of phase integrals (phi_int, r_int), where
r_int integrates sin(Theta)/sin(2 phi_int). Ansaetze are expressed in tau,
not t, which makes them agnostic to the transverse envelope.

The r integrand is a 0/0 ratio at tau = 0; below a small split point it is
replaced by its Taylor form Theta(s)/(2s), which is exact to O(s^2) there.
An interior zero of sin(2 phi_int) with nonvanishing sin(Theta) makes the
induced detuning non-integrable and is reported as SingularAnsatzError, not
patched by principal values: for the built-in families 2 phi_int stays
strictly inside (0, pi), so an interior zero marks an invalid user ansatz.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
import scipy.integrate

from .closed_forms import EvolutionEntries
from .errors import (ConfigError, InconsistentProfileError, NumericError,
                     SingularAnsatzError)
from .fields import FieldProfile, detuning, transverse_area_series
from .propagator import PropagatorConfig, propagate, suggested_step
from .quadrature import CumulativeIntegral, adaptive_quad

__all__ = [
    "ThetaAnsatz",
    "PhaseIntegrals",
    "ThetaEvaluator",
    "AnsatzVerification",
    "induced_detuning",
    "phase_integrals",
    "general_entries",
    "general_entries_series",
    "verify_ansatz",
    "zero_ansatz",
    "case1_ansatz",
    "case2_ansatz",
    "beta0_ansatz",
    "named_ansatz",
    "ansatz_from_table",
    "load_ansatz_table",
]

# Below this the r integrand switches to its Taylor form (tau units).
EPS_TAYLOR = 1e-6

# sin(2 phi_int) at or below this inside the window is treated as singular.
_SIN_FLOOR = 1e-14

# Below this tau the cot argument is integrated with a relative-tolerance
# quadrature; an absolute-tolerance cache would lose all relative accuracy.
_SMALL_TAU = 1e-4


@dataclass(frozen=True)
class ThetaAnsatz:
    """A generating function Theta(tau) with optional analytic shortcuts.

    Parameters
    ----------
    theta : callable
        Theta as a function of the rescaled time tau >= 0, in radians,
        vanishing at tau = 0. Must accept numpy arrays.
    label : str
        Catalog or user-facing name.
    theta_prime : callable, optional
        dTheta/dtau. A 5-point stencil substitutes when absent.
    phi_int_exact, r_int_exact, r_prime_exact : callable, optional
        Closed forms for the two phase integrals and for dr/dtau. When
        r_prime_exact is present the induced detuning is evaluated without
        the cotangent, which also removes its removable singularities.
    """

    theta: Callable
    label: str
    theta_prime: Callable | None = None
    phi_int_exact: Callable | None = None
    r_int_exact: Callable | None = None
    r_prime_exact: Callable | None = None

    def __post_init__(self):
        at_zero = float(np.asarray(self.theta(0.0)))
        if not abs(at_zero) <= 1e-12:
            raise ConfigError(
                f"ansatz {self.label!r} must vanish at tau=0, got {at_zero:g}")


@dataclass(frozen=True)
class PhaseIntegrals:
    """The two accumulated phases of the general entry representation."""

    phi_int: float
    r_int: float


def _numeric_theta_prime(theta: Callable, tau: float) -> float:
    h = 1e-6 * max(1.0, abs(tau))
    if tau >= 2.0 * h:
        f = [float(theta(tau + k * h)) for k in (-2.0, -1.0, 1.0, 2.0)]
        return (f[0] - 8.0 * f[1] + 8.0 * f[2] - f[3]) / (12.0 * h)
    # one-sided stencil: tau < 0 is outside the ansatz domain
    f = [float(theta(tau + k * h)) for k in range(5)]
    return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2]
            + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)


class ThetaEvaluator:
    """Cached tau-domain evaluation of one ansatz.

    Holds the quadrature frontiers for phi_int and the r tail so that
    sweeping an ascending grid costs O(N) quadrature segments. Not
    thread-safe; build one evaluator per evaluation session.
    """

    def __init__(self, ansatz: ThetaAnsatz, *, quad_tol: float = 1e-10,
                 eps_taylor: float = EPS_TAYLOR):
        if not quad_tol > 0:
            raise ConfigError("quad_tol must be > 0")
        if not 0 < eps_taylor <= 1e-3:
            raise ConfigError("eps_taylor must be in (0, 1e-3]")
        self.ansatz = ansatz
        self.quad_tol = quad_tol
        self.eps_taylor = eps_taylor
        self._phi_cum = CumulativeIntegral(
            lambda s: math.cos(float(ansatz.theta(s))), tol=quad_tol)
        self._r_tail = CumulativeIntegral(
            lambda u: self._r_integrand(eps_taylor + u), tol=quad_tol)
        self._r_head: float | None = None

    # -- pieces ------------------------------------------------------------

    def theta(self, tau: float) -> float:
        return float(self.ansatz.theta(float(tau)))

    def theta_prime(self, tau: float) -> float:
        if self.ansatz.theta_prime is not None:
            return float(self.ansatz.theta_prime(float(tau)))
        return _numeric_theta_prime(self.ansatz.theta, float(tau))

    def phi_int(self, tau: float) -> float:
        tau = float(tau)
        if tau < 0:
            raise ConfigError("tau must be >= 0")
        if self.ansatz.phi_int_exact is not None:
            return float(self.ansatz.phi_int_exact(tau))
        return self._phi_cum(tau)

    def _phi_small(self, tau: float) -> float:
        # relative-tolerance pass for tiny tau, where the cached absolute
        # tolerance would swamp the value
        val, _ = scipy.integrate.quad(
            lambda s: math.cos(float(self.ansatz.theta(s))), 0.0, tau,
            epsabs=0.0, epsrel=1e-12)
        return val

    def _r_integrand(self, s: float) -> float:
        th = self.theta(s)
        denom = math.sin(2.0 * self.phi_int(s))
        if abs(denom) <= _SIN_FLOOR:
            raise SingularAnsatzError(
                f"sin(2 phi_int) vanishes at tau={s:g} while "
                f"sin(Theta)={math.sin(th):g}; the ansatz "
                f"{self.ansatz.label!r} does not induce an integrable "
                "detuning there")
        return math.sin(th) / denom

    def _r_taylor(self, s: float) -> float:
        # Theta(s)/(2s), continued to Theta'(0)/2 at s=0
        if s == 0.0:
            return 0.5 * self.theta_prime(0.0)
        return self.theta(s) / (2.0 * s)

    def r_int(self, tau: float) -> float:
        tau = float(tau)
        if tau < 0:
            raise ConfigError("tau must be >= 0")
        if self.ansatz.r_int_exact is not None:
            return float(self.ansatz.r_int_exact(tau))
        if tau == 0.0:
            return 0.0
        eps = self.eps_taylor
        if tau <= eps:
            return adaptive_quad(self._r_taylor, 0.0, tau, tol=self.quad_tol)
        if self._r_head is None:
            self._r_head = adaptive_quad(self._r_taylor, 0.0, eps,
                                         tol=self.quad_tol)
        return self._r_head + self._r_tail(tau - eps)

    def detuning_ratio(self, tau: float) -> float:
        """Induced detuning in units of |omega| at this tau."""
        tau = float(tau)
        if tau < 0:
            raise ConfigError("tau must be >= 0")
        half_slope = 0.5 * self.theta_prime(tau)
        if self.ansatz.r_prime_exact is not None:
            # cot-free form: ratio = Theta'/2 + r'(tau) cos(2 phi_int)
            return half_slope + float(self.ansatz.r_prime_exact(tau)) \
                * math.cos(2.0 * self.phi_int(tau))
        if tau == 0.0:
            # sin(Theta) cot(2 phi_int) -> Theta'(0)/2 as tau -> 0
            return 2.0 * half_slope
        if tau < _SMALL_TAU and self.ansatz.phi_int_exact is None:
            phi = self._phi_small(tau)
        else:
            phi = self.phi_int(tau)
        s2 = math.sin(2.0 * phi)
        if s2 <= _SIN_FLOOR:
            raise SingularAnsatzError(
                f"sin(2 phi_int) = {s2:g} at tau={tau:g}; the induced "
                f"detuning of ansatz {self.ansatz.label!r} is singular there")
        return half_slope + math.sin(self.theta(tau)) * math.cos(2.0 * phi) / s2


# ---------------------------------------------------------------------------
# module-level operations (transient evaluator per call)

def _area_of(omega_mag: Callable) -> CumulativeIntegral:
    return CumulativeIntegral(lambda u: float(omega_mag(u)))


def induced_detuning(ansatz: ThetaAnsatz, profile_omega_mag: Callable,
                     t: float, *, quad_tol: float = 1e-10) -> float:
    """The detuning the ansatz demands at time t, given |omega|.

    Returns |omega(t)| times the dimensionless ratio at tau(t). A profile is
    exactly solvable by this ansatz iff its own detuning matches this value
    at all times in the window.
    """
    ev = ThetaEvaluator(ansatz, quad_tol=quad_tol)
    tau = _area_of(profile_omega_mag)(float(t))
    return float(profile_omega_mag(float(t))) * ev.detuning_ratio(tau)


def phase_integrals(ansatz: ThetaAnsatz, omega_mag: Callable, t: float,
                    quad_tol: float = 1e-10) -> PhaseIntegrals:
    """Both accumulated phases at time t, by adaptive quadrature."""
    ev = ThetaEvaluator(ansatz, quad_tol=quad_tol)
    tau = _area_of(omega_mag)(float(t))
    return PhaseIntegrals(phi_int=ev.phi_int(tau), r_int=ev.r_int(tau))


def _entry_pair(ev: ThetaEvaluator, tau: float, phi_t: float, phi_0: float):
    th = ev.theta(tau)
    phi_i = ev.phi_int(tau)
    r = ev.r_int(tau)
    a = math.cos(phi_i) * np.exp(1j * (0.5 * (phi_t - phi_0) - 0.5 * th - r))
    b = math.sin(phi_i) * np.exp(1j * (0.5 * (phi_t + phi_0) - 0.5 * th + r
                                       - 0.5 * math.pi))
    return complex(a), complex(b)


def general_entries(ansatz: ThetaAnsatz, profile: FieldProfile, t: float, *,
                    check: bool = True, check_tol: float = 1e-8,
                    quad_tol: float = 1e-10) -> EvolutionEntries:
    """Entries of the general solvable representation at time t.

    By default the profile's detuning is checked against the induced one on
    a grid over [0, t] (tolerance check_tol); a mismatch raises
    InconsistentProfileError, because evaluating the representation on a
    non-matching profile produces plausible-looking wrong answers.
    """
    t = float(t)
    ev = ThetaEvaluator(ansatz, quad_tol=quad_tol)
    taus = transverse_area_series(profile, np.array([0.0, t]) if t > 0
                                  else np.array([0.0]))
    if check:
        grid = np.linspace(0.0, t, 33) if t > 0 else np.array([0.0])
        gtaus = transverse_area_series(profile, grid)
        mag = np.asarray(profile.omega_mag(grid), dtype=float)
        induced = np.array([m * ev.detuning_ratio(x)
                            for m, x in zip(mag, gtaus)])
        dev = float(np.max(np.abs(np.asarray(detuning(profile, grid), dtype=float)
                                  - induced)))
        if not dev <= check_tol:
            raise InconsistentProfileError(
                f"profile {profile.label!r} detuning deviates from the one "
                f"induced by ansatz {ansatz.label!r} by {dev:.3e} "
                f"(> {check_tol:.1e}) on [0, {t:g}]")
    tau = float(taus[-1])
    a, b = _entry_pair(ev, tau, float(profile.phi_omega(t)),
                       float(profile.phi_omega(0.0)))
    return EvolutionEntries(a=a, b=b, t=t)


def general_entries_series(ansatz: ThetaAnsatz, profile: FieldProfile, ts, *,
                           check: bool = True, check_tol: float = 1e-8,
                           quad_tol: float = 1e-10):
    """Vectorized general entries over an ascending time grid."""
    ts = np.asarray(ts, dtype=float)
    if ts.size and (ts[0] < 0 or np.any(np.diff(ts) <= 0)):
        raise ConfigError("time grid must be ascending and start at t >= 0")
    ev = ThetaEvaluator(ansatz, quad_tol=quad_tol)
    taus = transverse_area_series(profile, ts)
    if check and ts.size:
        mag = np.asarray(profile.omega_mag(ts), dtype=float)
        induced = np.array([m * ev.detuning_ratio(x)
                            for m, x in zip(mag, taus)])
        dev = float(np.max(np.abs(np.asarray(detuning(profile, ts), dtype=float)
                                  - induced)))
        if not dev <= check_tol:
            raise InconsistentProfileError(
                f"profile {profile.label!r} detuning deviates from the one "
                f"induced by ansatz {ansatz.label!r} by {dev:.3e} "
                f"(> {check_tol:.1e})")
    phis = np.asarray(profile.phi_omega(ts), dtype=float)
    phi_0 = float(profile.phi_omega(0.0))
    a = np.empty(ts.size, dtype=complex)
    b = np.empty(ts.size, dtype=complex)
    for i, tau in enumerate(taus):
        a[i], b[i] = _entry_pair(ev, float(tau), float(phis[i]), phi_0)
    return a, b


@dataclass(frozen=True)
class AnsatzVerification:
    """Outcome of checking one ansatz against one profile.

    residual_max is the sup over the window of |profile detuning - induced
    detuning|; entries_deviation_max compares the closed representation with
    the numerical oracle. Failures are reported here, never raised.
    """

    ansatz_label: str
    profile_label: str
    t_max: float
    samples: int
    residual_max: float
    residual_tol: float
    entries_deviation_max: float
    entries_tol: float
    residual_ok: bool
    entries_ok: bool
    passed: bool
    note: str = ""


def _window_end(window) -> float:
    try:
        lo, hi = 0.0, float(window)
    except TypeError:
        lo, hi = float(window[0]), float(window[1])
    if lo != 0.0:
        raise ConfigError("verification window must start at t = 0")
    if not hi > 0:
        raise ConfigError("window end must be > 0")
    return hi


def verify_ansatz(ansatz: ThetaAnsatz, profile: FieldProfile, window,
                  tol: float = 1e-8, *, entries_tol: float = 1e-6,
                  samples: int = 257,
                  config: PropagatorConfig | None = None,
                  quad_tol: float = 1e-10) -> AnsatzVerification:
    """Report how well the ansatz solves the profile over the window.

    Two independent figures: the detuning residual (does the profile's
    detuning equal the induced one?) and the deviation of the closed
    representation from the numerical oracle. Numeric failures inside either
    figure are captured in the note rather than raised.
    """
    t_max = _window_end(window)
    grid = np.linspace(0.0, t_max, samples)
    ev = ThetaEvaluator(ansatz, quad_tol=quad_tol)
    notes = []

    residual = float("inf")
    try:
        taus = transverse_area_series(profile, grid)
        mag = np.asarray(profile.omega_mag(grid), dtype=float)
        induced = np.array([m * ev.detuning_ratio(x)
                            for m, x in zip(mag, taus)])
        residual = float(np.max(np.abs(
            np.asarray(detuning(profile, grid), dtype=float) - induced)))
    except NumericError as exc:
        notes.append(f"residual evaluation failed: {exc}")

    deviation = float("inf")
    try:
        a_closed, b_closed = general_entries_series(
            ansatz, profile, grid, check=False, quad_tol=quad_tol)
        if config is None:
            config = PropagatorConfig(
                scheme="commutator_free_4th",
                step=suggested_step(profile, t_max), samples=samples)
        else:
            config = replace(config, samples=samples)
        traj = propagate(profile, config, t_max)
        deviation = float(max(np.max(np.abs(a_closed - traj.a)),
                              np.max(np.abs(b_closed - traj.b))))
    except NumericError as exc:
        notes.append(f"entries comparison failed: {exc}")

    residual_ok = residual <= tol
    entries_ok = deviation <= entries_tol
    return AnsatzVerification(
        ansatz_label=ansatz.label, profile_label=profile.label,
        t_max=t_max, samples=samples,
        residual_max=residual, residual_tol=tol,
        entries_deviation_max=deviation, entries_tol=entries_tol,
        residual_ok=residual_ok, entries_ok=entries_ok,
        passed=residual_ok and entries_ok, note="; ".join(notes))


# ---------------------------------------------------------------------------
# ansatz catalog

def _as_float_or_array(x, fn):
    arr = np.asarray(x, dtype=float)
    out = fn(arr)
    return float(out) if arr.ndim == 0 else out


def zero_ansatz(label: str = "zero") -> ThetaAnsatz:
    """Theta identically 0: the generalized-resonance member."""
    return ThetaAnsatz(
        theta=lambda x: _as_float_or_array(x, np.zeros_like),
        label=label,
        theta_prime=lambda x: _as_float_or_array(x, np.zeros_like),
        phi_int_exact=lambda x: _as_float_or_array(x, lambda v: v + 0.0),
        r_int_exact=lambda x: _as_float_or_array(x, np.zeros_like),
        r_prime_exact=lambda x: _as_float_or_array(x, np.zeros_like),
    )


def case1_ansatz() -> ThetaAnsatz:
    """The half-flip family: Theta = 2 atan(2 tau / sqrt(2 + 4 tau^2)).

    Theta saturates at pi as tau grows, the flip probability at 1/2; the
    induced detuning decays like 1/tau. The phase integrals are left to the
    generic quadrature on purpose: the closed elliptic form lives in the
    closed-forms module and the two routes cross-check each other.
    """
    def theta(x):
        return _as_float_or_array(
            x, lambda v: 2.0 * np.arctan(2.0 * v / np.sqrt(2.0 + 4.0 * v ** 2)))

    def theta_prime(x):
        return _as_float_or_array(
            x, lambda v: 4.0 / ((1.0 + 4.0 * v ** 2) * np.sqrt(2.0 + 4.0 * v ** 2)))

    return ThetaAnsatz(theta=theta, label="case1", theta_prime=theta_prime)


def case2_ansatz() -> ThetaAnsatz:
    """The full-inversion family: Theta = 2 atan(tau / sqrt(2 + tau^2))."""
    def theta(x):
        return _as_float_or_array(
            x, lambda v: 2.0 * np.arctan(v / np.sqrt(2.0 + v ** 2)))

    def theta_prime(x):
        return _as_float_or_array(
            x, lambda v: 2.0 / ((1.0 + v ** 2) * np.sqrt(2.0 + v ** 2)))

    return ThetaAnsatz(theta=theta, label="case2", theta_prime=theta_prime)


def beta0_ansatz(beta0: float) -> ThetaAnsatz:
    """The constant-ratio family: detuning locked to beta0 |omega|.

    Theta is the continuous branch of atan((beta0/E) tan(E tau)) with
    E = sqrt(1 + beta0^2); all the phase quantities close analytically,
    including dr/dtau = Theta'/2, so the induced detuning evaluates without
    the cotangent and its removable zeros. Any real beta0 is accepted;
    beta0 = 0 degenerates to the zero ansatz.
    """
    beta0 = float(beta0)
    if beta0 == 0.0:
        return zero_ansatz(label="beta0=0")
    stretch = math.sqrt(1.0 + beta0 * beta0)
    slope = beta0 / stretch
    sign = 1.0 if beta0 > 0 else -1.0

    def theta(x):
        def f(v):
            big = stretch * v
            m = np.round(big / np.pi)
            return sign * m * np.pi + np.arctan(slope * np.tan(big - m * np.pi))
        return _as_float_or_array(x, f)

    def theta_prime(x):
        def f(v):
            big = stretch * v
            return slope * stretch / (np.cos(big) ** 2
                                      + (slope * np.sin(big)) ** 2)
        return _as_float_or_array(x, f)

    def phi_int_exact(x):
        return _as_float_or_array(
            x, lambda v: np.arcsin(np.sin(stretch * v) / stretch))

    return ThetaAnsatz(
        theta=theta, label=f"beta0={beta0:g}", theta_prime=theta_prime,
        phi_int_exact=phi_int_exact,
        r_int_exact=lambda x: 0.5 * np.asarray(theta(x)),
        r_prime_exact=lambda x: 0.5 * np.asarray(theta_prime(x)),
    )


_NAMED = ("zero", "case1", "case2")


def named_ansatz(name: str) -> ThetaAnsatz:
    """Look up a catalog ansatz by name ('zero', 'case1', 'case2')."""
    if name == "zero":
        return zero_ansatz()
    if name == "case1":
        return case1_ansatz()
    if name == "case2":
        return case2_ansatz()
    raise ConfigError(
        f"unknown ansatz {name!r}; choose from {', '.join(_NAMED)} "
        "or supply a sampled table")


def ansatz_from_table(taus, thetas, label: str = "table") -> ThetaAnsatz:
    """Build an ansatz from sampled (tau, Theta) pairs.

    Linear interpolation between samples; evaluation beyond the last node
    holds the final value. tau must be strictly ascending from 0 and the
    first Theta must be 0.
    """
    taus = np.asarray(taus, dtype=float)
    thetas = np.asarray(thetas, dtype=float)
    if taus.ndim != 1 or taus.shape != thetas.shape or taus.size < 2:
        raise ConfigError("need matching 1-d tau/theta arrays, length >= 2")
    if not (np.all(np.isfinite(taus)) and np.all(np.isfinite(thetas))):
        raise ConfigError("tau/theta samples must be finite")
    if taus[0] != 0.0 or np.any(np.diff(taus) <= 0):
        raise ConfigError("tau samples must ascend strictly from 0")
    if thetas[0] != 0.0:
        raise ConfigError("Theta must be 0 at tau = 0")

    def theta(x):
        return _as_float_or_array(x, lambda v: np.interp(v, taus, thetas))

    return ThetaAnsatz(theta=theta, label=label)


def load_ansatz_table(path) -> ThetaAnsatz:
    """Read a two-column CSV (tau, theta); header row optional."""
    taus, thetas = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                x, y = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if not taus:
                    continue  # header row
                raise ConfigError(f"malformed table row: {row!r}")
            taus.append(x)
            thetas.append(y)
    if len(taus) < 2:
        raise ConfigError(f"no usable (tau, theta) rows in {path}")
    return ansatz_from_table(taus, thetas,
                             label=os.path.splitext(os.path.basename(str(path)))[0])
