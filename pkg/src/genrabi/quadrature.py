"""Adaptive quadrature helpers with a monotone-frontier cache.

Trajectory evaluation asks for integrals from 0 to each of N ascending
sample points. Recomputing from 0 every time is O(N^2) integrand work, so
``CumulativeIntegral`` caches values at previously visited endpoints and
integrates only the increment beyond the cached frontier.
"""

from __future__ import annotations

import bisect
from typing import Callable

from scipy.integrate import quad

from .errors import QuadratureError

__all__ = ["adaptive_quad", "CumulativeIntegral"]

# QUADPACK cannot do much better than ~1e-13 relative; keep a floor so a
# caller-supplied absolute tolerance of 0 does not make quad error out.
_MIN_EPSREL = 1e-12


def adaptive_quad(fn: Callable[[float], float], lo: float, hi: float,
                  tol: float = 1e-10) -> float:
    """Integrate fn over [lo, hi] to absolute tolerance tol.

    Raises QuadratureError if the adaptive scheme reports non-convergence,
    carrying the achieved estimate and error bound in the message.
    """
    if lo == hi:
        return 0.0
    value, abserr, info, *tail = quad(
        fn, lo, hi, epsabs=tol, epsrel=_MIN_EPSREL, limit=200, full_output=1)
    if tail:
        message = tail[0]
        raise QuadratureError(
            f"quadrature on [{lo:g}, {hi:g}] did not converge: {message} "
            f"(estimate {value:.6e}, error bound {abserr:.3e})")
    return value


class CumulativeIntegral:
    """Cached x -> integral of fn from 0 to x, for x >= 0.

    Ascending queries extend a frontier node list, so sweeping N trajectory
    samples costs N short adaptive integrations. Queries behind the frontier
    integrate from the nearest cached node below without adding nodes, which
    keeps the cache small when an outer adaptive integrator samples
    non-monotonically.
    """

    def __init__(self, fn: Callable[[float], float], tol: float = 1e-10):
        self._fn = fn
        self._tol = tol
        self._nodes = [0.0]
        self._values = [0.0]

    def __call__(self, x: float) -> float:
        if x < 0.0:
            raise ValueError("cumulative integral is defined for x >= 0")
        if x == 0.0:
            return 0.0
        nodes = self._nodes
        if x >= nodes[-1]:
            increment = adaptive_quad(self._fn, nodes[-1], x, self._tol)
            value = self._values[-1] + increment
            if x > nodes[-1]:
                nodes.append(x)
                self._values.append(value)
            return value
        i = bisect.bisect_right(nodes, x) - 1
        if nodes[i] == x:
            return self._values[i]
        return self._values[i] + adaptive_quad(self._fn, nodes[i], x, self._tol)
