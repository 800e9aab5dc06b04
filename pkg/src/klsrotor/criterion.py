"""Long-range-order criterion ``sqrt(I J) > I_d``.

``I_d = (2 pi)^{-d} int_{[-pi,pi]^d} E(k)^{-1/2} dk`` with ``E(k) = d - sum cos k_i``.
The integrand is even in every coordinate, so the quadrature runs over
``[0, pi]^d`` on midpoint grids, which never touch ``k = 0``.  Near the
origin the integrand behaves like ``|k|^{-1}``; the midpoint error is then
dominated by a ``C h^{d-1}`` term, which one Richardson step removes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, UsageError

START_CELLS = 8
MAX_CELLS = {1: 1 << 22, 2: 1 << 13, 3: 1 << 9}
DIVERGENCE_STEPS = 4


@dataclass(frozen=True)
class IntegralResult:
    value: float
    errorEstimate: float
    diverged: bool
    refinementTrace: list = field(default_factory=list)


def midpoint_mean(d: int, n: int) -> float:
    """Mean of ``E^{-1/2}`` over the ``n^d`` midpoint nodes of ``[0, pi]^d``."""
    c = np.cos((np.arange(n) + 0.5) * np.pi / n)
    if d == 1:
        return float(np.mean(1.0 / np.sqrt(1.0 - c)))
    base = d - c
    # sweep the leading axis; the remaining d-1 axes are broadcast
    rest = np.zeros((1,) * (d - 1))
    for axis in range(d - 1):
        shape = [1] * (d - 1)
        shape[axis] = n
        rest = rest + c.reshape(shape)
    total = 0.0
    for b in base:
        total += float(np.sum(1.0 / np.sqrt(b - rest)))
    return total / n**d


def integral_Id(d: int, tol: float = 1e-6, max_cells: int | None = None) -> IntegralResult:
    """Dyadic midpoint refinement with Richardson extrapolation of order ``d - 1``.

    Stops when two successive extrapolated values agree within ``tol``.
    Divergence is declared after four consecutive refinements that each
    raise the value by more than ``tol`` without the increments contracting.
    """
    if d < 1:
        raise UsageError("dimension must be >= 1")
    if not tol > 0:
        raise UsageError("tol must be positive")
    if max_cells is None:
        max_cells = MAX_CELLS.get(d, 1 << max(2, 27 // d))
    p = d - 1
    trace = []
    prev_raw = None
    prev_val = None
    rising = 0
    last_inc = None
    n = START_CELLS
    while n <= max_cells:
        raw = midpoint_mean(d, n)
        trace.append((n, raw))
        if prev_raw is not None:
            val = raw if p == 0 else (2**p * raw - prev_raw) / (2**p - 1)
            if prev_val is not None:
                inc = val - prev_val
                if abs(inc) <= tol:
                    return IntegralResult(val, abs(inc), False, trace)
                growing = inc > tol and (last_inc is None or inc > 0.75 * last_inc)
                rising = rising + 1 if growing else 0
                last_inc = inc
                if rising >= DIVERGENCE_STEPS:
                    return IntegralResult(math.inf, math.inf, True, trace)
            prev_val = val
        prev_raw = raw
        n *= 2
    err = abs(last_inc) if last_inc is not None else math.inf
    raise ConvergenceError(
        f"I_{d} not resolved to tol={tol:g} within {max_cells} cells per axis; "
        f"best value {prev_val!r} (last change {err:.2e})", achieved=prev_val)


def brillouin_grid(d: int, N: int) -> np.ndarray:
    """Momenta ``pi m / N``, ``m = -N+1..N`` per axis, in lattice site order."""
    ks = np.pi * np.arange(-N + 1, N + 1) / N
    return np.stack(np.meshgrid(*([ks] * d), indexing="ij"), axis=-1).reshape(-1, d)


def finite_mode_sum(d: int, N: int) -> float:
    """``|Lambda|^{-1} sum_{k != 0} E(k)^{-1/2}`` on the edge-``2N`` grid."""
    if d < 1 or N < 1:
        raise UsageError("need d >= 1 and N >= 1")
    k = brillouin_grid(d, N)
    eps = d - np.cos(k).sum(axis=1)
    nz = np.any(k != 0.0, axis=1)
    return float(np.sum(1.0 / np.sqrt(eps[nz])) / len(k))


@dataclass(frozen=True)
class Verdict:
    holds: bool
    lowerBoundC: float
    S: float
    sqrtIJ: float


def lro_verdict(Ival: float, Jval: float, d: int, N: int | None = None,
                tol: float = 1e-7) -> Verdict:
    """``sqrt(I J) > S`` with ``S`` the finite mode sum (or ``I_d`` when ``N`` is None).

    ``lowerBoundC = (sqrt(IJ) - S) / (2 sqrt(IJ))`` bounds ``g_0 / |Lambda|`` from
    below when positive; the criterion is sufficient only.
    """
    if not (Ival > 0 and Jval > 0):
        raise UsageError("I and J must be positive")
    if N is None:
        S = integral_Id(d, tol).value
    else:
        S = finite_mode_sum(d, N)
    r = math.sqrt(Ival * Jval)
    if math.isinf(S):
        return Verdict(False, -math.inf, S, r)
    c = (r - S) / (2.0 * r)
    return Verdict(r > S, c, S, r)
