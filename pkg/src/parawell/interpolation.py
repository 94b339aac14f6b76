"""Interpolation with a function parameter, on the diagonal weight model.

Between two weighted spectral norms with weights ``w0 <= w1`` the
interpolated norm carries the weight ``w0 * psi(w1 / w0)``, where the
interpolation parameter is ::

    psi(r) = r^((s - s0)/(s1 - s0)) * phi(r^(1/(s1 - s0)))   for r >= 1,
    psi(r) = phi(1)                                          for 0 < r < 1.

On power-law weight pairs this reproduces the generalized weight
``r^s * phi(r)`` exactly, which is the identity the norm-equivalence
statements reduce to on spectral models.  Full operator-theoretic
interpolation of abstract Hilbert pairs is out of scope; only this
diagonal model is implemented, and it is exactly testable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .weights import SlowlyVaryingFn

_DEFAULT_GRID = (1.0, 1e8, 200)


@dataclass(frozen=True)
class InterpolationParam:
    """Orders ``s0 < s < s1`` and the weight parameter ``phi``."""

    s0: float
    s: float
    s1: float
    phi: SlowlyVaryingFn

    def __post_init__(self):
        if not (self.s0 < self.s < self.s1):
            raise ValueError("need strict ordering s0 < s < s1")
        if not all(math.isfinite(v) for v in (self.s0, self.s, self.s1)):
            raise ValueError("orders must be finite")


def psi_eval(param: InterpolationParam, r):
    """Evaluate the interpolation parameter at ``r > 0`` (scalar or array)."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("interpolation parameter is defined for r > 0")
    d = param.s1 - param.s0
    frac = (param.s - param.s0) / d
    out = np.empty(arr.shape)
    lo = arr < 1.0
    if np.any(lo):
        out[lo] = param.phi(1.0)
    hi = ~lo
    if np.any(hi):
        rh = arr[hi]
        out[hi] = rh ** frac * param.phi(np.maximum(rh ** (1.0 / d), 1.0))
    if np.ndim(r) == 0:
        return float(out)
    return out


def interpolate_diag(w0, w1, param: InterpolationParam) -> np.ndarray:
    """Diagonal-pair interpolation ``w0 * psi(w1 / w0)`` of weight sequences.

    Requires a regular pair: ``w1 >= w0 > 0`` elementwise.
    """
    w0 = np.asarray(w0, dtype=float)
    w1 = np.asarray(w1, dtype=float)
    if w0.shape != w1.shape:
        raise ValueError("weight sequences must have equal length")
    if np.any(w0 <= 0.0) or np.any(w1 < w0):
        raise ValueError("need a regular pair: w1 >= w0 > 0 elementwise")
    return w0 * psi_eval(param, w1 / w0)


def verify_weight_identity(param: InterpolationParam, r_grid) -> float:
    """Max relative deviation of ``r^s0 * psi(r^(s1-s0))`` from
    ``r^s * phi(r)`` over the grid.  The identity is exact algebraically;
    the returned value measures floating-point noise only."""
    r = np.asarray(r_grid, dtype=float)
    if r.size == 0:
        raise ValueError("grid is empty")
    if np.any(r < 1.0):
        raise DomainError("identity grid must lie in [1, inf)")
    lhs = r ** param.s0 * psi_eval(param, r ** (param.s1 - param.s0))
    rhs = r ** param.s * np.asarray(param.phi(r))
    return float(np.max(np.abs(lhs - rhs) / rhs))


def default_identity_grid(r_max: float = _DEFAULT_GRID[1],
                          points: int = _DEFAULT_GRID[2]) -> np.ndarray:
    return np.geomspace(1.0, r_max, int(points))


@dataclass(frozen=True)
class MidpointWeightCheck:
    """Result of checking that the square-root (midpoint) parameter applied
    to the ``(s - eps, s + eps)`` weight pair reproduces the ``s``-weight."""

    s: float
    eps: float
    max_deviation: float
    weights: np.ndarray


def midpoint_space_weights(s: float, eps: float, phi: SlowlyVaryingFn,
                           r_grid=None) -> MidpointWeightCheck:
    """Check ``sqrt(w_{s-eps} * w_{s+eps}) = w_s`` for ``w_sig = r^sig phi(r)``.

    This is the weight-level content of defining the exceptional-order data
    space by midpoint interpolation of its neighbors; the identity holds
    exactly because ``phi`` factors out of the geometric mean.
    """
    if not (0.0 < eps < 0.5):
        raise ValueError("eps must lie in (0, 1/2)")
    if s - eps <= 2.0:
        raise ValueError("need s - eps > 2")
    r = default_identity_grid() if r_grid is None else np.asarray(r_grid, float)
    p = np.asarray(phi(r))
    mid = np.sqrt((r ** (s - eps) * p) * (r ** (s + eps) * p))
    ref = r ** s * p
    dev = float(np.max(np.abs(mid - ref) / ref))
    return MidpointWeightCheck(s=float(s), eps=float(eps), max_deviation=dev,
                               weights=mid)


def midpoint_eps_independence(s: float, eps_values, phi: SlowlyVaryingFn,
                              r_grid=None) -> tuple[float, float]:
    """Run :func:`midpoint_space_weights` over several ``eps`` and return
    ``(max identity deviation, max cross-eps deviation)``; both vanish up
    to rounding because the midpoint weight does not depend on ``eps``."""
    eps_values = list(eps_values)
    if not eps_values:
        raise ValueError("need at least one eps")
    checks = [midpoint_space_weights(s, e, phi, r_grid) for e in eps_values]
    ident = max(c.max_deviation for c in checks)
    cross = 0.0
    base = checks[0].weights
    for c in checks[1:]:
        cross = max(cross, float(np.max(np.abs(c.weights - base) / base)))
    return ident, cross
