"""Reflection extension of polynomial data to periodic boxes.

Norms of functions given on an interval (or time slab) are represented by
the spectral norm of one explicit extension to a periodic box of twice the
length: values on the ghost half are a fixed-order reflection
``sum_i c_i * u(beta_i * y)`` (derivative-matching weights, beta_i = 1/i)
rolled off by a smooth plateau cutoff so the periodic wrap stays smooth.
The extension is C^(order-1) at the interfaces, so the surrogate norm is
usable for regularity orders up to about ``order - 1/2``; all values
derived from it are equivalent-norm surrogates, never infimum norms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polynomials import Poly
from .spectral import SpectralField

DEFAULT_ORDER = 4

# plateau cutoff: identically 1 below _CUT_A, 0 above _CUT_B (fractions of
# the ghost width); the transition is C-infinity
_CUT_A = 0.25
_CUT_B = 0.90


def reflection_weights(order: int = DEFAULT_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Stretch factors ``beta_i = 1/i`` and weights ``c_i`` solving
    ``sum_i c_i * beta_i^j = (-1)^j`` for ``j < order`` (derivative matching
    at the interface)."""
    if order < 1:
        raise ValueError("reflection order must be >= 1")
    betas = 1.0 / np.arange(1, order + 1)
    rows = np.vander(betas, order, increasing=True).T
    rhs = (-1.0) ** np.arange(order)
    return betas, np.linalg.solve(rows, rhs)


def smooth_cutoff(y: np.ndarray) -> np.ndarray:
    """C-infinity plateau: 1 for ``y <= _CUT_A``, 0 for ``y >= _CUT_B``."""
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape)
    out[y <= _CUT_A] = 1.0
    mid = (y > _CUT_A) & (y < _CUT_B)
    if np.any(mid):
        u = (y[mid] - _CUT_A) / (_CUT_B - _CUT_A)
        g = np.exp(-1.0 / u)
        h = np.exp(-1.0 / (1.0 - u))
        out[mid] = h / (g + h)
    return out


@dataclass(frozen=True)
class AxisSpec:
    """How one box axis relates to the domain: ``interval`` and ``time``
    axes carry data on ``[0, length]`` extended to period ``2 * length``;
    ``periodic`` axes carry genuinely periodic content."""

    kind: str
    length: float

    def __post_init__(self):
        if self.kind not in ("interval", "periodic", "time"):
            raise ValueError(f"unknown axis kind {self.kind!r}")
        if self.length <= 0:
            raise ValueError("axis length must be positive")

    @property
    def period(self) -> float:
        return self.length if self.kind == "periodic" else 2.0 * self.length


def _axis_branches(coord: np.ndarray, axis: AxisSpec, betas, weights):
    """Decompose box coordinates into (weight array, interior coordinate)
    branches implementing the two-sided reflection on the ghost half."""
    L = axis.length
    if axis.kind == "periodic":
        return [(np.ones(coord.shape), coord)]
    w = 0.5 * L  # ghost-side cutoff width; beta <= 1 keeps arguments inside
    inside = coord <= L
    branches = []
    base = np.where(inside, 1.0, 0.0)
    branches.append((base, np.clip(coord, 0.0, L)))
    d_hi = coord - L          # distance past the interface at x = L
    d_lo = axis.period - coord  # distance to the wrap point (x = 0 image)
    for beta, c in zip(betas, weights):
        w_hi = np.where(inside, 0.0, c * smooth_cutoff(d_hi / w))
        branches.append((w_hi, np.clip(L - beta * d_hi, 0.0, L)))
        w_lo = np.where(inside, 0.0, c * smooth_cutoff(d_lo / w))
        branches.append((w_lo, np.clip(beta * d_lo, 0.0, L)))
    return branches


def polynomial_to_field(poly: Poly, axes: list[AxisSpec], grid, *,
                        order: int = DEFAULT_ORDER,
                        time_axis: bool = True) -> SpectralField:
    """Sample the reflected extension of a polynomial on a periodic box and
    transform to Fourier coefficients.

    ``axes`` describe the box axes in variable order; when ``time_axis`` is
    set the last axis is the time slab and the polynomial's ``t`` variable
    maps to it, otherwise the polynomial must be t-free.  The polynomial
    must be constant along ``periodic`` axes (non-periodic content cannot
    be extended there).
    """
    grid = tuple(int(g) for g in grid)
    if len(grid) != len(axes):
        raise ValueError("grid rank must match the axis list")
    nspace = len(axes) - (1 if time_axis else 0)
    if poly.nvars != nspace:
        raise ValueError("polynomial variable count must match space axes")
    if not time_axis and poly.deg_t() > 0:
        raise ValueError("space-only extension needs a t-free polynomial")
    for i, axis in enumerate(axes[:nspace]):
        if axis.kind == "periodic" and poly.deg_x(i) > 0:
            raise ValueError(
                f"polynomial depends on periodic axis {i}; only constant "
                "content is extendable there")
    betas, weights = reflection_weights(order)
    coords = [np.linspace(0.0, ax.period, g, endpoint=False)
              for ax, g in zip(axes, grid)]
    mesh = np.meshgrid(*coords, indexing="ij")
    branch_lists = [_axis_branches(mesh[i], ax, betas, weights)
                    for i, ax in enumerate(axes)]
    values = np.zeros(grid, dtype=complex)
    # tensor combination of per-axis branches; axes without reflection
    # contribute a single branch so the product stays small
    def accumulate(i, weight, pts):
        if i == len(axes):
            if time_axis:
                xs, tt = pts[:-1], pts[-1]
            else:
                xs, tt = pts, 0.0
            nonlocal values
            values = values + weight * poly.eval(xs, tt)
            return
        for wb, cb in branch_lists[i]:
            wnew = weight * wb
            if np.all(wnew == 0.0):
                continue
            accumulate(i + 1, wnew, pts + [cb])

    accumulate(0, np.ones(grid), [])
    periods = tuple(ax.period for ax in axes)
    return SpectralField.from_values(values, periods, time_axis=time_axis)
