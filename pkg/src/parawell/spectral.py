"""Band-limited fields on periodic boxes and weighted spectral norms.

Conventions
-----------
A field is stored by its complex Fourier coefficients ``c[m]`` on an
FFT-ordered integer mode grid; the represented function is ::

    w(x) = sum_m c[m] * exp(i * k_m . x),      k_m[i] = 2*pi*m[i] / L[i].

All norms are quadrature forms over the mode set: each mode carries the
spectral cell measure ``prod_i (2*pi / L_i)`` and the squared norm is the
weighted coefficient sum ::

    ||w||^2 = sum_m  W(k_m)^2 * |c[m]|^2 * cell,

with ``W`` either the anisotropic weight ``r^s * phi(r)``,
``r = (1 + |xi|^2 + |eta|)^(1/2)`` (the last axis is time-like and its
frequency enters through ``|eta|``, linearly), or the isotropic weight
``<xi>^s * phi(<xi>)``, ``<xi> = (1 + |xi|^2)^(1/2)``.  With ``phi == 1``
and ``s = 0`` this is the spectral L2 norm in the same convention.

Values attributed to functions on bounded domains are equivalent-norm
surrogates: they are norms of one explicit periodic extension, never the
infimum over all extensions, and callers label them as such.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NormRangeError
from .weights import RegularityIndex, SlowlyVaryingFn


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients on a periodic box.

    ``coeffs`` has one axis per box dimension in FFT index order
    (frequencies ``0..n/2-1, -n/2..-1``); ``periods`` are the box edge
    lengths.  When ``time_axis`` is set the last axis is time-like.
    """

    coeffs: np.ndarray
    periods: tuple[float, ...]
    time_axis: bool = True

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.coeffs, dtype=complex))
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "periods", tuple(float(p) for p in self.periods))
        if arr.ndim != len(self.periods):
            raise ValueError("coefficient rank must match number of periods")
        if arr.ndim < 1:
            raise ValueError("field needs at least one axis")
        if any(n % 2 != 0 or n < 2 for n in arr.shape):
            raise ValueError("per-dimension mode counts must be even and >= 2")
        if any(p <= 0 for p in self.periods):
            raise ValueError("periods must be positive")
        if self.time_axis and arr.ndim - 1 < 0:
            raise ValueError("a time-like field needs a time axis")

    # ------------------------------------------------------------------

    @property
    def grid(self) -> tuple[int, ...]:
        return self.coeffs.shape

    @property
    def space_dims(self) -> int:
        return self.coeffs.ndim - (1 if self.time_axis else 0)

    def wavenumber_axes(self) -> list[np.ndarray]:
        """Physical wavenumbers per axis, FFT ordered (2*pi*m/L scaling)."""
        return [2.0 * np.pi * np.fft.fftfreq(n, d=1.0) * n / L
                for n, L in zip(self.grid, self.periods)]

    @property
    def cell_measure(self) -> float:
        return float(np.prod([2.0 * np.pi / L for L in self.periods]))

    def scaled(self, c) -> "SpectralField":
        return SpectralField(self.coeffs * c, self.periods, self.time_axis)

    def values(self) -> np.ndarray:
        """Collocation values on the uniform grid (inverse transform)."""
        return np.fft.ifftn(self.coeffs) * self.coeffs.size

    # ------------------------------------------------------------------

    @classmethod
    def zeros(cls, grid, periods, time_axis=True) -> "SpectralField":
        return cls(np.zeros(tuple(grid), dtype=complex), tuple(periods), time_axis)

    @classmethod
    def single_mode(cls, grid, periods, mode, amplitude=1.0,
                    time_axis=True) -> "SpectralField":
        """A field with one nonzero coefficient at integer mode ``mode``."""
        field = cls.zeros(grid, periods, time_axis)
        idx = tuple(int(m) % n for m, n in zip(mode, field.grid))
        field.coeffs[idx] = complex(amplitude)
        return field

    @classmethod
    def from_values(cls, values, periods, time_axis=True) -> "SpectralField":
        values = np.asarray(values, dtype=complex)
        return cls(np.fft.fftn(values) / values.size, tuple(periods), time_axis)


def random_field(grid, periods, rng: np.random.Generator, *, decay: float = 0.0,
                 time_axis: bool = True) -> SpectralField:
    """Complex Gaussian coefficients, optionally shaped by ``r^-decay``."""
    shape = tuple(grid)
    coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    field = SpectralField(coeffs, periods, time_axis)
    if decay:
        r = _aniso_r(field) if time_axis else _iso_r(field)
        field = SpectralField(coeffs * r ** (-decay), periods, time_axis)
    return field


# ----------------------------------------------------------------------
# weights and norms


def aniso_weight(xi, eta: float, idx: RegularityIndex) -> float:
    """Anisotropic weight ``r^s * phi(r)`` at a single frequency point."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    r = math.sqrt(1.0 + float(np.dot(xi, xi)) + abs(float(eta)))
    return r ** idx.s * idx.phi(r)


def _aniso_r(field: SpectralField) -> np.ndarray:
    axes = field.wavenumber_axes()
    mesh = np.meshgrid(*axes, indexing="ij", sparse=True)
    r2 = 1.0 + np.abs(mesh[-1])
    for m in mesh[:-1]:
        r2 = r2 + m ** 2
    return np.sqrt(r2)


def _iso_r(field: SpectralField) -> np.ndarray:
    axes = field.wavenumber_axes()
    mesh = np.meshgrid(*axes, indexing="ij", sparse=True)
    r2 = np.zeros(field.grid)
    r2 += 1.0
    for m in mesh:
        r2 = r2 + m ** 2
    return np.sqrt(r2)


def _weighted_sum(field: SpectralField, r: np.ndarray,
                  idx: RegularityIndex) -> float:
    with np.errstate(over="ignore", invalid="ignore"):
        weight = r ** idx.s * idx.phi(r)
        contrib = (weight * np.abs(field.coeffs)) ** 2 * field.cell_measure
    if not np.all(np.isfinite(contrib)):
        bad = np.argwhere(~np.isfinite(contrib))[0]
        mode = tuple(int(m) for m in bad)
        raise NormRangeError(
            f"norm overflow at mode {mode}; reduce the order or the grid",
            mode=mode)
    return float(np.sqrt(contrib.sum()))


def aniso_norm(field: SpectralField, idx: RegularityIndex) -> float:
    """Anisotropic weighted norm; zero iff the field is zero."""
    if not field.time_axis:
        raise ValueError("anisotropic norm needs a time-like last axis")
    return _weighted_sum(field, _aniso_r(field), idx)


def iso_norm(field: SpectralField, idx: RegularityIndex) -> float:
    """Isotropic weighted norm for space-only fields."""
    if field.time_axis:
        raise ValueError("isotropic norm is defined for space-only fields")
    return _weighted_sum(field, _iso_r(field), idx)


def l2_norm(field: SpectralField) -> float:
    """Spectral L2 norm in the cell-measure convention."""
    return float(np.sqrt((np.abs(field.coeffs) ** 2).sum() * field.cell_measure))


def parseval_roundtrip_error(field: SpectralField) -> float:
    """Relative gap between coefficient-side and collocation-side L2."""
    vals = field.values()
    l2c = l2_norm(field)
    l2v = math.sqrt(float((np.abs(vals) ** 2).mean()) * field.cell_measure)
    return abs(l2v - l2c) / max(l2c, np.finfo(float).tiny)


# ----------------------------------------------------------------------
# embedding constants


@dataclass(frozen=True)
class EmbeddingConstants:
    """Grid-searched constants for the chained embedding inequalities.

    On fields band-limited to ``r <= r_max`` these bound
    ``||.||_{s0} <= c_low * ||.||_{s,phi}`` and
    ``||.||_{s,phi} <= c_high * ||.||_{s1}``.  The band limit is part of
    the report because the suprema are over ``[1, r_max]`` only.
    """

    c_low: float
    c_high: float
    r_max: float
    r_at_low: float
    r_at_high: float
    grid_points: int


def embedding_constants(s0: float, idx: RegularityIndex, s1: float,
                        r_max: float, grid_points: int = 4096) -> EmbeddingConstants:
    if not (s0 < idx.s < s1):
        raise ValueError("need s0 < s < s1")
    if r_max < 1.0:
        raise ValueError("band limit must be >= 1")
    grid = np.geomspace(1.0, max(r_max, 1.0 + 1e-12), int(grid_points))
    p = np.asarray(idx.phi(grid))
    high = grid ** (idx.s - s1) * p
    low = grid ** (s0 - idx.s) / p
    ih, il = int(np.argmax(high)), int(np.argmax(low))
    return EmbeddingConstants(
        c_low=float(low[il]), c_high=float(high[ih]), r_max=float(r_max),
        r_at_low=float(grid[il]), r_at_high=float(grid[ih]),
        grid_points=int(grid_points))


# ----------------------------------------------------------------------
# serialization

_MAGIC = "#parawell-field v1"


def save_field(field: SpectralField, path) -> None:
    """Write a field as text: magic line, JSON header, then one
    ``re im`` pair per coefficient in row-major FFT index order."""
    header = json.dumps({"grid": list(field.grid),
                         "periods": list(field.periods),
                         "time_axis": field.time_axis}, sort_keys=True)
    flat = field.coeffs.reshape(-1)
    lines = [_MAGIC, header]
    lines.extend(f"{float(c.real)!r} {float(c.imag)!r}" for c in flat)
    Path(path).write_text("\n".join(lines) + "\n")


def load_field(path) -> SpectralField:
    text = Path(path).read_text().splitlines()
    if not text or text[0].strip() != _MAGIC:
        raise ValueError(f"{path}: not a spectral-field container")
    header = json.loads(text[1])
    grid = tuple(int(n) for n in header["grid"])
    count = int(np.prod(grid))
    rows = [line.split() for line in text[2:2 + count]]
    if len(rows) != count:
        raise ValueError(f"{path}: expected {count} coefficient rows")
    flat = np.array([complex(float(a), float(b)) for a, b in rows])
    return SpectralField(flat.reshape(grid),
                         tuple(float(p) for p in header["periods"]),
                         bool(header["time_axis"]))
