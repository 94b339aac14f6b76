"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import math

import hypothesis
import numpy as np
import pytest

from parawell import DomainDescriptor, ProblemSpec, SpectralField, eval_phi
from parawell.polynomials import Poly

hypothesis.settings.register_profile("ci", deadline=None, max_examples=50)
hypothesis.settings.load_profile("ci")


def unit_alpha(n: int, i: int, order: int = 1) -> tuple[int, ...]:
    return tuple(order if m == i else 0 for m in range(n))


def heat_spec(N=2, n=2, *, sign=1.0, boundary="dirichlet", kind="interval",
              tau=1.0, lengths=None) -> ProblemSpec:
    """Decoupled heat system `du/dt - sign * Lap u`, with selectable
    boundary rows.  `boundary="zero-row"` zeroes the first row entirely."""
    if lengths is None:
        if kind == "periodic":
            lengths = (2 * np.pi,) * n
        else:
            lengths = (1.0,) + (2 * np.pi,) * (n - 1)
    dom = DomainDescriptor(kind, lengths)
    a = {}
    for j in range(N):
        for i in range(n):
            a[(j, j, unit_alpha(n, i, 2))] = Poly.const(n, sign)
    b = {}
    if boundary == "dirichlet":
        l = (0,) * N
        for j in range(N):
            b[(j, j, (0,) * n)] = Poly.const(n, 1.0)
    elif boundary == "neumann":
        l = (1,) * N
        for j in range(N):
            b[(j, j, unit_alpha(n, 0))] = Poly.const(n, 1.0)
    elif boundary == "zero-row":
        l = (0,) * N
        for j in range(1, N):
            b[(j, j, (0,) * n)] = Poly.const(n, 1.0)
    else:
        raise ValueError(boundary)
    return ProblemSpec(N=N, n=n, tau=tau, l=l, a_coeffs=a, b_coeffs=b,
                       domain=dom)


def matrix_laplacian_spec(M: np.ndarray, n=2, kind="periodic") -> ProblemSpec:
    """System whose principal symbol is ``p*I + |xi|^2 * M``."""
    M = np.asarray(M)
    N = M.shape[0]
    lengths = (2 * np.pi,) * n if kind == "periodic" else (1.0,) + (2 * np.pi,) * (n - 1)
    dom = DomainDescriptor(kind, lengths)
    a = {}
    for j in range(N):
        for k in range(N):
            if M[j, k] != 0:
                for i in range(n):
                    a[(j, k, unit_alpha(n, i, 2))] = Poly.const(n, M[j, k])
    b = {(j, j, (0,) * n): Poly.const(n, 1.0) for j in range(N)}
    return ProblemSpec(N=N, n=n, tau=1.0, l=(0,) * N, a_coeffs=a, b_coeffs=b,
                       domain=dom,
                       complex_coefficients=np.iscomplexobj(M))


@pytest.fixture
def dirichlet_heat():
    return heat_spec()


# ----------------------------------------------------------------------
# brute-force norm oracles (naive scalar loops, no vectorized reuse)


def _int_modes(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, d=1.0) * n


def brute_aniso_norm(field: SpectralField, s: float, phi) -> float:
    axes = [2 * np.pi * _int_modes(g) / L
            for g, L in zip(field.grid, field.periods)]
    cell = 1.0
    for L in field.periods:
        cell *= 2 * np.pi / L
    acc = 0.0
    for idx in np.ndindex(*field.grid):
        k = [axes[d][idx[d]] for d in range(len(idx))]
        r = math.sqrt(1.0 + sum(v * v for v in k[:-1]) + abs(k[-1]))
        w = r ** s * eval_phi(phi, r)
        acc += (w * abs(field.coeffs[idx])) ** 2 * cell
    return math.sqrt(acc)


def brute_iso_norm(field: SpectralField, s: float, phi) -> float:
    axes = [2 * np.pi * _int_modes(g) / L
            for g, L in zip(field.grid, field.periods)]
    cell = 1.0
    for L in field.periods:
        cell *= 2 * np.pi / L
    acc = 0.0
    for idx in np.ndindex(*field.grid):
        k = [axes[d][idx[d]] for d in range(len(idx))]
        r = math.sqrt(1.0 + sum(v * v for v in k))
        w = r ** s * eval_phi(phi, r)
        acc += (w * abs(field.coeffs[idx])) ** 2 * cell
    return math.sqrt(acc)


# ----------------------------------------------------------------------
# contour oracle: count upper-half-plane roots by the argument principle


def upper_root_count(coeffs, points: int = 40000) -> int:
    """Winding-number count of the zeros with positive imaginary part,
    assuming none lie on the real axis."""
    c = np.asarray(coeffs, dtype=complex)
    lead = c[0]
    R = 1.0 + float(np.max(np.abs(c / lead)))
    xs = np.linspace(-R, R, points // 2)
    seg1 = xs.astype(complex)
    theta = np.linspace(0.0, np.pi, points // 2)
    seg2 = R * np.exp(1j * theta)
    contour = np.concatenate([seg1, seg2, seg1[:1]])
    vals = np.polyval(c, contour)
    dphase = np.angle(vals[1:] / vals[:-1])
    return int(round(dphase.sum() / (2 * np.pi)))
