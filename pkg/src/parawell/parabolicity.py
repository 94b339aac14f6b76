"""Numerical checks of the two parabolicity conditions.

Condition (i) bounds the real parts of the roots of the interior
determinant polynomial; condition (ii) is the covering (Lopatinskii-type)
condition: the rows of ``B0 * adj(A0)`` must stay linearly independent
modulo the polynomial whose roots are the upper-half-plane zeros of the
directional determinant.

Both conditions quantify over continua; the checks here sample them on
finite grids (unit-sphere directions for (i), the compact slice
``|xi|^2 + |p| = 1`` with ``Re p >= -delta1 * |xi|^2`` for (ii)), exploiting
the exact parabolic homogeneity ``(xi, p) -> (c xi, c^2 p)``.  A finite
check cannot prove either condition; every report records the grids used
and is to be read as "verified on grid".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (InvariantViolationError, RootFindingError, RootSplitError,
                     StructuralError)
from .polynomials import u_deg, u_divmod, u_pad_left, u_poly, u_trim
from .symbols import (ProblemSpec, adjugate_symbol, det_poly_in_zeta,
                      second_order_matrix, zeta_boundary_matrix)

DEFAULT_AXIS_TOL = 1e-8
DEFAULT_SV_TOL = 1e-8


@dataclass(frozen=True)
class RootSplit:
    """Roots of a polynomial split by the sign of their imaginary part."""

    zeta_plus: tuple[complex, ...]
    zeta_minus: tuple[complex, ...]

    def __post_init__(self):
        if len(self.zeta_plus) != len(self.zeta_minus):
            raise InvariantViolationError(
                f"unbalanced root split: {len(self.zeta_plus)} up, "
                f"{len(self.zeta_minus)} down")

    @property
    def m(self) -> int:
        return len(self.zeta_plus)


def split_roots_zeta(coeffs, tol: float = DEFAULT_AXIS_TOL) -> RootSplit:
    """Companion-matrix roots partitioned by imaginary-part sign.

    Raises :class:`RootSplitError` if any root lies within ``tol`` of the
    real axis (the split is then undefined) and
    :class:`InvariantViolationError` on an unbalanced count.
    """
    c = u_trim(u_poly(coeffs), tol=0.0)
    if u_deg(c) < 2:
        raise ValueError("expected a polynomial of degree >= 2")
    try:
        roots = np.roots(c)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - exotic input
        raise RootFindingError(f"companion eigensolver failed: {exc}") from exc
    near = np.abs(roots.imag) <= tol
    if np.any(near):
        bad = roots[near][0]
        raise RootSplitError(
            f"root {bad} lies within {tol:g} of the real axis; split undefined")
    order = np.lexsort((roots.real, roots.imag))
    roots = roots[order]
    plus = tuple(complex(z) for z in roots[roots.imag > 0])
    minus = tuple(complex(z) for z in roots[roots.imag < 0])
    return RootSplit(zeta_plus=plus, zeta_minus=minus)


# ----------------------------------------------------------------------
# sample grids


@dataclass(frozen=True)
class InteriorSample:
    x: tuple[float, ...]
    t: float
    xi: tuple[float, ...]


@dataclass(frozen=True)
class BoundarySample:
    x: tuple[float, ...]
    t: float
    xi: tuple[float, ...]
    nu: tuple[float, ...]
    p: complex


def _unit_directions(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.array([[1.0 if i % 2 == 0 else -1.0] for i in range(count)])
    vecs = rng.standard_normal((count, n))
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    small = norms[:, 0] < 1e-12
    vecs[small] = np.eye(n)[0]
    norms[small] = 1.0
    return vecs / norms


def condition_i_samples(spec: ProblemSpec, *, directions: int = 32,
                        space_time: int = 8, seed: int = 0) -> list[InteriorSample]:
    """Unit-sphere frequency directions crossed with random ``(x, t)`` points."""
    rng = np.random.default_rng(seed)
    dirs = _unit_directions(spec.n, directions, rng)
    samples = []
    for xi in dirs:
        for _ in range(space_time):
            x = spec.domain.sample_interior(rng)
            t = float(rng.uniform(0.0, spec.tau))
            samples.append(InteriorSample(tuple(x), t, tuple(xi)))
    return samples


def condition_ii_samples(spec: ProblemSpec, delta1: float, *, count: int = 200,
                         seed: int = 0) -> list[BoundarySample]:
    """Boundary samples on the compact slice ``|xi|^2 + |p| = 1`` subject to
    ``Re p >= -delta1 * |xi|^2`` (and ``|xi| + |p| != 0``)."""
    if delta1 <= 0:
        raise ValueError("delta1 must be positive")
    if not spec.domain.has_boundary:
        raise StructuralError("the model domain has no lateral boundary")
    rng = np.random.default_rng(seed)
    samples = []
    while len(samples) < count:
        x, face = spec.domain.sample_boundary(rng)
        t = float(rng.uniform(0.0, spec.tau))
        nu = np.zeros(spec.n)
        nu[0] = face.sign
        u = float(rng.uniform(0.0, 1.0)) if spec.n > 1 else 0.0
        xi = np.zeros(spec.n)
        if u > 0.0:
            d = _unit_directions(spec.n - 1, 1, rng)[0]
            xi[1:] = math.sqrt(u) * d
        pm = 1.0 - u
        if pm <= 1e-14:
            p = 0j
        else:
            cos_floor = max(-1.0, -delta1 * u / pm)
            theta_max = math.acos(cos_floor)
            theta = float(rng.uniform(-theta_max, theta_max))
            p = pm * complex(math.cos(theta), math.sin(theta))
        samples.append(BoundarySample(tuple(x), t, tuple(xi), tuple(nu), p))
    return samples


# ----------------------------------------------------------------------
# condition (i)


@dataclass(frozen=True)
class ConditionIReport:
    passed: bool
    delta_estimate: float
    sample_count: int
    worst_sample: InteriorSample | None

    def to_dict(self) -> dict:
        out = {"passed": self.passed, "delta_estimate": self.delta_estimate,
               "sample_count": self.sample_count}
        if self.worst_sample is not None:
            out["worst_sample"] = {"x": list(self.worst_sample.x),
                                   "t": self.worst_sample.t,
                                   "xi": list(self.worst_sample.xi)}
        return out


def check_condition_i(spec: ProblemSpec, samples) -> ConditionIReport:
    """Root condition on a grid: all roots of the interior determinant must
    satisfy ``Re p <= -delta`` for some ``delta > 0``; the report carries
    ``delta_estimate = -max Re p`` over the grid.

    The roots of ``det(p*I + M)`` are computed as eigenvalues of ``-M``
    rather than as companion roots of the expanded determinant: forming the
    characteristic polynomial first loses sqrt(machine-eps) accuracy at
    repeated roots (the decoupled heat system hits exactly that case).
    """
    samples = list(samples)
    if not samples:
        raise ValueError("sample grid is empty")
    max_re = -math.inf
    worst = None
    for smp in samples:
        M = second_order_matrix(spec, smp.x, smp.t, smp.xi)
        try:
            roots = np.linalg.eigvals(-M)
        except np.linalg.LinAlgError as exc:
            raise RootFindingError(
                f"root finding failed at x={smp.x}, t={smp.t}, xi={smp.xi}: {exc}"
            ) from exc
        top = float(roots.real.max())
        if top > max_re:
            max_re = top
            worst = smp
    delta = -max_re
    return ConditionIReport(passed=delta > 0.0, delta_estimate=delta,
                            sample_count=len(samples), worst_sample=worst)


# ----------------------------------------------------------------------
# condition (ii)


def covering_rows(spec: ProblemSpec, x, t: float, xi, nu, p):
    """The product ``B0 * adj(A0)`` at ``xi + zeta*nu`` together with the
    directional determinant (descending zeta coefficients)."""
    det = det_poly_in_zeta(spec, x, t, xi, nu, p)
    adj = adjugate_symbol(spec, x, t, xi, nu, p)
    rows = zeta_boundary_matrix(spec, x, t, xi, nu).matmul(adj)
    return rows, det


def remainder_matrix(rows, modulus) -> np.ndarray:
    """Reduce every entry of an N x N polynomial matrix modulo ``modulus``
    and stack the remainder coefficients row-wise.

    Row ``j`` concatenates the ``m`` remainder coefficients of its N
    entries, so the result is N x (N*m); the rows of the polynomial matrix
    are linearly independent modulo the modulus iff this matrix has full
    row rank.
    """
    m = u_deg(modulus)
    if m < 1:
        raise ValueError("modulus must have positive degree")
    N = rows.size
    out = np.zeros((N, N * m), dtype=complex)
    for j in range(N):
        for k in range(N):
            entry = u_trim(rows.entries[j][k], tol=0.0)
            if u_deg(entry) < 0:
                continue
            _q, rem = u_divmod(entry, modulus)
            out[j, k * m:(k + 1) * m] = u_pad_left(rem, m)
    return out


@dataclass(frozen=True)
class ConditionIIReport:
    passed: bool
    min_singular_value: float
    sample_count: int
    m: int
    worst_sample: BoundarySample | None
    tolerance: float

    def to_dict(self) -> dict:
        out = {"passed": self.passed,
               "min_singular_value": self.min_singular_value,
               "sample_count": self.sample_count, "m": self.m,
               "tolerance": self.tolerance}
        if self.worst_sample is not None:
            w = self.worst_sample
            out["worst_sample"] = {"x": list(w.x), "t": w.t, "xi": list(w.xi),
                                   "nu": list(w.nu),
                                   "p": [w.p.real, w.p.imag]}
        return out


def check_condition_ii(spec: ProblemSpec, delta1: float, samples, *,
                       axis_tol: float = DEFAULT_AXIS_TOL,
                       sv_tol: float = DEFAULT_SV_TOL) -> ConditionIIReport:
    """Covering condition on a grid via the smallest singular value of the
    remainder coefficient matrix at each sample."""
    samples = list(samples)
    if not samples:
        raise ValueError("sample grid is empty")
    min_sv = math.inf
    worst = None
    m_seen = None
    for smp in samples:
        rows, det = covering_rows(spec, smp.x, smp.t, smp.xi, smp.nu, smp.p)
        split = split_roots_zeta(det, tol=axis_tol)
        if spec.N > split.m:
            raise StructuralError(
                f"N={spec.N} exceeds the upper root count m={split.m}; the "
                "rank condition is vacuous")
        if m_seen is None:
            m_seen = split.m
        modulus = u_poly(np.poly(np.array(split.zeta_plus)))
        sv = float(np.linalg.svd(remainder_matrix(rows, modulus),
                                 compute_uv=False)[-1])
        if sv < min_sv:
            min_sv = sv
            worst = smp
    return ConditionIIReport(passed=min_sv > sv_tol,
                             min_singular_value=min_sv,
                             sample_count=len(samples), m=int(m_seen),
                             worst_sample=worst, tolerance=sv_tol)


# ----------------------------------------------------------------------
# combined report


@dataclass(frozen=True)
class ParabolicityReport:
    condition_i: ConditionIReport
    condition_ii: ConditionIIReport | None
    delta1: float | None

    @property
    def passed(self) -> bool:
        if not self.condition_i.passed:
            return False
        return self.condition_ii is None or self.condition_ii.passed

    def to_dict(self) -> dict:
        out = {"condition_i": self.condition_i.to_dict(),
               "passed": self.passed}
        if self.delta1 is not None:
            out["delta1"] = self.delta1
        if self.condition_ii is not None:
            out["condition_ii"] = self.condition_ii.to_dict()
        else:
            out["condition_ii"] = None
        return out


def check_parabolicity(spec: ProblemSpec, *, directions: int = 32,
                       space_time: int = 8, boundary_samples: int = 200,
                       seed: int = 0, delta1: float | None = None,
                       axis_tol: float = DEFAULT_AXIS_TOL,
                       sv_tol: float = DEFAULT_SV_TOL) -> ParabolicityReport:
    """Run condition (i), then (ii) with ``delta1`` defaulting to half the
    estimated root margin.  Condition (ii) is skipped when (i) already
    fails (no valid ``delta1`` exists) or when the domain has no boundary."""
    rep_i = check_condition_i(spec,
                              condition_i_samples(spec, directions=directions,
                                                  space_time=space_time,
                                                  seed=seed))
    if not rep_i.passed or not spec.domain.has_boundary:
        return ParabolicityReport(rep_i, None, None)
    d1 = delta1 if delta1 is not None else rep_i.delta_estimate / 2.0
    if not (0.0 < d1 < rep_i.delta_estimate):
        raise ValueError("delta1 must lie in (0, delta_estimate)")
    rep_ii = check_condition_ii(
        spec, d1,
        condition_ii_samples(spec, d1, count=boundary_samples, seed=seed + 1),
        axis_tol=axis_tol, sv_tol=sv_tol)
    return ParabolicityReport(rep_i, rep_ii, d1)
