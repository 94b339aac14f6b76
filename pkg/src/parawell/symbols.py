"""Differential systems, boundary operators, and their principal symbols.

Sign convention, fixed project-wide: ``D_j = i * d/dx_j``.  Worked example:
for the decoupled heat system ``du/dt - Lap u = f`` the second-order
coefficients are ``a[(j, j, 2e_i)] = 1`` for every axis ``i``, because
``sum_i D_i^2 = -Lap``; the principal symbol of a diagonal entry is then
``p + |xi|^2``, whose root ``p = -|xi|^2`` has negative real part, as a
parabolic system requires.  Mixing derivative conventions is the dominant
bug risk when entering coefficients; the bundled fixtures follow this one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DomainError, InvariantViolationError
from .polynomials import (Poly, u_add, u_deg, u_mul, u_poly, u_pow, u_scale,
                          u_trim)

_NORMAL_TOL = 1e-12


def multi_indices(n: int, order: int):
    """All multi-indices of length ``n`` with ``|alpha| == order``."""
    if n == 1:
        yield (order,)
        return
    for head in range(order + 1):
        for tail in multi_indices(n - 1, order - head):
            yield (head,) + tail


def xi_power(xi, alpha) -> complex:
    out = 1.0 + 0j
    for z, a in zip(xi, alpha):
        if a:
            out *= z ** a
    return out


# ----------------------------------------------------------------------
# model domains


@dataclass(frozen=True)
class Face:
    """A flat boundary face ``{x_1 = x1}`` with inward normal ``sign * e_1``."""

    x1: float
    sign: float


@dataclass(frozen=True)
class DomainDescriptor:
    """Model space domain: ``periodic`` box (no boundary), ``halfspace``
    sample (one face, lengths give the sampling box), or ``interval``
    product ``[0, L1] x periodic``."""

    kind: str
    lengths: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in ("periodic", "halfspace", "interval"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        object.__setattr__(self, "lengths",
                           tuple(float(L) for L in self.lengths))
        if not self.lengths or any(L <= 0 for L in self.lengths):
            raise ValueError("domain lengths must be positive")

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def has_boundary(self) -> bool:
        return self.kind != "periodic"

    def faces(self) -> tuple[Face, ...]:
        if self.kind == "interval":
            return (Face(0.0, +1.0), Face(self.lengths[0], -1.0))
        if self.kind == "halfspace":
            return (Face(0.0, +1.0),)
        return ()

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            return False
        if self.kind == "periodic":
            return True
        if x[0] < -tol or (self.kind == "interval" and x[0] > self.lengths[0] + tol):
            return False
        return True

    def inward_normal(self, x, tol: float = 1e-9) -> np.ndarray:
        for face in self.faces():
            if abs(float(x[0]) - face.x1) <= tol:
                nu = np.zeros(self.n)
                nu[0] = face.sign
                return nu
        raise DomainError(f"point {x} is not on the boundary")

    def sample_interior(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, 1.0, self.n) * np.asarray(self.lengths)

    def sample_boundary(self, rng: np.random.Generator) -> tuple[np.ndarray, Face]:
        faces = self.faces()
        if not faces:
            raise DomainError("periodic domains have no lateral boundary")
        face = faces[int(rng.integers(len(faces)))]
        x = rng.uniform(0.0, 1.0, self.n) * np.asarray(self.lengths)
        x[0] = face.x1
        return x, face


# ----------------------------------------------------------------------
# the problem data


@dataclass(frozen=True)
class ProblemSpec:
    """Full problem data: system size, orders, coefficient polynomials,
    and the model-domain descriptor.

    Coefficient maps send ``(j, k, alpha)`` (zero-based component indices)
    to polynomials in ``(x, t)``.  Interior coefficients require
    ``|alpha| <= 2``; boundary coefficients require ``|alpha| <= l_j`` with
    ``l_j in {0, 1}``.  The canonical setting has ``N >= 2`` and ``n >= 2``;
    ``N = 1`` or ``n = 1`` are accepted for reduction sanity checks with the
    caveat that the balanced root split is then asserted empirically.
    """

    N: int
    n: int
    tau: float
    l: tuple[int, ...]
    a_coeffs: dict
    b_coeffs: dict
    domain: DomainDescriptor
    complex_coefficients: bool = False

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("system size must be >= 1")
        if self.n < 1 or self.n != self.domain.n:
            raise ValueError("space dimension must match the domain descriptor")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ValueError("time horizon must be positive and finite")
        object.__setattr__(self, "l", tuple(int(v) for v in self.l))
        if len(self.l) != self.N or any(v not in (0, 1) for v in self.l):
            raise ValueError("boundary orders must be a length-N tuple over {0, 1}")
        self._check_coeffs(self.a_coeffs, order_of=lambda j: 2, name="interior")
        self._check_coeffs(self.b_coeffs, order_of=lambda j: self.l[j],
                           name="boundary")

    def _check_coeffs(self, table, order_of, name):
        for key, poly in table.items():
            j, k, alpha = key
            if not (0 <= j < self.N and 0 <= k < self.N):
                raise ValueError(f"{name} coefficient {key}: component out of range")
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.n or any(a < 0 for a in alpha):
                raise ValueError(f"{name} coefficient {key}: bad multi-index")
            if sum(alpha) > order_of(j):
                raise ValueError(f"{name} coefficient {key}: order bound exceeded")
            if not isinstance(poly, Poly) or poly.nvars != self.n:
                raise ValueError(f"{name} coefficient {key}: need a Poly in n vars")
            if not self.complex_coefficients:
                if any(abs(c.imag) > 0 for c in poly.terms.values()):
                    raise ValueError(
                        f"{name} coefficient {key} is complex; set "
                        "complex_coefficients=True to allow this")

    # ------------------------------------------------------------------

    def a(self, j: int, k: int, alpha) -> Poly:
        return self.a_coeffs.get((j, k, tuple(alpha)), Poly.zero(self.n))

    def b(self, j: int, k: int, alpha) -> Poly:
        return self.b_coeffs.get((j, k, tuple(alpha)), Poly.zero(self.n))

    @property
    def is_constant_coefficient(self) -> bool:
        return all(p.total_degree() == 0
                   for p in itertools.chain(self.a_coeffs.values(),
                                            self.b_coeffs.values()))

    def constant_a(self, j: int, k: int, alpha) -> complex:
        poly = self.a(j, k, alpha)
        if poly.total_degree() > 0:
            raise ValueError("coefficient is not constant")
        return poly.terms.get(((0,) * self.n, 0), 0j)

    def constant_b(self, j: int, k: int, alpha) -> complex:
        poly = self.b(j, k, alpha)
        if poly.total_degree() > 0:
            raise ValueError("coefficient is not constant")
        return poly.terms.get(((0,) * self.n, 0), 0j)


def _check_point(spec: ProblemSpec, x, t: float, boundary: bool = False):
    x = np.asarray(x, dtype=float)
    if not spec.domain.contains(x):
        raise DomainError(f"point {x.tolist()} outside the domain closure")
    if not (-1e-12 <= t <= spec.tau + 1e-12):
        raise DomainError(f"time {t} outside [0, {spec.tau}]")
    if boundary:
        spec.domain.inward_normal(x)  # raises off the boundary
    return x


# ----------------------------------------------------------------------
# polynomial matrices


@dataclass
class PolyMatrix:
    """Square matrix of univariate polynomials (descending coefficients)."""

    variable: str
    entries: list = dc_field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.entries)

    def degree(self) -> int:
        return max((u_deg(e) for row in self.entries for e in row), default=-1)

    def at(self, z) -> np.ndarray:
        return np.array([[np.polyval(u_poly(e), z) for e in row]
                         for row in self.entries], dtype=complex)

    def matmul(self, other: "PolyMatrix") -> "PolyMatrix":
        if other.size != self.size:
            raise ValueError("size mismatch")
        out = []
        for j in range(self.size):
            row = []
            for i in range(self.size):
                acc = u_poly([0.0])
                for k in range(self.size):
                    acc = u_add(acc, u_mul(self.entries[j][k],
                                           other.entries[k][i]))
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.variable, out)

    def det(self) -> np.ndarray:
        return _mat_det(self.entries)

    def adjugate(self) -> "PolyMatrix":
        n = self.size
        if n == 1:
            return PolyMatrix(self.variable, [[u_poly([1.0])]])
        cof = [[None] * n for _ in range(n)]
        for j in range(n):
            for k in range(n):
                minor = [[self.entries[r][c] for c in range(n) if c != k]
                         for r in range(n) if r != j]
                sign = -1.0 if (j + k) % 2 else 1.0
                cof[j][k] = u_scale(_mat_det(minor), sign)
        adj = [[cof[k][j] for k in range(n)] for j in range(n)]
        return PolyMatrix(self.variable, adj)


def _mat_det(entries) -> np.ndarray:
    n = len(entries)
    if n == 1:
        return u_poly(entries[0][0])
    acc = u_poly([0.0])
    for k in range(n):
        minor = [[entries[r][c] for c in range(n) if c != k]
                 for r in range(1, n)]
        term = u_mul(entries[0][k], _mat_det(minor))
        acc = u_add(acc, u_scale(term, -1.0 if k % 2 else 1.0))
    return acc


# ----------------------------------------------------------------------
# symbol evaluation


def second_order_matrix(spec: ProblemSpec, x, t: float, xi) -> np.ndarray:
    """The top-order part ``M(x, t, xi) = sum_{|alpha|=2} a^alpha xi^alpha``
    of the interior symbol, so that ``A0 = p * I + M``."""
    x = _check_point(spec, x, t)
    xi = np.asarray(xi, dtype=complex)
    M = np.zeros((spec.N, spec.N), dtype=complex)
    for (j, k, alpha), poly in spec.a_coeffs.items():
        if sum(alpha) == 2:
            M[j, k] += poly.eval(x, t) * xi_power(xi, alpha)
    return M


def principal_symbol_A(spec: ProblemSpec, x, t: float, xi, p) -> np.ndarray:
    """Principal interior symbol ``delta_jk * p + sum_{|alpha|=2} a^alpha xi^alpha``."""
    return (complex(p) * np.eye(spec.N, dtype=complex)
            + second_order_matrix(spec, x, t, xi))


def principal_symbol_B(spec: ProblemSpec, x, t: float, xi) -> np.ndarray:
    """Principal boundary symbol; row ``j`` collects ``|alpha| = l_j`` terms."""
    x = _check_point(spec, x, t, boundary=True)
    xi = np.asarray(xi, dtype=complex)
    B = np.zeros((spec.N, spec.N), dtype=complex)
    for (j, k, alpha), poly in spec.b_coeffs.items():
        if sum(alpha) == spec.l[j]:
            B[j, k] += poly.eval(x, t) * xi_power(xi, alpha)
    return B


def det_poly_in_p(spec: ProblemSpec, x, t: float, xi) -> np.ndarray:
    """Coefficients (descending) of ``det A0(x, t, xi, .)`` in ``p``.

    The result has degree N; monicity is asserted, not assumed.
    """
    M = second_order_matrix(spec, x, t, xi)
    entries = [[u_poly([1.0, M[j, k]]) if j == k else u_poly([M[j, k]])
                for k in range(spec.N)] for j in range(spec.N)]
    coeffs = _mat_det(entries)
    coeffs = u_trim(coeffs, tol=0.0)
    if u_deg(coeffs) != spec.N or abs(coeffs[0] - 1.0) > 1e-9:
        raise InvariantViolationError(
            "interior determinant is not a monic degree-N polynomial in p")
    return coeffs


def _check_directions(xi_tangent, nu, n: int):
    xi = np.asarray(xi_tangent, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if xi.shape != (n,) or nu.shape != (n,):
        raise ValueError("tangent vector and normal must have length n")
    if abs(float(np.dot(nu, nu)) - 1.0) > _NORMAL_TOL:
        raise ValueError("normal vector must have unit length")
    if abs(float(np.dot(xi, nu))) > _NORMAL_TOL:
        raise ValueError("xi must be tangent (orthogonal to the normal)")
    return xi, nu


def zeta_symbol_matrix(spec: ProblemSpec, x, t: float, xi_tangent, nu,
                       p) -> PolyMatrix:
    """``A0(x, t, xi + zeta*nu, p)`` as a matrix of polynomials in ``zeta``."""
    x = _check_point(spec, x, t)
    xi, nu = _check_directions(xi_tangent, nu, spec.n)
    lin = [u_trim(u_poly([nu[i], xi[i]])) for i in range(spec.n)]
    entries = [[u_poly([complex(p)]) if j == k else u_poly([0.0])
                for k in range(spec.N)] for j in range(spec.N)]
    for (j, k, alpha), poly in spec.a_coeffs.items():
        if sum(alpha) != 2:
            continue
        mono = u_poly([1.0])
        for i, a in enumerate(alpha):
            if a:
                mono = u_mul(mono, u_pow(lin[i], a))
        entries[j][k] = u_add(entries[j][k],
                              u_scale(mono, poly.eval(x, t)))
    return PolyMatrix("zeta", entries)


def det_poly_in_zeta(spec: ProblemSpec, x, t: float, xi_tangent, nu,
                     p) -> np.ndarray:
    """Descending coefficients of ``det A0(x, t, xi + zeta*nu, p)`` in zeta.

    The effective degree is ``len(result) - 1`` after trimming (at most 2N).
    """
    return u_trim(zeta_symbol_matrix(spec, x, t, xi_tangent, nu, p).det(),
                  tol=0.0)


def adjugate_symbol(spec: ProblemSpec, x, t: float, xi_tangent, nu,
                    p) -> PolyMatrix:
    """Transposed cofactor matrix of ``A0(x, t, xi + zeta*nu, p)`` in zeta.

    Satisfies ``A0 * adj(A0) = det(A0) * I`` as a polynomial identity.
    """
    return zeta_symbol_matrix(spec, x, t, xi_tangent, nu, p).adjugate()


def zeta_boundary_matrix(spec: ProblemSpec, x, t: float, xi_tangent, nu) -> PolyMatrix:
    """``B0(x, t, xi + zeta*nu)`` as a matrix of polynomials in ``zeta``."""
    x = _check_point(spec, x, t, boundary=True)
    xi, nu = _check_directions(xi_tangent, nu, spec.n)
    lin = [u_trim(u_poly([nu[i], xi[i]])) for i in range(spec.n)]
    entries = [[u_poly([0.0]) for _ in range(spec.N)] for _ in range(spec.N)]
    for (j, k, alpha), poly in spec.b_coeffs.items():
        if sum(alpha) != spec.l[j]:
            continue
        mono = u_poly([1.0])
        for i, a in enumerate(alpha):
            if a:
                mono = u_mul(mono, u_pow(lin[i], a))
        entries[j][k] = u_add(entries[j][k], u_scale(mono, poly.eval(x, t)))
    return PolyMatrix("zeta", entries)
