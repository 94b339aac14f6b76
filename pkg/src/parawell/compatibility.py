"""Initial-trace recursion and boundary compatibility conditions.

All data entering this module are polynomials, so every time derivative at
``t = 0`` and every boundary restriction is exact; residuals then isolate
implementation error rather than discretization error.  Residual norms use
a fixed Gauss-Legendre quadrature on the boundary faces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExceptionalRegularityError
from .polynomials import Poly
from .symbols import DomainDescriptor, ProblemSpec

_E_MATCH_TOL = 1e-9


def trace_orders(s: float, l: int) -> list[int]:
    """Integers ``r`` with ``0 <= r < (s - l - 3/2) / 2`` for a row of
    boundary order ``l``."""
    if s <= 2:
        raise ValueError("regularity order must exceed 2")
    if l not in (0, 1):
        raise ValueError("boundary order must be 0 or 1")
    bound = (s - l - 1.5) / 2.0
    count = max(0, math.ceil(bound))
    return list(range(count))


def exceptional_set(spec: ProblemSpec, s_max: float) -> list[float]:
    """Jump points ``{2m + l_j + 3/2} ∩ (2, s_max]`` of the condition count."""
    out = set()
    for l in set(spec.l):
        m = 0
        while True:
            e = 2 * m + l + 1.5
            if e > s_max:
                break
            if e > 2.0:
                out.add(e)
            m += 1
    return sorted(out)


def is_exceptional(spec: ProblemSpec, s: float, tol: float = _E_MATCH_TOL) -> bool:
    return any(abs(s - e) <= tol for e in exceptional_set(spec, s + 1.0))


# ----------------------------------------------------------------------
# the trace recursion


@dataclass(frozen=True)
class TraceFamily:
    """Initial traces ``v[j, r]`` as polynomials in the space variables.

    ``v[j, 0]`` equals the supplied initial data exactly; higher orders are
    produced only by the recursion in :func:`build_traces`.
    """

    N: int
    max_order: int
    entries: dict

    def trace(self, j: int, r: int) -> Poly:
        if not (0 <= j < self.N and 0 <= r <= self.max_order):
            raise ValueError(f"trace ({j}, {r}) not available")
        return self.entries[(j, r)]


def build_traces(spec: ProblemSpec, f, h, r_max: int) -> TraceFamily:
    """Run the recursion

    ``v[j,0] = h_j``,
    ``v[j,r] = -sum_k sum_{|alpha|<=2} sum_{q<r} C(r-1,q) *
    (d_t^{r-1-q} a^alpha_jk)(x,0) * D^alpha v[k,q] + d_t^{r-1} f_j(x,0)``

    by exact polynomial differentiation.
    """
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    f = list(f)
    h = list(h)
    if len(f) != spec.N or len(h) != spec.N:
        raise ValueError("need N right-hand sides and N initial data")
    for poly in f + h:
        if not isinstance(poly, Poly) or poly.nvars != spec.n:
            raise ValueError("data must be polynomials in the n space variables")
    for poly in h:
        if poly.deg_t() > 0:
            raise ValueError("initial data must not depend on t")
    entries = {(j, 0): h[j] for j in range(spec.N)}
    for r in range(1, r_max + 1):
        for j in range(spec.N):
            acc = f[j].dt_at0(r - 1)
            for (jj, k, alpha), a in spec.a_coeffs.items():
                if jj != j:
                    continue
                for q in range(r):
                    coeff = a.dt_at0(r - 1 - q)
                    if not coeff:
                        continue
                    term = coeff * entries[(k, q)].dx_op(alpha)
                    acc = acc - math.comb(r - 1, q) * term
            entries[(j, r)] = acc
    return TraceFamily(N=spec.N, max_order=r_max, entries=entries)


def build_boundary_expr(spec: ProblemSpec, traces: TraceFamily, j: int,
                        r: int) -> Poly:
    """The boundary expression
    ``sum_k sum_{|alpha|<=l_j} sum_{q<=r} C(r,q) *
    (d_t^{r-q} b^alpha_jk)(x,0) * D^alpha v[k,q]``
    as a polynomial on the space domain."""
    if r > traces.max_order:
        raise ValueError(f"trace family only reaches order {traces.max_order}")
    acc = Poly.zero(spec.n)
    for (jj, k, alpha), b in spec.b_coeffs.items():
        if jj != j:
            continue
        for q in range(r + 1):
            coeff = b.dt_at0(r - q)
            if not coeff:
                continue
            acc = acc + math.comb(r, q) * (coeff * traces.trace(k, q).dx_op(alpha))
    return acc


# ----------------------------------------------------------------------
# boundary quadrature


def _integrate_face(poly: Poly, domain: DomainDescriptor,
                    quad_nodes: int) -> complex:
    """Integrate a t-free polynomial (constant in ``x_1``) over the face
    cross-section ``prod_{i>=2} [0, L_i]`` with Gauss-Legendre nodes."""
    if poly.deg_t() > 0 or poly.deg_x(0) > 0:
        raise ValueError("face integrand must be restricted already")
    axes = list(range(1, domain.n))
    if not axes:
        return poly.terms.get(((0,) * domain.n, 0), 0j)
    nodes, wts = np.polynomial.legendre.leggauss(int(quad_nodes))
    grids, weights = [], []
    for i in axes:
        L = domain.lengths[i]
        grids.append(0.5 * L * (nodes + 1.0))
        weights.append(0.5 * L * wts)
    mesh = list(np.meshgrid(*grids, indexing="ij"))
    wmesh = np.meshgrid(*weights, indexing="ij")
    w = np.ones_like(wmesh[0])
    for wm in wmesh:
        w = w * wm
    coords = [np.zeros_like(mesh[0])] + mesh  # x_1 already substituted out
    vals = poly.eval(coords, 0.0)
    return complex((vals * w).sum())


def boundary_l2(poly: Poly, domain: DomainDescriptor, *,
                quad_nodes: int = 8) -> float:
    """Discrete L2 norm of a t-free polynomial over the lateral-boundary
    cross-section (both faces for interval domains)."""
    if not domain.has_boundary:
        raise ValueError("periodic domains have no lateral boundary")
    total = 0.0
    for face in domain.faces():
        rho = poly.subs_x(0, face.x1)
        sq = rho * rho.conj()
        total += _integrate_face(sq, domain, quad_nodes).real
    return math.sqrt(max(total, 0.0))


# ----------------------------------------------------------------------
# the compatibility system


@dataclass(frozen=True)
class CompatibilityCondition:
    j: int
    r: int
    residual: float
    boundary_expression: str
    data_trace: str


@dataclass(frozen=True)
class CompatibilitySystem:
    """Generated conditions with their residuals at regularity ``s``.

    A condition ``(j, r)`` is present iff ``0 <= r < (s - l_j - 3/2)/2``;
    the per-component counts are recorded alongside.
    """

    s: float
    conditions: tuple[CompatibilityCondition, ...]
    counts: dict
    tolerance: float
    quad_nodes: int

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.conditions), default=0.0)

    @property
    def compatible(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "counts": {str(j + 1): c for j, c in sorted(self.counts.items())},
            "conditions": [{"j": c.j + 1, "r": c.r, "residual": c.residual}
                           for c in self.conditions],
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "compatible": self.compatible,
        }


def compatibility_residuals(spec: ProblemSpec, f, g, h, s: float, *,
                            tol: float = 1e-10,
                            quad_nodes: int = 8) -> CompatibilitySystem:
    """Generate all conditions at regularity ``s`` and measure their
    residuals ``|| d_t^r g_j(., 0) - B_{j,r}(v..) ||`` in the discrete
    boundary L2 norm.

    Refuses orders in the exceptional set: there the data space is defined
    by interpolation and the naive condition count is not meaningful; the
    interpolation module covers the weight-level consequences.
    """
    if s <= 2:
        raise ValueError("regularity order must exceed 2")
    if is_exceptional(spec, s):
        raise ExceptionalRegularityError(
            f"s = {s} lies in the exceptional set; the data space at this "
            "order is defined by midpoint interpolation of the neighbor "
            "orders (see the interpolation module), not by direct "
            "condition generation")
    g = list(g)
    if len(g) != spec.N:
        raise ValueError("need N boundary data components")
    orders = {j: trace_orders(s, spec.l[j]) for j in range(spec.N)}
    counts = {j: len(rs) for j, rs in orders.items()}
    conditions: list[CompatibilityCondition] = []
    if spec.domain.has_boundary and any(orders.values()):
        r_need = max(max(rs) for rs in orders.values() if rs)
        traces = build_traces(spec, f, h, r_need)
        for j in range(spec.N):
            for r in orders[j]:
                lhs = g[j].dt_at0(r)
                expr = build_boundary_expr(spec, traces, j, r)
                resid = boundary_l2(lhs - expr, spec.domain,
                                    quad_nodes=quad_nodes)
                conditions.append(CompatibilityCondition(
                    j=j, r=r, residual=resid,
                    boundary_expression=str(expr), data_trace=str(lhs)))
    return CompatibilitySystem(s=float(s), conditions=tuple(conditions),
                               counts=counts, tolerance=float(tol),
                               quad_nodes=int(quad_nodes))
