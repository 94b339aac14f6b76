"""Slowly varying weight parameters.

A weight parameter is a positive function ``phi`` on ``[1, inf)`` that is
bounded together with ``1/phi`` on every compact interval ``[1, d]`` and
varies slowly at infinity in the ratio sense: ``phi(lam*r)/phi(r) -> 1`` as
``r -> inf`` for every fixed ``lam > 0``.  Three concrete kinds are
supported:

* ``constant`` -- ``phi(r) = c`` (by default ``c = 1``);
* ``log-multiscale`` -- a product of powers of iterated natural logarithms,
  ``phi(r) = (ln r)**t1 * (ln ln r)**t2 * ...`` for large ``r``, spliced to
  the constant ``phi(r0)`` below a radius ``r0 >= e`` so that positivity and
  compact boundedness hold by construction;
* ``tabulated`` -- log-linear interpolation of sampled ``(r, value)`` pairs.

Arbitrary Borel measurable slowly varying parameters are intentionally not
supported; they are rejected rather than approximated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InterpolationRangeError, InvariantViolationError

#: Default radius below which log-multiscale parameters are held constant.
#: e**2 keeps two levels of iterated logarithm strictly positive.
DEFAULT_SPLICE_RADIUS = math.e ** 2

_KINDS = ("constant", "log-multiscale", "tabulated")


@dataclass(frozen=True)
class SlowlyVaryingFn:
    """A positive slowly varying weight parameter on ``[1, inf)``.

    Use the classmethod constructors :meth:`constant`,
    :meth:`log_multiscale`, and :meth:`tabulated`; the raw constructor
    validates whichever fields the chosen ``kind`` uses.
    """

    kind: str
    value: float = 1.0
    theta: tuple[float, ...] = ()
    splice_radius: float = DEFAULT_SPLICE_RADIUS
    table_r: tuple[float, ...] = ()
    table_v: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown weight-parameter kind {self.kind!r}")
        if self.kind == "constant":
            if not (math.isfinite(self.value) and self.value > 0):
                raise ValueError("constant parameter must be finite and positive")
        elif self.kind == "log-multiscale":
            if not self.theta:
                raise ValueError("log-multiscale parameter needs at least one exponent")
            if not all(math.isfinite(t) for t in self.theta):
                raise ValueError("exponents must be finite")
            if not (math.isfinite(self.splice_radius) and self.splice_radius >= math.e):
                raise ValueError("splice radius must satisfy r0 >= e")
            self._check_iterated_logs()
        else:
            r, v = self.table_r, self.table_v
            if len(r) != len(v) or len(r) < 2:
                raise ValueError("tabulated parameter needs >= 2 (r, value) pairs")
            if r[0] < 1.0 or any(a >= b for a, b in zip(r, r[1:])):
                raise ValueError("table radii must be >= 1 and strictly increasing")
            if not all(math.isfinite(x) and x > 0 for x in v):
                raise ValueError("table values must be finite and positive")

    def _check_iterated_logs(self):
        # every log level used by a nonzero exponent must stay positive at
        # the splice radius (and hence on [r0, inf) by monotonicity)
        active = max((i for i, t in enumerate(self.theta) if t != 0.0), default=-1)
        cur = self.splice_radius
        for level in range(active + 1):
            cur = math.log(cur)
            if cur <= 0.0:
                raise ValueError(
                    f"iterated logarithm level {level + 1} is non-positive at the "
                    f"splice radius {self.splice_radius:g}; increase the radius"
                )

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def constant(cls, value: float = 1.0) -> "SlowlyVaryingFn":
        return cls(kind="constant", value=float(value))

    @classmethod
    def log_multiscale(cls, *theta: float,
                       splice_radius: float = DEFAULT_SPLICE_RADIUS) -> "SlowlyVaryingFn":
        return cls(kind="log-multiscale", theta=tuple(float(t) for t in theta),
                   splice_radius=float(splice_radius))

    @classmethod
    def tabulated(cls, radii, values) -> "SlowlyVaryingFn":
        return cls(kind="tabulated",
                   table_r=tuple(float(r) for r in radii),
                   table_v=tuple(float(v) for v in values))

    # ------------------------------------------------------------------
    # evaluation

    def __call__(self, r):
        """Evaluate ``phi(r)`` for scalar or array ``r >= 1``."""
        arr = np.asarray(r, dtype=float)
        if np.any(arr < 1.0):
            raise DomainError("weight parameters are defined on [1, inf)")
        out = self._eval(arr)
        if np.ndim(r) == 0:
            return float(out)
        return out

    def _eval(self, arr: np.ndarray) -> np.ndarray:
        if self.kind == "constant":
            return np.full(arr.shape, self.value)
        if self.kind == "log-multiscale":
            rr = np.maximum(arr, self.splice_radius)
            out = np.ones(rr.shape)
            cur = rr
            for th in self.theta:
                cur = np.log(cur)
                if th != 0.0:
                    out = out * cur ** th
            return out
        lo, hi = self.table_r[0], self.table_r[-1]
        slack = 1e-12
        if np.any(arr < lo * (1 - slack)) or np.any(arr > hi * (1 + slack)):
            raise InterpolationRangeError(
                f"query outside table range [{lo:g}, {hi:g}]")
        logs = np.interp(np.log(np.clip(arr, lo, hi)),
                         np.log(self.table_r), np.log(self.table_v))
        return np.exp(logs)


def eval_phi(phi: SlowlyVaryingFn, r):
    """Evaluate a weight parameter at radius ``r >= 1``.

    For the log-multiscale kind, radii below the splice radius return the
    splice constant ``phi(r0)``.
    """
    return phi(r)


@dataclass(frozen=True)
class RegularityIndex:
    """The pair ``(s, phi)`` fixing a generalized regularity order."""

    s: float
    phi: SlowlyVaryingFn

    def __post_init__(self):
        if not math.isfinite(self.s):
            raise ValueError("regularity order must be finite")


# ----------------------------------------------------------------------
# finite-probe checks


@dataclass(frozen=True)
class KaramataReport:
    """Outcome of the finite-probe slow-variation check.

    This check samples the defining ratio limit at a single large probe
    radius; it is a heuristic consistency check, not a proof.
    """

    passed: bool
    worst_deviation: float
    worst_lambda: float
    probe_radius: float
    tolerance: float
    deviations: tuple[tuple[float, float], ...]


def karamata_check(phi: SlowlyVaryingFn, lambdas, r_probe: float,
                   tol: float) -> KaramataReport:
    """Probe ``|phi(lam * r)/phi(r) - 1|`` at a single radius for each scale.

    Passes iff every deviation is ``<= tol``.  The probe radius is exposed in
    the report so that the finite nature of the check stays visible.
    """
    if r_probe < 1.0:
        raise DomainError("probe radius must be >= 1")
    lambdas = [float(lam) for lam in lambdas]
    if not lambdas:
        raise ValueError("need at least one scale factor")
    base = eval_phi(phi, r_probe)
    devs = []
    for lam in lambdas:
        if lam <= 0.0:
            raise DomainError("scale factors must be positive")
        if lam * r_probe < 1.0:
            raise DomainError(f"scaled radius {lam * r_probe:g} lies below 1")
        devs.append((lam, abs(eval_phi(phi, lam * r_probe) / base - 1.0)))
    worst_lambda, worst = max(devs, key=lambda item: item[1])
    return KaramataReport(
        passed=worst <= tol,
        worst_deviation=worst,
        worst_lambda=worst_lambda,
        probe_radius=float(r_probe),
        tolerance=float(tol),
        deviations=tuple(devs),
    )


@dataclass(frozen=True)
class BoundednessReport:
    """Sampled compact-interval boundedness of ``phi`` and ``1/phi``."""

    passed: bool
    max_phi: float
    max_inv_phi: float
    d: float
    grid_size: int


def boundedness_check(phi: SlowlyVaryingFn, d: float,
                      grid_size: int = 512) -> BoundednessReport:
    """Sample ``[1, d]`` on a log-spaced grid and report sup of ``phi``, ``1/phi``.

    Passes iff both suprema are finite, with no NaN and no non-positive value.
    """
    if d <= 1.0:
        raise DomainError("interval endpoint must exceed 1")
    if grid_size < 2:
        raise ValueError("grid must have at least two points")
    grid = np.geomspace(1.0, d, int(grid_size))
    vals = np.asarray(phi(grid))
    if np.any(np.isnan(vals)) or np.any(vals <= 0.0):
        raise InvariantViolationError("weight parameter sampled non-positive or NaN")
    max_phi = float(vals.max())
    max_inv = float((1.0 / vals).max())
    passed = bool(np.isfinite(max_phi) and np.isfinite(max_inv))
    return BoundednessReport(passed=passed, max_phi=max_phi, max_inv_phi=max_inv,
                             d=float(d), grid_size=int(grid_size))
