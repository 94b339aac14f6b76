"""Exact polynomial arithmetic for symbols, traces, and data.

Multivariate polynomials in the space variables ``x_1..x_n`` and time ``t``
carry exact term dictionaries, so time derivatives at ``t = 0`` and boundary
restrictions are free of discretization error.  Univariate helpers wrap
numpy's descending-coefficient convention (``np.roots`` / ``np.polydiv``).
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping

import numpy as np

Key = tuple[tuple[int, ...], int]


class Poly:
    """Complex-coefficient polynomial in ``(x_1, .., x_n, t)``.

    Terms are stored as ``{(alpha, tpow): coeff}`` with ``alpha`` the tuple
    of space exponents.  Instances are immutable by convention; every
    operation returns a new polynomial.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Key, complex] | None = None):
        self.nvars = int(nvars)
        if self.nvars < 0:
            raise ValueError("nvars must be nonnegative")
        tidy: dict[Key, complex] = {}
        for (alpha, tp), c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            tp = int(tp)
            if len(alpha) != self.nvars or any(a < 0 for a in alpha) or tp < 0:
                raise ValueError(f"bad exponent key {(alpha, tp)!r}")
            c = complex(c)
            if c != 0:
                tidy[(alpha, tp)] = tidy.get((alpha, tp), 0j) + c
        self.terms = {k: v for k, v in tidy.items() if v != 0}

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {((0,) * nvars, 0): complex(c)})

    @classmethod
    def x(cls, nvars: int, i: int) -> "Poly":
        alpha = [0] * nvars
        alpha[i] = 1
        return cls(nvars, {(tuple(alpha), 0): 1.0 + 0j})

    @classmethod
    def t(cls, nvars: int) -> "Poly":
        return cls(nvars, {((0,) * nvars, 1): 1.0 + 0j})

    # ------------------------------------------------------------------
    # algebra

    def _like(self, terms) -> "Poly":
        return Poly(self.nvars, terms)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        if other.nvars != self.nvars:
            raise ValueError("variable-count mismatch")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0j) + v
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = complex(other)
            return self._like({k: c * v for k, v in self.terms.items()})
        if other.nvars != self.nvars:
            raise ValueError("variable-count mismatch")
        out: dict[Key, complex] = {}
        for (a1, t1), c1 in self.terms.items():
            for (a2, t2), c2 in other.terms.items():
                key = (tuple(x + y for x, y in zip(a1, a2)), t1 + t2)
                out[key] = out.get(key, 0j) + c1 * c2
        return self._like(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.nvars == self.nvars
                and other.terms == self.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # ------------------------------------------------------------------
    # calculus

    def diff_x(self, i: int) -> "Poly":
        out: dict[Key, complex] = {}
        for (alpha, tp), c in self.terms.items():
            if alpha[i] > 0:
                a = list(alpha)
                a[i] -= 1
                key = (tuple(a), tp)
                out[key] = out.get(key, 0j) + c * alpha[i]
        return self._like(out)

    def diff_t(self) -> "Poly":
        out: dict[Key, complex] = {}
        for (alpha, tp), c in self.terms.items():
            if tp > 0:
                key = (alpha, tp - 1)
                out[key] = out.get(key, 0j) + c * tp
        return self._like(out)

    def dx_op(self, alpha: Iterable[int]) -> "Poly":
        """Apply ``D^alpha`` with the sign convention ``D_j = i * d/dx_j``."""
        alpha = tuple(int(a) for a in alpha)
        res = self
        for i, a in enumerate(alpha):
            for _ in range(a):
                res = res.diff_x(i)
        return res * (1j ** sum(alpha))

    def dt_at0(self, r: int) -> "Poly":
        """Exact ``d^r/dt^r`` evaluated at ``t = 0`` (a polynomial in x)."""
        if r < 0:
            raise ValueError("derivative order must be nonnegative")
        fact = math.factorial(r)
        out = {(alpha, 0): c * fact
               for (alpha, tp), c in self.terms.items() if tp == r}
        return self._like(out)

    # ------------------------------------------------------------------
    # substitution / evaluation

    def subs_t0(self) -> "Poly":
        return self._like({k: v for k, v in self.terms.items() if k[1] == 0})

    def subs_x(self, i: int, value: float) -> "Poly":
        """Substitute ``x_i = value`` (used for boundary-face restriction)."""
        out: dict[Key, complex] = {}
        for (alpha, tp), c in self.terms.items():
            a = list(alpha)
            e = a[i]
            a[i] = 0
            key = (tuple(a), tp)
            out[key] = out.get(key, 0j) + c * (value ** e)
        return self._like(out)

    def eval(self, x, t=0.0):
        """Evaluate at a point; accepts scalars or broadcastable arrays."""
        xs = [np.asarray(x[i]) for i in range(self.nvars)]
        tt = np.asarray(t)
        acc = 0
        for (alpha, tp), c in self.terms.items():
            term = c
            for xi, e in zip(xs, alpha):
                if e:
                    term = term * xi ** e
            if tp:
                term = term * tt ** tp
            acc = acc + term
        if np.ndim(acc) == 0:
            return complex(acc)
        return acc + np.zeros(np.broadcast_shapes(*[a.shape for a in xs + [tt]]),
                              dtype=complex)

    # ------------------------------------------------------------------
    # inspection

    def conj(self) -> "Poly":
        return self._like({k: v.conjugate() for k, v in self.terms.items()})

    def deg_x(self, i: int) -> int:
        return max((alpha[i] for (alpha, _tp) in self.terms), default=0)

    def deg_t(self) -> int:
        return max((tp for (_alpha, tp) in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(alpha) + tp for (alpha, tp) in self.terms), default=0)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (alpha, tp), c in sorted(self.terms.items()):
            factors = []
            for i, e in enumerate(alpha):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            if tp == 1:
                factors.append("t")
            elif tp > 1:
                factors.append(f"t^{tp}")
            if c.imag == 0:
                cs = f"{c.real:g}"
            else:
                cs = f"({c.real:g}{c.imag:+g}j)"
            parts.append("*".join([cs] + factors) if factors else cs)
        return " + ".join(parts)

    __repr__ = __str__


def poly_close(p: Poly, q: Poly, tol: float) -> bool:
    """Coefficient-wise closeness of two polynomials."""
    return (p - q).max_abs_coeff() <= tol


# ----------------------------------------------------------------------
# univariate helpers (descending numpy coefficient arrays)

_ZERO = np.zeros(1, dtype=complex)


def u_poly(coeffs) -> np.ndarray:
    return np.atleast_1d(np.asarray(coeffs, dtype=complex))


def u_trim(c, tol: float = 0.0) -> np.ndarray:
    c = u_poly(c)
    k = 0
    while k < len(c) - 1 and abs(c[k]) <= tol:
        k += 1
    return c[k:]


def u_deg(c) -> int:
    c = u_trim(c)
    if len(c) == 1 and c[0] == 0:
        return -1
    return len(c) - 1


def u_add(a, b) -> np.ndarray:
    a, b = u_poly(a), u_poly(b)
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[len(a) - len(b):] += b
    return out


def u_scale(a, s) -> np.ndarray:
    return u_poly(a) * complex(s)


def u_mul(a, b) -> np.ndarray:
    a, b = u_trim(a), u_trim(b)
    if u_deg(a) < 0 or u_deg(b) < 0:
        return _ZERO.copy()
    return np.convolve(a, b)


def u_pow(a, k: int) -> np.ndarray:
    out = u_poly([1.0])
    for _ in range(int(k)):
        out = u_mul(out, a)
    return out


def u_eval(c, z):
    return np.polyval(u_poly(c), z)


def u_divmod(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Quotient and remainder of descending-coefficient polynomials."""
    a, b = u_trim(a), u_trim(b)
    if u_deg(b) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    if u_deg(a) < 0 or u_deg(a) < u_deg(b):
        return _ZERO.copy(), a
    q, r = np.polydiv(a, b)
    return u_poly(q), u_poly(r)


def u_pad_left(c, length: int) -> np.ndarray:
    c = u_poly(c)
    if len(c) > length:
        c = u_trim(c)
        if len(c) > length:
            raise ValueError("polynomial longer than requested padding")
    out = np.zeros(length, dtype=complex)
    out[length - len(c):] = c
    return out
