"""Jacobi orthogonal polynomial engine.

The polynomial family J_k is defined by the three-term recursion

    J_{k+1}(lam) = (a_k lam + b_k) J_k(lam) - c_k J_{k-1}(lam)

with J_0 = 1 and J_1 = a_0 lam + b_0.  The recurrence weights satisfy
a_k + b_k - c_k = 1 identically, which pins the normalization J_k(1) = 1
for every degree.  The family is orthogonal on [-1, 1] under the weight
(1 - lam)^alpha (1 + lam)^beta, or equivalently on gamma in [0, 1] under
(2 - 2*gamma)^alpha (2*gamma)^beta after the substitution lam = 2*gamma - 1.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateParams, OmegaRangeWarning, QuadratureUnderResolved

_DENOM_TOL = 1e-14


@dataclass(frozen=True)
class JacobiParams:
    """Tunable family parameters (alpha, beta) plus the fixed mixing
    weight gamma used by the accelerated solver's recursion."""

    alpha: float
    beta: float
    gamma: float = 0.0

    def __post_init__(self):
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise ValueError(
                f"need alpha > -1 and beta > -1, got ({self.alpha}, {self.beta})"
            )
        if self.alpha < self.beta:
            raise ValueError(
                f"need alpha >= beta, got ({self.alpha}, {self.beta})"
            )
        if not (0.0 <= self.gamma <= 1.0):
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")


class RecurrenceCoeffs(NamedTuple):
    a_k: float
    b_k: float
    c_k: float
    tau_k: float
    k: int


def _check_denominators(factors, k):
    for value in factors:
        if abs(value) < _DENOM_TOL:
            raise DegenerateParams(
                f"recurrence denominator factor {value!r} is numerically zero at k={k}"
            )


def recurrence_coeffs(params, k: int) -> RecurrenceCoeffs:
    """Recurrence weights (a_k, b_k, c_k) for the given degree.

    Satisfies a_k + b_k - c_k = 1 and c_0 = 0.
    """
    if k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    alpha, beta = params.alpha, params.beta
    tau = k + alpha + beta + 1.0
    if k == 0:
        den = 2.0 * (1.0 + alpha)
        _check_denominators([den], 0)
        return RecurrenceCoeffs(
            a_k=(alpha + beta + 2.0) / den,
            b_k=(alpha - beta) / den,
            c_k=0.0,
            tau_k=tau,
            k=0,
        )
    _check_denominators([tau, tau - beta, tau + k - 1.0], k)
    a = (tau + k) * (tau + k + 1.0) / (2.0 * tau * (tau - beta))
    b = (tau + k) * (alpha**2 - beta**2) / (2.0 * tau * (tau - beta) * (tau + k - 1.0))
    c = k * (k + beta) * (tau + k + 1.0) / (tau * (tau - beta) * (tau + k - 1.0))
    return RecurrenceCoeffs(a_k=a, b_k=b, c_k=c, tau_k=tau, k=k)


def recurrence_table(params, k_max: int):
    """Vectorized recurrence weights for all degrees 0..k_max.

    Returns (a, b, c) arrays of length k_max + 1.
    """
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    alpha, beta = params.alpha, params.beta
    a = np.empty(k_max + 1)
    b = np.empty(k_max + 1)
    c = np.zeros(k_max + 1)
    den0 = 2.0 * (1.0 + alpha)
    _check_denominators([den0], 0)
    a[0] = (alpha + beta + 2.0) / den0
    b[0] = (alpha - beta) / den0
    if k_max >= 1:
        k = np.arange(1, k_max + 1, dtype=float)
        tau = k + alpha + beta + 1.0
        factors = np.concatenate([tau, tau - beta, tau + k - 1.0])
        if np.min(np.abs(factors)) < _DENOM_TOL:
            bad = factors[np.argmin(np.abs(factors))]
            raise DegenerateParams(
                f"recurrence denominator factor {bad!r} is numerically zero"
            )
        a[1:] = (tau + k) * (tau + k + 1.0) / (2.0 * tau * (tau - beta))
        b[1:] = (tau + k) * (alpha**2 - beta**2) / (
            2.0 * tau * (tau - beta) * (tau + k - 1.0)
        )
        c[1:] = k * (k + beta) * (tau + k + 1.0) / (
            tau * (tau - beta) * (tau + k - 1.0)
        )
    return a, b, c


def eval_jacobi(params, k: int, lam):
    """Evaluate J_k at lam (scalar or array) by forward recursion."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    lam = np.asarray(lam, dtype=float)
    prev = np.ones_like(lam)
    if k == 0:
        return prev if prev.ndim else float(prev)
    rc = recurrence_coeffs(params, 0)
    cur = rc.a_k * lam + rc.b_k
    for i in range(1, k):
        rc = recurrence_coeffs(params, i)
        cur, prev = (rc.a_k * lam + rc.b_k) * cur - rc.c_k * prev, cur
    return cur if cur.ndim else float(cur)


def omega(params, k: int) -> float:
    """Combined weight omega_k = a_k (1 - gamma) + b_k applied to the fresh
    solver update; warns when it leaves [0, 1]."""
    rc = recurrence_coeffs(params, k)
    value = rc.a_k * (1.0 - params.gamma) + rc.b_k
    if not (0.0 <= value <= 1.0):
        warnings.warn(
            f"omega_{k} = {value:.6g} outside [0, 1] for "
            f"(alpha={params.alpha}, beta={params.beta}, gamma={params.gamma})",
            OmegaRangeWarning,
            stacklevel=2,
        )
    return value


def expand_coeffs(params, k: int) -> np.ndarray:
    """Coefficient vector of J_k in ascending powers of its variable.

    Entry i multiplies lam^i; length is k + 1.  expand_coeffs(., 0) == [1].
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    prev = np.array([1.0])
    if k == 0:
        return prev
    rc = recurrence_coeffs(params, 0)
    cur = np.array([rc.b_k, rc.a_k])
    for i in range(1, k):
        rc = recurrence_coeffs(params, i)
        nxt = np.zeros(i + 2)
        nxt[1:] += rc.a_k * cur
        nxt[: i + 1] += rc.b_k * cur
        nxt[:i] -= rc.c_k * prev
        prev, cur = cur, nxt
    return cur


@functools.lru_cache(maxsize=32)
def _gauss_legendre_unit(nodes: int):
    """Gauss-Legendre nodes/weights transplanted from [-1, 1] to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    return (x + 1.0) / 2.0, w / 2.0


def weighted_poly_norm(poly, alpha: float, beta: float, p: int = 2,
                       nodes: int = 64) -> float:
    """Weighted norm-type integral of a polynomial against the Jacobi weight.

    Computes  int_0^1 |poly(2g - 1)|^p (2 - 2g)^alpha (2g)^beta dg  by
    fixed-node Gauss-Legendre quadrature with the weight folded into the
    integrand.  `poly` is an ascending coefficient vector; the polynomial
    variable is evaluated at 2g - 1, the image of [0, 1] under the change
    of variable that carries the weight (1-lam)^alpha (1+lam)^beta.
    """
    coeffs = np.asarray(poly, dtype=float)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise ValueError("poly must be a nonempty 1-d coefficient vector")
    if not (alpha > -1.0 and beta > -1.0):
        raise ValueError(f"need alpha, beta > -1, got ({alpha}, {beta})")
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p}")
    degree = coeffs.size - 1
    if nodes < degree + 1:
        raise QuadratureUnderResolved(
            f"{nodes} nodes cannot resolve degree {degree} (need >= {degree + 1})"
        )
    g, w = _gauss_legendre_unit(nodes)
    vals = np.polynomial.polynomial.polyval(2.0 * g - 1.0, coeffs)
    weight = (2.0 - 2.0 * g) ** alpha * (2.0 * g) ** beta
    return float(np.sum(w * np.abs(vals) ** p * weight))


def weighted_inner_product(poly_a, poly_b, alpha: float, beta: float,
                           nodes: int = 64) -> float:
    """Quadrature inner product of two polynomials under the Jacobi weight,
    via polarization of weighted_poly_norm with p = 2."""
    pa = np.asarray(poly_a, dtype=float)
    pb = np.asarray(poly_b, dtype=float)
    n = max(pa.size, pb.size)
    pa = np.pad(pa, (0, n - pa.size))
    pb = np.pad(pb, (0, n - pb.size))
    plus = weighted_poly_norm(pa + pb, alpha, beta, p=2, nodes=nodes)
    minus = weighted_poly_norm(pa - pb, alpha, beta, p=2, nodes=nodes)
    return 0.25 * (plus - minus)
