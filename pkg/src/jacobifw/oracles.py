"""Linear minimization oracles over norm balls.

For a constraint set C and gradient g, lmo returns argmin_{s in C} <g, s>
in closed form: the l2 and l1 balls have textbook solutions, the nuclear
ball needs the top singular pair of g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence
from .linalg import power_iteration, top_singular_values

L2_BALL = "l2"
L1_BALL = "l1"
NUCLEAR_BALL = "nuclear"
_KINDS = (L2_BALL, L1_BALL, NUCLEAR_BALL)

STATIONARY_NORM = 1e-14

# largest dimension for which nuclear-norm feasibility uses an exact SVD
EXACT_SVD_LIMIT = 64


@dataclass(frozen=True)
class ConstraintSet:
    """Norm ball ||x|| <= radius in the l2, l1, or nuclear norm."""

    kind: str
    radius: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}; want one of {_KINDS}")
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")


def lmo(cset: ConstraintSet, g, tol: float = 1e-8, seed: int = 0):
    """Linear minimization oracle: argmin_{s in C} <g, s>.

    Returns (s, stationary).  When ||g|| <= STATIONARY_NORM the gradient
    carries no direction information and any feasible point is optimal; the
    zero point is returned with stationary=True rather than raising, so
    solvers can terminate cleanly.

    Closed forms: l2 ball -> -r g/||g||_2; l1 ball -> -r sign(g_i*) e_i*
    with i* the first index of max |g_i|; nuclear ball -> -r u v^T from the
    top singular pair of g.
    """
    g = np.asarray(g, dtype=float)
    if not np.all(np.isfinite(g)):
        raise ValueError("gradient contains non-finite entries")
    if np.linalg.norm(g.ravel()) <= STATIONARY_NORM:
        return np.zeros_like(g), True

    r = cset.radius
    if cset.kind == L2_BALL:
        return -r * g / np.linalg.norm(g), False
    if cset.kind == L1_BALL:
        if g.ndim != 1:
            raise ValueError("l1-ball oracle expects a vector gradient")
        i = int(np.argmax(np.abs(g)))  # np.argmax takes the lowest index on ties
        s = np.zeros_like(g)
        s[i] = -r * np.sign(g[i])
        return s, False
    # nuclear ball
    if g.ndim != 2:
        raise ValueError("nuclear-ball oracle expects a matrix gradient")
    last_err = None
    for attempt in range(3):
        try:
            _, u, v = power_iteration(g, tol=tol, seed=seed + attempt)
            return -r * np.outer(u, v), False
        except NoConvergence as err:
            last_err = err
    raise last_err


def defining_norm(cset: ConstraintSet, x) -> float:
    """Norm of x in the set's defining norm.

    The nuclear norm is exact (full SVD) up to EXACT_SVD_LIMIT in either
    dimension; above that it is a deflated top-10 power-iteration lower
    bound, reported as approximate.
    """
    x = np.asarray(x, dtype=float)
    if cset.kind == L2_BALL:
        return float(np.linalg.norm(x))
    if cset.kind == L1_BALL:
        return float(np.sum(np.abs(x)))
    if x.ndim != 2:
        raise ValueError("nuclear norm requires a matrix")
    if not np.any(x):
        return 0.0
    if max(x.shape) <= EXACT_SVD_LIMIT:
        return float(np.sum(np.linalg.svd(x, compute_uv=False)))
    return float(np.sum(top_singular_values(x, count=10)))


def contains(cset: ConstraintSet, x, slack: float = 0.0) -> bool:
    """Feasibility check: defining norm within radius * (1 + slack)."""
    return defining_norm(cset, x) <= cset.radius * (1.0 + slack)


def diameter(cset: ConstraintSet) -> float:
    """sup ||x - y||_2 over the set, attained at antipodal boundary points.

    2r for the l2 ball, 2r for the l1 ball (at +-r e_i), and 2r in
    Frobenius norm for the nuclear ball (||X||_F <= ||X||_* bounds the sup,
    attained at +-r u v^T).
    """
    return 2.0 * cset.radius
