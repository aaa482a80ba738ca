"""Dense linear-algebra helpers: top singular triple by power iteration.

Vectors and matrices are plain numpy arrays throughout the toolkit; norms
and inner products are numpy's.  What lives here is the alternating power
iteration used by the nuclear-norm oracle (it never forms M^T M, so it is
safe on tall skinny operands) and a deflated variant used for approximate
nuclear-norm bounds.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NoConvergence, ZeroMatrix


class SingularTriple(NamedTuple):
    sigma: float
    u: np.ndarray
    v: np.ndarray


def power_iteration(M, tol: float = 1e-10, max_iters: int = 5000,
                    seed: int = 0) -> SingularTriple:
    """Top singular triple of a dense matrix by alternating power iteration.

    Iterates u <- Mv/||Mv||, v <- M^T u/||M^T u|| from a seeded random start
    until the pair residual ||Mv - sigma u|| drops below tol * sigma.  The
    triple is only defined up to a joint sign flip of (u, v).

    Raises NoConvergence after max_iters (retry with a different seed) and
    ZeroMatrix when ||M||_F = 0.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not np.any(M):
        raise ZeroMatrix("power iteration on an all-zero matrix")

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(M.shape[1])
    v /= np.linalg.norm(v)
    Mv = M @ v
    for _ in range(max_iters):
        nu = np.linalg.norm(Mv)
        if nu == 0.0:
            # start landed in the null space; bail out so the caller reseeds
            raise NoConvergence("iterate collapsed to the null space of M")
        u = Mv / nu
        Mtu = M.T @ u
        nv = np.linalg.norm(Mtu)
        if nv == 0.0:
            raise NoConvergence("iterate collapsed to the null space of M^T")
        v = Mtu / nv
        Mv = M @ v
        sigma = float(u @ Mv)
        if np.linalg.norm(Mv - sigma * u) <= tol * sigma:
            return SingularTriple(sigma=sigma, u=u, v=v)
    raise NoConvergence(
        f"power iteration did not reach tol={tol} within {max_iters} iterations"
    )


def top_singular_values(M, count: int, tol: float = 1e-8,
                        max_iters: int = 2000, seed: int = 0) -> np.ndarray:
    """Leading singular values by power iteration with deflation.

    Returns at most `count` values in decreasing order; stops early if the
    deflated remainder is zero or an iteration fails to converge, so the sum
    of the result is always a valid lower bound on the nuclear norm.
    """
    M = np.asarray(M, dtype=float).copy()
    count = min(count, min(M.shape))
    sigmas = []
    for i in range(count):
        if not np.any(M):
            break
        try:
            sigma, u, v = power_iteration(M, tol=tol, max_iters=max_iters,
                                          seed=seed + i)
        except NoConvergence:
            break
        sigmas.append(sigma)
        M -= sigma * np.outer(u, v)
    return np.array(sigmas)
