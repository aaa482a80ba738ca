"""Projection-free solvers: vanilla Frank-Wolfe and its Jacobi-recursion
accelerated variant, with duality-gap certificates and trace recording.

Both methods share the direction-finding step s_k = argmin_{s in C}
<grad f(x_k), s> and the open-loop schedule gamma_k = 2/(k+2).  Vanilla FW
updates by the convex combination x_{k+1} = x_k + gamma_k (s_k - x_k).  The
accelerated variant forms the same intermediate update y_{k+1}, then mixes
it with the current iterate using the polynomial recurrence weights:

    z_{k+1} = (a_k (1 - gamma) + b_k) y_{k+1} - c_k x_k
    x_{k+1} = z_{k+1} + gamma a_k x_k

The two coefficients applied to {y_{k+1}, x_k} sum to exactly 1, so the
update is affine but not necessarily convex; feasibility is audited per
iteration rather than assumed.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BetaZero, DegenerateConfigWarning, InfeasibleStart
from .oracles import (EXACT_SVD_LIMIT, NUCLEAR_BALL, ConstraintSet,
                      contains, defining_norm, lmo)
from .polynomials import JacobiParams, omega, recurrence_coeffs

FW = "fw"
JFW = "jfw"


def step_size(k: int) -> float:
    """Open-loop schedule gamma_k = 2/(k+2), in (0, 1]."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return 2.0 / (k + 2)


def duality_gap(obj, x, s) -> float:
    """Frank-Wolfe gap <grad f(x), x - s> with s the oracle output at x.

    Upper-bounds f(x) - f(x*) for convex f, and is nonnegative up to
    roundoff.
    """
    g = obj.gradient(x)
    return float(np.vdot(g, np.asarray(x, dtype=float) - np.asarray(s, dtype=float)))


def gap_bound_fw(L: float, D: float, k: int) -> float:
    """Worst-case suboptimality bound 2 L D^2 / (k + 2) for vanilla FW."""
    if L < 0 or D < 0:
        raise ValueError("L and D must be nonnegative")
    return 2.0 * L * D * D / (k + 2)


def gap_bound_jfw(L: float, D: float, k: int, alpha: float, beta: float) -> float:
    """Accelerated bound |alpha/beta| * 4 L D^2 / ((k+1)(k+2)).

    Undefined at beta = 0 (raises BetaZero).
    """
    if L < 0 or D < 0:
        raise ValueError("L and D must be nonnegative")
    if beta == 0:
        raise BetaZero("the accelerated bound is undefined at beta = 0")
    return abs(alpha / beta) * 4.0 * L * D * D / ((k + 1) * (k + 2))


def descent_bound(L: float, D: float, k: int, params: JacobiParams) -> float:
    """Predicted per-step decrease 6 omega_k L D^2 / (k+2)^2.

    Diagnostic only: its validity range over arbitrary parameters is not
    established, so traces report it without asserting it.
    """
    return 6.0 * omega(params, k) * L * D * D / (k + 2) ** 2


@dataclass
class SolverConfig:
    """Run parameters shared by both solvers.

    jacobi must be provided exactly when method == "jfw".  record_gap
    controls both gap recording and the gap-floor early exit.
    """

    method: str
    max_iters: int
    jacobi: Optional[JacobiParams] = None
    oracle_tol: float = 1e-8
    seed: int = 0
    record_gap: bool = True
    gap_floor: float = 1e-12

    def __post_init__(self):
        if self.method not in (FW, JFW):
            raise ValueError(f"method must be {FW!r} or {JFW!r}, got {self.method!r}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if (self.jacobi is not None) != (self.method == JFW):
            raise ValueError("jacobi parameters are required iff method is 'jfw'")


@dataclass
class TraceRecord:
    """Per-iteration record; k indexes the iterate the record describes."""

    k: int
    f_value: float
    duality_gap: Optional[float]
    subopt: Optional[float]
    normalized_error: Optional[float]
    wall_ms: float
    feasibility_slack: float


class _SlackAudit:
    """Per-iteration feasibility slack max(0, ||x_k|| / r - 1).

    Vector norms are evaluated exactly.  For nuclear balls beyond the exact
    SVD limit the norm is tracked structurally through the update
    coefficients (an upper bound: |w1| n(y) + |w2| n(x) bounds the norm of
    the affine combination), avoiding a full SVD per iteration.
    """

    def __init__(self, cset: ConstraintSet, x0):
        self.cset = cset
        self.structural = (cset.kind == NUCLEAR_BALL
                           and max(np.asarray(x0).shape) > EXACT_SVD_LIMIT)
        self.bound = defining_norm(cset, x0) if self.structural else None
        self._x_norm = None if self.structural else defining_norm(cset, x0)

    def slack(self) -> float:
        norm = self.bound if self.structural else self._x_norm
        return max(0.0, norm / self.cset.radius - 1.0)

    def update(self, x_next, w_fresh: float, w_old: float, gamma_k: float):
        """Advance past x_{k+1} = w_fresh * y_{k+1} + w_old * x_k, where
        y_{k+1} = x_k + gamma_k (s_k - x_k) and s_k is on the boundary."""
        if self.structural:
            y_bound = (1.0 - gamma_k) * self.bound + gamma_k * self.cset.radius
            self.bound = abs(w_fresh) * y_bound + abs(w_old) * self.bound
        else:
            self._x_norm = defining_norm(self.cset, x_next)


def _run(obj, cset: ConstraintSet, x0, config: SolverConfig,
         f_star: Optional[float],
         normalized_error_fn: Optional[Callable]) -> list[TraceRecord]:
    x0 = np.asarray(x0, dtype=float)
    if not contains(cset, x0, slack=1e-9):
        raise InfeasibleStart(
            f"start point has {cset.kind} norm {defining_norm(cset, x0):.6g} "
            f"> radius {cset.radius:.6g}"
        )

    accelerated = config.method == JFW
    params = config.jacobi
    frozen = (accelerated and params.alpha == params.beta and params.gamma == 1.0)
    if frozen:
        warnings.warn(
            "alpha == beta with gamma == 1 freezes the trajectory "
            "(b_k = 0 and gamma a_k - c_k = 1, so x_{k+1} = x_k); "
            "recording the start point only",
            DegenerateConfigWarning,
            stacklevel=3,
        )

    x = x0.copy()
    audit = _SlackAudit(cset, x0)
    records: list[TraceRecord] = []
    t0 = time.perf_counter()

    def record(k, f, gap):
        records.append(TraceRecord(
            k=k,
            f_value=float(f),
            duality_gap=None if gap is None else float(gap),
            subopt=None if f_star is None else float(f - f_star),
            normalized_error=(None if normalized_error_fn is None
                              else float(normalized_error_fn(x))),
            wall_ms=(time.perf_counter() - t0) * 1e3,
            feasibility_slack=float(audit.slack()),
        ))

    k = 0
    while True:
        g = obj.gradient(x)
        f = obj.value(x)
        s, stationary = lmo(cset, g, tol=config.oracle_tol, seed=config.seed)
        gap = float(np.vdot(g, x - s)) if config.record_gap else None
        record(k, f, gap)

        if stationary or frozen or k >= config.max_iters:
            break
        if gap is not None and gap < config.gap_floor:
            break

        gamma_k = step_size(k)
        y = x + gamma_k * (s - x)
        if accelerated:
            rc = recurrence_coeffs(params, k)
            w_fresh = rc.a_k * (1.0 - params.gamma) + rc.b_k
            w_old = params.gamma * rc.a_k - rc.c_k
        else:
            w_fresh, w_old = 1.0, 0.0
        x = w_fresh * y + w_old * x
        audit.update(x, w_fresh, w_old, gamma_k)
        k += 1

    return records


def run_fw(obj, cset: ConstraintSet, x0, config: SolverConfig,
           f_star: Optional[float] = None,
           normalized_error_fn: Optional[Callable] = None) -> list[TraceRecord]:
    """Vanilla Frank-Wolfe.  Returns one TraceRecord per iterate x_0..x_K.

    Every iterate is a convex combination of feasible points and stays
    feasible; the run stops at max_iters, on a stationary gradient, or when
    the duality gap falls below config.gap_floor.
    """
    if config.method != FW:
        raise ValueError(f"run_fw called with method {config.method!r}")
    return _run(obj, cset, x0, config, f_star, normalized_error_fn)


def run_jfw(obj, cset: ConstraintSet, x0, config: SolverConfig,
            f_star: Optional[float] = None,
            normalized_error_fn: Optional[Callable] = None) -> list[TraceRecord]:
    """Jacobi-recursion accelerated Frank-Wolfe (see module docstring).

    The coefficients applied to {y_{k+1}, x_k} always sum to 1; because the
    x_k coefficient gamma a_k - c_k can be negative the combination is
    affine, so each record carries an audited feasibility slack instead of
    a feasibility guarantee.  The config alpha == beta with gamma == 1 is
    detected as a frozen trajectory and stops immediately with a warning.
    """
    if config.method != JFW:
        raise ValueError(f"run_jfw called with method {config.method!r}")
    return _run(obj, cset, x0, config, f_star, normalized_error_fn)
