"""Smooth convex objectives with exact gradients.

All objectives expose value(x) -> float and gradient(x) -> ndarray and are
immutable after construction, so they can be shared freely between solver
runs.  The Huber loss follows the convention H_d(c) = c^2 on |c| <= d and
2 d |c| - d^2 in the tails (note: c^2, not c^2/2, so the gradient is 2c).
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from .errors import DegenerateTestSet, ShapeMismatch


def huber(c, delta: float):
    """Huber loss: c^2 on |c| <= delta, else 2*delta*|c| - delta^2."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    c = np.asarray(c, dtype=float)
    out = np.where(np.abs(c) <= delta, c * c, 2.0 * delta * np.abs(c) - delta**2)
    return out if out.ndim else float(out)


def huber_grad(c, delta: float):
    """Derivative of the Huber loss: 2c on |c| <= delta, else 2*delta*sign(c)."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    c = np.asarray(c, dtype=float)
    out = np.where(np.abs(c) <= delta, 2.0 * c, 2.0 * delta * np.sign(c))
    return out if out.ndim else float(out)


def _check_vector(x, dim, who):
    x = np.asarray(x, dtype=float)
    if x.shape != (dim,):
        raise ShapeMismatch(f"{who}: expected shape ({dim},), got {x.shape}")
    return x


class LogisticObjective:
    """Mean logistic loss (1/m) sum_i log(1 + exp(-b_i <a_i, x>)).

    Labels must be +-1.  Terms are evaluated through logaddexp so large
    margins never overflow.
    """

    def __init__(self, features, labels):
        self.features = np.asarray(features, dtype=float)
        self.labels = np.asarray(labels, dtype=float)
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-d matrix")
        m = self.features.shape[0]
        if m < 1:
            raise ValueError("need at least one sample")
        if self.labels.shape != (m,):
            raise ShapeMismatch(
                f"labels shape {self.labels.shape} does not match {m} samples"
            )
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        self.m, self.dim = self.features.shape

    def value(self, x) -> float:
        x = _check_vector(x, self.dim, "LogisticObjective.value")
        z = self.labels * (self.features @ x)
        return float(np.mean(np.logaddexp(0.0, -z)))

    def gradient(self, x) -> np.ndarray:
        x = _check_vector(x, self.dim, "LogisticObjective.gradient")
        z = self.labels * (self.features @ x)
        s = expit(-z)  # sigma(-z), saturates cleanly for large |z|
        return -(self.features.T @ (self.labels * s)) / self.m


class HuberRidgeObjective:
    """Mean Huber loss of residuals, (1/m) sum_i H_delta(y_i - <a_i, x>)."""

    def __init__(self, features, targets, delta: float):
        self.features = np.asarray(features, dtype=float)
        self.targets = np.asarray(targets, dtype=float)
        if not delta > 0:
            raise ValueError(f"delta must be positive, got {delta}")
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-d matrix")
        m = self.features.shape[0]
        if self.targets.shape != (m,):
            raise ShapeMismatch(
                f"targets shape {self.targets.shape} does not match {m} samples"
            )
        self.delta = float(delta)
        self.m, self.dim = self.features.shape

    def value(self, x) -> float:
        x = _check_vector(x, self.dim, "HuberRidgeObjective.value")
        r = self.targets - self.features @ x
        return float(np.mean(huber(r, self.delta)))

    def gradient(self, x) -> np.ndarray:
        x = _check_vector(x, self.dim, "HuberRidgeObjective.gradient")
        r = self.targets - self.features @ x
        return -(self.features.T @ huber_grad(r, self.delta)) / self.m


class MatrixCompletionObjective:
    """Unaveraged Huber loss over observed entries,
    sum_{(i,j) in Omega} H_delta(A_ij - X_ij).

    `observed` is a sequence of (row, col, value) triples; duplicates and
    out-of-range indices are rejected.  The gradient is zero outside Omega.
    """

    def __init__(self, observed, shape, delta: float):
        if not delta > 0:
            raise ValueError(f"delta must be positive, got {delta}")
        obs = np.asarray(list(observed) if not isinstance(observed, np.ndarray) else observed)
        if obs.ndim != 2 or obs.shape[1] != 3:
            raise ValueError("observed must be a sequence of (row, col, value) triples")
        self.shape = (int(shape[0]), int(shape[1]))
        self.rows = obs[:, 0].astype(int)
        self.cols = obs[:, 1].astype(int)
        self.values = obs[:, 2].astype(float)
        if np.any(self.rows < 0) or np.any(self.rows >= self.shape[0]) \
                or np.any(self.cols < 0) or np.any(self.cols >= self.shape[1]):
            raise ValueError("observed index outside the matrix shape")
        flat = self.rows * self.shape[1] + self.cols
        if np.unique(flat).size != flat.size:
            raise ValueError("duplicate (row, col) pairs in observations")
        self.delta = float(delta)
        self.n_observed = flat.size

    def _check(self, X, who):
        X = np.asarray(X, dtype=float)
        if X.shape != self.shape:
            raise ShapeMismatch(f"{who}: expected shape {self.shape}, got {X.shape}")
        return X

    def value(self, X) -> float:
        X = self._check(X, "MatrixCompletionObjective.value")
        r = self.values - X[self.rows, self.cols]
        return float(np.sum(huber(r, self.delta)))

    def gradient(self, X) -> np.ndarray:
        X = self._check(X, "MatrixCompletionObjective.gradient")
        G = np.zeros(self.shape)
        r = self.values - X[self.rows, self.cols]
        G[self.rows, self.cols] = -huber_grad(r, self.delta)
        return G


class QuadraticObjective:
    """f(x) = 0.5 x^T Q x + b^T x + c with symmetric PSD Q.

    The smoothness constant is the top eigenvalue of Q.  Symmetry is
    enforced here; positive semidefiniteness is checked by the test suite's
    eigenvalue oracle at construction time of test instances.
    """

    def __init__(self, psd_matrix, linear, offset: float = 0.0):
        Q = np.asarray(psd_matrix, dtype=float)
        b = np.asarray(linear, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("psd_matrix must be square")
        if np.max(np.abs(Q - Q.T)) > 1e-12:
            raise ValueError("psd_matrix must be symmetric to 1e-12")
        if b.shape != (Q.shape[0],):
            raise ShapeMismatch(
                f"linear term shape {b.shape} does not match matrix dim {Q.shape[0]}"
            )
        self.psd_matrix = Q
        self.linear = b
        self.offset = float(offset)
        self.dim = Q.shape[0]

    def value(self, x) -> float:
        x = _check_vector(x, self.dim, "QuadraticObjective.value")
        return float(0.5 * x @ self.psd_matrix @ x + self.linear @ x + self.offset)

    def gradient(self, x) -> np.ndarray:
        x = _check_vector(x, self.dim, "QuadraticObjective.gradient")
        return self.psd_matrix @ x + self.linear


def normalized_test_error(obj_test: MatrixCompletionObjective, X) -> float:
    """Held-out Huber error of X relative to the zero predictor:
    sum H_delta(A_ij - X_ij) / sum H_delta(A_ij) over the test entries."""
    denom = float(np.sum(huber(obj_test.values, obj_test.delta)))
    if denom == 0.0:
        raise DegenerateTestSet("all test ratings are zero")
    return obj_test.value(X) / denom
