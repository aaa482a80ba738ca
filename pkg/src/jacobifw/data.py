"""Dataset ingestion and synthetic problem generation.

Loaders are pure functions of the file bytes and never download anything;
paths point at files the user provides.  Formats:

  * breast cancer: 11 comma-separated fields per line
    (sample id, 9 integer features in 1..10, class in {2, 4}), '?' missing
  * pima: 9 comma-separated numeric fields (8 features, outcome in {0, 1}),
    optional header line auto-detected
  * movielens: u.data style, 'user<TAB>item<TAB>rating<TAB>timestamp'
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DuplicateRating, EmptyDataset, ParseError
from .objectives import QuadraticObjective
from .oracles import L2_BALL, ConstraintSet

logger = logging.getLogger(__name__)

BREAST_CANCER_FEATURES = (
    "clump_thickness", "uniformity_cell_size", "uniformity_cell_shape",
    "marginal_adhesion", "single_epithelial_cell_size", "bare_nuclei",
    "bland_chromatin", "normal_nucleoli", "mitoses",
)


@dataclass(frozen=True)
class TabularDataset:
    features: np.ndarray  # (m, d)
    targets: np.ndarray   # (m,)
    feature_names: tuple


@dataclass(frozen=True)
class RatingDataset:
    """Rating triples with 0-based dense user/item indices."""

    users: np.ndarray    # (n,) int
    items: np.ndarray    # (n,) int
    ratings: np.ndarray  # (n,) float
    n_users: int
    n_items: int
    max_rating: float

    def __len__(self):
        return self.users.size

    @property
    def triples(self):
        """Observed ratings as a list of (user, item, rating)."""
        return list(zip(self.users.tolist(), self.items.tolist(),
                        self.ratings.tolist()))

    @property
    def density(self) -> float:
        return len(self) / (self.n_users * self.n_items)


def load_breast_cancer(path) -> TabularDataset:
    """UCI breast cancer (original) loader.

    Drops the sample id, maps class 2 -> -1 and 4 -> +1, imputes '?' with
    the per-column median of non-missing values, and scales features to
    [0, 1] by dividing by 10.
    """
    rows = []
    labels = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 11:
                raise ParseError(f"expected 11 comma-separated fields, got {len(fields)}",
                                 lineno)
            feats = []
            for value in fields[1:10]:
                if value == "?":
                    feats.append(np.nan)
                    continue
                try:
                    feats.append(float(int(value)))
                except ValueError:
                    raise ParseError(f"non-integer feature value {value!r}", lineno) from None
            try:
                cls = int(fields[10])
            except ValueError:
                raise ParseError(f"non-integer class value {fields[10]!r}", lineno) from None
            if cls not in (2, 4):
                raise ParseError(f"class must be 2 or 4, got {cls}", lineno)
            rows.append(feats)
            labels.append(-1.0 if cls == 2 else 1.0)
    if not rows:
        raise EmptyDataset(f"no data rows in {path}")
    features = np.array(rows)
    for j in range(features.shape[1]):
        col = features[:, j]
        missing = np.isnan(col)
        if missing.all():
            raise ParseError(f"feature column {j} ('{BREAST_CANCER_FEATURES[j]}') "
                             "is entirely missing; median imputation undefined")
        if missing.any():
            col[missing] = np.median(col[~missing])
    features /= 10.0
    return TabularDataset(features=features, targets=np.array(labels),
                          feature_names=BREAST_CANCER_FEATURES)


def load_pima(path) -> TabularDataset:
    """Pima diabetes loader: 8 numeric features standardized per column to
    zero mean / unit variance (constant columns left at zero), binary
    outcome kept as the target."""
    rows = []
    names = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 9:
                raise ParseError(f"expected 9 comma-separated fields, got {len(fields)}",
                                 lineno)
            if lineno == 1:
                try:
                    float(fields[0])
                except ValueError:
                    names = tuple(f.strip() for f in fields[:8])
                    continue
            try:
                values = [float(f) for f in fields]
            except ValueError:
                raise ParseError(f"non-numeric field in {line!r}", lineno) from None
            if values[8] not in (0.0, 1.0):
                raise ParseError(f"outcome must be 0 or 1, got {values[8]}", lineno)
            rows.append(values)
    if not rows:
        raise EmptyDataset(f"no data rows in {path}")
    data = np.array(rows)
    features = data[:, :8]
    mean = features.mean(axis=0)
    std = features.std(axis=0)
    features = np.where(std > 0, (features - mean) / np.where(std > 0, std, 1.0), 0.0)
    if len(rows) not in (767, 768):
        logger.info("pima row count %d differs from the canonical 768", len(rows))
    if names is None:
        names = tuple(f"feature_{j}" for j in range(8))
    return TabularDataset(features=features, targets=data[:, 8], feature_names=names)


def load_movielens(path) -> RatingDataset:
    """Movielens u.data loader: tab-separated user/item/rating/timestamp.

    1-based source ids become 0-based indices; dimensions are the largest
    ids seen.  Duplicate (user, item) pairs raise DuplicateRating.
    """
    users, items, ratings = [], [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ParseError(f"expected 4 tab-separated fields, got {len(fields)}",
                                 lineno)
            try:
                u, i, r = int(fields[0]), int(fields[1]), int(fields[2])
            except ValueError:
                raise ParseError(f"non-integer field in {line!r}", lineno) from None
            if u < 1 or i < 1:
                raise ParseError(f"ids must be 1-based positive, got ({u}, {i})", lineno)
            users.append(u - 1)
            items.append(i - 1)
            ratings.append(float(r))
    if not users:
        raise EmptyDataset(f"no ratings in {path}")
    users = np.array(users, dtype=int)
    items = np.array(items, dtype=int)
    ratings = np.array(ratings)
    n_users = int(users.max()) + 1
    n_items = int(items.max()) + 1
    flat = users * n_items + items
    if np.unique(flat).size != flat.size:
        dup = int(np.argmax(np.bincount(flat) > 1))
        raise DuplicateRating(
            f"duplicate rating for user {dup // n_items + 1}, item {dup % n_items + 1}"
        )
    return RatingDataset(users=users, items=items, ratings=ratings,
                         n_users=n_users, n_items=n_items,
                         max_rating=float(ratings.max()))


def save_movielens(ds: RatingDataset, path, timestamp: int = 0):
    """Serialize back to u.data format (1-based ids, constant timestamp)."""
    with open(path, "w") as fh:
        for u, i, r in zip(ds.users, ds.items, ds.ratings):
            fh.write(f"{u + 1}\t{i + 1}\t{int(r)}\t{timestamp}\n")


def inject_outliers(ds: RatingDataset, fraction: float, seed: int) -> RatingDataset:
    """Replace a seeded uniform subset of the observed ratings with the
    dataset's maximum rating.

    The subset has size round(fraction * observed count): only observed
    entries can affect the training loss, so the fraction is taken of the
    observations rather than of all matrix cells.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must be in [0, 1], got {fraction}")
    n_modify = int(round(fraction * len(ds)))
    ratings = ds.ratings.copy()
    if n_modify > 0:
        rng = np.random.default_rng(seed)
        idx = rng.choice(len(ds), size=n_modify, replace=False)
        ratings[idx] = ds.max_rating
    return RatingDataset(users=ds.users, items=ds.items, ratings=ratings,
                         n_users=ds.n_users, n_items=ds.n_items,
                         max_rating=ds.max_rating)


def train_test_split(ds: RatingDataset, train_fraction: float, seed: int):
    """Disjoint, exhaustive, seeded uniform split of the rating triples.

    Both halves keep the parent's dimensions and max_rating so matrices
    built from them stay shape-compatible.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(ds))
    n_train = int(round(train_fraction * len(ds)))
    parts = []
    for sel in (np.sort(perm[:n_train]), np.sort(perm[n_train:])):
        parts.append(RatingDataset(
            users=ds.users[sel], items=ds.items[sel], ratings=ds.ratings[sel],
            n_users=ds.n_users, n_items=ds.n_items, max_rating=ds.max_rating,
        ))
    return parts[0], parts[1]


def synth_quadratic(d: int, condition: float, radius: float, interior: bool,
                    seed: int):
    """Synthetic quadratic test problem over an l2 ball with known optimum.

    f(x) = 0.5 (x - x_u)^T Q (x - x_u) where Q has eigenvalues log-spaced
    in [1, condition] in a seeded random basis, so the smoothness constant
    is L = condition and the set diameter is D = 2 * radius.  The
    unconstrained minimizer x_u sits at half the radius (interior=True) or
    1.5x the radius (interior=False); in the boundary case the constrained
    optimum is found by a bisection on the trust-region parameter, solved
    to 1e-12 relative norm residual.

    Returns (objective, constraint_set, known_optimum, L, D).
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if condition < 1:
        raise ValueError(f"condition must be >= 1, got {condition}")
    rng = np.random.default_rng(seed)
    eigvals = np.logspace(np.log10(condition), 0.0, d)  # max first; d=1 -> [condition]
    basis, _ = np.linalg.qr(rng.standard_normal((d, d)))
    Q = (basis * eigvals) @ basis.T
    Q = 0.5 * (Q + Q.T)

    direction = rng.standard_normal(d)
    direction /= np.linalg.norm(direction)
    x_u = (0.5 if interior else 1.5) * radius * direction

    if interior:
        x_star = x_u
    else:
        # constrained minimizer x(mu) = (Q + mu I)^{-1} Q x_u with mu >= 0
        # chosen so ||x(mu)|| = radius; monotone decreasing in mu
        w = basis.T @ x_u
        scaled = eigvals * w

        def boundary_norm(mu):
            return np.sqrt(np.sum((scaled / (eigvals + mu)) ** 2))

        lo, hi = 0.0, condition * np.linalg.norm(x_u) / radius
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if boundary_norm(mid) > radius:
                lo = mid
            else:
                hi = mid
        mu = 0.5 * (lo + hi)
        x_star = basis @ (scaled / (eigvals + mu))
        assert abs(boundary_norm(mu) - radius) <= 1e-12 * radius

    obj = QuadraticObjective(psd_matrix=Q, linear=-Q @ x_u,
                             offset=0.5 * x_u @ Q @ x_u)
    cset = ConstraintSet(kind=L2_BALL, radius=radius)
    return obj, cset, x_star, float(condition), 2.0 * radius
