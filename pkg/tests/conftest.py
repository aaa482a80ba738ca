"""Shared fixtures: generated dataset files in the three supported formats.

The real UCI / Movielens files are not bundled, so the suite generates
stand-ins with the same shapes and format quirks (missing-value markers,
1-based ids, tab separation) and realistic statistical structure: planted
near-separable labels for the classification set, mixed-scale features for
the regression set, and low-rank-plus-noise ratings for the completion set.
"""

import numpy as np
import pytest


@pytest.fixture(scope="session")
def breast_cancer_path(tmp_path_factory):
    """699 rows in UCI breast-cancer-wisconsin.data format, with '?' marks."""
    rng = np.random.default_rng(42)
    m, d = 699, 9
    features = rng.integers(1, 11, size=(m, d))
    w = rng.standard_normal(d)
    margin = (features - features.mean(axis=0)) @ w
    labels = np.where(margin + 3.0 * rng.standard_normal(m) > 0, 4, 2)
    missing = rng.choice(m, size=16, replace=False)

    path = tmp_path_factory.mktemp("data") / "breast-cancer-wisconsin.data"
    with open(path, "w") as fh:
        for i in range(m):
            fields = [str(1000000 + i)]
            for j in range(d):
                if j == 5 and i in missing:
                    fields.append("?")
                else:
                    fields.append(str(features[i, j]))
            fields.append(str(labels[i]))
            fh.write(",".join(fields) + "\n")
    return path


@pytest.fixture(scope="session")
def pima_path(tmp_path_factory):
    """768 rows in Pima format: 8 mixed-scale features, binary outcome."""
    rng = np.random.default_rng(43)
    m, d = 768, 8
    scales = np.array([3.0, 30.0, 70.0, 20.0, 80.0, 7.0, 0.5, 33.0])
    offsets = np.array([4.0, 120.0, 70.0, 20.0, 80.0, 32.0, 0.5, 33.0])
    features = offsets + scales * rng.standard_normal((m, d))
    z = (features - features.mean(axis=0)) / features.std(axis=0)
    logits = z @ rng.standard_normal(d) * 0.8
    outcome = (rng.random(m) < 1.0 / (1.0 + np.exp(-logits))).astype(int)

    path = tmp_path_factory.mktemp("data") / "pima.csv"
    with open(path, "w") as fh:
        for i in range(m):
            row = [f"{v:.3f}" for v in features[i]] + [str(outcome[i])]
            fh.write(",".join(row) + "\n")
    return path


@pytest.fixture(scope="session")
def movielens_path(tmp_path_factory):
    """Exactly 100000 ratings over 943 users x 1682 items in u.data format.

    Ratings follow a low-rank user/item model plus noise, rounded to 1..5,
    matching the source data's mean/spread closely enough for the solvers
    to behave representatively.
    """
    rng = np.random.default_rng(44)
    n_users, n_items = 943, 1682
    n_ratings = 100000
    flat = rng.choice(n_users * n_items, size=n_ratings, replace=False)
    users, items = np.unravel_index(flat, (n_users, n_items))

    rank = 6
    fu = rng.standard_normal((n_users, rank))
    fi = rng.standard_normal((n_items, rank))
    raw = np.sum(fu[users] * fi[items], axis=1)
    raw = (raw - raw.mean()) / raw.std()
    ratings = np.clip(np.round(3.53 + 0.9 * raw + 0.6 * rng.standard_normal(n_ratings)),
                      1, 5).astype(int)

    # every id must appear so the loader reconstructs the full dimensions
    assert np.unique(users).size == n_users and np.unique(items).size == n_items
    assert ratings.max() == 5

    path = tmp_path_factory.mktemp("data") / "u.data"
    with open(path, "w") as fh:
        for u, i, r in zip(users, items, ratings):
            fh.write(f"{u + 1}\t{i + 1}\t{r}\t881250949\n")
    return path
