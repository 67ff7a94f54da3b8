"""Shared fixtures: synthetic datasets written in the on-disk JSON format."""

import json

import numpy as np
import pytest

# node counts per class chosen to total 183 with every class stratifiable
TEXAS_CLASS_SIZES = (33, 18, 101, 21, 10)
TEXAS_FEATURES = 1703


def write_texas_like(path, seed=0):
    """183 nodes, 1703 sparse binary features, 5 separable classes."""
    rng = np.random.default_rng(seed)
    prototypes = rng.random((len(TEXAS_CLASS_SIZES), TEXAS_FEATURES)) < 0.06
    rows, labels = [], []
    for cls, size in enumerate(TEXAS_CLASS_SIZES):
        for _ in range(size):
            keep = rng.random(TEXAS_FEATURES) < 0.9
            background = rng.random(TEXAS_FEATURES) < 0.005
            rows.append(((prototypes[cls] & keep) | background).astype(float).tolist())
            labels.append(cls)
    order = rng.permutation(len(labels))
    doc = {
        "name": "texas-like",
        "features": [rows[i] for i in order],
        "labels": [labels[i] for i in order],
        "edges": [[0, 1], [1, 2]],
    }
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def texas_file(tmp_path_factory):
    return write_texas_like(tmp_path_factory.mktemp("data") / "texas_like.json", seed=0)
