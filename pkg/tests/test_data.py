"""Dataset loading, splitting, and the synthetic tree generator."""

import json

import numpy as np
import pytest

from hyperklein.data import (
    DataError,
    Dataset,
    gen_tree_dataset,
    load_dataset,
    save_dataset,
    split,
)


def softmax_train_accuracy(features, labels, iters=400, lr=0.5):
    """Plain multinomial logistic regression, full batch gradient descent."""
    n, d = features.shape
    c = int(labels.max()) + 1
    w = np.zeros((c, d))
    b = np.zeros(c)
    onehot = np.eye(c)[labels]
    for _ in range(iters):
        z = features @ w.T + b
        z -= z.max(axis=1, keepdims=True)
        p = np.exp(z)
        p /= p.sum(axis=1, keepdims=True)
        g = (p - onehot) / n
        w -= lr * (g.T @ features)
        b -= lr * g.sum(axis=0)
    return float(((features @ w.T + b).argmax(axis=1) == labels).mean())


class TestLoad:
    def test_texas_format_counts(self, texas_file):
        ds = load_dataset(texas_file)
        assert ds.n == 183
        assert ds.dim == 1703
        assert ds.n_classes == 5
        assert ds.train_idx.size == 0  # splits absent, left for `split`

    def test_missing_file(self, tmp_path):
        with pytest.raises((DataError, OSError)):
            load_dataset(tmp_path / "nope.json")

    def test_parse_error_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"features": [[1.0]],\n "labels": [0,]}', encoding="utf-8")
        with pytest.raises(DataError, match="parse error: line 2"):
            load_dataset(path)

    def test_empty_features(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"features": [], "labels": []}), encoding="utf-8")
        with pytest.raises(DataError, match="invalid dataset"):
            load_dataset(path)

    def test_label_gap_rejected(self, tmp_path):
        path = tmp_path / "gap.json"
        doc = {"features": [[1.0], [2.0], [3.0]], "labels": [0, 1, 3]}
        path.write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(DataError, match="invalid dataset"):
            load_dataset(path)

    def test_negative_label_rejected(self, tmp_path):
        path = tmp_path / "neg.json"
        doc = {"features": [[1.0], [2.0]], "labels": [0, -1]}
        path.write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(DataError, match="invalid dataset"):
            load_dataset(path)

    def test_edges_accepted_and_ignored(self, tmp_path):
        path = tmp_path / "edges.json"
        doc = {
            "features": [[1.0], [2.0]],
            "labels": [0, 1],
            "edges": [[0, 1]],
        }
        path.write_text(json.dumps(doc), encoding="utf-8")
        ds = load_dataset(path)
        assert ds.n == 2

    def test_round_trip(self, tmp_path):
        ds = gen_tree_dataset(4, 8, 0.1, seed=5)
        path = tmp_path / "tree.json"
        save_dataset(ds, path)
        back = load_dataset(path)
        np.testing.assert_array_equal(back.features, ds.features)
        np.testing.assert_array_equal(back.labels, ds.labels)
        for part in ("train", "val", "test"):
            np.testing.assert_array_equal(
                np.asarray(back.splits[part]), np.asarray(ds.splits[part])
            )
        assert back.name == ds.name

    def test_overlapping_splits_rejected(self):
        with pytest.raises(DataError, match="disjoint"):
            Dataset(
                np.ones((4, 2)),
                np.array([0, 1, 0, 1]),
                {"train": [0, 1], "val": [1], "test": []},
            )

    def test_train_missing_class_rejected(self):
        with pytest.raises(DataError, match="every class"):
            Dataset(
                np.ones((4, 2)),
                np.array([0, 1, 0, 1]),
                {"train": [0, 2], "val": [1], "test": [3]},
            )


class TestSplit:
    def balanced(self, n=100, classes=5):
        rng = np.random.default_rng(0)
        return Dataset(rng.normal(size=(n, 4)), np.arange(n) % classes)

    def test_sizes(self):
        ds = split(self.balanced(), (0.6, 0.2, 0.2), seed=1)
        assert ds.train_idx.size == 60
        assert ds.val_idx.size == 20
        assert ds.test_idx.size == 20

    def test_deterministic(self):
        a = split(self.balanced(), seed=9)
        b = split(self.balanced(), seed=9)
        np.testing.assert_array_equal(a.train_idx, b.train_idx)
        np.testing.assert_array_equal(a.test_idx, b.test_idx)

    def test_seed_changes_permutation_not_counts(self):
        base = self.balanced()
        sizes = set()
        seen = set()
        for seed in range(10):
            ds = split(base, seed=seed)
            sizes.add((ds.train_idx.size, ds.val_idx.size, ds.test_idx.size))
            counts = tuple(np.bincount(ds.labels[ds.train_idx], minlength=5))
            assert counts == (12, 12, 12, 12, 12)
            seen.add(tuple(ds.train_idx))
        assert sizes == {(60, 20, 20)}
        assert len(seen) > 1

    def test_partition(self):
        ds = split(self.balanced(97, 4), seed=3)
        joined = np.concatenate([ds.train_idx, ds.val_idx, ds.test_idx])
        assert np.unique(joined).size == joined.size == 97

    def test_stratification_within_one(self):
        ds = split(self.balanced(97, 4), (0.6, 0.2, 0.2), seed=3)
        for cls in range(4):
            members = (ds.labels == cls).sum()
            got = np.bincount(ds.labels[ds.train_idx], minlength=4)[cls]
            assert abs(got - 0.6 * members) <= 1.0

    def test_small_class_rejected(self):
        ds = Dataset(np.ones((5, 2)), np.array([0, 0, 0, 1, 1]))
        with pytest.raises(DataError, match="too small to stratify"):
            split(ds, seed=0)

    def test_bad_ratios(self):
        with pytest.raises(DataError):
            split(self.balanced(), (0.5, 0.2, 0.2), seed=0)


class TestGenTree:
    def test_depth_four_counts(self):
        ds = gen_tree_dataset(4, 8, 0.1, seed=0)
        assert ds.n == 31
        assert ds.n_classes == 5

    def test_depth_six_counts(self):
        ds = gen_tree_dataset(6, 16, 0.1, seed=0)
        assert ds.n == 127
        assert ds.n_classes == 7

    def test_siblings_differ_in_one_sign(self):
        ds = gen_tree_dataset(4, 8, 0.0, seed=0)
        # heap children of node p (1-based) are 2p and 2p+1
        for parent in range(1, 16):
            left = ds.features[2 * parent - 1]
            right = ds.features[2 * parent]
            diff = np.nonzero(left != right)[0]
            assert diff.size == 1
            assert left[diff[0]] == -right[diff[0]]

    def test_labels_are_depths(self):
        ds = gen_tree_dataset(5, 8, 0.0, seed=0)
        counts = np.bincount(ds.labels)
        np.testing.assert_array_equal(counts, [2**k for k in range(6)])

    def test_deterministic(self):
        a = gen_tree_dataset(4, 8, 0.3, seed=11)
        b = gen_tree_dataset(4, 8, 0.3, seed=11)
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.train_idx, b.train_idx)

    def test_separability_probe(self):
        # depth is the count of filled coordinates, which no linear map of the
        # signed features can express; the magnitude probe is the linear one
        ds = gen_tree_dataset(6, 16, 0.1, seed=1)
        acc = softmax_train_accuracy(np.abs(ds.features), ds.labels)
        assert acc >= 0.9

    def test_every_class_in_train(self):
        ds = gen_tree_dataset(6, 16, 0.1, seed=2)
        assert np.unique(ds.labels[ds.train_idx]).size == ds.n_classes

    def test_parameter_validation(self):
        with pytest.raises(DataError):
            gen_tree_dataset(1, 8, 0.1, seed=0)
        with pytest.raises(DataError):
            gen_tree_dataset(4, 3, 0.1, seed=0)
