import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocal.data import (
    DEMO_CLUSTER_SIZE,
    DEMO_TARGET_MEANS,
    Dataset,
    gen_two_cluster,
    load_csv,
    make_folds,
    rotate_roles,
    save_csv,
)
from ocal.errors import ConfigurationError, CsvFormatError


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_csv_three_rows(tmp_path):
    path = write(tmp_path, "f0,f1,label\n1.0,2.0,0\n3.5,-1.0,0\n0.0,0.0,1\n")
    ds = load_csv(path)
    assert ds.n == 3 and ds.d == 2
    assert ds.target_ids.tolist() == [0, 1]
    assert ds.outlier_ids.tolist() == [2]
    assert ds.name == "data"


def test_load_csv_unknown_label_is_schema_error(tmp_path):
    path = write(tmp_path, "f0,label\n1.0,0\n2.0,2\n")
    with pytest.raises(CsvFormatError, match="row 3"):
        load_csv(path)


def test_load_csv_ragged_row_reports_row_number(tmp_path):
    path = write(tmp_path, "f0,f1,label\n1.0,2.0,0\n3.0,1\n")
    with pytest.raises(CsvFormatError, match="row 3"):
        load_csv(path)


def test_load_csv_non_numeric_feature(tmp_path):
    path = write(tmp_path, "f0,label\nok,0\n")
    with pytest.raises(CsvFormatError, match="row 2"):
        load_csv(path)


def test_load_csv_requires_label_header(tmp_path):
    path = write(tmp_path, "f0,f1,mark\n1.0,2.0,0\n")
    with pytest.raises(CsvFormatError):
        load_csv(path)


def test_dataset_needs_targets_and_two_rows(tmp_path):
    with pytest.raises(ValueError):
        load_csv(write(tmp_path, "f0,label\n1.0,1\n2.0,1\n"))
    with pytest.raises(ValueError):
        load_csv(write(tmp_path, "f0,label\n1.0,0\n", name="tiny.csv"))


def test_save_load_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    features = np.concatenate(
        [rng.normal(scale=1e-8, size=(5, 3)), rng.normal(scale=1e8, size=(5, 3)), [[0.1, 1 / 3, 1e-17]]]
    )
    labels = np.array([0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0])
    ds = Dataset("roundtrip", features, labels)
    path = tmp_path / "roundtrip.csv"
    save_csv(ds, path)
    back = load_csv(path)
    assert np.array_equal(back.features, ds.features)
    assert np.array_equal(back.labels, ds.labels)


def test_dataset_arrays_are_immutable():
    ds = Dataset("x", np.zeros((3, 2)), np.array([0, 0, 1]))
    with pytest.raises(ValueError):
        ds.features[0, 0] = 1.0


def balanced_dataset(n_targets, n_outliers, d=2, seed=0):
    rng = np.random.default_rng(seed)
    features = rng.normal(size=(n_targets + n_outliers, d))
    labels = np.r_[np.zeros(n_targets, dtype=int), np.ones(n_outliers, dtype=int)]
    return Dataset("toy", features, labels)


def test_make_folds_balanced_20():
    ds = balanced_dataset(10, 10)
    plan = make_folds(ds, k=10, seed=3)
    for fold in range(1, 11):
        members = plan.fold_of == fold
        assert (ds.labels[members] == 0).sum() == 1
        assert (ds.labels[members] == 1).sum() == 1


def test_make_folds_deterministic():
    ds = balanced_dataset(13, 9)
    a = make_folds(ds, k=10, seed=42)
    b = make_folds(ds, k=10, seed=42)
    assert np.array_equal(a.fold_of, b.fold_of)
    c = make_folds(ds, k=10, seed=43)
    assert not np.array_equal(a.fold_of, c.fold_of)


def test_make_folds_sizes_23():
    ds = balanced_dataset(13, 10)
    plan = make_folds(ds, k=10, seed=0)
    sizes = [int((plan.fold_of == f).sum()) for f in range(1, 11)]
    assert set(sizes) <= {2, 3}
    assert sum(sizes) == 23


def test_make_folds_configuration_errors():
    ds = balanced_dataset(4, 4)
    with pytest.raises(ConfigurationError):
        make_folds(ds, k=2, seed=0)
    with pytest.raises(ConfigurationError):
        make_folds(ds, k=9, seed=0)


@given(n_targets=st.integers(10, 40), n_outliers=st.integers(10, 40), seed=st.integers(0, 999))
@settings(max_examples=60, deadline=None)
def test_make_folds_partitions_and_balances(n_targets, n_outliers, seed):
    ds = balanced_dataset(n_targets, n_outliers, seed=seed)
    plan = make_folds(ds, k=10, seed=seed)
    assert plan.fold_of.min() >= 1 and plan.fold_of.max() <= 10
    for label in (0, 1):
        per_fold = [
            int(((plan.fold_of == f) & (ds.labels == label)).sum()) for f in range(1, 11)
        ]
        assert max(per_fold) - min(per_fold) <= 1


def test_rotate_roles_identity_rotation():
    ds = balanced_dataset(30, 30)
    plan = make_folds(ds, k=10, seed=1)
    view = rotate_roles(plan, ds, 0)
    assert set(plan.fold_of[view.init_ids]) == {1}
    assert set(plan.fold_of[view.pool_ids]) == {2, 3, 4, 5, 6}
    assert set(plan.fold_of[view.test_ids]) == {7, 8, 9, 10}


def test_rotate_roles_wraps_at_nine():
    ds = balanced_dataset(30, 30)
    plan = make_folds(ds, k=10, seed=1)
    view = rotate_roles(plan, ds, 9)
    assert set(plan.fold_of[view.init_ids]) == {10}
    assert set(plan.fold_of[view.pool_ids]) == {1, 2, 3, 4, 5}


def test_rotate_roles_drops_initial_outliers():
    ds = balanced_dataset(30, 30)
    plan = make_folds(ds, k=10, seed=1)
    view = rotate_roles(plan, ds, 0)
    assert np.all(ds.labels[view.init_ids] == 0)
    assert np.all(ds.labels[view.dropped_ids] == 1)
    assert len(view.dropped_ids) > 0
    for ids in (view.pool_ids, view.test_ids):
        assert not np.intersect1d(view.dropped_ids, ids).size


def test_rotate_roles_partition_and_coverage():
    ds = balanced_dataset(23, 17)
    plan = make_folds(ds, k=10, seed=5)
    init_folds = []
    for r in range(10):
        view = rotate_roles(plan, ds, r)
        pieces = np.concatenate(
            [view.init_ids, view.pool_ids, view.test_ids, view.dropped_ids]
        )
        assert np.array_equal(np.sort(pieces), np.arange(ds.n))
        init_folds.append(set(plan.fold_of[view.init_ids]) | set(plan.fold_of[view.dropped_ids]))
    assert sorted(f for (f,) in init_folds) == list(range(1, 11))


def test_rotate_roles_rejects_bad_rotation():
    ds = balanced_dataset(20, 20)
    plan = make_folds(ds, k=10, seed=0)
    for r in (-1, 10):
        with pytest.raises(ConfigurationError):
            rotate_roles(plan, ds, r)


def test_gen_two_cluster_shape_and_labels():
    ds, init_ids = gen_two_cluster(0)
    assert ds.n == 120 and ds.d == 2
    assert int((ds.labels == 0).sum()) == 60
    assert int((ds.labels == 1).sum()) == 60
    assert len(init_ids) == 3
    # one designated target per cluster block
    blocks = sorted(int(i) // DEMO_CLUSTER_SIZE for i in init_ids)
    assert blocks == [0, 1, 2]
    assert np.all(ds.labels[init_ids] == 0)


def test_gen_two_cluster_deterministic():
    a, ia = gen_two_cluster(11)
    b, ib = gen_two_cluster(11)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(ia, ib)
    c, _ = gen_two_cluster(12)
    assert not np.array_equal(a.features, c.features)


def test_gen_two_cluster_clusters_are_separated():
    ds, init_ids = gen_two_cluster(5)
    for i, mean in zip(init_ids, DEMO_TARGET_MEANS):
        assert np.linalg.norm(ds.features[i] - np.asarray(mean)) < 1.0
