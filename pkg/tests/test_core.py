import numpy as np
import pytest

from flstsvm.core import (
    ClassSplit,
    Hyperplane,
    TrainConfig,
    TwinModel,
    plane_distance,
    predict_twin,
    train_lstsvm,
)
from flstsvm.errors import ModelError

from oracles import make_split, minimize_twin, twin_objective

SYMMETRIC = ClassSplit(a=[[0.0, 1.0], [0.0, -1.0]], b=[[2.0, 1.0], [2.0, -1.0]])


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(p1=0.0)
    with pytest.raises(ValueError):
        TrainConfig(p2=-1.0)


def test_split_validation():
    with pytest.raises(ValueError):
        ClassSplit(a=np.empty((0, 2)), b=[[1.0, 2.0]])
    with pytest.raises(ValueError):
        ClassSplit(a=[[1.0, 2.0]], b=[[1.0]])
    with pytest.raises(ValueError):
        ClassSplit(a=[[np.inf, 1.0]], b=[[1.0, 2.0]])


def test_split_copies_rather_than_locking_caller_arrays():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    split = ClassSplit(a=a, b=[[2.0, 2.0]])
    a[0, 0] = 99.0  # caller's array stays writable
    assert split.a[0, 0] == 0.0
    with pytest.raises(ValueError):
        split.a[0, 0] = 5.0  # the split's copy is frozen


def test_symmetric_split_matches_oracle_and_symmetry():
    model = train_lstsvm(SYMMETRIC, TrainConfig(1.0, 1.0))
    # Mirror symmetry about the x-axis forces zero second weight component.
    assert abs(model.plane1.w[1]) <= 1e-9
    assert abs(model.plane2.w[1]) <= 1e-9
    for plane_idx, plane in ((1, model.plane1), (2, model.plane2)):
        value, _ = twin_objective(SYMMETRIC, plane_idx, 1.0)
        _, best = minimize_twin(SYMMETRIC, plane_idx, 1.0)
        closed = value(np.concatenate([plane.w, [plane.b]]))
        assert closed <= best + 1e-6 * max(1.0, abs(best))


def test_identical_classes_trigger_regularized_solve():
    same = [[0.0, 1.0], [0.0, -1.0]]
    model = train_lstsvm(ClassSplit(a=same, b=same))
    assert model.regularized == (True, True)


def test_random_splits_match_numeric_minimizer(rng):
    for _ in range(10):
        split = make_split(rng)
        cfg = TrainConfig(p1=float(rng.uniform(0.2, 4.0)), p2=float(rng.uniform(0.2, 4.0)))
        model = train_lstsvm(split, cfg)
        for plane_idx, plane, p in ((1, model.plane1, cfg.p1), (2, model.plane2, cfg.p2)):
            value, _ = twin_objective(split, plane_idx, p)
            _, best = minimize_twin(split, plane_idx, p)
            closed = value(np.concatenate([plane.w, [plane.b]]))
            assert closed <= best + 1e-6 * max(1.0, abs(best))


def test_plane_distance_examples():
    assert plane_distance(Hyperplane([1.0, 0.0], 0.0), [3.0, 5.0]) == pytest.approx(3.0)
    # Point on the plane.
    assert plane_distance(Hyperplane([1.0, 2.0], -5.0), [1.0, 2.0]) == pytest.approx(0.0)
    # Hand computation: |0 + 5| / 5 = 1.
    assert plane_distance(Hyperplane([3.0, 4.0], 5.0), [0.0, 0.0]) == pytest.approx(1.0)


def test_plane_distance_errors():
    with pytest.raises(ModelError):
        plane_distance(Hyperplane([0.0, 0.0], 1.0), [1.0, 1.0])
    with pytest.raises(ValueError):
        plane_distance(Hyperplane([1.0, 0.0], 0.0), [1.0, 2.0, 3.0])


def _manual_model(w1, b1, w2, b2):
    return TwinModel(plane1=Hyperplane(w1, b1), plane2=Hyperplane(w2, b2))


def test_predict_twin_tie_breaks_positive():
    model = _manual_model([1.0, 0.0], 0.0, [1.0, 0.0], -2.0)
    assert predict_twin(model, [0.0, 3.0]) == 1  # on plane 1
    assert predict_twin(model, [2.0, 3.0]) == -1  # on plane 2
    assert predict_twin(model, [1.0, 0.0]) == 1  # equidistant


def test_predict_twin_batches_and_dimension_check():
    model = _manual_model([1.0, 0.0], 0.0, [1.0, 0.0], -2.0)
    labels = predict_twin(model, [[0.0, 0.0], [2.0, 0.0], [1.0, 5.0]])
    np.testing.assert_array_equal(labels, [1, -1, 1])
    with pytest.raises(ValueError):
        predict_twin(model, [1.0, 2.0, 3.0])


def test_translation_covariance(rng):
    split = make_split(rng, max_points=8, max_dim=3)
    cfg = TrainConfig(0.7, 1.3)
    model = train_lstsvm(split, cfg)
    shift = rng.normal(scale=3.0, size=split.n_features)
    moved = ClassSplit(a=split.a + shift, b=split.b + shift)
    moved_model = train_lstsvm(moved, cfg)
    points = np.vstack([split.a, split.b])
    for plane, moved_plane in ((model.plane1, moved_model.plane1), (model.plane2, moved_model.plane2)):
        before = plane_distance(plane, points)
        after = plane_distance(moved_plane, points + shift)
        np.testing.assert_allclose(after, before, atol=1e-8)


def test_prediction_invariant_to_plane_rescaling(rng):
    model = train_lstsvm(SYMMETRIC)
    scaled = TwinModel(
        plane1=Hyperplane(3.7 * model.plane1.w, 3.7 * model.plane1.b),
        plane2=Hyperplane(0.2 * model.plane2.w, 0.2 * model.plane2.b),
        config=model.config,
    )
    points = rng.normal(size=(50, 2), scale=2.0)
    np.testing.assert_array_equal(predict_twin(model, points), predict_twin(scaled, points))
