import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flstsvm.core import ClassSplit
from flstsvm.errors import ModelError
from flstsvm.m1 import train_m1
from flstsvm.m2 import (
    FuzzyDistance,
    FuzzyHyperplane,
    M2Config,
    M2Model,
    TriangularFuzzyNumber,
    fuzzy_distance,
    hyperplane_membership,
    predict_m2,
    train_m2,
)

from oracles import central_gradient, fuzzy_objective, make_memberships, make_split

SYMMETRIC = ClassSplit(a=[[0.0, 1.0], [0.0, -1.0]], b=[[2.0, 1.0], [2.0, -1.0]])


def test_fuzzy_number_contract():
    tfn = TriangularFuzzyNumber(2.0, 1.0)
    assert tfn.membership(2.0) == 1.0
    assert tfn.membership(2.5) == pytest.approx(0.5)
    assert tfn.membership(4.0) == 0.0
    assert TriangularFuzzyNumber(1.0, 0.0).membership(1.0) == 1.0
    with pytest.raises(ValueError):
        TriangularFuzzyNumber(0.0, -0.1)


def test_fuzzy_plane_contract():
    plane = FuzzyHyperplane(w=[3.0, 4.0], c=[1.0, 0.0], b=5.0, d=0.5)
    assert plane.weight(0) == TriangularFuzzyNumber(3.0, 1.0)
    assert plane.bias == TriangularFuzzyNumber(5.0, 0.5)
    assert plane.vagueness == pytest.approx(0.5 * 1.0 + 0.5)
    with pytest.raises(ValueError):
        FuzzyHyperplane(w=[1.0], c=[-0.5], b=0.0, d=0.0)
    with pytest.raises(ValueError):
        FuzzyHyperplane(w=[1.0], c=[0.5], b=0.0, d=-1.0)
    with pytest.raises(ValueError):
        M2Config(vagueness=0.0)


def test_gradient_vanishes_at_unprojected_solution(rng):
    for _ in range(20):
        split = make_split(rng)
        mu_a, mu_b = make_memberships(rng, split)
        cfg = M2Config(
            p1=float(rng.uniform(0.2, 4.0)),
            p2=float(rng.uniform(0.2, 4.0)),
            vagueness=float(rng.uniform(0.1, 10.0)),
        )
        model = train_m2(split, mu_a, mu_b, cfg)
        for plane_idx, raw, p, mu in ((1, model.raw1, cfg.p1, mu_b), (2, model.raw2, cfg.p2, mu_a)):
            objective = fuzzy_objective(split, plane_idx, mu, p, cfg.vagueness)
            grad = central_gradient(objective, raw)
            bound = 1e-5 * (1.0 + abs(objective(raw)))
            assert np.max(np.abs(grad)) <= bound


def test_large_vagueness_weight_recovers_weighted_crisp_model(rng):
    for _ in range(10):
        split = make_split(rng)
        mu_a, mu_b = make_memberships(rng, split)
        fuzzy = train_m2(split, mu_a, mu_b, M2Config(vagueness=1e6))
        crisp = train_m1(split, mu_a, mu_b)
        for fuzzy_plane, crisp_plane in ((fuzzy.h1, crisp.plane1), (fuzzy.h2, crisp.plane2)):
            assert fuzzy_plane.vagueness <= 1e-3
            assert np.max(np.abs(fuzzy_plane.w - crisp_plane.w)) <= 1e-3
            assert abs(fuzzy_plane.b - crisp_plane.b) <= 1e-3


def test_symmetric_split_yields_axis_aligned_centers():
    model = train_m2(SYMMETRIC, [1.0, 1.0], [1.0, 1.0], M2Config())
    assert abs(model.h1.w[1]) <= 1e-9
    assert abs(model.h2.w[1]) <= 1e-9


def test_projection_flag_matches_raw_solution(rng):
    for _ in range(20):
        split = make_split(rng)
        mu_a, mu_b = make_memberships(rng, split)
        model = train_m2(split, mu_a, mu_b, M2Config(vagueness=0.3))
        d = split.n_features
        for raw, plane, flagged in (
            (model.raw1, model.h1, model.projected[0]),
            (model.raw2, model.h2, model.projected[1]),
        ):
            raw_c, raw_d = raw[d + 1 : 2 * d + 1], raw[2 * d + 1]
            assert flagged == bool(np.any(raw_c < 0.0) or raw_d < 0.0)
            np.testing.assert_array_equal(plane.c, np.maximum(raw_c, 0.0))
            assert plane.d == max(raw_d, 0.0)


def test_vagueness_is_monotone_in_control_weight(rng):
    split = make_split(rng, max_points=8, max_dim=2)
    mu_a, mu_b = make_memberships(rng, split)
    previous = None
    for m in (0.05, 0.2, 1.0, 5.0, 25.0, 125.0):
        model = train_m2(split, mu_a, mu_b, M2Config(vagueness=m))
        total = model.h1.vagueness + model.h2.vagueness
        if previous is not None:
            assert total <= previous + 1e-9
        previous = total


def test_fuzzy_distance_examples():
    plane = FuzzyHyperplane(w=[3.0, 4.0], c=[1.0, 0.0], b=5.0, d=0.5)
    dist = fuzzy_distance(plane, [1.0, 1.0])
    assert dist.delta == pytest.approx(12.0 / 5.0)
    assert dist.gamma == pytest.approx(8.0 / 5.0)
    # Origin: only the bias contributes to delta, gamma vanishes.
    origin = fuzzy_distance(plane, [0.0, 0.0])
    assert origin.delta == pytest.approx(1.0)
    assert origin.gamma == 0.0
    # Crisp widths, point on the plane: delta = 0, gamma = |w.x| / ||w||.
    crisp = FuzzyHyperplane(w=[1.0, 0.0], c=[0.0, 0.0], b=-2.0, d=0.0)
    on_plane = fuzzy_distance(crisp, [2.0, 7.0])
    assert on_plane.delta == pytest.approx(0.0)
    assert on_plane.gamma == pytest.approx(2.0)


def test_fuzzy_distance_errors():
    plane = FuzzyHyperplane(w=[0.0], c=[0.0], b=1.0, d=0.0)
    with pytest.raises(ModelError):
        fuzzy_distance(plane, [1.0])
    good = FuzzyHyperplane(w=[1.0, 1.0], c=[0.0, 0.0], b=0.0, d=0.0)
    with pytest.raises(ValueError):
        fuzzy_distance(good, [1.0])


def test_membership_printed_cases():
    # Equal distances are symmetric.
    mu1, mu2 = hyperplane_membership(FuzzyDistance(1.3, 0.4), FuzzyDistance(1.3, 0.4))
    assert mu1 == pytest.approx(0.5) and mu2 == pytest.approx(0.5)
    # Both planes center-dominated: 1 - 3/9.
    mu1, _ = hyperplane_membership(FuzzyDistance(2.0, 1.0), FuzzyDistance(4.0, 2.0))
    assert mu1 == pytest.approx(2.0 / 3.0)
    # First plane spread-dominated: 1 - 1/5.
    mu1, _ = hyperplane_membership(FuzzyDistance(1.0, 2.0), FuzzyDistance(3.0, 1.0))
    assert mu1 == pytest.approx(4.0 / 5.0)
    # Zero denominator: total ignorance.
    assert hyperplane_membership(FuzzyDistance(0.0, 0.0), FuzzyDistance(0.0, 0.0)) == (0.5, 0.5)


def test_membership_rejects_negative_components():
    # Negative distances are rejected at construction, before the rule runs.
    with pytest.raises(ValueError):
        FuzzyDistance(-1.0, 0.0)
    with pytest.raises(ValueError):
        FuzzyDistance(1.0, -0.5)


@settings(max_examples=300, deadline=None)
@given(
    delta1=st.floats(0.0, 1e6),
    gamma1=st.floats(0.0, 1e6),
    delta2=st.floats(0.0, 1e6),
    gamma2=st.floats(0.0, 1e6),
)
def test_membership_complementarity_and_range(delta1, gamma1, delta2, gamma2):
    mu1, mu2 = hyperplane_membership(
        FuzzyDistance(delta1, gamma1), FuzzyDistance(delta2, gamma2)
    )
    assert 0.0 <= mu1 <= 1.0 and 0.0 <= mu2 <= 1.0
    assert abs(mu1 + mu2 - 1.0) <= 1e-12


def _toy_model():
    return M2Model(
        h1=FuzzyHyperplane(w=[1.0, 0.0], c=[0.2, 0.0], b=0.0, d=0.1),
        h2=FuzzyHyperplane(w=[1.0, 0.0], c=[0.1, 0.0], b=-2.0, d=0.0),
    )


def test_predict_m2_on_plane_and_tie():
    model = _toy_model()
    # On plane 1's center with zero spread offset: x = (0, y) has
    # delta1 = 0 and gamma1 = 0 only when x = 0 entirely.
    label, mu1, mu2 = predict_m2(model, [0.0, 0.0])
    assert label == 1 and mu1 == pytest.approx(1.0) and mu2 == pytest.approx(0.0)
    # Symmetric model forces the documented positive tie-break.
    tied = M2Model(h1=model.h1, h2=model.h1)
    label, mu1, mu2 = predict_m2(tied, [3.0, 1.0])
    assert mu1 == pytest.approx(0.5) and mu2 == pytest.approx(0.5)
    assert label == 1


def test_predict_m2_degrees_sum_to_one(rng):
    model = _toy_model()
    points = rng.normal(size=(200, 2), scale=3.0)
    labels, mu1, mu2 = predict_m2(model, points)
    np.testing.assert_allclose(mu1 + mu2, 1.0, atol=1e-12)
    assert set(np.unique(labels)) <= {1, -1}


def test_predict_m2_invariant_under_common_positive_scaling(rng):
    model = _toy_model()
    scaled = M2Model(
        h1=FuzzyHyperplane(w=2.5 * model.h1.w, c=2.5 * model.h1.c, b=2.5 * model.h1.b, d=2.5 * model.h1.d),
        h2=model.h2,
    )
    points = rng.normal(size=(100, 2), scale=3.0)
    np.testing.assert_array_equal(predict_m2(model, points)[0], predict_m2(scaled, points)[0])
