import numpy as np
import pytest
from hypothesis import given, settings

from conftest import joints
from processors.dist_core import make_joint, mutual_information, p_max
from processors.encoders import (
    Encoder,
    Estimator,
    constant_encoder,
    encoder_from_labels,
    enumerate_estimators,
    eval_case1,
    eval_case2,
    eval_case3,
    identity_encoder,
    induced_joint_xs,
    is_refinement,
    map_estimator_case1,
    map_estimator_case2,
)
from processors.errors import DimensionMismatch
from processors.search import partitions_up_to_k


class TestEncoder:
    def test_label_out_of_range(self):
        with pytest.raises(DimensionMismatch):
            Encoder(3, 2, (0, 1, 2))

    def test_wrong_length(self):
        with pytest.raises(DimensionMismatch):
            Encoder(3, 2, (0, 1))

    def test_canonical_relabels_by_first_occurrence(self):
        assert Encoder(4, 3, (2, 2, 0, 1)).canonical().map == (0, 0, 1, 2)

    def test_blocks(self):
        phi = encoder_from_labels([1, 0, 1, 2])
        assert phi.range_size == 3
        assert phi.blocks() == [[0, 2], [1], [3]]

    def test_indicator(self):
        np.testing.assert_array_equal(
            encoder_from_labels([0, 1, 0]).indicator(), [[1, 0], [0, 1], [1, 0]]
        )

    def test_refinement(self):
        fine = identity_encoder(3)
        coarse = encoder_from_labels([0, 0, 1])
        assert is_refinement(fine, coarse)
        assert not is_refinement(coarse, fine)
        assert is_refinement(coarse, constant_encoder(3))


class TestEvaluation:
    def test_case3_is_marginal(self, worked):
        assert eval_case3(worked, 0).p_correct == pytest.approx(0.5)
        with pytest.raises(DimensionMismatch):
            eval_case3(worked, 2)

    def test_case2_identity_map(self, worked):
        psi, result = map_estimator_case2(induced_joint_xs(worked, identity_encoder(2)))
        assert psi.table == ((0, 1),)
        assert result.p_correct == pytest.approx(0.8)
        assert result.p_error == pytest.approx(0.2)
        assert eval_case2(worked, identity_encoder(2), psi).p_correct == pytest.approx(0.8)

    def test_case1_identity_encoders_always_correct(self, worked):
        psi, result = map_estimator_case1(worked, identity_encoder(2), constant_encoder(2))
        assert result.p_correct == pytest.approx(1.0)
        assert eval_case1(worked, identity_encoder(2), constant_encoder(2), psi).p_correct == pytest.approx(1.0)

    def test_estimator_shape_checked(self, worked):
        psi = Estimator(1, 1, ((0,),))
        with pytest.raises(DimensionMismatch):
            eval_case2(worked, identity_encoder(2), psi)

    def test_estimator_x_range_checked(self, worked):
        psi = Estimator(1, 2, ((0, 5),))
        with pytest.raises(DimensionMismatch):
            eval_case2(worked, identity_encoder(2), psi)

    def test_map_ties_pick_smallest_index(self):
        j = make_joint([[0.25, 0.25], [0.25, 0.25]])
        psi, result = map_estimator_case2(induced_joint_xs(j, identity_encoder(2)))
        assert psi.table == ((0, 0),)
        assert result.p_correct == pytest.approx(0.5)

    def test_zero_column_falls_back_to_prior_mode(self):
        j = make_joint([[0.2, 0.0], [0.8, 0.0]])
        psi, _ = map_estimator_case2(induced_joint_xs(j, identity_encoder(2)))
        assert psi.table == ((1, 1),)

    def test_enumerate_estimators_count(self):
        assert sum(1 for _ in enumerate_estimators(1, 2, 3)) == 9

    def test_induced_joint_merges_columns(self):
        j = make_joint([[0.1, 0.2, 0.3], [0.1, 0.2, 0.1]])
        xs = induced_joint_xs(j, encoder_from_labels([0, 1, 0]))
        np.testing.assert_allclose(xs.p, [[0.4, 0.2], [0.2, 0.2]])


@settings(max_examples=40, deadline=None)
@given(joints(x_max=3, y_max=3))
def test_map_estimator_matches_exhaustive_estimators(j):
    phi_y = identity_encoder(j.y_size)
    _, result = map_estimator_case2(induced_joint_xs(j, phi_y))
    best = max(
        eval_case2(j, phi_y, psi).p_correct
        for psi in enumerate_estimators(1, j.y_size, j.x_size)
    )
    assert result.p_correct == pytest.approx(best, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(joints())
def test_constant_encoder_gives_blind_guess(j):
    xs = induced_joint_xs(j, constant_encoder(j.y_size))
    assert map_estimator_case2(xs)[1].p_correct == pytest.approx(p_max(j), abs=1e-12)
    assert mutual_information(xs).bits == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(joints(x_max=3, y_max=4))
def test_coarsening_never_helps(j):
    fine = identity_encoder(j.y_size)
    coarse = Encoder(j.y_size, j.y_size, tuple(min(y, 1) for y in range(j.y_size)))
    fine_pc = map_estimator_case2(induced_joint_xs(j, fine))[1].p_correct
    coarse_pc = map_estimator_case2(induced_joint_xs(j, coarse))[1].p_correct
    assert coarse_pc <= fine_pc + 1e-12
    fine_mi = mutual_information(induced_joint_xs(j, fine)).bits
    coarse_mi = mutual_information(induced_joint_xs(j, coarse)).bits
    assert coarse_mi <= fine_mi + 1e-12


@settings(max_examples=40, deadline=None)
@given(joints(x_max=3, y_max=4))
def test_refined_partition_never_worse(j):
    encoders = list(partitions_up_to_k(j.y_size, j.y_size))
    scores = {}
    for phi in encoders:
        xs = induced_joint_xs(j, phi)
        scores[phi.map] = (map_estimator_case2(xs)[1].p_correct, mutual_information(xs).bits)
    for fine in encoders:
        for coarse in encoders:
            if not is_refinement(fine, coarse):
                continue
            assert scores[coarse.map][0] <= scores[fine.map][0] + 1e-12
            assert scores[coarse.map][1] <= scores[fine.map][1] + 1e-12


@settings(max_examples=40, deadline=None)
@given(joints(x_max=3, y_max=4))
def test_any_encoder_loses_information(j):
    full = mutual_information(j).bits
    for phi in partitions_up_to_k(j.y_size, j.y_size):
        assert mutual_information(induced_joint_xs(j, phi)).bits <= full + 1e-12
