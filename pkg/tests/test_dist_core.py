import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import joints
from processors.dist_core import (
    InfoValue,
    conditional_x_given_s,
    entropy,
    information_density,
    make_joint,
    marginal_x,
    marginal_y,
    mutual_information,
    p_max,
    positive_density_mean,
    relative_ic_spectrum_mass,
    self_information_tail_mass,
    transpose,
)
from processors.errors import DimensionMismatch, EmptyAlphabet, NegativeMass, NotNormalized


def h2(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


class TestMakeJoint:
    def test_labels_default(self, worked):
        assert worked.x_labels == ('x0', 'x1')
        assert worked.y_labels == ('y0', 'y1')

    def test_table_is_read_only(self, worked):
        with pytest.raises(ValueError):
            worked.p[0, 0] = 0.5

    def test_tiny_negative_clamped(self):
        j = make_joint([[0.5, -1e-13], [0.5, 0.0]])
        assert j.p.min() == 0.0
        assert j.total == pytest.approx(1.0, abs=1e-15)

    def test_negative_mass_reports_locus(self):
        with pytest.raises(NegativeMass) as excinfo:
            make_joint([[0.6, 0.5], [-0.1, 0.0]])
        assert excinfo.value.locus == (1, 0)

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            make_joint([[0.5, 0.4]])

    def test_nan_rejected(self):
        with pytest.raises(NotNormalized):
            make_joint([[float('nan'), 1.0]])

    def test_empty(self):
        with pytest.raises(EmptyAlphabet):
            make_joint([])
        with pytest.raises(EmptyAlphabet):
            make_joint([[]])

    def test_ragged(self):
        with pytest.raises(DimensionMismatch):
            make_joint([[0.5, 0.25], [0.25]])

    def test_label_mismatch(self):
        with pytest.raises(DimensionMismatch):
            make_joint([[0.5, 0.5]], x_labels=['a', 'b'])

    def test_within_tolerance_renormalized(self):
        j = make_joint([[0.5, 0.5 + 5e-10]])
        assert j.total == pytest.approx(1.0, abs=1e-15)


class TestMeasures:
    def test_worked_marginals(self, worked):
        np.testing.assert_allclose(marginal_x(worked), [0.5, 0.5])
        np.testing.assert_allclose(marginal_y(worked), [0.5, 0.5])
        assert p_max(worked) == pytest.approx(0.5)

    def test_worked_mutual_information(self, worked):
        # Direct summation over the four cells
        direct = sum(
            p * math.log2(p / 0.25)
            for p in (0.4, 0.1, 0.1, 0.4)
        )
        mi = mutual_information(worked).bits
        assert mi == pytest.approx(1 - h2(0.2), abs=1e-9)
        assert mi == pytest.approx(direct, abs=1e-12)

    def test_independent_has_zero_information(self, independent):
        assert mutual_information(independent).bits == pytest.approx(0.0, abs=1e-15)

    def test_entropy(self):
        assert entropy([0.5, 0.5]) == pytest.approx(1.0)
        assert entropy([1.0, 0.0]) == 0.0
        assert entropy([0.25] * 4) == pytest.approx(2.0)

    def test_conditional_masks_zero_columns(self):
        j = make_joint([[0.5, 0.0], [0.5, 0.0]])
        cond = conditional_x_given_s(j)
        np.testing.assert_allclose(cond.row(0), [0.5, 0.5])
        with pytest.raises(KeyError):
            cond.row(1)

    def test_information_density_off_support(self):
        j = make_joint([[0.5, 0.0], [0.0, 0.5]])
        density = information_density(j)
        assert np.isnan(density[0, 1])
        assert density[0, 0] == pytest.approx(1.0)

    def test_spectrum_mass_worked(self, worked):
        # Diagonal pairs have density log2(1.6) ~ 0.678
        assert relative_ic_spectrum_mass(worked, 0.5) == pytest.approx(0.8)
        assert relative_ic_spectrum_mass(worked, 0.7) == 0.0
        assert relative_ic_spectrum_mass(worked, math.log2(1.6)) == pytest.approx(0.8)

    def test_positive_density_mean_worked(self, worked):
        assert positive_density_mean(worked) == pytest.approx(0.8 * math.log2(1.6))

    def test_self_information_tail(self):
        j = make_joint([[0.5], [0.25], [0.25]])
        # log2(1/p): 1, 2, 2
        assert self_information_tail_mass(j, 1.0) == 0.0
        assert self_information_tail_mass(j, 1.5) == pytest.approx(0.5)
        assert self_information_tail_mass(j, 3.0) == pytest.approx(1.0)

    def test_info_value_rejects_negative(self):
        with pytest.raises(ValueError):
            InfoValue(-0.1)


@settings(max_examples=60, deadline=None)
@given(joints())
def test_mutual_information_symmetric_and_bounded(j):
    mi = mutual_information(j).bits
    assert mi >= 0.0
    assert mi == pytest.approx(mutual_information(transpose(j)).bits, abs=1e-12)
    assert mi <= min(entropy(marginal_x(j)), entropy(marginal_y(j))) + 1e-12


@settings(max_examples=60, deadline=None)
@given(joints())
def test_positive_density_mean_dominates_information(j):
    assert positive_density_mean(j) >= mutual_information(j).bits - 1e-12
