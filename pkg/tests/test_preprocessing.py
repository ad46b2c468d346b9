import numpy as np
import numpy.testing as npt
import pytest

from chaoscomp.core.preprocessing import augment_sum_squares, minmax_apply, minmax_fit
from chaoscomp.schemas.model import ScalerParams


class TestAugmentSumSquares:
    def test_appends_sum_of_squares(self):
        X, augmented = augment_sum_squares([[3.0, 4.0], [1.0, 2.0]])
        assert augmented
        npt.assert_array_equal(X, [[3, 4, 25], [1, 2, 5]])

    def test_zero_row(self):
        X, _ = augment_sum_squares([[0.0, 0.0, 0.0]])
        npt.assert_array_equal(X, [[0, 0, 0, 0]])

    def test_wide_input_unchanged(self):
        wide = np.random.default_rng(0).random((3, 35))
        X, augmented = augment_sum_squares(wide)
        assert not augmented
        npt.assert_array_equal(X, wide)

    def test_disabled(self):
        X, augmented = augment_sum_squares([[3.0, 4.0]], enabled=False)
        assert not augmented
        assert X.shape == (1, 2)


class TestMinMax:
    def test_fit_then_apply(self):
        params = minmax_fit([[0.0], [5.0], [10.0]])
        npt.assert_array_equal(minmax_apply([[0.0], [5.0], [10.0]], params), [[0.0], [0.5], [1.0]])

    def test_out_of_range_values_are_clamped(self):
        params = ScalerParams(data_min=(0.0,), data_max=(10.0,))
        npt.assert_array_equal(minmax_apply([[12.0], [-3.0]], params), [[1.0], [0.0]])

    def test_constant_feature(self):
        params = minmax_fit([[7.0, 1.0], [7.0, 3.0]])
        npt.assert_array_equal(minmax_apply([[7.0, 2.0], [9.0, 3.0]], params), [[0.0, 0.5], [0.0, 1.0]])

    def test_empty_training_set(self):
        with pytest.raises(ValueError, match="empty training set"):
            minmax_fit(np.empty((0, 2)))

    def test_feature_count_mismatch(self):
        params = minmax_fit([[0.0, 1.0], [1.0, 2.0]])
        with pytest.raises(ValueError, match="scaler expects 2 features, got 3"):
            minmax_apply([[0.0, 1.0, 2.0]], params)
