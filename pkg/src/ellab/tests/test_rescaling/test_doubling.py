import numpy as np
import pytest

from ellab.exceptions import NonFiniteValueError, ParameterRangeError
from ellab.rescaling import DiscreteField, doubling_point, verify_doubling


@pytest.fixture
def jump_field():
    """Start at x = 0 (largest M dist); x = 0.1 is within k / M = 0.1 and more than doubles M."""
    return DiscreteField(points=np.array([0.0, 0.1, 0.2]), dist=np.array([1.0, 0.1, 1.0]), M=np.array([10.0, 25.0, 1.0]))


class TestDoublingPoint:
    def test_single_jump(self, jump_field):
        result = doubling_point(jump_field, 1.0)
        assert result.found
        assert result.start == 0
        assert result.index == 1
        assert result.path == (0, 1)
        assert result.jumps == 1
        assert result.jump_bound == 5
        assert result.check.ok
        assert result.point == (0.1,)

    def test_no_start_point(self):
        field = DiscreteField(points=np.zeros((1, 2)), dist=np.array([1.0]), M=np.array([0.5]))
        result = doubling_point(field, 1.0)
        assert not result.found
        assert result.index is None
        assert np.all(result.slack >= 0.0)
        assert result.to_dict()["min_slack"] == pytest.approx(1.5)

    @pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
    def test_peaked_field_on_grid(self, k):
        """
        Behavior:
          - On a grid of the unit disc with M peaked at the center, the returned point satisfies
            all three doubling conditions and the jump count stays within log2(max M / min M) + 1.

        Importance:
          - The doubling lemma is what every blow-up argument starts from.
        """
        field = DiscreteField.on_ball_grid(lambda x: 1.0 / (0.01 + np.sum(x**2, axis=1)), 0.05)
        result = doubling_point(field, k)
        assert result.found
        assert result.check.ok
        assert result.jumps <= result.jump_bound
        again = verify_doubling(field, k, result.index, result.start)
        assert again == result.check


class TestDiscreteField:
    def test_ball_grid_is_open(self):
        field = DiscreteField.on_ball_grid(lambda x: np.ones(len(x)), 0.5)
        assert np.all(field.dist > 0.0)
        assert field.size == 9

    def test_nonpositive_values(self):
        with pytest.raises(ParameterRangeError):
            DiscreteField(points=np.zeros((2, 1)), dist=np.ones(2), M=np.array([1.0, 0.0]))

    def test_non_finite_values(self):
        with pytest.raises(NonFiniteValueError):
            DiscreteField(points=np.zeros((2, 1)), dist=np.ones(2), M=np.array([1.0, np.inf]))

    def test_shape_mismatch(self):
        with pytest.raises(ParameterRangeError):
            DiscreteField(points=np.zeros((2, 1)), dist=np.ones(3), M=np.ones(2))

    def test_verify_index_range(self, jump_field):
        with pytest.raises(ParameterRangeError):
            verify_doubling(jump_field, 1.0, 3)
