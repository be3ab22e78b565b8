import numpy as np
import pytest

from ellab.exceptions import DomainError, NonFiniteValueError, ParameterRangeError
from ellab.radial import Provenance, RadialProfile, profile_to_rows


def _parabola(r=(0.0, 0.5, 1.0)):
    r = np.asarray(r)
    return RadialProfile(
        n=3,
        r=r,
        values=(1.0 - r**2)[None, :],
        derivs=(-2.0 * r)[None, :],
        provenance=Provenance.FINITE_DIFFERENCE,
    )


def test_hermite_sampling_reproduces_cubics():
    values, derivs = _parabola().sample([0.25, 0.75])
    np.testing.assert_allclose(values[0], [0.9375, 0.4375], rtol=1e-14)
    np.testing.assert_allclose(derivs[0], [-0.5, -1.5], rtol=1e-14)


def test_sample_outside_profile_is_rejected():
    with pytest.raises(ParameterRangeError):
        _parabola().sample([1.5])


def test_nonzero_origin_slope_is_domain_error():
    with pytest.raises(DomainError):
        RadialProfile(
            n=3,
            r=np.array([0.0, 1.0]),
            values=np.array([[1.0, 0.5]]),
            derivs=np.array([[0.1, -0.5]]),
            provenance=Provenance.SHOOTING,
        )


def test_radii_must_start_at_origin():
    with pytest.raises(DomainError):
        _parabola(r=(0.1, 0.5, 1.0))


def test_non_finite_values_are_rejected():
    with pytest.raises(NonFiniteValueError):
        RadialProfile(
            n=3,
            r=np.array([0.0, 1.0]),
            values=np.array([[1.0, np.nan]]),
            derivs=np.array([[0.0, -0.5]]),
            provenance=Provenance.SHOOTING,
        )


def test_truncated_ends_at_requested_radius():
    cut = _parabola().truncated(0.8)
    assert cut.radius == 0.8
    assert cut.values[0, -1] == pytest.approx(0.36, rel=1e-14)
    assert cut.r.tolist() == [0.0, 0.5, 0.8]


def test_rows_header_and_content():
    header, rows = profile_to_rows(_parabola())
    assert header == ["r", "u", "du"]
    assert rows[1] == (0.5, 0.75, -1.0)
