import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relgodunov.errors import SuperluminalError
from relgodunov.spacetime import FourVector, dot, four_velocity, lorentz_factor, sample_timelike


def test_dot_signature():
    assert dot([1, 0, 0, 0], [1, 0, 0, 0]) == -1.0
    assert dot([0, 1, 0, 0], [0, 1, 0, 0]) == 1.0
    assert dot([1, 0, 0, 0], [0, 1, 0, 0]) == 0.0


@pytest.mark.parametrize(
    "v, expected",
    [
        ((0, 0, 0), (1, 0, 0, 0)),
        ((0.6, 0, 0), (1.25, 0.75, 0, 0)),
        ((0, 0.8, 0), (5 / 3, 0, 4 / 3, 0)),
    ],
)
def test_four_velocity_examples(v, expected):
    U = four_velocity(v)
    assert not U.covariant
    np.testing.assert_allclose(np.asarray(U), expected, rtol=1e-15, atol=1e-15)


@pytest.mark.parametrize("v", [(1, 0, 0), (0.6, 0.8, 0), (0, 0, -1.2)])
def test_superluminal_rejected(v):
    with pytest.raises(SuperluminalError):
        four_velocity(v)


def test_lorentz_factor():
    assert lorentz_factor((0.6, 0, 0)) == pytest.approx(1.25, rel=1e-15)


speeds = st.floats(0.0, 0.999, allow_nan=False)
unit = st.tuples(*[st.floats(-1, 1) for _ in range(3)]).filter(lambda d: np.linalg.norm(d) > 1e-3)


@given(speeds, unit)
def test_four_velocity_unit_norm(s, d):
    v = s * np.asarray(d) / np.linalg.norm(d)
    U = four_velocity(v)
    assert abs(U.norm2() + 1.0) < 1e-14 * max(1.0, U.components[0] ** 2)


def test_raise_lower_identity(rng):
    for c in rng.normal(size=(10_000, 4)) * rng.uniform(0.1, 10, size=(10_000, 1)):
        a = FourVector(c, covariant=False)
        back = a.lower().raise_()
        assert not back.covariant
        assert np.max(np.abs(back.components - c)) <= 1e-15 * np.max(np.abs(c))


def test_lower_flips_time_component():
    a = FourVector(np.array([2.0, 1.0, 0.5, -1.0]))
    np.testing.assert_array_equal(a.lower().components, [-2.0, 1.0, 0.5, -1.0])
    assert a.lower().covariant


@given(st.integers(0, 2**32 - 1))
def test_sample_timelike_is_timelike(seed):
    T = sample_timelike(seed)
    assert T.covariant
    assert dot(T, T) < 0


def test_sample_timelike_deterministic():
    np.testing.assert_array_equal(np.asarray(sample_timelike(7)), np.asarray(sample_timelike(7)))


def test_sample_timelike_both_orientations():
    t0 = np.array([np.asarray(sample_timelike(s))[0] for s in range(1, 1001)])
    assert (t0 > 0).any() and (t0 < 0).any()
