import math

import pytest
from hypothesis import given, strategies as st

from symcov import AffineSpec, Interval, add, affine, interval_from_limits, lincomb2, sub, to_limits

finite = st.floats(min_value=-1e8, max_value=1e8, allow_nan=False, allow_infinity=False)
nonneg = st.floats(min_value=0.0, max_value=1e8, allow_nan=False, allow_infinity=False)
intervals = st.builds(Interval, center=finite, range=nonneg)


def limits(x):
    return to_limits(x)


class TestAdd:
    def test_hand_case(self):
        assert limits(add(interval_from_limits(1, 3), interval_from_limits(0, 4))) == (1.0, 7.0)

    def test_degenerate_points_behave_as_reals(self):
        assert limits(add(interval_from_limits(2, 2), interval_from_limits(5, 5))) == (7.0, 7.0)

    @given(x=intervals)
    def test_zero_is_identity(self, x):
        assert add(x, Interval(0.0, 0.0)) == x

    @given(x=intervals, y=intervals)
    def test_commutative(self, x, y):
        assert add(x, y) == add(y, x)

    @given(x=intervals, y=intervals, z=intervals)
    def test_associative_within_rounding(self, x, y, z):
        left = add(add(x, y), z)
        right = add(x, add(y, z))
        assert left.center == pytest.approx(right.center, rel=1e-12, abs=1e-12)
        assert left.range == pytest.approx(right.range, rel=1e-12, abs=1e-12)


class TestSub:
    def test_hand_case(self):
        assert limits(sub(interval_from_limits(1, 3), interval_from_limits(0, 4))) == (-3.0, 3.0)

    def test_self_difference_is_not_zero(self):
        x = interval_from_limits(1, 3)
        assert limits(sub(x, x)) == (-2.0, 2.0)

    def test_degenerate(self):
        assert limits(sub(interval_from_limits(5, 5), interval_from_limits(2, 2))) == (3.0, 3.0)


class TestAffine:
    def test_negative_scale_keeps_range_positive(self):
        assert limits(affine(interval_from_limits(1, 3), AffineSpec(-2.0, 0.0))) == (-6.0, -2.0)

    def test_shift(self):
        assert limits(affine(interval_from_limits(1, 3), AffineSpec(1.0, 10.0))) == (11.0, 13.0)

    @given(x=intervals, offset=finite)
    def test_zero_scale_collapses_to_constant(self, x, offset):
        assert affine(x, AffineSpec(0.0, offset)) == Interval(offset, 0.0)

    @given(
        x=st.builds(
            Interval,
            center=finite.filter(lambda v: v == 0.0 or abs(v) > 1e-100),
            range=nonneg.filter(lambda v: v == 0.0 or v > 1e-100),
        ),
        scale=st.floats(min_value=1e-6, max_value=1e6, allow_nan=False).filter(lambda w: w != 0),
    )
    def test_scale_round_trip_within_two_ulps(self, x, scale):
        # 2-ulp recovery holds in the normal floating-point range; subnormal
        # intermediates would lose precision and are out of scope here.
        back = affine(affine(x, AffineSpec(scale, 0.0)), AffineSpec(1.0 / scale, 0.0))
        assert abs(back.center - x.center) <= 2 * math.ulp(abs(x.center))
        assert abs(back.range - x.range) <= 2 * math.ulp(abs(x.range))


class TestLincomb2:
    def test_specializes_to_sub(self):
        x, y = interval_from_limits(1, 3), interval_from_limits(0, 4)
        assert lincomb2(1.0, x, -1.0, y) == sub(x, y)

    def test_hand_case(self):
        x = interval_from_limits(0, 1)
        assert limits(lincomb2(2.0, x, 3.0, x)) == (0.0, 5.0)

    @given(x=intervals, y=intervals)
    def test_zero_weights_collapse(self, x, y):
        assert lincomb2(0.0, x, 0.0, y) == Interval(0.0, 0.0)

    @given(x=intervals, y=intervals)
    def test_specializes_to_add_exactly(self, x, y):
        assert lincomb2(1.0, x, 1.0, y) == add(x, y)
        assert lincomb2(1.0, x, -1.0, y) == sub(x, y)


@given(x=intervals, y=intervals, w1=finite, w2=finite)
def test_range_nonnegativity_preserved(x, y, w1, w2):
    for out in (add(x, y), sub(x, y), affine(x, AffineSpec(w1, w2)), lincomb2(w1, x, w2, y)):
        assert out.range >= 0.0
