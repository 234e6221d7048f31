import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symcov import (
    IntervalDataset,
    cov_kind,
    limits_form_mean,
    limits_form_oracle,
    sample_cor_matrix,
    sample_cov_matrix,
    sample_cov_pair,
    sample_mean,
)

from conftest import random_dataset


class TestCovKind:
    def test_weight_table(self):
        expected = {1: 0.0, 2: 0.25, 3: 1 / 12, 4: 0.25, 5: 1 / 12, 6: 0.125, 7: 1 / 24}
        for k, w in expected.items():
            assert cov_kind(k).var_weight == w
        assert cov_kind(8).var_weight == pytest.approx(0.02703716, abs=3e-8)
        for k in (1, 4, 5, 6, 7, 8):
            assert cov_kind(k).cov_weight == 0.0
        assert cov_kind(2).cov_weight == 0.25
        assert cov_kind(3).cov_weight == 1 / 12

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            cov_kind(9)
        with pytest.raises(ValueError):
            cov_kind(0)


class TestSampleMean:
    def test_two_objects(self, d1):
        assert sample_mean(d1).tolist() == [1.5]

    def test_constant_degenerate_cells(self):
        d = IntervalDataset(["a", "b", "c"], ["x1"], np.full((3, 1), 2.5), np.zeros((3, 1)))
        assert sample_mean(d).tolist() == [2.5]

    def test_matches_limits_form(self):
        d = random_dataset(np.random.default_rng(3), 40, 3)
        mean = sample_mean(d)
        for j in range(3):
            assert mean[j] == pytest.approx(limits_form_mean(d, j), rel=1e-12)


class TestSampleCovPair:
    def test_d1_variances(self, d1):
        assert sample_cov_pair(d1, 0, 0, 1) == pytest.approx(0.25, abs=1e-15)
        assert sample_cov_pair(d1, 0, 0, 2) == pytest.approx(1.25, abs=1e-15)
        assert sample_cov_pair(d1, 0, 0, 3) == pytest.approx(0.25 + 4 / 12, abs=1e-15)

    def test_d2_covariances(self, d2):
        assert sample_cov_pair(d2, 0, 1, 1) == pytest.approx(-0.5, abs=1e-15)
        assert sample_cov_pair(d2, 0, 1, 2) == pytest.approx(0.5, abs=1e-15)
        assert sample_cov_pair(d2, 0, 1, 3) == pytest.approx(-1 / 6, abs=1e-15)

    def test_all_zero_ranges_collapse_to_center_covariance(self):
        rng = np.random.default_rng(11)
        centers = rng.normal(size=(20, 2))
        d = IntervalDataset([f"o{i}" for i in range(20)], ["x1", "x2"], centers, np.zeros((20, 2)))
        base = sample_cov_pair(d, 0, 1, 1)
        for k in range(2, 9):
            assert sample_cov_pair(d, 0, 1, k) == base
            assert sample_cov_pair(d, 0, 0, k) == sample_cov_pair(d, 0, 0, 1)

    def test_symmetry_is_exact(self):
        d = random_dataset(np.random.default_rng(5), 17, 4)
        for k in range(1, 9):
            for j in range(4):
                for l in range(4):
                    assert sample_cov_pair(d, j, l, k) == sample_cov_pair(d, l, j, k)


class TestLimitsFormOracle:
    def test_d1_defn2_variance(self, d1):
        assert limits_form_oracle(d1, 0, 0, 2) == pytest.approx(1.25, abs=1e-12)

    def test_d2_defn3_covariance(self, d2):
        assert limits_form_oracle(d2, 0, 1, 3) == pytest.approx(-1 / 6, abs=1e-12)

    def test_equivalence_on_random_data(self):
        d = random_dataset(np.random.default_rng(12), 50, 3)
        for defn in (1, 2, 3):
            for j in range(3):
                for l in range(3):
                    oracle = limits_form_oracle(d, j, l, defn)
                    ours = sample_cov_pair(d, j, l, defn)
                    assert ours == pytest.approx(oracle, rel=1e-10, abs=1e-12)

    def test_rejects_other_definitions(self, d1):
        with pytest.raises(ValueError):
            limits_form_oracle(d1, 0, 0, 4)


class TestSampleCovMatrix:
    def test_d2_k4_frozen(self, d2):
        # Hand evaluation: center variances (1, 0.25); each diagonal gains
        # (1/4) * mean(r^2) = 1; the off-diagonal stays center-only.
        got = sample_cov_matrix(d2, 4).entries
        np.testing.assert_allclose(got, [[2.0, -0.5], [-0.5, 1.25]], atol=1e-15)

    def test_degenerate_equals_conventional_covariance(self):
        rng = np.random.default_rng(21)
        centers = rng.normal(size=(30, 3))
        d = IntervalDataset(
            [f"o{i}" for i in range(30)], ["a", "b", "c"], centers, np.zeros((30, 3))
        )
        conventional = np.cov(centers.T, bias=True)
        for k in range(1, 9):
            np.testing.assert_allclose(sample_cov_matrix(d, k).entries, conventional, atol=1e-12)

    def test_k2_minus_k1_is_quarter_mean_rr(self):
        d = random_dataset(np.random.default_rng(31), 25, 3)
        gap = sample_cov_matrix(d, 2).entries - sample_cov_matrix(d, 1).entries
        mean_rr = d.ranges.T @ d.ranges / d.n
        np.testing.assert_allclose(gap, mean_rr / 4, rtol=0, atol=1e-12)

    def test_entries_match_pair_function(self):
        d = random_dataset(np.random.default_rng(41), 12, 3)
        for k in (1, 3, 4, 8):
            m = sample_cov_matrix(d, k).entries
            for j in range(3):
                for l in range(3):
                    assert m[j, l] == sample_cov_pair(d, j, l, k)

    def test_psd_for_all_kinds(self):
        rng = np.random.default_rng(51)
        for _ in range(20):
            d = random_dataset(rng, int(rng.integers(2, 30)), int(rng.integers(1, 6)))
            for k in range(1, 9):
                m = sample_cov_matrix(d, k).entries
                w = np.linalg.eigvalsh(m)
                assert w[0] >= -1e-10 * np.trace(m)

    def test_single_object_warns(self):
        d = IntervalDataset(["a"], ["x1"], [[1.0]], [[2.0]])
        with pytest.warns(UserWarning, match="single object"):
            m = sample_cov_matrix(d, 2)
        assert m.entries[0, 0] == 0.25 * 4.0  # only the range term survives

    def test_translation_invariance(self):
        d = random_dataset(np.random.default_rng(61), 15, 2)
        shifted = IntervalDataset(
            d.object_ids, d.variable_names, d.centers + np.array([10.0, -3.0]), d.ranges
        )
        for k in range(1, 9):
            np.testing.assert_allclose(
                sample_cov_matrix(shifted, k).entries,
                sample_cov_matrix(d, k).entries,
                rtol=0,
                atol=1e-12,
            )


class TestSampleCorMatrix:
    def test_d2_k1_perfectly_anticorrelated(self, d2):
        assert sample_cor_matrix(d2, 1).entries[0, 1] == -1.0

    def test_d2_k3(self, d2):
        expected = (-1 / 6) / np.sqrt((4 / 3) * (7 / 12))
        got = sample_cor_matrix(d2, 3).entries[0, 1]
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(-0.18898, abs=1e-5)

    def test_duplicated_column_self_correlation_is_one(self):
        rng = np.random.default_rng(71)
        c = rng.normal(size=(12, 1))
        r = rng.uniform(0, 2, size=(12, 1))
        d = IntervalDataset(
            [f"o{i}" for i in range(12)], ["x1", "x2"], np.hstack([c, c]), np.hstack([r, r])
        )
        assert sample_cor_matrix(d, 1).entries[0, 1] == 1.0

    def test_diagonal_exactly_one_for_k123(self):
        d = random_dataset(np.random.default_rng(81), 9, 3)
        for k in (1, 2, 3):
            assert np.all(np.diagonal(sample_cor_matrix(d, k).entries) == 1.0)

    def test_diagonal_below_one_for_k4_to_8_with_ranges(self):
        d = random_dataset(np.random.default_rng(91), 9, 3)
        assert (d.ranges > 0).all()
        for k in range(4, 9):
            assert np.all(np.diagonal(sample_cor_matrix(d, k).entries) < 1.0)

    def test_zero_variance_column_named(self):
        d = IntervalDataset(
            ["a", "b"], ["x1", "flat"], [[0.0, 2.0], [1.0, 2.0]], [[1.0, 0.0], [1.0, 0.0]]
        )
        with pytest.raises(ValueError, match="'flat'"):
            sample_cor_matrix(d, 1)

    def test_entries_bounded(self):
        rng = np.random.default_rng(101)
        for _ in range(20):
            d = random_dataset(rng, int(rng.integers(2, 25)), int(rng.integers(2, 5)))
            for k in range(1, 9):
                m = sample_cor_matrix(d, k).entries
                assert np.all(m >= -1.0) and np.all(m <= 1.0)


class TestScaleLaws:
    def scaled(self, d, j, w):
        centers = d.centers.copy()
        ranges = d.ranges.copy()
        centers[:, j] *= w
        ranges[:, j] *= abs(w)
        return IntervalDataset(d.object_ids, d.variable_names, centers, ranges)

    def test_k1_row_and_diagonal_scaling(self):
        d = random_dataset(np.random.default_rng(111), 14, 3)
        w = -2.5
        base = sample_cov_matrix(d, 1).entries
        got = sample_cov_matrix(self.scaled(d, 0, w), 1).entries
        expect = base.copy()
        expect[0, :] *= w
        expect[:, 0] *= w
        expect[0, 0] = base[0, 0] * w * w
        np.testing.assert_allclose(got, expect, rtol=1e-12, atol=1e-12)

    @pytest.mark.parametrize("k", [2, 3])
    @pytest.mark.parametrize("w", [2.0, -3.0])
    def test_k23_off_diagonal_exact_transform(self, k, w):
        # cov_k(w*X1, X2) = w*cov(centers) + cov_weight*|w|*mean(r1*r2),
        # not naive bilinearity.
        d = random_dataset(np.random.default_rng(121), 14, 2)
        kd = cov_kind(k)
        got = sample_cov_pair(self.scaled(d, 0, w), 0, 1, k)
        cov_c = sample_cov_pair(d, 0, 1, 1)
        mean_rr = float(d.ranges[:, 0] @ d.ranges[:, 1]) / d.n
        assert got == pytest.approx(w * cov_c + kd.cov_weight * abs(w) * mean_rr, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_equivalence_property(data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    d = random_dataset(rng, int(rng.integers(2, 30)), int(rng.integers(1, 5)))
    defn = data.draw(st.sampled_from((1, 2, 3)))
    j = data.draw(st.integers(0, d.p - 1))
    l = data.draw(st.integers(0, d.p - 1))
    oracle = limits_form_oracle(d, j, l, defn)
    ours = sample_cov_pair(d, j, l, defn)
    assert ours == pytest.approx(oracle, rel=1e-10, abs=1e-10)
