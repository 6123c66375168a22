"""Exact-value and oracle tests for the depth engine."""

from fractions import Fraction

import numpy as np
import pytest

from fdepth import (
    FunctionalSample,
    LevelCounts,
    Ordering,
    depth_profile,
    ed_compare,
    ed_median,
    extremal_depth,
    integrated_depth,
    level_counts,
    modified_band_depth,
    pointwise_depth,
    rank_level_counts,
    rank_sample,
)

from oracles import (
    naive_compare,
    naive_ed,
    naive_id,
    naive_level_masses,
    naive_mbd,
    naive_phi,
    naive_profile,
    naive_rank,
    random_tied_sample,
)


def make(values, weights=None):
    values = np.asarray(values, dtype=float)
    m = values.shape[1]
    return FunctionalSample(
        grid=np.linspace(0.0, 1.0, m), values=values, weights=weights
    )


class TestPointwise:
    def test_center_of_three(self):
        s = make([[1.0], [2.0], [3.0]])
        assert pointwise_depth(s, [2.0], 0) == 1

    def test_below_all(self):
        s = make([[1.0], [2.0], [3.0]])
        assert pointwise_depth(s, [0.0], 0) == 0

    def test_member_top(self):
        s = make([[1.0], [2.0], [3.0]])
        assert pointwise_depth(s, [3.0], 0) == Fraction(1, 3)

    def test_tie_raises_depth(self):
        # query tied with the top value: the tied member counts on neither side
        s = make([[1.0], [2.0], [2.0]])
        assert pointwise_depth(s, [2.0], 0) == Fraction(2, 3)

    def test_index_out_of_range(self):
        s = make([[1.0, 2.0]])
        with pytest.raises(IndexError):
            pointwise_depth(s, [1.0, 1.0], 5)


class TestProfileAndCounts:
    def test_single_member(self):
        s = make([[4.0, 5.0, 6.0]])
        prof = depth_profile(s, [4.0, 5.0, 6.0])
        assert list(prof.numerators) == [1, 1, 1]
        lc = level_counts(s, [4.0, 5.0, 6.0])
        assert lc.counts == (0, 3)

    def test_above_everything(self):
        s = make([[0.0, 0.0], [1.0, 1.0]])
        prof = depth_profile(s, [5.0, 5.0])
        assert list(prof.numerators) == [0, 0]
        lc = level_counts(s, [5.0, 5.0])
        assert lc.counts == (2, 0, 0)

    def test_member_profiles_odd_without_ties(self):
        rng = np.random.default_rng(3)
        vals = rng.normal(size=(7, 5))
        s = make(vals)
        for i in range(7):
            prof = depth_profile(s, vals[i])
            assert np.all(prof.numerators % 2 == 1)

    def test_levels_lossless(self):
        s = make([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        prof = depth_profile(s, [3.0, 4.0])
        assert prof.as_fractions() == [Fraction(1), Fraction(1)]
        assert prof.d_min() == 1

    def test_weighted_masses(self):
        w = np.array([0.5, 0.25, 0.25])
        s = make([[0.0, 0.0, 0.0], [2.0, 2.0, 2.0]], weights=w)
        lc = level_counts(s, [1.0, 1.0, 1.0])
        assert sum(lc.counts) == 1
        assert lc.counts[2] == 1  # depth 1 everywhere, all mass at level 2/2

    def test_cumulative_nondecreasing_ends_at_total(self):
        rng = np.random.default_rng(11)
        vals = rng.normal(size=(6, 4))
        s = make(vals)
        lc = level_counts(s, vals[0])
        cum = lc.cumulative()
        assert all(a <= b for a, b in zip(cum, cum[1:]))
        assert cum[-1] == lc.total() == 4


class TestCompare:
    def test_equivalent(self):
        a = LevelCounts(n=2, counts=(1, 0, 3))
        assert ed_compare(a, a) is Ordering.EQUIVALENT

    def test_more_extreme_at_level_zero(self):
        a = LevelCounts(n=2, counts=(2, 0, 2))
        b = LevelCounts(n=2, counts=(1, 1, 2))
        assert ed_compare(a, b) is Ordering.MORE_EXTREME
        assert ed_compare(b, a) is Ordering.LESS_EXTREME

    def test_mass_mismatch(self):
        a = LevelCounts(n=2, counts=(1, 0, 3))
        b = LevelCounts(n=2, counts=(1, 0, 2))
        with pytest.raises(ValueError, match="total mass"):
            ed_compare(a, b)

    def test_n_mismatch(self):
        a = LevelCounts(n=2, counts=(0, 0, 4))
        b = LevelCounts(n=3, counts=(0, 0, 0, 4))
        with pytest.raises(ValueError, match="sample sizes"):
            ed_compare(a, b)

    def test_wrong_count_length(self):
        with pytest.raises(ValueError, match="level counts"):
            LevelCounts(n=3, counts=(1, 2))


class TestExtremalDepth:
    def test_singleton(self):
        s = make([[1.0, 2.0]])
        assert extremal_depth(s, [1.0, 2.0]) == 1

    def test_far_outside(self):
        rng = np.random.default_rng(5)
        vals = rng.normal(size=(6, 4))
        s = make(vals)
        g = vals.max() + np.arange(1.0, 5.0)
        assert extremal_depth(s, g) == 0

    def test_member_matches_rank(self):
        rng = np.random.default_rng(9)
        vals = rng.normal(size=(8, 5))
        s = make(vals)
        _, ed = rank_sample(s)
        for i in range(8):
            assert extremal_depth(s, vals[i]) == ed[i]

    def test_identical_functions_all_depth_one(self):
        s = make([[1.0, 1.0]] * 4)
        order, ed = rank_sample(s)
        assert list(order) == [0, 1, 2, 3]
        assert all(v == 1 for v in ed)


class TestRankingOracle:
    def test_small_samples_match_naive(self):
        rng = np.random.default_rng(2024)
        for _ in range(60):
            n = int(rng.integers(2, 8))
            m = int(rng.integers(1, 6))
            vals = random_tied_sample(rng, n, m)
            s = make(vals)
            order, ed = rank_sample(s)
            n_order, n_ed = naive_rank(vals.tolist())
            assert list(order) == n_order
            assert ed == n_ed

    def test_weighted_samples_match_naive(self):
        rng = np.random.default_rng(77)
        for _ in range(25):
            n = int(rng.integers(2, 6))
            m = int(rng.integers(2, 5))
            vals = random_tied_sample(rng, n, m)
            w = rng.random(m)
            w = w / w.sum()
            s = make(vals, weights=w)
            order, ed = rank_sample(s)
            n_order, n_ed = naive_rank(vals.tolist(), weights=w.tolist())
            assert list(order) == n_order
            assert ed == n_ed

    def test_nonmember_ed_matches_naive(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, 5))
            vals = random_tied_sample(rng, n, m)
            g = random_tied_sample(rng, 1, m)[0]
            s = make(vals)
            assert extremal_depth(s, g) == naive_ed(vals.tolist(), g.tolist())

    def test_compare_matches_naive(self):
        rng = np.random.default_rng(13)
        to_res = {-1: Ordering.MORE_EXTREME, 0: Ordering.EQUIVALENT, 1: Ordering.LESS_EXTREME}
        for _ in range(50):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, 5))
            vals = random_tied_sample(rng, n, m)
            ga = random_tied_sample(rng, 1, m)[0]
            gb = random_tied_sample(rng, 1, m)[0]
            s = make(vals)
            got = ed_compare(level_counts(s, ga), level_counts(s, gb))
            want = to_res[naive_compare(vals.tolist(), ga.tolist(), gb.tolist())]
            assert got is want

    def test_profile_and_counts_match_naive(self):
        rng = np.random.default_rng(8)
        for _ in range(40):
            n = int(rng.integers(1, 6))
            m = int(rng.integers(1, 5))
            vals = random_tied_sample(rng, n, m)
            g = random_tied_sample(rng, 1, m)[0]
            s = make(vals)
            prof = depth_profile(s, g)
            assert prof.as_fractions() == naive_profile(vals.tolist(), g.tolist())
            lc = level_counts(s, g)
            masses = naive_level_masses(vals.tolist(), g.tolist())
            # uniform weights: library counts are grid-point counts, oracle
            # masses are fractions of total weight
            assert [Fraction(c, m) for c in lc.counts] == masses

    def test_phi_values_match_naive(self):
        rng = np.random.default_rng(21)
        vals = random_tied_sample(rng, 5, 4)
        g = random_tied_sample(rng, 1, 4)[0]
        s = make(vals)
        cum = level_counts(s, g).cumulative()
        for k in range(6):
            r = Fraction(k, 5)
            assert Fraction(cum[k], 4) == naive_phi(vals.tolist(), g.tolist(), r)


class TestMedian:
    def test_singleton(self):
        s = make([[2.0, 3.0]])
        assert ed_median(s) == [0]

    def test_median_maximizes_min_depth(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            vals = rng.normal(size=(7, 5))
            s = make(vals)
            med = ed_median(s)
            d_mins = [depth_profile(s, vals[i]).d_min() for i in range(7)]
            top = max(d_mins)
            for i in med:
                assert d_mins[i] == top


class TestBaselineDepths:
    def test_id_profile_all_ones(self):
        s = make([[1.0, 1.0, 1.0]])
        assert integrated_depth(s, [1.0, 1.0, 1.0]) == 1.0

    def test_id_half(self):
        # profile is (0, 1): below both at t0, center at t1
        s = make([[1.0, 0.0], [2.0, 2.0]])
        assert integrated_depth(s, [0.0, 1.0]) == 0.5

    def test_id_matches_naive(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, 5))
            vals = random_tied_sample(rng, n, m)
            g = random_tied_sample(rng, 1, m)[0]
            s = make(vals)
            assert integrated_depth(s, g) == pytest.approx(
                naive_id(vals.tolist(), g.tolist()), abs=1e-12
            )

    def test_mbd_between_two(self):
        s = make([[0.0, 0.0], [2.0, 2.0]])
        assert modified_band_depth(s, [1.0, 0.5]) == 1.0

    def test_mbd_outside(self):
        s = make([[0.0], [1.0], [2.0]])
        assert modified_band_depth(s, [5.0]) == 0.0

    def test_mbd_needs_two(self):
        s = make([[0.0, 1.0]])
        with pytest.raises(ValueError, match="at least 2"):
            modified_band_depth(s, [0.0, 0.0])

    def test_mbd_matches_naive(self):
        rng = np.random.default_rng(44)
        for _ in range(30):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, 5))
            vals = random_tied_sample(rng, n, m)
            g = random_tied_sample(rng, 1, m)[0]
            s = make(vals)
            assert modified_band_depth(s, g) == pytest.approx(
                naive_mbd(vals.tolist(), g.tolist()), abs=1e-12
            )

    def test_mbd_weighted_matches_naive(self):
        rng = np.random.default_rng(45)
        vals = random_tied_sample(rng, 5, 4)
        w = np.array([0.1, 0.2, 0.3, 0.4])
        s = make(vals, weights=w)
        g = random_tied_sample(rng, 1, 4)[0]
        assert modified_band_depth(s, g) == pytest.approx(
            naive_mbd(vals.tolist(), g.tolist(), weights=w.tolist()), abs=1e-12
        )


class TestRankLevelCounts:
    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="empty"):
            rank_level_counts([])

    def test_rejects_incomparable(self):
        a = LevelCounts(n=2, counts=(0, 0, 4))
        b = LevelCounts(n=2, counts=(0, 0, 5))
        with pytest.raises(ValueError, match="comparable"):
            rank_level_counts([a, b])

    def test_tie_break_by_index(self):
        a = LevelCounts(n=2, counts=(1, 1, 2))
        order, ed = rank_level_counts([a, a, a])
        assert list(order) == [0, 1, 2]
        assert ed == [Fraction(1), Fraction(1), Fraction(1)]
