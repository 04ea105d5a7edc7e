"""Interval estimation and sample-size planning."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lotqc import (
    DomainError,
    InfeasiblePlanError,
    PopulationModel,
    exact_interval,
    margin_of_error,
    required_sample_size,
)
from lotqc import _kernels as K

from oracles import hyper_pmf_row

FIN1000 = PopulationModel.without_replacement(1000)
WITHREP = PopulationModel.with_replacement()


class TestExactInterval:
    def test_zero_defects_lower_is_zero(self):
        iv = exact_interval(FIN1000, 100, 0, 0.05)
        assert iv.lower == 0.0
        assert iv.lower_count == 0

    def test_all_defects_upper_is_one(self):
        iv = exact_interval(FIN1000, 40, 40, 0.05)
        assert iv.upper == 1.0
        assert iv.upper_count == 1000

    def test_bounds_bracket_point_estimate(self):
        iv = exact_interval(FIN1000, 100, 5, 0.05)
        assert 0.0 <= iv.lower <= iv.point_estimate <= iv.upper <= 1.0

    def test_counts_are_boundary_sharp(self):
        # lower: smallest D with P(X >= k; D) > alpha/2; upper: largest with
        # P(X <= k; D) > alpha/2
        n, k, alpha = 100, 5, 0.05
        iv = exact_interval(FIN1000, n, k, alpha)
        dl, du = iv.lower_count, iv.upper_count
        assert K.hyper_sf(1000, dl, n, k) > alpha / 2
        assert dl == 0 or K.hyper_sf(1000, dl - 1, n, k) <= alpha / 2
        assert K.hyper_cdf(1000, du, n, k) > alpha / 2
        assert K.hyper_cdf(1000, du + 1, n, k) <= alpha / 2

    def test_nesting_in_alpha(self):
        wide = exact_interval(FIN1000, 100, 5, 0.01)
        narrow = exact_interval(FIN1000, 100, 5, 0.10)
        assert wide.lower <= narrow.lower
        assert wide.upper >= narrow.upper

    def test_with_replacement_matches_beta_inversion(self):
        # classic equal-tail bounds solve cdf equations; spot value computed
        # from the rational binomial tail by offline bisection
        iv = exact_interval(WITHREP, 100, 5, 0.05)
        assert iv.lower == pytest.approx(0.016431, abs=2e-4)
        assert iv.upper == pytest.approx(0.112834, abs=2e-4)

    def test_k_out_of_range(self):
        with pytest.raises(DomainError):
            exact_interval(FIN1000, 100, 101, 0.05)

    @given(
        N=st.integers(2, 120),
        data=st.data(),
    )
    @settings(max_examples=60, deadline=None)
    def test_coverage_small_lots(self, N, data):
        n = data.draw(st.integers(1, N))
        alpha = data.draw(st.sampled_from([0.05, 0.2]))
        model = PopulationModel.without_replacement(N)
        intervals = [exact_interval(model, n, k, alpha) for k in range(n + 1)]
        for D in range(N + 1):
            row = hyper_pmf_row(N, D, n)
            cover = sum(
                float(row[k])
                for k in range(n + 1)
                if intervals[k].lower_count <= D <= intervals[k].upper_count
            )
            assert cover >= 1 - alpha - 1e-9


class TestMarginOfError:
    def test_published_spot_values(self):
        # 95% level, N=1000: within a quarter percentage point of the
        # reference margins
        for n, rate, expect in [
            (100, 0.05, 0.040),
            (200, 0.05, 0.0275),
            (100, 0.10, 0.055),
            (200, 0.10, 0.0375),
        ]:
            got = margin_of_error(FIN1000, n, rate, 0.05)
            assert abs(got - expect) <= 0.0025, (n, rate, got)

    def test_whole_lot_margin_is_zero(self):
        assert margin_of_error(FIN1000, 1000, 0.05, 0.05) == 0.0

    def test_monotone_after_window_smoothing(self):
        # nonincreasing in n up to discreteness: the sawtooth period is one
        # full k = round(rate*n) cycle (1/rate = 20 samples here), so smooth
        # with window minima spanning a whole cycle
        ms = [margin_of_error(FIN1000, n, 0.05, 0.05) for n in range(20, 400)]
        w = 21
        smooth = [min(ms[i : i + w]) for i in range(len(ms) - w)]
        for a, b in zip(smooth, smooth[1:]):
            assert b <= a + 1e-12

    def test_with_replacement_close_to_finite_for_large_lot(self):
        big = PopulationModel.without_replacement(200_000)
        a = margin_of_error(big, 150, 0.06, 0.05)
        b = margin_of_error(WITHREP, 150, 0.06, 0.05)
        assert a == pytest.approx(b, abs=5e-4)


class TestRequiredSampleSize:
    @pytest.mark.parametrize(
        "N,rate,width,alpha,expect",
        [
            (3380, 0.01, 0.01, 0.01, 803),
            (3380, 0.03, 0.01, 0.01, 1389),
            (24799, 0.01, 0.01, 0.01, 992),
            (24799, 0.03, 0.01, 0.01, 1993),
            (3380, 0.02, 0.02, 0.05, 288),
            (3380, 0.05, 0.02, 0.05, 443),
            (24799, 0.02, 0.02, 0.05, 260),
            (24799, 0.05, 0.02, 0.05, 501),
        ],
    )
    def test_reference_sample_sizes(self, N, rate, width, alpha, expect):
        model = PopulationModel.without_replacement(N)
        got = required_sample_size(model, rate, width, alpha)
        assert got == expect
        # independently verify the returned n is a genuine crossing of the
        # two-tail condition
        from lotqc.models import round_half_up

        dl = round_half_up(max(0.0, rate - width) * N)
        du = round_half_up(min(1.0, rate + width) * N)

        def cond(n):
            k = round_half_up(rate * n)
            return K.hyper_sf(N, dl, n, k) + K.hyper_cdf(N, du, n, k) <= alpha

        assert cond(got)
        assert not cond(got - 1)

    def test_nonincreasing_in_width(self):
        model = PopulationModel.without_replacement(3380)
        widths = [0.005, 0.01, 0.02, 0.04]
        sizes = [required_sample_size(model, 0.03, w, 0.05) for w in widths]
        for a, b in zip(sizes, sizes[1:]):
            assert b <= a

    def test_grows_toward_half(self):
        model = PopulationModel.without_replacement(10_000)
        sizes = [
            required_sample_size(model, rate, 0.02, 0.05)
            for rate in (0.02, 0.1, 0.3, 0.5)
        ]
        for a, b in zip(sizes, sizes[1:]):
            assert b >= a

    def test_full_inspection_fallback(self):
        model = PopulationModel.without_replacement(40)
        # unreachable width for such a small lot short of full inspection
        assert required_sample_size(model, 0.3, 0.01, 0.01) == 40

    def test_with_replacement_infeasible_raises(self):
        with pytest.raises(InfeasiblePlanError):
            required_sample_size(WITHREP, 0.3, 0.001, 0.01, max_n=2000)

    def test_with_replacement_basic(self):
        n = required_sample_size(WITHREP, 0.05, 0.02, 0.05)
        assert 300 < n < 800
