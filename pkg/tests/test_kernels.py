"""Distribution-kernel correctness: rational oracles, backend parity, properties."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lotqc import _kernels as K
from lotqc._kernels import _pure
from lotqc import DefectHypothesis, DomainError, PopulationModel, cdf, pmf, quantile, sf

from oracles import binom_cdf_frac, binom_pmf_frac, hyper_cdf_frac, hyper_pmf_row

try:
    from lotqc._kernels import _native
except ImportError:
    _native = None


def test_pmf_two_item_lot():
    m = PopulationModel.without_replacement(2)
    assert pmf(m, DefectHypothesis.count(1), 1, 1) == pytest.approx(0.5, abs=1e-15)


def test_pmf_all_defects_drawn():
    # C(5,5)*C(5,0)/C(10,5) = 1/252
    m = PopulationModel.without_replacement(10)
    got = pmf(m, DefectHypothesis.count(5), 5, 5)
    assert got == pytest.approx(1.0 / 252.0, rel=1e-12)


def test_pmf_zero_rate_with_replacement():
    m = PopulationModel.with_replacement()
    assert pmf(m, DefectHypothesis.rate(0.0), 30, 0) == 1.0


def test_cdf_full_support_is_exactly_one():
    m = PopulationModel.without_replacement(10)
    assert cdf(m, DefectHypothesis.count(5), 5, 5) == 1.0


def test_sf_at_zero_is_exactly_one():
    m = PopulationModel.without_replacement(50)
    assert sf(m, DefectHypothesis.count(7), 20, 0) == 1.0
    mb = PopulationModel.with_replacement()
    assert sf(mb, DefectHypothesis.rate(0.3), 20, 0) == 1.0


def test_cdf_large_lot_matches_rational_oracle():
    got = K.hyper_cdf(1000, 50, 100, 5)
    want = float(hyper_cdf_frac(1000, 50, 100, 5))
    assert got == pytest.approx(want, abs=1e-10)


def test_domain_errors():
    m = PopulationModel.without_replacement(10)
    h = DefectHypothesis.count(5)
    with pytest.raises(DomainError):
        pmf(m, h, 5, 6)  # k > n
    with pytest.raises(DomainError):
        pmf(m, h, 11, 1)  # n > N
    with pytest.raises(DomainError):
        pmf(m, DefectHypothesis.count(11), 5, 1)  # D > N


@pytest.mark.parametrize("N", [1, 2, 3, 7, 19, 40, 60])
def test_hyper_exact_rational_equivalence(N):
    # every (n, D, k) for a sweep of lot sizes; full N <= 60 runs in acceptance
    for n in range(0, N + 1):
        for D in range(0, N + 1):
            row = hyper_pmf_row(N, D, n)
            acc = Fraction(0)
            for k in range(0, n + 1):
                acc += row[k]
                assert K.hyper_pmf(N, D, n, k) == pytest.approx(float(row[k]), abs=1e-13)
                assert K.hyper_cdf(N, D, n, k) == pytest.approx(float(acc), abs=1e-12)
                assert K.hyper_sf(N, D, n, k) == pytest.approx(float(1 - acc + row[k]), abs=1e-12)


def test_binom_exact_rational_equivalence():
    for n in (1, 7, 23):
        for p in (Fraction(1, 7), Fraction(3, 10), Fraction(97, 100)):
            fp = float(p)
            for k in range(0, n + 1):
                assert K.binom_pmf(fp, n, k) == pytest.approx(
                    float(binom_pmf_frac(Fraction(fp), n, k)), abs=1e-13
                )
                assert K.binom_cdf(fp, n, k) == pytest.approx(
                    float(binom_cdf_frac(Fraction(fp), n, k)), abs=1e-12
                )


@given(
    N=st.integers(1, 300),
    data=st.data(),
)
@settings(max_examples=150, deadline=None)
def test_hyper_pmf_sums_to_one(N, data):
    n = data.draw(st.integers(0, N))
    D = data.draw(st.integers(0, N))
    total = sum(K.hyper_pmf(N, D, n, k) for k in range(n + 1))
    assert total == pytest.approx(1.0, abs=1e-12)
    prev = 0.0
    for k in range(n + 1):
        cur = K.hyper_cdf(N, D, n, k)
        assert cur >= prev - 1e-15
        assert K.hyper_pmf(N, D, n, k) >= 0.0
        prev = cur


@given(N=st.integers(2, 200), data=st.data())
@settings(max_examples=100, deadline=None)
def test_hyper_cdf_monotone_in_defect_count(N, data):
    # the monotonicity every plan search relies on
    n = data.draw(st.integers(1, N))
    k = data.draw(st.integers(0, n))
    values = [K.hyper_cdf(N, D, n, k) for D in range(N + 1)]
    for a, b in zip(values, values[1:]):
        assert b <= a + 1e-12


def test_hyper_converges_to_binomial():
    # the finite-population correction at n=30 is ~5e-6 of mass at N=1e6 and
    # falls like 1/N; the 1e-6 pointwise bound genuinely holds from N=1e7 on
    p = 0.05
    for N, bound in [(10**6, 1e-5), (10**7, 1e-6)]:
        D = int(p * N)
        for k in range(0, 12):
            h = K.hyper_pmf(N, D, 30, k)
            b = K.binom_pmf(p, 30, k)
            assert abs(h - b) < bound


@given(N=st.integers(1, 150), data=st.data())
@settings(max_examples=100, deadline=None)
def test_quantile_cdf_roundtrip(N, data):
    n = data.draw(st.integers(0, N))
    D = data.draw(st.integers(0, N))
    m = PopulationModel.without_replacement(N)
    h = DefectHypothesis.count(D)
    for k in range(0, n + 1):
        q = cdf(m, h, n, k)
        assert quantile(m, h, n, q) <= k


def test_quantile_edges():
    m = PopulationModel.without_replacement(1000)
    h = DefectHypothesis.count(30)
    assert quantile(m, h, 428, 0.0) == 0
    assert quantile(m, h, 428, 1.0) == min(428, 30)
    # smallest k with cdf(k) >= q against a linear oracle scan
    q = 0.99
    k99 = quantile(m, h, 428, q)
    assert cdf(m, h, 428, k99) >= q
    assert k99 == 0 or cdf(m, h, 428, k99 - 1) < q


@pytest.mark.skipif(_native is None, reason="compiled kernels not built")
def test_backend_parity():
    cases = []
    for N, D, n in [(17, 5, 9), (100, 37, 50), (1000, 30, 428), (3380, 217, 585)]:
        for k in range(0, min(n, 25) + 1):
            cases.append((N, D, n, k))
    for N, D, n, k in cases:
        assert _native.hyper_pmf(N, D, n, k) == pytest.approx(
            _pure.hyper_pmf(N, D, n, k), rel=1e-10, abs=1e-300
        )
        assert _native.hyper_cdf(N, D, n, k) == pytest.approx(
            _pure.hyper_cdf(N, D, n, k), rel=1e-10, abs=1e-300
        )
        assert _native.hyper_sf(N, D, n, k) == pytest.approx(
            _pure.hyper_sf(N, D, n, k), rel=1e-10, abs=1e-300
        )
    for p, n in [(0.03, 428), (0.2, 60)]:
        for k in range(0, 30):
            assert _native.binom_cdf(p, n, k) == pytest.approx(
                _pure.binom_cdf(p, n, k), rel=1e-10, abs=1e-300
            )


@pytest.mark.skipif(_native is None, reason="compiled kernels not built")
def test_backend_parity_boundaries_and_dp():
    args = (1000, 10, 30, math.log(0.95 / 0.01), math.log(0.05 / 0.99), 428)
    an, rn = _native.hyper_llr_boundaries(*args)
    ap, rp = _pure.hyper_llr_boundaries(*args)
    assert list(an) == list(ap)
    assert list(rn) == list(rp)
    on, sn_ = _native.sequential_dp_hyper(1000, 64, an, rn, 428, 8)
    op, sp_ = _pure.sequential_dp_hyper(1000, 64, ap, rp, 428, 8)
    assert on == pytest.approx(op, rel=1e-12)
    assert sn_ == pytest.approx(sp_, rel=1e-12)
