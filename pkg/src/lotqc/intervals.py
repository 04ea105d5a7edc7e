"""Exact interval estimation of the lot defect rate and minimal-sample-size planning.

Three related tail inversions live here:

* exact_interval: the conservative equal-tail interval (each tail bounded by
  alpha/2). For finite lots the latent parameter is the integer defect count,
  so the bounds are integer counts found by monotone bisection; rates are
  derived views.
* margin_of_error: the expected interval half-width for a hypothetical
  observation k = round(rate*n), using the mid-P tail rule (each tail counts
  half of the boundary atom). This is the quantity behind the margin curves.
* required_sample_size: smallest n whose hypothetical two-tail sum
  P(X >= k; lower) + P(X <= k; upper) drops to alpha, located with Brent's
  method on the discrete step function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from . import _kernels as K
from .models import (
    ConfigError,
    DomainError,
    InfeasiblePlanError,
    PopulationModel,
    round_half_up,
)

#: bisection tolerance on the proportion axis for the with-replacement case
_RATE_TOL = 1e-10


@dataclass(frozen=True)
class ProportionInterval:
    """Two-sided interval for the latent defect rate (or count) of a lot."""

    lower: float
    upper: float
    confidence: float
    point_estimate: float
    lower_count: int | None = None
    upper_count: int | None = None

    @property
    def half_width(self) -> float:
        return (self.upper - self.lower) / 2.0

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "confidence": self.confidence,
            "point_estimate": self.point_estimate,
            "lower_count": self.lower_count,
            "upper_count": self.upper_count,
        }


def _check_alpha(alpha: float):
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")


def _bisect_rate(f, lo: float, hi: float) -> float:
    """Bracketed bisection for a sign change of f on [lo, hi]."""
    flo = f(lo)
    if flo == 0.0:
        return lo
    while hi - lo > _RATE_TOL:
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0.0) == (flo > 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def exact_interval(model: PopulationModel, n: int, k: int, alpha: float) -> ProportionInterval:
    """Equal-tail exact interval for the defect proportion after observing k of n.

    Finite lot: lower_count is the smallest D with P(X >= k; D) > alpha/2 and
    upper_count the largest D with P(X <= k; D) > alpha/2 (monotone bisection
    over D). With replacement: the analogous tail equations are solved for the
    rate by bracketed bisection. Coverage is conservative (>= 1 - alpha).
    """
    _check_alpha(alpha)
    model.check_sample_size(n)
    if not 0 <= k <= n:
        raise DomainError(f"observed defects k={k} outside [0, {n}]")
    a2 = alpha / 2.0
    point = k / n if n > 0 else 0.0

    if model.finite:
        N = model.lot_size
        if k == 0:
            dl = 0
        else:
            lo, hi = 0, N  # sf increasing in D; predicate sf > a2 true at N
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if K.hyper_sf(N, mid, n, k) > a2:
                    hi = mid
                else:
                    lo = mid
            dl = hi
        if k == n:
            du = N
        else:
            lo, hi = 0, N  # cdf decreasing in D; predicate cdf > a2 true at 0
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if K.hyper_cdf(N, mid, n, k) > a2:
                    lo = mid
                else:
                    hi = mid
            du = lo
        return ProportionInterval(
            lower=dl / N,
            upper=du / N,
            confidence=1.0 - alpha,
            point_estimate=point,
            lower_count=dl,
            upper_count=du,
        )

    if k == 0:
        tl = 0.0
    else:
        tl = _bisect_rate(lambda t: K.binom_sf(t, n, k) - a2, 0.0, 1.0)
    if k == n:
        tu = 1.0
    else:
        tu = _bisect_rate(lambda t: K.binom_cdf(t, n, k) - a2, 0.0, 1.0)
    return ProportionInterval(
        lower=tl, upper=tu, confidence=1.0 - alpha, point_estimate=point
    )


def _midp_counts(N: int, n: int, k: int, a2: float) -> tuple:
    """Mid-P count bounds: each tail includes half the boundary atom."""
    if k == 0:
        dl = 0
    else:
        lo, hi = 0, N
        while hi - lo > 1:
            mid = (lo + hi) // 2
            v = K.hyper_sf(N, mid, n, k) - 0.5 * K.hyper_pmf(N, mid, n, k)
            if v > a2:
                hi = mid
            else:
                lo = mid
        dl = hi
    if k == n:
        du = N
    else:
        lo, hi = 0, N
        while hi - lo > 1:
            mid = (lo + hi) // 2
            v = K.hyper_cdf(N, mid, n, k) - 0.5 * K.hyper_pmf(N, mid, n, k)
            if v > a2:
                lo = mid
            else:
                hi = mid
        du = lo
    return dl, du


def margin_of_error(
    model: PopulationModel, n: int, assumed_rate: float, alpha: float
) -> float:
    """Half-width of the mid-P interval around a hypothetical k = round(rate*n)."""
    _check_alpha(alpha)
    model.check_sample_size(n)
    if not 0.0 <= assumed_rate <= 1.0:
        raise DomainError("assumed_rate must lie in [0, 1]")
    k = round_half_up(assumed_rate * n)
    a2 = alpha / 2.0
    if model.finite:
        dl, du = _midp_counts(model.lot_size, n, k, a2)
        return (du - dl) / (2.0 * model.lot_size)
    if k == 0:
        tl = 0.0
    else:
        tl = _bisect_rate(
            lambda t: K.binom_sf(t, n, k) - 0.5 * K.binom_pmf(t, n, k) - a2, 0.0, 1.0
        )
    if k == n:
        tu = 1.0
    else:
        tu = _bisect_rate(
            lambda t: K.binom_cdf(t, n, k) - 0.5 * K.binom_pmf(t, n, k) - a2, 0.0, 1.0
        )
    return (tu - tl) / 2.0


def required_sample_size(
    model: PopulationModel,
    assumed_rate: float,
    half_width: float,
    alpha: float,
    max_n: int = 1_000_000,
) -> int:
    """Smallest n whose two-tail sum at k = round(rate*n) falls to alpha.

    The bounds theta_l = max(0, rate - w), theta_u = min(1, rate + w) are held
    fixed while n varies; the sum P(X >= k; theta_l, n) + P(X <= k; theta_u, n)
    is a jagged step function of n (k jumps with n), so the crossing is located
    with Brent's method on the bracket [1, N] and verified locally. Returns N
    (full inspection) when nothing smaller works for a finite lot.
    """
    _check_alpha(alpha)
    if not 0.0 < half_width < 1.0:
        raise ConfigError("half_width must lie in (0, 1)")
    if not 0.0 < assumed_rate < 1.0:
        raise ConfigError("assumed_rate must lie in (0, 1)")
    tl = max(0.0, assumed_rate - half_width)
    tu = min(1.0, assumed_rate + half_width)

    if model.finite:
        N = model.lot_size
        dl = round_half_up(tl * N)
        du = round_half_up(tu * N)

        def excess(x: float) -> float:
            nn = max(1, min(N, round_half_up(x)))
            k = round_half_up(assumed_rate * nn)
            return (
                K.hyper_sf(N, dl, nn, k) + K.hyper_cdf(N, du, nn, k) - alpha
            )

        hi = float(N)
        if excess(1.0) <= 0.0:
            return 1
        if excess(hi) > 0.0:
            return N
        root = brentq(excess, 1.0, hi)
        n = int(math.ceil(root))
        while n > 1 and excess(float(n - 1)) <= 0.0:
            n -= 1
        while n < N and excess(float(n)) > 0.0:
            n += 1
        return n

    def excess_b(x: float) -> float:
        nn = max(1, min(max_n, round_half_up(x)))
        k = round_half_up(assumed_rate * nn)
        return K.binom_sf(tl, nn, k) + K.binom_cdf(tu, nn, k) - alpha

    if excess_b(1.0) <= 0.0:
        return 1
    if excess_b(float(max_n)) > 0.0:
        raise InfeasiblePlanError(
            f"no with-replacement sample size up to {max_n} achieves "
            f"half-width {half_width} at confidence {1 - alpha}"
        )
    root = brentq(excess_b, 1.0, float(max_n))
    n = int(math.ceil(root))
    while n > 1 and excess_b(float(n - 1)) <= 0.0:
        n -= 1
    while n < max_n and excess_b(float(n)) > 0.0:
        n += 1
    return n
