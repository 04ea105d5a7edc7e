"""Exact defect-count distribution under a population model.

Thin validated dispatch onto the kernel backend: hypergeometric for finite
lots, binomial for sampling with replacement.
"""

from __future__ import annotations

from . import _kernels as K
from .models import DefectHypothesis, DomainError, PopulationModel


def _validated(model: PopulationModel, hyp: DefectHypothesis, n: int, k: int | None):
    model.check_sample_size(n)
    param = hyp.resolve(model)
    if k is not None and (k < 0 or k > n):
        raise DomainError(f"defects-in-sample k={k} outside [0, {n}]")
    return param


def pmf(model: PopulationModel, hyp: DefectHypothesis, n: int, k: int) -> float:
    param = _validated(model, hyp, n, k)
    if model.finite:
        return K.hyper_pmf(model.lot_size, param, n, k)
    return K.binom_pmf(param, n, k)


def cdf(model: PopulationModel, hyp: DefectHypothesis, n: int, k: int) -> float:
    """P(X <= k)."""
    param = _validated(model, hyp, n, k)
    if model.finite:
        return K.hyper_cdf(model.lot_size, param, n, k)
    return K.binom_cdf(param, n, k)


def sf(model: PopulationModel, hyp: DefectHypothesis, n: int, k: int) -> float:
    """P(X >= k), inclusive."""
    param = _validated(model, hyp, n, k)
    if model.finite:
        return K.hyper_sf(model.lot_size, param, n, k)
    return K.binom_sf(param, n, k)


def quantile(model: PopulationModel, hyp: DefectHypothesis, n: int, q: float) -> int:
    """Smallest k with cdf(k) >= q."""
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"quantile level must lie in [0, 1], got {q}")
    param = _validated(model, hyp, n, None)
    if model.finite:
        f = lambda k: K.hyper_cdf(model.lot_size, param, n, k)
    else:
        f = lambda k: K.binom_cdf(param, n, k)
    lo, hi = 0, n
    if f(lo) >= q:
        return 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) >= q:
            hi = mid
        else:
            lo = mid
    return hi
