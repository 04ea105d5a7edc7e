"""Search routines that turn a QualityConfig into single, double, or sequential plans.

All searches bound the producer side by OC(acceptable) >= 1 - producer_risk
and the consumer side by OC(rejectable) <= consumer_risk / 2 (see
plans.effective_consumer_risk). Monotonicity of the acceptance probability in
the sample size makes every inner search a bisection; a local walk afterwards
guards against discreteness plateaus.
"""

from __future__ import annotations

import math

from . import _kernels as K
from .models import (
    InfeasiblePlanError,
    PopulationModel,
    QualityConfig,
)
from .plans import DoublePlan, SequentialPlan, SinglePlan, effective_consumer_risk

#: search cap on the sample size when the lot is unbounded (with replacement)
DEFAULT_MAX_N = 1_000_000

#: widest combined-threshold search for double plans
DEFAULT_C2_MAX = 50


def _cdf(model: PopulationModel, param, n: int, k: int) -> float:
    if model.finite:
        return K.hyper_cdf(model.lot_size, param, n, k)
    return K.binom_cdf(param, n, k)


def _largest_n_cdf_ge(model, param, c, target, n_cap):
    """Largest n in [c, n_cap] with cdf(c; param, n) >= target (cdf falls in n)."""
    lo, hi = c, n_cap
    if _cdf(model, param, hi, c) >= target:
        return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _cdf(model, param, mid, c) >= target:
            lo = mid
        else:
            hi = mid
    while lo < n_cap and _cdf(model, param, lo + 1, c) >= target:
        lo += 1
    return lo


def _smallest_n_cdf_le(model, param, c, target, n_cap):
    """Smallest n in [c, n_cap] with cdf(c; param, n) <= target; None if unattainable."""
    lo, hi = c, n_cap
    if _cdf(model, param, hi, c) > target:
        return None
    if _cdf(model, param, lo, c) <= target:
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _cdf(model, param, mid, c) <= target:
            hi = mid
        else:
            lo = mid
    while hi > c and _cdf(model, param, hi - 1, c) <= target:
        hi -= 1
    return hi


def design_single(
    config: QualityConfig, model: PopulationModel, max_n: int = DEFAULT_MAX_N
) -> SinglePlan:
    """Minimal single plan: walk the acceptance number upward, and for each c
    take the largest n still acceptable to the producer and the smallest n
    sharp enough for the consumer; the first c where they overlap wins."""
    ha, hr = config.hypotheses(model)
    pa, pr = ha.resolve(model), hr.resolve(model)
    alpha = config.producer_risk
    b = effective_consumer_risk(config)
    n_cap = model.lot_size if model.finite else max_n
    c_cap = min(pa if model.finite else n_cap, n_cap)
    c = 0
    while c <= c_cap:
        n_upper = _largest_n_cdf_ge(model, pa, c, 1.0 - alpha, n_cap)
        n_lower = _smallest_n_cdf_le(model, pr, c, b, n_cap)
        if n_lower is not None and n_lower <= n_upper:
            return SinglePlan(n=n_lower, c=c, model=model, config=config)
        c += 1
    raise InfeasiblePlanError(
        f"no single plan with n <= {n_cap} satisfies the risk targets "
        f"(searched up to c = {c - 1})",
        last_c=c - 1,
    )


def _double_accept(model, param, n, c1, c2) -> float:
    # stage 2 drawn from the untouched lot: the design-time approximation
    if model.finite:
        return K.double_accept_hyper(model.lot_size, param, n, n, c1, c2, False)
    return K.double_accept_binom(param, n, n, c1, c2)


def _min_n_double(model, param, c1, c2, b, n_cap):
    lo, hi = 1, n_cap
    if _double_accept(model, param, hi, c1, c2) > b:
        return None
    if _double_accept(model, param, lo, c1, c2) <= b:
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _double_accept(model, param, mid, c1, c2) <= b:
            hi = mid
        else:
            lo = mid
    while hi > 1 and _double_accept(model, param, hi - 1, c1, c2) <= b:
        hi -= 1
    return hi


def design_double(
    config: QualityConfig,
    model: PopulationModel,
    c2_max: int = DEFAULT_C2_MAX,
    max_n: int = DEFAULT_MAX_N,
) -> DoublePlan:
    """Minimal-effort double plan with equal stages.

    For every threshold pair (c1 < c2) the smallest stage size meeting the
    consumer target is found by bisection and checked against the producer
    target; among feasible candidates the one with the smallest expected
    inspections at the acceptable rate wins (ties: smaller n1, then smaller
    c2). Candidate branches whose stage size alone already exceeds the best
    expected effort are pruned.
    """
    ha, hr = config.hypotheses(model)
    pa, pr = ha.resolve(model), hr.resolve(model)
    alpha = config.producer_risk
    b = effective_consumer_risk(config)
    n_cap = (model.lot_size // 2) if model.finite else max_n // 2
    best = None  # (asn_at_pa, n, c2, c1)
    for c2 in range(1, c2_max + 1):
        floor_n = _min_n_double(model, pr, 0, c2, b, n_cap)
        if floor_n is None:
            continue
        if best is not None and floor_n >= best[0]:
            break
        for c1 in range(0, c2):
            n = _min_n_double(model, pr, c1, c2, b, n_cap)
            if n is None:
                break  # larger c1 only makes acceptance easier
            if best is not None and n >= best[0]:
                break
            if _double_accept(model, pa, n, c1, c2) < 1.0 - alpha:
                continue
            p_i = _cdf(model, pa, n, c1) + 1.0 - _cdf(model, pa, n, min(c2, n))
            asn = n * (2.0 - p_i)
            cand = (asn, n, c2, c1)
            if best is None or cand < best:
                best = cand
    if best is None:
        raise InfeasiblePlanError(
            f"no double plan with stage size <= {n_cap} and c2 <= {c2_max} "
            "satisfies the risk targets"
        )
    _, n, c2, c1 = best
    return DoublePlan(n1=n, n2=n, c1=c1, c2=c2, model=model, config=config)


def design_sequential(
    config: QualityConfig,
    model: PopulationModel,
    curtailment: str = "none",
    max_n: int = DEFAULT_MAX_N,
) -> SequentialPlan:
    """Probability-ratio plan truncated by the matching single plan.

    Finite lots truncate at the single plan's (n, c); with replacement the
    truncation point is 3x the single-plan size and the threshold sits on the
    ratio midline there.
    """
    single = design_single(config, model, max_n=max_n)
    alpha = config.producer_risk
    b = effective_consumer_risk(config)
    log_a = math.log((1.0 - b) / alpha)
    log_b = math.log(b / (1.0 - alpha))
    if model.finite:
        n_t, c_t = single.n, single.c
    else:
        n_t = 3 * single.n
        pa, pr = config.acceptable_rate, config.rejectable_rate
        k1 = math.log(pr / pa)
        k2 = math.log((1.0 - pr) / (1.0 - pa))
        # midline: largest d with llr(n_t, d) < 0
        c_t = max(0, math.ceil(-n_t * k2 / (k1 - k2)) - 1)
    return SequentialPlan(
        model=model,
        config=config,
        log_a=log_a,
        log_b=log_b,
        truncation_at=n_t,
        truncation_accept_max=c_t,
        curtailment=curtailment,
    )
