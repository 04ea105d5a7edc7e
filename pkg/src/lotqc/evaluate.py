"""Analytic operating characteristics and expected inspection effort for plans.

Unlike the design-time searches, everything here models the inspection
process exactly: double-plan stage two conditions on the items removed by
stage one, and sequential plans are evaluated by absorbing-state forward
propagation over (items inspected, defects seen).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from . import _kernels as K
from .models import DefectHypothesis, DomainError, PopulationModel
from .plans import DoublePlan, SequentialPlan, SinglePlan


@dataclass(frozen=True)
class CurvePoint:
    p: float
    defect_count: int | None
    metric: str
    value: float
    plan: str
    model: str


def oc_single(plan: SinglePlan, hyp: DefectHypothesis) -> float:
    param = hyp.resolve(plan.model)
    if plan.model.finite:
        return K.hyper_cdf(plan.model.lot_size, param, plan.n, plan.c)
    return K.binom_cdf(param, plan.n, plan.c)


def oc_double(plan: DoublePlan, hyp: DefectHypothesis) -> float:
    param = hyp.resolve(plan.model)
    if plan.model.finite:
        return K.double_accept_hyper(
            plan.model.lot_size, param, plan.n1, plan.n2, plan.c1, plan.c2, True
        )
    return K.double_accept_binom(param, plan.n1, plan.n2, plan.c1, plan.c2)


def _seq_dp(plan: SequentialPlan, hyp: DefectHypothesis):
    param = hyp.resolve(plan.model)
    a, r, n_t = plan.decision_bounds()
    if plan.model.finite:
        return K.sequential_dp_hyper(
            plan.model.lot_size, param, a, r, n_t, plan.truncation_accept_max
        )
    return K.sequential_dp_binom(param, a, r, n_t, plan.truncation_accept_max)


def oc_sequential(plan: SequentialPlan, hyp: DefectHypothesis) -> float:
    return _seq_dp(plan, hyp)[0]


def oc(plan, hyp: DefectHypothesis) -> float:
    """Probability of accepting a lot in the hypothesised state."""
    if isinstance(plan, SinglePlan):
        return oc_single(plan, hyp)
    if isinstance(plan, DoublePlan):
        return oc_double(plan, hyp)
    if isinstance(plan, SequentialPlan):
        return oc_sequential(plan, hyp)
    raise TypeError(f"not a plan: {plan!r}")


def asn_single(plan: SinglePlan) -> float:
    """The whole sample is always inspected; effort is constant."""
    return float(plan.n)


def _stage1_decided(plan: DoublePlan, param) -> float:
    if plan.model.finite:
        N = plan.model.lot_size
        low = K.hyper_cdf(N, param, plan.n1, plan.c1)
        high = 1.0 - K.hyper_cdf(N, param, plan.n1, min(plan.c2, plan.n1))
    else:
        low = K.binom_cdf(param, plan.n1, plan.c1)
        high = 1.0 - K.binom_cdf(param, plan.n1, min(plan.c2, plan.n1))
    return low + high


def asn_double(plan: DoublePlan, hyp: DefectHypothesis, curtailed: bool | None = None) -> float:
    """Expected inspections: full plans take all of stage 2 when it runs;
    curtailed plans stop stage 2 at the defect that forces rejection (stage 1
    is always inspected completely)."""
    if curtailed is None:
        curtailed = plan.curtailed
    param = hyp.resolve(plan.model)
    if not curtailed:
        p_i = _stage1_decided(plan, param)
        return plan.n1 * p_i + (plan.n1 + plan.n2) * (1.0 - p_i)
    total = float(plan.n1)
    top = min(plan.c2, plan.n1)
    if plan.model.finite:
        N = plan.model.lot_size
        top = min(top, param)
        for i in range(plan.c1 + 1, top + 1):
            w = K.hyper_pmf(N, param, plan.n1, i)
            if w <= 0.0:
                continue
            total += w * K.curtailed_stage2_mean_hyper(
                N - plan.n1, param - i, plan.n2, plan.c2 - i
            )
    else:
        for i in range(plan.c1 + 1, top + 1):
            w = K.binom_pmf(param, plan.n1, i)
            if w > 0.0:
                total += w * K.curtailed_stage2_mean_binom(param, plan.n2, plan.c2 - i)
    return total


def asn_sequential(plan: SequentialPlan, hyp: DefectHypothesis) -> float:
    return _seq_dp(plan, hyp)[1]


def asn(plan, hyp: DefectHypothesis) -> float:
    """Expected number of inspections until the plan reaches a verdict."""
    if isinstance(plan, SinglePlan):
        return asn_single(plan)
    if isinstance(plan, DoublePlan):
        return asn_double(plan, hyp)
    if isinstance(plan, SequentialPlan):
        return asn_sequential(plan, hyp)
    raise TypeError(f"not a plan: {plan!r}")


def curve(plan, metric: str, sweep, model: PopulationModel | None = None):
    """Evaluate OC or ASN over a sweep of true lot states.

    sweep holds defect counts for finite lots and rates otherwise; points come
    back in sweep order. The optional model override re-evaluates the same
    plan thresholds under a different sampling regime (the device behind
    with/without-replacement comparisons).
    """
    if metric not in ("oc", "asn"):
        raise DomainError(f"metric must be 'oc' or 'asn', got {metric!r}")
    target_model = model or plan.model
    if model is not None and model != plan.model:
        plan = _rebind(plan, model)
    points = []
    for value in sweep:
        if target_model.finite:
            hyp = DefectHypothesis.count(int(value))
            p = value / target_model.lot_size
            d = int(value)
        else:
            hyp = DefectHypothesis.rate(float(value))
            p = float(value)
            d = None
        y = oc(plan, hyp) if metric == "oc" else asn(plan, hyp)
        points.append(
            CurvePoint(p=p, defect_count=d, metric=metric, value=y,
                       plan=plan.kind, model=target_model.kind.value)
        )
    return points


def _rebind(plan, model: PopulationModel):
    if isinstance(plan, SinglePlan):
        return SinglePlan(plan.n, plan.c, model, plan.config)
    if isinstance(plan, DoublePlan):
        return DoublePlan(plan.n1, plan.n2, plan.c1, plan.c2, model, plan.config,
                          plan.curtailed)
    if isinstance(plan, SequentialPlan):
        return SequentialPlan(
            model=model,
            config=plan.config,
            log_a=plan.log_a,
            log_b=plan.log_b,
            truncation_at=plan.truncation_at,
            truncation_accept_max=plan.truncation_accept_max,
            curtailment=plan.curtailment,
        )
    raise TypeError(f"not a plan: {plan!r}")


def write_curve_csv(points, path_or_file):
    """CSV contract: header p,D,metric,value,plan,model; rows in sweep order."""
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        w = csv.writer(fh)
        w.writerow(["p", "D", "metric", "value", "plan", "model"])
        for pt in points:
            w.writerow([
                f"{pt.p:.10g}",
                "" if pt.defect_count is None else pt.defect_count,
                pt.metric,
                f"{pt.value:.12g}",
                pt.plan,
                pt.model,
            ])
    finally:
        if own:
            fh.close()
