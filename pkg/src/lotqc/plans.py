"""Sampling-plan types, their stepwise decision regions, and JSON serialization.

Every plan knows its population model and exposes decision_bounds(): integer
thresholds (a, r) indexed by items inspected m = 1..n_t such that the verdict
after m items with d defects is Accept iff d <= a[m], Reject iff d >= r[m],
Continue otherwise; at m = n_t the regions meet so a verdict is forced. The
live inspection service, the simulator, and the analytic evaluator all share
these regions, so a verdict can never differ between them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from . import _kernels as K
from .models import ConfigError, PopulationModel, QualityConfig

SCHEMA_VERSION = 1

#: d-threshold meaning "unreachable" at m items (d can never exceed m)
def _unreachable(m: int) -> int:
    return m + 1


def effective_consumer_risk(config: QualityConfig) -> float:
    """Half the consumer-risk budget.

    Plan searches target OC(rejectable) <= consumer_risk / 2, mirroring the
    two-sided interval convention of splitting the risk budget; accepted plans
    are therefore conservative on the consumer side while the full Eq-style
    bound OC(rejectable) <= consumer_risk holds with margin.
    """
    return config.consumer_risk / 2.0


@dataclass(frozen=True)
class SinglePlan:
    """Inspect n items, accept iff at most c are defective."""

    n: int
    c: int
    model: PopulationModel
    config: Optional[QualityConfig] = None

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("single plan needs n >= 1")
        if not 0 <= self.c <= self.n:
            raise ConfigError(f"need 0 <= c <= n, got c={self.c}, n={self.n}")
        self.model.check_sample_size(self.n)

    @property
    def kind(self) -> str:
        return "single"

    @property
    def max_items(self) -> int:
        return self.n

    def decision_bounds(self):
        n, c = self.n, self.c
        a = [-1] * (n + 1)
        r = [_unreachable(m) for m in range(n + 1)]
        for m in range(1, n + 1):
            # rejection is certain once d > c; acceptance only at the end
            r[m] = min(c + 1, _unreachable(m))
        a[n] = c
        return a, r, n

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "n": self.n,
            "c": self.c,
            "model": self.model.to_dict(),
            "config": self.config.to_dict() if self.config else None,
        }


@dataclass(frozen=True)
class DoublePlan:
    """Two-stage plan: accept at d1 <= c1, reject at d1 > c2, else inspect stage 2
    and accept iff d1 + d2 <= c2. Stage sizes are equal by construction."""

    n1: int
    n2: int
    c1: int
    c2: int
    model: PopulationModel
    config: Optional[QualityConfig] = None
    curtailed: bool = False

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ConfigError("double plan needs both stage sizes >= 1")
        if not 0 <= self.c1 < self.c2:
            raise ConfigError(f"need 0 <= c1 < c2, got ({self.c1}, {self.c2})")
        self.model.check_sample_size(self.n1 + self.n2)

    @property
    def kind(self) -> str:
        return "double"

    @property
    def max_items(self) -> int:
        return self.n1 + self.n2

    def decision_bounds(self):
        n_t = self.n1 + self.n2
        a = [-1] * (n_t + 1)
        r = [0] * (n_t + 1)
        for m in range(1, n_t + 1):
            r[m] = min(self.c2 + 1, _unreachable(m))
        a[self.n1] = self.c1
        a[n_t] = self.c2
        return a, r, n_t

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "n1": self.n1,
            "n2": self.n2,
            "c1": self.c1,
            "c2": self.c2,
            "curtailed": self.curtailed,
            "model": self.model.to_dict(),
            "config": self.config.to_dict() if self.config else None,
        }


@dataclass(frozen=True)
class SequentialPlan:
    """Item-by-item probability-ratio plan with forced truncation.

    The log-likelihood ratio of the rejectable against the acceptable
    hypothesis is compared to log_b (accept at or below) and log_a (reject at
    or above) after every item; at truncation_at items the lot is accepted iff
    defects <= truncation_accept_max. curtailment="wedge" replaces the exact
    ratio boundaries with straight lines from their m=0 intercepts to the
    truncation decision point, shrinking the continue region (approximate,
    stops earlier).
    """

    model: PopulationModel
    config: QualityConfig
    log_a: float
    log_b: float
    truncation_at: int
    truncation_accept_max: int
    curtailment: str = "none"
    _bounds_cache: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        if not self.log_b < 0.0 < self.log_a:
            raise ConfigError("need log_b < 0 < log_a")
        if self.curtailment not in ("none", "wedge"):
            raise ConfigError(f"unknown curtailment {self.curtailment!r}")
        self.model.check_sample_size(self.truncation_at)

    @property
    def kind(self) -> str:
        return "sequential"

    @property
    def max_items(self) -> int:
        return self.truncation_at

    def hypothesis_params(self):
        """(acceptable, rejectable) as counts (finite lot) or rates."""
        ha, hr = self.config.hypotheses(self.model)
        return ha.resolve(self.model), hr.resolve(self.model)

    def decision_bounds(self):
        if self._bounds_cache:
            return self._bounds_cache[0]
        n_t, c_t = self.truncation_at, self.truncation_accept_max
        pa, pr = self.hypothesis_params()
        if self.curtailment == "none":
            if self.model.finite:
                a, r = K.hyper_llr_boundaries(
                    self.model.lot_size, pa, pr, self.log_a, self.log_b, n_t
                )
            else:
                a, r = K.binom_llr_boundaries(pa, pr, self.log_a, self.log_b, n_t)
        else:
            a, r = self._wedge_bounds(n_t, c_t, pa, pr)
        a = list(a)
        r = [rv if rv <= m else _unreachable(m) for m, rv in enumerate(r)]
        a = [min(av, m) for m, av in enumerate(a)]
        a[n_t] = c_t
        r[n_t] = c_t + 1
        self._bounds_cache.append((a, r, n_t))
        return self._bounds_cache[0]

    def _wedge_bounds(self, n_t, c_t, pa, pr):
        # straight lines from the m=0 ratio-boundary intercepts to the
        # truncation decision point (n_t, c_t + 1/2)
        if self.model.finite:
            N = self.model.lot_size
            k1 = math.log(pr / pa)
            k2 = math.log((N - pr) / (N - pa))
        else:
            k1 = math.log(pr / pa)
            k2 = math.log((1.0 - pr) / (1.0 - pa))
        ia = self.log_b / (k1 - k2)
        ir = self.log_a / (k1 - k2)
        anchor = c_t + 0.5
        a = [-1] * (n_t + 1)
        r = [1 << 30] * (n_t + 1)
        for m in range(1, n_t + 1):
            t = m / n_t
            a[m] = math.floor(ia + (anchor - ia) * t)
            r[m] = math.ceil(ir + (anchor - ir) * t)
            if r[m] <= a[m]:
                a[m] = r[m] - 1
        return a, r

    def boundary_snapshot(self):
        """[(m, accept_max_d, reject_min_d)] for m = 1..truncation_at."""
        a, r, n_t = self.decision_bounds()
        return [(m, a[m], r[m]) for m in range(1, n_t + 1)]

    def to_dict(self) -> dict:
        pa, pr = self.hypothesis_params()
        hyp = (
            {"acceptable_count": pa, "rejectable_count": pr}
            if self.model.finite
            else {"acceptable_rate": pa, "rejectable_rate": pr}
        )
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "log_a": self.log_a,
            "log_b": self.log_b,
            "hypotheses": hyp,
            "truncation": {
                "at": self.truncation_at,
                "accept_if_defects_leq": self.truncation_accept_max,
            },
            "curtailment": self.curtailment,
            "model": self.model.to_dict(),
            "config": self.config.to_dict(),
        }


def plan_from_dict(doc: dict):
    """Inverse of every plan's to_dict; validates the schema version."""
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported plan schema_version {version!r}")
    kind = doc.get("kind")
    model = PopulationModel.from_dict(doc["model"])
    config = QualityConfig.from_dict(doc["config"]) if doc.get("config") else None
    if kind == "single":
        return SinglePlan(n=doc["n"], c=doc["c"], model=model, config=config)
    if kind == "double":
        return DoublePlan(
            n1=doc["n1"],
            n2=doc["n2"],
            c1=doc["c1"],
            c2=doc["c2"],
            model=model,
            config=config,
            curtailed=doc.get("curtailed", False),
        )
    if kind == "sequential":
        if config is None:
            raise ConfigError("sequential plan document requires its config")
        return SequentialPlan(
            model=model,
            config=config,
            log_a=doc["log_a"],
            log_b=doc["log_b"],
            truncation_at=doc["truncation"]["at"],
            truncation_accept_max=doc["truncation"]["accept_if_defects_leq"],
            curtailment=doc.get("curtailment", "none"),
        )
    raise ConfigError(f"unknown plan kind {kind!r}")


def dump_plan(plan, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_plan(path):
    with open(path, encoding="utf-8") as fh:
        return plan_from_dict(json.load(fh))


def decide(plan, outcomes) -> tuple:
    """Run a plan's decision regions over an ordered defect/clean sequence.

    Returns (verdict, items_used, defects_seen) where verdict is one of
    "accept", "reject", "continue"; the scan stops at the first decided
    prefix. The same regions drive the live inspection service.
    """
    a, r, n_t = plan.decision_bounds()
    d = 0
    for m, is_defect in enumerate(outcomes, start=1):
        if m > n_t:
            break
        if is_defect:
            d += 1
        if d >= r[m]:
            return "reject", m, d
        if d <= a[m]:
            return "accept", m, d
    return "continue", min(len(outcomes), n_t), d
