"""Domain types shared across the toolkit: population model, hypotheses, quality targets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class DomainError(ValueError):
    """An argument lies outside a distribution's support or precondition."""


class ConfigError(ValueError):
    """A quality configuration violates its defining constraints."""


class InfeasiblePlanError(RuntimeError):
    """No plan exists within the lot for the requested risks."""

    def __init__(self, message, last_c=None):
        super().__init__(message)
        self.last_c = last_c


def round_half_up(x: float) -> int:
    """Deterministic rate-to-count rounding used for every rate*N conversion."""
    return int(math.floor(x + 0.5))


class Sampling(str, Enum):
    WITHOUT_REPLACEMENT = "without_replacement"
    WITH_REPLACEMENT = "with_replacement"


@dataclass(frozen=True)
class PopulationModel:
    """Lot size and sampling regime.

    Sampling without replacement (the inspection process: no instance is
    checked twice) is hypergeometric and requires the lot size; sampling with
    replacement is the binomial approximation and carries no lot size.
    """

    kind: Sampling
    lot_size: int | None = None

    def __post_init__(self):
        if self.kind is Sampling.WITHOUT_REPLACEMENT:
            if self.lot_size is None or self.lot_size < 1:
                raise ConfigError("sampling without replacement requires lot_size >= 1")
        elif self.lot_size is not None:
            raise ConfigError("lot_size is meaningless when sampling with replacement")

    @staticmethod
    def without_replacement(lot_size: int) -> "PopulationModel":
        return PopulationModel(Sampling.WITHOUT_REPLACEMENT, int(lot_size))

    @staticmethod
    def with_replacement() -> "PopulationModel":
        return PopulationModel(Sampling.WITH_REPLACEMENT)

    @property
    def finite(self) -> bool:
        return self.kind is Sampling.WITHOUT_REPLACEMENT

    def count_for_rate(self, rate: float) -> int:
        if not self.finite:
            raise ConfigError("rate->count conversion needs a finite lot")
        return round_half_up(rate * self.lot_size)

    def check_sample_size(self, n: int):
        if n < 0:
            raise DomainError(f"sample size must be >= 0, got {n}")
        if self.finite and n > self.lot_size:
            raise DomainError(f"sample size {n} exceeds lot size {self.lot_size}")

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value}
        if self.lot_size is not None:
            d["lot_size"] = self.lot_size
        return d

    @staticmethod
    def from_dict(d: dict) -> "PopulationModel":
        return PopulationModel(Sampling(d["kind"]), d.get("lot_size"))


@dataclass(frozen=True)
class DefectHypothesis:
    """A hypothesised lot state: defect count (finite lot) or defect rate.

    Exactly one representation is active; conversion between them is explicit
    via for_model / count_for_rate, never implicit.
    """

    defect_count: int | None = None
    defect_rate: float | None = None

    def __post_init__(self):
        if (self.defect_count is None) == (self.defect_rate is None):
            raise ConfigError("exactly one of defect_count / defect_rate must be set")
        if self.defect_count is not None and self.defect_count < 0:
            raise DomainError("defect_count must be >= 0")
        if self.defect_rate is not None and not 0.0 <= self.defect_rate <= 1.0:
            raise DomainError("defect_rate must lie in [0, 1]")

    @staticmethod
    def count(d: int) -> "DefectHypothesis":
        return DefectHypothesis(defect_count=int(d))

    @staticmethod
    def rate(p: float) -> "DefectHypothesis":
        return DefectHypothesis(defect_rate=float(p))

    @staticmethod
    def for_model(model: PopulationModel, rate: float) -> "DefectHypothesis":
        """Rate under the model's regime: count = round(rate*N) for finite lots."""
        if model.finite:
            return DefectHypothesis.count(model.count_for_rate(rate))
        return DefectHypothesis.rate(rate)

    def resolve(self, model: PopulationModel):
        """Validated (count or rate) matching the model kind."""
        if model.finite:
            if self.defect_count is None:
                raise ConfigError("finite lot needs a defect_count hypothesis")
            if self.defect_count > model.lot_size:
                raise DomainError(
                    f"defect_count {self.defect_count} exceeds lot size {model.lot_size}"
                )
            return self.defect_count
        if self.defect_rate is None:
            raise ConfigError("with-replacement model needs a defect_rate hypothesis")
        return self.defect_rate


@dataclass(frozen=True)
class QualityConfig:
    """The (p_a, p_r, alpha, beta, ci_half_width) quality-target bundle.

    acceptable_rate is the defect rate still considered fine, rejectable_rate
    the rate that must be caught; producer_risk bounds the chance of rejecting
    an acceptable lot and consumer_risk the chance of accepting a rejectable
    one. ci_half_width is the target margin for interval-based planning.
    """

    acceptable_rate: float
    rejectable_rate: float
    producer_risk: float
    consumer_risk: float
    ci_half_width: float | None = None

    def __post_init__(self):
        pa, pr = self.acceptable_rate, self.rejectable_rate
        a, b = self.producer_risk, self.consumer_risk
        if not 0.0 < pa < pr < 1.0:
            raise ConfigError(f"need 0 < acceptable_rate < rejectable_rate < 1, got ({pa}, {pr})")
        if not (1.0 > 1.0 - a > b > 0.0):
            raise ConfigError(f"need 1 > 1-producer_risk > consumer_risk > 0, got ({a}, {b})")
        if self.ci_half_width is not None and not 0.0 < self.ci_half_width < 1.0:
            raise ConfigError("ci_half_width must lie in (0, 1)")

    def hypotheses(self, model: PopulationModel) -> tuple:
        """(acceptable, rejectable) hypotheses under the model.

        Rejects configurations whose rates collapse onto the same defect
        count after rounding, since no plan can separate them.
        """
        ha = DefectHypothesis.for_model(model, self.acceptable_rate)
        hr = DefectHypothesis.for_model(model, self.rejectable_rate)
        if model.finite and ha.defect_count >= hr.defect_count:
            raise ConfigError(
                "acceptable and rejectable rates round to the same defect count "
                f"({ha.defect_count}) in a lot of {model.lot_size}"
            )
        return ha, hr

    def to_dict(self) -> dict:
        return {
            "acceptable_rate": self.acceptable_rate,
            "rejectable_rate": self.rejectable_rate,
            "producer_risk": self.producer_risk,
            "consumer_risk": self.consumer_risk,
            "ci_half_width": self.ci_half_width,
        }

    @staticmethod
    def from_dict(d: dict) -> "QualityConfig":
        return QualityConfig(
            acceptable_rate=d["acceptable_rate"],
            rejectable_rate=d["rejectable_rate"],
            producer_risk=d["producer_risk"],
            consumer_risk=d["consumer_risk"],
            ci_half_width=d.get("ci_half_width"),
        )


#: Built-in target quality levels.
STRICT = QualityConfig(0.01, 0.03, 0.01, 0.10, 0.01)
RELAXED = QualityConfig(0.02, 0.05, 0.05, 0.20, 0.02)

PRESETS = {"strict": STRICT, "relaxed": RELAXED}
