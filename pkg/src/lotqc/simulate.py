"""Monte Carlo replay of inspection plans against lots with a known defect count.

Each repetition lays out the lot as a uniformly random arrangement of defects
(materialized lazily: the next item is defective with probability
remaining_defects / remaining_items, which is exactly a random-permutation
prefix) and runs the plan's decision procedure literally. Repetition r draws
from a generator seeded by (master_seed, r), so results do not depend on
execution order and a parallel fan-out would be bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import DomainError, PopulationModel, Sampling
from .plans import DoublePlan, SequentialPlan, SinglePlan


@dataclass(frozen=True)
class SimulationReport:
    repetitions: int
    accept_count: int
    reject_count: int
    mean_sample_number: float
    sample_number_stddev: float
    seed: int

    @property
    def accept_rate(self) -> float:
        return self.accept_count / self.repetitions

    def to_dict(self) -> dict:
        return {
            "repetitions": self.repetitions,
            "accept_count": self.accept_count,
            "reject_count": self.reject_count,
            "accept_rate": self.accept_rate,
            "mean_sample_number": self.mean_sample_number,
            "sample_number_stddev": self.sample_number_stddev,
            "seed": self.seed,
        }


class _LotStream:
    """Lazy random arrangement of true_defects among lot_size items."""

    def __init__(self, rng, model: PopulationModel, true_defects: int, lot_size: int):
        self._rng = rng
        self._with_replacement = model.kind is Sampling.WITH_REPLACEMENT
        self._rate = true_defects / lot_size
        self._remaining_defects = true_defects
        self._remaining_items = lot_size

    def draw(self) -> bool:
        if self._with_replacement:
            return bool(self._rng.random() < self._rate)
        hit = self._rng.random() < self._remaining_defects / self._remaining_items
        if hit:
            self._remaining_defects -= 1
        self._remaining_items -= 1
        return bool(hit)


def _run_single(plan: SinglePlan, stream) -> tuple:
    d = sum(stream.draw() for _ in range(plan.n))
    return ("accept" if d <= plan.c else "reject"), plan.n


def _run_double(plan: DoublePlan, stream) -> tuple:
    d1 = sum(stream.draw() for _ in range(plan.n1))
    if d1 <= plan.c1:
        return "accept", plan.n1
    if d1 > plan.c2:
        return "reject", plan.n1
    if plan.curtailed:
        # stage 1 is always inspected in full; stage 2 stops at the verdict
        d, used = d1, plan.n1
        for _ in range(plan.n2):
            d += stream.draw()
            used += 1
            if d > plan.c2:
                return "reject", used
        return "accept", used
    d2 = sum(stream.draw() for _ in range(plan.n2))
    total = plan.n1 + plan.n2
    return ("accept" if d1 + d2 <= plan.c2 else "reject"), total


def _run_sequential(plan: SequentialPlan, stream) -> tuple:
    a, r, n_t = plan.decision_bounds()
    d = 0
    for m in range(1, n_t + 1):
        d += stream.draw()
        if d >= r[m]:
            return "reject", m
        if d <= a[m]:
            return "accept", m
    raise AssertionError("truncation must force a verdict")


def simulate(
    plan,
    true_defects: int,
    repetitions: int = 1000,
    seed: int = 0,
    lot_size: int | None = None,
) -> SimulationReport:
    """Replay a plan against a lot with exactly true_defects defective items.

    lot_size defaults to the plan's lot; it must be given for
    with-replacement plans, where draws are i.i.d. at rate
    true_defects / lot_size.
    """
    if repetitions < 1:
        raise DomainError("repetitions must be >= 1")
    model = plan.model
    N = model.lot_size if model.finite else lot_size
    if N is None:
        raise DomainError("with-replacement simulation needs an explicit lot_size")
    if not 0 <= true_defects <= N:
        raise DomainError(f"true_defects {true_defects} outside [0, {N}]")

    runner = {
        SinglePlan: _run_single,
        DoublePlan: _run_double,
        SequentialPlan: _run_sequential,
    }[type(plan)]

    used = np.empty(repetitions, dtype=np.int64)
    accepts = 0
    for rep in range(repetitions):
        rng = np.random.default_rng([seed, rep])
        stream = _LotStream(rng, model, true_defects, N)
        verdict, items = runner(plan, stream)
        used[rep] = items
        accepts += verdict == "accept"
    return SimulationReport(
        repetitions=repetitions,
        accept_count=accepts,
        reject_count=repetitions - accepts,
        mean_sample_number=float(used.mean()),
        sample_number_stddev=float(used.std(ddof=1)) if repetitions > 1 else 0.0,
        seed=seed,
    )
