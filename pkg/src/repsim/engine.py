"""Multi-round runs, convergence detection, batch aggregation, and the
long-run correctness property checks."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .master import MasterState, RoundOutcome, run_master_round
from .model import (
    ReplyValue,
    ReputationType,
    ScenarioConfig,
    WorkerType,
    config_errors,
    make_stream,
    validate_config,
)
from .worker import WorkerState

__all__ = [
    "WorkerSnapshot",
    "RoundRecord",
    "RunMetrics",
    "MetricSummary",
    "AggregateStats",
    "BatchResult",
    "run_single",
    "run_batch",
    "Verdict",
    "TheoremReport",
    "check_theorem_1",
    "check_theorem_2",
]

METRIC_NAMES = (
    "convergence_round",
    "audits_to_convergence",
    "incorrect_before",
    "incorrect_after",
    "empty_after",
)


@dataclass(frozen=True)
class WorkerSnapshot:
    """State of one selected worker as of the end of a round."""

    worker_id: int
    worker_type: WorkerType
    cheat_prob: float
    responsiveness: float
    truthfulness: float
    combined: float


@dataclass(frozen=True)
class RoundRecord:
    round_index: int
    outcome: RoundOutcome
    snapshots: tuple[WorkerSnapshot, ...]
    audit_prob_before: float

    @property
    def audit_prob_after(self) -> float:
        return self.outcome.audit_prob_after


@dataclass(frozen=True)
class RunMetrics:
    """Summary of one run.

    ``convergence_round`` is the first round whose post-round audit
    probability sits exactly at the configured minimum; ``None`` means the
    run hit max_rounds without converging. Counts of accepted-WRONG rounds
    are split at the convergence round (the convergence round itself counts
    as "before"). A run violates eventual correctness when any
    post-convergence round accepted a wrong value or nothing at all, or when
    it never converged.
    """

    seed: int
    convergence_round: int | None
    audits_to_convergence: int
    incorrect_before_convergence: int
    incorrect_after_convergence: int
    empty_rounds_after_convergence: int
    eventual_correctness_violated: bool

    @property
    def not_converged(self) -> bool:
        return self.convergence_round is None


@dataclass(frozen=True)
class MetricSummary:
    minimum: float
    maximum: float
    mean: float
    median: float
    std: float


@dataclass(frozen=True)
class AggregateStats:
    """Per-metric statistics over the converged runs of a batch."""

    metrics: dict[str, MetricSummary]
    converged_count: int
    not_converged_count: int
    violated_count: int


@dataclass(frozen=True)
class BatchResult:
    seeds: tuple[int, ...]
    runs: tuple[RunMetrics, ...]
    aggregate: AggregateStats
    records: tuple[tuple[RoundRecord, ...], ...] | None = None


def _require_valid(config: ScenarioConfig) -> None:
    errors = config_errors(validate_config(config))
    if errors:
        detail = "; ".join(f"{d.field}: {d.message}" for d in errors)
        raise ValueError(f"invalid scenario config: {detail}")


def run_single(
    config: ScenarioConfig,
    seed: int,
    keep_records: bool = True,
) -> tuple[list[RoundRecord], RunMetrics]:
    """Run one seeded instantiation to convergence plus the configured
    horizon (or to max_rounds), returning the round trail and its metrics.

    With ``keep_records=False`` the trail is skipped and an empty list is
    returned; the metrics are identical either way.
    """
    _require_valid(config)
    specs = sorted(config.workers, key=lambda w: w.worker_id)
    workers = [WorkerState.from_spec(s) for s in specs]
    rng = make_stream(seed)
    master = MasterState(config.mechanism, config.payoffs, rng)
    p_min = config.mechanism.audit_prob_min
    horizon = config.post_convergence_horizon

    records: list[RoundRecord] = []
    convergence_round: int | None = None
    audits_before_convergence = 0
    incorrect_before = 0
    incorrect_after = 0
    empty_after = 0
    violated = False

    for r in range(1, config.max_rounds + 1):
        audit_prob_before = master.audit_prob
        outcome = run_master_round(master, workers, rng)
        if keep_records:
            snapshots = tuple(
                WorkerSnapshot(
                    worker_id=i,
                    worker_type=workers[i].spec.worker_type,
                    cheat_prob=workers[i].cheat_prob,
                    responsiveness=float(master.resp[i]),
                    truthfulness=float(master.truth[i]),
                    combined=float(master.resp[i] * master.truth[i]),
                )
                for i in outcome.selected
            )
            records.append(RoundRecord(r, outcome, snapshots, audit_prob_before))

        accepted = outcome.accepted_value
        if convergence_round is None:
            if outcome.audited:
                audits_before_convergence += 1
            if accepted is ReplyValue.WRONG:
                incorrect_before += 1
            if master.audit_prob == p_min:
                convergence_round = r
        else:
            if accepted is ReplyValue.WRONG:
                incorrect_after += 1
            if accepted is None:
                empty_after += 1
            if accepted is not ReplyValue.CORRECT:
                violated = True
        if convergence_round is not None and r >= convergence_round + horizon:
            break

    if convergence_round is None:
        # Never reached the minimum-audit regime: the long-run property is
        # unattainable in this run, whatever was accepted along the way.
        violated = True
        incorrect_after = 0
        empty_after = 0

    metrics = RunMetrics(
        seed=seed,
        convergence_round=convergence_round,
        audits_to_convergence=audits_before_convergence,
        incorrect_before_convergence=incorrect_before,
        incorrect_after_convergence=incorrect_after,
        empty_rounds_after_convergence=empty_after,
        eventual_correctness_violated=violated,
    )
    return records, metrics


def _batch_task(args: tuple[ScenarioConfig, int, bool]):
    config, seed, keep_records = args
    records, metrics = run_single(config, seed, keep_records=keep_records)
    return tuple(records), metrics


def aggregate_metrics(runs: list[RunMetrics]) -> AggregateStats:
    """Min/max/mean/median/std per metric over the converged runs."""
    converged = [m for m in runs if not m.not_converged]
    stats: dict[str, MetricSummary] = {}
    if converged:
        columns = {
            "convergence_round": [m.convergence_round for m in converged],
            "audits_to_convergence": [m.audits_to_convergence for m in converged],
            "incorrect_before": [m.incorrect_before_convergence for m in converged],
            "incorrect_after": [m.incorrect_after_convergence for m in converged],
            "empty_after": [m.empty_rounds_after_convergence for m in converged],
        }
        for name, values in columns.items():
            arr = np.asarray(values, dtype=float)
            stats[name] = MetricSummary(
                minimum=float(arr.min()),
                maximum=float(arr.max()),
                mean=float(arr.mean()),
                median=float(np.median(arr)),
                std=float(arr.std()),
            )
    return AggregateStats(
        metrics=stats,
        converged_count=len(converged),
        not_converged_count=len(runs) - len(converged),
        violated_count=sum(1 for m in runs if m.eventual_correctness_violated),
    )


def run_batch(
    config: ScenarioConfig,
    parallel: int = 1,
    keep_records: bool = False,
) -> BatchResult:
    """Run ``num_instantiations`` independent seeded runs and aggregate.

    Instantiation k runs on seed ``base_seed + k``. Results are gathered and
    aggregated in seed order, so the outcome does not depend on ``parallel``.
    """
    _require_valid(config)
    seeds = [config.seed_for(k) for k in range(config.num_instantiations)]
    tasks = [(config, seed, keep_records) for seed in seeds]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_batch_task, tasks))
    else:
        results = [_batch_task(t) for t in tasks]
    runs = [metrics for _, metrics in results]
    return BatchResult(
        seeds=tuple(seeds),
        runs=tuple(runs),
        aggregate=aggregate_metrics(runs),
        records=tuple(records for records, _ in results) if keep_records else None,
    )


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INAPPLICABLE = "INAPPLICABLE"


@dataclass(frozen=True)
class TheoremReport:
    verdict: Verdict
    reason: str
    total_runs: int = 0
    converged_runs: int = 0
    violating_runs: int = 0

    @property
    def violating_fraction(self) -> float:
        return self.violating_runs / self.converged_runs if self.converged_runs else 0.0


def _run_violates(m: RunMetrics) -> bool:
    return m.incorrect_after_convergence > 0 or m.empty_rounds_after_convergence > 0


def _composition(config: ScenarioConfig):
    types = {w.worker_type for w in config.workers}
    full_altruistic = any(
        w.worker_type is WorkerType.ALTRUISTIC and w.availability == 1.0
        for w in config.workers
    )
    return types, full_altruistic


def check_theorem_1(config: ScenarioConfig, parallel: int = 1) -> TheoremReport:
    """Long-run correctness check for pools without rational workers under
    the forgiving reputation types.

    Applicable when the pool holds only altruistic/malicious workers, at
    least one altruistic worker is always available, and the truthfulness
    type is LINEAR or EXPONENTIAL. PASS means every converged run stayed free
    of post-convergence violations.
    """
    types, full_altruistic = _composition(config)
    if WorkerType.RATIONAL in types:
        return TheoremReport(Verdict.INAPPLICABLE, "pool contains rational workers")
    if not full_altruistic:
        return TheoremReport(Verdict.INAPPLICABLE, "no altruistic worker with availability 1")
    if config.mechanism.reputation_type not in (ReputationType.LINEAR, ReputationType.EXPONENTIAL):
        return TheoremReport(Verdict.INAPPLICABLE, "reputation type must be LINEAR or EXPONENTIAL")

    batch = run_batch(config, parallel=parallel)
    converged = [m for m in batch.runs if not m.not_converged]
    violating = sum(1 for m in converged if _run_violates(m))
    if not converged:
        return TheoremReport(Verdict.FAIL, "no run converged", len(batch.runs), 0, 0)
    verdict = Verdict.PASS if violating == 0 else Verdict.FAIL
    reason = (
        "all converged runs violation-free"
        if violating == 0
        else f"{violating}/{len(converged)} converged runs accepted WRONG or NONE after convergence"
    )
    return TheoremReport(verdict, reason, len(batch.runs), len(converged), violating)


def check_theorem_2(config: ScenarioConfig, parallel: int = 1) -> TheoremReport:
    """Directionality check for the streak-threshold reputation type.

    Applicable to altruistic/malicious pools with at least one always
    -available altruistic worker under BOINC truthfulness. When fewer than
    ``select_n`` altruistic workers are partially available, every converged
    run must be violation-free. Otherwise a violation is possible but not
    certain: the report carries the observed violating fraction, and PASS
    requires having seen at least one violating run (sample enough seeds).
    """
    types, full_altruistic = _composition(config)
    if WorkerType.RATIONAL in types:
        return TheoremReport(Verdict.INAPPLICABLE, "pool contains rational workers")
    if not full_altruistic:
        return TheoremReport(Verdict.INAPPLICABLE, "no altruistic worker with availability 1")
    if config.mechanism.reputation_type is not ReputationType.BOINC:
        return TheoremReport(Verdict.INAPPLICABLE, "reputation type must be BOINC")

    partial_altruistic = sum(
        1
        for w in config.workers
        if w.worker_type is WorkerType.ALTRUISTIC and w.availability < 1.0
    )
    batch = run_batch(config, parallel=parallel)
    converged = [m for m in batch.runs if not m.not_converged]
    violating = sum(1 for m in converged if _run_violates(m))
    total, n_conv = len(batch.runs), len(converged)

    if partial_altruistic < config.mechanism.select_n:
        if not converged:
            return TheoremReport(Verdict.FAIL, "no run converged", total, 0, 0)
        verdict = Verdict.PASS if violating == 0 else Verdict.FAIL
        reason = (
            f"{partial_altruistic} partially-available altruistic workers < n: "
            + ("violation-free as required" if violating == 0 else f"{violating} violating runs")
        )
        return TheoremReport(verdict, reason, total, n_conv, violating)

    verdict = Verdict.PASS if violating > 0 else Verdict.FAIL
    reason = (
        f"{partial_altruistic} partially-available altruistic workers >= n: violation has "
        f"positive probability; observed fraction {violating}/{n_conv}"
        + ("" if violating else " (none observed in this sample; try more seeds)")
    )
    return TheoremReport(verdict, reason, total, n_conv, violating)
