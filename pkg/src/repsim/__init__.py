"""Discrete-round simulator of reputation-based master-worker task computing.

A master repeatedly assigns an abstract task to the most reputable subset of
a worker pool, optionally audits the replies, accepts a weighted-majority
answer otherwise, and adapts its audit probability; rational workers adapt
their cheating probability from payoffs. The package provides the mechanism
primitives, a seeded run engine with convergence metrics, built-in scenario
presets, and CSV/JSONL emission for experiment batches.
"""

from .model import (
    Diagnostic,
    MechanismParams,
    PayoffParams,
    ReplyValue,
    ReputationType,
    ScenarioConfig,
    SelectionPolicy,
    WorkerSpec,
    WorkerType,
    config_from_dict,
    config_to_dict,
    load_config,
    make_stream,
    save_config,
    validate_config,
)
from .reputation import ReputationLedger, combined_reputation, responsiveness, truthfulness
from .worker import Reply, WorkerState
from .master import (
    MasterState,
    RoundOutcome,
    accept_by_weighted_majority,
    assign_payoffs,
    decide_audit,
    run_master_round,
    select_top_n,
    select_workers,
    update_audit_prob,
)
from .engine import (
    AggregateStats,
    BatchResult,
    MetricSummary,
    RoundRecord,
    RunMetrics,
    TheoremReport,
    Verdict,
    WorkerSnapshot,
    check_theorem_1,
    check_theorem_2,
    run_batch,
    run_single,
)
from .scenarios import (
    ScenarioPreset,
    build_scenario,
    get_scenario,
    list_scenarios,
    make_config,
    make_workers,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateStats",
    "BatchResult",
    "Diagnostic",
    "MasterState",
    "MechanismParams",
    "MetricSummary",
    "PayoffParams",
    "Reply",
    "ReplyValue",
    "ReputationLedger",
    "ReputationType",
    "RoundOutcome",
    "RoundRecord",
    "RunMetrics",
    "ScenarioConfig",
    "ScenarioPreset",
    "SelectionPolicy",
    "TheoremReport",
    "Verdict",
    "WorkerSnapshot",
    "WorkerSpec",
    "WorkerState",
    "WorkerType",
    "accept_by_weighted_majority",
    "assign_payoffs",
    "build_scenario",
    "check_theorem_1",
    "check_theorem_2",
    "combined_reputation",
    "config_from_dict",
    "config_to_dict",
    "decide_audit",
    "get_scenario",
    "list_scenarios",
    "load_config",
    "make_config",
    "make_stream",
    "make_workers",
    "responsiveness",
    "run_batch",
    "run_master_round",
    "run_single",
    "save_config",
    "select_top_n",
    "select_workers",
    "truthfulness",
    "update_audit_prob",
    "validate_config",
]
