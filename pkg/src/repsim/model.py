"""Domain types, scenario configuration, validation, and seeded randomness.

Everything downstream (reputation ledgers, the master controller, the run
engine) shares the types defined here. A :class:`ScenarioConfig` is a plain,
JSON-serializable value object; two runs built from equal configs and equal
seeds produce identical round streams.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

import numpy as np

__all__ = [
    "WorkerType",
    "ReplyValue",
    "ReputationType",
    "SelectionPolicy",
    "WorkerSpec",
    "PayoffParams",
    "MechanismParams",
    "ScenarioConfig",
    "Diagnostic",
    "validate_config",
    "make_stream",
    "config_to_dict",
    "config_from_dict",
    "load_config",
    "save_config",
]


class WorkerType(str, Enum):
    MALICIOUS = "MALICIOUS"
    ALTRUISTIC = "ALTRUISTIC"
    RATIONAL = "RATIONAL"


class ReplyValue(str, Enum):
    """Abstract task result: one correct value, one (shared) incorrect value."""

    CORRECT = "CORRECT"
    WRONG = "WRONG"


class ReputationType(str, Enum):
    LINEAR = "LINEAR"
    EXPONENTIAL = "EXPONENTIAL"
    BOINC = "BOINC"


class SelectionPolicy(str, Enum):
    REPUTATION = "REPUTATION"
    FIXED_RANDOM = "FIXED_RANDOM"


@dataclass(frozen=True)
class WorkerSpec:
    """Static description of one worker in the pool.

    ``initial_cheat_prob`` is only meaningful for RATIONAL workers; malicious
    and altruistic workers have hardwired behavior. ``learning_rate`` is an
    optional per-worker override of the shared worker learning rate.
    """

    worker_id: int
    worker_type: WorkerType
    availability: float = 1.0
    aspiration: float = 0.1
    initial_cheat_prob: float = 0.5
    learning_rate: float | None = None


@dataclass(frozen=True)
class PayoffParams:
    """Worker-side payoff constants."""

    punishment_WPc: float = 0.0
    task_cost_WCt: float = 0.1
    reward_WBy: float = 1.0


@dataclass(frozen=True)
class MechanismParams:
    """Parameters of the master's selection/audit mechanism."""

    pool_size_N: int
    select_n: int
    audit_prob_initial: float = 0.5
    audit_prob_min: float = 0.01
    tolerance_tau: float = 0.5
    master_learning_rate_alpha_m: float = 0.1
    worker_learning_rate_alpha_w: float = 0.1
    reputation_type: ReputationType = ReputationType.LINEAR
    exponential_base_epsilon: float = 0.5
    selection_policy: SelectionPolicy = SelectionPolicy.REPUTATION


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete, self-contained description of a batch of simulation runs."""

    workers: tuple[WorkerSpec, ...]
    payoffs: PayoffParams
    mechanism: MechanismParams
    num_instantiations: int = 100
    max_rounds: int = 50_000
    post_convergence_horizon: int = 500
    base_seed: int = 1729

    def seed_for(self, k: int) -> int:
        """Seed of instantiation ``k``; each instantiation owns its stream."""
        return (self.base_seed + k) % (1 << 64)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    field: str
    message: str


ERROR = "error"
WARNING = "warning"


def _probability(x: float) -> bool:
    return 0.0 <= x <= 1.0


def validate_config(config: ScenarioConfig) -> list[Diagnostic]:
    """Check every structural invariant of a scenario.

    Returns one diagnostic per violation, naming the offending field. The
    participation condition (reward minus task cost must cover the largest
    aspiration in the pool) is reported as a warning; everything else is an
    error. An empty list means the config is fully valid.
    """
    diags: list[Diagnostic] = []
    err = lambda f, m: diags.append(Diagnostic(ERROR, f, m))
    warn = lambda f, m: diags.append(Diagnostic(WARNING, f, m))

    m = config.mechanism
    if m.pool_size_N < 1:
        err("mechanism.pool_size_N", "pool_size_N must be >= 1")
    if m.select_n < 1:
        err("mechanism.select_n", "select_n must be >= 1")
    if m.select_n > m.pool_size_N:
        err("mechanism.select_n", "select_n must be <= pool_size_N")
    elif m.selection_policy is SelectionPolicy.REPUTATION and m.select_n == m.pool_size_N:
        err("mechanism.select_n", "select_n must be < pool_size_N under REPUTATION selection")
    if not 0.0 < m.audit_prob_min <= 1.0:
        err("mechanism.audit_prob_min", "audit_prob_min must be in (0, 1]")
    if not _probability(m.audit_prob_initial):
        err("mechanism.audit_prob_initial", "audit_prob_initial must be in [0, 1]")
    elif 0.0 < m.audit_prob_min <= 1.0 and m.audit_prob_initial < m.audit_prob_min:
        err("mechanism.audit_prob_initial", "audit_prob_initial must be >= audit_prob_min")
    if not _probability(m.tolerance_tau):
        err("mechanism.tolerance_tau", "tolerance_tau must be in [0, 1]")
    if m.master_learning_rate_alpha_m <= 0.0:
        err("mechanism.master_learning_rate_alpha_m", "master learning rate must be > 0")
    if m.worker_learning_rate_alpha_w <= 0.0:
        err("mechanism.worker_learning_rate_alpha_w", "worker learning rate must be > 0")
    if not 0.0 < m.exponential_base_epsilon < 1.0:
        err("mechanism.exponential_base_epsilon", "exponential_base_epsilon must be in (0, 1)")

    if len(config.workers) != m.pool_size_N:
        err("workers", f"expected {m.pool_size_N} workers, got {len(config.workers)}")
    ids = sorted(w.worker_id for w in config.workers)
    if ids != list(range(len(config.workers))):
        err("workers", "worker_ids must be distinct and dense in [0, N)")

    for w in config.workers:
        tag = f"workers[{w.worker_id}]"
        if not 0.0 < w.availability <= 1.0:
            err(f"{tag}.availability", "availability must be > 0 and <= 1")
        if not _probability(w.initial_cheat_prob):
            err(f"{tag}.initial_cheat_prob", "initial_cheat_prob must be in [0, 1]")
        if w.aspiration < 0.0:
            err(f"{tag}.aspiration", "aspiration must be >= 0")
        if w.learning_rate is not None and w.learning_rate <= 0.0:
            err(f"{tag}.learning_rate", "learning_rate override must be > 0")

    p = config.payoffs
    if p.punishment_WPc < 0.0:
        err("payoffs.punishment_WPc", "punishment_WPc must be >= 0")
    if p.task_cost_WCt < 0.0:
        err("payoffs.task_cost_WCt", "task_cost_WCt must be >= 0")
    if p.reward_WBy < 0.0:
        err("payoffs.reward_WBy", "reward_WBy must be >= 0")
    if config.workers:
        max_aspiration = max(w.aspiration for w in config.workers)
        if p.reward_WBy - p.task_cost_WCt < max_aspiration:
            warn(
                "payoffs.reward_WBy",
                "participation condition violated: reward_WBy - task_cost_WCt "
                f"({p.reward_WBy - p.task_cost_WCt!r}) is below the maximum aspiration "
                f"({max_aspiration!r})",
            )

    if config.num_instantiations < 1:
        err("num_instantiations", "num_instantiations must be >= 1")
    if config.max_rounds < 1:
        err("max_rounds", "max_rounds must be >= 1")
    if config.post_convergence_horizon < 1:
        err("post_convergence_horizon", "post_convergence_horizon must be >= 1")

    return diags


def config_errors(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diags if d.severity == ERROR]


def make_stream(seed: int) -> np.random.Generator:
    """Seeded random stream: same seed, same draw sequence, bit for bit."""
    return np.random.Generator(np.random.PCG64(seed % (1 << 64)))


# --- serialization ----------------------------------------------------------
#
# The on-disk format is a JSON object whose keys mirror ScenarioConfig field
# names exactly; enums are stored as their string names. See README for the
# documented schema.


def config_to_dict(config: ScenarioConfig) -> dict[str, Any]:
    d = asdict(config)
    d["workers"] = [
        {**w, "worker_type": w["worker_type"].value} for w in d["workers"]
    ]
    d["mechanism"]["reputation_type"] = config.mechanism.reputation_type.value
    d["mechanism"]["selection_policy"] = config.mechanism.selection_policy.value
    return d


def _take(d: dict[str, Any], known: set[str], where: str) -> None:
    unknown = set(d) - known
    if unknown:
        raise ValueError(f"unknown {where} field(s): {', '.join(sorted(unknown))}")


def _required(d: dict[str, Any], key: str, where: str) -> Any:
    if key not in d:
        raise ValueError(f"missing required {where} field: {key}")
    return d[key]


def config_from_dict(d: dict[str, Any]) -> ScenarioConfig:
    """Parse a config dict; raises ValueError on unknown or missing fields."""
    _take(d, {"workers", "payoffs", "mechanism", "num_instantiations",
              "max_rounds", "post_convergence_horizon", "base_seed"}, "config")
    workers = []
    for w in _required(d, "workers", "config"):
        _take(w, {"worker_id", "worker_type", "availability", "aspiration",
                  "initial_cheat_prob", "learning_rate"}, "worker")
        workers.append(WorkerSpec(
            worker_id=int(_required(w, "worker_id", "worker")),
            worker_type=WorkerType(_required(w, "worker_type", "worker")),
            availability=float(w.get("availability", 1.0)),
            aspiration=float(w.get("aspiration", 0.1)),
            initial_cheat_prob=float(w.get("initial_cheat_prob", 0.5)),
            learning_rate=None if w.get("learning_rate") is None else float(w["learning_rate"]),
        ))
    pd = d.get("payoffs", {})
    _take(pd, {"punishment_WPc", "task_cost_WCt", "reward_WBy"}, "payoffs")
    md = _required(d, "mechanism", "config")
    _take(md, {"pool_size_N", "select_n", "audit_prob_initial", "audit_prob_min",
               "tolerance_tau", "master_learning_rate_alpha_m",
               "worker_learning_rate_alpha_w", "reputation_type",
               "exponential_base_epsilon", "selection_policy"}, "mechanism")
    mechanism = MechanismParams(
        pool_size_N=int(_required(md, "pool_size_N", "mechanism")),
        select_n=int(_required(md, "select_n", "mechanism")),
        audit_prob_initial=float(md.get("audit_prob_initial", 0.5)),
        audit_prob_min=float(md.get("audit_prob_min", 0.01)),
        tolerance_tau=float(md.get("tolerance_tau", 0.5)),
        master_learning_rate_alpha_m=float(md.get("master_learning_rate_alpha_m", 0.1)),
        worker_learning_rate_alpha_w=float(md.get("worker_learning_rate_alpha_w", 0.1)),
        reputation_type=ReputationType(md.get("reputation_type", "LINEAR")),
        exponential_base_epsilon=float(md.get("exponential_base_epsilon", 0.5)),
        selection_policy=SelectionPolicy(md.get("selection_policy", "REPUTATION")),
    )
    return ScenarioConfig(
        workers=tuple(workers),
        payoffs=PayoffParams(
            punishment_WPc=float(pd.get("punishment_WPc", 0.0)),
            task_cost_WCt=float(pd.get("task_cost_WCt", 0.1)),
            reward_WBy=float(pd.get("reward_WBy", 1.0)),
        ),
        mechanism=mechanism,
        num_instantiations=int(d.get("num_instantiations", 100)),
        max_rounds=int(d.get("max_rounds", 50_000)),
        post_convergence_horizon=int(d.get("post_convergence_horizon", 500)),
        base_seed=int(d.get("base_seed", 1729)),
    )


def save_config(config: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n")


def load_config(path: str | Path) -> ScenarioConfig:
    return config_from_dict(json.loads(Path(path).read_text()))
