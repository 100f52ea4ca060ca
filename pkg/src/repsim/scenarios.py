"""Built-in scenario presets: the full-availability pool-size grid and the
partial-availability scenarios S1-S6.

Every preset shares the same default mechanism constants (aspiration 0.1,
learning rates 0.1, tolerance 0.5, minimum audit probability 0.01,
exponential base 0.5, no punishment, task cost 0.1, reward 1, initial
cheating probability 0.5, five selected workers, 100 instantiations); the
truthfulness reputation type and the initial audit probability are generator
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import (
    MechanismParams,
    PayoffParams,
    ReputationType,
    ScenarioConfig,
    SelectionPolicy,
    WorkerSpec,
    WorkerType,
)

__all__ = [
    "ScenarioPreset",
    "make_workers",
    "make_config",
    "list_scenarios",
    "get_scenario",
    "build_scenario",
    "DEFAULT_BASE_SEED",
]

DEFAULT_BASE_SEED = 1729
DEFAULT_SELECT_N = 5
DEFAULT_ASPIRATION = 0.1
DEFAULT_INITIAL_CHEAT_PROB = 0.5

Group = tuple[int, WorkerType, float]  # (count, type, availability)


def _as_reputation(value: ReputationType | str) -> ReputationType:
    if isinstance(value, ReputationType):
        return value
    return ReputationType(value.upper())


def make_workers(
    groups: Sequence[Group],
    aspiration: float = DEFAULT_ASPIRATION,
    initial_cheat_prob: float = DEFAULT_INITIAL_CHEAT_PROB,
    aspiration_jitter: float = 0.0,
    base_seed: int = DEFAULT_BASE_SEED,
) -> tuple[WorkerSpec, ...]:
    """Expand (count, type, availability) groups into a dense worker list.

    With a nonzero ``aspiration_jitter`` each worker's aspiration is drawn
    uniformly from [a - jitter, a + jitter] (floored at 0) on a stream
    derived from the base seed, so the drawn pool is reproducible.
    """
    workers: list[WorkerSpec] = []
    jitter_rng = None
    if aspiration_jitter > 0.0:
        jitter_rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([base_seed % (1 << 64), 0xA5]))
        )
    worker_id = 0
    for count, worker_type, availability in groups:
        for _ in range(count):
            a = aspiration
            if jitter_rng is not None:
                a = max(0.0, jitter_rng.uniform(aspiration - aspiration_jitter,
                                                aspiration + aspiration_jitter))
            workers.append(WorkerSpec(
                worker_id=worker_id,
                worker_type=worker_type,
                availability=availability,
                aspiration=a,
                initial_cheat_prob=initial_cheat_prob,
            ))
            worker_id += 1
    return tuple(workers)


def make_config(
    groups: Sequence[Group],
    reputation_type: ReputationType | str = ReputationType.LINEAR,
    audit_prob_initial: float = 0.5,
    select_n: int = DEFAULT_SELECT_N,
    num_instantiations: int = 100,
    max_rounds: int = 50_000,
    post_convergence_horizon: int = 500,
    base_seed: int = DEFAULT_BASE_SEED,
    aspiration_jitter: float = 0.0,
    selection_policy: SelectionPolicy | None = None,
) -> ScenarioConfig:
    """Scenario with the shared defaults and the given pool composition.

    The selection policy defaults to reputation ranking; a pool exactly the
    size of the selection (everyone plays every round, so there is nothing to
    rank) falls back to the frozen-selection policy, which then selects the
    whole pool.
    """
    workers = make_workers(
        groups,
        aspiration_jitter=aspiration_jitter,
        base_seed=base_seed,
    )
    pool_size = len(workers)
    if selection_policy is None:
        selection_policy = (
            SelectionPolicy.FIXED_RANDOM if select_n == pool_size else SelectionPolicy.REPUTATION
        )
    mechanism = MechanismParams(
        pool_size_N=pool_size,
        select_n=select_n,
        audit_prob_initial=audit_prob_initial,
        reputation_type=_as_reputation(reputation_type),
        selection_policy=selection_policy,
    )
    return ScenarioConfig(
        workers=workers,
        payoffs=PayoffParams(),
        mechanism=mechanism,
        num_instantiations=num_instantiations,
        max_rounds=max_rounds,
        post_convergence_horizon=post_convergence_horizon,
        base_seed=base_seed,
    )


@dataclass(frozen=True)
class ScenarioPreset:
    """Named pool composition whose generator accepts the make_config knobs
    (reputation_type, audit_prob_initial, num_instantiations, ...)."""

    name: str
    description: str
    generator: Callable[..., ScenarioConfig]


def _ratio_counts(pool_size: int, rational_part: int, malicious_part: int) -> tuple[int, int]:
    """Scale a rational:malicious ratio to a pool size (nearest split)."""
    rational = round(pool_size * rational_part / (rational_part + malicious_part))
    return rational, pool_size - rational


def _grid_preset(pool_size: int, rational_part: int, malicious_part: int) -> ScenarioPreset:
    rational, malicious = _ratio_counts(pool_size, rational_part, malicious_part)
    name = f"p{pool_size}-r{rational_part}m{malicious_part}"
    groups = [
        (rational, WorkerType.RATIONAL, 1.0),
        (malicious, WorkerType.MALICIOUS, 1.0),
    ]

    def generator(**kwargs) -> ScenarioConfig:
        return make_config(groups, **kwargs)

    return ScenarioPreset(
        name=name,
        description=(
            f"pool of {pool_size}, full availability: {rational} rational, "
            f"{malicious} malicious (rational/malicious ratio {rational_part}/{malicious_part})"
        ),
        generator=generator,
    )


def _composition_preset(name: str, description: str, groups: Sequence[Group]) -> ScenarioPreset:
    def generator(**kwargs) -> ScenarioConfig:
        return make_config(groups, **kwargs)

    return ScenarioPreset(name=name, description=description, generator=generator)


_PARTIAL_SCENARIOS: list[tuple[str, str, list[Group]]] = [
    ("S1", "9 altruistic workers with d=1",
     [(9, WorkerType.ALTRUISTIC, 1.0)]),
    ("S2", "1 altruistic with d=1 and 8 altruistic workers with d=0.5",
     [(1, WorkerType.ALTRUISTIC, 1.0), (8, WorkerType.ALTRUISTIC, 0.5)]),
    ("S3", "1 altruistic with d=1 and 8 malicious workers with d=0.5",
     [(1, WorkerType.ALTRUISTIC, 1.0), (8, WorkerType.MALICIOUS, 0.5)]),
    ("S4", "9 rational workers with d=1",
     [(9, WorkerType.RATIONAL, 1.0)]),
    ("S5", "1 rational with d=1 and 8 rational workers with d=0.5",
     [(1, WorkerType.RATIONAL, 1.0), (8, WorkerType.RATIONAL, 0.5)]),
    ("S6", "1 rational with d=1 and 8 malicious workers with d=0.5",
     [(1, WorkerType.RATIONAL, 1.0), (8, WorkerType.MALICIOUS, 0.5)]),
]


def _build_catalog() -> dict[str, ScenarioPreset]:
    catalog: dict[str, ScenarioPreset] = {}
    for pool_size in (5, 9, 99):
        for ratio in ((5, 4), (4, 5), (1, 8)):
            preset = _grid_preset(pool_size, *ratio)
            catalog[preset.name] = preset
    for name, description, groups in _PARTIAL_SCENARIOS:
        catalog[name] = _composition_preset(name, description, groups)
    return catalog


_CATALOG = _build_catalog()


def list_scenarios() -> list[ScenarioPreset]:
    """All built-in presets, grid first, then S1-S6."""
    return list(_CATALOG.values())


def get_scenario(name: str) -> ScenarioPreset:
    try:
        return _CATALOG[name]
    except KeyError:
        known = ", ".join(_CATALOG)
        raise KeyError(f"unknown scenario {name!r}; available: {known}") from None


def build_scenario(name: str, **kwargs) -> ScenarioConfig:
    """Generate a preset's config; kwargs are forwarded to make_config."""
    return get_scenario(name).generator(**kwargs)
