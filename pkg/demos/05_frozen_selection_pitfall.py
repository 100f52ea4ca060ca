"""Why the master must be able to change workers: frozen selection fails.

If the master draws five workers once and sticks with them, a pool whose
five members are all malicious leaves no way out: every unaudited round
accepts the agreed-upon wrong value, every audited round catches everyone,
and the audit probability ratchets up to 1 and stays there. The run never
reaches the minimum-auditing regime, so the long-run correctness goal is
unreachable -- the master pays for a full audit forever.

Contrast with reputation-based reselection over a pool of 9 (4 honest
workers added): the malicious five are demoted and the system converges.
"""

from repsim import ReplyValue, run_single
from repsim.model import SelectionPolicy, WorkerType
from repsim.scenarios import make_config

frozen = make_config(
    [(5, WorkerType.MALICIOUS, 1.0)],
    select_n=5,
    selection_policy=SelectionPolicy.FIXED_RANDOM,
    max_rounds=10_000,
)
records, metrics = run_single(frozen, seed=frozen.seed_for(0))
unaudited = [r for r in records if not r.outcome.audited]
wrong = sum(1 for r in unaudited if r.outcome.accepted_value is ReplyValue.WRONG)
print("frozen all-malicious selection, 10000 rounds:")
print(f"  unaudited rounds: {len(unaudited)}, of which accepted WRONG: {wrong}")
print(f"  audit probability at the end: {records[-1].audit_prob_after}")
print(f"  converged: {not metrics.not_converged}, "
      f"long-run correctness violated: {metrics.eventual_correctness_violated}")

recovering = make_config(
    [(5, WorkerType.MALICIOUS, 1.0), (4, WorkerType.ALTRUISTIC, 1.0)],
    select_n=5,
)
_, metrics = run_single(recovering, seed=recovering.seed_for(0), keep_records=False)
print("\nreputation-ranked selection over 5 malicious + 4 altruistic:")
print(f"  converged at round {metrics.convergence_round} after "
      f"{metrics.audits_to_convergence} audits; "
      f"incorrect accepted after convergence: {metrics.incorrect_after_convergence}")
