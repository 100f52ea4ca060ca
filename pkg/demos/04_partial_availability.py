"""Partial availability: scenarios S1-S6 under all three reputation types.

Each scenario pits one always-available worker against eight peers that are
only available half the time (or reliable peers, in the baselines S1/S4).
The table reports medians over 40 seeds: rounds and audits until the audit
probability reaches its floor, incorrect results accepted before and after
that point, and how many runs kept accepting wrong values or empty rounds
afterwards. The long-run correctness checks for the no-rational-workers
compositions run at the end.
"""

from repsim import check_theorem_1, check_theorem_2, run_batch
from repsim.scenarios import build_scenario, make_config
from repsim.model import WorkerType

SEEDS = 40

print(f"{'scenario':<9} {'type':<12} {'rounds':>7} {'audits':>7} "
      f"{'bad<conv':>9} {'bad>conv':>9} {'violations':>11}")
for name in ("S1", "S2", "S3", "S4", "S5", "S6"):
    for rep in ("linear", "exponential", "boinc"):
        config = build_scenario(name, reputation_type=rep, num_instantiations=SEEDS)
        batch = run_batch(config)
        stats = batch.aggregate.metrics
        print(
            f"{name:<9} {rep:<12} "
            f"{stats['convergence_round'].median:>7g} "
            f"{stats['audits_to_convergence'].median:>7g} "
            f"{stats['incorrect_before'].median:>9g} "
            f"{stats['incorrect_after'].median:>9g} "
            f"{batch.aggregate.violated_count:>8}/{SEEDS}"
        )
    print()

print("long-run correctness checks (100 seeds each):")
s3 = build_scenario("S3", reputation_type="linear")
print(f"  S3 linear:       {check_theorem_1(s3).verdict.value}")
mixed = make_config(
    [(1, WorkerType.ALTRUISTIC, 1.0), (4, WorkerType.ALTRUISTIC, 0.5),
     (4, WorkerType.MALICIOUS, 0.5)],
    reputation_type="boinc",
)
print(f"  1+4 altruistic / 4 malicious, boinc: {check_theorem_2(mixed).verdict.value}")
s2 = build_scenario("S2", reputation_type="boinc")
report = check_theorem_2(s2)
print(f"  S2 boinc: {report.verdict.value} -- {report.reason}")
