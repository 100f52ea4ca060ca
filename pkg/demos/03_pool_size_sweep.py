"""Effect of pool size on time-to-convergence for each reputation type.

Sweeps pools of 5, 9, and 99 workers holding the rational/malicious ratio
at 1/8 (full availability, initial audit probability 0.5). The streak-based
BOINC type slows down sharply with pool size -- scores stay at zero until
enough workers accumulate ten audited-honest replies -- and EXPONENTIAL also
pays for churning through the large pool, while LINEAR is largely
insensitive. Uses 30 seeds per cell to keep the demo quick; the acceptance
suite runs the full 100-seed version.
"""

from repsim import run_batch
from repsim.scenarios import build_scenario

SEEDS = 30

print(f"{'type':<12} {'pool':>6} {'median rounds':>14} {'median audits':>14} "
      f"{'median incorrect':>17}")
for rep in ("linear", "exponential", "boinc"):
    for name in ("p5-r1m8", "p9-r1m8", "p99-r1m8"):
        config = build_scenario(
            name, reputation_type=rep, num_instantiations=SEEDS,
            post_convergence_horizon=50,
        )
        stats = run_batch(config).aggregate.metrics
        print(
            f"{rep:<12} {name[1:name.index('-')]:>6} "
            f"{stats['convergence_round'].median:>14g} "
            f"{stats['audits_to_convergence'].median:>14g} "
            f"{stats['incorrect_before'].median:>17g}"
        )
    print()
