"""Command-line front end: scenario catalog, batch execution, and
machine-readable result emission (per-run metrics plus optional per-round
traces)."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .engine import BatchResult, RoundRecord, RunMetrics, run_batch
from .model import (
    Diagnostic,
    ScenarioConfig,
    config_errors,
    config_from_dict,
    config_to_dict,
    load_config,
    validate_config,
)
from .scenarios import get_scenario, list_scenarios

__all__ = [
    "emit_results",
    "write_metrics",
    "write_trace",
    "read_metrics_csv",
    "summary_stats",
    "format_summary",
    "main",
]

METRICS_COLUMNS = (
    "seed",
    "convergence_round",
    "audits_to_convergence",
    "incorrect_before",
    "incorrect_after",
    "empty_after",
    "violated",
    "not_converged",
)

SUMMARY_METRICS = (
    "convergence_round",
    "audits_to_convergence",
    "incorrect_before",
    "incorrect_after",
    "empty_after",
)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NOT_CONVERGED = 3


def _bool_str(value: bool) -> str:
    return "true" if value else "false"


def _metrics_row(m: RunMetrics) -> dict[str, Any]:
    return {
        "seed": m.seed,
        "convergence_round": "" if m.convergence_round is None else m.convergence_round,
        "audits_to_convergence": m.audits_to_convergence,
        "incorrect_before": m.incorrect_before_convergence,
        "incorrect_after": m.incorrect_after_convergence,
        "empty_after": m.empty_rounds_after_convergence,
        "violated": _bool_str(m.eventual_correctness_violated),
        "not_converged": _bool_str(m.not_converged),
    }


def write_metrics(runs: Iterable[RunMetrics], path: Path, fmt: str = "csv") -> None:
    """One row per instantiation; full precision, '.' decimals, LF-terminated."""
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=METRICS_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for m in runs:
                writer.writerow(_metrics_row(m))
    elif fmt == "jsonl":
        with path.open("w") as fh:
            for m in runs:
                row = _metrics_row(m)
                row["convergence_round"] = m.convergence_round
                row["violated"] = m.eventual_correctness_violated
                row["not_converged"] = m.not_converged
                fh.write(json.dumps(row) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_metrics_csv(path: Path) -> list[RunMetrics]:
    """Parse a metrics CSV back into RunMetrics values (round-trip of
    write_metrics)."""
    out: list[RunMetrics] = []
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(RunMetrics(
                seed=int(row["seed"]),
                convergence_round=(
                    None if row["convergence_round"] == "" else int(row["convergence_round"])
                ),
                audits_to_convergence=int(row["audits_to_convergence"]),
                incorrect_before_convergence=int(row["incorrect_before"]),
                incorrect_after_convergence=int(row["incorrect_after"]),
                empty_rounds_after_convergence=int(row["empty_after"]),
                eventual_correctness_violated=row["violated"] == "true",
            ))
    return out


def _accepted_str(record: RoundRecord) -> str:
    value = record.outcome.accepted_value
    return "NONE" if value is None else value.value


def write_trace(records: Sequence[RoundRecord], path: Path, fmt: str = "csv") -> None:
    """Per-round trail of one run: one row per round.

    ``audit_prob`` is the probability the round was played with (before any
    update). Worker columns repeat per selected slot in worker-id order.
    """
    if fmt == "jsonl":
        with path.open("w") as fh:
            for rec in records:
                fh.write(json.dumps({
                    "round_index": rec.round_index,
                    "audit_prob": rec.audit_prob_before,
                    "audited": rec.outcome.audited,
                    "accepted_value": _accepted_str(rec),
                    "num_replies": len(rec.outcome.responders),
                    "workers": [
                        {
                            "id": s.worker_id,
                            "type": s.worker_type.value,
                            "cheat_prob": s.cheat_prob,
                            "rho_rs": s.responsiveness,
                            "rho_tr": s.truthfulness,
                        }
                        for s in rec.snapshots
                    ],
                }) + "\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    slots = len(records[0].snapshots) if records else 0
    columns = ["round_index", "audit_prob", "audited", "accepted_value", "num_replies"]
    for k in range(slots):
        columns += [f"w{k}_id", f"w{k}_type", f"w{k}_cheat_prob", f"w{k}_rho_rs", f"w{k}_rho_tr"]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            row: list[Any] = [
                rec.round_index,
                repr(rec.audit_prob_before),
                _bool_str(rec.outcome.audited),
                _accepted_str(rec),
                len(rec.outcome.responders),
            ]
            for s in rec.snapshots:
                row += [s.worker_id, s.worker_type.value, repr(s.cheat_prob),
                        repr(s.responsiveness), repr(s.truthfulness)]
            writer.writerow(row)


def emit_results(
    batch: BatchResult,
    out_dir: Path,
    fmt: str = "csv",
) -> Path:
    """Write per-run metrics (and traces, if the batch kept records) under
    ``out_dir``; returns the metrics file path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metrics_path = out_dir / f"metrics.{fmt}"
    write_metrics(batch.runs, metrics_path, fmt=fmt)
    if batch.records is not None:
        for seed, records in zip(batch.seeds, batch.records):
            write_trace(records, out_dir / f"trace_seed{seed}.{fmt}", fmt=fmt)
    return metrics_path


def summary_stats(runs: Sequence[RunMetrics]) -> dict[str, dict[str, float]]:
    """Median and interquartile range per metric over the converged runs."""
    converged = [m for m in runs if not m.not_converged]
    if not converged:
        return {}
    columns = {
        "convergence_round": [m.convergence_round for m in converged],
        "audits_to_convergence": [m.audits_to_convergence for m in converged],
        "incorrect_before": [m.incorrect_before_convergence for m in converged],
        "incorrect_after": [m.incorrect_after_convergence for m in converged],
        "empty_after": [m.empty_rounds_after_convergence for m in converged],
    }
    out: dict[str, dict[str, float]] = {}
    for name in SUMMARY_METRICS:
        arr = np.asarray(columns[name], dtype=float)
        q25, median, q75 = (float(q) for q in np.percentile(arr, [25, 50, 75]))
        out[name] = {"median": median, "q25": q25, "q75": q75}
    return out


def format_summary(runs: Sequence[RunMetrics]) -> str:
    stats = summary_stats(runs)
    total = len(runs)
    converged = sum(1 for m in runs if not m.not_converged)
    violated = sum(1 for m in runs if m.eventual_correctness_violated)
    lines = [
        f"runs: {total}  converged: {converged}  not converged: {total - converged}  "
        f"violations: {violated}",
    ]
    if stats:
        lines.append(f"{'metric':<24} {'median':>10} {'q25':>10} {'q75':>10}")
        for name in SUMMARY_METRICS:
            s = stats[name]
            lines.append(
                f"{name:<24} {s['median']:>10g} {s['q25']:>10g} {s['q75']:>10g}"
            )
    else:
        lines.append("no converged runs; per-run metrics emitted, statistics skipped")
    return "\n".join(lines)


def _print_diagnostics(diags: Sequence[Diagnostic]) -> None:
    for d in diags:
        print(f"{d.severity}: {d.field}: {d.message}", file=sys.stderr)


def _apply_set_override(cfg: dict[str, Any], assignment: str) -> None:
    path, sep, raw = assignment.partition("=")
    if not sep:
        raise ValueError(f"--set expects PATH=VALUE, got {assignment!r}")
    try:
        value: Any = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = cfg
    parts = path.split(".")
    for part in parts[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise ValueError(f"--set: unknown config path {path!r}")
        node = node[part]
    if not isinstance(node, dict) or parts[-1] not in node:
        raise ValueError(f"--set: unknown config path {path!r}")
    node[parts[-1]] = value


def _resolve_config(args: argparse.Namespace) -> ScenarioConfig:
    """Preset name or config file path, with flag overrides applied on the
    dict form so presets and hand-written configs share one schema."""
    target = args.scenario
    try:
        config = get_scenario(target).generator()
    except KeyError:
        if not Path(target).exists():
            names = ", ".join(p.name for p in list_scenarios())
            raise ValueError(f"unknown scenario or config path {target!r}; "
                             f"available scenarios: {names}")
        config = load_config(target)

    cfg = config_to_dict(config)
    if args.reputation is not None:
        cfg["mechanism"]["reputation_type"] = args.reputation.upper()
    if args.pa_init is not None:
        cfg["mechanism"]["audit_prob_initial"] = args.pa_init
    if args.seed is not None:
        cfg["base_seed"] = args.seed
    if args.runs is not None:
        cfg["num_instantiations"] = args.runs
    if args.horizon is not None:
        cfg["post_convergence_horizon"] = args.horizon
    if args.max_rounds is not None:
        cfg["max_rounds"] = args.max_rounds
    for assignment in args.set or []:
        _apply_set_override(cfg, assignment)
    return config_from_dict(cfg)


def _cmd_list() -> int:
    for preset in list_scenarios():
        print(f"{preset.name:<12} {preset.description}")
    print(
        "\nEach scenario accepts --reputation {linear,exponential,boinc} "
        "and --pa-init (0.5 or 1.0 in the standard sweeps)."
    )
    return EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        config = _resolve_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    diags = validate_config(config)
    _print_diagnostics(diags)
    if config_errors(diags):
        return EXIT_BAD_INPUT

    batch = run_batch(config, parallel=args.parallel, keep_records=args.trace)
    try:
        metrics_path = emit_results(batch, Path(args.out), fmt=args.format)
    except OSError as exc:
        print(f"error: cannot write results: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    print(format_summary(batch.runs))
    print(f"per-run metrics: {metrics_path}")
    if all(m.not_converged for m in batch.runs):
        print("error: no run converged within max_rounds", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repsim",
        description="Reputation-based master-worker computing simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list built-in scenarios")

    run = sub.add_parser("run", help="run a scenario batch and emit metrics")
    run.add_argument("scenario", help="built-in scenario name or config file path")
    run.add_argument("--reputation", choices=["linear", "exponential", "boinc"],
                     help="truthfulness reputation type")
    run.add_argument("--pa-init", type=float, help="initial audit probability")
    run.add_argument("--seed", type=int, help="base seed (instantiation k uses base_seed + k)")
    run.add_argument("--runs", type=int, help="number of instantiations")
    run.add_argument("--horizon", type=int, help="rounds simulated past convergence")
    run.add_argument("--max-rounds", type=int, help="hard cap on rounds per run")
    run.add_argument("--trace", action="store_true",
                     help="also write a per-round trace file per run")
    run.add_argument("--out", default="results", help="output directory (default: results)")
    run.add_argument("--parallel", type=int, default=1, metavar="K",
                     help="run up to K instantiations in parallel processes")
    run.add_argument("--format", choices=["csv", "jsonl"], default="csv",
                     help="output format (default: csv)")
    run.add_argument("--set", action="append", metavar="PATH=VALUE",
                     help="dotted-path config override, e.g. mechanism.tolerance_tau=0.4")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        return _cmd_list()
    return _cmd_run(args)


if __name__ == "__main__":
    raise SystemExit(main())
