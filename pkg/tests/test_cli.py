import csv
import json

import pytest

from repsim import (
    ReputationType,
    SelectionPolicy,
    WorkerType,
    run_batch,
    save_config,
    validate_config,
)
from repsim.cli import (
    METRICS_COLUMNS,
    main,
    read_metrics_csv,
    summary_stats,
)
from repsim.scenarios import build_scenario, get_scenario, list_scenarios, make_config


class TestCatalog:
    def test_all_presets_present(self):
        names = [p.name for p in list_scenarios()]
        for pool in (5, 9, 99):
            for ratio in ("r5m4", "r4m5", "r1m8"):
                assert f"p{pool}-{ratio}" in names
        for s in ("S1", "S2", "S3", "S4", "S5", "S6"):
            assert s in names

    def test_s6_composition(self):
        cfg = build_scenario("S6")
        types = [(w.worker_type, w.availability) for w in cfg.workers]
        assert types.count((WorkerType.RATIONAL, 1.0)) == 1
        assert types.count((WorkerType.MALICIOUS, 0.5)) == 8

    def test_p99_pool_size(self):
        cfg = build_scenario("p99-r1m8")
        assert cfg.mechanism.pool_size_N == 99
        assert sum(w.worker_type is WorkerType.RATIONAL for w in cfg.workers) == 11
        assert sum(w.worker_type is WorkerType.MALICIOUS for w in cfg.workers) == 88

    def test_pool_of_five_selects_whole_pool(self):
        cfg = build_scenario("p5-r1m8")
        assert cfg.mechanism.pool_size_N == cfg.mechanism.select_n == 5
        assert cfg.mechanism.selection_policy is SelectionPolicy.FIXED_RANDOM

    def test_every_preset_validates_across_sweeps(self):
        for preset in list_scenarios():
            for rep in ReputationType:
                for pa_init in (0.5, 1.0):
                    cfg = preset.generator(reputation_type=rep, audit_prob_initial=pa_init)
                    assert validate_config(cfg) == [], preset.name

    def test_defaults_match_standard_parameterization(self):
        cfg = build_scenario("S1")
        assert cfg.num_instantiations == 100
        m = cfg.mechanism
        assert (m.tolerance_tau, m.audit_prob_min, m.exponential_base_epsilon) == (0.5, 0.01, 0.5)
        assert (m.master_learning_rate_alpha_m, m.worker_learning_rate_alpha_w) == (0.1, 0.1)
        p = cfg.payoffs
        assert (p.punishment_WPc, p.task_cost_WCt, p.reward_WBy) == (0.0, 0.1, 1.0)

    def test_unknown_scenario_error_lists_names(self):
        with pytest.raises(KeyError, match="S1"):
            get_scenario("S9")

    def test_aspiration_jitter(self):
        cfg = build_scenario("S4", aspiration_jitter=0.1)
        aspirations = [w.aspiration for w in cfg.workers]
        assert all(0.0 <= a <= 0.2 for a in aspirations)
        assert len(set(aspirations)) > 1
        assert validate_config(cfg) == []
        assert build_scenario("S4", aspiration_jitter=0.1) == cfg


class TestListCommand:
    def test_list_exits_zero_and_prints_catalog(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        assert "S6" in out and "p99-r1m8" in out


class TestRunCommand:
    def run_s1(self, tmp_path, *extra):
        args = ["run", "S1", "--horizon", "30", "--out", str(tmp_path), *extra]
        return main(args)

    def test_unknown_scenario(self, tmp_path, capsys):
        code = main(["run", "S9", "--out", str(tmp_path)])
        assert code == 2
        err = capsys.readouterr().err
        assert "S9" in err and "S1" in err and "p99-r1m8" in err

    def test_invalid_override_surfaces_validation_error(self, tmp_path, capsys):
        code = self.run_s1(tmp_path, "--set", "mechanism.select_n=9")
        assert code == 2
        assert "select_n" in capsys.readouterr().err

    def test_run_writes_one_row_per_instantiation(self, tmp_path, capsys):
        assert self.run_s1(tmp_path) == 0
        rows = (tmp_path / "metrics.csv").read_text().splitlines()
        assert rows[0] == ",".join(METRICS_COLUMNS)
        assert len(rows) == 1 + 100  # default instantiation count
        out = capsys.readouterr().out
        assert "metrics.csv" in out

    def test_metrics_round_trip_and_summary_consistency(self, tmp_path, capsys):
        assert self.run_s1(tmp_path, "--runs", "20") == 0
        cfg = build_scenario("S1", post_convergence_horizon=30, num_instantiations=20)
        batch = run_batch(cfg)
        parsed = read_metrics_csv(tmp_path / "metrics.csv")
        assert tuple(parsed) == batch.runs
        stats = summary_stats(parsed)
        assert stats == summary_stats(batch.runs)
        assert stats["audits_to_convergence"]["median"] == 10.0
        # the printed table carries the same medians as the emitted file
        out = capsys.readouterr().out
        assert "audits_to_convergence" in out and "10" in out

    def test_reputation_and_pa_init_flags(self, tmp_path):
        code = main([
            "run", "S3", "--reputation", "exponential", "--pa-init", "1.0",
            "--runs", "3", "--horizon", "20", "--out", str(tmp_path),
        ])
        assert code == 0
        assert len(read_metrics_csv(tmp_path / "metrics.csv")) == 3

    def test_config_file_input(self, tmp_path):
        cfg = build_scenario("S6", num_instantiations=4, post_convergence_horizon=20)
        path = tmp_path / "custom.json"
        save_config(cfg, path)
        out_dir = tmp_path / "out"
        assert main(["run", str(path), "--out", str(out_dir)]) == 0
        assert len(read_metrics_csv(out_dir / "metrics.csv")) == 4

    def test_malformed_config_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"mechanism": {"pool_size_N": 9}}')
        assert main(["run", str(path), "--out", str(tmp_path / "out")]) == 2

    def test_all_runs_not_converged_exit_code(self, tmp_path, capsys):
        cfg = make_config(
            [(5, WorkerType.MALICIOUS, 1.0)], select_n=5,
            selection_policy=SelectionPolicy.FIXED_RANDOM,
            max_rounds=200, num_instantiations=2,
        )
        path = tmp_path / "frozen.json"
        save_config(cfg, path)
        code = main(["run", str(path), "--out", str(tmp_path / "out")])
        assert code == 3
        assert "no run converged" in capsys.readouterr().err

    def test_trace_row_count(self, tmp_path):
        assert self.run_s1(tmp_path, "--runs", "2", "--trace") == 0
        parsed = read_metrics_csv(tmp_path / "metrics.csv")
        for m in parsed:
            trace = tmp_path / f"trace_seed{m.seed}.csv"
            with trace.open() as fh:
                rows = list(csv.reader(fh))
            assert len(rows) - 1 == m.convergence_round + 30
            header = rows[0]
            assert header[:5] == [
                "round_index", "audit_prob", "audited", "accepted_value", "num_replies"
            ]
            assert "w4_rho_tr" in header

    def test_jsonl_format(self, tmp_path):
        assert self.run_s1(tmp_path, "--runs", "3", "--format", "jsonl", "--trace") == 0
        lines = (tmp_path / "metrics.jsonl").read_text().splitlines()
        assert len(lines) == 3
        row = json.loads(lines[0])
        assert set(row) == set(METRICS_COLUMNS)
        trace_line = json.loads(
            (tmp_path / f"trace_seed{row['seed']}.jsonl").read_text().splitlines()[0]
        )
        assert {w["type"] for w in trace_line["workers"]} == {"ALTRUISTIC"}

    def test_parallel_flag_matches_sequential(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert self.run_s1(out_a, "--runs", "4") == 0
        assert self.run_s1(out_b, "--runs", "4", "--parallel", "2") == 0
        assert (out_a / "metrics.csv").read_bytes() == (out_b / "metrics.csv").read_bytes()

    def test_rerun_is_byte_identical(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            code = main([
                "run", "S6", "--runs", "5", "--horizon", "30",
                "--seed", "4242", "--out", str(out), "--trace",
            ])
            assert code == 0
        assert (out_a / "metrics.csv").read_bytes() == (out_b / "metrics.csv").read_bytes()
        for trace in sorted(out_a.glob("trace_*.csv")):
            assert trace.read_bytes() == (out_b / trace.name).read_bytes()
