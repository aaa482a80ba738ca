"""Config parsing, experiment runner, trace io, slope estimation, and CLI
exit-code tests."""

import os

import numpy as np
import pytest

import jacobifw.cli as cli
from jacobifw.cli import (ExperimentConfig, build_config, compute_reference,
                          main, parse_config, rate_slope, read_trace,
                          run_experiment, write_trace)
from jacobifw.errors import (ConfigError, InsufficientData, NoConvergence,
                             NonpositiveGap)
from jacobifw.objectives import QuadraticObjective
from jacobifw.oracles import ConstraintSet
from jacobifw.solvers import SolverConfig, TraceRecord, run_fw


def write_config(path, **overrides):
    base = {
        "task": "synthetic",
        "dimension": 6,
        "condition": 20,
        "radius": 1.5,
        "constraint": "l2",
        "methods": "fw,jfw",
        "alpha": 1.2,
        "beta": 1.2,
        "gamma": 0.6666666666666666,
        "max_iters": 120,
        "seed": 0,
    }
    base.update(overrides)
    lines = [f"{k} = {v}" for k, v in base.items() if v is not None]
    path.write_text("\n".join(lines) + "\n")
    return path


class TestParseConfig:
    def test_valid(self, tmp_path):
        cfg = parse_config(write_config(tmp_path / "a.cfg"))
        assert cfg.task == "synthetic"
        assert cfg.methods == ("fw", "jfw")
        assert cfg.dimension == 6
        assert cfg.jacobi_params().alpha == 1.2

    def test_comments_and_blanks(self, tmp_path):
        path = tmp_path / "a.cfg"
        path.write_text("# header\n\ntask = synthetic  # trailing\n"
                        "dimension = 3\ncondition = 5\nradius = 1\n"
                        "methods = fw\nmax_iters = 10\n")
        assert parse_config(path).dimension == 3

    def test_unknown_key(self, tmp_path):
        path = write_config(tmp_path / "a.cfg")
        path.write_text(path.read_text() + "alhpa = 1450\n")  # the typo case
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config(path)

    def test_duplicate_key(self, tmp_path):
        path = write_config(tmp_path / "a.cfg")
        path.write_text(path.read_text() + "seed = 1\n")
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config(path)

    def test_missing_task(self, tmp_path):
        path = tmp_path / "a.cfg"
        path.write_text("radius = 1\n")
        with pytest.raises(ConfigError, match="task"):
            parse_config(path)

    def test_bad_value(self, tmp_path):
        path = write_config(tmp_path / "a.cfg", max_iters="many")
        with pytest.raises(ConfigError, match="cannot parse"):
            parse_config(path)

    def test_task_inconsistent_key(self, tmp_path):
        path = write_config(tmp_path / "a.cfg", delta=0.5)
        with pytest.raises(ConfigError, match="does not apply"):
            parse_config(path)

    def test_jfw_requires_jacobi(self, tmp_path):
        path = write_config(tmp_path / "a.cfg", alpha=None, beta=None, gamma=None)
        with pytest.raises(ConfigError, match="alpha, beta, gamma"):
            parse_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            parse_config(tmp_path / "nope.cfg")

    def test_unknown_task(self):
        with pytest.raises(ConfigError):
            build_config({"task": "ridge"})

    def test_matrix_completion_needs_nuclear(self):
        with pytest.raises(ConfigError, match="nuclear"):
            build_config({"task": "matrix_completion", "dataset_path": "x",
                          "delta": 4.0, "outlier_fraction": 0.04,
                          "train_fraction": 0.5, "constraint": "l2",
                          "radius": 5.0, "methods": ("fw",)})

    def test_bad_reference(self, tmp_path):
        path = write_config(tmp_path / "a.cfg", reference="cvxpy")
        with pytest.raises(ConfigError, match="reference"):
            parse_config(path)


class TestRateSlope:
    @staticmethod
    def trace_from(subopts):
        return [TraceRecord(k=k, f_value=s, duality_gap=None, subopt=s,
                            normalized_error=None, wall_ms=0.0,
                            feasibility_slack=0.0)
                for k, s in enumerate(subopts)]

    def test_one_over_k(self):
        trace = self.trace_from([np.inf] + [1.0 / k for k in range(1, 501)])
        assert rate_slope(trace, 10, 500) == pytest.approx(-1.0, abs=1e-9)

    def test_one_over_k_squared(self):
        trace = self.trace_from([np.inf] + [1.0 / k**2 for k in range(1, 501)])
        assert rate_slope(trace, 10, 500) == pytest.approx(-2.0, abs=1e-9)

    def test_insufficient_data(self):
        trace = self.trace_from([1.0 / (k + 1) for k in range(5)])
        with pytest.raises(InsufficientData):
            rate_slope(trace, 1, 4)

    def test_nonpositive_gap(self):
        trace = self.trace_from([0.0] * 100)
        with pytest.raises(NonpositiveGap):
            rate_slope(trace, 1, 99)

    def test_skips_nonpositive_entries(self):
        subopts = [1.0 / k if k % 2 else 0.0 for k in range(1, 101)]
        trace = self.trace_from([np.inf] + subopts)
        assert rate_slope(trace, 1, 100) == pytest.approx(-1.0, abs=1e-9)


class TestTraceIO:
    def test_round_trip(self, tmp_path):
        obj = QuadraticObjective(np.diag([2.0, 1.0]), np.array([0.3, -0.2]))
        trace = run_fw(obj, ConstraintSet("l2", 1.0), np.zeros(2),
                       SolverConfig(method="fw", max_iters=15), f_star=-0.1)
        path = tmp_path / "trace.csv"
        write_trace(path, trace)
        loaded = read_trace(path)
        assert len(loaded) == len(trace)
        for a, b in zip(trace, loaded):
            assert a.k == b.k
            assert a.f_value == b.f_value  # repr round-trips doubles exactly
            assert a.duality_gap == b.duality_gap
            assert a.subopt == b.subopt
            assert b.wall_ms == 0.0  # timing withheld by default

    def test_timing_flag(self, tmp_path):
        obj = QuadraticObjective(np.diag([1.0]), np.zeros(1))
        trace = run_fw(obj, ConstraintSet("l2", 1.0), np.zeros(1),
                       SolverConfig(method="fw", max_iters=3))
        path = tmp_path / "trace.csv"
        write_trace(path, trace, timing=True)
        assert any(rec.wall_ms > 0 for rec in read_trace(path))

    def test_rejects_foreign_csv(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ConfigError):
            read_trace(path)


class TestRunExperiment:
    def test_synthetic_outputs(self, tmp_path):
        cfg = parse_config(write_config(tmp_path / "a.cfg",
                                        output_dir=tmp_path / "out"))
        summaries = run_experiment(cfg)
        assert [s.method for s in summaries] == ["fw", "jfw"]
        out = tmp_path / "out"
        for method in ("fw", "jfw"):
            trace_path = out / f"synthetic_{method}_0.csv"
            assert trace_path.exists()
            trace = read_trace(trace_path)
            summary = next(s for s in summaries if s.method == method)
            # summary mirrors the last trace record
            assert summary.final_subopt == trace[-1].subopt
            assert summary.iterations == trace[-1].k
        assert (out / "synthetic_summary_0.csv").exists()
        assert (out / "synthetic_0.png").stat().st_size > 0

    def test_no_plot(self, tmp_path):
        cfg = parse_config(write_config(tmp_path / "a.cfg", methods="fw",
                                        max_iters=20,
                                        output_dir=tmp_path / "out"))
        run_experiment(cfg, plot=False)
        assert not (tmp_path / "out" / "synthetic_0.png").exists()

    def test_synthetic_uses_exact_reference(self, tmp_path):
        cfg = parse_config(write_config(tmp_path / "a.cfg", methods="fw",
                                        max_iters=400,
                                        output_dir=tmp_path / "out"))
        summaries = run_experiment(cfg, plot=False)
        assert summaries[0].final_subopt is not None
        assert summaries[0].final_subopt >= -1e-12
        assert summaries[0].rate_slope is not None

    def test_reference_file_mode(self, tmp_path):
        ref_path = tmp_path / "ref.txt"
        ref_path.write_text("0.25\n")
        cfg = parse_config(write_config(
            tmp_path / "a.cfg", task="logistic", dimension=None, condition=None,
            dataset_path=tmp_path / "bc.data", radius=5.0, methods="fw",
            max_iters=30, reference=f"file:{ref_path}",
            output_dir=tmp_path / "out"))
        (tmp_path / "bc.data").write_text(
            "1,5,1,1,1,2,1,3,1,1,2\n2,8,9,9,8,7,9,9,8,9,4\n")
        summaries = run_experiment(cfg, plot=False)
        trace = read_trace(tmp_path / "out" / "logistic_fw_0.csv")
        assert summaries[0].final_subopt == pytest.approx(trace[-1].f_value - 0.25)

    def test_byte_identical_reruns(self, tmp_path):
        for out in ("out1", "out2"):
            cfg = parse_config(write_config(tmp_path / f"{out}.cfg",
                                            output_dir=tmp_path / out))
            run_experiment(cfg, plot=False)
        for method in ("fw", "jfw"):
            b1 = (tmp_path / "out1" / f"synthetic_{method}_0.csv").read_bytes()
            b2 = (tmp_path / "out2" / f"synthetic_{method}_0.csv").read_bytes()
            assert b1 == b2


class TestComputeReference:
    def test_synthetic_exact(self, tmp_path):
        cfg = parse_config(write_config(tmp_path / "a.cfg"))
        f_star, certificate = compute_reference(cfg)
        assert certificate == 0.0
        from jacobifw.data import synth_quadratic
        obj, _, x_star, _, _ = synth_quadratic(6, 20.0, 1.5, True, seed=0)
        assert f_star == pytest.approx(obj.value(x_star), rel=1e-12)

    def test_linear_objective_long_run(self):
        # the reference machinery on a linear objective finds -t ||c||_2,
        # certified by a zero duality gap at the vertex
        c = np.array([3.0, -4.0])
        obj = QuadraticObjective(np.zeros((2, 2)), c)
        trace = run_fw(obj, ConstraintSet("l2", 2.0), np.zeros(2),
                       SolverConfig(method="fw", max_iters=5000, gap_floor=1e-10))
        f_star = min(rec.f_value for rec in trace)
        assert f_star == pytest.approx(-2.0 * 5.0)
        assert trace[-1].duality_gap <= 1e-10

    def test_long_run_bounds_short_run(self, tmp_path):
        (tmp_path / "bc.data").write_text(
            "1,5,1,1,1,2,1,3,1,1,2\n2,8,9,9,8,7,9,9,8,9,4\n"
            "3,4,2,1,1,2,1,2,1,1,2\n4,9,9,8,8,6,8,9,9,8,4\n")
        cfg = parse_config(write_config(
            tmp_path / "a.cfg", task="logistic", dimension=None, condition=None,
            dataset_path=tmp_path / "bc.data", radius=3.0, methods="fw",
            max_iters=40, reference="none", output_dir=tmp_path / "out"))
        f_star, certificate = compute_reference(cfg, budget_multiplier=10)
        summaries = run_experiment(cfg, plot=False)
        assert f_star <= summaries[0].final_f + 1e-12
        assert certificate >= 0.0


class TestMainExitCodes:
    def test_run_success(self, tmp_path, capsys):
        write_config(tmp_path / "a.cfg", methods="fw", max_iters=30,
                     output_dir=tmp_path / "out")
        assert main(["run", str(tmp_path / "a.cfg")]) == 0
        assert "fw:" in capsys.readouterr().out

    def test_config_error(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "missing.cfg")]) == 1
        assert "error" in capsys.readouterr().err

    def test_dataset_error(self, tmp_path, capsys):
        write_config(tmp_path / "a.cfg", task="logistic", dimension=None,
                     condition=None, dataset_path=tmp_path / "missing.data",
                     radius=5.0, methods="fw", reference="none",
                     output_dir=tmp_path / "out")
        assert main(["run", str(tmp_path / "a.cfg")]) == 3

    def test_solver_error(self, tmp_path, monkeypatch):
        write_config(tmp_path / "a.cfg", methods="fw", max_iters=10,
                     output_dir=tmp_path / "out")

        def boom(cfg):
            raise NoConvergence("rigged")
        monkeypatch.setattr(cli, "build_problem", boom)
        assert main(["run", str(tmp_path / "a.cfg")]) == 2

    def test_usage_error_is_config_error(self):
        assert main(["frobnicate"]) == 1

    def test_slope_subcommand(self, tmp_path, capsys):
        write_config(tmp_path / "a.cfg", methods="fw", max_iters=300,
                     output_dir=tmp_path / "out")
        assert main(["run", str(tmp_path / "a.cfg"), "--no-plot"]) == 0
        capsys.readouterr()
        trace_path = tmp_path / "out" / "synthetic_fw_0.csv"
        assert main(["slope", str(trace_path), "--kmin", "30",
                     "--kmax", "300"]) == 0
        slope = float(capsys.readouterr().out.strip())
        assert slope < -0.5

    def test_reference_subcommand(self, tmp_path, capsys):
        write_config(tmp_path / "a.cfg", methods="fw", max_iters=20,
                     output_dir=tmp_path / "out")
        assert main(["reference", str(tmp_path / "a.cfg")]) == 0
        assert "certificate_gap" in capsys.readouterr().out

    def test_seed_and_output_dir_overrides(self, tmp_path):
        write_config(tmp_path / "a.cfg", methods="fw", max_iters=10,
                     output_dir=tmp_path / "ignored")
        out = tmp_path / "chosen"
        assert main(["run", str(tmp_path / "a.cfg"), "--output-dir", str(out),
                     "--seed", "9", "--no-plot"]) == 0
        assert (out / "synthetic_fw_9.csv").exists()
        assert not (tmp_path / "ignored").exists()
