import json

from cascade_clock import (
    CascadeParams,
    EstimationInput,
    Graph,
    fastclock,
    load_clock,
    load_observed,
    save_clock,
    save_graph,
    save_observed,
    stretch_distort,
    simulate_ic,
)
from cascade_clock.cli import main


def write_star(path):
    g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    save_graph(g, path)
    return g


class TestEvaluate:
    def test_identical_clocks_print_zero(self, tmp_path, capsys):
        g = write_star(tmp_path / "g.txt")
        seq = simulate_ic(g, CascadeParams(1.0, 0.0), {0}, 10, 1)
        obs, clock = stretch_distort(seq, 2, 0)
        save_observed(obs, tmp_path / "obs.json")
        save_clock(clock, tmp_path / "a.json")
        save_clock(clock, tmp_path / "b.json")
        code = main(["evaluate", "--obs", str(tmp_path / "obs.json"),
                     "--clock-a", str(tmp_path / "a.json"),
                     "--clock-b", str(tmp_path / "b.json")])
        assert code == 0
        assert capsys.readouterr().out.strip() == "0.0"


class TestPipeline:
    def test_distort_stretch_one_matches_identity_clock(self, tmp_path, capsys):
        write_star(tmp_path / "g.txt")
        assert main(["simulate", "--graph", str(tmp_path / "g.txt"), "--pn", "1.0",
                     "--s0-size", "1", "--seed", "11", "--out", str(tmp_path / "seq.json")]) == 0
        assert main(["distort", "--seq", str(tmp_path / "seq.json"), "--stretch", "1",
                     "--seed", "0", "--out-obs", str(tmp_path / "obs.json"),
                     "--out-clock", str(tmp_path / "clock.json")]) == 0
        identity = tmp_path / "identity.json"
        obs = load_observed(tmp_path / "obs.json")
        identity.write_text(json.dumps(list(range(len(obs)))) + "\n")
        capsys.readouterr()
        assert main(["evaluate", "--obs", str(tmp_path / "obs.json"),
                     "--clock-a", str(tmp_path / "clock.json"),
                     "--clock-b", str(identity)]) == 0
        assert capsys.readouterr().out.strip() == "0.0"

    def test_full_star_pipeline_recovers_ground_truth(self, tmp_path, capsys):
        # seed 11 starts the cascade at the center; distort seed 0 keeps the
        # estimated boundaries literally equal to the ground truth
        write_star(tmp_path / "g.txt")
        main(["simulate", "--graph", str(tmp_path / "g.txt"), "--pn", "1.0",
              "--s0-size", "1", "--seed", "11", "--out", str(tmp_path / "seq.json")])
        main(["distort", "--seq", str(tmp_path / "seq.json"), "--stretch", "2",
              "--seed", "0", "--out-obs", str(tmp_path / "obs.json"),
              "--out-clock", str(tmp_path / "truth.json")])
        for estimator in ("fastclock", "dp"):
            out = tmp_path / f"{estimator}.json"
            code = main(["estimate", "--graph", str(tmp_path / "g.txt"),
                         "--obs", str(tmp_path / "obs.json"), "--pn", "1.0",
                         "--s0-size", "1", "--estimator", estimator, "--out", str(out)])
            assert code == 0
            assert load_clock(out) == load_clock(tmp_path / "truth.json")
            meta = json.loads((tmp_path / f"{estimator}.json.meta.json").read_text())
            assert meta["estimator"] == estimator
            assert meta["wall_clock_ns"] > 0

    def test_estimate_is_thin_wrapper(self, tmp_path):
        g = write_star(tmp_path / "g.txt")
        seq = simulate_ic(g, CascadeParams(1.0, 0.0), {0}, 10, 1)
        obs, _ = stretch_distort(seq, 2, 3)
        save_observed(obs, tmp_path / "obs.json")
        main(["estimate", "--graph", str(tmp_path / "g.txt"), "--obs", str(tmp_path / "obs.json"),
              "--pn", "1.0", "--s0-size", "1", "--out", str(tmp_path / "est.json")])
        direct = fastclock(EstimationInput(g, CascadeParams(1.0, 0.0), obs, 1))
        assert load_clock(tmp_path / "est.json") == direct


class TestGenGraph:
    def test_er_graph_file(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        assert main(["gen-graph", "--model", "er", "--n", "6", "--p", "1.0",
                     "--seed", "1", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "n 6"

    def test_sbm_graph_file(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        assert main(["gen-graph", "--model", "sbm", "--block-sizes", "3,4",
                     "--p-intra", "1.0", "--p-inter", "0.0", "--seed", "1",
                     "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "n 7"


class TestSweepCommand:
    def test_sweep_writes_csv(self, tmp_path, capsys):
        config = {
            "graph": {"model": "er", "n": 8, "p": 1.0},
            "p_n": 1.0, "p_e": 0.0, "stretch": 1, "max_steps": 3,
            "estimators": ["fastclock"],
            "axis": "stretch", "values": [1, 2], "trials": 3,
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(config))
        out = tmp_path / "out.csv"
        assert main(["sweep", "--config", str(cfg_path), "--out", str(out), "--seed", "7"]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "axis,value,estimator,mean_distance,sd_distance,mean_time_ns,sd_time_ns,trials"
        assert len(lines) == 3

    def test_sweep_requires_seed(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text("{}")
        assert main(["sweep", "--config", str(cfg_path), "--out", str(tmp_path / "o.csv")]) == 1

    def test_sweep_missing_axis_is_data_error(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"graph": {"model": "er", "n": 5, "p": 1.0}}))
        assert main(["sweep", "--config", str(cfg_path), "--out",
                     str(tmp_path / "o.csv"), "--seed", "1"]) == 2


class TestExitCodes:
    def test_unknown_subcommand_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["evaluate", "--bogus", "x"]) == 1

    def test_no_subcommand_is_usage_error(self, capsys):
        assert main([]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0

    def test_malformed_graph_file_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("n 3\n0 1\n0 1\n")
        assert main(["simulate", "--graph", str(bad), "--pn", "0.5",
                     "--out", str(tmp_path / "s.json")]) == 2
        err = capsys.readouterr().err
        assert "error:" in err and "line 3" in err
