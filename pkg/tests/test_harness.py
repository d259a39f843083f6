import csv
import json

import numpy as np
import pytest

from sitqr import harness as H
from sitqr.cli import main
from sitqr.config import ExperimentConfig, config_from_dict, config_to_dict, load_config
from sitqr.metrics import AGGREGATE_HEADER, SUMMARY_HEADER
from sitqr.testing import RAPID, TestSpec

SMALL = ExperimentConfig().replace(network={"n": 300, "mu": 6}, horizon=40, replicates=3,
                                   thresholds={"i_t1": 3, "i_t2": 1})


def test_config_round_trip(tmp_path):
    cfg = SMALL.replace(budget={"m": 4.0})
    path = tmp_path / "c.json"
    path.write_text(json.dumps(config_to_dict(cfg)))
    assert load_config(path) == cfg


@pytest.mark.parametrize("data", [
    {"bogus": 1},
    {"network": {"n": 100, "degree": 3}},
    {"tests": [{"eta_tp": 0.9, "eta_tn": 0.9, "speed": 1}, {"eta_tp": 0.9, "eta_tn": 0.9}]},
    {"tests": [{"eta_tp": 0.9, "eta_tn": 0.9}]},
    {"horizon": 0},
    {"budget": {"b": 0.1, "lambda1": 0.2}},
])
def test_config_rejects(data):
    with pytest.raises(ValueError):
        config_from_dict(data)


def test_replicate_seeds_distinct_and_stable():
    seeds = [H.replicate_seed(0, r) for r in range(50)]
    assert len(set(seeds)) == 50
    assert seeds == [H.replicate_seed(0, r) for r in range(50)]
    assert H.replicate_seed(1, 0) != seeds[0]


def test_run_once_bookkeeping():
    out = H.run_once(SMALL, 123)
    t = out.trajectory
    assert t.shape == (41, 7)
    assert np.all(t[:, :6].sum(axis=1) == 300)
    assert t[0, 1] == 11 and t[0, 6] == 0
    # tests happen only on gate-active days
    assert np.all((t[:, 6] > 0) <= out.gate_active)
    assert out.i_p == int((t[:, 1] + t[:, 4]).max())
    assert out.sum_dq == int(t[:, 3:6].sum())
    # no recovery before infectious-day 8
    assert out.recoveries.size == 0 or out.recoveries.min() >= 8


def test_runs_bit_identical():
    a, b = H.run_once(SMALL, 9), H.run_once(SMALL, 9)
    assert np.array_equal(a.trajectory, b.trajectory)
    assert a.confusion == b.confusion


def test_testing_stream_does_not_touch_epidemic():
    never = TestSpec(0.0, 1.0, label="blank")
    with_blank = SMALL.replace(tests=(never, RAPID))
    a = H.run_once(with_blank, 77, lambda1=0.1, lambda2=0.0)
    b = H.run_once(SMALL.replace(budget={"b": 0.0, "lambda1": 0.0, "lambda1_grid": (0.0,)}), 77)
    assert a.sum_dq == 0
    assert np.array_equal(a.trajectory[:, :6], b.trajectory[:, :6])


def test_quarantine_episodes_last_q_d_days():
    cfg = SMALL.replace(horizon=80)
    out = H.run_once(cfg, 3, dump_states=True)
    # node -> list of daily quarantine flags
    flags = {}
    for day, node, _stage, q, _tn in out.states:
        flags.setdefault(node, {})[day] = q
    lengths = []
    for days in flags.values():
        run = 0
        for d in sorted(days):
            if days[d]:
                run += 1
            elif run:
                lengths.append(run)
                run = 0
    assert lengths
    # back-to-back positives extend an episode to a multiple of at most q_d more days
    assert all(n >= 10 for n in lengths)
    assert np.mean(np.array(lengths) == 10) > 0.8


def test_sweep_pairs_and_permutation_invariance():
    cfg = SMALL.replace(budget={"lambda1_grid": (0.0, 0.1)})
    res = H.sweep_lambda1(cfg)
    assert len(res.points) == 2
    assert all(len(p.outcomes) == 3 for p in res.points)
    seeds = [H.replicate_seed(cfg.master_seed, r) for r in range(3)]
    shuffled = [H.run_once(cfg, s, 0.0).i_p for s in reversed(seeds)]
    mean, lo, hi = res.points[0].ip
    assert mean == pytest.approx(np.mean(shuffled))
    assert res.argmin_lambda1() in (0.0, 0.1)


def test_ode_two_test_matches_averaged(tmp_path):
    from sitqr.ode import OdeParams, OdeTest, effective_rates
    cfg = ExperimentConfig().replace(ode={"t_end": 20.0})
    two = H.ode_params_from(cfg)
    tp, fp = effective_rates(two)
    lam = sum(t.lambda_fraction for t in two.tests)
    one = OdeParams(two.beta, two.gamma, (OdeTest(lam, tp / lam, fp / lam),))
    a, b = H.ode_run(cfg, params=two), H.ode_run(cfg, params=one)
    for (_, x), (_, y) in zip(a, b):
        np.testing.assert_allclose(x.as_array(), y.as_array(), atol=1e-12)


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def write_config(tmp_path, cfg):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config_to_dict(cfg)))
    return path


def test_cli_subcommands(tmp_path):
    cfg_path = write_config(tmp_path, SMALL.replace(budget={"lambda1_grid": (0.0, 0.05, 0.1)}))
    base = ["--config", str(cfg_path), "--seed", "2"]

    assert main(["ode", *base, "--out", str(tmp_path / "ode")]) == 0
    rows = read_csv(tmp_path / "ode" / "ode_trajectory.csv")
    assert rows[0] == ["t", "S", "I", "R", "QS", "QI", "QR"]

    assert main(["netgen", *base, "--out", str(tmp_path / "net")]) == 0
    lines = (tmp_path / "net" / "edges.txt").read_text().splitlines()
    assert lines[0] == "# nodes=300"
    stats = json.loads((tmp_path / "net" / "degree_stats.json").read_text())
    assert stats["edges"] == len(lines) - 1

    assert main(["run", *base, "--out", str(tmp_path / "run"), "--dump-states"]) == 0
    assert read_csv(tmp_path / "run" / "trajectory.csv")[0] == list(H.TRAJECTORY_HEADER)
    assert read_csv(tmp_path / "run" / "test_log.csv")[0][:3] == ["day", "test_label", "tested"]
    assert read_csv(tmp_path / "run" / "summary.csv")[0] == list(SUMMARY_HEADER)
    assert read_csv(tmp_path / "run" / "states.csv")[0] == ["day", "node", "stage", "quarantined", "t_n"]

    assert main(["sweep-lambda1", *base, "--replicates", "2", "--out", str(tmp_path / "sw")]) == 0
    agg = read_csv(tmp_path / "sw" / "aggregate.csv")
    assert agg[0] == list(AGGREGATE_HEADER) and len(agg) == 4
    assert len(read_csv(tmp_path / "sw" / "summary.csv")) == 1 + 3 * 2

    assert main(["sweep-delay", *base, "--replicates", "2", "--delays", "0,2",
                 "--out", str(tmp_path / "dl")]) == 0
    assert (tmp_path / "dl" / "aggregate_delay2.csv").exists()
    assert (tmp_path / "dl" / "aggregate_reference.csv").exists()

    assert main(["sweep-mu", *base, "--replicates", "2", "--mus", "2,4",
                 "--out", str(tmp_path / "mu")]) == 0
    info = json.loads((tmp_path / "mu" / "mu_summary.json").read_text())
    assert set(info["slopes"]) == {"2", "4"}


def test_cli_reruns_byte_identical(tmp_path):
    cfg_path = write_config(tmp_path, SMALL)
    for d in ("a", "b"):
        assert main(["run", "--config", str(cfg_path), "--seed", "5",
                     "--out", str(tmp_path / d)]) == 0
    for name in ("trajectory.csv", "test_log.csv", "summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cli_plots(tmp_path):
    pytest.importorskip("matplotlib")
    cfg_path = write_config(tmp_path, SMALL)
    assert main(["run", "--config", str(cfg_path), "--plots", "--out", str(tmp_path / "p")]) == 0
    assert (tmp_path / "p" / "trajectory.svg").read_text().lstrip().startswith("<?xml")


def test_cli_bad_config_fails(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"network": {"nodes": 10}}))
    assert main(["run", "--config", str(bad), "--out", str(tmp_path / "x")]) == 1
    assert "unknown keys" in capsys.readouterr().err
    bad.write_text(json.dumps({"horizon": 0}))
    assert main(["run", "--config", str(bad), "--out", str(tmp_path / "x")]) == 1
