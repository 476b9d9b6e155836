import math
from dataclasses import replace

import pytest

from holefree.experiments import (ConfigError, ExperimentConfig, load_config, parse_config,
                                  run_chi_experiment, run_coverage_experiment, run_experiment,
                                  run_forest_experiment, run_metrics_experiment,
                                  run_rejection_experiment, run_single_tree_experiment,
                                  write_report)

SMALL = ExperimentConfig(n_values=(20, 60), trials=4, samples=5_000, base_seed=11)


def test_defaults_resolve_per_scenario():
    tree = ExperimentConfig().resolved()
    assert (tree.r, tree.boundary, tree.norm, tree.disk_radius) == (2.5, "plane", "euclidean", 1.25)
    assert tree.metrics == ("min_distance",)
    chi = ExperimentConfig(scenario="chi").resolved()
    assert (chi.r, chi.boundary, chi.norm) == (1.0, "torus", "uniform")
    assert len(ExperimentConfig(scenario="metrics").resolved().metrics) == 3


@pytest.mark.parametrize("field, value", [
    ("trials", 0), ("side_a", -1.0), ("r", 0.0), ("samples", 0), ("hop_limit", 0),
    ("scenario", "nope"), ("boundary", "sphere"), ("norm", "taxicab"),
    ("n_values", (0,)), ("lambda_values", (-1.0,)), ("metrics", ("shortest",)),
    ("base_seed", -3), ("workers", 0),
])
def test_validation_names_the_field(field, value):
    with pytest.raises(ConfigError, match=field):
        ExperimentConfig(**{field: value}).resolved()


def test_parse_config_aliases(tmp_path):
    cfg = parse_config("scenario = coverage\nn = 10,20\nradius=1.5\nside=8\nseed=4\n"
                       "metric=max_height\nsamples=100\nout=results\n")
    assert cfg.n_values == (10, 20) and cfg.r == 1.5 and cfg.side_a == 8.0
    assert cfg.base_seed == 4 and cfg.metrics == ("max_height",) and cfg.samples == 100
    assert cfg.output_dir == "results"
    path = tmp_path / "c.cfg"
    path.write_text("lambda = 0.1, 0.2\n")
    assert load_config(str(path)).lambda_values == (0.1, 0.2)
    with pytest.raises(ConfigError):
        parse_config("trials = many\n")
    with pytest.raises(ConfigError):
        parse_config("not a pair\n")


def test_csv_is_byte_identical_on_rerun():
    for runner in (run_rejection_experiment, run_coverage_experiment, run_forest_experiment):
        assert runner(SMALL).to_csv() == runner(SMALL).to_csv()


def test_workers_do_not_change_results():
    one = run_metrics_experiment(SMALL)
    two = run_metrics_experiment(replace(SMALL, workers=2))
    assert one.to_csv() == two.to_csv()


def test_single_trial_rows():
    cfg = ExperimentConfig(n_values=(30,), trials=1, samples=2_000)
    a, b = run_rejection_experiment(cfg), run_rejection_experiment(cfg)
    assert a.to_csv() == b.to_csv()
    row = a.rows[0]
    assert math.isnan(row["tree_pct_stderr"])
    assert row["tree_pct_mean"] + row["rejected_pct_mean"] + row["unreachable_pct_mean"] \
        == pytest.approx(100)


def test_one_node_coverage_has_no_loss():
    rep = run_coverage_experiment(ExperimentConfig(n_values=(1,), trials=3, samples=2_000))
    row = rep.rows[0]
    assert row["before_mean"] == row["after_mean"]
    assert row["loss_rel_pct_mean"] == 0.0


def test_rejection_columns_and_seeds():
    rep = run_rejection_experiment(SMALL)
    assert [r["n"] for r in rep.rows] == [20, 60]
    row = rep.row(n=60)
    assert (row["seed_first"], row["seed_last"], row["violations"]) == (11, 14, 0)


def test_metrics_rows_per_metric():
    rep = run_metrics_experiment(SMALL)
    assert len(rep.rows) == 6
    assert {r["metric"] for r in rep.rows} == {"min_distance", "max_distance", "max_height"}
    assert all(r["violations"] == 0 for r in rep.rows)


def test_single_tree_rows():
    rep = run_single_tree_experiment(ExperimentConfig(n_values=(25,), trials=3))
    assert [r["seed"] for r in rep.rows] == [0, 1, 2]
    assert all(r["tree_size"] + r["rejected"] + r["unreachable"] == 25 for r in rep.rows)


def test_forest_depth_limit():
    rep = run_forest_experiment(ExperimentConfig(n_values=(80,), trials=5, hop_limit=2))
    row = rep.rows[0]
    assert row["max_depth"] <= 2 and row["violations"] == 0 and row["trees_mean"] >= 1


def test_chi_rows():
    rep = run_chi_experiment(ExperimentConfig(scenario="chi", lambda_values=(0.2, 1.0, 10.0),
                                              trials=10))
    assert rep.row(**{"lambda": 1.0})["expected_chi"] == 0.0
    assert rep.row(**{"lambda": 10.0})["status"] == "skipped"
    ok = rep.row(**{"lambda": 0.2})
    assert ok["status"] == "ok" and ok["realizations"] == 10


def test_chi_clique_cap_skips_row():
    rep = run_chi_experiment(ExperimentConfig(scenario="chi", lambda_values=(1.5,),
                                              trials=3, size_cap=2))
    assert rep.rows[0]["status"] == "skipped"


def test_run_experiment_dispatch_and_write(tmp_path):
    cfg = ExperimentConfig(scenario="forest", n_values=(10,), trials=2)
    path = write_report(run_experiment(cfg), str(tmp_path))
    assert path.endswith("forest.csv")
    text = open(path, newline="").read()
    assert "\r" not in text and text.splitlines()[0].startswith("n,metric,hop_limit")
