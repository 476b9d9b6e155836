"""Monte-Carlo experiment suites with deterministic CSV reports.

Trial ``t`` of a run draws its cloud from seed ``base_seed + t``, its root
from ``(base_seed + t, 1)`` and its coverage probes from ``(base_seed + t, 2)``.
Trials are independent; results are aggregated in trial order, so a report
does not depend on the number of worker processes.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .coverage import coverage_loss, covered_fractions
from .geometry import (BOUNDARIES, EUCLIDEAN, METRICS, PLANE, TORUS, UNIFORM,
                       ParameterError, sample_binomial, sample_poisson)
from .rips import CliqueCapError, build_rips
from .spanning import (WeightMetric, branch_stats, build_forest, build_tree,
                       edge_weights, forest_violations, tree_violations)
from .theory import empirical_chi, expected_chi_2d

SCENARIOS = ("rejection", "coverage", "metrics", "chi", "single_tree", "forest")
ALL_METRICS = tuple(m.value for m in WeightMetric)


class ConfigError(ParameterError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one experiment run.

    ``r``, ``boundary`` and ``norm`` left at ``None`` take scenario defaults:
    ``r = side_a / 4`` on a Euclidean square for the tree scenarios, and
    ``r = 1`` on the uniform-norm torus for ``chi``. ``disk_radius`` defaults
    to ``r / 2``.
    """

    scenario: str = "rejection"
    n_values: tuple = (25, 50, 75, 100)
    lambda_values: tuple = tuple(k / 2 for k in range(31))
    side_a: float = 10.0
    r: float | None = None
    metrics: tuple | None = None
    trials: int = 1000
    hop_limit: int = 3
    base_seed: int = 0
    samples: int = 1_000_000
    disk_radius: float | None = None
    boundary: str | None = None
    norm: str | None = None
    size_cap: int = 16
    empirical_lambda_cap: float = 1.5
    verify: bool = True
    workers: int = 1
    output_dir: str = "."

    def resolved(self) -> "ExperimentConfig":
        chi = self.scenario == "chi"
        r = self.r if self.r is not None else (1.0 if chi else self.side_a / 4)
        cfg = replace(
            self, r=r,
            boundary=self.boundary or (TORUS if chi else PLANE),
            norm=self.norm or (UNIFORM if chi else EUCLIDEAN),
            disk_radius=self.disk_radius if self.disk_radius is not None else r / 2,
            metrics=self.metrics or (ALL_METRICS if self.scenario == "metrics" else ("min_distance",)),
        )
        cfg.validate()
        return cfg

    def validate(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario: expected one of {SCENARIOS}, got {self.scenario!r}")
        for name in ("side_a", "r", "disk_radius"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError(f"{name}: must be positive, got {value!r}")
        for name in ("trials", "hop_limit", "samples", "size_cap", "workers"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name}: must be >= 1, got {getattr(self, name)!r}")
        if self.base_seed < 0:
            raise ConfigError(f"base_seed: must be >= 0, got {self.base_seed!r}")
        if self.scenario != "chi" and any(int(n) != n or n < 1 for n in self.n_values):
            raise ConfigError(f"n_values: need positive integers, got {self.n_values!r}")
        if any(not lam >= 0 for lam in self.lambda_values):
            raise ConfigError(f"lambda_values: need non-negative values, got {self.lambda_values!r}")
        if self.boundary is not None and self.boundary not in BOUNDARIES:
            raise ConfigError(f"boundary: expected one of {BOUNDARIES}, got {self.boundary!r}")
        if self.norm is not None and self.norm not in METRICS:
            raise ConfigError(f"norm: expected one of {METRICS}, got {self.norm!r}")
        for m in self.metrics or ():
            if m not in ALL_METRICS:
                raise ConfigError(f"metrics: unknown metric {m!r}")
        if self.scenario == "metrics" and self.metrics and set(self.metrics) != set(ALL_METRICS):
            raise ConfigError(f"metrics: the metrics scenario compares all of {ALL_METRICS}")


_LIST_FIELDS = {"n_values": int, "lambda_values": float, "metrics": str}


def _parse_value(name: str, text: str):
    text = text.strip()
    if name in _LIST_FIELDS:
        conv = _LIST_FIELDS[name]
        return tuple(conv(t) for t in text.split(",") if t.strip())
    if text.lower() in ("", "none"):
        return None
    if name == "verify":
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name}: not a boolean: {text!r}")
    if name in ("trials", "hop_limit", "base_seed", "samples", "size_cap", "workers"):
        return int(float(text)) if "e" in text.lower() else int(text)
    if name in ("side_a", "r", "disk_radius", "empirical_lambda_cap"):
        return float(text)
    return text


def parse_config(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Read ``key=value`` lines (``#`` starts a comment) into a config."""
    known = {f.name for f in fields(ExperimentConfig)}
    aliases = {"n": "n_values", "lambda": "lambda_values", "metric": "metrics",
               "radius": "r", "side": "side_a", "seed": "base_seed", "out": "output_dir"}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = aliases.get(key, key).replace("-", "_")
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _parse_value(key, value)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
    return replace(base or ExperimentConfig(), **values)


def load_config(path: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base)


@dataclass
class ExperimentReport:
    scenario: str
    columns: tuple
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(row[c]) for c in self.columns])
        return buf.getvalue()

    def write_csv(self, path: str) -> str:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())
        return path

    def row(self, **match) -> dict:
        for r in self.rows:
            if all(r[k] == v for k, v in match.items()):
                return r
        raise KeyError(match)


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _mean_stderr(values) -> tuple[float, float]:
    a = np.asarray(values, dtype=float)
    if len(a) == 0:
        return math.nan, math.nan
    if len(a) == 1:
        return float(a[0]), math.nan
    return float(a.mean()), float(a.std(ddof=1) / math.sqrt(len(a)))


def _map(fn, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def _cloud(cfg: ExperimentConfig, n: int, seed: int):
    return sample_binomial(n, cfg.side_a, cfg.boundary, cfg.norm, seed)


# -- per-trial workers (module level so they can be pickled) ---------------

def _rejection_trial(task):
    cfg, n, seed = task
    cloud = _cloud(cfg, n, seed)
    cx = build_rips(cloud, cfg.r)
    tree = build_tree(cloud, cfg.r, cfg.metrics[0], seed=(seed, 1), cx=cx)
    bad = len(tree_violations(tree, cx, n)) if cfg.verify else 0
    return (100.0 * len(tree) / n, 100.0 * len(tree.rejected) / n,
            100.0 * len(tree.unreachable) / n, bad)


def _coverage_trial(task):
    cfg, n, seed = task
    cloud = _cloud(cfg, n, seed)
    cx = build_rips(cloud, cfg.r)
    tree = build_tree(cloud, cfg.r, cfg.metrics[0], seed=(seed, 1), cx=cx)
    before, after = coverage_loss(cloud, tree, cfg.disk_radius, cfg.samples, (seed, 2))
    bad = len(tree_violations(tree, cx, n)) if cfg.verify else 0
    return before.covered_fraction, after.covered_fraction, bad


def _metrics_trial(task):
    cfg, n, seed = task
    cloud = _cloud(cfg, n, seed)
    cx = build_rips(cloud, cfg.r)
    out = []
    trees = []
    for m in cfg.metrics:
        tree = build_tree(cloud, cfg.r, m, seed=(seed, 1), cx=cx,
                          weights=edge_weights(cx, cloud, m))
        bad = len(tree_violations(tree, cx, n)) if cfg.verify else 0
        out.append((branch_stats(tree, cloud), bad))
        trees.append(tree.vertices)
    covered = covered_fractions(cloud, trees, cfg.disk_radius, cfg.samples, (seed, 2))
    return [(stats, cov, bad) for (stats, bad), cov in zip(out, covered)]


def _single_tree_trial(task):
    cfg, n, seed = task
    cloud = _cloud(cfg, n, seed)
    cx = build_rips(cloud, cfg.r)
    rows = []
    for m in cfg.metrics:
        tree = build_tree(cloud, cfg.r, m, seed=(seed, 1), cx=cx)
        bad = len(tree_violations(tree, cx, n)) if cfg.verify else 0
        rows.append((len(tree), len(tree.rejected), len(tree.unreachable),
                     branch_stats(tree, cloud), bad))
    return rows


def _forest_trial(task):
    cfg, n, seed = task
    cloud = _cloud(cfg, n, seed)
    cx = build_rips(cloud, cfg.r)
    forest = build_forest(cloud, cfg.r, cfg.metrics[0], cfg.hop_limit, seed=(seed, 1), cx=cx)
    bad = len(forest_violations(forest, cx)) if cfg.verify else 0
    depth = max((max(t.depth.values()) for t in forest.trees), default=0)
    return len(forest.trees), len(forest.rejected), depth, bad


def _chi_trial(task):
    cfg, lam, seed = task
    cloud = sample_poisson(lam, cfg.side_a, cfg.boundary, cfg.norm, seed)
    try:
        return empirical_chi(cloud, cfg.r, cfg.size_cap)
    except CliqueCapError:
        return None


# -- suites ------------------------------------------------------------------

def _tasks(cfg: ExperimentConfig, value):
    return [(cfg, value, cfg.base_seed + t) for t in range(cfg.trials)]


def _seed_cols(cfg: ExperimentConfig) -> dict:
    return {"trials": cfg.trials, "seed_first": cfg.base_seed,
            "seed_last": cfg.base_seed + cfg.trials - 1}


SEED_COLUMNS = ("trials", "seed_first", "seed_last")


def run_rejection_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Mean percentage of tree, rejected and unreachable vertices per n."""
    cfg = replace(config, scenario="rejection").resolved()
    cols = ("n", "metric", "tree_pct_mean", "tree_pct_stderr", "rejected_pct_mean",
            "rejected_pct_stderr", "unreachable_pct_mean", "unreachable_pct_stderr",
            "violations") + SEED_COLUMNS
    report = ExperimentReport("rejection", cols)
    for n in cfg.n_values:
        res = _map(_rejection_trial, _tasks(cfg, int(n)), cfg.workers)
        tree, rej, unr, bad = zip(*res)
        row = {"n": int(n), "metric": cfg.metrics[0], "violations": sum(bad)}
        for name, vals in (("tree", tree), ("rejected", rej), ("unreachable", unr)):
            row[f"{name}_pct_mean"], row[f"{name}_pct_stderr"] = _mean_stderr(vals)
        row.update(_seed_cols(cfg))
        report.rows.append(row)
    return report


def run_coverage_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Covered area of all nodes vs. tree nodes only, per n.

    ``loss_pp`` is the drop in percentage points of the domain area;
    ``loss_rel_pct`` is the drop relative to the covered area before.
    """
    cfg = replace(config, scenario="coverage").resolved()
    cols = ("n", "metric", "disk_radius", "samples", "before_mean", "before_stderr",
            "after_mean", "after_stderr", "loss_pp_mean", "loss_pp_stderr",
            "loss_rel_pct_mean", "loss_rel_pct_stderr", "violations") + SEED_COLUMNS
    report = ExperimentReport("coverage", cols)
    for n in cfg.n_values:
        res = _map(_coverage_trial, _tasks(cfg, int(n)), cfg.workers)
        before, after, bad = (np.array(v) for v in zip(*res))
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = np.where(before > 0, (before - after) / np.where(before > 0, before, 1), 0.0)
        row = {"n": int(n), "metric": cfg.metrics[0], "disk_radius": float(cfg.disk_radius),
               "samples": cfg.samples, "violations": int(bad.sum())}
        row["before_mean"], row["before_stderr"] = _mean_stderr(before)
        row["after_mean"], row["after_stderr"] = _mean_stderr(after)
        row["loss_pp_mean"], row["loss_pp_stderr"] = _mean_stderr(100 * (before - after))
        row["loss_rel_pct_mean"], row["loss_rel_pct_stderr"] = _mean_stderr(100 * rel)
        row.update(_seed_cols(cfg))
        report.rows.append(row)
    return report


_STAT_NAMES = ("mean_hops", "max_hops", "mean_length", "max_length")


def run_metrics_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Branch statistics and covered area per weight metric, per n."""
    cfg = replace(config, scenario="metrics").resolved()
    cols = ("n", "metric")
    for s in _STAT_NAMES + ("covered_after",):
        cols += (f"{s}_mean", f"{s}_stderr")
    cols += ("violations",) + SEED_COLUMNS
    report = ExperimentReport("metrics", cols)
    for n in cfg.n_values:
        res = _map(_metrics_trial, _tasks(cfg, int(n)), cfg.workers)
        for k, m in enumerate(cfg.metrics):
            per = [trial[k] for trial in res]
            row = {"n": int(n), "metric": m, "violations": sum(p[2] for p in per)}
            for s_idx, s in enumerate(_STAT_NAMES):
                row[f"{s}_mean"], row[f"{s}_stderr"] = _mean_stderr([p[0][s_idx] for p in per])
            row["covered_after_mean"], row["covered_after_stderr"] = _mean_stderr([p[1] for p in per])
            row.update(_seed_cols(cfg))
            report.rows.append(row)
    return report


def run_single_tree_experiment(config: ExperimentConfig) -> ExperimentReport:
    """One row per (trial, n, metric) describing a single tree."""
    cfg = replace(config, scenario="single_tree").resolved()
    cols = ("n", "metric", "trial", "seed", "tree_size", "rejected", "unreachable") \
        + _STAT_NAMES + ("violations",)
    report = ExperimentReport("single_tree", cols)
    for n in cfg.n_values:
        tasks = _tasks(cfg, int(n))
        for t, rows in enumerate(_map(_single_tree_trial, tasks, cfg.workers)):
            for m, (size, rej, unr, stats, bad) in zip(cfg.metrics, rows):
                row = {"n": int(n), "metric": m, "trial": t, "seed": tasks[t][2],
                       "tree_size": size, "rejected": rej, "unreachable": unr, "violations": bad}
                row.update(stats._asdict())
                report.rows.append(row)
    return report


def run_forest_experiment(config: ExperimentConfig) -> ExperimentReport:
    cfg = replace(config, scenario="forest").resolved()
    cols = ("n", "metric", "hop_limit", "trees_mean", "trees_stderr", "rejected_mean",
            "rejected_stderr", "max_depth", "violations") + SEED_COLUMNS
    report = ExperimentReport("forest", cols)
    for n in cfg.n_values:
        res = _map(_forest_trial, _tasks(cfg, int(n)), cfg.workers)
        ntrees, rej, depth, bad = zip(*res)
        row = {"n": int(n), "metric": cfg.metrics[0], "hop_limit": cfg.hop_limit,
               "max_depth": max(depth), "violations": sum(bad)}
        row["trees_mean"], row["trees_stderr"] = _mean_stderr(ntrees)
        row["rejected_mean"], row["rejected_stderr"] = _mean_stderr(rej)
        row.update(_seed_cols(cfg))
        report.rows.append(row)
    return report


def run_chi_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Closed-form expected Euler characteristic vs. simulated Poisson clouds.

    Rows with ``lambda > empirical_lambda_cap``, or where some realization
    hits the clique cap, report ``status=skipped`` and leave the empirical
    columns empty.
    """
    cfg = replace(config, scenario="chi").resolved()
    cols = ("lambda", "expected_chi", "empirical_mean", "empirical_stderr",
            "realizations", "status", "seed_first", "seed_last")
    report = ExperimentReport("chi", cols)
    for lam in cfg.lambda_values:
        row = {"lambda": float(lam), "expected_chi": expected_chi_2d(lam, cfg.r, cfg.side_a),
               "empirical_mean": "", "empirical_stderr": "", "realizations": 0,
               "status": "skipped", "seed_first": cfg.base_seed,
               "seed_last": cfg.base_seed + cfg.trials - 1}
        if lam <= cfg.empirical_lambda_cap:
            chis = _map(_chi_trial, _tasks(cfg, float(lam)), cfg.workers)
            if all(c is not None for c in chis):
                row["empirical_mean"], row["empirical_stderr"] = _mean_stderr(chis)
                row["realizations"] = len(chis)
                row["status"] = "ok"
        report.rows.append(row)
    return report


RUNNERS = {
    "rejection": run_rejection_experiment,
    "coverage": run_coverage_experiment,
    "metrics": run_metrics_experiment,
    "chi": run_chi_experiment,
    "single_tree": run_single_tree_experiment,
    "forest": run_forest_experiment,
}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    return RUNNERS[config.resolved().scenario](config)


def write_report(report: ExperimentReport, output_dir: str) -> str:
    os.makedirs(output_dir, exist_ok=True)
    return report.write_csv(os.path.join(output_dir, f"{report.scenario}.csv"))
