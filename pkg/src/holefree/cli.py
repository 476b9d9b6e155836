"""Command-line entry point: ``holefree <command> [options]``.

Exit codes: 0 success, 2 configuration error, 3 clique-size cap exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import fileio
from .experiments import ConfigError, ExperimentConfig, load_config, run_experiment, write_report
from .geometry import ParameterError, sample_binomial, sample_poisson
from .rips import CliqueCapError, build_rips
from .render import render_svg
from .spanning import build_forest, build_tree

EXIT_CONFIG = 2
EXIT_CAP = 3


def _csv_list(conv):
    def parse(text):
        try:
            return tuple(conv(t) for t in text.split(",") if t.strip())
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _add_cloud_args(p: argparse.ArgumentParser):
    p.add_argument("--cloud", help="read the point cloud from this file")
    p.add_argument("--n", type=int, help="number of points (fixed-count sampling)")
    p.add_argument("--lambda", dest="lam", type=float, help="Poisson intensity per unit area")
    p.add_argument("--side", type=float, default=10.0)
    p.add_argument("--boundary", choices=("plane", "torus"), default="plane")
    p.add_argument("--norm", choices=("euclidean", "uniform"), default="euclidean")
    p.add_argument("--seed", type=int, default=0)


def _cloud_from_args(args):
    if args.cloud:
        return fileio.load_cloud(args.cloud)
    if args.lam is not None:
        return sample_poisson(args.lam, args.side, args.boundary, args.norm, args.seed)
    if args.n is None:
        raise ConfigError("n: give --cloud, --n or --lambda")
    return sample_binomial(args.n, args.side, args.boundary, args.norm, args.seed)


def _emit(text: str, path: str | None):
    if path:
        fileio.save_text(text, path)
    else:
        sys.stdout.write(text)


def _radius(args, cloud) -> float:
    return args.radius if args.radius is not None else cloud.side_a / 4


def cmd_generate(args):
    _emit(fileio.format_cloud(_cloud_from_args(args)), args.out)


def _root(text: str):
    return text if text == "random" else int(text)


def cmd_tree(args):
    cloud = _cloud_from_args(args)
    r = _radius(args, cloud)
    cx = build_rips(cloud, r)
    tree = build_tree(cloud, r, args.metric, root=_root(args.root), seed=(args.seed, 1), cx=cx)
    _emit(fileio.format_tree(tree), args.out)
    if args.svg:
        fileio.save_text(render_svg(cloud, cx, tree), args.svg)


def cmd_forest(args):
    cloud = _cloud_from_args(args)
    r = _radius(args, cloud)
    cx = build_rips(cloud, r)
    forest = build_forest(cloud, r, args.metric, args.hop_limit, seed=(args.seed, 1), cx=cx)
    _emit(fileio.format_forest(forest), args.out)
    if args.svg:
        fileio.save_text(render_svg(cloud, cx, forest), args.svg)


def cmd_render(args):
    cloud = fileio.load_cloud(args.cloud)
    cx = build_rips(cloud, _radius(args, cloud))
    drawn = None
    if args.tree:
        text = fileio.load_text(args.tree)
        drawn = fileio.parse_forest(text) if "hop_limit=" in text else fileio.parse_tree(text)
    _emit(render_svg(cloud, cx, drawn), args.out)


_OVERRIDES = {
    "scenario": "scenario", "n": "n_values", "lam": "lambda_values", "side": "side_a",
    "radius": "r", "metric": "metrics", "trials": "trials", "hop_limit": "hop_limit",
    "seed": "base_seed", "samples": "samples", "boundary": "boundary", "norm": "norm",
    "workers": "workers", "disk_radius": "disk_radius", "size_cap": "size_cap",
}


def _experiment_config(args, scenario: str | None = None) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    changes = {field: getattr(args, attr) for attr, field in _OVERRIDES.items()
               if getattr(args, attr, None) is not None}
    if scenario:
        changes["scenario"] = scenario
    if args.out:
        changes["output_dir"] = args.out
    return dataclasses.replace(cfg, **changes)


def cmd_experiment(args, scenario: str | None = None):
    cfg = _experiment_config(args, scenario)
    report = run_experiment(cfg)
    print(write_report(report, cfg.output_dir))


def _add_experiment_args(p: argparse.ArgumentParser, with_scenario: bool):
    p.add_argument("--config", help="key=value configuration file")
    if with_scenario:
        p.add_argument("--scenario", choices=("rejection", "coverage", "metrics", "chi",
                                               "single_tree", "forest"))
        p.add_argument("--n", type=_csv_list(int), help="comma-separated n grid")
        p.add_argument("--metric", type=_csv_list(str), help="comma-separated metrics")
        p.add_argument("--hop-limit", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--disk-radius", type=float)
    p.add_argument("--lambda", dest="lam", type=_csv_list(float), help="comma-separated intensity grid")
    p.add_argument("--side", type=float)
    p.add_argument("--radius", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--boundary", choices=("plane", "torus"))
    p.add_argument("--norm", choices=("euclidean", "uniform"))
    p.add_argument("--size-cap", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output directory for the CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holefree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a point cloud")
    _add_cloud_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    for name, func in (("tree", cmd_tree), ("forest", cmd_forest)):
        p = sub.add_parser(name, help=f"build a coverage hole-free {name}")
        _add_cloud_args(p)
        p.add_argument("--radius", type=float, help="Rips parameter (default side/4)")
        p.add_argument("--metric", default="min_distance",
                       choices=("min_distance", "max_distance", "max_height"))
        p.add_argument("--out", help="tree file (default stdout)")
        p.add_argument("--svg", help="also write an SVG snapshot")
        if name == "tree":
            p.add_argument("--root", default="random", help="vertex index or 'random'")
        else:
            p.add_argument("--hop-limit", type=int, default=3)
        p.set_defaults(func=func)

    p = sub.add_parser("experiment", help="run a simulation suite and write CSV")
    _add_experiment_args(p, with_scenario=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("chi", help="expected vs simulated Euler characteristic")
    _add_experiment_args(p, with_scenario=False)
    p.set_defaults(func=lambda a: cmd_experiment(a, "chi"))

    p = sub.add_parser("render", help="draw a cloud and optional tree/forest as SVG")
    p.add_argument("--cloud", required=True)
    p.add_argument("--tree", help="tree or forest file")
    p.add_argument("--radius", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CliqueCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParameterError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
