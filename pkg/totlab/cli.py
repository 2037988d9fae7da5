"""Command-line entry point: ``totlab curve|ensemble|simulate|scenario``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .config import (
    EpisodeConfig,
    RunConfig,
    dump_json,
    load_damage,
    load_episode,
    load_matrix,
    load_vector,
)
from .curvelab import (
    NOISE_MODELS,
    DemoConfiguration,
    EnsembleMode,
    curve_csv_text,
    damage_ensemble_dead,
    damage_ensemble_links,
    free_recall_probability,
    recall_curve,
    recall_curve_mc,
    reproduction_report,
)
from .errors import ConfigurationError, TotlabError
from .netcore import TIE_RULES, BipolarVector, SynapticMatrix, apply_damage, train_hebbian
from .resources import read_json_resource
from .retrieval import SeriesConfig
from .scenario import SCENARIOS, get_scenario, render_narrative


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

DEMO_NETWORKS = ("default", "tot")
ENSEMBLE_MODES = {
    "dead-neurons": EnsembleMode.DEAD_NEURONS_EXACT,
    "links": EnsembleMode.LINKS_SAMPLED,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=0, help="seed for every random stream (default 0)")
    parser.add_argument("--out", help="output file (default: standard output)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for events")


def _add_network(parser):
    parser.add_argument("--matrix", help="synaptic matrix JSON")
    parser.add_argument("--reference", help="reference vector JSON")
    parser.add_argument("--damage", help="damage spec JSON applied before computing")
    parser.add_argument(
        "--demo", choices=DEMO_NETWORKS, default="default",
        help="built-in network when --matrix/--reference are omitted",
    )
    parser.add_argument("--noise", choices=sorted(NOISE_MODELS), default="replacement")
    parser.add_argument("--tie", choices=sorted(TIE_RULES), default="retain_input")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="totlab", description="Tip-of-the-tongue simulation lab")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    curve = commands.add_parser("curve", help="exact recall curve as CSV")
    _add_network(curve)
    _add_common(curve)
    curve.add_argument("--mc", type=int, metavar="SAMPLES", help="also estimate each point by Monte Carlo")

    ensemble = commands.add_parser("ensemble", help="damage ensemble report as JSON")
    _add_network(ensemble)
    _add_common(ensemble)
    ensemble.add_argument("--mode", choices=sorted(ENSEMBLE_MODES), default="dead-neurons")
    ensemble.add_argument("--k", type=int, default=4, help="dead input neurons (dead-neurons mode)")
    ensemble.add_argument("--count", type=int, default=10, help="severed links (links mode)")
    ensemble.add_argument("--samples", type=int, default=1000, help="sampled link sets (links mode)")
    ensemble.add_argument("--workers", type=int, default=1)
    ensemble.add_argument("--delta-steep", help="TOT origin-drop threshold (default 0.1)")

    simulate = commands.add_parser("simulate", help="run one retrieval episode")
    _add_common(simulate)
    simulate.add_argument("--config", help="episode configuration JSON (default: shipped example)")
    simulate.add_argument("--limit", type=int, help="override the repetition limit per series")
    simulate.add_argument("--arms-threshold", type=int, help="override the throw-up-arms threshold")

    scenario = commands.add_parser(
        "scenario",
        help="run a shipped scenario: "
        + ", ".join(f"{key} ({p.display_name})" for key, p in sorted(SCENARIOS.items())),
    )
    scenario.add_argument("scenario", choices=sorted(SCENARIOS))
    _add_common(scenario)

    return parser


def _demo_network(name: str) -> tuple[SynapticMatrix, BipolarVector]:
    demo = DemoConfiguration.from_json(read_json_resource("demo_tot.json"))
    if name == "tot":
        return demo.matrix, demo.reference
    return train_hebbian(demo.reference), demo.reference


def _network(config: RunConfig) -> tuple[SynapticMatrix, BipolarVector]:
    matrix, reference = _demo_network(config.demo)
    if config.matrix:
        matrix = load_matrix(config.matrix)
    if config.reference:
        reference = load_vector(config.reference)
    if matrix.n != reference.n:
        raise ConfigurationError(
            f"reference length {reference.n} does not match network size {matrix.n}"
        )
    if config.damage:
        matrix = apply_damage(matrix, load_damage(config.damage))
    return matrix, reference


def _emit(config: RunConfig, data: str, table: str | None = None) -> None:
    """Data goes to --out or stdout; tables go to stdout, or stderr when data holds stdout."""
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as f:
            f.write(data)
        if table:
            sys.stdout.write(table)
        logger.info("Wrote %s", config.out)
    else:
        sys.stdout.write(data)
        if table:
            sys.stderr.write(table)


def cmd_curve(config: RunConfig) -> int:
    matrix, reference = _network(config)
    curve = recall_curve(matrix, reference, config.noise_model, config.tie)
    n = curve.n
    lines = [f"P(0) = {curve.probability(0)}  P(1/{n}) = {curve.probability(1)}  P(1) = {curve.probability(n)}"]
    if config.mc_samples:
        estimates = recall_curve_mc(
            matrix, reference, config.noise_model, config.tie, config.mc_samples, config.seed
        )
        lines.append(f"{'m':>3} {'exact':>10} {'monte carlo':>12} {'stderr':>9}")
        for (m, p), (estimate, stderr) in zip(curve.points, estimates):
            lines.append(f"{m:>3} {float(p):>10.6f} {estimate:>12.6f} {stderr:>9.6f}")
    _emit(config, curve_csv_text(curve), "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ensemble(config: RunConfig) -> int:
    matrix, reference = _network(config)
    mode = ENSEMBLE_MODES[config.mode]
    if mode is EnsembleMode.DEAD_NEURONS_EXACT:
        report = damage_ensemble_dead(
            matrix, reference, config.k, config.noise_model, config.tie, config.thresholds,
            workers=config.workers,
        )
    else:
        report = damage_ensemble_links(
            matrix, reference, config.count, config.samples, config.seed,
            config.noise_model, config.tie, config.thresholds,
            workers=config.workers,
        )

    table = (
        f"ensemble size {report.ensemble_size}, {len(report.classes)} classes, "
        f"TOT probability {report.tot_probability}, TOT strength {report.tot_strength}\n"
    )
    if mode is EnsembleMode.DEAD_NEURONS_EXACT and report.n == 9 and report.damage_size == 4:
        reproduction = reproduction_report(report, free_recall_probability(report))
        table += "\n" + reproduction.render()
    _emit(config, dump_json(report.to_json()), table)
    return EXIT_OK


def cmd_simulate(config: RunConfig) -> int:
    if config.config:
        episode = load_episode(config.config)
    else:
        episode = EpisodeConfig.from_json(read_json_resource("example_episode.json"))
    overrides = {}
    if config.limit is not None:
        overrides["series"] = SeriesConfig(config.limit, episode.series.cue, episode.series.tie)
    if config.arms_threshold is not None:
        overrides["arms_threshold"] = config.arms_threshold
    if overrides:
        episode = replace(episode, **overrides)

    trace = episode.run(np.random.default_rng(config.seed))
    outcome = "resolved" if trace.resolved else "gave up"
    _emit(
        config,
        dump_json(trace.to_json()),
        f"{outcome} after {sum(trace.attempts_per_phase)} attempts, {trace.total_time_ms} ms\n",
    )
    return EXIT_OK


def cmd_scenario(config: RunConfig) -> int:
    profile = get_scenario(config.scenario)
    trace, rows = profile.run(config.seed)
    _emit(config, dump_json(trace.to_json()), render_narrative(rows, profile.display_name))
    return EXIT_OK


COMMAND_HANDLERS = {
    "curve": cmd_curve,
    "ensemble": cmd_ensemble,
    "simulate": cmd_simulate,
    "scenario": cmd_scenario,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigurationError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_CONFIG

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    try:
        config = RunConfig.from_args(args)
        return COMMAND_HANDLERS[config.command](config)
    except ConfigurationError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_CONFIG
    except TotlabError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_RUNTIME
    except Exception as e:
        logger.debug("Unexpected failure", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
