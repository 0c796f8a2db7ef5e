"""Command line interface.

Subcommands map onto the library layers: ``eval`` prints the closed-form
quantities of one scenario, ``sweep`` tabulates a parameter sweep,
``validate`` cross-checks the Monte Carlo estimators against the closed
forms, ``simulate`` reports raw estimates without verdicts, and
``figures`` renders the two packaged reference sweeps.

Data goes to stdout or to files under the output directory; diagnostics go
to stderr.  The default output directory for file-writing commands is
``CTXCALC_OUT_DIR`` when set, else the working directory.

Exit codes: 0 success, 2 configuration or usage error, 3 mathematical
domain error, 4 I/O error, 5 validation failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Optional

from . import __version__, kernels, model
from .errors import ConfigError, MathDomainError
from .rng import RngSpec
from .scenario import Scenario, load_scenario, parse_scenario
from .serialize import format_number, sweep_table_to_csv, sweep_table_to_dict, to_json
from .estimators import estimate_rci
from .svgchart import render_line_chart
from .sweep import run_sweep
from .validate import validate

__all__ = ["main"]

_FIGURES = ("figure1_rci_vs_memory", "figure2_rci_vs_noise")


def _load_packaged(name: str) -> Scenario:
    text = resources.files("ctxcalc").joinpath("data", f"{name}.yaml").read_text(
        encoding="utf-8"
    )
    return parse_scenario(text, source=f"builtin:{name}")


def _resolve_scenario(path: Optional[str]) -> tuple[Scenario, str]:
    """Load the named scenario file, or the packaged baseline, plus a stem
    for naming output files."""
    if path is None:
        return _load_packaged("baseline"), "baseline"
    return load_scenario(path), Path(path).stem


def _out_dir(arg: Optional[str]) -> Path:
    base = arg if arg is not None else os.environ.get("CTXCALC_OUT_DIR", ".")
    directory = Path(base)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _write_text(path: Path, text: str) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    print(f"wrote {path}", file=sys.stderr)


def _eval_payload(scenario: Scenario) -> dict:
    config = scenario.config
    shared = model.rci_shared(config)
    separate = model.rci_separate(config)
    ratio = model.rci_ratio(config)
    latency = config.latency
    shared_window = config.memory.shared_window
    separate_window = config.memory.separate_windows[0]
    return {
        "schema": 1,
        "results": {
            "rci_shared": shared.value,
            "rci_separate": separate.value,
            "rci_ratio": ratio,
            "t_shared": model.t_shared(latency, shared_window),
            "t_separate": model.t_separate(latency, separate_window),
            "time_ratio": model.response_time_ratio(
                latency, shared_window, separate_window
            ),
        },
        "in_domain": {
            "rci_shared": shared.in_probability_domain,
            "rci_separate": separate.in_probability_domain,
        },
        "components": {
            "shared_retention_factor": shared.retention_factor,
            "shared_noise_impact_total": shared.noise_impact_total,
            "separate_retention_factor": separate.retention_factor,
            "separate_noise_impact_total": separate.noise_impact_total,
        },
    }


def _eval_csv(payload: dict) -> str:
    results = payload["results"]
    in_domain = payload["in_domain"]
    names = list(results)
    header = names + [f"{k}_in_domain" for k in in_domain]
    row = [format_number(results[k]) for k in names]
    row += [str(in_domain[k]).lower() for k in in_domain]
    return ",".join(header) + "\n" + ",".join(row) + "\n"


def _cmd_eval(args) -> int:
    scenario, stem = _resolve_scenario(args.scenario)
    payload = _eval_payload(scenario)
    text = _eval_csv(payload) if args.format == "csv" else to_json(payload)
    if args.out is None:
        sys.stdout.write(text)
    else:
        _write_text(_out_dir(args.out) / f"{stem}_eval.{args.format}", text)
    return 0


def _sweep_outputs(scenario: Scenario, stem: str, directory: Path,
                   fmt: str, chart: bool) -> None:
    if scenario.sweep is None:
        raise ConfigError(f"scenario {stem!r} has no sweep block")
    table = run_sweep(scenario.sweep)
    if fmt == "csv":
        _write_text(directory / f"{stem}.csv", sweep_table_to_csv(table))
    else:
        payload = {"schema": 1, **sweep_table_to_dict(table)}
        _write_text(directory / f"{stem}.json", to_json(payload))
    if chart:
        svg = render_line_chart(
            stem,
            table.parameter,
            "value",
            table.grid,
            [(name, table.column(name)) for name in table.columns],
        )
        _write_text(directory / f"{stem}.svg", svg)


def _cmd_sweep(args) -> int:
    scenario, stem = _resolve_scenario(args.scenario)
    _sweep_outputs(scenario, stem, _out_dir(args.out), args.format, args.chart)
    return 0


def _cmd_figures(args) -> int:
    directory = _out_dir(args.out)
    for name in _FIGURES:
        _sweep_outputs(_load_packaged(name), name, directory, "csv", True)
    return 0


def _simulation_settings(scenario: Scenario, args):
    settings = scenario.simulation
    trials = args.trials if args.trials is not None else settings.trials
    seed = args.seed if args.seed is not None else settings.seed
    partitions = args.partitions if args.partitions is not None else settings.partitions
    return trials, seed, settings.sigma_threshold, partitions


def _cmd_validate(args) -> int:
    scenario, stem = _resolve_scenario(args.scenario)
    trials, seed, sigma, partitions = _simulation_settings(scenario, args)
    print(f"backend: {kernels.backend_name()}", file=sys.stderr)
    report = validate(
        scenario.config,
        trials,
        RngSpec(seed, 0),
        sigma_threshold=sigma,
        partitions=partitions,
    )
    text = to_json({"schema": 1, **report.to_dict()})
    if args.out is None:
        sys.stdout.write(text)
    else:
        _write_text(_out_dir(args.out) / f"{stem}_validation.json", text)
    if not report.all_passed:
        failed = ", ".join(c.name for c in report.failures)
        print(
            f"validation failed: {len(report.failures)} of "
            f"{len(report.components)} components out of tolerance ({failed})",
            file=sys.stderr,
        )
        return 5
    return 0


def _cmd_simulate(args) -> int:
    scenario, stem = _resolve_scenario(args.scenario)
    trials, seed, _, partitions = _simulation_settings(scenario, args)
    print(f"backend: {kernels.backend_name()}", file=sys.stderr)
    config = scenario.config
    n = config.n_topics
    base = RngSpec(seed, 0)
    estimates = []
    for mode, offset, consumed in (("shared", 0, 1 + n), ("separate", 1 + n, 2 * n)):
        est = estimate_rci(config, mode, trials, base.with_stream(offset), partitions)
        estimates.append(
            {
                "name": f"rci[{mode}]",
                "mean": est.mean,
                "std_error": est.std_error,
                "stream_id": offset,
                "streams_consumed": consumed,
            }
        )
    payload = {
        "schema": 1,
        "trials": trials,
        "seed": seed,
        "partitions": partitions,
        "estimates": estimates,
    }
    text = to_json(payload)
    if args.out is None:
        sys.stdout.write(text)
    else:
        _write_text(_out_dir(args.out) / f"{stem}_simulation.json", text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxcalc",
        description="Consistency and response-time calculator for shared "
        "versus separate context configurations.",
    )
    parser.add_argument("--version", action="version", version=f"ctxcalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario(p):
        p.add_argument(
            "scenario",
            nargs="?",
            default=None,
            help="scenario YAML file (default: packaged baseline)",
        )

    def add_out(p):
        p.add_argument("--out", help="output directory (default: CTXCALC_OUT_DIR or .)")

    def add_budget(p):
        p.add_argument("--trials", type=int, help="override the trial budget")
        p.add_argument("--seed", type=int, help="override the seed")
        p.add_argument("--partitions", type=int, help="override the partition count")

    p_eval = sub.add_parser("eval", help="closed-form results for one scenario")
    add_scenario(p_eval)
    p_eval.add_argument("--format", choices=("json", "csv"), default="json")
    add_out(p_eval)
    p_eval.set_defaults(fn=_cmd_eval)

    p_sweep = sub.add_parser("sweep", help="run the scenario's parameter sweep")
    add_scenario(p_sweep)
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--chart", action="store_true", help="also write an SVG chart")
    add_out(p_sweep)
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_val = sub.add_parser(
        "validate", help="cross-check estimators against the closed forms"
    )
    add_scenario(p_val)
    add_budget(p_val)
    add_out(p_val)
    p_val.set_defaults(fn=_cmd_validate)

    p_sim = sub.add_parser("simulate", help="Monte Carlo estimates without verdicts")
    add_scenario(p_sim)
    add_budget(p_sim)
    add_out(p_sim)
    p_sim.set_defaults(fn=_cmd_simulate)

    p_fig = sub.add_parser("figures", help="render the packaged reference figures")
    add_out(p_fig)
    p_fig.set_defaults(fn=_cmd_figures)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    try:
        return args.fn(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except MathDomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
