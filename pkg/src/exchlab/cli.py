"""Command-line interface.

Scenario subcommands run a configured experiment and emit a CSV or
JSON-lines report; the direct subcommands expose single operations on
files in the documented text formats.

Exit codes: 0 success, 2 configuration or input error, 3 condition
unsatisfiable within its rejection budget, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .decompose import df_bound_check, general_decomposition, signed_mixture_solve
from .distributions import SequenceDistribution
from .experiments import ConfigError, load_config
from .experiments.report import render_csv, render_jsonl
from .experiments.scenarios import run_scenario
from .graphs import BudgetExhaustedError, Graph, graph_metrics

SCENARIOS = (
    "definetti_roundtrip",
    "decomposition_roundtrip",
    "bound_sweep",
    "swallow_uniformity",
    "inheritance",
    "exchangeability_of_conditioning",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exchlab",
        description="Exchangeable-sequence decompositions and random-graph experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in SCENARIOS:
        sp = sub.add_parser(name, help=f"run the {name} scenario")
        sp.add_argument("--config", required=True, help="JSON config file")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--out", help="report path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "jsonl"), help="report format")

    sp = sub.add_parser("decompose", help="decompose a distribution file")
    sp.add_argument("--dist", required=True, help="distribution in text format")
    sp.add_argument("--out", help="output path (default: stdout)")

    sp = sub.add_parser("signed", help="signed binomial-mixture weights")
    sp.add_argument("--dist", required=True, help="binary exchangeable distribution file")
    sp.add_argument("--out", help="output path (default: stdout)")

    sp = sub.add_parser("metrics", help="connectivity metrics of a graph file")
    sp.add_argument("--graph", required=True, help="graph in text format")

    sp = sub.add_parser("tvbound", help="exact urn-prefix distance vs its bound")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)

    return parser


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "wb") as handle:
            handle.write(text.encode("utf-8"))


def _run_scenario_command(args) -> int:
    config = load_config(args.config)
    if config.scenario != args.command:
        raise ConfigError(
            f"config is for scenario {config.scenario!r}, command was {args.command!r}"
        )
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.format is not None:
        config = replace(config, format=args.format)
    if args.out is not None:
        config = replace(config, out=args.out)
    report = run_scenario(config)
    rendered = render_csv(report) if config.format == "csv" else render_jsonl(report)
    _write_output(rendered, config.out)
    failed = report.failed_rows()
    if failed:
        for row in failed:
            print(f"FAIL {row.metric} at {row.cell}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in SCENARIOS:
            return _run_scenario_command(args)
        if args.command == "decompose":
            dist = SequenceDistribution.from_text(_read_text(args.dist))
            _write_output(general_decomposition(dist).to_text(), args.out)
            return 0
        if args.command == "signed":
            dist = SequenceDistribution.from_text(_read_text(args.dist))
            _write_output(signed_mixture_solve(dist).to_text(), args.out)
            return 0
        if args.command == "metrics":
            graph = Graph.from_text(_read_text(args.graph))
            result = graph_metrics(graph)
            sys.stdout.write(json.dumps(result.to_dict(), sort_keys=True) + "\n")
            return 0
        if args.command == "tvbound":
            report = df_bound_check(args.N, args.K, args.k)
            payload = {
                "N": report.N,
                "K": report.K,
                "k": report.k,
                "tv": report.tv,
                "bound": report.bound,
                "bound_infinite_alphabet": report.bound_infinite_alphabet,
                "passed": report.passed,
            }
            sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
            return 0
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except BudgetExhaustedError as err:
        print(f"condition unsatisfiable: {err}", file=sys.stderr)
        return 3
    except ValueError as err:
        print(f"input error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
