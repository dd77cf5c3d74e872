"""Experiment driver: parameter sweeps over the cascade model and the baseline.

Every subcommand is a pure function of its configuration: the master seed
feeds a per-cell, per-replication seed tree, rows are buffered and written
in grid order, and a rerun with the same inputs produces byte-identical
output. Configuration merges built-in defaults, an optional scale preset,
an optional JSON config file, and command-line flags, in that order.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .cascade import IHCParams, run_cascade
from .graph import EdgeListError, degree_stats, generate_ba, generate_er, load_edge_list
from .incentives import compute_payouts
from .metrics import classify_regime, degree_bin, summarize
from .oracle import (
    OracleSpec,
    oracle_success_probability,
    p_lambda,
    simulate_oracle,
    truncation_bounds,
)
from .skills import bind_params, sample_skill_world

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3

_SUMMARY_FIELDS = (
    "n_runs",
    "success_rate",
    "median_chain_length",
    "mean_chain_depth",
    "mean_applicants",
)


class ConfigError(Exception):
    """Invalid or incomplete experiment configuration."""


# -- configuration schema ------------------------------------------------------


@dataclass(frozen=True)
class _Field:
    default: Any
    check: Callable[[str, Any], Any]
    required: bool = False


def _int_at_least(minimum: int):
    def check(name: str, value: Any) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        if value < minimum:
            raise ConfigError(f"{name} must be at least {minimum}, got {value}")
        return value

    return check


def _number(lo: float | None = None, hi: float | None = None, open_lo: bool = False):
    def check(name: str, value: Any) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number, got {value!r}")
        v = float(value)
        if lo is not None and (v <= lo if open_lo else v < lo):
            bound = "greater than" if open_lo else "at least"
            raise ConfigError(f"{name} must be {bound} {lo}, got {v}")
        if hi is not None and v > hi:
            raise ConfigError(f"{name} must be at most {hi}, got {v}")
        return v

    return check


_prob = _number(0.0, 1.0)


def _list_of(inner: Callable[[str, Any], Any]):
    def check(name: str, value: Any) -> list:
        if not isinstance(value, (list, tuple)) or not value:
            raise ConfigError(f"{name} must be a nonempty list")
        return [inner(f"{name}[{i}]", v) for i, v in enumerate(value)]

    return check


def _boolean(name: str, value: Any) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{name} must be true or false, got {value!r}")
    return value


def _text(name: str, value: Any) -> str:
    if not isinstance(value, str) or not value:
        raise ConfigError(f"{name} must be a nonempty string")
    return value


def _budget(name: str, value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ConfigError(f"{name} must be a number or a fraction string like '5/2'")
    try:
        b = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{name} is not a valid amount: {value!r}") from None
    if b <= 0:
        raise ConfigError(f"{name} must be positive")
    return b


_SCHEMAS: dict[str, dict[str, _Field]] = {
    "heatmap": {
        "n": _Field(1000, _int_at_least(2)),
        "mean_degree": _Field(50.0, _number(lo=0.0, open_lo=True)),
        "p_r": _Field([0.02, 0.05, 0.1, 0.2, 0.5, 1.0], _list_of(_prob)),
        "p_a": _Field([0.1, 0.3, 0.5, 0.7, 0.9], _list_of(_prob)),
        "p_h": _Field([0.1, 0.5, 1.0], _list_of(_prob)),
        "reps": _Field(100, _int_at_least(1)),
        "seed": _Field(None, _int_at_least(0), required=True),
        "out": _Field(None, _text),
    },
    "ba-vs-er": {
        "n": _Field(1000, _int_at_least(2)),
        "er_mean_degree": _Field(50.0, _number(lo=0.0, open_lo=True)),
        "ba_attachment": _Field(50, _int_at_least(1)),
        "ba_core": _Field(None, _int_at_least(1)),
        "p_r": _Field([0.05, 0.1, 0.2, 0.5, 1.0], _list_of(_prob)),
        "p_a": _Field(0.1, _prob),
        "p_h": _Field(0.5, _prob),
        "reps": _Field(200, _int_at_least(1)),
        "seed": _Field(None, _int_at_least(0), required=True),
        "out": _Field(None, _text),
    },
    "ihc-vs-oracle": {
        "population": _Field(2000, _int_at_least(2)),
        "mean_degree": _Field(20.0, _number(lo=0.0, open_lo=True)),
        "reach_fraction": _Field(0.5, _prob),
        "skill_rate": _Field(3.0, _number(lo=0.0)),
        "vacancy_sizes": _Field([4, 6, 8], _list_of(_int_at_least(0))),
        "p_r": _Field([0.05, 0.1, 0.15, 0.2, 0.25, 0.5, 1.0], _list_of(_prob)),
        "mass_threshold": _Field(0.98, _number(lo=0.0, hi=1.0, open_lo=True)),
        "reps": _Field(200, _int_at_least(1)),
        "seed": _Field(None, _int_at_least(0), required=True),
        "out": _Field(None, _text),
    },
    "oracle-analytic": {
        "population": _Field(5000, _int_at_least(1)),
        "reach_fraction": _Field(0.5, _prob),
        "skill_rate": _Field(3.0, _number(lo=0.0)),
        "vacancy_sizes": _Field([4, 6, 8], _list_of(_int_at_least(0))),
        "p_r": _Field([1.0], _list_of(_prob)),
        "mass_threshold": _Field(0.98, _number(lo=0.0, hi=1.0, open_lo=True)),
        "out": _Field(None, _text),
    },
    "empirical": {
        "edge_list": _Field(None, _text, required=True),
        "directed": _Field(False, _boolean),
        "p_r": _Field(0.25, _prob),
        "reach_fraction": _Field(0.5, _prob),
        "skill_rate": _Field(3.0, _number(lo=0.0)),
        "vacancy_size": _Field(4, _int_at_least(0)),
        "reps": _Field(100, _int_at_least(1)),
        "seed": _Field(None, _int_at_least(0), required=True),
        "out": _Field(None, _text),
    },
    "payout": {
        "chain_length": _Field(None, _int_at_least(1), required=True),
        "budget": _Field(1, _budget),
        "out": _Field(None, _text),
    },
}

_PRESETS: dict[str, dict[str, dict[str, Any]]] = {
    "heatmap": {"desk": {}, "paper": {"n": 5000}},
    "ba-vs-er": {"desk": {}, "paper": {"n": 5000, "reps": 10_000}},
    "ihc-vs-oracle": {"desk": {}, "paper": {"population": 5000}},
    "empirical": {"desk": {}, "paper": {"reps": 200}},
}


def _read_config_file(path: str, schema: dict[str, _Field], command: str) -> dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    unknown = sorted(set(data) - set(schema))
    if unknown:
        raise ConfigError(f"config {path}: unknown keys for {command}: {', '.join(unknown)}")
    return data


def _merge_config(command: str, args: argparse.Namespace) -> dict[str, Any]:
    schema = _SCHEMAS[command]
    cfg = {key: field.default for key, field in schema.items()}
    preset = getattr(args, "preset", None)
    if preset:
        cfg.update(_PRESETS[command][preset])
    if getattr(args, "config", None):
        cfg.update(_read_config_file(args.config, schema, command))
    for key in schema:
        override = getattr(args, key, None)
        if override is not None:
            cfg[key] = override

    merged: dict[str, Any] = {}
    for key, field in schema.items():
        value = cfg[key]
        if value is None:
            if field.required:
                raise ConfigError(f"{command}: {key} is required (flag or config file)")
            merged[key] = None
        else:
            merged[key] = field.check(key, value)
    return merged


# -- output --------------------------------------------------------------------


def _clean(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _render(fields: Sequence[str], rows: Sequence[dict], fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(
            json.dumps({key: _clean(row.get(key)) for key in fields}) + "\n" for row in rows
        )
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fields), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _clean(row.get(key)) for key in fields})
    return buffer.getvalue()


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write output to {out}: {exc}") from exc


# -- subcommands ---------------------------------------------------------------


def _seed_tree(master: int, *path: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(master), *map(int, path)])


def _random_seed_node(node_ss: np.random.SeedSequence, n: int) -> int:
    return int(np.random.default_rng(node_ss).integers(n))


def cmd_heatmap(cfg: dict) -> tuple[list[str], list[dict]]:
    """Success and chain-length grid over p_r x p_a x p_h on fresh ER draws."""
    fields = [
        "p_r",
        "p_a",
        "p_h",
        "n",
        "mean_degree",
        "diffusion_value",
        "halting_value",
        "regime",
        *_SUMMARY_FIELDS,
    ]
    rows = []
    grid = list(itertools.product(cfg["p_r"], cfg["p_a"], cfg["p_h"]))
    for cell, (p_r, p_a, p_h) in enumerate(grid):
        params = IHCParams(p_r=p_r, p_a=p_a, p_h=p_h)
        results = []
        for rep in range(cfg["reps"]):
            net_ss, node_ss, run_ss = _seed_tree(cfg["seed"], cell, rep).spawn(3)
            network = generate_er(cfg["n"], cfg["mean_degree"], net_ss)
            seed_node = _random_seed_node(node_ss, network.n)
            results.append(run_cascade(network, params, (seed_node,), run_ss))
        report = classify_regime(cfg["mean_degree"], p_r, p_a, p_h)
        rows.append(
            {
                "p_r": p_r,
                "p_a": p_a,
                "p_h": p_h,
                "n": cfg["n"],
                "mean_degree": cfg["mean_degree"],
                "diffusion_value": report.diffusion_value,
                "halting_value": report.halting_value,
                "regime": report.regime.value,
                **summarize(results).as_dict(),
            }
        )
    return fields, rows


def cmd_ba_vs_er(cfg: dict) -> tuple[list[str], list[dict]]:
    """Seed-degree-binned outcomes on preferential-attachment vs ER networks."""
    fields = [
        "topology",
        "n",
        "er_mean_degree",
        "ba_attachment",
        "p_r",
        "p_a",
        "p_h",
        "degree_bin_lo",
        "degree_bin_hi",
        *_SUMMARY_FIELDS,
    ]
    ba_core = cfg["ba_core"] if cfg["ba_core"] is not None else cfg["ba_attachment"]
    rows = []
    for topo_idx, topology in enumerate(("er", "ba")):
        for p_r_idx, p_r in enumerate(cfg["p_r"]):
            params = IHCParams(p_r=p_r, p_a=cfg["p_a"], p_h=cfg["p_h"])
            groups: dict[tuple[int, int], list] = {}
            for rep in range(cfg["reps"]):
                net_ss, node_ss, run_ss = _seed_tree(
                    cfg["seed"], topo_idx, p_r_idx, rep
                ).spawn(3)
                if topology == "er":
                    network = generate_er(cfg["n"], cfg["er_mean_degree"], net_ss)
                else:
                    network = generate_ba(cfg["n"], ba_core, cfg["ba_attachment"], net_ss)
                seed_node = _random_seed_node(node_ss, network.n)
                result = run_cascade(network, params, (seed_node,), run_ss)
                key = degree_bin(int(network.out_degrees[seed_node]))
                groups.setdefault(key, []).append(result)
            for lo, hi in sorted(groups):
                rows.append(
                    {
                        "topology": topology,
                        "n": cfg["n"],
                        "er_mean_degree": cfg["er_mean_degree"] if topology == "er" else None,
                        "ba_attachment": cfg["ba_attachment"] if topology == "ba" else None,
                        "p_r": p_r,
                        "p_a": cfg["p_a"],
                        "p_h": cfg["p_h"],
                        "degree_bin_lo": lo,
                        "degree_bin_hi": hi,
                        **summarize(groups[(lo, hi)]).as_dict(),
                    }
                )
    return fields, rows


def cmd_ihc_vs_oracle(cfg: dict) -> tuple[list[str], list[dict]]:
    """Cascade vs direct-posting comparison on shared skill worlds.

    Each replication draws one skill world and feeds it to both systems:
    the cascade runs on a fresh ER network, the baseline on its reach star.
    The closed-form baseline value rides along as a reference column.
    """
    fields = [
        "system",
        "population",
        "mean_degree",
        "reach_fraction",
        "skill_rate",
        "vacancy_size",
        "p_r",
        "analytic_oracle_success",
        *_SUMMARY_FIELDS,
    ]
    rows = []
    grid = list(itertools.product(cfg["vacancy_sizes"], cfg["p_r"]))
    for cell, (vacancy_size, p_r) in enumerate(grid):
        spec = OracleSpec(
            population=cfg["population"],
            reach_fraction=cfg["reach_fraction"],
            p_r=p_r,
            skill_rate=cfg["skill_rate"],
            vacancy_size=vacancy_size,
        )
        analytic = oracle_success_probability(spec, cfg["mass_threshold"])
        cascade_runs = []
        baseline_runs = []
        for rep in range(cfg["reps"]):
            world_ss, net_ss, node_ss, run_ss, oracle_ss = _seed_tree(
                cfg["seed"], cell, rep
            ).spawn(5)
            world = sample_skill_world(
                cfg["population"], cfg["skill_rate"], vacancy_size, world_ss
            )
            network = generate_er(cfg["population"], cfg["mean_degree"], net_ss)
            seed_node = _random_seed_node(node_ss, network.n)
            cascade_runs.append(
                run_cascade(network, bind_params(world, p_r), (seed_node,), run_ss)
            )
            baseline_runs.append(
                simulate_oracle(world, cfg["reach_fraction"], p_r, oracle_ss)
            )
        for system, results in (("ihc", cascade_runs), ("oracle", baseline_runs)):
            rows.append(
                {
                    "system": system,
                    "population": cfg["population"],
                    "mean_degree": cfg["mean_degree"] if system == "ihc" else None,
                    "reach_fraction": cfg["reach_fraction"] if system == "oracle" else None,
                    "skill_rate": cfg["skill_rate"],
                    "vacancy_size": vacancy_size,
                    "p_r": p_r,
                    "analytic_oracle_success": analytic,
                    **summarize(results).as_dict(),
                }
            )
    return fields, rows


def cmd_oracle_analytic(cfg: dict) -> tuple[list[str], list[dict]]:
    """Closed-form baseline success probabilities with truncation diagnostics."""
    fields = [
        "population",
        "reach_fraction",
        "p_r",
        "skill_rate",
        "vacancy_size",
        "mass_threshold",
        "p_qualified",
        "l_min",
        "l_max",
        "k_max",
        "success_probability",
    ]
    rows = []
    for vacancy_size, p_r in itertools.product(cfg["vacancy_sizes"], cfg["p_r"]):
        spec = OracleSpec(
            population=cfg["population"],
            reach_fraction=cfg["reach_fraction"],
            p_r=p_r,
            skill_rate=cfg["skill_rate"],
            vacancy_size=vacancy_size,
        )
        p_qualified = p_lambda(
            cfg["skill_rate"], vacancy_size, cfg["population"], cfg["mass_threshold"]
        )
        bounds = truncation_bounds(
            cfg["population"], p_qualified, cfg["skill_rate"], cfg["mass_threshold"]
        )
        rows.append(
            {
                "population": cfg["population"],
                "reach_fraction": cfg["reach_fraction"],
                "p_r": p_r,
                "skill_rate": cfg["skill_rate"],
                "vacancy_size": vacancy_size,
                "mass_threshold": cfg["mass_threshold"],
                "p_qualified": p_qualified,
                "l_min": bounds.l_min,
                "l_max": bounds.l_max,
                "k_max": bounds.k_max,
                "success_probability": oracle_success_probability(spec, cfg["mass_threshold"]),
            }
        )
    return fields, rows


def cmd_empirical(cfg: dict) -> tuple[list[str], list[dict]]:
    """Both systems on one loaded network, plus its degree histogram.

    Emits a combined table: ``record=summary`` rows carry per-system batch
    statistics, ``record=degree`` rows the out-degree histogram.
    """
    fields = [
        "record",
        "system",
        "n",
        "directed",
        "mean_out_degree",
        "p_r",
        "reach_fraction",
        "skill_rate",
        "vacancy_size",
        *_SUMMARY_FIELDS,
        "degree",
        "count",
    ]
    network = load_edge_list(cfg["edge_list"], directed=cfg["directed"])
    stats = degree_stats(network)
    base = {
        "n": network.n,
        "directed": int(cfg["directed"]),
        "mean_out_degree": stats.mean_out_degree,
        "p_r": cfg["p_r"],
        "reach_fraction": cfg["reach_fraction"],
        "skill_rate": cfg["skill_rate"],
        "vacancy_size": cfg["vacancy_size"],
    }
    cascade_runs = []
    baseline_runs = []
    for rep in range(cfg["reps"]):
        world_ss, node_ss, run_ss, oracle_ss = _seed_tree(cfg["seed"], rep).spawn(4)
        world = sample_skill_world(
            network.n, cfg["skill_rate"], cfg["vacancy_size"], world_ss
        )
        seed_node = _random_seed_node(node_ss, network.n)
        cascade_runs.append(
            run_cascade(network, bind_params(world, cfg["p_r"]), (seed_node,), run_ss)
        )
        baseline_runs.append(
            simulate_oracle(world, cfg["reach_fraction"], cfg["p_r"], oracle_ss)
        )
    rows = [
        {"record": "summary", "system": "ihc", **base, **summarize(cascade_runs).as_dict()},
        {"record": "summary", "system": "oracle", **base, **summarize(baseline_runs).as_dict()},
    ]
    for degree in sorted(stats.histogram):
        rows.append(
            {"record": "degree", **base, "degree": degree, "count": stats.histogram[degree]}
        )
    return fields, rows


def cmd_payout(cfg: dict) -> tuple[list[str], list[dict]]:
    """Reward split for one successful chain; position 1 is the hired agent."""
    fields = ["record", "chain_length", "budget", "position", "amount_exact", "amount"]
    schedule = compute_payouts(cfg["chain_length"], cfg["budget"])
    base = {"chain_length": cfg["chain_length"], "budget": str(schedule.budget)}
    rows: list[dict] = [
        {
            "record": "position",
            **base,
            "position": i + 1,
            "amount_exact": str(amount),
            "amount": float(amount),
        }
        for i, amount in enumerate(schedule.payouts)
    ]
    rows.append(
        {
            "record": "surplus",
            **base,
            "position": None,
            "amount_exact": str(schedule.surplus),
            "amount": float(schedule.surplus),
        }
    )
    return fields, rows


_COMMANDS: dict[str, Callable[[dict], tuple[list[str], list[dict]]]] = {
    "heatmap": cmd_heatmap,
    "ba-vs-er": cmd_ba_vs_er,
    "ihc-vs-oracle": cmd_ihc_vs_oracle,
    "oracle-analytic": cmd_oracle_analytic,
    "empirical": cmd_empirical,
    "payout": cmd_payout,
}


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halting-cascade",
        description="Parameter-sweep experiments for the halting-cascade model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, command: str, stochastic: bool) -> None:
        p.add_argument("--config", metavar="PATH", help="JSON file with experiment settings")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        p.add_argument(
            "--format",
            choices=("csv", "jsonl"),
            default="csv",
            help="output encoding (default: csv)",
        )
        if stochastic:
            p.add_argument(
                "--seed",
                type=int,
                help="master seed; required here or in the config file",
            )
            p.add_argument("--reps", type=int, help="replications per parameter cell")
            p.add_argument(
                "--preset",
                choices=("desk", "paper"),
                help="scale preset: desk (default sizes) or paper (full-size runs)",
            )

    p = sub.add_parser(
        "heatmap",
        help="success/chain-length grid over p_r x p_a x p_h on fresh ER networks",
    )
    add_common(p, "heatmap", stochastic=True)

    p = sub.add_parser(
        "ba-vs-er",
        help="seed-degree-binned outcomes on BA vs ER topologies",
    )
    add_common(p, "ba-vs-er", stochastic=True)

    p = sub.add_parser(
        "ihc-vs-oracle",
        help="cascade vs direct-posting baseline on shared skill worlds",
    )
    add_common(p, "ihc-vs-oracle", stochastic=True)

    p = sub.add_parser(
        "oracle-analytic",
        help="closed-form baseline success probabilities (no simulation)",
    )
    add_common(p, "oracle-analytic", stochastic=False)

    p = sub.add_parser("empirical", help="both systems on a network loaded from a file")
    p.add_argument("edge_list", nargs="?", help="edge list file, two integer columns per line")
    p.add_argument(
        "--directed",
        action="store_true",
        default=None,
        help="treat edges as one-way arcs (default: undirected)",
    )
    add_common(p, "empirical", stochastic=True)

    p = sub.add_parser("payout", help="geometric reward split for a successful chain")
    p.add_argument(
        "--chain-length",
        dest="chain_length",
        type=int,
        help="number of agents on the successful chain",
    )
    p.add_argument("--budget", help="total reward budget (number or fraction string)")
    add_common(p, "payout", stochastic=False)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args.command, args)
        fields, rows = _COMMANDS[args.command](cfg)
        _write_output(_render(fields, rows, args.format), cfg["out"])
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EdgeListError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK
