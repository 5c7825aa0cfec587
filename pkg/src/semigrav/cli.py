"""Command-line scenario runner.

    semigrav run <scenario> [--config FILE] [--seed N] [--out PATH]
                            [--format csv|json] [--trials N]
    semigrav scan <scenario> --param V|V0 --values a,b,c
                            [--config FILE] [--out PATH] [--format csv|json]

Exit codes: 0 when every scenario flag passes, 1 when any flag fails,
2 for configuration or usage errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .consistency import residual, scaling_study
from .fock import create, new_vacuum
from .modes import minkowski_basis
from .report import RunReport, Table, emit
from .scenarios import (
    SCENARIO_NAMES,
    ScenarioConfigError,
    _eds_residual_at,
    default_config,
    run_scenario,
    validate_config,
)
from .spacetime import Event

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semigrav",
        description="scenario runner for the semiclassical self-consistency laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a named scenario end to end")
    run_p.add_argument("scenario", choices=SCENARIO_NAMES)
    run_p.add_argument("--config", default=None, help="JSON config (default: packaged)")
    run_p.add_argument("--seed", type=int, default=None, help="override the config seed")
    run_p.add_argument("--out", default=None, help="write the report here instead of stdout")
    run_p.add_argument("--format", choices=("csv", "json"), default="json")
    run_p.add_argument("--trials", type=int, default=None,
                       help="override the trial count (projection scenarios)")

    scan_p = sub.add_parser("scan", help="scaling study over a volume parameter")
    scan_p.add_argument("scenario", choices=("minkowski_particle", "eds_cosmology"))
    scan_p.add_argument("--param", required=True, choices=("V", "V0"))
    scan_p.add_argument("--values", required=True,
                        help="comma-separated increasing parameter values")
    scan_p.add_argument("--config", default=None)
    scan_p.add_argument("--out", default=None)
    scan_p.add_argument("--format", choices=("csv", "json"), default="json")
    return parser


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioConfigError(f"cannot read config file: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioConfigError(f"config is not valid JSON: {exc}") from None


def _parse_values(raw: str) -> list[float]:
    try:
        values = [float(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise ScenarioConfigError("field 'values': must be comma-separated numbers") from None
    if len(values) < 3:
        raise ScenarioConfigError("field 'values': scaling needs at least 3 values")
    return values


def _box_volume_observable(cfg: dict):
    """Residual of |k> at a fixed event while the box volume grows.

    The physical wavevector is pinned to the config's mode at the config's
    box size; each volume re-labels the mode so k stays fixed.
    """
    if cfg["dimension"] != 1:
        raise ScenarioConfigError(
            "field 'dimension': scanning over V requires dimension 1")
    n0 = cfg["mode_label"][0]
    k_ref = 2.0 * math.pi * n0 / cfg["box_side"]

    def observable(volume: float) -> float:
        L = volume  # d = 1: volume is the box side
        n = int(round(k_ref * L / (2.0 * math.pi)))
        if n == 0:
            raise ScenarioConfigError(
                "field 'values': volume too small to hold the reference wavevector")
        basis = minkowski_basis(L, 1, cfg["mass"], abs(n))
        state = create(new_vacuum(basis), basis.mode_index((n,)))
        event = Event(0.0, (0.0,))
        return residual(basis.backend, state, basis, [event]).global_max

    return observable


def _run_command(args) -> int:
    config = _load_config(args.config) if args.config else None
    report = run_scenario(args.scenario, config=config, seed=args.seed, trials=args.trials)
    text = emit(report, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0 if report.passed else 1


def _scan_command(args) -> int:
    base = _load_config(args.config) if args.config else default_config(args.scenario)
    cfg = validate_config(args.scenario, base)
    values = _parse_values(args.values)

    if args.scenario == "minkowski_particle":
        if args.param != "V":
            raise ScenarioConfigError("field 'param': minkowski_particle scans over V")
        observable = _box_volume_observable(cfg)
    else:
        if args.param != "V0":
            raise ScenarioConfigError("field 'param': eds_cosmology scans over V0")
        # self-consistent mass at each volume: m = V0 / 6 pi
        observable = lambda v: _eds_residual_at(v / (6.0 * math.pi), v, (1.0,))  # noqa: E731

    try:
        study = scaling_study(observable, values, parameter=args.param)
    except ValueError as exc:
        raise ScenarioConfigError(f"field 'values': {exc}") from None

    report = RunReport(scenario=f"scan_{args.scenario}", seed=cfg["seed"])
    report.add_table(Table.build("scaling", (args.param, "residual"), study.rows()))
    report.add_table(Table.build(
        "scaling_slope", ("slope", "status"),
        [(study.slope if study.slope is not None else float("nan"), study.status)]))
    report.flags["slope_defined"] = study.status == "ok"
    text = emit(report, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _run_command(args)
        return _scan_command(args)
    except ScenarioConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
