"""Batch command-line front end.

Subcommands:
    pathloss   distance/loss CSV for a scenario's propagation model
    coverage   bitrate-versus-range CSV for one technology
    sweep      per-MCS station-count bounds with the optimum flagged
    plan       full Monte-Carlo planning campaign (report, CSVs, SVG map)

Scenario selection: `--env suburban|rural` picks the bundled study areas;
`--scenario PATH` loads a scenario file instead.  `--tech` overrides the
scenario's technology.  Worker processes for campaigns come from the
TVWSPLAN_WORKERS environment variable (default 1).

On failure a machine-readable JSON error record goes to stderr and the exit
status is non-zero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .link_budget import load_technology, max_allowable_path_loss_db
from .planner import PlannerConfig, grow_site_set
from .power_energy import load_power_params
from .reporting import (assignment_csv, build_report, coverage_csv,
                        deployment_csv, pathloss_csv, power_csv, raster_csv,
                        report_to_json, runs_csv, svg_map, sweep_csv,
                        verify_report, _base_provenance)
from .scenario import (ScenarioError, bundled_scenario, generate_population,
                       load_scenario, population_to_csv)
from .sizing import sweep_mcs

ENV_SCENARIOS = {"suburban": "ghent_suburban", "rural": "boyeros_rural"}


class CliError(Exception):
    def __init__(self, kind: str, message: str, **detail):
        self.record = {"error": {"type": kind, "message": message, **detail}}
        super().__init__(message)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--scenario", help="scenario file path (overrides --env)")
    p.add_argument("--env", choices=sorted(ENV_SCENARIOS),
                   help="bundled scenario shorthand")
    p.add_argument("--tech", help="technology name (default: scenario file)")
    p.add_argument("--mimo", choices=["siso", "4x4"], default="siso")
    p.add_argument("--out", default=".", help="output directory (default: cwd)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tvwsplan", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pathloss", help="emit d_km,pl_db CSV")
    _add_common(p)
    p.add_argument("--dmin", type=float, default=0.1)
    p.add_argument("--dmax", type=float, default=20.0)
    p.add_argument("--step", type=float, default=0.1)

    p = sub.add_parser("coverage", help="emit mcs,bitrate_mbps,range_km CSV")
    _add_common(p)

    p = sub.add_parser("sweep", help="emit per-MCS sizing CSV")
    _add_common(p)

    p = sub.add_parser("plan", help="run a planning campaign")
    _add_common(p)
    p.add_argument("--mcs", help="fixed planning MCS label (default: sweep optimum)")
    p.add_argument("--runs", type=int, help="Monte-Carlo runs (default: 40)")
    p.add_argument("--seed", type=int, help="base seed (default: scenario file)")
    return ap


def _load_scenario(args):
    if args.scenario:
        try:
            return load_scenario(args.scenario)
        except FileNotFoundError as e:
            raise CliError("missing_file", str(e), path=str(args.scenario)) from e
        except ScenarioError as e:
            raise CliError("invalid_scenario", "scenario failed validation",
                           fields=e.errors) from e
    if args.env:
        return bundled_scenario(ENV_SCENARIOS[args.env])
    raise CliError("usage", "either --scenario or --env is required")


def _load_profile(scenario, args):
    name = args.tech or scenario.technology
    mimo = args.mimo == "4x4"
    try:
        return load_technology(name, scenario.environment, mimo=mimo)
    except FileNotFoundError as e:
        raise CliError("missing_file", str(e), technology=name) from e
    except (KeyError, ValueError) as e:
        raise CliError("invalid_technology", str(e), technology=name) from e


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _power_params(profile):
    return load_power_params("tvws" if profile.name != "lte" else "macro")


def cmd_pathloss(args) -> list:
    scenario = _load_scenario(args)
    profile = _load_profile(scenario, args)
    model = scenario.model_for(profile)
    prov = _base_provenance(scenario, profile,
                            PlannerConfig(runs=1, base_seed=scenario.base_seed),
                            model)
    path = _outdir(args) / "pathloss.csv"
    path.write_text(pathloss_csv(model, prov, args.dmin, args.dmax, args.step))
    return [path]


def cmd_coverage(args) -> list:
    scenario = _load_scenario(args)
    profile = _load_profile(scenario, args)
    model = scenario.model_for(profile)
    prov = _base_provenance(scenario, profile,
                            PlannerConfig(runs=1, base_seed=scenario.base_seed),
                            model)
    path = _outdir(args) / "coverage.csv"
    path.write_text(coverage_csv(profile, scenario.margins, model, prov))
    return [path]


def cmd_sweep(args) -> list:
    scenario = _load_scenario(args)
    profile = _load_profile(scenario, args)
    model = scenario.model_for(profile)
    rows = sweep_mcs(profile, scenario.margins, model,
                     scenario.region.area_km2,
                     scenario.population.expected_demand_mbps)
    prov = _base_provenance(scenario, profile,
                            PlannerConfig(runs=1, base_seed=scenario.base_seed),
                            model)
    path = _outdir(args) / "sweep.csv"
    path.write_text(sweep_csv(rows, prov))
    return [path]


def cmd_plan(args) -> list:
    scenario = _load_scenario(args)
    profile = _load_profile(scenario, args)
    model = scenario.model_for(profile)
    power_params = _power_params(profile)
    if args.mcs:
        try:
            mcs = profile.mcs(args.mcs)
        except KeyError as e:
            raise CliError("invalid_mcs", str(e),
                           available=[m.label for m in profile.mcs_table]) from e
        if not mcs.deployable:
            raise CliError("invalid_mcs",
                           f"MCS {args.mcs!r} is not deployable on "
                           f"{profile.name} hardware")
    config = PlannerConfig(
        mcs_mode="fixed",
        mcs_label=args.mcs or "",
        runs=args.runs if args.runs else 40,
        base_seed=args.seed if args.seed is not None else scenario.base_seed,
        mimo=args.mimo == "4x4")

    sites = None
    if scenario.site_policy.mode == "auto_grow":
        sites, _ = grow_site_set(scenario, profile, scenario.margins, model,
                                 power_params, config)

    report, result = build_report(scenario, profile, scenario.margins, model,
                                  power_params, config, sites=sites)
    bad = verify_report(report)
    if bad:  # internal consistency guard; never expected to trip
        raise CliError("internal", "report failed round-trip verification",
                       problems=bad)

    out = _outdir(args)
    first = result.outcomes[0]
    mcs = profile.mcs(report.planning_mcs)
    pl_max = max_allowable_path_loss_db(profile, scenario.margins, mcs)
    prov = report.provenance

    first_pop = generate_population(scenario.region, scenario.population,
                                    first.seed)
    artifacts = {
        "report.json": report_to_json(report),
        "runs.csv": runs_csv(report),
        "population.csv": population_to_csv(first_pop),
        "deployment.csv": deployment_csv(first, result.sites, prov),
        "assignments.csv": assignment_csv(first, scenario, result.sites, model, prov),
        "power.csv": power_csv(first, profile, prov),
        "coverage_raster.csv": raster_csv(first, scenario, result.sites, model,
                                          pl_max, prov),
        "map.svg": svg_map(first, scenario, result.sites,
                           title=f"{scenario.name} / {profile.name} / "
                                 f"{report.planning_mcs}", prov=prov),
    }
    paths = []
    for name, text in artifacts.items():
        p = out / name
        p.write_text(text)
        paths.append(p)
    return paths


COMMANDS = {
    "pathloss": cmd_pathloss,
    "coverage": cmd_coverage,
    "sweep": cmd_sweep,
    "plan": cmd_plan,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        paths = COMMANDS[args.command](args)
    except CliError as e:
        print(json.dumps(e.record, sort_keys=True), file=sys.stderr)
        return 2
    except Exception as e:  # unexpected: still machine readable
        record = {"error": {"type": "internal", "message": str(e),
                            "exception": type(e).__name__}}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return 3
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
