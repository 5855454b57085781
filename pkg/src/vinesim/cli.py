"""Command-line front end: ``vinesim {scan,treat,run,yield-survey}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import csvio
from .config import RunConfig, load_config
from .errors import VinesimError
from .experiment import percent_difference, run_experiment, summarize_to_tables, trial_seed
from .field import (PRESETS, Spot, extract_low_yield_zones, generate_spots, load_yield_map,
                    map_yield_classes)
from .phases import (SurveyMode, coverage_legs, route_legs, simulate_scan, simulate_treatment,
                     simulate_yield_survey, targeted_route)
from .svg import render_path_svg

log = logging.getLogger("vinesim")

PATH_LABELS = {
    "human": "Path by Human",
    "immersive": "Path by Immersive Robot",
    "non_immersive": "Path by Non-immersive Robot",
}


def _label(agent: str) -> str:
    return PATH_LABELS.get(agent, f"Path by {agent}")


def _spots(cfg: RunConfig, n: int, recorded: Path | None = None) -> list[Spot]:
    if recorded is not None:
        return csvio.read_spots_csv(recorded, cfg.field)
    return generate_spots(cfg.field, n, cfg.p_difficult, trial_seed(cfg.master_seed, n, 0))


def cmd_scan(cfg: RunConfig, agent: str = "human", n_spots: int = 30) -> dict[str, Path]:
    profile = cfg.profile(agent)
    spots = _spots(cfg, n_spots)
    result = simulate_scan(cfg.field, profile, spots)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "phase": out / f"scan_{agent}.csv",
        "spots": out / "recorded_spots.csv",
        "svg": out / f"scan_{agent}.svg",
    }
    csvio.write_phase_csv(files["phase"], [csvio.phase_row(agent, "detection", result)])
    csvio.write_spots_csv(files["spots"], result.visited_spots)
    files["svg"].write_text(render_path_svg(
        cfg.field, result.path, [s.location for s in spots],
        title=f"Detection scan: {agent}, {len(spots)} spots", path_label=_label(agent)))
    log.info("scan %s: %.1f s", agent, result.total_time)
    return files


def cmd_treat(cfg: RunConfig, agent: str = "immersive", n_spots: int = 20,
              recorded: Path | None = None) -> dict[str, Path]:
    profile = cfg.profile(agent)
    spots = _spots(cfg, n_spots, recorded)
    result = simulate_treatment(cfg.field, profile, spots, cfg.planner)
    if profile.has_memory:
        legs = route_legs(cfg.field, profile, targeted_route(cfg.field, spots, cfg.planner),
                          spots) if spots else []
    else:
        legs = coverage_legs(cfg.field, profile, result)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "route": out / f"route_{agent}.csv",
        "phase": out / f"treat_{agent}.csv",
        "svg": out / f"treat_{agent}.svg",
    }
    csvio.write_route_csv(files["route"], legs, profile.row_transition_time, profile.speed)
    csvio.write_phase_csv(files["phase"], [csvio.phase_row(agent, "treatment", result)])
    files["svg"].write_text(render_path_svg(
        cfg.field, result.path, [s.location for s in spots],
        title=f"Treatment: {agent}, {len(spots)} spots", path_label=_label(agent)))
    log.info("treat %s: %.1f s", agent, result.total_time)
    return files


def run_yield_comparison(cfg: RunConfig, yield_map: Path):
    """Zones plus (comparison records, full-coverage result, targeted result)."""
    ys = cfg.yield_
    ymap = load_yield_map(yield_map, ys.cell_size_m, ys.grid_origin_m)
    if ys.class_values is not None:
        ymap = map_yield_classes(ymap, dict(ys.class_values))
    zones = extract_low_yield_zones(ymap, ys.threshold, cfg.field, ys.connectivity)
    full = simulate_yield_survey(cfg.field, cfg.profile(ys.full_agent), zones,
                                 SurveyMode.FULL_COVERAGE, cfg.planner)
    targeted = simulate_yield_survey(cfg.field, cfg.profile(ys.targeted_agent), zones,
                                     SurveyMode.TARGETED, cfg.planner)
    records = []
    for mode, agent, res in (("full_coverage", ys.full_agent, full),
                             ("targeted", ys.targeted_agent, targeted)):
        records.append({
            "mode": mode, "agent": agent, "zone_count": len(zones), "distance_m": res.distance,
            "travel_s": res.travel_time, "service_s": res.service_time,
            "transition_s": res.transition_time, "total_s": res.total_time,
            "pct_diff_vs_full_coverage": percent_difference(res.total_time, full.total_time),
        })
    return zones, records, full, targeted


def cmd_yield_survey(cfg: RunConfig, yield_map: Path) -> dict[str, Path]:
    zones, records, full, targeted = run_yield_comparison(cfg, yield_map)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "comparison": out / "yield_comparison.csv",
        "full_svg": out / "yield_full_coverage.svg",
        "targeted_svg": out / "yield_targeted.svg",
    }
    csvio.write_comparison_csv(files["comparison"], records)
    markers = [z.center for z in zones]
    ys = cfg.yield_
    files["full_svg"].write_text(render_path_svg(
        cfg.field, full.path, markers, title=f"Yield survey, full coverage: {ys.full_agent}",
        path_label=_label(ys.full_agent), marker_label="Low-Yield Zones"))
    files["targeted_svg"].write_text(render_path_svg(
        cfg.field, targeted.path, markers, title=f"Yield survey, targeted: {ys.targeted_agent}",
        path_label=_label(ys.targeted_agent), marker_label="Low-Yield Zones"))
    log.info("yield survey: %d zones, full %.1f s, targeted %.1f s",
             len(zones), full.total_time, targeted.total_time)
    return files


def cmd_run(cfg: RunConfig, yield_map: Path | None = None) -> dict[str, Path]:
    stats = run_experiment(cfg.scenario())
    survey = run_yield_comparison(cfg, yield_map)[1] if yield_map is not None else ()
    tables = summarize_to_tables(stats, survey)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    files = {"stats": out / "stats.csv", "tables": out / "tables.txt"}
    csvio.write_stats_csv(files["stats"], stats.rows)
    text = []
    for name, table in tables.items():
        path = out / f"table_{name}.csv"
        csvio.write_table_csv(path, table)
        files[f"table_{name}"] = path
        text.append(csvio.render_table_text(table))
    files["tables"].write_text("\n".join(text))
    return files


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML config file")
    common.add_argument("--seed", type=int, help="master seed (non-negative integer)")
    common.add_argument("--out", type=Path, help="output directory (default: out)")
    common.add_argument("--preset", choices=sorted(PRESETS), help="field preset")
    common.add_argument("--planner", choices=["nn", "nn2opt", "exact"])
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="vinesim",
                                     description="Vineyard scan/treatment timing simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", parents=[common], help="one seeded detection scan")
    p.add_argument("--agent", default="human")
    p.add_argument("--spots", type=int, default=30)

    p = sub.add_parser("treat", parents=[common], help="one seeded treatment round")
    p.add_argument("--agent", default="immersive")
    p.add_argument("--spots", type=int, default=20)
    p.add_argument("--recorded", type=Path, help="recorded-spots CSV (row,x_m,side,difficulty)")

    p = sub.add_parser("run", parents=[common], help="full Monte Carlo experiment")
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--yield-map", type=Path, help="also fill the yield-survey table")

    p = sub.add_parser("yield-survey", parents=[common], help="yield-map survey comparison")
    p.add_argument("--yield-map", type=Path, required=True)
    p.add_argument("--threshold", type=float)
    p.add_argument("--cell-size", type=float)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, preset=args.preset, seed=args.seed, out=args.out,
                          planner=args.planner,
                          trials=getattr(args, "trials", None),
                          workers=getattr(args, "workers", None),
                          yield_threshold=getattr(args, "threshold", None),
                          yield_cell_size_m=getattr(args, "cell_size", None))
        if args.command == "scan":
            files = cmd_scan(cfg, args.agent, args.spots)
        elif args.command == "treat":
            files = cmd_treat(cfg, args.agent, args.spots, args.recorded)
        elif args.command == "run":
            files = cmd_run(cfg, args.yield_map)
        else:
            files = cmd_yield_survey(cfg, args.yield_map)
    except (VinesimError, ValueError, OSError) as exc:
        print(f"vinesim: error: {exc}", file=sys.stderr)
        return 2
    for path in files.values():
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
