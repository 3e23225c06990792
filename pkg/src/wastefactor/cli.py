"""Command-line front end.

Subcommands: link, table1, sweep-bw, sweep-pa, netsim, chain.  Every
subcommand accepts --preset/--scenario/--set/--seed/--out; --set applies
`section.key=value` overrides with the same unit syntax as scenario files.
Exit codes: 0 success, 1 usage error, 2 scenario/chain parse error,
3 evaluation failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Callable, Iterable, Sequence, TextIO

from .cascade import (
    cascade_gain,
    cascade_waste_factor,
    consumed_power,
)
from .linkbudget import dbm_to_watts, linear_to_db
from .netsim import (
    DEFAULT_RADII,
    NetworkScenario,
    network_csv_rows,
    optimal_radius,
    sweep_radius,
)
from .scenario_io import (
    ScenarioParseError,
    apply_overrides,
    load_scenario_file,
    parse_chain,
    resolve_preset,
)
from .sweeps import (
    SweepSpec,
    curve_csv_rows,
    find_crossover,
    min_matching_efficiency,
    snr_matched_sample,
    sweep,
)
from .transceiver import LinkReport, LinkScenario, evaluate_link

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_EVAL = 3

_TABLE_CSV_HEADER = (
    "band,direction,environment,waste_figure_db,cascade_gain_db,path_loss_db,"
    "eirp_dbm,p_received_dbw,snr_db,rate_gbps,p_consumed_w,cef_gbpj"
)

_LINK_CSV_HEADER = (
    "waste_figure_db,cascade_gain_db,path_loss_db,eirp_dbm,p_received_dbw,"
    "snr_db,rate_gbps,p_consumed_w,cef_gbpj"
)


class _ParseFailure(Exception):
    """Input could not be parsed; maps to exit code 2."""


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def _emit(rows: Iterable[str], out_path: str | None, stream: TextIO) -> None:
    text = "\n".join(rows) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        stream.write(text)


def _load_scenario(args, default_preset: str, network: bool = False):
    """Resolve --scenario/--preset/--set into a scenario; parse errors only."""
    try:
        if args.scenario:
            scenario = load_scenario_file(args.scenario)
        else:
            scenario = resolve_preset(args.preset or default_preset)
        if network and isinstance(scenario, LinkScenario):
            scenario = NetworkScenario(
                band=scenario.band, bs=scenario.bs, ue=scenario.ue, cell_radius_m=65.0
            )
        if not network and isinstance(scenario, NetworkScenario):
            raise _ParseFailure("this command needs a link scenario, not a network one")
        if args.overrides:
            scenario = apply_overrides(scenario, args.overrides)
    except (ScenarioParseError, OSError, ValueError) as exc:
        raise _ParseFailure(str(exc)) from exc
    return scenario


def _direction(word: str) -> str:
    return {"ul": "uplink", "dl": "downlink"}.get(word, word)


def _link_report_rows(report: LinkReport) -> list[str]:
    return [
        _LINK_CSV_HEADER,
        ",".join(
            _fmt(v)
            for v in (
                report.waste_figure_db,
                report.cascade_gain_db,
                report.path_loss_db,
                report.eirp_dbm,
                report.p_received_dbw,
                report.snr_db,
                report.rate_bps / 1e9,
                report.p_consumed_w,
                report.cef_bpj / 1e9,
            )
        ),
    ]


def cmd_link(args, stdout: TextIO) -> int:
    scenario = _load_scenario(args, default_preset="mmwave-28")
    report = evaluate_link(scenario)
    stdout.write(
        f"{scenario.band.label} {scenario.direction} {scenario.environment}"
        f" at {scenario.distance_m:g} m, tx {scenario.tx_power_dbm:g} dBm\n"
        f"  waste figure     {report.waste_figure_db:10.3f} dB\n"
        f"  cascade gain     {report.cascade_gain_db:10.3f} dB\n"
        f"  path loss        {report.path_loss_db:10.3f} dB\n"
        f"  EIRP             {report.eirp_dbm:10.3f} dBm\n"
        f"  received power   {report.p_received_dbw:10.3f} dBW\n"
        f"  SNR              {report.snr_db:10.3f} dB\n"
        f"  data rate        {report.rate_bps / 1e9:10.4f} Gb/s\n"
        f"  consumed power   {report.p_consumed_w:10.4f} W\n"
        f"  CEF              {report.cef_bpj / 1e9:10.4f} Gb/J\n"
    )
    if args.out:
        _emit(_link_report_rows(report), args.out, stdout)
    return EXIT_OK


def _table_cells(args) -> list[tuple[str, str, str, LinkReport]]:
    if args.scenario or (args.preset and args.preset != "both"):
        bases = [_load_scenario(args, default_preset="mmwave-28")]
    else:
        saved = args.preset
        bases = []
        for name in ("mmwave-28", "subthz-140"):
            args.preset = name
            bases.append(_load_scenario(args, default_preset=name))
        args.preset = saved
    cells = []
    for base in bases:
        for direction in ("uplink", "downlink"):
            for environment in ("los", "nlos"):
                scenario = replace(base, direction=direction, environment=environment)
                cells.append(
                    (base.band.label, direction, environment, evaluate_link(scenario))
                )
    return cells


_TABLE_METRICS: tuple[tuple[str, Callable[[LinkReport], float], str], ...] = (
    ("waste figure", lambda r: r.waste_figure_db, "dB"),
    ("cascade gain", lambda r: r.cascade_gain_db, "dB"),
    ("path loss", lambda r: r.path_loss_db, "dB"),
    ("EIRP", lambda r: r.eirp_dbm, "dBm"),
    ("received power", lambda r: r.p_received_dbw, "dBW"),
    ("SNR", lambda r: r.snr_db, "dB"),
    ("data rate", lambda r: r.rate_bps / 1e9, "Gb/s"),
    ("consumed power", lambda r: r.p_consumed_w, "W"),
    ("CEF", lambda r: r.cef_bpj / 1e9, "Gb/J"),
)


def _render_table(cells: list[tuple[str, str, str, LinkReport]]) -> list[str]:
    short = {"uplink": "UL", "downlink": "DL", "los": "LoS", "nlos": "NLoS"}
    headers = ["metric", "unit"] + [
        f"{band} {short[d]} {short[e]}" for band, d, e, _ in cells
    ]
    rows = [headers]
    for label, getter, unit in _TABLE_METRICS:
        rows.append([label, unit] + [f"{getter(r):.3f}" for _, _, _, r in cells])
    widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
    lines = []
    for index, row in enumerate(rows):
        cols = [row[0].ljust(widths[0]), row[1].ljust(widths[1])]
        cols += [cell.rjust(widths[i + 2]) for i, cell in enumerate(row[2:])]
        lines.append("  ".join(cols).rstrip())
        if index == 0:
            lines.append("  ".join("-" * w for w in widths))
    return lines


def cmd_table1(args, stdout: TextIO) -> int:
    cells = _table_cells(args)
    for line in _render_table(cells):
        stdout.write(line + "\n")
    csv_rows = [_TABLE_CSV_HEADER]
    for band, direction, environment, r in cells:
        csv_rows.append(
            ",".join(
                [band, direction, environment]
                + [
                    _fmt(v)
                    for v in (
                        r.waste_figure_db,
                        r.cascade_gain_db,
                        r.path_loss_db,
                        r.eirp_dbm,
                        r.p_received_dbw,
                        r.snr_db,
                        r.rate_bps / 1e9,
                        r.p_consumed_w,
                        r.cef_bpj / 1e9,
                    )
                ]
            )
        )
    if args.out:
        _emit(csv_rows, args.out, stdout)
    else:
        stdout.write("\n")
        _emit(csv_rows, None, stdout)
    return EXIT_OK


def cmd_sweep_bw(args, stdout: TextIO) -> int:
    base = _load_scenario(args, default_preset="subthz-140")
    base = replace(base, direction=_direction(args.direction))
    spec = SweepSpec(
        scenario=base,
        parameter="bandwidth",
        lo=args.lo_ghz * 1e9,
        hi=args.hi_ghz * 1e9,
        points=args.points,
        snr_target_db=args.snr,
    )
    curve = sweep(spec)

    ref_args = argparse.Namespace(
        scenario=None, preset=args.reference_preset, overrides=args.overrides
    )
    reference = _load_scenario(ref_args, default_preset="mmwave-28")
    reference = replace(reference, direction=_direction(args.direction))
    ref_sample = snr_matched_sample(reference, snr_target_db=args.snr)

    rows = list(curve_csv_rows(curve))
    crossover = find_crossover(curve, ref_sample.cef_bpj)
    stdout.write(
        f"reference {reference.band.label} {reference.direction}:"
        f" cef {_fmt(ref_sample.cef_bpj / 1e9)} Gb/J"
        f" at {_fmt(reference.band.bandwidth_hz / 1e9)} GHz\n"
    )
    if crossover.found:
        rows.append(
            f"# crossover bandwidth_hz={_fmt(crossover.x)}"
            f" cef_gbpj={_fmt(crossover.cef_bpj / 1e9)}"
            f" reference_cef_gbpj={_fmt(ref_sample.cef_bpj / 1e9)}"
        )
        stdout.write(
            f"crossover: {base.band.label} {base.direction} matches the reference"
            f" at {_fmt(crossover.x / 1e9)} GHz\n"
        )
    else:
        stdout.write("crossover: none within the swept range\n")
    _emit(rows, args.out, stdout)
    return EXIT_OK


def cmd_sweep_pa(args, stdout: TextIO) -> int:
    base = _load_scenario(args, default_preset="subthz-140")
    base = replace(base, direction=_direction(args.direction))
    spec = SweepSpec(
        scenario=base,
        parameter="pa_efficiency",
        lo=args.lo,
        hi=args.hi,
        points=args.points,
        snr_target_db=args.snr,
    )
    curve = sweep(spec)
    rows = list(curve_csv_rows(curve))
    if args.target_cef is not None:
        match = min_matching_efficiency(args.target_cef * 1e9, base)
        if match.found:
            stdout.write(
                f"matching efficiency: {match.efficiency:.5f}"
                f" reaches {_fmt(match.cef_bpj / 1e9)} Gb/J\n"
            )
            rows.append(
                f"# matching_efficiency={match.efficiency:.10g}"
                f" target_cef_gbpj={_fmt(args.target_cef)}"
            )
        else:
            stdout.write("matching efficiency: target unreachable at eta <= 1\n")
    _emit(rows, args.out, stdout)
    return EXIT_OK


def cmd_netsim(args, stdout: TextIO) -> int:
    scenario = _load_scenario(args, default_preset="subthz-140", network=True)
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.drops is not None:
        updates["drops"] = args.drops
    if args.no_interference:
        updates["interference"] = False
    if args.wraparound:
        updates["wraparound"] = True
    if updates:
        scenario = replace(scenario, **updates)
    radii = tuple(args.radius) if args.radius else DEFAULT_RADII
    reports = sweep_radius(scenario, radii=radii, max_workers=args.threads)
    _emit(network_csv_rows(reports), args.out, stdout)
    best = optimal_radius(reports)
    stdout.write(
        f"best radius {best.radius_m:g} m: cef {_fmt(best.cef_bpj / 1e9)} Gb/J,"
        f" {best.n_cells} cells, throughput {_fmt(best.throughput_bps / 1e9)} Gb/s\n"
    )
    return EXIT_OK


def cmd_chain(args, stdout: TextIO) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as handle:
            text = handle.read()
        cascade = parse_chain(text, source_power_w=dbm_to_watts(args.source_dbm))
    except (ScenarioParseError, OSError) as exc:
        raise _ParseFailure(str(exc)) from exc
    w = cascade_waste_factor(cascade)
    gain = cascade_gain(cascade)
    consumed = consumed_power(cascade)
    delivered = cascade.source_power * gain
    stdout.write(f"{len(cascade.components)} components, source {args.source_dbm:g} dBm\n")
    for component in cascade.components:
        stdout.write(
            f"  {component.label:<18} gain {linear_to_db(component.gain):8.2f} dB"
            f"   W {component.waste_factor:12.4g}\n"
        )
    stdout.write(
        f"cascade gain: {linear_to_db(gain):.3f} dB\n"
        f"waste factor: {w:.6g} ({linear_to_db(w):.3f} dB)\n"
        f"delivered power: {delivered:.6g} W\n"
        f"consumed power: {consumed:.6g} W\n"
    )
    if args.out:
        rows = [
            "label,gain_db,waste_factor",
            *(
                f"{c.label},{_fmt(linear_to_db(c.gain))},{_fmt(c.waste_factor)}"
                for c in cascade.components
            ),
        ]
        _emit(rows, args.out, stdout)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", help="named preset (built-in or <name>.scenario)")
    parser.add_argument("--scenario", metavar="FILE", help="scenario file to load")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one scenario value, unit included (band.bandwidth=1 GHz)",
    )
    parser.add_argument("--seed", type=int, help="simulation seed (netsim only)")
    parser.add_argument("--out", metavar="FILE", help="write CSV here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wastefactor",
        description="Waste-factor, consumed-power, and consumption-efficiency analysis of transceiver chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_link = sub.add_parser("link", help="evaluate one link scenario")
    _add_common(p_link)
    p_link.set_defaults(func=cmd_link)

    p_table = sub.add_parser("table1", help="8-cell band/direction/environment matrix")
    _add_common(p_table)
    p_table.set_defaults(func=cmd_table1)

    p_bw = sub.add_parser("sweep-bw", help="bandwidth sweep with crossover search")
    _add_common(p_bw)
    p_bw.add_argument("--direction", choices=("ul", "dl", "uplink", "downlink"), default="dl")
    p_bw.add_argument("--snr", type=float, default=20.0, help="target SNR in dB")
    p_bw.add_argument("--lo-ghz", type=float, default=0.1)
    p_bw.add_argument("--hi-ghz", type=float, default=10.0)
    p_bw.add_argument("--points", type=int, default=64)
    p_bw.add_argument(
        "--reference-preset",
        default="mmwave-28",
        help="fixed-band scenario the crossover is measured against",
    )
    p_bw.set_defaults(func=cmd_sweep_bw)

    p_pa = sub.add_parser("sweep-pa", help="PA-efficiency sweep")
    _add_common(p_pa)
    p_pa.add_argument("--direction", choices=("ul", "dl", "uplink", "downlink"), default="dl")
    p_pa.add_argument("--snr", type=float, default=None, help="target SNR in dB (fixed power if omitted)")
    p_pa.add_argument("--lo", type=float, default=0.02)
    p_pa.add_argument("--hi", type=float, default=0.6)
    p_pa.add_argument("--points", type=int, default=64)
    p_pa.add_argument(
        "--target-cef",
        type=float,
        default=None,
        metavar="GBPJ",
        help="also find the minimum efficiency reaching this CEF",
    )
    p_pa.set_defaults(func=cmd_sweep_pa)

    p_net = sub.add_parser("netsim", help="hexagonal-network radius sweep")
    _add_common(p_net)
    p_net.add_argument(
        "--radius",
        type=float,
        action="append",
        metavar="M",
        help="cell radius in meters; repeatable (default: built-in sweep)",
    )
    p_net.add_argument("--drops", type=int, help="Monte Carlo drops per radius")
    p_net.add_argument("--threads", type=int, default=None)
    p_net.add_argument("--no-interference", action="store_true")
    p_net.add_argument("--wraparound", action="store_true")
    p_net.set_defaults(func=cmd_netsim)

    p_chain = sub.add_parser("chain", help="evaluate a chain description file")
    _add_common(p_chain)
    p_chain.add_argument("file", help="chain description file")
    p_chain.add_argument("--source-dbm", type=float, default=0.0)
    p_chain.set_defaults(func=cmd_chain)

    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors; fold the latter to 1.
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, stdout)
    except _ParseFailure as exc:
        print(f"wastefactor: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"wastefactor: evaluation failed: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
