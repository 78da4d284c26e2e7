"""Command-line front end.

Subcommands: analyze (power of one instance), bounds (lower bounds and closed
forms), sweep (savings across topology sizes), repro (reference CSV tables).

Exit codes: 0 ok, 2 usage, 3 bad instance, 4 no survivable routing,
5 oracle guard exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path as FilePath

from .bounds import (
    BoundReport,
    bound_nc,
    mesh_power,
    mesh_savings_fraction,
    ring_classify,
    ring_power,
)
from .coding import (
    COMBO_NAMES,
    EMPTY_ASSIGNMENT,
    SelectionResult,
    select_pairs_fixed,
    select_pairs_osh,
)
from .errors import (
    InstanceError,
    NcPowerError,
    OracleGuardError,
    RoutingError,
    SurvivabilityError,
)
from .model import Demand, Instance, generate_full_mesh, generate_ring, load_instance
from .oracle import optimal_joint
from .power import PowerParams, PowerReport, eval_with_coding
from .routing import route_instance

HEURISTICS = ("osh", "ww", "pp", "wp", "pw", "oracle", "conventional")

# routing every demand costs O(demands * nodes); above this many demands the
# bounds command reports assignment-free bounds and closed forms only
BOUNDS_EVAL_DEMAND_LIMIT = 20_000


def fmt(value: float) -> str:
    """Six significant digits, the precision used in every table we emit."""
    return f"{value:.6g}"


def _parse_gen(spec: str, volume: float, power: PowerParams) -> Instance:
    kind, _, size = spec.partition(":")
    builders = {"mesh": generate_full_mesh, "ring": generate_ring}
    if kind not in builders or not size:
        raise InstanceError(f"generator spec {spec!r} is not mesh:N or ring:N")
    try:
        n = int(size)
    except ValueError:
        raise InstanceError(f"generator size {size!r} is not an integer") from None
    return builders[kind](n, volume, power)


def _parse_power(text: str | None) -> PowerParams:
    if text is None:
        return PowerParams()
    parts = text.split(",")
    if len(parts) != 3:
        raise InstanceError("--power expects port_w,transponder_w,channel_gbps")
    try:
        return PowerParams(float(parts[0]), float(parts[1]), float(parts[2]))
    except ValueError:
        raise InstanceError(f"--power {text!r}: values must be numbers") from None


def _load_file(path: str, volume: float | None, power_text: str | None) -> Instance:
    text = FilePath(path).read_text(encoding="utf-8")
    instance = load_instance(text)
    if power_text is not None:
        instance = Instance(instance.topology, instance.demands, _parse_power(power_text))
    if volume is not None:
        # uniform override so volume sweeps work on file instances too
        demands = tuple(Demand(d.source, d.dest, volume) for d in instance.demands)
        instance = Instance(instance.topology, demands, instance.power)
    if not instance.demands:
        raise InstanceError(f"instance {path} defines no demands; add demand lines")
    return instance


def _build_instance(args, volume: float | None) -> Instance:
    if args.gen:
        return _parse_gen(args.gen, 20.0 if volume is None else volume, _parse_power(args.power))
    return _load_file(args.instance, volume, args.power)


def _run_heuristic(instance: Instance, name: str, budget: int) -> SelectionResult:
    routing = route_instance(instance)
    if name == "conventional":
        return SelectionResult(EMPTY_ASSIGNMENT, routing)
    if name == "osh":
        return select_pairs_osh(instance, routing, budget)
    if name == "oracle":
        result = optimal_joint(instance, budget)
        return SelectionResult(result.best_assignment, result.best_routing)
    return select_pairs_fixed(instance, routing, COMBO_NAMES[name])


def _evaluate(instance: Instance, name: str, budget: int) -> tuple[PowerReport, SelectionResult]:
    selection = _run_heuristic(instance, name, budget)
    report = eval_with_coding(instance, selection.routing, selection.assignment)
    return report, selection


def _write_csv(path: str | None, header: list[str], rows: list[list[str]]):
    lines = [",".join(header)] + [",".join(row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        FilePath(path).write_text(text, encoding="utf-8")


def _sweep_volumes(spec: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise InstanceError("--sweep expects start:stop:step in Gbps")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise InstanceError(f"--sweep {spec!r}: values must be numbers") from None
    if step <= 0 or stop < start:
        raise InstanceError("--sweep needs step > 0 and stop >= start")
    values = []
    v = start
    while v <= stop + 1e-9:
        values.append(round(v, 9))
        v += step
    return values


def _print_report(instance: Instance, report: PowerReport, bounds: BoundReport, selection: SelectionResult):
    topo = instance.topology
    print(
        f"instance: nodes={topo.node_count} fibres={len(topo.undirected_edges)} "
        f"demands={len(instance.demands)}"
    )
    print(
        f"power: total={fmt(report.p_total)} W  conventional={fmt(report.p_conventional)} W  "
        f"reduction={fmt(report.p_reduction)} W  savings={fmt(report.savings_fraction * 100)}%"
    )
    print(
        f"bounds: conventional>={fmt(bounds.conventional_lower)} W  "
        f"coded>={fmt(bounds.nc_lower_per_demand)} W (per-demand)  "
        f"coded>={fmt(bounds.nc_lower_mean_form)} W (mean form)"
    )
    pairs = selection.assignment.pairs
    print(f"coded pairs: {len(pairs)}")
    for pair in pairs:
        print(
            f"  {pair.first}({pair.first_kind.value}) + {pair.second}({pair.second_kind.value})"
            f"  shared={pair.shared_hops}  saves={fmt(pair.benefit)} W"
        )


def _cmd_analyze(args) -> int:
    if args.sweep:
        header = ["volume_gbps", "conventional_w", "total_w", "reduction_w", "savings_pct"]
        rows = []
        for volume in _sweep_volumes(args.sweep):
            instance = _build_instance(args, volume)
            report, _ = _evaluate(instance, args.heuristic, args.budget)
            rows.append(
                [
                    fmt(volume),
                    fmt(report.p_conventional),
                    fmt(report.p_total),
                    fmt(report.p_reduction),
                    fmt(report.savings_fraction * 100),
                ]
            )
        _write_csv(args.out, header, rows)
        return 0
    instance = _build_instance(args, args.volume)
    report, selection = _evaluate(instance, args.heuristic, args.budget)
    bounds = bound_nc(instance, selection.assignment)
    _print_report(instance, report, bounds, selection)
    if args.out:
        _write_csv(
            args.out,
            ["conventional_w", "total_w", "reduction_w", "savings_pct"],
            [[
                fmt(report.p_conventional),
                fmt(report.p_total),
                fmt(report.p_reduction),
                fmt(report.savings_fraction * 100),
            ]],
        )
    return 0


def _cmd_bounds(args) -> int:
    instance = _build_instance(args, args.volume)
    if len(instance.demands) <= BOUNDS_EVAL_DEMAND_LIMIT:
        report, selection = _evaluate(instance, args.heuristic, args.budget)
        bounds = bound_nc(instance, selection.assignment)
    else:
        report = None
        bounds = bound_nc(instance)
    print(f"conventional_lower: {fmt(bounds.conventional_lower)} W")
    print(f"nc_lower_per_demand: {fmt(bounds.nc_lower_per_demand)} W")
    print(f"nc_lower_mean_form: {fmt(bounds.nc_lower_mean_form)} W")
    print(f"volume_avg: {fmt(bounds.volume_avg)} Gbps")
    print(f"characteristic_hops_avg: {fmt(bounds.characteristic_avg)}")
    if report is not None:
        print(f"achieved_power: {fmt(report.p_total)} W ({args.heuristic})")
    else:
        print(
            f"achieved_power: skipped ({len(instance.demands)} demands exceed "
            f"{BOUNDS_EVAL_DEMAND_LIMIT}; bounds assume no pairing)"
        )
    if args.gen:
        kind, _, size = args.gen.partition(":")
        n = int(size)
        volume = 20.0 if args.volume is None else args.volume
        params = _parse_power(args.power)
        if kind == "mesh":
            conv, coded, savings = mesh_power(n, volume, params)
            label = "odd" if n % 2 else "even"
        else:
            conv, coded, savings = ring_power(n, volume, params)
            label = ring_classify(n).value
        print(
            f"closed_form: conventional={fmt(conv)} W coded={fmt(coded)} W "
            f"savings={fmt(savings * 100)}% class={label}"
        )
    return 0


def _parse_size_range(spec: str) -> tuple[str, range]:
    parts = spec.split(":")
    kind = parts[0]
    if kind not in ("mesh", "ring") or len(parts) not in (2, 3, 4):
        raise InstanceError(f"sweep spec {spec!r} is not mesh:LO[:HI[:STEP]] or ring:...")
    try:
        numbers = [int(p) for p in parts[1:]]
    except ValueError:
        raise InstanceError(f"sweep spec {spec!r}: sizes must be integers") from None
    lo = numbers[0]
    hi = numbers[1] if len(numbers) > 1 else lo
    step = numbers[2] if len(numbers) > 2 else 1
    if step < 1 or hi < lo:
        raise InstanceError("sweep spec needs step >= 1 and hi >= lo")
    return kind, range(lo, hi + 1, step)


def _cmd_sweep(args) -> int:
    kind, sizes = _parse_size_range(args.gen)
    heuristics = [h for h in (args.heuristic or "").split(",") if h]
    for h in heuristics:
        if h not in HEURISTICS:
            raise InstanceError(f"unknown heuristic {h!r}")
    params = _parse_power(args.power)
    volume = 20.0 if args.volume is None else args.volume

    header = ["size", "class", "analytic_pct"] + [f"{h}_pct" for h in heuristics]
    rows = []
    for n in sizes:
        if kind == "mesh":
            savings = mesh_savings_fraction(n)
            label = "odd" if n % 2 else "even"
        else:
            _, _, savings = ring_power(n, volume, params)
            label = ring_classify(n).value
        row = [str(n), label, fmt(savings * 100)]
        for h in heuristics:
            instance = (generate_full_mesh if kind == "mesh" else generate_ring)(
                n, volume, params
            )
            report, _ = _evaluate(instance, h, args.budget)
            row.append(fmt(report.savings_fraction * 100))
        rows.append(row)
    _write_csv(args.out, header, rows)
    return 0


def _repro_volume_table(kind: str) -> tuple[list[str], list[list[str]]]:
    build = generate_full_mesh if kind == "mesh" else generate_ring
    closed = mesh_power if kind == "mesh" else ring_power
    header = ["volume_gbps", "conventional_w", "nc_analytic_w", "nc_oracle_w", "osh_w"]
    rows = []
    for volume in range(20, 201, 20):
        instance = build(5, float(volume))
        conv, coded, _ = closed(5, float(volume))
        oracle_power = optimal_joint(instance).best_power
        report, _ = _evaluate(instance, "osh", 8)
        rows.append([fmt(volume), fmt(conv), fmt(coded), fmt(oracle_power), fmt(report.p_total)])
    return header, rows


def _repro_size_table(kind: str) -> tuple[list[str], list[list[str]]]:
    build = generate_full_mesh if kind == "mesh" else generate_ring
    if kind == "mesh":
        heuristics = ["osh", "ww", "pp"]
        header = ["size", "parity", "analytic_pct", "osh_pct", "ww_pct", "pp_pct"]
    else:
        heuristics = ["osh", "ww", "wp", "pw", "pp"]
        header = ["size", "ring_class", "analytic_pct", "osh_pct", "ww_pct", "wp_pct", "pw_pct", "pp_pct"]
    rows = []
    for n in range(3, 16):
        if kind == "mesh":
            label = "odd" if n % 2 else "even"
            analytic = mesh_savings_fraction(n)
        else:
            label = ring_classify(n).value
            _, _, analytic = ring_power(n, 20.0)
        row = [str(n), label, fmt(analytic * 100)]
        instance = build(n, 20.0)
        for h in heuristics:
            report, _ = _evaluate(instance, h, 8)
            row.append(fmt(report.savings_fraction * 100))
        rows.append(row)
    return header, rows


REPRO_TABLES = {
    "mesh-volume": lambda: _repro_volume_table("mesh"),
    "mesh-sizes": lambda: _repro_size_table("mesh"),
    "ring-volume": lambda: _repro_volume_table("ring"),
    "ring-sizes": lambda: _repro_size_table("ring"),
}


def _cmd_repro(args) -> int:
    header, rows = REPRO_TABLES[args.table]()
    _write_csv(args.out, header, rows)
    return 0


def _add_instance_flags(parser: argparse.ArgumentParser, gen_required: bool = False):
    if gen_required:
        parser.add_argument("--gen", required=True, help="mesh:LO[:HI[:STEP]] or ring:...")
    else:
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--gen", help="generated topology, mesh:N or ring:N")
        source.add_argument("--instance", help="instance file path")
    parser.add_argument("--volume", type=float, default=None, help="uniform demand volume in Gbps")
    parser.add_argument("--power", default=None, help="port_w,transponder_w,channel_gbps")
    parser.add_argument("--budget", type=int, default=8, help="disjoint-pair candidates per demand")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncpower",
        description="Power analysis of 1+1-protected networks with XOR-coded protection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="evaluate power for one instance")
    _add_instance_flags(p_analyze)
    p_analyze.add_argument("--heuristic", choices=HEURISTICS, default="osh")
    p_analyze.add_argument("--sweep", help="volume sweep start:stop:step (emits CSV)")
    p_analyze.add_argument("--out", help="write CSV here instead of stdout")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_bounds = sub.add_parser("bounds", help="print lower bounds and closed forms")
    _add_instance_flags(p_bounds)
    p_bounds.add_argument("--heuristic", choices=HEURISTICS, default="osh")
    p_bounds.set_defaults(func=_cmd_bounds)

    p_sweep = sub.add_parser("sweep", help="savings across topology sizes")
    _add_instance_flags(p_sweep, gen_required=True)
    p_sweep.add_argument("--heuristic", default="", help="comma-separated heuristic columns")
    p_sweep.add_argument("--out", help="write CSV here instead of stdout")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_repro = sub.add_parser("repro", help="emit a reference table")
    p_repro.add_argument("table", choices=sorted(REPRO_TABLES))
    p_repro.add_argument("--out", help="write CSV here instead of stdout")
    p_repro.set_defaults(func=_cmd_repro)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SurvivabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OracleGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except (InstanceError, RoutingError, NcPowerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
