"""Command-line surface: scenario sweeps, CDF/coverage, modem calibration,
channel planning and placement queries.

Exit codes: 0 success, 1 usage error (bad flags, unknown scenario), 2 data
error (malformed config file, unreadable or empty CSV).  All commands are
deterministic given their arguments and --seed; repeated runs write
byte-identical files.
"""

import argparse
import csv
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .antenna import dipole, horn
from .campaign import (
    GridSpec,
    ScenarioConfig,
    builtin_scenarios,
    mirror_symmetry,
    read_sweep_csv,
    run_capacity_sweep,
    run_power_sweep,
    write_sweep_csv,
)
from .duplexing import build_channel_plan, format_plan_table, validate_plan
from .metrics import cdf, cdf_at
from .phy import OfdmParams, build_frame, impair, noise_power_for_subcarrier_snr, receive_frame, write_iq
from .placement import ObjectiveKind, PlacementObjective, best_record, feasible_region


class UsageError(Exception):
    """Bad invocation: unknown names, out-of-range flags; exit code 1."""


class DataError(Exception):
    """Bad input data: malformed config or CSV; exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    scenario_name: str
    scenario: ScenarioConfig
    grid: GridSpec
    seed: int
    out_dir: Path


# ---------------------------------------------------------------- config file

_GRID_KEYS = {
    "grid.x_start": "x_start_m",
    "grid.x_end": "x_end_m",
    "grid.x_step": "x_step_m",
    "grid.y_start": "y_start_m",
    "grid.y_end": "y_end_m",
    "grid.y_step": "y_step_m",
}
_SCENARIO_FLOAT_KEYS = {
    "scenario.p_g_dbm": "p_g_dbm",
    "scenario.p_u_dbm": "p_u_dbm",
    "scenario.floor_dbm": "floor_dbm",
    "scenario.noise_figure_db": "noise_figure_db",
    "scenario.interferer_height_m": "interferer_height_m",
    "scenario.bandwidth_hz": "bandwidth_hz",
    "scenario.carrier_freq_hz": "carrier_freq_hz",
    "scenario.tdd_snr_db": "tdd_snr_db",
    "scenario.sinr_ceiling_db": "sinr_ceiling_db",
    "scenario.pointing_sigma_deg": "pointing_sigma_deg",
}
_SCENARIO_STR_KEYS = {"scenario.mode": "mode", "scenario.engine": "engine"}
_ANTENNA_KEYS = {"antenna.kind", "antenna.gain_dbi", "antenna.hpbw_deg", "antenna.front_to_back_db"}
_TOP_KEYS = {"scenario", "seed", "out"}


def _parse_config_lines(path: Path) -> dict[str, tuple[str, int]]:
    """Flat `key = value` format; '#' starts a comment.  Values keep their line
    number so later validation can point at the offending line."""
    try:
        text = path.read_text()
    except OSError as e:
        raise DataError(f"{path}: cannot read config: {e}") from e
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise DataError(f"{path}:{lineno}: empty key or value")
        if key in entries:
            raise DataError(f"{path}:{lineno}: duplicate key {key!r} (first set on line {entries[key][1]})")
        entries[key] = (value, lineno)
    return entries


def _coerce(path: Path, key: str, value: str, lineno: int, kind):
    try:
        return kind(value)
    except ValueError:
        raise DataError(f"{path}:{lineno}: {key} expects a {kind.__name__}, got {value!r}") from None


def load_run_config(
    path, presets: dict[str, ScenarioConfig], scenario_flag: str | None
) -> RunConfig:
    """Build a RunConfig from a config file plus the --scenario flag.

    The flag wins over the file's `scenario` key; everything else in the
    file overrides the chosen preset.
    """
    path = Path(path)
    entries = _parse_config_lines(path)

    known = _TOP_KEYS | set(_GRID_KEYS) | set(_SCENARIO_FLOAT_KEYS) | set(_SCENARIO_STR_KEYS) | _ANTENNA_KEYS
    for key, (_, lineno) in entries.items():
        if key not in known:
            raise DataError(f"{path}:{lineno}: unknown key {key!r}")

    name = scenario_flag or (entries["scenario"][0] if "scenario" in entries else None)
    if name is None:
        raise DataError(f"{path}: no scenario given (set 'scenario = <name>' or pass --scenario)")
    scenario = _resolve_scenario(name, presets)

    scen_kw = {}
    for key, field in _SCENARIO_FLOAT_KEYS.items():
        if key in entries:
            value, lineno = entries[key]
            scen_kw[field] = _coerce(path, key, value, lineno, float)
    for key, field in _SCENARIO_STR_KEYS.items():
        if key in entries:
            scen_kw[field] = entries[key][0]

    if any(k in entries for k in _ANTENNA_KEYS):
        kind = entries.get("antenna.kind", ("horn", 0))[0]
        gain_key = entries.get("antenna.gain_dbi")
        if kind == "horn":
            ant = horn(
                gain_dbi=_coerce(path, "antenna.gain_dbi", *entries["antenna.gain_dbi"], float)
                if gain_key
                else 21.0,
                hpbw_deg=_coerce(path, "antenna.hpbw_deg", *entries["antenna.hpbw_deg"], float)
                if "antenna.hpbw_deg" in entries
                else 18.0,
                front_to_back_db=_coerce(
                    path, "antenna.front_to_back_db", *entries["antenna.front_to_back_db"], float
                )
                if "antenna.front_to_back_db" in entries
                else 30.0,
            )
        elif kind == "dipole":
            ant = dipole(
                gain_dbi=_coerce(path, "antenna.gain_dbi", *entries["antenna.gain_dbi"], float)
                if gain_key
                else 2.5
            )
        else:
            lineno = entries["antenna.kind"][1]
            raise DataError(f"{path}:{lineno}: antenna.kind must be horn or dipole, got {kind!r}")
        scen_kw["antenna"] = ant

    try:
        scenario = replace(scenario, **scen_kw) if scen_kw else scenario
    except ValueError as e:
        raise DataError(f"{path}: invalid scenario override: {e}") from e

    grid_kw = {}
    for key, field in _GRID_KEYS.items():
        if key in entries:
            value, lineno = entries[key]
            grid_kw[field] = _coerce(path, key, value, lineno, float)
    try:
        grid = GridSpec(**grid_kw) if grid_kw else GridSpec()
    except ValueError as e:
        raise DataError(f"{path}: invalid grid: {e}") from e

    seed = _coerce(path, "seed", *entries["seed"], int) if "seed" in entries else 0
    out_dir = Path(entries["out"][0]) if "out" in entries else Path(".")
    return RunConfig(scenario_name=name, scenario=scenario, grid=grid, seed=seed, out_dir=out_dir)


def _resolve_scenario(name: str, presets: dict[str, ScenarioConfig]) -> ScenarioConfig:
    if name not in presets:
        raise UsageError(f"unknown scenario {name!r}; available: {', '.join(sorted(presets))}")
    return presets[name]


# ---------------------------------------------------------------- subcommands


def _cmd_sweep(args) -> int:
    presets = builtin_scenarios()
    if args.config:
        run = load_run_config(args.config, presets, args.scenario)
    else:
        if not args.scenario:
            raise UsageError("sweep needs --scenario (or --config with a scenario key)")
        scenario = _resolve_scenario(args.scenario, presets)
        run = RunConfig(args.scenario, scenario, GridSpec(), seed=0, out_dir=Path("."))

    scenario = run.scenario
    if args.engine:
        scenario = replace(scenario, engine=args.engine)
    seed = args.seed if args.seed is not None else run.seed
    if seed < 0:
        raise UsageError("--seed must be >= 0")
    out_dir = Path(args.out) if args.out else run.out_dir
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataError(f"cannot create output directory {out_dir}: {e}") from e

    power = run_power_sweep(scenario, run.grid, seed)
    capacity = run_capacity_sweep(scenario, run.grid, seed)

    for tag, records in (
        ("power", power),
        ("capacity", capacity),
        ("power_mirrored", mirror_symmetry(power)),
        ("capacity_mirrored", mirror_symmetry(capacity)),
    ):
        dest = out_dir / f"{run.scenario_name}_{tag}.csv"
        write_sweep_csv(dest, records)
        print(f"wrote {dest} ({len(records)} rows)")
    return 0


def _cmd_cdf(args) -> int:
    try:
        records = read_sweep_csv(args.sweep_csv)
    except (OSError, ValueError) as e:
        raise DataError(str(e)) from e
    values = [r.interference_dbm for r in records]
    table = cdf(values)
    out = Path(args.out) if args.out else Path(args.sweep_csv).with_suffix("").with_name(
        Path(args.sweep_csv).stem + "_cdf.csv"
    )
    with out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["value_dbm", "cum_fraction"])
        for value, frac in table:
            w.writerow([format(value, ".4f"), format(frac, ".6f")])
    coverage = cdf_at(values, args.threshold)
    print(f"wrote {out} ({len(table)} steps)")
    print(f"coverage={coverage:.6f} threshold_dbm={args.threshold:.2f} n={len(values)}")
    return 0


def _cmd_modem(args) -> int:
    if args.frames < 1:
        raise UsageError("--frames must be >= 1")
    if args.seed < 0:
        raise UsageError("--seed must be >= 0")
    params = OfdmParams()
    payload_bits = params.payload_bits(args.symbols)
    noise_dbm = noise_power_for_subcarrier_snr(params, args.snr, args.symbols)

    sync_failures = 0
    evm_sq_sum = 0.0
    n_ok = 0
    for k in range(args.frames):
        rng_d = np.random.default_rng(np.random.SeedSequence([args.seed, k, 0]))
        frame_d = build_frame(params, rng_d.integers(0, 2, payload_bits))
        interferer = None
        if args.sir != math.inf:
            rng_i = np.random.default_rng(np.random.SeedSequence([args.seed, k, 1]))
            interferer = build_frame(params, rng_i.integers(0, 2, payload_bits), pilot_stream=1).body_stream()
        mixed = impair(
            frame_d,
            interferer,
            atten_desired_db=0.0,
            atten_interferer_db=args.sir,
            noise_power_dbm=noise_dbm,
            seed=int(np.random.SeedSequence([args.seed, k, 2]).generate_state(1)[0]),
        )
        if args.dump_iq and k == 0:
            write_iq(args.dump_iq, mixed)
        rx = receive_frame(mixed, params, frame_d.data_symbols, decode=False)
        if rx.sync_success:
            n_ok += 1
            evm_sq_sum += rx.evm_rms**2
        else:
            sync_failures += 1

    head = f"modem frames={args.frames} snr_db={args.snr:g} sir_db={args.sir:g} sync_failures={sync_failures}"
    if n_ok == 0:
        print(head + " sync=failed")
        return 0
    evm = math.sqrt(evm_sq_sum / n_ok)
    sinr_evm = -20.0 * math.log10(evm) if evm > 0 else math.inf
    denom = 10.0 ** (-args.snr / 10.0) + 10.0 ** (-args.sir / 10.0)
    sinr_ref = math.inf if denom == 0.0 else -10.0 * math.log10(denom)
    gap = sinr_evm - sinr_ref
    print(
        head
        + f" evm_rms={evm:.6e} sinr_evm_db={sinr_evm:.3f} sinr_analytic_db={sinr_ref:.3f} gap_db={gap:+.3f}"
    )
    return 0


def _cmd_plan(args) -> int:
    if args.uavs < 1:
        raise UsageError("--uavs must be >= 1")
    try:
        plan = build_channel_plan(args.uavs, min_separation=args.separation)
    except ValueError as e:
        raise UsageError(str(e)) from e
    violations = validate_plan(plan)
    print(format_plan_table(plan))
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        return 2
    return 0


def _cmd_place(args) -> int:
    try:
        records = read_sweep_csv(args.sweep_csv)
    except (OSError, ValueError) as e:
        raise DataError(str(e)) from e
    kind = {k.value: k for k in ObjectiveKind}.get(args.objective)
    if kind is None:
        raise UsageError(f"unknown objective {args.objective!r}")
    objective = PlacementObjective(kind, threshold_dbm=args.threshold)

    if kind is ObjectiveKind.MAX_VICTIM_CAPACITY and all(r.capacity_bps is None for r in records):
        raise DataError(f"{args.sweep_csv}: no capacity column values; pass a capacity sweep CSV")

    best = best_record(records, objective)
    region = feasible_region(records, args.threshold)
    out = Path(args.out) if args.out else Path(args.sweep_csv).with_name(
        Path(args.sweep_csv).stem + "_region.csv"
    )
    with out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x_m", "y_m", "h_m"])
        for p in region:
            w.writerow([format(p.x, ".3f"), format(p.y, ".3f"), format(p.z, ".3f")])
    print(f"wrote {out} ({len(region)} feasible positions, threshold {args.threshold:.2f} dBm)")
    unit = "dBm" if kind is ObjectiveKind.MIN_INTERFERENCE else "bps"
    print(
        f"best objective={args.objective} x_m={best.position.x:.3f} y_m={best.position.y:.3f} "
        f"h_m={best.position.z:.3f} value={best.value:.3f} {unit} index={best.index}"
    )
    return 0


# ---------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_or_inf(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uavfd", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run power and capacity sweeps for a scenario, write CSVs")
    p.add_argument("--scenario", help="scenario preset id (see --help of errors for the list)")
    p.add_argument("--engine", choices=["analytic", "waveform"], help="override the scenario engine")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output directory (default .)")
    p.add_argument("--config", help="flat key=value config file")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("cdf", help="empirical CDF of interference power from a sweep CSV")
    p.add_argument("sweep_csv")
    p.add_argument("--threshold", type=float, default=-95.0, help="coverage threshold in dBm")
    p.add_argument("--out", help="CDF CSV path")
    p.set_defaults(func=_cmd_cdf)

    p = sub.add_parser("modem", help="modem EVM/SINR calibration at a given SNR and SIR")
    p.add_argument("--snr", type=_float_or_inf, default=math.inf, help="per-subcarrier SNR in dB, or inf")
    p.add_argument("--sir", type=_float_or_inf, default=math.inf, help="signal-to-interference in dB, or inf")
    p.add_argument("--frames", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--symbols", type=int, default=28, help="OFDM data symbols per frame")
    p.add_argument("--dump-iq", help="dump the first impaired frame as float32 IQ")
    p.set_defaults(func=_cmd_modem)

    p = sub.add_parser("plan", help="print the channel-reuse plan table")
    p.add_argument("--uavs", type=int, required=True)
    p.add_argument(
        "--separation",
        type=int,
        default=1,
        help="min channel-index separation per UAV (the canonical two-UAV assignment uses adjacent indices)",
    )
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("place", help="feasible region and best interferer position from a sweep CSV")
    p.add_argument("sweep_csv")
    p.add_argument(
        "--objective",
        default=ObjectiveKind.MIN_INTERFERENCE.value,
        help="min-interference | max-capacity",
    )
    p.add_argument("--threshold", type=float, default=-95.0)
    p.add_argument("--out", help="region CSV path")
    p.set_defaults(func=_cmd_place)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
