"""Command-line interface.

Subcommands: eval, ingest, fit, sweep, energy, optimal-speed.
Exit codes: 0 success, 2 usage, 3 domain violation, 4 data/parse problem,
5 fit did not converge.

The airframe configuration is a flat key=value text file (``#`` comments),
one key per AirframeParams field; ``v0`` may be omitted to derive it.
Optional fit settings: ``tol``, ``max_iters``, ``seed``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .analysis import (
    MIXED_RATIOS,
    SWEEP_REGIMES,
    SweepSpec,
    default_sweep_spec,
    mission_energy,
    optimal_speed,
    read_mission_csv,
    rotor_sweep,
    write_mission_csv,
    write_sweep_csv,
)
from .errors import DataError, DomainError
from .fitting import (
    FitOptions,
    FitResult,
    error_metrics,
    eval_ascent_combined,
    eval_descent_combined,
    eval_forward_combined,
    fit_forward,
    fit_vertical,
    per_speed_medians,
    physical_to_combined,
)
from .models import (
    AirframeParams,
    Regime,
    Velocity3,
    ascent_power,
    descent_power,
    forward_power,
    hover_power,
    total_power,
)
from .telemetry import (
    SpeedPowerSeries,
    align,
    bin_speeds,
    read_altitude_csv,
    read_electrical_csv,
    read_pairs_csv,
    read_speed_csv,
    round_speeds,
    slice_samples,
    trim_vertical_round_trip,
    write_pairs_csv,
)


class UsageError(Exception):
    """Bad flag combination detected after argparse."""


EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_DATA = 4
EXIT_NO_CONVERGENCE = 5

_AIRFRAME_KEYS = {
    "n": int,
    "weight_w": float,
    "rho": float,
    "disc_area_a": float,
    "solidity_s": float,
    "profile_drag_delta": float,
    "induced_correction_k": float,
    "thrust_coeff_ct": float,
    "rotor_radius_r": float,
    "s_fp_par": float,
    "s_fp_perp": float,
    "v0": float,
}
_FIT_KEYS = {"tol": float, "max_iters": int, "seed": int}


def load_config(path) -> tuple[AirframeParams, FitOptions]:
    """Parse a key=value config into airframe parameters and fit options."""
    airframe: dict = {}
    fit: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError(f"{path}: line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            try:
                if key in _AIRFRAME_KEYS:
                    airframe[key] = _AIRFRAME_KEYS[key](value)
                elif key in _FIT_KEYS:
                    fit[key] = _FIT_KEYS[key](value)
                else:
                    raise DataError(f"{path}: line {lineno}: unknown key {key!r}")
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    missing = [k for k in _AIRFRAME_KEYS if k != "v0" and k not in airframe]
    if missing:
        raise DataError(f"{path}: missing config keys: {', '.join(missing)}")
    return AirframeParams(**airframe), FitOptions(**fit)


def _require_config(args) -> tuple[AirframeParams, FitOptions]:
    if not args.config:
        raise UsageError("this command needs --config")
    params, opts = load_config(args.config)
    if args.seed is not None:
        opts = replace(opts, seed=args.seed)
    return params, opts


def _require_out(args) -> str:
    out = getattr(args, "out", None)
    if not out:
        raise UsageError("this command needs --out")
    return out


def _print_breakdown(b) -> None:
    for label, value in (
        ("total_w", b.total_w),
        ("blade_profile_w", b.blade_profile_w),
        ("induced_w", b.induced_w),
        ("parasite_w", b.parasite_w),
        ("climb_w", b.climb_w),
    ):
        print(f"{label:<16} {value:.12g}")


def cmd_eval(args) -> int:
    params, _ = _require_config(args)
    if args.vpar is not None or args.vperp is not None:
        if args.regime is not None or args.v is not None:
            raise UsageError("use either --regime/--v or --vpar/--vperp, not both")
        vel = Velocity3(args.vpar or 0.0, args.vperp or 0.0)
        _print_breakdown(total_power(vel, params))
        return EXIT_OK
    regime = Regime(args.regime or "hover")
    v = args.v or 0.0
    if regime == Regime.HOVER:
        if v != 0.0:
            raise DomainError("hover has no speed; use --regime forward/ascent/descent")
        breakdown = hover_power(params)
    elif regime == Regime.FORWARD:
        breakdown = forward_power(v, params)
    elif regime == Regime.ASCENT:
        breakdown = ascent_power(v, params)
    else:
        breakdown = descent_power(v, params)
    _print_breakdown(breakdown)
    return EXIT_OK


def cmd_ingest(args) -> int:
    out_path = _require_out(args)
    speed = read_speed_csv(args.speed_csv)
    elec = read_electrical_csv(args.elec_csv)
    regime = Regime(args.regime)
    if args.alt:
        if regime == Regime.FORWARD:
            raise UsageError("--alt trimming applies to ascent/descent ingests only")
        alt = read_altitude_csv(args.alt)
        asc_win, desc_win = trim_vertical_round_trip(
            speed, elec, alt, h0=args.h0, hmax=args.hmax
        )
        window = asc_win if regime == Regime.ASCENT else desc_win
        speed = slice_samples(speed, *window)
        elec = slice_samples(elec, *window)
        if not speed or not elec:
            raise DataError("trimmed window contains no samples")
    pairs = align(speed, elec)
    dropped = len(speed) - len(pairs)
    series = SpeedPowerSeries(regime=regime, pairs=pairs)
    if args.round:
        if regime == Regime.FORWARD:
            series = round_speeds(series)
        else:
            series = bin_speeds(series, 0.5)
    write_pairs_csv(out_path, series.pairs)
    print(f"emitted {len(series.pairs)} windows, dropped {dropped}")
    return EXIT_OK


def _write_curve_csv(path, result: FitResult, v_maxes: dict) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("regime,v_mps,power_w\n")
        for regime, vmax in v_maxes.items():
            steps = int(round(vmax / 0.1))
            for i in range(steps + 1):
                v = min(0.1 * i, vmax)
                if regime == "forward":
                    p = eval_forward_combined(v, result.params)
                elif regime == "ascent":
                    p = eval_ascent_combined(v, result.params)
                else:
                    try:
                        p = eval_descent_combined(v, result.params)
                    except DomainError:
                        break
                fh.write(f"{regime},{v:.12g},{p:.12g}\n")


def _median_metrics(series: SpeedPowerSeries, model) -> tuple[float, float]:
    medians = per_speed_medians(series)
    median_series = SpeedPowerSeries(regime=series.regime, pairs=medians)
    return error_metrics(median_series, model)


def cmd_fit(args) -> int:
    out_prefix = _require_out(args)
    params, opts = _require_config(args)
    if args.tol is not None:
        opts = replace(opts, tol=args.tol)
    if args.max_iters is not None:
        opts = replace(opts, max_iters=args.max_iters)
    init = physical_to_combined(params)
    if args.regime == "forward":
        if args.pairs_csv2 is not None:
            raise UsageError("forward fit takes a single pairs CSV")
        series = SpeedPowerSeries(regime=Regime.FORWARD,
                                  pairs=read_pairs_csv(args.pairs_csv))
        result = fit_forward(series, init, opts)
        mae, rmse = _median_metrics(
            series, lambda v: eval_forward_combined(v, result.params))
        metric_lines = [f"median_mae_w={mae:.6g}", f"median_rmse_w={rmse:.6g}"]
        curves = {"forward": max(series.speeds())}
    else:
        if args.pairs_csv2 is None:
            raise UsageError("vertical fit takes ascent and descent pairs CSVs")
        asc = SpeedPowerSeries(regime=Regime.ASCENT,
                               pairs=read_pairs_csv(args.pairs_csv))
        desc = SpeedPowerSeries(regime=Regime.DESCENT,
                                pairs=read_pairs_csv(args.pairs_csv2))
        result = fit_vertical(asc, desc, init, opts)
        mae_a, rmse_a = _median_metrics(
            asc, lambda v: eval_ascent_combined(v, result.params))
        mae_d, rmse_d = _median_metrics(
            desc, lambda v: eval_descent_combined(v, result.params))
        # Pooled metrics combine the per-branch median residuals.
        n_a, n_d = len(per_speed_medians(asc)), len(per_speed_medians(desc))
        mae_p = (mae_a * n_a + mae_d * n_d) / (n_a + n_d)
        rmse_p = ((rmse_a ** 2 * n_a + rmse_d ** 2 * n_d) / (n_a + n_d)) ** 0.5
        metric_lines = [
            f"median_mae_w_ascent={mae_a:.6g}", f"median_rmse_w_ascent={rmse_a:.6g}",
            f"median_mae_w_descent={mae_d:.6g}", f"median_rmse_w_descent={rmse_d:.6g}",
            f"median_mae_w_pooled={mae_p:.6g}", f"median_rmse_w_pooled={rmse_p:.6g}",
        ]
        curves = {"ascent": max(asc.speeds()), "descent": max(desc.speeds())}
    block = result.to_key_value()
    with open(f"{out_prefix}.txt", "w", newline="\n", encoding="utf-8") as fh:
        fh.write(block)
    _write_curve_csv(f"{out_prefix}.curve.csv", result, curves)
    sys.stdout.write(block)
    for line in metric_lines:
        print(line)
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected a comma-separated number list, got {text!r}") from None


def cmd_sweep(args) -> int:
    out_path = _require_out(args)
    params, _ = _require_config(args)
    rotors = _parse_int_list(args.rotors)
    for n in rotors:
        if n < 4 or n % 2 != 0:
            raise UsageError(f"--rotors entries must be even integers >= 4, got {n}")
    ratio = args.ratio if args.ratio is not None else MIXED_RATIOS.get(args.regime)
    if args.speeds is not None:
        spec = SweepSpec(rotor_counts=rotors, regime=args.regime,
                         speeds=_parse_float_list(args.speeds), ratio=ratio)
    else:
        spec = default_sweep_spec(args.regime, rotor_counts=rotors, ratio=ratio)
    rows = rotor_sweep(spec, params)
    write_sweep_csv(out_path, rows)
    print(f"wrote {len(rows)} rows to {out_path}")
    return EXIT_OK


def cmd_energy(args) -> int:
    out_path = _require_out(args)
    params, _ = _require_config(args)
    segments = read_mission_csv(args.mission_csv)
    total, rows = mission_energy(segments, params)
    write_mission_csv(out_path, rows)
    print(f"segments={len(rows)}")
    print(f"total_energy_j={total:.12g}")
    return EXIT_OK


def cmd_optimal_speed(args) -> int:
    params, _ = _require_config(args)
    result = optimal_speed(Regime(args.regime), (args.vmin, args.vmax), params)
    print(f"v_mps={result.v_mps:.12g}")
    print(f"energy_j_per_m={result.energy_j_per_m:.12g}")
    print(f"at_boundary={'true' if result.at_boundary else 'false'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotorpower",
        description="Power models, curve fitting and energy analysis "
                    "for even-rotor multi-rotor UAVs.",
    )
    parser.add_argument("--config", help="airframe key=value config file")
    parser.add_argument("--out", default=None,
                        help="output path (or prefix, for fit); also accepted "
                             "after the subcommand")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed recorded into fit options")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a power model")
    p.add_argument("--regime", choices=[r.value for r in Regime])
    p.add_argument("--v", type=float, help="speed magnitude, m/s")
    p.add_argument("--vpar", type=float, help="horizontal speed, m/s")
    p.add_argument("--vperp", type=float, help="signed vertical speed, m/s")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ingest", help="align raw logs into speed-power pairs")
    p.add_argument("speed_csv")
    p.add_argument("elec_csv")
    p.add_argument("--regime", required=True,
                   choices=["forward", "ascent", "descent"])
    p.add_argument("--alt", help="altitude CSV for round-trip trimming")
    p.add_argument("--h0", type=float, default=2.0,
                   help="minimum safe descent height, m")
    p.add_argument("--hmax", type=float, default=110.0,
                   help="commanded ceiling of the round trip, m")
    p.add_argument("--round", action="store_true",
                   help="snap speeds (forward: nearest integer; vertical: 0.5)")
    p.add_argument("--out", default=argparse.SUPPRESS, help="output pairs CSV")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("fit", help="least-squares fit of the combined models")
    p.add_argument("pairs_csv", help="forward pairs CSV, or ascent pairs CSV")
    p.add_argument("pairs_csv2", nargs="?", default=None,
                   help="descent pairs CSV (vertical fit)")
    p.add_argument("--regime", required=True, choices=["forward", "vertical"])
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    p.add_argument("--out", default=argparse.SUPPRESS,
                   help="output prefix: writes <out>.txt and <out>.curve.csv")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sweep", help="rotor-count power sweep")
    p.add_argument("--regime", required=True, choices=list(SWEEP_REGIMES))
    p.add_argument("--rotors", default="4,6,8,10,12",
                   help="comma-separated even rotor counts")
    p.add_argument("--speeds", default=None,
                   help="comma-separated speeds, m/s (default: stock grid)")
    p.add_argument("--ratio", type=float, default=None,
                   help="horizontal/vertical speed ratio for mixed regimes")
    p.add_argument("--out", default=argparse.SUPPRESS, help="output CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("energy", help="piecewise-steady mission energy")
    p.add_argument("mission_csv", help="CSV with v_par,v_perp,duration_s")
    p.add_argument("--out", default=argparse.SUPPRESS, help="per-segment output CSV")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("optimal-speed", help="minimize energy per meter")
    p.add_argument("--regime", required=True,
                   choices=["forward", "ascent", "descent"])
    p.add_argument("--vmin", type=float, required=True)
    p.add_argument("--vmax", type=float, required=True)
    p.set_defaults(func=cmd_optimal_speed)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
