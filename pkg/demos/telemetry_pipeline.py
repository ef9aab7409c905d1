#!/usr/bin/env python3
"""Raw logs to fitted model, end to end.

Synthesizes a realistic telemetry set for a forward-speed ladder (1 Hz
speed, 10 Hz current/voltage, pilot jitter and sensor noise), then runs the
full pipeline: align the sampling rates, round speeds to their integer
setpoints, fit the forward combined model, and score it against per-speed
medians.  The same steps are available from the shell:

    rotorpower ingest speed.csv elec.csv --regime forward --round --out pairs.csv
    rotorpower --config quad.cfg fit pairs.csv --regime forward --out fit
"""

import pathlib

import numpy as np

from rotorpower import (
    Regime,
    SpeedPowerSeries,
    SpeedSample,
    ElectricalSample,
    align,
    error_metrics,
    eval_forward_combined,
    fit_forward,
    per_speed_medians,
    physical_to_combined,
    reference_quadrotor,
    round_speeds,
)
from rotorpower.telemetry import write_pairs_csv

OUT = pathlib.Path(__file__).parent / "output"
SEED = 7
VOLTAGE = 25.0
REPEATS = 20  # seconds held at each integer setpoint


def synthesize_logs(rng, truth):
    speed, elec = [], []
    t = 0.0
    for setpoint in range(16):
        for _ in range(REPEATS):
            held = max(0.0, setpoint + float(rng.normal(0.0, 0.15)))
            speed.append(SpeedSample(t, held))
            clean = eval_forward_combined(float(setpoint), truth)
            for i in range(10):
                watts = clean + float(rng.normal(0.0, 6.0))
                elec.append(ElectricalSample(t + 0.1 * i,
                                             max(0.1, watts) / VOLTAGE, VOLTAGE))
            t += 1.0
    return speed, elec


def main():
    OUT.mkdir(exist_ok=True)
    rng = np.random.default_rng(SEED)
    quad = reference_quadrotor()
    truth = physical_to_combined(quad)

    speed, elec = synthesize_logs(rng, truth)
    print(f"synthesized {len(speed)} speed samples, {len(elec)} electrical samples")

    pairs = align(speed, elec)
    print(f"aligned into {len(pairs)} windows "
          f"({len(speed) - len(pairs)} dropped)")

    series = round_speeds(SpeedPowerSeries(regime=Regime.FORWARD, pairs=pairs))
    write_pairs_csv(OUT / "pipeline_pairs.csv", series.pairs)
    print(f"rounded speeds to setpoints; wrote {OUT / 'pipeline_pairs.csv'}")

    result = fit_forward(series, physical_to_combined(quad))
    print(f"\nfit: converged={result.converged} in {result.iterations} evaluations")
    print(result.to_key_value())

    medians = per_speed_medians(series)
    median_series = SpeedPowerSeries(regime=Regime.FORWARD, pairs=medians)
    mae, rmse = error_metrics(median_series,
                              lambda v: eval_forward_combined(v, result.params))
    print(f"against per-speed medians: MAE {mae:.2f} W, RMSE {rmse:.2f} W")

    worst = max(abs(eval_forward_combined(float(v), result.params)
                    - eval_forward_combined(float(v), truth))
                for v in np.arange(0.0, 15.01, 0.5))
    print(f"worst curve deviation from the generating model: {worst:.2f} W")


if __name__ == "__main__":
    main()
