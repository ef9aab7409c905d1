#!/usr/bin/env python3
"""Fit round-trip on synthetic measurements.

Generates noisy speed-power data from the stock quadrotor's combined
parameters (so the generating curve is known exactly), fits the forward
model and the joint ascent/descent pair back out of the noise, and compares
recovered parameters and curves against the generator.
"""

import pathlib

import numpy as np

from rotorpower import (
    FitOptions,
    Regime,
    SpeedPowerSeries,
    eval_ascent_combined,
    eval_descent_combined,
    eval_forward_combined,
    fit_forward,
    fit_vertical,
    heuristic_forward_init,
    physical_to_combined,
    reference_quadrotor,
)

OUT = pathlib.Path(__file__).parent / "output"
NOISE_W = 5.0
SEED = 20240817


def main():
    OUT.mkdir(exist_ok=True)
    rng = np.random.default_rng(SEED)
    truth = physical_to_combined(reference_quadrotor())
    print("generator parameters:")
    for k in ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9"):
        print(f"  {k} = {getattr(truth, k):.6g}")

    # --- forward: 40 repeats at each integer speed 0..15 ---------------
    pairs = []
    for v in range(16):
        clean = eval_forward_combined(float(v), truth)
        for _ in range(40):
            pairs.append((float(v), clean + float(rng.normal(0.0, NOISE_W))))
    data = SpeedPowerSeries(regime=Regime.FORWARD, pairs=pairs)

    # start from the data-only heuristic: no airframe knowledge used
    res = fit_forward(data, heuristic_forward_init(data), FitOptions(seed=SEED))
    print(f"\nforward fit: converged={res.converged} "
          f"rmse={res.rmse:.2f} W over {res.n_points} points")
    print(f"{'param':>6} {'true':>12} {'fitted':>12} {'rel err':>10}")
    for k in ("c1", "c2", "c3", "c4", "c5"):
        t, f = getattr(truth, k), getattr(res.params, k)
        print(f"{k:>6} {t:12.5g} {f:12.5g} {abs(f - t) / t:10.2e}")

    grid = np.arange(0.0, 15.0 + 1e-9, 0.1)
    curve_rmse = np.sqrt(np.mean([
        (eval_forward_combined(float(v), res.params)
         - eval_forward_combined(float(v), truth)) ** 2 for v in grid]))
    print(f"curve RMSE vs generator: {curve_rmse:.3f} W "
          f"(noise was {NOISE_W:.0f} W per point)")

    # --- vertical: joint fit over both branches ------------------------
    asc_pairs, desc_pairs = [], []
    for i in range(11):
        v = 0.5 * i
        clean = eval_ascent_combined(v, truth)
        asc_pairs += [(v, clean + float(rng.normal(0.0, NOISE_W))) for _ in range(20)]
    for i in range(7):
        v = 0.5 * i
        clean = eval_descent_combined(v, truth)
        desc_pairs += [(v, clean + float(rng.normal(0.0, NOISE_W))) for _ in range(20)]
    asc = SpeedPowerSeries(regime=Regime.ASCENT, pairs=asc_pairs)
    desc = SpeedPowerSeries(regime=Regime.DESCENT, pairs=desc_pairs)

    vres = fit_vertical(asc, desc, truth, FitOptions(seed=SEED))
    print(f"\nvertical joint fit: converged={vres.converged} rmse={vres.rmse:.2f} W")
    print(f"{'param':>6} {'true':>12} {'fitted':>12} {'rel err':>10}")
    for k in ("c6", "c7", "c8", "c9"):
        t, f = getattr(truth, k), getattr(vres.params, k)
        print(f"{k:>6} {t:12.5g} {f:12.5g} {abs(f - t) / t:10.2e}")
    v_curve_rmse = np.sqrt(np.mean(
        [(eval_ascent_combined(0.1 * i, vres.params)
          - eval_ascent_combined(0.1 * i, truth)) ** 2 for i in range(51)]
        + [(eval_descent_combined(0.1 * i, vres.params)
            - eval_descent_combined(0.1 * i, truth)) ** 2 for i in range(31)]))
    print(f"curve RMSE vs generator: {v_curve_rmse:.3f} W "
          "(individual parameters are softer than the curve they define)")

    with open(OUT / "fit_forward.txt", "w", newline="\n") as fh:
        fh.write(res.to_key_value())
    with open(OUT / "fit_vertical.txt", "w", newline="\n") as fh:
        fh.write(vres.to_key_value())
    print(f"\nwrote {OUT / 'fit_forward.txt'} and {OUT / 'fit_vertical.txt'}")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping plot")
        return

    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2))
    vs, ps = zip(*data.pairs)
    axes[0].plot(vs, ps, ".", ms=2, alpha=0.25, label="noisy samples")
    axes[0].plot(grid, [eval_forward_combined(float(v), truth) for v in grid],
                 "k--", label="generator")
    axes[0].plot(grid, [eval_forward_combined(float(v), res.params) for v in grid],
                 "r", lw=1, label="fit")
    axes[0].set_title("forward")
    agrid = np.arange(0.0, 5.0 + 1e-9, 0.1)
    dgrid = np.arange(0.0, 3.0 + 1e-9, 0.1)
    va, pa = zip(*asc.pairs)
    vd, pd = zip(*desc.pairs)
    axes[1].plot(va, pa, ".", ms=2, alpha=0.25, color="tab:blue")
    axes[1].plot(vd, pd, ".", ms=2, alpha=0.25, color="tab:orange")
    axes[1].plot(agrid, [eval_ascent_combined(float(v), vres.params) for v in agrid],
                 "tab:blue", label="ascent fit")
    axes[1].plot(dgrid, [eval_descent_combined(float(v), vres.params) for v in dgrid],
                 "tab:orange", label="descent fit")
    axes[1].set_title("vertical pair")
    for ax in axes:
        ax.set_xlabel("speed (m/s)")
        ax.set_ylabel("power (W)")
        ax.legend()
    fig.tight_layout()
    fig.savefig(OUT / "fit_synthetic.png", dpi=130)
    print(f"wrote {OUT / 'fit_synthetic.png'}")


if __name__ == "__main__":
    main()
