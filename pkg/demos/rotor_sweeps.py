#!/usr/bin/env python3
"""How the rotor count changes power draw, regime by regime.

Sweeps even rotor counts 4..12 at fixed total weight and per-rotor disc
area across the five scenarios (forward, ascent, descent, and the two mixed
straight-line climbs/descents at fixed speed ratios), printing the trend
each one exhibits:

  * slow flight: more rotors always help (induced power drops as 1/sqrt(n));
  * fast forward flight: the trend reverses once parasite drag, which grows
    with n, takes over - the best count moves inward;
  * descent: more rotors keep helping, since fuselage drag does part of the
    lifting work;
  * mixed forward-ascent at ratio 2.5: the 4-vs-12 advantage flips sign
    around 8 m/s total speed.
"""

import pathlib

from rotorpower import default_sweep_spec, reference_quadrotor, rotor_sweep
from rotorpower.analysis import write_sweep_csv

OUT = pathlib.Path(__file__).parent / "output"
REGIMES = ("forward", "ascent", "descent", "forward-ascent", "forward-descent")


def trend(values) -> str:
    dec = all(a > b for a, b in zip(values, values[1:]))
    inc = all(a < b for a, b in zip(values, values[1:]))
    if dec:
        return "decreasing"
    if inc:
        return "increasing"
    i = values.index(min(values))
    if 0 < i < len(values) - 1:
        return f"dips at n={4 + 2 * i}"
    return "mixed"


def main():
    OUT.mkdir(exist_ok=True)
    quad = reference_quadrotor()
    for regime in REGIMES:
        spec = default_sweep_spec(regime)
        rows = rotor_sweep(spec, quad)
        path = OUT / f"sweep_{regime.replace('-', '_')}.csv"
        write_sweep_csv(path, rows)
        print(f"\n{regime}: {len(rows)} cells -> {path.name}")
        print(f"  {'v (m/s)':>8} | " + " ".join(f"n={n:<2}" for n in spec.rotor_counts)
              + " | trend over n")
        for v in spec.speeds[:: max(1, len(spec.speeds) // 6)]:
            col = [p for n, vv, p in rows if vv == v]
            cells = " ".join(f"{p:4.0f}" for p in col)
            print(f"  {v:8.1f} | {cells} | {trend(col)}")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping plot")
        return

    fig, axes = plt.subplots(2, 3, figsize=(13, 7))
    for ax, regime in zip(axes.flat, REGIMES):
        spec = default_sweep_spec(regime)
        rows = rotor_sweep(spec, quad)
        for v in spec.speeds[:: max(1, len(spec.speeds) // 5)]:
            col = [(n, p) for n, vv, p in rows if vv == v]
            ax.plot([n for n, _ in col], [p for _, p in col],
                    marker="o", ms=3, label=f"{v:g} m/s")
        ax.set_title(regime)
        ax.set_xlabel("rotor count")
        ax.set_ylabel("power (W)")
        ax.legend(fontsize=7)
    axes.flat[-1].axis("off")
    fig.tight_layout()
    fig.savefig(OUT / "rotor_sweeps.png", dpi=130)
    print(f"\nwrote {OUT / 'rotor_sweeps.png'}")


if __name__ == "__main__":
    main()
