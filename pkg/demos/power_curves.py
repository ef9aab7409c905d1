#!/usr/bin/env python3
"""Power vs speed for every flight regime of the stock quadrotor.

Walks the four closed-form models over their speed ranges, prints a few
anchor values, writes plot-ready CSVs and (when matplotlib is available)
a PNG with the three speed-dependent curves and the hover line.

Things to notice in the output:
  * forward flight is cheaper than hover over a wide speed band - the
    induced power collapses with airspeed faster than parasite drag grows;
  * ascent power rises steadily with climb rate;
  * descent power barely moves with sink rate, and the model stops at the
    zero-thrust bound near 4.77 m/s.
"""

import csv
import pathlib

import numpy as np

from rotorpower import (
    ascent_power,
    descent_power,
    forward_power,
    hover_power,
    max_descent_speed,
    reference_quadrotor,
)

OUT = pathlib.Path(__file__).parent / "output"


def main():
    OUT.mkdir(exist_ok=True)
    quad = reference_quadrotor()
    hover = hover_power(quad)
    print(f"hover: {hover.total_w:.1f} W "
          f"(blade {hover.blade_profile_w:.1f} + induced {hover.induced_w:.1f})")

    v_fwd = np.arange(0.0, 15.0 + 1e-9, 0.1)
    v_asc = np.arange(0.0, 6.0 + 1e-9, 0.1)
    v_dsc = np.arange(0.0, max_descent_speed(quad) - 1e-9, 0.1)

    curves = {
        "forward": (v_fwd, [forward_power(float(v), quad) for v in v_fwd]),
        "ascent": (v_asc, [ascent_power(float(v), quad) for v in v_asc]),
        "descent": (v_dsc, [descent_power(float(v), quad) for v in v_dsc]),
    }

    for name, (vs, breakdowns) in curves.items():
        path = OUT / f"power_{name}.csv"
        with open(path, "w", newline="\n") as fh:
            w = csv.writer(fh)
            w.writerow(["v_mps", "total_w", "blade_profile_w", "induced_w",
                        "parasite_w", "climb_w"])
            for v, b in zip(vs, breakdowns):
                w.writerow([f"{v:.1f}", f"{b.total_w:.6f}", f"{b.blade_profile_w:.6f}",
                            f"{b.induced_w:.6f}", f"{b.parasite_w:.6f}",
                            f"{b.climb_w:.6f}"])
        print(f"wrote {path}")

    for v in (5.0, 10.0, 15.0):
        print(f"forward {v:>4.1f} m/s: {forward_power(v, quad).total_w:7.1f} W")
    print(f"ascent   3.0 m/s: {ascent_power(3.0, quad).total_w:7.1f} W")
    print(f"descent  3.0 m/s: {descent_power(3.0, quad).total_w:7.1f} W")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping plot")
        return

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, (vs, breakdowns) in curves.items():
        ax.plot(vs, [b.total_w for b in breakdowns], label=name)
    ax.axhline(hover.total_w, color="gray", ls="--", lw=1, label="hover")
    ax.set_xlabel("speed (m/s)")
    ax.set_ylabel("power (W)")
    ax.set_title("Stock quadrotor: power vs speed by regime")
    ax.legend()
    fig.tight_layout()
    fig.savefig(OUT / "power_curves.png", dpi=130)
    print(f"wrote {OUT / 'power_curves.png'}")


if __name__ == "__main__":
    main()
