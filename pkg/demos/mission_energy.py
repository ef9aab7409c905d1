#!/usr/bin/env python3
"""Energy budget of a piecewise-steady 3-D mission.

A survey sortie for the stock quadrotor: climb out, cruise to the site,
hover for pictures, a climbing transit, cruise home and let down.  Each leg
is steady (the models exclude accelerations), so leg energy is just power
times duration; the interesting part is how unevenly the budget splits.
Also reports the maximum-range cruise speed for the safe envelope.
"""

import pathlib

from rotorpower import (
    MissionSegment,
    Regime,
    Velocity3,
    mission_energy,
    optimal_speed,
    reference_quadrotor,
)
from rotorpower.analysis import write_mission_csv

OUT = pathlib.Path(__file__).parent / "output"

MISSION = [
    ("climb out", Velocity3(0.0, 2.5), 24.0),
    ("cruise out", Velocity3(10.0, 0.0), 90.0),
    ("survey hover", Velocity3(0.0, 0.0), 120.0),
    ("climbing transit", Velocity3(8.0, 1.5), 40.0),
    ("cruise home", Velocity3(12.0, 0.0), 70.0),
    ("let down", Velocity3(0.0, -2.0), 28.0),
]


def main():
    OUT.mkdir(exist_ok=True)
    quad = reference_quadrotor()
    segments = [MissionSegment(v, dt) for _, v, dt in MISSION]
    total, rows = mission_energy(segments, quad)

    print(f"{'leg':<18} {'v_par':>6} {'v_perp':>7} {'dur (s)':>8} "
          f"{'power (W)':>10} {'energy (kJ)':>12} {'share':>7}")
    for (name, _, _), row in zip(MISSION, rows):
        print(f"{name:<18} {row.v_par:6.1f} {row.v_perp:7.1f} "
              f"{row.duration_s:8.1f} {row.power_w:10.1f} "
              f"{row.energy_j / 1000:12.2f} {row.energy_j / total:6.1%}")
    print(f"{'total':<18} {'':>6} {'':>7} "
          f"{sum(r.duration_s for r in rows):8.1f} {'':>10} {total / 1000:12.2f}")

    write_mission_csv(OUT / "mission_energy.csv", rows)
    print(f"\nwrote {OUT / 'mission_energy.csv'}")

    best = optimal_speed(Regime.FORWARD, (1.0, 15.0), quad)
    flag = " (range-limited by the 15 m/s envelope)" if best.at_boundary else ""
    print(f"max-range cruise: {best.v_mps:.2f} m/s at "
          f"{best.energy_j_per_m:.2f} J/m{flag}")

    # with a 4S 5 Ah pack (~266 kJ usable at 80% depth of discharge):
    usable_kj = 0.8 * 5.0 * 14.8 * 3.6
    print(f"missions per 4S-5Ah charge (80% DoD): {usable_kj * 1000 / total:.1f}")


if __name__ == "__main__":
    main()
