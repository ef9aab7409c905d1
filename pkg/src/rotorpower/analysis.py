"""Derived analyses: energy per meter, optimal speed, rotor sweeps, missions.

Energy per unit distance P(V)/V is the quantity to minimize for maximum
range; its minimizer is found by a coarse grid scan (no unimodality
assumption) followed by golden-section refinement.  Rotor-count sweeps
re-evaluate a model family with the rotor number swapped while weight and
per-rotor disc area stay fixed (total disc area is left unconstrained).
Mixed regimes fly a straight 3-D line with a fixed ratio of horizontal to
vertical speed; sweep speeds for those are *total* speeds.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

from .errors import DataError, DomainError
from .models import (
    AirframeParams,
    Regime,
    Velocity3,
    ascent_power,
    descent_power,
    forward_power,
    max_descent_speed,
    total_power,
)

__all__ = [
    "SweepSpec",
    "MissionSegment",
    "OptimalSpeed",
    "SegmentEnergy",
    "energy_per_meter",
    "optimal_speed",
    "rotor_sweep",
    "mission_energy",
    "default_sweep_spec",
    "write_sweep_csv",
    "write_mission_csv",
    "read_mission_csv",
]

SWEEP_REGIMES = ("forward", "ascent", "descent", "forward-ascent", "forward-descent")
MIXED_RATIOS = {"forward-ascent": 2.5, "forward-descent": 5.0}

GRID_STEP = 0.1       # m/s, coarse scan for optimal_speed
REFINE_TOL = 1e-4     # m/s, golden-section interval width at termination
BOUNDARY_SNAP = 1e-3  # m/s, distance at which an optimum is reported as boundary


@dataclass(frozen=True)
class SweepSpec:
    """A rotor-count sweep: which counts, which regime, which speeds.

    For the mixed regimes, ``speeds`` are total speeds and ``ratio`` is the
    fixed horizontal-to-vertical speed ratio.
    """

    rotor_counts: tuple[int, ...]
    regime: str
    speeds: tuple[float, ...]
    ratio: float | None = None

    def __post_init__(self):
        if self.regime not in SWEEP_REGIMES:
            raise DomainError(
                f"sweep regime must be one of {SWEEP_REGIMES}, got {self.regime!r}"
            )
        for n in self.rotor_counts:
            if not isinstance(n, int) or n < 4 or n % 2 != 0:
                raise DomainError(f"rotor counts must be even integers >= 4, got {n}")
        for v in self.speeds:
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"sweep speeds must be finite and >= 0, got {v}")
        if self.regime in MIXED_RATIOS:
            if self.ratio is None or not (math.isfinite(self.ratio) and self.ratio > 0.0):
                raise DomainError(
                    f"mixed regime {self.regime!r} needs a ratio > 0, got {self.ratio}"
                )


@dataclass(frozen=True)
class MissionSegment:
    """One steady leg of a mission: a 3-D velocity held for a duration."""

    v: Velocity3
    duration_s: float

    def __post_init__(self):
        if not (math.isfinite(self.duration_s) and self.duration_s > 0.0):
            raise DomainError(f"segment duration must be > 0, got {self.duration_s}")


@dataclass(frozen=True)
class OptimalSpeed:
    """Result of an energy-per-meter minimization over a speed range."""

    v_mps: float
    energy_j_per_m: float
    at_boundary: bool


@dataclass(frozen=True)
class SegmentEnergy:
    """Per-segment mission energy row (1-based segment index)."""

    segment: int
    v_par: float
    v_perp: float
    duration_s: float
    power_w: float
    energy_j: float


def _regime_power(regime: Regime, v: float, params: AirframeParams) -> float:
    if regime == Regime.FORWARD:
        return forward_power(v, params).total_w
    if regime == Regime.ASCENT:
        return ascent_power(v, params).total_w
    if regime == Regime.DESCENT:
        return descent_power(v, params).total_w
    raise DomainError(f"energy per meter is undefined for regime {regime}")


def energy_per_meter(regime: Regime, v: float, params: AirframeParams) -> float:
    """Energy per unit distance P(v)/v, J/m; undefined at v = 0."""
    if v <= 0.0:
        raise DomainError(f"energy per meter needs v > 0, got {v}")
    return _regime_power(regime, v, params) / v


def _golden_section(f, a: float, b: float, tol: float) -> float:
    # Standard golden-section minimization; f assumed unimodal on [a, b].
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def optimal_speed(regime: Regime, v_range: tuple[float, float],
                  params: AirframeParams) -> OptimalSpeed:
    """Speed minimizing energy per meter over a closed range.

    A 0.1 m/s grid scan picks the best cell, golden-section refines inside
    it.  Minima landing on a range endpoint are snapped there and flagged
    ``at_boundary`` (e.g. when the theoretical best speed lies beyond the
    safe operating range).
    """
    vmin, vmax = v_range
    if not (math.isfinite(vmin) and math.isfinite(vmax)) or not (0.0 < vmin < vmax):
        raise DomainError(f"speed range must satisfy 0 < vmin < vmax, got {v_range}")
    if regime == Regime.DESCENT and vmax > max_descent_speed(params):
        raise DomainError(
            f"descent range upper bound {vmax} m/s exceeds the model domain "
            f"{max_descent_speed(params):.6g} m/s"
        )

    def energy(v: float) -> float:
        return energy_per_meter(regime, v, params)

    n_steps = int(math.floor((vmax - vmin) / GRID_STEP + 1e-9))
    grid = [vmin + GRID_STEP * i for i in range(n_steps + 1)]
    if grid[-1] < vmax - 1e-12:
        grid.append(vmax)
    else:
        grid[-1] = vmax
    energies = [energy(v) for v in grid]
    i = min(range(len(grid)), key=energies.__getitem__)
    lo = grid[max(0, i - 1)]
    hi = grid[min(len(grid) - 1, i + 1)]
    v_star = _golden_section(energy, lo, hi, REFINE_TOL)
    at_boundary = False
    if v_star - vmin <= BOUNDARY_SNAP:
        v_star, at_boundary = vmin, True
    elif vmax - v_star <= BOUNDARY_SNAP:
        v_star, at_boundary = vmax, True
    return OptimalSpeed(v_star, energy(v_star), at_boundary)


def mixed_velocity(regime: str, total_speed: float, ratio: float) -> Velocity3:
    """Split a total speed into (v_par, v_perp) at a fixed component ratio.

    ``ratio`` is horizontal over vertical speed; the vertical component is
    negative for forward-descent.
    """
    if regime not in MIXED_RATIOS:
        raise DomainError(f"{regime!r} is not a mixed regime")
    v_vert = total_speed / math.sqrt(1.0 + ratio * ratio)
    v_par = ratio * v_vert
    if regime == "forward-descent":
        v_vert = -v_vert
    return Velocity3(v_par=v_par, v_perp=v_vert)


def rotor_sweep(spec: SweepSpec, base: AirframeParams) -> list[tuple[int, float, float]]:
    """Evaluate power over (rotor count, speed) cells; rows are (n, v, W).

    Weight and per-rotor disc area are held at the base values while the
    rotor count changes.  Rows keep spec order: speeds vary fastest.
    """
    rows: list[tuple[int, float, float]] = []
    for n in spec.rotor_counts:
        params = replace(base, n=n)
        for v in spec.speeds:
            if spec.regime in MIXED_RATIOS:
                vel = mixed_velocity(spec.regime, v, spec.ratio)
                try:
                    power = total_power(vel, params).total_w
                except DomainError as exc:
                    raise DomainError(
                        f"sweep cell n={n}, total speed {v} m/s: {exc}"
                    ) from None
            else:
                try:
                    power = _regime_power(Regime(spec.regime), v, params)
                except DomainError as exc:
                    raise DomainError(f"sweep cell n={n}, v={v} m/s: {exc}") from None
            rows.append((n, v, power))
    return rows


def default_sweep_spec(regime: str, rotor_counts: tuple[int, ...] = (4, 6, 8, 10, 12),
                       ratio: float | None = None) -> SweepSpec:
    """The stock sweep grid for a regime.

    Forward: 0..15 m/s step 1.  Ascent: 0..6 step 0.5.  Descent: 0..2.5
    step 0.5 (the zero-thrust bound tightens as rotors are added; 2.5 m/s
    is feasible for the whole stock rotor set, while 3 m/s would already
    violate the 12-rotor domain).  Mixed regimes use total speeds 0..15
    step 1 (forward-descent stops at 14 for the same domain reason) with
    the conventional ratios 2.5 / 5 unless overridden.
    """
    if regime == "forward":
        speeds = tuple(float(v) for v in range(16))
    elif regime == "ascent":
        speeds = tuple(0.5 * i for i in range(13))
    elif regime == "descent":
        speeds = tuple(0.5 * i for i in range(6))
    elif regime == "forward-ascent":
        speeds = tuple(float(v) for v in range(16))
    elif regime == "forward-descent":
        speeds = tuple(float(v) for v in range(15))
    else:
        raise DomainError(f"sweep regime must be one of {SWEEP_REGIMES}, got {regime!r}")
    if regime in MIXED_RATIOS and ratio is None:
        ratio = MIXED_RATIOS[regime]
    return SweepSpec(rotor_counts=rotor_counts, regime=regime,
                     speeds=speeds, ratio=ratio)


def mission_energy(segments: list[MissionSegment],
                   params: AirframeParams) -> tuple[float, list[SegmentEnergy]]:
    """Total energy (J) of a piecewise-steady mission plus per-segment rows.

    Additive over segments and linear in durations.  Domain violations are
    reported with the offending 1-based segment index.
    """
    if not segments:
        raise DataError("mission needs at least one segment")
    rows: list[SegmentEnergy] = []
    total = 0.0
    for i, seg in enumerate(segments, start=1):
        try:
            power = total_power(seg.v, params).total_w
        except DomainError as exc:
            raise DomainError(f"mission segment {i}: {exc}") from None
        energy = power * seg.duration_s
        total += energy
        rows.append(SegmentEnergy(i, seg.v.v_par, seg.v.v_perp,
                                  seg.duration_s, power, energy))
    return total, rows


def write_sweep_csv(path, rows: list[tuple[int, float, float]]) -> None:
    """Write sweep rows as `n,v_mps,power_w`, 12 significant digits."""
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("n,v_mps,power_w\n")
        for n, v, p in rows:
            fh.write(f"{n},{v:.12g},{p:.12g}\n")


def write_mission_csv(path, rows: list[SegmentEnergy]) -> None:
    """Write per-segment energy rows, 12 significant digits."""
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("segment,v_par,v_perp,duration_s,power_w,energy_j\n")
        for r in rows:
            fh.write(f"{r.segment},{r.v_par:.12g},{r.v_perp:.12g},"
                     f"{r.duration_s:.12g},{r.power_w:.12g},{r.energy_j:.12g}\n")


def read_mission_csv(path) -> list[MissionSegment]:
    """Read mission segments from a `v_par,v_perp,duration_s` CSV."""
    segments: list[MissionSegment] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if tuple(c.strip() for c in first) != ("v_par", "v_perp", "duration_s"):
            raise DataError(f"{path}: line 1: expected header 'v_par,v_perp,duration_s'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                v_par, v_perp, duration = (float(x) for x in row)
                segments.append(MissionSegment(Velocity3(v_par, v_perp), duration))
            except (ValueError, DomainError) as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    return segments
