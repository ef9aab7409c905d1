"""Flight-log ingestion: power computation, rate alignment, speed binning.

Raw logs carry speed at 1 Hz and battery current/voltage at 10 Hz.
Instantaneous power is current times voltage (communication electronics draw
orders of magnitude less than the rotors and are not subtracted).  Alignment
averages the electrical power falling in the 1 s window [t, t+1) after each
speed sample; timestamps may jitter.

Speed normalization: forward-flight speeds are rounded to the nearest
integer m/s (``round_speeds``), matching how commanded speeds are quantized;
vertical runs use commanded half-integer speeds and are snapped with
``bin_speeds(series, 0.5)`` instead.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .models import Regime

__all__ = [
    "SpeedSample",
    "ElectricalSample",
    "AltitudeSample",
    "SpeedPowerSeries",
    "compute_power",
    "align",
    "round_speeds",
    "bin_speeds",
    "trim_vertical_round_trip",
    "slice_samples",
    "read_speed_csv",
    "read_electrical_csv",
    "read_altitude_csv",
    "read_pairs_csv",
    "write_pairs_csv",
]

# A vertical segment counts as constant-rate when the altitude rate stays
# within this band of the segment median for at least the minimum duration.
RATE_BAND = 0.25      # m/s
MIN_SEGMENT = 3.0     # s
CLIMB_THRESHOLD = 0.25  # m/s; slower is treated as hover/ground


@dataclass(frozen=True)
class SpeedSample:
    t: float  # seconds since log start
    v: float  # ground speed, m/s

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t >= 0.0):
            raise DataError(f"sample time must be finite and >= 0, got {self.t}")
        if not (math.isfinite(self.v) and self.v >= 0.0):
            raise DataError(f"speed must be finite and >= 0, got {self.v}")


@dataclass(frozen=True)
class ElectricalSample:
    t: float        # seconds since log start
    current: float  # A
    voltage: float  # V

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t >= 0.0):
            raise DataError(f"sample time must be finite and >= 0, got {self.t}")
        if not (math.isfinite(self.current) and self.current >= 0.0):
            raise DataError(f"current must be finite and >= 0, got {self.current}")
        if not (math.isfinite(self.voltage) and self.voltage > 0.0):
            raise DataError(f"voltage must be finite and > 0, got {self.voltage}")


@dataclass(frozen=True)
class AltitudeSample:
    t: float    # seconds since log start
    alt: float  # m above ground

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t >= 0.0):
            raise DataError(f"sample time must be finite and >= 0, got {self.t}")
        if not math.isfinite(self.alt):
            raise DataError(f"altitude must be finite, got {self.alt}")


@dataclass
class SpeedPowerSeries:
    """Preprocessed (speed, power) observations for one flight regime."""

    regime: Regime
    pairs: list[tuple[float, float]] = field(default_factory=list)
    rounding_applied: bool = False

    def __post_init__(self):
        self.regime = Regime(self.regime)
        if self.regime == Regime.HOVER:
            raise DataError("series regime must be forward, ascent or descent "
                            "(hover points live in the forward series at v=0)")
        for v, p in self.pairs:
            if not (math.isfinite(v) and v >= 0.0):
                raise DataError(f"speed must be finite and >= 0, got {v}")
            if not (math.isfinite(p) and p > 0.0):
                raise DataError(f"power must be finite and > 0, got {p}")
            if self.rounding_applied and v != math.floor(v):
                raise DataError(f"rounded series contains non-integer speed {v}")

    def speeds(self) -> list[float]:
        return [v for v, _ in self.pairs]

    def powers(self) -> list[float]:
        return [p for _, p in self.pairs]


def compute_power(e: ElectricalSample) -> float:
    """Instantaneous electrical power, W (current times voltage)."""
    return e.current * e.voltage


def _check_sorted(times, what: str) -> None:
    for i in range(1, len(times)):
        if times[i] <= times[i - 1]:
            raise DataError(
                f"{what} timestamps must be strictly increasing "
                f"(t[{i - 1}]={times[i - 1]}, t[{i}]={times[i]})"
            )


def align(speed: list[SpeedSample], elec: list[ElectricalSample]) -> list[tuple[float, float]]:
    """Pair each speed sample with the mean power of its 1 s window.

    The window is [t, t+1) keyed to the speed timestamp; at nominal rates it
    holds ten electrical samples.  Windows containing no electrical samples
    are dropped.
    """
    if not speed or not elec:
        raise DataError("align needs nonempty speed and electrical streams")
    _check_sorted([s.t for s in speed], "speed")
    _check_sorted([e.t for e in elec], "electrical")
    et = np.array([e.t for e in elec])
    ep = np.array([e.current * e.voltage for e in elec])
    csum = np.concatenate([[0.0], np.cumsum(ep)])
    out: list[tuple[float, float]] = []
    for s in speed:
        lo = int(np.searchsorted(et, s.t, side="left"))
        hi = int(np.searchsorted(et, s.t + 1.0, side="left"))
        if hi > lo:
            out.append((s.v, float((csum[hi] - csum[lo]) / (hi - lo))))
    return out


def round_speeds(series: SpeedPowerSeries) -> SpeedPowerSeries:
    """Replace every speed with floor(v + 1/2); powers are untouched.

    Intended for forward-flight data, where the pilot-held speed scatters
    around integer setpoints.  Applying it twice is an error.
    """
    if series.rounding_applied:
        raise DataError("speed rounding has already been applied to this series")
    pairs = [(float(math.floor(v + 0.5)), p) for v, p in series.pairs]
    return SpeedPowerSeries(regime=series.regime, pairs=pairs, rounding_applied=True)


def bin_speeds(series: SpeedPowerSeries, step: float) -> SpeedPowerSeries:
    """Snap speeds to the nearest multiple of ``step``; powers untouched.

    Used for vertical runs commanded at half-integer speeds
    (``step=0.5``).  Idempotent, and does not set ``rounding_applied``
    (that flag marks integer rounding specifically).
    """
    if step <= 0.0:
        raise DataError(f"bin step must be > 0, got {step}")
    pairs = [(math.floor(v / step + 0.5) * step, p) for v, p in series.pairs]
    return SpeedPowerSeries(regime=series.regime, pairs=pairs,
                            rounding_applied=series.rounding_applied)


def slice_samples(samples: list, t0: float, t1: float) -> list:
    """Samples with t in [t0, t1], preserving order."""
    return [s for s in samples if t0 <= s.t <= t1]


def _constant_rate_window(t: np.ndarray, rate: np.ndarray,
                          idx: np.ndarray) -> tuple[int, int] | None:
    # Longest contiguous stretch of idx whose rate stays within RATE_BAND of
    # the stretch median, lasting at least MIN_SEGMENT seconds.
    if len(idx) == 0:
        return None
    runs = np.split(idx, np.where(np.diff(idx) != 1)[0] + 1)
    best = None
    for run in runs:
        med = np.median(rate[run])
        ok = run[np.abs(rate[run] - med) < RATE_BAND]
        if len(ok) == 0:
            continue
        subruns = np.split(ok, np.where(np.diff(ok) != 1)[0] + 1)
        for sub in subruns:
            if t[sub[-1]] - t[sub[0]] >= MIN_SEGMENT:
                if best is None or (t[sub[-1]] - t[sub[0]]) > (t[best[1]] - t[best[0]]):
                    best = (int(sub[0]), int(sub[-1]))
    return best


def trim_vertical_round_trip(
    speed: list[SpeedSample],
    elec: list[ElectricalSample],
    alt: list[AltitudeSample],
    h0: float,
    hmax: float,
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Locate the constant-rate ascent and descent windows of a round trip.

    The expected profile is take-off, constant-speed ascent to ``hmax``, a
    hover pause, constant-speed descent to the minimum safe height ``h0``,
    then landing.  Altitude rate is estimated by central differences over
    ~1 s; a window qualifies when the rate stays within 0.25 m/s of its
    median for at least 3 s.  The descent window is clipped to altitudes
    at or above ``h0``.  Returns ((t_asc0, t_asc1), (t_desc0, t_desc1));
    raises DataError when no such profile exists.
    """
    if not speed or not elec:
        raise DataError("trim needs nonempty speed and electrical streams")
    if len(alt) < 5:
        raise DataError("altitude stream too short to detect a round trip")
    _check_sorted([a.t for a in alt], "altitude")
    t = np.array([a.t for a in alt])
    h = np.array([a.alt for a in alt])
    rate = np.empty_like(h)
    rate[1:-1] = (h[2:] - h[:-2]) / (t[2:] - t[:-2])
    rate[0] = rate[1]
    rate[-1] = rate[-2]

    asc = _constant_rate_window(t, rate, np.where(rate > CLIMB_THRESHOLD)[0])
    desc_idx = np.where((rate < -CLIMB_THRESHOLD) & (h >= h0))[0]
    desc = _constant_rate_window(t, rate, desc_idx)
    if asc is None or desc is None:
        raise DataError("vertical round-trip profile not detected "
                        "(need a constant-rate ascent and descent)")
    if t[asc[1]] >= t[desc[0]]:
        raise DataError("vertical round-trip profile not detected "
                        "(ascent must precede descent)")
    if h.max() < 0.8 * hmax:
        raise DataError(
            f"vertical round-trip profile not detected (peak altitude "
            f"{h.max():.3g} m never approached hmax={hmax:.3g} m)"
        )
    return (float(t[asc[0]]), float(t[asc[1]])), (float(t[desc[0]]), float(t[desc[1]]))


def _read_csv(path, header: tuple[str, ...], builder):
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if tuple(c.strip() for c in first) != header:
            raise DataError(
                f"{path}: line 1: expected header {','.join(header)!r}, "
                f"got {','.join(first)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: line {lineno}: expected {len(header)} fields")
            try:
                values = [float(x) for x in row]
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
            try:
                rows.append(builder(*values))
            except DataError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    return rows


def read_speed_csv(path) -> list[SpeedSample]:
    """Read a `t_s,v_mps` CSV into speed samples."""
    samples = _read_csv(path, ("t_s", "v_mps"), SpeedSample)
    _check_sorted([s.t for s in samples], f"{path} speed")
    return samples


def read_electrical_csv(path) -> list[ElectricalSample]:
    """Read a `t_s,current_a,voltage_v` CSV into electrical samples."""
    samples = _read_csv(path, ("t_s", "current_a", "voltage_v"), ElectricalSample)
    _check_sorted([s.t for s in samples], f"{path} electrical")
    return samples


def read_altitude_csv(path) -> list[AltitudeSample]:
    """Read a `t_s,alt_m` CSV into altitude samples."""
    samples = _read_csv(path, ("t_s", "alt_m"), AltitudeSample)
    _check_sorted([s.t for s in samples], f"{path} altitude")
    return samples


def write_pairs_csv(path, pairs: list[tuple[float, float]]) -> None:
    """Write `v_mps,power_w` rows at full double precision, LF line endings."""
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("v_mps,power_w\n")
        for v, p in pairs:
            fh.write(f"{v!r},{p!r}\n")


def read_pairs_csv(path) -> list[tuple[float, float]]:
    """Read a `v_mps,power_w` CSV back into (speed, power) pairs."""
    return _read_csv(path, ("v_mps", "power_w"), lambda v, p: (v, p))
