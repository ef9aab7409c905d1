"""Log ingestion tests: power, alignment, rounding, round-trip trimming."""

import numpy as np
import pytest

from rotorpower import (
    AltitudeSample,
    DataError,
    ElectricalSample,
    Regime,
    SpeedPowerSeries,
    SpeedSample,
    align,
    bin_speeds,
    compute_power,
    round_speeds,
    trim_vertical_round_trip,
)
from rotorpower.telemetry import (
    read_electrical_csv,
    read_pairs_csv,
    read_speed_csv,
    slice_samples,
    write_pairs_csv,
)


class TestComputePower:
    def test_hover_magnitude(self):
        assert compute_power(ElectricalSample(0.0, 10.0, 30.0)) == 300.0

    def test_zero_current(self):
        assert compute_power(ElectricalSample(0.0, 0.0, 22.0)) == 0.0

    def test_arithmetic(self):
        assert compute_power(ElectricalSample(0.0, 12.9, 24.6)) == pytest.approx(
            317.34, rel=1e-12)

    def test_nonpositive_voltage_rejected(self):
        with pytest.raises(DataError):
            ElectricalSample(0.0, 1.0, 0.0)
        with pytest.raises(DataError):
            ElectricalSample(0.0, 1.0, -5.0)


def elec_burst(t0: float, powers, voltage=25.0) -> list[ElectricalSample]:
    """Ten-per-second electrical samples hitting the given powers."""
    return [ElectricalSample(t0 + 0.1 * i, p / voltage, voltage)
            for i, p in enumerate(powers)]


class TestAlign:
    def test_constant_window(self):
        speed = [SpeedSample(10.0, 4.0)]
        elec = elec_burst(10.0, [250.0] * 10)
        assert align(speed, elec) == [(4.0, pytest.approx(250.0, rel=1e-12))]

    def test_mean_of_two(self):
        speed = [SpeedSample(0.0, 1.0)]
        elec = elec_burst(0.0, [290.0, 310.0])
        (v, p), = align(speed, elec)
        assert v == 1.0 and p == pytest.approx(300.0, rel=1e-12)

    def test_empty_window_dropped(self):
        # Three speed windows; the middle one has no electrical coverage.
        speed = [SpeedSample(0.0, 1.0), SpeedSample(1.0, 2.0), SpeedSample(2.0, 3.0)]
        elec = elec_burst(0.0, [100.0] * 10) + elec_burst(2.0, [200.0] * 10)
        out = align(speed, elec)
        assert len(out) == 2
        assert [v for v, _ in out] == [1.0, 3.0]

    def test_window_is_left_closed(self):
        # Sample exactly at t+1 belongs to the next window.
        speed = [SpeedSample(0.0, 1.0), SpeedSample(1.0, 2.0)]
        elec = [ElectricalSample(0.0, 4.0, 25.0), ElectricalSample(1.0, 8.0, 25.0)]
        out = align(speed, elec)
        assert out == [(1.0, pytest.approx(100.0)), (2.0, pytest.approx(200.0))]

    def test_unsorted_rejected(self):
        speed = [SpeedSample(1.0, 1.0), SpeedSample(0.5, 2.0)]
        elec = elec_burst(0.0, [100.0] * 10)
        with pytest.raises(DataError):
            align(speed, elec)

    def test_mean_preserving(self):
        rng = np.random.default_rng(9)
        speed = [SpeedSample(float(t), float(rng.uniform(0, 15))) for t in range(60)]
        elec = []
        for t in range(60):
            # ragged sample counts and +-10% timing jitter
            k = int(rng.integers(4, 14))
            for i in range(k):
                ts = t + (i + rng.uniform(-0.1, 0.1)) / k
                elec.append(ElectricalSample(max(0.0, ts), float(rng.uniform(5, 15)), 24.0))
        elec.sort(key=lambda e: e.t)
        elec = [e for i, e in enumerate(elec) if i == 0 or e.t > elec[i - 1].t]
        out = align(speed, elec)
        et = np.array([e.t for e in elec])
        ep = np.array([e.current * e.voltage for e in elec])
        total_emitted = 0.0
        total_raw = 0.0
        j = 0
        for s in speed:
            lo, hi = np.searchsorted(et, [s.t, s.t + 1.0], side="left")
            if hi > lo:
                total_emitted += out[j][1] * (hi - lo)
                total_raw += ep[lo:hi].sum()
                j += 1
        assert j == len(out)
        assert total_emitted == pytest.approx(total_raw, rel=1e-9)


class TestRounding:
    def make(self, speeds):
        return SpeedPowerSeries(regime=Regime.FORWARD,
                                pairs=[(v, 100.0 + i) for i, v in enumerate(speeds)])

    def test_half_rounds_up(self):
        out = round_speeds(self.make([9.49, 9.5]))
        assert [v for v, _ in out.pairs] == [9.0, 10.0]

    def test_low_speed_joins_hover_bin(self):
        out = round_speeds(self.make([0.4]))
        assert out.pairs[0][0] == 0.0

    def test_cluster_collapses(self):
        out = round_speeds(self.make([2.9, 3.0, 3.1]))
        assert [v for v, _ in out.pairs] == [3.0, 3.0, 3.0]

    def test_powers_untouched_and_shift_bounded(self):
        speeds = [0.26, 3.71, 9.5, 14.49]
        series = self.make(speeds)
        out = round_speeds(series)
        assert [p for _, p in out.pairs] == [p for _, p in series.pairs]
        for (v_new, _), v_old in zip(out.pairs, speeds):
            assert abs(v_new - v_old) <= 0.5

    def test_double_application_rejected(self):
        out = round_speeds(self.make([1.2]))
        assert out.rounding_applied
        with pytest.raises(DataError):
            round_speeds(out)

    def test_bin_speeds_half_metre(self):
        series = SpeedPowerSeries(regime=Regime.ASCENT,
                                  pairs=[(1.7, 100.0), (1.76, 100.0), (0.2, 100.0)])
        out = bin_speeds(series, 0.5)
        assert [v for v, _ in out.pairs] == [1.5, 2.0, 0.0]
        # idempotent
        again = bin_speeds(out, 0.5)
        assert again.pairs == out.pairs

    def test_rounded_series_enforces_integer_speeds(self):
        with pytest.raises(DataError):
            SpeedPowerSeries(regime=Regime.FORWARD, pairs=[(1.5, 10.0)],
                             rounding_applied=True)

    def test_nonpositive_power_rejected(self):
        with pytest.raises(DataError):
            SpeedPowerSeries(regime=Regime.FORWARD, pairs=[(1.0, 0.0)])


def trapezoid_altitude(rate=2.0, hmax=110.0, hover_s=10.0, h0=2.0):
    """1 Hz altitude log: ground, ascent, hover, descent to ground."""
    alt = []
    t = 0.0
    h = 0.0
    for _ in range(5):  # ground idle
        alt.append(AltitudeSample(t, 0.0))
        t += 1.0
    while h < hmax:  # constant-rate ascent
        h = min(hmax, h + rate)
        alt.append(AltitudeSample(t, h))
        t += 1.0
    for _ in range(int(hover_s)):  # hover at ceiling
        alt.append(AltitudeSample(t, hmax))
        t += 1.0
    while h > h0:  # constant-rate descent to the safety height
        h = max(0.0, h - rate)
        alt.append(AltitudeSample(t, h))
        t += 1.0
    while h > 0.0:  # slow landing
        h = max(0.0, h - 0.5)
        alt.append(AltitudeSample(t, h))
        t += 1.0
    alt.append(AltitudeSample(t, 0.0))
    return alt


class TestTrim:
    def streams(self, alt):
        t_end = alt[-1].t
        speed = [SpeedSample(float(t), 2.0) for t in range(int(t_end) + 1)]
        elec = [ElectricalSample(0.1 * i, 12.0, 25.0)
                for i in range(int(t_end * 10) + 1)]
        return speed, elec

    def test_trapezoid_windows_recovered(self):
        alt = trapezoid_altitude()
        speed, elec = self.streams(alt)
        (a0, a1), (d0, d1) = trim_vertical_round_trip(speed, elec, alt,
                                                      h0=2.0, hmax=110.0)
        # construction: ascent spans t=5..59, hover to t=69, descent t=70..123
        assert a0 == pytest.approx(5.0, abs=1.0)
        assert a1 == pytest.approx(59.0, abs=1.0)
        assert d0 == pytest.approx(70.0, abs=1.0)
        assert d1 == pytest.approx(123.0, abs=1.0)

    def test_descent_window_respects_safety_height(self):
        alt = trapezoid_altitude(h0=2.0)
        speed, elec = self.streams(alt)
        _, (d0, d1) = trim_vertical_round_trip(speed, elec, alt, h0=2.0, hmax=110.0)
        by_t = {a.t: a.alt for a in alt}
        assert by_t[d1] >= 2.0

    def test_ascent_only_rejected(self):
        alt = [AltitudeSample(float(t), 2.0 * t) for t in range(60)]
        speed, elec = self.streams(alt)
        with pytest.raises(DataError):
            trim_vertical_round_trip(speed, elec, alt, h0=2.0, hmax=110.0)

    def test_hover_only_rejected(self):
        alt = [AltitudeSample(float(t), 50.0) for t in range(120)]
        speed, elec = self.streams(alt)
        with pytest.raises(DataError):
            trim_vertical_round_trip(speed, elec, alt, h0=2.0, hmax=110.0)

    def test_slice_samples(self):
        samples = [SpeedSample(float(t), 1.0) for t in range(10)]
        out = slice_samples(samples, 2.0, 5.0)
        assert [s.t for s in out] == [2.0, 3.0, 4.0, 5.0]


class TestCsvIO:
    def test_pairs_round_trip_full_precision(self, tmp_path):
        pairs = [(0.1 + 0.1 * i, 100.0 / 3.0 + i) for i in range(5)]
        path = tmp_path / "pairs.csv"
        write_pairs_csv(path, pairs)
        assert read_pairs_csv(path) == pairs

    def test_pairs_bytes_deterministic(self, tmp_path):
        pairs = [(1.0, 200.123456789)]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_pairs_csv(p1, pairs)
        write_pairs_csv(p2, pairs)
        assert p1.read_bytes() == p2.read_bytes()
        assert b"\r" not in p1.read_bytes()

    def test_speed_csv_parses(self, tmp_path):
        path = tmp_path / "speed.csv"
        path.write_text("t_s,v_mps\n0.0,1.5\n1.0,2.5\n")
        samples = read_speed_csv(path)
        assert [(s.t, s.v) for s in samples] == [(0.0, 1.5), (1.0, 2.5)]

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "speed.csv"
        path.write_text("time,speed\n0.0,1.5\n")
        with pytest.raises(DataError, match="line 1"):
            read_speed_csv(path)

    def test_bad_value_reports_line(self, tmp_path):
        path = tmp_path / "elec.csv"
        path.write_text("t_s,current_a,voltage_v\n0.0,1.0,25.0\n0.1,oops,25.0\n")
        with pytest.raises(DataError, match="line 3"):
            read_electrical_csv(path)

    def test_unsorted_time_rejected(self, tmp_path):
        path = tmp_path / "speed.csv"
        path.write_text("t_s,v_mps\n1.0,1.5\n0.5,2.5\n")
        with pytest.raises(DataError):
            read_speed_csv(path)
