"""Combined-model and fitting tests.

The synthetic-data generators double as their own oracles: fits must
reproduce the generating curve, not just the sampled points.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from rotorpower import (
    CombinedParams,
    DataError,
    DomainError,
    FitOptions,
    Regime,
    SpeedPowerSeries,
    ascent_power,
    descent_power,
    error_metrics,
    eval_ascent_combined,
    eval_descent_combined,
    eval_forward_combined,
    fit_forward,
    fit_vertical,
    forward_power,
    heuristic_forward_init,
    heuristic_vertical_init,
    per_speed_medians,
    physical_to_combined,
)
from rotorpower.fitting import LOG_FLOOR


@pytest.fixture
def truth(quad) -> CombinedParams:
    return physical_to_combined(quad)


def forward_series(params: CombinedParams, speeds) -> SpeedPowerSeries:
    return SpeedPowerSeries(
        regime=Regime.FORWARD,
        pairs=[(float(v), eval_forward_combined(float(v), params)) for v in speeds],
    )


def vertical_series(params: CombinedParams, asc_speeds, desc_speeds):
    asc = SpeedPowerSeries(
        regime=Regime.ASCENT,
        pairs=[(float(v), eval_ascent_combined(float(v), params)) for v in asc_speeds],
    )
    desc = SpeedPowerSeries(
        regime=Regime.DESCENT,
        pairs=[(float(v), eval_descent_combined(float(v), params)) for v in desc_speeds],
    )
    return asc, desc


class TestPhysicalToCombined:
    def test_reference_values(self, truth):
        assert truth.c7 == pytest.approx(10.0, rel=1e-15)
        assert truth.c9 == pytest.approx(0.999808, rel=1e-12)
        assert truth.c4 == pytest.approx(80.01125, rel=1e-12)
        assert truth.c1 == pytest.approx(133.98310673620625, rel=1e-12)
        assert truth.c3 == pytest.approx(70.20930447252293, rel=1e-12)
        assert truth.c6 == pytest.approx(204.1924112087292, rel=1e-12)
        assert truth.c8 == pytest.approx(0.440336, rel=1e-12)
        assert truth.c5 == pytest.approx(0.021024, rel=1e-12)

    def test_forward_equivalence_grid(self, quad, truth):
        for v in np.arange(0.0, 15.0 + 1e-9, 0.1):
            physical = forward_power(float(v), quad).total_w
            combined = eval_forward_combined(float(v), truth)
            assert combined == pytest.approx(physical, rel=1e-9)

    def test_vertical_equivalence_grid(self, quad, truth):
        for v in np.arange(0.0, 4.7 + 1e-9, 0.1):
            assert eval_ascent_combined(float(v), truth) == pytest.approx(
                ascent_power(float(v), quad).total_w, rel=1e-9)
            assert eval_descent_combined(float(v), truth) == pytest.approx(
                descent_power(float(v), quad).total_w, rel=1e-9)


class TestEvalCombined:
    def test_forward_intercept(self, truth):
        assert eval_forward_combined(0.0, truth) == pytest.approx(
            truth.c1 + truth.c3, rel=1e-14)

    def test_forward_degenerate_constant(self):
        p = CombinedParams(c1=123.0, c2=0.0, c3=0.0, c4=10.0, c5=0.0,
                           c6=1.0, c7=1.0, c8=0.0, c9=1.0)
        for v in (0.0, 5.0, 20.0):
            assert eval_forward_combined(v, p) == pytest.approx(123.0, rel=1e-14)

    def test_vertical_shared_intercept(self, truth):
        expect = truth.c6 + 2.0 * truth.c7 * math.sqrt(truth.c7 / truth.c9)
        assert eval_ascent_combined(0.0, truth) == pytest.approx(expect, rel=1e-12)
        assert eval_descent_combined(0.0, truth) == pytest.approx(expect, rel=1e-12)
        assert expect == pytest.approx(267.44403685965074, rel=1e-12)

    def test_ascent_exceeds_descent(self, truth):
        for v in np.arange(0.1, 3.01, 0.1):
            assert eval_ascent_combined(float(v), truth) > eval_descent_combined(float(v), truth)

    def test_descent_radicand_violation_raises(self, truth):
        # radicand root sits at 7.25 m/s for the reference mapping
        with pytest.raises(DomainError):
            eval_descent_combined(8.0, truth)

    def test_negative_speed_rejected(self, truth):
        for fn in (eval_forward_combined, eval_ascent_combined, eval_descent_combined):
            with pytest.raises(DomainError):
                fn(-1.0, truth)


class TestFitForward:
    def test_noiseless_recovery(self, truth):
        data = forward_series(truth, range(16))
        init = replace(truth, c1=truth.c1 * 1.3, c2=truth.c2 * 0.5,
                       c3=truth.c3 * 0.8, c4=truth.c4 * 1.4, c5=truth.c5 * 0.6)
        res = fit_forward(data, init)
        assert res.converged
        assert res.sse <= 1e-12
        for v in np.arange(0.0, 15.0 + 1e-9, 0.1):
            assert eval_forward_combined(float(v), res.params) == pytest.approx(
                eval_forward_combined(float(v), truth), rel=1e-3)

    def test_idempotent_at_truth(self, truth):
        data = forward_series(truth, range(16))
        res = fit_forward(data, truth)
        assert res.sse <= 1e-12
        for key in ("c1", "c2", "c3", "c4", "c5"):
            assert getattr(res.params, key) == pytest.approx(
                getattr(truth, key), rel=1e-8)

    def test_constant_data_degenerates_to_intercept(self):
        data = SpeedPowerSeries(regime=Regime.FORWARD,
                                pairs=[(float(v), 300.0) for v in range(11)])
        init = CombinedParams(c1=250.0, c2=LOG_FLOOR, c3=LOG_FLOOR, c4=50.0,
                              c5=LOG_FLOOR, c6=1.0, c7=1.0, c8=1.0, c9=1.0)
        res = fit_forward(data, init)
        assert res.params.c1 == pytest.approx(300.0, rel=1e-3)

    def test_noisy_monte_carlo(self, truth):
        rng = np.random.default_rng(123)
        vs = rng.uniform(0.0, 15.0, 500)
        ps = np.array([eval_forward_combined(float(v), truth) for v in vs])
        ps = ps + rng.normal(0.0, 5.0, 500)
        data = SpeedPowerSeries(regime=Regime.FORWARD,
                                pairs=list(zip(vs.tolist(), ps.tolist())))
        init = replace(truth, c1=truth.c1 * 1.2, c3=truth.c3 * 0.9)
        res = fit_forward(data, init, FitOptions(seed=123))
        grid = np.arange(0.0, 15.0 + 1e-9, 0.1)
        curve_err = np.sqrt(np.mean([
            (eval_forward_combined(float(v), res.params)
             - eval_forward_combined(float(v), truth)) ** 2 for v in grid]))
        assert res.converged
        assert curve_err <= 2.0

    def test_sse_never_increases_from_init(self, truth):
        rng = np.random.default_rng(5)
        vs = rng.uniform(0.0, 15.0, 120)
        ps = np.array([eval_forward_combined(float(v), truth) for v in vs])
        ps = ps + rng.normal(0.0, 8.0, len(vs))
        data = SpeedPowerSeries(regime=Regime.FORWARD,
                                pairs=list(zip(vs.tolist(), ps.tolist())))
        for scale in (1.0, 1.5, 0.4):
            init = replace(truth, c1=truth.c1 * scale, c3=truth.c3 / scale)
            sse0 = sum((p - eval_forward_combined(v, init)) ** 2 for v, p in data.pairs)
            res = fit_forward(data, init)
            assert res.sse <= sse0 + 1e-9

    def test_determinism(self, truth):
        rng = np.random.default_rng(11)
        vs = rng.uniform(0.0, 15.0, 200)
        ps = np.array([eval_forward_combined(float(v), truth) for v in vs])
        ps = ps + rng.normal(0.0, 5.0, len(vs))
        data = SpeedPowerSeries(regime=Regime.FORWARD,
                                pairs=list(zip(vs.tolist(), ps.tolist())))
        init = replace(truth, c1=truth.c1 * 1.1)
        a = fit_forward(data, init, FitOptions(seed=7))
        b = fit_forward(data, init, FitOptions(seed=7))
        for key in ("c1", "c2", "c3", "c4", "c5"):
            assert (format(getattr(a.params, key), ".12g")
                    == format(getattr(b.params, key), ".12g"))
        assert a.sse == b.sse and a.iterations == b.iterations

    def test_too_few_distinct_speeds_rejected(self, truth):
        data = forward_series(truth, [0, 1, 2, 3, 4])
        with pytest.raises(DataError):
            fit_forward(data, truth)

    def test_non_finite_data_rejected(self, truth):
        data = forward_series(truth, range(8))
        data.pairs[3] = (float("nan"), 100.0)
        with pytest.raises(DataError):
            fit_forward(data, truth)

    def test_heuristic_init_recovers(self, truth):
        rng = np.random.default_rng(21)
        vs = rng.uniform(0.0, 15.0, 300)
        ps = np.array([eval_forward_combined(float(v), truth) for v in vs])
        ps = ps + rng.normal(0.0, 5.0, len(vs))
        data = SpeedPowerSeries(regime=Regime.FORWARD,
                                pairs=list(zip(vs.tolist(), ps.tolist())))
        res = fit_forward(data, heuristic_forward_init(data))
        assert res.converged
        grid = np.arange(0.0, 15.0 + 1e-9, 0.5)
        curve_err = np.sqrt(np.mean([
            (eval_forward_combined(float(v), res.params)
             - eval_forward_combined(float(v), truth)) ** 2 for v in grid]))
        assert curve_err <= 3.0


class TestFitVertical:
    def test_joint_noiseless_recovery(self, truth):
        asc, desc = vertical_series(truth, np.arange(0.0, 5.01, 0.5),
                                    np.arange(0.0, 3.01, 0.5))
        init = replace(truth, c6=truth.c6 * 1.2, c7=truth.c7 * 0.7,
                       c8=truth.c8 * 1.5, c9=truth.c9 * 0.8)
        res = fit_vertical(asc, desc, init)
        assert res.converged and res.sse <= 1e-12
        for v in np.arange(0.0, 5.0 + 1e-9, 0.1):
            assert eval_ascent_combined(float(v), res.params) == pytest.approx(
                eval_ascent_combined(float(v), truth), rel=1e-3)
        for v in np.arange(0.0, 3.0 + 1e-9, 0.1):
            assert eval_descent_combined(float(v), res.params) == pytest.approx(
                eval_descent_combined(float(v), truth), rel=1e-3)

    def test_empty_descent_rejected(self, truth):
        asc, _ = vertical_series(truth, np.arange(0.0, 5.01, 0.5), [])
        empty = SpeedPowerSeries(regime=Regime.DESCENT, pairs=[])
        with pytest.raises(DataError):
            fit_vertical(asc, empty, truth)

    def test_too_few_distinct_speeds_rejected(self, truth):
        asc, desc = vertical_series(truth, [0.0, 1.0], [0.0, 2.0])
        with pytest.raises(DataError):
            fit_vertical(asc, desc, truth)

    def test_rmse_field_matches_recomputation(self, truth):
        rng = np.random.default_rng(77)
        va = np.arange(0.0, 5.01, 0.5)
        vd = np.arange(0.0, 3.01, 0.5)
        asc = SpeedPowerSeries(regime=Regime.ASCENT, pairs=[
            (float(v), eval_ascent_combined(float(v), truth) + float(rng.normal(0, 5)))
            for v in va])
        desc = SpeedPowerSeries(regime=Regime.DESCENT, pairs=[
            (float(v), eval_descent_combined(float(v), truth) + float(rng.normal(0, 5)))
            for v in vd])
        res = fit_vertical(asc, desc, truth)
        resid = [p - eval_ascent_combined(v, res.params) for v, p in asc.pairs]
        resid += [p - eval_descent_combined(v, res.params) for v, p in desc.pairs]
        rmse = math.sqrt(sum(r * r for r in resid) / len(resid))
        assert res.rmse == pytest.approx(rmse, abs=1e-9)
        assert res.n_points == len(resid)

    def test_heuristic_init_recovers(self, truth, quad):
        asc, desc = vertical_series(truth, np.arange(0.0, 5.01, 0.5),
                                    np.arange(0.0, 3.01, 0.5))
        res = fit_vertical(asc, desc,
                           heuristic_vertical_init(asc, desc, weight_hint=quad.weight_w))
        assert res.converged
        assert res.rmse <= 1.0


class TestErrorMetrics:
    def test_interpolating_model_is_zero(self, truth):
        data = forward_series(truth, range(8))
        mae, rmse = error_metrics(data, lambda v: eval_forward_combined(v, truth))
        assert mae == pytest.approx(0.0, abs=1e-12)
        assert rmse == pytest.approx(0.0, abs=1e-12)

    def test_constant_offset(self):
        data = SpeedPowerSeries(regime=Regime.FORWARD,
                                pairs=[(v, 102.0) for v in (1.0, 2.0, 3.0)])
        mae, rmse = error_metrics(data, lambda v: 100.0)
        assert mae == pytest.approx(2.0, rel=1e-15)
        assert rmse == pytest.approx(2.0, rel=1e-15)

    def test_hand_arithmetic(self):
        # residuals {+3, -1}: MAE = 2, RMSE = sqrt(5)
        data = SpeedPowerSeries(regime=Regime.FORWARD,
                                pairs=[(1.0, 103.0), (2.0, 99.0)])
        mae, rmse = error_metrics(data, lambda v: 100.0)
        assert mae == pytest.approx(2.0, rel=1e-15)
        assert rmse == pytest.approx(math.sqrt(5.0), rel=1e-15)

    def test_mae_never_exceeds_rmse(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            k = int(rng.integers(1, 40))
            powers = rng.uniform(50.0, 400.0, k)
            data = SpeedPowerSeries(regime=Regime.FORWARD, pairs=[
                (float(i), float(p)) for i, p in enumerate(powers)])
            mae, rmse = error_metrics(data, lambda v: 200.0)
            assert mae <= rmse + 1e-12

    def test_empty_rejected(self):
        empty = SpeedPowerSeries(regime=Regime.FORWARD, pairs=[])
        with pytest.raises(DataError):
            error_metrics(empty, lambda v: 0.0)

    def test_per_speed_medians(self):
        data = SpeedPowerSeries(regime=Regime.FORWARD, pairs=[
            (1.0, 100.0), (1.0, 110.0), (1.0, 300.0), (2.0, 50.0)])
        assert per_speed_medians(data) == [(1.0, 110.0), (2.0, 50.0)]


class TestFitResultSerialization:
    def test_key_value_block(self, truth):
        data = forward_series(truth, range(16))
        res = fit_forward(data, truth)
        block = res.to_key_value()
        lines = dict(line.split("=", 1) for line in block.strip().splitlines())
        assert set(lines) == {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8",
                              "c9", "regime", "sse", "mae", "rmse", "n_points",
                              "converged", "iterations"}
        assert lines["regime"] == "forward"
        assert lines["converged"] == "true"
        assert float(lines["c1"]) == res.params.c1  # repr round-trips

    def test_csv_row(self, truth):
        data = forward_series(truth, range(16))
        res = fit_forward(data, truth)
        header = res.csv_header().split(",")
        row = res.to_csv_row().split(",")
        assert len(header) == len(row) == 16
        assert row[header.index("n_points")] == "16"
