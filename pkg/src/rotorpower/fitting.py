"""Combined-parameter power models and least-squares fitting.

The physical models are over-parameterized for curve fitting: several
constants only ever appear in fixed products, so measured speed-power data
cannot identify them individually.  This module regroups them into nine
identifiable combined parameters:

* forward flight   P(V) = C1 + C2 V^2 + C3 (sqrt(1 + V^4/C4^2) - V^2/C4)^(1/2) + C5 V^3
* vertical ascent  P(V) = C6 + C7 V + C8 V^3 + (C7 + C8 V^2) sqrt((1 + 4 C8/C9) V^2 + 4 C7/C9)
* vertical descent P(V) = C6 + C7 V - C8 V^3 + (C7 - C8 V^2) sqrt((1 - 4 C8/C9) V^2 + 4 C7/C9)

``physical_to_combined`` gives the exact mapping from airframe constants;
fitting recovers C1..C5 from forward data and C6..C9 jointly from ascent and
descent data (both vertical models share C6..C9, so they are fitted on the
summed objective).

The optimizer is damped least squares (scipy's trust-region reflective) over
the logarithms of the parameters, which enforces positivity without
constraint machinery.  Descent iterates that would make the model's radicand
negative at a data speed are kept feasible-by-clamping and charged a large
finite penalty (1e12 per unit of violation) so the search space stays
connected.  Everything is deterministic for fixed inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import least_squares

from .errors import DataError, DomainError
from .models import AirframeParams, _hover_split
from .telemetry import SpeedPowerSeries

__all__ = [
    "CombinedParams",
    "FitOptions",
    "FitResult",
    "eval_forward_combined",
    "eval_ascent_combined",
    "eval_descent_combined",
    "physical_to_combined",
    "fit_forward",
    "fit_vertical",
    "error_metrics",
    "per_speed_medians",
    "heuristic_forward_init",
    "heuristic_vertical_init",
]

# Floor substituted for zero entries before the log transform; doubles as the
# "lower bound" of non-negative parameters during fitting.
LOG_FLOOR = 1e-12

# SSE penalty per unit of descent-radicand violation.
PENALTY_WEIGHT = 1e12

# Relative finite-difference step for the numeric Jacobian.
DIFF_STEP = 1e-6


@dataclass(frozen=True)
class CombinedParams:
    """The nine combined model parameters.

    c1..c5 parameterize the forward model, c6..c9 the ascent/descent pair.
    Units are whatever makes each term come out in Watts for speeds in m/s.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    c7: float
    c8: float
    c9: float

    def forward_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4, self.c5])

    def vertical_array(self) -> np.ndarray:
        return np.array([self.c6, self.c7, self.c8, self.c9])


@dataclass(frozen=True)
class FitOptions:
    """Convergence controls for the least-squares fits.

    ``tol`` is the relative SSE improvement per iteration below which the
    fit is declared converged; the parameter-step tolerance is fixed at
    1e-10.  ``seed`` takes part in the determinism contract (identical
    inputs including the seed give identical results); the fitter itself
    is deterministic and does not consume it.
    """

    tol: float = 1e-10
    max_iters: int = 10000
    seed: int | None = None


@dataclass(frozen=True)
class FitResult:
    """Outcome of a least-squares fit."""

    params: CombinedParams
    regime: str              # "forward" or "vertical_pair"
    sse: float               # sum of squared residuals, W^2
    mae: float               # mean absolute residual, W
    rmse: float              # sqrt(sse / n_points), W
    n_points: int
    converged: bool
    iterations: int          # objective evaluations consumed

    _KEYS = ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9",
             "regime", "sse", "mae", "rmse", "n_points", "converged",
             "iterations")

    def _values(self, float_fmt) -> list[str]:
        p = self.params
        out = [float_fmt(getattr(p, k)) for k in self._KEYS[:9]]
        out += [self.regime, float_fmt(self.sse), float_fmt(self.mae),
                float_fmt(self.rmse), str(self.n_points),
                "true" if self.converged else "false", str(self.iterations)]
        return out

    def to_key_value(self) -> str:
        """Flat key=value text block, one line per field, full precision."""
        vals = self._values(repr)
        return "\n".join(f"{k}={v}" for k, v in zip(self._KEYS, vals)) + "\n"

    @classmethod
    def csv_header(cls) -> str:
        return ",".join(cls._KEYS)

    def to_csv_row(self) -> str:
        return ",".join(self._values(lambda x: format(x, ".12g")))


def _induced_factor(v2_over_c4):
    # (sqrt(1 + x^2) - x)^(1/2) via 1/(sqrt(1 + x^2) + x): positive and
    # cancellation-free for all x >= 0.
    x = v2_over_c4
    return np.sqrt(1.0 / (np.sqrt(1.0 + x * x) + x))


def _forward_model(v, c1, c2, c3, c4, c5):
    v = np.asarray(v, dtype=float)
    return c1 + c2 * v * v + c3 * _induced_factor(v * v / c4) + c5 * v ** 3


def _ascent_model(v, c6, c7, c8, c9):
    v = np.asarray(v, dtype=float)
    root = np.sqrt((1.0 + 4.0 * c8 / c9) * v * v + 4.0 * c7 / c9)
    return c6 + c7 * v + c8 * v ** 3 + (c7 + c8 * v * v) * root


def _descent_radicand(v, c7, c8, c9):
    v = np.asarray(v, dtype=float)
    return (1.0 - 4.0 * c8 / c9) * v * v + 4.0 * c7 / c9


def _descent_model_clamped(v, c6, c7, c8, c9):
    v = np.asarray(v, dtype=float)
    rad = np.maximum(_descent_radicand(v, c7, c8, c9), 0.0)
    return c6 + c7 * v - c8 * v ** 3 + (c7 - c8 * v * v) * np.sqrt(rad)


def eval_forward_combined(v: float, p: CombinedParams) -> float:
    """Forward-flight combined model at speed ``v`` m/s, W."""
    if v < 0.0:
        raise DomainError(f"speed must be >= 0, got {v}")
    return float(_forward_model(v, p.c1, p.c2, p.c3, p.c4, p.c5))


def eval_ascent_combined(v: float, p: CombinedParams) -> float:
    """Vertical-ascent combined model at speed ``v`` m/s, W."""
    if v < 0.0:
        raise DomainError(f"speed must be >= 0, got {v}")
    return float(_ascent_model(v, p.c6, p.c7, p.c8, p.c9))


def eval_descent_combined(v: float, p: CombinedParams) -> float:
    """Vertical-descent combined model at speed ``v`` m/s, W."""
    if v < 0.0:
        raise DomainError(f"speed must be >= 0, got {v}")
    rad = float(_descent_radicand(v, p.c7, p.c8, p.c9))
    if rad < 0.0:
        raise DomainError(
            f"descent radicand (1 - 4*c8/c9)*v^2 + 4*c7/c9 = {rad:.6g} < 0 "
            f"at v = {v}; model undefined"
        )
    return float(_descent_model_clamped(v, p.c6, p.c7, p.c8, p.c9))


def physical_to_combined(params: AirframeParams) -> CombinedParams:
    """Exact combined parameters implied by a physical parameter set.

    By construction the combined models evaluated at the result coincide
    with the physical models for every valid speed.
    """
    blade_h, induced_h = _hover_split(params)
    n, rho, a = params.n, params.rho, params.disc_area_a
    v0 = params.v0
    return CombinedParams(
        c1=blade_h,
        c2=0.375 * params.profile_drag_delta
           * math.sqrt(params.weight_w * n * rho * a / params.thrust_coeff_ct)
           * params.solidity_s,
        c3=induced_h,
        c4=2.0 * v0 * v0,
        c5=0.5 * n * params.s_fp_par * rho,
        c6=blade_h + induced_h,
        c7=0.5 * params.weight_w,
        c8=0.25 * n * params.s_fp_perp * rho,
        c9=n * rho * a,
    )


def _series_arrays(data: SpeedPowerSeries) -> tuple[np.ndarray, np.ndarray]:
    vs = np.array([v for v, _ in data.pairs], dtype=float)
    ps = np.array([p for _, p in data.pairs], dtype=float)
    if not (np.all(np.isfinite(vs)) and np.all(np.isfinite(ps))):
        raise DataError("speed-power data contains non-finite values")
    return vs, ps


def _log_init(values: np.ndarray, names: tuple[str, ...]) -> np.ndarray:
    for name, value in zip(names, values):
        if value < 0.0 or not np.isfinite(value):
            raise DomainError(f"initial {name} must be >= 0 and finite, got {value}")
    return np.log(np.maximum(values, LOG_FLOOR))


def _run_least_squares(residual_fn, theta0, opts: FitOptions):
    return least_squares(
        residual_fn,
        theta0,
        method="trf",
        ftol=opts.tol,
        xtol=1e-10,
        gtol=1e-14,
        diff_step=DIFF_STEP,
        max_nfev=opts.max_iters,
    )


def fit_forward(data: SpeedPowerSeries, init: CombinedParams,
                opts: FitOptions | None = None) -> FitResult:
    """Fit C1..C5 to forward-flight speed-power data by least squares.

    Needs at least 6 distinct speed values.  Returns best-so-far with
    ``converged=False`` when the iteration budget runs out.  C6..C9 are
    passed through from ``init`` untouched.
    """
    opts = opts or FitOptions()
    vs, ps = _series_arrays(data)
    if len(set(vs.tolist())) < 6:
        raise DataError(
            f"forward fit needs >= 6 distinct speeds, got {len(set(vs.tolist()))}"
        )
    theta0 = _log_init(init.forward_array(), ("c1", "c2", "c3", "c4", "c5"))

    def residuals(theta):
        c1, c2, c3, c4, c5 = np.exp(np.clip(theta, -300.0, 300.0))
        return ps - _forward_model(vs, c1, c2, c3, c4, c5)

    res = _run_least_squares(residuals, theta0, opts)
    c1, c2, c3, c4, c5 = (float(x) for x in np.exp(res.x))
    fitted = replace(init, c1=c1, c2=c2, c3=c3, c4=c4, c5=c5)
    final = ps - _forward_model(vs, c1, c2, c3, c4, c5)
    return _make_result(fitted, "forward", final, res)


def fit_vertical(ascent: SpeedPowerSeries, descent: SpeedPowerSeries,
                 init: CombinedParams,
                 opts: FitOptions | None = None) -> FitResult:
    """Fit C6..C9 jointly to ascent and descent data.

    Both vertical models share the same parameters, so the two sums of
    squares are minimized together.  Each series must be nonempty and the
    pooled data must contain at least 5 distinct speeds.  Residuals and
    metrics are computed with the descent radicand clamped at zero; clamped
    points additionally incur the infeasibility penalty during the search.
    """
    opts = opts or FitOptions()
    va, pa = _series_arrays(ascent)
    vd, pd = _series_arrays(descent)
    if len(va) == 0 or len(vd) == 0:
        raise DataError("vertical fit needs nonempty ascent and descent series")
    distinct = len(set(va.tolist()) | set(vd.tolist()))
    if distinct < 5:
        raise DataError(f"vertical fit needs >= 5 distinct speeds, got {distinct}")
    theta0 = _log_init(init.vertical_array(), ("c6", "c7", "c8", "c9"))

    def residuals(theta):
        c6, c7, c8, c9 = np.exp(np.clip(theta, -300.0, 300.0))
        ra = pa - _ascent_model(va, c6, c7, c8, c9)
        rd = pd - _descent_model_clamped(vd, c6, c7, c8, c9)
        violation = np.maximum(0.0, -_descent_radicand(vd, c7, c8, c9))
        penalty = np.sqrt(PENALTY_WEIGHT * violation)
        return np.concatenate([ra, rd, penalty])

    res = _run_least_squares(residuals, theta0, opts)
    c6, c7, c8, c9 = (float(x) for x in np.exp(res.x))
    fitted = replace(init, c6=c6, c7=c7, c8=c8, c9=c9)
    final = np.concatenate([
        pa - _ascent_model(va, c6, c7, c8, c9),
        pd - _descent_model_clamped(vd, c6, c7, c8, c9),
    ])
    return _make_result(fitted, "vertical_pair", final, res)


def _make_result(params: CombinedParams, regime: str,
                 residuals: np.ndarray, res) -> FitResult:
    n = len(residuals)
    sse = float(np.dot(residuals, residuals))
    return FitResult(
        params=params,
        regime=regime,
        sse=sse,
        mae=float(np.mean(np.abs(residuals))),
        rmse=math.sqrt(sse / n),
        n_points=n,
        converged=res.status > 0,
        iterations=int(res.nfev),
    )


def error_metrics(data: SpeedPowerSeries, model) -> tuple[float, float]:
    """(MAE, RMSE) in Watts of ``model`` (a speed -> power callable) on data."""
    if not data.pairs:
        raise DataError("cannot compute error metrics on an empty series")
    residuals = np.array([p - model(v) for v, p in data.pairs], dtype=float)
    mae = float(np.mean(np.abs(residuals)))
    rmse = float(np.sqrt(np.mean(residuals ** 2)))
    return mae, rmse


def per_speed_medians(data: SpeedPowerSeries) -> list[tuple[float, float]]:
    """Median power per distinct speed, sorted by speed.

    Box-plot style summary of repeated measurements at the same commanded
    speed; the usual reference for reporting model accuracy.
    """
    if not data.pairs:
        raise DataError("cannot compute medians of an empty series")
    groups: dict[float, list[float]] = {}
    for v, p in data.pairs:
        groups.setdefault(v, []).append(p)
    return [(v, float(np.median(groups[v]))) for v in sorted(groups)]


def heuristic_forward_init(data: SpeedPowerSeries) -> CombinedParams:
    """Rough forward-model starting point when no airframe estimate exists.

    The hover intercept C1 + C3 is matched to the median power at the lowest
    observed speed (90/10 split), C4 assumes an induced velocity near half
    the top speed, and the quadratic/cubic terms start small-positive.
    Intended for small battery multirotors; always validate the fit.
    """
    med = per_speed_medians(data)
    p0 = med[0][1]
    vmax = max(v for v, _ in data.pairs)
    return CombinedParams(
        c1=0.9 * p0, c2=1e-2, c3=0.1 * p0,
        c4=max(1.0, 0.5 * vmax * vmax), c5=1e-3,
        c6=p0, c7=p0 / 20.0, c8=1e-2, c9=1.0,
    )


def heuristic_vertical_init(ascent: SpeedPowerSeries, descent: SpeedPowerSeries,
                            weight_hint: float | None = None) -> CombinedParams:
    """Rough vertical-model starting point.

    C7 is half the vehicle weight when a weight estimate is supplied,
    otherwise a twentieth of the hover-power estimate (battery multirotors
    hover near 10 W per Newton).  C6 absorbs whatever the thrust-root
    intercept does not explain.
    """
    pooled = SpeedPowerSeries(
        regime=ascent.regime, pairs=list(ascent.pairs) + list(descent.pairs)
    )
    med = per_speed_medians(pooled)
    p0 = med[0][1]
    c7 = 0.5 * weight_hint if weight_hint is not None else p0 / 20.0
    c9 = 1.0
    c6 = max(p0 - 2.0 * c7 * math.sqrt(c7 / c9), 0.1 * p0)
    return CombinedParams(
        c1=0.9 * p0, c2=1e-2, c3=0.1 * p0, c4=50.0, c5=1e-3,
        c6=c6, c7=c7, c8=1e-2, c9=c9,
    )
