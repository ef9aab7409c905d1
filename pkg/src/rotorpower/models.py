"""Closed-form steady-flight power models for even-rotor multi-rotor UAVs.

The vehicle is treated as n identical, symmetrically placed rotors, each
carrying an equal share W/n of the total weight, so axial momentum theory
for a single rotor applies per rotor and the vehicle total is the n-rotor
sum.  Blade angular velocity never appears as a free input: it is eliminated
through thrust, Omega = sqrt(T / (C_T * rho * A * R^2)).

Models provided (all steady, zero acceleration):

* hover               blade-profile + induced split
* forward flight      blade-profile, induced, parasite components vs speed
* vertical ascent     hover power plus climb-rate, drag and thrust-root work
* vertical descent    same force balance with drag aiding the rotors
* generic 3-D flight  hover power plus a horizontal and a vertical increment,
                      consistent with the four 1-D/2-D models on the axes

Units are SI throughout: N, m, s, W, kg/m^3.  All functions are pure and
thread-safe.  Speeds are magnitudes except where a signed vertical component
is stated.

The descent model is only physical while per-rotor thrust stays
non-negative, which bounds descent speed at sqrt(2*(W/n) / (S_fp_perp*rho));
see ``max_descent_speed``.  Inputs beyond that raise ``DomainError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

__all__ = [
    "Regime",
    "AirframeParams",
    "Velocity3",
    "PowerBreakdown",
    "RegimeDomain",
    "reference_quadrotor",
    "derive_v0",
    "omega_from_thrust",
    "hover_power",
    "single_rotor_hover_power",
    "single_rotor_forward_power",
    "single_rotor_vertical_power",
    "forward_power",
    "vertical_thrust_per_rotor",
    "max_descent_speed",
    "ascent_power",
    "descent_power",
    "forward_power_increment",
    "vertical_power_increment",
    "total_power",
    "regime_domain",
]


class Regime(str, Enum):
    """Steady flight regimes covered by the closed-form models."""

    HOVER = "hover"
    FORWARD = "forward"
    ASCENT = "ascent"
    DESCENT = "descent"


@dataclass(frozen=True)
class AirframeParams:
    """Physical constants of the vehicle and the surrounding air.

    ``v0`` (mean rotor induced velocity in hover, m/s) is a stored input;
    pass ``None`` to have it derived as sqrt(W / (2*rho*A)).  A measured
    value may be supplied instead.
    """

    n: int                        # rotor count, even, >= 4
    weight_w: float               # total weight W, N
    rho: float                    # air density, kg/m^3
    disc_area_a: float            # per-rotor disc area A, m^2
    solidity_s: float             # rotor solidity (blade area / disc area)
    profile_drag_delta: float     # blade profile drag coefficient
    induced_correction_k: float   # induced power correction factor, >= 0
    thrust_coeff_ct: float        # thrust coefficient C_T
    rotor_radius_r: float         # rotor radius, m
    s_fp_par: float               # fuselage flat-plate area, horizontal, m^2
    s_fp_perp: float              # fuselage flat-plate area, vertical, m^2
    v0: float | None = None       # mean induced velocity in hover, m/s

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 4 or self.n % 2 != 0:
            raise DomainError(f"rotor count must be an even integer >= 4, got {self.n}")
        positive = {
            "weight_w": self.weight_w,
            "rho": self.rho,
            "disc_area_a": self.disc_area_a,
            "solidity_s": self.solidity_s,
            "profile_drag_delta": self.profile_drag_delta,
            "thrust_coeff_ct": self.thrust_coeff_ct,
            "rotor_radius_r": self.rotor_radius_r,
            "s_fp_par": self.s_fp_par,
            "s_fp_perp": self.s_fp_perp,
        }
        for name, value in positive.items():
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be finite and > 0, got {value}")
        if not (math.isfinite(self.induced_correction_k) and self.induced_correction_k >= 0.0):
            raise DomainError(f"induced_correction_k must be >= 0, got {self.induced_correction_k}")
        if self.v0 is None:
            object.__setattr__(self, "v0", derive_v0(self))
        elif not (math.isfinite(self.v0) and self.v0 > 0.0):
            raise DomainError(f"v0 must be finite and > 0, got {self.v0}")


@dataclass(frozen=True)
class Velocity3:
    """A 3-D steady velocity: horizontal magnitude plus signed vertical rate.

    ``v_perp`` > 0 means ascent.  The horizontal direction is irrelevant to
    power, so only the magnitude ``v_par`` is kept.
    """

    v_par: float   # horizontal speed magnitude, m/s, >= 0
    v_perp: float  # signed vertical speed, m/s (positive up)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.v_par) and self.v_par >= 0.0):
            raise DomainError(f"v_par must be finite and >= 0, got {self.v_par}")
        if not math.isfinite(self.v_perp):
            raise DomainError(f"v_perp must be finite, got {self.v_perp}")

    @property
    def total(self) -> float:
        """Total speed magnitude sqrt(v_par^2 + v_perp^2), m/s."""
        return math.hypot(self.v_par, self.v_perp)


@dataclass(frozen=True)
class PowerBreakdown:
    """Total power in Watts plus its named components.

    ``total_w`` is always the exact floating-point sum
    blade_profile + induced + parasite + climb, in that order.
    ``climb_w`` collects every vertical-motion term beyond hover power
    (climb-rate work and thrust-root terms); it is negative-capable in
    descent.
    """

    total_w: float
    blade_profile_w: float
    induced_w: float
    parasite_w: float = 0.0
    climb_w: float = 0.0


def _breakdown(blade: float, induced: float, parasite: float = 0.0,
               climb: float = 0.0) -> PowerBreakdown:
    # One shared summation order keeps the regime models bit-consistent
    # with the generic 3-D model on the axes.
    return PowerBreakdown(
        total_w=blade + induced + parasite + climb,
        blade_profile_w=blade,
        induced_w=induced,
        parasite_w=parasite,
        climb_w=climb,
    )


@dataclass(frozen=True)
class RegimeDomain:
    """Validity limits of a regime model in speed magnitude."""

    regime: Regime
    v_min: float
    v_max: float


def reference_quadrotor() -> AirframeParams:
    """Stock simulation parameter set: a 20 N quadrotor in 1.168 kg/m^3 air.

    Used by the bundled demos and tests as a realistic working point.
    """
    return AirframeParams(
        n=4,
        weight_w=20.0,
        rho=1.168,
        disc_area_a=0.214,
        solidity_s=0.045,
        profile_drag_delta=0.011,
        induced_correction_k=0.11,
        thrust_coeff_ct=0.001195,
        rotor_radius_r=0.26,
        s_fp_par=0.009,
        s_fp_perp=0.377,
        v0=6.325,
    )


def derive_v0(params: AirframeParams) -> float:
    """Mean rotor induced velocity in hover, sqrt(W / (2*rho*A)), m/s.

    Ignores any stored ``params.v0``; callers may adopt the result or keep
    a measured value instead.
    """
    return math.sqrt(params.weight_w / (2.0 * params.rho * params.disc_area_a))


def omega_from_thrust(thrust_n: float, params: AirframeParams) -> float:
    """Blade angular velocity (rad/s) producing a given per-rotor thrust.

    Omega = sqrt(T / (C_T * rho * A * R^2)).
    """
    if thrust_n < 0.0:
        raise DomainError(f"thrust must be >= 0, got {thrust_n}")
    return math.sqrt(
        thrust_n
        / (params.thrust_coeff_ct * params.rho * params.disc_area_a
           * params.rotor_radius_r ** 2)
    )


def _hover_split(params: AirframeParams) -> tuple[float, float]:
    """(blade-profile, induced) hover power of the whole n-rotor vehicle, W."""
    w, n = params.weight_w, params.n
    rho, a = params.rho, params.disc_area_a
    blade = (
        w ** 1.5 / math.sqrt(n * rho * a)
        * params.thrust_coeff_ct ** -1.5
        * (params.profile_drag_delta / 8.0)
        * params.solidity_s
    )
    induced = (1.0 + params.induced_correction_k) * w ** 1.5 / math.sqrt(2.0 * n * rho * a)
    return blade, induced


def hover_power(params: AirframeParams) -> PowerBreakdown:
    """Hover power of the vehicle, split into blade-profile and induced parts.

    Both parts scale as W^(3/2) / sqrt(n): spreading a fixed weight over more
    rotors lowers hover power.
    """
    blade, induced = _hover_split(params)
    return _breakdown(blade, induced)


def single_rotor_hover_power(per_rotor_weight: float, params: AirframeParams) -> float:
    """Hover power (W) of one rotor supporting ``per_rotor_weight`` Newtons."""
    if per_rotor_weight <= 0.0:
        raise DomainError(f"per-rotor weight must be > 0, got {per_rotor_weight}")
    wr = per_rotor_weight
    blade = (
        wr ** 1.5
        * params.rho ** -0.5
        * params.solidity_s
        * params.disc_area_a ** -0.5
        * params.thrust_coeff_ct ** -1.5
        * (params.profile_drag_delta / 8.0)
    )
    induced = (1.0 + params.induced_correction_k) * wr ** 1.5 / math.sqrt(
        2.0 * params.rho * params.disc_area_a
    )
    return blade + induced


def _forward_induced_factor(v: float, v0: float) -> float:
    # (sqrt(1 + x^2) - x)^(1/2) with x = v^2 / (2 v0^2), rewritten as
    # 1 / (sqrt(1 + x^2) + x) under the root: algebraically identical,
    # provably positive, and free of cancellation at large v.
    x = v * v / (2.0 * v0 * v0)
    return math.sqrt(1.0 / (math.sqrt(1.0 + x * x) + x))


def single_rotor_forward_power(per_rotor_weight: float, v: float,
                               params: AirframeParams) -> float:
    """Forward-flight power (W) of one rotor at speed ``v`` carrying W_r.

    Assumes thrust ~ weight (small rotor-disc tilt at constant speed) and
    splits the fuselage parasite drag evenly over the rotors.
    """
    if per_rotor_weight <= 0.0:
        raise DomainError(f"per-rotor weight must be > 0, got {per_rotor_weight}")
    if v < 0.0:
        raise DomainError(f"speed must be >= 0, got {v}")
    wr = per_rotor_weight
    rho, a, s = params.rho, params.disc_area_a, params.solidity_s
    delta, ct = params.profile_drag_delta, params.thrust_coeff_ct
    blade = (
        wr ** 1.5 * rho ** -0.5 * s * a ** -0.5 * ct ** -1.5 * (delta / 8.0)
        + 0.375 * delta * math.sqrt(wr * rho * a / ct) * s * v * v
    )
    induced = (
        (1.0 + params.induced_correction_k)
        * wr ** 1.5 / math.sqrt(2.0 * rho * a)
        * _forward_induced_factor(v, params.v0)
    )
    parasite = 0.5 * params.s_fp_par * rho * v ** 3
    return blade + induced + parasite


def forward_power(v: float, params: AirframeParams) -> PowerBreakdown:
    """Level forward-flight power at speed ``v`` m/s.

    Blade-profile power grows with v^2, parasite power with v^3, while the
    induced component decays monotonically from its hover value.
    """
    if v < 0.0:
        raise DomainError(f"speed must be >= 0, got {v}")
    blade_h, induced_h = _hover_split(params)
    n, rho = params.n, params.rho
    blade = blade_h + (
        0.375 * params.profile_drag_delta
        * math.sqrt(params.weight_w * n * rho * params.disc_area_a / params.thrust_coeff_ct)
        * params.solidity_s * v * v
    )
    induced = induced_h * _forward_induced_factor(v, params.v0)
    parasite = 0.5 * n * params.s_fp_par * rho * v ** 3
    return _breakdown(blade, induced, parasite)


def max_descent_speed(params: AirframeParams) -> float:
    """Largest vertical descent speed with non-negative per-rotor thrust, m/s.

    Beyond sqrt(2*(W/n) / (S_fp_perp*rho)) the fuselage drag alone would
    exceed the per-rotor weight share and the model turns unphysical.
    """
    return math.sqrt(
        2.0 * (params.weight_w / params.n) / (params.s_fp_perp * params.rho)
    )


def vertical_thrust_per_rotor(v: float, direction: Regime,
                              params: AirframeParams) -> float:
    """Per-rotor thrust (N) in steady vertical flight at speed ``v``.

    Ascent adds the per-rotor share of fuselage drag to the weight share;
    descent subtracts it.
    """
    if v < 0.0:
        raise DomainError(f"speed must be >= 0, got {v}")
    share = params.weight_w / params.n
    drag = 0.5 * params.s_fp_perp * params.rho * v * v
    if direction == Regime.ASCENT:
        return share + drag
    if direction == Regime.DESCENT:
        vmax = max_descent_speed(params)
        if v > vmax:
            raise DomainError(
                f"descent speed {v} m/s exceeds the zero-thrust bound "
                f"{vmax:.6g} m/s (per-rotor thrust would be negative)"
            )
        return share - drag
    raise DomainError(f"direction must be ascent or descent, got {direction}")


def single_rotor_vertical_power(per_rotor_weight: float, thrust_n: float,
                                v: float, params: AirframeParams) -> float:
    """Vertical-flight power (W) of one rotor at speed ``v`` with thrust T.

    Hover power at the rotor's weight share plus climb-rate work T*V/2 and
    the thrust-root term (T/2) * sqrt(V^2 + 2T/(rho*A)).
    """
    if thrust_n < 0.0:
        raise DomainError(f"thrust must be >= 0, got {thrust_n}")
    if v < 0.0:
        raise DomainError(f"speed must be >= 0, got {v}")
    hover = single_rotor_hover_power(per_rotor_weight, params)
    root = math.sqrt(v * v + 2.0 * thrust_n / (params.rho * params.disc_area_a))
    return hover + 0.5 * thrust_n * v + 0.5 * thrust_n * root


def _check_descent_domain(v: float, params: AirframeParams) -> None:
    vmax = max_descent_speed(params)
    if v > vmax:
        raise DomainError(
            f"descent speed {v} m/s exceeds the zero-thrust bound "
            f"{vmax:.6g} m/s (per-rotor thrust would be negative)"
        )
    radicand = (
        (1.0 - params.s_fp_perp / params.disc_area_a) * v * v
        + 2.0 * params.weight_w / (params.n * params.rho * params.disc_area_a)
    )
    if radicand < 0.0:
        raise DomainError(
            f"descent speed {v} m/s makes the induced-flow radicand negative "
            f"({radicand:.6g}); the model is undefined there"
        )


def _vertical_climb_terms(mag: float, sgn: float, params: AirframeParams) -> float:
    # Every term of the one-sided vertical models beyond hover power:
    # W V/2 +- (n/4) S_perp rho V^3 + (W/2 +- (n/4) S_perp rho V^2) * root.
    # At V = 0 this is (W/2) sqrt(2W/(n rho A)), the hover thrust-root work
    # the one-sided models retain.
    w, n = params.weight_w, params.n
    rho, a, sp = params.rho, params.disc_area_a, params.s_fp_perp
    hover_radicand = 2.0 * w / (n * rho * a)
    climb_rate = 0.5 * w * mag
    drag_work = sgn * 0.25 * n * sp * rho * mag ** 3
    half_thrust = 0.5 * w + sgn * 0.25 * n * sp * rho * mag * mag
    root = math.sqrt((1.0 + sgn * sp / a) * mag * mag + hover_radicand)
    return climb_rate + drag_work + half_thrust * root


def vertical_power_increment(v_perp: float, params: AirframeParams) -> float:
    """Power increment (W) over hover due to a signed vertical speed.

    Exactly zero at ``v_perp`` = 0 (the hover branch).  The model family
    jumps there: the one-sided limits are (W/2) * sqrt(2W/(n*rho*A)) above
    the branch value, because the ascent/descent models keep the hover
    thrust-root work as V -> 0.  Branch values are implemented as written,
    with no attempt at continuity.
    """
    if not math.isfinite(v_perp):
        raise DomainError(f"v_perp must be finite, got {v_perp}")
    if v_perp == 0.0:
        return 0.0
    if v_perp < 0.0:
        _check_descent_domain(-v_perp, params)
    return _vertical_climb_terms(abs(v_perp), math.copysign(1.0, v_perp), params)


def forward_power_increment(v_par: float, params: AirframeParams) -> float:
    """Power increment (W) over hover due to horizontal speed; 0 at v = 0."""
    if v_par < 0.0:
        raise DomainError(f"speed must be >= 0, got {v_par}")
    _, induced_h = _hover_split(params)
    n, rho = params.n, params.rho
    blade_inc = (
        0.375 * params.profile_drag_delta
        * math.sqrt(params.weight_w * n * rho * params.disc_area_a / params.thrust_coeff_ct)
        * params.solidity_s * v_par * v_par
    )
    induced_inc = induced_h * (_forward_induced_factor(v_par, params.v0) - 1.0)
    parasite = 0.5 * n * params.s_fp_par * rho * v_par ** 3
    return blade_inc + induced_inc + parasite


def ascent_power(v: float, params: AirframeParams) -> PowerBreakdown:
    """Vertical-ascent power at climb speed ``v`` m/s; increases with v.

    The hover split fills the blade/induced fields; everything beyond hover
    power (climb-rate, drag and thrust-root work) is reported under
    ``climb_w``.  At v = 0 the thrust-root term keeps its hover value, so
    this is the one-sided model, not the hover branch.
    """
    if v < 0.0:
        raise DomainError(f"speed must be >= 0, got {v}")
    blade_h, induced_h = _hover_split(params)
    return _breakdown(blade_h, induced_h, 0.0, _vertical_climb_terms(v, 1.0, params))


def descent_power(v: float, params: AirframeParams) -> PowerBreakdown:
    """Vertical-descent power at sink speed ``v`` m/s (v given as magnitude).

    Valid for v up to ``max_descent_speed``; cheaper than ascent at equal
    speed because fuselage drag aids the rotors.  Like ascent, v = 0
    evaluates the one-sided model, which exceeds plain hover power.
    """
    if v < 0.0:
        raise DomainError(f"speed must be >= 0, got {v}")
    _check_descent_domain(v, params)
    blade_h, induced_h = _hover_split(params)
    return _breakdown(blade_h, induced_h, 0.0, _vertical_climb_terms(v, -1.0, params))


def total_power(v: Velocity3, params: AirframeParams) -> PowerBreakdown:
    """Generic 3-D steady-flight power at horizontal + signed vertical speed.

    Hover power plus independent horizontal and vertical increments; matches
    the hover/forward/ascent/descent models exactly when the complementary
    component is zero.
    """
    blade_h, induced_h = _hover_split(params)
    n, rho = params.n, params.rho
    vp = v.v_par
    blade = blade_h + (
        0.375 * params.profile_drag_delta
        * math.sqrt(params.weight_w * n * rho * params.disc_area_a / params.thrust_coeff_ct)
        * params.solidity_s * vp * vp
    )
    induced = induced_h * _forward_induced_factor(vp, params.v0)
    parasite = 0.5 * n * params.s_fp_par * rho * vp ** 3
    climb = vertical_power_increment(v.v_perp, params)
    return _breakdown(blade, induced, parasite, climb)


def regime_domain(regime: Regime, params: AirframeParams) -> RegimeDomain:
    """Speed-magnitude validity limits of a regime's model."""
    if regime == Regime.HOVER:
        return RegimeDomain(regime, 0.0, 0.0)
    if regime == Regime.DESCENT:
        return RegimeDomain(regime, 0.0, max_descent_speed(params))
    return RegimeDomain(regime, 0.0, math.inf)
