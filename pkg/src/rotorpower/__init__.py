"""rotorpower: power models and energy analysis for multi-rotor UAVs.

Modules:
    models     closed-form steady-flight power models (hover, forward,
               vertical ascent/descent, generic 3-D) from physical constants
    fitting    combined-parameter models, physical-to-combined mapping and
               least-squares fitting of measured speed-power data
    telemetry  raw-log ingestion: power computation, 1 Hz / 10 Hz alignment,
               speed rounding/binning, round-trip window trimming
    analysis   energy per meter, optimal-speed search, rotor-count sweeps,
               mission energy over piecewise-steady 3-D segments
    cli        the `rotorpower` command-line tool wrapping all of the above
"""

from .analysis import (
    MissionSegment,
    OptimalSpeed,
    SegmentEnergy,
    SweepSpec,
    default_sweep_spec,
    energy_per_meter,
    mission_energy,
    optimal_speed,
    rotor_sweep,
)
from .errors import DataError, DomainError
from .fitting import (
    CombinedParams,
    FitOptions,
    FitResult,
    error_metrics,
    eval_ascent_combined,
    eval_descent_combined,
    eval_forward_combined,
    fit_forward,
    fit_vertical,
    heuristic_forward_init,
    heuristic_vertical_init,
    per_speed_medians,
    physical_to_combined,
)
from .models import (
    AirframeParams,
    PowerBreakdown,
    Regime,
    RegimeDomain,
    Velocity3,
    ascent_power,
    derive_v0,
    descent_power,
    forward_power,
    forward_power_increment,
    hover_power,
    max_descent_speed,
    omega_from_thrust,
    reference_quadrotor,
    regime_domain,
    single_rotor_forward_power,
    single_rotor_hover_power,
    single_rotor_vertical_power,
    total_power,
    vertical_power_increment,
    vertical_thrust_per_rotor,
)
from .telemetry import (
    AltitudeSample,
    ElectricalSample,
    SpeedPowerSeries,
    SpeedSample,
    align,
    bin_speeds,
    compute_power,
    round_speeds,
    trim_vertical_round_trip,
)

__version__ = "0.1.0"
