"""Structure-height estimation from geo-tagged satellite shadow measurements."""

from ._core import (  # noqa: F401
    CivilInstant,
    DeclinationSpread,
    DomainError,
    ForwardMeasurements,
    GeometryError,
    HalfDay,
    HeightEstimate,
    RatioAggregate,
    ResolvedSolar,
    RoundTripResult,
    SceneReport,
    SchemaError,
    SlopeErrorGate,
    SlopeSign,
    SolarState,
    StructureResult,
    aggregate_values,
    corner_shadow_ratio,
    day_angle,
    declination,
    declination_at,
    declination_daily_spread,
    edge_height_ratio,
    elevation,
    error_table,
    estimate_height,
    forward_measurements,
    generate_scene_json,
    hour_angle,
    max_admissible_slope,
    process_scene_file,
    propagate_by_edge,
    propagate_by_shadow,
    relative_error,
    render_report,
    round_half_up_2,
    run_round_trip,
    solar_azimuth,
    solar_state_from,
    spring_equinox_day,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
