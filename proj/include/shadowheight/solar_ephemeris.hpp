#pragma once

#include <optional>

#include "shadowheight/errors.hpp"

namespace shadowheight {

enum class HalfDay { Morning, Afternoon };

/// A civil acquisition instant. day_of_year counts fractional days since
/// Jan 1 00:00 of the year (Jan 1 00:00 -> 0.0, Jan 2 12:00 -> 1.5).
/// The time scale is whatever the caller measures acquisition times in;
/// no timezone or longitude correction is applied anywhere downstream.
struct CivilInstant {
    int year = 2000;
    double day_of_year = 0.0;
    std::optional<HalfDay> half_day;

    /// Builds an instant from calendar fields. month/day are 1-based.
    /// When half_day is not given it is inferred from the hour (<12 ->
    /// Morning); scene files always carry it explicitly.
    static CivilInstant from_calendar(int year, int month, int day, int hour = 0,
                                      int minute = 0,
                                      std::optional<HalfDay> half_day = std::nullopt);
};

/// Throws DomainError when the instant is outside the supported ranges.
void validate_instant(const CivilInstant& instant);

/// Year angle context: the day angle driving the declination series and
/// the spring-equinox day number it is anchored to.
struct DayAngleContext {
    double day_angle_deg = 0.0;
    double equinox_day = 0.0;
};

/// Sun parameters derived for one acquisition instant. Angles in degrees;
/// azimuth clockwise from true north in [0, 360); hour angle positive in
/// the morning and negative in the afternoon.
struct SolarState {
    double declination_deg = 0.0;
    double hour_angle_deg = 0.0;
    double elevation_deg = 0.0;
    double azimuth_deg = 0.0;
};

/// Spring-equinox day number for a year, in fractional days since
/// Jan 1 00:00. Supported band: 1969..2100.
double spring_equinox_day(int year);

/// Day angle in degrees for an instant. May be negative; downstream trig
/// does not need it wrapped.
double day_angle(const CivilInstant& instant);

/// Solar declination in degrees from a day angle (trigonometric series,
/// max |declination| ~23.45 deg).
double declination(double day_angle_deg);

/// Convenience: declination at an instant.
double declination_at(const CivilInstant& instant);

DayAngleContext day_angle_context(const CivilInstant& instant);

/// Spread of the declination (and of its sine/cosine) across the 09:00,
/// 12:00 and 15:00 samples of one date, as max - min of the absolute
/// values. Quantifies how far from constant the declination is within
/// the usable acquisition window of a day.
struct DeclinationSpread {
    double max_abs_delta_deg = 0.0;
    double max_abs_delta_sin = 0.0;
    double max_abs_delta_cos = 0.0;
};

/// `date` is taken at day granularity (any time-of-day part is dropped).
DeclinationSpread declination_daily_spread(const CivilInstant& date);

/// Quadratic in cos(hour angle) obtained by eliminating elevation from
/// the elevation/azimuth relations: a ≥ 1 always holds for real inputs.
struct HourAngleQuadratic {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct HourAngleSolution {
    double hour_angle_deg = 0.0;
    HourAngleQuadratic quadratic;
    double chosen_cos = 0.0;
    /// True when a root within 1e-9 of +/-1 was clamped onto the unit
    /// interval. Callers surface this in diagnostics.
    bool clamped = false;
};

/// Inverts a measured solar azimuth into the hour angle, selecting the
/// smaller-magnitude root and signing it by half-day (positive Morning,
/// negative Afternoon).
///
/// The inversion only sees tan^2(azimuth), so it cannot distinguish the
/// sun equatorward of the prime vertical from poleward of it; the
/// smaller-|hour angle| choice made here is correct exactly when the sun
/// is on the equator side (azimuth between east and west through the
/// equinoctial noon point), which holds for usable midday imagery.
/// Azimuths of exactly 90/270 deg use the degenerate meridian branch
/// cos(hour angle) = tan(declination)/tan(latitude).
///
/// Throws GeometryError when the discriminant is negative beyond
/// tolerance or no root lies in [-1, 1].
HourAngleSolution solve_hour_angle(double solar_azimuth_deg, double latitude_deg,
                                   double declination_deg, HalfDay half_day);

/// As solve_hour_angle, returning just the hour angle in degrees.
double hour_angle(double solar_azimuth_deg, double latitude_deg,
                  double declination_deg, HalfDay half_day);

/// Solar elevation in degrees from latitude, declination and hour angle.
/// Result in [-90, 90]; callers decide whether a sun at or below the
/// horizon is an error.
double elevation(double latitude_deg, double declination_deg, double hour_angle_deg);

/// Solar azimuth in degrees clockwise from true north, in [0, 360).
/// Quadrant resolved by the hour-angle sign: Morning sign -> eastern
/// half, Afternoon sign -> western half.
double solar_azimuth(double latitude_deg, double declination_deg,
                     double hour_angle_deg, double elevation_deg);

/// Forward chain: elevation and azimuth from (latitude, declination,
/// hour angle), bundled as a SolarState.
SolarState solar_state_from(double latitude_deg, double declination_deg,
                            double hour_angle_deg);

}  // namespace shadowheight
