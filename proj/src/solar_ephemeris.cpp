/**
 * Solar ephemeris chain: declination from a trigonometric year-angle
 * series anchored at the spring equinox, hour angle by inverting the
 * measured azimuth through a quadratic in cos(hour angle), elevation
 * and azimuth from the standard spherical relations.
 *
 * Accuracy is deliberately traded for simplicity: the series is good to
 * a few hundredths of a degree, which is far below the measurement
 * error of image-derived shadow lengths.
 */

#include "shadowheight/solar_ephemeris.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "shadowheight/angles.hpp"

namespace shadowheight {

namespace {

constexpr int kMinYear = 1969;  // anchor year of the equinox series
constexpr int kMaxYear = 2100;
constexpr double kTropicalYearDays = 365.2422;
constexpr double kMaxDeclinationDeg = 23.6;

constexpr int kMonthDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_year(int year) { return is_leap(year) ? 366 : 365; }

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

CivilInstant CivilInstant::from_calendar(int year, int month, int day, int hour,
                                         int minute, std::optional<HalfDay> half_day) {
    if (month < 1 || month > 12)
        throw DomainError("month must be in 1..12");
    int month_len = kMonthDays[month - 1] + (month == 2 && is_leap(year) ? 1 : 0);
    if (day < 1 || day > month_len)
        throw DomainError("day out of range for month");
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59)
        throw DomainError("time of day out of range");

    int day_index = day;  // 1-based index within the year
    for (int m = 1; m < month; ++m)
        day_index += kMonthDays[m - 1] + (m == 2 && is_leap(year) ? 1 : 0);

    CivilInstant instant;
    instant.year = year;
    instant.day_of_year = (day_index - 1) + (hour + minute / 60.0) / 24.0;
    instant.half_day = half_day ? half_day
                                : std::optional<HalfDay>(hour < 12 ? HalfDay::Morning
                                                                   : HalfDay::Afternoon);
    validate_instant(instant);
    return instant;
}

void validate_instant(const CivilInstant& instant) {
    if (instant.year < kMinYear || instant.year > kMaxYear)
        throw DomainError("year outside supported band 1969..2100");
    if (!(instant.day_of_year >= 0.0) || instant.day_of_year >= days_in_year(instant.year))
        throw DomainError("day_of_year outside [0, days in year)");
}

double spring_equinox_day(int year) {
    if (year < kMinYear || year > kMaxYear)
        throw DomainError("year outside supported band 1969..2100");
    double k = static_cast<double>(year - 1969);
    return 78.801 + 0.2422 * k - std::trunc(0.25 * k);
}

double day_angle(const CivilInstant& instant) {
    validate_instant(instant);
    double n0 = spring_equinox_day(instant.year);
    return 360.0 * (instant.day_of_year - n0 - 0.5) / kTropicalYearDays;
}

DayAngleContext day_angle_context(const CivilInstant& instant) {
    return DayAngleContext{day_angle(instant), spring_equinox_day(instant.year)};
}

double declination(double day_angle_deg) {
    const double w = deg_to_rad(day_angle_deg);
    return 0.3723 + 23.2567 * std::sin(w) + 0.1149 * std::sin(2.0 * w)
           - 0.1712 * std::sin(3.0 * w) - 0.7580 * std::cos(w)
           + 0.3656 * std::cos(2.0 * w) + 0.0201 * std::cos(3.0 * w);
}

double declination_at(const CivilInstant& instant) {
    return declination(day_angle(instant));
}

DeclinationSpread declination_daily_spread(const CivilInstant& date) {
    validate_instant(date);
    CivilInstant midnight = date;
    midnight.day_of_year = std::floor(date.day_of_year);

    std::array<double, 3> deltas{};
    const double hours[3] = {9.0, 12.0, 15.0};
    for (int i = 0; i < 3; ++i) {
        CivilInstant sample = midnight;
        sample.day_of_year += hours[i] / 24.0;
        deltas[i] = declination_at(sample);
    }

    auto spread = [](double a, double b, double c) {
        return std::max({a, b, c}) - std::min({a, b, c});
    };
    DeclinationSpread out;
    out.max_abs_delta_deg =
        spread(std::abs(deltas[0]), std::abs(deltas[1]), std::abs(deltas[2]));
    out.max_abs_delta_sin = spread(std::abs(std::sin(deg_to_rad(deltas[0]))),
                                   std::abs(std::sin(deg_to_rad(deltas[1]))),
                                   std::abs(std::sin(deg_to_rad(deltas[2]))));
    out.max_abs_delta_cos = spread(std::abs(std::cos(deg_to_rad(deltas[0]))),
                                   std::abs(std::cos(deg_to_rad(deltas[1]))),
                                   std::abs(std::cos(deg_to_rad(deltas[2]))));
    return out;
}

HourAngleSolution solve_hour_angle(double solar_azimuth_deg, double latitude_deg,
                                   double declination_deg, HalfDay half_day) {
    if (!(latitude_deg > -90.0 && latitude_deg < 90.0))
        throw DomainError("latitude must be in (-90, 90)");
    if (!(std::abs(declination_deg) <= kMaxDeclinationDeg))
        throw DomainError("declination outside [-23.6, 23.6]");

    const double azimuth = wrap_degrees(solar_azimuth_deg);
    const double phi = deg_to_rad(latitude_deg);
    const double delta = deg_to_rad(declination_deg);

    HourAngleSolution solution;

    // Meridian-east/west is singular for tan(azimuth); there the azimuth
    // cosine vanishes and the system collapses to
    // cos(hour angle) = tan(declination)/tan(latitude).
    constexpr double kSingularTolDeg = 1e-9;
    if (std::abs(azimuth - 90.0) < kSingularTolDeg ||
        std::abs(azimuth - 270.0) < kSingularTolDeg) {
        if (latitude_deg == 0.0)
            throw GeometryError("prime-vertical azimuth is degenerate at the equator");
        double cos_omega = std::tan(delta) / std::tan(phi);
        if (std::abs(cos_omega) > 1.0 + 1e-9)
            throw GeometryError("no hour angle reaches the requested azimuth");
        if (std::abs(cos_omega) > 1.0) {
            cos_omega = std::copysign(1.0, cos_omega);
            solution.clamped = true;
        }
        solution.quadratic = HourAngleQuadratic{1.0, 0.0, -cos_omega * cos_omega};
        solution.chosen_cos = cos_omega;
        double omega = rad_to_deg(std::acos(cos_omega));
        solution.hour_angle_deg = half_day == HalfDay::Morning ? omega : -omega;
        return solution;
    }

    const double tan_az = std::tan(deg_to_rad(azimuth));
    const double t = tan_az * tan_az;
    const double sin_phi = std::sin(phi);
    const double cos_phi = std::cos(phi);
    const double tan_delta = std::tan(delta);

    const double a = t * sin_phi * sin_phi + 1.0;
    const double b = -std::sin(2.0 * phi) * tan_delta * t;
    const double c = t * cos_phi * cos_phi * tan_delta * tan_delta - 1.0;
    solution.quadratic = HourAngleQuadratic{a, b, c};

    double disc = b * b - 4.0 * a * c;
    const double disc_scale = b * b + std::abs(4.0 * a * c) + 1.0;
    if (disc < 0.0) {
        if (disc < -1e-9 * disc_scale)
            throw GeometryError("azimuth inversion has no real solution", disc);
        disc = 0.0;
    }

    // Numerically stable quadratic roots.
    const double root = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(root, b == 0.0 ? 1.0 : b));
    double candidates[2];
    int n_candidates = 0;
    if (q != 0.0) {
        candidates[n_candidates++] = q / a;
        candidates[n_candidates++] = c / q;
    } else {
        candidates[n_candidates++] = 0.0;
    }

    double best_abs_omega = 361.0;
    bool found = false;
    for (int i = 0; i < n_candidates; ++i) {
        double x = candidates[i];
        bool clamped_here = false;
        if (std::abs(x) > 1.0) {
            if (std::abs(x) > 1.0 + 1e-9)
                continue;  // spurious root, discard
            x = std::copysign(1.0, x);
            clamped_here = true;
        }
        const double abs_omega = rad_to_deg(std::acos(x));
        if (abs_omega < best_abs_omega) {
            best_abs_omega = abs_omega;
            solution.chosen_cos = x;
            solution.clamped = clamped_here;
            found = true;
        }
    }
    if (!found)
        throw GeometryError("both hour-angle roots fall outside [-1, 1]", disc);

    solution.hour_angle_deg =
        half_day == HalfDay::Morning ? best_abs_omega : -best_abs_omega;
    return solution;
}

double hour_angle(double solar_azimuth_deg, double latitude_deg,
                  double declination_deg, HalfDay half_day) {
    return solve_hour_angle(solar_azimuth_deg, latitude_deg, declination_deg, half_day)
        .hour_angle_deg;
}

double elevation(double latitude_deg, double declination_deg, double hour_angle_deg) {
    if (!(latitude_deg > -90.0 && latitude_deg < 90.0))
        throw DomainError("latitude must be in (-90, 90)");
    if (!(std::abs(declination_deg) <= kMaxDeclinationDeg))
        throw DomainError("declination outside [-23.6, 23.6]");

    const double phi = deg_to_rad(latitude_deg);
    const double delta = deg_to_rad(declination_deg);
    const double omega = deg_to_rad(hour_angle_deg);
    double s = std::sin(phi) * std::sin(delta) +
               std::cos(phi) * std::cos(delta) * std::cos(omega);
    // |s| can exceed 1 by a few ulp; anything worse means bad inputs.
    if (std::abs(s) > 1.0 + 1e-12)
        throw DomainError("elevation argument outside [-1, 1]");
    return rad_to_deg(std::asin(clamp_unit(s)));
}

double solar_azimuth(double latitude_deg, double declination_deg,
                     double hour_angle_deg, double elevation_deg) {
    if (!(latitude_deg > -90.0 && latitude_deg < 90.0))
        throw DomainError("latitude must be in (-90, 90)");
    if (!(elevation_deg < 90.0))
        throw DomainError("azimuth undefined at the zenith");

    const double phi = deg_to_rad(latitude_deg);
    const double delta = deg_to_rad(declination_deg);
    const double h = deg_to_rad(elevation_deg);

    double cos_from_south =
        (std::sin(h) * std::sin(phi) - std::sin(delta)) / (std::cos(h) * std::cos(phi));
    if (std::abs(cos_from_south) > 1.0 + 1e-9)
        throw DomainError("inconsistent elevation/declination/hour-angle triple");
    cos_from_south = clamp_unit(cos_from_south);

    // Principal angle measured from due south; morning puts the sun in
    // the eastern half, afternoon in the western half.
    const double theta = rad_to_deg(std::acos(cos_from_south));
    const double azimuth = hour_angle_deg >= 0.0 ? 180.0 - theta : 180.0 + theta;
    return wrap_degrees(azimuth);
}

SolarState solar_state_from(double latitude_deg, double declination_deg,
                            double hour_angle_deg) {
    SolarState state;
    state.declination_deg = declination_deg;
    state.hour_angle_deg = hour_angle_deg;
    state.elevation_deg = elevation(latitude_deg, declination_deg, hour_angle_deg);
    state.azimuth_deg =
        solar_azimuth(latitude_deg, declination_deg, hour_angle_deg, state.elevation_deg);
    return state;
}

}  // namespace shadowheight
