/**
 * Terrain-slope sensitivity of shadow-based height estimation. A shadow
 * measured along sloped ground differs from the flat-ground shadow by a
 * sine ratio; the induced relative height error is that ratio scaled by
 * tan(solar elevation).
 */

#include "shadowheight/slope_error.hpp"

#include <cmath>

#include "shadowheight/angles.hpp"

namespace shadowheight {

namespace {

constexpr double kMaxSlopeDeg = 10.0;  // supported band

}  // namespace

double relative_error(double solar_elevation_deg, const SlopeSpec& slope) {
    if (!(solar_elevation_deg > 0.0 && solar_elevation_deg < 90.0))
        throw DomainError("solar elevation must be in (0, 90)");
    if (!(slope.angle_deg >= 0.0 && slope.angle_deg <= kMaxSlopeDeg))
        throw DomainError("slope angle outside supported band [0, 10]");

    const double signed_slope =
        slope.sign == SlopeSign::Positive ? slope.angle_deg : -slope.angle_deg;
    const double tilted_deg = solar_elevation_deg + signed_slope;
    if (slope.sign == SlopeSign::Negative && !(tilted_deg > 0.0))
        throw DomainError("negative slope swallows the shadow (elevation - slope <= 0)");

    const double h = deg_to_rad(solar_elevation_deg);
    const double tilted = deg_to_rad(tilted_deg);
    return std::tan(h) * std::abs(1.0 - std::sin(h) / std::sin(tilted));
}

std::vector<std::vector<double>> error_table(std::span<const double> slopes_deg,
                                             std::span<const double> elevations_deg,
                                             SlopeSign sign) {
    std::vector<std::vector<double>> grid;
    grid.reserve(slopes_deg.size());
    for (double theta : slopes_deg) {
        std::vector<double> row;
        row.reserve(elevations_deg.size());
        for (double h : elevations_deg)
            row.push_back(relative_error(h, SlopeSpec{theta, sign}));
        grid.push_back(std::move(row));
    }
    return grid;
}

double max_admissible_slope(double target_rel_error, double solar_elevation_deg,
                            SlopeSign sign) {
    if (!(target_rel_error > 0.0 && target_rel_error <= 0.2))
        throw DomainError("target relative error must be in (0, 0.2]");
    if (!(solar_elevation_deg > 5.0 && solar_elevation_deg < 85.0))
        throw DomainError("solar elevation must be in (5, 85)");

    // The error is monotone in the slope only while elevation +/- slope
    // stays inside (0, 90); cap the bracket there and at the band edge.
    double hi = kMaxSlopeDeg;
    if (sign == SlopeSign::Positive)
        hi = std::min(hi, 90.0 - solar_elevation_deg - 1e-6);
    else
        hi = std::min(hi, solar_elevation_deg - 1e-6);

    auto err = [&](double theta) {
        return relative_error(solar_elevation_deg, SlopeSpec{theta, sign});
    };

    if (err(hi) <= target_rel_error)
        return hi;  // target never exceeded inside the supported band

    double lo = 0.0;  // err(0) == 0 <= target
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (err(mid) <= target_rel_error)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

SlopeErrorGate SlopeErrorGate::default_gate() {
    return SlopeErrorGate{0.05, 3.0, 2.5};
}

SlopeErrorGate SlopeErrorGate::from_target(double target_rel_error,
                                           double solar_elevation_deg) {
    return SlopeErrorGate{
        target_rel_error,
        max_admissible_slope(target_rel_error, solar_elevation_deg, SlopeSign::Positive),
        max_admissible_slope(target_rel_error, solar_elevation_deg, SlopeSign::Negative)};
}

double round_half_up_2(double value) {
    return std::floor(value * 100.0 + 0.5) / 100.0;
}

}  // namespace shadowheight
