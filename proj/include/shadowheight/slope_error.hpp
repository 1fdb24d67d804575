#pragma once

#include <span>
#include <vector>

#include "shadowheight/errors.hpp"

namespace shadowheight {

/// Sign of the terrain slope along the shadow direction: Positive tilts
/// the ground toward the sun (shortening the shadow), Negative away.
enum class SlopeSign { Positive, Negative };

struct SlopeSpec {
    double angle_deg = 0.0;  // supported band [0, 10]
    SlopeSign sign = SlopeSign::Positive;
};

/// Relative height error induced by measuring a shadow on sloped ground:
///   tan(h) * |1 - sin(h)/sin(h +/- theta)|
/// with + for Positive and - for Negative slope. Throws DomainError for
/// elevations outside (0, 90), slopes outside the supported band, or a
/// negative slope with h - theta <= 0 (shadow runs off the slope).
double relative_error(double solar_elevation_deg, const SlopeSpec& slope);

/// Grid of relative errors, rows = slopes, columns = elevations.
std::vector<std::vector<double>> error_table(std::span<const double> slopes_deg,
                                             std::span<const double> elevations_deg,
                                             SlopeSign sign);

/// Largest slope whose relative error stays at or below the target, by
/// bisection to 1e-6 deg (the error is monotone in the slope while
/// h +/- theta stays inside (0, 90)). Search is capped at the supported
/// 10 deg band. target in (0, 0.2], elevation in (5, 85).
double max_admissible_slope(double target_rel_error, double solar_elevation_deg,
                            SlopeSign sign);

/// Admissibility gate for scene slopes.
struct SlopeErrorGate {
    double target_rel_error = 0.0;
    double max_pos_slope_deg = 0.0;
    double max_neg_slope_deg = 0.0;

    /// The field-study rule of thumb: at a 5% error target, positive
    /// slopes under 3.0 deg and negative under 2.5 deg are acceptable.
    static SlopeErrorGate default_gate();

    /// Exact gate for a target error at a known solar elevation.
    static SlopeErrorGate from_target(double target_rel_error,
                                      double solar_elevation_deg);
};

/// Rounds half-up to two decimals, the convention used when emitting
/// error tables.
double round_half_up_2(double value);

}  // namespace shadowheight
