/**
 * Height recovery from the shadow triangle: the measured shadow segment,
 * the satellite-displaced edge projection and the full ground shadow form
 * a triangle whose apex angle is the sun/satellite azimuth separation.
 * Solving its cosine rule for the ground shadow and scaling by
 * tan(solar elevation) gives the height in closed form.
 */

#include "shadowheight/shadow_geometry.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "shadowheight/angles.hpp"

namespace shadowheight {

namespace {

constexpr double kDiscriminantTol = 1e-9;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw DomainError(std::string(name) + " must be positive and finite");
}

}  // namespace

HeightEstimate estimate_height(const ShadowMeasurements& measurements,
                               double solar_elevation_deg, double solar_azimuth_deg,
                               double satellite_azimuth_deg) {
    require_positive(measurements.shadow_len_m, "shadow_len_m");
    if (!(measurements.edge_len_m >= 0.0) || !std::isfinite(measurements.edge_len_m))
        throw DomainError("edge_len_m must be non-negative and finite");
    if (!(solar_elevation_deg > 0.0 && solar_elevation_deg < 90.0))
        throw DomainError("solar elevation must be in (0, 90)");

    // Azimuths reduced independently so whole turns cancel exactly.
    const double separation_deg =
        wrap_degrees(solar_azimuth_deg) - wrap_degrees(satellite_azimuth_deg);
    const double separation = deg_to_rad(separation_deg);
    const double cos_sep = std::cos(separation);
    const double sin_sep = std::sin(separation);

    const double shadow = measurements.shadow_len_m;
    const double edge = measurements.edge_len_m;

    HeightEstimate estimate;
    double disc = shadow * shadow - edge * edge * sin_sep * sin_sep;
    estimate.discriminant = disc;
    if (disc < 0.0) {
        if (disc < -kDiscriminantTol)
            throw GeometryError(
                "shadow shorter than the edge projection allows (discriminant " +
                    std::to_string(disc) + ")",
                disc);
        disc = 0.0;
        estimate.discriminant_clamped = true;
    }

    const double ground_shadow = edge * cos_sep + std::sqrt(disc);
    if (!(ground_shadow > 0.0))
        throw GeometryError("implied ground shadow is not positive (sun behind the "
                            "measured segment)");

    estimate.ground_shadow_m = ground_shadow;
    estimate.height_m = std::tan(deg_to_rad(solar_elevation_deg)) * ground_shadow;
    estimate.ratio_cs = estimate.height_m / shadow;
    if (edge > 0.0)
        estimate.ratio_hs = estimate.height_m / edge;
    return estimate;
}

double corner_shadow_ratio(double height_m, double shadow_len_m) {
    require_positive(height_m, "height_m");
    require_positive(shadow_len_m, "shadow_len_m");
    return height_m / shadow_len_m;
}

double propagate_by_shadow(double ratio_cs, double neighbor_shadow_len_m) {
    require_positive(ratio_cs, "ratio_cs");
    require_positive(neighbor_shadow_len_m, "neighbor_shadow_len_m");
    return ratio_cs * neighbor_shadow_len_m;
}

double edge_height_ratio(double height_m, double edge_len_m) {
    require_positive(height_m, "height_m");
    require_positive(edge_len_m, "edge_len_m");
    return height_m / edge_len_m;
}

double propagate_by_edge(double ratio_hs, double neighbor_edge_len_m) {
    require_positive(ratio_hs, "ratio_hs");
    require_positive(neighbor_edge_len_m, "neighbor_edge_len_m");
    return ratio_hs * neighbor_edge_len_m;
}

RatioAggregate aggregate_values(std::span<const double> values) {
    if (values.empty())
        throw DomainError("aggregate over an empty set");

    double sum = 0.0;
    for (double v : values)
        sum += v;
    const double mean = sum / static_cast<double>(values.size());

    double sq = 0.0;
    for (double v : values)
        sq += (v - mean) * (v - mean);
    const double std_dev =
        values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;

    return RatioAggregate{mean, std_dev, values.size()};
}

RatioAggregate aggregate_ratio(std::span<const HeightEstimate> estimates) {
    if (estimates.empty())
        throw DomainError("aggregate over an empty set");
    std::vector<double> ratios;
    ratios.reserve(estimates.size());
    for (const auto& e : estimates)
        ratios.push_back(e.ratio_cs);
    return aggregate_values(ratios);
}

}  // namespace shadowheight
