#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "shadowheight/errors.hpp"

namespace shadowheight {

struct SatelliteGeometry {
    /// Degrees clockwise from true north, [0, 360).
    double azimuth_deg = 0.0;
    /// Only the forward model needs the satellite elevation; the inverse
    /// works from the measured edge displacement alone.
    std::optional<double> elevation_deg;
};

/// Lengths measured in the image, metres.
///  - shadow_len_m: the visible shadow segment, from shadow tip to the
///    displaced foot of the vertical edge.
///  - edge_len_m: apparent displacement of the vertical edge caused by
///    off-nadir viewing (0 for a nadir satellite).
struct ShadowMeasurements {
    double shadow_len_m = 0.0;
    double edge_len_m = 0.0;
};

struct HeightEstimate {
    double height_m = 0.0;
    /// Full ground shadow length (sun-side), the cosine-rule intermediate.
    double ground_shadow_m = 0.0;
    /// height / measured shadow segment.
    double ratio_cs = 0.0;
    /// height / edge displacement; absent when edge_len_m == 0.
    std::optional<double> ratio_hs;
    /// shadow^2 - edge^2 sin^2(azimuth separation), kept for diagnostics.
    double discriminant = 0.0;
    /// True when a discriminant in [-1e-9, 0) was clamped to 0.
    bool discriminant_clamped = false;
};

/// Recovers structure height from the measured shadow segment and edge
/// displacement given sun/satellite bearings and solar elevation.
/// Azimuths may be given with any number of full turns; only their
/// separation enters. Throws GeometryError when the discriminant is
/// negative beyond -1e-9 or the implied ground shadow is not positive.
///
/// The cosine rule admits two triangles; this takes the larger root,
/// i.e. it assumes the ground shadow reaches past the projection of the
/// edge displacement onto the sun bearing. That holds whenever the
/// satellite looks down more steeply than the sun (the usual imaging
/// geometry); measurements alone cannot distinguish the mirrored case.
HeightEstimate estimate_height(const ShadowMeasurements& measurements,
                               double solar_elevation_deg, double solar_azimuth_deg,
                               double satellite_azimuth_deg);

/// height / shadow ratio (constant across structures sharing one image's
/// sun and satellite geometry).
double corner_shadow_ratio(double height_m, double shadow_len_m);

/// Neighbor height from the scene ratio and its measured shadow length.
double propagate_by_shadow(double ratio_cs, double neighbor_shadow_len_m);

/// height / edge-displacement ratio, the fallback for cluttered scenes
/// where the shadow is occluded.
double edge_height_ratio(double height_m, double edge_len_m);

double propagate_by_edge(double ratio_hs, double neighbor_edge_len_m);

struct RatioAggregate {
    double mean = 0.0;
    /// Sample (n-1) standard deviation; 0 for a single value.
    double std_dev = 0.0;
    std::size_t count = 0;
};

/// Mean and sample standard deviation of the shadow ratios of a set of
/// estimates. The mean is the scene's signifier ratio used for neighbor
/// propagation.
RatioAggregate aggregate_ratio(std::span<const HeightEstimate> estimates);

/// Same statistics over raw ratio values.
RatioAggregate aggregate_values(std::span<const double> values);

}  // namespace shadowheight
