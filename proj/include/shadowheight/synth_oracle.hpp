#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shadowheight/scene_model.hpp"

namespace shadowheight {

struct ForwardMeasurements {
    ShadowMeasurements measurements;
    double ground_shadow_m = 0.0;
};

/// Forward model: the exact lengths a structure of known height casts
/// under given sun and satellite geometry.
///   ground shadow = H / tan(solar elevation)
///   edge displacement = H / tan(satellite elevation)
///   measured segment from the cosine rule on the two.
/// A measured segment of ~0 (sun and satellite coincident) is valid
/// output here but not invertible; the generator rejects such scenes.
ForwardMeasurements forward_measurements(double height_m, double solar_elevation_deg,
                                         double satellite_elevation_deg,
                                         double solar_azimuth_deg,
                                         double satellite_azimuth_deg);

struct GenerationRanges {
    int structure_count = 5;
    int year = 2017;
    double latitude_min_deg = -60.0;
    double latitude_max_deg = 60.0;
    double solar_elevation_min_deg = 5.0;
    double solar_elevation_max_deg = 85.0;
    double satellite_elevation_min_deg = 20.0;
    double satellite_elevation_max_deg = 80.0;
    /// |solar azimuth - satellite azimuth| is kept inside this band to
    /// stay clear of the non-invertible coincident-azimuth degeneracy.
    double azimuth_separation_min_deg = 5.0;
    double azimuth_separation_max_deg = 175.0;
    double height_min_m = 5.0;
    double height_max_m = 60.0;
    /// Zero-mean Gaussian noise on the two lengths, truncated to keep
    /// them positive. 0 disables.
    double length_noise_sigma_m = 0.0;
    /// Optional Gaussian perturbation of the recorded azimuths.
    double angle_noise_sigma_deg = 0.0;
};

struct SyntheticStructure {
    std::string id;
    double truth_height_m = 0.0;
    ShadowMeasurements measurements;
    double ground_shadow_m = 0.0;
};

/// A generated scene: N structures sharing one sun/satellite geometry,
/// plus the civil instant and latitude that reproduce that geometry
/// through the ephemeris chain.
struct SyntheticScene {
    std::uint64_t seed = 0;
    CivilInstant acquired;
    double latitude_deg = 0.0;
    SolarState solar;
    double satellite_elevation_deg = 0.0;
    double satellite_azimuth_deg = 0.0;
    std::vector<SyntheticStructure> structures;
};

/// Deterministic in (seed, ranges). Scenes are rejection-sampled so that
/// the azimuth inversion is well-posed (sun equatorward of the prime
/// vertical, |latitude| > |declination|) and the measured segment stays
/// above 1e-6 of the height. Throws DomainError when the ranges admit no
/// scene.
SyntheticScene generate_scene(std::uint64_t seed, const GenerationRanges& ranges = {});

/// Serializes to the scene file model so the oracle feeds the real
/// pipeline: structure 0 becomes the observation, the rest neighbors
/// (with both lengths), ground truth embedded.
SceneFile to_scene_file(const SyntheticScene& scene);

/// Deterministic stream of independent sub-seeds from a master seed.
std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index);

struct RoundTripResult {
    std::uint64_t scenes = 0;
    std::uint64_t structures = 0;
    double worst_height_rel_error = 0.0;
    double worst_ratio_std = 0.0;
    std::uint64_t failures = 0;
    std::string first_failure;
};

/// Generates `scene_count` noiseless scenes from sub-seeds of `seed`,
/// pushes each through the full inverse pipeline, and compares recovered
/// heights against the embedded truth. When `through_serialization` is
/// set, scenes additionally round-trip through the JSON form first.
RoundTripResult run_round_trip(std::uint64_t seed, std::uint64_t scene_count,
                               const GenerationRanges& ranges = {},
                               bool through_serialization = false);

}  // namespace shadowheight
