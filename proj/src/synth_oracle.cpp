/**
 * Forward model and scene generator. The generator samples full scene
 * context (date, latitude, hour angle) and keeps only draws whose
 * geometry the inverse pipeline is defined on, so every generated scene
 * doubles as a ground-truthed end-to-end test case.
 */

#include "shadowheight/synth_oracle.hpp"

#include <cmath>
#include <random>

#include "shadowheight/angles.hpp"

namespace shadowheight {

namespace {

/// Margins keeping rejection-sampled scenes away from the boundaries of
/// the inversion's validity domain.
constexpr double kLatitudeDeclinationMarginDeg = 1.0;
constexpr double kPrimeVerticalMarginDeg = 0.5;
constexpr double kMinShadowToHeight = 1e-6;
constexpr int kMaxAttempts = 100000;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Gaussian truncated to keep `value + noise` positive.
double perturb_positive(std::mt19937_64& rng, double value, double sigma) {
    std::normal_distribution<double> dist(0.0, sigma);
    for (int i = 0; i < 1000; ++i) {
        double candidate = value + dist(rng);
        if (candidate > 0.0)
            return candidate;
    }
    return value;  // sigma >> value; keep the exact length
}

/// True when the azimuth lies strictly on the equator side of the
/// east-west line for an observer at the given latitude.
bool equatorward(double azimuth_deg, double latitude_deg, double margin_deg) {
    if (latitude_deg >= 0.0)
        return azimuth_deg >= 90.0 + margin_deg && azimuth_deg <= 270.0 - margin_deg;
    return azimuth_deg <= 90.0 - margin_deg || azimuth_deg >= 270.0 + margin_deg;
}

}  // namespace

ForwardMeasurements forward_measurements(double height_m, double solar_elevation_deg,
                                         double satellite_elevation_deg,
                                         double solar_azimuth_deg,
                                         double satellite_azimuth_deg) {
    if (!(height_m > 0.0))
        throw DomainError("height_m must be positive");
    if (!(solar_elevation_deg > 0.0 && solar_elevation_deg < 90.0))
        throw DomainError("solar elevation must be in (0, 90)");
    if (!(satellite_elevation_deg > 0.0 && satellite_elevation_deg < 90.0))
        throw DomainError("satellite elevation must be in (0, 90)");

    const double ground_shadow = height_m / std::tan(deg_to_rad(solar_elevation_deg));
    const double edge = height_m / std::tan(deg_to_rad(satellite_elevation_deg));
    const double separation =
        deg_to_rad(wrap_degrees(solar_azimuth_deg) - wrap_degrees(satellite_azimuth_deg));
    double squared = ground_shadow * ground_shadow + edge * edge -
                     2.0 * ground_shadow * edge * std::cos(separation);
    if (squared < 0.0)
        squared = 0.0;  // rounding at the coincident-azimuth degeneracy

    ForwardMeasurements fwd;
    fwd.ground_shadow_m = ground_shadow;
    fwd.measurements.edge_len_m = edge;
    fwd.measurements.shadow_len_m = std::sqrt(squared);
    return fwd;
}

std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 over master + golden-ratio stride
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SyntheticScene generate_scene(std::uint64_t seed, const GenerationRanges& ranges) {
    if (ranges.structure_count < 1)
        throw DomainError("structure_count must be >= 1");
    if (!(ranges.solar_elevation_min_deg >= 1.0 &&
          ranges.solar_elevation_max_deg <= 89.0 &&
          ranges.solar_elevation_min_deg <= ranges.solar_elevation_max_deg))
        throw DomainError("solar elevation range must lie inside [1, 89]");
    if (!(ranges.satellite_elevation_min_deg > 0.0 &&
          ranges.satellite_elevation_max_deg < 90.0 &&
          ranges.satellite_elevation_min_deg <= ranges.satellite_elevation_max_deg))
        throw DomainError("satellite elevation range must lie inside (0, 90)");
    if (!(ranges.azimuth_separation_min_deg > 0.0 &&
          ranges.azimuth_separation_max_deg <= 175.0 &&
          ranges.azimuth_separation_min_deg <= ranges.azimuth_separation_max_deg))
        throw DomainError("azimuth separation range must lie inside (0, 175]");
    if (!(ranges.height_min_m > 0.0 && ranges.height_min_m <= ranges.height_max_m))
        throw DomainError("height range must be positive");
    if (!(std::abs(ranges.latitude_min_deg) < 89.0 &&
          std::abs(ranges.latitude_max_deg) < 89.0 &&
          ranges.latitude_min_deg <= ranges.latitude_max_deg))
        throw DomainError("latitude range must lie inside (-89, 89)");

    std::mt19937_64 rng(seed);

    SyntheticScene scene;
    scene.seed = seed;

    bool found = false;
    for (int attempt = 0; attempt < kMaxAttempts && !found; ++attempt) {
        const int day = std::uniform_int_distribution<int>(0, 364)(rng);
        const bool morning = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
        const int hour = morning ? std::uniform_int_distribution<int>(7, 11)(rng)
                                 : std::uniform_int_distribution<int>(12, 16)(rng);
        const int minute = std::uniform_int_distribution<int>(0, 59)(rng);

        CivilInstant acquired;
        acquired.year = ranges.year;
        acquired.day_of_year = day + (hour + minute / 60.0) / 24.0;
        acquired.half_day = morning ? HalfDay::Morning : HalfDay::Afternoon;

        const double latitude = uniform(rng, ranges.latitude_min_deg,
                                        ranges.latitude_max_deg);
        const double delta = declination_at(acquired);
        // |latitude| > |declination| keeps the azimuth monotone over the
        // day, a precondition of the smaller-root selection rule.
        if (std::abs(latitude) <= std::abs(delta) + kLatitudeDeclinationMarginDeg)
            continue;

        const double abs_omega = uniform(rng, 0.5, 110.0);
        const double omega = morning ? abs_omega : -abs_omega;
        const double h_s = elevation(latitude, delta, omega);
        if (!(h_s >= ranges.solar_elevation_min_deg &&
              h_s <= ranges.solar_elevation_max_deg))
            continue;
        const double azimuth = solar_azimuth(latitude, delta, omega, h_s);
        if (!equatorward(azimuth, latitude, kPrimeVerticalMarginDeg))
            continue;

        const double h_sa = uniform(rng, ranges.satellite_elevation_min_deg,
                                    ranges.satellite_elevation_max_deg);
        const double separation = uniform(rng, ranges.azimuth_separation_min_deg,
                                          ranges.azimuth_separation_max_deg) *
                                  (std::uniform_int_distribution<int>(0, 1)(rng) ? 1.0
                                                                                 : -1.0);
        const double sat_azimuth = wrap_degrees(azimuth + separation);

        // Shadow-to-height factor is structure-independent; one check
        // rejects the whole scene when the geometry degenerates.
        const ForwardMeasurements probe =
            forward_measurements(1.0, h_s, h_sa, azimuth, sat_azimuth);
        if (probe.measurements.shadow_len_m < kMinShadowToHeight)
            continue;
        // The closed-form inversion takes the larger cosine-rule root;
        // that is the physical one only while the ground shadow reaches
        // past the edge projection along the satellite bearing. Reject
        // the mirrored-triangle branch, with a 2% margin: approaching it
        // the inversion is ill-conditioned (the recovered root loses
        // relative precision as the square root term vanishes).
        const double sep_cos = std::cos(deg_to_rad(azimuth - sat_azimuth));
        if (probe.ground_shadow_m - probe.measurements.edge_len_m * sep_cos <
            0.02 * (probe.ground_shadow_m + probe.measurements.edge_len_m))
            continue;

        scene.acquired = acquired;
        scene.latitude_deg = latitude;
        scene.solar = SolarState{delta, omega, h_s, azimuth};
        scene.satellite_elevation_deg = h_sa;
        scene.satellite_azimuth_deg = sat_azimuth;
        found = true;
    }
    if (!found)
        throw DomainError("generation ranges admit no valid scene");

    for (int i = 0; i < ranges.structure_count; ++i) {
        const double height = uniform(rng, ranges.height_min_m, ranges.height_max_m);
        ForwardMeasurements fwd = forward_measurements(
            height, scene.solar.elevation_deg, scene.satellite_elevation_deg,
            scene.solar.azimuth_deg, scene.satellite_azimuth_deg);
        if (ranges.length_noise_sigma_m > 0.0) {
            fwd.measurements.shadow_len_m = perturb_positive(
                rng, fwd.measurements.shadow_len_m, ranges.length_noise_sigma_m);
            fwd.measurements.edge_len_m = perturb_positive(
                rng, fwd.measurements.edge_len_m, ranges.length_noise_sigma_m);
        }
        char id[16];
        std::snprintf(id, sizeof(id), "s%03d", i);
        scene.structures.push_back(
            SyntheticStructure{id, height, fwd.measurements, fwd.ground_shadow_m});
    }

    if (ranges.angle_noise_sigma_deg > 0.0) {
        std::normal_distribution<double> dist(0.0, ranges.angle_noise_sigma_deg);
        scene.solar.azimuth_deg = wrap_degrees(scene.solar.azimuth_deg + dist(rng));
        scene.satellite_azimuth_deg =
            wrap_degrees(scene.satellite_azimuth_deg + dist(rng));
    }

    return scene;
}

SceneFile to_scene_file(const SyntheticScene& scene) {
    if (scene.structures.empty())
        throw DomainError("scene has no structures");

    SceneFile file;
    const SyntheticStructure& first = scene.structures.front();

    file.observation.id = first.id;
    file.observation.acquired = scene.acquired;
    file.observation.latitude_deg = scene.latitude_deg;
    file.observation.solar_azimuth_deg = scene.solar.azimuth_deg;
    file.observation.satellite.azimuth_deg = scene.satellite_azimuth_deg;
    file.observation.satellite.elevation_deg = scene.satellite_elevation_deg;
    file.observation.measurements = first.measurements;
    file.observation.slope = SlopeSpec{0.0, SlopeSign::Positive};
    file.observation.truth_height_m = first.truth_height_m;

    for (std::size_t i = 1; i < scene.structures.size(); ++i) {
        const SyntheticStructure& s = scene.structures[i];
        NeighborMeasurement n;
        n.id = s.id;
        n.shadow_len_m = s.measurements.shadow_len_m;
        n.edge_len_m = s.measurements.edge_len_m;
        n.truth_height_m = s.truth_height_m;
        file.neighbors.push_back(std::move(n));
    }

    SceneTruth truth;
    truth.solar = scene.solar;
    truth.satellite_elevation_deg = scene.satellite_elevation_deg;
    truth.seed = scene.seed;
    file.truth = truth;
    return file;
}

RoundTripResult run_round_trip(std::uint64_t seed, std::uint64_t scene_count,
                               const GenerationRanges& ranges,
                               bool through_serialization) {
    RoundTripResult result;
    GenerationRanges noiseless = ranges;
    noiseless.length_noise_sigma_m = 0.0;
    noiseless.angle_noise_sigma_deg = 0.0;

    for (std::uint64_t i = 0; i < scene_count; ++i) {
        const std::uint64_t subseed = derive_subseed(seed, i);
        SyntheticScene scene = generate_scene(subseed, noiseless);
        SceneFile file = to_scene_file(scene);
        if (through_serialization)
            file = parse_scene_json(scene_to_json(file));

        SceneReport report = process_scene(file.observation, file.neighbors,
                                           SlopeErrorGate::default_gate());
        ++result.scenes;

        auto check = [&](const StructureResult& r) {
            ++result.structures;
            if (!r.estimate || !r.truth_height_m) {
                ++result.failures;
                if (result.first_failure.empty())
                    result.first_failure = "seed " + std::to_string(subseed) +
                                           " structure " + r.id + ": " +
                                           r.estimate_error.value_or("missing estimate");
                return;
            }
            const double rel = std::abs(r.estimate->height_m - *r.truth_height_m) /
                               *r.truth_height_m;
            if (rel > result.worst_height_rel_error)
                result.worst_height_rel_error = rel;
        };
        check(report.primary);
        for (const auto& n : report.neighbors)
            check(n);

        if (report.ratio_cs_computed &&
            report.ratio_cs_computed->std_dev > result.worst_ratio_std)
            result.worst_ratio_std = report.ratio_cs_computed->std_dev;
    }
    return result;
}

}  // namespace shadowheight
