#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shadowheight/shadow_geometry.hpp"
#include "shadowheight/slope_error.hpp"
#include "shadowheight/solar_ephemeris.hpp"

namespace shadowheight {

/// Reference values published alongside a measurement (from an external
/// survey or an earlier report). Carried through to the report so the
/// pipeline can cross-check its own results against them.
struct PublishedValues {
    std::optional<double> height_m;
    std::optional<double> measured_height_m;
    std::optional<double> ratio_cs;

    bool empty() const {
        return !height_m && !measured_height_m && !ratio_cs;
    }
};

/// One measured structure with the scene context it was acquired in.
struct SceneObservation {
    std::string id;
    CivilInstant acquired;
    double latitude_deg = 0.0;
    /// Measured solar azimuth, degrees clockwise from true north.
    double solar_azimuth_deg = 0.0;
    SatelliteGeometry satellite;
    ShadowMeasurements measurements;
    SlopeSpec slope;
    bool vertical_edge_visible = true;
    bool shadow_unambiguous = true;
    /// Bypasses the azimuth inversion when the hour angle is known.
    std::optional<double> hour_angle_override_deg;
    /// Bypasses the declination series when reproducing a published data
    /// set whose declination cannot be reconciled with its stated date.
    std::optional<double> declination_override_deg;
    PublishedValues published;
    /// Ground-truth height, present in synthetic scenes.
    std::optional<double> truth_height_m;
};

/// A neighboring structure: at least one of the two lengths present.
struct NeighborMeasurement {
    std::string id;
    std::optional<double> shadow_len_m;
    std::optional<double> edge_len_m;
    PublishedValues published;
    std::optional<double> truth_height_m;
};

enum class ViolationCode {
    VerticalEdgeNotVisible,
    ShadowAmbiguous,
    SlopeExceedsGate,
    SunBelowHorizon,
    SolarGeometryInfeasible,
};

const char* to_string(ViolationCode code);

struct Violation {
    ViolationCode code;
    std::string message;
};

struct ValidationOutcome {
    std::vector<Violation> violations;
    bool passed() const { return violations.empty(); }
};

/// Solar state resolved for a scene, with everything needed to audit how
/// each component was obtained.
struct ResolvedSolar {
    SolarState state;
    DayAngleContext context;
    /// Declination from the acquisition date (always computed, even when
    /// an override replaces it downstream).
    double declination_from_date_deg = 0.0;
    /// Hour angle from azimuth inversion; absent when the inversion is
    /// infeasible and an override made resolution possible anyway.
    std::optional<double> hour_angle_from_azimuth_deg;
    bool declination_overridden = false;
    bool hour_angle_overridden = false;
    bool hour_angle_clamped = false;
};

/// Collects every §-style admissibility violation instead of failing
/// fast. Never throws for violations; they are data.
ValidationOutcome validate_scene(const SceneObservation& obs, const SlopeErrorGate& gate);

/// declination from the acquisition date (or override), hour angle from
/// the override or the azimuth inversion, elevation from the elevation
/// relation. Throws GeometryError when the inversion is infeasible or
/// the resolved sun is at or below the horizon.
ResolvedSolar resolve_solar_state(const SceneObservation& obs);

struct StructureResult {
    std::string id;
    std::optional<double> shadow_len_m;
    std::optional<double> edge_len_m;
    std::optional<HeightEstimate> estimate;
    std::optional<std::string> estimate_error;
    std::optional<double> propagated_height_m;
    PublishedValues published;
    std::optional<double> truth_height_m;
    /// Machine-readable markers, ';'-joined in the CSV flags column.
    std::vector<std::string> flags;
};

struct SceneReport {
    std::string scene_id;
    ResolvedSolar solar;
    ValidationOutcome validation;
    bool forced = false;
    /// False when validation failed and processing was not forced.
    bool processed = false;
    StructureResult primary;
    std::vector<StructureResult> neighbors;
    /// Over ratios computed by this pipeline (primary + neighbors with
    /// both lengths).
    std::optional<RatioAggregate> ratio_cs_computed;
    /// Over published ratio values carried in the input, when any.
    std::optional<RatioAggregate> ratio_cs_published;
    std::optional<double> mean_ratio_hs;
    /// "code: detail" lines; every clamp or inconsistency performed or
    /// found anywhere in the pipeline lands here.
    std::vector<std::string> diagnostics;
    std::vector<std::string> notes;
};

struct ProcessOptions {
    bool force = false;
};

/// Full pipeline for one scene: validation, solar resolution, height
/// estimation, ratio aggregation, neighbor propagation. Per-structure
/// failures become result entries, not pipeline aborts.
SceneReport process_scene(const SceneObservation& obs,
                          std::span<const NeighborMeasurement> neighbors,
                          const SlopeErrorGate& gate, const ProcessOptions& options = {});

/// Ground-truth block a synthetic scene file carries for verification.
struct SceneTruth {
    SolarState solar;
    double satellite_elevation_deg = 0.0;
    std::optional<std::uint64_t> seed;
};

struct SceneFile {
    SceneObservation observation;
    std::vector<NeighborMeasurement> neighbors;
    std::vector<std::string> notes;
    std::optional<SceneTruth> truth;
};

struct ParseOptions {
    /// Strict mode rejects unknown fields; lenient mode reports them as
    /// warnings.
    bool strict = true;
};

/// Parses scene JSON (schema_version 1). Unknown fields are errors in
/// strict mode, warnings otherwise. Throws SchemaError with the failing
/// field path.
SceneFile parse_scene_json(const std::string& text, const ParseOptions& options = {},
                           std::vector<std::string>* warnings = nullptr);

SceneFile read_scene_file(const std::filesystem::path& path,
                          const ParseOptions& options = {},
                          std::vector<std::string>* warnings = nullptr);

/// Canonical serialization: sorted keys, two-space indent, shortest
/// round-trip number formatting, trailing newline. read/write/read is
/// lossless.
std::string scene_to_json(const SceneFile& scene);

void write_scene_file(const SceneFile& scene, const std::filesystem::path& path);

enum class ReportFormat { Text, Csv };

/// CSV: one row per structure with the normative header
/// structure_id,L_A2B_m,L_A1A2_m,H_m,R_CS,R_HS,flags (full-precision
/// numbers). Text: the full report at six significant digits.
std::string render_report(const SceneReport& report, ReportFormat format);

void write_report(const SceneReport& report, const std::filesystem::path& path,
                  ReportFormat format);

}  // namespace shadowheight
