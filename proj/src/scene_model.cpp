/**
 * Scene pipeline: admissibility validation, solar-state resolution and
 * the estimation/propagation chain producing a SceneReport.
 *
 * Per-structure failures (infeasible discriminants, missing lengths) are
 * recorded as result entries; only a scene whose solar geometry cannot
 * be resolved at all stops the pipeline.
 */

#include "shadowheight/scene_model.hpp"

#include <cmath>
#include <cstdio>

#include "shadowheight/angles.hpp"

namespace shadowheight {

namespace {

/// Relative disagreement above which a published value is flagged as
/// inconsistent with what the measurements imply.
constexpr double kPublishedMismatchRelTol = 0.01;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void validate_observation(const SceneObservation& obs) {
    validate_instant(obs.acquired);
    if (!(obs.latitude_deg > -90.0 && obs.latitude_deg < 90.0))
        throw DomainError("latitude must be in (-90, 90)");
    if (!(obs.measurements.shadow_len_m > 0.0))
        throw DomainError("shadow_len_m must be positive");
    if (!(obs.measurements.edge_len_m >= 0.0))
        throw DomainError("edge_len_m must be non-negative");
    if (obs.satellite.elevation_deg &&
        !(*obs.satellite.elevation_deg > 0.0 && *obs.satellite.elevation_deg <= 90.0))
        throw DomainError("satellite elevation must be in (0, 90]");
    if (!(obs.slope.angle_deg >= 0.0 && obs.slope.angle_deg <= 10.0))
        throw DomainError("slope angle outside supported band [0, 10]");
}

/// Resolution core shared by validate_scene (which wants the sun state
/// even below the horizon) and resolve_solar_state (which rejects it).
ResolvedSolar resolve_core(const SceneObservation& obs) {
    validate_observation(obs);

    ResolvedSolar resolved;
    resolved.context = day_angle_context(obs.acquired);
    resolved.declination_from_date_deg = declination(resolved.context.day_angle_deg);
    resolved.declination_overridden = obs.declination_override_deg.has_value();
    const double delta =
        obs.declination_override_deg.value_or(resolved.declination_from_date_deg);

    // Invert the measured azimuth whenever possible, even under an
    // override, so the report can cross-check the two.
    std::optional<HourAngleSolution> inversion;
    std::string inversion_error;
    if (obs.acquired.half_day) {
        try {
            inversion = solve_hour_angle(obs.solar_azimuth_deg, obs.latitude_deg, delta,
                                         *obs.acquired.half_day);
        } catch (const GeometryError& e) {
            inversion_error = e.what();
        }
    } else {
        inversion_error = "half_day required to sign the hour angle";
    }

    double omega = 0.0;
    if (obs.hour_angle_override_deg) {
        omega = *obs.hour_angle_override_deg;
        resolved.hour_angle_overridden = true;
    } else {
        if (!inversion)
            throw GeometryError("hour angle unresolved: " + inversion_error);
        omega = inversion->hour_angle_deg;
    }
    if (inversion) {
        resolved.hour_angle_from_azimuth_deg = inversion->hour_angle_deg;
        resolved.hour_angle_clamped = inversion->clamped;
    }

    resolved.state.declination_deg = delta;
    resolved.state.hour_angle_deg = omega;
    resolved.state.elevation_deg = elevation(obs.latitude_deg, delta, omega);
    resolved.state.azimuth_deg = wrap_degrees(obs.solar_azimuth_deg);
    return resolved;
}

void append_solar_diagnostics(const ResolvedSolar& solar,
                              std::vector<std::string>& diagnostics) {
    if (solar.declination_overridden) {
        const double computed = solar.declination_from_date_deg;
        const double used = solar.state.declination_deg;
        if (std::abs(computed - used) > 0.05)
            diagnostics.push_back("declination_override_mismatch: override " + fmt(used) +
                                  " deg but acquisition date implies " + fmt(computed) +
                                  " deg");
    }
    if (solar.hour_angle_overridden) {
        if (solar.hour_angle_from_azimuth_deg) {
            const double computed = *solar.hour_angle_from_azimuth_deg;
            const double used = solar.state.hour_angle_deg;
            if (std::abs(computed - used) > 0.05)
                diagnostics.push_back("hour_angle_override_mismatch: override " +
                                      fmt(used) + " deg but azimuth inversion gives " +
                                      fmt(computed) + " deg");
        } else {
            diagnostics.push_back(
                "hour_angle_override_unverifiable: azimuth inversion infeasible, "
                "override accepted as-is");
        }
    }
    if (solar.hour_angle_clamped)
        diagnostics.push_back(
            "hour_angle_root_clamped: cos(hour angle) clamped onto [-1, 1]");
}

/// Flags disagreements between published values and what this pipeline
/// derives from the same lengths.
void check_published(StructureResult& result, std::vector<std::string>& diagnostics) {
    const auto& pub = result.published;
    if (pub.height_m && pub.ratio_cs && result.shadow_len_m) {
        const double derived = *pub.height_m / *result.shadow_len_m;
        if (std::abs(derived - *pub.ratio_cs) >
            kPublishedMismatchRelTol * std::abs(*pub.ratio_cs)) {
            result.flags.push_back("published_ratio_mismatch");
            diagnostics.push_back("published_ratio_mismatch: structure '" + result.id +
                                  "' published ratio " + fmt(*pub.ratio_cs) +
                                  " but published height / shadow = " + fmt(derived));
        }
    }
    if (pub.height_m && result.estimate) {
        const double est = result.estimate->height_m;
        if (std::abs(est - *pub.height_m) >
            kPublishedMismatchRelTol * std::abs(*pub.height_m)) {
            result.flags.push_back("published_height_mismatch");
            diagnostics.push_back("published_height_mismatch: structure '" + result.id +
                                  "' estimated " + fmt(est) + " m, published " +
                                  fmt(*pub.height_m) + " m");
        }
    }
}

}  // namespace

const char* to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::VerticalEdgeNotVisible: return "vertical_edge_not_visible";
        case ViolationCode::ShadowAmbiguous: return "shadow_ambiguous";
        case ViolationCode::SlopeExceedsGate: return "slope_exceeds_gate";
        case ViolationCode::SunBelowHorizon: return "sun_below_horizon";
        case ViolationCode::SolarGeometryInfeasible: return "solar_geometry_infeasible";
    }
    return "unknown";
}

ValidationOutcome validate_scene(const SceneObservation& obs, const SlopeErrorGate& gate) {
    ValidationOutcome outcome;

    if (!obs.vertical_edge_visible)
        outcome.violations.push_back({ViolationCode::VerticalEdgeNotVisible,
                                      "no distinctly visible vertical edge"});
    if (!obs.shadow_unambiguous)
        outcome.violations.push_back(
            {ViolationCode::ShadowAmbiguous, "shadow too ambiguous to measure reliably"});

    const bool positive = obs.slope.sign == SlopeSign::Positive;
    const double limit = positive ? gate.max_pos_slope_deg : gate.max_neg_slope_deg;
    if (obs.slope.angle_deg > limit)
        outcome.violations.push_back(
            {ViolationCode::SlopeExceedsGate,
             std::string(positive ? "positive" : "negative") + " slope " +
                 fmt(obs.slope.angle_deg) + " deg exceeds " + fmt(limit) + " deg"});

    try {
        const ResolvedSolar solar = resolve_core(obs);
        if (!(solar.state.elevation_deg > 0.0))
            outcome.violations.push_back(
                {ViolationCode::SunBelowHorizon,
                 "resolved solar elevation " + fmt(solar.state.elevation_deg) + " deg"});
    } catch (const GeometryError& e) {
        outcome.violations.push_back({ViolationCode::SolarGeometryInfeasible, e.what()});
    }

    return outcome;
}

ResolvedSolar resolve_solar_state(const SceneObservation& obs) {
    ResolvedSolar resolved = resolve_core(obs);
    if (!(resolved.state.elevation_deg > 0.0))
        throw GeometryError("sun at or below the horizon (elevation " +
                            fmt(resolved.state.elevation_deg) + " deg)");
    return resolved;
}

SceneReport process_scene(const SceneObservation& obs,
                          std::span<const NeighborMeasurement> neighbors,
                          const SlopeErrorGate& gate, const ProcessOptions& options) {
    SceneReport report;
    report.scene_id = obs.id;
    report.forced = options.force;
    report.validation = validate_scene(obs, gate);

    report.primary.id = obs.id;
    report.primary.shadow_len_m = obs.measurements.shadow_len_m;
    if (obs.measurements.edge_len_m > 0.0)
        report.primary.edge_len_m = obs.measurements.edge_len_m;
    report.primary.published = obs.published;
    report.primary.truth_height_m = obs.truth_height_m;
    for (const auto& n : neighbors) {
        StructureResult r;
        r.id = n.id;
        r.shadow_len_m = n.shadow_len_m;
        r.edge_len_m = n.edge_len_m;
        r.published = n.published;
        r.truth_height_m = n.truth_height_m;
        report.neighbors.push_back(std::move(r));
    }

    if (!report.validation.passed() && !options.force)
        return report;  // report carries the violations; nothing processed
    if (report.forced && !report.validation.passed())
        report.diagnostics.push_back("forced: processed despite validation violations");

    bool solar_ok = false;
    try {
        report.solar = resolve_core(obs);
        solar_ok = report.solar.state.elevation_deg > 0.0;
        if (!solar_ok)
            report.diagnostics.push_back("sun_below_horizon: elevation " +
                                         fmt(report.solar.state.elevation_deg) + " deg");
    } catch (const GeometryError& e) {
        report.diagnostics.push_back(std::string("solar_resolution_failed: ") + e.what());
    }
    if (!solar_ok)
        return report;

    append_solar_diagnostics(report.solar, report.diagnostics);
    report.processed = true;

    const double h_s = report.solar.state.elevation_deg;
    const double alpha_s = report.solar.state.azimuth_deg;
    const double alpha_sa = obs.satellite.azimuth_deg;

    std::vector<HeightEstimate> computed;
    std::vector<double> published_ratios;
    std::vector<double> hs_ratios;

    auto run_estimate = [&](StructureResult& result, double shadow, double edge) {
        try {
            HeightEstimate est = estimate_height({shadow, edge}, h_s, alpha_s, alpha_sa);
            if (est.discriminant_clamped) {
                result.flags.push_back("discriminant_clamped");
                report.diagnostics.push_back(
                    "discriminant_clamped: structure '" + result.id + "' discriminant " +
                    fmt(est.discriminant) + " clamped to 0");
            }
            result.estimate = est;
            computed.push_back(est);
            if (est.ratio_hs)
                hs_ratios.push_back(*est.ratio_hs);
        } catch (const GeometryError& e) {
            result.estimate_error = e.what();
            result.flags.push_back(e.discriminant() < 0.0 ? "infeasible_discriminant"
                                                          : "infeasible_geometry");
            report.diagnostics.push_back("estimate_infeasible: structure '" + result.id +
                                         "': " + e.what());
        }
    };

    run_estimate(report.primary, obs.measurements.shadow_len_m,
                 obs.measurements.edge_len_m);
    if (obs.published.ratio_cs)
        published_ratios.push_back(*obs.published.ratio_cs);
    check_published(report.primary, report.diagnostics);

    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        StructureResult& result = report.neighbors[i];
        const NeighborMeasurement& n = neighbors[i];
        if (n.shadow_len_m && n.edge_len_m)
            run_estimate(result, *n.shadow_len_m, *n.edge_len_m);
        if (n.published.ratio_cs)
            published_ratios.push_back(*n.published.ratio_cs);
        check_published(result, report.diagnostics);
    }

    if (!computed.empty())
        report.ratio_cs_computed = aggregate_ratio(computed);
    if (!published_ratios.empty())
        report.ratio_cs_published = aggregate_values(published_ratios);
    if (!hs_ratios.empty())
        report.mean_ratio_hs = aggregate_values(hs_ratios).mean;

    // The signifier ratio for propagation: computed when available,
    // otherwise the published column (flagged per structure).
    std::optional<double> signifier;
    bool signifier_published = false;
    if (report.ratio_cs_computed) {
        signifier = report.ratio_cs_computed->mean;
    } else if (report.ratio_cs_published) {
        signifier = report.ratio_cs_published->mean;
        signifier_published = true;
        report.diagnostics.push_back(
            "propagation_ratio_from_published: no feasible estimate in scene; "
            "neighbor propagation uses the published ratio mean " + fmt(*signifier));
    }

    for (StructureResult& result : report.neighbors) {
        if (!result.shadow_len_m && !result.edge_len_m) {
            result.estimate_error = "no shadow or edge length provided";
            result.flags.push_back("no_measurement");
            continue;
        }
        if (result.shadow_len_m) {
            if (signifier) {
                result.propagated_height_m =
                    propagate_by_shadow(*signifier, *result.shadow_len_m);
                result.flags.push_back(signifier_published
                                           ? "propagated_by_shadow_published_ratio"
                                           : "propagated_by_shadow");
            }
        } else if (result.edge_len_m) {
            if (report.mean_ratio_hs) {
                result.propagated_height_m =
                    propagate_by_edge(*report.mean_ratio_hs, *result.edge_len_m);
                result.flags.push_back("propagated_by_edge");
            } else {
                result.estimate_error = "no edge ratio available for propagation";
                result.flags.push_back("no_edge_ratio");
            }
        }
    }

    return report;
}

}  // namespace shadowheight
