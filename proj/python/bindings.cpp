// Python bindings for the main operations: the solar chain, the height
// inversion and ratio propagation, the slope-error gate, the forward
// model and the file pipeline.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "shadowheight/scene_model.hpp"
#include "shadowheight/synth_oracle.hpp"

namespace py = pybind11;
using namespace shadowheight;

namespace {

std::string half_day_name(HalfDay h) {
    return h == HalfDay::Morning ? "morning" : "afternoon";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Structure-height estimation from geo-tagged satellite shadow "
              "measurements";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<GeometryError>(m, "GeometryError", PyExc_ArithmeticError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

    py::enum_<HalfDay>(m, "HalfDay")
        .value("MORNING", HalfDay::Morning)
        .value("AFTERNOON", HalfDay::Afternoon);

    py::enum_<SlopeSign>(m, "SlopeSign")
        .value("POSITIVE", SlopeSign::Positive)
        .value("NEGATIVE", SlopeSign::Negative);

    py::class_<CivilInstant>(m, "CivilInstant")
        .def(py::init([](int year, double day_of_year, std::optional<HalfDay> half) {
                 CivilInstant instant{year, day_of_year, half};
                 validate_instant(instant);
                 return instant;
             }),
             py::arg("year"), py::arg("day_of_year"),
             py::arg("half_day") = std::nullopt)
        .def_static("from_calendar", &CivilInstant::from_calendar, py::arg("year"),
                    py::arg("month"), py::arg("day"), py::arg("hour") = 0,
                    py::arg("minute") = 0, py::arg("half_day") = std::nullopt)
        .def_readonly("year", &CivilInstant::year)
        .def_readonly("day_of_year", &CivilInstant::day_of_year)
        .def_readonly("half_day", &CivilInstant::half_day)
        .def("__repr__", [](const CivilInstant& c) {
            return "CivilInstant(year=" + std::to_string(c.year) +
                   ", day_of_year=" + std::to_string(c.day_of_year) +
                   (c.half_day ? ", half_day=" + half_day_name(*c.half_day) : "") + ")";
        });

    py::class_<SolarState>(m, "SolarState")
        .def_readonly("declination_deg", &SolarState::declination_deg)
        .def_readonly("hour_angle_deg", &SolarState::hour_angle_deg)
        .def_readonly("elevation_deg", &SolarState::elevation_deg)
        .def_readonly("azimuth_deg", &SolarState::azimuth_deg)
        .def("__repr__", [](const SolarState& s) {
            return "SolarState(declination_deg=" + std::to_string(s.declination_deg) +
                   ", hour_angle_deg=" + std::to_string(s.hour_angle_deg) +
                   ", elevation_deg=" + std::to_string(s.elevation_deg) +
                   ", azimuth_deg=" + std::to_string(s.azimuth_deg) + ")";
        });

    py::class_<DeclinationSpread>(m, "DeclinationSpread")
        .def_readonly("max_abs_delta_deg", &DeclinationSpread::max_abs_delta_deg)
        .def_readonly("max_abs_delta_sin", &DeclinationSpread::max_abs_delta_sin)
        .def_readonly("max_abs_delta_cos", &DeclinationSpread::max_abs_delta_cos);

    m.def("spring_equinox_day", &spring_equinox_day, py::arg("year"),
          "Spring-equinox day number (fractional days since Jan 1 00:00).");
    m.def("day_angle", &day_angle, py::arg("instant"));
    m.def("declination", &declination, py::arg("day_angle_deg"),
          "Solar declination in degrees from a day angle.");
    m.def("declination_at", &declination_at, py::arg("instant"));
    m.def("declination_daily_spread", &declination_daily_spread, py::arg("date"));
    m.def("hour_angle", &hour_angle, py::arg("solar_azimuth_deg"),
          py::arg("latitude_deg"), py::arg("declination_deg"), py::arg("half_day"),
          "Hour angle in degrees from a measured azimuth (positive morning, "
          "negative afternoon).");
    m.def("elevation", &elevation, py::arg("latitude_deg"), py::arg("declination_deg"),
          py::arg("hour_angle_deg"));
    m.def("solar_azimuth", &solar_azimuth, py::arg("latitude_deg"),
          py::arg("declination_deg"), py::arg("hour_angle_deg"),
          py::arg("elevation_deg"));
    m.def("solar_state_from", &solar_state_from, py::arg("latitude_deg"),
          py::arg("declination_deg"), py::arg("hour_angle_deg"));

    py::class_<HeightEstimate>(m, "HeightEstimate")
        .def_readonly("height_m", &HeightEstimate::height_m)
        .def_readonly("ground_shadow_m", &HeightEstimate::ground_shadow_m)
        .def_readonly("ratio_cs", &HeightEstimate::ratio_cs)
        .def_readonly("ratio_hs", &HeightEstimate::ratio_hs)
        .def_readonly("discriminant", &HeightEstimate::discriminant)
        .def_readonly("discriminant_clamped", &HeightEstimate::discriminant_clamped)
        .def("__repr__", [](const HeightEstimate& e) {
            return "HeightEstimate(height_m=" + std::to_string(e.height_m) + ")";
        });

    m.def(
        "estimate_height",
        [](double shadow_len_m, double edge_len_m, double solar_elevation_deg,
           double solar_azimuth_deg, double satellite_azimuth_deg) {
            return estimate_height({shadow_len_m, edge_len_m}, solar_elevation_deg,
                                   solar_azimuth_deg, satellite_azimuth_deg);
        },
        py::arg("shadow_len_m"), py::arg("edge_len_m"), py::arg("solar_elevation_deg"),
        py::arg("solar_azimuth_deg"), py::arg("satellite_azimuth_deg"),
        "Structure height from the measured shadow segment and edge displacement.");
    m.def("corner_shadow_ratio", &corner_shadow_ratio, py::arg("height_m"),
          py::arg("shadow_len_m"));
    m.def("propagate_by_shadow", &propagate_by_shadow, py::arg("ratio_cs"),
          py::arg("neighbor_shadow_len_m"));
    m.def("edge_height_ratio", &edge_height_ratio, py::arg("height_m"),
          py::arg("edge_len_m"));
    m.def("propagate_by_edge", &propagate_by_edge, py::arg("ratio_hs"),
          py::arg("neighbor_edge_len_m"));

    py::class_<RatioAggregate>(m, "RatioAggregate")
        .def_readonly("mean", &RatioAggregate::mean)
        .def_readonly("std_dev", &RatioAggregate::std_dev)
        .def_readonly("count", &RatioAggregate::count);
    m.def(
        "aggregate_values",
        [](const std::vector<double>& values) {
            return aggregate_values(values);
        },
        py::arg("values"), "Mean and sample standard deviation.");

    m.def(
        "relative_error",
        [](double solar_elevation_deg, double slope_deg, SlopeSign sign) {
            return relative_error(solar_elevation_deg, SlopeSpec{slope_deg, sign});
        },
        py::arg("solar_elevation_deg"), py::arg("slope_deg"), py::arg("sign"),
        "Relative height error induced by terrain slope.");
    m.def(
        "error_table",
        [](const std::vector<double>& slopes, const std::vector<double>& elevations,
           SlopeSign sign) { return error_table(slopes, elevations, sign); },
        py::arg("slopes_deg"), py::arg("elevations_deg"), py::arg("sign"));
    m.def("max_admissible_slope", &max_admissible_slope, py::arg("target_rel_error"),
          py::arg("solar_elevation_deg"), py::arg("sign"));
    m.def("round_half_up_2", &round_half_up_2, py::arg("value"));

    py::class_<SlopeErrorGate>(m, "SlopeErrorGate")
        .def_readonly("target_rel_error", &SlopeErrorGate::target_rel_error)
        .def_readonly("max_pos_slope_deg", &SlopeErrorGate::max_pos_slope_deg)
        .def_readonly("max_neg_slope_deg", &SlopeErrorGate::max_neg_slope_deg)
        .def_static("default_gate", &SlopeErrorGate::default_gate)
        .def_static("from_target", &SlopeErrorGate::from_target,
                    py::arg("target_rel_error"), py::arg("solar_elevation_deg"));

    py::class_<ForwardMeasurements>(m, "ForwardMeasurements")
        .def_property_readonly(
            "shadow_len_m",
            [](const ForwardMeasurements& f) { return f.measurements.shadow_len_m; })
        .def_property_readonly(
            "edge_len_m",
            [](const ForwardMeasurements& f) { return f.measurements.edge_len_m; })
        .def_readonly("ground_shadow_m", &ForwardMeasurements::ground_shadow_m);
    m.def("forward_measurements", &forward_measurements, py::arg("height_m"),
          py::arg("solar_elevation_deg"), py::arg("satellite_elevation_deg"),
          py::arg("solar_azimuth_deg"), py::arg("satellite_azimuth_deg"),
          "Exact measurements a structure of known height produces.");

    m.def(
        "generate_scene_json",
        [](std::uint64_t seed, int structure_count, double length_noise_sigma_m) {
            GenerationRanges ranges;
            ranges.structure_count = structure_count;
            ranges.length_noise_sigma_m = length_noise_sigma_m;
            return scene_to_json(to_scene_file(generate_scene(seed, ranges)));
        },
        py::arg("seed"), py::arg("structure_count") = 5,
        py::arg("length_noise_sigma_m") = 0.0,
        "Generate a ground-truthed synthetic scene as scene-file JSON.");

    py::class_<RoundTripResult>(m, "RoundTripResult")
        .def_readonly("scenes", &RoundTripResult::scenes)
        .def_readonly("structures", &RoundTripResult::structures)
        .def_readonly("worst_height_rel_error", &RoundTripResult::worst_height_rel_error)
        .def_readonly("worst_ratio_std", &RoundTripResult::worst_ratio_std)
        .def_readonly("failures", &RoundTripResult::failures);
    m.def(
        "run_round_trip",
        [](std::uint64_t seed, std::uint64_t scenes, bool through_serialization) {
            return run_round_trip(seed, scenes, GenerationRanges{},
                                  through_serialization);
        },
        py::arg("seed"), py::arg("scenes"), py::arg("through_serialization") = false,
        "Forward-generate scenes and push them through the inverse pipeline.");

    py::class_<ResolvedSolar>(m, "ResolvedSolar")
        .def_readonly("state", &ResolvedSolar::state)
        .def_readonly("declination_from_date_deg",
                      &ResolvedSolar::declination_from_date_deg)
        .def_readonly("hour_angle_from_azimuth_deg",
                      &ResolvedSolar::hour_angle_from_azimuth_deg)
        .def_readonly("declination_overridden", &ResolvedSolar::declination_overridden)
        .def_readonly("hour_angle_overridden", &ResolvedSolar::hour_angle_overridden);

    py::class_<StructureResult>(m, "StructureResult")
        .def_readonly("id", &StructureResult::id)
        .def_readonly("shadow_len_m", &StructureResult::shadow_len_m)
        .def_readonly("edge_len_m", &StructureResult::edge_len_m)
        .def_readonly("estimate", &StructureResult::estimate)
        .def_readonly("estimate_error", &StructureResult::estimate_error)
        .def_readonly("propagated_height_m", &StructureResult::propagated_height_m)
        .def_readonly("truth_height_m", &StructureResult::truth_height_m)
        .def_readonly("flags", &StructureResult::flags);

    py::class_<SceneReport>(m, "SceneReport")
        .def_readonly("scene_id", &SceneReport::scene_id)
        .def_readonly("solar", &SceneReport::solar)
        .def_readonly("processed", &SceneReport::processed)
        .def_readonly("forced", &SceneReport::forced)
        .def_readonly("primary", &SceneReport::primary)
        .def_readonly("neighbors", &SceneReport::neighbors)
        .def_readonly("ratio_cs_computed", &SceneReport::ratio_cs_computed)
        .def_readonly("ratio_cs_published", &SceneReport::ratio_cs_published)
        .def_readonly("mean_ratio_hs", &SceneReport::mean_ratio_hs)
        .def_readonly("diagnostics", &SceneReport::diagnostics)
        .def_property_readonly("validation_passed", [](const SceneReport& r) {
            return r.validation.passed();
        })
        .def_property_readonly("violations", [](const SceneReport& r) {
            std::vector<std::string> out;
            for (const auto& v : r.validation.violations)
                out.push_back(std::string(to_string(v.code)) + ": " + v.message);
            return out;
        });

    m.def(
        "process_scene_file",
        [](const std::filesystem::path& path, bool force, bool lenient,
           std::optional<double> gate_error) {
            std::vector<std::string> warnings;
            SceneFile file = read_scene_file(path, ParseOptions{!lenient}, &warnings);
            SlopeErrorGate gate = SlopeErrorGate::default_gate();
            if (gate_error) {
                const ResolvedSolar solar = resolve_solar_state(file.observation);
                gate = SlopeErrorGate::from_target(*gate_error,
                                                   solar.state.elevation_deg);
            }
            SceneReport report = process_scene(file.observation, file.neighbors, gate,
                                               ProcessOptions{force});
            report.notes = file.notes;
            return report;
        },
        py::arg("path"), py::arg("force") = false, py::arg("lenient") = false,
        py::arg("gate_error") = std::nullopt,
        "Read a scene file and run the full pipeline on it.");

    m.def(
        "render_report",
        [](const SceneReport& report, const std::string& format) {
            return render_report(report, format == "csv" ? ReportFormat::Csv
                                                         : ReportFormat::Text);
        },
        py::arg("report"), py::arg("format") = "text");
}
