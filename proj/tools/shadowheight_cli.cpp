// Command-line front end: solar-state queries, scene reports, reference
// tables, synthetic-scene generation and the self-verification oracle.
//
// Exit codes: 0 success, 1 validation/verification failure, 2 infeasible
// geometry, 3 I/O, schema or usage error. Diagnostics go to stderr; data
// goes to stdout or --out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shadowheight/scene_model.hpp"
#include "shadowheight/synth_oracle.hpp"

using namespace shadowheight;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitGeometry = 2;
constexpr int kExitUsage = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void parse_date(const std::string& text, int& year, int& month, int& day) {
    if (std::sscanf(text.c_str(), "%d-%d-%d", &year, &month, &day) != 3)
        throw UsageError("--date must be YYYY-MM-DD, got '" + text + "'");
}

void parse_time(const std::string& text, int& hour, int& minute) {
    if (std::sscanf(text.c_str(), "%d:%d", &hour, &minute) != 2)
        throw UsageError("--time must be HH:MM, got '" + text + "'");
}

HalfDay parse_half_day_flag(const std::string& text) {
    if (text == "morning")
        return HalfDay::Morning;
    if (text == "afternoon")
        return HalfDay::Afternoon;
    throw UsageError("--half-day must be morning or afternoon");
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw SchemaError("cannot open file for writing: " + out_path);
    out << content;
    if (!out)
        throw SchemaError("write failed: " + out_path);
}

// ------------------------------------------------------------------ sun

struct SunArgs {
    std::string date, time = "12:00", half_day;
    std::optional<double> latitude, solar_azimuth, hour_angle;
};

int cmd_sun(const SunArgs& args) {
    int year, month, day, hour, minute;
    parse_date(args.date, year, month, day);
    parse_time(args.time, hour, minute);

    std::optional<HalfDay> half;
    if (!args.half_day.empty())
        half = parse_half_day_flag(args.half_day);
    const CivilInstant instant =
        CivilInstant::from_calendar(year, month, day, hour, minute, half);

    const DayAngleContext context = day_angle_context(instant);
    const double delta = declination(context.day_angle_deg);
    std::printf("day_angle_deg: %.4f\n", context.day_angle_deg);
    std::printf("equinox_day: %.4f\n", context.equinox_day);
    std::printf("declination_deg: %.4f\n", delta);

    std::optional<double> omega = args.hour_angle;
    if (args.solar_azimuth) {
        if (!args.latitude)
            throw UsageError("--solar-azimuth requires --lat");
        omega = hour_angle(*args.solar_azimuth, *args.latitude, delta,
                           instant.half_day.value());
    }
    if (!omega)
        return kExitOk;  // declination-only query
    std::printf("hour_angle_deg: %.4f\n", *omega);

    if (args.latitude) {
        const double h = elevation(*args.latitude, delta, *omega);
        std::printf("elevation_deg: %.4f\n", h);
        if (h < 90.0)
            std::printf("azimuth_deg: %.4f\n",
                        solar_azimuth(*args.latitude, delta, *omega, h));
    }
    return kExitOk;
}

// ------------------------------------------------------------- estimate

struct EstimateArgs {
    std::string scene_path, format = "text", out_path;
    std::optional<double> gate_error;
    bool force = false;
    bool lenient = false;
};

int cmd_estimate(const EstimateArgs& args) {
    std::vector<std::string> warnings;
    const SceneFile file =
        read_scene_file(args.scene_path, ParseOptions{!args.lenient}, &warnings);
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << "\n";

    SlopeErrorGate gate = SlopeErrorGate::default_gate();
    if (args.gate_error) {
        try {
            const ResolvedSolar solar = resolve_solar_state(file.observation);
            gate = SlopeErrorGate::from_target(*args.gate_error,
                                               solar.state.elevation_deg);
        } catch (const std::exception& e) {
            std::cerr << "warning: cannot derive gate from target ("
                      << e.what() << "); using the default gate\n";
            gate.target_rel_error = *args.gate_error;
        }
    }

    SceneReport report = process_scene(file.observation, file.neighbors, gate,
                                       ProcessOptions{args.force});
    report.notes = file.notes;

    const ReportFormat format =
        args.format == "csv" ? ReportFormat::Csv : ReportFormat::Text;
    emit(render_report(report, format), args.out_path);
    for (const auto& v : report.validation.violations)
        std::cerr << "violation " << to_string(v.code) << ": " << v.message << "\n";

    if (!report.validation.passed() && !args.force)
        return kExitValidation;
    if (!report.processed)
        return kExitGeometry;
    return kExitOk;
}

// ------------------------------------------------------------ propagate

struct PropagateArgs {
    std::optional<double> ratio_cs, shadow_len, ratio_hs, edge_len;
};

int cmd_propagate(const PropagateArgs& args) {
    const bool by_shadow = args.ratio_cs && args.shadow_len;
    const bool by_edge = args.ratio_hs && args.edge_len;
    if (by_shadow == by_edge)
        throw UsageError(
            "provide exactly one of --ratio-cs with --shadow-len or "
            "--ratio-hs with --edge-len");
    const double height = by_shadow
                              ? propagate_by_shadow(*args.ratio_cs, *args.shadow_len)
                              : propagate_by_edge(*args.ratio_hs, *args.edge_len);
    std::printf("height_m: %.4f\n", height);
    return kExitOk;
}

// ------------------------------------------------------------ slope-gate

int cmd_slope_gate(double target, double elevation_deg, const std::string& sign) {
    if (sign == "positive" || sign == "both")
        std::printf("max_pos_slope_deg: %.4f\n",
                    max_admissible_slope(target, elevation_deg, SlopeSign::Positive));
    if (sign == "negative" || sign == "both")
        std::printf("max_neg_slope_deg: %.4f\n",
                    max_admissible_slope(target, elevation_deg, SlopeSign::Negative));
    return kExitOk;
}

// ---------------------------------------------------------------- tables

std::string render_slope_table(SlopeSign sign) {
    const std::vector<double> elevations{20, 30, 40, 50, 60, 70};
    const std::vector<double> slopes = sign == SlopeSign::Positive
                                           ? std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0, 3.5}
                                           : std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0};
    const auto grid = error_table(slopes, elevations, sign);

    std::ostringstream out;
    out << "slope_deg";
    for (double h : elevations)
        out << "," << h;
    out << "\n";
    char cell[32];
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        std::snprintf(cell, sizeof(cell), "%.1f", slopes[i]);
        out << cell;
        for (std::size_t j = 0; j < elevations.size(); ++j) {
            std::snprintf(cell, sizeof(cell), ",%.2f", round_half_up_2(grid[i][j]));
            out << cell;
        }
        out << "\n";
    }
    return out.str();
}

std::string render_declination_table(int year, int utc_offset_hours) {
    const int months[6] = {1, 3, 5, 7, 9, 11};
    std::ostringstream out;
    out << "date,decl_09_deg,decl_12_deg,decl_15_deg,"
           "max_delta_deg,max_delta_abs_sin,max_delta_abs_cos\n";
    char buf[160];
    for (int month : months) {
        const CivilInstant date = CivilInstant::from_calendar(year, month, 15);
        double samples[3];
        const int hours[3] = {9, 12, 15};
        for (int i = 0; i < 3; ++i) {
            CivilInstant sample =
                CivilInstant::from_calendar(year, month, 15, hours[i]);
            sample.day_of_year -= utc_offset_hours / 24.0;
            samples[i] = declination_at(sample);
        }
        const DeclinationSpread spread = declination_daily_spread(date);
        std::snprintf(buf, sizeof(buf), "%d.15,%.2f,%.2f,%.2f,%.2f,%.1E,%.1E\n", month,
                      samples[0], samples[1], samples[2], spread.max_abs_delta_deg,
                      spread.max_abs_delta_sin, spread.max_abs_delta_cos);
        out << buf;
    }
    return out.str();
}

int cmd_tables(int which, std::optional<int> year, int utc_offset_hours,
               const std::string& out_path) {
    std::string content;
    switch (which) {
        case 1: content = render_slope_table(SlopeSign::Positive); break;
        case 2: content = render_slope_table(SlopeSign::Negative); break;
        case 3:
            if (!year)
                throw UsageError("--which 3 requires --year");
            content = render_declination_table(*year, utc_offset_hours);
            break;
        default: throw UsageError("--which must be 1, 2 or 3");
    }
    emit(content, out_path);
    return kExitOk;
}

// ----------------------------------------------------------------- synth

int cmd_synth(std::uint64_t seed, const GenerationRanges& ranges,
              const std::string& out_path) {
    const SyntheticScene scene = generate_scene(seed, ranges);
    emit(scene_to_json(to_scene_file(scene)), out_path);
    return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(std::uint64_t seeds, int structures) {
    GenerationRanges ranges;
    ranges.structure_count = structures;
    const RoundTripResult result = run_round_trip(0x5EED2017, seeds, ranges, true);

    std::printf("scenes: %llu\n", static_cast<unsigned long long>(result.scenes));
    std::printf("structures: %llu\n",
                static_cast<unsigned long long>(result.structures));
    std::printf("worst_height_rel_error: %.3e\n", result.worst_height_rel_error);
    std::printf("worst_ratio_std: %.3e\n", result.worst_ratio_std);

    const bool ok = result.failures == 0 && result.worst_height_rel_error < 1e-9 &&
                    result.worst_ratio_std < 1e-12;
    if (!ok && !result.first_failure.empty())
        std::cerr << "first failure: " << result.first_failure << "\n";
    std::printf("result: %s\n", ok ? "pass" : "fail");
    return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-height estimation from geo-tagged satellite shadow "
                 "measurements"};
    app.require_subcommand(1);

    SunArgs sun_args;
    CLI::App* sun = app.add_subcommand("sun", "Solar state for a date/time/place");
    sun->add_option("--date", sun_args.date, "Acquisition date, YYYY-MM-DD")->required();
    sun->add_option("--time", sun_args.time, "Local acquisition time, HH:MM");
    sun->add_option("--lat", sun_args.latitude, "Latitude in degrees");
    auto* opt_az = sun->add_option("--solar-azimuth", sun_args.solar_azimuth,
                                   "Measured solar azimuth in degrees");
    sun->add_option("--hour-angle", sun_args.hour_angle, "Known hour angle in degrees")
        ->excludes(opt_az);
    sun->add_option("--half-day", sun_args.half_day,
                    "morning or afternoon (default: from --time)");

    EstimateArgs est_args;
    CLI::App* estimate = app.add_subcommand("estimate", "Process a scene file");
    estimate->add_option("--scene", est_args.scene_path, "Scene JSON file")->required();
    estimate->add_option("--format", est_args.format, "Report format: text or csv")
        ->check(CLI::IsMember({"text", "csv"}));
    estimate->add_option("--gate-error", est_args.gate_error,
                         "Target relative error for the slope gate");
    estimate->add_option("--out", est_args.out_path, "Write the report here");
    estimate->add_flag("--force", est_args.force,
                       "Process even when validation fails");
    estimate->add_flag("--lenient", est_args.lenient,
                       "Warn on unknown scene-file fields instead of rejecting");

    PropagateArgs prop_args;
    CLI::App* propagate =
        app.add_subcommand("propagate", "Neighbor height from a scene ratio");
    propagate->add_option("--ratio-cs", prop_args.ratio_cs, "Height/shadow ratio");
    propagate->add_option("--shadow-len", prop_args.shadow_len,
                          "Neighbor shadow length in metres");
    propagate->add_option("--ratio-hs", prop_args.ratio_hs, "Height/edge ratio");
    propagate->add_option("--edge-len", prop_args.edge_len,
                          "Neighbor edge displacement in metres");

    double gate_target = 0.05, gate_elevation = 45.0;
    std::string gate_sign = "both";
    CLI::App* slope_gate =
        app.add_subcommand("slope-gate", "Largest admissible terrain slope");
    slope_gate->add_option("--target-error", gate_target, "Relative error target")
        ->required();
    slope_gate->add_option("--elevation", gate_elevation, "Solar elevation in degrees")
        ->required();
    slope_gate->add_option("--sign", gate_sign, "positive, negative or both")
        ->check(CLI::IsMember({"positive", "negative", "both"}));

    int table_which = 0;
    int table_utc_offset = 0;
    std::optional<int> table_year;
    std::string table_out;
    CLI::App* tables = app.add_subcommand("tables", "Reference tables as CSV");
    tables->add_option("--which", table_which,
                       "1: positive-slope errors, 2: negative-slope errors, "
                       "3: declination by date")
        ->required()
        ->check(CLI::Range(1, 3));
    tables->add_option("--year", table_year, "Year for table 3");
    tables->add_option("--utc-offset", table_utc_offset,
                       "Civil-time offset in hours of the site whose 09/12/15 "
                       "rows table 3 represents (series time base is UT)")
        ->check(CLI::Range(-12, 14));
    tables->add_option("--out", table_out, "Write the CSV here");

    std::uint64_t synth_seed = 0;
    std::string synth_out;
    GenerationRanges ranges;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scene file");
    synth->add_option("--seed", synth_seed, "Generator seed")->required();
    synth->add_option("--count", ranges.structure_count, "Structures per scene")
        ->check(CLI::Range(1, 10000));
    synth->add_option("--year", ranges.year, "Acquisition year");
    synth->add_option("--elev-min", ranges.solar_elevation_min_deg,
                      "Min solar elevation");
    synth->add_option("--elev-max", ranges.solar_elevation_max_deg,
                      "Max solar elevation");
    synth->add_option("--sat-elev-min", ranges.satellite_elevation_min_deg,
                      "Min satellite elevation");
    synth->add_option("--sat-elev-max", ranges.satellite_elevation_max_deg,
                      "Max satellite elevation");
    synth->add_option("--sep-min", ranges.azimuth_separation_min_deg,
                      "Min sun/satellite azimuth separation");
    synth->add_option("--sep-max", ranges.azimuth_separation_max_deg,
                      "Max sun/satellite azimuth separation");
    synth->add_option("--height-min", ranges.height_min_m, "Min structure height");
    synth->add_option("--height-max", ranges.height_max_m, "Max structure height");
    synth->add_option("--lat-min", ranges.latitude_min_deg, "Min latitude");
    synth->add_option("--lat-max", ranges.latitude_max_deg, "Max latitude");
    synth->add_option("--noise-sigma-m", ranges.length_noise_sigma_m,
                      "Gaussian length-noise sigma in metres");
    synth->add_option("--angle-noise-sigma-deg", ranges.angle_noise_sigma_deg,
                      "Gaussian azimuth-noise sigma in degrees");
    synth->add_option("--out", synth_out, "Write the scene here");

    std::uint64_t verify_seeds = 0;
    int verify_structures = 5;
    CLI::App* verify =
        app.add_subcommand("verify", "Round-trip the forward model through the "
                                     "full pipeline");
    verify->add_option("--seeds", verify_seeds, "Number of seeded scenes")
        ->required()
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}));
    verify->add_option("--structures", verify_structures, "Structures per scene")
        ->check(CLI::Range(1, 1000));

    try {
        app.parse(argc, argv);

        if (sun->parsed())
            return cmd_sun(sun_args);
        if (estimate->parsed())
            return cmd_estimate(est_args);
        if (propagate->parsed())
            return cmd_propagate(prop_args);
        if (slope_gate->parsed())
            return cmd_slope_gate(gate_target, gate_elevation, gate_sign);
        if (tables->parsed())
            return cmd_tables(table_which, table_year, table_utc_offset, table_out);
        if (synth->parsed())
            return cmd_synth(synth_seed, ranges, synth_out);
        if (verify->parsed())
            return cmd_verify(verify_seeds, verify_structures);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
