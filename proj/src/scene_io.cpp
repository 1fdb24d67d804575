/**
 * Scene file schema (JSON, schema_version 1) and report rendering.
 *
 * Field names carry units (*_deg, *_m). Strict parsing rejects unknown
 * fields with the offending path; lenient parsing downgrades them to
 * warnings. Canonical output has sorted keys, two-space indent and
 * shortest round-trip numbers, so write -> read is lossless and
 * write(read(write(x))) is byte-identical.
 */

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "shadowheight/scene_model.hpp"

namespace shadowheight {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr int kMonthDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

std::string format_full(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string format_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- parsing

[[noreturn]] void fail(const std::string& what, const std::string& path) {
    throw SchemaError(what, path);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end())
        fail("missing required field", path + "." + key);
    return *it;
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& path, const ParseOptions& options,
                std::vector<std::string>* warnings) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (known)
            continue;
        if (options.strict)
            fail("unknown field", path + "." + item.key());
        if (warnings)
            warnings->push_back("ignored unknown field " + path + "." + item.key());
    }
}

const json& as_object(const json& j, const std::string& path) {
    if (!j.is_object())
        fail("expected an object", path);
    return j;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number())
        fail("expected a number", path);
    double v = j.get<double>();
    if (!std::isfinite(v))
        fail("expected a finite number", path);
    return v;
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        fail("expected an integer", path);
    return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean())
        fail("expected a boolean", path);
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string())
        fail("expected a string", path);
    return j.get<std::string>();
}

std::optional<double> opt_number(const json& obj, const char* key,
                                 const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return std::nullopt;
    return as_number(*it, path + "." + key);
}

double positive_number(const json& j, const std::string& path) {
    double v = as_number(j, path);
    if (!(v > 0.0))
        fail("expected a positive value", path);
    return v;
}

HalfDay parse_half_day(const json& j, const std::string& path) {
    std::string s = as_string(j, path);
    if (s == "morning")
        return HalfDay::Morning;
    if (s == "afternoon")
        return HalfDay::Afternoon;
    fail("expected \"morning\" or \"afternoon\"", path);
}

SlopeSign parse_slope_sign(const json& j, const std::string& path) {
    std::string s = as_string(j, path);
    if (s == "positive")
        return SlopeSign::Positive;
    if (s == "negative")
        return SlopeSign::Negative;
    fail("expected \"positive\" or \"negative\"", path);
}

CivilInstant parse_acquired(const json& j, const std::string& path,
                            const ParseOptions& options,
                            std::vector<std::string>* warnings) {
    const json& obj = as_object(j, path);
    check_keys(obj, {"year", "month", "day", "hour", "minute", "half_day"}, path,
               options, warnings);
    int year = as_int(require(obj, "year", path), path + ".year");
    int month = as_int(require(obj, "month", path), path + ".month");
    int day = as_int(require(obj, "day", path), path + ".day");
    int hour = obj.contains("hour") ? as_int(obj.at("hour"), path + ".hour") : 0;
    int minute = obj.contains("minute") ? as_int(obj.at("minute"), path + ".minute") : 0;
    HalfDay half = parse_half_day(require(obj, "half_day", path), path + ".half_day");
    try {
        return CivilInstant::from_calendar(year, month, day, hour, minute, half);
    } catch (const DomainError& e) {
        fail(e.what(), path);
    }
}

PublishedValues parse_published(const json& j, const std::string& path,
                                const ParseOptions& options,
                                std::vector<std::string>* warnings) {
    const json& obj = as_object(j, path);
    check_keys(obj, {"height_m", "measured_height_m", "ratio_cs"}, path, options,
               warnings);
    PublishedValues pub;
    pub.height_m = opt_number(obj, "height_m", path);
    pub.measured_height_m = opt_number(obj, "measured_height_m", path);
    pub.ratio_cs = opt_number(obj, "ratio_cs", path);
    return pub;
}

SceneObservation parse_observation(const json& j, const std::string& path,
                                   const ParseOptions& options,
                                   std::vector<std::string>* warnings) {
    const json& obj = as_object(j, path);
    check_keys(obj,
               {"id", "acquired", "latitude_deg", "solar_azimuth_deg", "satellite",
                "measurements", "slope", "validation", "hour_angle_override_deg",
                "declination_override_deg", "published", "truth_height_m"},
               path, options, warnings);

    SceneObservation obs;
    obs.id = as_string(require(obj, "id", path), path + ".id");
    obs.acquired =
        parse_acquired(require(obj, "acquired", path), path + ".acquired", options,
                       warnings);

    obs.latitude_deg =
        as_number(require(obj, "latitude_deg", path), path + ".latitude_deg");
    if (!(obs.latitude_deg > -90.0 && obs.latitude_deg < 90.0))
        fail("latitude must be in (-90, 90)", path + ".latitude_deg");
    obs.solar_azimuth_deg = as_number(require(obj, "solar_azimuth_deg", path),
                                      path + ".solar_azimuth_deg");

    {
        const std::string sat_path = path + ".satellite";
        const json& sat = as_object(require(obj, "satellite", path), sat_path);
        check_keys(sat, {"azimuth_deg", "elevation_deg"}, sat_path, options, warnings);
        obs.satellite.azimuth_deg =
            as_number(require(sat, "azimuth_deg", sat_path), sat_path + ".azimuth_deg");
        obs.satellite.elevation_deg = opt_number(sat, "elevation_deg", sat_path);
        if (obs.satellite.elevation_deg &&
            !(*obs.satellite.elevation_deg > 0.0 && *obs.satellite.elevation_deg <= 90.0))
            fail("satellite elevation must be in (0, 90]", sat_path + ".elevation_deg");
    }
    {
        const std::string m_path = path + ".measurements";
        const json& m = as_object(require(obj, "measurements", path), m_path);
        check_keys(m, {"shadow_len_m", "edge_len_m"}, m_path, options, warnings);
        obs.measurements.shadow_len_m =
            positive_number(require(m, "shadow_len_m", m_path), m_path + ".shadow_len_m");
        obs.measurements.edge_len_m =
            as_number(require(m, "edge_len_m", m_path), m_path + ".edge_len_m");
        if (!(obs.measurements.edge_len_m >= 0.0))
            fail("expected a non-negative value", m_path + ".edge_len_m");
    }
    {
        const std::string s_path = path + ".slope";
        const json& s = as_object(require(obj, "slope", path), s_path);
        check_keys(s, {"angle_deg", "sign"}, s_path, options, warnings);
        obs.slope.angle_deg =
            as_number(require(s, "angle_deg", s_path), s_path + ".angle_deg");
        if (!(obs.slope.angle_deg >= 0.0 && obs.slope.angle_deg <= 10.0))
            fail("slope angle outside supported band [0, 10]", s_path + ".angle_deg");
        obs.slope.sign = parse_slope_sign(require(s, "sign", s_path), s_path + ".sign");
    }
    {
        const std::string v_path = path + ".validation";
        const json& v = as_object(require(obj, "validation", path), v_path);
        check_keys(v, {"vertical_edge_visible", "shadow_unambiguous"}, v_path, options,
                   warnings);
        obs.vertical_edge_visible = as_bool(require(v, "vertical_edge_visible", v_path),
                                            v_path + ".vertical_edge_visible");
        obs.shadow_unambiguous = as_bool(require(v, "shadow_unambiguous", v_path),
                                         v_path + ".shadow_unambiguous");
    }

    obs.hour_angle_override_deg = opt_number(obj, "hour_angle_override_deg", path);
    obs.declination_override_deg = opt_number(obj, "declination_override_deg", path);
    if (obj.contains("published"))
        obs.published =
            parse_published(obj.at("published"), path + ".published", options, warnings);
    obs.truth_height_m = opt_number(obj, "truth_height_m", path);
    return obs;
}

NeighborMeasurement parse_neighbor(const json& j, const std::string& path,
                                   const ParseOptions& options,
                                   std::vector<std::string>* warnings) {
    const json& obj = as_object(j, path);
    check_keys(obj, {"id", "shadow_len_m", "edge_len_m", "published", "truth_height_m"},
               path, options, warnings);
    NeighborMeasurement n;
    n.id = as_string(require(obj, "id", path), path + ".id");
    n.shadow_len_m = opt_number(obj, "shadow_len_m", path);
    if (n.shadow_len_m && !(*n.shadow_len_m > 0.0))
        fail("expected a positive value", path + ".shadow_len_m");
    n.edge_len_m = opt_number(obj, "edge_len_m", path);
    if (n.edge_len_m && !(*n.edge_len_m > 0.0))
        fail("expected a positive value", path + ".edge_len_m");
    if (obj.contains("published"))
        n.published =
            parse_published(obj.at("published"), path + ".published", options, warnings);
    n.truth_height_m = opt_number(obj, "truth_height_m", path);
    return n;
}

SceneTruth parse_truth(const json& j, const std::string& path,
                       const ParseOptions& options, std::vector<std::string>* warnings) {
    const json& obj = as_object(j, path);
    check_keys(obj, {"solar", "satellite_elevation_deg", "seed"}, path, options,
               warnings);
    SceneTruth truth;
    const std::string s_path = path + ".solar";
    const json& s = as_object(require(obj, "solar", path), s_path);
    check_keys(s, {"declination_deg", "hour_angle_deg", "elevation_deg", "azimuth_deg"},
               s_path, options, warnings);
    truth.solar.declination_deg =
        as_number(require(s, "declination_deg", s_path), s_path + ".declination_deg");
    truth.solar.hour_angle_deg =
        as_number(require(s, "hour_angle_deg", s_path), s_path + ".hour_angle_deg");
    truth.solar.elevation_deg =
        as_number(require(s, "elevation_deg", s_path), s_path + ".elevation_deg");
    truth.solar.azimuth_deg =
        as_number(require(s, "azimuth_deg", s_path), s_path + ".azimuth_deg");
    truth.satellite_elevation_deg =
        as_number(require(obj, "satellite_elevation_deg", path),
                  path + ".satellite_elevation_deg");
    if (obj.contains("seed") && !obj.at("seed").is_null()) {
        if (!obj.at("seed").is_number_unsigned() && !obj.at("seed").is_number_integer())
            fail("expected an integer", path + ".seed");
        truth.seed = obj.at("seed").get<std::uint64_t>();
    }
    return truth;
}

// ------------------------------------------------------------ serializing

struct CalendarFields {
    int year, month, day, hour, minute;
};

CalendarFields calendar_from_instant(const CivilInstant& instant) {
    const int year_days = is_leap(instant.year) ? 366 : 365;
    int day_index = static_cast<int>(std::floor(instant.day_of_year)) + 1;
    const double frac = instant.day_of_year - std::floor(instant.day_of_year);
    // The file schema is minute-grained; sub-minute parts round.
    long total_minutes = std::lround(frac * 24.0 * 60.0);
    if (total_minutes >= 24 * 60) {
        if (day_index < year_days) {
            total_minutes -= 24 * 60;
            ++day_index;
        } else {
            total_minutes = 24 * 60 - 1;  // stay inside the year
        }
    }
    CalendarFields cal{};
    cal.year = instant.year;
    cal.hour = static_cast<int>(total_minutes / 60);
    cal.minute = static_cast<int>(total_minutes % 60);
    int month = 1;
    int remaining = day_index;
    while (true) {
        int len = kMonthDays[month - 1] + (month == 2 && is_leap(cal.year) ? 1 : 0);
        if (remaining <= len)
            break;
        remaining -= len;
        ++month;
    }
    cal.month = month;
    cal.day = remaining;
    return cal;
}

json published_to_json(const PublishedValues& pub) {
    json j = json::object();
    if (pub.height_m)
        j["height_m"] = *pub.height_m;
    if (pub.measured_height_m)
        j["measured_height_m"] = *pub.measured_height_m;
    if (pub.ratio_cs)
        j["ratio_cs"] = *pub.ratio_cs;
    return j;
}

}  // namespace

SceneFile parse_scene_json(const std::string& text, const ParseOptions& options,
                           std::vector<std::string>* warnings) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    const std::string path = "$";
    as_object(root, path);
    check_keys(root, {"schema_version", "observation", "neighbors", "notes", "truth"},
               path, options, warnings);

    int version = as_int(require(root, "schema_version", path), path + ".schema_version");
    if (version != kSchemaVersion)
        fail("unsupported schema_version (expected 1)", path + ".schema_version");

    SceneFile scene;
    scene.observation = parse_observation(require(root, "observation", path),
                                          path + ".observation", options, warnings);

    if (root.contains("neighbors")) {
        const json& arr = root.at("neighbors");
        if (!arr.is_array())
            fail("expected an array", path + ".neighbors");
        for (std::size_t i = 0; i < arr.size(); ++i)
            scene.neighbors.push_back(
                parse_neighbor(arr[i], path + ".neighbors[" + std::to_string(i) + "]",
                               options, warnings));
    }
    if (root.contains("notes")) {
        const json& arr = root.at("notes");
        if (!arr.is_array())
            fail("expected an array", path + ".notes");
        for (std::size_t i = 0; i < arr.size(); ++i)
            scene.notes.push_back(
                as_string(arr[i], path + ".notes[" + std::to_string(i) + "]"));
    }
    if (root.contains("truth"))
        scene.truth = parse_truth(root.at("truth"), path + ".truth", options, warnings);
    return scene;
}

SceneFile read_scene_file(const std::filesystem::path& path, const ParseOptions& options,
                          std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SchemaError("cannot open scene file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scene_json(buffer.str(), options, warnings);
}

std::string scene_to_json(const SceneFile& scene) {
    const SceneObservation& obs = scene.observation;
    json j;
    j["schema_version"] = kSchemaVersion;

    json o;
    o["id"] = obs.id;
    CalendarFields cal = calendar_from_instant(obs.acquired);
    o["acquired"] = {
        {"year", cal.year},   {"month", cal.month},   {"day", cal.day},
        {"hour", cal.hour},   {"minute", cal.minute},
        {"half_day", obs.acquired.half_day == HalfDay::Morning ? "morning" : "afternoon"},
    };
    o["latitude_deg"] = obs.latitude_deg;
    o["solar_azimuth_deg"] = obs.solar_azimuth_deg;
    json sat;
    sat["azimuth_deg"] = obs.satellite.azimuth_deg;
    if (obs.satellite.elevation_deg)
        sat["elevation_deg"] = *obs.satellite.elevation_deg;
    o["satellite"] = sat;
    o["measurements"] = {{"shadow_len_m", obs.measurements.shadow_len_m},
                         {"edge_len_m", obs.measurements.edge_len_m}};
    o["slope"] = {{"angle_deg", obs.slope.angle_deg},
                  {"sign", obs.slope.sign == SlopeSign::Positive ? "positive"
                                                                 : "negative"}};
    o["validation"] = {{"vertical_edge_visible", obs.vertical_edge_visible},
                       {"shadow_unambiguous", obs.shadow_unambiguous}};
    if (obs.hour_angle_override_deg)
        o["hour_angle_override_deg"] = *obs.hour_angle_override_deg;
    if (obs.declination_override_deg)
        o["declination_override_deg"] = *obs.declination_override_deg;
    if (!obs.published.empty())
        o["published"] = published_to_json(obs.published);
    if (obs.truth_height_m)
        o["truth_height_m"] = *obs.truth_height_m;
    j["observation"] = o;

    json neighbors = json::array();
    for (const auto& n : scene.neighbors) {
        json nj;
        nj["id"] = n.id;
        if (n.shadow_len_m)
            nj["shadow_len_m"] = *n.shadow_len_m;
        if (n.edge_len_m)
            nj["edge_len_m"] = *n.edge_len_m;
        if (!n.published.empty())
            nj["published"] = published_to_json(n.published);
        if (n.truth_height_m)
            nj["truth_height_m"] = *n.truth_height_m;
        neighbors.push_back(nj);
    }
    if (!neighbors.empty())
        j["neighbors"] = neighbors;
    if (!scene.notes.empty())
        j["notes"] = scene.notes;
    if (scene.truth) {
        json t;
        t["solar"] = {{"declination_deg", scene.truth->solar.declination_deg},
                      {"hour_angle_deg", scene.truth->solar.hour_angle_deg},
                      {"elevation_deg", scene.truth->solar.elevation_deg},
                      {"azimuth_deg", scene.truth->solar.azimuth_deg}};
        t["satellite_elevation_deg"] = scene.truth->satellite_elevation_deg;
        if (scene.truth->seed)
            t["seed"] = *scene.truth->seed;
        j["truth"] = t;
    }
    return j.dump(2) + "\n";
}

void write_scene_file(const SceneFile& scene, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw SchemaError("cannot open file for writing: " + path.string());
    out << scene_to_json(scene);
    if (!out)
        throw SchemaError("write failed: " + path.string());
}

// ---------------------------------------------------------------- reports

namespace {

std::string csv_height_cell(const StructureResult& r) {
    if (r.estimate)
        return format_full(r.estimate->height_m);
    if (r.propagated_height_m)
        return format_full(*r.propagated_height_m);
    return {};
}

void csv_row(std::string& out, const StructureResult& r) {
    out += r.id;
    out += ',';
    if (r.edge_len_m)
        out += format_full(*r.edge_len_m);
    out += ',';
    if (r.shadow_len_m)
        out += format_full(*r.shadow_len_m);
    out += ',';
    out += csv_height_cell(r);
    out += ',';
    if (r.estimate)
        out += format_full(r.estimate->ratio_cs);
    out += ',';
    if (r.estimate && r.estimate->ratio_hs)
        out += format_full(*r.estimate->ratio_hs);
    out += ',';
    for (std::size_t i = 0; i < r.flags.size(); ++i) {
        if (i)
            out += ';';
        out += r.flags[i];
    }
    out += '\n';
}

void text_structure(std::ostringstream& out, const StructureResult& r) {
    out << "  " << r.id << ":";
    if (r.edge_len_m)
        out << " L_A2B=" << format_g6(*r.edge_len_m) << " m";
    if (r.shadow_len_m)
        out << " L_A1A2=" << format_g6(*r.shadow_len_m) << " m";
    if (r.estimate) {
        out << " H=" << format_g6(r.estimate->height_m) << " m"
            << " ground_shadow=" << format_g6(r.estimate->ground_shadow_m) << " m"
            << " R_CS=" << format_g6(r.estimate->ratio_cs);
        if (r.estimate->ratio_hs)
            out << " R_HS=" << format_g6(*r.estimate->ratio_hs);
    }
    if (r.propagated_height_m)
        out << " H_propagated=" << format_g6(*r.propagated_height_m) << " m";
    if (r.published.height_m)
        out << " published_H=" << format_g6(*r.published.height_m) << " m";
    if (r.published.ratio_cs)
        out << " published_R_CS=" << format_g6(*r.published.ratio_cs);
    if (r.truth_height_m)
        out << " truth_H=" << format_g6(*r.truth_height_m) << " m";
    if (r.estimate_error)
        out << " error=\"" << *r.estimate_error << "\"";
    if (!r.flags.empty()) {
        out << " flags=";
        for (std::size_t i = 0; i < r.flags.size(); ++i) {
            if (i)
                out << ';';
            out << r.flags[i];
        }
    }
    out << "\n";
}

}  // namespace

std::string render_report(const SceneReport& report, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::string out = "structure_id,L_A2B_m,L_A1A2_m,H_m,R_CS,R_HS,flags\n";
        csv_row(out, report.primary);
        for (const auto& n : report.neighbors)
            csv_row(out, n);
        return out;
    }

    std::ostringstream out;
    out << "scene: " << report.scene_id << "\n";
    out << "validation: " << (report.validation.passed() ? "pass" : "FAIL") << "\n";
    for (const auto& v : report.validation.violations)
        out << "  violation " << to_string(v.code) << ": " << v.message << "\n";
    if (!report.processed) {
        out << "processing: skipped\n";
        for (const auto& d : report.diagnostics)
            out << "  diagnostic " << d << "\n";
        return out.str();
    }

    const ResolvedSolar& s = report.solar;
    out << "solar:\n";
    out << "  declination_deg: " << format_g6(s.state.declination_deg)
        << (s.declination_overridden ? " (override)" : "") << "\n";
    if (s.declination_overridden)
        out << "  declination_from_date_deg: " << format_g6(s.declination_from_date_deg)
            << "\n";
    out << "  hour_angle_deg: " << format_g6(s.state.hour_angle_deg)
        << (s.hour_angle_overridden ? " (override)" : "") << "\n";
    if (s.hour_angle_overridden && s.hour_angle_from_azimuth_deg)
        out << "  hour_angle_from_azimuth_deg: "
            << format_g6(*s.hour_angle_from_azimuth_deg) << "\n";
    out << "  elevation_deg: " << format_g6(s.state.elevation_deg) << "\n";
    out << "  azimuth_deg: " << format_g6(s.state.azimuth_deg) << "\n";
    out << "  day_angle_deg: " << format_g6(s.context.day_angle_deg) << "\n";
    out << "  equinox_day: " << format_g6(s.context.equinox_day) << "\n";

    out << "structures:\n";
    text_structure(out, report.primary);
    for (const auto& n : report.neighbors)
        text_structure(out, n);

    out << "aggregate:\n";
    if (report.ratio_cs_computed)
        out << "  ratio_cs_computed: mean=" << format_g6(report.ratio_cs_computed->mean)
            << " std=" << format_g6(report.ratio_cs_computed->std_dev)
            << " count=" << report.ratio_cs_computed->count << "\n";
    if (report.ratio_cs_published)
        out << "  ratio_cs_published: mean=" << format_g6(report.ratio_cs_published->mean)
            << " std=" << format_g6(report.ratio_cs_published->std_dev)
            << " count=" << report.ratio_cs_published->count << "\n";
    if (report.mean_ratio_hs)
        out << "  mean_ratio_hs: " << format_g6(*report.mean_ratio_hs) << "\n";

    if (!report.diagnostics.empty()) {
        out << "diagnostics:\n";
        for (const auto& d : report.diagnostics)
            out << "  - " << d << "\n";
    }
    if (!report.notes.empty()) {
        out << "notes:\n";
        for (const auto& n : report.notes)
            out << "  - " << n << "\n";
    }
    return out.str();
}

void write_report(const SceneReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw SchemaError("cannot open file for writing: " + path.string());
    out << render_report(report, format);
    if (!out)
        throw SchemaError("write failed: " + path.string());
}

}  // namespace shadowheight
