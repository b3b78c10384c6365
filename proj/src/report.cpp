#include "ledsel/report.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>

#include "text_util.hpp"

namespace ledsel {

void write_records_csv(std::ostream& out, const SortReport& report)
{
    out << "seq,led_id,x,y,lumens,chroma_bin,lum_class,destination,compartment,cycle_time_s,finished_at_s,clamped\n";
    for (const auto& r : report.records) {
        const std::string x = r.measured ? fmt::format("{}", r.measured->x()) : std::string();
        const std::string y = r.measured ? fmt::format("{}", r.measured->y()) : std::string();
        const std::string comp = r.compartment ? fmt::format("{}", *r.compartment) : std::string();
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.seq, r.led_id, x, y, r.lumens,
                           r.assignment.chroma_bin, r.assignment.lum_class, to_string(r.destination), comp,
                           to_seconds(r.cycle_time), to_seconds(r.finished_at), r.clamped ? 1 : 0);
    }
}

nlohmann::ordered_json summary_json(const SortReport& report)
{
    nlohmann::ordered_json j;
    j["mode"] = std::string(to_string(report.mode));
    j["seed"] = report.seed;
    j["input_count"] = report.input_count;
    j["processed"] = report.processed();
    j["complete"] = report.complete;
    j["simulated_seconds"] = report.simulated_seconds();
    j["leds_per_hour"] = report.leds_per_hour();
    auto comps = nlohmann::ordered_json::array();
    for (const auto& c : report.compartments) {
        nlohmann::ordered_json e;
        e["index"] = c.index;
        e["target"] = c.target;
        e["capacity"] = c.capacity ? nlohmann::ordered_json(*c.capacity) : nlohmann::ordered_json(nullptr);
        e["count"] = c.count;
        comps.push_back(std::move(e));
    }
    j["compartments"] = std::move(comps);
    j["compartment_total"] = report.compartment_total();
    j["rejects"] = report.rejects;
    j["overflows"] = report.overflows;
    std::size_t clamped = 0;
    std::size_t dark = 0;
    for (const auto& r : report.records) {
        clamped += r.clamped ? 1 : 0;
        dark += r.measured ? 0 : 1;
    }
    j["clamped_samples"] = clamped;
    j["dark_measurements"] = dark;
    return j;
}

void write_report(const std::filesystem::path& dir, const SortReport& report)
{
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / "leds.csv", std::ios::binary);
        write_records_csv(csv, report);
        if (!csv) {
            throw Error(fmt::format("failed writing {}", (dir / "leds.csv").string()));
        }
    }
    std::ofstream js(dir / "summary.json", std::ios::binary);
    js << summary_json(report).dump(2) << "\n";
    if (!js) {
        throw Error(fmt::format("failed writing {}", (dir / "summary.json").string()));
    }
}

std::vector<MeasuredPoint> read_measured_points(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("empty report CSV");
    }
    const auto header = detail::split(detail::trim(line), ',');
    auto col = [&](std::string_view name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw ConfigError(fmt::format("report CSV has no '{}' column", name));
    };
    const auto c_id = col("led_id");
    const auto c_x = col("x");
    const auto c_y = col("y");
    const auto c_bin = col("chroma_bin");
    const auto c_lum = col("lum_class");
    std::vector<MeasuredPoint> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto f = detail::split(detail::trim(line), ',');
        if (f.size() != header.size()) {
            throw ConfigError(fmt::format("report CSV line {}: expected {} fields", lineno, header.size()));
        }
        if (f[c_x].empty() || f[c_y].empty()) {
            continue;  // dark LED, nothing to plot
        }
        MeasuredPoint p;
        double id = 0.0;
        double x = 0.0;
        double y = 0.0;
        if (!detail::parse_double(f[c_id], id) || !detail::parse_double(f[c_x], x) || !detail::parse_double(f[c_y], y)) {
            throw ConfigError(fmt::format("report CSV line {}: not a number", lineno));
        }
        p.led_id = static_cast<std::uint64_t>(id);
        p.xy = Chromaticity(x, y);
        p.chroma_bin = std::string(f[c_bin]);
        p.lum_class = std::string(f[c_lum]);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<MeasuredPoint> read_measured_points(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open '{}'", path.string()));
    }
    return read_measured_points(in);
}

std::vector<MeasuredPoint> measured_points(const SortReport& report)
{
    std::vector<MeasuredPoint> out;
    for (const auto& r : report.records) {
        if (r.measured) {
            out.push_back({r.led_id, *r.measured, r.assignment.chroma_bin, r.assignment.lum_class});
        }
    }
    return out;
}

}  // namespace ledsel
