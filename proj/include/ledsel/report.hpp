#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ledsel/line_sim.hpp"

namespace ledsel {

/// Per-LED CSV, one header line:
/// seq,led_id,x,y,lumens,chroma_bin,lum_class,destination,compartment,cycle_time_s,finished_at_s,clamped
/// x, y and compartment are empty for dark LEDs / overflows.
void write_records_csv(std::ostream& out, const SortReport& report);

nlohmann::ordered_json summary_json(const SortReport& report);

/// Writes `leds.csv` and `summary.json` into `dir` (created if missing).
void write_report(const std::filesystem::path& dir, const SortReport& report);

/// Subset of a per-LED CSV needed to plot measured points.
struct MeasuredPoint {
    std::uint64_t led_id = 0;
    Chromaticity xy;
    std::string chroma_bin;
    std::string lum_class;
};

std::vector<MeasuredPoint> read_measured_points(std::istream& in);
std::vector<MeasuredPoint> read_measured_points(const std::filesystem::path& path);
std::vector<MeasuredPoint> measured_points(const SortReport& report);

}  // namespace ledsel
