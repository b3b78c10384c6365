#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ledsel/binning.hpp"
#include "ledsel/instrument.hpp"
#include "ledsel/line_sim.hpp"

namespace ledsel {

// Human-edited documents (screens, LED lots, jobs) are YAML; JSON is
// accepted as well since it is a subset. Field names are listed in
// docs/formats.md and are part of the operator-facing contract.
//
// Structural problems throw ConfigError with "source:line" context.
// A screen that parses but violates screen invariants throws
// ValidationError carrying validate_screen's diagnostics.

BinScreen parse_screen(std::string_view text, const std::string& source = "<screen>");
BinScreen load_screen(const std::filesystem::path& path);
std::string dump_screen(const BinScreen& screen);
nlohmann::ordered_json screen_json(const BinScreen& screen);

LedLot parse_lot(std::string_view text, const std::string& source = "<lot>");
LedLot load_lot(const std::filesystem::path& path);

struct JobSpec {
    std::string name = "job";
    LedLot lot;
    ModeConfig config;
    std::uint64_t seed = 1;
    /// Simulated seconds per wall-clock second; 0 runs at maximum speed.
    double speed = 0.0;
};

/// `base_dir` resolves relative `lot:` / `screen:` / `cmf:` references.
/// `fallback_screen` is used when the document has no `screen:` field.
JobSpec parse_job(std::string_view text, const std::string& source = "<job>",
                  const std::filesystem::path& base_dir = {}, const BinScreen* fallback_screen = nullptr);
JobSpec load_job(const std::filesystem::path& path);

}  // namespace ledsel
