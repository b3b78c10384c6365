#include "ledsel/color_types.hpp"

#include <fmt/format.h>

#include <string>

namespace ledsel {

std::string_view to_string(Observer observer)
{
    switch (observer) {
    case Observer::CIE1931_2deg:
        return "CIE1931_2deg";
    case Observer::CIE1964_10deg:
        return "CIE1964_10deg";
    }
    return "?";
}

Observer observer_from_string(std::string_view name)
{
    if (name == "CIE1931_2deg" || name == "2" || name == "1931") {
        return Observer::CIE1931_2deg;
    }
    if (name == "CIE1964_10deg" || name == "10" || name == "1964") {
        return Observer::CIE1964_10deg;
    }
    throw ConfigError(fmt::format("unknown observer '{}' (expected CIE1931_2deg or CIE1964_10deg)", name));
}

namespace {

std::string join_diagnostics(const std::vector<std::string>& d)
{
    std::string out = "validation failed";
    for (const auto& s : d) {
        out += "; " + s;
    }
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics))
{
}

}  // namespace ledsel
