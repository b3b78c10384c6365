#pragma once

#include <array>
#include <cstddef>

namespace ledsel::data {

inline constexpr std::size_t kCmfRows = 81;
inline constexpr double kCmfFirst = 380.0;
inline constexpr double kCmfStep = 5.0;
inline constexpr std::size_t kMacAdamCount = 25;

extern const std::array<std::array<double, 3>, kCmfRows> kCie1931;
extern const std::array<std::array<double, 3>, kCmfRows> kCie1964;
extern const std::array<std::array<double, 5>, kMacAdamCount> kMacAdam1942;

}  // namespace ledsel::data
