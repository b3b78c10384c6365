#pragma once

#include <Eigen/Geometry>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ledsel/color_types.hpp"
#include "ledsel/macadam.hpp"

namespace ledsel {

/// Reserved label for "outside every bin / class". Never a valid bin id.
inline constexpr std::string_view kReject = "REJECT";
/// Luminance label used when a screen defines no luminance classes.
inline constexpr std::string_view kAnyLuminance = "ANY";

/// One cell of a chromaticity screen: a convex polygon, counter-clockwise.
struct Bin {
    std::string id;
    std::vector<Chromaticity> polygon;

    double signed_area() const;
    Chromaticity centroid() const;
    /// Boundary-inclusive half-plane test.
    bool contains(const Chromaticity& p) const;
    /// Axis-aligned bounds if the polygon is exactly an axis-aligned
    /// rectangle, nullopt otherwise.
    std::optional<Eigen::AlignedBox2d> as_rectangle() const;
};

/// [min, max) in lumens.
struct LuminanceClass {
    std::string label;
    double min = 0.0;
    double max = 0.0;

    bool contains(double lumens) const { return lumens >= min && lumens < max; }
};

struct BinScreen {
    std::string name = "screen";
    Observer observer = Observer::CIE1931_2deg;
    std::vector<Bin> bins;
    std::vector<LuminanceClass> luminance_classes;

    const Bin* find(std::string_view id) const;
};

struct BinAssignment {
    std::string chroma_bin;
    std::string lum_class;

    bool rejected() const { return chroma_bin == kReject || lum_class == kReject; }
    friend bool operator==(const BinAssignment&, const BinAssignment&) = default;
};

/// nx * ny rectangular bins with ids "R{row}C{col}"; row counts along y.
/// Throws OutOfGamutDomain if any vertex leaves the open chromaticity
/// simplex.
BinScreen build_grid_screen(const Chromaticity& origin, double dx, double dy, int nx, int ny);

/// Splits every rectangular bin into factor x factor children with ids
/// "{parent}/{i}{j}" (i row, j column). Luminance classes are kept.
BinScreen refine_screen(const BinScreen& screen, int factor);

/// Index of the first bin containing p; shared boundaries resolve to the
/// lowest index.
std::optional<std::size_t> locate_bin(const Chromaticity& p, const BinScreen& screen);

BinAssignment classify(const Chromaticity& p, double lumens, const BinScreen& screen);

/// One human-readable line per violated screen invariant; empty when valid.
std::vector<std::string> validate_screen(const BinScreen& screen);

struct BinUniformity {
    std::string id;
    /// Largest MacAdam step count between any two vertices of the bin.
    double width = 0.0;
    bool flagged = false;
};

std::vector<BinUniformity> uniformity_report(const BinScreen& screen, std::span<const MacAdamEllipse> ellipses,
                                             double threshold = 1.0);

/// Width of a single bin as used by uniformity_report.
double bin_width(const Bin& bin, std::span<const MacAdamEllipse> ellipses);

}  // namespace ledsel
