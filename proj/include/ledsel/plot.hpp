#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ledsel/binning.hpp"
#include "ledsel/cmf.hpp"
#include "ledsel/macadam.hpp"
#include "ledsel/report.hpp"

namespace ledsel {

inline constexpr int kEllipseOutlinePoints = 64;

/// Data behind a chromaticity-diagram rendering. Renderer-agnostic.
struct PlotBundle {
    struct LocusPoint {
        double wavelength;
        Chromaticity xy;
    };
    struct Outline {
        std::string id;
        std::vector<Chromaticity> points;
    };

    std::vector<LocusPoint> locus;
    std::vector<Outline> ellipses;
    std::vector<Outline> bins;
    std::vector<MeasuredPoint> points;
};

/// Spectral locus at every CMF grid wavelength; ellipse outlines sampled at
/// 64 points each; bin polygons; measured points with their assignments.
PlotBundle make_plot_bundle(const CmfTable& cmf, const BinScreen* screen, std::span<const MacAdamEllipse> ellipses,
                            std::span<const MeasuredPoint> points);

nlohmann::ordered_json to_json(const PlotBundle& bundle);

}  // namespace ledsel
