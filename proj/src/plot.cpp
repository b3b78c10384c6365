#include "ledsel/plot.hpp"

#include <fmt/format.h>

#include <numbers>

namespace ledsel {

PlotBundle make_plot_bundle(const CmfTable& cmf, const BinScreen* screen, std::span<const MacAdamEllipse> ellipses,
                            std::span<const MeasuredPoint> points)
{
    PlotBundle b;
    const Eigen::VectorXd grid = cmf.grid();
    b.locus.reserve(static_cast<std::size_t>(grid.size()));
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        b.locus.push_back({grid(i), locus_point(cmf, i)});
    }
    for (std::size_t k = 0; k < ellipses.size(); ++k) {
        PlotBundle::Outline o{fmt::format("E{}", k + 1), {}};
        o.points.reserve(kEllipseOutlinePoints);
        for (int i = 0; i < kEllipseOutlinePoints; ++i) {
            o.points.push_back(ellipses[k].boundary_point(2.0 * std::numbers::pi * i / kEllipseOutlinePoints));
        }
        b.ellipses.push_back(std::move(o));
    }
    if (screen != nullptr) {
        for (const auto& bin : screen->bins) {
            b.bins.push_back({bin.id, bin.polygon});
        }
    }
    b.points.assign(points.begin(), points.end());
    return b;
}

namespace {

nlohmann::ordered_json xy(const Chromaticity& c) { return nlohmann::ordered_json::array({c.x(), c.y()}); }

nlohmann::ordered_json outlines(const std::vector<PlotBundle::Outline>& list)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& o : list) {
        nlohmann::ordered_json e;
        e["id"] = o.id;
        auto pts = nlohmann::ordered_json::array();
        for (const auto& p : o.points) {
            pts.push_back(xy(p));
        }
        e["points"] = std::move(pts);
        arr.push_back(std::move(e));
    }
    return arr;
}

}  // namespace

nlohmann::ordered_json to_json(const PlotBundle& bundle)
{
    nlohmann::ordered_json j;
    auto locus = nlohmann::ordered_json::array();
    for (const auto& p : bundle.locus) {
        locus.push_back({{"wavelength", p.wavelength}, {"x", p.xy.x()}, {"y", p.xy.y()}});
    }
    j["locus"] = std::move(locus);
    j["ellipses"] = outlines(bundle.ellipses);
    j["bins"] = outlines(bundle.bins);
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : bundle.points) {
        pts.push_back({{"led_id", p.led_id}, {"x", p.xy.x()}, {"y", p.xy.y()}, {"chroma_bin", p.chroma_bin},
                       {"lum_class", p.lum_class}});
    }
    j["points"] = std::move(pts);
    return j;
}

}  // namespace ledsel
