#include "ledsel/macadam.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "builtin_data.hpp"
#include "text_util.hpp"

namespace ledsel {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

MacAdamEllipse make_ellipse(double cx, double cy, double a, double b, double theta_deg)
{
    const Chromaticity c(cx, cy);
    if (!c.valid()) {
        throw InvalidEllipse(fmt::format("ellipse center ({}, {}) is not a valid chromaticity", cx, cy));
    }
    return {c, a, b, theta_deg * kDeg};
}

}  // namespace

std::size_t nearest_ellipse(const Chromaticity& p, std::span<const MacAdamEllipse> ellipses)
{
    if (ellipses.empty()) {
        throw Error("ellipse set is empty");
    }
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ellipses.size(); ++i) {
        const double d2 = (ellipses[i].center().vector() - p.vector()).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

double macadam_steps(const Chromaticity& p, const Chromaticity& q, std::span<const MacAdamEllipse> ellipses)
{
    const auto& e = ellipses[nearest_ellipse(p, ellipses)];
    return e.steps(q.vector() - p.vector());
}

const std::vector<MacAdamEllipse>& macadam_1942()
{
    static const std::vector<MacAdamEllipse> set = [] {
        std::vector<MacAdamEllipse> out;
        out.reserve(data::kMacAdamCount);
        for (const auto& r : data::kMacAdam1942) {
            out.push_back(make_ellipse(r[0], r[1], r[2], r[3], r[4]));
        }
        return out;
    }();
    return set;
}

std::vector<MacAdamEllipse> read_ellipses(std::istream& in)
{
    std::vector<MacAdamEllipse> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const auto f = detail::split_fields(body);
        double v[5];
        bool ok = f.size() == 5;
        for (std::size_t i = 0; ok && i < 5; ++i) {
            ok = detail::parse_double(f[i], v[i]);
        }
        if (!ok) {
            throw InvalidEllipse(
                fmt::format("line {}: expected 'center_x center_y semi_major semi_minor theta_deg'", lineno));
        }
        try {
            out.push_back(make_ellipse(v[0], v[1], v[2], v[3], v[4]));
        } catch (const InvalidEllipse& e) {
            throw InvalidEllipse(fmt::format("line {}: {}", lineno, e.what()));
        }
    }
    return out;
}

std::vector<MacAdamEllipse> read_ellipses(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidEllipse(fmt::format("cannot open {}", path.string()));
    }
    return read_ellipses(in);
}

void write_ellipses(std::ostream& out, std::span<const MacAdamEllipse> ellipses)
{
    out << "# columns: center_x center_y semi_major semi_minor theta_deg\n";
    for (const auto& e : ellipses) {
        out << fmt::format("{} {} {} {} {}\n", e.center().x(), e.center().y(), e.semi_major(), e.semi_minor(),
                           e.theta() / kDeg);
    }
}

}  // namespace ledsel
