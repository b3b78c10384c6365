#include "ledsel/binning.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace ledsel {

namespace {

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

const Eigen::Vector2d& vertex(const Bin& bin, std::size_t i) { return bin.polygon[i % bin.polygon.size()].vector(); }

// Empty string when the polygon is a simple, convex, counter-clockwise
// polygon with positive area.
std::string polygon_problem(const Bin& bin)
{
    const auto n = bin.polygon.size();
    if (n < 3) {
        return fmt::format("has {} vertices (need at least 3)", n);
    }
    for (const auto& v : bin.polygon) {
        if (!v.valid()) {
            return fmt::format("vertex ({}, {}) lies outside the chromaticity domain", v.x(), v.y());
        }
    }
    if (!(bin.signed_area() > 0.0)) {
        return "is not counter-clockwise with positive area";
    }
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d e0 = vertex(bin, i + 1) - vertex(bin, i);
        const Eigen::Vector2d e1 = vertex(bin, i + 2) - vertex(bin, i + 1);
        if (e0.squaredNorm() == 0.0) {
            return fmt::format("has a repeated vertex at index {}", (i + 1) % n);
        }
        const double c = cross(e0, e1);
        const double d = e0.dot(e1);
        if (c < 0.0 || (c == 0.0 && d < 0.0)) {
            return fmt::format("is not convex at vertex {}", (i + 1) % n);
        }
        turning += std::atan2(c, d);
    }
    if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
        return "is self-intersecting";
    }
    return {};
}

// Separating-axis test for convex polygons; touching edges do not count as
// overlap.
bool interiors_overlap(const Bin& a, const Bin& b)
{
    auto separated_along_edges_of = [&](const Bin& p) {
        for (std::size_t i = 0; i < p.polygon.size(); ++i) {
            const Eigen::Vector2d e = vertex(p, i + 1) - vertex(p, i);
            const Eigen::Vector2d axis(e.y(), -e.x());
            double amin = INFINITY, amax = -INFINITY, bmin = INFINITY, bmax = -INFINITY;
            for (const auto& v : a.polygon) {
                const double s = axis.dot(v.vector());
                amin = std::min(amin, s);
                amax = std::max(amax, s);
            }
            for (const auto& v : b.polygon) {
                const double s = axis.dot(v.vector());
                bmin = std::min(bmin, s);
                bmax = std::max(bmax, s);
            }
            const double tol = 1e-12 * std::max({std::abs(amin), std::abs(amax), std::abs(bmin), std::abs(bmax), 1e-300});
            if (amax <= bmin + tol || bmax <= amin + tol) {
                return true;
            }
        }
        return false;
    };
    return !separated_along_edges_of(a) && !separated_along_edges_of(b);
}

Bin rectangle(std::string id, double x0, double y0, double x1, double y1)
{
    return Bin{std::move(id), {Chromaticity(x0, y0), Chromaticity(x1, y0), Chromaticity(x1, y1), Chromaticity(x0, y1)}};
}

}  // namespace

double Bin::signed_area() const
{
    double twice = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        twice += cross(vertex(*this, i), vertex(*this, i + 1));
    }
    return 0.5 * twice;
}

Chromaticity Bin::centroid() const
{
    const double area = signed_area();
    if (area == 0.0) {
        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        for (const auto& v : polygon) {
            mean += v.vector();
        }
        return Chromaticity(mean / static_cast<double>(polygon.size()));
    }
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto& p = vertex(*this, i);
        const auto& q = vertex(*this, i + 1);
        c += (p + q) * cross(p, q);
    }
    return Chromaticity(c / (6.0 * area));
}

bool Bin::contains(const Chromaticity& p) const
{
    if (polygon.size() < 3) {
        return false;
    }
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto& a = vertex(*this, i);
        const auto& b = vertex(*this, i + 1);
        if (cross(b - a, p.vector() - a) < 0.0) {
            return false;
        }
    }
    return true;
}

std::optional<Eigen::AlignedBox2d> Bin::as_rectangle() const
{
    if (polygon.size() != 4 || !(signed_area() > 0.0)) {
        return std::nullopt;
    }
    std::set<double> xs;
    std::set<double> ys;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& a = vertex(*this, i);
        const auto& b = vertex(*this, i + 1);
        if (a.x() != b.x() && a.y() != b.y()) {
            return std::nullopt;
        }
        xs.insert(a.x());
        ys.insert(a.y());
    }
    if (xs.size() != 2 || ys.size() != 2) {
        return std::nullopt;
    }
    return Eigen::AlignedBox2d(Eigen::Vector2d(*xs.begin(), *ys.begin()), Eigen::Vector2d(*xs.rbegin(), *ys.rbegin()));
}

const Bin* BinScreen::find(std::string_view id) const
{
    const auto it = std::find_if(bins.begin(), bins.end(), [&](const Bin& b) { return b.id == id; });
    return it == bins.end() ? nullptr : &*it;
}

BinScreen build_grid_screen(const Chromaticity& origin, double dx, double dy, int nx, int ny)
{
    if (!(dx > 0.0) || !(dy > 0.0) || nx < 1 || ny < 1) {
        throw Error("grid screen needs positive cell sizes and at least one cell per axis");
    }
    BinScreen screen;
    screen.name = "grid";
    screen.bins.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    for (int row = 0; row < ny; ++row) {
        for (int col = 0; col < nx; ++col) {
            const double x0 = origin.x() + col * dx;
            const double x1 = origin.x() + (col + 1) * dx;
            const double y0 = origin.y() + row * dy;
            const double y1 = origin.y() + (row + 1) * dy;
            Bin bin = rectangle(fmt::format("R{}C{}", row, col), x0, y0, x1, y1);
            for (const auto& v : bin.polygon) {
                if (!v.valid()) {
                    throw OutOfGamutDomain(fmt::format("grid vertex ({}, {}) violates x > 0, y > 0, x + y < 1", v.x(), v.y()));
                }
            }
            screen.bins.push_back(std::move(bin));
        }
    }
    return screen;
}

BinScreen refine_screen(const BinScreen& screen, int factor)
{
    if (factor < 2) {
        throw Error("refinement factor must be at least 2");
    }
    BinScreen out;
    out.name = screen.name;
    out.observer = screen.observer;
    out.luminance_classes = screen.luminance_classes;
    out.bins.reserve(screen.bins.size() * static_cast<std::size_t>(factor * factor));
    for (const auto& parent : screen.bins) {
        const auto box = parent.as_rectangle();
        if (!box) {
            throw NonRectangularBin(fmt::format("bin '{}' is not an axis-aligned rectangle", parent.id));
        }
        const double x0 = box->min().x();
        const double y0 = box->min().y();
        const double w = box->max().x() - x0;
        const double h = box->max().y() - y0;
        // Outer child edges reuse the parent coordinates exactly so that
        // neighbouring parents still share identical edges.
        auto xs = [&](int j) { return j == factor ? box->max().x() : x0 + w * j / factor; };
        auto ys = [&](int i) { return i == factor ? box->max().y() : y0 + h * i / factor; };
        for (int i = 0; i < factor; ++i) {
            for (int j = 0; j < factor; ++j) {
                out.bins.push_back(rectangle(fmt::format("{}/{}{}", parent.id, i, j), xs(j), ys(i), xs(j + 1), ys(i + 1)));
            }
        }
    }
    return out;
}

std::optional<std::size_t> locate_bin(const Chromaticity& p, const BinScreen& screen)
{
    for (std::size_t i = 0; i < screen.bins.size(); ++i) {
        if (screen.bins[i].contains(p)) {
            return i;
        }
    }
    return std::nullopt;
}

BinAssignment classify(const Chromaticity& p, double lumens, const BinScreen& screen)
{
    BinAssignment out;
    const auto bin = locate_bin(p, screen);
    out.chroma_bin = bin ? screen.bins[*bin].id : std::string(kReject);
    if (screen.luminance_classes.empty()) {
        out.lum_class = std::isfinite(lumens) ? std::string(kAnyLuminance) : std::string(kReject);
    } else {
        out.lum_class = std::string(kReject);
        for (const auto& c : screen.luminance_classes) {
            if (c.contains(lumens)) {
                out.lum_class = c.label;
                break;
            }
        }
    }
    return out;
}

std::vector<std::string> validate_screen(const BinScreen& screen)
{
    std::vector<std::string> diags;
    std::set<std::string> ids;
    std::vector<bool> shape_ok(screen.bins.size(), false);
    for (std::size_t i = 0; i < screen.bins.size(); ++i) {
        const auto& bin = screen.bins[i];
        if (bin.id.empty()) {
            diags.push_back(fmt::format("bin #{}: empty id", i));
        } else if (bin.id == kReject) {
            diags.push_back(fmt::format("bin #{}: id '{}' is reserved", i, kReject));
        } else if (!ids.insert(bin.id).second) {
            diags.push_back(fmt::format("bin #{}: duplicate id '{}'", i, bin.id));
        }
        if (const auto problem = polygon_problem(bin); !problem.empty()) {
            diags.push_back(fmt::format("bin '{}': polygon {}", bin.id, problem));
        } else {
            shape_ok[i] = true;
        }
    }
    for (std::size_t i = 0; i < screen.bins.size(); ++i) {
        for (std::size_t j = i + 1; j < screen.bins.size(); ++j) {
            if (shape_ok[i] && shape_ok[j] && interiors_overlap(screen.bins[i], screen.bins[j])) {
                diags.push_back(fmt::format("bins '{}' and '{}' overlap", screen.bins[i].id, screen.bins[j].id));
            }
        }
    }
    const auto& lc = screen.luminance_classes;
    std::set<std::string> labels;
    for (std::size_t i = 0; i < lc.size(); ++i) {
        if (lc[i].label.empty() || lc[i].label == kReject || lc[i].label == kAnyLuminance) {
            diags.push_back(fmt::format("luminance class #{}: invalid label '{}'", i, lc[i].label));
        } else if (!labels.insert(lc[i].label).second) {
            diags.push_back(fmt::format("luminance class #{}: duplicate label '{}'", i, lc[i].label));
        }
        if (!(lc[i].min < lc[i].max) || !std::isfinite(lc[i].min)) {
            diags.push_back(fmt::format("luminance class '{}': empty interval [{}, {})", lc[i].label, lc[i].min, lc[i].max));
        }
        if (i > 0 && lc[i].min < lc[i - 1].max) {
            if (lc[i].max > lc[i - 1].min) {
                diags.push_back(fmt::format("luminance classes '{}' [{}, {}) and '{}' [{}, {}) overlap", lc[i - 1].label,
                                            lc[i - 1].min, lc[i - 1].max, lc[i].label, lc[i].min, lc[i].max));
            } else {
                diags.push_back(fmt::format("luminance classes '{}' and '{}' are not in ascending order", lc[i - 1].label,
                                            lc[i].label));
            }
        }
    }
    return diags;
}

double bin_width(const Bin& bin, std::span<const MacAdamEllipse> ellipses)
{
    double width = 0.0;
    for (std::size_t i = 0; i < bin.polygon.size(); ++i) {
        for (std::size_t j = 0; j < bin.polygon.size(); ++j) {
            if (i != j) {
                width = std::max(width, macadam_steps(bin.polygon[i], bin.polygon[j], ellipses));
            }
        }
    }
    return width;
}

std::vector<BinUniformity> uniformity_report(const BinScreen& screen, std::span<const MacAdamEllipse> ellipses,
                                             double threshold)
{
    std::vector<BinUniformity> out;
    out.reserve(screen.bins.size());
    for (const auto& bin : screen.bins) {
        const double w = bin_width(bin, ellipses);
        out.push_back({bin.id, w, w > threshold});
    }
    return out;
}

}  // namespace ledsel
