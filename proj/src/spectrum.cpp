#include "ledsel/spectrum.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ledsel/errors.hpp"
#include "text_util.hpp"

namespace ledsel {

SpectralPowerDistribution::SpectralPowerDistribution(Eigen::VectorXd wavelengths, Eigen::VectorXd power)
    : wavelengths_(std::move(wavelengths)), power_(std::move(power))
{
    if (wavelengths_.size() != power_.size()) {
        throw InvalidSpd("wavelength and power sample counts differ");
    }
    if (wavelengths_.size() < 2) {
        throw InvalidSpd("a spectrum needs at least two samples");
    }
    for (Eigen::Index i = 0; i < wavelengths_.size(); ++i) {
        const double wl = wavelengths_(i);
        if (!std::isfinite(wl) || wl < kMinSpdWavelength || wl > kMaxSpdWavelength) {
            throw InvalidSpd(fmt::format("wavelength {} nm outside [200, 1200] nm", wl));
        }
        if (i > 0 && !(wl > wavelengths_(i - 1))) {
            throw InvalidSpd(fmt::format("wavelengths not strictly increasing at {} nm", wl));
        }
        if (!std::isfinite(power_(i)) || power_(i) < 0.0) {
            throw InvalidSpd(fmt::format("negative or non-finite power at {} nm", wl));
        }
    }
}

SpectralPowerDistribution SpectralPowerDistribution::line(double wavelength, double power, double half_width)
{
    Eigen::VectorXd wl(3);
    wl << wavelength - half_width, wavelength, wavelength + half_width;
    Eigen::VectorXd p(3);
    p << 0.0, power, 0.0;
    return {std::move(wl), std::move(p)};
}

SpectralPowerDistribution SpectralPowerDistribution::constant(double from, double to, double power, double step)
{
    if (!(step > 0.0) || !(to > from)) {
        throw InvalidSpd("constant spectrum needs from < to and a positive step");
    }
    const auto n = static_cast<Eigen::Index>(std::floor((to - from) / step + 1e-9)) + 1;
    Eigen::VectorXd wl = Eigen::VectorXd::LinSpaced(n, from, from + step * static_cast<double>(n - 1));
    return {std::move(wl), Eigen::VectorXd::Constant(n, power)};
}

double SpectralPowerDistribution::operator()(double wavelength) const
{
    const auto* first = wavelengths_.data();
    const auto* last = first + wavelengths_.size();
    if (wavelength < *first || wavelength > *(last - 1)) {
        return 0.0;
    }
    const auto* hi = std::lower_bound(first, last, wavelength);
    const auto j = hi - first;
    if (*hi == wavelength) {
        return power_(j);
    }
    const double t = (wavelength - wavelengths_(j - 1)) / (wavelengths_(j) - wavelengths_(j - 1));
    return power_(j - 1) + t * (power_(j) - power_(j - 1));
}

Eigen::VectorXd SpectralPowerDistribution::resample(const Eigen::VectorXd& grid) const
{
    return grid.unaryExpr([this](double wl) { return (*this)(wl); });
}

SpectralPowerDistribution SpectralPowerDistribution::scaled(double factor) const
{
    if (!(factor >= 0.0)) {
        throw InvalidSpd("scale factor must be non-negative");
    }
    return {wavelengths_, power_ * factor};
}

SpectralPowerDistribution SpectralPowerDistribution::shifted(double delta_nm) const
{
    return {(wavelengths_.array() + delta_nm).matrix(), power_};
}

SpectralPowerDistribution read_spd_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw InvalidSpd("empty SPD file (expected a header line)");
    }
    std::vector<double> wl;
    std::vector<double> p;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty()) {
            continue;
        }
        const auto fields = detail::split(body, ',');
        if (fields.size() != 2) {
            throw InvalidSpd(fmt::format("line {}: expected 2 comma-separated columns, got {}", lineno, fields.size()));
        }
        double a = 0.0;
        double b = 0.0;
        if (!detail::parse_double(fields[0], a) || !detail::parse_double(fields[1], b)) {
            throw InvalidSpd(fmt::format("line {}: not a number", lineno));
        }
        wl.push_back(a);
        p.push_back(b);
    }
    try {
        return {Eigen::Map<const Eigen::VectorXd>(wl.data(), static_cast<Eigen::Index>(wl.size())),
                Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()))};
    } catch (const InvalidSpd& e) {
        throw InvalidSpd(fmt::format("{} samples read: {}", wl.size(), e.what()));
    }
}

SpectralPowerDistribution read_spd_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidSpd(fmt::format("cannot open {}", path.string()));
    }
    return read_spd_csv(in);
}

void write_spd_csv(std::ostream& out, const SpectralPowerDistribution& spd)
{
    out << "wavelength_nm,power\n";
    for (Eigen::Index i = 0; i < spd.size(); ++i) {
        out << fmt::format("{},{}\n", spd.wavelengths()(i), spd.power()(i));
    }
}

}  // namespace ledsel
