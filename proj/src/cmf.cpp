#include "ledsel/cmf.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "builtin_data.hpp"
#include "text_util.hpp"

namespace ledsel {

CmfTable::CmfTable(Observer observer, double first_wavelength, double step, Values values)
    : observer_(observer), first_(first_wavelength), step_(step), values_(std::move(values))
{
    if (values_.rows() < 2) {
        throw InvalidTable("CMF table needs at least two rows");
    }
    if (!(step_ > 0.0)) {
        throw InvalidTable("CMF grid step must be positive");
    }
    if (!values_.allFinite() || (values_.array() < 0.0).any()) {
        throw InvalidTable("CMF values must be finite and non-negative");
    }
}

Eigen::VectorXd CmfTable::grid() const
{
    return Eigen::VectorXd::LinSpaced(values_.rows(), first_, last_wavelength());
}

Eigen::Vector3d CmfTable::at(double wavelength) const
{
    const double pos = (wavelength - first_) / step_;
    const double row = std::round(pos);
    if (std::abs(pos - row) > 1e-9 || row < 0 || row >= static_cast<double>(values_.rows())) {
        throw InvalidTable(fmt::format("{} nm is not on the CMF grid", wavelength));
    }
    return values_.row(static_cast<Eigen::Index>(row)).transpose();
}

namespace {

CmfTable from_array(Observer observer, const std::array<std::array<double, 3>, data::kCmfRows>& rows)
{
    CmfTable::Values v(static_cast<Eigen::Index>(rows.size()), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
        }
    }
    return {observer, data::kCmfFirst, data::kCmfStep, std::move(v)};
}

}  // namespace

const CmfTable& builtin_cmf(Observer observer)
{
    static const CmfTable cie1931 = from_array(Observer::CIE1931_2deg, data::kCie1931);
    static const CmfTable cie1964 = from_array(Observer::CIE1964_10deg, data::kCie1964);
    return observer == Observer::CIE1964_10deg ? cie1964 : cie1931;
}

CmfTable read_cmf_table(std::istream& in, Observer observer)
{
    std::vector<double> wl;
    std::vector<std::array<double, 3>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const auto f = detail::split_fields(body);
        double vals[4];
        bool numeric = f.size() == 4;
        for (std::size_t i = 0; numeric && i < 4; ++i) {
            numeric = detail::parse_double(f[i], vals[i]);
        }
        if (!numeric) {
            if (rows.empty() && wl.empty() && lineno == 1) {
                continue;  // header
            }
            throw InvalidTable(fmt::format("line {}: expected 'wavelength xbar ybar zbar'", lineno));
        }
        wl.push_back(vals[0]);
        rows.push_back({vals[1], vals[2], vals[3]});
    }
    if (rows.size() < 2) {
        throw InvalidTable("CMF table needs at least two rows");
    }
    const double step = wl[1] - wl[0];
    for (std::size_t i = 1; i < wl.size(); ++i) {
        if (std::abs((wl[i] - wl[i - 1]) - step) > 1e-9) {
            throw InvalidTable(fmt::format("non-uniform CMF grid at {} nm", wl[i]));
        }
    }
    CmfTable::Values v(static_cast<Eigen::Index>(rows.size()), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        v.row(static_cast<Eigen::Index>(i)) << rows[i][0], rows[i][1], rows[i][2];
    }
    return {observer, wl.front(), step, std::move(v)};
}

CmfTable read_cmf_table(const std::filesystem::path& path, Observer observer)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidTable(fmt::format("cannot open {}", path.string()));
    }
    return read_cmf_table(in, observer);
}

void write_cmf_table(std::ostream& out, const CmfTable& table)
{
    out << "# columns: wavelength_nm xbar ybar zbar\n";
    const Eigen::VectorXd g = table.grid();
    for (Eigen::Index i = 0; i < table.size(); ++i) {
        out << fmt::format("{} {} {} {}\n", g(i), table.values()(i, 0), table.values()(i, 1), table.values()(i, 2));
    }
}

Tristimulus tristimulus(const SpectralPowerDistribution& spd, const CmfTable& cmf)
{
    if (spd.max_wavelength() < cmf.first_wavelength() || spd.min_wavelength() > cmf.last_wavelength()) {
        throw EmptyOverlap(fmt::format("spectrum support [{}, {}] nm does not meet the CMF range [{}, {}] nm",
                                       spd.min_wavelength(), spd.max_wavelength(), cmf.first_wavelength(),
                                       cmf.last_wavelength()));
    }
    const Eigen::VectorXd s = spd.resample(cmf.grid());
    return Tristimulus(cmf.step() * (cmf.values().transpose() * s));
}

Tristimulus tristimulus(const SpectralPowerDistribution& spd, Observer observer)
{
    return tristimulus(spd, builtin_cmf(observer));
}

Chromaticity locus_point(const CmfTable& cmf, Eigen::Index row)
{
    return chromaticity(Tristimulus(cmf.values().row(row).transpose()));
}

}  // namespace ledsel
