#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>

#include "ledsel/color_types.hpp"
#include "ledsel/spectrum.hpp"

namespace ledsel {

/// Colour matching functions on a uniform wavelength grid. Column 0..2 of
/// `values()` hold xbar, ybar, zbar.
class CmfTable {
public:
    using Values = Eigen::Matrix<double, Eigen::Dynamic, 3>;

    CmfTable(Observer observer, double first_wavelength, double step, Values values);

    Observer observer() const { return observer_; }
    double first_wavelength() const { return first_; }
    double last_wavelength() const { return first_ + step_ * static_cast<double>(values_.rows() - 1); }
    double step() const { return step_; }
    Eigen::Index size() const { return values_.rows(); }
    const Values& values() const { return values_; }
    Eigen::VectorXd grid() const;

    /// Row for an exact grid wavelength; throws InvalidTable if off-grid.
    Eigen::Vector3d at(double wavelength) const;

private:
    Observer observer_;
    double first_;
    double step_;
    Values values_;
};

/// Embedded 380-780 nm, 5 nm tables.
const CmfTable& builtin_cmf(Observer observer);

/// Plain-text table, one row per wavelength: `wavelength xbar ybar zbar`,
/// separated by commas or whitespace. Lines starting with '#' and a
/// non-numeric header line are skipped.
CmfTable read_cmf_table(std::istream& in, Observer observer);
CmfTable read_cmf_table(const std::filesystem::path& path, Observer observer);
void write_cmf_table(std::ostream& out, const CmfTable& table);

/// X = sum S(l) xbar(l) dl over the CMF grid, with the SPD linearly
/// interpolated onto the grid and treated as zero outside its support.
Tristimulus tristimulus(const SpectralPowerDistribution& spd, const CmfTable& cmf);
Tristimulus tristimulus(const SpectralPowerDistribution& spd, Observer observer = Observer::CIE1931_2deg);

/// Chromaticity of a monochromatic stimulus at a grid wavelength.
Chromaticity locus_point(const CmfTable& cmf, Eigen::Index row);

}  // namespace ledsel
