#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace ledsel {

inline constexpr double kMinSpdWavelength = 200.0;
inline constexpr double kMaxSpdWavelength = 1200.0;

/// Sampled optical power versus wavelength (nm). Power is in W/nm or any
/// relative scale. Linear interpolation between samples, zero outside.
///
/// Invariants (checked on construction, InvalidSpd otherwise): at least two
/// samples, strictly increasing wavelengths inside [200, 1200] nm, finite
/// non-negative power.
class SpectralPowerDistribution {
public:
    SpectralPowerDistribution(Eigen::VectorXd wavelengths, Eigen::VectorXd power);

    /// Triangular line of the given peak power at `wavelength`, falling to
    /// zero at +-`half_width`.
    static SpectralPowerDistribution line(double wavelength, double power = 1.0, double half_width = 5.0);

    /// Constant power over [from, to], sampled every `step` nm.
    static SpectralPowerDistribution constant(double from, double to, double power = 1.0, double step = 5.0);

    const Eigen::VectorXd& wavelengths() const { return wavelengths_; }
    const Eigen::VectorXd& power() const { return power_; }
    Eigen::Index size() const { return wavelengths_.size(); }
    double min_wavelength() const { return wavelengths_(0); }
    double max_wavelength() const { return wavelengths_(wavelengths_.size() - 1); }

    double operator()(double wavelength) const;

    /// Linear interpolation onto an arbitrary grid, zero outside the support.
    Eigen::VectorXd resample(const Eigen::VectorXd& grid) const;

    SpectralPowerDistribution scaled(double factor) const;
    SpectralPowerDistribution shifted(double delta_nm) const;

private:
    Eigen::VectorXd wavelengths_;
    Eigen::VectorXd power_;
};

/// Two-column CSV (nm, power) with exactly one header line. Throws
/// InvalidSpd with a line number on malformed input.
SpectralPowerDistribution read_spd_csv(std::istream& in);
SpectralPowerDistribution read_spd_csv(const std::filesystem::path& path);
void write_spd_csv(std::ostream& out, const SpectralPowerDistribution& spd);

}  // namespace ledsel
