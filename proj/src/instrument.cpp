#include "ledsel/instrument.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ledsel {

namespace {

constexpr double kMinFwhm = 1.0;
constexpr double kMinPowerFraction = 1e-6;

// Standard normal scaled by sigma; draws even when sigma is zero so the
// stream position does not depend on the noise settings.
double gauss(Rng& rng, double mean, double sigma)
{
    std::normal_distribution<double> n(0.0, 1.0);
    return mean + sigma * n(rng);
}

void require_non_negative(double v, const char* what)
{
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ConfigError(fmt::format("{} must be a finite non-negative number (got {})", what, v));
    }
}

}  // namespace

void LedModel::validate() const
{
    if (!(peak_wavelength >= 380.0 && peak_wavelength <= 780.0)) {
        throw ConfigError(fmt::format("LED peak wavelength {} nm outside [380, 780] nm", peak_wavelength));
    }
    if (!(fwhm > 0.0) || !std::isfinite(fwhm)) {
        throw ConfigError("LED FWHM must be positive");
    }
    if (!(peak_power > 0.0) || !std::isfinite(peak_power)) {
        throw ConfigError("LED peak power must be positive");
    }
    require_non_negative(variation.peak_wavelength, "peak wavelength variation");
    require_non_negative(variation.fwhm, "FWHM variation");
    require_non_negative(variation.peak_power, "peak power variation");
}

SpectralPowerDistribution gaussian_line(double peak_wavelength, double fwhm, double peak_power,
                                        const Eigen::VectorXd& grid)
{
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    Eigen::VectorXd p = ((grid.array() - peak_wavelength) / sigma).square().unaryExpr([](double u) {
        return std::exp(-0.5 * u);
    });
    return {grid, peak_power * p};
}

SynthesizedSpectrum synth_spectrum(const LedModel& model, Rng& rng)
{
    return synth_spectrum(model, rng, builtin_cmf(Observer::CIE1931_2deg).grid());
}

SynthesizedSpectrum synth_spectrum(const LedModel& model, Rng& rng, const Eigen::VectorXd& grid)
{
    model.validate();
    const double wl_raw = gauss(rng, model.peak_wavelength, model.variation.peak_wavelength);
    const double fwhm_raw = gauss(rng, model.fwhm, model.variation.fwhm);
    const double power_raw = gauss(rng, model.peak_power, model.variation.peak_power);

    const double wl = std::clamp(wl_raw, 380.0, 780.0);
    const double fwhm = std::max(fwhm_raw, kMinFwhm);
    const double power = std::max(power_raw, kMinPowerFraction * model.peak_power);
    const bool clamped = wl != wl_raw || fwhm != fwhm_raw || power != power_raw;
    return {gaussian_line(wl, fwhm, power, grid), wl, fwhm, power, clamped};
}

void SpectralInstrumentModel::validate() const
{
    require_non_negative(wavelength_accuracy, "wavelength accuracy");
    require_non_negative(measurement_time, "measurement time");
    require_non_negative(amplitude_noise, "amplitude noise");
}

SpectralMeasurement measure_spectral(const SpectralPowerDistribution& spd, const SpectralInstrumentModel& model,
                                     Rng& rng)
{
    model.validate();
    const double shift = gauss(rng, 0.0, model.wavelength_accuracy);
    Eigen::VectorXd power = spd.power();
    for (Eigen::Index i = 0; i < power.size(); ++i) {
        power(i) = std::max(0.0, power(i) * gauss(rng, 1.0, model.amplitude_noise));
    }
    Eigen::VectorXd wl = (spd.wavelengths().array() + shift).matrix();
    return {SpectralPowerDistribution(std::move(wl), std::move(power)), shift, model.measurement_time};
}

void DirectInstrumentModel::validate() const
{
    require_non_negative(chroma_noise, "chromaticity noise");
    require_non_negative(lumen_noise, "lumen noise");
    require_non_negative(measurement_time, "measurement time");
}

DirectMeasurement measure_direct(const SpectralPowerDistribution& spd, const DirectInstrumentModel& model, Rng& rng,
                                 const CmfTable& cmf, double lumens_per_y)
{
    model.validate();
    const Tristimulus t = tristimulus(spd, cmf);
    const Chromaticity truth = chromaticity(t);
    const double dx = gauss(rng, 0.0, model.chroma_noise);
    const double dy = gauss(rng, 0.0, model.chroma_noise);
    const double gain = gauss(rng, 1.0, model.lumen_noise);
    return {Chromaticity(truth.x() + dx, truth.y() + dy), std::max(0.0, luminous_value(t, lumens_per_y) * gain),
            model.measurement_time};
}

std::vector<LedSample> generate_lot(const LedLot& lot)
{
    lot.model.validate();
    Rng rng(lot.seed);
    const Eigen::VectorXd grid = builtin_cmf(Observer::CIE1931_2deg).grid();
    std::vector<LedSample> out;
    out.reserve(lot.count);
    for (std::size_t i = 0; i < lot.count; ++i) {
        auto s = synth_spectrum(lot.model, rng, grid);
        out.push_back(LedSample{i + 1, std::move(s.spd), s.clamped});
    }
    return out;
}

}  // namespace ledsel
