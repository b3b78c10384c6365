#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ledsel/cmf.hpp"
#include "ledsel/color_types.hpp"
#include "ledsel/spectrum.hpp"

namespace ledsel {

/// All simulation randomness flows through explicitly seeded engines of
/// this type.
using Rng = std::mt19937_64;

/// Per-lot 1-sigma spread of the LED line parameters.
struct LedVariation {
    double peak_wavelength = 0.0;
    double fwhm = 0.0;
    double peak_power = 0.0;
};

/// Single-band Gaussian LED. Wavelengths in nm, power in W/nm at the peak.
struct LedModel {
    double peak_wavelength = 555.0;
    double fwhm = 20.0;
    double peak_power = 1.0;
    LedVariation variation;

    void validate() const;
};

struct SynthesizedSpectrum {
    SpectralPowerDistribution spd;
    double peak_wavelength;
    double fwhm;
    double peak_power;
    /// Set when a perturbed parameter had to be clamped back into range.
    bool clamped = false;
};

/// Draws one LED from the model's lot distribution and samples its
/// Gaussian line on `grid` (the CMF grid by default).
SynthesizedSpectrum synth_spectrum(const LedModel& model, Rng& rng);
SynthesizedSpectrum synth_spectrum(const LedModel& model, Rng& rng, const Eigen::VectorXd& grid);

/// Gaussian line sampled on a grid, no randomness.
SpectralPowerDistribution gaussian_line(double peak_wavelength, double fwhm, double peak_power,
                                        const Eigen::VectorXd& grid);

/// Scanning spectrometer returning a spectrum (the manual workstation).
struct SpectralInstrumentModel {
    double wavelength_accuracy = 0.5;  // nm, 1 sigma
    double measurement_time = 5.0;     // s
    double amplitude_noise = 0.0;      // relative, 1 sigma

    void validate() const;
};

struct SpectralMeasurement {
    SpectralPowerDistribution spd;
    double wavelength_shift;  // nm actually applied
    double elapsed;           // s
};

/// Shifts the spectrum by N(0, accuracy) nm and scales each sample by
/// N(1, amplitude_noise). Chromaticity is left to the caller.
SpectralMeasurement measure_spectral(const SpectralPowerDistribution& spd, const SpectralInstrumentModel& model,
                                     Rng& rng);

/// Array spectrometer reporting chromaticity directly (the automated line).
struct DirectInstrumentModel {
    double chroma_noise = 0.0002;   // chromaticity units, 1 sigma per axis
    double lumen_noise = 0.0;       // relative, 1 sigma
    double measurement_time = 0.050;  // s

    void validate() const;
};

struct DirectMeasurement {
    Chromaticity chromaticity;
    double lumens;
    double elapsed;
};

/// True chromaticity plus per-axis Gaussian noise. Throws ZeroTristimulus
/// for dark spectra.
DirectMeasurement measure_direct(const SpectralPowerDistribution& spd, const DirectInstrumentModel& model, Rng& rng,
                                 const CmfTable& cmf = builtin_cmf(Observer::CIE1931_2deg),
                                 double lumens_per_y = 683.0);

struct LedSample {
    std::uint64_t id = 0;
    SpectralPowerDistribution spd;
    bool clamped = false;
};

struct LedLot {
    std::string name = "lot";
    LedModel model;
    std::size_t count = 0;
    std::uint64_t seed = 1;
};

/// Deterministic batch for a lot: ids 1..count, one synth_spectrum draw each
/// from an engine seeded with `lot.seed`.
std::vector<LedSample> generate_lot(const LedLot& lot);

}  // namespace ledsel
