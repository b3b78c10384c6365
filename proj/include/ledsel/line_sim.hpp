#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ledsel/binning.hpp"
#include "ledsel/cmf.hpp"
#include "ledsel/instrument.hpp"

namespace ledsel {

/// Simulated time. Integer microseconds keep long runs exact.
using SimDuration = std::chrono::microseconds;

SimDuration to_sim_duration(double seconds);
double to_seconds(SimDuration d);

/// Duration of one station phase, uniform on [low, high] seconds (fixed when
/// low == high).
struct PhaseDuration {
    double low = 0.0;
    double high = 0.0;

    static PhaseDuration fixed(double seconds) { return {seconds, seconds}; }
    static PhaseDuration uniform(double low, double high) { return {low, high}; }

    bool is_fixed() const { return low == high; }
    double mean() const { return 0.5 * (low + high); }
    SimDuration sample(Rng& rng) const;
};

struct StationTimings {
    PhaseDuration pick;
    PhaseDuration place;
    PhaseDuration settle;   // shielding / power-on before measuring
    PhaseDuration measure;  // lower bound; the instrument time applies if longer
    PhaseDuration compute;  // spectrum-to-chromaticity on the manual path
    PhaseDuration deposit;

    void validate() const;

    /// Automated apparatus calibrated to a 9.0 s cycle with a 50 ms
    /// measurement.
    static StationTimings automated_defaults();
    /// Manual workstation, mean cycle 32.7 s (about 110 LEDs/hour).
    static StationTimings manual_defaults();
};

enum class Mode { Manual, Automated };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

struct Compartment {
    std::size_t index = 0;
    std::string target;  // bin id or REJECT
    std::optional<std::size_t> capacity;  // unlimited when empty
};

struct Carousel {
    std::vector<Compartment> compartments;

    /// One compartment per bin in screen order, then REJECT.
    static Carousel for_screen(const BinScreen& screen, std::optional<std::size_t> capacity = std::nullopt);

    /// Empty when every bin id maps to exactly one compartment, exactly one
    /// compartment takes REJECT and no compartment targets an unknown bin.
    std::vector<std::string> coverage_problems(const BinScreen& screen) const;

    std::optional<std::size_t> compartment_for(std::string_view target) const;
};

using InstrumentModel = std::variant<SpectralInstrumentModel, DirectInstrumentModel>;

struct ModeConfig {
    Mode mode = Mode::Automated;
    StationTimings timings = StationTimings::automated_defaults();
    InstrumentModel instrument = DirectInstrumentModel{};
    BinScreen screen;
    Carousel carousel;
    double lumens_per_y = 683.0;
    /// Overrides the built-in table for the screen's observer.
    std::optional<CmfTable> cmf;

    /// Throws ConfigError on inconsistent mode/instrument/timings or a
    /// carousel that does not cover the screen.
    void validate() const;

    const CmfTable& cmf_table() const { return cmf ? *cmf : builtin_cmf(screen.observer); }
    double instrument_time() const;

    static ModeConfig automated(BinScreen screen);
    static ModeConfig manual(BinScreen screen);
};

// --- apparatus state machine -------------------------------------------------

enum class ApparatusPhase { Idle, Feeding, Picking, InChuck, Measuring, Classifying, Depositing, Fault };
enum class ApparatusEvent { StartJob, LedFed, FeedEmpty, Placed, StartMeasure, MeasureDone, Classified, Deposited, Reset };

inline constexpr ApparatusPhase kAllApparatusPhases[] = {
    ApparatusPhase::Idle,      ApparatusPhase::Feeding,     ApparatusPhase::Picking,    ApparatusPhase::InChuck,
    ApparatusPhase::Measuring, ApparatusPhase::Classifying, ApparatusPhase::Depositing, ApparatusPhase::Fault};
inline constexpr ApparatusEvent kAllApparatusEvents[] = {
    ApparatusEvent::StartJob,   ApparatusEvent::LedFed,     ApparatusEvent::FeedEmpty,
    ApparatusEvent::Placed,     ApparatusEvent::StartMeasure, ApparatusEvent::MeasureDone,
    ApparatusEvent::Classified, ApparatusEvent::Deposited,  ApparatusEvent::Reset};

std::string_view to_string(ApparatusPhase phase);
std::string_view to_string(ApparatusEvent event);

struct ApparatusState {
    ApparatusPhase phase = ApparatusPhase::Idle;
    std::string diagnostic;  // set in Fault

    friend bool operator==(const ApparatusState&, const ApparatusState&) = default;
};

/// Total transition function. Illegal events lead to Fault with a
/// diagnostic; Reset returns to Idle from anywhere.
ApparatusState step(const ApparatusState& state, ApparatusEvent event);

// --- sort run ----------------------------------------------------------------

enum class Destination { Compartment, Reject, Overflow };

std::string_view to_string(Destination d);

struct LedRecord {
    std::uint64_t seq = 0;  // 1-based processing order
    std::uint64_t led_id = 0;
    /// Empty for dark / failed measurements.
    std::optional<Chromaticity> measured;
    double lumens = 0.0;
    BinAssignment assignment;
    std::optional<std::size_t> compartment;  // where it was deposited
    Destination destination = Destination::Reject;
    SimDuration cycle_time{0};
    SimDuration finished_at{0};
    bool clamped = false;
};

struct CompartmentCount {
    std::size_t index = 0;
    std::string target;
    std::optional<std::size_t> capacity;
    std::size_t count = 0;
};

struct SortReport {
    Mode mode = Mode::Automated;
    std::uint64_t seed = 0;
    std::size_t input_count = 0;
    bool complete = false;
    std::vector<LedRecord> records;
    SimDuration simulated{0};
    /// Bin compartments only; the REJECT compartment is counted in `rejects`.
    std::vector<CompartmentCount> compartments;
    std::size_t rejects = 0;
    std::size_t overflows = 0;

    std::size_t processed() const { return records.size(); }
    double simulated_seconds() const { return to_seconds(simulated); }
    /// 3600 * n / T, or 0 for an empty run.
    double leds_per_hour() const;
    std::size_t compartment_total() const;
};

/// Pausable single-LED-at-a-time engine. Every call to `process_next`
/// drives the apparatus through one full cycle.
class SortEngine {
public:
    SortEngine(std::vector<LedSample> batch, ModeConfig config, std::uint64_t seed);

    bool finished() const { return next_ >= batch_.size(); }
    std::size_t processed() const { return next_; }
    std::size_t total() const { return batch_.size(); }
    const ApparatusState& apparatus() const { return state_; }
    const ModeConfig& config() const { return config_; }

    const LedRecord& process_next();
    SortReport report() const;
    /// Fill of every compartment so far, REJECT included, carousel order.
    std::vector<CompartmentCount> counters() const;
    std::size_t overflows() const { return overflows_; }
    SimDuration clock() const { return clock_; }

private:
    void fire(ApparatusEvent event);
    SimDuration measure_led(const LedSample& led, LedRecord& record, SimDuration measure_floor);

    std::vector<LedSample> batch_;
    ModeConfig config_;
    std::uint64_t seed_;
    Rng rng_;
    ApparatusState state_;
    std::size_t next_ = 0;
    SimDuration clock_{0};
    std::vector<std::size_t> fill_;
    std::vector<LedRecord> records_;
    std::size_t rejects_ = 0;
    std::size_t overflows_ = 0;
};

SortReport run(std::vector<LedSample> batch, const ModeConfig& config, std::uint64_t seed);

/// Deterministic throughput from mean phase times.
double rate_per_hour(const ModeConfig& config);
double capacity(const ModeConfig& config, double hours_per_year);

// --- economics ---------------------------------------------------------------

enum class Recommendation { Manual, Automated };

std::string_view to_string(Recommendation r);

/// Linear yearly cost model: manual costs V / manual_rate * manual_cost,
/// automated costs automated_fixed + V / automated_rate * automated_cost.
struct BreakevenInputs {
    double manual_rate = 100.0;      // LEDs/hour
    double automated_rate = 400.0;   // LEDs/hour
    double manual_cost = 30.0;       // per operating hour
    double automated_cost = 40.0;    // per operating hour
    double automated_fixed = 30000.0;  // per year

    /// Reference parameters; the threshold comes out at 150,000 LEDs/year.
    static BreakevenInputs calibrated() { return {}; }
};

struct BreakevenResult {
    /// Smallest whole yearly volume at which automation is no more
    /// expensive than manual selection.
    double threshold = 0.0;

    Recommendation recommend(double annual_volume) const
    {
        return annual_volume < threshold ? Recommendation::Manual : Recommendation::Automated;
    }
};

BreakevenResult breakeven(const BreakevenInputs& in);

}  // namespace ledsel
