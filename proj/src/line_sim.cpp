#include "ledsel/line_sim.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace ledsel {

SimDuration to_sim_duration(double seconds)
{
    return SimDuration(static_cast<SimDuration::rep>(std::llround(seconds * 1e6)));
}

double to_seconds(SimDuration d) { return static_cast<double>(d.count()) * 1e-6; }

SimDuration PhaseDuration::sample(Rng& rng) const
{
    if (is_fixed()) {
        return to_sim_duration(low);
    }
    std::uniform_real_distribution<double> u(low, high);
    return to_sim_duration(u(rng));
}

void StationTimings::validate() const
{
    const std::pair<const char*, const PhaseDuration*> phases[] = {
        {"pick", &pick}, {"place", &place}, {"settle", &settle}, {"measure", &measure}, {"compute", &compute},
        {"deposit", &deposit}};
    for (const auto& [name, d] : phases) {
        if (!(d->low >= 0.0) || !(d->high >= d->low) || !std::isfinite(d->high)) {
            throw ConfigError(fmt::format("timing '{}' must satisfy 0 <= low <= high (got [{}, {}])", name, d->low, d->high));
        }
    }
}

StationTimings StationTimings::automated_defaults()
{
    return {PhaseDuration::fixed(3.0),  PhaseDuration::fixed(2.0), PhaseDuration::fixed(0.0),
            PhaseDuration::fixed(0.05), PhaseDuration::fixed(0.0), PhaseDuration::fixed(3.95)};
}

StationTimings StationTimings::manual_defaults()
{
    return {PhaseDuration::uniform(5.0, 11.0), PhaseDuration::fixed(4.0), PhaseDuration::fixed(5.0),
            PhaseDuration::fixed(6.0),         PhaseDuration::fixed(3.0), PhaseDuration::fixed(6.7)};
}

std::string_view to_string(Mode mode) { return mode == Mode::Manual ? "manual" : "automated"; }

Mode mode_from_string(std::string_view name)
{
    if (name == "manual" || name == "Manual") {
        return Mode::Manual;
    }
    if (name == "automated" || name == "Automated") {
        return Mode::Automated;
    }
    throw ConfigError(fmt::format("unknown mode '{}' (expected manual or automated)", name));
}

Carousel Carousel::for_screen(const BinScreen& screen, std::optional<std::size_t> capacity)
{
    Carousel c;
    for (const auto& bin : screen.bins) {
        c.compartments.push_back({c.compartments.size(), bin.id, capacity});
    }
    c.compartments.push_back({c.compartments.size(), std::string(kReject), capacity});
    return c;
}

std::vector<std::string> Carousel::coverage_problems(const BinScreen& screen) const
{
    std::vector<std::string> out;
    for (const auto& bin : screen.bins) {
        const auto n = std::count_if(compartments.begin(), compartments.end(),
                                     [&](const Compartment& c) { return c.target == bin.id; });
        if (n == 0) {
            out.push_back(fmt::format("bin '{}' has no carousel compartment", bin.id));
        } else if (n > 1) {
            out.push_back(fmt::format("bin '{}' maps to {} compartments", bin.id, n));
        }
    }
    const auto rejects = std::count_if(compartments.begin(), compartments.end(),
                                       [](const Compartment& c) { return c.target == kReject; });
    if (rejects != 1) {
        out.push_back(fmt::format("carousel needs exactly one REJECT compartment (found {})", rejects));
    }
    std::set<std::size_t> indices;
    for (const auto& c : compartments) {
        if (c.target != kReject && screen.find(c.target) == nullptr) {
            out.push_back(fmt::format("compartment {} targets unknown bin '{}'", c.index, c.target));
        }
        if (!indices.insert(c.index).second) {
            out.push_back(fmt::format("duplicate compartment index {}", c.index));
        }
    }
    return out;
}

std::optional<std::size_t> Carousel::compartment_for(std::string_view target) const
{
    for (std::size_t i = 0; i < compartments.size(); ++i) {
        if (compartments[i].target == target) {
            return i;
        }
    }
    return std::nullopt;
}

double ModeConfig::instrument_time() const
{
    return std::visit([](const auto& m) { return m.measurement_time; }, instrument);
}

void ModeConfig::validate() const
{
    timings.validate();
    if (mode == Mode::Manual) {
        if (!std::holds_alternative<SpectralInstrumentModel>(instrument)) {
            throw ConfigError("manual mode uses the spectral instrument");
        }
    } else {
        if (!std::holds_alternative<DirectInstrumentModel>(instrument)) {
            throw ConfigError("automated mode uses the direct chromaticity instrument");
        }
        if (timings.compute.high != 0.0) {
            throw ConfigError("automated mode has no compute phase (compute timing must be 0)");
        }
    }
    std::visit([](const auto& m) { m.validate(); }, instrument);
    if (!(lumens_per_y > 0.0)) {
        throw ConfigError("luminous calibration must be positive");
    }
    if (const auto problems = carousel.coverage_problems(screen); !problems.empty()) {
        std::string msg = "carousel does not match screen";
        for (const auto& p : problems) {
            msg += "; " + p;
        }
        throw ConfigError(msg);
    }
}

ModeConfig ModeConfig::automated(BinScreen screen)
{
    ModeConfig c;
    c.mode = Mode::Automated;
    c.timings = StationTimings::automated_defaults();
    c.instrument = DirectInstrumentModel{};
    c.carousel = Carousel::for_screen(screen);
    c.screen = std::move(screen);
    return c;
}

ModeConfig ModeConfig::manual(BinScreen screen)
{
    ModeConfig c;
    c.mode = Mode::Manual;
    c.timings = StationTimings::manual_defaults();
    c.instrument = SpectralInstrumentModel{};
    c.carousel = Carousel::for_screen(screen);
    c.screen = std::move(screen);
    return c;
}

// --- state machine -----------------------------------------------------------

std::string_view to_string(ApparatusPhase phase)
{
    switch (phase) {
    case ApparatusPhase::Idle: return "Idle";
    case ApparatusPhase::Feeding: return "Feeding";
    case ApparatusPhase::Picking: return "Picking";
    case ApparatusPhase::InChuck: return "InChuck";
    case ApparatusPhase::Measuring: return "Measuring";
    case ApparatusPhase::Classifying: return "Classifying";
    case ApparatusPhase::Depositing: return "Depositing";
    case ApparatusPhase::Fault: return "Fault";
    }
    return "?";
}

std::string_view to_string(ApparatusEvent event)
{
    switch (event) {
    case ApparatusEvent::StartJob: return "StartJob";
    case ApparatusEvent::LedFed: return "LedFed";
    case ApparatusEvent::FeedEmpty: return "FeedEmpty";
    case ApparatusEvent::Placed: return "Placed";
    case ApparatusEvent::StartMeasure: return "StartMeasure";
    case ApparatusEvent::MeasureDone: return "MeasureDone";
    case ApparatusEvent::Classified: return "Classified";
    case ApparatusEvent::Deposited: return "Deposited";
    case ApparatusEvent::Reset: return "Reset";
    }
    return "?";
}

ApparatusState step(const ApparatusState& state, ApparatusEvent event)
{
    using P = ApparatusPhase;
    using E = ApparatusEvent;
    if (event == E::Reset) {
        return {P::Idle, {}};
    }
    if (state.phase == P::Fault) {
        return state;
    }
    auto to = [](P next) { return ApparatusState{next, {}}; };
    switch (state.phase) {
    case P::Idle:
        if (event == E::StartJob) return to(P::Feeding);
        break;
    case P::Feeding:
        if (event == E::LedFed) return to(P::Picking);
        if (event == E::FeedEmpty) return to(P::Idle);
        break;
    case P::Picking:
        if (event == E::Placed) return to(P::InChuck);
        break;
    case P::InChuck:
        if (event == E::StartMeasure) return to(P::Measuring);
        break;
    case P::Measuring:
        if (event == E::MeasureDone) return to(P::Classifying);
        break;
    case P::Classifying:
        if (event == E::Classified) return to(P::Depositing);
        break;
    case P::Depositing:
        if (event == E::Deposited) return to(P::Feeding);
        break;
    case P::Fault:
        break;
    }
    return {P::Fault, fmt::format("illegal event {} in state {}", to_string(event), to_string(state.phase))};
}

// --- engine ------------------------------------------------------------------

std::string_view to_string(Destination d)
{
    switch (d) {
    case Destination::Compartment: return "compartment";
    case Destination::Reject: return "reject";
    case Destination::Overflow: return "overflow";
    }
    return "?";
}

double SortReport::leds_per_hour() const
{
    if (records.empty() || simulated.count() == 0) {
        return 0.0;
    }
    return 3600e6 * static_cast<double>(records.size()) / static_cast<double>(simulated.count());
}

std::size_t SortReport::compartment_total() const
{
    std::size_t n = 0;
    for (const auto& c : compartments) {
        n += c.count;
    }
    return n;
}

SortEngine::SortEngine(std::vector<LedSample> batch, ModeConfig config, std::uint64_t seed)
    : batch_(std::move(batch)), config_(std::move(config)), seed_(seed), rng_(seed)
{
    config_.validate();
    fill_.assign(config_.carousel.compartments.size(), 0);
    records_.reserve(batch_.size());
    fire(ApparatusEvent::StartJob);
    if (batch_.empty()) {
        fire(ApparatusEvent::FeedEmpty);
    }
}

void SortEngine::fire(ApparatusEvent event)
{
    state_ = step(state_, event);
    if (state_.phase == ApparatusPhase::Fault) {
        throw Error("apparatus fault: " + state_.diagnostic);
    }
}

SimDuration SortEngine::measure_led(const LedSample& led, LedRecord& record, SimDuration measure_floor)
{
    const CmfTable& cmf = config_.cmf_table();
    SimDuration elapsed{0};
    try {
        if (config_.mode == Mode::Manual) {
            const auto m = measure_spectral(led.spd, std::get<SpectralInstrumentModel>(config_.instrument), rng_);
            elapsed = to_sim_duration(m.elapsed);
            const Tristimulus t = tristimulus(m.spd, cmf);
            record.lumens = luminous_value(t, config_.lumens_per_y);
            record.measured = chromaticity(t);
        } else {
            const auto m = measure_direct(led.spd, std::get<DirectInstrumentModel>(config_.instrument), rng_, cmf,
                                          config_.lumens_per_y);
            elapsed = to_sim_duration(m.elapsed);
            record.lumens = m.lumens;
            record.measured = m.chromaticity;
        }
    } catch (const ZeroTristimulus&) {
        record.measured.reset();
        record.lumens = 0.0;
    } catch (const EmptyOverlap&) {
        record.measured.reset();
        record.lumens = 0.0;
    }
    return std::max(elapsed, measure_floor);
}

const LedRecord& SortEngine::process_next()
{
    if (finished()) {
        throw Error("sort run already finished");
    }
    const LedSample& led = batch_[next_];
    const StationTimings& t = config_.timings;
    LedRecord rec;
    rec.seq = next_ + 1;
    rec.led_id = led.id;
    rec.clamped = led.clamped;

    SimDuration cycle = t.pick.sample(rng_);
    fire(ApparatusEvent::LedFed);
    cycle += t.place.sample(rng_);
    fire(ApparatusEvent::Placed);
    cycle += t.settle.sample(rng_);
    fire(ApparatusEvent::StartMeasure);
    cycle += measure_led(led, rec, t.measure.sample(rng_));
    fire(ApparatusEvent::MeasureDone);

    cycle += t.compute.sample(rng_);
    if (rec.measured) {
        rec.assignment = classify(*rec.measured, rec.lumens, config_.screen);
    } else {
        rec.assignment = {std::string(kReject), std::string(kReject)};
    }
    fire(ApparatusEvent::Classified);

    cycle += t.deposit.sample(rng_);
    const std::string target = rec.assignment.rejected() ? std::string(kReject) : rec.assignment.chroma_bin;
    const auto slot = config_.carousel.compartment_for(target);
    const auto& cap = config_.carousel.compartments[*slot].capacity;
    if (cap && fill_[*slot] >= *cap) {
        rec.destination = Destination::Overflow;
        ++overflows_;
    } else {
        ++fill_[*slot];
        rec.compartment = config_.carousel.compartments[*slot].index;
        if (target == kReject) {
            rec.destination = Destination::Reject;
            ++rejects_;
        } else {
            rec.destination = Destination::Compartment;
        }
    }
    fire(ApparatusEvent::Deposited);

    clock_ += cycle;
    rec.cycle_time = cycle;
    rec.finished_at = clock_;
    records_.push_back(std::move(rec));
    ++next_;
    if (finished()) {
        fire(ApparatusEvent::FeedEmpty);
    }
    return records_.back();
}

SortReport SortEngine::report() const
{
    SortReport r;
    r.mode = config_.mode;
    r.seed = seed_;
    r.input_count = batch_.size();
    r.complete = finished();
    r.records = records_;
    r.simulated = clock_;
    r.rejects = rejects_;
    r.overflows = overflows_;
    for (std::size_t i = 0; i < config_.carousel.compartments.size(); ++i) {
        const auto& c = config_.carousel.compartments[i];
        if (c.target != kReject) {
            r.compartments.push_back({c.index, c.target, c.capacity, fill_[i]});
        }
    }
    return r;
}

std::vector<CompartmentCount> SortEngine::counters() const
{
    std::vector<CompartmentCount> out;
    out.reserve(fill_.size());
    for (std::size_t i = 0; i < fill_.size(); ++i) {
        const auto& c = config_.carousel.compartments[i];
        out.push_back({c.index, c.target, c.capacity, fill_[i]});
    }
    return out;
}

SortReport run(std::vector<LedSample> batch, const ModeConfig& config, std::uint64_t seed)
{
    SortEngine engine(std::move(batch), config, seed);
    while (!engine.finished()) {
        engine.process_next();
    }
    return engine.report();
}

double rate_per_hour(const ModeConfig& config)
{
    const StationTimings& t = config.timings;
    const double mean_cycle = t.pick.mean() + t.place.mean() + t.settle.mean() +
                              std::max(t.measure.mean(), config.instrument_time()) + t.compute.mean() + t.deposit.mean();
    if (!(mean_cycle > 0.0)) {
        throw InfiniteRate();
    }
    return 3600.0 / mean_cycle;
}

double capacity(const ModeConfig& config, double hours_per_year)
{
    if (!(hours_per_year > 0.0)) {
        throw Error("hours per year must be positive");
    }
    return rate_per_hour(config) * hours_per_year;
}

// --- economics ---------------------------------------------------------------

std::string_view to_string(Recommendation r) { return r == Recommendation::Manual ? "manual" : "automated"; }

BreakevenResult breakeven(const BreakevenInputs& in)
{
    if (!(in.manual_rate > 0.0) || !(in.automated_rate > 0.0)) {
        throw Error("throughput rates must be positive");
    }
    if (!(in.manual_cost >= 0.0) || !(in.automated_cost >= 0.0) || !(in.automated_fixed >= 0.0)) {
        throw Error("costs must be non-negative");
    }
    // Cleared of denominators: automated <= manual  <=>  V * margin >= fixed_term.
    const double margin = in.manual_cost * in.automated_rate - in.automated_cost * in.manual_rate;
    const double fixed_term = in.automated_fixed * in.manual_rate * in.automated_rate;
    if (fixed_term == 0.0 && margin >= 0.0) {
        return {0.0};
    }
    if (!(margin > 0.0)) {
        throw NeverBreaksEven();
    }
    double v = std::ceil(fixed_term / margin);
    while (v > 0.0 && (v - 1.0) * margin >= fixed_term) {
        v -= 1.0;
    }
    while (v * margin < fixed_term) {
        v += 1.0;
    }
    return {v};
}

}  // namespace ledsel
