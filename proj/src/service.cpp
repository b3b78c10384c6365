#include "ledsel/service.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "ledsel/report.hpp"

namespace ledsel {

std::string_view to_string(JobPhase phase)
{
    switch (phase) {
    case JobPhase::Empty: return "Empty";
    case JobPhase::Loaded: return "Loaded";
    case JobPhase::Running: return "Running";
    case JobPhase::Paused: return "Paused";
    case JobPhase::Finished: return "Finished";
    case JobPhase::Faulted: return "Faulted";
    }
    return "?";
}

std::string_view to_string(ControlCommand command)
{
    switch (command) {
    case ControlCommand::Start: return "start";
    case ControlCommand::Pause: return "pause";
    case ControlCommand::Resume: return "resume";
    case ControlCommand::Stop: return "stop";
    }
    return "?";
}

ControlCommand control_from_string(std::string_view name)
{
    for (auto c : {ControlCommand::Start, ControlCommand::Pause, ControlCommand::Resume, ControlCommand::Stop}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    throw ConfigError(fmt::format("unknown command '{}' (expected start, pause, resume or stop)", name));
}

std::optional<JobPhase> control_target(JobPhase phase, ControlCommand command)
{
    using P = JobPhase;
    using C = ControlCommand;
    switch (command) {
    case C::Start:
        if (phase == P::Loaded) return P::Running;
        break;
    case C::Pause:
        if (phase == P::Running) return P::Paused;
        break;
    case C::Resume:
        if (phase == P::Paused) return P::Running;
        break;
    case C::Stop:
        if (phase == P::Running || phase == P::Paused) return P::Finished;
        break;
    }
    return std::nullopt;
}

std::size_t JobState::counter_total() const
{
    std::size_t n = 0;
    for (const auto& c : counters) {
        n += c.count;
    }
    return n;
}

// --- telemetry ---------------------------------------------------------------

TelemetrySubscription::TelemetrySubscription(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

void TelemetrySubscription::push(TelemetryEvent event)
{
    {
        std::lock_guard lk(m_);
        if (closed_) {
            return;
        }
        if (queue_.size() >= capacity_) {
            queue_.pop_front();
            ++dropped_;
        }
        queue_.push_back(std::move(event));
    }
    cv_.notify_all();
}

std::optional<TelemetryEvent> TelemetrySubscription::next(std::chrono::milliseconds timeout)
{
    std::unique_lock lk(m_);
    cv_.wait_for(lk, timeout, [&] { return !queue_.empty() || closed_; });
    if (dropped_ > 0) {
        const auto n = dropped_;
        dropped_ = 0;
        return TelemetryGap{n};
    }
    if (queue_.empty()) {
        return std::nullopt;
    }
    auto ev = std::move(queue_.front());
    queue_.pop_front();
    return ev;
}

bool TelemetrySubscription::closed() const
{
    std::lock_guard lk(m_);
    return closed_ && queue_.empty() && dropped_ == 0;
}

void TelemetrySubscription::close()
{
    {
        std::lock_guard lk(m_);
        closed_ = true;
    }
    cv_.notify_all();
}

// --- service -----------------------------------------------------------------

OperatorService::OperatorService(ServiceOptions options) : options_(std::move(options))
{
    if (options_.screen) {
        if (auto d = validate_screen(*options_.screen); !d.empty()) {
            throw ValidationError(std::move(d));
        }
        screen_ = options_.screen;
    }
    {
        std::lock_guard lk(m_);
        publish_snapshot();
    }
    thread_ = std::jthread([this](std::stop_token st) { engine_loop(st); });
}

OperatorService::~OperatorService()
{
    thread_.request_stop();
    cv_.notify_all();
    if (thread_.joinable()) {
        thread_.join();
    }
    std::lock_guard lk(subs_m_);
    for (auto& s : subs_) {
        s->close();
    }
}

std::unique_lock<std::mutex> OperatorService::lock_for_command() const
{
    // Tells the engine loop to step aside so commands are not starved at
    // maximum speed.
    ++waiting_;
    std::unique_lock lk(m_);
    --waiting_;
    return lk;
}

void OperatorService::require_idle() const
{
    auto lk = lock_for_command();
    if (phase_ == JobPhase::Running) {
        throw Busy(fmt::format("job {} is running", job_id_));
    }
}

std::string OperatorService::load_job(std::string_view document, const std::filesystem::path& base_dir)
{
    require_idle();
    std::optional<BinScreen> fallback = screen();
    JobSpec job = parse_job(document, "<job>", base_dir, fallback ? &*fallback : nullptr);
    return load_job(std::move(job));
}

std::string OperatorService::load_job(JobSpec job)
{
    require_idle();
    if (auto d = validate_screen(job.config.screen); !d.empty()) {
        throw ValidationError(std::move(d));
    }
    if (!(job.speed >= 0.0)) {
        throw ConfigError("speed must be >= 0 (0 = maximum speed)");
    }
    auto batch = generate_lot(job.lot);
    auto lk = lock_for_command();
    if (phase_ == JobPhase::Running) {
        throw Busy(fmt::format("job {} is running", job_id_));
    }
    engine_.reset();
    engine_.emplace(std::move(batch), job.config, job.seed);
    job_ = std::move(job);
    job_id_ = fmt::format("job-{}", ++job_counter_);
    live_.reset();
    diagnostic_.clear();
    set_phase(JobPhase::Loaded);
    return job_id_;
}

void OperatorService::unload_job()
{
    auto lk = lock_for_command();
    if (phase_ == JobPhase::Running) {
        throw Busy(fmt::format("job {} is running", job_id_));
    }
    engine_.reset();
    job_.reset();
    live_.reset();
    diagnostic_.clear();
    set_phase(JobPhase::Empty);
    job_id_.clear();
    publish_snapshot();
}

JobState OperatorService::set_speed(double speed)
{
    if (!(speed >= 0.0) || !std::isfinite(speed)) {
        throw ConfigError("speed must be >= 0 (0 = maximum speed)");
    }
    auto lk = lock_for_command();
    if (!job_) {
        throw IllegalTransition(fmt::format("cannot set speed in phase {}", to_string(phase_)));
    }
    job_->speed = speed;
    ++speed_epoch_;
    publish_snapshot();
    cv_.notify_all();
    return *snapshot_;
}

JobState OperatorService::control(ControlCommand command)
{
    auto lk = lock_for_command();
    const auto target = control_target(phase_, command);
    if (!target) {
        throw IllegalTransition(fmt::format("cannot {} in phase {}", to_string(command), to_string(phase_)));
    }
    set_phase(*target);
    if (*target == JobPhase::Finished) {
        finalize();
    }
    cv_.notify_all();
    std::lock_guard sl(snap_m_);
    return *snapshot_;
}

std::shared_ptr<const JobState> OperatorService::state() const
{
    std::lock_guard lk(snap_m_);
    return snapshot_;
}

std::shared_ptr<const JobState> OperatorService::wait_until_settled(std::chrono::milliseconds timeout) const
{
    auto lk = lock_for_command();
    cv_.wait_for(lk, timeout, [&] { return phase_ != JobPhase::Running; });
    std::lock_guard sl(snap_m_);
    return snapshot_;
}

std::shared_ptr<TelemetrySubscription> OperatorService::subscribe(std::size_t capacity)
{
    auto sub = std::make_shared<TelemetrySubscription>(capacity == 0 ? options_.telemetry_capacity : capacity);
    std::lock_guard lk(subs_m_);
    subs_.push_back(sub);
    return sub;
}

void OperatorService::unsubscribe(const std::shared_ptr<TelemetrySubscription>& sub)
{
    sub->close();
    std::lock_guard lk(subs_m_);
    std::erase(subs_, sub);
}

void OperatorService::update_screen(BinScreen screen)
{
    require_idle();
    if (auto d = validate_screen(screen); !d.empty()) {
        throw ValidationError(std::move(d));
    }
    auto lk = lock_for_command();
    if (phase_ == JobPhase::Running) {
        throw Busy(fmt::format("job {} is running", job_id_));
    }
    screen_ = std::move(screen);
}

void OperatorService::update_screen(std::string_view document)
{
    require_idle();
    update_screen(parse_screen(document, "<screen>"));
}

std::optional<BinScreen> OperatorService::screen() const
{
    auto lk = lock_for_command();
    if (screen_) {
        return screen_;
    }
    if (job_) {
        return job_->config.screen;
    }
    return std::nullopt;
}

std::optional<JobSpec> OperatorService::job() const
{
    auto lk = lock_for_command();
    return job_;
}

std::optional<SortReport> OperatorService::report() const
{
    auto lk = lock_for_command();
    if (!engine_) {
        return std::nullopt;
    }
    return engine_->report();
}

PlotBundle OperatorService::plot() const
{
    auto lk = lock_for_command();
    const BinScreen* screen = job_ ? &job_->config.screen : (screen_ ? &*screen_ : nullptr);
    const CmfTable& cmf = job_ ? job_->config.cmf_table()
                               : builtin_cmf(screen != nullptr ? screen->observer : Observer::CIE1931_2deg);
    std::vector<MeasuredPoint> points;
    if (engine_) {
        points = measured_points(engine_->report());
    }
    return make_plot_bundle(cmf, screen, macadam_1942(), points);
}

void OperatorService::set_phase(JobPhase phase)
{
    const JobPhase from = phase_;
    phase_ = phase;
    if (phase != JobPhase::Faulted) {
        diagnostic_.clear();
    }
    publish_snapshot();
    if (from != phase) {
        broadcast(JobPhaseChanged{job_id_, from, phase});
    }
    cv_.notify_all();
}

void OperatorService::publish_snapshot()
{
    auto s = std::make_shared<JobState>();
    s->version = ++version_;
    s->job_id = job_id_;
    s->phase = phase_;
    s->diagnostic = diagnostic_;
    s->live = live_;
    if (job_) {
        s->job_name = job_->name;
        s->speed = job_->speed;
    }
    if (engine_) {
        s->processed = engine_->processed();
        s->total = engine_->total();
        s->counters = engine_->counters();
        s->overflows = engine_->overflows();
        s->simulated_seconds = to_seconds(engine_->clock());
    }
    std::lock_guard lk(snap_m_);
    snapshot_ = std::move(s);
}

void OperatorService::broadcast(const TelemetryEvent& event)
{
    std::lock_guard lk(subs_m_);
    for (auto& s : subs_) {
        s->push(event);
    }
}

void OperatorService::finalize()
{
    if (options_.report_dir && engine_) {
        try {
            write_report(*options_.report_dir / job_id_, engine_->report());
        } catch (const std::exception& e) {
            diagnostic_ = e.what();
            set_phase(JobPhase::Faulted);
        }
    }
}

void OperatorService::engine_loop(std::stop_token stop)
{
    std::unique_lock lk(m_);
    while (!stop.stop_requested()) {
        if (phase_ != JobPhase::Running) {
            cv_.wait(lk, stop, [&] { return phase_ == JobPhase::Running; });
            continue;
        }
        if (waiting_.load() > 0) {
            lk.unlock();
            std::this_thread::yield();
            lk.lock();
            continue;
        }
        if (engine_->finished()) {
            set_phase(JobPhase::Finished);
            finalize();
            continue;
        }
        SimDuration cycle{0};
        try {
            const LedRecord& rec = engine_->process_next();
            live_ = LiveMeasurement{rec.seq,         rec.led_id,      rec.measured,   rec.lumens,
                                    rec.assignment, rec.destination, rec.compartment, rec.cycle_time};
            cycle = rec.cycle_time;
            publish_snapshot();
            broadcast(MeasurementEvent{job_id_, *live_});
        } catch (const std::exception& e) {
            diagnostic_ = e.what();
            set_phase(JobPhase::Faulted);
            continue;
        }
        if (engine_->finished()) {
            set_phase(JobPhase::Finished);
            finalize();
            continue;
        }
        pace(lk, stop, cycle);
    }
}

void OperatorService::pace(std::unique_lock<std::mutex>& lk, const std::stop_token& stop, SimDuration cycle)
{
    const auto started = std::chrono::steady_clock::now();
    while (job_ && job_->speed > 0.0 && !stop.stop_requested()) {
        const auto wait = std::chrono::duration<double>(to_seconds(cycle) / job_->speed);
        const auto deadline = started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(wait);
        const auto epoch = speed_epoch_;
        const bool woken = cv_.wait_until(lk, stop, deadline,
                                          [&] { return phase_ != JobPhase::Running || speed_epoch_ != epoch; });
        if (!woken || phase_ != JobPhase::Running) {
            return;
        }
    }
}

// --- wire format ---------------------------------------------------------------

namespace {

nlohmann::ordered_json live_json(const LiveMeasurement& m)
{
    nlohmann::ordered_json j;
    j["seq"] = m.seq;
    j["led_id"] = m.led_id;
    j["x"] = m.chromaticity ? nlohmann::ordered_json(m.chromaticity->x()) : nlohmann::ordered_json(nullptr);
    j["y"] = m.chromaticity ? nlohmann::ordered_json(m.chromaticity->y()) : nlohmann::ordered_json(nullptr);
    j["lumens"] = m.lumens;
    j["chroma_bin"] = m.assignment.chroma_bin;
    j["lum_class"] = m.assignment.lum_class;
    j["destination"] = std::string(to_string(m.destination));
    j["compartment"] = m.compartment ? nlohmann::ordered_json(*m.compartment) : nlohmann::ordered_json(nullptr);
    j["cycle_time_s"] = to_seconds(m.cycle_time);
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const JobState& s)
{
    nlohmann::ordered_json j;
    j["version"] = s.version;
    j["job_id"] = s.job_id.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(s.job_id);
    j["job_name"] = s.job_name;
    j["phase"] = std::string(to_string(s.phase));
    j["processed"] = s.processed;
    j["total"] = s.total;
    j["live"] = s.live ? live_json(*s.live) : nlohmann::ordered_json(nullptr);
    auto counters = nlohmann::ordered_json::array();
    for (const auto& c : s.counters) {
        counters.push_back({{"index", c.index},
                            {"target", c.target},
                            {"capacity", c.capacity ? nlohmann::ordered_json(*c.capacity) : nlohmann::ordered_json(nullptr)},
                            {"count", c.count}});
    }
    j["counters"] = std::move(counters);
    j["overflows"] = s.overflows;
    j["simulated_seconds"] = s.simulated_seconds;
    j["speed"] = s.speed;
    j["diagnostic"] = s.diagnostic;
    return j;
}

nlohmann::ordered_json to_json(const TelemetryEvent& event)
{
    return std::visit(
        [](const auto& e) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(e)>;
            nlohmann::ordered_json j;
            if constexpr (std::is_same_v<T, MeasurementEvent>) {
                j["type"] = "measurement";
                j["job_id"] = e.job_id;
                const auto live = live_json(e.m);
                for (const auto& [k, v] : live.items()) {
                    j[k] = v;
                }
            } else if constexpr (std::is_same_v<T, JobPhaseChanged>) {
                j["type"] = "phase";
                j["job_id"] = e.job_id.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(e.job_id);
                j["from"] = std::string(to_string(e.from));
                j["to"] = std::string(to_string(e.to));
            } else {
                j["type"] = "gap";
                j["dropped"] = e.dropped;
            }
            return j;
        },
        event);
}

}  // namespace ledsel
