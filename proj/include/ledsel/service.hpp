#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ledsel/config.hpp"
#include "ledsel/line_sim.hpp"
#include "ledsel/plot.hpp"

namespace ledsel {

enum class JobPhase { Empty, Loaded, Running, Paused, Finished, Faulted };
std::string_view to_string(JobPhase phase);

enum class ControlCommand { Start, Pause, Resume, Stop };
std::string_view to_string(ControlCommand command);
ControlCommand control_from_string(std::string_view name);

/// Successor phase for a control command, or nullopt when the command is
/// illegal in `phase`.
std::optional<JobPhase> control_target(JobPhase phase, ControlCommand command);

struct LiveMeasurement {
    std::uint64_t seq = 0;
    std::uint64_t led_id = 0;
    std::optional<Chromaticity> chromaticity;
    double lumens = 0.0;
    BinAssignment assignment;
    Destination destination = Destination::Reject;
    std::optional<std::size_t> compartment;
    SimDuration cycle_time{0};
};

/// Immutable snapshot of the service. `counters` covers every compartment
/// (REJECT included), so sum(counters) + overflows == processed.
struct JobState {
    std::uint64_t version = 0;
    std::string job_id;
    std::string job_name;
    JobPhase phase = JobPhase::Empty;
    std::size_t processed = 0;
    std::size_t total = 0;
    std::optional<LiveMeasurement> live;
    std::vector<CompartmentCount> counters;
    std::size_t overflows = 0;
    double simulated_seconds = 0.0;
    double speed = 0.0;
    std::string diagnostic;  // set when Faulted

    std::size_t counter_total() const;
};

struct MeasurementEvent {
    std::string job_id;
    LiveMeasurement m;
};

struct JobPhaseChanged {
    std::string job_id;
    JobPhase from;
    JobPhase to;
};

/// Stands in for `dropped` events a slow consumer lost.
struct TelemetryGap {
    std::uint64_t dropped = 0;
};

using TelemetryEvent = std::variant<MeasurementEvent, JobPhaseChanged, TelemetryGap>;

/// Bounded per-subscriber queue. When full, the oldest event is dropped and
/// the consumer sees one TelemetryGap before the surviving events.
class TelemetrySubscription {
public:
    explicit TelemetrySubscription(std::size_t capacity);

    /// Waits up to `timeout`; nullopt on timeout or when closed and drained.
    std::optional<TelemetryEvent> next(std::chrono::milliseconds timeout);
    bool closed() const;
    void close();

    void push(TelemetryEvent event);

private:
    mutable std::mutex m_;
    std::condition_variable cv_;
    std::deque<TelemetryEvent> queue_;
    std::size_t capacity_;
    std::uint64_t dropped_ = 0;
    bool closed_ = false;
};

struct ServiceOptions {
    std::size_t telemetry_capacity = 4096;
    /// Finished and stopped jobs write `<report_dir>/<job id>/` when set.
    std::optional<std::filesystem::path> report_dir;
    /// Screen used by jobs that do not name one, until replaced.
    std::optional<BinScreen> screen;
};

/// Job lifecycle around one SortEngine. A single engine thread steps the
/// job; commands from any thread are serialised by one mutex and applied
/// between engine steps.
class OperatorService {
public:
    explicit OperatorService(ServiceOptions options = {});
    ~OperatorService();
    OperatorService(const OperatorService&) = delete;
    OperatorService& operator=(const OperatorService&) = delete;

    /// Parses and stages a job document. Busy while a job is Running;
    /// ValidationError for an invalid screen; ConfigError otherwise.
    std::string load_job(std::string_view document, const std::filesystem::path& base_dir = {});
    std::string load_job(JobSpec job);
    /// Drops a staged or finished job. Busy while Running.
    void unload_job();

    JobState control(ControlCommand command);
    /// Simulated seconds per wall-clock second for the current job; 0 runs
    /// at maximum speed. Takes effect on the LED being paced.
    JobState set_speed(double speed);

    std::shared_ptr<const JobState> state() const;
    /// Blocks until the phase is not Running or the timeout passes.
    std::shared_ptr<const JobState> wait_until_settled(std::chrono::milliseconds timeout) const;

    std::shared_ptr<TelemetrySubscription> subscribe(std::size_t capacity = 0);
    void unsubscribe(const std::shared_ptr<TelemetrySubscription>& sub);

    /// Replaces the screen for subsequently loaded jobs. Busy while Running;
    /// ValidationError when the screen breaks an invariant.
    void update_screen(BinScreen screen);
    void update_screen(std::string_view document);
    std::optional<BinScreen> screen() const;

    /// Job settings of the staged job, if any.
    std::optional<JobSpec> job() const;
    /// Report of the current job so far (complete once Finished).
    std::optional<SortReport> report() const;
    PlotBundle plot() const;

private:
    void engine_loop(std::stop_token stop);
    void pace(std::unique_lock<std::mutex>& lk, const std::stop_token& stop, SimDuration cycle);
    // The following expect m_ to be held.
    void set_phase(JobPhase phase);
    void publish_snapshot();
    void broadcast(const TelemetryEvent& event);
    void finalize();
    std::unique_lock<std::mutex> lock_for_command() const;
    void require_idle() const;

    ServiceOptions options_;
    mutable std::mutex m_;
    mutable std::condition_variable_any cv_;
    mutable std::atomic<int> waiting_{0};

    std::optional<BinScreen> screen_;
    std::optional<JobSpec> job_;
    std::optional<SortEngine> engine_;
    std::string job_id_;
    std::uint64_t job_counter_ = 0;
    JobPhase phase_ = JobPhase::Empty;
    std::optional<LiveMeasurement> live_;
    std::string diagnostic_;
    std::uint64_t version_ = 0;
    std::uint64_t speed_epoch_ = 0;
    mutable std::mutex snap_m_;
    std::shared_ptr<const JobState> snapshot_;

    std::mutex subs_m_;
    std::vector<std::shared_ptr<TelemetrySubscription>> subs_;

    std::jthread thread_;
};

nlohmann::ordered_json to_json(const JobState& state);
nlohmann::ordered_json to_json(const TelemetryEvent& event);

}  // namespace ledsel
