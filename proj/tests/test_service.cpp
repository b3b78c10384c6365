#include <doctest.h>

#include <atomic>
#include <fmt/format.h>
#include <numeric>
#include <sstream>
#include <fstream>
#include <random>
#include <thread>

#include "ledsel/http_api.hpp"
#include "ledsel/ledsel.hpp"
#include "ledsel/service.hpp"

#include <httplib.h>

using namespace ledsel;
using namespace std::chrono_literals;

namespace {

constexpr const char* kGrid = "{grid: {origin: [0.15, 0.745], cell: [0.01, 0.01], count: [5, 5]}}";

std::string job_doc(std::size_t count, double speed = 0.0, const char* mode = "automated", bool with_screen = true)
{
    std::string doc = fmt::format(
        "name: t\nmode: {}\nseed: 3\nspeed: {}\n"
        "lot: {{count: {}, seed: 4, model: {{peak_wavelength: 530, fwhm: 30, peak_power: 1,"
        " variation: {{peak_wavelength: 1, fwhm: 1, peak_power: 0.05}}}}}}\n",
        mode, speed, count);
    if (with_screen) {
        doc += fmt::format("screen: {}\n", kGrid);
    }
    return doc;
}

std::vector<TelemetryEvent> drain(TelemetrySubscription& sub, std::chrono::milliseconds wait = 50ms)
{
    std::vector<TelemetryEvent> out;
    while (auto ev = sub.next(wait)) {
        out.push_back(std::move(*ev));
    }
    return out;
}

std::vector<JobPhase> phases(const std::vector<TelemetryEvent>& evs)
{
    std::vector<JobPhase> out;
    for (const auto& e : evs) {
        if (const auto* p = std::get_if<JobPhaseChanged>(&e)) {
            out.push_back(p->to);
        }
    }
    return out;
}

std::vector<std::uint64_t> seqs(const std::vector<TelemetryEvent>& evs)
{
    std::vector<std::uint64_t> out;
    for (const auto& e : evs) {
        if (const auto* m = std::get_if<MeasurementEvent>(&e)) {
            out.push_back(m->m.seq);
        }
    }
    return out;
}

void check_consistent(const JobState& s)
{
    CHECK(s.processed <= s.total);
    CHECK(s.counter_total() + s.overflows == s.processed);
    if (s.live) {
        CHECK(s.live->seq == s.processed);
    } else {
        CHECK(s.processed == 0);
    }
}

}  // namespace

TEST_CASE("control transition table")
{
    using P = JobPhase;
    using C = ControlCommand;
    CHECK(control_target(P::Loaded, C::Start) == P::Running);
    CHECK(control_target(P::Running, C::Pause) == P::Paused);
    CHECK(control_target(P::Paused, C::Resume) == P::Running);
    CHECK(control_target(P::Running, C::Stop) == P::Finished);
    CHECK(control_target(P::Paused, C::Stop) == P::Finished);
    CHECK_FALSE(control_target(P::Finished, C::Resume));
    CHECK_FALSE(control_target(P::Empty, C::Start));
    CHECK_FALSE(control_target(P::Faulted, C::Start));
    CHECK_FALSE(control_target(P::Loaded, C::Pause));
    CHECK(control_from_string("pause") == C::Pause);
    CHECK_THROWS_AS(control_from_string("rewind"), ConfigError);
}

TEST_CASE("telemetry queue drops oldest and marks the gap")
{
    TelemetrySubscription sub(3);
    for (std::uint64_t i = 1; i <= 10; ++i) {
        sub.push(MeasurementEvent{"j", LiveMeasurement{i}});
    }
    const auto evs = drain(sub, 0ms);
    REQUIRE(evs.size() == 4);
    REQUIRE(std::holds_alternative<TelemetryGap>(evs[0]));
    CHECK(std::get<TelemetryGap>(evs[0]).dropped == 7);
    CHECK(seqs(evs) == std::vector<std::uint64_t>{8, 9, 10});
    sub.close();
    CHECK(sub.closed());
    sub.push(MeasurementEvent{"j", LiveMeasurement{11}});
    CHECK_FALSE(sub.next(0ms));
}

TEST_CASE("job lifecycle at maximum speed")
{
    OperatorService svc;
    auto sub = svc.subscribe();
    CHECK(svc.state()->phase == JobPhase::Empty);
    CHECK_FALSE(sub->next(20ms));  // no job: nothing but phase events, and none yet

    const auto id = svc.load_job(job_doc(200));
    auto s = svc.state();
    CHECK(s->job_id == id);
    CHECK(s->phase == JobPhase::Loaded);
    CHECK(s->processed == 0);
    CHECK(s->total == 200);
    CHECK_THROWS_AS(svc.control(ControlCommand::Resume), IllegalTransition);

    svc.control(ControlCommand::Start);
    s = svc.wait_until_settled(10s);
    CHECK(s->phase == JobPhase::Finished);
    CHECK(s->processed == 200);
    CHECK(s->counter_total() + s->overflows == 200);
    check_consistent(*s);

    const auto evs = drain(*sub);
    std::vector<std::uint64_t> expect(200);
    std::iota(expect.begin(), expect.end(), 1);
    CHECK(seqs(evs) == expect);
    CHECK(phases(evs) == std::vector<JobPhase>{JobPhase::Loaded, JobPhase::Running, JobPhase::Finished});

    try {
        svc.control(ControlCommand::Resume);
        FAIL("expected IllegalTransition");
    } catch (const IllegalTransition& e) {
        CHECK(std::string(e.what()).find("Finished") != std::string::npos);
    }

    const auto report = svc.report();
    REQUIRE(report);
    CHECK(report->complete);
    CHECK(report->compartment_total() + report->rejects + report->overflows == 200);

    // same job document reproduces the same report
    OperatorService again;
    again.load_job(job_doc(200));
    again.control(ControlCommand::Start);
    again.wait_until_settled(10s);
    std::ostringstream a;
    std::ostringstream b;
    write_records_csv(a, *report);
    write_records_csv(b, *again.report());
    CHECK(a.str() == b.str());
}

TEST_CASE("pause, resume and stop")
{
    const auto dir = std::filesystem::temp_directory_path() / "ledsel_test_service";
    std::filesystem::remove_all(dir);
    ServiceOptions opt;
    opt.report_dir = dir;
    OperatorService svc(opt);
    // 9 s cycles at 900x: one LED every 10 ms
    const auto id = svc.load_job(job_doc(1000, 900.0));
    svc.control(ControlCommand::Start);
    std::this_thread::sleep_for(60ms);

    CHECK_THROWS_AS(svc.load_job(job_doc(5)), Busy);
    CHECK_THROWS_AS(svc.update_screen(std::string_view("bins: []")), Busy);
    CHECK_THROWS_AS(svc.unload_job(), Busy);

    const auto paused = svc.control(ControlCommand::Pause);
    CHECK(paused.phase == JobPhase::Paused);
    check_consistent(paused);
    std::this_thread::sleep_for(60ms);
    const auto later = svc.state();
    CHECK(later->processed == paused.processed);
    CHECK(later->counters.size() == paused.counters.size());
    for (std::size_t i = 0; i < paused.counters.size(); ++i) {
        CHECK(later->counters[i].count == paused.counters[i].count);
    }

    svc.control(ControlCommand::Resume);
    std::this_thread::sleep_for(40ms);
    CHECK(svc.state()->processed > paused.processed);

    const auto stopped = svc.control(ControlCommand::Stop);
    CHECK(stopped.phase == JobPhase::Finished);
    CHECK(stopped.processed < 1000);
    const auto report = svc.report();
    CHECK_FALSE(report->complete);
    CHECK(report->processed() == stopped.processed);
    CHECK(std::filesystem::exists(dir / id / "leds.csv"));
    CHECK(std::filesystem::exists(dir / id / "summary.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("speed changes take effect mid-job")
{
    OperatorService svc;
    CHECK_THROWS_AS(svc.set_speed(10.0), IllegalTransition);
    // one LED every 9 s of wall time: nothing would finish within the test
    svc.load_job(job_doc(50, 1.0));
    svc.control(ControlCommand::Start);
    std::this_thread::sleep_for(50ms);
    CHECK(svc.state()->processed == 1);
    CHECK_THROWS_AS(svc.set_speed(-1.0), ConfigError);
    CHECK(svc.set_speed(0.0).speed == 0.0);
    const auto s = svc.wait_until_settled(5s);
    CHECK(s->phase == JobPhase::Finished);
    CHECK(s->processed == 50);
}

TEST_CASE("screens between jobs")
{
    OperatorService svc;
    CHECK_FALSE(svc.screen());
    svc.load_job(job_doc(10));
    CHECK(svc.screen()->bins.size() == 25);

    const char* overlapping = R"(bins:
  - {id: A, vertices: [[0.30, 0.30], [0.32, 0.30], [0.32, 0.32], [0.30, 0.32]]}
  - {id: B, vertices: [[0.31, 0.31], [0.33, 0.31], [0.33, 0.33], [0.31, 0.33]]}
)";
    try {
        svc.update_screen(std::string_view(overlapping));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        REQUIRE(e.diagnostics().size() == 1);
        CHECK(e.diagnostics()[0].find("overlap") != std::string::npos);
    }

    CHECK(svc.state()->phase == JobPhase::Loaded);
    svc.update_screen(std::string_view("grid: {origin: [0.16, 0.75], cell: [0.02, 0.02], count: [2, 2]}\n"));
    CHECK(svc.screen()->bins.size() == 4);

    // a job without its own screen picks up the service screen
    svc.load_job(job_doc(10, 0.0, "manual", false));
    CHECK(svc.job()->config.screen.bins.size() == 4);
    CHECK(svc.job()->config.mode == Mode::Manual);

    CHECK_THROWS_AS(svc.load_job(std::string("mode: automated\nlot: {count: 1}\n") + "screen: " + kGrid + "\n"),
                    ConfigError);
    CHECK_THROWS_AS(svc.load_job(job_doc(10, 0.0, "automated", false) + "screen: {bins: " +
                                 "[{id: REJECT, vertices: [[0.3, 0.3], [0.31, 0.3], [0.31, 0.31]]}]}\n"),
                    ValidationError);
    svc.unload_job();
    CHECK(svc.state()->phase == JobPhase::Empty);
    CHECK_FALSE(svc.report());
}

TEST_CASE("slow consumers see a gap marker, fast ones see everything")
{
    OperatorService svc;
    auto slow = svc.subscribe(16);
    auto fast = svc.subscribe(1 << 16);
    svc.load_job(job_doc(500));
    svc.control(ControlCommand::Start);
    CHECK(svc.wait_until_settled(10s)->phase == JobPhase::Finished);

    const auto f = drain(*fast);
    CHECK(seqs(f).size() == 500);

    const auto s = drain(*slow);
    REQUIRE(s.size() == 17);
    REQUIRE(std::holds_alternative<TelemetryGap>(s[0]));
    const auto kept = seqs(s);
    CHECK(std::is_sorted(kept.begin(), kept.end()));
    CHECK(std::get<TelemetryGap>(s[0]).dropped + s.size() - 1 == 500 + 3);
}

TEST_CASE("concurrent commands and readers see consistent snapshots")
{
    OperatorService svc;
    svc.load_job(job_doc(3000, 9000.0));  // about 1 ms per LED
    svc.control(ControlCommand::Start);

    std::atomic<bool> done{false};
    std::atomic<int> inconsistent{0};
    std::thread reader([&] {
        std::size_t last = 0;
        while (!done) {
            const auto s = svc.state();
            if (s->counter_total() + s->overflows != s->processed || (s->live && s->live->seq != s->processed) ||
                s->processed < last) {
                ++inconsistent;
            }
            last = s->processed;
        }
    });
    std::vector<std::thread> writers;
    std::atomic<int> accepted{0};
    for (int t = 0; t < 4; ++t) {
        writers.emplace_back([&, t] {
            std::mt19937 rng(static_cast<unsigned>(t));
            for (int i = 0; i < 50; ++i) {
                const auto cmd = rng() % 2 == 0 ? ControlCommand::Pause : ControlCommand::Resume;
                try {
                    svc.control(cmd);
                    ++accepted;
                } catch (const IllegalTransition&) {
                }
                std::this_thread::sleep_for(1ms);
            }
        });
    }
    for (auto& w : writers) {
        w.join();
    }
    const auto before_stop = svc.state()->phase;
    CHECK((before_stop == JobPhase::Running || before_stop == JobPhase::Paused || before_stop == JobPhase::Finished));
    if (before_stop != JobPhase::Finished) {
        svc.control(ControlCommand::Stop);
    }
    done = true;
    reader.join();
    CHECK(inconsistent == 0);
    CHECK(accepted > 0);
    const auto r = svc.report();
    CHECK(r->compartment_total() + r->rejects + r->overflows == r->processed());
}

TEST_CASE("report write failure faults the job")
{
    const auto blocker = std::filesystem::temp_directory_path() / "ledsel_test_blocker";
    std::filesystem::remove_all(blocker);
    std::ofstream(blocker) << "x";
    ServiceOptions opt;
    opt.report_dir = blocker / "reports";
    OperatorService svc(opt);
    svc.load_job(job_doc(5));
    svc.control(ControlCommand::Start);
    const auto s = svc.wait_until_settled(5s);
    CHECK(s->phase == JobPhase::Faulted);
    CHECK_FALSE(s->diagnostic.empty());
    CHECK_THROWS_AS(svc.control(ControlCommand::Start), IllegalTransition);
    svc.load_job(job_doc(5));
    CHECK(svc.state()->phase == JobPhase::Loaded);
    std::filesystem::remove(blocker);
}

TEST_CASE("listen address parsing")
{
    const auto a = parse_listen_address("127.0.0.1:8040");
    CHECK(a.host == "127.0.0.1");
    CHECK(a.port == 8040);
    CHECK(parse_listen_address(":9000").host == "0.0.0.0");
    CHECK(parse_listen_address("9000").port == 9000);
    CHECK_THROWS_AS(parse_listen_address("localhost:http"), ConfigError);
    CHECK_THROWS_AS(parse_listen_address("localhost:70000"), ConfigError);
}

TEST_CASE("HTTP protocol")
{
    OperatorService svc;
    httplib::Server server;
    mount_http_api(server, svc);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    httplib::Client cli("127.0.0.1", port);
    cli.set_read_timeout(10, 0);

    auto body = [](const httplib::Result& r) { return nlohmann::json::parse(r->body); };

    auto r = cli.Get("/v1/health");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(body(r)["protocol"] == "ledsel/1");

    r = cli.Get("/v1/state");
    CHECK(body(r)["phase"] == "Empty");
    CHECK(cli.Get("/v1/report/summary")->status == 404);
    CHECK(cli.Get("/v1/jobs/current")->status == 404);

    r = cli.Post("/v1/jobs", "mode: automated\nlot: {count: 1}\n", "application/yaml");
    CHECK(r->status == 400);
    CHECK(body(r)["error"] == "config");

    r = cli.Post("/v1/jobs", job_doc(50), "application/yaml");
    REQUIRE(r->status == 201);
    const auto id = body(r)["job_id"].get<std::string>();
    CHECK(body(r)["state"]["phase"] == "Loaded");
    CHECK(body(cli.Get("/v1/jobs/current"))["total"] == 50);

    r = cli.Post("/v1/control", R"({"command": "resume"})", "application/json");
    CHECK(r->status == 409);
    CHECK(body(r)["error"] == "illegal_transition");

    r = cli.Put("/v1/screen", "bins:\n  - {id: A, vertices: [[0.3, 0.3], [0.3, 0.32], [0.32, 0.32]]}\n", "application/yaml");
    CHECK(r->status == 422);
    CHECK(body(r)["diagnostics"].size() == 1);

    // open the stream before starting so every event is captured
    std::string stream;
    std::thread consumer([&] {
        httplib::Client c2("127.0.0.1", port);
        c2.set_read_timeout(10, 0);
        c2.Get("/v1/telemetry?until=finished", [&](const char* data, std::size_t len) {
            stream.append(data, len);
            return true;
        });
    });
    std::this_thread::sleep_for(100ms);
    r = cli.Post("/v1/control", "start", "text/plain");
    CHECK(r->status == 200);
    consumer.join();

    std::istringstream lines(stream);
    std::string line;
    std::uint64_t next_seq = 1;
    std::vector<std::string> phase_seen;
    while (std::getline(lines, line)) {
        const auto ev = nlohmann::json::parse(line);
        if (ev["type"] == "measurement") {
            CHECK(ev["seq"] == next_seq);
            CHECK(ev["job_id"] == id);
            ++next_seq;
        } else if (ev["type"] == "phase") {
            phase_seen.push_back(ev["to"].get<std::string>());
        }
    }
    CHECK(next_seq == 51);
    REQUIRE_FALSE(phase_seen.empty());
    CHECK(phase_seen.back() == "Finished");

    const auto state = body(cli.Get("/v1/state"));
    CHECK(state["phase"] == "Finished");
    CHECK(state["processed"] == 50);
    std::size_t total = 0;
    for (const auto& c : state["counters"]) {
        total += c["count"].get<std::size_t>();
    }
    CHECK(total + state["overflows"].get<std::size_t>() == 50);

    const auto summary = body(cli.Get("/v1/report/summary"));
    CHECK(summary["processed"] == 50);
    CHECK(summary["leds_per_hour"] == 400.0);

    r = cli.Get("/v1/report/leds.csv");
    CHECK(r->status == 200);
    CHECK(std::count(r->body.begin(), r->body.end(), '\n') == 51);

    const auto plot = body(cli.Get("/v1/plot"));
    CHECK(plot["locus"].size() == 81);
    CHECK(plot["ellipses"].size() == 25);
    CHECK(plot["bins"].size() == 25);

    // a finished job: `until=finished` returns at once
    r = cli.Get("/v1/telemetry?until=finished");
    CHECK(r->status == 200);
    CHECK(r->body.empty());

    r = cli.Put("/v1/screen", "grid: {origin: [0.16, 0.75], cell: [0.02, 0.02], count: [2, 2]}\n", "application/yaml");
    CHECK(r->status == 200);
    CHECK(body(cli.Get("/v1/screen"))["bins"].size() == 4);

    CHECK(body(cli.Put("/v1/speed", R"({"speed": 2.5})", "application/json"))["speed"] == 2.5);
    CHECK(cli.Put("/v1/speed", R"({"speed": -2})", "application/json")->status == 400);
    CHECK(cli.Put("/v1/speed", R"({"pace": 2})", "application/json")->status == 400);

    r = cli.Delete("/v1/jobs/current");
    CHECK(body(r)["phase"] == "Empty");

    server.stop();
    th.join();
}
