#include "ledsel/http_api.hpp"

#include <fmt/format.h>

#include <charconv>
#include <sstream>

#include "ledsel/report.hpp"
#include "ledsel/service.hpp"

// after Eigen: <resolv.h> defines a `_res` macro that clashes with Eigen
#include <httplib.h>

namespace ledsel {

using json = nlohmann::ordered_json;

ListenAddress parse_listen_address(std::string_view text)
{
    ListenAddress a;
    std::string_view port = text;
    if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
        a.host = std::string(text.substr(0, colon));
        port = text.substr(colon + 1);
    }
    if (a.host.empty()) {
        a.host = "0.0.0.0";
    }
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), a.port);
    if (ec != std::errc() || ptr != port.data() + port.size() || a.port < 0 || a.port > 65535) {
        throw ConfigError(fmt::format("bad listen address '{}' (expected host:port)", text));
    }
    return a;
}

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump() + "\n", kJson);
}

json error_body(std::string_view kind, const std::string& message)
{
    return json{{"error", kind}, {"message", message}};
}

// Maps library exceptions onto status codes; every handler goes through here.
template <typename F>
httplib::Server::Handler guarded(F&& f)
{
    return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Busy& e) {
            reply(res, 409, error_body("busy", e.what()));
        } catch (const IllegalTransition& e) {
            reply(res, 409, error_body("illegal_transition", e.what()));
        } catch (const ValidationError& e) {
            auto body = error_body("validation", e.what());
            body["diagnostics"] = e.diagnostics();
            reply(res, 422, body);
        } catch (const ConfigError& e) {
            auto body = error_body("config", e.what());
            body["where"] = e.where();
            reply(res, 400, body);
        } catch (const json::exception& e) {
            reply(res, 400, error_body("bad_request", e.what()));
        } catch (const Error& e) {
            reply(res, 400, error_body("error", e.what()));
        } catch (const std::invalid_argument& e) {
            reply(res, 400, error_body("bad_request", e.what()));
        } catch (const std::out_of_range& e) {
            reply(res, 400, error_body("bad_request", e.what()));
        }
    };
}

bool terminal(JobPhase p) { return p == JobPhase::Finished || p == JobPhase::Faulted; }

json job_json(const JobSpec& job, const JobState& s)
{
    json j;
    j["job_id"] = s.job_id;
    j["name"] = job.name;
    j["mode"] = std::string(to_string(job.config.mode));
    j["seed"] = job.seed;
    j["speed"] = job.speed;
    j["total"] = s.total;
    j["lot"] = {{"name", job.lot.name},
                {"count", job.lot.count},
                {"seed", job.lot.seed},
                {"model",
                 {{"peak_wavelength", job.lot.model.peak_wavelength},
                  {"fwhm", job.lot.model.fwhm},
                  {"peak_power", job.lot.model.peak_power}}}};
    j["screen"] = job.config.screen.name;
    return j;
}

ControlCommand parse_command(const std::string& body)
{
    const auto first = body.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        throw ConfigError("empty control body");
    }
    const std::string text = body.substr(first, body.find_last_not_of(" \t\r\n") - first + 1);
    if (text.front() != '{') {
        return control_from_string(text);
    }
    const auto j = json::parse(text);
    if (!j.contains("command") || !j["command"].is_string()) {
        throw ConfigError("control body needs a string field 'command'");
    }
    return control_from_string(j["command"].get<std::string>());
}

}  // namespace

void mount_http_api(httplib::Server& server, OperatorService& service, std::filesystem::path base_dir)
{
    OperatorService* svc = &service;

    server.Get("/v1/health", guarded([](const httplib::Request&, httplib::Response& res) {
                   reply(res, 200, json{{"ok", true}, {"protocol", kProtocolVersion}});
               }));

    server.Post("/v1/jobs", guarded([svc, base_dir](const httplib::Request& req, httplib::Response& res) {
                    const auto id = svc->load_job(req.body, base_dir);
                    reply(res, 201, json{{"job_id", id}, {"state", to_json(*svc->state())}});
                }));

    server.Get("/v1/jobs/current", guarded([svc](const httplib::Request&, httplib::Response& res) {
                   const auto job = svc->job();
                   if (!job) {
                       reply(res, 404, error_body("not_found", "no job loaded"));
                       return;
                   }
                   reply(res, 200, job_json(*job, *svc->state()));
               }));

    server.Delete("/v1/jobs/current", guarded([svc](const httplib::Request&, httplib::Response& res) {
                      svc->unload_job();
                      reply(res, 200, to_json(*svc->state()));
                  }));

    server.Get("/v1/state", guarded([svc](const httplib::Request&, httplib::Response& res) {
                   reply(res, 200, to_json(*svc->state()));
               }));

    server.Post("/v1/control", guarded([svc](const httplib::Request& req, httplib::Response& res) {
                    reply(res, 200, to_json(svc->control(parse_command(req.body))));
                }));

    server.Put("/v1/speed", guarded([svc](const httplib::Request& req, httplib::Response& res) {
                   const auto j = json::parse(req.body);
                   const double speed = j.is_object() ? j.at("speed").get<double>() : j.get<double>();
                   reply(res, 200, to_json(svc->set_speed(speed)));
               }));

    server.Get("/v1/screen", guarded([svc](const httplib::Request&, httplib::Response& res) {
                   const auto screen = svc->screen();
                   if (!screen) {
                       reply(res, 404, error_body("not_found", "no screen configured"));
                       return;
                   }
                   reply(res, 200, screen_json(*screen));
               }));

    server.Put("/v1/screen", guarded([svc](const httplib::Request& req, httplib::Response& res) {
                   svc->update_screen(std::string_view(req.body));
                   reply(res, 200, json{{"accepted", true}, {"diagnostics", json::array()}});
               }));

    server.Get("/v1/report/summary", guarded([svc](const httplib::Request&, httplib::Response& res) {
                   const auto report = svc->report();
                   if (!report) {
                       reply(res, 404, error_body("not_found", "no job loaded"));
                       return;
                   }
                   reply(res, 200, summary_json(*report));
               }));

    server.Get("/v1/report/leds.csv", guarded([svc](const httplib::Request&, httplib::Response& res) {
                   const auto report = svc->report();
                   if (!report) {
                       reply(res, 404, error_body("not_found", "no job loaded"));
                       return;
                   }
                   std::ostringstream out;
                   write_records_csv(out, *report);
                   res.set_content(out.str(), "text/csv");
               }));

    server.Get("/v1/plot", guarded([svc](const httplib::Request&, httplib::Response& res) {
                   reply(res, 200, to_json(svc->plot()));
               }));

    // Newline-delimited JSON, one event per line. `until=finished` closes the
    // stream after the current job reaches Finished or Faulted.
    server.Get("/v1/telemetry", guarded([svc](const httplib::Request& req, httplib::Response& res) {
                   const bool until_finished = req.get_param_value("until") == "finished";
                   std::size_t capacity = 0;
                   if (req.has_param("capacity")) {
                       capacity = static_cast<std::size_t>(std::stoul(req.get_param_value("capacity")));
                   }
                   auto sub = svc->subscribe(capacity);
                   const bool already_done = until_finished && terminal(svc->state()->phase);
                   res.set_chunked_content_provider(
                       "application/x-ndjson",
                       [sub, until_finished, already_done](std::size_t, httplib::DataSink& sink) {
                           const auto ev = sub->next(std::chrono::milliseconds(already_done ? 0 : 200));
                           if (ev) {
                               const auto line = to_json(*ev).dump() + "\n";
                               if (!sink.write(line.data(), line.size())) {
                                   return false;
                               }
                               const auto* phase = std::get_if<JobPhaseChanged>(&*ev);
                               if (until_finished && phase != nullptr && terminal(phase->to)) {
                                   sink.done();
                               }
                               return true;
                           }
                           if (already_done || sub->closed()) {
                               sink.done();
                               return true;
                           }
                           return sink.is_writable();
                       },
                       [svc, sub](bool) { svc->unsubscribe(sub); });
               }));
}

}  // namespace ledsel
