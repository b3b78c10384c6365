// Operator service: HTTP/JSON control plane over one simulated sorting line.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "ledsel/config.hpp"
#include "ledsel/http_api.hpp"
#include "ledsel/service.hpp"

#include <httplib.h>

using namespace ledsel;

int main(int argc, char** argv)
{
    CLI::App app{"LED sorting line operator service"};
    std::string listen;
    std::string report_dir;
    std::string screen_file;
    std::string base_dir = ".";
    std::size_t telemetry_capacity = 4096;
    app.add_option("--listen", listen, fmt::format("host:port (default ${} or {})", kListenEnv, kDefaultListen));
    app.add_option("--report-dir", report_dir, "write each finished job's report under this directory");
    app.add_option("--screen", screen_file, "screen for jobs that do not name one");
    app.add_option("--base-dir", base_dir, "directory for relative references in uploaded jobs")
        ->capture_default_str();
    app.add_option("--telemetry-capacity", telemetry_capacity, "events buffered per subscriber")
        ->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    if (listen.empty()) {
        const char* env = std::getenv(kListenEnv);
        listen = env != nullptr && *env != '\0' ? env : std::string(kDefaultListen);
    }

    // Block termination signals before any thread starts so only sigwait sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    try {
        const auto addr = parse_listen_address(listen);
        ServiceOptions opt;
        opt.telemetry_capacity = telemetry_capacity;
        if (!report_dir.empty()) {
            opt.report_dir = report_dir;
        }
        if (!screen_file.empty()) {
            opt.screen = load_screen(screen_file);
        }
        OperatorService service(opt);
        httplib::Server server;
        mount_http_api(server, service, base_dir);
        if (!server.bind_to_port(addr.host, addr.port)) {
            fmt::print(std::cerr, "error: cannot listen on {}\n", listen);
            return 1;
        }
        fmt::print("listening on {}:{}\n", addr.host, addr.port);
        std::cout.flush();
        std::thread http([&] { server.listen_after_bind(); });

        int sig = 0;
        sigwait(&signals, &sig);
        fmt::print("signal {}, shutting down\n", sig);
        server.stop();
        http.join();
    } catch (const ConfigError& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
