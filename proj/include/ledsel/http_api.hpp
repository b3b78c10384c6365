#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace httplib {
class Server;
}

namespace ledsel {

class OperatorService;

inline constexpr std::string_view kProtocolVersion = "ledsel/1";
inline constexpr const char* kListenEnv = "LEDSEL_LISTEN";
inline constexpr std::string_view kDefaultListen = "127.0.0.1:8040";

struct ListenAddress {
    std::string host;
    int port = 0;
};

/// "host:port", ":port" (all interfaces) or "port". Throws ConfigError.
ListenAddress parse_listen_address(std::string_view text);

/// Registers the /v1 endpoints. Relative file references in uploaded job
/// documents resolve against `base_dir`. `service` must outlive `server`.
void mount_http_api(httplib::Server& server, OperatorService& service, std::filesystem::path base_dir = {});

}  // namespace ledsel
