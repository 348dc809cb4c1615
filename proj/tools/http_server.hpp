#pragma once

#include "dcm/gateway.hpp"

#include <functional>
#include <memory>

namespace httplib {
class Server;
}

namespace dcm::http {

// Routes every request under /sessions and /health to the service.
void install_routes(httplib::Server& server, gateway::SessionService& service);

// Blocks until stop() is called from another thread or the process ends.
class Server {
public:
    explicit Server(gateway::SessionService& service);
    ~Server();

    // Port 0 picks a free port; returns the bound port or -1.
    int bind(const std::string& host, int port);
    void listen();
    void stop();

private:
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace dcm::http
