#include "http_server.hpp"

#include <httplib.h>

namespace dcm::http {

void install_routes(httplib::Server& server, gateway::SessionService& service) {
    auto forward = [&service](const char* method) {
        return [&service, method](const httplib::Request& req, httplib::Response& res) {
            auto out = service.handle(method, req.path, req.body);
            res.status = out.status;
            res.set_content(out.body, "application/json");
        };
    };
    const char* pattern = R"(/(health|sessions)(/.*)?)";
    server.Get(pattern, forward("GET"));
    server.Post(pattern, forward("POST"));
    server.Put(pattern, forward("PUT"));
    server.Delete(pattern, forward("DELETE"));
}

Server::Server(gateway::SessionService& service) : server_(std::make_unique<httplib::Server>()) {
    install_routes(*server_, service);
}

Server::~Server() = default;

int Server::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

void Server::listen() {
    server_->listen_after_bind();
}

void Server::stop() {
    server_->stop();
}

}  // namespace dcm::http
