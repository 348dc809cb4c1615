#pragma once

#include "dcm/io.hpp"
#include "dcm/robustness.hpp"
#include "dcm/session.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace dcm::gateway {

// ---- Shared CLI/HTTP pipeline ------------------------------------------------

// Flag values that take precedence over the session's stored policy and z.
struct Overrides {
    std::optional<Exact> lambda_23;
    std::optional<Exact> lambda_12;
    std::optional<Exact> z;
    bool lenient = false;
};

struct ClassifyOutcome {
    BatchResult batch;
    std::vector<PerformanceRecord> records;
    std::vector<std::string> warnings;
    io::Export exported;
};

ClassifyOutcome classify_fleet(const SessionDocument& doc, const io::Fleet& fleet, const ReferenceLists* lists,
                               const Overrides& overrides);

struct SweepOutcome {
    SweepResult result;
    io::Export counts;
    std::optional<io::Export> ship;   // present when a ship was requested
};

SweepOutcome sweep_fleet(const SessionDocument& doc, const io::Fleet& fleet, const ReferenceLists* lists,
                         const ScenarioGrid& grid, const std::map<std::string, Category>* baseline,
                         const std::optional<std::string>& ship, bool lenient);

// Skeleton session: zero cards, references at the scale ends, one tied
// ranking group, z = 1.
SessionDocument blank_session();

// ---- Service configuration ---------------------------------------------------

struct ServiceConfig {
    std::string bind = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "sessions";
};

// JSON file with optional keys bind, port, data_dir; then DCM_BIND, DCM_PORT
// and DCM_DATA_DIR from the environment win.
ServiceConfig load_config(const std::optional<std::filesystem::path>& file);

// ---- Session service ---------------------------------------------------------

struct Response {
    int status = 200;
    std::string body;   // JSON
};

struct ApiSession {
    std::string id;
    SessionDocument document;
    std::optional<DerivedModel> derived;
    std::vector<std::string> derive_errors;
    std::uint64_t revision = 1;
    mutable std::shared_mutex mutex;
};

// Transport-free request handler; the HTTP adapter only forwards method,
// path and body. Every mutation carries the revision it was based on.
class SessionService {
public:
    explicit SessionService(std::filesystem::path data_dir = {});

    Response handle(std::string_view method, std::string_view path, std::string_view body);

    std::size_t session_count() const;

private:
    std::shared_ptr<ApiSession> find(const std::string& id) const;
    std::shared_ptr<ApiSession> add(SessionDocument doc);

    std::filesystem::path data_dir_;
    mutable std::shared_mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<ApiSession>> sessions_;
    std::uint64_t next_id_ = 1;
};

}  // namespace dcm::gateway
