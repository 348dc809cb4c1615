#include "http_server.hpp"
#include "reproduce.hpp"

#include "dcm/error.hpp"
#include "dcm/gateway.hpp"
#include "dcm/io.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#ifndef DCM_CASE_DATA_DIR
#define DCM_CASE_DATA_DIR "data/case_study"
#endif

namespace {

using namespace dcm;

std::optional<Exact> exact_flag(const std::string& text, const char* name) {
    if (text.empty()) return std::nullopt;
    try {
        return parse_exact(text);
    } catch (const ParseError& e) {
        throw CLI::ValidationError(name, e.what());
    }
}

// "35:45:1" or a single value or "a,b,c"
std::vector<Exact> axis_flag(const std::string& text, const char* name) {
    try {
        if (auto c1 = text.find(':'); c1 != std::string::npos) {
            auto c2 = text.find(':', c1 + 1);
            if (c2 == std::string::npos) throw CLI::ValidationError(name, "expected first:last:step");
            return ScenarioGrid::range(parse_exact(text.substr(0, c1)), parse_exact(text.substr(c1 + 1, c2 - c1 - 1)),
                                       parse_exact(text.substr(c2 + 1)));
        }
        std::vector<Exact> out;
        std::size_t i = 0;
        while (i <= text.size()) {
            auto j = text.find(',', i);
            if (j == std::string::npos) j = text.size();
            out.push_back(parse_exact(text.substr(i, j - i)));
            i = j + 1;
        }
        return out;
    } catch (const Error& e) {
        throw CLI::ValidationError(name, e.what());
    }
}

SessionDocument load_session_file(const std::string& path) {
    try {
        return io::load_session(io::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::optional<ReferenceLists> load_lists(const std::string& path) {
    if (path.empty()) return std::nullopt;
    try {
        return io::parse_reference_lists(io::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void print_counts(const std::array<std::size_t, 3>& c) {
    std::cout << "C1 " << c[0] << "\nC2 " << c[1] << "\nC3 " << c[2] << "\n";
}

dcm::http::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deck of Cards ship risk classification"};
    app.require_subcommand(1);

    // reproduce-paper
    auto* rep = app.add_subcommand("reproduce-paper", "Run the bundled Lisbon case study and compare every figure");
    std::string rep_dir = DCM_CASE_DATA_DIR, rep_lambda, rep_z;
    rep->add_option("--fixtures", rep_dir, "Fixture directory")->check(CLI::ExistingDirectory);
    rep->add_option("--lambda23", rep_lambda, "C2/C3 cutoff");
    rep->add_option("--z", rep_z, "Weight ratio z");

    // classify
    auto* cls = app.add_subcommand("classify", "Classify a fleet");
    std::string fleet_path, session_path, lists_path, out_prefix, lambda23, lambda12, zflag;
    bool lenient = false;
    cls->add_option("--fleet", fleet_path, "Fleet CSV (raw or performance)")->required();
    cls->add_option("--session", session_path, "Session JSON")->required();
    cls->add_option("--lists", lists_path, "Reference lists JSON (raw fleets)");
    cls->add_option("--lambda23", lambda23, "Override the C2/C3 cutoff");
    cls->add_option("--lambda12", lambda12, "Enable the hybrid C1/C2 cutoff");
    cls->add_option("--z", zflag, "Override z");
    cls->add_flag("--lenient", lenient, "Unknown company/RO maps to the worst level");
    cls->add_option("--out", out_prefix, "Write <out>.csv and <out>.json");

    // sweep
    auto* swp = app.add_subcommand("sweep", "Robustness sweep over lambda_23 and z");
    std::string sw_fleet, sw_session, sw_lists, sw_lambda = "35:45:1", sw_z = "13/4:21/4:1/2", sw_baseline, sw_ship,
                                                sw_out;
    bool sw_lenient = false;
    swp->add_option("--fleet", sw_fleet, "Fleet CSV")->required();
    swp->add_option("--session", sw_session, "Session JSON")->required();
    swp->add_option("--lists", sw_lists, "Reference lists JSON");
    swp->add_option("--lambda", sw_lambda, "first:last:step or comma list")->capture_default_str();
    swp->add_option("--z", sw_z, "first:last:step or comma list")->capture_default_str();
    swp->add_option("--baseline", sw_baseline, "CSV ship,category");
    swp->add_option("--ship", sw_ship, "Also export one ship's matrix");
    swp->add_flag("--lenient", sw_lenient, "Unknown company/RO maps to the worst level");
    swp->add_option("--out", sw_out, "Write <out>-counts.csv/json and <out>-<ship>.csv/json");

    // session validate|show
    auto* ses = app.add_subcommand("session", "Inspect a session file");
    ses->require_subcommand(1);
    std::string ses_path;
    auto* ses_validate = ses->add_subcommand("validate", "Check every judgment for consistency");
    ses_validate->add_option("file", ses_path, "Session JSON")->required();
    auto* ses_show = ses->add_subcommand("show", "Print value functions and weights");
    ses_show->add_option("file", ses_path, "Session JSON")->required();

    // serve
    auto* srv = app.add_subcommand("serve", "HTTP session service");
    std::string config_path, bind_flag, data_dir_flag;
    int port_flag = -1;
    srv->add_option("--config", config_path, "JSON with bind, port, data_dir")->check(CLI::ExistingFile);
    srv->add_option("--bind", bind_flag, "Bind address");
    srv->add_option("--port", port_flag, "Port");
    srv->add_option("--data-dir", data_dir_flag, "Directory for saved sessions");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*rep) {
            tools::ReproduceOptions opts{rep_dir, exact_flag(rep_lambda, "--lambda23"), exact_flag(rep_z, "--z")};
            return tools::reproduce(opts, std::cout);
        }

        if (*cls) {
            // everything is computed before anything is written
            SessionDocument doc = load_session_file(session_path);
            auto lists = load_lists(lists_path);
            io::Fleet fleet = io::read_fleet_file(fleet_path, doc.framework);
            gateway::Overrides ov{exact_flag(lambda23, "--lambda23"), exact_flag(lambda12, "--lambda12"),
                                  exact_flag(zflag, "--z"), lenient};
            auto outcome = gateway::classify_fleet(doc, fleet, lists ? &*lists : nullptr, ov);
            for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
            for (const auto& e : outcome.batch.errors) std::cerr << "error: ship " << e.ship_id << ": " << e.message << "\n";
            if (out_prefix.empty()) {
                std::cout << outcome.exported.table;
            } else {
                io::write_file(out_prefix + ".csv", outcome.exported.table);
                io::write_file(out_prefix + ".json", outcome.exported.exact);
            }
            print_counts(outcome.batch.counts);
            return outcome.batch.errors.empty() ? 0 : 3;
        }

        if (*swp) {
            SessionDocument doc = load_session_file(sw_session);
            auto lists = load_lists(sw_lists);
            io::Fleet fleet = io::read_fleet_file(sw_fleet, doc.framework);
            ScenarioGrid grid{axis_flag(sw_lambda, "--lambda"), axis_flag(sw_z, "--z")};
            std::optional<std::map<std::string, Category>> baseline;
            if (!sw_baseline.empty()) baseline = io::parse_baseline(io::read_file(sw_baseline));
            std::optional<std::string> ship;
            if (!sw_ship.empty()) ship = sw_ship;
            auto outcome = gateway::sweep_fleet(doc, fleet, lists ? &*lists : nullptr, grid,
                                                baseline ? &*baseline : nullptr, ship, sw_lenient);
            if (sw_out.empty()) {
                std::cout << outcome.counts.table;
                if (outcome.ship) std::cout << "\n" << outcome.ship->table;
            } else {
                io::write_file(sw_out + "-counts.csv", outcome.counts.table);
                io::write_file(sw_out + "-counts.json", outcome.counts.exact);
                if (outcome.ship) {
                    io::write_file(sw_out + "-" + *ship + ".csv", outcome.ship->table);
                    io::write_file(sw_out + "-" + *ship + ".json", outcome.ship->exact);
                }
            }
            return 0;
        }

        if (*ses) {
            SessionDocument doc = load_session_file(ses_path);
            if (*ses_validate) {
                auto report = validate_session(doc);
                for (const auto& e : report.violations) {
                    const auto& v = e.violation;
                    std::cout << e.scope << ": "
                              << (v.kind == ConsistencyViolation::Kind::transitivity ? "transitivity" : "row order")
                              << " (" << v.p_id << ", " << v.k_id << ", " << v.q_id << ") has " << v.actual
                              << " cards, expected " << v.expected << "\n";
                }
                for (const auto& e : report.errors) std::cout << "error: " << e << "\n";
                std::cout << (report.ok() ? "OK" : "INVALID") << "\n";
                return report.ok() ? 0 : 1;
            }
            auto d = derive(doc);
            for (const auto& vf : d.value_functions) {
                std::cout << vf.criterion_id() << " alpha=" << to_ratio_string(vf.alpha()) << ":";
                for (const auto& p : vf.points()) std::cout << " " << p.level_id << "=" << format_fixed(p.value);
                std::cout << "\n";
            }
            std::cout << "z=" << to_ratio_string(d.weights.z) << " alpha_w=" << to_ratio_string(d.weights.alpha_w)
                      << "\n";
            for (const auto& w : d.weights.weights) {
                std::cout << "k_" << w.criterion_id << " raw=" << to_ratio_string(w.raw)
                          << " normalized=" << format_fixed(w.normalized) << "\n";
            }
            return 0;
        }

        if (*srv) {
            std::optional<std::filesystem::path> cfg_file;
            if (!config_path.empty()) cfg_file = config_path;
            auto cfg = gateway::load_config(cfg_file);
            if (!bind_flag.empty()) cfg.bind = bind_flag;
            if (port_flag >= 0) cfg.port = port_flag;
            if (!data_dir_flag.empty()) cfg.data_dir = data_dir_flag;
            gateway::SessionService service(cfg.data_dir);
            http::Server server(service);
            int port = server.bind(cfg.bind, cfg.port);
            if (port < 0) {
                std::cerr << "error: cannot bind " << cfg.bind << ":" << cfg.port << "\n";
                return 1;
            }
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "listening on " << cfg.bind << ":" << port << "\n" << std::flush;
            server.listen();
            return 0;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const dcm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
