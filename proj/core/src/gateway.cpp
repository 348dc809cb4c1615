#include "dcm/gateway.hpp"

#include "dcm/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>

namespace dcm::gateway {

using nlohmann::json;

// ---- Shared pipeline ---------------------------------------------------------

ClassifyOutcome classify_fleet(const SessionDocument& doc, const io::Fleet& fleet, const ReferenceLists* lists,
                               const Overrides& overrides) {
    ClassificationPolicy policy = doc.policy;
    io::ExportProvenance provenance;
    if (overrides.lambda_23) {
        policy.lambda_23 = *overrides.lambda_23;
        provenance.entries["override.lambda_23"] = to_ratio_string(*overrides.lambda_23);
    }
    if (overrides.lambda_12) {
        policy.lambda_12 = *overrides.lambda_12;
        provenance.entries["override.lambda_12"] = to_ratio_string(*overrides.lambda_12);
    }
    if (overrides.z) provenance.entries["override.z"] = to_ratio_string(*overrides.z);
    if (overrides.lenient) provenance.entries["override.lenient"] = "true";
    validate_policy(policy, doc.framework);

    const DerivedModel derived = overrides.z ? derive_with_z(doc, *overrides.z) : derive(doc);
    provenance.entries["z"] = to_ratio_string(derived.z.z);
    provenance.entries["lambda_23"] = to_ratio_string(policy.lambda_23);
    provenance.entries["lambda_12"] = policy.lambda_12 ? to_ratio_string(*policy.lambda_12) : "none";
    provenance.entries["session.author"] = doc.provenance.author;
    provenance.entries["session.modified"] = doc.provenance.modified;

    ClassifyOutcome out;
    auto resolved = io::resolve_fleet(fleet, lists, MappingOptions{overrides.lenient});
    out.records = std::move(resolved.records);
    out.warnings = std::move(resolved.warnings);
    out.batch = classify_batch(out.records, doc.framework, derived.model(), policy);
    out.exported = io::export_results(out.batch, out.records, doc.framework, provenance);
    return out;
}

SweepOutcome sweep_fleet(const SessionDocument& doc, const io::Fleet& fleet, const ReferenceLists* lists,
                         const ScenarioGrid& grid, const std::map<std::string, Category>* baseline,
                         const std::optional<std::string>& ship, bool lenient) {
    auto resolved = io::resolve_fleet(fleet, lists, MappingOptions{lenient});
    SweepOutcome out;
    out.result = sweep(resolved.records, doc, grid);
    if (ship) {
        std::optional<Category> base;
        if (baseline) {
            if (auto it = baseline->find(*ship); it != baseline->end()) base = it->second;
        }
        out.ship = io::export_sweep_ship(out.result, *ship, base);
    }
    // counts only compare against a baseline covering the whole fleet
    const std::map<std::string, Category>* full = nullptr;
    if (baseline && std::all_of(out.result.ship_ids.begin(), out.result.ship_ids.end(),
                                [&](const auto& id) { return baseline->contains(id); })) {
        full = baseline;
    }
    out.counts = io::export_sweep_counts(out.result, full);
    return out;
}

SessionDocument blank_session() {
    SessionDocument doc;
    doc.provenance = {"", "", "", "1.0.0"};
    doc.framework = ship_risk_framework();
    std::vector<std::string> group;
    for (const auto& c : doc.framework.criteria()) {
        if (c.kind != CriterionKind::valued) continue;
        CriterionJudgments j;
        j.criterion_id = c.id;
        j.adjacent_cards.assign(c.levels.size() - 1, 0);
        j.references = {c.levels.front().id, c.levels.back().id, Exact(0), Exact(100)};
        doc.judgments.push_back(std::move(j));
        if (c.continuous) {
            doc.swing_references.push_back({c.id, *c.levels.front().anchor, *c.levels.back().anchor});
        } else {
            doc.swing_references.push_back({c.id, c.levels.front().id, c.levels.back().id});
        }
        group.push_back(swing_id_for(c.id));
    }
    doc.ranking.groups = {group};
    doc.closeness.reference_action = group.front();
    doc.z_source.kind = ZSource::Kind::explicit_value;
    doc.z_source.value = 1;
    doc.policy = default_policy();
    return doc;
}

// ---- Configuration -----------------------------------------------------------

ServiceConfig load_config(const std::optional<std::filesystem::path>& file) {
    ServiceConfig cfg;
    if (file) {
        json j;
        try {
            j = json::parse(io::read_file(*file));
        } catch (const json::exception& e) {
            throw ParseError(file->string() + ": " + e.what());
        }
        if (!j.is_object()) throw ParseError(file->string() + ": configuration must be an object");
        try {
            if (j.contains("bind")) cfg.bind = j.at("bind").get<std::string>();
            if (j.contains("port")) cfg.port = j.at("port").get<int>();
            if (j.contains("data_dir")) cfg.data_dir = j.at("data_dir").get<std::string>();
        } catch (const json::exception& e) {
            throw ParseError(file->string() + ": " + e.what());
        }
    }
    if (const char* v = std::getenv("DCM_BIND")) cfg.bind = v;
    if (const char* v = std::getenv("DCM_PORT")) {
        try {
            cfg.port = std::stoi(v);
        } catch (const std::exception&) {
            throw ParseError(std::string("DCM_PORT is not a number: ") + v);
        }
    }
    if (const char* v = std::getenv("DCM_DATA_DIR")) cfg.data_dir = v;
    if (cfg.port < 0 || cfg.port > 65535) throw ValidationError("port out of range");
    return cfg;
}

// ---- Service -----------------------------------------------------------------

namespace {

struct HttpError {
    int status;
    json body;
};

[[noreturn]] void fail(int status, const std::string& message, json extra = json::object()) {
    extra["error"] = message;
    throw HttpError{status, std::move(extra)};
}

json num(const Exact& v) {
    return {{"exact", to_ratio_string(v)}, {"display", format_fixed(v, 2)}};
}

json parse_body(std::string_view body) {
    if (body.empty()) return json::object();
    try {
        json j = json::parse(body);
        if (!j.is_object()) fail(400, "request body must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        fail(400, std::string("malformed JSON: ") + e.what());
    }
}

Exact exact_arg(const json& v, const std::string& what) {
    try {
        if (v.is_string()) return parse_exact(v.get<std::string>());
        if (v.is_number_integer()) return Exact(v.get<std::int64_t>());
        if (v.is_number_float()) {
            // decimal literal text keeps the value exact
            return parse_exact(v.dump());
        }
    } catch (const ParseError& e) {
        fail(400, what + ": " + e.what());
    }
    fail(400, what + " must be a number or a ratio string");
}

std::uint64_t revision_arg(const json& j) {
    auto it = j.find("revision");
    if (it == j.end() || !it->is_number_unsigned()) fail(400, "mutation requires an integer 'revision'");
    return it->get<std::uint64_t>();
}

std::vector<CardJudgment> judgments_arg(const json& a, const std::string& what) {
    if (!a.is_array()) fail(400, what + " must be an array");
    std::vector<CardJudgment> out;
    for (const auto& j : a) {
        if (!j.is_object() || !j.contains("from") || !j.contains("to") || !j.contains("cards") ||
            !j["cards"].is_number_integer()) {
            fail(400, what + " entries need from, to and integer cards");
        }
        out.push_back({j["from"].get<std::string>(), j["to"].get<std::string>(), j["cards"].get<std::int64_t>()});
    }
    return out;
}

json violation_json(const std::string& scope, const ConsistencyViolation& v) {
    return {{"scope", scope},
            {"kind", v.kind == ConsistencyViolation::Kind::transitivity ? "transitivity" : "row_order"},
            {"p", v.p_id},
            {"k", v.k_id},
            {"q", v.q_id},
            {"actual", v.actual},
            {"expected", v.expected}};
}

json document_json(const SessionDocument& doc) {
    return json::parse(io::save_session(doc));
}

json value_functions_json(const DerivedModel& d) {
    json out = json::array();
    for (const auto& vf : d.value_functions) {
        json points = json::array();
        for (const auto& p : vf.points()) {
            json pj{{"level", p.level_id}, {"value", num(p.value)}};
            pj["anchor"] = p.anchor ? json(to_ratio_string(*p.anchor)) : json(nullptr);
            points.push_back(pj);
        }
        out.push_back({{"criterion", vf.criterion_id()},
                       {"kind", std::string(to_string(vf.kind()))},
                       {"direction", std::string(to_string(vf.direction()))},
                       {"alpha", num(vf.alpha())},
                       {"points", points}});
    }
    return out;
}

json tables_json(const DerivedModel& d) {
    json out = json::array();
    for (const auto& t : d.tables) {
        json levels = json::array();
        for (const auto& l : t.levels()) levels.push_back(l.id);
        json matrix = json::array();
        for (std::size_t p = 0; p < t.size(); ++p) {
            json r = json::array();
            for (std::size_t q = 0; q < t.size(); ++q) r.push_back(p < q ? json(t.cards(p, q)) : json(nullptr));
            matrix.push_back(r);
        }
        out.push_back({{"criterion", t.criterion_id()}, {"levels", levels}, {"cards", matrix}});
    }
    return out;
}

json weights_json(const DerivedModel& d) {
    json ws = json::array();
    for (const auto& w : d.weights.weights) {
        ws.push_back({{"criterion", w.criterion_id},
                      {"swing", swing_id_for(w.criterion_id)},
                      {"raw", num(w.raw)},
                      {"normalized", num(w.normalized)}});
    }
    return {{"z", num(d.weights.z)},
            {"z_at_best_reference", d.z.at_best_reference},
            {"alpha_w", num(d.weights.alpha_w)},
            {"weights", ws}};
}

json derived_json(const ApiSession& s) {
    if (!s.derived) return nullptr;
    return {{"tables", tables_json(*s.derived)},
            {"value_functions", value_functions_json(*s.derived)},
            {"weights", weights_json(*s.derived)}};
}

json state_json(const ApiSession& s) {
    return {{"id", s.id}, {"revision", s.revision}, {"derived", derived_json(s)}, {"errors", s.derive_errors}};
}

// Re-derives eagerly; derivation failures are kept on the session and reported.
void rederive(ApiSession& s) {
    s.derived.reset();
    s.derive_errors.clear();
    try {
        s.derived = derive(s.document);
    } catch (const Error& e) {
        s.derive_errors.push_back(e.what());
    }
}

// Consistency violations reject a change outright.
void reject_violations(const SessionDocument& doc) {
    auto report = validate_session(doc);
    if (report.violations.empty()) return;
    json vs = json::array();
    for (const auto& e : report.violations) vs.push_back(violation_json(e.scope, e.violation));
    fail(422, "inconsistent judgments", {{"violations", vs}});
}

std::vector<std::string> split_path(std::string_view path) {
    if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        std::size_t j = path.find('/', i);
        if (j == std::string_view::npos) j = path.size();
        if (j > i) out.emplace_back(path.substr(i, j - i));
        i = j;
    }
    return out;
}

io::Fleet fleet_arg(const json& j, const CriteriaFramework& fw) {
    auto it = j.find("fleet_csv");
    if (it == j.end() || !it->is_string()) fail(400, "request needs 'fleet_csv' text");
    io::FleetOptions opts;
    if (auto m = j.find("mode"); m != j.end()) {
        std::string mode = m->get<std::string>();
        if (mode == "raw") opts.mode = io::FleetMode::raw;
        else if (mode == "performance") opts.mode = io::FleetMode::performance;
        else if (mode != "auto") fail(400, "mode must be auto, raw or performance");
    }
    try {
        return io::parse_fleet(it->get<std::string>(), fw, opts);
    } catch (const ParseError& e) {
        fail(422, e.what(), {{"line", e.line()}, {"column", e.column()}});
    }
}

std::optional<ReferenceLists> lists_arg(const json& j) {
    auto it = j.find("reference_lists");
    if (it == j.end() || it->is_null()) return std::nullopt;
    try {
        return io::parse_reference_lists(it->dump());
    } catch (const ParseError& e) {
        fail(422, e.what());
    }
}

std::vector<Exact> axis_arg(const json& a, const std::string& what) {
    if (a.is_array()) {
        std::vector<Exact> out;
        for (const auto& v : a) out.push_back(exact_arg(v, what));
        return out;
    }
    if (a.is_object() && a.contains("from") && a.contains("to") && a.contains("step")) {
        return ScenarioGrid::range(exact_arg(a["from"], what), exact_arg(a["to"], what), exact_arg(a["step"], what));
    }
    fail(400, what + " must be a list or {from, to, step}");
}

bool valid_name(const std::string& name) {
    static const std::regex re("[A-Za-z0-9_-]{1,64}");
    return std::regex_match(name, re);
}

}  // namespace

SessionService::SessionService(std::filesystem::path data_dir) : data_dir_(std::move(data_dir)) {}

std::size_t SessionService::session_count() const {
    std::shared_lock lock(registry_mutex_);
    return sessions_.size();
}

std::shared_ptr<ApiSession> SessionService::find(const std::string& id) const {
    std::shared_lock lock(registry_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) fail(404, "no session '" + id + "'");
    return it->second;
}

std::shared_ptr<ApiSession> SessionService::add(SessionDocument doc) {
    auto s = std::make_shared<ApiSession>();
    s->document = std::move(doc);
    rederive(*s);
    std::unique_lock lock(registry_mutex_);
    s->id = "session-" + std::to_string(next_id_++);
    sessions_[s->id] = s;
    return s;
}

Response SessionService::handle(std::string_view method, std::string_view path, std::string_view body) {
    try {
        const auto parts = split_path(path);
        const std::string m(method);
        auto ok = [](json j, int status = 200) { return Response{status, j.dump()}; };

        if (parts.size() == 1 && parts[0] == "health") {
            if (m != "GET") fail(405, "method not allowed");
            return ok({{"status", "ok"}});
        }
        if (parts.empty() || parts[0] != "sessions") fail(404, "unknown resource");

        if (parts.size() == 1) {
            if (m == "GET") {
                json ids = json::array();
                std::shared_lock lock(registry_mutex_);
                for (const auto& [id, s] : sessions_) ids.push_back(id);
                return ok({{"sessions", ids}});
            }
            if (m != "POST") fail(405, "method not allowed");
            json j = parse_body(body);
            SessionDocument doc;
            if (j.contains("document")) {
                try {
                    doc = io::load_session(j["document"].dump());
                } catch (const ParseError& e) {
                    fail(422, e.what());
                }
            } else if (j.contains("load")) {
                std::string name = j["load"].is_string() ? j["load"].get<std::string>() : "";
                if (!valid_name(name)) fail(400, "invalid session name");
                if (data_dir_.empty()) fail(409, "no data directory configured");
                try {
                    doc = io::load_session(io::read_file(data_dir_ / (name + ".json")));
                } catch (const ParseError& e) {
                    fail(422, e.what());
                } catch (const Error& e) {
                    fail(404, e.what());
                }
            } else {
                doc = blank_session();
            }
            reject_violations(doc);
            auto s = add(std::move(doc));
            std::shared_lock lock(s->mutex);
            json out = state_json(*s);
            out["document"] = document_json(s->document);
            return ok(out, 201);
        }

        auto s = find(parts[1]);
        const std::string sub = parts.size() > 2 ? parts[2] : "";

        // ---- reads ----
        if (m == "GET") {
            std::shared_lock lock(s->mutex);
            if (parts.size() == 2) {
                json out = state_json(*s);
                out["document"] = document_json(s->document);
                return ok(out);
            }
            if (parts.size() == 3 && (sub == "value-functions" || sub == "weights")) {
                if (!s->derived) fail(422, "session cannot be derived", {{"errors", s->derive_errors}});
                json out{{"id", s->id}, {"revision", s->revision}};
                if (sub == "value-functions") out["value_functions"] = value_functions_json(*s->derived);
                else out["weights"] = weights_json(*s->derived);
                return ok(out);
            }
            if (parts.size() == 3 && sub == "validation") {
                auto report = validate_session(s->document);
                json vs = json::array();
                for (const auto& e : report.violations) vs.push_back(violation_json(e.scope, e.violation));
                return ok({{"id", s->id}, {"revision", s->revision}, {"ok", report.ok()}, {"violations", vs},
                           {"errors", report.errors}});
            }
            fail(404, "unknown resource");
        }

        // ---- actions ----
        if (m == "POST" && parts.size() == 3 && (sub == "classify" || sub == "sweep" || sub == "save")) {
            json j = parse_body(body);
            SessionDocument doc;
            std::uint64_t revision;
            {
                std::shared_lock lock(s->mutex);
                doc = s->document;
                revision = s->revision;
            }
            if (sub == "save") {
                std::string name = j.contains("name") ? j["name"].get<std::string>() : s->id;
                if (!valid_name(name)) fail(400, "invalid session name");
                if (data_dir_.empty()) fail(409, "no data directory configured");
                std::error_code ec;
                std::filesystem::create_directories(data_dir_, ec);
                try {
                    io::write_file(data_dir_ / (name + ".json"), io::save_session(doc));
                } catch (const Error& e) {
                    fail(500, e.what());
                }
                return ok({{"id", s->id}, {"revision", revision}, {"name", name}});
            }
            io::Fleet fleet = fleet_arg(j, doc.framework);
            auto lists = lists_arg(j);
            try {
                if (sub == "classify") {
                    Overrides ov;
                    if (auto o = j.find("overrides"); o != j.end() && o->is_object()) {
                        if (o->contains("lambda_23")) ov.lambda_23 = exact_arg((*o)["lambda_23"], "lambda_23");
                        if (o->contains("lambda_12")) ov.lambda_12 = exact_arg((*o)["lambda_12"], "lambda_12");
                        if (o->contains("z")) ov.z = exact_arg((*o)["z"], "z");
                        if (o->contains("lenient")) ov.lenient = (*o)["lenient"].get<bool>();
                    }
                    auto outcome = classify_fleet(doc, fleet, lists ? &*lists : nullptr, ov);
                    json results = json::array();
                    for (const auto& r : outcome.batch.results) {
                        json cs = json::array();
                        for (const auto& c : r.contributions) {
                            cs.push_back({{"criterion", c.criterion_id}, {"value", num(c.value)},
                                          {"contribution", num(c.contribution)}});
                        }
                        results.push_back({{"ship", r.ship_id},
                                           {"category", std::string(to_string(r.category))},
                                           {"total", num(r.total)},
                                           {"contributions", cs},
                                           {"rule_trace", r.rule_trace}});
                    }
                    json errors = json::array();
                    for (const auto& e : outcome.batch.errors) {
                        errors.push_back({{"ship", e.ship_id}, {"message", e.message}});
                    }
                    const auto& counts = outcome.batch.counts;
                    return ok({{"id", s->id},
                               {"revision", revision},
                               {"counts", {{"C1", counts[0]}, {"C2", counts[1]}, {"C3", counts[2]}}},
                               {"results", results},
                               {"errors", errors},
                               {"warnings", outcome.warnings},
                               {"export", {{"table", outcome.exported.table}, {"exact", outcome.exported.exact}}}});
                }
                ScenarioGrid grid = ScenarioGrid::default_grid();
                if (auto g = j.find("grid"); g != j.end()) {
                    if (g->contains("lambda")) grid.lambda_values = axis_arg((*g)["lambda"], "grid.lambda");
                    if (g->contains("z")) grid.z_values = axis_arg((*g)["z"], "grid.z");
                }
                std::optional<std::map<std::string, Category>> baseline;
                if (auto b = j.find("baseline_csv"); b != j.end() && b->is_string()) {
                    try {
                        baseline = io::parse_baseline(b->get<std::string>());
                    } catch (const ParseError& e) {
                        fail(422, e.what(), {{"line", e.line()}, {"column", e.column()}});
                    }
                }
                std::optional<std::string> ship;
                if (auto sh = j.find("ship"); sh != j.end() && sh->is_string()) ship = sh->get<std::string>();
                bool lenient = j.value("lenient", false);
                auto outcome = sweep_fleet(doc, fleet, lists ? &*lists : nullptr, grid,
                                           baseline ? &*baseline : nullptr, ship, lenient);
                const auto& r = outcome.result;
                json lambdas = json::array(), zs = json::array(), totals = json::array(), cells = json::array();
                for (const auto& l : r.grid.lambda_values) lambdas.push_back(num(l));
                for (std::size_t zi = 0; zi < r.grid.z_values.size(); ++zi) {
                    zs.push_back(num(r.grid.z_values[zi]));
                    json t = json::array();
                    for (const auto& v : r.totals[zi]) t.push_back(num(v));
                    totals.push_back(t);
                    json row = json::array();
                    for (std::size_t li = 0; li < r.grid.lambda_values.size(); ++li) {
                        const auto& c = r.cell(zi, li);
                        json cats = json::array();
                        for (auto cat : c.categories) cats.push_back(std::string(to_string(cat)));
                        row.push_back({{"categories", cats},
                                       {"counts", {{"C1", c.counts[0]}, {"C2", c.counts[1]}, {"C3", c.counts[2]}}}});
                    }
                    cells.push_back(row);
                }
                json out{{"id", s->id},       {"revision", revision}, {"lambda_values", lambdas},
                         {"z_values", zs},    {"ship_ids", r.ship_ids}, {"totals", totals},
                         {"cells", cells}};
                json exports{{"counts", {{"table", outcome.counts.table}, {"exact", outcome.counts.exact}}}};
                if (outcome.ship) exports["ship"] = {{"table", outcome.ship->table}, {"exact", outcome.ship->exact}};
                out["export"] = exports;
                return ok(out);
            } catch (const MissingDataError& e) {
                fail(422, e.what());
            } catch (const ParseError& e) {
                fail(422, e.what());
            } catch (const ValidationError& e) {
                fail(422, e.what());
            }
        }

        if (m == "DELETE" && parts.size() == 2) {
            std::unique_lock lock(registry_mutex_);
            sessions_.erase(parts[1]);
            return ok({{"deleted", parts[1]}});
        }

        // ---- mutations ----
        if (m != "PUT") fail(405, "method not allowed");
        json j = parse_body(body);
        const std::uint64_t based_on = revision_arg(j);

        std::unique_lock lock(s->mutex);
        if (based_on != s->revision) {
            fail(409, "stale revision", {{"current_revision", s->revision}, {"request_revision", based_on}});
        }
        SessionDocument doc = s->document;

        if (parts.size() == 5 && sub == "criteria" && parts[4] == "cards") {
            const std::string& cid = parts[3];
            if (!doc.framework.contains(cid) || doc.framework.criterion(cid).kind != CriterionKind::valued) {
                fail(404, "no valued criterion '" + cid + "'");
            }
            auto& cj = doc.judgments_for(cid);
            const auto& cards = j.contains("cards") ? j["cards"] : json();
            if (j.contains("index")) {
                if (!j["index"].is_number_unsigned() || !cards.is_number_integer()) {
                    fail(400, "per-adjacency update needs integer index and cards");
                }
                auto idx = j["index"].get<std::size_t>();
                if (idx >= cj.adjacent_cards.size()) fail(422, "adjacency index out of range");
                cj.adjacent_cards[idx] = cards.get<std::int64_t>();
            } else if (cards.is_array()) {
                cj.adjacent_cards.clear();
                for (const auto& c : cards) {
                    if (!c.is_number_integer()) fail(400, "cards must be integers");
                    cj.adjacent_cards.push_back(c.get<std::int64_t>());
                }
            } else if (!cards.is_null()) {
                fail(400, "cards must be an array or come with an index");
            }
            if (j.contains("direct")) cj.direct_judgments = judgments_arg(j["direct"], "direct");
            if (auto r = j.find("references"); r != j.end()) {
                if (r->contains("low_level")) cj.references.low_level = (*r)["low_level"].get<std::string>();
                if (r->contains("high_level")) cj.references.high_level = (*r)["high_level"].get<std::string>();
                if (r->contains("low_value")) cj.references.low_value = exact_arg((*r)["low_value"], "low_value");
                if (r->contains("high_value")) cj.references.high_value = exact_arg((*r)["high_value"], "high_value");
            }
            try {
                ComparisonTable::create(cid, doc.framework.criterion(cid).levels, cj.adjacent_cards);
            } catch (const ValidationError& e) {
                fail(422, e.what());
            }
        } else if (parts.size() == 3 && sub == "ranking") {
            if (!j.contains("groups") || !j["groups"].is_array()) fail(400, "ranking needs 'groups'");
            SwingRanking ranking;
            for (const auto& g : j["groups"]) {
                std::vector<std::string> group;
                if (g.is_string()) group.push_back(g.get<std::string>());
                else if (g.is_array()) group = g.get<std::vector<std::string>>();
                else fail(400, "ranking groups must be swing ids or arrays of them");
                ranking.groups.push_back(std::move(group));
            }
            doc.ranking = std::move(ranking);
            if (!doc.ranking.groups.empty() && !doc.ranking.groups.back().empty()) {
                const auto& top = doc.ranking.groups.back();
                if (std::find(top.begin(), top.end(), doc.closeness.reference_action) == top.end()) {
                    doc.closeness.reference_action = top.front();
                }
            }
        } else if (parts.size() == 3 && sub == "closeness") {
            if (j.contains("reference")) doc.closeness.reference_action = j["reference"].get<std::string>();
            const auto& cards = j.contains("cards") ? j["cards"] : json();
            if (cards.is_array()) {
                if (doc.ranking.groups.size() < 1 || cards.size() + 1 != doc.ranking.groups.size()) {
                    fail(422, "closeness list needs one count per ranking position below the top");
                }
                doc.closeness.cards_to_reference.clear();
                for (std::size_t i = 0; i < cards.size(); ++i) {
                    if (!cards[i].is_number_integer()) fail(400, "closeness cards must be integers");
                    for (const auto& id : doc.ranking.groups[i]) {
                        doc.closeness.cards_to_reference[id] = cards[i].get<std::int64_t>();
                    }
                }
            } else if (cards.is_object()) {
                doc.closeness.cards_to_reference.clear();
                for (const auto& [id, c] : cards.items()) {
                    if (!c.is_number_integer()) fail(400, "closeness cards must be integers");
                    doc.closeness.cards_to_reference[id] = c.get<std::int64_t>();
                }
            } else if (!cards.is_null()) {
                fail(400, "closeness cards must be a list or an object");
            }
            if (j.contains("direct")) doc.closeness_direct = judgments_arg(j["direct"], "direct");
            try {
                auto report = validate_closeness(doc.ranking, doc.closeness, doc.closeness_direct);
                if (!report.ok()) {
                    json vs = json::array();
                    for (const auto& v : report.violations) vs.push_back(violation_json("closeness", v));
                    fail(422, "inconsistent closeness judgments", {{"violations", vs}});
                }
            } catch (const ValidationError& e) {
                fail(422, e.what());
            }
        } else if (parts.size() == 3 && sub == "z") {
            if (j.contains("indifference")) {
                const auto& ind = j["indifference"];
                if (!ind.is_object()) fail(400, "indifference must be an object");
                if (ind.contains("criterion") && !doc.ranking.groups.empty()) {
                    std::string expected = doc.closeness.reference_action;
                    if (swing_id_for(ind["criterion"].get<std::string>()) != expected) {
                        fail(422, "indifference must be stated on the criterion of the top swing " + expected);
                    }
                }
                doc.z_source.kind = ZSource::Kind::indifference;
                if (ind.contains("level")) doc.z_source.indifference_performance = ind["level"].get<std::string>();
                else if (ind.contains("value")) doc.z_source.indifference_performance = exact_arg(ind["value"], "value");
                else fail(400, "indifference needs 'value' or 'level'");
            } else if (j.contains("value")) {
                doc.z_source.kind = ZSource::Kind::explicit_value;
                doc.z_source.value = exact_arg(j["value"], "z");
            } else {
                fail(400, "z needs 'indifference' or 'value'");
            }
            // the new z must be usable before it is stored
            try {
                auto vfs = derive_value_functions(doc);
                auto swings = derive_swings(doc, vfs);
                derive_z(doc, vfs, swings);
            } catch (const ValidationError& e) {
                fail(422, e.what());
            }
        } else if (parts.size() == 3 && sub == "policy") {
            auto& p = doc.policy;
            if (j.contains("lambda_23")) p.lambda_23 = exact_arg(j["lambda_23"], "lambda_23");
            if (j.contains("lambda_12")) {
                if (j["lambda_12"].is_null()) p.lambda_12.reset();
                else p.lambda_12 = exact_arg(j["lambda_12"], "lambda_12");
            }
            if (j.contains("g3_high_override")) p.g3_high_override = j["g3_high_override"].get<bool>();
            if (j.contains("c1_rules")) p.c1_rules = j["c1_rules"].get<std::map<std::string, std::string>>();
            try {
                validate_policy(p, doc.framework);
            } catch (const ValidationError& e) {
                fail(422, e.what());
            }
        } else {
            fail(404, "unknown resource");
        }

        reject_violations(doc);
        s->document = std::move(doc);
        ++s->revision;
        rederive(*s);
        return ok(state_json(*s));
    } catch (const HttpError& e) {
        return {e.status, e.body.dump()};
    } catch (const json::exception& e) {
        return {400, json{{"error", std::string("bad request: ") + e.what()}}.dump()};
    } catch (const ParseError& e) {
        return {422, json{{"error", e.what()}}.dump()};
    } catch (const Error& e) {
        return {422, json{{"error", e.what()}}.dump()};
    }
}

}  // namespace dcm::gateway
