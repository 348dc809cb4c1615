#include "dcm/io.hpp"

#include "dcm/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace dcm::io {

using nlohmann::json;

// ---- CSV -------------------------------------------------------------------

std::vector<CsvRow> read_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool in_quotes = false;
    bool row_has_content = false;
    std::size_t line = 1;
    row.line = line;

    auto end_field = [&] {
        row.fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        bool blank = row.fields.size() == 1 && row.fields.front().empty() && !row_has_content;
        if (!blank) rows.push_back(std::move(row));
        row = CsvRow{};
        row_has_content = false;
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) throw ParseError("quote inside unquoted field", line);
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                end_field();
                row_has_content = true;
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                ++line;
                row.line = line;
                break;
            default:
                field += c;
                break;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", line);
    if (!field.empty() || !row.fields.empty() || row_has_content) end_row();
    return rows;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::int64_t parse_count(const std::string& text, std::size_t line, std::size_t column, const char* what) {
    std::string t = trim(text);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ParseError(std::string("malformed ") + what + " '" + text + "' (expected a non-negative integer)",
                         line, column);
    }
    try {
        return std::stoll(t);
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + " out of range", line, column);
    }
}

Exact parse_cell_number(const std::string& text, std::size_t line, std::size_t column) {
    try {
        return parse_exact(text);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line, column);
    }
}

const std::vector<std::string> kRawColumns{"ship",        "type", "age",     "deficiencies", "detentions",
                                           "ism_company", "flag", "recognised_organisation"};

}  // namespace

Fleet parse_fleet(std::istream& in, const CriteriaFramework& framework, const FleetOptions& options) {
    auto rows = read_csv(in);
    if (rows.empty()) throw ParseError("fleet file has no header", 1);
    const auto& header_row = rows.front();

    std::vector<std::string> header;
    for (const auto& h : header_row.fields) header.push_back(lower(trim(h)));

    // Map criterion codes onto ids.
    std::map<std::string, std::string> criterion_column;
    for (const auto& c : framework.criteria()) {
        criterion_column[lower(c.id)] = c.id;
        criterion_column[lower(c.code)] = c.id;
    }

    bool looks_raw = std::find(header.begin(), header.end(), "type") != header.end();
    FleetMode mode = options.mode;
    if (mode == FleetMode::automatic) mode = looks_raw ? FleetMode::raw : FleetMode::performance;

    std::map<std::string, std::size_t> column;
    std::set<std::string> allowed;
    if (mode == FleetMode::raw) {
        allowed.insert(kRawColumns.begin(), kRawColumns.end());
    } else {
        allowed.insert("ship");
        for (const auto& [k, _] : criterion_column) allowed.insert(k);
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string key = header[i];
        if (!allowed.contains(key)) {
            if (options.strict) throw ParseError("unknown column '" + header_row.fields[i] + "'", header_row.line, i + 1);
            continue;
        }
        if (mode == FleetMode::performance && key != "ship") key = criterion_column.at(key);
        if (!column.emplace(key, i).second) {
            throw ParseError("duplicate column '" + header_row.fields[i] + "'", header_row.line, i + 1);
        }
    }
    std::vector<std::string> required;
    if (mode == FleetMode::raw) {
        required = kRawColumns;
    } else {
        required.push_back("ship");
        for (const auto& c : framework.criteria()) required.push_back(c.id);
    }
    for (const auto& r : required) {
        if (!column.contains(r)) throw ParseError("missing column '" + r + "'", header_row.line);
    }

    Fleet fleet;
    fleet.mode = mode;
    std::set<std::string> ships;
    for (std::size_t ri = 1; ri < rows.size(); ++ri) {
        const auto& row = rows[ri];
        if (row.fields.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(row.fields.size()),
                             row.line);
        }
        auto cell = [&](const std::string& key) -> const std::string& { return row.fields[column.at(key)]; };
        auto col = [&](const std::string& key) { return column.at(key) + 1; };

        std::string ship = trim(cell("ship"));
        if (ship.empty()) throw ParseError("empty ship id", row.line, col("ship"));
        if (!ships.insert(ship).second) throw ParseError("duplicate ship id '" + ship + "'", row.line, col("ship"));

        if (mode == FleetMode::raw) {
            RawShipRecord r;
            r.ship_id = ship;
            r.type = trim(cell("type"));
            r.age = parse_cell_number(cell("age"), row.line, col("age"));
            if (r.age < 0) throw ParseError("age must be non-negative", row.line, col("age"));
            std::string def = lower(trim(cell("deficiencies")));
            if (def == "ne" || def == "not eligible" || def == "not-eligible") {
                r.deficiency_count.reset();
            } else {
                r.deficiency_count = parse_count(cell("deficiencies"), row.line, col("deficiencies"), "deficiency count");
            }
            r.detention_count = parse_count(cell("detentions"), row.line, col("detentions"), "detention count");
            r.ism_company = trim(cell("ism_company"));
            r.flag_state = trim(cell("flag"));
            r.recognised_organisation = trim(cell("recognised_organisation"));
            fleet.raw.push_back(std::move(r));
        } else {
            PerformanceRecord p;
            p.ship_id = ship;
            for (const auto& c : framework.criteria()) {
                std::string text = trim(cell(c.id));
                if (c.continuous) {
                    Exact v = parse_cell_number(text, row.line, col(c.id));
                    if (c.domain_min && v < *c.domain_min) {
                        throw ParseError("value below the domain of " + c.id, row.line, col(c.id));
                    }
                    p.levels[c.id] = v;
                } else {
                    std::string level = lower(text);
                    if (!c.has_level(level)) {
                        throw ParseError("unknown level '" + text + "' for criterion " + c.id, row.line, col(c.id));
                    }
                    p.levels[c.id] = level;
                }
            }
            fleet.performance.push_back(std::move(p));
        }
    }
    return fleet;
}

Fleet parse_fleet(std::string_view text, const CriteriaFramework& framework, const FleetOptions& options) {
    std::istringstream in{std::string(text)};
    return parse_fleet(in, framework, options);
}

Fleet read_fleet_file(const std::filesystem::path& path, const CriteriaFramework& framework,
                      const FleetOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open fleet file " + path.string());
    try {
        return parse_fleet(in, framework, options);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string write_raw_fleet(const std::vector<RawShipRecord>& fleet) {
    std::string out;
    for (std::size_t i = 0; i < kRawColumns.size(); ++i) out += (i ? "," : "") + kRawColumns[i];
    out += '\n';
    for (const auto& r : fleet) {
        out += csv_field(r.ship_id) + ',' + csv_field(r.type) + ',' + to_ratio_string(r.age) + ',' +
               (r.deficiency_count ? std::to_string(*r.deficiency_count) : std::string("NE")) + ',' +
               std::to_string(r.detention_count) + ',' + csv_field(r.ism_company) + ',' + csv_field(r.flag_state) +
               ',' + csv_field(r.recognised_organisation) + '\n';
    }
    return out;
}

std::string write_performance_fleet(const std::vector<PerformanceRecord>& fleet, const CriteriaFramework& framework) {
    std::string out = "ship";
    for (const auto& c : framework.criteria()) out += "," + c.id;
    out += '\n';
    for (const auto& r : fleet) {
        out += csv_field(r.ship_id);
        for (const auto& c : framework.criteria()) {
            const auto& p = r.at(c.id);
            out += ',';
            if (const auto* e = std::get_if<Exact>(&p)) out += to_ratio_string(*e);
            else out += csv_field(std::get<std::string>(p));
        }
        out += '\n';
    }
    return out;
}

ResolvedFleet resolve_fleet(const Fleet& fleet, const ReferenceLists* lists, const MappingOptions& options) {
    ResolvedFleet out;
    if (fleet.mode == FleetMode::performance) {
        out.records = fleet.performance;
        return out;
    }
    if (!lists) throw ValidationError("a raw fleet needs reference lists");
    for (const auto& raw : fleet.raw) {
        auto mapped = map_raw_to_performance(raw, *lists, options);
        out.records.push_back(std::move(mapped.record));
        for (auto& w : mapped.warnings) out.warnings.push_back(std::move(w));
    }
    return out;
}

// ---- JSON helpers ------------------------------------------------------------

namespace {

// Rejects duplicate object keys at any depth.
json parse_json_strict(std::string_view text, const std::string& what) {
    std::vector<std::set<std::string>> keys;
    std::string duplicate;
    json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start:
                keys.emplace_back();
                break;
            case json::parse_event_t::object_end:
                if (!keys.empty()) keys.pop_back();
                break;
            case json::parse_event_t::key:
                if (!keys.empty() && !keys.back().insert(parsed.get<std::string>()).second && duplicate.empty()) {
                    duplicate = parsed.get<std::string>();
                }
                break;
            default:
                break;
        }
        return true;
    };
    json j;
    try {
        j = json::parse(text.begin(), text.end(), cb);
    } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
    if (!duplicate.empty()) throw ParseError(what + ": duplicate key '" + duplicate + "'");
    return j;
}

std::string exact_json(const Exact& e) {
    return to_ratio_string(e);
}

Exact exact_from(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_exact(j.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (j.is_number_integer()) return Exact(j.get<std::int64_t>());
    throw ParseError(where + ": expected an exact number as a ratio string");
}

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ParseError("schema violation: " + where + " must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("schema violation: " + where + " lacks '" + key + "'");
    return *it;
}

std::string str(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_string()) throw ParseError("schema violation: " + where + "." + key + " must be a string");
    return v.get<std::string>();
}

std::int64_t integer(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_number_integer()) throw ParseError("schema violation: " + where + "." + key + " must be an integer");
    return v.get<std::int64_t>();
}

bool boolean(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_boolean()) throw ParseError("schema violation: " + where + "." + key + " must be a boolean");
    return v.get<bool>();
}

const json& array(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_array()) throw ParseError("schema violation: " + where + "." + key + " must be an array");
    return v;
}

std::string performance_token(const std::string& t, const std::string& where) {
    static const std::set<std::string> ok{"very low", "low", "medium", "high", "white", "grey", "gray",
                                          "black-medium", "black-medium-to-high", "black-high", "black-very-high"};
    if (!ok.contains(lower(t))) throw ParseError(where + ": unknown performance token '" + t + "'");
    return t;
}

}  // namespace

// ---- Reference lists ---------------------------------------------------------

ReferenceLists parse_reference_lists(std::string_view json_text) {
    json j = parse_json_strict(json_text, "reference lists");
    ReferenceLists lists;
    auto string_set = [&](const char* key, std::set<std::string>& out) {
        if (!j.contains(key)) return;
        for (const auto& v : array(j, key, "reference lists")) {
            if (!v.is_string()) throw ParseError(std::string("reference lists: ") + key + " entries must be strings");
            if (!out.insert(v.get<std::string>()).second) {
                throw ParseError(std::string("reference lists: duplicate entry '") + v.get<std::string>() + "' in " + key);
            }
        }
    };
    auto token_map = [&](const char* key, std::map<std::string, std::string>& out) {
        if (!j.contains(key)) return;
        const auto& obj = j.at(key);
        if (!obj.is_object()) throw ParseError(std::string("reference lists: ") + key + " must be an object");
        for (const auto& [name, level] : obj.items()) {
            if (!level.is_string()) throw ParseError(std::string("reference lists: ") + key + " values must be strings");
            out[name] = performance_token(level.get<std::string>(), std::string("reference lists: ") + key);
        }
    };
    if (!j.is_object()) throw ParseError("reference lists: top level must be an object");
    string_set("listed_ship_types", lists.listed_ship_types);
    token_map("company_performance", lists.company_performance);
    token_map("flag_bgw", lists.flag_bgw);
    string_set("flag_imo_audit", lists.flag_imo_audit);
    token_map("ro_performance", lists.ro_performance);
    string_set("ro_recognised", lists.ro_recognised);
    for (const auto& [key, _] : j.items()) {
        static const std::set<std::string> known{"listed_ship_types", "company_performance", "flag_bgw",
                                                 "flag_imo_audit",    "ro_performance",      "ro_recognised",
                                                 "version"};
        if (!known.contains(key)) throw ParseError("reference lists: unknown key '" + key + "'");
    }
    return lists;
}

std::string serialize_reference_lists(const ReferenceLists& lists) {
    json j;
    j["version"] = 1;
    j["listed_ship_types"] = lists.listed_ship_types;
    j["company_performance"] = lists.company_performance;
    j["flag_bgw"] = lists.flag_bgw;
    j["flag_imo_audit"] = lists.flag_imo_audit;
    j["ro_performance"] = lists.ro_performance;
    j["ro_recognised"] = lists.ro_recognised;
    return j.dump(2) + "\n";
}

std::vector<std::string> missing_reference_entries(const ReferenceLists& lists,
                                                   const std::vector<RawShipRecord>& fleet) {
    std::vector<std::string> out;
    for (const auto& r : fleet) {
        if (!lists.company_performance.contains(r.ism_company)) {
            out.push_back(r.ship_id + ": company '" + r.ism_company + "'");
        }
        if (!lists.ro_performance.contains(r.recognised_organisation)) {
            out.push_back(r.ship_id + ": RO '" + r.recognised_organisation + "'");
        }
    }
    return out;
}

// ---- Baseline ----------------------------------------------------------------

std::map<std::string, Category> parse_baseline(std::string_view csv_text) {
    std::istringstream in{std::string(csv_text)};
    auto rows = read_csv(in);
    if (rows.empty()) throw ParseError("baseline file has no header", 1);
    const auto& h = rows.front().fields;
    if (h.size() != 2 || lower(trim(h[0])) != "ship" || lower(trim(h[1])) != "category") {
        throw ParseError("baseline header must be 'ship,category'", rows.front().line);
    }
    std::map<std::string, Category> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.fields.size() != 2) throw ParseError("expected 2 fields", r.line);
        Category c;
        try {
            c = parse_category(trim(r.fields[1]));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), r.line, 2);
        }
        if (!out.emplace(trim(r.fields[0]), c).second) {
            throw ParseError("duplicate ship '" + trim(r.fields[0]) + "'", r.line, 1);
        }
    }
    return out;
}

// ---- Sessions ----------------------------------------------------------------

namespace {

json performance_json(const Performance& p) {
    if (const auto* e = std::get_if<Exact>(&p)) return json{{"value", exact_json(*e)}};
    return json{{"level", std::get<std::string>(p)}};
}

Performance performance_from(const json& j, const std::string& where) {
    if (j.is_object() && j.contains("level")) return str(j, "level", where);
    if (j.is_object() && j.contains("value")) return exact_from(j.at("value"), where + ".value");
    throw ParseError("schema violation: " + where + " needs 'level' or 'value'");
}

json judgments_json(const std::vector<CardJudgment>& js) {
    json a = json::array();
    for (const auto& j : js) a.push_back({{"from", j.from}, {"to", j.to}, {"cards", j.cards}});
    return a;
}

std::vector<CardJudgment> judgments_from(const json& a, const std::string& where) {
    if (!a.is_array()) throw ParseError("schema violation: " + where + " must be an array");
    std::vector<CardJudgment> out;
    for (const auto& j : a) out.push_back({str(j, "from", where), str(j, "to", where), integer(j, "cards", where)});
    return out;
}

json framework_json(const CriteriaFramework& fw) {
    json pvs = json::array();
    for (const auto& pv : fw.points_of_view()) {
        json axes = json::array();
        for (const auto& sa : pv.axes) axes.push_back({{"code", sa.code}, {"name", sa.name}});
        pvs.push_back({{"code", pv.code}, {"name", pv.name}, {"axes", axes}});
    }
    json cs = json::array();
    for (const auto& c : fw.criteria()) {
        json levels = json::array();
        for (const auto& l : c.levels) {
            json lj{{"id", l.id}, {"label", l.label}};
            lj["anchor"] = l.anchor ? json(exact_json(*l.anchor)) : json(nullptr);
            levels.push_back(lj);
        }
        json cj{{"id", c.id},
                {"code", c.code},
                {"name", c.name},
                {"point_of_view", c.point_of_view},
                {"significance_axis", c.significance_axis},
                {"direction", std::string(to_string(c.direction))},
                {"kind", std::string(to_string(c.kind))},
                {"continuous", c.continuous},
                {"levels", levels}};
        cj["domain_min"] = c.domain_min ? json(exact_json(*c.domain_min)) : json(nullptr);
        cs.push_back(cj);
    }
    return json{{"points_of_view", pvs}, {"criteria", cs}};
}

CriteriaFramework framework_from(const json& j) {
    std::vector<PointOfView> pvs;
    for (const auto& pv : array(j, "points_of_view", "framework")) {
        PointOfView p{str(pv, "code", "point_of_view"), str(pv, "name", "point_of_view"), {}};
        for (const auto& sa : array(pv, "axes", "point_of_view")) {
            p.axes.push_back({str(sa, "code", "axis"), str(sa, "name", "axis")});
        }
        pvs.push_back(std::move(p));
    }
    std::vector<Criterion> cs;
    for (const auto& cj : array(j, "criteria", "framework")) {
        Criterion c;
        c.id = str(cj, "id", "criterion");
        std::string where = "criterion " + c.id;
        c.code = str(cj, "code", where);
        c.name = str(cj, "name", where);
        c.point_of_view = str(cj, "point_of_view", where);
        c.significance_axis = str(cj, "significance_axis", where);
        c.direction = parse_direction(str(cj, "direction", where));
        c.kind = parse_criterion_kind(str(cj, "kind", where));
        c.continuous = boolean(cj, "continuous", where);
        const auto& dm = field(cj, "domain_min", where);
        if (!dm.is_null()) c.domain_min = exact_from(dm, where + ".domain_min");
        for (const auto& lj : array(cj, "levels", where)) {
            ScaleLevel l{str(lj, "id", where), str(lj, "label", where), 0, std::nullopt};
            const auto& a = field(lj, "anchor", where);
            if (!a.is_null()) l.anchor = exact_from(a, where + ".anchor");
            c.levels.push_back(std::move(l));
        }
        cs.push_back(std::move(c));
    }
    try {
        return CriteriaFramework(std::move(pvs), std::move(cs));
    } catch (const ValidationError& e) {
        throw ParseError(std::string("schema violation: ") + e.what());
    }
}

}  // namespace

std::string save_session(const SessionDocument& doc) {
    json j;
    j["format"] = "dcm-session";
    j["version"] = doc.version;
    j["provenance"] = {{"author", doc.provenance.author},
                       {"created", doc.provenance.created},
                       {"modified", doc.provenance.modified},
                       {"tool_version", doc.provenance.tool_version}};
    j["framework"] = framework_json(doc.framework);

    json judgments = json::array();
    for (const auto& cj : doc.judgments) {
        judgments.push_back({{"criterion", cj.criterion_id},
                             {"adjacent_cards", cj.adjacent_cards},
                             {"direct", judgments_json(cj.direct_judgments)},
                             {"references",
                              {{"low_level", cj.references.low_level},
                               {"high_level", cj.references.high_level},
                               {"low_value", exact_json(cj.references.low_value)},
                               {"high_value", exact_json(cj.references.high_value)}}}});
    }
    j["judgments"] = judgments;

    json swings = json::array();
    for (const auto& s : doc.swing_references) {
        swings.push_back({{"criterion", s.criterion_id}, {"worst", performance_json(s.worst)},
                          {"best", performance_json(s.best)}});
    }
    j["swing_references"] = swings;
    j["ranking"] = doc.ranking.groups;
    j["closeness"] = {{"reference", doc.closeness.reference_action},
                      {"cards", doc.closeness.cards_to_reference},
                      {"direct", judgments_json(doc.closeness_direct)}};
    if (doc.z_source.kind == ZSource::Kind::indifference) {
        j["z_source"] = {{"kind", "indifference"}, {"performance", performance_json(doc.z_source.indifference_performance)}};
    } else {
        j["z_source"] = {{"kind", "explicit"}, {"value", exact_json(doc.z_source.value)}};
    }
    json policy{{"c1_rules", doc.policy.c1_rules},
                {"lambda_23", exact_json(doc.policy.lambda_23)},
                {"g3_high_override", doc.policy.g3_high_override},
                {"hybrid_rule_criteria", doc.policy.hybrid_rule_criteria}};
    policy["lambda_12"] = doc.policy.lambda_12 ? json(exact_json(*doc.policy.lambda_12)) : json(nullptr);
    j["policy"] = policy;
    return j.dump(2) + "\n";
}

SessionDocument load_session(std::string_view text) {
    json j = parse_json_strict(text, "session");
    if (!j.is_object()) throw ParseError("schema violation: session must be an object");
    if (j.value("format", "") != "dcm-session") throw ParseError("schema violation: not a dcm-session document");
    SessionDocument doc;
    doc.version = static_cast<int>(integer(j, "version", "session"));
    if (doc.version != kSessionFormatVersion) {
        throw ParseError("session version mismatch: file has " + std::to_string(doc.version) + ", expected " +
                         std::to_string(kSessionFormatVersion));
    }
    const auto& prov = field(j, "provenance", "session");
    doc.provenance = {str(prov, "author", "provenance"), str(prov, "created", "provenance"),
                      str(prov, "modified", "provenance"), str(prov, "tool_version", "provenance")};
    doc.framework = framework_from(field(j, "framework", "session"));

    for (const auto& cj : array(j, "judgments", "session")) {
        CriterionJudgments cr;
        cr.criterion_id = str(cj, "criterion", "judgments");
        std::string where = "judgments " + cr.criterion_id;
        for (const auto& c : array(cj, "adjacent_cards", where)) {
            if (!c.is_number_integer()) throw ParseError("schema violation: " + where + " cards must be integers");
            cr.adjacent_cards.push_back(c.get<std::int64_t>());
        }
        cr.direct_judgments = judgments_from(field(cj, "direct", where), where + ".direct");
        const auto& refs = field(cj, "references", where);
        cr.references = {str(refs, "low_level", where), str(refs, "high_level", where),
                         exact_from(field(refs, "low_value", where), where + ".low_value"),
                         exact_from(field(refs, "high_value", where), where + ".high_value")};
        doc.judgments.push_back(std::move(cr));
    }
    for (const auto& sj : array(j, "swing_references", "session")) {
        std::string cid = str(sj, "criterion", "swing_references");
        doc.swing_references.push_back({cid, performance_from(field(sj, "worst", cid), "swing " + cid + ".worst"),
                                        performance_from(field(sj, "best", cid), "swing " + cid + ".best")});
    }
    for (const auto& g : array(j, "ranking", "session")) {
        if (!g.is_array()) throw ParseError("schema violation: ranking entries must be arrays of swing ids");
        std::vector<std::string> group;
        for (const auto& id : g) {
            if (!id.is_string()) throw ParseError("schema violation: swing ids must be strings");
            group.push_back(id.get<std::string>());
        }
        doc.ranking.groups.push_back(std::move(group));
    }
    const auto& cl = field(j, "closeness", "session");
    doc.closeness.reference_action = str(cl, "reference", "closeness");
    const auto& cards = field(cl, "cards", "closeness");
    if (!cards.is_object()) throw ParseError("schema violation: closeness.cards must be an object");
    for (const auto& [id, c] : cards.items()) {
        if (!c.is_number_integer()) throw ParseError("schema violation: closeness cards must be integers");
        doc.closeness.cards_to_reference[id] = c.get<std::int64_t>();
    }
    doc.closeness_direct = judgments_from(field(cl, "direct", "closeness"), "closeness.direct");

    const auto& zs = field(j, "z_source", "session");
    std::string kind = str(zs, "kind", "z_source");
    if (kind == "indifference") {
        doc.z_source.kind = ZSource::Kind::indifference;
        doc.z_source.indifference_performance = performance_from(field(zs, "performance", "z_source"), "z_source");
    } else if (kind == "explicit") {
        doc.z_source.kind = ZSource::Kind::explicit_value;
        doc.z_source.value = exact_from(field(zs, "value", "z_source"), "z_source.value");
    } else {
        throw ParseError("schema violation: unknown z_source kind '" + kind + "'");
    }

    const auto& pj = field(j, "policy", "session");
    const auto& rules = field(pj, "c1_rules", "policy");
    if (!rules.is_object()) throw ParseError("schema violation: policy.c1_rules must be an object");
    for (const auto& [cid, level] : rules.items()) {
        if (!level.is_string()) throw ParseError("schema violation: C1 rule levels must be strings");
        doc.policy.c1_rules[cid] = level.get<std::string>();
    }
    doc.policy.lambda_23 = exact_from(field(pj, "lambda_23", "policy"), "policy.lambda_23");
    const auto& l12 = field(pj, "lambda_12", "policy");
    if (!l12.is_null()) doc.policy.lambda_12 = exact_from(l12, "policy.lambda_12");
    doc.policy.g3_high_override = boolean(pj, "g3_high_override", "policy");
    doc.policy.hybrid_rule_criteria.clear();
    for (const auto& c : array(pj, "hybrid_rule_criteria", "policy")) {
        if (!c.is_string()) throw ParseError("schema violation: hybrid rule criteria must be strings");
        doc.policy.hybrid_rule_criteria.push_back(c.get<std::string>());
    }
    return doc;
}

// ---- Exports -----------------------------------------------------------------

namespace {

std::string axis_label(const Exact& v) {
    if (boost::multiprecision::denominator(v) == 1) return to_ratio_string(v);
    return format_fixed(v, 2);
}

const PerformanceRecord* find_record(const std::vector<PerformanceRecord>& fleet, const std::string& id) {
    for (const auto& r : fleet) {
        if (r.ship_id == id) return &r;
    }
    return nullptr;
}

}  // namespace

Export export_results(const BatchResult& batch, const std::vector<PerformanceRecord>& fleet,
                      const CriteriaFramework& framework, const ExportProvenance& provenance) {
    Export out;
    out.table = "Category,Ship";
    for (const auto& c : framework.criteria()) out.table += "," + c.id;
    out.table += ",Total\n";

    json results = json::array();
    for (Category cat : {Category::C1, Category::C2, Category::C3}) {
        for (const auto& r : batch.results) {
            if (r.category != cat) continue;
            const PerformanceRecord* rec = find_record(fleet, r.ship_id);
            out.table += std::string(to_string(cat)) + "," + csv_field(r.ship_id);
            json contributions = json::object();
            json values = json::object();
            for (const auto& c : framework.criteria()) {
                out.table += ',';
                if (c.kind == CriterionKind::valued) {
                    auto it = std::find_if(r.contributions.begin(), r.contributions.end(),
                                           [&](const auto& x) { return x.criterion_id == c.id; });
                    if (it != r.contributions.end()) {
                        out.table += format_fixed(it->contribution, 2);
                        contributions[c.id] = exact_json(it->contribution);
                        values[c.id] = exact_json(it->value);
                    }
                } else if (rec) {
                    out.table += csv_field(performance_text(rec->at(c.id)));
                }
            }
            out.table += "," + format_fixed(r.total, 2) + "\n";
            results.push_back({{"ship", r.ship_id},
                               {"category", std::string(to_string(r.category))},
                               {"contributions", contributions},
                               {"values", values},
                               {"total", exact_json(r.total)},
                               {"rule_trace", r.rule_trace}});
        }
    }
    json errors = json::array();
    for (const auto& e : batch.errors) errors.push_back({{"ship", e.ship_id}, {"message", e.message}});
    json j{{"format", "dcm-results"},
           {"version", 1},
           {"provenance", provenance.entries},
           {"counts", {{"C1", batch.counts[0]}, {"C2", batch.counts[1]}, {"C3", batch.counts[2]}}},
           {"results", results},
           {"errors", errors}};
    out.exact = j.dump(2) + "\n";
    return out;
}

std::vector<ExactResultRow> parse_exact_results(std::string_view json_text) {
    json j = parse_json_strict(json_text, "results");
    if (j.value("format", "") != "dcm-results") throw ParseError("schema violation: not a dcm-results document");
    std::vector<ExactResultRow> out;
    for (const auto& r : array(j, "results", "results")) {
        ExactResultRow row;
        row.ship_id = str(r, "ship", "result");
        row.category = parse_category(str(r, "category", "result"));
        row.total = exact_from(field(r, "total", "result"), "result.total");
        for (const auto& [cid, v] : field(r, "contributions", "result").items()) {
            row.contributions[cid] = exact_from(v, "result.contributions");
        }
        out.push_back(std::move(row));
    }
    return out;
}

Export export_sweep_ship(const SweepResult& sweep, std::string_view ship_id, std::optional<Category> baseline,
                         std::string_view baseline_label) {
    const std::size_t si = sweep.ship_index(ship_id);
    const auto& lambdas = sweep.grid.lambda_values;
    Export out;
    out.table = "z";
    for (const auto& l : lambdas) out.table += "," + axis_label(l);
    if (baseline) out.table += "," + csv_field(baseline_label);
    out.table += "\n";

    json rows = json::array();
    for (std::size_t zi = 0; zi < sweep.grid.z_values.size(); ++zi) {
        out.table += "z=" + axis_label(sweep.grid.z_values[zi]);
        json cats = json::array();
        json diffs = json::array();
        for (std::size_t li = 0; li < lambdas.size(); ++li) {
            Category c = sweep.cell(zi, li).categories[si];
            bool differs = baseline && c != *baseline;
            out.table += "," + std::string(to_string(c)) + (differs ? "*" : "");
            cats.push_back(std::string(to_string(c)));
            diffs.push_back(differs);
        }
        if (baseline) out.table += "," + std::string(to_string(*baseline));
        out.table += "\n";
        rows.push_back({{"z", exact_json(sweep.grid.z_values[zi])},
                        {"total", exact_json(sweep.totals[zi][si])},
                        {"categories", cats},
                        {"differs", diffs}});
    }
    json lj = json::array();
    for (const auto& l : lambdas) lj.push_back(exact_json(l));
    json j{{"format", "dcm-sweep-ship"}, {"version", 1}, {"ship", std::string(ship_id)}, {"lambda_values", lj},
           {"rows", rows}};
    j["baseline"] = baseline ? json(std::string(to_string(*baseline))) : json(nullptr);
    out.exact = j.dump(2) + "\n";
    return out;
}

Export export_sweep_counts(const SweepResult& sweep, const std::map<std::string, Category>* baseline,
                           std::string_view baseline_label) {
    const auto& lambdas = sweep.grid.lambda_values;
    std::array<std::size_t, 3> base{};
    if (baseline) {
        for (const auto& id : sweep.ship_ids) {
            auto it = baseline->find(id);
            if (it == baseline->end()) throw ValidationError("ship '" + id + "' missing from baseline");
            ++base[static_cast<int>(it->second) - 1];
        }
    }
    Export out;
    out.table = "z,category";
    for (const auto& l : lambdas) out.table += "," + axis_label(l);
    if (baseline) out.table += "," + csv_field(baseline_label);
    out.table += "\n";

    json rows = json::array();
    for (std::size_t zi = 0; zi < sweep.grid.z_values.size(); ++zi) {
        json per_cat = json::object();
        for (int c = 0; c < 3; ++c) {
            std::string name = std::string(to_string(static_cast<Category>(c + 1)));
            out.table += "z=" + axis_label(sweep.grid.z_values[zi]) + "," + name;
            json counts = json::array();
            for (std::size_t li = 0; li < lambdas.size(); ++li) {
                std::size_t n = sweep.cell(zi, li).counts[c];
                out.table += "," + std::to_string(n) + (baseline && n != base[c] ? "*" : "");
                counts.push_back(n);
            }
            if (baseline) out.table += "," + std::to_string(base[c]);
            out.table += "\n";
            per_cat[name] = counts;
        }
        json totals = json::object();
        for (std::size_t si = 0; si < sweep.ship_ids.size(); ++si) {
            totals[sweep.ship_ids[si]] = exact_json(sweep.totals[zi][si]);
        }
        rows.push_back({{"z", exact_json(sweep.grid.z_values[zi])}, {"counts", per_cat}, {"totals", totals}});
    }
    json lj = json::array();
    for (const auto& l : lambdas) lj.push_back(exact_json(l));
    json j{{"format", "dcm-sweep-counts"}, {"version", 1}, {"lambda_values", lj}, {"rows", rows}};
    if (baseline) j["baseline"] = {{"C1", base[0]}, {"C2", base[1]}, {"C3", base[2]}};
    out.exact = j.dump(2) + "\n";
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace dcm::io
