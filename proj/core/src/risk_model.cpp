#include "dcm/risk_model.hpp"

#include "dcm/error.hpp"

#include <algorithm>
#include <cctype>

namespace dcm {

std::string_view to_string(CriterionKind k) {
    return k == CriterionKind::valued ? "valued" : "acceptance";
}

CriterionKind parse_criterion_kind(std::string_view text) {
    if (text == "valued") return CriterionKind::valued;
    if (text == "acceptance") return CriterionKind::acceptance;
    throw ParseError("unknown criterion kind '" + std::string(text) + "'");
}

const ScaleLevel& Criterion::level(std::string_view level_id) const {
    for (const auto& l : levels) {
        if (l.id == level_id) return l;
    }
    throw ValidationError("criterion " + id + ": unknown level '" + std::string(level_id) + "'");
}

bool Criterion::has_level(std::string_view level_id) const {
    return std::any_of(levels.begin(), levels.end(), [&](const auto& l) { return l.id == level_id; });
}

CriteriaFramework::CriteriaFramework(std::vector<PointOfView> points_of_view, std::vector<Criterion> criteria)
    : points_of_view_(std::move(points_of_view)), criteria_(std::move(criteria)) {
    std::set<std::string> ids;
    std::set<std::string> codes;
    for (auto& c : criteria_) {
        if (!ids.insert(c.id).second) throw ValidationError("duplicate criterion id '" + c.id + "'");
        if (!codes.insert(c.code).second) throw ValidationError("duplicate criterion code '" + c.code + "'");
        if (c.levels.size() < 2) throw ValidationError("criterion " + c.id + " needs at least two levels");
        for (std::size_t i = 0; i < c.levels.size(); ++i) c.levels[i].ordinal = static_cast<int>(i);
    }
}

const Criterion& CriteriaFramework::criterion(std::string_view id) const {
    for (const auto& c : criteria_) {
        if (c.id == id) return c;
    }
    throw ValidationError("unknown criterion '" + std::string(id) + "'");
}

bool CriteriaFramework::contains(std::string_view id) const {
    return std::any_of(criteria_.begin(), criteria_.end(), [&](const auto& c) { return c.id == id; });
}

std::vector<std::string> CriteriaFramework::valued_criteria() const {
    std::vector<std::string> out;
    for (const auto& c : criteria_) {
        if (c.kind == CriterionKind::valued) out.push_back(c.id);
    }
    return out;
}

namespace {

ScaleLevel lvl(std::string id, std::string label) {
    return {std::move(id), std::move(label), 0, std::nullopt};
}

ScaleLevel age(std::string id, std::string label, int years) {
    return {std::move(id), std::move(label), 0, Exact(years)};
}

}  // namespace

CriteriaFramework ship_risk_framework() {
    std::vector<PointOfView> pvs{
        {"PV-SC&H", "Ship Characteristics and History",
         {{"SA-CHAR", "Ship Characteristics"}, {"SA-HIST", "Ship History"}}},
        {"PV-SR&C", "Ship Registration and Classification",
         {{"SA-COMP", "Ship Company"}, {"SA-FLAG", "Ship Flag State"}, {"SA-RECO", "Recognised Organisation"}}},
    };

    std::vector<Criterion> cs;
    cs.push_back({"g1", "ACCI", "Ship accident consequences", "PV-SC&H", "SA-CHAR", Direction::minimize,
                  CriterionKind::valued, false,
                  {lvl("high", "listed high-consequence ship types"), lvl("low", "other ship types")},
                  std::nullopt});
    cs.push_back({"g2", "AGES", "Age of ship", "PV-SC&H", "SA-CHAR", Direction::minimize, CriterionKind::valued,
                  true,
                  {age("25+", "25 years old or older", 25), age("20", "20 years old", 20),
                   age("15", "15 years old", 15), age("10", "10 years old", 10), age("5", "5 years old", 5),
                   age("0", "new ship", 0)},
                  Exact(0)});
    cs.push_back({"g3", "DEFC", "Deficiencies", "PV-SC&H", "SA-HIST", Direction::minimize, CriterionKind::valued,
                  false,
                  {lvl("high", "not eligible: no inspection in the last 36 months"),
                   lvl("medium", "more than 5 deficiencies in the last 36 months"),
                   lvl("low", "5 deficiencies or fewer in the last 36 months")},
                  std::nullopt});
    cs.push_back({"g4", "DETN", "Detentions", "PV-SC&H", "SA-HIST", Direction::minimize, CriterionKind::valued,
                  false,
                  {lvl("more", "two detentions or more in the last 36 months"),
                   lvl("one", "one detention in the last 36 months"),
                   lvl("no", "no detentions in the last 36 months")},
                  std::nullopt});
    cs.push_back({"g5", "COPF", "Company performance", "PV-SR&C", "SA-COMP", Direction::maximize,
                  CriterionKind::valued, false,
                  {lvl("low", "very low or low company performance"), lvl("medium", "medium company performance"),
                   lvl("high", "high company performance")},
                  std::nullopt});
    cs.push_back({"g6", "FLPF", "Flag performance", "PV-SR&C", "SA-FLAG", Direction::maximize,
                  CriterionKind::valued, false,
                  {lvl("very low", "Black list, medium-to-high risk or worse"),
                   lvl("low", "Black list, medium risk"), lvl("medium", "Grey list or not listed"),
                   lvl("high", "White list")},
                  std::nullopt});
    cs.push_back({"g7", "FLIA", "Fulfilment of the IMO Audit", "PV-SR&C", "SA-FLAG", Direction::maximize,
                  CriterionKind::acceptance, false,
                  {lvl("no", "flag State does not fulfil the audit report requirement"),
                   lvl("yes", "flag State fulfils the audit report requirement")},
                  std::nullopt});
    cs.push_back({"g8", "ROPF", "Recognised Organisation performance", "PV-SR&C", "SA-RECO",
                  Direction::maximize, CriterionKind::valued, false,
                  {lvl("low", "very low or low RO performance"), lvl("medium", "medium RO performance"),
                   lvl("high", "high RO performance")},
                  std::nullopt});
    cs.push_back({"g9", "RORE", "Recognition of the RO by at least one member State", "PV-SR&C", "SA-RECO",
                  Direction::maximize, CriterionKind::acceptance, false,
                  {lvl("no", "RO not recognised by any member State"),
                   lvl("yes", "RO recognised by one member State or more")},
                  std::nullopt});
    return CriteriaFramework(std::move(pvs), std::move(cs));
}

std::string performance_text(const Performance& p) {
    if (const auto* s = std::get_if<std::string>(&p)) return *s;
    const auto& e = std::get<Exact>(p);
    return boost::multiprecision::denominator(e) == 1 ? to_ratio_string(e) : format_fixed(e, 2);
}

const Performance& PerformanceRecord::at(std::string_view criterion_id) const {
    auto it = levels.find(std::string(criterion_id));
    if (it == levels.end()) {
        throw ValidationError("ship " + ship_id + ": no performance on criterion " + std::string(criterion_id));
    }
    return it->second;
}

const std::string& PerformanceRecord::level(std::string_view criterion_id) const {
    const auto& p = at(criterion_id);
    if (const auto* s = std::get_if<std::string>(&p)) return *s;
    throw ValidationError("ship " + ship_id + ": criterion " + std::string(criterion_id) +
                          " carries a numeric performance, not a level");
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

// very low / low -> low, medium, high
std::string three_level(const std::string& token, const std::string& what) {
    std::string t = lower(token);
    if (t == "very low" || t == "low") return "low";
    if (t == "medium") return "medium";
    if (t == "high") return "high";
    throw ValidationError("unknown " + what + " performance token '" + token + "'");
}

std::string flag_level(const std::string& token) {
    std::string t = lower(token);
    if (t == "very low" || t == "low" || t == "medium" || t == "high") return t;
    if (t == "white") return "high";
    if (t == "grey" || t == "gray") return "medium";
    if (t == "black-medium") return "low";
    if (t == "black-medium-to-high" || t == "black-high" || t == "black-very-high") return "very low";
    throw ValidationError("unknown flag performance token '" + token + "'");
}

}  // namespace

MappedRecord map_raw_to_performance(const RawShipRecord& raw, const ReferenceLists& lists,
                                    const MappingOptions& options) {
    if (raw.age < 0) throw ValidationError("ship " + raw.ship_id + ": negative age");
    if (raw.deficiency_count && *raw.deficiency_count < 0) {
        throw ValidationError("ship " + raw.ship_id + ": negative deficiency count");
    }
    if (raw.detention_count < 0) throw ValidationError("ship " + raw.ship_id + ": negative detention count");

    MappedRecord out;
    auto& rec = out.record;
    rec.ship_id = raw.ship_id;

    bool listed = false;
    for (const auto& t : lists.listed_ship_types) {
        if (lower(t) == lower(raw.type)) listed = true;
    }
    rec.levels["g1"] = std::string(listed ? "high" : "low");
    rec.levels["g2"] = raw.age;

    if (!raw.deficiency_count) rec.levels["g3"] = std::string("high");
    else rec.levels["g3"] = std::string(*raw.deficiency_count <= 5 ? "low" : "medium");

    rec.levels["g4"] = std::string(raw.detention_count == 0 ? "no" : raw.detention_count == 1 ? "one" : "more");

    if (auto it = lists.company_performance.find(raw.ism_company); it != lists.company_performance.end()) {
        rec.levels["g5"] = three_level(it->second, "company");
    } else if (options.lenient) {
        rec.levels["g5"] = std::string("low");
        out.warnings.push_back("ship " + raw.ship_id + ": company '" + raw.ism_company +
                               "' not in the company performance list; using worst level");
    } else {
        throw MissingDataError("ship " + raw.ship_id + ": company '" + raw.ism_company +
                               "' not in the company performance list");
    }

    // Flags absent from the BGW list count as medium.
    if (auto it = lists.flag_bgw.find(raw.flag_state); it != lists.flag_bgw.end()) {
        rec.levels["g6"] = flag_level(it->second);
    } else {
        rec.levels["g6"] = std::string("medium");
    }
    rec.levels["g7"] = std::string(lists.flag_imo_audit.contains(raw.flag_state) ? "yes" : "no");

    if (auto it = lists.ro_performance.find(raw.recognised_organisation); it != lists.ro_performance.end()) {
        rec.levels["g8"] = three_level(it->second, "RO");
    } else if (options.lenient) {
        rec.levels["g8"] = std::string("low");
        out.warnings.push_back("ship " + raw.ship_id + ": RO '" + raw.recognised_organisation +
                               "' not in the RO performance list; using worst level");
    } else {
        throw MissingDataError("ship " + raw.ship_id + ": RO '" + raw.recognised_organisation +
                               "' not in the RO performance list");
    }
    rec.levels["g9"] = std::string(lists.ro_recognised.contains(raw.recognised_organisation) ? "yes" : "no");
    return out;
}

void validate_performance(const PerformanceRecord& record, const CriteriaFramework& framework) {
    for (const auto& c : framework.criteria()) {
        const auto& p = record.at(c.id);
        if (c.continuous) {
            const auto* value = std::get_if<Exact>(&p);
            if (!value) {
                throw ValidationError("ship " + record.ship_id + ": criterion " + c.id + " needs a numeric performance");
            }
            if (c.domain_min && *value < *c.domain_min) {
                throw ValidationError("ship " + record.ship_id + ": criterion " + c.id + " below its domain");
            }
        } else {
            const auto* level = std::get_if<std::string>(&p);
            if (!level || !c.has_level(*level)) {
                throw ValidationError("ship " + record.ship_id + ": '" + performance_text(p) +
                                      "' is not a level of criterion " + c.id);
            }
        }
    }
    for (const auto& [id, _] : record.levels) {
        if (!framework.contains(id)) {
            throw ValidationError("ship " + record.ship_id + ": unknown criterion '" + id + "'");
        }
    }
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::C1: return "C1";
        case Category::C2: return "C2";
        case Category::C3: return "C3";
    }
    return "C3";
}

Category parse_category(std::string_view text) {
    std::string t = lower(text);
    if (t == "c1" || t == "lrs") return Category::C1;
    if (t == "c2" || t == "srs") return Category::C2;
    if (t == "c3" || t == "hrs") return Category::C3;
    throw ParseError("unknown category '" + std::string(text) + "'");
}

ClassificationPolicy default_policy() {
    ClassificationPolicy p;
    p.c1_rules = {{"g3", "low"}, {"g4", "no"}, {"g5", "high"}, {"g6", "high"},
                  {"g7", "yes"}, {"g8", "high"}, {"g9", "yes"}};
    p.lambda_23 = 40;
    return p;
}

void validate_policy(const ClassificationPolicy& policy, const CriteriaFramework& framework) {
    for (const auto& [cid, level] : policy.c1_rules) {
        const auto& c = framework.criterion(cid);
        if (c.continuous) throw ValidationError("C1 rule on continuous criterion " + cid + " is not supported");
        c.level(level);
    }
    for (const auto& cid : policy.hybrid_rule_criteria) {
        if (!policy.c1_rules.contains(cid)) {
            throw ValidationError("hybrid rule criterion " + cid + " has no C1 rule");
        }
    }
    if (policy.lambda_12 && !(*policy.lambda_12 > policy.lambda_23)) {
        throw ValidationError("lambda_12 must exceed lambda_23");
    }
}

const ValueFunction& AdditiveModel::value_function(std::string_view criterion_id) const {
    for (const auto& vf : value_functions) {
        if (vf.criterion_id() == criterion_id) return vf;
    }
    throw ValidationError("no value function for criterion '" + std::string(criterion_id) + "'");
}

ClassificationResult aggregate(const PerformanceRecord& record, const CriteriaFramework& framework,
                               const AdditiveModel& model) {
    ClassificationResult out;
    out.ship_id = record.ship_id;
    out.total = 0;
    for (const auto& c : framework.criteria()) {
        if (c.kind != CriterionKind::valued) continue;
        const auto& vf = model.value_function(c.id);
        const auto& w = model.weights.at(c.id);
        const auto& p = record.at(c.id);
        Exact value = std::holds_alternative<Exact>(p) ? vf.evaluate(std::get<Exact>(p))
                                                      : vf.evaluate(std::get<std::string>(p));
        Exact contribution = w.normalized * value;
        out.total += contribution;
        out.contributions.push_back({c.id, std::move(value), std::move(contribution)});
    }
    return out;
}

namespace {

bool meets(const Criterion& c, const std::string& actual, const std::string& required) {
    return c.level(actual).ordinal >= c.level(required).ordinal;
}

}  // namespace

Classification classify(const Exact& total, const PerformanceRecord& record, const ClassificationPolicy& policy,
                        const CriteriaFramework& framework) {
    Classification out;
    if (policy.g3_high_override && record.level("g3") == "high") {
        out.category = Category::C3;
        out.rule_trace.push_back("g3 = high: not eligible, forced C3");
        return out;
    }

    bool c1 = true;
    if (policy.lambda_12) {
        for (const auto& cid : policy.hybrid_rule_criteria) {
            const auto& required = policy.c1_rules.at(cid);
            const auto& actual = record.level(cid);
            if (!meets(framework.criterion(cid), actual, required)) {
                c1 = false;
                out.rule_trace.push_back("C1 rule " + cid + " requires " + required + ", got " + actual);
            }
        }
        if (!(total > *policy.lambda_12)) {
            c1 = false;
            out.rule_trace.push_back("total " + format_fixed(total) + " not above lambda_12 " +
                                     format_fixed(*policy.lambda_12));
        }
    } else {
        for (const auto& [cid, required] : policy.c1_rules) {
            const auto& actual = record.level(cid);
            if (!meets(framework.criterion(cid), actual, required)) {
                c1 = false;
                out.rule_trace.push_back("C1 rule " + cid + " requires " + required + ", got " + actual);
            }
        }
    }
    if (c1) {
        out.category = Category::C1;
        out.rule_trace.push_back("all C1 rules satisfied");
        return out;
    }
    if (total > policy.lambda_23) {
        out.category = Category::C2;
        out.rule_trace.push_back("total " + format_fixed(total) + " above lambda_23 " + format_fixed(policy.lambda_23));
    } else {
        out.category = Category::C3;
        out.rule_trace.push_back("total " + format_fixed(total) + " at or below lambda_23 " +
                                 format_fixed(policy.lambda_23));
    }
    return out;
}

BatchResult classify_batch(std::span<const PerformanceRecord> fleet, const CriteriaFramework& framework,
                           const AdditiveModel& model, const ClassificationPolicy& policy) {
    BatchResult out;
    out.results.reserve(fleet.size());
    for (const auto& record : fleet) {
        try {
            validate_performance(record, framework);
            auto result = aggregate(record, framework, model);
            auto cls = classify(result.total, record, policy, framework);
            result.category = cls.category;
            result.rule_trace = std::move(cls.rule_trace);
            ++out.counts[static_cast<int>(result.category) - 1];
            out.results.push_back(std::move(result));
        } catch (const Error& e) {
            out.errors.push_back({record.ship_id, e.what()});
        }
    }
    return out;
}

}  // namespace dcm
