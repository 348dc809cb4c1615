#include "dcm/case_study.hpp"

namespace dcm::case_study {

namespace {

CriterionJudgments judge(std::string cid, std::vector<std::int64_t> cards, std::string low, std::string high) {
    return {std::move(cid), std::move(cards), {}, {std::move(low), std::move(high), Exact(0), Exact(100)}};
}

}  // namespace

SessionDocument session() {
    SessionDocument doc;
    doc.provenance = {"case-study", "2018-12-31", "2018-12-31", "1.0.0"};
    doc.framework = ship_risk_framework();

    doc.judgments.push_back(judge("g1", {0}, "high", "low"));
    doc.judgments.push_back(judge("g2", {0, 2, 3, 3, 4}, "25+", "0"));
    doc.judgments.push_back(judge("g3", {2, 4}, "high", "low"));
    doc.judgments.push_back(judge("g4", {3, 4}, "more", "no"));
    doc.judgments.push_back(judge("g5", {2, 4}, "low", "high"));
    doc.judgments.push_back(judge("g6", {2, 4, 6}, "very low", "high"));
    doc.judgments.push_back(judge("g8", {3, 3}, "low", "high"));

    doc.swing_references = {
        {"g1", std::string("high"), std::string("low")},
        {"g2", Exact(25), Exact(0)},
        {"g3", std::string("high"), std::string("low")},
        {"g4", std::string("more"), std::string("no")},
        {"g5", std::string("low"), std::string("high")},
        {"g6", std::string("very low"), std::string("high")},
        {"g8", std::string("low"), std::string("high")},
    };

    doc.ranking.groups = {{"s3"}, {"s4"}, {"s6"}, {"s1"}, {"s8"}, {"s5"}, {"s2"}};
    doc.closeness.reference_action = "s2";
    doc.closeness.cards_to_reference = {{"s3", 19}, {"s4", 17}, {"s6", 14}, {"s1", 11}, {"s8", 7}, {"s5", 4}};
    // interior of the closeness matrix, away from the diagonal
    doc.closeness_direct = {
        {"s3", "s6", 4},  {"s3", "s1", 7},  {"s3", "s8", 11}, {"s3", "s5", 14}, {"s4", "s1", 5},
        {"s4", "s8", 9},  {"s4", "s5", 12}, {"s6", "s8", 6},  {"s6", "s5", 9},  {"s1", "s5", 6},
    };

    doc.z_source.kind = ZSource::Kind::indifference;
    doc.z_source.indifference_performance = Exact(15);
    doc.policy = default_policy();
    return doc;
}

std::vector<RawShipRecord> raw_fleet() {
    auto ship = [](std::string id, std::string type, int age, int def, std::string company, std::string flag,
                   std::string ro) {
        return RawShipRecord{std::move(id), std::move(type), Exact(age),  def,
                             0,             std::move(company), std::move(flag), std::move(ro)};
    };
    return {
        ship("a1", "Refrig. cargo", 18, 2, "ISM 12", "Italy", "RINA"),
        ship("a2", "Container", 17, 3, "ISM 55", "Hong Kong", "DNVGL"),
        ship("a3", "Container", 7, 11, "ISM 110", "Germany", "DNVGL"),
        ship("a4", "Bulk carrier", 2, 0, "ISM 107", "Panama", "NKK"),
        ship("a5", "Container", 10, 4, "ISM 5", "Cyprus", "DNVGL"),
        ship("a6", "Bulk carrier", 22, 15, "ISM 45", "Liberia", "NKK"),
        ship("a7", "Bulk carrier", 11, 4, "ISM 71", "Italy", "RINA"),
        ship("a8", "Bulk carrier", 15, 10, "ISM 19", "Panama", "NKK"),
        ship("a9", "General cargo", 28, 0, "ISM 24", "Barbados", "BV"),
        ship("a10", "Oil tanker", 11, 0, "ISM 3", "Singapore", "ABS"),
    };
}

ReferenceLists reference_lists() {
    ReferenceLists l;
    l.listed_ship_types = {"Chemical tanker", "Gas carrier", "Oil tanker",
                           "Bulk carrier",    "Passenger ship", "NLS tanker"};
    for (const auto* c : {"ISM 12", "ISM 55", "ISM 110", "ISM 5", "ISM 71", "ISM 19", "ISM 24"}) {
        l.company_performance[c] = "medium";
    }
    l.company_performance["ISM 107"] = "high";
    l.company_performance["ISM 3"] = "high";
    l.company_performance["ISM 45"] = "low";
    for (const auto* f : {"Italy", "Hong Kong", "Germany", "Panama", "Cyprus", "Liberia", "Barbados", "Singapore"}) {
        l.flag_bgw[f] = "white";
        if (std::string_view(f) != "Barbados") l.flag_imo_audit.insert(f);
    }
    for (const auto* ro : {"RINA", "DNVGL", "NKK", "BV", "ABS"}) {
        l.ro_performance[ro] = "high";
        l.ro_recognised.insert(ro);
    }
    return l;
}

std::map<std::string, Category> srp_baseline() {
    return {{"a6", Category::C3}};
}

namespace expected {

const std::vector<std::string> g2_points{"0.00", "5.88", "23.53", "47.06", "70.59", "100.00"};
const std::vector<std::string> g2_points_hand_rounded{"0.00", "5.88", "23.52", "47.04", "70.56", "100.00"};
const std::string g2_at_age_3 = "82.34";

const std::vector<LevelValues> discrete_value_functions{
    {"g1", {"0.00", "100.00"}},
    {"g3", {"0.00", "37.50", "100.00"}},
    {"g4", {"0.00", "44.44", "100.00"}},
    {"g5", {"0.00", "37.50", "100.00"}},
    {"g6", {"0.00", "20.00", "53.33", "100.00"}},
    {"g8", {"0.00", "50.00", "100.00"}},
};

const std::string z = "4.25";
const std::string alpha_w = "0.1625";
const std::vector<std::pair<std::string, std::string>> raw_weights{
    {"g1", "2.3"}, {"g2", "4.25"}, {"g3", "1"}, {"g4", "1.325"}, {"g5", "3.4375"}, {"g6", "1.8125"}, {"g8", "2.95"},
};
const std::vector<std::pair<std::string, std::string>> normalized_weights{
    {"g1", "0.13"}, {"g2", "0.25"}, {"g3", "0.06"}, {"g4", "0.08"}, {"g5", "0.20"}, {"g6", "0.11"}, {"g8", "0.17"},
};

const std::vector<std::string> closeness_order{"s3", "s4", "s6", "s1", "s8", "s5", "s2"};
const std::vector<std::vector<long>> closeness_matrix{
    {-1, 1, 4, 7, 11, 14, 19}, {-1, -1, 2, 5, 9, 12, 17}, {-1, -1, -1, 2, 6, 9, 14}, {-1, -1, -1, -1, 3, 6, 11},
    {-1, -1, -1, -1, -1, 2, 7}, {-1, -1, -1, -1, -1, -1, 4}, {-1, -1, -1, -1, -1, -1, -1},
};

const std::vector<PerformanceRow> performance_table{
    {"a1", {"low", "18", "low", "no", "medium", "high", "yes", "high", "yes"}},
    {"a2", {"low", "17", "low", "no", "medium", "high", "yes", "high", "yes"}},
    {"a3", {"low", "7", "medium", "no", "medium", "high", "yes", "high", "yes"}},
    {"a4", {"high", "2", "low", "no", "high", "high", "yes", "high", "yes"}},
    {"a5", {"low", "10", "low", "no", "medium", "high", "yes", "high", "yes"}},
    {"a6", {"high", "22", "medium", "no", "low", "high", "yes", "high", "yes"}},
    {"a7", {"high", "11", "low", "no", "medium", "high", "yes", "high", "yes"}},
    {"a8", {"high", "15", "medium", "no", "medium", "high", "yes", "high", "yes"}},
    {"a9", {"low", "28", "low", "no", "medium", "high", "no", "high", "yes"}},
    {"a10", {"high", "11", "low", "no", "high", "high", "yes", "high", "yes"}},
};

const std::vector<ResultRow> results{
    {Category::C1, "a4", {"0.00", "21.96", "5.86", "7.76", "20.13", "10.61", "yes", "17.28", "yes"}, "83.60"},
    {Category::C1, "a10", {"0.00", "10.54", "5.86", "7.76", "20.13", "10.61", "yes", "17.28", "yes"}, "72.18"},
    {Category::C2, "a1", {"13.47", "3.22", "5.86", "7.76", "7.55", "10.61", "yes", "17.28", "yes"}, "65.75"},
    {Category::C2, "a2", {"13.47", "4.10", "5.86", "7.76", "7.55", "10.61", "yes", "17.28", "yes"}, "66.63"},
    {Category::C2, "a3", {"13.47", "15.22", "2.20", "7.76", "7.55", "10.61", "yes", "17.28", "yes"}, "74.09"},
    {Category::C2, "a5", {"13.47", "11.71", "5.86", "7.76", "7.55", "10.61", "yes", "17.28", "yes"}, "74.24"},
    {Category::C2, "a7", {"0.00", "10.54", "5.86", "7.76", "7.55", "10.61", "yes", "17.28", "yes"}, "59.59"},
    {Category::C2, "a8", {"0.00", "5.85", "2.20", "7.76", "7.55", "10.61", "yes", "17.28", "yes"}, "51.25"},
    {Category::C2, "a9", {"13.47", "0.00", "5.86", "7.76", "7.55", "10.61", "no", "17.28", "yes"}, "62.53"},
    {Category::C3, "a6", {"0.00", "0.88", "2.20", "7.76", "0.00", "10.61", "yes", "17.28", "yes"}, "38.73"},
};

const std::vector<std::string> sweep_lambdas{"35", "36", "37", "38", "39", "40", "41", "42", "43", "44", "45"};
const std::vector<std::string> sweep_zs{"13/4", "15/4", "17/4", "19/4", "21/4"};

namespace {

std::vector<Category> row(int c2_cells) {
    std::vector<Category> out(11, Category::C3);
    for (int i = 0; i < c2_cells; ++i) out[i] = Category::C2;
    return out;
}

}  // namespace

const std::vector<std::vector<Category>> a6_sweep{row(6), row(5), row(4), row(4), row(3)};
const std::map<std::string, std::string> a6_totals_by_z{{"13/4", "40.27"}, {"21/4", "37.66"}};

const std::string hybrid_lambda_12 = "70";
const std::vector<std::string> hybrid_c1{"a3", "a4", "a5", "a10"};

}  // namespace expected

}  // namespace dcm::case_study
