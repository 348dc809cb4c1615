#include "dcm/case_study.hpp"
#include "dcm/error.hpp"
#include "dcm/io.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

using namespace dcm;
using dcm::test::Gen;

namespace {

const std::filesystem::path kData = DCM_CASE_DATA_DIR;

const CriteriaFramework& framework() {
    static const CriteriaFramework fw = ship_risk_framework();
    return fw;
}

const std::string kRawHeader = "ship,type,age,deficiencies,detentions,ism_company,flag,recognised_organisation\n";

ParseError fleet_error(const std::string& text, io::FleetOptions options = {}) {
    try {
        io::parse_fleet(std::string_view(text), framework(), options);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no parse error for:\n" << text;
    return ParseError("none");
}

std::vector<PerformanceRecord> case_records() {
    std::vector<PerformanceRecord> out;
    for (const auto& raw : case_study::raw_fleet()) {
        out.push_back(map_raw_to_performance(raw, case_study::reference_lists()).record);
    }
    return out;
}

std::string random_text(Gen& g) {
    static const std::vector<std::string> parts{"a", "Z", " ", "\"", "\\", ",", "\n", "é", "{", "0"};
    std::string s;
    auto n = g.int_in(0, 8);
    for (std::int64_t i = 0; i < n; ++i) s += g.pick(parts);
    return s;
}

// Case-study skeleton with every judgment, reference, ranking and policy field redrawn.
SessionDocument random_session(Gen& g) {
    auto doc = case_study::session();
    doc.provenance = {random_text(g), random_text(g), random_text(g), random_text(g)};
    for (auto& j : doc.judgments) {
        const auto& levels = doc.framework.criterion(j.criterion_id).levels;
        j.adjacent_cards = g.cards(levels.size() - 1, 15);
        auto lo = static_cast<std::size_t>(g.int_in(0, static_cast<std::int64_t>(levels.size()) - 2));
        auto hi = static_cast<std::size_t>(g.int_in(static_cast<std::int64_t>(lo) + 1,
                                                    static_cast<std::int64_t>(levels.size()) - 1));
        j.references = {levels[lo].id, levels[hi].id, g.ratio(-20, 20), 0};
        j.references.high_value = j.references.low_value + g.ratio(1, 150, 30);
        j.direct_judgments.clear();
        if (levels.size() > 2 && g.coin()) j.direct_judgments.push_back({levels[0].id, levels[2].id, g.int_in(0, 9)});
    }
    for (auto& s : doc.swing_references) {
        if (s.criterion_id == "g2") {
            s.worst = Exact(g.int_in(20, 40));
            s.best = g.ratio(0, 5);
        }
    }
    std::vector<std::string> ids{"s1", "s2", "s3", "s4", "s5", "s6", "s8"};
    std::shuffle(ids.begin(), ids.end(), g.engine());
    doc.ranking.groups.clear();
    for (const auto& id : ids) {
        if (!doc.ranking.groups.empty() && g.coin(0.25)) doc.ranking.groups.back().push_back(id);
        else doc.ranking.groups.push_back({id});
    }
    doc.closeness.reference_action = doc.ranking.groups.back().front();
    doc.closeness.cards_to_reference.clear();
    std::int64_t c = g.int_in(0, 4);
    for (std::size_t i = doc.ranking.groups.size() - 1; i-- > 0;) {
        for (const auto& id : doc.ranking.groups[i]) doc.closeness.cards_to_reference[id] = c;
        c += g.int_in(1, 5);
    }
    doc.closeness_direct.clear();
    if (g.coin()) doc.closeness_direct.push_back({ids[0], ids[1], g.int_in(0, 30)});
    if (g.coin()) {
        doc.z_source.kind = ZSource::Kind::explicit_value;
        doc.z_source.value = 1 + g.ratio(0, 10);
        doc.z_source.indifference_performance = std::string();
    } else {
        doc.z_source.kind = ZSource::Kind::indifference;
        doc.z_source.indifference_performance = g.ratio(0, 25);
    }
    doc.policy.lambda_23 = g.ratio(0, 100);
    doc.policy.lambda_12 = g.coin() ? std::optional<Exact>(g.ratio(0, 100)) : std::nullopt;
    doc.policy.g3_high_override = g.coin();
    if (g.coin()) doc.policy.c1_rules.erase("g6");
    return doc;
}

}  // namespace

// ---- CSV ----

TEST(Csv, QuotesAndCrlf) {
    std::istringstream in("a,\"b,c\",\"say \"\"hi\"\"\"\r\n\r\nx,y,z\n");
    auto rows = io::read_csv(in);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"a", "b,c", "say \"hi\""}));
    EXPECT_EQ(rows[1].line, 3u);
    EXPECT_EQ(io::csv_field("b,c"), "\"b,c\"");
    EXPECT_EQ(io::csv_field("plain"), "plain");
}

TEST(Csv, UnterminatedQuote) {
    std::istringstream in("a,\"b\n");
    EXPECT_THROW(io::read_csv(in), ParseError);
}

// ---- fleets ----

TEST(Fleet, ParsesRawFixture) {
    auto fleet = io::read_fleet_file(kData / "fleet_raw.csv", framework());
    EXPECT_EQ(fleet.mode, io::FleetMode::raw);
    EXPECT_EQ(fleet.raw, case_study::raw_fleet());
}

TEST(Fleet, ParsesPerformanceFixture) {
    auto fleet = io::read_fleet_file(kData / "fleet_performance.csv", framework());
    EXPECT_EQ(fleet.mode, io::FleetMode::performance);
    EXPECT_EQ(fleet.performance, case_records());
}

TEST(Fleet, NegativeAgeReportsLineAndColumn) {
    auto e = fleet_error(kRawHeader + "a1,Container,7,1,0,ISM 1,Italy,RINA\na2,Container,-3,1,0,ISM 1,Italy,RINA\n");
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_NE(std::string(e.what()).find("age"), std::string::npos);
}

TEST(Fleet, MalformedCounts) {
    auto e = fleet_error(kRawHeader + "a1,Container,7,two,0,ISM 1,Italy,RINA\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 4u);
    auto d = fleet_error(kRawHeader + "a1,Container,7,1,-1,ISM 1,Italy,RINA\n");
    EXPECT_EQ(d.column(), 5u);
}

TEST(Fleet, NotEligibleDeficiencies) {
    auto fleet = io::parse_fleet(std::string_view(kRawHeader + "a1,Container,7,NE,0,ISM 1,Italy,RINA\n"), framework());
    ASSERT_EQ(fleet.raw.size(), 1u);
    EXPECT_FALSE(fleet.raw[0].deficiency_count.has_value());
}

TEST(Fleet, StructuralErrors) {
    EXPECT_EQ(fleet_error(kRawHeader + "a1,Container,7,1,0,ISM 1,Italy\n").line(), 2u);
    EXPECT_EQ(fleet_error(kRawHeader + "a1,Container,7,1,0,ISM 1,Italy,RINA\na1,Bulk,7,1,0,ISM 1,Italy,RINA\n").line(),
              3u);
    auto unknown = fleet_error("ship,type,age,deficiencies,detentions,ism_company,flag,recognised_organisation,x\n");
    EXPECT_EQ(unknown.line(), 1u);
    EXPECT_EQ(unknown.column(), 9u);
    EXPECT_EQ(fleet_error("ship,type,age\n").line(), 1u);
    EXPECT_EQ(fleet_error("").line(), 1u);
    EXPECT_EQ(fleet_error("ship,g1,g1\n").column(), 3u);
}

TEST(Fleet, UnknownColumnsAllowedWhenNotStrict) {
    io::FleetOptions loose;
    loose.strict = false;
    auto fleet = io::parse_fleet(std::string_view("ship,type,age,deficiencies,detentions,ism_company,flag,"
                                                  "recognised_organisation,imo\na1,Container,7,1,0,ISM 1,Italy,RINA,9\n"),
                                 framework(), loose);
    EXPECT_EQ(fleet.raw.size(), 1u);
}

TEST(Fleet, PerformanceLevelErrors) {
    const std::string header = "ship,g1,g2,g3,g4,g5,g6,g7,g8,g9\n";
    auto e = fleet_error(header + "a1,low,18,low,no,superb,high,yes,high,yes\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 6u);
    EXPECT_EQ(fleet_error(header + "a1,low,-1,low,no,high,high,yes,high,yes\n").column(), 3u);
    auto ok = io::parse_fleet(std::string_view(header + "a1,LOW,7/2,low,no,high,high,yes,high,yes\n"), framework());
    EXPECT_EQ(ok.performance[0].level("g1"), "low");
    EXPECT_EQ(std::get<Exact>(ok.performance[0].at("g2")), Exact(7, 2));
}

TEST(Fleet, HeaderOnlyIsEmpty) {
    auto fleet = io::parse_fleet(std::string_view(kRawHeader), framework());
    EXPECT_TRUE(fleet.raw.empty());
}

TEST(Fleet, WriteParseRoundTrip) {
    auto raw = case_study::raw_fleet();
    raw[0].type = "Refrig., \"reefer\"";
    raw[1].deficiency_count = std::nullopt;
    raw[2].age = Exact(15, 2);
    EXPECT_EQ(io::parse_fleet(std::string_view(io::write_raw_fleet(raw)), framework()).raw, raw);
    auto perf = case_records();
    EXPECT_EQ(io::parse_fleet(std::string_view(io::write_performance_fleet(perf, framework())), framework()).performance,
              perf);
}

TEST(Fleet, ResolveNeedsListsForRawFleets) {
    io::Fleet fleet;
    fleet.mode = io::FleetMode::raw;
    fleet.raw = case_study::raw_fleet();
    EXPECT_THROW(io::resolve_fleet(fleet, nullptr), ValidationError);
    ReferenceLists empty;
    EXPECT_THROW(io::resolve_fleet(fleet, &empty), MissingDataError);
    auto lenient = io::resolve_fleet(fleet, &empty, {true});
    EXPECT_EQ(lenient.records.size(), 10u);
    EXPECT_EQ(lenient.warnings.size(), 20u);
    EXPECT_EQ(lenient.records[0].level("g6"), "medium");
    EXPECT_EQ(io::missing_reference_entries(empty, fleet.raw).size(), 20u);
    EXPECT_TRUE(io::missing_reference_entries(case_study::reference_lists(), fleet.raw).empty());
}

// ---- reference lists and baselines ----

TEST(ReferenceLists, FixtureAndRoundTrip) {
    auto lists = io::parse_reference_lists(io::read_file(kData / "reference_lists.json"));
    EXPECT_EQ(lists, case_study::reference_lists());
    EXPECT_EQ(io::parse_reference_lists(io::serialize_reference_lists(lists)), lists);
}

TEST(ReferenceLists, DuplicateKeyIsRejected) {
    try {
        io::parse_reference_lists(R"({"flag_bgw": {"Italy": "white", "Italy": "grey"}})");
        FAIL() << "duplicate key accepted";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("duplicate key 'Italy'"), std::string::npos) << e.what();
    }
}

TEST(ReferenceLists, SchemaErrors) {
    EXPECT_THROW(io::parse_reference_lists(R"({"flags": {}})"), ParseError);
    EXPECT_THROW(io::parse_reference_lists(R"({"company_performance": {"ISM 1": "great"}})"), ParseError);
    EXPECT_THROW(io::parse_reference_lists(R"({"ro_recognised": ["BV", "BV"]})"), ParseError);
    EXPECT_THROW(io::parse_reference_lists("[1, 2"), ParseError);
}

TEST(Baseline, Parse) {
    EXPECT_EQ(io::parse_baseline(io::read_file(kData / "srp_baseline.csv")), case_study::srp_baseline());
    EXPECT_THROW(io::parse_baseline("ship,cat\na1,C1\n"), ParseError);
    EXPECT_THROW(io::parse_baseline("ship,category\na1,C4\n"), ParseError);
    EXPECT_THROW(io::parse_baseline("ship,category\na1,C1\na1,C2\n"), ParseError);
}

// ---- sessions ----

TEST(Session, FixtureMatchesProgrammaticSession) {
    EXPECT_EQ(io::load_session(io::read_file(kData / "session.json")), case_study::session());
}

TEST(Session, RoundTripIsByteStable) {
    auto text = io::save_session(case_study::session());
    EXPECT_EQ(io::save_session(io::load_session(text)), text);
}

TEST(Session, VersionMismatch) {
    auto text = io::save_session(case_study::session());
    auto pos = text.find("\"version\": 1");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 12, "\"version\": 2");
    try {
        io::load_session(text);
        FAIL() << "version 2 accepted";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("version mismatch"), std::string::npos);
    }
}

TEST(Session, TamperedClosenessLoadsButIsFlagged) {
    auto doc = case_study::session();
    for (auto& j : doc.closeness_direct) {
        if (j.from == "s3" && j.to == "s1") j.cards = 8;
    }
    auto loaded = io::load_session(io::save_session(doc));
    auto report = validate_session(loaded);
    ASSERT_FALSE(report.ok());
    ASSERT_FALSE(report.violations.empty());
    EXPECT_EQ(report.violations.front().scope, "closeness");
    EXPECT_THROW(derive(loaded), ValidationError);
}

TEST(Session, SchemaViolations) {
    EXPECT_THROW(io::load_session("{}"), ParseError);
    EXPECT_THROW(io::load_session(R"({"format": "dcm-session", "version": 1})"), ParseError);
    auto text = io::save_session(case_study::session());
    auto pos = text.find("\"lambda_23\": \"40\"");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 17, "\"lambda_23\": 40.5");
    EXPECT_THROW(io::load_session(text), ParseError);
}

TEST(SessionProperties, RoundTripPreservesEveryField) {
    EXPECT_TRUE(test::for_all("session round trip", 200, 51, [](Gen& g, std::string& why) {
        auto doc = random_session(g);
        auto text = io::save_session(doc);
        auto back = io::load_session(text);
        if (!(back == doc)) {
            why = "document changed:\n" + text;
            return false;
        }
        if (io::save_session(back) != text) {
            why = "second save differs";
            return false;
        }
        return true;
    }));
}

// ---- exports ----

TEST(Export, ResultsTableAndExactReimport) {
    auto doc = case_study::session();
    auto fleet = case_records();
    auto m = derive(doc);
    auto batch = classify_batch(fleet, doc.framework, m.model(), doc.policy);
    auto ex = io::export_results(batch, fleet, doc.framework, {{{"lambda_23", "40"}}});
    std::istringstream table(ex.table);
    std::string line;
    std::getline(table, line);
    EXPECT_EQ(line, "Category,Ship,g1,g2,g3,g4,g5,g6,g7,g8,g9,Total");
    std::getline(table, line);
    EXPECT_EQ(line, "C1,a4,0.00,21.96,5.86,7.76,20.13,10.61,yes,17.28,yes,83.60");

    auto rows = io::parse_exact_results(ex.exact);
    ASSERT_EQ(rows.size(), batch.results.size());
    for (const auto& row : rows) {
        auto it = std::find_if(batch.results.begin(), batch.results.end(),
                               [&](const auto& r) { return r.ship_id == row.ship_id; });
        ASSERT_NE(it, batch.results.end());
        EXPECT_EQ(row.total, it->total);
        EXPECT_EQ(row.category, it->category);
        for (const auto& c : it->contributions) EXPECT_EQ(row.contributions.at(c.criterion_id), c.contribution);
    }
}

TEST(Export, EmptyBatchWritesHeaderOnly) {
    BatchResult empty;
    auto ex = io::export_results(empty, {}, framework());
    EXPECT_EQ(ex.table, "Category,Ship,g1,g2,g3,g4,g5,g6,g7,g8,g9,Total\n");
    EXPECT_TRUE(io::parse_exact_results(ex.exact).empty());
}

TEST(Export, SweepShipMarksBaselineDifferences) {
    auto fleet = case_records();
    auto s = sweep(fleet, case_study::session(), ScenarioGrid::default_grid());
    auto ex = io::export_sweep_ship(s, "a6", Category::C3);
    std::istringstream in(ex.table);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "z,35,36,37,38,39,40,41,42,43,44,45,SRP");
    std::getline(in, line);
    EXPECT_EQ(line, "z=3.25,C2*,C2*,C2*,C2*,C2*,C2*,C3,C3,C3,C3,C3,C3");
    auto counts = io::export_sweep_counts(s);
    EXPECT_EQ(counts.table.substr(0, counts.table.find('\n')), "z,category,35,36,37,38,39,40,41,42,43,44,45");
}

TEST(Files, MissingFileIsAnError) {
    EXPECT_THROW(io::read_file("/nonexistent/session.json"), Error);
    EXPECT_THROW(io::write_file("/nonexistent/dir/out.csv", "x"), Error);
}
