#include "dcm/error.hpp"
#include "dcm/risk_model.hpp"
#include "dcm/scale.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace dcm;
using dcm::test::Gen;

namespace {

ComparisonTable g2_table() {
    auto fw = ship_risk_framework();
    return fill_transitive(ComparisonTable::create("g2", fw.criterion("g2").levels, {0, 2, 3, 3, 4}));
}

ValueFunction g2_function() {
    return build_value_function(g2_table(), {"25+", "0", 0, 100}, ValueFunctionKind::piecewise_linear,
                                Direction::minimize);
}

}  // namespace

TEST(ComparisonTable, KeepsAdjacentDiagonal) {
    auto t = g2_table();
    ASSERT_EQ(t.size(), 6u);
    std::vector<std::int64_t> diag;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) diag.push_back(t.cards(i, i + 1));
    EXPECT_EQ(diag, (std::vector<std::int64_t>{0, 2, 3, 3, 4}));
}

TEST(ComparisonTable, TwoLevelScaleWithOneAdjacency) {
    auto t = fill_transitive(ComparisonTable::create("g1", test::plain_levels(2), {0}));
    EXPECT_EQ(t.cards(0, 1), 0);
}

TEST(ComparisonTable, RejectsNegativeCards) {
    try {
        ComparisonTable::create("g2", test::plain_levels(6), {0, 2, 3, 3, -1});
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("negative card count"), std::string::npos);
    }
}

TEST(ComparisonTable, RejectsWrongAdjacencyCount) {
    EXPECT_THROW(ComparisonTable::create("x", test::plain_levels(4), {1, 2}), ValidationError);
    EXPECT_THROW(ComparisonTable::create("x", test::plain_levels(1), {}), ValidationError);
}

TEST(ComparisonTable, RejectsDuplicateLevels) {
    auto levels = test::plain_levels(3);
    levels[2].id = "l0";
    EXPECT_THROW(ComparisonTable::create("x", levels, {0, 0}), ValidationError);
}

TEST(FillTransitive, StepFiveExample) {
    auto t = g2_table();
    EXPECT_EQ(t.cards("25+", "15"), 3);
    EXPECT_EQ(t.cards("25+", "0"), 16);
}

TEST(FillTransitive, MatchesPublishedMatrix) {
    auto t = g2_table();
    const std::vector<std::vector<std::int64_t>> rows{
        {0, 3, 7, 11, 16}, {2, 6, 10, 15}, {3, 7, 12}, {3, 8}, {4}};
    for (std::size_t p = 0; p < rows.size(); ++p) {
        for (std::size_t j = 0; j < rows[p].size(); ++j) EXPECT_EQ(t.cards(p, p + 1 + j), rows[p][j]);
    }
}

TEST(FillTransitive, ThreeLevels) {
    for (std::int64_t a = 0; a < 5; ++a) {
        for (std::int64_t b = 0; b < 5; ++b) {
            auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(3), {a, b}));
            EXPECT_EQ(t.cards(0, 2), a + b + 1);
        }
    }
}

TEST(FillTransitive, UnfilledTableRefusesNonAdjacentLookup) {
    auto t = ComparisonTable::create("x", test::plain_levels(3), {1, 1});
    EXPECT_FALSE(t.is_filled());
    EXPECT_EQ(t.cards(0, 1), 1);
    EXPECT_THROW(t.cards(0, 2), ValidationError);
}

TEST(Consistency, FreshTableIsConsistent) {
    EXPECT_TRUE(validate_consistency(g2_table()).ok());
}

TEST(Consistency, OverriddenEntryReportsTriple) {
    std::vector<CardJudgment> extra{{"25+", "10", 5}};
    auto report = validate_consistency(g2_table(), extra);
    ASSERT_FALSE(report.ok());
    const auto& v = report.violations.front();
    EXPECT_EQ(v.kind, ConsistencyViolation::Kind::transitivity);
    EXPECT_EQ(v.p_id, "25+");
    EXPECT_EQ(v.k_id, "20");
    EXPECT_EQ(v.q_id, "10");
    EXPECT_EQ(v.actual, 5);
    EXPECT_EQ(v.expected, 7);
}

TEST(Consistency, ClosenessMatrixIsConsistent) {
    // swings worst to best with the full upper triangle supplied
    std::vector<ScaleLevel> levels;
    for (auto id : {"s3", "s4", "s6", "s1", "s8", "s5", "s2"}) levels.push_back({id, id, 0, std::nullopt});
    auto t = fill_transitive(ComparisonTable::create("closeness", levels, {1, 2, 2, 3, 2, 4}));
    const std::vector<std::vector<std::int64_t>> rows{
        {1, 4, 7, 11, 14, 19}, {2, 5, 9, 12, 17}, {2, 6, 9, 14}, {3, 6, 11}, {2, 7}, {4}};
    std::vector<CardJudgment> all;
    for (std::size_t p = 0; p < rows.size(); ++p) {
        for (std::size_t j = 0; j < rows[p].size(); ++j) {
            all.push_back({levels[p].id, levels[p + 1 + j].id, rows[p][j]});
        }
    }
    EXPECT_TRUE(validate_consistency(t, all).ok());
}

TEST(Consistency, BackwardJudgmentIsRejected) {
    std::vector<CardJudgment> extra{{"0", "25+", 3}};
    EXPECT_THROW(validate_consistency(g2_table(), extra), ValidationError);
}

TEST(Alpha, AgeScale) {
    EXPECT_EQ(compute_alpha(g2_table(), {"25+", "0", 0, 100}), Exact(100, 17));
}

TEST(Alpha, DeficiencyScale) {
    auto fw = ship_risk_framework();
    auto t = fill_transitive(ComparisonTable::create("g3", fw.criterion("g3").levels, {2, 4}));
    EXPECT_EQ(compute_alpha(t, {"high", "low", 0, 100}), Exact(25, 2));
}

TEST(Alpha, SingleUnit) {
    auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(2), {0}));
    EXPECT_EQ(compute_alpha(t, {"l0", "l1", 0, 100}), Exact(100));
}

TEST(Alpha, RejectsBadReferences) {
    auto t = g2_table();
    EXPECT_THROW(compute_alpha(t, {"0", "0", 0, 100}), ValidationError);
    EXPECT_THROW(compute_alpha(t, {"0", "25+", 0, 100}), ValidationError);
    EXPECT_THROW(compute_alpha(t, {"25+", "0", 100, 100}), ValidationError);
}

TEST(ValueFunction, AgePoints) {
    auto vf = g2_function();
    std::vector<Exact> values;
    for (const auto& p : vf.points()) values.push_back(p.value);
    EXPECT_EQ(values, (std::vector<Exact>{0, Exact(100, 17), Exact(400, 17), Exact(800, 17), Exact(1200, 17), 100}));
    std::vector<std::string> shown;
    for (const auto& v : values) shown.push_back(format_fixed(v));
    EXPECT_EQ(shown, (std::vector<std::string>{"0.00", "5.88", "23.53", "47.06", "70.59", "100.00"}));
}

TEST(ValueFunction, FlagPoints) {
    auto fw = ship_risk_framework();
    auto t = fill_transitive(ComparisonTable::create("g6", fw.criterion("g6").levels, {2, 4, 6}));
    auto vf = build_value_function(t, {"very low", "high", 0, 100}, ValueFunctionKind::discrete,
                                   Direction::maximize);
    EXPECT_EQ(vf.evaluate("low"), Exact(20));
    EXPECT_EQ(vf.evaluate("medium"), Exact(160, 3));
    EXPECT_EQ(format_fixed(vf.evaluate("medium")), "53.33");
}

TEST(ValueFunction, RoMidLevel) {
    auto fw = ship_risk_framework();
    auto t = fill_transitive(ComparisonTable::create("g8", fw.criterion("g8").levels, {3, 3}));
    auto vf = build_value_function(t, {"low", "high", 0, 100}, ValueFunctionKind::discrete, Direction::maximize);
    EXPECT_EQ(vf.evaluate("medium"), Exact(50));
}

TEST(ValueFunction, Interpolation) {
    auto vf = g2_function();
    EXPECT_EQ(format_fixed(vf.evaluate(Exact(3))), "82.35");
    EXPECT_EQ(vf.evaluate(Exact(0)), Exact(100));
    EXPECT_EQ(vf.evaluate(Exact(22)), Exact(60, 17));
    EXPECT_EQ(vf.evaluate(Exact(30)), Exact(0));
    EXPECT_EQ(vf.evaluate(Exact(15)), Exact(400, 17));
}

TEST(ValueFunction, DomainBoundIsEnforced) {
    auto vf = g2_function().with_domain(Exact(0), std::nullopt);
    EXPECT_THROW(vf.evaluate(Exact(-1)), ValidationError);
}

TEST(ValueFunction, UnknownLevel) {
    EXPECT_THROW(g2_function().evaluate("99"), ValidationError);
}

TEST(ValueFunction, DiscreteRejectsNumbers) {
    auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(3), {0, 0}));
    auto vf = build_value_function(t, {"l0", "l2", 0, 100}, ValueFunctionKind::discrete, Direction::maximize);
    EXPECT_THROW(vf.evaluate(Exact(1)), ValidationError);
}

TEST(ValueFunction, InteriorReferencesExtrapolate) {
    // references on the two middle levels of four
    auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(4), {1, 0, 2}));
    auto vf = build_value_function(t, {"l1", "l2", 0, 100}, ValueFunctionKind::discrete, Direction::maximize);
    EXPECT_EQ(vf.evaluate("l0"), Exact(-200));
    EXPECT_EQ(vf.evaluate("l3"), Exact(400));
}

TEST(ValueFunction, FromPointsRejectsNonIncreasing) {
    std::vector<ValuePoint> pts{{"a", std::nullopt, 0}, {"b", std::nullopt, 0}};
    EXPECT_THROW(ValueFunction::from_points("x", ValueFunctionKind::discrete, Direction::maximize, pts, 1),
                 ValidationError);
}

TEST(ValueFunction, BuildRejectsInconsistentAnchors) {
    // increasing anchors on a minimized scale
    auto t = fill_transitive(ComparisonTable::create("x", test::anchored_levels({0, 5, 10}), {0, 0}));
    EXPECT_THROW(build_value_function(t, {"l0", "l2", 0, 100}, ValueFunctionKind::piecewise_linear,
                                      Direction::minimize),
                 ValidationError);
}

// ---- properties ----

TEST(ScaleProperties, PathIndependence) {
    EXPECT_TRUE(test::for_all("path independence", 1000, 11, [](Gen& g, std::string& why) {
        auto n = static_cast<std::size_t>(g.int_in(2, 9));
        auto cards = g.cards(n - 1, 12);
        auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(n), cards));
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 2; q < n; ++q) {
                for (std::size_t k = p + 1; k < q; ++k) {
                    if (t.cards(p, q) != t.cards(p, k) + t.cards(k, q) + 1) {
                        why = "triple " + std::to_string(p) + "," + std::to_string(k) + "," + std::to_string(q);
                        return false;
                    }
                }
            }
        }
        return validate_consistency(t).ok();
    }));
}

TEST(ScaleProperties, FillMatchesClosedForm) {
    EXPECT_TRUE(test::for_all("closed form", 300, 12, [](Gen& g, std::string& why) {
        auto n = static_cast<std::size_t>(g.int_in(2, 8));
        auto cards = g.cards(n - 1);
        auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(n), cards));
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (t.cards(p, q) != oracle::cards_between(cards, p, q)) {
                    why = "e(" + std::to_string(p) + "," + std::to_string(q) + ")";
                    return false;
                }
            }
        }
        return true;
    }));
}

TEST(ScaleProperties, FillIsIdempotent) {
    EXPECT_TRUE(test::for_all("idempotent", 200, 13, [](Gen& g, std::string&) {
        auto n = static_cast<std::size_t>(g.int_in(2, 8));
        auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(n), g.cards(n - 1)));
        return fill_transitive(t) == t;
    }));
}

TEST(ScaleProperties, SinglePerturbationIsDetected) {
    EXPECT_TRUE(test::for_all("perturbation", 300, 14, [](Gen& g, std::string& why) {
        auto n = static_cast<std::size_t>(g.int_in(3, 8));
        auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(n), g.cards(n - 1)));
        auto p = static_cast<std::size_t>(g.int_in(0, static_cast<std::int64_t>(n) - 3));
        auto q = static_cast<std::size_t>(g.int_in(static_cast<std::int64_t>(p) + 2, static_cast<std::int64_t>(n) - 1));
        std::int64_t delta = g.coin() ? 1 : -1;
        std::int64_t judged = t.cards(p, q) + delta;
        if (judged < 0) judged = t.cards(p, q) + 1;
        std::vector<CardJudgment> extra{{"l" + std::to_string(p), "l" + std::to_string(q), judged}};
        auto report = validate_consistency(t, extra);
        if (report.ok()) {
            why = "no violation for e(" + std::to_string(p) + "," + std::to_string(q) + ")";
            return false;
        }
        return true;
    }));
}

TEST(ScaleProperties, ValuesMatchUnitWalk) {
    EXPECT_TRUE(test::for_all("unit walk oracle", 500, 15, [](Gen& g, std::string& why) {
        auto n = static_cast<std::size_t>(g.int_in(2, 6));
        auto cards = g.cards(n - 1);
        auto low = static_cast<std::size_t>(g.int_in(0, static_cast<std::int64_t>(n) - 2));
        auto high = static_cast<std::size_t>(g.int_in(static_cast<std::int64_t>(low) + 1, static_cast<std::int64_t>(n) - 1));
        Exact lv = g.ratio(-50, 50);
        Exact hv = lv + g.ratio(1, 200);
        auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(n), cards));
        auto vf = build_value_function(t, {"l" + std::to_string(low), "l" + std::to_string(high), lv, hv},
                                       ValueFunctionKind::discrete, Direction::maximize);
        auto expected = oracle::level_values(cards, low, high, lv, hv);
        for (std::size_t i = 0; i < n; ++i) {
            if (vf.evaluate("l" + std::to_string(i)) != expected[i]) {
                why = "level " + std::to_string(i);
                return false;
            }
        }
        return true;
    }));
}

TEST(ScaleProperties, StrictlyMonotone) {
    EXPECT_TRUE(test::for_all("monotone", 300, 16, [](Gen& g, std::string&) {
        auto n = static_cast<std::size_t>(g.int_in(2, 8));
        auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(n), g.cards(n - 1)));
        auto vf = build_value_function(t, {"l0", "l" + std::to_string(n - 1), 0, 100}, ValueFunctionKind::discrete,
                                       Direction::maximize);
        auto pts = vf.points();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (!(pts[i].value < pts[i + 1].value)) return false;
        }
        return true;
    }));
}

TEST(ScaleProperties, CardSensitivity) {
    EXPECT_TRUE(test::for_all("card sensitivity", 300, 17, [](Gen& g, std::string& why) {
        auto n = static_cast<std::size_t>(g.int_in(2, 7));
        auto cards = g.cards(n - 1);
        auto j = static_cast<std::size_t>(g.int_in(0, static_cast<std::int64_t>(n) - 2));
        auto more = cards;
        ++more[j];
        auto build = [&](const std::vector<std::int64_t>& c) {
            auto t = fill_transitive(ComparisonTable::create("x", test::plain_levels(n), c));
            return build_value_function(t, {"l0", "l" + std::to_string(n - 1), 0, 100}, ValueFunctionKind::discrete,
                                        Direction::maximize);
        };
        auto after = build(more);
        auto pts = after.points();
        Exact gap = pts[j + 1].value - pts[j].value;
        if (gap != Exact(more[j] + 1) * after.alpha()) {
            why = "gap across adjacency " + std::to_string(j);
            return false;
        }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (!(pts[i].value < pts[i + 1].value)) return false;
        }
        return true;
    }));
}

TEST(ScaleProperties, InterpolationHitsAnchors) {
    EXPECT_TRUE(test::for_all("anchors", 300, 18, [](Gen& g, std::string& why) {
        auto n = static_cast<std::size_t>(g.int_in(2, 7));
        const bool minimize = g.coin();
        std::vector<Exact> anchors;
        Exact a = g.ratio(-10, 10);
        for (std::size_t i = 0; i < n; ++i) {
            anchors.push_back(a);
            a += minimize ? -g.ratio(1, 5) : g.ratio(1, 5);
        }
        auto cards = g.cards(n - 1);
        auto t = fill_transitive(ComparisonTable::create("x", test::anchored_levels(anchors), cards));
        auto vf = build_value_function(t, {"l0", "l" + std::to_string(n - 1), 0, 100},
                                       ValueFunctionKind::piecewise_linear,
                                       minimize ? Direction::minimize : Direction::maximize);
        std::vector<Exact> ys;
        for (const auto& p : vf.points()) ys.push_back(p.value);
        for (std::size_t i = 0; i < n; ++i) {
            if (vf.evaluate(anchors[i]) != ys[i]) {
                why = "anchor " + std::to_string(i);
                return false;
            }
        }
        for (int k = 0; k < 10; ++k) {
            Exact x = g.ratio(-30, 30);
            if (vf.evaluate(x) != oracle::polyline(anchors, ys, x)) {
                why = "x = " + to_ratio_string(x);
                return false;
            }
        }
        return true;
    }));
}
