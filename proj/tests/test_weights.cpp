#include "dcm/case_study.hpp"
#include "dcm/error.hpp"
#include "dcm/session.hpp"
#include "dcm/weights.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace dcm;
using dcm::test::Gen;

namespace {

struct Setup {
    std::vector<SwingAction> swings;
    SwingRanking ranking;
    ClosenessJudgments closeness;
    std::vector<std::int64_t> group_cards;   // per non-top group, worst first
};

// g ranking groups with 1 or 2 swings each, strictly decreasing closeness cards.
Setup random_setup(Gen& g, std::size_t groups, bool ties) {
    Setup s;
    std::vector<SwingCriterion> crits;
    int next = 1;
    for (std::size_t i = 0; i < groups; ++i) {
        std::size_t size = ties && g.coin(0.3) ? 2 : 1;
        std::vector<std::string> group;
        for (std::size_t k = 0; k < size; ++k) {
            std::string cid = "g" + std::to_string(next++);
            crits.push_back({cid, 0, 100});
            group.push_back(swing_id_for(cid));
        }
        s.ranking.groups.push_back(group);
    }
    s.swings = build_swings(crits);
    s.group_cards.assign(groups - 1, 0);
    std::int64_t c = g.int_in(0, 5);
    for (std::size_t i = groups - 1; i-- > 0;) {
        s.group_cards[i] = c;
        c += g.int_in(1, 6);
    }
    s.closeness.reference_action = s.ranking.groups.back().front();
    for (std::size_t i = 0; i + 1 < groups; ++i) {
        for (const auto& id : s.ranking.groups[i]) s.closeness.cards_to_reference[id] = s.group_cards[i];
    }
    return s;
}

std::size_t group_of(const Setup& s, const std::string& criterion) {
    for (std::size_t i = 0; i < s.ranking.groups.size(); ++i) {
        for (const auto& id : s.ranking.groups[i]) {
            if (id == swing_id_for(criterion)) return i;
        }
    }
    return s.ranking.groups.size();
}

}  // namespace

TEST(Swings, IdsAndProfiles) {
    EXPECT_EQ(swing_id_for("g5"), "s5");
    EXPECT_EQ(swing_id_for("acci"), "s_acci");
    std::vector<SwingCriterion> crits{{"g1", 0, 100}, {"g2", 0, 100}};
    auto swings = build_swings(crits);
    ASSERT_EQ(swings.size(), 2u);
    EXPECT_EQ(swings[1].value_of("g2"), Exact(100));
    EXPECT_EQ(swings[1].value_of("g1"), Exact(0));
    EXPECT_THROW(build_swings(std::vector<SwingCriterion>{{"g1", 0, 100}, {"g1", 0, 100}}), ValidationError);
}

TEST(Weights, CaseStudyZ) {
    auto m = derive(case_study::session());
    EXPECT_EQ(m.z.z, Exact(17, 4));
    EXPECT_FALSE(m.z.at_best_reference);
    EXPECT_EQ(m.weights.alpha_w, Exact(13, 80));
}

TEST(Weights, CaseStudyRawWeights) {
    auto m = derive(case_study::session());
    for (const auto& [cid, raw] : case_study::expected::raw_weights) {
        EXPECT_EQ(m.weights.at(cid).raw, parse_exact(raw)) << cid;
    }
    Exact sum = 0;
    for (const auto& w : m.weights.weights) sum += w.raw;
    EXPECT_EQ(sum, Exact(683, 40));
}

TEST(Weights, CaseStudyNormalizedWeights) {
    auto m = derive(case_study::session());
    for (const auto& [cid, shown] : case_study::expected::normalized_weights) {
        EXPECT_EQ(format_fixed(m.weights.at(cid).normalized), shown) << cid;
    }
    EXPECT_EQ(m.weights.at("g2").normalized, Exact(170, 683));
}

TEST(Weights, CaseStudyAgainstLinearSystem) {
    // closeness to s2 per group, worst first
    auto sol = oracle::weights_by_system({19, 17, 14, 11, 7, 4}, Exact(17, 4));
    EXPECT_EQ(sol.alpha_w, Exact(13, 80));
    auto m = derive(case_study::session());
    const std::vector<std::string> order{"g3", "g4", "g6", "g1", "g8", "g5", "g2"};
    for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(m.weights.at(order[i]).raw, sol.group_weights[i]);
}

TEST(ZElicitation, AgeTwentyGivesSeventeen) {
    auto doc = case_study::session();
    auto vfs = derive_value_functions(doc);
    auto swings = derive_swings(doc, vfs);
    auto top = std::find_if(swings.begin(), swings.end(), [](auto& s) { return s.id == "s2"; });
    auto bottom = std::find_if(swings.begin(), swings.end(), [](auto& s) { return s.id == "s3"; });
    const auto& v2 = *std::find_if(vfs.begin(), vfs.end(), [](auto& v) { return v.criterion_id() == "g2"; });
    EXPECT_EQ(elicit_z_from_indifference(*top, *bottom, v2, Exact(20)).z, Exact(17));
    EXPECT_EQ(elicit_z_from_indifference(*top, *bottom, v2, Exact(15)).z, Exact(17, 4));
    auto at_best = elicit_z_from_indifference(*top, *bottom, v2, Exact(0));
    EXPECT_EQ(at_best.z, Exact(1));
    EXPECT_TRUE(at_best.at_best_reference);
    EXPECT_THROW(elicit_z_from_indifference(*top, *bottom, v2, Exact(25)), ValidationError);
    EXPECT_THROW(elicit_z_from_indifference(*top, *top, v2, Exact(15)), ValidationError);
}

TEST(Weights, ZOneNeedsZeroCards) {
    std::vector<SwingCriterion> crits{{"g1", 0, 100}, {"g2", 0, 100}};
    auto swings = build_swings(crits);
    SwingRanking ranking{{{"s1"}, {"s2"}}};
    ClosenessJudgments zero{"s2", {{"s1", 0}}};
    auto w = compute_weights(swings, ranking, zero, 1);
    EXPECT_EQ(w.weights[0].normalized, Exact(1, 2));
    EXPECT_EQ(w.weights[1].normalized, Exact(1, 2));

    ClosenessJudgments some{"s2", {{"s1", 2}}};
    EXPECT_THROW(compute_weights(swings, ranking, some, 1), ValidationError);
    EXPECT_THROW(compute_weights(swings, ranking, some, Exact(1, 2)), ValidationError);
}

TEST(Weights, SingleTieGroup) {
    std::vector<SwingCriterion> crits{{"g1", 0, 100}, {"g2", 0, 100}, {"g3", 0, 100}};
    auto swings = build_swings(crits);
    SwingRanking ranking{{{"s1", "s2", "s3"}}};
    ClosenessJudgments none{"s1", {}};
    auto w = compute_weights(swings, ranking, none, 1);
    for (const auto& cw : w.weights) EXPECT_EQ(cw.normalized, Exact(1, 3));
    EXPECT_THROW(compute_weights(swings, ranking, none, 2), ValidationError);
}

TEST(Closeness, NonDecreasingCardsRejected) {
    SwingRanking ranking{{{"s1"}, {"s2"}, {"s3"}}};
    ClosenessJudgments bad{"s3", {{"s1", 3}, {"s2", 3}}};
    auto report = validate_closeness(ranking, bad);
    ASSERT_FALSE(report.ok());
    EXPECT_EQ(report.violations.front().kind, ConsistencyViolation::Kind::row_order);
    EXPECT_EQ(report.violations.front().expected, 4);
    ClosenessJudgments wrong_ref{"s2", {{"s1", 3}, {"s2", 1}}};
    EXPECT_THROW(validate_closeness(ranking, wrong_ref), ValidationError);
}

TEST(Closeness, DirectEntryOffByOneIsReported) {
    auto doc = case_study::session();
    std::vector<CardJudgment> direct{{"s3", "s1", 8}};
    auto report = validate_closeness(doc.ranking, doc.closeness, direct);
    ASSERT_FALSE(report.ok());
    EXPECT_EQ(report.violations.front().actual, 8);
}

TEST(Closeness, CaseStudyMatrix) {
    auto doc = case_study::session();
    auto t = closeness_table(doc.ranking, doc.closeness);
    const auto& m = case_study::expected::closeness_matrix;
    for (std::size_t p = 0; p < m.size(); ++p) {
        for (std::size_t q = p + 1; q < m.size(); ++q) EXPECT_EQ(t.cards(p, q), m[p][q]) << p << "," << q;
    }
    EXPECT_TRUE(validate_closeness(doc.ranking, doc.closeness, doc.closeness_direct).ok());
}

// ---- properties ----

TEST(WeightProperties, NormalizedSumIsOne) {
    EXPECT_TRUE(test::for_all("sum to one", 500, 21, [](Gen& g, std::string& why) {
        auto s = random_setup(g, static_cast<std::size_t>(g.int_in(2, 8)), true);
        Exact z = 1 + g.ratio(1, 20);
        auto w = compute_weights(s.swings, s.ranking, s.closeness, z);
        Exact sum = 0;
        for (const auto& cw : w.weights) sum += cw.normalized;
        if (sum != 1) {
            why = "sum " + to_ratio_string(sum);
            return false;
        }
        return true;
    }));
}

TEST(WeightProperties, FollowsRankingAndTies) {
    EXPECT_TRUE(test::for_all("ranking order", 500, 22, [](Gen& g, std::string& why) {
        auto s = random_setup(g, static_cast<std::size_t>(g.int_in(2, 8)), true);
        Exact z = 1 + g.ratio(1, 20);
        auto w = compute_weights(s.swings, s.ranking, s.closeness, z);
        for (const auto& a : w.weights) {
            for (const auto& b : w.weights) {
                auto ga = group_of(s, a.criterion_id);
                auto gb = group_of(s, b.criterion_id);
                bool ok = ga < gb ? a.raw < b.raw : ga == gb ? a.raw == b.raw : a.raw > b.raw;
                if (!ok) {
                    why = a.criterion_id + " vs " + b.criterion_id;
                    return false;
                }
            }
        }
        return true;
    }));
}

TEST(WeightProperties, TopOverBottomIsZ) {
    EXPECT_TRUE(test::for_all("ratio pin", 500, 23, [](Gen& g, std::string& why) {
        auto s = random_setup(g, static_cast<std::size_t>(g.int_in(2, 8)), true);
        Exact z = 1 + g.ratio(1, 20);
        auto w = compute_weights(s.swings, s.ranking, s.closeness, z);
        Exact top = 0;
        Exact bottom = 0;
        for (const auto& cw : w.weights) {
            auto gi = group_of(s, cw.criterion_id);
            if (gi + 1 == s.ranking.groups.size()) top = cw.normalized;
            if (gi == 0) bottom = cw.normalized;
        }
        if (top / bottom != z) {
            why = "ratio " + to_ratio_string(top / bottom) + " for z " + to_ratio_string(z);
            return false;
        }
        return true;
    }));
}

TEST(WeightProperties, MatchesLinearSystem) {
    EXPECT_TRUE(test::for_all("system oracle", 300, 24, [](Gen& g, std::string& why) {
        auto s = random_setup(g, static_cast<std::size_t>(g.int_in(2, 7)), false);
        Exact z = 1 + g.ratio(1, 20);
        auto w = compute_weights(s.swings, s.ranking, s.closeness, z);
        auto sol = oracle::weights_by_system(s.group_cards, z);
        if (sol.alpha_w != w.alpha_w) {
            why = "alpha_w";
            return false;
        }
        for (const auto& cw : w.weights) {
            if (cw.raw != sol.group_weights[group_of(s, cw.criterion_id)]) {
                why = "raw weight of " + cw.criterion_id;
                return false;
            }
        }
        return true;
    }));
}

TEST(WeightProperties, TopShareGrowsWithZ) {
    EXPECT_TRUE(test::for_all("monotone in z", 300, 25, [](Gen& g, std::string& why) {
        auto s = random_setup(g, static_cast<std::size_t>(g.int_in(2, 7)), true);
        Exact z1 = 1 + g.ratio(1, 10);
        Exact z2 = z1 + g.ratio(1, 10);
        auto a = compute_weights(s.swings, s.ranking, s.closeness, z1);
        auto b = compute_weights(s.swings, s.ranking, s.closeness, z2);
        for (std::size_t i = 0; i < a.weights.size(); ++i) {
            auto gi = group_of(s, a.weights[i].criterion_id);
            if (gi + 1 == s.ranking.groups.size() && !(b.weights[i].normalized > a.weights[i].normalized)) {
                why = "top share did not grow";
                return false;
            }
            if (gi == 0 && !(b.weights[i].normalized < a.weights[i].normalized)) {
                why = "bottom share did not shrink";
                return false;
            }
        }
        return true;
    }));
}

TEST(WeightProperties, ScalingCardUnitsLeavesWeightsUnchanged) {
    // doubling every unit (cards + 1) leaves the weights fixed
    EXPECT_TRUE(test::for_all("unit scaling", 300, 26, [](Gen& g, std::string& why) {
        auto s = random_setup(g, static_cast<std::size_t>(g.int_in(2, 7)), true);
        Exact z = 1 + g.ratio(1, 20);
        auto scaled = s.closeness;
        for (auto& [id, c] : scaled.cards_to_reference) c = 2 * c + 1;
        auto a = compute_weights(s.swings, s.ranking, s.closeness, z);
        auto b = compute_weights(s.swings, s.ranking, scaled, z);
        for (std::size_t i = 0; i < a.weights.size(); ++i) {
            if (a.weights[i].normalized != b.weights[i].normalized) {
                why = a.weights[i].criterion_id;
                return false;
            }
        }
        return true;
    }));
}
