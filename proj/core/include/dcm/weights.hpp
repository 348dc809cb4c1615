#pragma once

#include "dcm/exact.hpp"
#include "dcm/scale.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dcm {

// Values of one criterion at its worst and best swing references.
struct SwingCriterion {
    std::string criterion_id;
    Exact worst_value{0};
    Exact best_value{100};
};

// A dummy alternative at the worst reference on every criterion except one.
struct SwingAction {
    std::string id;
    std::string swung_criterion;
    std::vector<std::string> criteria;   // profile order
    std::vector<Exact> value_profile;

    const Exact& value_of(std::string_view criterion_id) const;

    bool operator==(const SwingAction&) const = default;
};

// "g5" -> "s5"; other ids get an "s_" prefix.
std::string swing_id_for(std::string_view criterion_id);

std::vector<SwingAction> build_swings(std::span<const SwingCriterion> criteria);

// Groups of swing ids from worst to best; a group with several ids is a tie.
struct SwingRanking {
    std::vector<std::vector<std::string>> groups;

    bool operator==(const SwingRanking&) const = default;
};

// Blank cards between each swing and the top-ranked (reference) swing.
struct ClosenessJudgments {
    std::string reference_action;
    std::map<std::string, std::int64_t> cards_to_reference;

    bool operator==(const ClosenessJudgments&) const = default;
};

struct ZElicitation {
    Exact z;
    bool at_best_reference = false;   // z == 1, only usable when every card count is zero
};

// Lowers the top criterion from its best reference to `indifference_value`
// (its value at the stated performance) until the decision-maker is
// indifferent with the bottom swing. z is the resulting weight ratio.
ZElicitation elicit_z_from_indifference(const SwingAction& top, const SwingAction& bottom,
                                        const Exact& indifference_value);

// Same, evaluating the indifference performance on the top criterion's
// value function first.
ZElicitation elicit_z_from_indifference(const SwingAction& top, const SwingAction& bottom,
                                        const ValueFunction& top_value_function,
                                        const Exact& indifference_performance);

struct CriterionWeight {
    std::string criterion_id;
    Exact raw;
    Exact normalized;

    bool operator==(const CriterionWeight&) const = default;
};

struct WeightVector {
    Exact z;
    Exact alpha_w;
    std::vector<CriterionWeight> weights;   // swing order

    const CriterionWeight& at(std::string_view criterion_id) const;
    bool contains(std::string_view criterion_id) const;

    bool operator==(const WeightVector&) const = default;
};

// Structural and closeness checks. Violations are reported against the induced
// closeness table whose levels are the ranking groups (worst to best).
ConsistencyReport validate_closeness(const SwingRanking& ranking, const ClosenessJudgments& closeness,
                                     std::span<const CardJudgment> direct_judgments = {});

// The closeness judgments as a filled comparison table over ranking groups
// (level id = first swing of the group). Requires strictly decreasing cards.
ComparisonTable closeness_table(const SwingRanking& ranking, const ClosenessJudgments& closeness);

WeightVector compute_weights(std::span<const SwingAction> swings, const SwingRanking& ranking,
                             const ClosenessJudgments& closeness, const Exact& z);

}  // namespace dcm
