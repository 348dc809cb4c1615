#include "dcm/weights.hpp"

#include "dcm/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace dcm {

const Exact& SwingAction::value_of(std::string_view criterion_id) const {
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (criteria[i] == criterion_id) return value_profile[i];
    }
    throw ValidationError("swing " + id + ": no criterion '" + std::string(criterion_id) + "'");
}

std::string swing_id_for(std::string_view criterion_id) {
    if (criterion_id.size() > 1 && criterion_id.front() == 'g' &&
        std::all_of(criterion_id.begin() + 1, criterion_id.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return "s" + std::string(criterion_id.substr(1));
    }
    return "s_" + std::string(criterion_id);
}

std::vector<SwingAction> build_swings(std::span<const SwingCriterion> criteria) {
    std::vector<std::string> ids;
    std::set<std::string> seen;
    for (const auto& c : criteria) {
        if (!seen.insert(c.criterion_id).second) {
            throw ValidationError("duplicate swing criterion '" + c.criterion_id + "'");
        }
        if (!(c.worst_value < c.best_value)) {
            throw ValidationError("criterion " + c.criterion_id +
                                  ": best reference value must exceed the worst reference value");
        }
        ids.push_back(c.criterion_id);
    }

    std::vector<SwingAction> swings;
    swings.reserve(criteria.size());
    for (const auto& swung : criteria) {
        SwingAction s;
        s.id = swing_id_for(swung.criterion_id);
        s.swung_criterion = swung.criterion_id;
        s.criteria = ids;
        for (const auto& c : criteria) {
            s.value_profile.push_back(c.criterion_id == swung.criterion_id ? c.best_value : c.worst_value);
        }
        swings.push_back(std::move(s));
    }
    return swings;
}

ZElicitation elicit_z_from_indifference(const SwingAction& top, const SwingAction& bottom,
                                        const Exact& indifference_value) {
    if (top.id == bottom.id) throw ValidationError("z elicitation needs two distinct swings");
    const Exact& top_worst = bottom.value_of(top.swung_criterion);
    const Exact& top_best = top.value_of(top.swung_criterion);
    const Exact& bottom_worst = top.value_of(bottom.swung_criterion);
    const Exact& bottom_best = bottom.value_of(bottom.swung_criterion);

    if (indifference_value <= top_worst) {
        throw ValidationError("indifference value " + format_fixed(indifference_value) +
                              " is not above the worst reference of " + top.swung_criterion);
    }
    if (indifference_value > top_best) {
        throw ValidationError("indifference value " + format_fixed(indifference_value) +
                              " exceeds the best reference of " + top.swung_criterion);
    }
    ZElicitation out;
    out.z = (bottom_best - bottom_worst) / (indifference_value - top_worst);
    out.at_best_reference = indifference_value == top_best;
    return out;
}

ZElicitation elicit_z_from_indifference(const SwingAction& top, const SwingAction& bottom,
                                        const ValueFunction& top_value_function,
                                        const Exact& indifference_performance) {
    return elicit_z_from_indifference(top, bottom, top_value_function.evaluate(indifference_performance));
}

const CriterionWeight& WeightVector::at(std::string_view criterion_id) const {
    for (const auto& w : weights) {
        if (w.criterion_id == criterion_id) return w;
    }
    throw ValidationError("no weight for criterion '" + std::string(criterion_id) + "'");
}

bool WeightVector::contains(std::string_view criterion_id) const {
    return std::any_of(weights.begin(), weights.end(),
                       [&](const auto& w) { return w.criterion_id == criterion_id; });
}

namespace {

// Card count per ranking group; the top group has none (-1).
std::vector<std::int64_t> group_cards(const SwingRanking& ranking, const ClosenessJudgments& closeness) {
    if (ranking.groups.empty()) throw ValidationError("swing ranking is empty");
    std::set<std::string> seen;
    for (const auto& g : ranking.groups) {
        if (g.empty()) throw ValidationError("swing ranking contains an empty tie group");
        for (const auto& id : g) {
            if (!seen.insert(id).second) {
                throw ValidationError("swing '" + id + "' appears more than once in the ranking");
            }
        }
    }
    const auto& top = ranking.groups.back();
    if (std::find(top.begin(), top.end(), closeness.reference_action) == top.end()) {
        throw ValidationError("reference swing '" + closeness.reference_action +
                              "' is not in the top ranking position");
    }
    for (const auto& [id, cards] : closeness.cards_to_reference) {
        if (!seen.contains(id)) throw ValidationError("closeness cards for unranked swing '" + id + "'");
        if (std::find(top.begin(), top.end(), id) != top.end()) {
            throw ValidationError("top-ranked swing '" + id + "' cannot carry closeness cards");
        }
        if (cards < 0) throw ValidationError("negative closeness card count for swing '" + id + "'");
    }

    std::vector<std::int64_t> out;
    for (std::size_t gi = 0; gi + 1 < ranking.groups.size(); ++gi) {
        const auto& g = ranking.groups[gi];
        std::optional<std::int64_t> shared;
        for (const auto& id : g) {
            auto it = closeness.cards_to_reference.find(id);
            if (it == closeness.cards_to_reference.end()) {
                throw ValidationError("missing closeness cards for swing '" + id + "'");
            }
            if (shared && *shared != it->second) {
                throw ValidationError("tied swings '" + g.front() + "' and '" + id +
                                      "' must share one closeness card count");
            }
            shared = it->second;
        }
        out.push_back(*shared);
    }
    out.push_back(-1);
    return out;
}

std::string group_label(const std::vector<std::string>& g) {
    std::string s;
    for (const auto& id : g) s += (s.empty() ? "" : "=") + id;
    return s;
}

}  // namespace

ConsistencyReport validate_closeness(const SwingRanking& ranking, const ClosenessJudgments& closeness,
                                     std::span<const CardJudgment> direct_judgments) {
    const auto cards = group_cards(ranking, closeness);
    const std::size_t top = cards.size() - 1;

    ConsistencyReport report;
    for (std::size_t i = 0; i + 2 < cards.size(); ++i) {
        if (cards[i] <= cards[i + 1]) {
            report.violations.push_back({ConsistencyViolation::Kind::row_order, i, i + 1, top,
                                         ranking.groups[i].front(), ranking.groups[i + 1].front(),
                                         ranking.groups[top].front(), cards[i], cards[i + 1] + 1});
        }
    }
    if (!report.ok()) return report;

    const ComparisonTable table = closeness_table(ranking, closeness);
    std::vector<CardJudgment> mapped;
    for (const auto& j : direct_judgments) {
        auto group_of = [&](const std::string& id) -> std::string {
            for (const auto& g : ranking.groups) {
                if (std::find(g.begin(), g.end(), id) != g.end()) return g.front();
            }
            throw ValidationError("closeness judgment names unranked swing '" + id + "'");
        };
        mapped.push_back({group_of(j.from), group_of(j.to), j.cards});
    }
    return validate_consistency(table, mapped);
}

ComparisonTable closeness_table(const SwingRanking& ranking, const ClosenessJudgments& closeness) {
    const auto cards = group_cards(ranking, closeness);
    std::vector<ScaleLevel> levels;
    for (const auto& g : ranking.groups) levels.push_back({g.front(), group_label(g), 0, std::nullopt});
    std::vector<std::int64_t> adjacent;
    for (std::size_t i = 0; i + 1 < cards.size(); ++i) {
        adjacent.push_back(i + 2 == cards.size() ? cards[i] : cards[i] - cards[i + 1] - 1);
    }
    if (levels.size() < 2) {
        throw ValidationError("closeness table needs at least two ranking positions");
    }
    return fill_transitive(ComparisonTable::create("closeness", std::move(levels), std::move(adjacent)));
}

WeightVector compute_weights(std::span<const SwingAction> swings, const SwingRanking& ranking,
                             const ClosenessJudgments& closeness, const Exact& z) {
    std::set<std::string> ranked;
    for (const auto& g : ranking.groups) ranked.insert(g.begin(), g.end());
    for (const auto& s : swings) {
        if (!ranked.contains(s.id)) throw ValidationError("swing '" + s.id + "' is not ranked");
    }
    if (ranked.size() != swings.size()) throw ValidationError("ranking names swings that were not built");

    const auto cards = group_cards(ranking, closeness);
    auto cards_of = [&](const std::string& swing_id) {
        for (std::size_t gi = 0; gi < ranking.groups.size(); ++gi) {
            const auto& g = ranking.groups[gi];
            if (std::find(g.begin(), g.end(), swing_id) != g.end()) return cards[gi];
        }
        return std::int64_t{-1};
    };

    WeightVector out;
    out.z = z;
    const std::int64_t lowest_cards = cards.front();
    if (z < 1) throw ValidationError("z must be at least 1");
    if (ranking.groups.size() == 1) {
        if (z != 1) throw ValidationError("a single ranking position requires z = 1");
        out.alpha_w = 0;
    } else if (z == 1) {
        bool all_zero = std::all_of(cards.begin(), cards.end() - 1, [](auto c) { return c == 0; });
        if (!all_zero) throw ValidationError("z = 1 is only admissible when every closeness card count is zero");
        out.alpha_w = 0;
    } else {
        if (auto report = validate_closeness(ranking, closeness); !report.ok()) {
            const auto& v = report.violations.front();
            throw ValidationError("inconsistent closeness judgments at (" + v.p_id + ", " + v.k_id + ", " +
                                  v.q_id + ")");
        }
        out.alpha_w = (z - 1) / Exact(lowest_cards + 1);
    }

    Exact sum = 0;
    for (const auto& s : swings) {
        std::int64_t c = cards_of(s.id);
        Exact raw = ranking.groups.size() == 1 ? Exact(1) : Exact(1) + Exact(lowest_cards - c) * out.alpha_w;
        sum += raw;
        out.weights.push_back({s.swung_criterion, raw, Exact(0)});
    }
    for (auto& w : out.weights) w.normalized = w.raw / sum;
    return out;
}

}  // namespace dcm
