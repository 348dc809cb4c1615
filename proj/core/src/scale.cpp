#include "dcm/scale.hpp"

#include "dcm/error.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace dcm {

std::string_view to_string(Direction d) {
    return d == Direction::minimize ? "min" : "max";
}

std::string_view to_string(ValueFunctionKind k) {
    return k == ValueFunctionKind::discrete ? "discrete" : "piecewise-linear";
}

Direction parse_direction(std::string_view text) {
    if (text == "min" || text == "minimize") return Direction::minimize;
    if (text == "max" || text == "maximize") return Direction::maximize;
    throw ParseError("unknown preference direction '" + std::string(text) + "'");
}

ValueFunctionKind parse_value_function_kind(std::string_view text) {
    if (text == "discrete") return ValueFunctionKind::discrete;
    if (text == "piecewise-linear" || text == "piecewise") return ValueFunctionKind::piecewise_linear;
    throw ParseError("unknown value function kind '" + std::string(text) + "'");
}

namespace {

bool anchors_monotone(std::span<const ScaleLevel> levels) {
    bool increasing = true;
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const Exact& a = *levels[i].anchor;
        const Exact& b = *levels[i + 1].anchor;
        if (!(a < b)) increasing = false;
        if (!(a > b)) decreasing = false;
    }
    return increasing || decreasing;
}

}  // namespace

ComparisonTable ComparisonTable::create(std::string criterion_id, std::vector<ScaleLevel> levels,
                                        std::vector<std::int64_t> adjacent_cards) {
    if (levels.size() < 2) {
        throw ValidationError("criterion " + criterion_id + ": a scale needs at least two levels");
    }
    if (adjacent_cards.size() != levels.size() - 1) {
        throw ValidationError("criterion " + criterion_id + ": expected " +
                              std::to_string(levels.size() - 1) + " adjacent card counts, got " +
                              std::to_string(adjacent_cards.size()));
    }
    for (std::int64_t c : adjacent_cards) {
        if (c < 0) throw ValidationError("criterion " + criterion_id + ": negative card count");
    }
    std::set<std::string> seen;
    std::size_t anchored = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!seen.insert(levels[i].id).second) {
            throw ValidationError("criterion " + criterion_id + ": duplicate level id '" +
                                  levels[i].id + "'");
        }
        levels[i].ordinal = static_cast<int>(i);
        if (levels[i].anchor) ++anchored;
    }
    if (anchored != 0 && anchored != levels.size()) {
        throw ValidationError("criterion " + criterion_id + ": either all levels carry anchors or none");
    }
    if (anchored != 0 && !anchors_monotone(levels)) {
        throw ValidationError("criterion " + criterion_id +
                              ": anchors must be strictly monotone in preference order");
    }

    ComparisonTable table;
    table.criterion_id_ = std::move(criterion_id);
    table.levels_ = std::move(levels);
    table.adjacent_ = std::move(adjacent_cards);
    return table;
}

std::size_t ComparisonTable::index_of(std::string_view level_id) const {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (levels_[i].id == level_id) return i;
    }
    throw ValidationError("criterion " + criterion_id_ + ": unknown level '" + std::string(level_id) + "'");
}

std::int64_t ComparisonTable::cards(std::size_t p, std::size_t q) const {
    if (p >= q || q >= levels_.size()) {
        throw ValidationError("criterion " + criterion_id_ + ": card lookup needs p < q within the scale");
    }
    if (q == p + 1) return adjacent_[p];
    if (full_.empty()) {
        throw ValidationError("criterion " + criterion_id_ + ": table has not been filled");
    }
    return full_[p * levels_.size() + q];
}

std::int64_t ComparisonTable::cards(std::string_view from, std::string_view to) const {
    return cards(index_of(from), index_of(to));
}

ComparisonTable fill_transitive(const ComparisonTable& table) {
    ComparisonTable out = table;
    const std::size_t t = out.levels_.size();
    out.full_.assign(t * t, 0);
    for (std::size_t p = 0; p + 1 < t; ++p) {
        out.full_[p * t + p + 1] = out.adjacent_[p];
        for (std::size_t q = p + 2; q < t; ++q) {
            out.full_[p * t + q] = out.full_[p * t + q - 1] + out.adjacent_[q - 1] + 1;
        }
    }
    return out;
}

ConsistencyReport validate_consistency(const ComparisonTable& table,
                                       std::span<const CardJudgment> extra_judgments) {
    const ComparisonTable filled = table.is_filled() ? table : fill_transitive(table);
    const std::size_t t = filled.size();

    std::vector<std::int64_t> e(t * t, 0);
    for (std::size_t p = 0; p < t; ++p) {
        for (std::size_t q = p + 1; q < t; ++q) e[p * t + q] = filled.cards(p, q);
    }
    for (const auto& j : extra_judgments) {
        std::size_t p = filled.index_of(j.from);
        std::size_t q = filled.index_of(j.to);
        if (p >= q) {
            throw ValidationError("criterion " + filled.criterion_id() + ": judgment " + j.from + " -> " +
                                  j.to + " must go from the less to the more preferred level");
        }
        e[p * t + q] = j.cards;
    }

    auto id = [&](std::size_t i) { return std::string(filled.levels()[i].id); };
    ConsistencyReport report;
    for (std::size_t p = 0; p < t; ++p) {
        for (std::size_t k = p + 1; k < t; ++k) {
            for (std::size_t q = k + 1; q < t; ++q) {
                std::int64_t expected = e[p * t + k] + e[k * t + q] + 1;
                if (e[p * t + q] != expected) {
                    report.violations.push_back({ConsistencyViolation::Kind::transitivity, p, k, q, id(p),
                                                 id(k), id(q), e[p * t + q], expected});
                }
                // entries grow with distance along a row
                if (q == k + 1 && e[p * t + q] <= e[p * t + k]) {
                    report.violations.push_back({ConsistencyViolation::Kind::row_order, p, k, q, id(p), id(k),
                                                 id(q), e[p * t + q], e[p * t + k] + 1});
                }
            }
        }
    }
    std::stable_sort(report.violations.begin(), report.violations.end(), [](const auto& a, const auto& b) {
        return std::tie(a.p, a.k, a.q) < std::tie(b.p, b.k, b.q);
    });
    return report;
}

Exact compute_alpha(const ComparisonTable& table, const ReferenceAssignment& refs) {
    std::size_t lo = table.index_of(refs.low_level);
    std::size_t hi = table.index_of(refs.high_level);
    if (lo == hi) {
        throw ValidationError("criterion " + table.criterion_id() + ": reference levels must differ");
    }
    if (lo > hi) {
        throw ValidationError("criterion " + table.criterion_id() +
                              ": low reference must precede the high reference in preference order");
    }
    if (!(refs.low_value < refs.high_value)) {
        throw ValidationError("criterion " + table.criterion_id() +
                              ": low reference value must be below the high reference value");
    }
    std::int64_t units = 0;
    for (std::size_t i = lo; i < hi; ++i) units += table.adjacent_cards()[i] + 1;
    return (refs.high_value - refs.low_value) / Exact(units);
}

ValueFunction ValueFunction::from_points(std::string criterion_id, ValueFunctionKind kind,
                                         Direction direction, std::vector<ValuePoint> points,
                                         Exact alpha) {
    if (points.size() < 2) {
        throw ValidationError("criterion " + criterion_id + ": a value function needs at least two points");
    }
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i].value < points[i + 1].value)) {
            throw ValidationError("criterion " + criterion_id +
                                  ": values must strictly increase in preference order");
        }
    }
    if (kind == ValueFunctionKind::piecewise_linear) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!points[i].anchor) {
                throw ValidationError("criterion " + criterion_id + ": level '" + points[i].level_id +
                                      "' has no anchor for a piecewise-linear value function");
            }
            if (i == 0) continue;
            const Exact& prev = *points[i - 1].anchor;
            const Exact& cur = *points[i].anchor;
            bool ok = direction == Direction::minimize ? cur < prev : cur > prev;
            if (!ok) {
                throw ValidationError("criterion " + criterion_id +
                                      ": anchors must run strictly with the preference direction");
            }
        }
    }
    ValueFunction vf;
    vf.criterion_id_ = std::move(criterion_id);
    vf.kind_ = kind;
    vf.direction_ = direction;
    vf.points_ = std::move(points);
    vf.alpha_ = std::move(alpha);
    return vf;
}

ValueFunction ValueFunction::with_domain(std::optional<Exact> min, std::optional<Exact> max) const {
    ValueFunction copy = *this;
    copy.domain_min_ = std::move(min);
    copy.domain_max_ = std::move(max);
    return copy;
}

Exact ValueFunction::evaluate(std::string_view level_id) const {
    for (const auto& p : points_) {
        if (p.level_id == level_id) return p.value;
    }
    throw ValidationError("criterion " + criterion_id_ + ": unknown level '" + std::string(level_id) + "'");
}

Exact ValueFunction::evaluate(const Exact& performance) const {
    if (kind_ != ValueFunctionKind::piecewise_linear) {
        throw ValidationError("criterion " + criterion_id_ + ": numeric performance on a discrete scale");
    }
    if (domain_min_ && performance < *domain_min_) {
        throw ValidationError("criterion " + criterion_id_ + ": performance " + format_fixed(performance) +
                              " below domain minimum " + format_fixed(*domain_min_));
    }
    if (domain_max_ && performance > *domain_max_) {
        throw ValidationError("criterion " + criterion_id_ + ": performance " + format_fixed(performance) +
                              " above domain maximum " + format_fixed(*domain_max_));
    }

    // Walk the points ordered by ascending anchor.
    std::vector<const ValuePoint*> by_anchor;
    by_anchor.reserve(points_.size());
    for (const auto& p : points_) by_anchor.push_back(&p);
    if (direction_ == Direction::minimize) std::reverse(by_anchor.begin(), by_anchor.end());

    if (performance <= *by_anchor.front()->anchor) return by_anchor.front()->value;
    if (performance >= *by_anchor.back()->anchor) return by_anchor.back()->value;
    for (std::size_t i = 0; i + 1 < by_anchor.size(); ++i) {
        const Exact& x0 = *by_anchor[i]->anchor;
        const Exact& x1 = *by_anchor[i + 1]->anchor;
        if (performance <= x1) {
            const Exact& y0 = by_anchor[i]->value;
            const Exact& y1 = by_anchor[i + 1]->value;
            return y0 + (y1 - y0) * (performance - x0) / (x1 - x0);
        }
    }
    return by_anchor.back()->value;
}

ValueFunction build_value_function(const ComparisonTable& table, const ReferenceAssignment& refs,
                                   ValueFunctionKind kind, Direction direction) {
    const ComparisonTable filled = table.is_filled() ? table : fill_transitive(table);
    if (auto report = validate_consistency(filled); !report.ok()) {
        throw ValidationError("criterion " + table.criterion_id() + ": inconsistent comparison table");
    }
    const Exact alpha = compute_alpha(filled, refs);
    const std::size_t lo = filled.index_of(refs.low_level);

    std::vector<ValuePoint> points;
    points.reserve(filled.size());
    for (std::size_t k = 0; k < filled.size(); ++k) {
        const auto& level = filled.levels()[k];
        Exact value = refs.low_value;
        if (k > lo) value = refs.low_value + Exact(filled.cards(lo, k) + 1) * alpha;
        if (k < lo) value = refs.low_value - Exact(filled.cards(k, lo) + 1) * alpha;
        points.push_back({level.id, level.anchor, value});
    }
    return ValueFunction::from_points(filled.criterion_id(), kind, direction, std::move(points), alpha);
}

}  // namespace dcm
