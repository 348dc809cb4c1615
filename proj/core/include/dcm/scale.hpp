#pragma once

#include "dcm/exact.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dcm {

enum class Direction { minimize, maximize };
enum class ValueFunctionKind { discrete, piecewise_linear };

std::string_view to_string(Direction d);
std::string_view to_string(ValueFunctionKind k);
Direction parse_direction(std::string_view text);
ValueFunctionKind parse_value_function_kind(std::string_view text);

struct ScaleLevel {
    std::string id;
    std::string label;
    int ordinal = 0;               // 0 is the worst level
    std::optional<Exact> anchor;   // numeric coordinate on continuous scales

    bool operator==(const ScaleLevel&) const = default;
};

// A blank-card judgment between two levels, `from` less preferred than `to`.
struct CardJudgment {
    std::string from;
    std::string to;
    std::int64_t cards = 0;

    bool operator==(const CardJudgment&) const = default;
};

// Blank-card judgments between the ordered levels of one criterion scale.
// Only the adjacent diagonal is elicited; the rest comes from fill_transitive.
class ComparisonTable {
public:
    // Levels are listed worst to best. Ordinals are reassigned from position.
    static ComparisonTable create(std::string criterion_id, std::vector<ScaleLevel> levels,
                                  std::vector<std::int64_t> adjacent_cards);

    const std::string& criterion_id() const noexcept { return criterion_id_; }
    std::span<const ScaleLevel> levels() const noexcept { return levels_; }
    std::span<const std::int64_t> adjacent_cards() const noexcept { return adjacent_; }
    std::size_t size() const noexcept { return levels_.size(); }
    bool is_filled() const noexcept { return !full_.empty(); }

    std::size_t index_of(std::string_view level_id) const;

    // e_pq for p < q. Non-adjacent pairs require a filled table.
    std::int64_t cards(std::size_t p, std::size_t q) const;
    std::int64_t cards(std::string_view from, std::string_view to) const;

    bool operator==(const ComparisonTable&) const = default;

private:
    friend ComparisonTable fill_transitive(const ComparisonTable& table);

    std::string criterion_id_;
    std::vector<ScaleLevel> levels_;
    std::vector<std::int64_t> adjacent_;
    std::vector<std::int64_t> full_;   // row-major t*t, upper triangle used
};

// Populates every e_pq (p < q) from the adjacent diagonal with
// e_pq = e_pk + e_kq + 1.
ComparisonTable fill_transitive(const ComparisonTable& table);

struct ConsistencyViolation {
    enum class Kind { transitivity, row_order };

    Kind kind = Kind::transitivity;
    std::size_t p = 0;
    std::size_t k = 0;
    std::size_t q = 0;
    std::string p_id;
    std::string k_id;
    std::string q_id;
    std::int64_t actual = 0;     // e_pq as judged
    std::int64_t expected = 0;   // e_pk + e_kq + 1 (transitivity) or e_pk + 1 (row order)

    bool operator==(const ConsistencyViolation&) const = default;
};

struct ConsistencyReport {
    std::vector<ConsistencyViolation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

// Overlays directly supplied judgments on the filled table and lists every
// (p,k,q) triple where the transitivity condition or row ordering fails.
// Violations are sorted by (p,k,q).
ConsistencyReport validate_consistency(const ComparisonTable& table,
                                       std::span<const CardJudgment> extra_judgments = {});

struct ReferenceAssignment {
    std::string low_level;
    std::string high_level;
    Exact low_value{0};
    Exact high_value{100};

    bool operator==(const ReferenceAssignment&) const = default;
};

// The elementary preference difference: value span over the number of units
// separating the reference levels.
Exact compute_alpha(const ComparisonTable& table, const ReferenceAssignment& refs);

struct ValuePoint {
    std::string level_id;
    std::optional<Exact> anchor;
    Exact value;

    bool operator==(const ValuePoint&) const = default;
};

class ValueFunction {
public:
    ValueFunction() = default;

    // Points are listed worst to best. For piecewise kind every point needs an
    // anchor and anchors must be strictly monotone in preference order.
    static ValueFunction from_points(std::string criterion_id, ValueFunctionKind kind,
                                     Direction direction, std::vector<ValuePoint> points,
                                     Exact alpha);

    const std::string& criterion_id() const noexcept { return criterion_id_; }
    ValueFunctionKind kind() const noexcept { return kind_; }
    Direction direction() const noexcept { return direction_; }
    std::span<const ValuePoint> points() const noexcept { return points_; }
    const Exact& alpha() const noexcept { return alpha_; }
    const std::optional<Exact>& domain_min() const noexcept { return domain_min_; }
    const std::optional<Exact>& domain_max() const noexcept { return domain_max_; }

    // Restricts the numeric domain; evaluations outside it are rejected.
    ValueFunction with_domain(std::optional<Exact> min, std::optional<Exact> max) const;

    // Stored value of a level (both kinds).
    Exact evaluate(std::string_view level_id) const;
    // Linear interpolation between bracketing anchors, clamped beyond the
    // outermost anchors. Piecewise kind only.
    Exact evaluate(const Exact& performance) const;

    bool operator==(const ValueFunction&) const = default;

private:
    std::string criterion_id_;
    ValueFunctionKind kind_ = ValueFunctionKind::discrete;
    Direction direction_ = Direction::maximize;
    std::vector<ValuePoint> points_;
    Exact alpha_;
    std::optional<Exact> domain_min_;
    std::optional<Exact> domain_max_;
};

ValueFunction build_value_function(const ComparisonTable& table, const ReferenceAssignment& refs,
                                   ValueFunctionKind kind, Direction direction);

}  // namespace dcm
