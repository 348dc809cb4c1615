#pragma once

#include "dcm/exact.hpp"
#include "dcm/scale.hpp"
#include "dcm/weights.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dcm {

enum class CriterionKind { valued, acceptance };

std::string_view to_string(CriterionKind k);
CriterionKind parse_criterion_kind(std::string_view text);

struct Criterion {
    std::string id;                  // g1..g9
    std::string code;                // ACCI, AGES, ...
    std::string name;
    std::string point_of_view;       // PV code
    std::string significance_axis;   // SA code
    Direction direction = Direction::maximize;
    CriterionKind kind = CriterionKind::valued;
    bool continuous = false;
    std::vector<ScaleLevel> levels;  // worst to best
    std::optional<Exact> domain_min;

    const ScaleLevel& level(std::string_view level_id) const;
    bool has_level(std::string_view level_id) const;

    bool operator==(const Criterion&) const = default;
};

struct SignificanceAxis {
    std::string code;
    std::string name;

    bool operator==(const SignificanceAxis&) const = default;
};

struct PointOfView {
    std::string code;
    std::string name;
    std::vector<SignificanceAxis> axes;

    bool operator==(const PointOfView&) const = default;
};

class CriteriaFramework {
public:
    CriteriaFramework() = default;
    CriteriaFramework(std::vector<PointOfView> points_of_view, std::vector<Criterion> criteria);

    std::span<const PointOfView> points_of_view() const noexcept { return points_of_view_; }
    std::span<const Criterion> criteria() const noexcept { return criteria_; }
    const Criterion& criterion(std::string_view id) const;
    bool contains(std::string_view id) const;
    std::vector<std::string> valued_criteria() const;

    bool operator==(const CriteriaFramework&) const = default;

private:
    std::vector<PointOfView> points_of_view_;
    std::vector<Criterion> criteria_;
};

// The nine-criterion port-state-control framework (ACCI ... RORE).
CriteriaFramework ship_risk_framework();

struct RawShipRecord {
    std::string ship_id;
    std::string type;
    Exact age{0};
    std::optional<std::int64_t> deficiency_count;   // nullopt: not eligible (no inspection in 36 months)
    std::int64_t detention_count = 0;
    std::string ism_company;
    std::string flag_state;
    std::string recognised_organisation;

    bool operator==(const RawShipRecord&) const = default;
};

// Externally published lists used to map raw records onto scale levels.
// Performance tokens: "very low", "low", "medium", "high".
struct ReferenceLists {
    std::set<std::string> listed_ship_types;
    std::map<std::string, std::string> company_performance;
    std::map<std::string, std::string> flag_bgw;
    std::set<std::string> flag_imo_audit;
    std::map<std::string, std::string> ro_performance;
    std::set<std::string> ro_recognised;

    bool operator==(const ReferenceLists&) const = default;
};

// A level id on a discrete scale or a numeric performance on a continuous one.
using Performance = std::variant<std::string, Exact>;

std::string performance_text(const Performance& p);

struct PerformanceRecord {
    std::string ship_id;
    std::map<std::string, Performance> levels;

    const Performance& at(std::string_view criterion_id) const;
    const std::string& level(std::string_view criterion_id) const;

    bool operator==(const PerformanceRecord&) const = default;
};

struct MappingOptions {
    bool lenient = false;   // unknown company/RO maps to the worst level with a warning
};

struct MappedRecord {
    PerformanceRecord record;
    std::vector<std::string> warnings;
};

MappedRecord map_raw_to_performance(const RawShipRecord& raw, const ReferenceLists& lists,
                                    const MappingOptions& options = {});

// Checks every criterion is present and every level belongs to its scale.
void validate_performance(const PerformanceRecord& record, const CriteriaFramework& framework);

enum class Category { C1 = 1, C2 = 2, C3 = 3 };

std::string_view to_string(Category c);
Category parse_category(std::string_view text);

struct ClassificationPolicy {
    // Minimum level required per criterion for the rule-based C1 assignment.
    std::map<std::string, std::string> c1_rules;
    Exact lambda_23{40};
    std::optional<Exact> lambda_12;
    bool g3_high_override = true;
    // Rules kept in the hybrid (lambda_12) variant.
    std::vector<std::string> hybrid_rule_criteria{"g7", "g9"};

    bool operator==(const ClassificationPolicy&) const = default;
};

// Table-style C1 rules: g3 low, g4 no, g5 high, g6 high, g7 yes, g8 high, g9 yes; lambda_23 = 40.
ClassificationPolicy default_policy();

void validate_policy(const ClassificationPolicy& policy, const CriteriaFramework& framework);

struct AdditiveModel {
    std::vector<ValueFunction> value_functions;
    WeightVector weights;

    const ValueFunction& value_function(std::string_view criterion_id) const;
};

struct Contribution {
    std::string criterion_id;
    Exact value;          // v_j(g_j(a))
    Exact contribution;   // normalized weight * value

    bool operator==(const Contribution&) const = default;
};

struct ClassificationResult {
    std::string ship_id;
    std::vector<Contribution> contributions;
    Exact total;
    Category category = Category::C3;
    std::vector<std::string> rule_trace;

    bool operator==(const ClassificationResult&) const = default;
};

// Value part only; category is left at C3 until classify runs.
ClassificationResult aggregate(const PerformanceRecord& record, const CriteriaFramework& framework,
                               const AdditiveModel& model);

struct Classification {
    Category category = Category::C3;
    std::vector<std::string> rule_trace;
};

Classification classify(const Exact& total, const PerformanceRecord& record,
                        const ClassificationPolicy& policy, const CriteriaFramework& framework);

struct ShipError {
    std::string ship_id;
    std::string message;
};

struct BatchResult {
    std::vector<ClassificationResult> results;
    std::array<std::size_t, 3> counts{};   // C1, C2, C3
    std::vector<ShipError> errors;

    std::size_t count(Category c) const { return counts[static_cast<int>(c) - 1]; }
};

BatchResult classify_batch(std::span<const PerformanceRecord> fleet, const CriteriaFramework& framework,
                           const AdditiveModel& model, const ClassificationPolicy& policy);

}  // namespace dcm
