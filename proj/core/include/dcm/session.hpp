#pragma once

#include "dcm/exact.hpp"
#include "dcm/risk_model.hpp"
#include "dcm/scale.hpp"
#include "dcm/weights.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dcm {

inline constexpr int kSessionFormatVersion = 1;

// Blank-card judgments and reference levels for one valued criterion.
struct CriterionJudgments {
    std::string criterion_id;
    std::vector<std::int64_t> adjacent_cards;
    std::vector<CardJudgment> direct_judgments;   // optional non-adjacent entries
    ReferenceAssignment references;

    bool operator==(const CriterionJudgments&) const = default;
};

// Worst and best swing references of a criterion: level ids, or numeric
// performances on continuous scales.
struct SwingReference {
    std::string criterion_id;
    Performance worst;
    Performance best;

    bool operator==(const SwingReference&) const = default;
};

struct ZSource {
    enum class Kind { indifference, explicit_value };

    Kind kind = Kind::indifference;
    Performance indifference_performance;   // on the top-ranked swing's criterion
    Exact value{0};                         // used when kind == explicit_value

    bool operator==(const ZSource&) const = default;
};

struct Provenance {
    std::string author;
    std::string created;
    std::string modified;
    std::string tool_version;

    bool operator==(const Provenance&) const = default;
};

struct SessionDocument {
    int version = kSessionFormatVersion;
    Provenance provenance;
    CriteriaFramework framework;
    std::vector<CriterionJudgments> judgments;
    std::vector<SwingReference> swing_references;
    SwingRanking ranking;
    ClosenessJudgments closeness;
    std::vector<CardJudgment> closeness_direct;   // optional non-adjacent closeness entries
    ZSource z_source;
    ClassificationPolicy policy;

    const CriterionJudgments& judgments_for(std::string_view criterion_id) const;
    CriterionJudgments& judgments_for(std::string_view criterion_id);

    bool operator==(const SessionDocument&) const = default;
};

struct ValidationReport {
    struct Entry {
        std::string scope;   // criterion id or "closeness"
        ConsistencyViolation violation;
    };
    std::vector<Entry> violations;
    std::vector<std::string> errors;

    bool ok() const noexcept { return violations.empty() && errors.empty(); }
};

// Consistency of every comparison table and of the closeness judgments,
// without throwing.
ValidationReport validate_session(const SessionDocument& doc);

// Everything computed from a session's judgments.
struct DerivedModel {
    std::vector<ComparisonTable> tables;   // filled, one per valued criterion
    std::vector<ValueFunction> value_functions;
    std::vector<SwingAction> swings;
    ZElicitation z;
    WeightVector weights;

    AdditiveModel model() const { return {value_functions, weights}; }
};

ComparisonTable comparison_table(const SessionDocument& doc, std::string_view criterion_id);
std::vector<ValueFunction> derive_value_functions(const SessionDocument& doc);
std::vector<SwingAction> derive_swings(const SessionDocument& doc, const std::vector<ValueFunction>& vfs);
ZElicitation derive_z(const SessionDocument& doc, const std::vector<ValueFunction>& vfs,
                      const std::vector<SwingAction>& swings);

// Throws ValidationError when any judgment is inconsistent.
DerivedModel derive(const SessionDocument& doc);

// Same judgments with z replaced by a fixed value.
DerivedModel derive_with_z(const SessionDocument& doc, const Exact& z);

}  // namespace dcm
