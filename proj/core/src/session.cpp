#include "dcm/session.hpp"

#include "dcm/error.hpp"

#include <algorithm>

namespace dcm {

const CriterionJudgments& SessionDocument::judgments_for(std::string_view criterion_id) const {
    for (const auto& j : judgments) {
        if (j.criterion_id == criterion_id) return j;
    }
    throw ValidationError("session has no judgments for criterion '" + std::string(criterion_id) + "'");
}

CriterionJudgments& SessionDocument::judgments_for(std::string_view criterion_id) {
    for (auto& j : judgments) {
        if (j.criterion_id == criterion_id) return j;
    }
    throw ValidationError("session has no judgments for criterion '" + std::string(criterion_id) + "'");
}

ComparisonTable comparison_table(const SessionDocument& doc, std::string_view criterion_id) {
    const auto& criterion = doc.framework.criterion(criterion_id);
    const auto& j = doc.judgments_for(criterion_id);
    return fill_transitive(ComparisonTable::create(criterion.id, criterion.levels, j.adjacent_cards));
}

std::vector<ValueFunction> derive_value_functions(const SessionDocument& doc) {
    std::vector<ValueFunction> out;
    for (const auto& cid : doc.framework.valued_criteria()) {
        const auto& criterion = doc.framework.criterion(cid);
        const auto& j = doc.judgments_for(cid);
        auto table = comparison_table(doc, cid);
        if (auto report = validate_consistency(table, j.direct_judgments); !report.ok()) {
            const auto& v = report.violations.front();
            throw ValidationError("criterion " + cid + ": inconsistent judgments at (" + v.p_id + ", " + v.k_id +
                                  ", " + v.q_id + ")");
        }
        auto kind = criterion.continuous ? ValueFunctionKind::piecewise_linear : ValueFunctionKind::discrete;
        auto vf = build_value_function(table, j.references, kind, criterion.direction);
        if (criterion.continuous) vf = vf.with_domain(criterion.domain_min, std::nullopt);
        out.push_back(std::move(vf));
    }
    return out;
}

namespace {

const ValueFunction& find_vf(const std::vector<ValueFunction>& vfs, std::string_view cid) {
    for (const auto& vf : vfs) {
        if (vf.criterion_id() == cid) return vf;
    }
    throw ValidationError("no value function for criterion '" + std::string(cid) + "'");
}

Exact value_at(const ValueFunction& vf, const Performance& p) {
    if (const auto* e = std::get_if<Exact>(&p)) return vf.evaluate(*e);
    return vf.evaluate(std::get<std::string>(p));
}

const SwingAction& find_swing(const std::vector<SwingAction>& swings, std::string_view id) {
    for (const auto& s : swings) {
        if (s.id == id) return s;
    }
    throw ValidationError("unknown swing '" + std::string(id) + "'");
}

}  // namespace

std::vector<SwingAction> derive_swings(const SessionDocument& doc, const std::vector<ValueFunction>& vfs) {
    std::vector<SwingCriterion> criteria;
    for (const auto& cid : doc.framework.valued_criteria()) {
        auto it = std::find_if(doc.swing_references.begin(), doc.swing_references.end(),
                               [&](const auto& r) { return r.criterion_id == cid; });
        if (it == doc.swing_references.end()) {
            throw ValidationError("criterion " + cid + " has no swing references");
        }
        const auto& vf = find_vf(vfs, cid);
        criteria.push_back({cid, value_at(vf, it->worst), value_at(vf, it->best)});
    }
    return build_swings(criteria);
}

ZElicitation derive_z(const SessionDocument& doc, const std::vector<ValueFunction>& vfs,
                      const std::vector<SwingAction>& swings) {
    if (doc.z_source.kind == ZSource::Kind::explicit_value) {
        return {doc.z_source.value, doc.z_source.value == 1};
    }
    if (doc.ranking.groups.size() < 2) throw ValidationError("z elicitation needs at least two ranking positions");
    const auto& top = find_swing(swings, doc.closeness.reference_action);
    const auto& bottom = find_swing(swings, doc.ranking.groups.front().front());
    const auto& vf = find_vf(vfs, top.swung_criterion);
    return elicit_z_from_indifference(top, bottom, value_at(vf, doc.z_source.indifference_performance));
}

ValidationReport validate_session(const SessionDocument& doc) {
    ValidationReport report;
    for (const auto& cid : doc.framework.valued_criteria()) {
        try {
            const auto& j = doc.judgments_for(cid);
            auto table = comparison_table(doc, cid);
            for (auto& v : validate_consistency(table, j.direct_judgments).violations) {
                report.violations.push_back({cid, std::move(v)});
            }
        } catch (const Error& e) {
            report.errors.push_back(e.what());
        }
    }
    try {
        for (auto& v : validate_closeness(doc.ranking, doc.closeness, doc.closeness_direct).violations) {
            report.violations.push_back({"closeness", std::move(v)});
        }
    } catch (const Error& e) {
        report.errors.push_back(e.what());
    }
    try {
        validate_policy(doc.policy, doc.framework);
    } catch (const Error& e) {
        report.errors.push_back(e.what());
    }
    return report;
}

namespace {

void check_closeness(const SessionDocument& doc) {
    auto report = validate_closeness(doc.ranking, doc.closeness, doc.closeness_direct);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw ValidationError("inconsistent closeness judgments at (" + v.p_id + ", " + v.k_id + ", " + v.q_id + ")");
    }
}

}  // namespace

DerivedModel derive(const SessionDocument& doc) {
    validate_policy(doc.policy, doc.framework);
    DerivedModel d;
    d.value_functions = derive_value_functions(doc);
    for (const auto& cid : doc.framework.valued_criteria()) d.tables.push_back(comparison_table(doc, cid));
    d.swings = derive_swings(doc, d.value_functions);
    d.z = derive_z(doc, d.value_functions, d.swings);
    if (d.z.z != 1) check_closeness(doc);
    d.weights = compute_weights(d.swings, doc.ranking, doc.closeness, d.z.z);
    return d;
}

DerivedModel derive_with_z(const SessionDocument& doc, const Exact& z) {
    SessionDocument copy = doc;
    copy.z_source.kind = ZSource::Kind::explicit_value;
    copy.z_source.value = z;
    return derive(copy);
}

}  // namespace dcm
