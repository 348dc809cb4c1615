#include "dcm/robustness.hpp"

#include "dcm/error.hpp"

namespace dcm {

void ScenarioGrid::validate() const {
    auto check = [](const std::vector<Exact>& axis, const char* name) {
        if (axis.empty()) throw ValidationError(std::string("sweep axis ") + name + " is empty");
        for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
            if (!(axis[i] < axis[i + 1])) {
                throw ValidationError(std::string("sweep axis ") + name + " must be strictly increasing");
            }
        }
    };
    check(lambda_values, "lambda");
    check(z_values, "z");
}

std::vector<Exact> ScenarioGrid::range(const Exact& first, const Exact& last, const Exact& step) {
    if (!(step > 0)) throw ValidationError("sweep step must be positive");
    if (last < first) throw ValidationError("sweep range end precedes its start");
    std::vector<Exact> out;
    for (Exact v = first; v <= last; v += step) out.push_back(v);
    return out;
}

ScenarioGrid ScenarioGrid::default_grid() {
    return {range(35, 45, 1), range(Exact(13, 4), Exact(21, 4), Exact(1, 2))};
}

const SweepCell& SweepResult::cell(std::size_t z_index, std::size_t lambda_index) const {
    return cells.at(z_index * grid.lambda_values.size() + lambda_index);
}

std::size_t SweepResult::ship_index(std::string_view ship_id) const {
    for (std::size_t i = 0; i < ship_ids.size(); ++i) {
        if (ship_ids[i] == ship_id) return i;
    }
    throw ValidationError("ship '" + std::string(ship_id) + "' is not part of the sweep");
}

SweepResult sweep(std::span<const PerformanceRecord> fleet, const SessionDocument& session,
                  const ScenarioGrid& grid) {
    grid.validate();
    SweepResult out;
    out.grid = grid;
    for (const auto& r : fleet) out.ship_ids.push_back(r.ship_id);

    for (const auto& z : grid.z_values) {
        const DerivedModel derived = derive_with_z(session, z);
        const AdditiveModel model = derived.model();
        std::vector<Exact> totals;
        bool totals_done = false;
        for (const auto& lambda : grid.lambda_values) {
            ClassificationPolicy policy = session.policy;
            policy.lambda_23 = lambda;
            if (policy.lambda_12 && !(*policy.lambda_12 > lambda)) {
                throw ValidationError("lambda_12 " + format_fixed(*policy.lambda_12) +
                                      " does not exceed sweep lambda " + format_fixed(lambda));
            }
            BatchResult batch = classify_batch(fleet, session.framework, model, policy);
            if (!batch.errors.empty()) {
                const auto& e = batch.errors.front();
                throw ValidationError("sweep cell (lambda " + format_fixed(lambda) + ", z " + format_fixed(z) +
                                      "): ship " + e.ship_id + ": " + e.message);
            }
            SweepCell cell{lambda, z, {}, batch.counts};
            for (const auto& r : batch.results) {
                cell.categories.push_back(r.category);
                if (!totals_done) totals.push_back(r.total);
            }
            totals_done = true;
            out.cells.push_back(std::move(cell));
        }
        out.totals.push_back(std::move(totals));
    }
    return out;
}

DiffReport compare_to_baseline(const SweepResult& sweep, const std::map<std::string, Category>& baseline) {
    DiffReport report;
    std::vector<Category> base;
    for (const auto& id : sweep.ship_ids) {
        auto it = baseline.find(id);
        if (it == baseline.end()) throw ValidationError("ship '" + id + "' missing from baseline");
        base.push_back(it->second);
        ++report.baseline_counts[static_cast<int>(it->second) - 1];
    }
    for (const auto& cell : sweep.cells) {
        std::vector<bool> flags;
        for (std::size_t i = 0; i < base.size(); ++i) {
            bool d = cell.categories[i] != base[i];
            flags.push_back(d);
            if (d) ++report.total_differences;
        }
        std::array<long, 3> delta{};
        for (int c = 0; c < 3; ++c) {
            delta[c] = static_cast<long>(cell.counts[c]) - static_cast<long>(report.baseline_counts[c]);
        }
        report.differs.push_back(std::move(flags));
        report.count_deltas.push_back(delta);
    }
    return report;
}

}  // namespace dcm
