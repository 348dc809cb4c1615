#pragma once

#include "dcm/exact.hpp"
#include "dcm/risk_model.hpp"
#include "dcm/session.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dcm {

struct ScenarioGrid {
    std::vector<Exact> lambda_values;   // strictly increasing
    std::vector<Exact> z_values;        // strictly increasing

    void validate() const;
    // lambda 35..45 step 1, z 3.25..5.25 step 0.5
    static ScenarioGrid default_grid();
    // Inclusive arithmetic range; throws if step <= 0.
    static std::vector<Exact> range(const Exact& first, const Exact& last, const Exact& step);
};

struct SweepCell {
    Exact lambda;
    Exact z;
    std::vector<Category> categories;   // fleet order
    std::array<std::size_t, 3> counts{};
};

struct SweepResult {
    ScenarioGrid grid;
    std::vector<std::string> ship_ids;
    // totals[zi][ship] under the weights for z_values[zi]
    std::vector<std::vector<Exact>> totals;
    // cells[zi * lambdas + li]
    std::vector<SweepCell> cells;

    const SweepCell& cell(std::size_t z_index, std::size_t lambda_index) const;
    std::size_t ship_index(std::string_view ship_id) const;
};

// One classify_batch per (lambda, z) cell. z is injected directly and the
// weights recomputed from the session's ranking and closeness cards.
// The session's lambda_12 (if any) is kept; lambda_23 is replaced per cell.
SweepResult sweep(std::span<const PerformanceRecord> fleet, const SessionDocument& session,
                  const ScenarioGrid& grid);

struct DiffReport {
    // differs[cell][ship]
    std::vector<std::vector<bool>> differs;
    // model count minus baseline count, per cell and category
    std::vector<std::array<long, 3>> count_deltas;
    std::array<std::size_t, 3> baseline_counts{};
    std::size_t total_differences = 0;
};

DiffReport compare_to_baseline(const SweepResult& sweep, const std::map<std::string, Category>& baseline);

}  // namespace dcm
