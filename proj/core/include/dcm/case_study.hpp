#pragma once

#include "dcm/risk_model.hpp"
#include "dcm/session.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

// The Lisbon port-state-control sample: judgments, ten ships, reference
// lists, and the published figures used to check a full run.
namespace dcm::case_study {

SessionDocument session();
std::vector<RawShipRecord> raw_fleet();
ReferenceLists reference_lists();

// Ship risk profile categories from the existing inspection regime. Only a6
// is published.
std::map<std::string, Category> srp_baseline();

// Published figures, as printed (2 dp strings unless noted).
namespace expected {

struct LevelValues {
    std::string criterion_id;
    std::vector<std::string> values;   // worst to best
};

// g2 breakpoints worst to best as listed in the value-function walkthrough.
extern const std::vector<std::string> g2_points;
// g2 breakpoints as printed in the value-function figure (4 x 5.88 = 23.52 etc).
extern const std::vector<std::string> g2_points_hand_rounded;
// v2 at age 3.
extern const std::string g2_at_age_3;

extern const std::vector<LevelValues> discrete_value_functions;

extern const std::string z;
extern const std::string alpha_w;
// raw weights in swing order g1, g2, g3, g4, g5, g6, g8
extern const std::vector<std::pair<std::string, std::string>> raw_weights;
extern const std::vector<std::pair<std::string, std::string>> normalized_weights;

// Closeness matrix: entry [i][j] for ranking positions i < j (worst to best).
extern const std::vector<std::string> closeness_order;
extern const std::vector<std::vector<long>> closeness_matrix;

struct PerformanceRow {
    std::string ship;
    std::array<std::string, 9> levels;   // g1..g9, g2 as years
};
extern const std::vector<PerformanceRow> performance_table;

struct ResultRow {
    Category category;
    std::string ship;
    std::array<std::string, 9> cells;   // g1..g9: contributions, or yes/no for g7 and g9
    std::string total;
};
extern const std::vector<ResultRow> results;

// Robustness matrix for a6.
extern const std::vector<std::string> sweep_lambdas;
extern const std::vector<std::string> sweep_zs;
extern const std::vector<std::vector<Category>> a6_sweep;
extern const std::map<std::string, std::string> a6_totals_by_z;

extern const std::string hybrid_lambda_12;
extern const std::vector<std::string> hybrid_c1;

}  // namespace expected

}  // namespace dcm::case_study
