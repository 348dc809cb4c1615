#pragma once

#include "dcm/risk_model.hpp"
#include "dcm/robustness.hpp"
#include "dcm/session.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dcm::io {

// ---- CSV -------------------------------------------------------------------

// Comma-separated, double-quote quoting with "" escapes, CRLF tolerated.
struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

std::vector<CsvRow> read_csv(std::istream& in);
std::string csv_field(std::string_view value);

// ---- Fleet files -------------------------------------------------------------

enum class FleetMode { automatic, raw, performance };

struct FleetOptions {
    FleetMode mode = FleetMode::automatic;
    bool strict = true;   // reject unknown columns
};

struct Fleet {
    FleetMode mode = FleetMode::raw;
    std::vector<RawShipRecord> raw;
    std::vector<PerformanceRecord> performance;
};

// Raw header:         ship,type,age,deficiencies,detentions,ism_company,flag,recognised_organisation
// Performance header: ship,g1,...,g9 (criterion codes such as ACCI are accepted too)
Fleet parse_fleet(std::istream& in, const CriteriaFramework& framework, const FleetOptions& options = {});
Fleet parse_fleet(std::string_view text, const CriteriaFramework& framework, const FleetOptions& options = {});
Fleet read_fleet_file(const std::filesystem::path& path, const CriteriaFramework& framework,
                      const FleetOptions& options = {});

std::string write_raw_fleet(const std::vector<RawShipRecord>& fleet);
std::string write_performance_fleet(const std::vector<PerformanceRecord>& fleet, const CriteriaFramework& framework);

// Raw records go through the reference lists; performance records pass through.
struct ResolvedFleet {
    std::vector<PerformanceRecord> records;
    std::vector<std::string> warnings;
};

ResolvedFleet resolve_fleet(const Fleet& fleet, const ReferenceLists* lists, const MappingOptions& options = {});

// ---- Reference lists ---------------------------------------------------------

ReferenceLists parse_reference_lists(std::string_view json_text);
std::string serialize_reference_lists(const ReferenceLists& lists);

// Missing company/RO entries for the given fleet; empty when the lists are total.
std::vector<std::string> missing_reference_entries(const ReferenceLists& lists,
                                                   const std::vector<RawShipRecord>& fleet);

// ---- Baseline labels ---------------------------------------------------------

// CSV with header "ship,category".
std::map<std::string, Category> parse_baseline(std::string_view csv_text);

// ---- Sessions ----------------------------------------------------------------

std::string save_session(const SessionDocument& doc);
SessionDocument load_session(std::string_view text);

// ---- Exports -----------------------------------------------------------------

struct Export {
    std::string table;   // human-readable CSV, values at 2 dp
    std::string exact;   // machine-readable JSON, values as integer ratios
};

struct ExportProvenance {
    std::map<std::string, std::string> entries;   // e.g. overrides applied by the caller
};

// Category, Ship, g1..g9, Total; rows grouped by category, fleet order within.
Export export_results(const BatchResult& batch, const std::vector<PerformanceRecord>& fleet,
                      const CriteriaFramework& framework, const ExportProvenance& provenance = {});

struct ExactResultRow {
    std::string ship_id;
    Category category = Category::C3;
    std::map<std::string, Exact> contributions;
    Exact total;
};

std::vector<ExactResultRow> parse_exact_results(std::string_view json_text);

// One ship across the grid: rows "z=<z>", columns lambda values, optional
// baseline column. Cells that differ from the baseline carry a trailing '*'.
Export export_sweep_ship(const SweepResult& sweep, std::string_view ship_id,
                         std::optional<Category> baseline = std::nullopt, std::string_view baseline_label = "SRP");

// Category counts per (z, category) row and lambda column, optional baseline column.
Export export_sweep_counts(const SweepResult& sweep, const std::map<std::string, Category>* baseline = nullptr,
                           std::string_view baseline_label = "SRP");

void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace dcm::io
