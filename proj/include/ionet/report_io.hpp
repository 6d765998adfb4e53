#pragma once

#include "ionet/analysis.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ionet {

/// Bumped whenever a column or JSON key changes meaning.
inline constexpr int kReportSchemaVersion = 1;

/// Per-country pass-through columns (e.g. GDP), keyed by country code.
struct Metadata {
    std::vector<std::string> columns;
    std::map<std::string, std::vector<std::string>> rows;

    const std::vector<std::string>* find(const std::string& country) const;
};

/// CSV with a `country` first column; remaining columns are passed through.
Metadata read_metadata(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

/// `<f>_<c>` for models 2-3, `shock_<size>` for model 1.
std::string parameter_tag(const AvalancheReport& report);
std::string model_tag(Model model);

nlohmann::ordered_json report_to_json(const AvalancheReport& report,
                                      std::span<const SeedOutcome> outcomes,
                                      const std::vector<std::string>* metadata_values = nullptr,
                                      const Metadata* metadata = nullptr);

/// seed,label,avalanche_size,rounds,status,error; one row per outcome.
void write_sizes_csv(std::ostream& out, const AvalancheReport& report,
                     std::span<const SeedOutcome> outcomes);
/// size,fraction with fraction = P(X >= size).
void write_ccdf_csv(std::ostream& out, const AvalancheReport& report);
/// kind,avalanche_size,seed,label with kind in {max,min}.
void write_triggers_csv(std::ostream& out, const AvalancheReport& report);

/// One row of the country-level statistics export.
struct CountryStats {
    std::string country;
    int year = 0;
    std::size_t sectors = 0;
    TopologySummary topology;
    LinkAssortativity assortativity;
    Correlation degree_annd;
    Correlation strength_anns;
};

void write_topology_csv(std::ostream& out, std::span<const CountryStats> rows);
nlohmann::ordered_json topology_to_json(const CountryStats& row);

void write_nodes_csv(std::ostream& out, const IOTable& table, const IONetwork& net,
                     const NodeScores& scores);

void write_centrality_csv(std::ostream& out, const CrossCountryTable& table);
nlohmann::ordered_json centrality_to_json(const CrossCountryTable& table,
                                          const std::vector<std::string>& countries);

/// One row of summary.csv.
struct SummaryRow {
    std::string country;
    int model = 0;
    std::optional<double> f;
    std::optional<double> c;
    std::optional<double> alpha;
    std::optional<double> shock_size;
    std::size_t seeds = 0;
    std::size_t failed = 0;
    double mean = 0.0;
    std::optional<double> cov;
    int max_size = 0;
    int min_size = 0;
};

SummaryRow summary_row(const AvalancheReport& report);
SummaryRow summary_row_from_json(const nlohmann::json& report);

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows,
                       const Metadata* metadata = nullptr);

/// Writes `text` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

} // namespace ionet
