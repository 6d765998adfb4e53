#pragma once

#include "ionet/diffusion.hpp"
#include "ionet/netstats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ionet {

/// P(X >= size).
struct CcdfPoint {
    int size = 0;
    double fraction = 0.0;
    friend bool operator==(const CcdfPoint&, const CcdfPoint&) = default;
};

/// Summary of one avalanche-size distribution.
struct AvalancheReport {
    std::string country;
    Model model = Model::link_updating;
    std::optional<ShockParams> params;
    double shock_size = 1.0;
    std::vector<std::string> labels;
    /// Seeds that completed, ascending, with their avalanche sizes.
    std::vector<SectorIndex> seeds;
    std::vector<int> sizes;
    /// Seeds whose run failed; excluded from every statistic below.
    std::vector<SectorIndex> failed_seeds;
    double mean = 0.0;
    /// Sample standard deviation over sample mean; empty when undefined.
    std::optional<double> cov;
    int max_size = 0;
    int min_size = 0;
    std::vector<SectorIndex> max_triggers;
    std::vector<SectorIndex> min_triggers;
    std::vector<CcdfPoint> ccdf;

    /// Avalanche size triggered by `seed`, if it completed.
    std::optional<int> size_of(SectorIndex seed) const;
};

/// Fraction of `sizes` that are >= k.
double ccdf_at(std::span<const int> sizes, int k);

/// CCDF at every integer from the smallest to the largest observed size.
std::vector<CcdfPoint> ccdf(std::span<const int> sizes);

/// Sample (n - 1) standard deviation over mean; empty when n < 2 or mean == 0.
std::optional<double> coefficient_of_variation(std::span<const int> sizes);

/// Order-independent summary of sweep outcomes. Throws DataError when no seed completed.
AvalancheReport summarize(std::span<const SeedOutcome> results, const std::string& country,
                          const std::vector<std::string>& labels, Model model,
                          std::optional<ShockParams> params = std::nullopt,
                          double shock_size = 1.0);

/// One sector across countries.
struct SectorCentralityRow {
    std::string label;
    std::size_t countries = 0;
    double mean_size = 0.0;
    double stderr_size = 0.0;
    /// Mean of log scores over countries with a positive score.
    std::optional<double> mean_log_hub;
    std::optional<double> mean_log_authority;
    std::size_t zero_hub_count = 0;
    std::size_t zero_authority_count = 0;
};

struct CrossCountryTable {
    std::vector<SectorCentralityRow> rows;
    Correlation hub_vs_size;
    Correlation authority_vs_size;
};

/// Per-country input to the cross-country correlation.
struct CountryCentrality {
    const AvalancheReport* report;
    const NodeScores* scores;
};

/// Aggregates avalanche sizes and HITS scores by sector label across
/// countries. Requires at least two countries with identical label sets.
CrossCountryTable correlate_centrality(std::span<const CountryCentrality> countries);

/// One report per parameter point for Model 2 or 3.
std::vector<AvalancheReport> resilience_sweep(const IOTable& table,
                                              std::span<const ShockParams> grid, Model model,
                                              unsigned threads = 0);

} // namespace ionet
