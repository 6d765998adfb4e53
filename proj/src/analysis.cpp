#include "ionet/analysis.hpp"

#include "ionet/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ionet {

std::optional<int> AvalancheReport::size_of(SectorIndex seed) const {
    const auto it = std::lower_bound(seeds.begin(), seeds.end(), seed);
    if (it == seeds.end() || *it != seed) return std::nullopt;
    return sizes[static_cast<std::size_t>(it - seeds.begin())];
}

double ccdf_at(std::span<const int> sizes, int k) {
    if (sizes.empty()) return 0.0;
    const auto n = std::count_if(sizes.begin(), sizes.end(), [k](int v) { return v >= k; });
    return static_cast<double>(n) / static_cast<double>(sizes.size());
}

std::vector<CcdfPoint> ccdf(std::span<const int> sizes) {
    std::vector<CcdfPoint> out;
    if (sizes.empty()) return out;
    const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    for (int k = *lo; k <= *hi; ++k) out.push_back({k, ccdf_at(sizes, k)});
    return out;
}

std::optional<double> coefficient_of_variation(std::span<const int> sizes) {
    const std::size_t n = sizes.size();
    if (n < 2) return std::nullopt;
    double mean = 0.0;
    for (int v : sizes) mean += v;
    mean /= static_cast<double>(n);
    if (mean == 0.0) return std::nullopt;
    double ss = 0.0;
    for (int v : sizes) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1)) / mean;
}

AvalancheReport summarize(std::span<const SeedOutcome> results, const std::string& country,
                          const std::vector<std::string>& labels, Model model,
                          std::optional<ShockParams> params, double shock_size) {
    AvalancheReport r;
    r.country = country;
    r.model = model;
    r.params = params;
    r.shock_size = shock_size;
    r.labels = labels;

    std::vector<std::pair<SectorIndex, int>> done;
    for (const auto& o : results) {
        if (o.ok)
            done.emplace_back(o.seed, o.avalanche_size);
        else
            r.failed_seeds.push_back(o.seed);
    }
    if (done.empty())
        throw DataError(fmt::format("no seed of {} completed; nothing to summarize", country));
    std::sort(done.begin(), done.end());
    std::sort(r.failed_seeds.begin(), r.failed_seeds.end());
    for (const auto& [seed, size] : done) {
        r.seeds.push_back(seed);
        r.sizes.push_back(size);
    }

    double sum = 0.0;
    for (int v : r.sizes) sum += v;
    r.mean = sum / static_cast<double>(r.sizes.size());
    r.cov = coefficient_of_variation(r.sizes);
    const auto [lo, hi] = std::minmax_element(r.sizes.begin(), r.sizes.end());
    r.min_size = *lo;
    r.max_size = *hi;
    for (std::size_t i = 0; i < r.sizes.size(); ++i) {
        if (r.sizes[i] == r.max_size) r.max_triggers.push_back(r.seeds[i]);
        if (r.sizes[i] == r.min_size) r.min_triggers.push_back(r.seeds[i]);
    }
    r.ccdf = ccdf(r.sizes);
    return r;
}

CrossCountryTable correlate_centrality(std::span<const CountryCentrality> countries) {
    if (countries.size() < 2)
        throw DataError(fmt::format("cross-country correlation needs at least 2 countries, got {}",
                                    countries.size()));
    const auto& reference = countries.front().report->labels;
    const std::set<std::string> reference_set(reference.begin(), reference.end());
    for (const auto& c : countries) {
        const auto& labels = c.report->labels;
        if (std::set<std::string>(labels.begin(), labels.end()) != reference_set ||
            labels.size() != reference.size())
            throw DataError(fmt::format("sector labels of {} differ from those of {}",
                                        c.report->country, countries.front().report->country));
        if (c.scores->hub.size() != labels.size() || c.scores->authority.size() != labels.size())
            throw DataError(fmt::format("centrality scores of {} do not cover its {} sectors",
                                        c.report->country, labels.size()));
    }

    std::vector<std::map<std::string, SectorIndex>> index(countries.size());
    for (std::size_t c = 0; c < countries.size(); ++c) {
        const auto& labels = countries[c].report->labels;
        for (SectorIndex i = 0; i < labels.size(); ++i) index[c][labels[i]] = i;
    }

    CrossCountryTable table;
    Vector hub_x, hub_y, auth_x, auth_y;
    for (const auto& label : reference) {
        SectorCentralityRow row;
        row.label = label;
        Vector sizes;
        double log_hub = 0.0, log_auth = 0.0;
        std::size_t n_hub = 0, n_auth = 0;
        for (std::size_t c = 0; c < countries.size(); ++c) {
            const SectorIndex i = index[c].at(label);
            if (const auto size = countries[c].report->size_of(i)) sizes.push_back(*size);
            const double h = countries[c].scores->hub[i];
            const double a = countries[c].scores->authority[i];
            if (h > 0.0) {
                log_hub += std::log(h);
                ++n_hub;
            } else {
                ++row.zero_hub_count;
            }
            if (a > 0.0) {
                log_auth += std::log(a);
                ++n_auth;
            } else {
                ++row.zero_authority_count;
            }
        }
        row.countries = sizes.size();
        if (!sizes.empty()) {
            double mean = 0.0;
            for (double v : sizes) mean += v;
            mean /= static_cast<double>(sizes.size());
            row.mean_size = mean;
            if (sizes.size() > 1) {
                double ss = 0.0;
                for (double v : sizes) ss += (v - mean) * (v - mean);
                const auto n = static_cast<double>(sizes.size());
                row.stderr_size = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
            }
        }
        if (n_hub) row.mean_log_hub = log_hub / static_cast<double>(n_hub);
        if (n_auth) row.mean_log_authority = log_auth / static_cast<double>(n_auth);
        if (row.countries > 0 && row.mean_log_hub) {
            hub_x.push_back(*row.mean_log_hub);
            hub_y.push_back(row.mean_size);
        }
        if (row.countries > 0 && row.mean_log_authority) {
            auth_x.push_back(*row.mean_log_authority);
            auth_y.push_back(row.mean_size);
        }
        table.rows.push_back(std::move(row));
    }
    table.hub_vs_size = pearson(hub_x, hub_y);
    table.authority_vs_size = pearson(auth_x, auth_y);
    return table;
}

std::vector<AvalancheReport> resilience_sweep(const IOTable& table,
                                              std::span<const ShockParams> grid, Model model,
                                              unsigned threads) {
    if (grid.empty()) throw ConfigError("resilience sweep needs at least one (f, c) point");
    if (model == Model::demand)
        throw ConfigError("resilience sweeps apply to models 2 and 3 only");
    std::vector<AvalancheReport> out;
    out.reserve(grid.size());
    for (const auto& params : grid) {
        SweepOptions opts;
        opts.model = model;
        opts.params = params;
        opts.threads = threads;
        const auto results = sweep_all_seeds(table, opts);
        out.push_back(summarize(results, table.country(), table.labels(), model, params));
    }
    return out;
}

} // namespace ionet
