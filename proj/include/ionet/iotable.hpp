#pragma once

#include "ionet/matrix.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ionet {

/// Relative tolerance for the production identity x = Z*1 + d, per row.
inline constexpr double kProductionTolerance = 1e-6;

using SectorIndex = std::size_t;

/// One country-year input-output table.
///
/// flows(i, j) is the value of sector i's output used as input by sector j.
/// Immutable once constructed; the constructor enforces nonnegativity,
/// label uniqueness, S >= 2 and the production identity.
class IOTable {
public:
    /// Builds a table from its parts. When `production` is absent it is
    /// computed as Z*1 + d; when present it is checked, not replaced.
    IOTable(std::string country, int year, std::vector<std::string> labels, Matrix flows,
            Vector final_demand, std::optional<Vector> production = std::nullopt);

    const std::string& country() const noexcept { return country_; }
    int year() const noexcept { return year_; }
    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const Matrix& flows() const noexcept { return flows_; }
    const Vector& final_demand() const noexcept { return final_demand_; }
    const Vector& production() const noexcept { return production_; }

    std::optional<SectorIndex> find_sector(const std::string& label) const;

    /// Per-row relative residual |x_i - sum_j z_ij - d_i| / max(|x_i|, |sum_j z_ij + d_i|).
    Vector production_residuals() const;

    friend bool operator==(const IOTable&, const IOTable&) = default;

private:
    std::string country_;
    int year_;
    std::vector<std::string> labels_;
    Matrix flows_;
    Vector final_demand_;
    Vector production_;
};

/// x_i = sum_j z_ij + d_i.
Vector production(const Matrix& flows, std::span<const double> final_demand);

/// Parses the CSV table format:
///   sector,<label_1>,...,<label_S>,final_demand[,production]
/// followed by S rows `<label_i>,z_i1,...,z_iS,d_i[,x_i]`.
/// Errors carry 1-based line/column positions.
IOTable parse_io_table(std::istream& in, const std::string& country, int year);

/// Writes the same CSV format with round-trip exact numbers.
void write_io_table(std::ostream& out, const IOTable& table, bool include_production = true);

/// Sidecar `<stem>.json` next to a table file.
struct TableManifest {
    std::string country;
    int year = 0;
    std::string currency_unit;
};

TableManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const TableManifest& manifest);

/// Loads `path`, taking country/year from `<stem>.json` when it exists and
/// falling back to the file stem with year 0 otherwise.
IOTable load_io_table(const std::filesystem::path& path);

/// Writes `<dir>/<country>_<year>.csv` plus its manifest; returns the csv path.
std::filesystem::path save_io_table(const std::filesystem::path& dir, const IOTable& table,
                                    const std::string& currency_unit = "million EUR");

/// Weighted directed graph view of Z.
///
/// Edges are the off-diagonal positive flows; self loops are tracked
/// separately and a sector without any off-diagonal flow is isolated.
class IONetwork {
public:
    explicit IONetwork(Matrix weights);

    std::size_t size() const noexcept { return weights_.rows(); }
    const Matrix& weights() const noexcept { return weights_; }

    bool has_edge(std::size_t i, std::size_t j) const noexcept {
        return i != j && weights_(i, j) > 0.0;
    }
    bool has_self_loop(std::size_t i) const noexcept { return weights_(i, i) > 0.0; }
    bool isolated(std::size_t i) const noexcept { return isolated_[i]; }

    std::size_t edge_count() const noexcept { return edge_count_; }
    std::size_t isolated_count() const noexcept;

    const std::vector<std::size_t>& successors(std::size_t i) const noexcept { return out_[i]; }
    const std::vector<std::size_t>& predecessors(std::size_t i) const noexcept { return in_[i]; }

    /// Binary adjacency a_ij = 1 iff z_ij > 0 and i != j.
    Matrix adjacency() const;

private:
    Matrix weights_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
    std::vector<bool> isolated_;
    std::size_t edge_count_ = 0;
};

IONetwork network_view(const IOTable& table);

} // namespace ionet
