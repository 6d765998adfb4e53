#include "ionet/iotable.hpp"

#include "ionet/csv.hpp"
#include "ionet/error.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace ionet {

namespace {

double relative_residual(double stated, double implied) {
    const double scale = std::max(std::abs(stated), std::abs(implied));
    if (scale == 0.0) return 0.0;
    return std::abs(stated - implied) / scale;
}

double parse_number(const std::string& field, std::size_t row, std::size_t col) {
    const auto text = csv::trim(field);
    if (text.empty()) throw DataError("empty numeric field", row, col);
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw DataError(fmt::format("malformed number '{}'", text), row, col);
    if (!std::isfinite(value)) throw DataError("non-finite value", row, col);
    if (value < 0.0) throw DataError(fmt::format("negative value {}", value), row, col);
    return value;
}

} // namespace

Vector production(const Matrix& flows, std::span<const double> final_demand) {
    if (!flows.square() || flows.rows() != final_demand.size())
        throw DataError(fmt::format("dimension mismatch: {}x{} flows, {} final demands",
                                    flows.rows(), flows.cols(), final_demand.size()));
    Vector x = flows.row_sums();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += final_demand[i];
    return x;
}

IOTable::IOTable(std::string country, int year, std::vector<std::string> labels, Matrix flows,
                 Vector final_demand, std::optional<Vector> stated_production)
    : country_(std::move(country)), year_(year), labels_(std::move(labels)),
      flows_(std::move(flows)), final_demand_(std::move(final_demand)) {
    const std::size_t s = labels_.size();
    if (s < 2) throw DataError(fmt::format("a table needs at least 2 sectors, got {}", s));
    if (flows_.rows() != s || flows_.cols() != s || final_demand_.size() != s)
        throw DataError(fmt::format("dimension mismatch: {} labels, {}x{} flows, {} final demands",
                                    s, flows_.rows(), flows_.cols(), final_demand_.size()));
    std::set<std::string> seen;
    for (std::size_t i = 0; i < s; ++i) {
        if (labels_[i].empty()) throw DataError(fmt::format("empty label for sector {}", i));
        if (!seen.insert(labels_[i]).second)
            throw DataError(fmt::format("duplicate sector label '{}'", labels_[i]));
    }
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            const double z = flows_(i, j);
            if (!std::isfinite(z) || z < 0.0)
                throw DataError(fmt::format("invalid flow {} from '{}' to '{}'", z, labels_[i],
                                            labels_[j]));
        }
        if (!std::isfinite(final_demand_[i]) || final_demand_[i] < 0.0)
            throw DataError(fmt::format("invalid final demand {} for '{}'", final_demand_[i],
                                        labels_[i]));
    }

    const Vector implied = ionet::production(flows_, final_demand_);
    if (!stated_production) {
        production_ = implied;
        return;
    }
    if (stated_production->size() != s)
        throw DataError(fmt::format("dimension mismatch: {} production values for {} sectors",
                                    stated_production->size(), s));
    for (std::size_t i = 0; i < s; ++i) {
        const double x = (*stated_production)[i];
        if (!std::isfinite(x) || x < 0.0)
            throw DataError(fmt::format("invalid production {} for '{}'", x, labels_[i]));
        const double r = relative_residual(x, implied[i]);
        if (r > kProductionTolerance)
            throw DataError(fmt::format(
                "production of '{}' is {} but flows plus final demand give {} (relative residual {:.3g})",
                labels_[i], x, implied[i], r));
    }
    production_ = std::move(*stated_production);
}

std::optional<SectorIndex> IOTable::find_sector(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<SectorIndex>(it - labels_.begin());
}

Vector IOTable::production_residuals() const {
    const Vector implied = ionet::production(flows_, final_demand_);
    Vector r(size());
    for (std::size_t i = 0; i < size(); ++i) r[i] = relative_residual(production_[i], implied[i]);
    return r;
}

IOTable parse_io_table(std::istream& in, const std::string& country, int year) {
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!csv::trim(line).empty()) {
            header = csv::split(line, line_no);
            break;
        }
    }
    if (header.empty()) throw DataError("empty table");
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
    if (header[0] != "sector")
        throw DataError(fmt::format("header must start with 'sector', found '{}'", header[0]),
                        line_no, 1);

    const bool has_production = header.back() == "production";
    const std::size_t demand_col = header.size() - (has_production ? 2 : 1);
    if (header.size() < 3 || header[demand_col] != "final_demand")
        throw DataError("missing final_demand column", line_no);

    std::vector<std::string> labels(header.begin() + 1, header.begin() + demand_col);
    const std::size_t s = labels.size();
    if (s < 2) throw DataError(fmt::format("a table needs at least 2 sectors, got {}", s), line_no);
    {
        std::set<std::string> seen;
        for (std::size_t j = 0; j < s; ++j)
            if (!seen.insert(labels[j]).second)
                throw DataError(fmt::format("duplicate sector label '{}'", labels[j]), line_no,
                                j + 2);
    }

    Matrix flows(s, s);
    Vector demand(s);
    Vector stated(s);
    std::vector<std::size_t> data_lines(s);
    std::size_t rows_read = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        if (rows_read == s)
            throw DataError(fmt::format("more than {} data rows", s), line_no);
        const auto fields = csv::split(line, line_no);
        if (fields.size() != header.size())
            throw DataError(fmt::format("expected {} fields, found {}", header.size(),
                                        fields.size()),
                            line_no);
        if (fields[0] != labels[rows_read])
            throw DataError(fmt::format("row label '{}' does not match column label '{}'",
                                        fields[0], labels[rows_read]),
                            line_no, 1);
        for (std::size_t j = 0; j < s; ++j)
            flows(rows_read, j) = parse_number(fields[j + 1], line_no, j + 2);
        demand[rows_read] = parse_number(fields[demand_col], line_no, demand_col + 1);
        if (has_production)
            stated[rows_read] = parse_number(fields[demand_col + 1], line_no, demand_col + 2);
        data_lines[rows_read] = line_no;
        ++rows_read;
    }
    if (rows_read != s)
        throw DataError(fmt::format("dimension mismatch: {} sector columns but {} data rows", s,
                                    rows_read),
                        line_no);

    if (has_production) {
        const Vector implied = production(flows, demand);
        for (std::size_t i = 0; i < s; ++i) {
            const double r = relative_residual(stated[i], implied[i]);
            if (r > kProductionTolerance)
                throw DataError(
                    fmt::format("production {} disagrees with flows plus final demand {} "
                                "(relative residual {:.3g})",
                                stated[i], implied[i], r),
                    data_lines[i], demand_col + 2);
        }
    }
    return IOTable(country, year, std::move(labels), std::move(flows), std::move(demand),
                   has_production ? std::optional<Vector>(std::move(stated)) : std::nullopt);
}

void write_io_table(std::ostream& out, const IOTable& table, bool include_production) {
    out << "sector";
    for (const auto& label : table.labels()) out << ',' << csv::quote(label);
    out << ",final_demand";
    if (include_production) out << ",production";
    out << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << csv::quote(table.labels()[i]);
        for (double z : table.flows().row(i)) out << ',' << fmt::format("{}", z);
        out << ',' << fmt::format("{}", table.final_demand()[i]);
        if (include_production) out << ',' << fmt::format("{}", table.production()[i]);
        out << '\n';
    }
}

TableManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open manifest {}", path.string()));
    nlohmann::json j;
    try {
        in >> j;
        TableManifest m;
        m.country = j.at("country").get<std::string>();
        m.year = j.value("year", 0);
        m.currency_unit = j.value("currency_unit", std::string{});
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(fmt::format("invalid manifest {}: {}", path.string(), e.what()));
    }
}

void write_manifest(const std::filesystem::path& path, const TableManifest& manifest) {
    nlohmann::ordered_json j;
    j["country"] = manifest.country;
    j["year"] = manifest.year;
    j["currency_unit"] = manifest.currency_unit;
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write manifest {}", path.string()));
    out << j.dump(2) << '\n';
}

IOTable load_io_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
    auto manifest_path = path;
    manifest_path.replace_extension(".json");
    TableManifest manifest{path.stem().string(), 0, {}};
    if (std::filesystem::exists(manifest_path)) manifest = read_manifest(manifest_path);
    return parse_io_table(in, manifest.country, manifest.year);
}

std::filesystem::path save_io_table(const std::filesystem::path& dir, const IOTable& table,
                                    const std::string& currency_unit) {
    std::filesystem::create_directories(dir);
    const auto stem = fmt::format("{}_{}", table.country(), table.year());
    const auto csv = dir / (stem + ".csv");
    std::ofstream out(csv);
    if (!out) throw DataError(fmt::format("cannot write {}", csv.string()));
    write_io_table(out, table);
    write_manifest(dir / (stem + ".json"), {table.country(), table.year(), currency_unit});
    return csv;
}

IONetwork::IONetwork(Matrix weights) : weights_(std::move(weights)) {
    if (!weights_.square()) throw DataError("network weights must be square");
    const std::size_t s = weights_.rows();
    out_.resize(s);
    in_.resize(s);
    isolated_.assign(s, true);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            const double w = weights_(i, j);
            if (!std::isfinite(w) || w < 0.0)
                throw DataError(fmt::format("invalid weight {} at ({}, {})", w, i, j));
            if (i == j || w == 0.0) continue;
            out_[i].push_back(j);
            in_[j].push_back(i);
            isolated_[i] = false;
            isolated_[j] = false;
            ++edge_count_;
        }
    }
}

std::size_t IONetwork::isolated_count() const noexcept {
    return static_cast<std::size_t>(std::count(isolated_.begin(), isolated_.end(), true));
}

Matrix IONetwork::adjacency() const {
    Matrix a(size(), size());
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j : out_[i]) a(i, j) = 1.0;
    return a;
}

IONetwork network_view(const IOTable& table) { return IONetwork(table.flows()); }

} // namespace ionet
