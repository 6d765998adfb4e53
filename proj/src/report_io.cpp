#include "ionet/report_io.hpp"

#include "ionet/csv.hpp"
#include "ionet/error.hpp"

#include <fmt/format.h>

#include <fstream>
#include <ostream>

namespace ionet {

namespace {

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string label_of(const AvalancheReport& r, SectorIndex i) {
    return i < r.labels.size() ? r.labels[i] : std::to_string(i);
}

const char* path_mode_name(PathMode m) { return m == PathMode::directed ? "directed" : "undirected"; }

} // namespace

const std::vector<std::string>* Metadata::find(const std::string& country) const {
    const auto it = rows.find(country);
    return it == rows.end() ? nullptr : &it->second;
}

Metadata read_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open metadata file {}", path.string()));
    Metadata meta;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        auto fields = csv::split(line, line_no);
        if (!header_seen) {
            if (fields.front() != "country")
                throw DataError("metadata header must start with 'country'", line_no, 1);
            meta.columns.assign(fields.begin() + 1, fields.end());
            header_seen = true;
            continue;
        }
        if (fields.size() != meta.columns.size() + 1)
            throw DataError(fmt::format("expected {} fields, found {}", meta.columns.size() + 1,
                                        fields.size()),
                            line_no);
        const std::string country = fields.front();
        if (meta.rows.contains(country))
            throw DataError(fmt::format("duplicate metadata row for '{}'", country), line_no, 1);
        meta.rows[country] = std::vector<std::string>(fields.begin() + 1, fields.end());
    }
    if (!header_seen) throw DataError(fmt::format("metadata file {} is empty", path.string()));
    return meta;
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string format_optional(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string{};
}

std::string model_tag(Model model) { return fmt::format("model{}", model_number(model)); }

std::string parameter_tag(const AvalancheReport& report) {
    if (report.params)
        return fmt::format("{}_{}", format_number(report.params->f()),
                           format_number(report.params->c()));
    return fmt::format("shock_{}", format_number(report.shock_size));
}

nlohmann::ordered_json report_to_json(const AvalancheReport& report,
                                      std::span<const SeedOutcome> outcomes,
                                      const std::vector<std::string>* metadata_values,
                                      const Metadata* metadata) {
    nlohmann::ordered_json j;
    j["schema"] = "ionet.avalanche_report";
    j["schema_version"] = kReportSchemaVersion;
    j["country"] = report.country;
    j["model"] = model_number(report.model);
    if (report.params) {
        j["f"] = report.params->f();
        j["c"] = report.params->c();
        j["alpha"] = report.params->alpha();
    } else {
        j["shock_size"] = report.shock_size;
    }
    j["sectors"] = report.labels.size();
    j["labels"] = report.labels;

    auto seeds = nlohmann::ordered_json::array();
    auto failed = nlohmann::ordered_json::array();
    for (const auto& o : outcomes) {
        nlohmann::ordered_json row;
        row["seed"] = o.seed;
        row["label"] = label_of(report, o.seed);
        row["avalanche_size"] = o.avalanche_size;
        row["rounds"] = o.rounds;
        if (o.ok) {
            seeds.push_back(std::move(row));
        } else {
            row["error"] = o.error;
            failed.push_back(std::move(row));
        }
    }
    j["results"] = std::move(seeds);
    j["failed"] = std::move(failed);
    j["mean"] = report.mean;
    j["cov"] = optional_json(report.cov);
    j["max_size"] = report.max_size;
    j["min_size"] = report.min_size;
    auto labels_of = [&](const std::vector<SectorIndex>& idx) {
        std::vector<std::string> out;
        for (SectorIndex i : idx) out.push_back(label_of(report, i));
        return out;
    };
    j["max_triggers"] = labels_of(report.max_triggers);
    j["min_triggers"] = labels_of(report.min_triggers);
    auto cc = nlohmann::ordered_json::array();
    for (const auto& p : report.ccdf) cc.push_back({{"size", p.size}, {"fraction", p.fraction}});
    j["ccdf"] = std::move(cc);
    if (metadata && metadata_values) {
        nlohmann::ordered_json m;
        for (std::size_t i = 0; i < metadata->columns.size(); ++i)
            m[metadata->columns[i]] = (*metadata_values)[i];
        j["metadata"] = std::move(m);
    }
    return j;
}

void write_sizes_csv(std::ostream& out, const AvalancheReport& report,
                     std::span<const SeedOutcome> outcomes) {
    out << "seed,label,avalanche_size,rounds,status,error\n";
    for (const auto& o : outcomes)
        out << o.seed << ',' << csv::quote(label_of(report, o.seed)) << ',' << o.avalanche_size
            << ',' << o.rounds << ',' << (o.ok ? "ok" : "failed") << ',' << csv::quote(o.error)
            << '\n';
}

void write_ccdf_csv(std::ostream& out, const AvalancheReport& report) {
    out << "size,fraction\n";
    for (const auto& p : report.ccdf) out << p.size << ',' << format_number(p.fraction) << '\n';
}

void write_triggers_csv(std::ostream& out, const AvalancheReport& report) {
    out << "kind,avalanche_size,seed,label\n";
    for (SectorIndex i : report.max_triggers)
        out << "max," << report.max_size << ',' << i << ',' << csv::quote(label_of(report, i))
            << '\n';
    for (SectorIndex i : report.min_triggers)
        out << "min," << report.min_size << ',' << i << ',' << csv::quote(label_of(report, i))
            << '\n';
}

void write_topology_csv(std::ostream& out, std::span<const CountryStats> rows) {
    out << "country,year,sectors,edges,isolated,density,bilateral_density,diameter,"
           "average_path_length,path_mode,assortativity_binary,assortativity_weighted,"
           "degree_annd_correlation,strength_anns_correlation\n";
    for (const auto& r : rows) {
        const auto& t = r.topology;
        out << csv::quote(r.country) << ',' << r.year << ',' << r.sectors << ',' << t.edge_count
            << ',' << t.isolated_count << ',' << format_number(t.density) << ','
            << format_number(t.bilateral_density) << ',' << t.diameter << ','
            << format_number(t.average_path_length) << ',' << path_mode_name(t.path_mode) << ','
            << format_optional(r.assortativity.binary) << ','
            << format_optional(r.assortativity.weighted) << ',' << format_optional(r.degree_annd)
            << ',' << format_optional(r.strength_anns) << '\n';
    }
}

nlohmann::ordered_json topology_to_json(const CountryStats& r) {
    const auto& t = r.topology;
    nlohmann::ordered_json j;
    j["schema"] = "ionet.topology";
    j["schema_version"] = kReportSchemaVersion;
    j["country"] = r.country;
    j["year"] = r.year;
    j["sectors"] = r.sectors;
    j["edges"] = t.edge_count;
    j["isolated"] = t.isolated_count;
    j["density"] = t.density;
    j["bilateral_density"] = t.bilateral_density;
    j["diameter"] = t.diameter;
    j["average_path_length"] = t.average_path_length;
    j["path_mode"] = path_mode_name(t.path_mode);
    j["assortativity_binary"] = optional_json(r.assortativity.binary);
    j["assortativity_weighted"] = optional_json(r.assortativity.weighted);
    j["degree_annd_correlation"] = optional_json(r.degree_annd);
    j["strength_anns_correlation"] = optional_json(r.strength_anns);
    return j;
}

void write_nodes_csv(std::ostream& out, const IOTable& table, const IONetwork& net,
                     const NodeScores& scores) {
    out << "sector,label,in_degree,out_degree,in_strength,out_strength,annd,anns,hub,authority,"
           "isolated,self_loop\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << i << ',' << csv::quote(table.labels()[i]) << ','
            << format_number(scores.in_degree[i]) << ',' << format_number(scores.out_degree[i])
            << ',' << format_number(scores.in_strength[i]) << ','
            << format_number(scores.out_strength[i]) << ',' << format_optional(scores.annd[i])
            << ',' << format_optional(scores.anns[i]) << ',' << format_number(scores.hub[i])
            << ',' << format_number(scores.authority[i]) << ',' << (net.isolated(i) ? 1 : 0)
            << ',' << (net.has_self_loop(i) ? 1 : 0) << '\n';
    }
}

void write_centrality_csv(std::ostream& out, const CrossCountryTable& table) {
    out << "label,countries,mean_size,stderr_size,mean_log_hub,mean_log_authority,zero_hub,"
           "zero_authority\n";
    for (const auto& r : table.rows)
        out << csv::quote(r.label) << ',' << r.countries << ',' << format_number(r.mean_size)
            << ',' << format_number(r.stderr_size) << ',' << format_optional(r.mean_log_hub)
            << ',' << format_optional(r.mean_log_authority) << ',' << r.zero_hub_count << ','
            << r.zero_authority_count << '\n';
}

nlohmann::ordered_json centrality_to_json(const CrossCountryTable& table,
                                          const std::vector<std::string>& countries) {
    nlohmann::ordered_json j;
    j["schema"] = "ionet.centrality_correlation";
    j["schema_version"] = kReportSchemaVersion;
    j["countries"] = countries;
    j["hub_vs_size"] = optional_json(table.hub_vs_size);
    j["authority_vs_size"] = optional_json(table.authority_vs_size);
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& r : table.rows)
        pairs.push_back({{"label", r.label}, {"mean_size", r.mean_size},
                         {"stderr_size", r.stderr_size}});
    j["mean_vs_stderr"] = std::move(pairs);
    return j;
}

SummaryRow summary_row(const AvalancheReport& report) {
    SummaryRow row;
    row.country = report.country;
    row.model = model_number(report.model);
    if (report.params) {
        row.f = report.params->f();
        row.c = report.params->c();
        row.alpha = report.params->alpha();
    } else {
        row.shock_size = report.shock_size;
    }
    row.seeds = report.sizes.size();
    row.failed = report.failed_seeds.size();
    row.mean = report.mean;
    row.cov = report.cov;
    row.max_size = report.max_size;
    row.min_size = report.min_size;
    return row;
}

SummaryRow summary_row_from_json(const nlohmann::json& j) {
    auto opt = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return j.at(key).get<double>();
    };
    try {
        if (j.value("schema", std::string{}) != "ionet.avalanche_report")
            throw DataError("not an avalanche report");
        if (j.value("schema_version", 0) != kReportSchemaVersion)
            throw DataError(fmt::format("unsupported report schema version {}",
                                        j.value("schema_version", 0)));
        SummaryRow row;
        row.country = j.at("country").get<std::string>();
        row.model = j.at("model").get<int>();
        row.f = opt("f");
        row.c = opt("c");
        row.alpha = opt("alpha");
        row.shock_size = opt("shock_size");
        row.seeds = j.at("results").size();
        row.failed = j.at("failed").size();
        row.mean = j.at("mean").get<double>();
        row.cov = opt("cov");
        row.max_size = j.at("max_size").get<int>();
        row.min_size = j.at("min_size").get<int>();
        return row;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(fmt::format("malformed report: {}", e.what()));
    }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows,
                       const Metadata* metadata) {
    out << "country,model,f,c,alpha,shock_size,seeds,failed,mean,cov,max_size,min_size";
    if (metadata)
        for (const auto& col : metadata->columns) out << ',' << csv::quote(col);
    out << '\n';
    for (const auto& r : rows) {
        out << csv::quote(r.country) << ',' << r.model << ',' << format_optional(r.f) << ','
            << format_optional(r.c) << ',' << format_optional(r.alpha) << ','
            << format_optional(r.shock_size) << ',' << r.seeds << ',' << r.failed << ','
            << format_number(r.mean) << ',' << format_optional(r.cov) << ',' << r.max_size << ','
            << r.min_size;
        if (metadata) {
            const auto* values = metadata->find(r.country);
            for (std::size_t i = 0; i < metadata->columns.size(); ++i)
                out << ',' << (values ? csv::quote((*values)[i]) : std::string{});
        }
        out << '\n';
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError(fmt::format("cannot write {}", tmp.string()));
        out << text;
        if (!out) throw DataError(fmt::format("write to {} failed", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

} // namespace ionet
