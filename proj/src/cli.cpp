#include "ionet/cli.hpp"

#include "ionet/analysis.hpp"
#include "ionet/error.hpp"
#include "ionet/report_io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace ionet::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return config_error;
    if (dynamic_cast<const NumericalError*>(&e)) return numerical_error;
    if (dynamic_cast<const DataError*>(&e)) return data_error;
    if (dynamic_cast<const fs::filesystem_error*>(&e)) return data_error;
    return internal_error;
}

// Remembers the first failure; later failures do not change the status.
struct Status {
    int code = success;
    void fail(int c) {
        if (code == success) code = c;
    }
};

bool wants_csv(OutputFormat f) { return f != OutputFormat::json; }
bool wants_json(OutputFormat f) { return f != OutputFormat::csv; }

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

void prepare_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw ConfigError(fmt::format("cannot create output directory {}: {}", dir.string(),
                                      ec ? ec.message() : "not a directory"));
}

std::vector<SectorIndex> resolve_seeds(const IOTable& table,
                                       const std::vector<std::string>& filter) {
    std::vector<SectorIndex> seeds;
    for (const auto& item : filter) {
        if (const auto idx = table.find_sector(item)) {
            seeds.push_back(*idx);
            continue;
        }
        const bool numeric =
            !item.empty() && std::all_of(item.begin(), item.end(), [](unsigned char ch) {
                return std::isdigit(ch) != 0;
            });
        if (numeric) {
            const auto idx = static_cast<SectorIndex>(std::stoull(item));
            if (idx < table.size()) {
                seeds.push_back(idx);
                continue;
            }
        }
        throw DataError(fmt::format("seed '{}' is neither a sector label nor an index of {}", item,
                                    table.country()));
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    return seeds;
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
    return fmt::format("{}", secs.count());
}

} // namespace

std::vector<ShockParams> parameter_grid(const RunConfig& config) {
    if (config.f.size() != config.c.size())
        throw ConfigError(fmt::format("--f given {} times but --c {} times; they pair up",
                                      config.f.size(), config.c.size()));
    std::vector<ShockParams> grid;
    for (std::size_t k = 0; k < config.f.size(); ++k) grid.emplace_back(config.f[k], config.c[k]);
    for (int m : config.models) {
        model_from_number(m);
        if (m != 1 && grid.empty())
            throw ConfigError(fmt::format("model {} needs at least one --f/--c pair", m));
    }
    if (config.models.empty()) throw ConfigError("no model selected");
    if (!(config.shock_size > 0.0))
        throw ConfigError(fmt::format("--shock-size {} must be positive", config.shock_size));
    return grid;
}

int cmd_validate(const std::vector<fs::path>& inputs, std::ostream& out, std::ostream& err) {
    Status status;
    if (inputs.empty()) {
        err << "validate: no input files\n";
        return config_error;
    }
    for (const auto& path : inputs) {
        try {
            const IOTable table = load_io_table(path);
            const Vector r = table.production_residuals();
            const double worst = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
            const IONetwork net = network_view(table);
            out << fmt::format("PASS {} country={} year={} sectors={} edges={} isolated={} "
                               "max_relative_residual={}\n",
                               path.string(), table.country(), table.year(), table.size(),
                               net.edge_count(), net.isolated_count(), format_number(worst));
        } catch (const std::exception& e) {
            out << fmt::format("FAIL {}: {}\n", path.string(), e.what());
            status.fail(exit_code_for(e));
        }
    }
    return status.code;
}

int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Status status;
    if (config.inputs.empty()) {
        err << "stats: no input files\n";
        return config_error;
    }
    try {
        prepare_out_dir(config.out_dir);
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return config_error;
    }

    std::vector<CountryStats> rows;
    auto json_rows = nlohmann::ordered_json::array();
    std::set<std::string> seen;
    for (const auto& path : config.inputs) {
        try {
            const IOTable table = load_io_table(path);
            if (!seen.insert(table.country()).second)
                throw DataError(fmt::format("country {} appears twice", table.country()));
            const IONetwork net = network_view(table);
            CountryStats row;
            row.country = table.country();
            row.year = table.year();
            row.sectors = table.size();
            row.topology = topology_summary(net, config.path_mode);
            row.assortativity = linkwise_assortativity(net);
            const auto nn = annd_anns(net);
            row.degree_annd = nn.degree_annd;
            row.strength_anns = nn.strength_anns;
            const NodeScores scores = node_scores(net);

            const fs::path dir = config.out_dir / table.country();
            if (wants_csv(config.format))
                write_file_atomic(dir / "nodes.csv",
                                  render([&](std::ostream& os) { write_nodes_csv(os, table, net, scores); }));
            if (wants_json(config.format)) json_rows.push_back(topology_to_json(row));
            rows.push_back(std::move(row));
            out << fmt::format("{}: density={} bilateral_density={} diameter={} apl={}\n",
                               table.country(), format_number(rows.back().topology.density),
                               format_number(rows.back().topology.bilateral_density),
                               rows.back().topology.diameter,
                               format_number(rows.back().topology.average_path_length));
        } catch (const std::exception& e) {
            err << fmt::format("FAIL {}: {}\n", path.string(), e.what());
            status.fail(exit_code_for(e));
        }
    }
    if (wants_csv(config.format))
        write_file_atomic(config.out_dir / "topology.csv",
                          render([&](std::ostream& os) { write_topology_csv(os, rows); }));
    if (wants_json(config.format))
        write_file_atomic(config.out_dir / "topology.json", json_rows.dump(2) + "\n");
    return status.code;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Status status;
    std::vector<ShockParams> grid;
    std::optional<Metadata> metadata;
    try {
        if (config.inputs.empty()) throw ConfigError("simulate: no input files");
        grid = parameter_grid(config);
        prepare_out_dir(config.out_dir);
        if (config.metadata) metadata = read_metadata(*config.metadata);
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return exit_code_for(e);
    }

    struct Entry {
        AvalancheReport report;
        std::shared_ptr<const NodeScores> scores;
    };
    std::map<std::string, std::vector<Entry>> by_scenario;
    std::vector<std::string> scenario_order;
    std::vector<SummaryRow> summary;
    std::set<std::string> seen;
    const bool cross_country = config.inputs.size() >= 2;
    const Metadata* meta = metadata ? &*metadata : nullptr;

    for (const auto& path : config.inputs) {
        try {
            const IOTable table = load_io_table(path);
            if (!seen.insert(table.country()).second)
                throw DataError(fmt::format("country {} appears twice", table.country()));
            const auto seeds = resolve_seeds(table, config.seed_filter);

            std::shared_ptr<const NodeScores> scores;
            if (cross_country) {
                try {
                    scores = std::make_shared<const NodeScores>(node_scores(network_view(table)));
                } catch (const std::exception& e) {
                    err << fmt::format("{}: centrality unavailable: {}\n", table.country(),
                                       e.what());
                    status.fail(exit_code_for(e));
                }
            }

            auto run_one = [&](Model model, std::optional<ShockParams> params) {
                SweepOptions opts;
                opts.model = model;
                opts.params = params;
                opts.shock_size = config.shock_size;
                opts.seeds = seeds;
                opts.threads = config.threads;
                const auto outcomes = sweep_all_seeds(table, opts);
                for (const auto& o : outcomes)
                    if (!o.ok) {
                        err << fmt::format("{} {} seed {}: {}\n", table.country(), model_tag(model),
                                           table.labels()[o.seed], o.error);
                        status.fail(model == Model::production_updating ? numerical_error
                                                                        : data_error);
                    }
                AvalancheReport report = summarize(outcomes, table.country(), table.labels(),
                                                   model, params, config.shock_size);

                const std::string scenario =
                    fmt::format("{}/{}", model_tag(model), parameter_tag(report));
                const fs::path dir = config.out_dir / table.country() / scenario;
                if (wants_json(config.format)) {
                    auto j = report_to_json(report, outcomes, meta ? meta->find(table.country()) : nullptr,
                                            meta);
                    if (config.timestamp) j["generated_at"] = timestamp_now();
                    write_file_atomic(dir / "report.json", j.dump(2) + "\n");
                }
                if (wants_csv(config.format)) {
                    write_file_atomic(dir / "sizes.csv", render([&](std::ostream& os) {
                                          write_sizes_csv(os, report, outcomes);
                                      }));
                    write_file_atomic(dir / "ccdf.csv", render([&](std::ostream& os) {
                                          write_ccdf_csv(os, report);
                                      }));
                    write_file_atomic(dir / "triggers.csv", render([&](std::ostream& os) {
                                          write_triggers_csv(os, report);
                                      }));
                }
                out << fmt::format("{} {}: max={} mean={} cov={}\n", table.country(), scenario,
                                   report.max_size, format_number(report.mean),
                                   report.cov ? format_number(*report.cov) : "undefined");
                summary.push_back(summary_row(report));
                if (scores) {
                    if (!by_scenario.contains(scenario)) scenario_order.push_back(scenario);
                    by_scenario[scenario].push_back({std::move(report), scores});
                }
            };

            for (int m : config.models) {
                const Model model = model_from_number(m);
                if (model == Model::demand) {
                    run_one(model, std::nullopt);
                } else {
                    for (const auto& p : grid) run_one(model, p);
                }
            }
        } catch (const std::exception& e) {
            err << fmt::format("FAIL {}: {}\n", path.string(), e.what());
            status.fail(exit_code_for(e));
        }
    }

    for (const auto& scenario : scenario_order) {
        const auto& entries = by_scenario[scenario];
        if (entries.size() < 2) continue;
        try {
            std::vector<CountryCentrality> input;
            std::vector<std::string> countries;
            for (const auto& e : entries) {
                input.push_back({&e.report, e.scores.get()});
                countries.push_back(e.report.country);
            }
            const auto table = correlate_centrality(input);
            const fs::path dir = config.out_dir / "cross_country" / scenario;
            if (wants_csv(config.format))
                write_file_atomic(dir / "centrality.csv", render([&](std::ostream& os) {
                                      write_centrality_csv(os, table);
                                  }));
            if (wants_json(config.format))
                write_file_atomic(dir / "correlation.json",
                                  centrality_to_json(table, countries).dump(2) + "\n");
        } catch (const std::exception& e) {
            err << fmt::format("cross-country {}: {}\n", scenario, e.what());
            status.fail(exit_code_for(e));
        }
    }

    if (wants_csv(config.format))
        write_file_atomic(config.out_dir / "summary.csv", render([&](std::ostream& os) {
                              write_summary_csv(os, summary, meta);
                          }));
    if (status.code != success) err << "simulate finished with failures\n";
    return status.code;
}

int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Status status;
    std::optional<Metadata> metadata;
    std::vector<fs::path> reports;
    try {
        if (config.inputs.empty()) throw ConfigError("report: no result directories");
        if (config.metadata) metadata = read_metadata(*config.metadata);
        for (const auto& root : config.inputs) {
            if (!fs::is_directory(root))
                throw ConfigError(fmt::format("{} is not a directory", root.string()));
            for (const auto& entry : fs::recursive_directory_iterator(root))
                if (entry.is_regular_file() && entry.path().filename() == "report.json")
                    reports.push_back(entry.path());
        }
        prepare_out_dir(config.out_dir);
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return exit_code_for(e);
    }
    std::sort(reports.begin(), reports.end());

    std::vector<SummaryRow> rows;
    for (const auto& path : reports) {
        try {
            std::ifstream in(path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw DataError(fmt::format("invalid JSON: {}", e.what()));
            }
            rows.push_back(summary_row_from_json(j));
        } catch (const std::exception& e) {
            err << fmt::format("FAIL {}: {}\n", path.string(), e.what());
            status.fail(exit_code_for(e));
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
        return std::tie(a.country, a.model) < std::tie(b.country, b.model);
    });

    const Metadata* meta = metadata ? &*metadata : nullptr;
    const std::string text = render([&](std::ostream& os) { write_summary_csv(os, rows, meta); });
    if (wants_csv(config.format)) write_file_atomic(config.out_dir / "report_summary.csv", text);
    if (wants_json(config.format)) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json j;
            j["country"] = r.country;
            j["model"] = r.model;
            j["f"] = r.f ? nlohmann::ordered_json(*r.f) : nlohmann::ordered_json(nullptr);
            j["c"] = r.c ? nlohmann::ordered_json(*r.c) : nlohmann::ordered_json(nullptr);
            j["alpha"] = r.alpha ? nlohmann::ordered_json(*r.alpha) : nlohmann::ordered_json(nullptr);
            j["shock_size"] =
                r.shock_size ? nlohmann::ordered_json(*r.shock_size) : nlohmann::ordered_json(nullptr);
            j["seeds"] = r.seeds;
            j["failed"] = r.failed;
            j["mean"] = r.mean;
            j["cov"] = r.cov ? nlohmann::ordered_json(*r.cov) : nlohmann::ordered_json(nullptr);
            j["max_size"] = r.max_size;
            j["min_size"] = r.min_size;
            if (meta)
                if (const auto* values = meta->find(r.country))
                    for (std::size_t i = 0; i < meta->columns.size(); ++i)
                        j[meta->columns[i]] = (*values)[i];
            arr.push_back(std::move(j));
        }
        write_file_atomic(config.out_dir / "report_summary.json", arr.dump(2) + "\n");
    }
    out << text;
    return status.code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shock propagation on input-output networks"};
    app.set_config("--config", "", "Read options from a TOML/INI file; flags override it");
    app.require_subcommand(1);

    RunConfig config;
    std::vector<std::string> inputs;
    std::string format = "both";
    std::string out_dir = "out";
    std::string metadata;
    bool undirected = false;
    config.models = {};

    const std::map<std::string, OutputFormat> formats{
        {"csv", OutputFormat::csv}, {"json", OutputFormat::json}, {"both", OutputFormat::both}};

    auto* validate = app.add_subcommand("validate", "Check tables against the input schema");
    validate->add_option("files", inputs, "Table CSV files")->required();

    auto* stats = app.add_subcommand("stats", "Topology statistics and node scores");
    stats->add_option("files", inputs, "Table CSV files")->required();
    stats->add_option("--out", out_dir, "Output directory")->capture_default_str();
    stats->add_flag("--undirected-paths", undirected, "Diameter/APL on the undirected skeleton");
    stats->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "both"}));

    std::vector<int> models;
    auto* simulate = app.add_subcommand("simulate", "Run shock-diffusion sweeps");
    simulate->add_option("files", inputs, "Table CSV files")->required();
    simulate->add_option("--model", models, "1, 2 or 3 (repeatable)")
        ->allow_extra_args(false)
        ->check(CLI::Range(1, 3));
    simulate->add_option("--f", config.f, "Shock fraction f (repeatable, pairs with --c)")
        ->allow_extra_args(false);
    simulate->add_option("--c", config.c, "Capacity share c (repeatable, pairs with --f)")
        ->allow_extra_args(false);
    simulate->add_option("--shock-size", config.shock_size, "Final-demand shock for model 1")
        ->capture_default_str();
    simulate->add_option("--out", out_dir, "Output directory")->capture_default_str();
    simulate->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "both"}));
    simulate->add_option("--metadata", metadata, "Per-country CSV passed through to exports");
    simulate->add_option("--seed", config.seed_filter, "Restrict to these sectors (label or index)")
        ->allow_extra_args(false);
    simulate->add_option("--threads", config.threads, "Worker threads per sweep (0 = auto)");
    simulate->add_flag("--timestamp", config.timestamp, "Record generation time in report.json");

    auto* report = app.add_subcommand("report", "Summarize report.json files from simulate runs");
    report->add_option("dirs", inputs, "Result directories")->required();
    report->add_option("--out", out_dir, "Output directory (default: first result directory)");
    report->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "both"}));
    report->add_option("--metadata", metadata, "Per-country CSV passed through to exports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? success : config_error;
    }

    for (const auto& s : inputs) config.inputs.emplace_back(s);
    config.format = formats.at(format);
    config.out_dir = out_dir;
    config.path_mode = undirected ? PathMode::undirected : PathMode::directed;
    config.models = models.empty() ? std::vector<int>{2} : models;
    if (!metadata.empty()) config.metadata = metadata;

    try {
        if (validate->parsed()) return cmd_validate(config.inputs, out, err);
        if (stats->parsed()) return cmd_stats(config, out, err);
        if (simulate->parsed()) return cmd_simulate(config, out, err);
        if (report->parsed()) {
            if (report->count("--out") == 0) config.out_dir = config.inputs.front();
            return cmd_report(config, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return internal_error;
}

} // namespace ionet::cli
