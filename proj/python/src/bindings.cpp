#include "ionet/analysis.hpp"
#include "ionet/diffusion.hpp"
#include "ionet/error.hpp"
#include "ionet/iotable.hpp"
#include "ionet/linalg.hpp"
#include "ionet/netstats.hpp"
#include "ionet/report_io.hpp"
#include "ionet/synthetic.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace ionet;

namespace {

using Array2 = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_numpy(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    auto* dst = out.mutable_data();
    std::copy(m.data().begin(), m.data().end(), dst);
    return out;
}

py::array_t<double> to_numpy(const Vector& v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Matrix from_numpy(const Array2& a) {
    if (a.ndim() != 2) throw DataError("expected a two-dimensional array");
    Matrix m(a.shape(0), a.shape(1));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
        for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = r(i, j);
    return m;
}

py::object json_to_py(const nlohmann::ordered_json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

SectorIndex seed_index(const IOTable& t, const py::object& seed) {
    if (py::isinstance<py::str>(seed)) {
        const auto label = seed.cast<std::string>();
        if (auto s = t.find_sector(label)) return *s;
        throw DataError("unknown sector label " + label);
    }
    const auto s = seed.cast<long long>();
    if (s < 0 || static_cast<std::size_t>(s) >= t.size()) throw DataError("seed index out of range");
    return static_cast<SectorIndex>(s);
}

py::dict cascade_dict(const CascadeResult& r, bool with_production) {
    py::dict d;
    py::list hits;
    for (const auto& h : r.hits) hits.append(py::make_tuple(h.sector, h.round));
    d["seed"] = r.seed;
    d["hits"] = hits;
    d["avalanche_size"] = r.avalanche_size;
    d["rounds"] = r.rounds;
    d["status"] = r.status == CascadeStatus::complete ? "complete" : "aborted";
    d["diagnostic"] = r.diagnostic;
    d["final_weights"] = to_numpy(r.final_weights);
    if (with_production) d["final_production"] = to_numpy(r.final_production);
    return d;
}

std::optional<ShockParams> params_of(std::optional<double> f, std::optional<double> c) {
    if (f.has_value() != c.has_value()) throw ConfigError("f and c must be given together");
    if (!f) return std::nullopt;
    return ShockParams(*f, *c);
}

SweepOptions sweep_options(int model, std::optional<double> f, std::optional<double> c, double shock_size,
                           unsigned threads) {
    SweepOptions o;
    o.model = model_from_number(model);
    o.params = params_of(f, c);
    o.shock_size = shock_size;
    o.threads = threads;
    return o;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Input-output networks: topology statistics and shock diffusion.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", numerical.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<IOTable>(m, "IOTable")
        .def(py::init([](std::string country, int year, std::vector<std::string> labels, const Array2& flows,
                         Vector final_demand, std::optional<Vector> production) {
                 return IOTable(std::move(country), year, std::move(labels), from_numpy(flows),
                                std::move(final_demand), std::move(production));
             }),
             py::arg("country"), py::arg("year"), py::arg("labels"), py::arg("flows"), py::arg("final_demand"),
             py::arg("production") = py::none())
        .def_property_readonly("country", &IOTable::country)
        .def_property_readonly("year", &IOTable::year)
        .def_property_readonly("labels", &IOTable::labels)
        .def_property_readonly("flows", [](const IOTable& t) { return to_numpy(t.flows()); })
        .def_property_readonly("final_demand", [](const IOTable& t) { return to_numpy(t.final_demand()); })
        .def_property_readonly("production", [](const IOTable& t) { return to_numpy(t.production()); })
        .def("find_sector", &IOTable::find_sector)
        .def("__len__", &IOTable::size)
        .def("__repr__", [](const IOTable& t) {
            return "<IOTable " + t.country() + " " + std::to_string(t.year()) + ", " + std::to_string(t.size()) +
                   " sectors>";
        });

    m.def("load_table", &load_io_table, py::arg("path"), "Reads a CSV table and its optional manifest.");
    m.def(
        "parse_table",
        [](const std::string& text, const std::string& country, int year) {
            std::istringstream in(text);
            return parse_io_table(in, country, year);
        },
        py::arg("text"), py::arg("country"), py::arg("year"));
    m.def("save_table", &save_io_table, py::arg("dir"), py::arg("table"), py::arg("currency_unit") = "million EUR");
    m.def(
        "synthetic_table",
        [](const std::string& country, int year, std::size_t sectors, double density, double self_loop_probability,
           double max_input_share, std::uint64_t seed) {
            SyntheticOptions o;
            o.sectors = sectors;
            o.density = density;
            o.self_loop_probability = self_loop_probability;
            o.max_input_share = max_input_share;
            o.seed = seed;
            return synthetic_table(country, year, o);
        },
        py::arg("country"), py::arg("year") = 2005, py::arg("sectors") = 59, py::arg("density") = 0.6,
        py::arg("self_loop_probability") = 0.8, py::arg("max_input_share") = 0.7, py::arg("seed") = 1);

    m.def(
        "technical_coefficients",
        [](const IOTable& t) { return to_numpy(technical_coefficients(t.flows(), t.production())); },
        py::arg("table"));
    m.def(
        "leontief_inverse", [](const Array2& theta) { return to_numpy(leontief_inverse(from_numpy(theta))); },
        py::arg("theta"));
    m.def(
        "spectral_radius", [](const Array2& a) { return spectral_radius(from_numpy(a)); }, py::arg("matrix"));

    m.def(
        "topology",
        [](const IOTable& t, bool undirected) {
            const IONetwork net = network_view(t);
            CountryStats row;
            row.country = t.country();
            row.year = t.year();
            row.sectors = t.size();
            row.topology = topology_summary(net, undirected ? PathMode::undirected : PathMode::directed);
            row.assortativity = linkwise_assortativity(net);
            const auto nn = annd_anns(net);
            row.degree_annd = nn.degree_annd;
            row.strength_anns = nn.strength_anns;
            return json_to_py(topology_to_json(row));
        },
        py::arg("table"), py::arg("undirected_paths") = false);
    m.def(
        "node_scores",
        [](const IOTable& t) {
            const NodeScores s = node_scores(network_view(t));
            py::dict d;
            d["in_degree"] = to_numpy(s.in_degree);
            d["out_degree"] = to_numpy(s.out_degree);
            d["in_strength"] = to_numpy(s.in_strength);
            d["out_strength"] = to_numpy(s.out_strength);
            d["annd"] = s.annd;
            d["anns"] = s.anns;
            d["hub"] = to_numpy(s.hub);
            d["authority"] = to_numpy(s.authority);
            return d;
        },
        py::arg("table"));

    py::class_<ShockParams>(m, "ShockParams")
        .def(py::init<double, double>(), py::arg("f"), py::arg("c"))
        .def_property_readonly("f", &ShockParams::f)
        .def_property_readonly("c", &ShockParams::c)
        .def_property_readonly("alpha", &ShockParams::alpha);

    m.def(
        "model1",
        [](const IOTable& t, const py::object& seed, double shock_size) {
            const auto r = model1_demand_shock(LeontiefSystem::from_table(t), seed_index(t, seed), shock_size);
            py::dict d;
            d["seed"] = r.seed;
            d["delta_x"] = to_numpy(r.delta_x);
            d["avalanche_size"] = r.avalanche_size;
            return d;
        },
        py::arg("table"), py::arg("seed"), py::arg("shock_size") = 1.0);
    m.def(
        "model2",
        [](const IOTable& t, const py::object& seed, double f, double c) {
            return cascade_dict(model2_cascade(t, seed_index(t, seed), ShockParams(f, c)), false);
        },
        py::arg("table"), py::arg("seed"), py::arg("f"), py::arg("c"));
    m.def(
        "model3",
        [](const IOTable& t, const py::object& seed, double f, double c) {
            return cascade_dict(model3_cascade(t, seed_index(t, seed), ShockParams(f, c)), true);
        },
        py::arg("table"), py::arg("seed"), py::arg("f"), py::arg("c"));

    m.def(
        "sweep",
        [](const IOTable& t, int model, std::optional<double> f, std::optional<double> c, double shock_size,
           unsigned threads) {
            const auto options = sweep_options(model, f, c, shock_size, threads);
            std::vector<SeedOutcome> outcomes;
            {
                py::gil_scoped_release release;
                outcomes = sweep_all_seeds(t, options);
            }
            py::list out;
            for (const auto& o : outcomes) {
                py::dict d;
                d["seed"] = o.seed;
                d["label"] = t.labels()[o.seed];
                d["avalanche_size"] = o.avalanche_size;
                d["rounds"] = o.rounds;
                d["ok"] = o.ok;
                d["error"] = o.error;
                out.append(d);
            }
            return out;
        },
        py::arg("table"), py::arg("model") = 2, py::arg("f") = py::none(), py::arg("c") = py::none(),
        py::arg("shock_size") = 1.0, py::arg("threads") = 0);
    m.def(
        "report",
        [](const IOTable& t, int model, std::optional<double> f, std::optional<double> c, double shock_size,
           unsigned threads) {
            const auto options = sweep_options(model, f, c, shock_size, threads);
            std::vector<SeedOutcome> outcomes;
            {
                py::gil_scoped_release release;
                outcomes = sweep_all_seeds(t, options);
            }
            const auto r = summarize(outcomes, t.country(), t.labels(), options.model, options.params, shock_size);
            return json_to_py(report_to_json(r, outcomes));
        },
        py::arg("table"), py::arg("model") = 2, py::arg("f") = py::none(), py::arg("c") = py::none(),
        py::arg("shock_size") = 1.0, py::arg("threads") = 0,
        "Sweeps every seed and returns the summary report as a dict.");
}
