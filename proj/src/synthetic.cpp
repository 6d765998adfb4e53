#include "ionet/synthetic.hpp"

#include "ionet/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace ionet {

IOTable synthetic_table(const std::string& country, int year, const SyntheticOptions& options) {
    const std::size_t s = options.sectors;
    if (s < 2) throw ConfigError("synthetic tables need at least 2 sectors");
    if (!(options.max_input_share > 0.0 && options.max_input_share < 1.0))
        throw ConfigError("max_input_share must lie in (0, 1)");

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::lognormal_distribution<double> sector_size(0.0, 1.2);
    std::lognormal_distribution<double> flow_noise(0.0, 1.0);

    Vector size(s);
    for (double& v : size) v = sector_size(rng);

    Matrix z(s, s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            const double p = i == j ? options.self_loop_probability : options.density;
            if (unit(rng) >= p) continue;
            z(i, j) = 100.0 * std::sqrt(size[i] * size[j]) * flow_noise(rng);
        }
    }

    const Vector out = z.row_sums();
    const Vector in = z.column_sums();
    Vector d(s);
    for (std::size_t j = 0; j < s; ++j) {
        const double share = options.max_input_share * (0.4 + 0.6 * unit(rng));
        const double needed = in[j] / share - out[j];
        d[j] = std::max(needed, 50.0 * size[j] * flow_noise(rng));
    }

    std::vector<std::string> labels(s);
    for (std::size_t i = 0; i < s; ++i) labels[i] = fmt::format("S{:02}", i + 1);
    return IOTable(country, year, std::move(labels), std::move(z), std::move(d));
}

} // namespace ionet
