#pragma once

#include "ionet/iotable.hpp"

#include <cstdint>
#include <string>

namespace ionet {

/// Knobs for generated tables. The same options and seed always give the
/// same table with a given standard library.
struct SyntheticOptions {
    std::size_t sectors = 59;
    /// Probability of each off-diagonal link.
    double density = 0.6;
    double self_loop_probability = 0.8;
    /// Largest column share of intermediate inputs in production; keeps the
    /// coefficient matrix's column sums, and so its spectral radius, below it.
    double max_input_share = 0.7;
    std::uint64_t seed = 1;
};

/// Random IO table with heterogeneous sector sizes and lognormal flows.
/// Production is consistent with flows plus final demand by construction.
IOTable synthetic_table(const std::string& country, int year, const SyntheticOptions& options);

} // namespace ionet
