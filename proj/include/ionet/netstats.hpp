#pragma once

#include "ionet/iotable.hpp"

#include <optional>
#include <utility>

namespace ionet {

/// A Pearson coefficient that is empty when either side has zero variance.
using Correlation = std::optional<double>;

Correlation pearson(std::span<const double> x, std::span<const double> y);

enum class PathMode { directed, undirected };

struct PathStats {
    int diameter = 0;
    double average_path_length = 0.0;
    std::size_t reachable_pairs = 0;
};

struct TopologySummary {
    double density = 0.0;
    double bilateral_density = 0.0;
    int diameter = 0;
    double average_path_length = 0.0;
    std::size_t isolated_count = 0;
    std::size_t edge_count = 0;
    PathMode path_mode = PathMode::directed;
};

/// Per-node statistics. Degrees are normalized by S - 1 and exclude self
/// loops; strengths include them.
struct NodeScores {
    Vector in_degree;
    Vector out_degree;
    Vector in_strength;
    Vector out_strength;
    /// Empty entries for nodes without neighbours.
    std::vector<std::optional<double>> annd;
    std::vector<std::optional<double>> anns;
    Vector hub;
    Vector authority;
};

struct NeighbourAverages {
    std::vector<std::optional<double>> annd;
    std::vector<std::optional<double>> anns;
    Correlation degree_annd;
    Correlation strength_anns;
};

struct LinkAssortativity {
    Correlation binary;
    Correlation weighted;
};

struct HitsScores {
    Vector hub;
    Vector authority;
    int iterations = 0;
};

/// Edges / (S(S-1)), self loops excluded.
double density(const IONetwork& net);

/// Reciprocated edges / edges; 0 when the graph has no edges.
double bilateral_density(const IONetwork& net);

/// BFS over the binary adjacency. Unreachable pairs are left out of both
/// statistics. Throws DataError when no ordered pair is reachable.
PathStats shortest_path_stats(const IONetwork& net, PathMode mode = PathMode::directed);

/// Fills the degree and strength fields of NodeScores.
NodeScores degree_strength_profiles(const IONetwork& net);

/// Total (in + out) degree and strength per node, unnormalized.
Vector total_degree(const IONetwork& net);
Vector total_strength(const IONetwork& net);

/// ANND/ANNS over the undirected skeleton using total degree/strength.
NeighbourAverages annd_anns(const IONetwork& net);

/// Pearson correlation across directed edges of the endpoint total degrees
/// and total strengths.
LinkAssortativity linkwise_assortativity(const IONetwork& net);

/// Weighted HITS: a <- Z^T h, h <- Z a, both renormalized to unit length.
/// Converged when neither vector moves by more than tol (max-abs).
HitsScores hits_scores(const IONetwork& net, double tol = 1e-12, int max_iters = 10000);

TopologySummary topology_summary(const IONetwork& net, PathMode mode = PathMode::directed);

/// Every per-node score, HITS included.
NodeScores node_scores(const IONetwork& net);

} // namespace ionet
