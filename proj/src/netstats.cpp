#include "ionet/netstats.hpp"

#include "ionet/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace ionet {

namespace {

std::vector<std::vector<std::size_t>> skeleton(const IONetwork& net) {
    std::vector<std::vector<std::size_t>> nbrs(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        auto& n = nbrs[i];
        n = net.successors(i);
        n.insert(n.end(), net.predecessors(i).begin(), net.predecessors(i).end());
        std::sort(n.begin(), n.end());
        n.erase(std::unique(n.begin(), n.end()), n.end());
    }
    return nbrs;
}

void normalize(Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    if (s == 0.0) return;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
}

double max_change(const Vector& a, const Vector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("correlation inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    if (*xmin == *xmax || *ymin == *ymax) return std::nullopt;

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double density(const IONetwork& net) {
    const auto s = static_cast<double>(net.size());
    return static_cast<double>(net.edge_count()) / (s * (s - 1.0));
}

double bilateral_density(const IONetwork& net) {
    if (net.edge_count() == 0) return 0.0;
    std::size_t reciprocated = 0;
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j : net.successors(i))
            if (net.has_edge(j, i)) ++reciprocated;
    return static_cast<double>(reciprocated) / static_cast<double>(net.edge_count());
}

PathStats shortest_path_stats(const IONetwork& net, PathMode mode) {
    const std::size_t s = net.size();
    std::vector<std::vector<std::size_t>> nbrs;
    if (mode == PathMode::undirected) {
        nbrs = skeleton(net);
    } else {
        nbrs.reserve(s);
        for (std::size_t i = 0; i < s; ++i) nbrs.push_back(net.successors(i));
    }

    PathStats stats;
    std::size_t total = 0;
    std::vector<int> dist(s);
    std::deque<std::size_t> queue;
    for (std::size_t src = 0; src < s; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.assign(1, src);
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t v : nbrs[u]) {
                if (dist[v] >= 0) continue;
                dist[v] = dist[u] + 1;
                stats.diameter = std::max(stats.diameter, dist[v]);
                total += static_cast<std::size_t>(dist[v]);
                ++stats.reachable_pairs;
                queue.push_back(v);
            }
        }
    }
    if (stats.reachable_pairs == 0) throw DataError("no pair of sectors is connected by a path");
    stats.average_path_length =
        static_cast<double>(total) / static_cast<double>(stats.reachable_pairs);
    return stats;
}

NodeScores degree_strength_profiles(const IONetwork& net) {
    const std::size_t s = net.size();
    const double norm = static_cast<double>(s) - 1.0;
    NodeScores scores;
    scores.in_degree.resize(s);
    scores.out_degree.resize(s);
    for (std::size_t i = 0; i < s; ++i) {
        scores.in_degree[i] = static_cast<double>(net.predecessors(i).size()) / norm;
        scores.out_degree[i] = static_cast<double>(net.successors(i).size()) / norm;
    }
    scores.out_strength = net.weights().row_sums();
    scores.in_strength = net.weights().column_sums();
    return scores;
}

Vector total_degree(const IONetwork& net) {
    Vector k(net.size());
    for (std::size_t i = 0; i < net.size(); ++i)
        k[i] = static_cast<double>(net.successors(i).size() + net.predecessors(i).size());
    return k;
}

Vector total_strength(const IONetwork& net) {
    Vector st = net.weights().row_sums();
    const Vector in = net.weights().column_sums();
    for (std::size_t i = 0; i < st.size(); ++i) st[i] += in[i];
    return st;
}

NeighbourAverages annd_anns(const IONetwork& net) {
    const auto nbrs = skeleton(net);
    const Vector k = total_degree(net);
    const Vector st = total_strength(net);

    NeighbourAverages out;
    out.annd.resize(net.size());
    out.anns.resize(net.size());
    Vector deg, annd, str, anns;
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (nbrs[i].empty()) continue;
        double sk = 0.0, ss = 0.0;
        for (std::size_t j : nbrs[i]) {
            sk += k[j];
            ss += st[j];
        }
        const auto n = static_cast<double>(nbrs[i].size());
        out.annd[i] = sk / n;
        out.anns[i] = ss / n;
        deg.push_back(k[i]);
        annd.push_back(sk / n);
        str.push_back(st[i]);
        anns.push_back(ss / n);
    }
    out.degree_annd = pearson(deg, annd);
    out.strength_anns = pearson(str, anns);
    return out;
}

LinkAssortativity linkwise_assortativity(const IONetwork& net) {
    const Vector k = total_degree(net);
    const Vector strength = total_strength(net);
    Vector k_src, k_dst, s_src, s_dst;
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (std::size_t j : net.successors(i)) {
            k_src.push_back(k[i]);
            k_dst.push_back(k[j]);
            s_src.push_back(strength[i]);
            s_dst.push_back(strength[j]);
        }
    }
    return {pearson(k_src, k_dst), pearson(s_src, s_dst)};
}

HitsScores hits_scores(const IONetwork& net, double tol, int max_iters) {
    const std::size_t s = net.size();
    const Matrix& z = net.weights();
    const Matrix zt = z.transposed();

    HitsScores out;
    out.hub.assign(s, 1.0 / std::sqrt(static_cast<double>(s)));
    out.authority.assign(s, 0.0);
    double change = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iters; ++it) {
        Vector a = zt * out.hub;
        normalize(a);
        Vector h = z * a;
        normalize(h);
        change = std::max(max_change(a, out.authority), max_change(h, out.hub));
        out.authority = std::move(a);
        out.hub = std::move(h);
        out.iterations = it;
        if (change <= tol) return out;
    }
    throw ConvergenceError("HITS did not converge", max_iters, change);
}

TopologySummary topology_summary(const IONetwork& net, PathMode mode) {
    TopologySummary t;
    t.density = density(net);
    t.bilateral_density = bilateral_density(net);
    const PathStats p = shortest_path_stats(net, mode);
    t.diameter = p.diameter;
    t.average_path_length = p.average_path_length;
    t.isolated_count = net.isolated_count();
    t.edge_count = net.edge_count();
    t.path_mode = mode;
    return t;
}

NodeScores node_scores(const IONetwork& net) {
    NodeScores scores = degree_strength_profiles(net);
    auto nn = annd_anns(net);
    scores.annd = std::move(nn.annd);
    scores.anns = std::move(nn.anns);
    auto hits = hits_scores(net);
    scores.hub = std::move(hits.hub);
    scores.authority = std::move(hits.authority);
    return scores;
}

} // namespace ionet
