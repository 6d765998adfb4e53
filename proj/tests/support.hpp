#pragma once

// Fixtures and independent reference implementations shared by the unit
// tests and the acceptance binary. Nothing here calls into the code under
// test except to construct inputs.

#include "ionet/iotable.hpp"
#include "ionet/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace ionet::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(IONET_TEST_DATA_DIR) / name;
}

inline IOTable load_fixture(const std::string& stem) {
    return load_io_table(fixture_path(stem + ".csv"));
}

inline const std::vector<std::string>& shipped_fixture_names() {
    static const std::vector<std::string> names{"two_sector", "cycle", "star", "complete",
                                                "isolated"};
    return names;
}

inline std::vector<IOTable> shipped_fixtures() {
    std::vector<IOTable> out;
    for (const auto& n : shipped_fixture_names()) out.push_back(load_fixture(n));
    return out;
}

inline std::vector<std::string> letter_labels(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('A' + i)));
    return labels;
}

inline IOTable make_table(const Matrix& z, const Vector& d, const std::string& country = "T") {
    return IOTable(country, 2005, letter_labels(z.rows()), z, d);
}

/// z_AB = z_BC = z_CA = 10, d = 5 everywhere.
inline IOTable cycle_table() {
    return make_table(Matrix{{0, 10, 0}, {0, 0, 10}, {10, 0, 0}}, {5, 5, 5}, "CYC");
}

/// Hub 0 trades 10 in each direction with three leaves.
inline IOTable star_table() {
    return make_table(Matrix{{0, 10, 10, 10}, {10, 0, 0, 0}, {10, 0, 0, 0}, {10, 0, 0, 0}},
                      {30, 20, 20, 20}, "STR");
}

/// Hub 0 sells to three leaves, nothing flows back.
inline IOTable one_way_star_table() {
    return make_table(Matrix{{0, 10, 10, 10}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}},
                      {30, 20, 20, 20}, "OWS");
}

inline IOTable complete_table() {
    return make_table(Matrix{{0, 4, 4}, {4, 0, 4}, {4, 4, 0}}, {12, 12, 12}, "CMP");
}

/// Random table with integer flows so every threshold sum is exact.
inline IOTable random_integer_table(std::mt19937_64& rng, std::size_t s, double density,
                                    const std::string& country = "RND") {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> weight(1, 40);
    std::uniform_int_distribution<int> demand(0, 60);
    Matrix z(s, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            if (u(rng) < (i == j ? 0.5 : density)) z(i, j) = weight(rng);
    Vector d(s);
    for (auto& v : d) v = demand(rng) + 1;
    return make_table(z, d, country);
}

/// Every directed topology on n nodes (self loops off), weights fixed by
/// position, demand chosen so production stays positive.
inline IOTable topology_table(std::size_t n, unsigned mask) {
    Matrix z(n, n);
    unsigned bit = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (mask & (1u << bit)) z(i, j) = static_cast<double>(1 + (3 * i + 7 * j) % 9);
            ++bit;
        }
    Vector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(2 + (5 * i) % 7);
    return make_table(z, d, "TOP");
}

/// Smallest H containing the seed with H = H u {h : sum_{k in H} (z_hk + z_kh) > alpha x_h}.
/// Returned without the seed.
inline std::set<std::size_t> closure_fixed_point(const IOTable& t, std::size_t seed,
                                                 double alpha) {
    const Matrix& z = t.flows();
    const Vector& x = t.production();
    std::set<std::size_t> h{seed};
    for (bool grew = true; grew;) {
        grew = false;
        std::set<std::size_t> next = h;
        for (std::size_t v = 0; v < t.size(); ++v) {
            if (h.count(v)) continue;
            double e = 0.0;
            for (std::size_t k : h) e += z(v, k) + z(k, v);
            if (e > alpha * x[v]) next.insert(v);
        }
        grew = next.size() != h.size();
        h = std::move(next);
    }
    h.erase(seed);
    return h;
}

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline Matrix from_eigen(const Eigen::MatrixXd& e) {
    Matrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

inline double eigen_spectral_radius(const Matrix& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m), false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Sum of theta^k until the next term is below 1e-18 in max-abs.
inline Matrix neumann_series(const Matrix& theta, int max_terms = 20000) {
    const Eigen::MatrixXd t = to_eigen(theta);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(t.rows(), t.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k < max_terms; ++k) {
        term = term * t;
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    return from_eigen(sum);
}

/// Random nonnegative matrix rescaled to the requested spectral radius.
inline Matrix random_theta(std::mt19937_64& rng, std::size_t s, double rho, double density = 0.7) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix m(s, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            if (u(rng) < density) m(i, j) = u(rng);
    const double r = eigen_spectral_radius(m);
    if (r == 0.0) return m;
    for (std::size_t i = 0; i < s; ++i)
        for (double& v : m.row(i)) v *= rho / r;
    return m;
}

/// Pearson correlation by the textbook two-pass formula.
inline double reference_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Dominant unit eigenvector of a symmetric PSD matrix, sign fixed nonnegative.
inline Vector dominant_eigenvector(const Matrix& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(sym));
    const Eigen::Index last = es.eigenvalues().size() - 1;
    Eigen::VectorXd v = es.eigenvectors().col(last);
    if (v.sum() < 0) v = -v;
    Vector out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i);
    return out;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace ionet::testing
