#include "ionet/linalg.hpp"

#include "ionet/error.hpp"
#include "ionet/iotable.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ionet {

namespace {

void require_square(const Matrix& m, const char* what) {
    if (!m.square() || m.rows() == 0)
        throw DataError(fmt::format("{} must be a non-empty square matrix, got {}x{}", what,
                                    m.rows(), m.cols()));
}

void require_nonnegative(const Matrix& m, const char* what) {
    for (double v : m.data())
        if (!(v >= 0.0)) throw DataError(fmt::format("{} has a negative or NaN entry", what));
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Matrix identity_minus(const Matrix& theta) {
    Matrix a = theta;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = (i == j ? 1.0 : 0.0) - theta(i, j);
    return a;
}

} // namespace

Matrix technical_coefficients(const Matrix& flows, std::span<const double> production) {
    require_square(flows, "flow matrix");
    if (production.size() != flows.cols())
        throw DataError(fmt::format("dimension mismatch: {} sectors, {} production values",
                                    flows.cols(), production.size()));
    Matrix theta(flows.rows(), flows.cols());
    for (std::size_t j = 0; j < flows.cols(); ++j) {
        const double xj = production[j];
        if (!(xj >= 0.0)) throw DataError(fmt::format("negative production for sector {}", j));
        for (std::size_t i = 0; i < flows.rows(); ++i) {
            const double z = flows(i, j);
            if (!(z >= 0.0)) throw DataError(fmt::format("negative flow at ({}, {})", i, j));
            if (xj == 0.0) {
                if (z > 0.0)
                    throw DataError(fmt::format(
                        "flow {} from sector {} into sector {} which has zero production", z, i,
                        j));
                continue;
            }
            theta(i, j) = z / xj;
        }
    }
    return theta;
}

LuFactorization::LuFactorization(Matrix a) : lu_(std::move(a)) {
    require_square(lu_, "system matrix");
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    const double scale = lu_.max_abs();
    const double tiny = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
    if (scale == 0.0) throw NumericalError("singular matrix: all entries are zero");

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                pivot = i;
            }
        }
        if (best <= tiny)
            throw NumericalError(
                fmt::format("singular matrix: pivot {:.3g} in column {} (scale {:.3g})", best, k,
                            scale));
        if (pivot != k) {
            std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(pivot).begin());
            std::swap(perm_[k], perm_[pivot]);
        }
        const double inv = 1.0 / lu_(k, k);
        auto krow = lu_.row(k);
        for (std::size_t i = k + 1; i < n; ++i) {
            auto irow = lu_.row(i);
            const double factor = irow[k] * inv;
            irow[k] = factor;
            if (factor == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) irow[j] -= factor * krow[j];
        }
    }
}

Vector LuFactorization::solve(std::span<const double> b) const {
    const std::size_t n = size();
    if (b.size() != n)
        throw DataError(fmt::format("right-hand side has {} entries, system has {}", b.size(), n));
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm_[i]];
        auto r = lu_.row(i);
        for (std::size_t j = 0; j < i; ++j) s -= r[j] * y[j];
        y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        auto r = lu_.row(i);
        for (std::size_t j = i + 1; j < n; ++j) s -= r[j] * y[j];
        y[i] = s / r[i];
    }
    return y;
}

Matrix LuFactorization::inverse() const {
    const std::size_t n = size();
    Matrix inv(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const Vector col = solve(e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    return inv;
}

Vector solve(const Matrix& a, std::span<const double> b) { return LuFactorization(a).solve(b); }

EigenEstimate power_iteration(const Matrix& m, double tol, int max_iters) {
    require_square(m, "power iteration matrix");
    require_nonnegative(m, "power iteration matrix");
    const std::size_t n = m.rows();
    EigenEstimate est;
    est.vector.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double previous = std::numeric_limits<double>::quiet_NaN();
    double change = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= max_iters; ++k) {
        Vector w = m * est.vector;
        const double lambda = norm2(w);
        est.iterations = k;
        if (lambda == 0.0) {
            est.value = 0.0;
            return est;
        }
        for (double& v : w) v /= lambda;
        est.vector = std::move(w);
        est.value = lambda;
        if (k > 1) {
            change = std::abs(lambda - previous);
            if (change < tol * std::max(1.0, lambda)) return est;
        }
        previous = lambda;
    }
    throw ConvergenceError("power iteration did not converge", max_iters, change);
}

double spectral_radius(const Matrix& m, double tol, int max_iters) {
    require_square(m, "spectral radius matrix");
    require_nonnegative(m, "spectral radius matrix");
    const std::size_t n = m.rows();
    // Iterating on I + m keeps the iterate strictly positive, so the
    // Collatz-Wielandt ratios (m v)_i / v_i bracket the Perron root.
    Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double upper = std::numeric_limits<double>::infinity();
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int k = 1; k <= max_iters; ++k) {
        const Vector mv = m * v;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] <= 0.0) continue;
            const double ratio = mv[i] / v[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        upper = std::min(upper, hi);
        if (upper - lo <= tol * std::max(1.0, upper)) return upper;

        Vector w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = v[i] + mv[i];
        const double lambda = norm2(w);
        for (double& x : w) x /= lambda;
        v = std::move(w);
        if (k > 1 && std::abs(lambda - previous) < tol * lambda) return std::max(0.0, lambda - 1.0);
        previous = lambda;
    }
    // Slow (e.g. nilpotent) cases: the tightest upper bound seen is a safe estimate.
    return upper;
}

double spectral_radius_bound(const Matrix& m) noexcept {
    double row_max = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (double v : m.row(i)) s += v;
        row_max = std::max(row_max, s);
    }
    double col_max = 0.0;
    for (double s : m.column_sums()) col_max = std::max(col_max, s);
    return std::min(row_max, col_max);
}

Matrix leontief_inverse(const Matrix& theta) {
    return LeontiefSystem::from_coefficients(theta).leontief;
}

LeontiefSystem LeontiefSystem::from_coefficients(Matrix theta) {
    require_square(theta, "coefficient matrix");
    require_nonnegative(theta, "coefficient matrix");
    LeontiefSystem sys;
    sys.spectral_radius_estimate = spectral_radius(theta);
    if (sys.spectral_radius_estimate >= kSpectralRadiusLimit)
        throw NumericalError(fmt::format(
            "I - theta is singular or nearly so: spectral radius estimate {:.6g} >= {}",
            sys.spectral_radius_estimate, kSpectralRadiusLimit));

    const Matrix a = identity_minus(theta);
    try {
        sys.leontief = LuFactorization(a).inverse();
    } catch (const NumericalError& e) {
        throw NumericalError(fmt::format("{} (spectral radius estimate {:.6g})", e.what(),
                                         sys.spectral_radius_estimate));
    }
    const double residual = max_abs_diff(sys.leontief * a, Matrix::identity(a.rows()));
    if (!(residual <= kInverseTolerance))
        throw NumericalError(fmt::format(
            "Leontief inverse residual {:.3g} exceeds {} (spectral radius estimate {:.6g})",
            residual, kInverseTolerance, sys.spectral_radius_estimate));
    sys.theta = std::move(theta);
    return sys;
}

LeontiefSystem LeontiefSystem::from_table(const IOTable& table) {
    return from_coefficients(technical_coefficients(table.flows(), table.production()));
}

} // namespace ionet
