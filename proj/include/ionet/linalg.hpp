#pragma once

#include "ionet/matrix.hpp"

#include <span>

namespace ionet {

class IOTable;

/// Leontief inversion is refused when the spectral radius estimate of the
/// coefficient matrix reaches this value.
inline constexpr double kSpectralRadiusLimit = 0.999;

/// Required accuracy of L(I - theta) against I, max-abs.
inline constexpr double kInverseTolerance = 1e-9;

/// theta_ij = z_ij / x_j. Columns with x_j = 0 must carry no flow.
Matrix technical_coefficients(const Matrix& flows, std::span<const double> production);

/// LU factorization with partial pivoting, PA = LU packed in one matrix.
class LuFactorization {
public:
    /// Throws NumericalError when a pivot vanishes relative to the matrix scale.
    explicit LuFactorization(Matrix a);

    std::size_t size() const noexcept { return lu_.rows(); }
    Vector solve(std::span<const double> b) const;
    Matrix inverse() const;

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

/// Solves A y = b by elimination with partial pivoting.
Vector solve(const Matrix& a, std::span<const double> b);

struct EigenEstimate {
    double value = 0.0;
    Vector vector;
    int iterations = 0;
};

/// Dominant eigenpair of a square nonnegative matrix by power iteration from
/// the uniform vector. Stops when successive estimates differ by less than
/// tol * max(1, |estimate|). Throws ConvergenceError after max_iters.
EigenEstimate power_iteration(const Matrix& m, double tol = 1e-12, int max_iters = 10000);

/// Perron root of a nonnegative matrix. Iterates on I + m so that
/// periodic (e.g. cyclic) structure cannot stall convergence. Never throws on
/// slow convergence; it then returns the tightest upper bound found.
double spectral_radius(const Matrix& m, double tol = 1e-12, int max_iters = 10000);

/// Cheap upper bound min(max row sum, max column sum) for a nonnegative matrix.
double spectral_radius_bound(const Matrix& m) noexcept;

/// Returns (I - theta)^-1 after checking the spectral radius of theta.
Matrix leontief_inverse(const Matrix& theta);

/// Technical coefficients together with their Leontief inverse.
struct LeontiefSystem {
    Matrix theta;
    Matrix leontief;
    double spectral_radius_estimate = 0.0;

    static LeontiefSystem from_coefficients(Matrix theta);
    static LeontiefSystem from_table(const IOTable& table);
};

} // namespace ionet
