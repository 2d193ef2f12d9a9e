#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "micov/errors.hpp"

namespace micov {

enum class Metric { LogEuclidean, AffineInvariant };

/// Dense symmetric matrix. Construction checks the symmetry tolerance
/// |a_ij - a_ji| <= 1e-12 * max|a| and then symmetrizes exactly so that
/// downstream self-adjoint solvers never see stray asymmetry.
class SymMatrix {
public:
    explicit SymMatrix(Eigen::MatrixXd entries);

    Eigen::Index dim() const { return entries_.rows(); }
    const Eigen::MatrixXd& matrix() const { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

/// Symmetric positive definite matrix. Construction validates symmetry and
/// lambda_min > 1e-12 * lambda_max; numerically indefinite sample covariances
/// are rejected here and should be routed through regularize_spd.
class SpdMatrix {
public:
    explicit SpdMatrix(Eigen::MatrixXd entries);

    static SpdMatrix identity(Eigen::Index dim);

    Eigen::Index dim() const { return entries_.rows(); }
    const Eigen::MatrixXd& matrix() const { return entries_; }

    SymMatrix as_sym() const;

    /// Returns true iff `entries` would pass SpdMatrix construction.
    static bool is_valid(const Eigen::MatrixXd& entries);

    /// Wraps `entries` without validating. Reserved for operations whose
    /// output is SPD by construction (spd_exp, geodesics, means).
    static SpdMatrix trusted(Eigen::MatrixXd entries);

private:
    struct unchecked_t {};
    SpdMatrix(unchecked_t, Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

    Eigen::MatrixXd entries_;
};

struct EigDecomposition {
    Eigen::VectorXd values;   // sorted descending
    Eigen::MatrixXd vectors;  // columns match `values`
};

/// Self-adjoint eigendecomposition, eigenvalues descending.
/// Throws NumericalError (with condition diagnostics) if the solver fails.
EigDecomposition sym_eig(const SymMatrix& m);

SymMatrix spd_log(const SpdMatrix& c);
SpdMatrix spd_exp(const SymMatrix& s);

/// d_LE(C1, C2) = ||log C1 - log C2||_F
double dist_log_euclidean(const SpdMatrix& c1, const SpdMatrix& c2);

/// d_AI(C1, C2) = ||log(C1^{-1/2} C2 C1^{-1/2})||_F
double dist_affine_invariant(const SpdMatrix& c1, const SpdMatrix& c2);

double geodesic_distance(const SpdMatrix& c1, const SpdMatrix& c2, Metric metric);

/// gamma(t) = exp((1-t) log C1 + t log C2), t in [0, 1].
SpdMatrix geodesic_log_euclidean(const SpdMatrix& c1, const SpdMatrix& c2, double t);

/// Log-Euclidean variant is the closed form exp(mean of logs); the
/// affine-invariant variant is the Karcher fixed point
///   M <- M^{1/2} exp(mean_i log(M^{-1/2} C_i M^{-1/2})) M^{1/2}
/// initialized at the log-Euclidean mean, step size 1, capped at 200
/// iterations, converged when the tangent-mean norm falls below
/// 1e-10 * max(1, mean ||log C_i||_F).
SpdMatrix geometric_mean(std::span<const SpdMatrix> cs, Metric metric);

/// Shifts a symmetric matrix onto the SPD cone:
///   out = M + max(eps * max(t, 0), eps * t_eff - lambda_min) * I
/// with t = trace(M)/d and t_eff = t when t > 0, else 1, so that
/// lambda_min(out) >= eps * t_eff. An already-SPD input changes by at most
/// a relative 2*eps; a zero matrix becomes eps * I.
SpdMatrix regularize_spd(const SymMatrix& m, double eps);

/// Pairwise squared geodesic distances over a set of instances.
/// Per-instance factors (logs / inverse square roots) are computed once;
/// the result is exactly symmetric with a zero diagonal.
Eigen::MatrixXd pairwise_squared_distances(std::span<const SpdMatrix> instances, Metric metric);

} // namespace micov
