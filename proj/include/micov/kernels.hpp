#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "micov/bag.hpp"
#include "micov/spd.hpp"

namespace micov {

enum class KernelKind { LeGaussian, AiGaussian, Isometric };

/// Instance-kernel configuration. Gaussian kinds evaluate
/// exp(-d^2 / sigma); the isometric kind replaces the instance kernel with
/// the double-centered similarity of the pooled geodesic distance matrix
/// (batch-only) and ignores sigma. `isometric_metric` selects the distance
/// underlying that matrix.
struct KernelConfig {
    KernelKind kind = KernelKind::AiGaussian;
    double sigma = 1.0;
    int power = 1;
    bool normalize = true;
    Metric isometric_metric = Metric::AffineInvariant;
};

struct GramDiagnostics {
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    /// sum of negative eigenvalues / sum of |eigenvalues|, in [-1, 0].
    double negative_eigen_fraction = 0.0;

    bool is_psd(double tol_factor = 1e-8) const {
        return min_eigenvalue >= -tol_factor * std::max(max_eigenvalue, 0.0);
    }
};

/// Symmetric bag-level similarity matrix with spectrum diagnostics computed
/// at construction via a full symmetric eigendecomposition.
class GramMatrix {
public:
    explicit GramMatrix(Eigen::MatrixXd entries);

    Eigen::Index size() const { return entries_.rows(); }
    const Eigen::MatrixXd& matrix() const { return entries_; }
    const GramDiagnostics& diagnostics() const { return diagnostics_; }

private:
    Eigen::MatrixXd entries_;
    GramDiagnostics diagnostics_;
};

/// Gaussian instance-level kernel; rejects the batch-only isometric kind.
double instance_kernel(const SpdMatrix& x, const SpdMatrix& y, const KernelConfig& cfg);

/// Set kernel: sum over all cross-bag instance pairs of k^power, divided by
/// N*M iff cfg.normalize.
double mi_kernel(const Bag& x, const Bag& y, const KernelConfig& cfg);

/// Bag-level Gram over the whole cohort. For the isometric kind the
/// instance similarities come from double-centering the pooled distance
/// matrix of every instance presented (train and test together).
GramMatrix gram_matrix(std::span<const Bag> bags, const KernelConfig& cfg);

/// S = -1/2 J D^2 J with J = I - (1/N) 1 1^T; rows and columns of S sum to
/// zero and S_ii + S_jj - 2 S_ij reconstructs the squared distances.
Eigen::MatrixXd isometric_instance_similarity(std::span<const SpdMatrix> instances, Metric metric);

/// Eq.-7 sum partitioned by hidden instance-label pairs; the three parts
/// add back to mi_kernel exactly.
struct KernelDecomposition {
    double pos_pos = 0.0;
    double pos_neg = 0.0;
    double neg_neg = 0.0;

    double total() const { return pos_pos + pos_neg + neg_neg; }
};

KernelDecomposition kernel_decomposition(const Bag& x, const Bag& y, const KernelConfig& cfg);

/// Isometric-kernel model fit on a training pool only: the double centering
/// uses training statistics, and unseen bags are projected with the
/// out-of-sample centering formula so held-out data never leaks into the
/// training-side Gram.
class IsometricModel {
public:
    IsometricModel(std::span<const Bag> training_bags, const KernelConfig& cfg);

    const GramMatrix& training_gram() const { return *training_gram_; }

    /// Kernel row of an unseen bag against every training bag.
    std::vector<double> kernel_row(const Bag& test_bag) const;

private:
    double bag_pair_value(const Eigen::MatrixXd& s, std::size_t a, std::size_t b) const;

    KernelConfig cfg_;
    std::vector<SpdMatrix> pool_;
    std::vector<std::pair<std::size_t, std::size_t>> bag_ranges_; // [first, last) into pool_
    Eigen::VectorXd column_means_;                                // of the pooled D^2
    double grand_mean_ = 0.0;
    std::unique_ptr<GramMatrix> training_gram_;
};

} // namespace micov
