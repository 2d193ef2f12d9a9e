#pragma once

#include <span>
#include <vector>

#include "micov/kernels.hpp"

namespace micov {

/// C-SVC dual solution over a precomputed kernel. The decision function is
/// f(x) = sum_i alpha_i y_i k(x_i, x) + bias.
struct SvmModel {
    std::vector<double> alphas;
    double bias = 0.0;
    std::vector<std::size_t> support_indices;
    std::vector<int> training_labels;
    double c = 1.0;
    bool converged = true;
    /// Maximal-violating-pair gap m(alpha) - M(alpha) at termination.
    double kkt_violation = 0.0;

    /// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
    double dual_objective(const GramMatrix& gram) const;
};

/// Sequential minimal optimization on the standard C-SVC dual with
/// maximal-KKT-violating-pair working-set selection and deterministic
/// lowest-index tie-breaking. Indefinite Grams are accepted (non-convex
/// curvature is floored at a tiny positive value); the caller can inspect
/// the Gram diagnostics it passed in.
SvmModel train_svm(const GramMatrix& gram, std::span<const int> labels, double c,
                   double kkt_tol = 1e-3, std::size_t max_iterations = 0);

struct Prediction {
    int label = 1;
    double decision_value = 0.0;
};

/// kernel_row[i] = k(training bag i, test point). Ties (f = 0) resolve to
/// the positive class.
Prediction predict(const SvmModel& model, std::span<const double> kernel_row);

} // namespace micov
