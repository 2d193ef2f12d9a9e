#include "micov/svm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace micov {

namespace {

bool in_i_up(double alpha, int y, double c) {
    return (y == 1 && alpha < c) || (y == -1 && alpha > 0.0);
}

bool in_i_low(double alpha, int y, double c) {
    return (y == 1 && alpha > 0.0) || (y == -1 && alpha < c);
}

} // namespace

double SvmModel::dual_objective(const GramMatrix& gram) const {
    const Eigen::Index n = gram.size();
    double linear = 0.0;
    double quad = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        linear += alphas[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            quad += alphas[static_cast<std::size_t>(i)] * alphas[static_cast<std::size_t>(j)] *
                    training_labels[static_cast<std::size_t>(i)] *
                    training_labels[static_cast<std::size_t>(j)] * gram.matrix()(i, j);
        }
    }
    return linear - 0.5 * quad;
}

SvmModel train_svm(const GramMatrix& gram, std::span<const int> labels, double c, double kkt_tol,
                   std::size_t max_iterations) {
    const Eigen::Index n = gram.size();
    if (static_cast<Eigen::Index>(labels.size()) != n) {
        throw std::invalid_argument("train_svm: label count does not match Gram size");
    }
    if (!(c > 0.0)) {
        throw std::invalid_argument("train_svm: C must be positive");
    }
    for (int y : labels) {
        if (y != 1 && y != -1) {
            throw std::invalid_argument("train_svm: labels must be +1 or -1");
        }
    }
    if (max_iterations == 0) {
        max_iterations = std::max<std::size_t>(100000, 200 * static_cast<std::size_t>(n));
    }

    const Eigen::MatrixXd& k = gram.matrix();
    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
    // grad_i = sum_j Q_ij alpha_j - 1 with Q_ij = y_i y_j K_ij; alpha = 0 start.
    std::vector<double> grad(static_cast<std::size_t>(n), -1.0);

    double gap = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        // Maximal violating pair: i maximizes -y grad over I_up, j minimizes
        // it over I_low; first index wins ties.
        Eigen::Index best_i = -1;
        Eigen::Index best_j = -1;
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const std::size_t ts = static_cast<std::size_t>(t);
            const double score = -labels[ts] * grad[ts];
            if (in_i_up(alpha[ts], labels[ts], c) && score > m_up) {
                m_up = score;
                best_i = t;
            }
            if (in_i_low(alpha[ts], labels[ts], c) && score < m_low) {
                m_low = score;
                best_j = t;
            }
        }
        gap = m_up - m_low;
        if (best_i < 0 || best_j < 0 || gap <= kkt_tol) {
            converged = true;
            break;
        }

        const std::size_t i = static_cast<std::size_t>(best_i);
        const std::size_t j = static_cast<std::size_t>(best_j);
        const int yi = labels[i];
        const int yj = labels[j];

        // Move along alpha_i += yi * t, alpha_j -= yj * t (preserves y'alpha).
        double eta = k(best_i, best_i) + k(best_j, best_j) - 2.0 * k(best_i, best_j);
        if (eta <= 0.0) {
            eta = 1e-12; // indefinite kernel: step to the box bound
        }
        double step = (m_up - m_low) / eta;
        step = std::min(step, yi == 1 ? c - alpha[i] : alpha[i]);
        step = std::min(step, yj == 1 ? alpha[j] : c - alpha[j]);
        if (!(step > 0.0)) {
            // Selected pair cannot move (degenerate geometry); treat the
            // remaining gap as the final KKT violation.
            break;
        }

        alpha[i] += yi * step;
        alpha[j] -= yj * step;
        for (Eigen::Index t = 0; t < n; ++t) {
            const std::size_t ts = static_cast<std::size_t>(t);
            grad[ts] += step * labels[ts] * (k(t, best_i) - k(t, best_j));
        }
    }

    // Recompute the gap for the bias and the reported violation.
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
        const std::size_t ts = static_cast<std::size_t>(t);
        const double score = -labels[ts] * grad[ts];
        if (in_i_up(alpha[ts], labels[ts], c)) {
            m_up = std::max(m_up, score);
        }
        if (in_i_low(alpha[ts], labels[ts], c)) {
            m_low = std::min(m_low, score);
        }
    }

    SvmModel model;
    model.alphas = std::move(alpha);
    model.training_labels.assign(labels.begin(), labels.end());
    model.c = c;
    model.converged = converged;
    model.kkt_violation = std::max(0.0, m_up - m_low);
    // Free support vectors satisfy -y_i grad_i = b at optimality, and that
    // score is bracketed by [m_low, m_up].
    if (std::isfinite(m_up) && std::isfinite(m_low)) {
        model.bias = 0.5 * (m_up + m_low);
    }
    for (std::size_t t = 0; t < model.alphas.size(); ++t) {
        if (model.alphas[t] > 1e-12 * c) {
            model.support_indices.push_back(t);
        }
    }
    return model;
}

Prediction predict(const SvmModel& model, std::span<const double> kernel_row) {
    if (kernel_row.size() != model.alphas.size()) {
        throw std::invalid_argument("predict: kernel row length does not match training size");
    }
    double f = model.bias;
    for (std::size_t i = 0; i < kernel_row.size(); ++i) {
        f += model.alphas[i] * model.training_labels[i] * kernel_row[i];
    }
    return {f >= 0.0 ? 1 : -1, f};
}

} // namespace micov
