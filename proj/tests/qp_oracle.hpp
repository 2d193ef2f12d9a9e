#pragma once

// Independent brute-force oracle for the C-SVC dual
//   maximize  sum(alpha) - 1/2 alpha' Q alpha,  Q_ij = y_i y_j K_ij
//   s.t.      y' alpha = 0,  0 <= alpha <= C.
// Every maximizer pins each coordinate to a bound or leaves it free and
// stationary, so enumerating all 3^n status assignments and solving the
// equality-constrained stationarity system on the free block visits the
// global optimum exactly. Only intended for n <= ~8.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

namespace qp_oracle {

inline double dual_value(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha) {
    return alpha.sum() - 0.5 * alpha.dot(q * alpha);
}

inline double dual_maximum(const Eigen::MatrixXd& k, const std::vector<int>& y, double c) {
    const int n = static_cast<int>(y.size());
    Eigen::MatrixXd q(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            q(i, j) = y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * k(i, j);
        }
    }

    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> status(static_cast<std::size_t>(n), 0); // 0 -> 0, 1 -> C, 2 -> free
    long combos = 1;
    for (int i = 0; i < n; ++i) {
        combos *= 3;
    }
    for (long code = 0; code < combos; ++code) {
        long rest = code;
        std::vector<int> free_idx;
        Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
        double fixed_y_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            status[static_cast<std::size_t>(i)] = static_cast<int>(rest % 3);
            rest /= 3;
            if (status[static_cast<std::size_t>(i)] == 1) {
                alpha[i] = c;
                fixed_y_sum += c * y[static_cast<std::size_t>(i)];
            } else if (status[static_cast<std::size_t>(i)] == 2) {
                free_idx.push_back(i);
            }
        }
        const int nf = static_cast<int>(free_idx.size());
        if (nf == 0) {
            if (std::abs(fixed_y_sum) <= 1e-9 * std::max(1.0, c)) {
                best = std::max(best, dual_value(q, alpha));
            }
            continue;
        }
        // Stationarity on the free block with the equality multiplier beta:
        //   Q_FF a_F + Q_FB a_B - 1 + beta y_F = 0,  y_F' a_F = -y_B' a_B
        Eigen::MatrixXd sys(nf + 1, nf + 1);
        Eigen::VectorXd rhs(nf + 1);
        for (int r = 0; r < nf; ++r) {
            const int i = free_idx[static_cast<std::size_t>(r)];
            for (int cidx = 0; cidx < nf; ++cidx) {
                sys(r, cidx) = q(i, free_idx[static_cast<std::size_t>(cidx)]);
            }
            sys(r, nf) = y[static_cast<std::size_t>(i)];
            double qb = 0.0;
            for (int j = 0; j < n; ++j) {
                if (status[static_cast<std::size_t>(j)] == 1) {
                    qb += q(i, j) * c;
                }
            }
            rhs[r] = 1.0 - qb;
        }
        for (int cidx = 0; cidx < nf; ++cidx) {
            sys(nf, cidx) = y[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(cidx)])];
        }
        sys(nf, nf) = 0.0;
        rhs[nf] = -fixed_y_sum;

        const Eigen::VectorXd sol = sys.completeOrthogonalDecomposition().solve(rhs);
        if ((sys * sol - rhs).norm() > 1e-7 * std::max(1.0, rhs.norm())) {
            continue; // inconsistent stationarity system for this face
        }
        bool inside = true;
        for (int r = 0; r < nf; ++r) {
            if (sol[r] < -1e-9 || sol[r] > c + 1e-9) {
                inside = false;
                break;
            }
        }
        if (!inside) {
            continue;
        }
        for (int r = 0; r < nf; ++r) {
            alpha[free_idx[static_cast<std::size_t>(r)]] = std::clamp(sol[r], 0.0, c);
        }
        if (std::abs(alpha.dot(Eigen::Map<const Eigen::VectorXi>(y.data(), n).cast<double>())) >
            1e-7 * std::max(1.0, c)) {
            continue;
        }
        best = std::max(best, dual_value(q, alpha));
    }
    return best;
}

} // namespace qp_oracle
