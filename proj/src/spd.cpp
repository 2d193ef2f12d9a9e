#include "micov/spd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace micov {

namespace {

void require_symmetric(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
    }
    const double scale = m.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * std::max(scale, 1e-300);
    if (((m - m.transpose()).cwiseAbs().maxCoeff()) > tol) {
        throw std::invalid_argument(std::string(what) + ": matrix is not symmetric within tolerance");
    }
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
    }
}

void require_same_dim(const SpdMatrix& a, const SpdMatrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("SPD operands have mismatched dimensions");
    }
}

EigDecomposition eig_descending(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "self-adjoint eigensolver failed to converge: dim=" << m.rows()
            << " max|entry|=" << m.cwiseAbs().maxCoeff() << " trace=" << m.trace();
        throw NumericalError(msg.str());
    }
    // Eigen returns ascending order; flip to descending.
    const Eigen::Index d = m.rows();
    EigDecomposition out;
    out.values = solver.eigenvalues().reverse();
    out.vectors.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    }
    return out;
}

Eigen::MatrixXd apply_spectral(const EigDecomposition& eig, double (*fn)(double)) {
    Eigen::VectorXd mapped(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        mapped[i] = fn(eig.values[i]);
    }
    Eigen::MatrixXd out = eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
    return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd log_of(const Eigen::MatrixXd& spd, const char* what) {
    EigDecomposition eig = eig_descending(spd);
    if (eig.values[eig.values.size() - 1] <= 0.0) {
        std::ostringstream msg;
        msg << what << ": eigenvalue " << eig.values[eig.values.size() - 1]
            << " <= 0, matrix is not positive definite";
        throw DomainError(msg.str());
    }
    return apply_spectral(eig, [](double x) { return std::log(x); });
}

Eigen::MatrixXd inv_sqrt_of(const Eigen::MatrixXd& spd, const char* what) {
    EigDecomposition eig = eig_descending(spd);
    if (eig.values[eig.values.size() - 1] <= 0.0) {
        std::ostringstream msg;
        msg << what << ": eigenvalue " << eig.values[eig.values.size() - 1]
            << " <= 0, inverse square root undefined";
        throw DomainError(msg.str());
    }
    return apply_spectral(eig, [](double x) { return 1.0 / std::sqrt(x); });
}

Eigen::MatrixXd sqrt_of(const Eigen::MatrixXd& spd) {
    return apply_spectral(eig_descending(spd), [](double x) { return std::sqrt(x); });
}

Eigen::MatrixXd exp_of(const Eigen::MatrixXd& sym) {
    Eigen::MatrixXd out = apply_spectral(eig_descending(sym), [](double x) { return std::exp(x); });
    if (!out.allFinite()) {
        throw NumericalError("matrix exponential overflowed (extreme eigenvalues)");
    }
    return out;
}

} // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd entries) {
    require_symmetric(entries, "SymMatrix");
    entries_ = 0.5 * (entries + entries.transpose());
}

SpdMatrix::SpdMatrix(Eigen::MatrixXd entries) {
    require_symmetric(entries, "SpdMatrix");
    Eigen::MatrixXd sym = 0.5 * (entries + entries.transpose());
    EigDecomposition eig = eig_descending(sym);
    const double lambda_max = eig.values[0];
    const double lambda_min = eig.values[eig.values.size() - 1];
    if (!(lambda_min > 1e-12 * std::max(lambda_max, 0.0))) {
        std::ostringstream msg;
        msg << "SpdMatrix: failed positive-definite validation (lambda_min=" << lambda_min
            << ", lambda_max=" << lambda_max << ")";
        throw DomainError(msg.str());
    }
    entries_ = std::move(sym);
}

SpdMatrix SpdMatrix::identity(Eigen::Index dim) {
    return SpdMatrix(unchecked_t{}, Eigen::MatrixXd::Identity(dim, dim));
}

SpdMatrix SpdMatrix::trusted(Eigen::MatrixXd entries) {
    return SpdMatrix(unchecked_t{}, std::move(entries));
}

SymMatrix SpdMatrix::as_sym() const { return SymMatrix(entries_); }

bool SpdMatrix::is_valid(const Eigen::MatrixXd& entries) {
    try {
        SpdMatrix probe(entries);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    } catch (const DomainError&) {
        return false;
    }
}

EigDecomposition sym_eig(const SymMatrix& m) { return eig_descending(m.matrix()); }

SymMatrix spd_log(const SpdMatrix& c) { return SymMatrix(log_of(c.matrix(), "spd_log")); }

SpdMatrix spd_exp(const SymMatrix& s) { return SpdMatrix::trusted(exp_of(s.matrix())); }

double dist_log_euclidean(const SpdMatrix& c1, const SpdMatrix& c2) {
    require_same_dim(c1, c2);
    return (log_of(c1.matrix(), "dist_log_euclidean") - log_of(c2.matrix(), "dist_log_euclidean"))
        .norm();
}

double dist_affine_invariant(const SpdMatrix& c1, const SpdMatrix& c2) {
    require_same_dim(c1, c2);
    const Eigen::MatrixXd w = inv_sqrt_of(c1.matrix(), "dist_affine_invariant");
    Eigen::MatrixXd whitened = w * c2.matrix() * w;
    whitened = 0.5 * (whitened + whitened.transpose());
    return log_of(whitened, "dist_affine_invariant").norm();
}

double geodesic_distance(const SpdMatrix& c1, const SpdMatrix& c2, Metric metric) {
    return metric == Metric::LogEuclidean ? dist_log_euclidean(c1, c2)
                                          : dist_affine_invariant(c1, c2);
}

SpdMatrix geodesic_log_euclidean(const SpdMatrix& c1, const SpdMatrix& c2, double t) {
    require_same_dim(c1, c2);
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::invalid_argument("geodesic parameter t must lie in [0, 1]");
    }
    const Eigen::MatrixXd blend = (1.0 - t) * log_of(c1.matrix(), "geodesic_log_euclidean") +
                                  t * log_of(c2.matrix(), "geodesic_log_euclidean");
    return SpdMatrix::trusted(exp_of(blend));
}

SpdMatrix geometric_mean(std::span<const SpdMatrix> cs, Metric metric) {
    if (cs.empty()) {
        throw std::invalid_argument("geometric_mean: empty input set");
    }
    const Eigen::Index d = cs[0].dim();
    for (const SpdMatrix& c : cs) {
        if (c.dim() != d) {
            throw std::invalid_argument("geometric_mean: mixed dimensions");
        }
    }
    if (cs.size() == 1) {
        return cs[0];
    }

    double log_scale = 0.0;
    Eigen::MatrixXd mean_log = Eigen::MatrixXd::Zero(d, d);
    for (const SpdMatrix& c : cs) {
        const Eigen::MatrixXd l = log_of(c.matrix(), "geometric_mean");
        log_scale += l.norm();
        mean_log += l;
    }
    mean_log /= static_cast<double>(cs.size());
    log_scale /= static_cast<double>(cs.size());

    Eigen::MatrixXd mean = exp_of(mean_log);
    if (metric == Metric::LogEuclidean) {
        return SpdMatrix::trusted(std::move(mean));
    }

    // Karcher fixed point, initialized at the log-Euclidean mean.
    const double tol = 1e-10 * std::max(1.0, log_scale);
    constexpr int kMaxIterations = 200;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        const Eigen::MatrixXd w = inv_sqrt_of(mean, "geometric_mean");
        Eigen::MatrixXd tangent = Eigen::MatrixXd::Zero(d, d);
        for (const SpdMatrix& c : cs) {
            Eigen::MatrixXd whitened = w * c.matrix() * w;
            whitened = 0.5 * (whitened + whitened.transpose());
            tangent += log_of(whitened, "geometric_mean");
        }
        tangent /= static_cast<double>(cs.size());
        if (tangent.norm() <= tol) {
            return SpdMatrix::trusted(std::move(mean));
        }
        const Eigen::MatrixXd root = sqrt_of(mean);
        mean = root * exp_of(tangent) * root;
        mean = 0.5 * (mean + mean.transpose());
    }
    throw NumericalError("geometric_mean: Karcher iteration did not converge within 200 steps");
}

SpdMatrix regularize_spd(const SymMatrix& m, double eps) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("regularize_spd: eps must be positive");
    }
    const Eigen::Index d = m.dim();
    const EigDecomposition eig = eig_descending(m.matrix());
    const double lambda_min = eig.values[d - 1];
    const double t = m.matrix().trace() / static_cast<double>(d);
    const double t_eff = t > 0.0 ? t : 1.0;
    // The 1e-9 headroom keeps lambda_min(out) >= eps * t_eff after the
    // rounding of the shifted eigendecomposition.
    const double shift =
        std::max(eps * std::max(t, 0.0), (eps * t_eff - lambda_min) * (1.0 + 1e-9));
    return SpdMatrix::trusted(m.matrix() + shift * Eigen::MatrixXd::Identity(d, d));
}

Eigen::MatrixXd pairwise_squared_distances(std::span<const SpdMatrix> instances, Metric metric) {
    const Eigen::Index n = static_cast<Eigen::Index>(instances.size());
    if (n < 1) {
        throw std::invalid_argument("pairwise_squared_distances: empty instance set");
    }
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
    if (metric == Metric::LogEuclidean) {
        std::vector<Eigen::MatrixXd> logs;
        logs.reserve(static_cast<std::size_t>(n));
        for (const SpdMatrix& c : instances) {
            logs.push_back(log_of(c.matrix(), "pairwise_squared_distances"));
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double d = (logs[static_cast<std::size_t>(i)] -
                                  logs[static_cast<std::size_t>(j)])
                                     .norm();
                d2(i, j) = d * d;
                d2(j, i) = d2(i, j);
            }
        }
    } else {
        std::vector<Eigen::MatrixXd> whiteners;
        whiteners.reserve(static_cast<std::size_t>(n));
        for (const SpdMatrix& c : instances) {
            whiteners.push_back(inv_sqrt_of(c.matrix(), "pairwise_squared_distances"));
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::MatrixXd& w = whiteners[static_cast<std::size_t>(i)];
            for (Eigen::Index j = i + 1; j < n; ++j) {
                Eigen::MatrixXd whitened = w * instances[static_cast<std::size_t>(j)].matrix() * w;
                whitened = 0.5 * (whitened + whitened.transpose());
                const double d = log_of(whitened, "pairwise_squared_distances").norm();
                d2(i, j) = d * d;
                d2(j, i) = d2(i, j);
            }
        }
    }
    return d2;
}

} // namespace micov
