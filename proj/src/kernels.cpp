#include "micov/kernels.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace micov {

namespace {

void require_gaussian(const KernelConfig& cfg) {
    if (cfg.kind == KernelKind::Isometric) {
        throw std::invalid_argument(
            "instance_kernel: the isometric kind is batch-only; use gram_matrix or "
            "IsometricModel");
    }
    if (!(cfg.sigma > 0.0)) {
        throw std::invalid_argument("kernel bandwidth sigma must be positive");
    }
    if (cfg.power < 1) {
        throw std::invalid_argument("kernel power must be >= 1");
    }
}

double int_pow(double base, int exponent) {
    double out = 1.0;
    for (int i = 0; i < exponent; ++i) {
        out *= base;
    }
    return out;
}

Metric metric_for(const KernelConfig& cfg) {
    return cfg.kind == KernelKind::LeGaussian ? Metric::LogEuclidean : Metric::AffineInvariant;
}

/// Aggregates instance-level values k(x_i, y_j)^p over a cross-bag block.
double aggregate_block(const Eigen::MatrixXd& values, int power, bool normalize) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            sum += int_pow(values(i, j), power);
        }
    }
    if (normalize) {
        sum /= static_cast<double>(values.rows()) * static_cast<double>(values.cols());
    }
    return sum;
}

std::vector<SpdMatrix> pooled_instances(std::span<const Bag> bags,
                                        std::vector<std::pair<std::size_t, std::size_t>>* ranges) {
    std::vector<SpdMatrix> pool;
    for (const Bag& bag : bags) {
        const std::size_t first = pool.size();
        pool.insert(pool.end(), bag.instances().begin(), bag.instances().end());
        if (ranges != nullptr) {
            ranges->emplace_back(first, pool.size());
        }
    }
    return pool;
}

} // namespace

GramMatrix::GramMatrix(Eigen::MatrixXd entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1) {
        throw std::invalid_argument("GramMatrix: entries must be square and non-empty");
    }
    entries_ = 0.5 * (entries + entries.transpose());
    const EigDecomposition eig = sym_eig(SymMatrix(entries_));
    diagnostics_.max_eigenvalue = eig.values[0];
    diagnostics_.min_eigenvalue = eig.values[eig.values.size() - 1];
    double negative_sum = 0.0;
    double abs_sum = 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        if (eig.values[i] < 0.0) {
            negative_sum += eig.values[i];
        }
        abs_sum += std::abs(eig.values[i]);
    }
    diagnostics_.negative_eigen_fraction = abs_sum > 0.0 ? negative_sum / abs_sum : 0.0;
}

double instance_kernel(const SpdMatrix& x, const SpdMatrix& y, const KernelConfig& cfg) {
    require_gaussian(cfg);
    const double d = geodesic_distance(x, y, metric_for(cfg));
    return std::exp(-(d * d) / cfg.sigma);
}

double mi_kernel(const Bag& x, const Bag& y, const KernelConfig& cfg) {
    require_gaussian(cfg);
    if (x.dim() != y.dim()) {
        throw std::invalid_argument("mi_kernel: bags have mismatched instance dimensions");
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(x.size()),
                           static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                instance_kernel(x.instances()[i], y.instances()[j], cfg);
        }
    }
    return aggregate_block(values, cfg.power, cfg.normalize);
}

GramMatrix gram_matrix(std::span<const Bag> bags, const KernelConfig& cfg) {
    if (bags.size() < 2) {
        throw std::invalid_argument("gram_matrix: needs at least 2 bags");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(bags.size());
    const Eigen::Index d = bags[0].dim();
    for (const Bag& bag : bags) {
        if (bag.dim() != d) {
            throw std::invalid_argument("gram_matrix: bags have mismatched instance dimensions");
        }
    }

    Eigen::MatrixXd g(n, n);
    if (cfg.kind == KernelKind::Isometric) {
        std::vector<std::pair<std::size_t, std::size_t>> ranges;
        const std::vector<SpdMatrix> pool = pooled_instances(bags, &ranges);
        const Eigen::MatrixXd s = isometric_instance_similarity(pool, cfg.isometric_metric);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = a; b < n; ++b) {
                const auto [af, al] = ranges[static_cast<std::size_t>(a)];
                const auto [bf, bl] = ranges[static_cast<std::size_t>(b)];
                const Eigen::MatrixXd block =
                    s.block(static_cast<Eigen::Index>(af), static_cast<Eigen::Index>(bf),
                            static_cast<Eigen::Index>(al - af), static_cast<Eigen::Index>(bl - bf));
                g(a, b) = aggregate_block(block, cfg.power, cfg.normalize);
                g(b, a) = g(a, b);
            }
        }
    } else {
        // Cache pairwise instance kernels through the pooled distance matrix
        // so each instance factorization happens once.
        std::vector<std::pair<std::size_t, std::size_t>> ranges;
        const std::vector<SpdMatrix> pool = pooled_instances(bags, &ranges);
        require_gaussian(cfg);
        const Eigen::MatrixXd d2 = pairwise_squared_distances(pool, metric_for(cfg));
        const Eigen::MatrixXd k = (-d2 / cfg.sigma).array().exp();
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = a; b < n; ++b) {
                const auto [af, al] = ranges[static_cast<std::size_t>(a)];
                const auto [bf, bl] = ranges[static_cast<std::size_t>(b)];
                const Eigen::MatrixXd block =
                    k.block(static_cast<Eigen::Index>(af), static_cast<Eigen::Index>(bf),
                            static_cast<Eigen::Index>(al - af), static_cast<Eigen::Index>(bl - bf));
                g(a, b) = aggregate_block(block, cfg.power, cfg.normalize);
                g(b, a) = g(a, b);
            }
        }
    }
    return GramMatrix(std::move(g));
}

Eigen::MatrixXd isometric_instance_similarity(std::span<const SpdMatrix> instances,
                                              Metric metric) {
    const Eigen::Index n = static_cast<Eigen::Index>(instances.size());
    if (n < 2) {
        throw std::invalid_argument("isometric_instance_similarity: needs at least 2 instances");
    }
    const Eigen::MatrixXd d2 = pairwise_squared_distances(instances, metric);
    const Eigen::MatrixXd j =
        Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    Eigen::MatrixXd s = -0.5 * j * d2 * j;
    return 0.5 * (s + s.transpose());
}

KernelDecomposition kernel_decomposition(const Bag& x, const Bag& y, const KernelConfig& cfg) {
    require_gaussian(cfg);
    if (!x.hidden_instance_labels() || !y.hidden_instance_labels()) {
        throw std::invalid_argument("kernel_decomposition: both bags need hidden instance labels");
    }
    const auto& hx = *x.hidden_instance_labels();
    const auto& hy = *y.hidden_instance_labels();
    const double norm =
        cfg.normalize ? static_cast<double>(x.size()) * static_cast<double>(y.size()) : 1.0;
    KernelDecomposition out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            const double v =
                int_pow(instance_kernel(x.instances()[i], y.instances()[j], cfg), cfg.power) /
                norm;
            if (hx[i] == ConceptLabel::Positive && hy[j] == ConceptLabel::Positive) {
                out.pos_pos += v;
            } else if (hx[i] == ConceptLabel::Negative && hy[j] == ConceptLabel::Negative) {
                out.neg_neg += v;
            } else {
                out.pos_neg += v;
            }
        }
    }
    return out;
}

IsometricModel::IsometricModel(std::span<const Bag> training_bags, const KernelConfig& cfg)
    : cfg_(cfg) {
    if (cfg.kind != KernelKind::Isometric) {
        throw std::invalid_argument("IsometricModel: kernel kind must be isometric");
    }
    if (training_bags.size() < 2) {
        throw std::invalid_argument("IsometricModel: needs at least 2 training bags");
    }
    pool_ = pooled_instances(training_bags, &bag_ranges_);
    const Eigen::Index n = static_cast<Eigen::Index>(pool_.size());
    const Eigen::MatrixXd d2 = pairwise_squared_distances(pool_, cfg.isometric_metric);
    column_means_ = d2.colwise().mean();
    grand_mean_ = d2.mean();

    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            s(i, j) = -0.5 * (d2(i, j) - column_means_[i] - column_means_[j] + grand_mean_);
            s(j, i) = s(i, j);
        }
    }

    const Eigen::Index nb = static_cast<Eigen::Index>(training_bags.size());
    Eigen::MatrixXd g(nb, nb);
    for (Eigen::Index a = 0; a < nb; ++a) {
        for (Eigen::Index b = a; b < nb; ++b) {
            g(a, b) = bag_pair_value(s, static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            g(b, a) = g(a, b);
        }
    }
    training_gram_ = std::make_unique<GramMatrix>(std::move(g));
}

double IsometricModel::bag_pair_value(const Eigen::MatrixXd& s, std::size_t a,
                                      std::size_t b) const {
    const auto [af, al] = bag_ranges_[a];
    const auto [bf, bl] = bag_ranges_[b];
    const Eigen::MatrixXd block =
        s.block(static_cast<Eigen::Index>(af), static_cast<Eigen::Index>(bf),
                static_cast<Eigen::Index>(al - af), static_cast<Eigen::Index>(bl - bf));
    return aggregate_block(block, cfg_.power, cfg_.normalize);
}

std::vector<double> IsometricModel::kernel_row(const Bag& test_bag) const {
    const Eigen::Index n = static_cast<Eigen::Index>(pool_.size());
    const Eigen::Index m = static_cast<Eigen::Index>(test_bag.size());
    // Out-of-sample double centering: distances of each test instance to the
    // training pool are centered with training-side statistics only.
    Eigen::MatrixXd s(m, n);
    for (Eigen::Index t = 0; t < m; ++t) {
        Eigen::VectorXd d2(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = geodesic_distance(test_bag.instances()[static_cast<std::size_t>(t)],
                                               pool_[static_cast<std::size_t>(i)],
                                               cfg_.isometric_metric);
            d2[i] = d * d;
        }
        const double row_mean = d2.mean();
        for (Eigen::Index i = 0; i < n; ++i) {
            s(t, i) = -0.5 * (d2[i] - column_means_[i] - row_mean + grand_mean_);
        }
    }
    std::vector<double> row;
    row.reserve(bag_ranges_.size());
    for (const auto& [bf, bl] : bag_ranges_) {
        const Eigen::MatrixXd block = s.block(0, static_cast<Eigen::Index>(bf), m,
                                              static_cast<Eigen::Index>(bl - bf));
        row.push_back(aggregate_block(block, cfg_.power, cfg_.normalize));
    }
    return row;
}

} // namespace micov
