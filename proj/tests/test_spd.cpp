#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "micov/rng.hpp"
#include "micov/spd.hpp"
#include "test_support.hpp"

using namespace micov;
using test_support::random_invertible;
using test_support::random_spd;
using test_support::random_symmetric;

namespace {
Eigen::MatrixXd diag2(double a, double b) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}
} // namespace

TEST_CASE("SymMatrix and SpdMatrix construction invariants") {
    CHECK_THROWS_AS(SymMatrix{Eigen::MatrixXd::Random(2, 3)}, std::invalid_argument);

    Eigen::MatrixXd skew(2, 2);
    skew << 1.0, 2.0, -2.0, 1.0;
    CHECK_THROWS_AS(SymMatrix{skew}, std::invalid_argument);

    // Asymmetry below 1e-12 * max|a| is accepted and symmetrized away.
    Eigen::MatrixXd nearly(2, 2);
    nearly << 1.0, 1.0 + 5e-13, 1.0, 2.0;
    const SymMatrix s(nearly);
    CHECK(s.matrix()(0, 1) == s.matrix()(1, 0));

    CHECK_THROWS_AS(SpdMatrix{diag2(1.0, -1.0)}, DomainError);
    CHECK_THROWS_AS(SpdMatrix{diag2(1.0, 0.0)}, DomainError);
    CHECK(SpdMatrix::is_valid(diag2(4.0, 1.0)));
    CHECK_FALSE(SpdMatrix::is_valid(diag2(1.0, 1e-14)));
}

TEST_CASE("sym_eig analytic cases") {
    SUBCASE("identity") {
        const auto eig = sym_eig(SymMatrix(Eigen::MatrixXd::Identity(3, 3)));
        for (int i = 0; i < 3; ++i) {
            CHECK(eig.values[i] == doctest::Approx(1.0).epsilon(1e-14));
        }
        CHECK((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(3, 3)).norm() <=
              1e-10 * 3);
    }
    SUBCASE("diagonal") {
        const auto eig = sym_eig(SymMatrix(diag2(4.0, 1.0)));
        CHECK(eig.values[0] == doctest::Approx(4.0));
        CHECK(eig.values[1] == doctest::Approx(1.0));
        CHECK(std::abs(eig.vectors(0, 0)) == doctest::Approx(1.0));
        CHECK(std::abs(eig.vectors(1, 1)) == doctest::Approx(1.0));
    }
    SUBCASE("hand-solved characteristic polynomial of [[2,1],[1,2]]") {
        // det([[2-l,1],[1,2-l]]) = (2-l)^2 - 1 = 0  =>  l in {3, 1},
        // eigenvectors (1,1)/sqrt(2) and (1,-1)/sqrt(2).
        Eigen::MatrixXd m(2, 2);
        m << 2.0, 1.0, 1.0, 2.0;
        const auto eig = sym_eig(SymMatrix(m));
        CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-12));
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        Eigen::Vector2d v0 = eig.vectors.col(0);
        Eigen::Vector2d v1 = eig.vectors.col(1);
        CHECK(std::abs(std::abs(v0[0]) - inv_sqrt2) < 1e-12);
        CHECK(std::abs(v0[0] - v0[1]) < 1e-12);         // (1,1) direction
        CHECK(std::abs(v1[0] + v1[1]) < 1e-12);         // (1,-1) direction
    }
    SUBCASE("reconstruction and orthonormality on random symmetric matrices") {
        Rng rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next_below(8));
            const Eigen::MatrixXd m = random_symmetric(d, rng, 2.0);
            const auto eig = sym_eig(SymMatrix(m));
            CHECK(std::is_sorted(eig.values.data(), eig.values.data() + d, std::greater<>()));
            const Eigen::MatrixXd recon =
                eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
            CHECK((recon - m).norm() <= 1e-10 * std::max(1.0, m.norm()));
            CHECK((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(d, d))
                      .norm() <= 1e-10 * static_cast<double>(d));
        }
    }
}

TEST_CASE("spd_log and spd_exp") {
    SUBCASE("log of identity is zero, exp of zero is identity") {
        CHECK(spd_log(SpdMatrix::identity(4)).matrix().norm() == doctest::Approx(0.0));
        CHECK((spd_exp(SymMatrix(Eigen::MatrixXd::Zero(3, 3))).matrix() -
               Eigen::MatrixXd::Identity(3, 3))
                  .norm() == doctest::Approx(0.0));
    }
    SUBCASE("diagonal analytic case") {
        const double e = std::exp(1.0);
        const SymMatrix l = spd_log(SpdMatrix(diag2(e, e * e)));
        CHECK(l.matrix()(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(l.matrix()(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
        const SpdMatrix c = spd_exp(SymMatrix(diag2(1.0, 2.0)));
        CHECK(c.matrix()(0, 0) == doctest::Approx(e).epsilon(1e-12));
        CHECK(c.matrix()(1, 1) == doctest::Approx(e * e).epsilon(1e-12));
    }
    SUBCASE("round trip exp(log(C)) = C to relative 1e-9, condition <= 1e6") {
        Rng rng(23);
        for (int trial = 0; trial < 50; ++trial) {
            const SpdMatrix c = random_spd(6, rng, 1e-3, 1e3); // condition <= 1e6
            const SpdMatrix back = spd_exp(spd_log(c));
            CHECK((back.matrix() - c.matrix()).norm() <= 1e-9 * c.matrix().norm());
        }
    }
}

TEST_CASE("log-Euclidean distance") {
    Rng rng(31);
    const SpdMatrix c = random_spd(4, rng);
    CHECK(dist_log_euclidean(c, c) == doctest::Approx(0.0));

    const double e = std::exp(1.0);
    CHECK(dist_log_euclidean(SpdMatrix(diag2(e, 1.0)), SpdMatrix::identity(2)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // d(a I, b I) = sqrt(d) |ln(b/a)|; d=2, a=1, b=e^2 -> 2 sqrt(2)
    CHECK(dist_log_euclidean(SpdMatrix::identity(2), SpdMatrix(diag2(e * e, e * e))) ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(dist_log_euclidean(SpdMatrix::identity(2), SpdMatrix::identity(3)),
                    std::invalid_argument);
}

TEST_CASE("metric axioms for d_LE over 100 random triples") {
    Rng rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const SpdMatrix a = random_spd(5, rng);
        const SpdMatrix b = random_spd(5, rng);
        const SpdMatrix c = random_spd(5, rng);
        const double ab = dist_log_euclidean(a, b);
        const double ba = dist_log_euclidean(b, a);
        const double ac = dist_log_euclidean(a, c);
        const double cb = dist_log_euclidean(c, b);
        CHECK(ab == ba); // exact symmetry
        CHECK(dist_log_euclidean(a, a) <= 1e-10);
        CHECK(ab <= ac + cb + 1e-9);
    }
}

TEST_CASE("affine-invariant distance") {
    SUBCASE("zero on identical arguments, diagonal analytic case") {
        Rng rng(41);
        const SpdMatrix c = random_spd(4, rng);
        CHECK(dist_affine_invariant(c, c) <= 1e-10);
        const double a = 0.5;
        const double b = 3.0;
        Eigen::MatrixXd ai = a * Eigen::MatrixXd::Identity(3, 3);
        Eigen::MatrixXd bi = b * Eigen::MatrixXd::Identity(3, 3);
        const double expected = std::sqrt(3.0) * std::abs(std::log(b / a));
        CHECK(dist_affine_invariant(SpdMatrix(ai), SpdMatrix(bi)) ==
              doctest::Approx(expected).epsilon(1e-12));
        CHECK(dist_log_euclidean(SpdMatrix(ai), SpdMatrix(bi)) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("congruence invariance over 100 random triples") {
        Rng rng(43);
        for (int trial = 0; trial < 100; ++trial) {
            const SpdMatrix c1 = random_spd(4, rng);
            const SpdMatrix c2 = random_spd(4, rng);
            const Eigen::MatrixXd a = random_invertible(4, rng);
            const double base = dist_affine_invariant(c1, c2);
            const SpdMatrix t1(a * c1.matrix() * a.transpose());
            const SpdMatrix t2(a * c2.matrix() * a.transpose());
            const double mapped = dist_affine_invariant(t1, t2);
            CHECK(std::abs(mapped - base) <= 1e-8 * std::max(1.0, base));
        }
    }
    SUBCASE("inversion symmetry d_AI(C1,C2) = d_AI(C1^-1, C2^-1)") {
        Rng rng(47);
        for (int trial = 0; trial < 30; ++trial) {
            const SpdMatrix c1 = random_spd(4, rng);
            const SpdMatrix c2 = random_spd(4, rng);
            const double d = dist_affine_invariant(c1, c2);
            const double dinv = dist_affine_invariant(SpdMatrix(c1.matrix().inverse()),
                                                      SpdMatrix(c2.matrix().inverse()));
            CHECK(std::abs(d - dinv) <= 1e-8 * std::max(1.0, d));
        }
    }
    SUBCASE("agrees exactly with d_LE on commuting pairs") {
        Rng rng(53);
        for (int trial = 0; trial < 50; ++trial) {
            // Simultaneously diagonalizable: same eigenbasis, different spectra.
            const Eigen::MatrixXd q = test_support::random_orthogonal(4, rng);
            Eigen::VectorXd l1(4), l2(4);
            for (int i = 0; i < 4; ++i) {
                l1[i] = std::exp(rng.uniform(-1.5, 1.5));
                l2[i] = std::exp(rng.uniform(-1.5, 1.5));
            }
            const SpdMatrix c1(q * l1.asDiagonal() * q.transpose());
            const SpdMatrix c2(q * l2.asDiagonal() * q.transpose());
            const double le = dist_log_euclidean(c1, c2);
            const double ai = dist_affine_invariant(c1, c2);
            CHECK(std::abs(le - ai) <= 1e-9 * std::max(1.0, le));
        }
    }
}

TEST_CASE("log-Euclidean geodesic") {
    Rng rng(59);
    const SpdMatrix c1 = random_spd(4, rng);
    const SpdMatrix c2 = random_spd(4, rng);

    SUBCASE("endpoints") {
        CHECK((geodesic_log_euclidean(c1, c2, 0.0).matrix() - c1.matrix()).norm() <=
              1e-9 * c1.matrix().norm());
        CHECK((geodesic_log_euclidean(c1, c2, 1.0).matrix() - c2.matrix()).norm() <=
              1e-9 * c2.matrix().norm());
    }
    SUBCASE("diagonal analytic midpoint: gamma(1/2) of (I, e^2 I) = e I") {
        const double e = std::exp(1.0);
        const SpdMatrix mid = geodesic_log_euclidean(
            SpdMatrix::identity(2), SpdMatrix(Eigen::MatrixXd(e * e * Eigen::MatrixXd::Identity(2, 2))), 0.5);
        CHECK((mid.matrix() - e * Eigen::MatrixXd::Identity(2, 2)).norm() <= 1e-10);
    }
    SUBCASE("midpoint equidistance and proportionality") {
        const double full = dist_log_euclidean(c1, c2);
        const SpdMatrix mid = geodesic_log_euclidean(c1, c2, 0.5);
        const double left = dist_log_euclidean(c1, mid);
        const double right = dist_log_euclidean(mid, c2);
        CHECK(std::abs(left - right) <= 1e-9 * full);
        CHECK(std::abs(left - 0.5 * full) <= 1e-9 * full);
        for (double t : {0.25, 0.7}) {
            CHECK(std::abs(dist_log_euclidean(c1, geodesic_log_euclidean(c1, c2, t)) - t * full) <=
                  1e-9 * full);
        }
    }
    SUBCASE("t out of range") {
        CHECK_THROWS_AS(geodesic_log_euclidean(c1, c2, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(geodesic_log_euclidean(c1, c2, -0.1), std::invalid_argument);
    }
}

TEST_CASE("geometric mean") {
    Rng rng(61);
    SUBCASE("empty set rejected, singleton returned as-is") {
        CHECK_THROWS_AS(geometric_mean({}, Metric::LogEuclidean), std::invalid_argument);
        const SpdMatrix c = random_spd(3, rng);
        std::vector<SpdMatrix> one{c};
        CHECK((geometric_mean(one, Metric::AffineInvariant).matrix() - c.matrix()).norm() == 0.0);
    }
    SUBCASE("mean of equal elements is the element") {
        const SpdMatrix c = random_spd(3, rng);
        std::vector<SpdMatrix> set{c, c, c};
        for (Metric m : {Metric::LogEuclidean, Metric::AffineInvariant}) {
            CHECK((geometric_mean(set, m).matrix() - c.matrix()).norm() <=
                  1e-9 * c.matrix().norm());
        }
    }
    SUBCASE("commuting case: {diag(a), diag(b)} -> diag(sqrt(ab)) for both metrics") {
        const SpdMatrix a(diag2(4.0, 9.0));
        const SpdMatrix b(diag2(1.0, 4.0));
        Eigen::MatrixXd expected = diag2(2.0, 6.0);
        std::vector<SpdMatrix> set{a, b};
        for (Metric m : {Metric::LogEuclidean, Metric::AffineInvariant}) {
            CHECK((geometric_mean(set, m).matrix() - expected).norm() <= 1e-9 * expected.norm());
        }
    }
    SUBCASE("Karcher first-order condition on 5 random SPDs") {
        std::vector<SpdMatrix> set;
        for (int i = 0; i < 5; ++i) {
            set.push_back(random_spd(4, rng));
        }
        const SpdMatrix mean = geometric_mean(set, Metric::AffineInvariant);
        // sum_i log(M^{-1/2} C_i M^{-1/2}) must vanish at the mean.
        const SymMatrix mean_sym(mean.matrix());
        const auto eig = sym_eig(mean_sym);
        Eigen::VectorXd inv_sqrt = eig.values.array().sqrt().inverse();
        const Eigen::MatrixXd w = eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
        Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(4, 4);
        for (const SpdMatrix& c : set) {
            Eigen::MatrixXd whitened = w * c.matrix() * w;
            grad += spd_log(SpdMatrix(0.5 * (whitened + whitened.transpose()))).matrix();
        }
        CHECK(grad.norm() <= 1e-8);
    }
    SUBCASE("permutation invariance") {
        std::vector<SpdMatrix> set;
        for (int i = 0; i < 4; ++i) {
            set.push_back(random_spd(3, rng));
        }
        std::vector<SpdMatrix> shuffled{set[2], set[0], set[3], set[1]};
        for (Metric m : {Metric::LogEuclidean, Metric::AffineInvariant}) {
            CHECK((geometric_mean(set, m).matrix() - geometric_mean(shuffled, m).matrix()).norm() <=
                  1e-8 * geometric_mean(set, m).matrix().norm());
        }
    }
}

TEST_CASE("regularize_spd") {
    SUBCASE("already-SPD input changes by at most a relative 2*eps") {
        Rng rng(67);
        const SpdMatrix c = random_spd(4, rng, 0.5, 5.0);
        const double eps = 1e-4;
        const SpdMatrix out = regularize_spd(c.as_sym(), eps);
        CHECK((out.matrix() - c.matrix()).norm() <= 2.0 * eps * c.matrix().norm());
    }
    SUBCASE("rank-1 matrix lifted to lambda_min >= eps * trace/d") {
        Eigen::MatrixXd rank1(2, 2);
        rank1 << 1.0, 1.0, 1.0, 1.0;
        const SpdMatrix out = regularize_spd(SymMatrix(rank1), 1e-3);
        const auto eig = sym_eig(out.as_sym());
        CHECK(eig.values[1] >= 1e-3);
        CHECK(SpdMatrix::is_valid(out.matrix()));
    }
    SUBCASE("zero matrix becomes eps-scaled identity") {
        const SpdMatrix out = regularize_spd(SymMatrix(Eigen::MatrixXd::Zero(3, 3)), 1e-3);
        CHECK((out.matrix() - 1e-3 * Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-11);
        CHECK(SpdMatrix::is_valid(out.matrix()));
    }
    SUBCASE("negative definite input is lifted to SPD") {
        const SpdMatrix out =
            regularize_spd(SymMatrix(Eigen::MatrixXd(-2.0 * Eigen::MatrixXd::Identity(2, 2))), 1e-3);
        CHECK(SpdMatrix::is_valid(out.matrix()));
    }
}

TEST_CASE("pairwise_squared_distances matches scalar distances") {
    Rng rng(71);
    std::vector<SpdMatrix> set;
    for (int i = 0; i < 6; ++i) {
        set.push_back(random_spd(3, rng));
    }
    for (Metric m : {Metric::LogEuclidean, Metric::AffineInvariant}) {
        const Eigen::MatrixXd d2 = pairwise_squared_distances(set, m);
        CHECK((d2 - d2.transpose()).norm() == 0.0);
        CHECK(d2.diagonal().norm() == 0.0);
        for (int i = 0; i < 6; ++i) {
            for (int j = i + 1; j < 6; ++j) {
                const double d = geodesic_distance(set[static_cast<std::size_t>(i)],
                                                   set[static_cast<std::size_t>(j)], m);
                CHECK(d2(i, j) == doctest::Approx(d * d).epsilon(1e-9));
            }
        }
    }
}
