#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hsad/rng.hpp"
#include "hsad/stats.hpp"
#include "oracles.hpp"

using namespace hsad;

namespace {

SampleSet make_samples(const std::vector<std::vector<double>>& rows) {
    SampleSet s;
    s.vectors.resize(static_cast<Eigen::Index>(rows.front().size()),
                     static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            s.vectors(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rows[i][j];
    return s;
}

SampleSet random_samples(int dim, int count, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    SampleSet s;
    s.vectors.resize(dim, count);
    for (int j = 0; j < count; ++j)
        for (int i = 0; i < dim; ++i) s.vectors(i, j) = 2.0 * rng.uniform01() - 1.0;
    return s;
}

Eigen::MatrixXd random_symmetric(int dim, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = 2.0 * rng.uniform01() - 1.0;
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

} // namespace

TEST_CASE("mean_vector arithmetic") {
    auto s = make_samples({{1, 2}, {3, 4}});
    Spectrum mu = mean_vector(s);
    CHECK(mu[0] == 2.0);
    CHECK(mu[1] == 3.0);

    auto single = make_samples({{7, -1, 2}});
    Spectrum one = mean_vector(single);
    CHECK(one[0] == 7.0);
    CHECK(one[1] == -1.0);
    CHECK(one[2] == 2.0);

    SampleSet empty;
    empty.vectors.resize(3, 0);
    CHECK_THROWS_AS(mean_vector(empty), Error);
}

TEST_CASE("centering identity") {
    auto s = random_samples(6, 40, 17);
    Spectrum mu = mean_vector(s);
    Eigen::MatrixXd centered = s.vectors.colwise() - mu;
    CHECK(centered.rowwise().mean().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("covariance hand cases") {
    auto s = make_samples({{1, 0}, {-1, 0}});
    Spectrum mu = mean_vector(s);
    auto c = covariance(s, mu);
    CHECK(c.entries(0, 0) == 1.0);
    CHECK(c.entries(0, 1) == 0.0);
    CHECK(c.entries(1, 0) == 0.0);
    CHECK(c.entries(1, 1) == 0.0);
    CHECK(c.ridge_applied == 0.0);

    auto identical = make_samples({{2, 3}, {2, 3}, {2, 3}});
    auto cz = covariance(identical, mean_vector(identical));
    CHECK(cz.entries.cwiseAbs().maxCoeff() == 0.0);

    auto one = make_samples({{1, 2}});
    CHECK_THROWS_AS(covariance(one, mean_vector(one)), Error);
}

TEST_CASE("covariance equals the brute-force double loop") {
    auto s = random_samples(5, 23, 71);
    auto c = covariance(s, mean_vector(s));

    std::vector<std::vector<double>> rows;
    for (int j = 0; j < s.count(); ++j) {
        std::vector<double> r(s.dimension());
        for (int i = 0; i < s.dimension(); ++i) r[i] = s.vectors(i, j);
        rows.push_back(std::move(r));
    }
    auto brute = oracle::brute_covariance(rows);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(std::abs(c.entries(i, j) - brute[i][j]) < 1e-12);
}

TEST_CASE("covariance is positive semidefinite") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto s = random_samples(8, 5, seed); // fewer samples than dims: rank deficient
        auto c = covariance(s, mean_vector(s));
        auto eig = symmetric_eigen(c.entries);
        CHECK(eig.values.minCoeff() > -1e-10);
    }
}

TEST_CASE("regularized_inverse basics") {
    SUBCASE("identity stays identity at ridge 0") {
        CovarianceMatrix c{Eigen::MatrixXd::Identity(3, 3), 0.0};
        auto inv = regularized_inverse(c, 0.0);
        CHECK((inv.entries - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(inv.ridge_applied == 0.0);
    }
    SUBCASE("diagonal inverse") {
        CovarianceMatrix c{Eigen::Vector2d(2.0, 4.0).asDiagonal().toDenseMatrix(), 0.0};
        auto inv = regularized_inverse(c, 0.0);
        CHECK(inv.entries(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(inv.entries(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("singular matrix becomes invertible with a ridge") {
        Eigen::MatrixXd ones(2, 2);
        ones << 1, 1, 1, 1;
        CovarianceMatrix c{ones, 0.0};
        auto inv = regularized_inverse(c, 1e-6);
        const double delta = 1e-6 * 2.0 / 2.0;
        CHECK(inv.ridge_applied == doctest::Approx(delta).epsilon(1e-12));
        Eigen::MatrixXd loaded = ones + delta * Eigen::MatrixXd::Identity(2, 2);
        CHECK((loaded * inv.entries - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
              1e-6);
    }
    SUBCASE("zero trace cannot be ridged") {
        CovarianceMatrix c{Eigen::MatrixXd::Zero(2, 2), 0.0};
        try {
            regularized_inverse(c, 1e-6);
            FAIL("expected SingularAfterRidge");
        } catch (const Error& e) {
            CHECK(e.code() == errc::singular_after_ridge);
        }
    }
}

TEST_CASE("regularized_inverse residual on random PSD matrices up to 32x32") {
    for (int dim : {4, 16, 32}) {
        auto s = random_samples(dim, dim * 3, 400 + dim);
        auto c = covariance(s, mean_vector(s));
        auto inv = regularized_inverse(c, 1e-6);
        Eigen::MatrixXd loaded = c.entries;
        loaded.diagonal().array() += inv.ridge_applied;
        const double residual =
            (loaded * inv.entries - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
        CHECK(residual < 1e-6);
    }
}

TEST_CASE("symmetric_eigen hand cases") {
    SUBCASE("diagonal") {
        Eigen::MatrixXd a = Eigen::Vector2d(1.0, 3.0).asDiagonal();
        auto eig = symmetric_eigen(a);
        CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(eig.vectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(eig.vectors(0, 1)) == doctest::Approx(1.0).epsilon(1e-14));
        // sign convention: dominant component positive
        CHECK(eig.vectors(1, 0) > 0.0);
        CHECK(eig.vectors(0, 1) > 0.0);
    }
    SUBCASE("2x2 with known spectrum") {
        Eigen::MatrixXd a(2, 2);
        a << 2, 1, 1, 2;
        auto eig = symmetric_eigen(a);
        const double r = 1.0 / std::sqrt(2.0);
        CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(eig.vectors(0, 0) - r) < 1e-12);
        CHECK(std::abs(eig.vectors(1, 0) - r) < 1e-12);
        CHECK(std::abs(std::abs(eig.vectors(0, 1)) - r) < 1e-12);
        CHECK(std::abs(std::abs(eig.vectors(1, 1)) - r) < 1e-12);
    }
}

TEST_CASE("symmetric_eigen reconstruction, trace identity, orthonormality") {
    for (int dim : {2, 8, 32}) {
        auto a = random_symmetric(dim, 900 + dim);
        auto eig = symmetric_eigen(a);

        Eigen::MatrixXd rebuilt =
            eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
        CHECK((rebuilt - a).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(std::abs(eig.values.sum() - a.trace()) < 1e-8);
        CHECK((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(dim, dim))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        for (int i = 1; i < dim; ++i) CHECK(eig.values[i - 1] >= eig.values[i]);
    }
}

TEST_CASE("symmetric_eigen agrees with the Jacobi oracle") {
    auto a = random_symmetric(6, 1234);
    auto eig = symmetric_eigen(a);

    oracle::Matrix m(6, std::vector<double>(6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) m[i][j] = a(i, j);
    auto jac = oracle::jacobi_eigen(m);
    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(eig.values[i] - jac.values[i]) < 1e-10);
        for (int k = 0; k < 6; ++k) CHECK(std::abs(eig.vectors(k, i) - jac.vectors[k][i]) < 1e-9);
    }
}

TEST_CASE("symmetric_eigen rejects asymmetry") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 3, 1;
    try {
        symmetric_eigen(a);
        FAIL("expected NotSymmetric");
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_symmetric);
    }
}

TEST_CASE("stats operations are bit-deterministic") {
    auto s = random_samples(7, 30, 5150);
    auto c1 = covariance(s, mean_vector(s));
    auto c2 = covariance(s, mean_vector(s));
    CHECK(c1.entries == c2.entries);
    auto i1 = regularized_inverse(c1, 1e-6);
    auto i2 = regularized_inverse(c2, 1e-6);
    CHECK(i1.entries == i2.entries);
    auto e1 = symmetric_eigen(c1.entries);
    auto e2 = symmetric_eigen(c2.entries);
    CHECK(e1.values == e2.values);
    CHECK(e1.vectors == e2.vectors);
}
