// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "xcorr/random.hpp"
#include "xcorr/spectral.hpp"

using namespace xcorr;
using Catch::Approx;

namespace {

Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    random::Stream rng(seed, 3);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {rng.normal(), rng.normal()};
    return m;
}

// Distance between unit vectors up to a phase.
double phase_free_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    const std::complex<double> p = b.dot(a);
    return (a * std::polar(1.0, -std::arg(p)) - b).norm();
}

}  // namespace

TEST_CASE("eigenpairs of a diagonal matrix", "[spectral]") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 2.0;
    a(2, 2) = 1.0;
    const EigResult r = top_eigpairs(a, 3);
    REQUIRE(r.converged);
    REQUIRE(r.values.size() == 3);
    CHECK(r.values[0] == Approx(3.0).epsilon(1e-12));
    CHECK(r.values[1] == Approx(2.0).epsilon(1e-12));
    CHECK(r.values[2] == Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(r.vectors(i, i)) == Approx(1.0).epsilon(1e-12));
        CHECK(r.residuals[static_cast<std::size_t>(i)] <= 1e-10 * 3.0);
    }
}

TEST_CASE("random PSD matrix against the dense solver", "[spectral][property]") {
    const Eigen::MatrixXcd g = random_matrix(50, 50, 4);
    const Eigen::MatrixXcd a = g * g.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> dense(a);
    const EigResult r = top_eigpairs(a, 5);
    REQUIRE(r.converged);
    for (int i = 0; i < 5; ++i) {
        const Eigen::Index j = 49 - i;
        CHECK(r.values[static_cast<std::size_t>(i)] == Approx(dense.eigenvalues()[j]).epsilon(1e-8));
        CHECK(phase_free_distance(r.vectors.col(i), dense.eigenvectors().col(j)) <= 1e-6);
    }
    const Eigen::MatrixXcd gram = r.vectors.adjoint() * r.vectors;
    CHECK((gram - Eigen::MatrixXcd::Identity(5, 5)).norm() <= 1e-12);
}

TEST_CASE("rank-1 outer product", "[spectral]") {
    const Eigen::VectorXcd b = random_matrix(40, 1, 5).col(0);
    const Eigen::MatrixXcd a = b * b.adjoint();
    const EigResult r = top_eigpairs(a, 1);
    REQUIRE(r.converged);
    CHECK(r.values[0] == Approx(b.squaredNorm()).epsilon(1e-12));
    CHECK(phase_free_distance(r.vectors.col(0), b.normalized()) <= 1e-10);
}

TEST_CASE("matrix-free operator gives the same answer", "[spectral]") {
    const Eigen::MatrixXcd g = random_matrix(30, 8, 6);
    const Eigen::MatrixXcd a = g * g.adjoint();
    HermitianOperator op;
    op.dimension = 30;
    op.apply = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y = g * (g.adjoint() * x); };
    const EigResult r1 = top_eigpairs(op, 3);
    const EigResult r2 = top_eigpairs(a, 3);
    for (int i = 0; i < 3; ++i)
        CHECK(r1.values[static_cast<std::size_t>(i)] == Approx(r2.values[static_cast<std::size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("more eigenpairs than the start vector's Krylov space", "[spectral]") {
    // The all-ones start vector only sees the symmetric part of this matrix.
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4);
    a(0, 0) = a(1, 1) = 2.0;
    a(0, 1) = a(1, 0) = 1.0;
    a(2, 2) = a(3, 3) = 2.0;
    a(2, 3) = a(3, 2) = -1.0;
    const EigResult r = top_eigpairs(a, 4);
    REQUIRE(r.converged);
    CHECK(r.values[0] == Approx(3.0));
    CHECK(r.values[1] == Approx(3.0));
    CHECK(r.values[2] == Approx(1.0));
    CHECK(r.values[3] == Approx(1.0));
}

TEST_CASE("eigensolver is deterministic", "[spectral]") {
    const Eigen::MatrixXcd g = random_matrix(60, 60, 7);
    const Eigen::MatrixXcd a = g * g.adjoint();
    const EigResult r1 = top_eigpairs(a, 4);
    const EigResult r2 = top_eigpairs(a, 4);
    CHECK(r1.values == r2.values);
    CHECK(r1.vectors == r2.vectors);
    CHECK(r1.iterations == r2.iterations);
}

TEST_CASE("top left singular vector", "[spectral]") {
    SECTION("tall matrix against the SVD") {
        const Eigen::MatrixXcd b = random_matrix(100, 10, 8);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeThinU);
        const SingularResult r = top_singular_left(b);
        REQUIRE(r.converged);
        CHECK(r.sigma == Approx(svd.singularValues()[0]).epsilon(1e-10));
        CHECK(phase_free_distance(r.vector, svd.matrixU().col(0)) <= 1e-6);
    }
    SECTION("wide matrix against the SVD") {
        const Eigen::MatrixXcd b = random_matrix(12, 70, 9);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeThinU);
        const SingularResult r = top_singular_left(b);
        REQUIRE(r.converged);
        CHECK(r.sigma == Approx(svd.singularValues()[0]).epsilon(1e-10));
        CHECK(phase_free_distance(r.vector, svd.matrixU().col(0)) <= 1e-6);
    }
    SECTION("rank one: sigma squared is the Gram eigenvalue") {
        const Eigen::VectorXcd u = random_matrix(25, 1, 10).col(0);
        const Eigen::VectorXcd w = random_matrix(6, 1, 11).col(0);
        const Eigen::MatrixXcd b = u * w.adjoint();
        const SingularResult r = top_singular_left(b);
        const EigResult e = top_eigpairs(Eigen::MatrixXcd(b * b.adjoint()), 1);
        CHECK(r.sigma * r.sigma == Approx(e.values[0]).epsilon(1e-10));
        CHECK(phase_free_distance(r.vector, u.normalized()) <= 1e-10);
    }
}
