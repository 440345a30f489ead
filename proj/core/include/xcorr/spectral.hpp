// SPDX-License-Identifier: Apache-2.0
//
// Leading eigenpairs of Hermitian positive semidefinite operators and the
// leading left singular vector of tall or wide matrices.
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace xcorr {

struct SolverOptions {
    double tol = 1e-10;  // relative to the operator norm
    int max_iter = 5000;  // cap on operator applications
};

// y = A x for a Hermitian A of size dimension x dimension.
struct HermitianOperator {
    Eigen::Index dimension = 0;
    std::function<void(const Eigen::VectorXcd& x, Eigen::VectorXcd& y)> apply;

    // Wraps a dense matrix without copying it; `a` must outlive the operator.
    static HermitianOperator from_matrix(const Eigen::MatrixXcd& a);
};

struct EigResult {
    std::vector<double> values;     // non-increasing
    Eigen::MatrixXcd vectors;       // unit-norm columns, same order as values
    std::vector<double> residuals;  // ||A v_i - lambda_i v_i||, recomputed explicitly
    double norm_estimate = 0.0;     // largest |Ritz value| seen, used to scale tol
    int iterations = 0;             // operator applications
    bool converged = false;
};

// Lanczos with full reorthogonalization from the normalized all-ones vector.
// On an invariant subspace the recurrence restarts from a fixed pseudo-random
// vector, so m may exceed the Krylov dimension of the start vector. Pairs are
// accepted when ||A v - lambda v|| <= tol * ||A||; otherwise the best iterate
// is returned with converged = false.
EigResult top_eigpairs(const HermitianOperator& op, int m, const SolverOptions& options = {});
EigResult top_eigpairs(const Eigen::MatrixXcd& a, int m, const SolverOptions& options = {});

struct SingularResult {
    Eigen::VectorXcd vector;  // unit left singular vector
    double sigma = 0.0;
    double residual = 0.0;    // eigen-residual of the Gram operator actually iterated
    int iterations = 0;
    bool converged = false;
};

// Leading left singular vector of b. Iterates on b^H b (then maps back through
// b) when b has fewer columns than rows, and on b b^H otherwise; the Gram
// matrix itself is never formed.
SingularResult top_singular_left(const Eigen::MatrixXcd& b, const SolverOptions& options = {});

}  // namespace xcorr
