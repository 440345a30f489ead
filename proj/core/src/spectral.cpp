// SPDX-License-Identifier: Apache-2.0
#include "xcorr/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "xcorr/errors.hpp"
#include "xcorr/random.hpp"

namespace xcorr {

HermitianOperator HermitianOperator::from_matrix(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw DomainError("Hermitian operator must be square");
    return {a.rows(), [&a](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y.noalias() = a * x; }};
}

namespace {

// Deterministic restart direction number `restart`.
Eigen::VectorXcd restart_vector(Eigen::Index n, int restart) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto c = static_cast<std::uint64_t>(i);
        v[i] = {random::uniform01(0x6c616e637a6f73ULL, static_cast<std::uint64_t>(restart), 2 * c) - 0.5,
                random::uniform01(0x6c616e637a6f73ULL, static_cast<std::uint64_t>(restart), 2 * c + 1) - 0.5};
    }
    return v;
}

// Two passes of classical Gram-Schmidt against the first j basis columns.
void orthogonalize(const Eigen::MatrixXcd& q, Eigen::Index j, Eigen::VectorXcd& w) {
    if (j == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd h = q.leftCols(j).adjoint() * w;
        w.noalias() -= q.leftCols(j) * h;
    }
}

}  // namespace

EigResult top_eigpairs(const HermitianOperator& op, int m, const SolverOptions& options) {
    const Eigen::Index n = op.dimension;
    if (n < 1) throw DomainError("operator dimension must be positive");
    if (m < 1 || m > n) throw DomainError("requested eigenpair count out of range");
    if (!(options.tol > 0.0) || options.max_iter < 1) throw DomainError("invalid solver options");

    const Eigen::Index limit = std::min<Eigen::Index>(n, std::max<Eigen::Index>(options.max_iter, m));
    Eigen::MatrixXcd q(n, std::min<Eigen::Index>(limit, 64));
    std::vector<double> alpha;
    std::vector<double> beta;  // beta[j] couples basis vectors j and j + 1

    EigResult best;
    Eigen::VectorXcd w(n);
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n));
    int restarts = 0;
    int applications = 0;
    double norm_estimate = 0.0;

    auto ritz = [&](Eigen::Index j, bool final_check) -> bool {
        Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), j);
        Eigen::VectorXd sub = j > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), j - 1))
                                    : Eigen::VectorXd();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const Eigen::VectorXd& theta = tri.eigenvalues();  // ascending
        norm_estimate = std::max({norm_estimate, std::abs(theta[0]), std::abs(theta[j - 1])});
        const double scale = norm_estimate > 0.0 ? norm_estimate : 1.0;
        const double tail = beta.size() >= static_cast<std::size_t>(j) ? beta[static_cast<std::size_t>(j - 1)] : 0.0;
        const Eigen::Index take = std::min<Eigen::Index>(m, j);
        bool estimates_ok = take == m;
        for (Eigen::Index i = 0; i < take && estimates_ok; ++i) {
            const Eigen::Index col = j - 1 - i;
            if (std::abs(tail * tri.eigenvectors()(j - 1, col)) > options.tol * scale) estimates_ok = false;
        }
        if (!estimates_ok && !final_check) return false;

        EigResult res;
        res.vectors.resize(n, take);
        for (Eigen::Index i = 0; i < take; ++i) {
            const Eigen::Index col = j - 1 - i;
            res.values.push_back(theta[col]);
            Eigen::VectorXcd x = q.leftCols(j) * tri.eigenvectors().col(col).cast<std::complex<double>>();
            x.normalize();
            res.vectors.col(i) = x;
        }
        bool all_ok = take == m;
        Eigen::VectorXcd ax(n);
        for (Eigen::Index i = 0; i < take; ++i) {
            op.apply(res.vectors.col(i), ax);
            ++applications;
            const double r = (ax - res.values[static_cast<std::size_t>(i)] * res.vectors.col(i)).norm();
            res.residuals.push_back(r);
            if (r > options.tol * scale) all_ok = false;
        }
        res.norm_estimate = norm_estimate;
        res.converged = all_ok;
        best = std::move(res);
        return all_ok;
    };

    for (Eigen::Index j = 0; j < limit; ++j) {
        if (q.cols() <= j) q.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(limit, 2 * q.cols()));
        q.col(j) = v;
        op.apply(v, w);
        ++applications;
        const double a = q.col(j).dot(w).real();
        alpha.push_back(a);
        w -= a * q.col(j);
        if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * q.col(j - 1);
        orthogonalize(q, j + 1, w);
        double b = w.norm();
        norm_estimate = std::max(norm_estimate, std::abs(a));
        const double breakdown = 1e-13 * std::max(norm_estimate, 1e-300);
        const Eigen::Index size = j + 1;
        const bool exhausted = size == limit;
        if (b <= breakdown) {
            // Invariant subspace: its Ritz pairs are exact. Restart for more.
            beta.push_back(0.0);
            if (size >= m && ritz(size, false)) break;
            if (exhausted) break;
            Eigen::VectorXcd r = restart_vector(n, ++restarts);
            orthogonalize(q, size, r);
            b = r.norm();
            if (b == 0.0) break;
            v = r / b;
            continue;
        }
        beta.push_back(b);
        const bool check = size >= m && (size < 40 || size % 5 == 0 || exhausted);
        if (check && ritz(size, exhausted)) break;
        if (exhausted) break;
        v = w / b;
    }
    if (best.values.empty() || !best.converged) {
        // Make sure a best iterate with explicit residuals is always returned.
        const auto size = static_cast<Eigen::Index>(alpha.size());
        beta.resize(alpha.size(), 0.0);
        ritz(size, true);
    }
    best.iterations = applications;
    return best;
}

EigResult top_eigpairs(const Eigen::MatrixXcd& a, int m, const SolverOptions& options) {
    return top_eigpairs(HermitianOperator::from_matrix(a), m, options);
}

SingularResult top_singular_left(const Eigen::MatrixXcd& b, const SolverOptions& options) {
    if (b.cols() < 1 || b.rows() < 1) throw DomainError("matrix must have at least one row and column");
    SingularResult out;
    if (b.cols() < b.rows()) {
        HermitianOperator gram{b.cols(), [&b](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
                                   const Eigen::VectorXcd t = b * x;
                                   y.noalias() = b.adjoint() * t;
                               }};
        const EigResult e = top_eigpairs(gram, 1, options);
        Eigen::VectorXcd u = b * e.vectors.col(0);
        out.sigma = u.norm();
        out.vector = out.sigma > 0.0 ? Eigen::VectorXcd(u / out.sigma) : Eigen::VectorXcd(u);
        out.residual = e.residuals.front();
        out.iterations = e.iterations;
        out.converged = e.converged;
    } else {
        HermitianOperator gram{b.rows(), [&b](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
                                   const Eigen::VectorXcd t = b.adjoint() * x;
                                   y.noalias() = b * t;
                               }};
        const EigResult e = top_eigpairs(gram, 1, options);
        out.vector = e.vectors.col(0);
        out.sigma = std::sqrt(std::max(e.values.front(), 0.0));
        out.residual = e.residuals.front();
        out.iterations = e.iterations;
        out.converged = e.converged;
    }
    return out;
}

}  // namespace xcorr
