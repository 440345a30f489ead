// SPDX-License-Identifier: Apache-2.0
#include "xcorr/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xcorr/errors.hpp"
#include "xcorr/random.hpp"

namespace xcorr {

namespace {

// Dense decomposition is cheaper and exact below this size.
constexpr Eigen::Index kDenseLimit = 512;

void require_hermitian(const InterferencePattern& p, const char* what) {
    if (!p.hermitian()) throw DomainError(std::string(what) + " needs a hermitian pattern");
    if (p.matrix.rows() != p.matrix.cols() ||
        p.matrix.rows() != static_cast<Eigen::Index>(p.window.size())) {
        throw DomainError(std::string(what) + ": pattern does not match its window");
    }
}

EigResult leading_pairs(const Eigen::MatrixXcd& x, int m, const SolverOptions& options) {
    if (x.rows() > kDenseLimit) return top_eigpairs(x, m, options);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x);
    const Eigen::Index n = x.rows();
    EigResult out;
    out.vectors.resize(n, m);
    const double scale = std::max(std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[n - 1]));
    out.norm_estimate = scale;
    out.converged = true;
    for (int i = 0; i < m; ++i) {
        out.values.push_back(es.eigenvalues()[n - 1 - i]);
        out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
        out.residuals.push_back((x * out.vectors.col(i) - out.values.back() * out.vectors.col(i)).norm());
    }
    return out;
}

Rank1Result finish_rank1(const ImageWindow& window, Eigen::VectorXcd v, double lambda,
                         double residual, int iterations) {
    fix_phase(v);
    Rank1Result out;
    out.image = make_image(window, v.cwiseAbs());
    out.vector = std::move(v);
    out.lambda = lambda;
    out.residual = residual;
    out.iterations = iterations;
    return out;
}

}  // namespace

InterferencePattern two_point_pattern(const MigratedBank& bank, const ImageWindow& window,
                                      const std::optional<std::vector<Eigen::Index>>& subset) {
    const Eigen::Index k = bank.columns.rows();
    if (k != static_cast<Eigen::Index>(window.size())) throw DomainError("bank does not match the window");
    if (!subset) {
        Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(k, k);
        x.selfadjointView<Eigen::Lower>().rankUpdate(bank.columns);
        Eigen::MatrixXcd full = x.selfadjointView<Eigen::Lower>();
        return {std::move(full), window, {}};
    }
    if (subset->empty()) throw DomainError("column subset is empty");
    Eigen::MatrixXcd rows(static_cast<Eigen::Index>(subset->size()), bank.columns.cols());
    for (std::size_t i = 0; i < subset->size(); ++i) {
        const Eigen::Index c = (*subset)[i];
        if (c < 0 || c >= k) throw DomainError("column subset index out of range");
        rows.row(static_cast<Eigen::Index>(i)) = bank.columns.row(c);
    }
    Eigen::MatrixXcd x = bank.columns * rows.adjoint();
    return {std::move(x), window, *subset};
}

std::vector<Eigen::Index> random_column_subset(Eigen::Index k, double keep_fraction, std::uint64_t seed) {
    if (k < 1) throw DomainError("grid must have at least one point");
    if (!(keep_fraction > 0.0) || keep_fraction > 1.0) throw DomainError("keep fraction must lie in (0, 1]");
    const auto take = static_cast<Eigen::Index>(std::ceil(keep_fraction * static_cast<double>(k) - 1e-9));
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    random::Stream rng(seed, 0x636f6c756d6e73ULL);
    // Partial Fisher-Yates: the first `take` slots end up a uniform sample.
    for (Eigen::Index i = 0; i < take; ++i) {
        const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(k - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(std::max<Eigen::Index>(take, 1)));
    std::sort(idx.begin(), idx.end());
    return idx;
}

ImageGrid make_image(const ImageWindow& window, Eigen::VectorXd raw) {
    if (raw.size() != static_cast<Eigen::Index>(window.size())) throw DomainError("image size does not match the window");
    if (!raw.allFinite()) throw DomainError("image has non-finite values");
    ImageGrid img;
    img.window = window;
    raw = raw.cwiseMax(0.0);
    img.peak = raw.size() ? raw.maxCoeff() : 0.0;
    if (img.peak > 0.0) {
        img.values = raw / img.peak;
    } else {
        img.degenerate = true;
        img.values = Eigen::VectorXd::Zero(raw.size());
    }
    return img;
}

ImageGrid km_image(const SignalSet& data, const ImageWindow& window) {
    AccumulateOptions opts;
    opts.full_pattern = false;
    return km_image(accumulate_products(data, window, opts).km_preimage, window);
}

ImageGrid km_image(const Eigen::VectorXcd& preimage, const ImageWindow& window) {
    return make_image(window, preimage.cwiseAbs());
}

ImageGrid single_point_image(const InterferencePattern& pattern) {
    require_hermitian(pattern, "single-point image");
    return make_image(pattern.window, pattern.matrix.diagonal().real());
}

ImageGrid reference_point_image(const InterferencePattern& pattern, Eigen::Index k_ref) {
    require_hermitian(pattern, "reference-point image");
    if (k_ref < 0 || k_ref >= pattern.matrix.cols()) throw DomainError("reference index out of range");
    return make_image(pattern.window, pattern.matrix.col(k_ref).cwiseAbs());
}

void fix_phase(Eigen::VectorXcd& v) {
    Eigen::Index best = 0;
    double mag = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > mag) {
            mag = a;
            best = i;
        }
    }
    if (mag > 0.0) v *= std::conj(v[best]) / mag;
    if (v.size()) v[best] = {std::abs(v[best]), 0.0};
}

Rank1Result rank1_image(const InterferencePattern& pattern, const SolverOptions& options) {
    if (pattern.matrix.size() == 0 || pattern.matrix.cwiseAbs().maxCoeff() == 0.0) {
        throw DomainError("rank-1 image of a zero pattern");
    }
    if (pattern.hermitian()) {
        require_hermitian(pattern, "rank-1 image");
        const EigResult e = top_eigpairs(pattern.matrix, 1, options);
        if (!e.converged) throw ConvergenceError("top eigenvector did not converge", e.iterations, e.residuals.front());
        return finish_rank1(pattern.window, e.vectors.col(0), e.values.front(), e.residuals.front(), e.iterations);
    }
    if (pattern.matrix.rows() != static_cast<Eigen::Index>(pattern.window.size())) {
        throw DomainError("rectangular pattern does not match its window");
    }
    const SingularResult s = top_singular_left(pattern.matrix, options);
    if (!s.converged) throw ConvergenceError("top singular vector did not converge", s.iterations, s.residual);
    return finish_rank1(pattern.window, s.vector, s.sigma * s.sigma, s.residual, s.iterations);
}

Rank1Result rank1_image(const MigratedBank& bank, const ImageWindow& window, const SolverOptions& options) {
    if (bank.columns.rows() != static_cast<Eigen::Index>(window.size())) throw DomainError("bank does not match the window");
    if (bank.columns.size() == 0 || bank.columns.cwiseAbs().maxCoeff() == 0.0) {
        throw DomainError("rank-1 image of a zero bank");
    }
    // The left singular vectors of B are the eigenvectors of X = B B^H.
    const SingularResult s = top_singular_left(bank.columns, options);
    if (!s.converged) throw ConvergenceError("top singular vector did not converge", s.iterations, s.residual);
    return finish_rank1(window, s.vector, s.sigma * s.sigma, s.residual, s.iterations);
}

Rank1Result downsampled_rank1(const MigratedBank& bank, const ImageWindow& window, double keep_fraction,
                              std::uint64_t seed, const SolverOptions& options) {
    const auto subset = random_column_subset(bank.columns.rows(), keep_fraction, seed);
    return rank1_image(two_point_pattern(bank, window, subset), options);
}

ImageGrid cumulative_eigensum(const InterferencePattern& pattern, int m, const SolverOptions& options) {
    require_hermitian(pattern, "cumulative eigensum");
    if (m < 1 || m > pattern.matrix.rows()) throw DomainError("eigenvector count out of range");
    const EigResult e = leading_pairs(pattern.matrix, m, options);
    if (!e.converged) throw ConvergenceError("eigenpairs did not converge", e.iterations, e.residuals.back());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(pattern.matrix.rows());
    for (int i = 0; i < m; ++i) acc += e.values[static_cast<std::size_t>(i)] * e.vectors.col(i).cwiseAbs2();
    return make_image(pattern.window, std::move(acc));
}

std::vector<double> eigen_spectrum(const InterferencePattern& pattern, int n, const SolverOptions& options) {
    require_hermitian(pattern, "eigen spectrum");
    if (n < 1 || n > pattern.matrix.rows()) throw DomainError("eigenvalue count out of range");
    const EigResult e = leading_pairs(pattern.matrix, n, options);
    if (!e.converged) throw ConvergenceError("eigenpairs did not converge", e.iterations, e.residuals.back());
    const double top = e.values.front();
    if (!(top > 0.0)) throw DomainError("pattern has no positive eigenvalue");
    std::vector<double> out;
    out.reserve(e.values.size());
    for (double v : e.values) out.push_back(v / top);
    return out;
}

CrossSections cross_sections(const InterferencePattern& pattern, int iu0, int iv0) {
    require_hermitian(pattern, "cross sections");
    const ImageWindow& w = pattern.window;
    if (iu0 < 0 || iu0 >= w.count_u || iv0 < 0 || iv0 >= w.count_v) throw DomainError("anchor outside the grid");
    const auto k = [&w](int iu, int iv) { return static_cast<Eigen::Index>(w.index(iu, iv)); };
    const auto& x = pattern.matrix;
    CrossSections out;
    out.fixed_first.resize(w.count_u, w.count_v);
    out.u_pair.resize(w.count_u, w.count_u);
    out.mixed.resize(w.count_v, w.count_u);
    out.v_pair.resize(w.count_v, w.count_v);
    for (int a = 0; a < w.count_u; ++a) {
        for (int b = 0; b < w.count_v; ++b) out.fixed_first(a, b) = std::abs(x(k(iu0, iv0), k(a, b)));
        for (int b = 0; b < w.count_u; ++b) out.u_pair(a, b) = std::abs(x(k(a, iv0), k(b, iv0)));
    }
    for (int a = 0; a < w.count_v; ++a) {
        for (int b = 0; b < w.count_u; ++b) out.mixed(a, b) = std::abs(x(k(iu0, a), k(b, iv0)));
        for (int b = 0; b < w.count_v; ++b) out.v_pair(a, b) = std::abs(x(k(iu0, a), k(iu0, b)));
    }
    return out;
}

}  // namespace xcorr
