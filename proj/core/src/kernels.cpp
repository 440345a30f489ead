// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "xcorr/analysis.hpp"
#include "xcorr/errors.hpp"

namespace xcorr {

namespace {

struct Discretized {
    std::vector<double> x;
    Eigen::VectorXd sqrt_w;
    Eigen::MatrixXd op;  // W^{1/2} K W^{1/2}
};

Discretized discretize(const std::function<double(double, double)>& kernel, double lo, double hi, int points) {
    if (points < 3) throw DomainError("kernel grid needs at least 3 points");
    Discretized d;
    const double h = (hi - lo) / static_cast<double>(points - 1);
    d.x.resize(static_cast<std::size_t>(points));
    d.sqrt_w.resize(points);
    for (int i = 0; i < points; ++i) {
        d.x[static_cast<std::size_t>(i)] = lo + h * static_cast<double>(i);
        const double w = (i == 0 || i == points - 1) ? 0.5 * h : h;
        d.sqrt_w[i] = std::sqrt(w);
    }
    d.op.resize(points, points);
    for (int j = 0; j < points; ++j) {
        for (int i = j; i < points; ++i) {
            const double v = d.sqrt_w[i] * kernel(d.x[static_cast<std::size_t>(i)], d.x[static_cast<std::size_t>(j)]) * d.sqrt_w[j];
            d.op(i, j) = v;
            d.op(j, i) = v;
        }
    }
    return d;
}

Eigenfunction top_eigenfunction(const Discretized& d) {
    const Eigen::MatrixXd& a = d.op;
    HermitianOperator op{a.rows(), [&a](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
                             y.resize(x.size());
                             y.real() = a * x.real();
                             y.imag() = a * x.imag();
                         }};
    SolverOptions opts;
    opts.tol = 1e-11;
    const EigResult e = top_eigpairs(op, 1, opts);
    if (!e.converged) throw ConvergenceError("kernel eigenfunction did not converge", e.iterations, e.residuals.front());
    Eigen::VectorXcd v = e.vectors.col(0);
    // Phase fix, then the result is real up to rounding.
    Eigen::Index best = 0;
    v.cwiseAbs().maxCoeff(&best);
    v *= std::abs(v[best]) / v[best];
    Eigenfunction out;
    out.x = d.x;
    out.lambda = e.values.front();
    out.u.resize(d.x.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        out.u[i] = v[static_cast<Eigen::Index>(i)].real() / d.sqrt_w[static_cast<Eigen::Index>(i)];
        peak = std::max(peak, std::abs(out.u[i]));
    }
    for (double& u : out.u) u /= peak;
    return out;
}

double default_half_length(double alpha, double beta, const KernelGrid& grid) {
    return grid.half_length > 0.0 ? grid.half_length : 12.0 / std::min(alpha, beta);
}

double gaussian_kernel(double alpha, double beta, double x, double y) {
    const double p = x + y;
    const double m = x - y;
    return std::exp(-0.5 * alpha * p * p - 0.5 * beta * m * m);
}

double sinc_kernel(double alpha, double beta, double x, double y) {
    return sinc(alpha * (x - y)) * sinc(beta * (x + y));
}

// Linear interpolation of f, zero outside its support.
double sample(const Eigenfunction& f, double x) {
    const double lo = f.x.front();
    const double h = f.x[1] - f.x[0];
    const double t = (x - lo) / h;
    if (t < 0.0 || t > static_cast<double>(f.x.size() - 1)) return 0.0;
    const auto i = std::min(static_cast<std::size_t>(t), f.x.size() - 2);
    const double frac = t - static_cast<double>(i);
    return (1.0 - frac) * f.u[i] + frac * f.u[i + 1];
}

void fix_sign(Eigen::VectorXd& v) {
    Eigen::Index best = 0;
    v.cwiseAbs().maxCoeff(&best);
    if (v[best] < 0.0) v = -v;
}

}  // namespace

GaussianKernelResult gaussian_kernel_top_eig(double alpha, double beta, const KernelGrid& grid,
                                             double max_fit_residual) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("Gaussian kernel widths must be positive");
    const double L = default_half_length(alpha, beta, grid);
    const auto d = discretize([&](double x, double y) { return gaussian_kernel(alpha, beta, x, y); }, -L, L, grid.points);

    GaussianKernelResult out;
    out.predicted_gamma = std::sqrt(alpha * beta);
    out.numeric = top_eigenfunction(d);

    // log u = c - gamma x^2 over the samples above 10% of the peak.
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < out.numeric.x.size(); ++i) {
        if (out.numeric.u[i] < 0.1) continue;
        const double q = out.numeric.x[i] * out.numeric.x[i];
        const double l = std::log(out.numeric.u[i]);
        pts.emplace_back(q, l);
        s1 += 1;
        sx += q;
        sxx += q * q;
        sy += l;
        sxy += q * l;
    }
    if (pts.size() < 3) throw DomainError("kernel grid too coarse to resolve the eigenfunction");
    const double slope = (s1 * sxy - sx * sy) / (s1 * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / s1;
    out.fitted_gamma = -slope;
    double ss = 0.0;
    for (const auto& [q, l] : pts) ss += (l - icpt - slope * q) * (l - icpt - slope * q);
    out.fit_residual = std::sqrt(ss / static_cast<double>(pts.size()));
    if (out.fit_residual > max_fit_residual) {
        std::ostringstream msg;
        msg << "Gaussian fit residual " << out.fit_residual << " above " << max_fit_residual
            << "; kernel grid too coarse";
        throw DomainError(msg.str());
    }
    return out;
}

double sinc_kernel_approx_eigenfunction(double alpha, double beta, double gamma, double x) {
    const double p = 2.0 * alpha - gamma;
    const double q = gamma - 2.0 * beta;
    const double r = alpha + beta;
    if (std::abs(x) * std::max({std::abs(p), std::abs(q), r}) < 1e-4) {
        // cos(kx) = 1 - k^2 x^2 / 2 + k^4 x^4 / 24
        const double x2 = x * x;
        return -0.5 * (p * p + q * q - 2.0 * r * r) +
               x2 / 24.0 * (p * p * p * p + q * q * q * q - 2.0 * r * r * r * r);
    }
    return (std::cos(p * x) + std::cos(q * x) - 2.0 * std::cos(r * x)) / (x * x);
}

SincKernelResult sinc_kernel_top_eig(double alpha, double beta, const KernelGrid& grid) {
    if (!(beta > 0.0) || !(alpha > beta)) throw DomainError("sinc kernel needs alpha > beta > 0");
    SincKernelResult out;
    // (alpha + beta)/(n + 1/2) and (alpha - beta)/(2n + 1) decrease with n, so
    // scanning n until both fall to beta enumerates every candidate.
    auto admissible = [&](double g) { return g < alpha && g > beta && g > alpha - beta; };
    for (int n = 0; (alpha + beta) / (n + 0.5) > beta; ++n) {
        const double g = (alpha + beta) / (n + 0.5);
        if (admissible(g)) out.candidates.push_back(g);
    }
    for (int n = 0; (alpha - beta) / (2 * n + 1) > beta; ++n) {
        const double g = (alpha - beta) / (2 * n + 1);
        if (admissible(g)) out.candidates.push_back(g);
    }
    std::sort(out.candidates.begin(), out.candidates.end(), std::greater<>());
    if (out.candidates.empty()) throw DomainError("no admissible sinc eigenfunction width");
    out.gamma = out.candidates.front();
    out.predicted_first_zero = std::numbers::pi / out.gamma;
    const double sa = std::numbers::pi / (std::numbers::sqrt2 * alpha);
    const double sb = std::numbers::pi / (std::numbers::sqrt2 * beta);
    out.harmonic_estimate = 3.0 / std::numbers::sqrt2 * sa * sb / (sa + sb);

    const double L = default_half_length(alpha, beta, grid);
    const auto d = discretize([&](double x, double y) { return sinc_kernel(alpha, beta, x, y); }, -L, L, grid.points);
    out.numeric = top_eigenfunction(d);

    const auto& u = out.numeric.u;
    const auto peak = static_cast<std::size_t>(std::max_element(u.begin(), u.end()) - u.begin());
    out.numeric_first_zero = -1.0;
    for (std::size_t i = peak; i + 1 < u.size(); ++i) {
        if (u[i] > 0.0 && u[i + 1] <= 0.0) {
            const double t = u[i] / (u[i] - u[i + 1]);
            out.numeric_first_zero = out.numeric.x[i] + t * (out.numeric.x[i + 1] - out.numeric.x[i]) - out.numeric.x[peak];
            break;
        }
    }

    out.approximate.resize(u.size());
    double amax = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.approximate[i] = sinc_kernel_approx_eigenfunction(alpha, beta, out.gamma, out.numeric.x[i]);
        amax = std::max(amax, std::abs(out.approximate[i]));
    }
    for (double& a : out.approximate) a /= amax;
    return out;
}

double KernelSpec::operator()(double x, double y) const {
    return family == KernelFamily::gaussian ? gaussian_kernel(alpha, beta, x, y) : sinc_kernel(alpha, beta, x, y);
}

double KernelSpec::width() const {
    if (family == KernelFamily::gaussian) return 1.0 / std::sqrt(2.0 * std::sqrt(alpha * beta));
    return std::numbers::pi / sinc_kernel_top_eig(alpha, beta, KernelGrid{201, 0.0}).gamma;
}

MultiPeakResult multi_peak_kernel_eig(const KernelSpec& base, const std::vector<double>& offsets,
                                      const Eigen::MatrixXd& c, const KernelGrid& grid) {
    const auto m = static_cast<Eigen::Index>(offsets.size());
    if (m < 1) throw DomainError("multi-peak kernel needs at least one peak");
    if (c.rows() != m || c.cols() != m) throw DomainError("coefficient matrix must be M x M");
    if (!c.isApprox(c.transpose(), 1e-14)) throw DomainError("coefficient matrix must be symmetric");

    MultiPeakResult out;
    const double width = base.width();
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double sep = std::abs(offsets[static_cast<std::size_t>(i)] - offsets[static_cast<std::size_t>(j)]);
            if (sep < 6.0 * width) {
                std::ostringstream msg;
                msg << "peaks " << i << " and " << j << " are " << sep << " apart, below six base widths ("
                    << 6.0 * width << "); coefficient accuracy degrades";
                out.warnings.push_back(msg.str());
            }
        }
    }

    // The base eigenfunction on its own grid, and the composite on a grid with
    // the same spacing stretched over all peaks.
    const double L = default_half_length(base.alpha, base.beta, grid);
    const Eigenfunction single = top_eigenfunction(discretize(base, -L, L, grid.points));
    const double h = 2.0 * L / static_cast<double>(grid.points - 1);
    const auto [amin, amax] = std::minmax_element(offsets.begin(), offsets.end());
    const double lo = *amin - L;
    const int points = static_cast<int>(std::lround((*amax - *amin + 2.0 * L) / h)) + 1;
    const auto composite = [&](double x, double y) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                if (c(i, j) != 0.0) acc += c(i, j) * base(x - offsets[static_cast<std::size_t>(i)], y - offsets[static_cast<std::size_t>(j)]);
            }
        }
        return acc;
    };
    const auto d = discretize(composite, lo, lo + h * (points - 1), points);
    out.numeric = top_eigenfunction(d);

    out.coefficients.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t n = 0; n < out.numeric.x.size(); ++n) {
            const double w = d.sqrt_w[static_cast<Eigen::Index>(n)] * d.sqrt_w[static_cast<Eigen::Index>(n)];
            const double ui = sample(single, out.numeric.x[n] - offsets[static_cast<std::size_t>(i)]);
            num += w * out.numeric.u[n] * ui;
            den += w * ui * ui;
        }
        out.coefficients[i] = num / den;
    }
    out.coefficients.normalize();
    fix_sign(out.coefficients);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    out.coefficient_vector = es.eigenvectors().col(m - 1);
    fix_sign(out.coefficient_vector);
    return out;
}

}  // namespace xcorr
