// SPDX-License-Identifier: Apache-2.0
//
// Closed-form resolution oracles.
//
// The point spread function of the receiver array and the interference
// approximation built from it, both in the far-field plane-wave limit where
// every range is replaced by the target height H. Then the top
// eigenfunctions of 1-D anisotropic kernels, numeric and predicted.
//
// Here sinc(x) = sin(x) / x, unnormalized.
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xcorr/scene.hpp"
#include "xcorr/spectral.hpp"

namespace xcorr {

double sinc(double x);

struct PsfModel {
    double array_diameter = 2e5;      // a, side of the square receiver array (m)
    double target_height = 4.85e5;    // H, array-to-target distance (m)
    double omega = 0.0;               // rad/s
    Vec3 synthetic_aperture;          // v_T S (m)
    Vec3 emitter_direction{0, 0, 1};  // unit vector from emitter toward target
    Vec3 look_direction{0, 0, 1};     // unit vector from array center toward target
    double c0 = kSpeedOfLight;

    void validate() const;
    double wavelength() const;
    // lambda H / a, the first null of the array factor.
    double array_resolution() const;
    // lambda H / (2 |v_T S|), the first null of the aperture sinc in x - y.
    double aperture_resolution() const;
};

// sum_R exp(i omega (t_R^x - t_R^i)) at every grid point x, with exact travel
// times about the window center at slow time s. The Doppler factors use the
// window velocity.
Eigen::VectorXcd psf_exact(const ImageWindow& window, const std::vector<Vec3>& receivers,
                           const Emitter& emitter, double pulse_time, double omega,
                           const Vec3& scatterer_offset, double c0 = kSpeedOfLight);

// a^2 exp(i (omega/c0) l . d) sinc(omega a d1 / (2 c0 H)) sinc(omega a d2 / (2 c0 H))
// for each in-plane offset d = x - y_i; d1, d2 are its ground x and y
// components and l the look direction.
std::complex<double> psf_sinc_approx(const PsfModel& model, const Vec3& offset);
Eigen::VectorXcd psf_sinc_approx(const PsfModel& model, const std::vector<Vec3>& offsets);

struct PointScatterer {
    Vec3 offset;
    double reflectivity = 1.0;
};

// Approximate interference pattern value at the pair (x, y):
//   sum_ij rho_i rho_j sum_omega w(omega) e^{i (omega/c0) e . d_ij} B(x - y_i) conj(B(y - y_j))
//          S sinc((omega/c0) (v_T S / H) . d_ij),        d_ij = (x - y_i) - (y - y_j)
// with e the emitter direction and B = psf_sinc_approx. The base model's omega
// and aperture are used; `omegas` with weights replaces the single frequency
// when not empty.
std::complex<double> interference_approx(const PsfModel& model,
                                         const std::vector<PointScatterer>& scatterers,
                                         const Vec3& x, const Vec3& y,
                                         const std::vector<double>& omegas = {},
                                         const std::vector<double>& weights = {});

// Far-field model for a square array of side `array_diameter` whose center
// is the receiver centroid. H is the centroid-to-window-center distance at
// s = 0 and the synthetic aperture is left at zero.
PsfModel psf_model_for(const ImageWindow& window, const Emitter& emitter,
                       const std::vector<Vec3>& receivers, double array_diameter, double omega,
                       double c0 = kSpeedOfLight);

// psf_exact against psf_sinc_approx for a scatterer at the window center.
// Magnitudes are normalized by their peak values N_R and a^2; the main lobe
// is the box |d1|, |d2| < lambda H / a.
struct PsfComparison {
    Eigen::VectorXd exact;   // |psf_exact| / N_R on the window grid
    Eigen::VectorXd approx;  // |psf_sinc_approx| / a^2 on the window grid
    double main_lobe_discrepancy = 0.0;  // max |exact - approx| over the main lobe
    std::size_t main_lobe_points = 0;
    double predicted_null = 0.0;  // lambda H / a
    double exact_null_u = -1.0;   // first null of the exact PSF along each axis
    double exact_null_v = -1.0;
};

PsfComparison compare_psf(const ImageWindow& window, const std::vector<Vec3>& receivers,
                          const Emitter& emitter, const PsfModel& model, double pulse_time = 0.0);

// First local minimum of magnitude(t) for t > 0, scanned with step `step` up
// to `max_distance` and refined by a parabola through the bracketing samples.
// Returns a negative value when there is no minimum in range.
double first_null(const std::function<double(double)>& magnitude, double step, double max_distance);

// ---- 1-D kernels -----------------------------------------------------------

// Discretization of a kernel on [-L, L] with `points` nodes. Trapezoid weights
// enter symmetrically, W^{1/2} K W^{1/2}, so the discrete operator stays
// symmetric; eigenfunctions are mapped back through W^{-1/2}.
struct KernelGrid {
    int points = 2001;
    double half_length = 0.0;  // 0 selects 12 / min(alpha, beta)
};

struct Eigenfunction {
    std::vector<double> x;
    std::vector<double> u;  // sign fixed so the largest-magnitude sample is positive; max |u| = 1
    double lambda = 0.0;
};

struct GaussianKernelResult {
    double predicted_gamma = 0.0;  // sqrt(alpha beta)
    double fitted_gamma = 0.0;     // u ~ exp(-gamma x^2), least squares on log u
    double fit_residual = 0.0;     // RMS of the log fit
    Eigenfunction numeric;
};

// K(x, y) = exp(-alpha/2 (x + y)^2 - beta/2 (x - y)^2). Throws DomainError when
// the log fit residual exceeds `max_fit_residual` (grid too coarse).
GaussianKernelResult gaussian_kernel_top_eig(double alpha, double beta, const KernelGrid& grid = {},
                                             double max_fit_residual = 1e-3);

struct SincKernelResult {
    double gamma = 0.0;                   // largest admissible candidate width
    std::vector<double> candidates;       // all candidates in (beta, alpha) above alpha - beta
    double predicted_first_zero = 0.0;    // pi / gamma
    double numeric_first_zero = 0.0;      // of the numeric eigenfunction, interpolated
    double harmonic_estimate = 0.0;       // (3/sqrt2) s_a s_b / (s_a + s_b)
    std::vector<double> approximate;      // closed-form eigenfunction on numeric.x, max 1
    Eigenfunction numeric;
};

// K(x, y) = sinc(alpha (x - y)) sinc(beta (x + y)) with alpha > beta > 0.
// Candidates are (alpha + beta)/(n + 1/2) and (alpha - beta)/(2n + 1) subject to
// alpha > gamma > beta and gamma > alpha - beta. Throws DomainError when none
// is admissible.
SincKernelResult sinc_kernel_top_eig(double alpha, double beta, const KernelGrid& grid = {});

// Closed-form approximate eigenfunction
// (cos((2a - g) x) + cos((g - 2b) x) - 2 cos((a + b) x)) / x^2.
double sinc_kernel_approx_eigenfunction(double alpha, double beta, double gamma, double x);

enum class KernelFamily { gaussian, sinc };

struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double alpha = 1.0;
    double beta = 1.0;

    double operator()(double x, double y) const;
    // Characteristic width used for the separation check: the std of the
    // predicted Gaussian eigenfunction, or the predicted sinc first zero.
    double width() const;
};

struct MultiPeakResult {
    Eigen::VectorXd coefficients;        // projections on translated base eigenfunctions, unit norm
    Eigen::VectorXd coefficient_vector;  // top eigenvector of c, unit norm, same sign convention
    Eigenfunction numeric;
    std::vector<std::string> warnings;
};

// Top eigenfunction of sum_ij c_ij K(x - a_i, y - a_j). Peaks closer than six
// base widths add a warning.
MultiPeakResult multi_peak_kernel_eig(const KernelSpec& base, const std::vector<double>& offsets,
                                      const Eigen::MatrixXd& coefficients, const KernelGrid& grid = {});

}  // namespace xcorr
