// SPDX-License-Identifier: Apache-2.0
//
// Image formation over the moving window grid.
//
// Every method is built from the migrated bank b(s, omega) = A(s, omega)^H u(s, omega):
//   Kirchhoff migration  rho = sum b
//   interference pattern X = sum b b^H
//   single-point image   diag(X)
//   reference image      |X(:, k_ref)|
//   rank-1 image         |v_1(X)|
// Because each correlation sample u u^H has rank one, X is accumulated from
// the K-vectors b directly. A sample then costs O(K N_R + K^2) instead of the
// O(K N_R^2 + K^2 N_R) of migrating the N_R x N_R correlation matrix.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xcorr/forward.hpp"
#include "xcorr/spectral.hpp"

namespace xcorr {

struct MigratedBank {
    Eigen::MatrixXcd columns;  // K x (N_s N_omega)
    // (pulse, frequency) of every column; pulse-major, frequency fastest.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> index;
};

// The K x N_omega block of bank columns for one pulse.
Eigen::MatrixXcd migrate_pulse(const SignalSet& data, const ImageWindow& window, std::size_t pulse);

// Materializes the whole bank. Memory is K N_s N_omega complex values, which
// is only practical for small problems; accumulate_products() streams instead.
MigratedBank migrated_bank(const SignalSet& data, const ImageWindow& window);

struct InterferencePattern {
    Eigen::MatrixXcd matrix;
    ImageWindow window;                  // grid metadata for rows (and columns when hermitian)
    std::vector<Eigen::Index> columns;  // row-grid indices of the columns; empty when hermitian

    bool hermitian() const { return columns.empty(); }
};

// X = sum b b^H, or with a subset S, X = sum b b_S^H (K x |S|).
InterferencePattern two_point_pattern(const MigratedBank& bank, const ImageWindow& window,
                                      const std::optional<std::vector<Eigen::Index>>& subset = {});

// Seeded subset of ceil(fraction * K) distinct grid indices, sorted.
std::vector<Eigen::Index> random_column_subset(Eigen::Index k, double keep_fraction, std::uint64_t seed);

struct AccumulateOptions {
    bool full_pattern = true;
    std::optional<std::vector<Eigen::Index>> column_subset;  // adds a rectangular pattern
    std::size_t pulses_per_block = 16;
};

struct ImagingProducts {
    Eigen::VectorXcd km_preimage;
    std::optional<InterferencePattern> pattern;      // hermitian
    std::optional<InterferencePattern> downsampled;  // rectangular
};

// One streaming pass over the data producing the Kirchhoff pre-image and the
// requested patterns. Bank blocks are formed pulse block by pulse block and
// folded into X with BLAS rank-k updates over a fixed tiling, so the result is
// independent of the thread count.
ImagingProducts accumulate_products(const SignalSet& data, const ImageWindow& window,
                                    const AccumulateOptions& options = {});

// Real image over the window grid, normalized to peak 1. Index k = iv * count_u + iu.
struct ImageGrid {
    ImageWindow window;
    Eigen::VectorXd values;
    double peak = 0.0;        // maximum before normalization
    bool degenerate = false;  // true when the raw image was identically zero

    int count_u() const { return window.count_u; }
    int count_v() const { return window.count_v; }
    double at(int iu, int iv) const { return values[static_cast<Eigen::Index>(window.index(iu, iv))]; }
};

// Normalizes `raw` (already non-negative) into an ImageGrid.
ImageGrid make_image(const ImageWindow& window, Eigen::VectorXd raw);

ImageGrid km_image(const SignalSet& data, const ImageWindow& window);
ImageGrid km_image(const Eigen::VectorXcd& preimage, const ImageWindow& window);

ImageGrid single_point_image(const InterferencePattern& pattern);
ImageGrid reference_point_image(const InterferencePattern& pattern, Eigen::Index k_ref);

struct Rank1Result {
    ImageGrid image;
    Eigen::VectorXcd vector;  // phase-fixed: largest-magnitude entry real positive
    double lambda = 0.0;      // eigenvalue, or squared singular value when rectangular
    double residual = 0.0;
    int iterations = 0;
};

// Rotates v so its largest-magnitude entry (lowest index on ties) is real positive.
void fix_phase(Eigen::VectorXcd& v);

// Throws ConvergenceError when the solver does not converge.
Rank1Result rank1_image(const InterferencePattern& pattern, const SolverOptions& options = {});
Rank1Result rank1_image(const MigratedBank& bank, const ImageWindow& window,
                        const SolverOptions& options = {});

Rank1Result downsampled_rank1(const MigratedBank& bank, const ImageWindow& window,
                              double keep_fraction, std::uint64_t seed,
                              const SolverOptions& options = {});

// sum_{i <= m} lambda_i |v_i|^2, normalized.
ImageGrid cumulative_eigensum(const InterferencePattern& pattern, int m,
                              const SolverOptions& options = {});

// Top-n eigenvalues divided by lambda_1.
std::vector<double> eigen_spectrum(const InterferencePattern& pattern, int n,
                                   const SolverOptions& options = {});

// |X| on the four planar cuts through the anchor (iu0, iv0), writing points as
// (x1, x2) for the first grid point and (x1', x2') for the second:
//   fixed_first  I(a, b, ., .)   rows x1', cols x2'
//   u_pair       I(., b, ., b)   rows x1,  cols x1'
//   mixed        I(a, ., ., b)   rows x2,  cols x1'
//   v_pair       I(a, ., a, .)   rows x2,  cols x2'
struct CrossSections {
    Eigen::MatrixXd fixed_first;
    Eigen::MatrixXd u_pair;
    Eigen::MatrixXd mixed;
    Eigen::MatrixXd v_pair;
};

CrossSections cross_sections(const InterferencePattern& pattern, int iu0, int iv0);

}  // namespace xcorr
