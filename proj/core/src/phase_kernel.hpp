// SPDX-License-Identifier: Apache-2.0
//
// Inner loop of the migration: for a block of grid points, adds conj(A) u of
// every receiver over a uniform frequency grid into split real/imag
// accumulators laid out [frequency][grid point].
#pragma once

#include <complex>

namespace xcorr::detail {

// Grid points are processed in lanes of this many doubles.
inline constexpr int kLanes = 8;
// Largest block accepted by accumulate_block().
inline constexpr int kMaxBlock = 256;

// delays:  nr pointers to nk offset delays t_R^k - t_R, seconds
// traces:  nr pointers to nw samples at omega_first + i * omega_step
// acc_*:   nw rows of `stride` doubles; entries [i * stride + k] are updated
// nk must be a multiple of kLanes and at most kMaxBlock.
void accumulate_block(const double* const* delays, const std::complex<double>* const* traces, int nr,
                      int nk, double omega_first, double omega_step, int nw, double* acc_re,
                      double* acc_im, long stride);

}  // namespace xcorr::detail
