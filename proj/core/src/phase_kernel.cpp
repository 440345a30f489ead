// SPDX-License-Identifier: Apache-2.0
//
// Built with -ffast-math -fopenmp-simd so that the sin/cos calls below map to
// the vector math library. Nothing else lives in this translation unit.
#include "phase_kernel.hpp"

#include <cmath>
#include <cstring>

namespace xcorr::detail {

namespace {

typedef double lanes_t __attribute__((vector_size(kLanes * sizeof(double))));

inline lanes_t load(const double* p) {
    lanes_t v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

inline void store(double* p, lanes_t v) { std::memcpy(p, &v, sizeof v); }

// conj(A) at the first frequency and the per-step rotation for one receiver.
// Separate loops keep the compiler from fusing sin and cos into scalar sincos.
void phases(const double* d, int n, double w0, double dw, double* er, double* ei, double* zr, double* zi) {
#pragma omp simd
    for (int k = 0; k < n; ++k) er[k] = std::cos(w0 * d[k]);
#pragma omp simd
    for (int k = 0; k < n; ++k) ei[k] = -std::sin(w0 * d[k]);
#pragma omp simd
    for (int k = 0; k < n; ++k) zr[k] = std::cos(dw * d[k]);
#pragma omp simd
    for (int k = 0; k < n; ++k) zi[k] = -std::sin(dw * d[k]);
}

}  // namespace

void accumulate_block(const double* const* delays, const std::complex<double>* const* traces, int nr,
                      int nk, double omega_first, double omega_step, int nw, double* acc_re,
                      double* acc_im, long stride) {
    alignas(64) double er[2][kMaxBlock];
    alignas(64) double ei[2][kMaxBlock];
    alignas(64) double zr[2][kMaxBlock];
    alignas(64) double zi[2][kMaxBlock];
    // Receivers go in pairs so that each accumulator load/store serves two
    // phase recurrences held in registers.
    for (int r = 0; r < nr; r += 2) {
        const bool pair = r + 1 < nr;
        phases(delays[r], nk, omega_first, omega_step, er[0], ei[0], zr[0], zi[0]);
        if (pair) phases(delays[r + 1], nk, omega_first, omega_step, er[1], ei[1], zr[1], zi[1]);
        const std::complex<double>* ua = traces[r];
        const std::complex<double>* ub = pair ? traces[r + 1] : nullptr;
        for (int c = 0; c < nk; c += kLanes) {
            lanes_t ar = load(er[0] + c), ai = load(ei[0] + c);
            const lanes_t azr = load(zr[0] + c), azi = load(zi[0] + c);
            if (pair) {
                lanes_t br = load(er[1] + c), bi = load(ei[1] + c);
                const lanes_t bzr = load(zr[1] + c), bzi = load(zi[1] + c);
                for (int i = 0; i < nw; ++i) {
                    double* pr = acc_re + i * stride + c;
                    double* pi = acc_im + i * stride + c;
                    const double uar = ua[i].real(), uai = ua[i].imag();
                    const double ubr = ub[i].real(), ubi = ub[i].imag();
                    store(pr, load(pr) + (ar * uar - ai * uai) + (br * ubr - bi * ubi));
                    store(pi, load(pi) + (ar * uai + ai * uar) + (br * ubi + bi * ubr));
                    const lanes_t ta = ar * azr - ai * azi;
                    ai = ar * azi + ai * azr;
                    ar = ta;
                    const lanes_t tb = br * bzr - bi * bzi;
                    bi = br * bzi + bi * bzr;
                    br = tb;
                }
            } else {
                for (int i = 0; i < nw; ++i) {
                    double* pr = acc_re + i * stride + c;
                    double* pi = acc_im + i * stride + c;
                    const double uar = ua[i].real(), uai = ua[i].imag();
                    store(pr, load(pr) + (ar * uar - ai * uai));
                    store(pi, load(pi) + (ar * uai + ai * uar));
                    const lanes_t ta = ar * azr - ai * azi;
                    ai = ar * azi + ai * azr;
                    ar = ta;
                }
            }
        }
    }
}

}  // namespace xcorr::detail
