// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations written straight from the model definitions,
// in long double and without the library's cancellation-free rewrites. They
// share no code with the library beyond the plain data types.
#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "xcorr/forward.hpp"
#include "xcorr/scene.hpp"

namespace xcorr::testing {

using ld = long double;

inline ld norm_ld(const Vec3& a, const Vec3& b) {
    const ld dx = static_cast<ld>(a.x) - b.x, dy = static_cast<ld>(a.y) - b.y, dz = static_cast<ld>(a.z) - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// 1 - (v / c0) . (u_TE + u_TR)
inline ld doppler_oracle(const Vec3& t, const Vec3& e, const Vec3& r, const Vec3& v, ld c0) {
    const ld de = norm_ld(t, e), dr = norm_ld(t, r);
    ld s = 0;
    s += static_cast<ld>(v.x) * ((static_cast<ld>(t.x) - e.x) / de + (static_cast<ld>(t.x) - r.x) / dr);
    s += static_cast<ld>(v.y) * ((static_cast<ld>(t.y) - e.y) / de + (static_cast<ld>(t.y) - r.y) / dr);
    s += static_cast<ld>(v.z) * ((static_cast<ld>(t.z) - e.z) / de + (static_cast<ld>(t.z) - r.z) / dr);
    return 1 - s / c0;
}

// A_{R,k}(s, omega) with gamma frozen at the window center, as the pipeline
// defines it, evaluated by differencing two long-double travel times.
inline Eigen::MatrixXcd model_matrix_oracle(const Scene& scene, double pulse_time, double omega) {
    const ImageWindow& w = scene.window;
    const Vec3 center = w.center_at(pulse_time);
    const ld c0 = scene.constants.c0;
    const auto& rx = scene.receivers.positions;
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(w.size()));
    for (std::size_t r = 0; r < rx.size(); ++r) {
        const ld g = doppler_oracle(center, scene.emitter.position, rx[r], w.center_velocity, c0);
        const ld t0 = (norm_ld(center, scene.emitter.position) + g * norm_ld(center, rx[r])) / c0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const Vec3 p = center + w.offset(k);
            const ld tk = (norm_ld(p, scene.emitter.position) + g * norm_ld(p, rx[r])) / c0;
            const ld phase = static_cast<ld>(omega) * (tk - t0);
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
                std::complex<double>(static_cast<double>(std::cos(phase)), static_cast<double>(std::sin(phase)));
        }
    }
    return a;
}

// X_{kk'} = sum_{s, omega, R, R'} conj(A_{R,k}) C_{RR'} A_{R',k'} with C = u u^H,
// as a literal quadruple loop.
inline Eigen::MatrixXcd brute_force_pattern(const Scene& scene, const SignalSet& data) {
    const auto K = static_cast<Eigen::Index>(scene.window.size());
    const auto nr = static_cast<Eigen::Index>(data.receiver_count());
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(K, K);
    for (std::size_t s = 0; s < data.pulse_count(); ++s) {
        for (std::size_t w = 0; w < data.frequency_count(); ++w) {
            const Eigen::MatrixXcd a = model_matrix_oracle(scene, data.pulse_times()[s], data.frequencies()[w]);
            for (Eigen::Index k = 0; k < K; ++k) {
                for (Eigen::Index kp = 0; kp < K; ++kp) {
                    std::complex<double> acc{0.0, 0.0};
                    for (Eigen::Index r = 0; r < nr; ++r) {
                        for (Eigen::Index rp = 0; rp < nr; ++rp) {
                            const std::complex<double> c = data.at(s, static_cast<std::size_t>(r), w) *
                                                           std::conj(data.at(s, static_cast<std::size_t>(rp), w));
                            acc += std::conj(a(r, k)) * c * a(rp, kp);
                        }
                    }
                    x(k, kp) += acc;
                }
            }
        }
    }
    return x;
}

inline double relative_frobenius(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& ref) {
    return (a - ref).norm() / ref.norm();
}

}  // namespace xcorr::testing
