// SPDX-License-Identifier: Apache-2.0
//
// Received-signal synthesis. The frequency-domain model (model matrix A and
// data u = xi A rho) feeds the imaging pipeline; the exact time-domain Born
// model exists to validate it.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xcorr/scene.hpp"

namespace xcorr {

using cplx = std::complex<double>;

enum class AmplitudeMode {
    unit,      // xi = 1
    spectral,  // xi = omega^2 fhat(omega)
    full,      // xi = omega^2 fhat(omega) / (4 pi |x_L(s) - x_R|)^2
};

std::string to_string(AmplitudeMode mode);
AmplitudeMode amplitude_mode_from_string(const std::string& name);

// What a SignalSet needs to know about the scene that produced it so that it
// can be migrated without the Scene itself.
struct AcquisitionGeometry {
    Emitter emitter;
    std::vector<Vec3> receivers;
    double c0 = kSpeedOfLight;
};

// Frequency-domain samples u_R(s, omega), stored [pulse][receiver][frequency]
// with frequency fastest.
class SignalSet {
public:
    SignalSet() = default;
    SignalSet(AcquisitionGeometry geometry, std::vector<double> pulse_times,
              std::vector<double> frequencies);

    std::size_t pulse_count() const { return pulse_times_.size(); }
    std::size_t receiver_count() const { return geometry_.receivers.size(); }
    std::size_t frequency_count() const { return frequencies_.size(); }
    std::size_t sample_count() const { return data_.size(); }

    cplx& at(std::size_t s, std::size_t r, std::size_t w) { return data_[offset(s, r, w)]; }
    const cplx& at(std::size_t s, std::size_t r, std::size_t w) const { return data_[offset(s, r, w)]; }
    // Contiguous frequency samples of one (pulse, receiver) pair.
    cplx* trace(std::size_t s, std::size_t r) { return data_.data() + offset(s, r, 0); }
    const cplx* trace(std::size_t s, std::size_t r) const { return data_.data() + offset(s, r, 0); }
    // The receiver vector u(s, omega) as an N_R column.
    Eigen::VectorXcd receiver_vector(std::size_t s, std::size_t w) const;

    const std::vector<double>& pulse_times() const { return pulse_times_; }
    const std::vector<double>& frequencies() const { return frequencies_; }
    const AcquisitionGeometry& geometry() const { return geometry_; }
    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    // Non-fatal findings made during synthesis, e.g. targets leaving the window.
    std::vector<std::string> warnings;

    void validate() const;

private:
    std::size_t offset(std::size_t s, std::size_t r, std::size_t w) const {
        return (s * receiver_count() + r) * frequency_count() + w;
    }

    AcquisitionGeometry geometry_;
    std::vector<double> pulse_times_;
    std::vector<double> frequencies_;
    std::vector<cplx> data_;
};

struct NoiseSpec {
    // +infinity means noiseless.
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;

    bool noiseless() const { return snr_db == std::numeric_limits<double>::infinity(); }
};

// Fourier transform of cos(omega_0 t) exp(-B^2 t^2 / 2) with the convention
// fhat(omega) = int f(t) exp(+i omega t) dt. The pulse is real and even, so the
// transform is real.
double pulse_spectrum(const Pulse& pulse, double omega);

// Offset delays t_R^k(s) - t_R(s) for every receiver and grid point, N_R x K.
Eigen::MatrixXd offset_delays(const ImageWindow& window, double pulse_time,
                              const std::vector<Vec3>& receivers, const Emitter& emitter,
                              const Vec3& velocity, double c0 = kSpeedOfLight);

// A_{R,k}(s, omega) = exp(i omega (t_R^k(s) - t_R(s))), N_R x K.
Eigen::MatrixXcd model_matrix(const ImageWindow& window, double pulse_time, double omega,
                              const std::vector<Vec3>& receivers, const Emitter& emitter,
                              const Vec3& velocity, double c0 = kSpeedOfLight);

// u(s, omega) = xi(omega, s) A(s, omega) rho. Each target contributes through
// its own in-frame offset x_T(s) - x_L(s), so targets need not sit on grid
// points. The window velocity sets the frame's Doppler factors.
SignalSet synthesize_frequency_data(const Scene& scene, AmplitudeMode amplitude = AmplitudeMode::unit);

// Adds circular complex Gaussian noise with variance
// mean(|u|^2) 10^(-snr_db / 10). Draws come from one counter-based stream per
// (pulse, receiver), so the result depends on the seed only.
SignalSet add_noise(const SignalSet& data, const NoiseSpec& noise);

}  // namespace xcorr
