// SPDX-License-Identifier: Apache-2.0
#include "xcorr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "xcorr/errors.hpp"
#include "xcorr/parallel.hpp"

namespace xcorr {

namespace {

// r e^{i theta} for any sign of r; std::polar requires r >= 0.
std::complex<double> scaled_phase(double r, double theta) {
    return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

double sinc(double x) {
    // Below this |x| the Taylor series x^2/6 term already rounds away.
    if (std::abs(x) < 1e-8) return 1.0;
    return std::sin(x) / x;
}

void PsfModel::validate() const {
    if (!(array_diameter > 0.0) || !(target_height > 0.0) || !(omega > 0.0) || !(c0 > 0.0)) {
        throw DomainError("PSF model needs positive a, H, omega and c0");
    }
    if (!is_finite(synthetic_aperture) || !is_finite(emitter_direction) || !is_finite(look_direction)) {
        throw DomainError("PSF model vectors must be finite");
    }
}

double PsfModel::wavelength() const { return 2.0 * std::numbers::pi * c0 / omega; }

double PsfModel::array_resolution() const { return wavelength() * target_height / array_diameter; }

double PsfModel::aperture_resolution() const {
    const double s = norm(synthetic_aperture);
    if (s == 0.0) throw DomainError("zero synthetic aperture has no resolution");
    return wavelength() * target_height / (2.0 * s);
}

Eigen::VectorXcd psf_exact(const ImageWindow& window, const std::vector<Vec3>& receivers,
                           const Emitter& emitter, double pulse_time, double omega,
                           const Vec3& scatterer_offset, double c0) {
    window.validate();
    if (receivers.empty()) throw DomainError("PSF needs at least one receiver");
    const Vec3 center = window.center_at(pulse_time);
    const Vec3& v = window.center_velocity;
    const auto K = static_cast<Eigen::Index>(window.size());
    std::vector<double> ref(receivers.size());
    for (std::size_t r = 0; r < receivers.size(); ++r) {
        ref[r] = offset_delay(center, scatterer_offset, receivers[r], emitter.position, v, c0);
    }
    Eigen::VectorXcd out(K);
    parallel_for(static_cast<std::size_t>(K), [&](std::size_t k) {
        const Vec3 y = window.offset(k);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t r = 0; r < receivers.size(); ++r) {
            const double dt = offset_delay(center, y, receivers[r], emitter.position, v, c0) - ref[r];
            acc += std::polar(1.0, omega * dt);
        }
        out[static_cast<Eigen::Index>(k)] = acc;
    });
    return out;
}

std::complex<double> psf_sinc_approx(const PsfModel& m, const Vec3& d) {
    const double k = m.omega / m.c0;
    const double scale = k * m.array_diameter / (2.0 * m.target_height);
    const double a2 = m.array_diameter * m.array_diameter;
    return scaled_phase(a2 * sinc(scale * d.x) * sinc(scale * d.y), k * dot(m.look_direction, d));
}

Eigen::VectorXcd psf_sinc_approx(const PsfModel& model, const std::vector<Vec3>& offsets) {
    model.validate();
    Eigen::VectorXcd out(static_cast<Eigen::Index>(offsets.size()));
    for (std::size_t i = 0; i < offsets.size(); ++i) out[static_cast<Eigen::Index>(i)] = psf_sinc_approx(model, offsets[i]);
    return out;
}

namespace {

std::complex<double> interference_sum(const PsfModel& model, const std::vector<PointScatterer>& scatterers,
                                      const Vec3& x, const Vec3& y, const std::vector<double>& omegas,
                                      const std::vector<double>& weights) {
    const std::vector<double> w_list = omegas.empty() ? std::vector<double>{model.omega} : omegas;
    const double aperture = norm(model.synthetic_aperture);
    // The slow-time integral gives S sinc(...). The prefactor used here is
    // |v_T S| instead, which differs by the constant |v_T|.
    std::complex<double> total{0.0, 0.0};
    for (std::size_t f = 0; f < w_list.size(); ++f) {
        PsfModel m = model;
        m.omega = w_list[f];
        const double k = m.omega / m.c0;
        const double weight = weights.empty() ? 1.0 : weights[f];
        std::complex<double> acc{0.0, 0.0};
        for (const auto& si : scatterers) {
            const Vec3 dx = x - si.offset;
            const std::complex<double> bx = psf_sinc_approx(m, dx);
            for (const auto& sj : scatterers) {
                const Vec3 dy = y - sj.offset;
                const Vec3 d = dx - dy;
                const double slow = aperture > 0.0
                                        ? aperture * sinc(k * dot(m.synthetic_aperture, d) / m.target_height)
                                        : 1.0;
                acc += si.reflectivity * sj.reflectivity * scaled_phase(slow, k * dot(m.emitter_direction, d)) *
                       bx * std::conj(psf_sinc_approx(m, dy));
            }
        }
        total += weight * acc;
    }
    return total;
}

}  // namespace

std::complex<double> interference_approx(const PsfModel& model,
                                         const std::vector<PointScatterer>& scatterers,
                                         const Vec3& x, const Vec3& y,
                                         const std::vector<double>& omegas,
                                         const std::vector<double>& weights) {
    model.validate();
    if (!weights.empty() && weights.size() != omegas.size()) throw DomainError("one weight per frequency");
    // The (i, j) term at (x, y) is the conjugate of the (j, i) term at (y, x),
    // but the sums round differently. Evaluating one orientation and
    // conjugating makes the result Hermitian to the last bit.
    const auto key = [](const Vec3& p) { return std::tie(p.x, p.y, p.z); };
    if (key(x) == key(y)) return {interference_sum(model, scatterers, x, y, omegas, weights).real(), 0.0};
    if (key(y) < key(x)) return std::conj(interference_sum(model, scatterers, y, x, omegas, weights));
    return interference_sum(model, scatterers, x, y, omegas, weights);
}

PsfModel psf_model_for(const ImageWindow& window, const Emitter& emitter,
                       const std::vector<Vec3>& receivers, double array_diameter, double omega,
                       double c0) {
    if (receivers.empty()) throw DomainError("PSF model needs receivers");
    Vec3 centroid;
    for (const Vec3& r : receivers) centroid += r;
    centroid = centroid / static_cast<double>(receivers.size());
    const Vec3 look = window.center_at_reference - centroid;
    const Vec3 from_emitter = window.center_at_reference - emitter.position;
    PsfModel m;
    m.array_diameter = array_diameter;
    m.target_height = norm(look);
    m.omega = omega;
    m.look_direction = look / norm(look);
    m.emitter_direction = from_emitter / norm(from_emitter);
    m.c0 = c0;
    m.validate();
    return m;
}

PsfComparison compare_psf(const ImageWindow& window, const std::vector<Vec3>& receivers,
                          const Emitter& emitter, const PsfModel& model, double pulse_time) {
    model.validate();
    const double nr = static_cast<double>(receivers.size());
    const double a2 = model.array_diameter * model.array_diameter;
    PsfComparison out;
    out.predicted_null = model.array_resolution();
    out.exact = psf_exact(window, receivers, emitter, pulse_time, model.omega, Vec3{}, model.c0).cwiseAbs() / nr;
    out.approx.resize(out.exact.size());
    for (int iv = 0; iv < window.count_v; ++iv) {
        for (int iu = 0; iu < window.count_u; ++iu) {
            const auto k = static_cast<Eigen::Index>(window.index(iu, iv));
            const Vec3 d{window.coord_u(iu), window.coord_v(iv), 0.0};
            out.approx[k] = std::abs(psf_sinc_approx(model, d)) / a2;
            if (std::abs(d.x) < out.predicted_null && std::abs(d.y) < out.predicted_null) {
                out.main_lobe_discrepancy = std::max(out.main_lobe_discrepancy, std::abs(out.exact[k] - out.approx[k]));
                ++out.main_lobe_points;
            }
        }
    }

    const Vec3 center = window.center_at(pulse_time);
    const Vec3& v = window.center_velocity;
    const auto exact_at = [&](const Vec3& y) {
        std::complex<double> acc{0.0, 0.0};
        for (const Vec3& r : receivers) {
            acc += std::polar(1.0, model.omega * offset_delay(center, y, r, emitter.position, v, model.c0));
        }
        return std::abs(acc);
    };
    const double step = out.predicted_null / 64.0;
    out.exact_null_u = first_null([&](double t) { return exact_at(t * window.axis_u); }, step, 3.0 * out.predicted_null);
    out.exact_null_v = first_null([&](double t) { return exact_at(t * window.axis_v); }, step, 3.0 * out.predicted_null);
    return out;
}

double first_null(const std::function<double(double)>& magnitude, double step, double max_distance) {
    if (!(step > 0.0) || !(max_distance > step)) throw DomainError("invalid null search range");
    double f0 = magnitude(0.0);
    double f1 = magnitude(step);
    const auto steps = static_cast<long>(std::floor(max_distance / step));
    for (long i = 2; i <= steps; ++i) {
        const double t = static_cast<double>(i) * step;
        const double f2 = magnitude(t);
        if (f1 <= f0 && f1 < f2) {
            // Vertex of the parabola through (t - 2h, f0), (t - h, f1), (t, f2).
            const double denom = f0 - 2.0 * f1 + f2;
            const double shift = denom > 0.0 ? 0.5 * (f0 - f2) / denom : 0.0;
            return t - step + shift * step;
        }
        f0 = f1;
        f1 = f2;
    }
    return -1.0;
}

}  // namespace xcorr
