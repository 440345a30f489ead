// SPDX-License-Identifier: Apache-2.0
#include "xcorr/scene.hpp"

#include <algorithm>
#include <cmath>

#include "xcorr/errors.hpp"
#include "xcorr/random.hpp"

namespace xcorr {

namespace {

void check_velocity(const Vec3& velocity, double c0) {
    if (!is_finite(velocity)) throw GeometryError("velocity is not finite");
    if (norm(velocity) >= c0) throw GeometryError("velocity magnitude must stay below c0");
}

Vec3 unit_from(const Vec3& from, const Vec3& to, const char* what) {
    const Vec3 d = to - from;
    const double n = norm(d);
    if (n == 0.0) throw GeometryError(std::string("coincident points: ") + what);
    return d / n;
}

}  // namespace

void PhysicalConstants::validate() const {
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw DomainError("c0 must be positive");
}

void TargetTrajectory::validate(double c0) const {
    if (!is_finite(position_at_reference)) throw GeometryError("target position is not finite");
    check_velocity(velocity, c0);
    if (!std::isfinite(reflectivity)) throw DomainError("target reflectivity is not finite");
}

ReceiverArray ReceiverArray::cartesian_grid(int per_side, double spacing, double altitude,
                                            double cx, double cy) {
    if (per_side < 1) throw DomainError("cartesian grid needs at least one receiver per side");
    if (!(spacing > 0.0)) throw DomainError("cartesian grid spacing must be positive");
    ReceiverArray out;
    out.layout = ReceiverLayout::cartesian_grid;
    out.positions.reserve(static_cast<std::size_t>(per_side) * per_side);
    const double first = -0.5 * spacing * (per_side - 1);
    for (int j = 0; j < per_side; ++j) {
        for (int i = 0; i < per_side; ++i) {
            out.positions.push_back({cx + first + i * spacing, cy + first + j * spacing, altitude});
        }
    }
    return out;
}

ReceiverArray ReceiverArray::uniform_random(int count, double side, double altitude,
                                            std::uint64_t seed, double cx, double cy) {
    if (count < 1) throw DomainError("random layout needs at least one receiver");
    if (!(side > 0.0)) throw DomainError("random layout side must be positive");
    ReceiverArray out;
    out.layout = ReceiverLayout::uniform_random;
    out.seed = seed;
    random::Stream rng(seed, 0x7265636569766572ULL);
    out.positions.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double x = rng.uniform(-0.5 * side, 0.5 * side);
        const double y = rng.uniform(-0.5 * side, 0.5 * side);
        out.positions.push_back({cx + x, cy + y, altitude});
    }
    return out;
}

void ReceiverArray::validate() const {
    if (positions.size() < 2) throw DomainError("receiver array needs at least 2 receivers");
    for (const auto& p : positions) {
        if (!is_finite(p)) throw GeometryError("receiver position is not finite");
    }
    std::vector<Vec3> sorted = positions;
    std::sort(sorted.begin(), sorted.end(), [](const Vec3& a, const Vec3& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw GeometryError("receiver positions must be distinct");
    }
}

void Pulse::validate() const {
    if (!(carrier > 0.0) || !std::isfinite(carrier)) throw DomainError("carrier must be positive");
    if (!(envelope_width > 0.0) || !(envelope_width < carrier)) {
        throw DomainError("envelope width B must satisfy 0 < B < omega_0");
    }
}

std::vector<double> AcquisitionSpec::pulse_times() const {
    std::vector<double> s(static_cast<std::size_t>(std::max(pulse_count, 0)));
    const double mid = 0.5 * (pulse_count - 1);
    for (int j = 0; j < pulse_count; ++j) s[static_cast<std::size_t>(j)] = (j - mid) * pulse_interval;
    return s;
}

void AcquisitionSpec::validate() const {
    if (!(pulse_interval > 0.0)) throw DomainError("pulse interval must be positive");
    if (pulse_count < 1) throw DomainError("pulse count must be at least 1");
    if (freq_index_min > freq_index_max) throw DomainError("empty frequency index range");
    if (freq_index_min != -freq_index_max) {
        throw DomainError("frequency index range must be symmetric about 0");
    }
    if (frequency_step < 0.0) throw DomainError("frequency step must be non-negative");
}

double ImageWindow::coord_u(int iu) const {
    if (count_u == 1) return 0.0;
    return -half_extent_u + 2.0 * half_extent_u * iu / (count_u - 1);
}

double ImageWindow::coord_v(int iv) const {
    if (count_v == 1) return 0.0;
    return -half_extent_v + 2.0 * half_extent_v * iv / (count_v - 1);
}

double ImageWindow::spacing_u() const {
    return count_u > 1 ? 2.0 * half_extent_u / (count_u - 1) : 0.0;
}

double ImageWindow::spacing_v() const {
    return count_v > 1 ? 2.0 * half_extent_v / (count_v - 1) : 0.0;
}

Vec3 ImageWindow::offset(std::size_t k) const {
    if (k >= size()) throw DomainError("grid index out of range");
    const int iu = static_cast<int>(k % static_cast<std::size_t>(count_u));
    const int iv = static_cast<int>(k / static_cast<std::size_t>(count_u));
    return coord_u(iu) * axis_u + coord_v(iv) * axis_v;
}

void ImageWindow::validate() const {
    if (count_u < 1 || count_v < 1) throw DomainError("window grid counts must be >= 1");
    if (!(half_extent_u >= 0.0) || !(half_extent_v >= 0.0) || !(half_extent_normal >= 0.0)) {
        throw DomainError("window half extents must be non-negative");
    }
    if (!is_finite(center_at_reference) || !is_finite(center_velocity)) {
        throw GeometryError("window center or velocity is not finite");
    }
    constexpr double tol = 1e-12;
    if (std::abs(norm(axis_u) - 1.0) > tol || std::abs(norm(axis_v) - 1.0) > tol ||
        std::abs(dot(axis_u, axis_v)) > tol) {
        throw GeometryError("window axes must be orthonormal");
    }
}

void Scene::validate() const {
    constants.validate();
    receivers.validate();
    pulse.validate();
    acquisition.validate();
    window.validate();
    if (!is_finite(emitter.position)) throw GeometryError("emitter position is not finite");
    for (const auto& r : receivers.positions) {
        if (r == emitter.position) throw GeometryError("emitter coincides with a receiver");
    }
    for (const auto& t : targets) t.validate(constants.c0);
    check_velocity(window.center_velocity, constants.c0);
}

double doppler_factor(const Vec3& target, const Vec3& emitter, const Vec3& receiver,
                      const Vec3& velocity, double c0) {
    check_velocity(velocity, c0);
    const Vec3 u_te = unit_from(emitter, target, "target and emitter");
    const Vec3 u_tr = unit_from(receiver, target, "target and receiver");
    return 1.0 - dot(velocity / c0, u_te + u_tr);
}

double travel_time(const Vec3& target, const Vec3& emitter, const Vec3& receiver,
                   const Vec3& velocity, double c0) {
    const double gamma = doppler_factor(target, emitter, receiver, velocity, c0);
    return norm(target - emitter) / c0 + gamma * norm(target - receiver) / c0;
}

double distance_increment(const Vec3& a, const Vec3& y) {
    // |a+y|^2 - |a|^2 = 2 a.y + |y|^2, divided by the sum of the two norms.
    const double na = norm(a);
    const double nay = norm(a + y);
    const double denom = na + nay;
    if (denom == 0.0) return 0.0;
    return (2.0 * dot(a, y) + dot(y, y)) / denom;
}

double offset_delay(const Vec3& center, const Vec3& offset, const Vec3& receiver,
                    const Vec3& emitter, const Vec3& velocity, double c0) {
    const double gamma = doppler_factor(center, emitter, receiver, velocity, c0);
    return (distance_increment(center - emitter, offset) +
            gamma * distance_increment(center - receiver, offset)) /
           c0;
}

double linearized_offset_delay(const Vec3& center, const Vec3& offset, const Vec3& receiver,
                               const Vec3& emitter, const Vec3& velocity, double c0) {
    const double gamma = doppler_factor(center, emitter, receiver, velocity, c0);
    const Vec3 u_te = unit_from(emitter, center, "window center and emitter");
    const Vec3 u_tr = unit_from(receiver, center, "window center and receiver");
    return (dot(offset, u_te) + gamma * dot(offset, u_tr)) / c0;
}

GridTravelTimes grid_travel_times(const ImageWindow& window, std::size_t k, double pulse_time,
                                  const Vec3& receiver, const Vec3& emitter, const Vec3& velocity,
                                  double c0) {
    const Vec3 center = window.center_at(pulse_time);
    const Vec3 y = window.offset(k);
    const double gamma = doppler_factor(center, emitter, receiver, velocity, c0);
    GridTravelTimes out{};
    out.to_center = norm(center - emitter) / c0 + gamma * norm(center - receiver) / c0;
    const Vec3 p = center + y;
    out.to_grid_point = norm(p - emitter) / c0 + gamma * norm(p - receiver) / c0;
    out.difference = offset_delay(center, y, receiver, emitter, velocity, c0);
    return out;
}

double gamma_variation_bound(const ImageWindow& window, const Emitter& emitter,
                             const ReceiverArray& receivers, const Vec3& velocity, double c0) {
    window.validate();
    const Vec3 c = window.center_at(0.0);
    const Vec3 n = window.normal();
    std::vector<Vec3> corners;
    for (int su : {-1, 1}) {
        for (int sv : {-1, 1}) {
            for (int sn : {-1, 1}) {
                corners.push_back(c + (su * window.half_extent_u) * window.axis_u +
                                  (sv * window.half_extent_v) * window.axis_v +
                                  (sn * window.half_extent_normal) * n);
            }
        }
    }
    double worst = 0.0;
    for (const auto& r : receivers.positions) {
        const double g0 = doppler_factor(c, emitter.position, r, velocity, c0);
        for (const auto& p : corners) {
            const double g = doppler_factor(p, emitter.position, r, velocity, c0);
            worst = std::max(worst, std::abs(g / g0 - 1.0));
        }
    }
    return worst;
}

double estimate_orbital_speed(double orbit_radius) {
    if (!(orbit_radius > 0.0)) throw DomainError("orbit radius must be positive");
    if (!(orbit_radius > kEarthRadius)) throw DomainError("orbit radius must exceed the Earth radius");
    return std::sqrt(2.0 * kGravitationalConstant * kEarthMass / orbit_radius);
}

std::vector<double> frequency_grid(const Pulse& pulse, const AcquisitionSpec& spec) {
    if (spec.freq_index_min > spec.freq_index_max) throw DomainError("empty frequency index range");
    const double step = spec.frequency_step > 0.0 ? spec.frequency_step : pulse.envelope_width / 30.0;
    std::vector<double> w;
    w.reserve(spec.frequency_count());
    for (int i = spec.freq_index_min; i <= spec.freq_index_max; ++i) {
        w.push_back(pulse.carrier + i * step);
    }
    return w;
}

std::string to_string(ReceiverLayout layout) {
    switch (layout) {
        case ReceiverLayout::cartesian_grid: return "grid";
        case ReceiverLayout::uniform_random: return "uniform_random";
        case ReceiverLayout::explicit_list: return "explicit";
    }
    return "explicit";
}

ReceiverLayout receiver_layout_from_string(const std::string& name) {
    if (name == "grid") return ReceiverLayout::cartesian_grid;
    if (name == "uniform_random") return ReceiverLayout::uniform_random;
    if (name == "explicit") return ReceiverLayout::explicit_list;
    throw DomainError("unknown receiver layout '" + name + "'");
}

}  // namespace xcorr
