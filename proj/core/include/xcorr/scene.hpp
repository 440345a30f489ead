// SPDX-License-Identifier: Apache-2.0
//
// Geometry and kinematics shared by every stage: scatterer trajectories,
// the emitter and receiver array, the probing pulse, the acquisition plan and
// the moving image window. All positions live in one flat inertial frame, SI
// units throughout.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "xcorr/vec3.hpp"

namespace xcorr {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kGravitationalConstant = 6.674e-11;
inline constexpr double kEarthMass = 5.972e24;
inline constexpr double kEarthRadius = 6.371e6;

struct PhysicalConstants {
    double c0 = kSpeedOfLight;
    void validate() const;
};

struct TargetTrajectory {
    Vec3 position_at_reference;  // position at slow time s = 0
    Vec3 velocity;
    double reflectivity = 1.0;

    Vec3 position_at(double s) const { return position_at_reference + s * velocity; }
    void validate(double c0 = kSpeedOfLight) const;
};

enum class ReceiverLayout { cartesian_grid, uniform_random, explicit_list };

struct ReceiverArray {
    std::vector<Vec3> positions;
    ReceiverLayout layout = ReceiverLayout::explicit_list;
    std::uint64_t seed = 0;  // meaningful for uniform_random only

    // per_side x per_side points, `spacing` apart, centered on (cx, cy).
    static ReceiverArray cartesian_grid(int per_side, double spacing, double altitude,
                                        double cx = 0.0, double cy = 0.0);
    // `count` points uniform over a side x side square centered on (cx, cy).
    static ReceiverArray uniform_random(int count, double side, double altitude,
                                        std::uint64_t seed, double cx = 0.0, double cy = 0.0);

    std::size_t size() const { return positions.size(); }
    void validate() const;
};

struct Emitter {
    Vec3 position;
};

struct Pulse {
    double carrier = 0.0;         // omega_0, rad/s
    double envelope_width = 0.0;  // B, rad/s
    void validate() const;
};

struct AcquisitionSpec {
    double pulse_interval = 0.015;  // seconds between pulses
    int pulse_count = 1;
    int freq_index_min = -90;
    int freq_index_max = 90;
    double frequency_step = 0.0;  // rad/s; the paper uses B/30

    std::size_t frequency_count() const {
        return static_cast<std::size_t>(freq_index_max - freq_index_min + 1);
    }
    // Slow times of the pulses, centered on s = 0.
    std::vector<double> pulse_times() const;
    void validate() const;
};

// Planar search grid riding on the estimated window-center trajectory
// x_L(s) = center_at_reference + s * center_velocity.
//
// Grid points are indexed k = iv * count_u + iu (u fastest). With count n > 1
// the coordinates along an axis run from -half_extent to +half_extent in n
// equal steps; n = 1 puts the single sample at 0.
struct ImageWindow {
    Vec3 center_at_reference;
    Vec3 center_velocity;
    Vec3 axis_u{1.0, 0.0, 0.0};
    Vec3 axis_v{0.0, 1.0, 0.0};
    double half_extent_u = 0.2;
    double half_extent_v = 0.2;
    int count_u = 41;
    int count_v = 41;
    // Half thickness along axis_u x axis_v. It does not add grid points; it
    // only widens the corner set examined by gamma_variation_bound.
    double half_extent_normal = 0.0;

    Vec3 center_at(double s) const { return center_at_reference + s * center_velocity; }
    std::size_t size() const { return static_cast<std::size_t>(count_u) * count_v; }
    std::size_t index(int iu, int iv) const { return static_cast<std::size_t>(iv) * count_u + iu; }
    double coord_u(int iu) const;
    double coord_v(int iv) const;
    double spacing_u() const;
    double spacing_v() const;
    // In-frame offset y_k of grid point k from the window center.
    Vec3 offset(std::size_t k) const;
    Vec3 normal() const { return cross(axis_u, axis_v); }
    void validate() const;
};

struct Scene {
    Emitter emitter;
    ReceiverArray receivers;
    std::vector<TargetTrajectory> targets;
    Pulse pulse;
    AcquisitionSpec acquisition;
    ImageWindow window;
    PhysicalConstants constants;

    void validate() const;
};

// gamma_R = 1 - (v/c0) . (u_TE + u_TR) with u_TE, u_TR the unit vectors from
// emitter and receiver toward the target.
double doppler_factor(const Vec3& target, const Vec3& emitter, const Vec3& receiver,
                      const Vec3& velocity, double c0 = kSpeedOfLight);

// t_R = |x_T - x_E| / c0 + gamma_R |x_T - x_R| / c0
double travel_time(const Vec3& target, const Vec3& emitter, const Vec3& receiver,
                   const Vec3& velocity, double c0 = kSpeedOfLight);

// |a + y| - |a| without cancellation, for |y| << |a|.
double distance_increment(const Vec3& a, const Vec3& y);

struct GridTravelTimes {
    double to_grid_point;  // t_R^k(s)
    double to_center;      // t_R(s)
    double difference;     // t_R^k(s) - t_R(s), evaluated without cancellation
};

// Travel times to grid point k and to the window center at slow time s. The
// Doppler factor is frozen at the window center x_L(s): the pipeline works in
// the Doppler-compensated window frame where one gamma_R per receiver and
// pulse rescales the whole window.
GridTravelTimes grid_travel_times(const ImageWindow& window, std::size_t k, double pulse_time,
                                  const Vec3& receiver, const Vec3& emitter, const Vec3& velocity,
                                  double c0 = kSpeedOfLight);

// Same as grid_travel_times().difference for an arbitrary in-frame offset.
double offset_delay(const Vec3& center, const Vec3& offset, const Vec3& receiver,
                    const Vec3& emitter, const Vec3& velocity, double c0 = kSpeedOfLight);

// First-order offset delay (1/c0) y . (u_TE + gamma u_TR), the plane-wave
// linearization about the window center.
double linearized_offset_delay(const Vec3& center, const Vec3& offset, const Vec3& receiver,
                               const Vec3& emitter, const Vec3& velocity,
                               double c0 = kSpeedOfLight);

// max over receivers and window corners of |gamma(corner) / gamma(center) - 1|
// at s = 0.
double gamma_variation_bound(const ImageWindow& window, const Emitter& emitter,
                             const ReceiverArray& receivers, const Vec3& velocity,
                             double c0 = kSpeedOfLight);

// sqrt(2 G M_earth / R), as the orbital speed estimate is written. Note this
// is the escape speed; the circular speed lacks the factor 2.
double estimate_orbital_speed(double orbit_radius);

// omega_i = omega_0 + i * frequency_step for i in [freq_index_min, freq_index_max].
std::vector<double> frequency_grid(const Pulse& pulse, const AcquisitionSpec& spec);

std::string to_string(ReceiverLayout layout);
ReceiverLayout receiver_layout_from_string(const std::string& name);

}  // namespace xcorr
