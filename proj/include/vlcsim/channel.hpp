#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vlcsim/geometry.hpp"
#include "vlcsim/vec3.hpp"

namespace vlcsim {

/// Immutable world description: room, luminaire, photodiodes, reflecting
/// elements, users, noise levels and the stochastic channel models.
struct Scenario {
    Vec3 room_dims{5.0, 5.0, 3.0};
    Vec3 led_position{2.5, 2.5, 3.0};
    Vec3 led_normal{0.0, 0.0, -1.0};

    double half_intensity_angle{0.0};  // radians, (0, pi/2)
    double pd_area{0.0};               // m^2
    double fov{0.0};                   // radians, (0, pi/2]
    double refractive_index{1.0};
    double filter_gain{1.0};

    std::vector<Vec3> irs_positions;
    std::vector<Vec3> irs_normals;

    std::vector<Vec3> ue_positions;
    std::vector<Orientation> ue_orientations;
    /// Per-user azimuth override used when orientations are redrawn; users
    /// without an override get a uniform azimuth.
    std::vector<std::optional<double>> ue_fixed_azimuth;

    std::vector<double> noise_std;  // per user, same units as the received signal

    OrientationModel orientation_model;
    BlockageModel blockage_model;

    int modulation_order{2};

    int num_users() const { return static_cast<int>(ue_positions.size()); }
    int num_elements() const { return static_cast<int>(irs_positions.size()); }

    /// Horizontal distance between a user and the luminaire (blockage geometry).
    double horizontal_distance(int user) const;
};

/// Snapshot of the link for one orientation/blockage realization.
struct ChannelState {
    std::vector<double> h_los;        // per user
    std::vector<double> h_ref;        // K x N row-major
    std::vector<std::uint8_t> los_blocked;

    int num_users{0};
    int num_elements{0};

    double ref(int user, int element) const { return h_ref[user * num_elements + element]; }
};

/// Lambertian order from the half-intensity angle, -1/log2(cos(phi_half)).
double lambertian_order(double half_intensity_angle);

/// Optical concentrator gain: n^2/sin^2(fov) inside the field of view, else 0.
double concentrator_gain(double refractive_index, double incidence, double fov);

/// Line-of-sight channel gain for one user. Returns 0 when blocked, when the
/// incidence falls outside the field of view, or when either surface faces away.
double los_gain(const Scenario& sc, int user, bool blocked);

/// Cascaded gain of the path through one reflecting element (unit
/// reflectivity; the tunable coefficient is applied in combined_gain).
double reflected_gain(const Scenario& sc, int user, int element);

/// Combined gain h_los[k] + sum_n rho[n] * h_ref[k][n]. Throws ConstraintError
/// if rho is the wrong length or leaves [0, 1].
double combined_gain(const ChannelState& state, const std::vector<double>& rho, int user);

/// Evaluate every gain of the scenario under the given blockage pattern.
ChannelState build_channel_state(const Scenario& sc, const std::vector<std::uint8_t>& los_blocked);
ChannelState build_channel_state(const Scenario& sc);

/// Near-square grid of reflecting elements on the x = 0 wall, 0.1 m spacing,
/// centered on y = wall_center_y, rows starting at z = 1.05 m. Normals point
/// into the room.
void make_wall_grid(int num_elements, std::vector<Vec3>& positions, std::vector<Vec3>& normals,
                    double wall_center_y = 2.5);

}  // namespace vlcsim
