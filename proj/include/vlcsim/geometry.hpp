#pragma once

#include "vlcsim/rng.hpp"
#include "vlcsim/vec3.hpp"

namespace vlcsim {

/// Photodiode orientation in spherical coordinates: polar angle from the
/// vertical axis and azimuth from the positive x axis.
struct Orientation {
    double polar{0.0};    // radians, [0, pi]
    double azimuth{0.0};  // radians, [0, 2*pi)
};

/// Laplace model for the polar angle of a handheld device. The scale is
/// tied to the standard deviation by scale = std / sqrt(2).
struct OrientationModel {
    double mean_polar{0.0};
    double scale{0.0};

    static OrientationModel from_mean_std(double mean, double stddev);
    double stddev() const;
};

/// Human blockers as cylinders of radius `blocker_radius` and height
/// `blocker_height`, dropped as a Poisson field of density `blocker_density`.
struct BlockageModel {
    double blocker_radius{0.0};   // meters
    double blocker_height{0.0};   // meters
    double blocker_density{0.0};  // blockers per m^2
    double ue_height{0.0};        // meters
    double led_height{0.0};       // meters
};

/// Cosine of the angle between a propagation direction and a surface normal.
/// Both vectors are normalized internally; the sign is preserved so that a
/// negative result means the direction points away from the surface.
double cos_angle_between(const Vec3& direction, const Vec3& normal);

/// Unit normal of the photodiode plane for the given orientation.
Vec3 pd_normal(const Orientation& o);

/// Draw a polar angle from the Laplace model, clamped to [0, pi/2].
double sample_polar_angle(const OrientationModel& model, Rng& rng);

/// Average probability that the line of sight at horizontal distance
/// `r_ue` from the luminaire is blocked.
double blockage_probability(const BlockageModel& model, double r_ue);

/// Bernoulli draw with the blockage probability above; true = blocked.
bool sample_blockage(const BlockageModel& model, double r_ue, Rng& rng);

}  // namespace vlcsim
