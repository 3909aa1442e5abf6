#include "vlcsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vlcsim {

OrientationModel OrientationModel::from_mean_std(double mean, double stddev) {
    if (stddev <= 0.0) throw std::domain_error("orientation model: stddev must be positive");
    return {mean, stddev / std::sqrt(2.0)};
}

double OrientationModel::stddev() const { return scale * std::sqrt(2.0); }

double cos_angle_between(const Vec3& direction, const Vec3& normal) {
    const double dn = norm(direction);
    const double nn = norm(normal);
    if (dn < 1e-12 || nn < 1e-12)
        throw std::domain_error("cos_angle_between: zero-length vector");
    return dot(direction, normal) / (dn * nn);
}

Vec3 pd_normal(const Orientation& o) {
    const double st = std::sin(o.polar);
    return {st * std::cos(o.azimuth), st * std::sin(o.azimuth), std::cos(o.polar)};
}

double sample_polar_angle(const OrientationModel& model, Rng& rng) {
    // Inverse-CDF draw: u in (-1/2, 1/2), x = mu - b*sgn(u)*ln(1 - 2|u|).
    double u = uniform01(rng) - 0.5;
    double mag = std::log(1.0 - 2.0 * std::abs(u));
    double theta = model.mean_polar + (u < 0.0 ? model.scale * mag : -model.scale * mag);
    return std::clamp(theta, 0.0, std::acos(-1.0) / 2.0);
}

double blockage_probability(const BlockageModel& model, double r_ue) {
    if (model.led_height <= model.ue_height)
        throw std::domain_error("blockage model: luminaire must be above the UE plane");
    if (r_ue < 0.0) throw std::domain_error("blockage probability: negative distance");
    const double c0 = 2.0 * model.blocker_radius * model.blocker_density *
                      (model.blocker_height - model.ue_height) /
                      (model.led_height - model.ue_height);
    return 1.0 - std::exp(-c0 * r_ue);
}

bool sample_blockage(const BlockageModel& model, double r_ue, Rng& rng) {
    const double p = blockage_probability(model, r_ue);
    return uniform01(rng) < p;
}

}  // namespace vlcsim
