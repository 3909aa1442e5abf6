#include "vlcsim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "vlcsim/errors.hpp"

namespace vlcsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMinDistance = 1e-9;
}  // namespace

double Scenario::horizontal_distance(int user) const {
    const Vec3 d = ue_positions[user] - led_position;
    return std::sqrt(d.x * d.x + d.y * d.y);
}

double lambertian_order(double half_intensity_angle) {
    if (half_intensity_angle <= 0.0 || half_intensity_angle >= kPi / 2.0)
        throw std::domain_error("lambertian_order: half-intensity angle must be in (0, pi/2)");
    return -1.0 / std::log2(std::cos(half_intensity_angle));
}

double concentrator_gain(double refractive_index, double incidence, double fov) {
    if (fov <= 0.0 || fov > kPi / 2.0)
        throw std::domain_error("concentrator_gain: field of view must be in (0, pi/2]");
    if (incidence < 0.0 || incidence > fov) return 0.0;
    const double s = std::sin(fov);
    return refractive_index * refractive_index / (s * s);
}

double los_gain(const Scenario& sc, int user, bool blocked) {
    if (blocked) return 0.0;

    const Vec3 to_ue = sc.ue_positions[user] - sc.led_position;
    const double d = norm(to_ue);
    if (d < kMinDistance) throw std::domain_error("los_gain: user coincides with the luminaire");

    const double cos_irr = cos_angle_between(to_ue, sc.led_normal);
    const Vec3 n_pd = pd_normal(sc.ue_orientations[user]);
    const double cos_inc = cos_angle_between(-to_ue, n_pd);
    if (cos_irr <= 0.0 || cos_inc <= 0.0) return 0.0;

    const double incidence = std::acos(std::min(1.0, cos_inc));
    const double gc = concentrator_gain(sc.refractive_index, incidence, sc.fov);
    if (gc == 0.0) return 0.0;

    const double m = lambertian_order(sc.half_intensity_angle);
    const double v = sc.pd_area * (m + 1.0) / (2.0 * kPi * d * d) * sc.filter_gain * gc;
    return v * std::pow(cos_irr, m) * cos_inc;
}

double reflected_gain(const Scenario& sc, int user, int element) {
    const Vec3 led_to_el = sc.irs_positions[element] - sc.led_position;
    const Vec3 ue_to_el = sc.irs_positions[element] - sc.ue_positions[user];
    const double d1 = norm(led_to_el);
    const double d2 = norm(ue_to_el);
    if (d1 < kMinDistance || d2 < kMinDistance)
        throw std::domain_error("reflected_gain: degenerate element distance");

    const double cos_irr = cos_angle_between(led_to_el, sc.led_normal);
    const Vec3 n_pd = pd_normal(sc.ue_orientations[user]);
    const double cos_inc = cos_angle_between(ue_to_el, n_pd);
    if (cos_irr <= 0.0 || cos_inc <= 0.0) return 0.0;

    const double incidence = std::acos(std::min(1.0, cos_inc));
    const double gc = concentrator_gain(sc.refractive_index, incidence, sc.fov);
    if (gc == 0.0) return 0.0;

    const double m = lambertian_order(sc.half_intensity_angle);
    const double dsum = d1 + d2;
    const double v = sc.pd_area * (m + 1.0) / (2.0 * kPi * dsum * dsum) * sc.filter_gain * gc;
    return v * std::pow(cos_irr, m) * cos_inc;
}

double combined_gain(const ChannelState& state, const std::vector<double>& rho, int user) {
    if (static_cast<int>(rho.size()) != state.num_elements)
        throw ConstraintError({"reflection vector length mismatch"});
    double q = state.h_los[user];
    for (int n = 0; n < state.num_elements; ++n) {
        if (rho[n] < 0.0 || rho[n] > 1.0)
            throw ConstraintError({"reflection coefficient outside [0, 1]"});
        q += rho[n] * state.ref(user, n);
    }
    return q;
}

ChannelState build_channel_state(const Scenario& sc, const std::vector<std::uint8_t>& los_blocked) {
    const int k = sc.num_users();
    const int n = sc.num_elements();
    ChannelState st;
    st.num_users = k;
    st.num_elements = n;
    st.los_blocked = los_blocked;
    st.h_los.resize(k);
    st.h_ref.resize(static_cast<std::size_t>(k) * n);
    for (int u = 0; u < k; ++u) {
        st.h_los[u] = los_gain(sc, u, los_blocked[u] != 0);
        for (int e = 0; e < n; ++e) st.h_ref[u * n + e] = reflected_gain(sc, u, e);
    }
    return st;
}

ChannelState build_channel_state(const Scenario& sc) {
    return build_channel_state(sc, std::vector<std::uint8_t>(sc.num_users(), 0));
}

void make_wall_grid(int num_elements, std::vector<Vec3>& positions, std::vector<Vec3>& normals,
                    double wall_center_y) {
    positions.clear();
    normals.clear();
    if (num_elements <= 0) return;
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(num_elements))));
    const double spacing = 0.1;
    for (int idx = 0; idx < num_elements; ++idx) {
        const int row = idx / cols;
        const int col = idx % cols;
        const double y = wall_center_y + (col - (cols - 1) / 2.0) * spacing;
        const double z = 1.05 + row * spacing;
        positions.push_back({0.0, y, z});
        normals.push_back({1.0, 0.0, 0.0});
    }
}

}  // namespace vlcsim
