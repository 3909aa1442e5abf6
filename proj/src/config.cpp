#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "vlcsim/experiments.hpp"

namespace vlcsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail("unknown key " + path + "." + it.key());
}

double get_number(const json& obj, const std::string& path, const std::string& key, double dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number()) fail("key " + path + "." + key + " must be a number");
    return obj[key].get<double>();
}

long long get_integer(const json& obj, const std::string& path, const std::string& key,
                      long long dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number_integer()) fail("key " + path + "." + key + " must be an integer");
    return obj[key].get<long long>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key, bool dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_boolean()) fail("key " + path + "." + key + " must be a boolean");
    return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_string()) fail("key " + path + "." + key + " must be a string");
    return obj[key].get<std::string>();
}

Vec3 get_vec3(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number())
        fail(where + " must be an array of three numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

void validate_scenario(const Scenario& sc) {
    if (sc.num_users() < 1) fail("invalid: need at least one user");
    if (sc.half_intensity_angle <= 0.0 || sc.half_intensity_angle >= kPi / 2.0)
        fail("invalid: half-intensity angle must be in (0, 90) degrees");
    if (sc.fov <= 0.0 || sc.fov > kPi / 2.0) fail("invalid: field of view must be in (0, 90] degrees");
    if (sc.pd_area <= 0.0) fail("invalid: photodiode area must be positive");
    if (sc.refractive_index < 1.0) fail("invalid: refractive index must be >= 1");
    if (sc.filter_gain <= 0.0) fail("invalid: filter gain must be positive");
    if (std::abs(sc.led_position.z - sc.room_dims.z) > 1e-9)
        fail("invalid: luminaire must sit on the ceiling plane");
    auto inside = [&](const Vec3& p) {
        return p.x >= 0.0 && p.x <= sc.room_dims.x && p.y >= 0.0 && p.y <= sc.room_dims.y &&
               p.z >= 0.0 && p.z <= sc.room_dims.z;
    };
    if (!inside(sc.led_position)) fail("invalid: luminaire outside the room");
    for (const Vec3& p : sc.ue_positions)
        if (!inside(p)) fail("invalid: user position outside the room");
    for (const Vec3& p : sc.irs_positions)
        if (!inside(p)) fail("invalid: reflecting element outside the room");
    if (sc.irs_positions.size() != sc.irs_normals.size())
        fail("invalid: element positions and normals disagree");
    for (double s : sc.noise_std)
        if (s <= 0.0) fail("invalid: noise std must be positive");
    const BlockageModel& b = sc.blockage_model;
    if (!(b.ue_height > 0.0 && b.ue_height < b.blocker_height && b.blocker_height <= b.led_height))
        fail("invalid: blocker heights must satisfy 0 < ue < blocker <= luminaire");
    if (b.blocker_radius <= 0.0) fail("invalid: blocker radius must be positive");
    if (b.blocker_density < 0.0) fail("invalid: blocker density must be non-negative");
    if (sc.modulation_order < 2) fail("invalid: modulation order must be at least 2");
    for (const Orientation& o : sc.ue_orientations)
        if (o.polar < 0.0 || o.polar > kPi) fail("invalid: polar angle must be in [0, 180] degrees");
}

}  // namespace

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::NoIrsFpa: return "no_irs_fpa";
        case Strategy::FixedIrsFpa: return "fixed_irs_fpa";
        case Strategy::GaJoint: return "ga_joint";
        case Strategy::EsOracle: return "es_oracle";
    }
    return "?";
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    Scenario& sc = cfg.scenario;

    sc.room_dims = {5.0, 5.0, 3.0};
    sc.led_position = {2.5, 2.5, 3.0};
    sc.led_normal = {0.0, 0.0, -1.0};
    sc.half_intensity_angle = 60.0 * kDeg;
    sc.fov = 85.0 * kDeg;
    sc.pd_area = 1.0e-4;
    sc.refractive_index = 1.5;
    sc.filter_gain = 1.0;
    sc.modulation_order = 2;

    make_wall_grid(100, sc.irs_positions, sc.irs_normals, sc.room_dims.y / 2.0);

    // One user upright below the luminaire (never blocked, the horizontal
    // distance is zero) and two users tilted toward the luminaire so that the
    // reflector wall falls behind their field of view.
    sc.ue_positions = {{2.5, 2.5, 0.85}, {1.4, 2.2, 0.85}, {1.4, 2.8, 0.85}};
    sc.ue_orientations = {{0.0, 0.0},
                          {45.0 * kDeg, std::atan2(2.5 - 2.2, 2.5 - 1.4)},
                          {45.0 * kDeg, std::atan2(2.5 - 2.8, 2.5 - 1.4) + 2.0 * kPi}};
    sc.ue_fixed_azimuth = {std::nullopt, std::nullopt, std::nullopt};

    sc.orientation_model = OrientationModel::from_mean_std(41.39 * kDeg, 7.68 * kDeg);
    sc.blockage_model = {0.15, 1.75, 0.8, 0.85, sc.room_dims.z};

    const double sigma = std::pow(10.0, -cfg.transmit_snr_db / 20.0);
    sc.noise_std.assign(sc.ue_positions.size(), sigma);

    for (double snr = 100.0; snr <= 140.0 + 1e-9; snr += 5.0) cfg.snr_sweep.push_back(snr);
    cfg.elements_sweep = {0, 20, 40, 60, 80, 100};

    cfg.ga.population_size = 100;
    cfg.ga.generations = 50;
    cfg.ga.restart_rounds = 5;
    cfg.ga.crossover_prob = 0.9;
    cfg.ga.mutation_prob = 0.05;
    cfg.ga.elite_count = 10;
    cfg.ga.max_time_s = 60.0;

    cfg.mc.num_symbols = 0;  // bound-only rows unless enabled
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("file not found: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(std::string("parse error: ") + e.what());
    }
    if (!root.is_object()) fail("top level must be an object");

    ExperimentConfig cfg = default_config();
    Scenario& sc = cfg.scenario;

    check_keys(root, "$",
               {"seed", "jobs", "output", "room", "led", "pd", "modulation_order",
                "transmit_snr_db", "users", "noise_std", "orientation_model", "blockage", "irs",
                "noma", "ga", "mc", "es", "sweep", "strategies", "elements_variant",
                "realizations"});

    cfg.seed = static_cast<std::uint64_t>(get_integer(root, "$", "seed", 1));
    cfg.jobs = static_cast<int>(get_integer(root, "$", "jobs", 0));
    cfg.output_path = get_string(root, "$", "output", cfg.output_path);
    cfg.transmit_snr_db = get_number(root, "$", "transmit_snr_db", cfg.transmit_snr_db);
    sc.modulation_order = static_cast<int>(get_integer(root, "$", "modulation_order", 2));
    cfg.realizations = static_cast<int>(get_integer(root, "$", "realizations", cfg.realizations));
    cfg.elements_variant = get_string(root, "$", "elements_variant", cfg.elements_variant);
    if (cfg.elements_variant != "blockage" && cfg.elements_variant != "orientation")
        fail("elements_variant must be \"blockage\" or \"orientation\"");
    if (cfg.realizations < 1) fail("realizations must be >= 1");

    if (root.contains("room")) {
        const json& r = root["room"];
        check_keys(r, "room", {"width", "depth", "height"});
        sc.room_dims = {get_number(r, "room", "width", sc.room_dims.x),
                        get_number(r, "room", "depth", sc.room_dims.y),
                        get_number(r, "room", "height", sc.room_dims.z)};
        sc.led_position = {sc.room_dims.x / 2.0, sc.room_dims.y / 2.0, sc.room_dims.z};
        sc.blockage_model.led_height = sc.room_dims.z;
    }
    if (root.contains("led")) {
        const json& l = root["led"];
        check_keys(l, "led", {"position", "normal", "half_intensity_angle_deg"});
        if (l.contains("position")) sc.led_position = get_vec3(l["position"], "led.position");
        if (l.contains("normal")) sc.led_normal = get_vec3(l["normal"], "led.normal");
        sc.half_intensity_angle =
            get_number(l, "led", "half_intensity_angle_deg", sc.half_intensity_angle / kDeg) * kDeg;
        sc.blockage_model.led_height = sc.led_position.z;
    }
    if (root.contains("pd")) {
        const json& p = root["pd"];
        check_keys(p, "pd", {"area_cm2", "fov_deg", "refractive_index", "filter_gain"});
        sc.pd_area = get_number(p, "pd", "area_cm2", sc.pd_area * 1e4) * 1e-4;
        sc.fov = get_number(p, "pd", "fov_deg", sc.fov / kDeg) * kDeg;
        sc.refractive_index = get_number(p, "pd", "refractive_index", sc.refractive_index);
        sc.filter_gain = get_number(p, "pd", "filter_gain", sc.filter_gain);
    }
    if (root.contains("users")) {
        if (!root["users"].is_array() || root["users"].empty())
            fail("users must be a non-empty array");
        sc.ue_positions.clear();
        sc.ue_orientations.clear();
        sc.ue_fixed_azimuth.clear();
        int idx = 0;
        for (const json& u : root["users"]) {
            const std::string p = "users[" + std::to_string(idx++) + "]";
            if (!u.is_object()) fail(p + " must be an object");
            check_keys(u, p, {"position", "polar_deg", "azimuth_deg", "resample_azimuth_deg"});
            if (!u.contains("position")) fail(p + ".position is required");
            sc.ue_positions.push_back(get_vec3(u["position"], p + ".position"));
            sc.ue_orientations.push_back({get_number(u, p, "polar_deg", 0.0) * kDeg,
                                          get_number(u, p, "azimuth_deg", 0.0) * kDeg});
            if (u.contains("resample_azimuth_deg"))
                sc.ue_fixed_azimuth.push_back(get_number(u, p, "resample_azimuth_deg", 0.0) * kDeg);
            else
                sc.ue_fixed_azimuth.push_back(std::nullopt);
        }
    }
    if (root.contains("orientation_model")) {
        const json& o = root["orientation_model"];
        check_keys(o, "orientation_model", {"mean_polar_deg", "std_polar_deg"});
        sc.orientation_model = OrientationModel::from_mean_std(
            get_number(o, "orientation_model", "mean_polar_deg", 41.39) * kDeg,
            get_number(o, "orientation_model", "std_polar_deg", 7.68) * kDeg);
    }
    if (root.contains("blockage")) {
        const json& b = root["blockage"];
        check_keys(b, "blockage", {"radius_m", "height_m", "density_per_m2", "ue_height_m"});
        BlockageModel& bm = sc.blockage_model;
        bm.blocker_radius = get_number(b, "blockage", "radius_m", bm.blocker_radius);
        bm.blocker_height = get_number(b, "blockage", "height_m", bm.blocker_height);
        bm.blocker_density = get_number(b, "blockage", "density_per_m2", bm.blocker_density);
        bm.ue_height = get_number(b, "blockage", "ue_height_m", bm.ue_height);
    }
    if (root.contains("irs")) {
        const json& i = root["irs"];
        check_keys(i, "irs", {"num_elements", "elements"});
        if (i.contains("elements")) {
            if (!i["elements"].is_array()) fail("irs.elements must be an array");
            sc.irs_positions.clear();
            sc.irs_normals.clear();
            int idx = 0;
            for (const json& e : i["elements"]) {
                const std::string p = "irs.elements[" + std::to_string(idx++) + "]";
                if (!e.is_object()) fail(p + " must be an object");
                check_keys(e, p, {"position", "normal"});
                if (!e.contains("position") || !e.contains("normal"))
                    fail(p + " needs position and normal");
                sc.irs_positions.push_back(get_vec3(e["position"], p + ".position"));
                sc.irs_normals.push_back(get_vec3(e["normal"], p + ".normal"));
            }
        } else {
            const int n = static_cast<int>(get_integer(i, "irs", "num_elements", 100));
            if (n < 0) fail("irs.num_elements must be >= 0");
            make_wall_grid(n, sc.irs_positions, sc.irs_normals, sc.room_dims.y / 2.0);
        }
    }
    if (root.contains("noma")) {
        const json& nm = root["noma"];
        check_keys(nm, "noma", {"fpa_alpha"});
        cfg.fpa_alpha = get_number(nm, "noma", "fpa_alpha", cfg.fpa_alpha);
        if (cfg.fpa_alpha <= 0.0 || cfg.fpa_alpha >= 1.0) fail("noma.fpa_alpha must be in (0, 1)");
    }
    if (root.contains("ga")) {
        const json& g = root["ga"];
        check_keys(g, "ga",
                   {"population_size", "generations", "restart_rounds", "crossover_prob",
                    "mutation_prob", "elite_count", "max_time_s"});
        GaConfig& ga = cfg.ga;
        ga.population_size = static_cast<int>(get_integer(g, "ga", "population_size", ga.population_size));
        ga.generations = static_cast<int>(get_integer(g, "ga", "generations", ga.generations));
        ga.restart_rounds = static_cast<int>(get_integer(g, "ga", "restart_rounds", ga.restart_rounds));
        ga.crossover_prob = get_number(g, "ga", "crossover_prob", ga.crossover_prob);
        ga.mutation_prob = get_number(g, "ga", "mutation_prob", ga.mutation_prob);
        ga.elite_count = static_cast<int>(get_integer(g, "ga", "elite_count", ga.elite_count));
        ga.max_time_s = get_number(g, "ga", "max_time_s", ga.max_time_s);
        if (ga.crossover_prob < 0.0 || ga.crossover_prob > 1.0 || ga.mutation_prob < 0.0 ||
            ga.mutation_prob > 1.0)
            fail("ga probabilities must be in [0, 1]");
    }
    if (root.contains("mc")) {
        const json& m = root["mc"];
        check_keys(m, "mc", {"num_symbols", "resample_orientation", "resample_blockage"});
        cfg.mc.num_symbols = get_integer(m, "mc", "num_symbols", cfg.mc.num_symbols);
        cfg.mc.resample_orientation =
            get_bool(m, "mc", "resample_orientation", cfg.mc.resample_orientation);
        cfg.mc.resample_blockage = get_bool(m, "mc", "resample_blockage", cfg.mc.resample_blockage);
        if (cfg.mc.num_symbols < 0) fail("mc.num_symbols must be >= 0");
    }
    if (root.contains("es")) {
        const json& e = root["es"];
        check_keys(e, "es", {"power_step", "rho_step", "eval_cap"});
        cfg.es.power_step = get_number(e, "es", "power_step", cfg.es.power_step);
        cfg.es.rho_step = get_number(e, "es", "rho_step", cfg.es.rho_step);
        cfg.es.eval_cap = get_number(e, "es", "eval_cap", cfg.es.eval_cap);
    }
    if (root.contains("sweep")) {
        const json& s = root["sweep"];
        check_keys(s, "sweep", {"snr_db", "num_elements"});
        if (s.contains("snr_db")) {
            if (!s["snr_db"].is_array() || s["snr_db"].empty())
                fail("sweep.snr_db must be a non-empty array");
            cfg.snr_sweep.clear();
            for (const json& v : s["snr_db"]) {
                if (!v.is_number()) fail("sweep.snr_db entries must be numbers");
                cfg.snr_sweep.push_back(v.get<double>());
            }
        }
        if (s.contains("num_elements")) {
            if (!s["num_elements"].is_array() || s["num_elements"].empty())
                fail("sweep.num_elements must be a non-empty array");
            cfg.elements_sweep.clear();
            for (const json& v : s["num_elements"]) {
                if (!v.is_number_integer()) fail("sweep.num_elements entries must be integers");
                cfg.elements_sweep.push_back(v.get<int>());
            }
        }
    }
    for (std::size_t i = 1; i < cfg.snr_sweep.size(); ++i)
        if (cfg.snr_sweep[i] <= cfg.snr_sweep[i - 1]) fail("sweep.snr_db must be strictly increasing");
    for (std::size_t i = 1; i < cfg.elements_sweep.size(); ++i)
        if (cfg.elements_sweep[i] <= cfg.elements_sweep[i - 1])
            fail("sweep.num_elements must be strictly increasing");
    if (!cfg.elements_sweep.empty() && cfg.elements_sweep.front() < 0)
        fail("sweep.num_elements entries must be >= 0");

    if (root.contains("strategies")) {
        if (!root["strategies"].is_array() || root["strategies"].empty())
            fail("strategies must be a non-empty array");
        cfg.strategies.clear();
        for (const json& v : root["strategies"]) {
            if (!v.is_string()) fail("strategies entries must be strings");
            const std::string name = v.get<std::string>();
            if (name == "no_irs_fpa")
                cfg.strategies.push_back(Strategy::NoIrsFpa);
            else if (name == "fixed_irs_fpa")
                cfg.strategies.push_back(Strategy::FixedIrsFpa);
            else if (name == "ga_joint")
                cfg.strategies.push_back(Strategy::GaJoint);
            else if (name == "es_oracle")
                cfg.strategies.push_back(Strategy::EsOracle);
            else
                fail("unknown strategy \"" + name + "\"");
        }
    }

    // Noise: explicit per-user values win over the transmit-SNR convention.
    const double sigma = std::pow(10.0, -cfg.transmit_snr_db / 20.0);
    sc.noise_std.assign(sc.ue_positions.size(), sigma);
    if (root.contains("noise_std")) {
        const json& ns = root["noise_std"];
        if (!ns.is_array() || ns.size() != sc.ue_positions.size())
            fail("noise_std must be an array with one entry per user");
        sc.noise_std.clear();
        for (const json& v : ns) {
            if (!v.is_number()) fail("noise_std entries must be numbers");
            sc.noise_std.push_back(v.get<double>());
        }
    }
    if (sc.ue_orientations.size() != sc.ue_positions.size() ||
        sc.ue_fixed_azimuth.size() != sc.ue_positions.size())
        fail("internal: per-user arrays out of sync");

    validate_scenario(sc);
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace vlcsim
