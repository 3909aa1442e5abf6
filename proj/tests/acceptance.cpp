// Acceptance suite: one self-contained check per shipped guarantee, each
// printing a single PASS/FAIL line. Exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "vlcsim/errors.hpp"
#include "vlcsim/experiments.hpp"
#include "vlcsim/montecarlo.hpp"
#include "vlcsim/optimizer.hpp"
#include "vlcsim/parallel.hpp"
#include "vlcsim/rng.hpp"

using namespace vlcsim;

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// First SNR at which the curve reaches `target` (log-linear interpolation);
/// the sweep bottom when it starts below, +inf when it never reaches it.
double snr_at_ber(const std::vector<double>& snr, const std::vector<double>& ber, double target) {
    if (ber.front() <= target) return snr.front();
    for (std::size_t i = 1; i < ber.size(); ++i) {
        if (ber[i] <= target && ber[i - 1] > target) {
            if (ber[i] <= 0.0) return snr[i];
            const double t = std::log(target / ber[i - 1]) / std::log(ber[i] / ber[i - 1]);
            return snr[i - 1] + t * (snr[i] - snr[i - 1]);
        }
    }
    return std::numeric_limits<double>::infinity();
}

/// std::stod refuses subnormal magnitudes; strtod parses them quietly.
double parse_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::vector<double> csv_column(const std::string& csv, int col, int filter_col,
                               const std::string& filter) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (filter_col >= 0 && cells[filter_col] != filter) continue;
        out.push_back(parse_double(cells[col]));
    }
    return out;
}

/// Relative drop of a curve over the top 20 dB of the sweep; 1 when it
/// reaches exact zero.
double top_sweep_decrease(const std::vector<double>& snr, const std::vector<double>& ber) {
    const double top = snr.back();
    double v_lo = ber.back(), v_hi = ber.back();
    for (std::size_t i = 0; i < snr.size(); ++i)
        if (snr[i] >= top - 20.0 - 1e-9) {
            v_lo = ber[i];
            break;
        }
    v_hi = ber.back();
    if (v_lo <= 0.0) return v_hi <= 0.0 ? 1.0 : 0.0;
    return 1.0 - v_hi / v_lo;
}

Scenario two_user_scenario() {
    Scenario sc = default_config().scenario;
    sc.ue_positions = {{2.0, 2.3, 0.85}, {3.2, 2.7, 0.85}};
    sc.ue_orientations = {{0.0, 0.0}, {30.0 * kDeg, 3.5}};
    sc.ue_fixed_azimuth = {std::nullopt, std::nullopt};
    sc.noise_std.assign(2, std::pow(10.0, -115.0 / 20.0));
    make_wall_grid(2, sc.irs_positions, sc.irs_normals, sc.room_dims.y / 2.0);
    return sc;
}

// ---------------------------------------------------------------------------

void criterion1_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario sc = two_user_scenario();
    const ChannelState state = build_channel_state(sc);

    const NomaDesign es = exhaustive_search(sc, state, 0.05, 0.25);
    const double es_fitness = union_bound_ber(es, state, sc).first_user_bound;

    GaConfig ga;
    ga.population_size = 40;
    ga.generations = 30;
    ga.restart_rounds = 3;
    ga.elite_count = 4;
    int wins = 0;
    for (int seed = 0; seed < 50; ++seed) {
        ga.seed = 1000 + seed;
        const GaRun run = ga_optimize(sc, state, ga);
        if (run.best_fitness <= 1.05 * es_fitness) ++wins;
    }
    const double secs = elapsed_s(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "ga within 1.05x of the grid optimum %.3g in %d/50 seeds, %.1f s", es_fitness,
                  wins, secs);
    report(1, "heuristic matches the grid-search oracle", wins >= 48 && secs < 120.0, detail);
}

void criterion2_bound_validity() {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario base = default_config().scenario;
    int ok_count = 0;
    double worst_excess = -1.0;
    for (int s = 0; s < 10; ++s) {
        Rng rng = make_stream(1202, {static_cast<std::uint64_t>(s)});
        Scenario sc = base;
        for (int u = 0; u < sc.num_users(); ++u) {
            sc.ue_positions[u] = {0.5 + 4.0 * uniform01(rng), 0.5 + 4.0 * uniform01(rng), 0.85};
            sc.ue_orientations[u] = {sample_polar_angle(sc.orientation_model, rng),
                                     2.0 * 3.14159265358979323846 * uniform01(rng)};
        }
        const ChannelState state = build_channel_state(sc);
        const NomaDesign design = fpa_baseline_design(state, 1.0, 0.3);

        // Operate where the rate is measurable with 1e6 symbols.
        double snr_db = 100.0;
        double bound = 0.5;
        for (; snr_db <= 150.0; snr_db += 1.0) {
            Scenario probe = sc;
            std::fill(probe.noise_std.begin(), probe.noise_std.end(),
                      std::pow(10.0, -snr_db / 20.0));
            bound = union_bound_ber(design, state, probe).first_user_bound;
            if (bound < 0.05) break;
        }
        McConfig mc;
        mc.num_symbols = 1'000'000;
        mc.seed = make_stream(1202, {0xabc, static_cast<std::uint64_t>(s)})();
        mc.transmit_snr_db = snr_db;
        const McResult r = simulate_ber(sc, design, mc);
        const int first = design.decoding_order.front();
        const double excess = r.per_user_ber[first] - bound;
        worst_excess = std::max(worst_excess, excess / r.confidence_halfwidth_95[first]);
        if (excess <= r.confidence_halfwidth_95[first]) ++ok_count;
    }
    const double secs = elapsed_s(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%d/10 scenarios inside bound+CI, worst excess %.2f CI, %.1f s", ok_count,
                  worst_excess, secs);
    report(2, "Monte Carlo never exceeds the union bound", ok_count == 10 && secs < 600.0, detail);
}

void criterion3_single_user_exactness() {
    Scenario sc = default_config().scenario;
    sc.ue_positions = {{2.5, 2.5, 0.85}};
    sc.ue_orientations = {{0.0, 0.0}};
    sc.ue_fixed_azimuth = {std::nullopt};
    sc.noise_std = {1.0};
    sc.irs_positions.clear();
    sc.irs_normals.clear();
    NomaDesign d;
    d.decoding_order = {0};
    d.power = {1.0};

    const ChannelState state = build_channel_state(sc);
    const double q = state.h_los[0];
    bool all_ok = true;
    int tested = 0;
    double worst = 0.0;
    for (double snr_db = 92.0; snr_db <= 112.0; snr_db += 2.0) {
        const double sigma = std::pow(10.0, -snr_db / 20.0);
        const double closed = q_function(q * std::sqrt(2.0) / (2.0 * sigma));
        if (closed < 1e-4) continue;
        McConfig mc;
        mc.num_symbols = 1'000'000;
        mc.seed = 4242 + static_cast<std::uint64_t>(snr_db);
        mc.transmit_snr_db = snr_db;
        const McResult r = simulate_ber(sc, d, mc);
        const double dev = std::abs(r.per_user_ber[0] - closed) / r.confidence_halfwidth_95[0];
        worst = std::max(worst, dev);
        all_ok = all_ok && dev <= 3.0;
        ++tested;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d SNR points, worst deviation %.2f CI", tested, worst);
    report(3, "single-user simulation matches the closed form", all_ok && tested >= 6, detail);
}

void criterion4_snr_sweep_shape() {
    ExperimentConfig cfg = default_config();
    cfg.strategies = {Strategy::NoIrsFpa, Strategy::FixedIrsFpa, Strategy::GaJoint};
    cfg.ga.population_size = 60;
    cfg.ga.generations = 25;
    cfg.ga.restart_rounds = 3;
    cfg.ga.elite_count = 6;

    std::vector<double> gains, no_drop, fx_drop, ga_drop;
    for (int seed = 0; seed < 5; ++seed) {
        cfg.seed = 500 + seed;
        const std::string csv = run_ber_vs_snr(cfg);
        const auto snr = cfg.snr_sweep;
        const auto no_irs = csv_column(csv, 3, 1, "no_irs_fpa");
        const auto fixed = csv_column(csv, 3, 1, "fixed_irs_fpa");
        const auto ga = csv_column(csv, 3, 1, "ga_joint");

        const double s_ga = snr_at_ber(snr, ga, 1e-2);
        const double s_fx = snr_at_ber(snr, fixed, 1e-2);
        // A baseline that never reaches 1e-2 within the sweep is credited
        // with the sweep top: the reported gain is a lower bound.
        gains.push_back((std::isinf(s_fx) ? snr.back() : s_fx) - s_ga);
        no_drop.push_back(top_sweep_decrease(snr, no_irs));
        fx_drop.push_back(top_sweep_decrease(snr, fixed));
        ga_drop.push_back(top_sweep_decrease(snr, ga));
    }
    const double med_gain = median(gains);
    const bool floors = median(no_drop) < 0.10 && median(fx_drop) < 0.10;
    const bool ga_keeps_falling = median(ga_drop) >= 0.10;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "median gain %.1f dB; top-20dB drop no_irs %.1f%%, fixed %.1f%%, ga %.1f%%",
                  med_gain, 100 * median(no_drop), 100 * median(fx_drop), 100 * median(ga_drop));
    report(4, "SNR-sweep shape: >=5 dB gain and FPA error floors",
           med_gain >= 5.0 && floors && ga_keeps_falling, detail);
}

void criterion5_restart_advantage() {
    const ExperimentConfig cfg = default_config();
    const Scenario sc = [&] {
        Scenario s = cfg.scenario;
        std::fill(s.noise_std.begin(), s.noise_std.end(), std::pow(10.0, -120.0 / 20.0));
        return s;
    }();
    const ChannelState state = build_channel_state(sc);

    GaConfig adaptive;
    adaptive.population_size = 40;
    adaptive.generations = 15;
    adaptive.restart_rounds = 4;
    adaptive.elite_count = 4;
    GaConfig plain = adaptive;
    plain.generations = adaptive.generations * adaptive.restart_rounds;
    plain.restart_rounds = 1;

    int adaptive_wins = 0;
    bool monotone = true;
    for (int seed = 0; seed < 50; ++seed) {
        adaptive.seed = 9000 + seed;
        plain.seed = 9500 + seed;
        const GaRun a = ga_optimize(sc, state, adaptive);
        const GaRun p = ga_optimize(sc, state, plain);
        if (a.best_fitness <= p.best_fitness) ++adaptive_wins;
        for (int round = 0; round < adaptive.restart_rounds; ++round)
            for (int g = round * adaptive.generations + 1; g < (round + 1) * adaptive.generations;
                 ++g)
                monotone = monotone && a.fitness_trace[g] <= a.fitness_trace[g - 1] + 1e-18;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "adaptive <= plain in %d/50 seeds, traces monotone: %s",
                  adaptive_wins, monotone ? "yes" : "no");
    report(5, "adaptive restarts beat the budget-matched plain GA", adaptive_wins >= 40 && monotone,
           detail);
}

void criterion6_blocked_los_ratio() {
    ExperimentConfig cfg = default_config();
    cfg.elements_sweep = {100};
    cfg.elements_variant = "blockage";
    cfg.strategies = {Strategy::FixedIrsFpa, Strategy::GaJoint};
    cfg.ga.population_size = 60;
    cfg.ga.generations = 25;
    cfg.ga.restart_rounds = 3;
    cfg.ga.elite_count = 6;

    std::vector<double> ratios;
    for (int seed = 0; seed < 5; ++seed) {
        cfg.seed = 600 + seed;
        const std::string csv = run_ber_vs_elements(cfg);
        const double fixed = csv_column(csv, 3, 1, "fixed_irs_fpa").front();
        const double ga = csv_column(csv, 3, 1, "ga_joint").front();
        ratios.push_back(ga > 0.0 ? fixed / ga : std::numeric_limits<double>::infinity());
    }
    const double med = median(ratios);
    char detail[96];
    std::snprintf(detail, sizeof(detail), "median fixed/ga bound ratio %.3g", med);
    report(6, "blocked-LoS optimization ratio at 100 elements", med >= 100.0, detail);
}

void criterion7_closed_forms() {
    bool ok = true;
    std::string why;

    const double m = lambertian_order(60.0 * kDeg);
    if (std::abs(m - 1.0) > 1e-12) { ok = false; why += " lambertian"; }

    const double gc = concentrator_gain(1.5, 0.0, 85.0 * kDeg);
    if (std::abs(gc - 2.26723) > 1e-5) { ok = false; why += " concentrator"; }

    const BlockageModel sparse{0.15, 1.75, 0.2, 0.85, 3.0};
    const BlockageModel dense{0.15, 1.75, 0.8, 0.85, 3.0};
    if (std::abs(blockage_probability(sparse, 2.0) - 0.048992) > 1e-6) { ok = false; why += " blockage"; }
    if (std::abs(blockage_probability(dense, 2.0) - 0.18203) > 1e-6) { ok = false; why += " blockage-dense"; }

    const OrientationModel model = OrientationModel::from_mean_std(41.39 * kDeg, 7.68 * kDeg);
    Rng rng = make_stream(7, {7});
    const int n = 1'000'000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = sample_polar_angle(model, rng);
        sum += s;
        sum_sq += s * s;
    }
    const double mean = sum / n;
    const double stddev = std::sqrt(sum_sq / n - mean * mean);
    if (std::abs(mean / kDeg - 41.39) > 0.1) { ok = false; why += " laplace-mean"; }
    if (std::abs(stddev / kDeg - 7.68) > 0.15) { ok = false; why += " laplace-std"; }

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "m=%.12f Gc=%.6f Pb=%.6f/%.6f mean=%.3f deg std=%.3f deg%s", m, gc,
                  blockage_probability(sparse, 2.0), blockage_probability(dense, 2.0), mean / kDeg,
                  stddev / kDeg, why.empty() ? "" : (" FAILED:" + why).c_str());
    report(7, "closed-form unit values", ok, detail);
}

void criterion8_determinism() {
    ExperimentConfig cfg = default_config();
    cfg.snr_sweep = {110.0, 125.0};
    cfg.elements_sweep = {0, 40};
    cfg.realizations = 10;
    cfg.ga.population_size = 24;
    cfg.ga.generations = 8;
    cfg.ga.restart_rounds = 2;
    cfg.ga.elite_count = 3;
    cfg.mc.num_symbols = 20000;
    cfg.seed = 31337;

    bool ok = true;
    std::string which;
    const std::vector<std::pair<const char*, std::function<std::string(const ExperimentConfig&)>>>
        runners = {{"ber-vs-snr", run_ber_vs_snr},
                   {"ber-vs-elements", run_ber_vs_elements},
                   {"convergence", run_convergence},
                   {"validate-bound", run_validate_bound}};
    for (const auto& [name, runner] : runners) {
        ExperimentConfig c1 = cfg;
        c1.jobs = 1;
        const std::string a = runner(c1);
        const std::string b = runner(c1);
        ExperimentConfig c8 = cfg;
        c8.jobs = 8;
        const std::string c = runner(c8);
        if (a != b || a != c) {
            ok = false;
            which += std::string(" ") + name;
        }
    }
    report(8, "byte-identical CSV across runs and worker counts", ok,
           ok ? "all four subcommands stable" : ("unstable:" + which));
}

void criterion9_repair_property() {
    Rng rng = make_stream(99, {9});
    bool ok = true;
    long long checked = 0;
    for (int i = 0; i < 100'000 && ok; ++i) {
        const int k = 1 + i % 5;
        const int n = i % 7;
        Chromosome c;
        c.order_genes.resize(k);
        for (int j = 0; j < k; ++j) c.order_genes[j] = j;
        std::shuffle(c.order_genes.begin(), c.order_genes.end(), rng);
        c.power_genes.resize(k);
        for (double& g : c.power_genes) g = (uniform01(rng) - 0.3) * 3.0;
        c.rho_genes.resize(n);
        for (double& g : c.rho_genes) g = uniform01(rng) * 2.0 - 0.5;

        const Chromosome r = repair(c);
        ok = ok && check_constraints(decode(r)).empty() && repair(r) == r;
        ++checked;
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "%lld random chromosomes repaired and idempotent",
                  checked);
    report(9, "repair always satisfies the constraints and is idempotent", ok, detail);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1_oracle_equivalence();
    criterion2_bound_validity();
    criterion3_single_user_exactness();
    criterion4_snr_sweep_shape();
    criterion5_restart_advantage();
    criterion6_blocked_los_ratio();
    criterion7_closed_forms();
    criterion8_determinism();
    criterion9_repair_property();
    std::printf("%d of 9 criteria failed, total %.1f s\n", g_failures, elapsed_s(t0));
    return g_failures;
}
