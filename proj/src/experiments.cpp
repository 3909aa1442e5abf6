#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "vlcsim/experiments.hpp"
#include "vlcsim/parallel.hpp"
#include "vlcsim/rng.hpp"

namespace vlcsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double sigma_from_snr(double snr_db) { return std::pow(10.0, -snr_db / 20.0); }

Scenario at_snr(const Scenario& sc, double snr_db) {
    Scenario out = sc;
    std::fill(out.noise_std.begin(), out.noise_std.end(), sigma_from_snr(snr_db));
    return out;
}

/// Exact mixture over line-of-sight blockage outcomes. Users at zero
/// horizontal distance have zero blockage probability and are skipped.
struct BlockagePattern {
    std::vector<std::uint8_t> blocked;
    double probability;
};

std::vector<BlockagePattern> blockage_patterns(const Scenario& sc) {
    const int k = sc.num_users();
    std::vector<double> pb(k);
    std::vector<int> random_users;
    for (int u = 0; u < k; ++u) {
        pb[u] = blockage_probability(sc.blockage_model, sc.horizontal_distance(u));
        if (pb[u] > 0.0) random_users.push_back(u);
    }
    if (random_users.size() > 20)
        throw std::runtime_error("blockage mixture: too many blockable users to enumerate");
    std::vector<BlockagePattern> patterns;
    const int combos = 1 << random_users.size();
    for (int mask = 0; mask < combos; ++mask) {
        BlockagePattern pat;
        pat.blocked.assign(k, 0);
        pat.probability = 1.0;
        for (std::size_t i = 0; i < random_users.size(); ++i) {
            const int u = random_users[i];
            if (mask & (1 << i)) {
                pat.blocked[u] = 1;
                pat.probability *= pb[u];
            } else {
                pat.probability *= 1.0 - pb[u];
            }
        }
        patterns.push_back(std::move(pat));
    }
    return patterns;
}

NomaDesign ga_design(const Scenario& sc, const ChannelState& state, const ExperimentConfig& cfg,
                     std::uint64_t seed) {
    GaConfig ga = cfg.ga;
    ga.seed = seed;
    ga.warm_starts = {fpa_baseline_design(state, 1.0, cfg.fpa_alpha),
                      fpa_baseline_design(state, 0.0, cfg.fpa_alpha)};
    return ga_optimize(sc, state, ga).best_design;
}

NomaDesign strategy_design(Strategy s, const Scenario& sc, const ChannelState& state,
                           const ExperimentConfig& cfg, std::uint64_t ga_seed) {
    switch (s) {
        case Strategy::NoIrsFpa: return fpa_baseline_design(state, 0.0, cfg.fpa_alpha);
        case Strategy::FixedIrsFpa: return fpa_baseline_design(state, 1.0, cfg.fpa_alpha);
        case Strategy::GaJoint: return ga_design(sc, state, cfg, ga_seed);
        case Strategy::EsOracle:
            return exhaustive_search(sc, state, cfg.es.power_step, cfg.es.rho_step,
                                     cfg.es.eval_cap);
    }
    throw std::logic_error("unknown strategy");
}

double first_user_bound(const NomaDesign& d, const ChannelState& state, const Scenario& sc) {
    return union_bound_ber(d, state, sc).first_user_bound;
}

int effective_jobs(const ExperimentConfig& cfg) {
    return cfg.jobs > 0 ? cfg.jobs : default_jobs();
}

struct OrientationDraw {
    std::vector<Orientation> orientations;
};

/// Common random numbers: realization r uses the same draw for every element
/// count and every strategy.
std::vector<OrientationDraw> draw_orientations(const Scenario& sc, int count, std::uint64_t seed) {
    std::vector<OrientationDraw> draws(count);
    for (int r = 0; r < count; ++r) {
        Rng rng = make_stream(seed, {0x6f72, static_cast<std::uint64_t>(r)});
        draws[r].orientations.resize(sc.num_users());
        for (int u = 0; u < sc.num_users(); ++u) {
            draws[r].orientations[u].polar = sample_polar_angle(sc.orientation_model, rng);
            draws[r].orientations[u].azimuth =
                sc.ue_fixed_azimuth[u] ? *sc.ue_fixed_azimuth[u] : 2.0 * kPi * uniform01(rng);
        }
    }
    return draws;
}

}  // namespace

NomaDesign fpa_baseline_design(const ChannelState& state, double rho_value, double alpha) {
    const int k = state.num_users;
    NomaDesign d;
    d.rho.assign(state.num_elements, rho_value);
    std::vector<double> q(k);
    for (int u = 0; u < k; ++u) q[u] = combined_gain(state, d.rho, u);
    d.decoding_order.resize(k);
    std::iota(d.decoding_order.begin(), d.decoding_order.end(), 0);
    std::stable_sort(d.decoding_order.begin(), d.decoding_order.end(),
                     [&](int a, int b) { return q[a] < q[b]; });
    const std::vector<double> profile = fpa_power_allocation(k, alpha);
    d.power.assign(k, 0.0);
    for (int i = 0; i < k; ++i) d.power[d.decoding_order[i]] = profile[i];
    return d;
}

std::string run_ber_vs_snr(const ExperimentConfig& cfg) {
    if (cfg.snr_sweep.empty()) throw std::invalid_argument("ber-vs-snr: sweep.snr_db is empty");
    const auto patterns = blockage_patterns(cfg.scenario);

    // Gains do not depend on the noise level, so states are shared across SNR.
    std::vector<ChannelState> pattern_states(patterns.size());
    for (std::size_t p = 0; p < patterns.size(); ++p)
        pattern_states[p] = build_channel_state(cfg.scenario, patterns[p].blocked);
    const ChannelState base_state = build_channel_state(cfg.scenario);

    const int n_snr = static_cast<int>(cfg.snr_sweep.size());
    const int n_strat = static_cast<int>(cfg.strategies.size());
    std::vector<double> bound(n_snr * n_strat, 0.0);
    struct McCell {
        double ber{0.0}, ci{0.0};
        int censored{0};
    };
    std::vector<McCell> mc_cells(cfg.mc.num_symbols > 0 ? n_snr * n_strat : 0);

    parallel_for(effective_jobs(cfg), n_snr, [&](int si) {
        const Scenario sc_snr = at_snr(cfg.scenario, cfg.snr_sweep[si]);
        for (int st = 0; st < n_strat; ++st) {
            double acc = 0.0;
            for (std::size_t p = 0; p < patterns.size(); ++p) {
                const NomaDesign d = strategy_design(
                    cfg.strategies[st], sc_snr, pattern_states[p], cfg,
                    make_stream(cfg.seed, {0xf3, static_cast<std::uint64_t>(si),
                                           static_cast<std::uint64_t>(st),
                                           static_cast<std::uint64_t>(p)})());
                acc += patterns[p].probability * first_user_bound(d, pattern_states[p], sc_snr);
            }
            bound[si * n_strat + st] = acc;

            if (cfg.mc.num_symbols > 0) {
                const NomaDesign d = strategy_design(
                    cfg.strategies[st], sc_snr, base_state, cfg,
                    make_stream(cfg.seed, {0xf3c, static_cast<std::uint64_t>(si),
                                           static_cast<std::uint64_t>(st)})());
                McConfig mc = cfg.mc;
                mc.seed = make_stream(cfg.seed, {0xf3d, static_cast<std::uint64_t>(si),
                                                 static_cast<std::uint64_t>(st)})();
                mc.transmit_snr_db = cfg.snr_sweep[si];
                const McResult r = simulate_ber(cfg.scenario, d, mc);
                const int first = d.decoding_order.front();
                mc_cells[si * n_strat + st] = {r.per_user_ber[first],
                                               r.confidence_halfwidth_95[first],
                                               r.censored[first] ? 1 : 0};
            }
        }
    });

    std::string csv = "snr_db,strategy,method,ber,ci_halfwidth,censored\n";
    for (int si = 0; si < n_snr; ++si)
        for (int st = 0; st < n_strat; ++st) {
            csv += fmt(cfg.snr_sweep[si]) + "," + strategy_name(cfg.strategies[st]) + ",bound," +
                   fmt(bound[si * n_strat + st]) + ",0,0\n";
            if (cfg.mc.num_symbols > 0) {
                const McCell& c = mc_cells[si * n_strat + st];
                csv += fmt(cfg.snr_sweep[si]) + "," + strategy_name(cfg.strategies[st]) + ",mc," +
                       fmt(c.ber) + "," + fmt(c.ci) + "," + std::to_string(c.censored) + "\n";
            }
        }
    return csv;
}

std::string run_ber_vs_elements(const ExperimentConfig& cfg) {
    if (cfg.elements_sweep.empty())
        throw std::invalid_argument("ber-vs-elements: sweep.num_elements is empty");
    const bool orientation_variant = cfg.elements_variant == "orientation";
    const Scenario base = at_snr(cfg.scenario, cfg.transmit_snr_db);

    // In the blocked-LoS variant every realization is the same deterministic
    // channel, so a single evaluation carries the average.
    const int n_real = orientation_variant ? cfg.realizations : 1;
    const auto draws = orientation_variant
                           ? draw_orientations(base, n_real, cfg.seed)
                           : std::vector<OrientationDraw>{};

    const int n_el = static_cast<int>(cfg.elements_sweep.size());
    const int n_strat = static_cast<int>(cfg.strategies.size());
    std::vector<double> mean_bound(n_el * n_strat, 0.0);

    parallel_for(effective_jobs(cfg), n_el, [&](int ni) {
        Scenario sc_n = base;
        make_wall_grid(cfg.elements_sweep[ni], sc_n.irs_positions, sc_n.irs_normals,
                       sc_n.room_dims.y / 2.0);
        for (int r = 0; r < n_real; ++r) {
            Scenario sc_r = sc_n;
            std::vector<std::uint8_t> blocked(sc_r.num_users(), 0);
            if (orientation_variant)
                sc_r.ue_orientations = draws[r].orientations;
            else
                std::fill(blocked.begin(), blocked.end(), 1);
            const ChannelState state = build_channel_state(sc_r, blocked);
            for (int st = 0; st < n_strat; ++st) {
                const NomaDesign d = strategy_design(
                    cfg.strategies[st], sc_r, state, cfg,
                    make_stream(cfg.seed, {0xf5a, static_cast<std::uint64_t>(ni),
                                           static_cast<std::uint64_t>(st),
                                           static_cast<std::uint64_t>(r)})());
                mean_bound[ni * n_strat + st] += first_user_bound(d, state, sc_r) / n_real;
            }
        }
    });

    std::string csv = "n_elements,strategy,variant,mean_ber\n";
    for (int ni = 0; ni < n_el; ++ni)
        for (int st = 0; st < n_strat; ++st)
            csv += std::to_string(cfg.elements_sweep[ni]) + "," +
                   strategy_name(cfg.strategies[st]) + "," + cfg.elements_variant + "," +
                   fmt(mean_bound[ni * n_strat + st]) + "\n";
    return csv;
}

std::string run_convergence(const ExperimentConfig& cfg) {
    const Scenario sc = at_snr(cfg.scenario, cfg.transmit_snr_db);
    const ChannelState state = build_channel_state(sc);

    GaConfig adaptive = cfg.ga;
    adaptive.seed = make_stream(cfg.seed, {0xf4, 0})();
    adaptive.warm_starts = {fpa_baseline_design(state, 1.0, cfg.fpa_alpha),
                            fpa_baseline_design(state, 0.0, cfg.fpa_alpha)};
    GaConfig plain = adaptive;
    plain.generations = cfg.ga.generations * cfg.ga.restart_rounds;  // budget-matched
    plain.restart_rounds = 1;
    plain.seed = make_stream(cfg.seed, {0xf4, 1})();

    const GaRun run_a = ga_optimize(sc, state, adaptive);
    const GaRun run_p = ga_optimize(sc, state, plain);

    std::string csv = "algorithm,generation,best_fitness,restart_flag\n";
    auto emit = [&](const char* name, const GaRun& run) {
        for (std::size_t g = 0; g < run.fitness_trace.size(); ++g) {
            const bool restart =
                std::find(run.restart_markers.begin(), run.restart_markers.end(),
                          static_cast<int>(g)) != run.restart_markers.end();
            csv += std::string(name) + "," + std::to_string(g) + "," + fmt(run.fitness_trace[g]) +
                   "," + (restart ? "1" : "0") + "\n";
        }
    };
    emit("adaptive_restart", run_a);
    emit("plain", run_p);
    return csv;
}

std::string run_validate_bound(const ExperimentConfig& cfg) {
    if (cfg.snr_sweep.empty()) throw std::invalid_argument("validate-bound: sweep.snr_db is empty");
    McConfig mc_base = cfg.mc;
    if (mc_base.num_symbols <= 0) mc_base.num_symbols = 100000;

    const ChannelState state = build_channel_state(cfg.scenario);
    const int n_snr = static_cast<int>(cfg.snr_sweep.size());
    const int n_strat = static_cast<int>(cfg.strategies.size());
    const int k = cfg.scenario.num_users();

    struct Cell {
        std::vector<double> bound, mc_ber, mc_ser, ci;
        std::vector<int> censored;
    };
    std::vector<Cell> cells(n_snr * n_strat);

    parallel_for(effective_jobs(cfg), n_snr, [&](int si) {
        const Scenario sc_snr = at_snr(cfg.scenario, cfg.snr_sweep[si]);
        for (int st = 0; st < n_strat; ++st) {
            const NomaDesign d = strategy_design(
                cfg.strategies[st], sc_snr, state, cfg,
                make_stream(cfg.seed, {0xf6, static_cast<std::uint64_t>(si),
                                       static_cast<std::uint64_t>(st)})());
            const ObjectiveReport rep = union_bound_ber(d, state, sc_snr);
            McConfig mc = mc_base;
            mc.seed = make_stream(cfg.seed, {0xf6c, static_cast<std::uint64_t>(si),
                                             static_cast<std::uint64_t>(st)})();
            mc.transmit_snr_db = cfg.snr_sweep[si];
            const McResult r = simulate_ber(cfg.scenario, d, mc);
            Cell& c = cells[si * n_strat + st];
            c.bound = rep.per_user_bounds;
            c.mc_ber = r.per_user_ber;
            c.mc_ser = r.per_user_ser;
            c.ci = r.confidence_halfwidth_95;
            c.censored.assign(k, 0);
            for (int u = 0; u < k; ++u) c.censored[u] = r.censored[u] ? 1 : 0;
        }
    });

    std::string csv = "snr_db,strategy,user,bound,mc_ber,mc_ser,ci_halfwidth,censored\n";
    for (int si = 0; si < n_snr; ++si)
        for (int st = 0; st < n_strat; ++st) {
            const Cell& c = cells[si * n_strat + st];
            for (int u = 0; u < k; ++u)
                csv += fmt(cfg.snr_sweep[si]) + "," + strategy_name(cfg.strategies[st]) + "," +
                       std::to_string(u) + "," + fmt(c.bound[u]) + "," + fmt(c.mc_ber[u]) + "," +
                       fmt(c.mc_ser[u]) + "," + fmt(c.ci[u]) + "," + std::to_string(c.censored[u]) +
                       "\n";
        }
    return csv;
}

}  // namespace vlcsim
