#include "vlcsim/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vlcsim/errors.hpp"
#include "vlcsim/rng.hpp"

namespace vlcsim {

NomaDesign decode(const Chromosome& c) {
    return {c.order_genes, c.power_genes, c.rho_genes};
}

Chromosome encode(const NomaDesign& d) {
    return {d.decoding_order, d.power, d.rho};
}

namespace {

bool is_permutation_of_users(const std::vector<int>& order) {
    const int k = static_cast<int>(order.size());
    std::vector<char> seen(k, 0);
    for (int u : order) {
        if (u < 0 || u >= k || seen[u]) return false;
        seen[u] = 1;
    }
    return true;
}

std::vector<int> rank_permutation(const std::vector<int>& genes) {
    std::vector<int> idx(genes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return genes[a] < genes[b]; });
    return idx;
}

}  // namespace

Chromosome repair(const Chromosome& c) {
    if (is_permutation_of_users(c.order_genes) &&
        c.order_genes.size() == c.power_genes.size() &&
        check_constraints(decode(c)).empty())
        return c;

    Chromosome out = c;
    if (!is_permutation_of_users(out.order_genes))
        out.order_genes = rank_permutation(out.order_genes);
    const int k = static_cast<int>(out.order_genes.size());

    for (double& r : out.rho_genes) r = std::clamp(r, 0.0, 1.0);

    // Largest power magnitude goes to the first decoding position; a minimum
    // gap keeps the strict ordering after normalization.
    std::vector<double> mags(k);
    for (int i = 0; i < k; ++i) mags[i] = std::abs(out.power_genes.size() > static_cast<std::size_t>(i)
                                                        ? out.power_genes[i]
                                                        : 0.0);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    mags[k - 1] = std::max(mags[k - 1], kPowerGap);
    for (int i = k - 2; i >= 0; --i) mags[i] = std::max(mags[i], mags[i + 1] + kPowerGap);
    double sum_sq = 0.0;
    for (double m : mags) sum_sq += m * m;
    const double inv = 1.0 / std::sqrt(sum_sq);
    out.power_genes.assign(k, 0.0);
    for (int i = 0; i < k; ++i) out.power_genes[out.order_genes[i]] = mags[i] * inv;
    return out;
}

namespace {

struct Evaluated {
    Chromosome chromosome;
    double fitness{0.0};
};

class GaContext {
public:
    GaContext(const Scenario& sc, const ChannelState& state, const GaConfig& cfg)
        : sc_(sc), state_(state), cfg_(cfg), rng_(make_stream(cfg.seed, {0x6761})) {}

    double evaluate(const Chromosome& c) {
        ++evaluations_;
        return union_bound_ber(decode(c), state_, sc_).first_user_bound;
    }

    Chromosome random_chromosome() {
        const int k = state_.num_users;
        const int n = state_.num_elements;
        Chromosome c;
        c.order_genes.resize(k);
        std::iota(c.order_genes.begin(), c.order_genes.end(), 0);
        std::shuffle(c.order_genes.begin(), c.order_genes.end(), rng_);
        c.power_genes.resize(k);
        for (double& g : c.power_genes) g = uniform01(rng_);
        c.rho_genes.resize(n);
        for (double& g : c.rho_genes) g = uniform01(rng_);
        return repair(c);
    }

    int tournament(const std::vector<Evaluated>& pop) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(pop.size()) - 1);
        const int a = pick(rng_);
        const int b = pick(rng_);
        return pop[a].fitness <= pop[b].fitness ? a : b;
    }

    /// Order crossover for the permutation part, uniform arithmetic blend for
    /// the continuous parts.
    std::pair<Chromosome, Chromosome> crossover(const Chromosome& p1, const Chromosome& p2) {
        const int k = static_cast<int>(p1.order_genes.size());
        Chromosome c1 = p1, c2 = p2;
        if (k > 1) {
            std::uniform_int_distribution<int> cut(0, k - 1);
            int a = cut(rng_), b = cut(rng_);
            if (a > b) std::swap(a, b);
            c1.order_genes = ox_child(p1.order_genes, p2.order_genes, a, b);
            c2.order_genes = ox_child(p2.order_genes, p1.order_genes, a, b);
        }
        blend(p1.power_genes, p2.power_genes, c1.power_genes, c2.power_genes);
        blend(p1.rho_genes, p2.rho_genes, c1.rho_genes, c2.rho_genes);
        return {std::move(c1), std::move(c2)};
    }

    void mutate(Chromosome& c) {
        const int k = static_cast<int>(c.order_genes.size());
        if (k > 1 && uniform01(rng_) < cfg_.mutation_prob) {
            std::uniform_int_distribution<int> pick(0, k - 1);
            std::swap(c.order_genes[pick(rng_)], c.order_genes[pick(rng_)]);
        }
        std::normal_distribution<double> bump(0.0, 0.1);
        for (double& g : c.power_genes)
            if (uniform01(rng_) < cfg_.mutation_prob) g += bump(rng_);
        for (double& g : c.rho_genes)
            if (uniform01(rng_) < cfg_.mutation_prob) g = std::clamp(g + bump(rng_), 0.0, 1.0);
    }

    double crossover_roll() { return uniform01(rng_); }
    long long evaluations() const { return evaluations_; }

private:
    std::vector<int> ox_child(const std::vector<int>& keep, const std::vector<int>& fill, int a,
                              int b) {
        const int k = static_cast<int>(keep.size());
        std::vector<int> child(k, -1);
        std::vector<char> used(k, 0);
        for (int i = a; i <= b; ++i) {
            child[i] = keep[i];
            used[keep[i]] = 1;
        }
        int w = (b + 1) % k;
        for (int i = 0; i < k; ++i) {
            const int v = fill[(b + 1 + i) % k];
            if (!used[v]) {
                child[w] = v;
                w = (w + 1) % k;
            }
        }
        return child;
    }

    void blend(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& o1,
               std::vector<double>& o2) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double u = uniform01(rng_);
            o1[i] = u * a[i] + (1.0 - u) * b[i];
            o2[i] = (1.0 - u) * a[i] + u * b[i];
        }
    }

    const Scenario& sc_;
    const ChannelState& state_;
    const GaConfig& cfg_;
    Rng rng_;
    long long evaluations_{0};
};

void sort_by_fitness(std::vector<Evaluated>& pop) {
    std::stable_sort(pop.begin(), pop.end(),
                     [](const Evaluated& a, const Evaluated& b) { return a.fitness < b.fitness; });
}

bool all_gains_zero(const ChannelState& state) {
    for (double g : state.h_los)
        if (g != 0.0) return false;
    for (double g : state.h_ref)
        if (g != 0.0) return false;
    return true;
}

}  // namespace

GaRun ga_optimize(const Scenario& sc, const ChannelState& state, const GaConfig& config) {
    if (config.population_size < 2) throw std::invalid_argument("ga: population size must be >= 2");
    if (config.elite_count < 1 || config.elite_count >= config.population_size)
        throw std::invalid_argument("ga: elite count must be in [1, population size)");
    if (config.generations < 1 || config.restart_rounds < 1)
        throw std::invalid_argument("ga: generations and restart rounds must be >= 1");

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_s = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    GaContext ctx(sc, state, config);
    GaRun run;
    run.degenerate = all_gains_zero(state);

    std::vector<Evaluated> pop;
    pop.reserve(config.population_size);
    for (const NomaDesign& d : config.warm_starts) {
        if (static_cast<int>(pop.size()) >= config.population_size) break;
        Chromosome c = repair(encode(d));
        pop.push_back({c, ctx.evaluate(c)});
    }
    while (static_cast<int>(pop.size()) < config.population_size) {
        Chromosome c = ctx.random_chromosome();
        pop.push_back({c, ctx.evaluate(c)});
    }
    sort_by_fitness(pop);

    Evaluated best = pop.front();
    int generation = 0;
    for (int round = 0; round < config.restart_rounds && !run.time_limited; ++round) {
        if (round > 0) {
            // Restart: keep the elites, re-randomize the rest.
            std::vector<Evaluated> fresh(pop.begin(), pop.begin() + config.elite_count);
            while (static_cast<int>(fresh.size()) < config.population_size) {
                Chromosome c = ctx.random_chromosome();
                fresh.push_back({c, ctx.evaluate(c)});
            }
            pop = std::move(fresh);
            sort_by_fitness(pop);
            run.restart_markers.push_back(generation);
        }
        for (int gen = 0; gen < config.generations; ++gen, ++generation) {
            std::vector<Evaluated> next(pop.begin(), pop.begin() + config.elite_count);
            while (static_cast<int>(next.size()) < config.population_size) {
                const Chromosome& p1 = pop[ctx.tournament(pop)].chromosome;
                const Chromosome& p2 = pop[ctx.tournament(pop)].chromosome;
                Chromosome c1 = p1, c2 = p2;
                if (ctx.crossover_roll() < config.crossover_prob)
                    std::tie(c1, c2) = ctx.crossover(p1, p2);
                for (Chromosome* c : {&c1, &c2}) {
                    if (static_cast<int>(next.size()) >= config.population_size) break;
                    ctx.mutate(*c);
                    *c = repair(*c);
                    next.push_back({*c, ctx.evaluate(*c)});
                }
            }
            pop = std::move(next);
            sort_by_fitness(pop);
            if (pop.front().fitness < best.fitness) best = pop.front();
            run.fitness_trace.push_back(pop.front().fitness);
            if (elapsed_s() > config.max_time_s) {
                run.time_limited = true;
                break;
            }
        }
    }

    run.best_design = decode(best.chromosome);
    run.best_fitness = best.fitness;
    run.evaluation_count = ctx.evaluations();
    return run;
}

double search_space_size(int num_users, int num_elements, double power_step, double rho_step) {
    double log10_size = 0.0;
    for (int i = 2; i <= num_users; ++i) log10_size += std::log10(static_cast<double>(i));
    log10_size += num_users * std::log10(1.0 / power_step);
    log10_size += num_elements * std::log10(1.0 / rho_step);
    if (log10_size > 308.0) return std::numeric_limits<double>::infinity();
    return std::pow(10.0, log10_size);
}

NomaDesign exhaustive_search(const Scenario& sc, const ChannelState& state, double power_step,
                             double rho_step, double eval_cap) {
    const int k = state.num_users;
    const int n = state.num_elements;
    if (k < 1) throw std::domain_error("exhaustive search: need at least one user");
    if (power_step <= 0.0 || power_step > 1.0 || rho_step <= 0.0 || rho_step > 1.0)
        throw std::domain_error("exhaustive search: steps must be in (0, 1]");

    const double size = search_space_size(k, n, power_step, rho_step);
    if (!(size <= eval_cap)) throw SearchSpaceError(size, eval_cap);

    const int power_levels = static_cast<int>(std::lround(1.0 / power_step));
    const int rho_levels = static_cast<int>(std::lround(1.0 / rho_step)) + 1;

    // Strictly descending level index tuples, normalized to the power sphere.
    std::vector<std::vector<double>> profiles;
    std::vector<int> pick(k);
    auto emit_profiles = [&](auto&& self, int depth, int max_level) -> void {
        if (depth == k) {
            std::vector<double> prof(k);
            double sum_sq = 0.0;
            for (int i = 0; i < k; ++i) {
                prof[i] = (pick[i] + 1) * power_step;
                sum_sq += prof[i] * prof[i];
            }
            const double inv = 1.0 / std::sqrt(sum_sq);
            for (double& p : prof) p *= inv;
            profiles.push_back(std::move(prof));
            return;
        }
        for (int lvl = max_level; lvl >= k - depth - 1; --lvl) {
            pick[depth] = lvl;
            self(self, depth + 1, lvl - 1);
        }
    };
    emit_profiles(emit_profiles, 0, power_levels - 1);

    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);

    NomaDesign best;
    double best_fitness = std::numeric_limits<double>::infinity();
    std::vector<int> rho_idx(n, 0);
    NomaDesign candidate;
    candidate.rho.assign(n, 0.0);
    candidate.power.assign(k, 0.0);
    do {
        candidate.decoding_order = order;
        for (const auto& prof : profiles) {
            for (int i = 0; i < k; ++i) candidate.power[order[i]] = prof[i];
            std::fill(rho_idx.begin(), rho_idx.end(), 0);
            while (true) {
                for (int e = 0; e < n; ++e) candidate.rho[e] = std::min(1.0, rho_idx[e] * rho_step);
                const double fitness = union_bound_ber(candidate, state, sc).first_user_bound;
                if (fitness < best_fitness) {
                    best_fitness = fitness;
                    best = candidate;
                }
                int e = 0;
                for (; e < n; ++e) {
                    if (++rho_idx[e] < rho_levels) break;
                    rho_idx[e] = 0;
                }
                if (e == n) break;
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));

    return best;
}

}  // namespace vlcsim
