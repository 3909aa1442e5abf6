#pragma once

#include <cstdint>
#include <vector>

#include "vlcsim/noma.hpp"

namespace vlcsim {

/// GA genome: a decoding-order permutation followed by per-user power genes
/// and per-element reflection genes.
struct Chromosome {
    std::vector<int> order_genes;
    std::vector<double> power_genes;
    std::vector<double> rho_genes;

    bool operator==(const Chromosome& o) const = default;
};

struct GaConfig {
    int population_size{100};
    int generations{50};
    int restart_rounds{5};
    double crossover_prob{0.9};
    double mutation_prob{0.05};
    int elite_count{10};
    double max_time_s{60.0};
    std::uint64_t seed{1};
    /// Designs injected into the initial population (after repair). The best
    /// result can therefore never be worse than any warm start.
    std::vector<NomaDesign> warm_starts;
};

struct GaRun {
    NomaDesign best_design;
    double best_fitness{1.0};
    std::vector<double> fitness_trace;     // best-in-population per generation
    std::vector<int> restart_markers;      // generation index where each restart began
    long long evaluation_count{0};
    bool degenerate{false};                // no design beat a coin flip
    bool time_limited{false};              // stopped by the wall-clock budget
};

/// Minimum spacing enforced between consecutive ordered powers so the strict
/// SIC ordering holds with a numeric witness.
inline constexpr double kPowerGap = 1e-6;

NomaDesign decode(const Chromosome& c);
Chromosome encode(const NomaDesign& d);

/// Project a chromosome onto the constraint set: clamp reflection genes to
/// [0, 1], make the power genes positive, strictly descending along the
/// decoding order and normalized to unit squared sum. Valid chromosomes are
/// returned unchanged, which makes the operation idempotent.
Chromosome repair(const Chromosome& c);

/// Adaptive-restart genetic algorithm over (order, power, rho). Each round is
/// a tournament-selection GA with elitism; the next round restarts from the
/// elite chromosomes plus fresh random fill. Deterministic for a fixed seed.
GaRun ga_optimize(const Scenario& sc, const ChannelState& state, const GaConfig& config);

/// Grid search over every decoding order, every strictly-descending power
/// profile at `power_step` resolution (normalized to the power constraint)
/// and every reflection grid at `rho_step` resolution. Throws
/// SearchSpaceError when the nominal grid K! * (1/power_step)^K *
/// (1/rho_step)^N exceeds `eval_cap`.
NomaDesign exhaustive_search(const Scenario& sc, const ChannelState& state, double power_step,
                             double rho_step, double eval_cap = 1e7);

/// Nominal search-space size of the grid above (the refusal metric).
double search_space_size(int num_users, int num_elements, double power_step, double rho_step);

}  // namespace vlcsim
