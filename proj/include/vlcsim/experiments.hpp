#pragma once

#include <string>
#include <vector>

#include "vlcsim/montecarlo.hpp"
#include "vlcsim/optimizer.hpp"

namespace vlcsim {

enum class Strategy { NoIrsFpa, FixedIrsFpa, GaJoint, EsOracle };

std::string strategy_name(Strategy s);

struct EsConfig {
    double power_step{0.05};
    double rho_step{0.25};
    double eval_cap{1e7};
};

struct ExperimentConfig {
    Scenario scenario;

    std::vector<double> snr_sweep;    // ber-vs-snr / validate-bound axis, dB
    std::vector<int> elements_sweep;  // ber-vs-elements axis
    std::vector<Strategy> strategies{Strategy::NoIrsFpa, Strategy::FixedIrsFpa, Strategy::GaJoint};

    GaConfig ga;
    McConfig mc;
    EsConfig es;

    double fpa_alpha{0.3};
    double transmit_snr_db{120.0};  // operating point when not sweeping SNR
    std::string elements_variant{"blockage"};  // "blockage" | "orientation"
    int realizations{100};

    std::uint64_t seed{1};
    int jobs{0};  // 0 = VLCSIM_JOBS or serial
    std::string output_path{"out.csv"};
};

/// Built-in scenario: a 5x5x3 m room, the luminaire at the ceiling center, a
/// 100-element wall grid and three users (one upright below the luminaire,
/// two tilted toward it with the reflector wall behind their field of view).
ExperimentConfig default_config();

/// Parse the JSON experiment file. Missing keys fall back to the defaults
/// above; unknown keys, type mismatches and invariant violations raise
/// distinct diagnostics.
ExperimentConfig load_config(const std::string& path);

/// Fixed-power-allocation baseline: decoding order by ascending combined
/// gain at the given uniform reflection setting, geometric powers.
NomaDesign fpa_baseline_design(const ChannelState& state, double rho_value, double alpha);

/// One CSV per experiment; the string is the full file content. Each runner
/// is deterministic for a fixed config and seed, independent of `jobs`.
std::string run_ber_vs_snr(const ExperimentConfig& cfg);
std::string run_ber_vs_elements(const ExperimentConfig& cfg);
std::string run_convergence(const ExperimentConfig& cfg);
std::string run_validate_bound(const ExperimentConfig& cfg);

void write_file(const std::string& path, const std::string& content);

}  // namespace vlcsim
