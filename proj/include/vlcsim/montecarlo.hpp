#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "vlcsim/noma.hpp"

namespace vlcsim {

struct McConfig {
    long long num_symbols{100000};
    std::uint64_t seed{1};
    bool resample_orientation{false};
    bool resample_blockage{false};
    /// Overrides every user's noise std to 10^(-snr/20) when set (NaN = keep
    /// the scenario values).
    double transmit_snr_db{std::numeric_limits<double>::quiet_NaN()};
};

struct McResult {
    std::vector<double> per_user_ber;
    std::vector<double> per_user_ser;
    std::vector<double> confidence_halfwidth_95;  // on the bit error rate
    std::vector<long long> bit_errors;
    std::vector<long long> symbol_errors;
    std::vector<std::uint8_t> censored;  // fewer than 10 bit errors observed
    long long symbols_simulated{0};
};

/// Symbol-level simulation of the superposed downlink with per-user SIC
/// receivers and true error propagation. Symbols are drawn uniformly; each
/// user detects the higher-power signals in decoding order by minimum
/// distance, subtracts its own estimates, then detects its own symbol.
/// Channel realizations are redrawn per 1000-symbol block when the resample
/// flags are set. Deterministic for a fixed seed, independent of `jobs`.
McResult simulate_ber(const Scenario& sc, const NomaDesign& design, const McConfig& mc,
                      int jobs = 1);

/// 95% half-width of a binomial proportion: normal approximation when at
/// least 10 errors were seen, exact (Clopper-Pearson) otherwise.
double estimate_confidence(long long errors, long long trials);

/// CSV rows (snr_db, user, ber, ser, ci_halfwidth, censored_flag), one per user.
std::string mc_csv_header();
void append_mc_csv_rows(std::string& out, double snr_db, const McResult& result);

}  // namespace vlcsim
