#include "vlcsim/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "vlcsim/errors.hpp"
#include "vlcsim/parallel.hpp"
#include "vlcsim/rng.hpp"

namespace vlcsim {

namespace {

constexpr long long kBlockSize = 1000;
constexpr std::uint64_t kMcStreamTag = 0x6d63;  // "mc"

struct BlockCounts {
    std::vector<long long> bit_errors;
    std::vector<long long> symbol_errors;
};

int min_distance_detect(double residual, double scale, const std::vector<double>& symbols) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < static_cast<int>(symbols.size()); ++c) {
        const double d = residual - scale * symbols[c];
        const double d2 = d * d;
        if (d2 < best_d) {
            best_d = d2;
            best = c;
        }
    }
    return best;
}

double binomial_cdf(long long k, long long n, double p) {
    // Sum of the first k+1 binomial terms in log space; only used for k < 10.
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return k >= n ? 1.0 : 0.0;
    double sum = 0.0;
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (long long i = 0; i <= k; ++i) {
        const double lc = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
        sum += std::exp(lc + i * lp + (n - i) * lq);
    }
    return std::min(sum, 1.0);
}

double solve_p(long long k, long long n, double target_cdf) {
    // Find p with P(X <= k; n, p) = target by bisection; CDF decreases in p.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (binomial_cdf(k, n, mid) > target_cdf)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double estimate_confidence(long long errors, long long trials) {
    if (trials < 1) throw std::domain_error("estimate_confidence: need at least one trial");
    if (errors < 0 || errors > trials)
        throw std::domain_error("estimate_confidence: errors outside [0, trials]");
    const double p_hat = static_cast<double>(errors) / static_cast<double>(trials);
    if (errors >= 10)
        return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));

    // Exact Clopper-Pearson; report the largest deviation from the estimate
    // that stays inside the 95% interval. errors = 0 reduces to the
    // rule-of-three upper limit 1 - 0.05^(1/n) ~ 3/n.
    const double alpha = 0.05;
    double lower = 0.0, upper = 1.0;
    if (errors == 0) {
        upper = 1.0 - std::pow(alpha, 1.0 / static_cast<double>(trials));
    } else {
        upper = errors == trials ? 1.0 : solve_p(errors, trials, alpha / 2.0);
        lower = solve_p(errors - 1, trials, 1.0 - alpha / 2.0);
    }
    return std::max(upper - p_hat, p_hat - lower);
}

McResult simulate_ber(const Scenario& sc, const NomaDesign& design, const McConfig& mc, int jobs) {
    auto violations = check_constraints(design);
    if (!violations.empty()) throw ConstraintError(std::move(violations));
    if (mc.num_symbols < 1) throw std::domain_error("simulate_ber: need at least one symbol");

    Scenario eff = sc;
    if (!std::isnan(mc.transmit_snr_db)) {
        const double sigma = std::pow(10.0, -mc.transmit_snr_db / 20.0);
        std::fill(eff.noise_std.begin(), eff.noise_std.end(), sigma);
    }

    const int k = eff.num_users();
    const Constellation cs = Constellation::pam(eff.modulation_order);
    const int m = cs.order;
    const int bits = cs.bits_per_symbol();

    const ChannelState base_state = build_channel_state(eff);
    std::vector<double> base_q(k);
    for (int u = 0; u < k; ++u) base_q[u] = combined_gain(base_state, design.rho, u);

    const bool resample = mc.resample_orientation || mc.resample_blockage;
    const long long num_blocks = (mc.num_symbols + kBlockSize - 1) / kBlockSize;
    std::vector<BlockCounts> per_block(num_blocks);

    auto run_block = [&](int b) {
        Rng rng = make_stream(mc.seed, {kMcStreamTag, static_cast<std::uint64_t>(b)});
        BlockCounts counts;
        counts.bit_errors.assign(k, 0);
        counts.symbol_errors.assign(k, 0);

        std::vector<double> q = base_q;
        if (resample) {
            Scenario local = eff;
            std::vector<std::uint8_t> blocked(k, 0);
            for (int u = 0; u < k; ++u) {
                if (mc.resample_orientation) {
                    local.ue_orientations[u].polar = sample_polar_angle(local.orientation_model, rng);
                    local.ue_orientations[u].azimuth =
                        local.ue_fixed_azimuth[u] ? *local.ue_fixed_azimuth[u]
                                                  : 2.0 * 3.14159265358979323846 * uniform01(rng);
                }
                if (mc.resample_blockage)
                    blocked[u] = sample_blockage(local.blockage_model, local.horizontal_distance(u),
                                                 rng)
                                     ? 1
                                     : 0;
            }
            const ChannelState state = build_channel_state(local, blocked);
            for (int u = 0; u < k; ++u) q[u] = combined_gain(state, design.rho, u);
        }

        const long long begin = static_cast<long long>(b) * kBlockSize;
        const long long end = std::min(begin + kBlockSize, mc.num_symbols);
        std::uniform_int_distribution<int> draw_symbol(0, m - 1);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<int> tx(k);
        for (long long t = begin; t < end; ++t) {
            double composite = 0.0;
            for (int u = 0; u < k; ++u) {
                tx[u] = draw_symbol(rng);
                composite += design.power[u] * cs.symbols[tx[u]];
            }
            for (int u = 0; u < k; ++u) {
                const double y = q[u] * composite + eff.noise_std[u] * noise(rng);
                double residual = y;
                const int pos = design.position_of(u);
                for (int i = 0; i < pos; ++i) {
                    const int j = design.decoding_order[i];
                    const double scale = q[u] * design.power[j];
                    const int detected = min_distance_detect(residual, scale, cs.symbols);
                    residual -= scale * cs.symbols[detected];
                }
                const int own = min_distance_detect(residual, q[u] * design.power[u], cs.symbols);
                if (own != tx[u]) {
                    ++counts.symbol_errors[u];
                    counts.bit_errors[u] += std::popcount(Constellation::gray(own) ^
                                                          Constellation::gray(tx[u]));
                }
            }
        }
        per_block[b] = std::move(counts);
    };

    parallel_for(jobs, static_cast<int>(num_blocks), run_block);

    McResult result;
    result.symbols_simulated = mc.num_symbols;
    result.bit_errors.assign(k, 0);
    result.symbol_errors.assign(k, 0);
    for (const BlockCounts& c : per_block) {
        for (int u = 0; u < k; ++u) {
            result.bit_errors[u] += c.bit_errors[u];
            result.symbol_errors[u] += c.symbol_errors[u];
        }
    }
    result.per_user_ber.resize(k);
    result.per_user_ser.resize(k);
    result.confidence_halfwidth_95.resize(k);
    result.censored.resize(k);
    const long long bit_trials = mc.num_symbols * bits;
    for (int u = 0; u < k; ++u) {
        result.per_user_ber[u] = static_cast<double>(result.bit_errors[u]) / bit_trials;
        result.per_user_ser[u] =
            static_cast<double>(result.symbol_errors[u]) / static_cast<double>(mc.num_symbols);
        result.confidence_halfwidth_95[u] = estimate_confidence(result.bit_errors[u], bit_trials);
        result.censored[u] = result.bit_errors[u] < 10 ? 1 : 0;
    }
    return result;
}

std::string mc_csv_header() { return "snr_db,user,ber,ser,ci_halfwidth,censored_flag"; }

void append_mc_csv_rows(std::string& out, double snr_db, const McResult& result) {
    char buf[192];
    for (std::size_t u = 0; u < result.per_user_ber.size(); ++u) {
        std::snprintf(buf, sizeof(buf), "%.12g,%zu,%.12g,%.12g,%.12g,%d\n", snr_db, u,
                      result.per_user_ber[u], result.per_user_ser[u],
                      result.confidence_halfwidth_95[u], result.censored[u] ? 1 : 0);
        out += buf;
    }
}

}  // namespace vlcsim
