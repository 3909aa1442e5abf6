#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vlcsim/channel.hpp"

namespace vlcsim {

/// Unipolar amplitude constellation with unit average symbol power.
struct Constellation {
    int order{2};
    std::vector<double> symbols;  // strictly increasing, non-negative

    static Constellation pam(int order);

    /// Gray code of a symbol index; adjacent levels differ in one bit.
    static unsigned gray(unsigned index) { return index ^ (index >> 1); }
    int bits_per_symbol() const;
};

/// Decision variable of the joint design: decoding order, per-user power
/// coefficients and the reflection coefficient vector.
struct NomaDesign {
    std::vector<int> decoding_order;  // decoding_order[i] = user decoded i-th
    std::vector<double> power;        // indexed by user
    std::vector<double> rho;          // indexed by element, each in [0, 1]

    int num_users() const { return static_cast<int>(decoding_order.size()); }
    int position_of(int user) const;
};

struct ObjectiveReport {
    double first_user_bound{0.0};         // user in the first decoding position
    double target_bound{0.0};             // requested user (first when unspecified)
    std::vector<double> per_user_bounds;  // indexed by user, perfect-SIC assumption
    long long evaluations_tau{0};         // (x, x_hat, interferer tuple) combinations
};

/// Gaussian tail probability Q(x) via the complementary error function.
double q_function(double x);

/// Geometric fixed power allocation along the decoding order, normalized so
/// the squared coefficients sum to one. Entry i is the power of the user in
/// decoding position i.
std::vector<double> fpa_power_allocation(int num_users, double alpha);

/// Interference seen by `user` inside the SIC receiver: residuals of
/// earlier-decoded users plus the untouched signals of later-decoded users.
/// `symbols` and `detected` are indexed by user; `detected` entries for users
/// decoded after `user` are ignored.
double sic_interference(const NomaDesign& design, int user, const std::vector<double>& symbols,
                        const std::vector<double>& detected);

/// Conditional pairwise error probability Q(q/(2*sigma) * (P*delta + 2*X)).
double pairwise_error_probability(double gain, double noise_std, double power, double delta,
                                  double interference);

/// Empty when the design satisfies the power ordering, reflection range and
/// power normalization constraints; otherwise one entry per violation.
std::vector<std::string> check_constraints(const NomaDesign& design);

/// Union-bound BER of the user in the given decoding position (default:
/// first). Averages the pairwise error probability over every own-symbol
/// error pair and every combination of later-decoded users' symbols, and
/// divides the symbol bound by the bits per symbol.
ObjectiveReport union_bound_ber(const NomaDesign& design, const ChannelState& state,
                                const Scenario& sc, std::optional<int> target_user = std::nullopt);

}  // namespace vlcsim
