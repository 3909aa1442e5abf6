#include "vlcsim/noma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vlcsim/errors.hpp"

namespace vlcsim {

namespace {
constexpr double kPowerSumTol = 1e-9;
}

Constellation Constellation::pam(int order) {
    if (order < 2) throw std::domain_error("constellation order must be at least 2");
    // Levels c*{0, 1, ..., M-1} with c chosen so mean(symbol^2) = 1.
    double sum_sq = 0.0;
    for (int i = 0; i < order; ++i) sum_sq += static_cast<double>(i) * i;
    const double c = std::sqrt(order / sum_sq);
    Constellation cs;
    cs.order = order;
    cs.symbols.resize(order);
    for (int i = 0; i < order; ++i) cs.symbols[i] = c * i;
    return cs;
}

int Constellation::bits_per_symbol() const {
    int bits = 0;
    for (int v = order; v > 1; v >>= 1) ++bits;
    return bits;
}

int NomaDesign::position_of(int user) const {
    for (int i = 0; i < num_users(); ++i)
        if (decoding_order[i] == user) return i;
    throw std::out_of_range("user not present in the decoding order");
}

// Extended precision keeps the relative error below 1e-15 across the whole
// representable tail; in plain double the x/sqrt(2) rounding alone costs
// ~x^2/2 ulp.
double q_function(double x) {
    return static_cast<double>(0.5L * erfcl(static_cast<long double>(x) / sqrtl(2.0L)));
}

std::vector<double> fpa_power_allocation(int num_users, double alpha) {
    if (num_users < 1) throw std::domain_error("fpa: need at least one user");
    if (alpha <= 0.0 || alpha >= 1.0) throw std::domain_error("fpa: alpha must be in (0, 1)");
    std::vector<double> p(num_users);
    double sum_sq = 0.0;
    double cur = 1.0;
    for (int i = 0; i < num_users; ++i) {
        p[i] = cur;
        sum_sq += cur * cur;
        cur *= alpha;
    }
    const double inv = 1.0 / std::sqrt(sum_sq);
    for (double& v : p) v *= inv;
    return p;
}

double sic_interference(const NomaDesign& design, int user, const std::vector<double>& symbols,
                        const std::vector<double>& detected) {
    const int pos = design.position_of(user);
    double x = 0.0;
    for (int i = 0; i < design.num_users(); ++i) {
        const int other = design.decoding_order[i];
        if (i < pos)
            x += design.power[other] * (symbols[other] - detected[other]);
        else if (i > pos)
            x += design.power[other] * symbols[other];
    }
    return x;
}

double pairwise_error_probability(double gain, double noise_std, double power, double delta,
                                  double interference) {
    if (noise_std <= 0.0) throw std::domain_error("pairwise error probability: noise std must be positive");
    return q_function(gain / (2.0 * noise_std) * (power * delta + 2.0 * interference));
}

std::vector<std::string> check_constraints(const NomaDesign& design) {
    std::vector<std::string> violations;
    const int k = design.num_users();

    std::vector<char> seen(k, 0);
    bool perm_ok = static_cast<int>(design.power.size()) == k;
    for (int u : design.decoding_order) {
        if (u < 0 || u >= k || seen[u]) {
            perm_ok = false;
            break;
        }
        seen[u] = 1;
    }
    if (!perm_ok) {
        violations.emplace_back("decoding order is not a permutation of the users");
        return violations;
    }

    bool ordered = true;
    bool positive = true;
    double sum_sq = 0.0;
    for (int i = 0; i < k; ++i) {
        const double p = design.power[design.decoding_order[i]];
        if (p <= 0.0) positive = false;
        if (i > 0 && design.power[design.decoding_order[i - 1]] <= p) ordered = false;
        sum_sq += p * p;
    }
    if (!ordered) violations.emplace_back("power ordering along the decoding order is not strictly decreasing");
    if (!positive) violations.emplace_back("power coefficient not positive");
    if (std::abs(sum_sq - 1.0) > kPowerSumTol)
        violations.emplace_back("squared power coefficients do not sum to one");
    for (double r : design.rho)
        if (r < 0.0 || r > 1.0) {
            violations.emplace_back("reflection coefficient outside [0, 1]");
            break;
        }
    return violations;
}

namespace {

/// Bound for the user in decoding position `pos`, averaging over the symbols
/// of every later-decoded user (earlier users are assumed perfectly removed).
double position_bound(const NomaDesign& design, const Constellation& cs, double gain,
                      double noise_std, int pos, long long* tau_out) {
    if (noise_std <= 0.0) throw std::domain_error("union bound: noise std must be positive");
    const int k = design.num_users();
    const int m = cs.order;
    const int user = design.decoding_order[pos];
    const double p_user = design.power[user];
    const double scale = gain / (2.0 * noise_std);

    const int num_later = k - pos - 1;
    std::vector<int> tuple(num_later, 0);
    double total = 0.0;
    long long tau = 0;
    while (true) {
        double interference = 0.0;
        for (int j = 0; j < num_later; ++j)
            interference += design.power[design.decoding_order[pos + 1 + j]] * cs.symbols[tuple[j]];
        for (int x = 0; x < m; ++x) {
            for (int xh = 0; xh < m; ++xh) {
                if (xh == x) continue;
                const double delta = cs.symbols[x] - cs.symbols[xh];
                const double sign = delta > 0.0 ? 1.0 : -1.0;
                total += q_function(scale * sign * (p_user * delta + 2.0 * interference));
                ++tau;
            }
        }
        int j = 0;
        for (; j < num_later; ++j) {
            if (++tuple[j] < m) break;
            tuple[j] = 0;
        }
        if (j == num_later) break;
    }
    if (tau_out) *tau_out = tau;
    const double symbol_bound = total / static_cast<double>(tau);
    return std::clamp(symbol_bound / cs.bits_per_symbol(), 0.0, 1.0);
}

}  // namespace

ObjectiveReport union_bound_ber(const NomaDesign& design, const ChannelState& state,
                                const Scenario& sc, std::optional<int> target_user) {
    auto violations = check_constraints(design);
    if (!violations.empty()) throw ConstraintError(std::move(violations));
    if (design.num_users() != state.num_users)
        throw std::invalid_argument("union bound: design and channel state disagree on user count");

    const Constellation cs = Constellation::pam(sc.modulation_order);
    const int k = design.num_users();

    ObjectiveReport report;
    report.per_user_bounds.resize(k);
    for (int pos = 0; pos < k; ++pos) {
        const int user = design.decoding_order[pos];
        const double q = combined_gain(state, design.rho, user);
        long long tau = 0;
        const double bound = position_bound(design, cs, q, sc.noise_std[user], pos, &tau);
        report.per_user_bounds[user] = bound;
        if (pos == 0) {
            report.first_user_bound = bound;
            report.evaluations_tau = tau;
        }
    }
    report.target_bound =
        target_user ? report.per_user_bounds.at(*target_user) : report.first_user_bound;
    return report;
}

}  // namespace vlcsim
