#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mimosec/analytics.hpp"
#include "mimosec/precoding.hpp"

namespace mimosec {

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// One Monte-Carlo point estimate with its analytic target, when known.
/// z = (estimate - target) / stderr is the verification statistic.
struct McEstimate {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    long long trials = 0;
    std::optional<double> target;

    double z_score() const {
        return target && std_error > 0.0 ? (estimate - *target) / std_error : 0.0;
    }
};

/// Accumulates a scalar sample stream in trial order.
class RunningStats {
public:
    void add(double x) {
        ++n_;
        sum_ += x;
        sum2_ += x * x;
    }
    long long count() const { return n_; }
    double mean() const { return n_ ? sum_ / static_cast<double>(n_) : 0.0; }
    double variance() const {
        if (n_ < 2) return 0.0;
        const double m = mean();
        return std::max(0.0, (sum2_ - static_cast<double>(n_) * m * m) /
                                 static_cast<double>(n_ - 1));
    }
    double std_error() const {
        return n_ >= 2 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }
    McEstimate estimate(std::string name, std::optional<double> target = {}) const {
        return {std::move(name), mean(), std_error(), n_, target};
    }

private:
    long long n_ = 0;
    double sum_ = 0.0;
    double sum2_ = 0.0;
};

/// First/second estimator moments vs the coefficient record:
/// E|Hhat_km|^2, E[Hhat_km^* H_em], E[Hhat_k Hhat_l^*] for k != l.
std::vector<McEstimate> mc_estimator_moments(const SystemConfig& cfg,
                                             EstimatorRegime regime, long long trials,
                                             const SeedPath& seed, int target_user = 0);

/// Empirical signal/interference variance split of the conjugate-beamformed
/// receive, compared term-by-term with sinr_conjugate.
struct McSinrResult {
    McEstimate var_t0, var_t1, var_t2, var_t3;
    double empirical_sinr = 0.0;
    double analytic_sinr = 0.0;
};
McSinrResult mc_sinr(const SystemConfig& cfg, long long blocks, const SeedPath& seed,
                     int user = 0);

/// Leakage moments in the no-jam regime: (1/M) E|Hhat_k H_e^*|^2 vs alpha_k,
/// and per-symbol adversary receive power under delta-conjugate vs
/// M_e rho_k / M^delta.
struct McLeakageResult {
    McEstimate cross_moment;   ///< (1/M) E|Hhat_k H_em^*|^2, target a
    McEstimate adv_power;      ///< adversary symbol power, target M_e rho_k / M^delta
    McEstimate independence;   ///< Re E[Hhat_km H_em^*], target 0
};
McLeakageResult mc_leakage(const SystemConfig& cfg, double delta, long long trials,
                           const SeedPath& seed, int user = 0);

/// LLN trajectories of v_k, w_k and the large-M rate-bound estimate
/// over an antenna grid (pilot-matching regime).
struct McLlnPoint {
    double m = 0.0;
    LlnStats stats;
    double k_m_diag = 0.0;  ///< sampled mean of K_M = ||H_e Hhat_k^*||^2 / M^2 (diagnostic)
};
std::vector<McLlnPoint> mc_lln(const SystemConfig& cfg, const std::vector<int>& m_grid,
                               long long trials, const SeedPath& seed, int target_user = 0);

/// First/second cross-moment comparison of (H_e, Hhat_k) vs (H_k, Htilde_k).
struct McDistributionIdentity {
    McEstimate pair_a_cross;    ///< E[Hhat_km^* H_em], target b
    McEstimate pair_b_cross;    ///< E[Htilde_km^* H_km], target b
    McEstimate pair_a_second;   ///< E|Hhat_km|^2, target a^2 + b^2 + c^2
    McEstimate pair_b_second;   ///< E|Htilde_km|^2, target a^2 + b^2 + c^2
    double cross_z = 0.0;       ///< paired z between the two cross moments
    double second_z = 0.0;      ///< paired z between the two second moments
};
McDistributionIdentity mc_distribution_identity(const SystemConfig& cfg, long long trials,
                                                const SeedPath& seed, int target_user = 0);

/// Water-filling power allocation for the M-antenna MISO upper bound:
/// P(q) = (lambda - 1/q)^+ with E[P(Q)] = rho_f, Q ~ Gamma(M, 1).
struct WaterfillingSolution {
    double lambda = 0.0;          ///< water level lambda_M
    double residual = 0.0;        ///< |E[P(Q)] - rho_f| at the solution
    double capacity = 0.0;        ///< C = (T_d/T) E[log2(1 + P(Q) Q)]
    int m = 0;
    double rho_f = 0.0;
};
WaterfillingSolution solve_waterfilling(int m, double rho_f, double data_fraction,
                                        double tolerance = 1e-8);

/// Full airsim -> estimation -> precoding -> data-phase composition,
/// with empirical SINR-implied rates against the matching closed form.
struct McEndToEnd {
    McEstimate decodable_rate;   ///< empirical (T_d/T) log2(1 + SINR_hat)
    McEstimate leakage_power;    ///< adversary per-symbol receive power for the target
    double empirical_sinr = 0.0;
    double analytic_rate = 0.0;
};
/// Per-block observer: (block, |signal|^2, |residual|^2, leakage sample).
using BlockSink = std::function<void(long long, double, double, double)>;

McEndToEnd mc_end_to_end(const SystemConfig& cfg, const AttackSpec& attack,
                         bool defense, double delta, long long blocks,
                         const SeedPath& seed, int user = 0,
                         const BlockSink& sink = {});

}  // namespace mimosec
