#pragma once

#include <string>

#include "mimosec/config.hpp"
#include "mimosec/estimation.hpp"

namespace mimosec {

/// Closed-form per-user secure rate with its component breakdown.
/// All rates in bits per channel use. clamped marks formulas that carry
/// [.]^+; where the source formula has no clamp, a negative rate is
/// reported as-is with negative_warning set.
struct RateReport {
    double rate = 0.0;
    double signal_term = 0.0;       ///< decodable-rate logarithm term
    double leakage_term = 0.0;      ///< adversary-leakage logarithm term
    double dof_ratio = 0.0;         ///< rate / log2(M)
    bool clamped = false;
    bool negative_warning = false;
    std::string formula;
};

/// Conjugate-beamforming SINR with the received-signal variance split.
struct SinrDecomposition {
    double var_t0 = 0.0;  ///< M rho_k a (signal)
    double var_t1 = 0.0;  ///< rho_k (beamforming self-fluctuation)
    double var_t2 = 0.0;  ///< sum_{j != k} rho_j (inter-user)
    double var_t3 = 0.0;  ///< rho_jam + 1 (jam + noise)
    double sinr = 0.0;
};

/// No-training-phase-jamming secure rate for user k:
/// (T_d/T) [log2(1 + M rho_k a / (rho_f + rho_jam + 1)) - log2(1 + M_e rho_k)].
/// No clamp; negatives are flagged, not hidden.
RateReport rate_no_training_jamming(const SystemConfig& cfg, double m, int user = 0);

/// Variance decomposition of the conjugate-beamformed receive (no-jam regime).
SinrDecomposition sinr_conjugate(const SystemConfig& cfg, double m, int user = 0);

/// Deterministic-code leakage under delta-conjugate beamforming:
/// (T_d/T) log2(1 + M_e rho_k / M^delta).
double leakage_delta_conjugate(const SystemConfig& cfg, double m, double delta,
                               int user = 0);

/// Decodable-rate bound under delta-conjugate beamforming:
/// (T_d/T) log2(1 + M^{1-delta} a rho_k / (rho_f + rho_jam + 1)).
/// This is the exact functional inverse of the V(R) antenna threshold.
double decodable_rate_delta(const SystemConfig& cfg, double m, double delta,
                            int user = 0);

/// Large-M limit of the pilot-matching achievable rate:
/// [log2(a^2 / b^2)]^+ = [log2(rho_r / rho_jam)]^+ with the matching
/// estimator coefficients.
double pilot_matching_rate_limit(const SystemConfig& cfg);

/// One sample of the pilot-matching rate bound:
/// [log2(1/M + rho_k v) - log2(1/M + rho_k w)]^+ (caller applies T_d/T).
double lln_rate_bound_sample(double v, double w, double rho_k, double m);

/// Randomized-pilot defense rate (L = T_r), exactly J-invariant.
RateReport defense_rate(const SystemConfig& cfg, double m, int user = 0);

/// Defense DoF lower bound: (T_d/T) min(1, gamma) - epsilon.
double defense_dof_lower_bound(const SystemConfig& cfg, double gamma, double epsilon);

/// Defense leakage under delta-conjugate beamforming, requires delta + gamma > 1:
/// (T_d/T) log2(1 + M_e rho_k / M^delta + M^{1-delta-gamma} M_e rho_k rho_jam / rho_r).
double defense_leakage_delta(const SystemConfig& cfg, double m, double delta,
                             double gamma, int user = 0);

/// Sample statistics for the law-of-large-numbers rate-bound quantities.
struct LlnStats {
    double v_mean = 0.0;       ///< sample mean of v_k = |H_k Hhat_k^*|^2 / (alpha_k M^2)
    double w_mean = 0.0;       ///< sample mean of w_k (tilde channel in place of Hhat)
    double v_limit = 0.0;      ///< gamma_k / alpha_k
    double w_limit = 0.0;      ///< |E[H_em Hhat_km^*]|^2 / alpha_k
    double gamma_k = 0.0;      ///< |E[H_km Hhat_km^*]|^2
    double pi_k = 0.0;         ///< E|H_km Hhat_km^*|^2
    double bound_estimate = 0.0;  ///< (T_d/T) E[lln_rate_bound_sample]
};

}  // namespace mimosec
