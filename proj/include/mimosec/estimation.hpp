#pragma once

#include "mimosec/airsim.hpp"
#include "mimosec/config.hpp"

namespace mimosec {

enum class EstimatorRegime {
    NoJam,          ///< silent training: Hhat_k = a H_k + b V_k
    PilotMatching,  ///< target: a H_k + b H_e + c V_k, others: d H_l + e V_l
    RandomSubset    ///< randomized pilots: x1 (sqrt(T_r rho_r) H_k + Pi ... + V_k)
};

/// Closed-form MMSE coefficients for the estimator in force. alpha_k is
/// always the per-element second moment E|Hhat_{k_m}|^2 of the estimate,
/// so precoding needs no regime-specific logic.
struct CoefficientRecord {
    EstimatorRegime regime = EstimatorRegime::NoJam;
    int target_user = -1;  ///< PilotMatching target, -1 otherwise

    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;  ///< non-target channel coefficient (PilotMatching)
    double e = 0.0;  ///< non-target noise coefficient (PilotMatching)
    double x1 = 0.0; ///< RandomSubset normalization

    double alpha_target = 0.0;     ///< E|Hhat_{k_m}|^2 for the (possibly) targeted user
    double alpha_nontarget = 0.0;  ///< same for every other user

    double alpha(int user) const {
        if (regime == EstimatorRegime::PilotMatching && user != target_user)
            return alpha_nontarget;
        return alpha_target;
    }
};

/// Estimated channels plus the analytic record they follow.
struct ChannelEstimate {
    CMatrix hhat;  // K x M
    CoefficientRecord record;
    bool target_hit = false;  ///< the block's Pi indicator (RandomSubset)
};

/// Pure closed-form coefficient arithmetic for the given regime.
CoefficientRecord mmse_coefficients(const SystemConfig& cfg, EstimatorRegime regime,
                                    int target_user = -1);

/// Projection + scaling of the training observation onto each user's pilot.
/// The record must describe the regime that produced y_tr.
ChannelEstimate estimate_channels(const SystemConfig& cfg, const TrainingObservation& obs,
                                  const PilotSet& pilots, const PilotAssignment& assign,
                                  const CoefficientRecord& record);

/// Matched-statistics surrogate: b H_k + a H_e + c V with fresh CN(0, I) V.
/// Only defined for a pilot-matching record.
CRowVector construct_tilde_channel(const SystemConfig& cfg, const BlockChannels& ch,
                                   const CoefficientRecord& record, const SeedPath& seed);

}  // namespace mimosec
