#pragma once

#include "mimosec/estimation.hpp"

namespace mimosec {

struct DegenerateEstimate : std::logic_error {
    explicit DegenerateEstimate(const std::string& what) : std::logic_error(what) {}
};

enum class BeamformerKind { Conjugate, DeltaConjugate };

/// Per-user data symbol streams for one block's data phase.
struct SymbolBlock {
    CMatrix s;                       // K x t_uses
    std::vector<double> budgets;     // per-user power budgets rho_k
};

/// M-antenna channel input sequence.
struct ChannelInput {
    CMatrix x;  // M x t_uses
    BeamformerKind kind = BeamformerKind::Conjugate;
    double delta = 0.0;
};

/// Per-user / total average-power audit against the budgets.
struct PowerReport {
    std::vector<double> per_user_power;
    std::vector<bool> per_user_flag;
    double total_power = 0.0;
    bool total_flag = false;
    double tolerance_sigmas = 3.0;
};

/// i.i.d. CN(0, rho_k) Gaussian symbol surrogates, t_uses per user.
SymbolBlock sample_symbols(const SystemConfig& cfg, long long t_uses,
                           const SeedPath& seed, std::uint64_t block = 0);

/// X = sum_k s_k Hhat_k^* / sqrt(M alpha_k).
ChannelInput conjugate_precode(const ChannelEstimate& estimate, const SymbolBlock& symbols);

/// X = sum_k s_k Hhat_k^* / sqrt(M^{1+delta} alpha_k); delta = 0 recovers
/// conjugate beamforming exactly.
ChannelInput delta_conjugate_precode(const ChannelEstimate& estimate,
                                     const SymbolBlock& symbols, double delta);

/// Flags per-user average symbol power beyond budget and total ||X||^2
/// beyond rho_f, at a Monte-Carlo 3-sigma tolerance.
PowerReport audit_power(const ChannelInput& input, const SymbolBlock& symbols,
                        const SystemConfig& cfg);

}  // namespace mimosec
