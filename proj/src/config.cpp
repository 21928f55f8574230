#include "mimosec/config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mimosec {

SystemConfig::SystemConfig(SystemParams p) : p_(std::move(p)) {
    t_data_ = p_.t_block - p_.t_train;
    rho_f_ = std::accumulate(p_.rho_users.begin(), p_.rho_users.end(), 0.0);
    rho_max_ = *std::max_element(p_.rho_users.begin(), p_.rho_users.end());
    rho_min_ = *std::min_element(p_.rho_users.begin(), p_.rho_users.end());
}

SystemConfig SystemConfig::validate(const SystemParams& raw) {
    if (raw.m < 1) throw ViolatedInvariant("m must be >= 1");
    if (raw.m_e < 0) throw ViolatedInvariant("m_e must be >= 0");
    if (raw.k_users < 1) throw ViolatedInvariant("k_users must be >= 1");
    if (raw.t_train < 1) throw ViolatedInvariant("t_train must be >= 1");
    if (raw.t_block <= raw.t_train) throw ViolatedInvariant("t_block must exceed t_train");
    if (raw.rho_r < 0) throw ViolatedInvariant("rho_r must be >= 0");
    if (raw.rho_jam < 0) throw ViolatedInvariant("rho_jam must be >= 0");
    if (raw.delta < 0) throw ViolatedInvariant("delta must be >= 0");
    if (raw.gamma <= 0) throw ViolatedInvariant("gamma must be > 0");
    if (raw.rho_users.size() != static_cast<std::size_t>(raw.k_users))
        throw ViolatedInvariant("rho_users must list one power per user");
    for (double r : raw.rho_users)
        if (r < 0 || !std::isfinite(r)) throw ViolatedInvariant("per-user powers must be finite and >= 0");
    if (raw.l_pilots < raw.k_users)
        throw ViolatedInvariant("pilot set must cover all users (L >= K)");
    if (raw.l_pilots > raw.t_train)
        throw DimensionError("orthogonal pilots cannot exceed the training dimension (L <= T_r)");
    if (raw.j_subset < 1 || raw.j_subset > raw.l_pilots)
        throw ViolatedInvariant("jammed subset size must satisfy 1 <= J <= L");
    return SystemConfig(raw);
}

void AttackSpec::check(const SystemConfig& cfg) const {
    if (kind == AttackKind::PilotMatching || kind == AttackKind::RandomSubsetJam) {
        if (target_user < 0 || target_user >= cfg.k_users())
            throw AttackMismatch("attack target user out of range");
    }
    if (jams_training_phase() && cfg.m_e() < 1)
        throw AttackMismatch("training-phase jamming needs at least one adversary antenna");
}

}  // namespace mimosec
