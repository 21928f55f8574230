#include "mimosec/precoding.hpp"

#include <cmath>

namespace mimosec {

SymbolBlock sample_symbols(const SystemConfig& cfg, long long t_uses,
                           const SeedPath& seed, std::uint64_t block) {
    Rng rng(seed / "symbols" / block);
    SymbolBlock sb;
    sb.budgets = cfg.rho_users();
    sb.s.resize(cfg.k_users(), t_uses);
    for (int k = 0; k < cfg.k_users(); ++k) {
        const double rho = sb.budgets[k];
        for (long long t = 0; t < t_uses; ++t)
            sb.s(k, t) = rho > 0.0 ? rng.cgaussian(rho) : std::complex<double>(0.0, 0.0);
    }
    return sb;
}

ChannelInput delta_conjugate_precode(const ChannelEstimate& estimate,
                                     const SymbolBlock& symbols, double delta) {
    const auto k_users = estimate.hhat.rows();
    const auto m = estimate.hhat.cols();
    if (symbols.s.rows() != k_users)
        throw DimensionError("symbol block does not match the estimate's user count");

    ChannelInput in;
    in.kind = delta == 0.0 ? BeamformerKind::Conjugate : BeamformerKind::DeltaConjugate;
    in.delta = delta;
    in.x = CMatrix::Zero(m, symbols.s.cols());
    const double m_pow = std::pow(static_cast<double>(m), 1.0 + delta);
    for (Eigen::Index k = 0; k < k_users; ++k) {
        const double alpha = estimate.record.alpha(static_cast<int>(k));
        if (alpha <= 0.0)
            throw DegenerateEstimate("alpha_k must be positive for beamforming");
        in.x.noalias() +=
            estimate.hhat.row(k).adjoint() * symbols.s.row(k) / std::sqrt(m_pow * alpha);
    }
    return in;
}

ChannelInput conjugate_precode(const ChannelEstimate& estimate, const SymbolBlock& symbols) {
    return delta_conjugate_precode(estimate, symbols, 0.0);
}

PowerReport audit_power(const ChannelInput& input, const SymbolBlock& symbols,
                        const SystemConfig& cfg) {
    PowerReport rep;
    const auto n = symbols.s.cols();
    rep.per_user_power.resize(symbols.s.rows());
    rep.per_user_flag.resize(symbols.s.rows());
    for (Eigen::Index k = 0; k < symbols.s.rows(); ++k) {
        double mean = 0.0, mean2 = 0.0;
        for (Eigen::Index t = 0; t < n; ++t) {
            const double p = std::norm(symbols.s(k, t));
            mean += p;
            mean2 += p * p;
        }
        mean /= static_cast<double>(n);
        mean2 /= static_cast<double>(n);
        const double se = std::sqrt(std::max(0.0, mean2 - mean * mean) /
                                    static_cast<double>(n));
        rep.per_user_power[k] = mean;
        rep.per_user_flag[k] =
            mean > symbols.budgets[k] + rep.tolerance_sigmas * se + 1e-12;
    }

    double mean = 0.0, mean2 = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double p = input.x.col(t).squaredNorm();
        mean += p;
        mean2 += p * p;
    }
    mean /= static_cast<double>(n);
    mean2 /= static_cast<double>(n);
    const double se =
        std::sqrt(std::max(0.0, mean2 - mean * mean) / static_cast<double>(n));
    rep.total_power = mean;
    rep.total_flag = mean > cfg.rho_f() + rep.tolerance_sigmas * se + 1e-12;
    return rep;
}

}  // namespace mimosec
