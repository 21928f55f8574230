#include "mimosec/estimation.hpp"

#include <cmath>

namespace mimosec {

CoefficientRecord mmse_coefficients(const SystemConfig& cfg, EstimatorRegime regime,
                                    int target_user) {
    CoefficientRecord rec;
    rec.regime = regime;
    const double tr = static_cast<double>(cfg.t_train());
    const double rr = cfg.rho_r();
    const double rj = cfg.rho_jam();

    switch (regime) {
        case EstimatorRegime::NoJam: {
            const double den = rr * tr + 1.0;
            rec.a = rr * tr / den;
            rec.b = std::sqrt(rr * tr) / den;
            rec.alpha_target = rec.a;
            rec.alpha_nontarget = rec.a;
            break;
        }
        case EstimatorRegime::PilotMatching: {
            if (target_user < 0 || target_user >= cfg.k_users())
                throw RegimeMismatch("pilot-matching coefficients need a valid target user");
            rec.target_user = target_user;
            const double den = tr * rr + 1.0 + tr * rj;
            rec.a = tr * rr / den;
            rec.b = tr * std::sqrt(rr * rj) / den;
            rec.c = std::sqrt(tr * rr) / den;
            rec.d = tr * rr / (tr * rr + 1.0);
            rec.e = std::sqrt(tr * rr) / (tr * rr + 1.0);
            // a^2 + b^2 + c^2 collapses to T_r rho_r / den.
            rec.alpha_target = tr * rr / den;
            rec.alpha_nontarget = rec.d;
            break;
        }
        case EstimatorRegime::RandomSubset: {
            const double j = static_cast<double>(cfg.j_subset());
            const double l = static_cast<double>(cfg.l_pilots());
            rec.x1 = 1.0 / (std::sqrt(static_cast<double>(cfg.m())) *
                            std::sqrt(tr * rr + 1.0 + tr * rj / j));
            // Per-element second moment over the Pi ~ Bernoulli(J/L) mixture;
            // the jam term contributes T_r rho_jam / L, so alpha reduces to
            // exactly 1/M when J = L.
            rec.alpha_target = rec.x1 * rec.x1 * (tr * rr + 1.0 + tr * rj / l);
            rec.alpha_nontarget = rec.alpha_target;
            break;
        }
    }
    return rec;
}

ChannelEstimate estimate_channels(const SystemConfig& cfg, const TrainingObservation& obs,
                                  const PilotSet& pilots, const PilotAssignment& assign,
                                  const CoefficientRecord& record) {
    if (obs.y_tr.rows() != cfg.m() || obs.y_tr.cols() != cfg.t_train())
        throw DimensionError("training observation dimensions disagree with config");
    if (static_cast<int>(assign.pilot_of_user.size()) != cfg.k_users())
        throw RegimeMismatch("assignment does not cover all users");

    const double tr = static_cast<double>(cfg.t_train());
    const double rr = cfg.rho_r();

    ChannelEstimate est;
    est.record = record;
    est.target_hit = obs.target_hit;
    est.hhat.resize(cfg.k_users(), cfg.m());

    for (int k = 0; k < cfg.k_users(); ++k) {
        // Project onto the user's pilot; Y_tr phi_k^H isolates
        // T_r rho_r H_k^T plus whatever rode on the same pilot.
        const CVector proj =
            obs.y_tr * pilots.phi.row(assign.pilot_of_user[k]).adjoint();

        double scale = 0.0;
        switch (record.regime) {
            case EstimatorRegime::NoJam:
                scale = 1.0 / (rr * tr + 1.0);
                break;
            case EstimatorRegime::PilotMatching:
                scale = (k == record.target_user)
                            ? 1.0 / (tr * rr + 1.0 + tr * cfg.rho_jam())
                            : 1.0 / (tr * rr + 1.0);
                break;
            case EstimatorRegime::RandomSubset:
                scale = record.x1 / std::sqrt(tr * rr);
                break;
        }
        est.hhat.row(k) = scale * proj.transpose();
    }
    return est;
}

CRowVector construct_tilde_channel(const SystemConfig& cfg, const BlockChannels& ch,
                                   const CoefficientRecord& record, const SeedPath& seed) {
    if (record.regime != EstimatorRegime::PilotMatching)
        throw RegimeMismatch("tilde channel is only defined for the pilot-matching regime");
    Rng rng(seed / "tilde" / ch.block);
    CRowVector v(cfg.m());
    for (int m = 0; m < cfg.m(); ++m) v(m) = rng.cgaussian(1.0);
    return record.b * ch.h.row(record.target_user) + record.a * ch.h_e.row(0) +
           record.c * v;
}

}  // namespace mimosec
