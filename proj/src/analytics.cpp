#include "mimosec/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace mimosec {

namespace {

double log2p(double x) { return std::log2(x); }

}  // namespace

RateReport rate_no_training_jamming(const SystemConfig& cfg, double m, int user) {
    const auto rec = mmse_coefficients(cfg, EstimatorRegime::NoJam);
    const double rho_k = cfg.rho_user(user);
    const double frac = cfg.data_fraction();

    RateReport rep;
    rep.formula = "no_training_jamming";
    rep.signal_term =
        frac * log2p(1.0 + m * rho_k * rec.a / (cfg.rho_f() + cfg.rho_jam() + 1.0));
    rep.leakage_term = frac * log2p(1.0 + cfg.m_e() * rho_k);
    rep.rate = rep.signal_term - rep.leakage_term;
    rep.negative_warning = rep.rate < 0.0;
    rep.dof_ratio = rep.rate / log2p(m);
    return rep;
}

SinrDecomposition sinr_conjugate(const SystemConfig& cfg, double m, int user) {
    const auto rec = mmse_coefficients(cfg, EstimatorRegime::NoJam);
    const double rho_k = cfg.rho_user(user);
    SinrDecomposition d;
    d.var_t0 = m * rho_k * rec.a;
    d.var_t1 = rho_k;
    d.var_t2 = cfg.rho_f() - rho_k;
    d.var_t3 = cfg.rho_jam() + 1.0;
    d.sinr = d.var_t0 / (d.var_t1 + d.var_t2 + d.var_t3);
    return d;
}

double leakage_delta_conjugate(const SystemConfig& cfg, double m, double delta,
                               int user) {
    return cfg.data_fraction() *
           log2p(1.0 + cfg.m_e() * cfg.rho_user(user) / std::pow(m, delta));
}

double decodable_rate_delta(const SystemConfig& cfg, double m, double delta,
                            int user) {
    const auto rec = mmse_coefficients(cfg, EstimatorRegime::NoJam);
    const double rho_k = cfg.rho_user(user);
    const double num = std::pow(m, 1.0 - delta) * rec.a * rho_k;
    // Conservative interference denominator: exact inverse of the V(R)
    // antenna threshold, and the decodable term at delta = 0.
    const double den = cfg.rho_f() + cfg.rho_jam() + 1.0;
    return cfg.data_fraction() * log2p(1.0 + num / den);
}

double pilot_matching_rate_limit(const SystemConfig& cfg) {
    if (cfg.rho_jam() <= 0.0)
        throw ParameterError("pilot-matching limit needs rho_jam > 0");
    return std::max(0.0, log2p(cfg.rho_r() / cfg.rho_jam()));
}

double lln_rate_bound_sample(double v, double w, double rho_k, double m) {
    if (v < 0.0 || w < 0.0 || m < 1.0)
        throw ParameterError("lln_rate_bound_sample needs v, w >= 0 and M >= 1");
    const double diff = log2p(1.0 / m + rho_k * v) - log2p(1.0 / m + rho_k * w);
    return std::max(0.0, diff);
}

RateReport defense_rate(const SystemConfig& cfg, double m, int user) {
    const double tr = static_cast<double>(cfg.t_train());
    const double rr = cfg.rho_r();
    const double rj = cfg.rho_jam();
    const double rho_k = cfg.rho_user(user);
    const double frac = cfg.data_fraction();
    const double den_est = rr * tr + rj + 1.0;

    RateReport rep;
    rep.formula = "defense_rate";
    rep.signal_term = frac * log2p(1.0 + m * rho_k * rr * tr /
                                             ((cfg.rho_f() + rj + 1.0) * den_est));
    rep.leakage_term =
        frac * log2p(1.0 + cfg.m_e() * rho_k + cfg.m_e() * m * rho_k * rj / den_est);
    rep.clamped = true;
    rep.rate = std::max(0.0, rep.signal_term - rep.leakage_term);
    rep.dof_ratio = rep.rate / log2p(m);
    return rep;
}

double defense_dof_lower_bound(const SystemConfig& cfg, double gamma, double epsilon) {
    if (gamma <= 0.0 || epsilon < 0.0)
        throw ParameterError("defense_dof_lower_bound needs gamma > 0 and epsilon >= 0");
    return cfg.data_fraction() * std::min(1.0, gamma) - epsilon;
}

double defense_leakage_delta(const SystemConfig& cfg, double m, double delta,
                             double gamma, int user) {
    if (delta + gamma <= 1.0)
        throw ParameterError("defense leakage requires delta + gamma > 1");
    const double rho_k = cfg.rho_user(user);
    const double term1 = cfg.m_e() * rho_k / std::pow(m, delta);
    const double term2 = cfg.rho_jam() > 0.0
                             ? std::pow(m, 1.0 - delta - gamma) * cfg.m_e() * rho_k *
                                   cfg.rho_jam() / cfg.rho_r()
                             : 0.0;
    return cfg.data_fraction() * log2p(1.0 + term1 + term2);
}

}  // namespace mimosec
